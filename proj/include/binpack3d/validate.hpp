#pragma once

// Independent solution checker. Deliberately shares no geometry with the
// packer: overlap and bounds are computed here from raw placement numbers.

#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "binpack3d/model.hpp"
#include "binpack3d/packer.hpp"

namespace binpack3d {

enum class ViolationKind { bounds, overlap, rotation, coverage, container, fitness };

inline const char* to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::bounds: return "bounds";
    case ViolationKind::overlap: return "overlap";
    case ViolationKind::rotation: return "rotation";
    case ViolationKind::coverage: return "coverage";
    case ViolationKind::container: return "container";
    case ViolationKind::fitness: return "fitness";
  }
  return "?";
}

struct Violation {
  ViolationKind kind;
  std::vector<std::size_t> placements;  // indices into the solution's placement list
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  std::size_t count(ViolationKind k) const {
    return static_cast<std::size_t>(
        std::count_if(violations.begin(), violations.end(), [k](const Violation& v) { return v.kind == k; }));
  }
  std::string describe() const {
    std::ostringstream out;
    for (const auto& v : violations) {
      out << to_string(v.kind) << ':';
      for (auto i : v.placements) out << " #" << i;
      out << ' ' << v.message << '\n';
    }
    return out.str();
  }
};

/// Checks bounds, pairwise disjointness, rotation closure, box coverage and
/// fitness arithmetic. Infeasible solutions are checked for geometry only and
/// must report zero fitness.
inline ValidationReport validate_solution(const Instance& inst, const PackingSolution& sol) {
  ValidationReport rep;
  auto add = [&rep](ViolationKind k, std::vector<std::size_t> idx, std::string msg) {
    rep.violations.push_back({k, std::move(idx), std::move(msg)});
  };

  std::set<int> opened;
  Volume opened_volume = 0;
  for (int id : sol.opened_containers) {
    if (id < 1 || static_cast<std::size_t>(id) > inst.container_count()) {
      add(ViolationKind::container, {}, "opened container id " + std::to_string(id) + " does not exist");
      continue;
    }
    if (!opened.insert(id).second) add(ViolationKind::container, {}, "container " + std::to_string(id) + " opened twice");
    else opened_volume += inst.container(id).dims.l * inst.container(id).dims.w * inst.container(id).dims.h;
  }

  std::map<int, std::size_t> seen_box;
  Volume packed_volume = 0;
  for (std::size_t i = 0; i < sol.placements.size(); ++i) {
    const auto& p = sol.placements[i];
    if (p.box_id < 1 || static_cast<std::size_t>(p.box_id) > inst.box_count()) {
      add(ViolationKind::coverage, {i}, "unknown box id " + std::to_string(p.box_id));
      continue;
    }
    if (auto [it, fresh] = seen_box.emplace(p.box_id, i); !fresh)
      add(ViolationKind::coverage, {it->second, i}, "box " + std::to_string(p.box_id) + " placed twice");

    const auto& orig = inst.box(p.box_id).dims;
    std::array<Coord, 3> want{orig.l, orig.w, orig.h}, got{p.dims.l, p.dims.w, p.dims.h};
    std::sort(want.begin(), want.end());
    std::sort(got.begin(), got.end());
    if (want != got) add(ViolationKind::rotation, {i}, "oriented dims are not a rotation of the box");
    packed_volume += got[0] * got[1] * got[2];

    if (!opened.count(p.container_id)) {
      add(ViolationKind::container, {i}, "placement in unopened container " + std::to_string(p.container_id));
      continue;
    }
    const auto& cd = inst.container(p.container_id).dims;
    std::array<Coord, 3> lo{p.position.x, p.position.y, p.position.z};
    std::array<Coord, 3> len{p.dims.l, p.dims.w, p.dims.h};
    std::array<Coord, 3> cap{cd.l, cd.w, cd.h};
    for (int a = 0; a < 3; ++a) {
      if (lo[a] < 0 || len[a] < 1 || lo[a] + len[a] > cap[a]) {
        add(ViolationKind::bounds, {i}, "box " + std::to_string(p.box_id) + " exceeds container bounds");
        break;
      }
    }
  }

  for (std::size_t i = 0; i < sol.placements.size(); ++i) {
    for (std::size_t j = i + 1; j < sol.placements.size(); ++j) {
      const auto& a = sol.placements[i];
      const auto& b = sol.placements[j];
      if (a.container_id != b.container_id) continue;
      Coord ox = std::min(a.position.x + a.dims.l, b.position.x + b.dims.l) - std::max(a.position.x, b.position.x);
      Coord oy = std::min(a.position.y + a.dims.w, b.position.y + b.dims.w) - std::max(a.position.y, b.position.y);
      Coord oz = std::min(a.position.z + a.dims.h, b.position.z + b.dims.h) - std::max(a.position.z, b.position.z);
      if (ox > 0 && oy > 0 && oz > 0)
        add(ViolationKind::overlap, {i, j},
            "boxes " + std::to_string(a.box_id) + " and " + std::to_string(b.box_id) + " overlap");
    }
  }

  if (sol.feasible) {
    for (int id = 1; static_cast<std::size_t>(id) <= inst.box_count(); ++id)
      if (!seen_box.count(id)) add(ViolationKind::coverage, {}, "box " + std::to_string(id) + " not placed");
    if (sol.packed_volume != packed_volume || sol.opened_volume != opened_volume)
      add(ViolationKind::fitness, {}, "reported volumes disagree with placements and opened containers");
    double expect = opened_volume > 0 ? static_cast<double>(packed_volume) / static_cast<double>(opened_volume) : 0.0;
    if (sol.fitness != expect || sol.fitness < 0.0 || sol.fitness > 1.0)
      add(ViolationKind::fitness, {}, "fill ratio " + format_decimal(sol.fitness) + " != " + format_decimal(expect));
  } else if (sol.fitness != 0.0) {
    add(ViolationKind::fitness, {}, "infeasible solution must have zero fitness");
  }
  return rep;
}

}  // namespace binpack3d
