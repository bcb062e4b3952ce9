#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <stdexcept>
#include <vector>

#include "binpack3d/model.hpp"

namespace binpack3d {

struct Point {
  Coord x = 0;
  Coord y = 0;
  Coord z = 0;

  constexpr Coord operator[](int axis) const { return axis == 0 ? x : axis == 1 ? y : z; }
  friend constexpr bool operator==(const Point&, const Point&) = default;
  friend constexpr auto operator<=>(const Point&, const Point&) = default;
};

using Triple = std::array<Coord, 3>;

constexpr Triple ascending(Coord a, Coord b, Coord c) {
  if (a > b) std::swap(a, b);
  if (b > c) std::swap(b, c);
  if (a > b) std::swap(a, b);
  return {a, b, c};
}

/// Empty maximal space: the half-open box [min, max) inside one container.
struct Ems {
  int container_id = 0;
  Point min;
  Point max;

  constexpr Dims extent() const { return {max.x - min.x, max.y - min.y, max.z - min.z}; }
  constexpr Volume volume() const { return binpack3d::volume(extent()); }
  constexpr bool contains(const Ems& o) const {
    return min.x <= o.min.x && min.y <= o.min.y && min.z <= o.min.z && o.max.x <= max.x && o.max.y <= max.y &&
           o.max.z <= max.z;
  }
  friend constexpr bool operator==(const Ems&, const Ems&) = default;
};

struct Orientation {
  int index = 0;
  Dims dims;
};

/// Axis permutation for each orientation index: oriented dims are
/// (d[a0], d[a1], d[a2]) of the original (l, w, h).
inline constexpr std::array<std::array<int, 3>, 6> kOrientationAxes = {{
    {0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0},
}};

inline std::array<Orientation, 6> orientations(const BoxSpec& b) {
  std::array<Orientation, 6> out;
  for (int i = 0; i < 6; ++i) {
    const auto& ax = kOrientationAxes[i];
    out[i] = {i, {b.dims[ax[0]], b.dims[ax[1]], b.dims[ax[2]]}};
  }
  return out;
}

struct Placement {
  int box_id = 0;
  int container_id = 0;
  Point position;
  Dims dims;  // oriented

  constexpr Point max_corner() const { return {position.x + dims.l, position.y + dims.w, position.z + dims.h}; }
  friend constexpr bool operator==(const Placement&, const Placement&) = default;
};

struct PackingSolution {
  std::vector<Placement> placements;
  std::vector<int> opened_containers;  // in opening order
  bool feasible = false;
  Volume packed_volume = 0;
  Volume opened_volume = 0;
  double fitness = 0.0;

  friend bool operator==(const PackingSolution&, const PackingSolution&) = default;
};

inline Ems initial_ems(const ContainerSpec& c) { return {c.id, {0, 0, 0}, {c.dims.l, c.dims.w, c.dims.h}}; }

/// Smaller-is-higher-priority: ascending-sorted min vertex compared
/// lexicographically, then container id, then raw min vertex, then max vertex.
inline bool ems_priority_less(const Ems& a, const Ems& b) {
  auto ka = ascending(a.min.x, a.min.y, a.min.z);
  auto kb = ascending(b.min.x, b.min.y, b.min.z);
  if (ka != kb) return ka < kb;
  if (a.container_id != b.container_id) return a.container_id < b.container_id;
  if (a.min != b.min) return a.min < b.min;
  return a.max < b.max;
}

constexpr bool fits(const Ems& e, const Dims& d) {
  auto ext = e.extent();
  return d.l <= ext.l && d.w <= ext.w && d.h <= ext.h;
}

/// Ascending-sorted margins to the three far faces; compare like EMS priority.
inline Triple placement_margin_key(const Ems& e, const Dims& d) {
  auto ext = e.extent();
  return ascending(ext.l - d.l, ext.w - d.w, ext.h - d.h);
}

inline bool intersects(const Ems& e, const Placement& p) {
  auto pmax = p.max_corner();
  for (int a = 0; a < 3; ++a)
    if (!(e.min[a] < pmax[a] && p.position[a] < e.max[a])) return false;
  return true;
}

/// Splits `e` into the slabs lying strictly beyond each face of the placed
/// box. Order: -x, +x, -y, +y, -z, +z; empty slabs are dropped.
inline std::vector<Ems> subtract_box(const Ems& e, const Placement& p) {
  if (!intersects(e, p)) return {e};
  std::vector<Ems> out;
  auto pmax = p.max_corner();
  auto set = [](Point& pt, int axis, Coord v) { (axis == 0 ? pt.x : axis == 1 ? pt.y : pt.z) = v; };
  for (int a = 0; a < 3; ++a) {
    if (p.position[a] > e.min[a]) {
      Ems s = e;
      set(s.max, a, p.position[a]);
      out.push_back(s);
    }
    if (pmax[a] < e.max[a]) {
      Ems s = e;
      set(s.min, a, pmax[a]);
      out.push_back(s);
    }
  }
  return out;
}

inline void sort_by_priority(std::vector<Ems>& spaces) {
  std::sort(spaces.begin(), spaces.end(), ems_priority_less);
}

/// Applies one placement to a container's EMS list: split intersecting
/// spaces, drop spaces contained in others, re-sort by priority.
inline std::vector<Ems> update_ems_list(const std::vector<Ems>& spaces, const Placement& p) {
  std::vector<Ems> split;
  for (const auto& s : spaces) {
    if (intersects(s, p)) {
      auto parts = subtract_box(s, p);
      split.insert(split.end(), parts.begin(), parts.end());
    } else {
      split.push_back(s);
    }
  }
  std::vector<Ems> out;
  for (std::size_t i = 0; i < split.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < split.size() && !dominated; ++j) {
      if (i == j || !split[j].contains(split[i])) continue;
      // equal spaces: keep the first copy only
      dominated = !(split[i] == split[j]) || j < i;
    }
    if (!dominated) out.push_back(split[i]);
  }
  sort_by_priority(out);
  return out;
}

/// Fill ratio of a finished solution. Infeasible solutions score 0.
inline double fitness(const PackingSolution& sol, const Instance& inst) {
  if (!sol.feasible) return 0.0;
  Volume opened = 0;
  for (int id : sol.opened_containers) opened += volume(inst.container(id).dims);
  return static_cast<double>(inst.total_box_volume()) / static_cast<double>(opened);
}

/// Snapshot passed to a decode observer after each placement. `spaces` is the
/// updated EMS list of the container that received the box.
struct DecodeStep {
  const Placement& placement;
  const std::vector<Ems>& spaces;
  const std::vector<Placement>& placements;
};

inline constexpr int kDefaultKb = 3;
inline constexpr int kDefaultKe = 5;

namespace detail {

struct Candidate {
  std::size_t box_pos;  // position among unpacked boxes (BPS order)
  Volume box_volume;
  std::size_t ems_pos;
  Volume ems_volume;
  Triple margin;
  int orientation;
  Dims dims;
};

// Larger fill ratio first, then smaller margin key, BPS position, EMS
// priority, orientation index.
inline bool better(const Candidate& a, const Candidate& b) {
  auto lhs = static_cast<__int128>(a.box_volume) * b.ems_volume;
  auto rhs = static_cast<__int128>(b.box_volume) * a.ems_volume;
  if (lhs != rhs) return lhs > rhs;
  if (a.margin != b.margin) return a.margin < b.margin;
  if (a.box_pos != b.box_pos) return a.box_pos < b.box_pos;
  if (a.ems_pos != b.ems_pos) return a.ems_pos < b.ems_pos;
  return a.orientation < b.orientation;
}

struct OpenContainer {
  int id;
  std::vector<Ems> spaces;
};

struct NoObserver {
  void operator()(const DecodeStep&) const {}
};

}  // namespace detail

/// Best-matching decoder. Each step looks at the first `kb` unpacked boxes of
/// the BPS against windows of `ke` priority-ordered EMSs, container by
/// container in opening order, and falls back to opening the next container
/// of the CLS. Pure: identical inputs give identical solutions.
template <typename Observer>
PackingSolution decode(const Chromosome& chr, const Instance& inst, int kb, int ke, Observer&& on_step) {
  if (!matches(chr, inst)) throw std::invalid_argument("chromosome does not match instance");
  if (kb < 1 || ke < 1) throw std::invalid_argument("kb and ke must be positive");

  PackingSolution sol;
  std::vector<int> unpacked = chr.bps;
  std::vector<detail::OpenContainer> opened;
  std::size_t next_cls = 0;

  auto scan = [&](const detail::OpenContainer& oc, std::size_t ems_begin,
                  std::size_t ems_end) -> std::optional<detail::Candidate> {
    std::optional<detail::Candidate> best;
    std::size_t nbox = std::min<std::size_t>(kb, unpacked.size());
    for (std::size_t e = ems_begin; e < ems_end; ++e) {
      const Ems& space = oc.spaces[e];
      Volume ev = space.volume();
      for (std::size_t b = 0; b < nbox; ++b) {
        const BoxSpec& box = inst.box(unpacked[b]);
        Volume bv = volume(box.dims);
        for (const auto& o : orientations(box)) {
          if (!fits(space, o.dims)) continue;
          detail::Candidate c{b, bv, e, ev, placement_margin_key(space, o.dims), o.index, o.dims};
          if (!best || detail::better(c, *best)) best = c;
        }
      }
    }
    return best;
  };

  auto place = [&](detail::OpenContainer& oc, const detail::Candidate& c) {
    Placement p{unpacked[c.box_pos], oc.id, oc.spaces[c.ems_pos].min, c.dims};
    sol.placements.push_back(p);
    sol.packed_volume += c.box_volume;
    unpacked.erase(unpacked.begin() + static_cast<std::ptrdiff_t>(c.box_pos));
    oc.spaces = update_ems_list(oc.spaces, p);
    on_step(DecodeStep{sol.placements.back(), oc.spaces, sol.placements});
  };

  const auto window = static_cast<std::size_t>(ke);
  while (!unpacked.empty()) {
    bool placed = false;
    for (auto& oc : opened) {
      for (std::size_t j = 0; j < oc.spaces.size() && !placed; j += window) {
        if (auto c = scan(oc, j, std::min(j + window, oc.spaces.size()))) {
          place(oc, *c);
          placed = true;
        }
      }
      if (placed) break;
    }
    while (!placed && next_cls < chr.cls.size()) {
      const auto& spec = inst.container(chr.cls[next_cls++]);
      opened.push_back({spec.id, {initial_ems(spec)}});
      sol.opened_containers.push_back(spec.id);
      sol.opened_volume += volume(spec.dims);
      if (auto c = scan(opened.back(), 0, 1)) {
        place(opened.back(), *c);
        placed = true;
      }
    }
    if (!placed) {
      sol.feasible = false;
      sol.fitness = 0.0;
      return sol;
    }
  }
  sol.feasible = true;
  sol.fitness = static_cast<double>(sol.packed_volume) / static_cast<double>(sol.opened_volume);
  return sol;
}

inline PackingSolution decode(const Chromosome& chr, const Instance& inst, int kb = kDefaultKb,
                              int ke = kDefaultKe) {
  return decode(chr, inst, kb, ke, detail::NoObserver{});
}

}  // namespace binpack3d
