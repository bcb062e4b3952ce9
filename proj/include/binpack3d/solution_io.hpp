#pragma once

// Solution file format (one solution per file, `#` lines are comments):
//
//   feasible <0|1>
//   fill_ratio <decimal>
//   packed_volume <integer>
//   opened_volume <integer>
//   opened <count> <container_id>...
//   placements <count>
//   <box_id> <container_id> <x> <y> <z> <l'> <w'> <h'>     (count lines)
//
// fill_ratio is the shortest decimal that round-trips to the stored double.

#include <sstream>
#include <string>
#include <string_view>

#include "binpack3d/model.hpp"
#include "binpack3d/packer.hpp"

namespace binpack3d {

inline std::string write_solution(const PackingSolution& sol) {
  std::ostringstream out;
  out << "# binpack3d solution\n";
  out << "feasible " << (sol.feasible ? 1 : 0) << '\n';
  out << "fill_ratio " << format_decimal(sol.fitness) << '\n';
  out << "packed_volume " << sol.packed_volume << '\n';
  out << "opened_volume " << sol.opened_volume << '\n';
  out << "opened " << sol.opened_containers.size();
  for (int id : sol.opened_containers) out << ' ' << id;
  out << '\n';
  out << "placements " << sol.placements.size() << '\n';
  for (const auto& p : sol.placements) {
    out << p.box_id << ' ' << p.container_id << ' ' << p.position.x << ' ' << p.position.y << ' ' << p.position.z
        << ' ' << p.dims.l << ' ' << p.dims.w << ' ' << p.dims.h << '\n';
  }
  return out.str();
}

inline PackingSolution parse_solution(std::string_view text) {
  std::vector<std::pair<std::size_t, std::vector<std::string_view>>> lines;
  std::size_t lineno = 0;
  for (auto line : detail::split(text, '\n')) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    lines.emplace_back(lineno, detail::split(line, ' '));
  }
  std::size_t cursor = 0;
  auto expect = [&](std::string_view key) -> const std::pair<std::size_t, std::vector<std::string_view>>& {
    if (cursor >= lines.size()) throw ParseError(lineno, "missing '" + std::string(key) + "' line");
    const auto& l = lines[cursor++];
    if (l.second.empty() || l.second[0] != key) throw ParseError(l.first, "expected '" + std::string(key) + "'");
    return l;
  };
  auto integer = [](const auto& l, std::size_t idx) {
    std::int64_t v = 0;
    if (idx >= l.second.size() || !detail::parse_int(l.second[idx], v))
      throw ParseError(l.first, "malformed integer field");
    return v;
  };
  auto single = [&](std::string_view key) {
    const auto& l = expect(key);
    if (l.second.size() != 2) throw ParseError(l.first, "expected '" + std::string(key) + " <value>'");
    return l;
  };

  PackingSolution sol;
  {
    const auto& l = single("feasible");
    auto v = integer(l, 1);
    if (v != 0 && v != 1) throw ParseError(l.first, "feasible must be 0 or 1");
    sol.feasible = v == 1;
  }
  {
    const auto& l = single("fill_ratio");
    if (!parse_decimal(l.second[1], sol.fitness)) throw ParseError(l.first, "malformed fill_ratio");
  }
  sol.packed_volume = integer(single("packed_volume"), 1);
  sol.opened_volume = integer(single("opened_volume"), 1);
  {
    const auto& l = expect("opened");
    auto n = integer(l, 1);
    if (n < 0 || l.second.size() != static_cast<std::size_t>(n) + 2) throw ParseError(l.first, "opened count mismatch");
    for (std::int64_t i = 0; i < n; ++i) sol.opened_containers.push_back(static_cast<int>(integer(l, 2 + i)));
  }
  const auto& header = single("placements");
  auto n = integer(header, 1);
  if (n < 0) throw ParseError(header.first, "negative placement count");
  for (std::int64_t i = 0; i < n; ++i) {
    if (cursor >= lines.size()) throw ParseError(lineno, "expected " + std::to_string(n) + " placement lines");
    const auto& l = lines[cursor++];
    if (l.second.size() != 8) throw ParseError(l.first, "placement line needs 8 integers");
    Placement p;
    p.box_id = static_cast<int>(integer(l, 0));
    p.container_id = static_cast<int>(integer(l, 1));
    p.position = {integer(l, 2), integer(l, 3), integer(l, 4)};
    p.dims = {integer(l, 5), integer(l, 6), integer(l, 7)};
    sol.placements.push_back(p);
  }
  if (cursor != lines.size()) throw ParseError(lines[cursor].first, "trailing content after placements");
  return sol;
}

}  // namespace binpack3d
