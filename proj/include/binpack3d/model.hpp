#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace binpack3d {

using Coord = std::int64_t;
using Volume = std::int64_t;

/// Raised for malformed instance, chromosome, checkpoint or solution text.
/// `line()` is 1-based, or 0 when the error is not tied to a line.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

struct Dims {
  Coord l = 0;
  Coord w = 0;
  Coord h = 0;

  constexpr Coord operator[](int axis) const { return axis == 0 ? l : axis == 1 ? w : h; }
  friend constexpr bool operator==(const Dims&, const Dims&) = default;
};

struct BoxSpec {
  int id = 0;
  Dims dims;
  friend bool operator==(const BoxSpec&, const BoxSpec&) = default;
};

struct ContainerSpec {
  int id = 0;
  Dims dims;
  friend bool operator==(const ContainerSpec&, const ContainerSpec&) = default;
};

namespace detail {

inline Volume checked_volume(const Dims& d) {
  Volume v = 0;
  if (__builtin_mul_overflow(d.l, d.w, &v) || __builtin_mul_overflow(v, d.h, &v))
    throw std::invalid_argument("volume overflows 64 bits");
  return v;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

template <typename Int>
bool parse_int(std::string_view s, Int& out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

// Validates that `ids` is exactly {1..n} and returns the id -> position table.
inline std::vector<std::size_t> dense_index(const std::vector<int>& ids, const char* what) {
  std::vector<std::size_t> index(ids.size(), ids.size());
  for (std::size_t pos = 0; pos < ids.size(); ++pos) {
    int id = ids[pos];
    if (id < 1 || static_cast<std::size_t>(id) > ids.size())
      throw std::invalid_argument(std::string(what) + " id " + std::to_string(id) + " out of range");
    if (index[id - 1] != ids.size())
      throw std::invalid_argument(std::string("duplicate ") + what + " id " + std::to_string(id));
    index[id - 1] = pos;
  }
  return index;
}

}  // namespace detail

/// Shortest decimal text that parses back to exactly `v`.
inline std::string format_decimal(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

inline bool parse_decimal(std::string_view s, double& out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

constexpr Volume volume(const Dims& d) { return d.l * d.w * d.h; }

/// M boxes and N heterogeneous containers. Immutable once constructed.
/// Ids are dense 1-based; listing order is preserved as given.
class Instance {
 public:
  Instance(std::vector<BoxSpec> boxes, std::vector<ContainerSpec> containers)
      : boxes_(std::move(boxes)), containers_(std::move(containers)) {
    if (boxes_.empty()) throw std::invalid_argument("instance needs at least one box");
    if (containers_.empty()) throw std::invalid_argument("instance needs at least one container");
    std::vector<int> ids;
    for (const auto& b : boxes_) {
      check_dims(b.dims, "box");
      ids.push_back(b.id);
    }
    box_index_ = detail::dense_index(ids, "box");
    ids.clear();
    for (const auto& c : containers_) {
      check_dims(c.dims, "container");
      ids.push_back(c.id);
    }
    container_index_ = detail::dense_index(ids, "container");
    for (const auto& b : boxes_) add(total_box_volume_, detail::checked_volume(b.dims));
    Volume cv = 0;
    for (const auto& c : containers_) add(cv, detail::checked_volume(c.dims));
  }

  std::size_t box_count() const { return boxes_.size(); }
  std::size_t container_count() const { return containers_.size(); }
  const std::vector<BoxSpec>& boxes() const { return boxes_; }
  const std::vector<ContainerSpec>& containers() const { return containers_; }
  const BoxSpec& box(int id) const { return boxes_.at(box_index_.at(id - 1)); }
  const ContainerSpec& container(int id) const { return containers_.at(container_index_.at(id - 1)); }
  Volume total_box_volume() const { return total_box_volume_; }

  friend bool operator==(const Instance& a, const Instance& b) {
    return a.boxes_ == b.boxes_ && a.containers_ == b.containers_;
  }

 private:
  static void check_dims(const Dims& d, const char* what) {
    if (d.l < 1 || d.w < 1 || d.h < 1)
      throw std::invalid_argument(std::string("non-positive dimension in ") + what);
  }
  static void add(Volume& acc, Volume v) {
    if (__builtin_add_overflow(acc, v, &acc)) throw std::invalid_argument("total volume overflows 64 bits");
  }

  std::vector<BoxSpec> boxes_;
  std::vector<ContainerSpec> containers_;
  std::vector<std::size_t> box_index_;
  std::vector<std::size_t> container_index_;
  Volume total_box_volume_ = 0;
};

/// Instance file: `M N`, then M lines `id l w h`, then N lines `id L W H`.
/// Lines starting with `#` and blank lines are skipped.
inline Instance parse_instance(std::string_view text) {
  struct Row {
    std::size_t line;
    std::vector<Coord> values;
  };
  std::vector<Row> rows;
  std::size_t lineno = 0;
  for (auto line : detail::split(text, '\n')) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    Row row{lineno, {}};
    for (auto tok : detail::split(line, ' ')) {
      Coord v = 0;
      if (!detail::parse_int(tok, v)) throw ParseError(lineno, "malformed integer '" + std::string(tok) + "'");
      row.values.push_back(v);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError(0, "empty instance file");
  const auto& header = rows.front();
  if (header.values.size() != 2) throw ParseError(header.line, "header must be 'M N'");
  Coord m = header.values[0], n = header.values[1];
  if (m < 1 || n < 1) throw ParseError(header.line, "M and N must be positive");
  if (rows.size() != static_cast<std::size_t>(1 + m + n))
    throw ParseError(rows.back().line, "expected " + std::to_string(m + n) + " item lines, found " +
                                           std::to_string(rows.size() - 1));

  std::vector<BoxSpec> boxes;
  std::vector<ContainerSpec> containers;
  std::vector<bool> seen_box(m + 1), seen_container(n + 1);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    bool is_box = r <= static_cast<std::size_t>(m);
    const char* what = is_box ? "box" : "container";
    if (row.values.size() != 4) throw ParseError(row.line, std::string(what) + " line must be 'id l w h'");
    Coord id = row.values[0];
    Dims d{row.values[1], row.values[2], row.values[3]};
    if (d.l < 1 || d.w < 1 || d.h < 1) throw ParseError(row.line, std::string("non-positive dimension in ") + what);
    auto& seen = is_box ? seen_box : seen_container;
    Coord limit = is_box ? m : n;
    if (id < 1 || id > limit) throw ParseError(row.line, std::string(what) + " id " + std::to_string(id) + " out of range");
    if (seen[id]) throw ParseError(row.line, std::string("duplicate ") + what + " id " + std::to_string(id));
    seen[id] = true;
    if (is_box)
      boxes.push_back({static_cast<int>(id), d});
    else
      containers.push_back({static_cast<int>(id), d});
  }
  try {
    return Instance(std::move(boxes), std::move(containers));
  } catch (const std::invalid_argument& e) {
    throw ParseError(0, e.what());
  }
}

inline std::string serialize_instance(const Instance& inst) {
  std::ostringstream out;
  out << inst.box_count() << ' ' << inst.container_count() << '\n';
  for (const auto& b : inst.boxes()) out << b.id << ' ' << b.dims.l << ' ' << b.dims.w << ' ' << b.dims.h << '\n';
  for (const auto& c : inst.containers())
    out << c.id << ' ' << c.dims.l << ' ' << c.dims.w << ' ' << c.dims.h << '\n';
  return out.str();
}

/// Box packing sequence plus container loading sequence, both 1-based permutations.
struct Chromosome {
  std::vector<int> bps;
  std::vector<int> cls;

  friend bool operator==(const Chromosome&, const Chromosome&) = default;
  friend auto operator<=>(const Chromosome&, const Chromosome&) = default;
};

inline bool is_permutation_of_range(const std::vector<int>& seq) {
  std::vector<bool> seen(seq.size() + 1, false);
  for (int v : seq) {
    if (v < 1 || static_cast<std::size_t>(v) > seq.size() || seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

inline bool is_valid(const Chromosome& c) {
  return !c.bps.empty() && !c.cls.empty() && is_permutation_of_range(c.bps) && is_permutation_of_range(c.cls);
}

inline bool matches(const Chromosome& c, const Instance& inst) {
  return is_valid(c) && c.bps.size() == inst.box_count() && c.cls.size() == inst.container_count();
}

inline std::string serialize_chromosome(const Chromosome& c) {
  std::string out;
  auto emit = [&out](const std::vector<int>& part) {
    for (std::size_t i = 0; i < part.size(); ++i) {
      if (i) out += ',';
      out += std::to_string(part[i]);
    }
  };
  emit(c.bps);
  out += '|';
  emit(c.cls);
  return out;
}

inline Chromosome parse_chromosome(std::string_view text) {
  auto parts = detail::split(text, '|');
  if (parts.size() != 2) throw ParseError(0, "chromosome must have exactly one '|' separator");
  auto parse_part = [](std::string_view part, const char* name) {
    std::vector<int> seq;
    for (auto tok : detail::split(part, ',')) {
      int v = 0;
      if (!detail::parse_int(tok, v)) throw ParseError(0, std::string("malformed gene in ") + name);
      seq.push_back(v);
    }
    if (!is_permutation_of_range(seq))
      throw ParseError(0, std::string(name) + " is not a permutation of 1.." + std::to_string(seq.size()));
    return seq;
  };
  return Chromosome{parse_part(parts[0], "bps"), parse_part(parts[1], "cls")};
}

}  // namespace binpack3d
