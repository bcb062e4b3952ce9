#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "binpack3d/model.hpp"
#include "binpack3d/packer.hpp"
#include "binpack3d/random.hpp"

namespace binpack3d {

struct CutGenSpec {
  Dims container{100, 100, 100};
  int box_count = 10;   // k
  Coord min_extent = 1; // m
  std::uint64_t seed = 0;
};

/// A guillotine instance together with the perfect packing it was cut from.
struct CutInstance {
  Instance instance;
  PackingSolution packing;
};

struct Piece {
  Point origin;
  Dims dims;
};

/// Cuts `p` with the plane at `offset` along `axis` (0=x, 1=y, 2=z).
inline std::pair<Piece, Piece> split_piece(const Piece& p, int axis, Coord offset) {
  if (offset <= 0 || offset >= p.dims[axis]) throw std::invalid_argument("cut offset outside piece");
  Piece lo = p, hi = p;
  switch (axis) {
    case 0: lo.dims.l = offset; hi.dims.l -= offset; hi.origin.x += offset; break;
    case 1: lo.dims.w = offset; hi.dims.w -= offset; hi.origin.y += offset; break;
    default: lo.dims.h = offset; hi.dims.h -= offset; hi.origin.z += offset; break;
  }
  return {lo, hi};
}

/// Upper bound on the number of pieces with every extent >= m (grid cut),
/// saturating at INT64_MAX.
inline std::int64_t cut_capacity(const Dims& d, Coord m) {
  std::int64_t cap = 1;
  for (int a = 0; a < 3; ++a) {
    std::int64_t f = d[a] / m;
    if (f == 0) return 0;
    if (__builtin_mul_overflow(cap, f, &cap)) return INT64_MAX;
  }
  return cap;
}

/// Recursively slices the container into exactly k boxes. Offsets are drawn
/// so that floor(d/m) is split without loss along the cut axis, which keeps
/// the total grid capacity constant; hence k pieces are always reachable
/// whenever k <= cut_capacity(container, m).
inline CutInstance generate_cut_instance(const CutGenSpec& spec) {
  const Coord m = spec.min_extent;
  if (spec.box_count < 1) throw std::invalid_argument("box count must be at least 1");
  if (m < 1) throw std::invalid_argument("minimum extent must be at least 1");
  if (spec.container.l < 1 || spec.container.w < 1 || spec.container.h < 1)
    throw std::invalid_argument("container dimensions must be positive");
  if (cut_capacity(spec.container, m) < spec.box_count)
    throw std::invalid_argument("cannot cut " + std::to_string(spec.box_count) + " boxes with extent >= " +
                                std::to_string(m) + " from the container");

  Stream rng(splitmix64(spec.seed));
  std::vector<Piece> pieces{{{0, 0, 0}, spec.container}};
  while (pieces.size() < static_cast<std::size_t>(spec.box_count)) {
    std::vector<std::size_t> cuttable;
    for (std::size_t i = 0; i < pieces.size(); ++i)
      if (cut_capacity(pieces[i].dims, m) >= 2) cuttable.push_back(i);
    std::size_t idx = cuttable[rng.below(cuttable.size())];
    const Piece piece = pieces[idx];
    std::vector<int> axes;
    for (int a = 0; a < 3; ++a)
      if (piece.dims[a] / m >= 2) axes.push_back(a);
    int axis = axes[rng.below(axes.size())];
    Coord d = piece.dims[axis];
    Coord whole = d / m, rem = d % m;
    Coord q = 1 + static_cast<Coord>(rng.below(static_cast<std::uint64_t>(whole - 1)));
    Coord r = static_cast<Coord>(rng.below(static_cast<std::uint64_t>(rem + 1)));
    auto [lo, hi] = split_piece(piece, axis, q * m + r);
    pieces[idx] = lo;
    pieces.push_back(hi);
  }

  std::vector<BoxSpec> boxes;
  PackingSolution packing;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    int id = static_cast<int>(i) + 1;
    boxes.push_back({id, pieces[i].dims});
    packing.placements.push_back({id, 1, pieces[i].origin, pieces[i].dims});
    packing.packed_volume += volume(pieces[i].dims);
  }
  packing.opened_containers = {1};
  packing.opened_volume = volume(spec.container);
  packing.feasible = true;
  packing.fitness = static_cast<double>(packing.packed_volume) / static_cast<double>(packing.opened_volume);
  return {Instance(std::move(boxes), {{1, spec.container}}), std::move(packing)};
}

}  // namespace binpack3d
