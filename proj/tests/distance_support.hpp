#pragma once

// Helpers shared by the distance unit tests and the acceptance suite.

#include <cstdint>
#include <functional>
#include <iterator>
#include <random>
#include <vector>

#include "bipath/distances.hpp"
#include "oracles.hpp"

namespace testing_support {

using bipath::Block;
using bipath::BlockKind;
using bipath::ExtRational;
using bipath::OrbitBlock;

inline std::int64_t sixteenths(const ExtRational& x) {
  if (x.is_pos_inf()) return oracle::kInf;
  if (x.is_neg_inf()) return -oracle::kInf;
  return x.num() * 16 / x.den();
}

inline oracle::SampledBlock sampled(const Block& b) {
  static constexpr int kinds[] = {oracle::kCC, oracle::kCO, oracle::kOC, oracle::kOO, oracle::kZero};
  return {kinds[static_cast<int>(b.kind)], sixteenths(b.a), sixteenths(b.b)};
}

inline bool sampled_interleaved(const Block& x, const Block& y, const ExtRational& eps) {
  return oracle::sampled_interleaved(sampled(x), sampled(y), sixteenths(eps));
}

// Integer endpoints in [-4, 4]; a few zero and whole blocks mixed in.
inline Block random_block(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> kind_dist(0, 19);
  std::uniform_int_distribution<std::int64_t> end(-4, 4);
  std::uniform_int_distribution<std::int64_t> len(0, 6);
  const int k = kind_dist(rng);
  if (k == 19) return Block::zero();
  if (k == 18) return Block::whole();
  const std::int64_t a = end(rng), b = a + len(rng);
  switch (k % 4) {
    case 0: return Block::cc(a, b);
    case 1: return Block::co(a, b);
    case 2: return Block::oc(a, b);
    default: return Block::oo(a, b);
  }
}

// Random block pairs biased towards equal kinds and nearby endpoints.
inline std::pair<Block, Block> random_block_pair(std::mt19937_64& rng) {
  const Block x = random_block(rng);
  Block y = random_block(rng);
  if (rng() % 3 != 0 && x.kind != BlockKind::zero && y.kind != BlockKind::zero && x.a.is_finite()) {
    std::uniform_int_distribution<std::int64_t> jitter(-2, 2);
    const ExtRational a = x.a + jitter(rng);
    ExtRational b = x.b + jitter(rng);
    if (b < a) b = a;
    y = Block{x.kind, a, b};
  }
  return {x, y};
}

// Least eps on the (1/8)Z grid in [0, limit] at which pred holds, or inf.
inline ExtRational sweep_threshold(const std::function<bool(const ExtRational&)>& pred, std::int64_t limit) {
  for (std::int64_t k = 0; k <= 8 * limit; ++k)
    if (pred(ExtRational(k, 8))) return ExtRational(k, 8);
  return ExtRational::infinity();
}

// A second arc code near the first: each summand is kept, moved to a random
// interval of the same block kind, or dropped when it is deletable, and a few
// deletable summands are added.
inline bipath::ArcCode nearby_arc_code(const bipath::BipathPoset& poset, const bipath::ArcCode& base,
                                       std::mt19937_64& rng) {
  using bipath::IntervalKind;
  const auto intervals = bipath::enumerate_intervals(poset);
  auto pick_kind = [&](IntervalKind kind) {
    std::vector<bipath::BipathInterval> same;
    for (const auto& iv : intervals)
      if (iv.kind == kind) same.push_back(iv);
    return same[rng() % same.size()];
  };
  bipath::ArcCode out;
  for (const auto& [iv, mult] : base)
    for (std::size_t k = 0; k < mult; ++k) {
      const auto roll = rng() % 10;
      const bool deletable = iv.kind != IntervalKind::full && iv.kind != IntervalKind::right;
      if (roll < 2 && deletable) continue;
      ++out[roll < 6 ? iv : pick_kind(iv.kind)];
    }
  for (auto extra = rng() % 3; extra > 0; --extra) {
    const IntervalKind kinds[] = {IntervalKind::left, IntervalKind::top, IntervalKind::bottom};
    const IntervalKind kind = kinds[rng() % 3];
    if (kind == IntervalKind::bottom && poset.m() < 2) continue;
    ++out[pick_kind(kind)];
  }
  return out;
}

struct DistanceCase {
  bipath::BipathPoset poset;
  bipath::ArcCode a;
  bipath::ArcCode b;
};

// Small posets; three in four pairs are perturbations of each other, the rest
// independent.
inline DistanceCase random_distance_case(std::mt19937_64& rng, std::size_t max_orbits) {
  const bipath::BipathPoset poset(2 + rng() % 3, 1 + rng() % 3);
  bipath::ArcCode a = bipath::random_arc_code(poset, max_orbits, rng);
  bipath::ArcCode b = rng() % 4 == 0 ? bipath::random_arc_code(poset, max_orbits, rng) : nearby_arc_code(poset, a, rng);
  while (bipath::total_multiplicity(b) > max_orbits) {
    auto it = std::next(b.begin(), static_cast<std::ptrdiff_t>(rng() % b.size()));
    if (--it->second == 0) b.erase(it);
  }
  return {poset, std::move(a), std::move(b)};
}

// Minimax over every type-respecting partial bijection between the orbit
// lists, with B-shifts |z| <= window, decided by the interleaving predicate on
// the (1/4)Z grid up to limit. Exhaustive backtracking; for tiny inputs only.
inline ExtRational brute_force_bottleneck(const std::vector<OrbitBlock>& a, const std::vector<OrbitBlock>& b,
                                          std::int64_t window, std::int64_t limit) {
  const std::size_t p = a.size(), q = b.size();
  for (std::int64_t k = 0; k <= 4 * limit; ++k) {
    const ExtRational eps(k, 4);
    std::vector<std::vector<bool>> can(p, std::vector<bool>(q, false));
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = 0; j < q; ++j) {
        if (a[i].rep.kind != b[j].rep.kind || a[i].periodic != b[j].periodic) continue;
        const std::int64_t span = a[i].periodic ? window : 0;
        for (std::int64_t z = -span; z <= span && !can[i][j]; ++z)
          can[i][j] = bipath::eps_interleaved(a[i].rep, bipath::shifted(b[j].rep, z * static_cast<std::int64_t>(b[j].period)), eps);
      }
    std::vector<bool> del_a(p), del_b(q), used(q, false);
    for (std::size_t i = 0; i < p; ++i) del_a[i] = bipath::eps_interleaved(a[i].rep, Block::zero(), eps);
    for (std::size_t j = 0; j < q; ++j) del_b[j] = bipath::eps_interleaved(b[j].rep, Block::zero(), eps);
    std::function<bool(std::size_t)> search = [&](std::size_t i) {
      if (i == p) {
        for (std::size_t j = 0; j < q; ++j)
          if (!used[j] && !del_b[j]) return false;
        return true;
      }
      if (del_a[i] && search(i + 1)) return true;
      for (std::size_t j = 0; j < q; ++j) {
        if (used[j] || !can[i][j]) continue;
        used[j] = true;
        const bool ok = search(i + 1);
        used[j] = false;
        if (ok) return true;
      }
      return false;
    };
    if (search(0)) return eps;
  }
  return ExtRational::infinity();
}

}  // namespace testing_support
