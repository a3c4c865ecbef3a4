#pragma once

// Interleaving and bottleneck distances between bipath modules, computed on
// block extensions of the periodic zigzag barcode one orbit at a time.
//
// Blocks live in U = {(c, d) : c <= d} with (c, d) <= (c', d') iff c' <= c and
// d <= d'; shifting by eps sends (c, d) to (c - eps, d + eps).

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "bipath/errors.hpp"
#include "bipath/module.hpp"
#include "bipath/rational.hpp"
#include "bipath/zigzag.hpp"

namespace bipath {

// cc = [a,b]_BL = {c <= b, d >= a}, co = [a,b)_BL = {a <= d < b},
// oc = (a,b]_BL = {a < c <= b}, oo = (a,b)_BL = {c > a, d < b}.
enum class BlockKind : std::uint8_t { cc, co, oc, oo, zero };

inline const char* to_string(BlockKind kind) {
  switch (kind) {
    case BlockKind::cc: return "cc";
    case BlockKind::co: return "co";
    case BlockKind::oc: return "oc";
    case BlockKind::oo: return "oo";
    case BlockKind::zero: return "zero";
  }
  return "?";
}

struct Block {
  BlockKind kind = BlockKind::zero;
  ExtRational a;
  ExtRational b;

  static Block cc(ExtRational a, ExtRational b) { return make(BlockKind::cc, a, b); }
  static Block co(ExtRational a, ExtRational b) { return make(BlockKind::co, a, b); }
  static Block oc(ExtRational a, ExtRational b) { return make(BlockKind::oc, a, b); }
  static Block oo(ExtRational a, ExtRational b) { return make(BlockKind::oo, a, b); }
  static Block whole() { return cc(ExtRational::neg_infinity(), ExtRational::infinity()); }
  static Block zero() { return {}; }

  bool is_zero() const { return kind == BlockKind::zero; }
  ExtRational length() const { return b - a; }

  friend bool operator==(const Block&, const Block&) = default;

 private:
  static Block make(BlockKind kind, ExtRational a, ExtRational b) {
    if (b < a) throw DomainError("block endpoints out of order: " + a.to_string() + " > " + b.to_string());
    return {kind, a, b};
  }
};

inline std::string to_string(const Block& block) {
  switch (block.kind) {
    case BlockKind::cc: return "[" + block.a.to_string() + ", " + block.b.to_string() + "]_BL";
    case BlockKind::co: return "[" + block.a.to_string() + ", " + block.b.to_string() + ")_BL";
    case BlockKind::oc: return "(" + block.a.to_string() + ", " + block.b.to_string() + "]_BL";
    case BlockKind::oo: return "(" + block.a.to_string() + ", " + block.b.to_string() + ")_BL";
    case BlockKind::zero: return "0";
  }
  return "?";
}

inline Block block_extend(const DecoratedInterval& iv) {
  if (iv.whole) return Block::whole();
  switch (iv.kind) {
    case Decoration::closed_closed: return Block::cc(iv.a, iv.b);
    case Decoration::closed_open: return Block::co(iv.a, iv.b);
    case Decoration::open_closed: return Block::oc(iv.a, iv.b);
    case Decoration::open_open: return Block::oo(iv.a, iv.b);
  }
  throw DomainError("unknown decoration");
}

// z↑ on a block: both endpoints move by the same amount.
inline Block shifted(const Block& block, std::int64_t delta) {
  if (block.is_zero()) return block;
  return {block.kind, block.a + delta, block.b + delta};
}

// --- Interleavings of single blocks -------------------------------------------

namespace detail {

inline void require_eps(const ExtRational& eps) {
  if (!eps.is_finite()) throw DomainError("eps must be finite");
  if (eps < ExtRational(0)) throw DomainError("eps must be non-negative, got " + eps.to_string());
}

inline ExtRational max_endpoint_shift(const Block& x, const Block& y) {
  return std::max(endpoint_distance(x.a, y.a), endpoint_distance(x.b, y.b));
}

}  // namespace detail

// Whether the 2eps shift morphism of k block vanishes, i.e. block is
// eps-interleaved with the zero module.
inline bool is_trivial(const Block& block, const ExtRational& eps) {
  detail::require_eps(eps);
  switch (block.kind) {
    case BlockKind::zero: return true;
    case BlockKind::cc: return false;
    case BlockKind::co:
    case BlockKind::oc: return block.length() <= eps * 2;
    case BlockKind::oo: return block.length() <= eps * 4;
  }
  return false;
}

// Two block modules are eps-interleaved either through zero maps (both
// 2eps-trivial) or through the canonical overlap morphisms in both directions,
// whose validity and composites reduce to the endpoint inequalities below.
inline bool eps_interleaved(const Block& x, const Block& y, const ExtRational& eps) {
  detail::require_eps(eps);
  if (is_trivial(x, eps) && is_trivial(y, eps)) return true;
  if (x.kind != y.kind) return false;
  const bool close = detail::max_endpoint_shift(x, y) <= eps;
  switch (x.kind) {
    case BlockKind::cc: return close;
    case BlockKind::co:
    case BlockKind::oc: return close && x.a + eps < y.b && y.a + eps < x.b;
    case BlockKind::oo: return close && eps * 2 < std::min(x.length(), y.length());
    case BlockKind::zero: return true;
  }
  return false;
}

inline ExtRational deletion_cost(const Block& block) {
  switch (block.kind) {
    case BlockKind::zero: return 0;
    case BlockKind::cc: return ExtRational::infinity();
    case BlockKind::co:
    case BlockKind::oc: return block.length() / 2;
    case BlockKind::oo: return block.length() / 4;
  }
  return ExtRational::infinity();
}

// inf{eps : eps_interleaved(x, y, eps)}; the infimum is always attained.
inline ExtRational interleaving_distance(const Block& x, const Block& y) {
  const ExtRational both_trivial = std::max(deletion_cost(x), deletion_cost(y));
  if (x.kind != y.kind) return both_trivial;
  const ExtRational d = detail::max_endpoint_shift(x, y);
  switch (x.kind) {
    case BlockKind::zero: return 0;
    case BlockKind::cc: return d;
    case BlockKind::co:
    case BlockKind::oc: return d < std::min(y.b - x.a, x.b - y.a) ? std::min(d, both_trivial) : both_trivial;
    case BlockKind::oo: return d * 2 < std::min(x.length(), y.length()) ? std::min(d, both_trivial) : both_trivial;
  }
  return both_trivial;
}

// --- Orbits ---------------------------------------------------------------------

struct OrbitBlock {
  Block rep;
  std::size_t period = 0;
  bool periodic = true;
  BipathInterval source;

  friend bool operator==(const OrbitBlock&, const OrbitBlock&) = default;
};

inline Block orbit_representative(const BipathPoset& poset, const BipathInterval& iv) {
  if (iv.kind == IntervalKind::full) return Block::whole();
  require_valid(poset, iv);
  const auto n = static_cast<std::int64_t>(poset.n()), m = static_cast<std::int64_t>(poset.m());
  const auto i = static_cast<std::int64_t>(iv.i), j = static_cast<std::int64_t>(iv.j);
  switch (iv.kind) {
    case IntervalKind::left: return j == 0 ? Block::oo(0, i + 1) : Block::oo(j - n - m, i + 1);
    case IntervalKind::right: return Block::cc(i, j);
    case IntervalKind::top: return Block::co(i, j + 1);
    case IntervalKind::bottom: return Block::oc(i - 1, j);
    case IntervalKind::full: break;
  }
  return Block::whole();
}

// One entry per unit of multiplicity, in arc-code order.
inline std::vector<OrbitBlock> orbit_blocks(const ArcCode& code, const BipathPoset& poset) {
  std::vector<OrbitBlock> out;
  for (const auto& [iv, mult] : code) {
    require_valid(poset, iv);
    const bool periodic = iv.kind != IntervalKind::full;
    for (std::size_t k = 0; k < mult; ++k) out.push_back({orbit_representative(poset, iv), poset.period(), periodic, iv});
  }
  return out;
}

inline ExtRational deletion_cost(const OrbitBlock& orbit) { return deletion_cost(orbit.rep); }

// Shifts |z| <= bound cover every optimal pairing of the given orbits: with
// S the largest finite endpoint magnitude, bound = ceil((S + N) / N) + 1.
inline std::int64_t shift_bound(const std::vector<OrbitBlock>& a, const std::vector<OrbitBlock>& b,
                                std::size_t period) {
  if (period == 0) return 0;
  ExtRational span = 0;
  for (const auto* side : {&a, &b})
    for (const auto& o : *side)
      for (const auto& e : {o.rep.a, o.rep.b})
        if (e.is_finite()) span = std::max(span, abs(e));
  const auto p = static_cast<std::int64_t>(period);
  const ExtRational ratio = (span + p) / p;
  const std::int64_t ceil = (ratio.num() + ratio.den() - 1) / ratio.den();
  return ceil + 1;
}

struct OrbitPairCost {
  ExtRational cost = ExtRational::infinity();
  std::int64_t shift = 0;
};

// min over |z| <= bound of interleaving_distance(x.rep, z↑y.rep). Orbits of
// different kind, or a periodic orbit against the whole block, cost inf.
inline OrbitPairCost pair_cost(const OrbitBlock& x, const OrbitBlock& y, std::int64_t bound) {
  if (x.rep.kind != y.rep.kind || x.periodic != y.periodic) return {};
  if (!x.periodic) return {interleaving_distance(x.rep, y.rep), 0};
  if (x.period != y.period) throw DomainError("orbits with different periods");
  const auto p = static_cast<std::int64_t>(x.period);
  OrbitPairCost best{interleaving_distance(x.rep, y.rep), 0};
  for (std::int64_t k = 1; k <= bound; ++k)
    for (std::int64_t z : {-k, k}) {
      const ExtRational c = interleaving_distance(x.rep, shifted(y.rep, z * p));
      if (c < best.cost) best = {c, z};
    }
  return best;
}

inline ExtRational pair_cost(const OrbitBlock& x, const OrbitBlock& y) {
  return pair_cost(x, y, shift_bound({x}, {y}, x.period)).cost;
}

// --- Bottleneck matching -----------------------------------------------------------

struct MatchedPair {
  std::size_t a = 0;
  std::size_t b = 0;
  std::int64_t shift = 0;  // the B orbit's representative is moved by shift * N
  ExtRational cost;

  friend bool operator==(const MatchedPair&, const MatchedPair&) = default;
};

struct MatchingResult {
  ExtRational epsilon;
  std::vector<MatchedPair> pairs;
  std::vector<std::size_t> deleted_a;
  std::vector<std::size_t> deleted_b;
};

namespace detail {

// Kuhn's augmenting paths on a dense adjacency matrix.
class BipartiteMatcher {
 public:
  explicit BipartiteMatcher(std::vector<std::vector<bool>> adj)
      : adj_(std::move(adj)), right_(adj_.empty() ? 0 : adj_[0].size(), npos) {}

  std::size_t solve() {
    std::size_t size = 0;
    for (std::size_t u = 0; u < adj_.size(); ++u) {
      seen_.assign(right_.size(), false);
      if (augment(u)) ++size;
    }
    return size;
  }

  // Left vertex matched to right vertex r, or npos.
  std::size_t partner(std::size_t r) const { return right_[r]; }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  bool augment(std::size_t u) {
    for (std::size_t r = 0; r < right_.size(); ++r) {
      if (!adj_[u][r] || seen_[r]) continue;
      seen_[r] = true;
      if (right_[r] == npos || augment(right_[r])) {
        right_[r] = u;
        return true;
      }
    }
    return false;
  }

  std::vector<std::vector<bool>> adj_;
  std::vector<std::size_t> right_;
  std::vector<bool> seen_;
};

}  // namespace detail

// Left vertices are A followed by a diagonal copy of B; right vertices are B
// followed by a diagonal copy of A. A perfect matching is an eps-matching.
inline MatchingResult bottleneck_matching_in_window(const std::vector<OrbitBlock>& a,
                                                    const std::vector<OrbitBlock>& b, std::int64_t bound) {
  const std::size_t p = a.size(), q = b.size();
  std::vector<std::vector<OrbitPairCost>> cost(p, std::vector<OrbitPairCost>(q));
  std::vector<ExtRational> del_a(p), del_b(q);
  std::vector<ExtRational> candidates{0};
  for (std::size_t i = 0; i < p; ++i) {
    del_a[i] = deletion_cost(a[i]);
    candidates.push_back(del_a[i]);
    for (std::size_t j = 0; j < q; ++j) {
      cost[i][j] = pair_cost(a[i], b[j], bound);
      candidates.push_back(cost[i][j].cost);
    }
  }
  for (std::size_t j = 0; j < q; ++j) {
    del_b[j] = deletion_cost(b[j]);
    candidates.push_back(del_b[j]);
  }
  std::erase_if(candidates, [](const ExtRational& c) { return !c.is_finite(); });
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  // At t = inf every deletion is allowed but only finite-cost pairs are.
  auto build = [&](const ExtRational& t) {
    std::vector<std::vector<bool>> adj(p + q, std::vector<bool>(q + p, false));
    for (std::size_t i = 0; i < p; ++i) {
      for (std::size_t j = 0; j < q; ++j) adj[i][j] = cost[i][j].cost.is_finite() && cost[i][j].cost <= t;
      adj[i][q + i] = del_a[i] <= t;
    }
    for (std::size_t j = 0; j < q; ++j) {
      adj[p + j][j] = del_b[j] <= t;
      for (std::size_t i = 0; i < p; ++i) adj[p + j][q + i] = true;
    }
    return detail::BipartiteMatcher(std::move(adj));
  };

  std::size_t lo = 0, hi = candidates.size();  // first feasible index in [lo, hi]
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    auto matcher = build(candidates[mid]);
    if (matcher.solve() == p + q) hi = mid;
    else lo = mid + 1;
  }
  const ExtRational eps = lo < candidates.size() ? candidates[lo] : ExtRational::infinity();

  auto matcher = build(eps);
  matcher.solve();
  MatchingResult result{eps, {}, {}, {}};
  for (std::size_t j = 0; j < q; ++j) {
    const std::size_t u = matcher.partner(j);
    if (u < p) result.pairs.push_back({u, j, cost[u][j].shift, cost[u][j].cost});
    else result.deleted_b.push_back(j);
  }
  for (std::size_t i = 0; i < p; ++i)
    if (matcher.partner(q + i) == i) result.deleted_a.push_back(i);
  std::sort(result.pairs.begin(), result.pairs.end(),
            [](const MatchedPair& x, const MatchedPair& y) { return std::tie(x.a, x.b) < std::tie(y.a, y.b); });
  return result;
}

inline MatchingResult bottleneck_matching(const std::vector<OrbitBlock>& a, const std::vector<OrbitBlock>& b,
                                          std::size_t period) {
  return bottleneck_matching_in_window(a, b, shift_bound(a, b, period));
}

inline ExtRational bottleneck_distance(const ArcCode& a, const ArcCode& b, const BipathPoset& poset) {
  return bottleneck_matching(orbit_blocks(a, poset), orbit_blocks(b, poset), poset.period()).epsilon;
}

// Equal to the bottleneck distance by the isometry theorem.
inline ExtRational interleaving_distance(const ArcCode& a, const ArcCode& b, const BipathPoset& poset) {
  return bottleneck_distance(a, b, poset);
}

inline MatchingResult bottleneck_matching(const BipathModule& m, const BipathModule& n) {
  if (m.poset() != n.poset()) throw DomainError("distance between modules over different bipath posets");
  return bottleneck_matching(orbit_blocks(arc_code(m), m.poset()), orbit_blocks(arc_code(n), n.poset()),
                             m.poset().period());
}

inline ExtRational bottleneck_distance(const BipathModule& m, const BipathModule& n) {
  return bottleneck_matching(m, n).epsilon;
}

inline ExtRational interleaving_distance(const BipathModule& m, const BipathModule& n) {
  return bottleneck_distance(m, n);
}

}  // namespace bipath
