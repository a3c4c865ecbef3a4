#pragma once

// Finite type-A quiver representations ("zigzags") and their interval
// barcodes.
//
// Vertices are 0..L-1 and edge e joins e and e+1. The alternating shape used
// throughout has its sources at even vertices. Barcodes are computed from the
// generalized rank (rank of limit -> colimit over a vertex range) by
// inclusion-exclusion.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "bipath/errors.hpp"
#include "bipath/field.hpp"

namespace bipath {

enum class Arrow : std::uint8_t { forward, backward };  // forward: e -> e+1

class ZigzagShape {
 public:
  ZigzagShape() : ZigzagShape(std::vector<Arrow>{}) {}
  explicit ZigzagShape(std::vector<Arrow> arrows) : arrows_(std::move(arrows)) {}

  // Sources at even vertices: e -> e+1 for even e, e+1 -> e for odd e.
  static ZigzagShape alternating(std::size_t length) {
    if (length == 0) throw DomainError("zigzag length must be at least 1");
    std::vector<Arrow> arrows(length - 1);
    for (std::size_t e = 0; e + 1 < length; ++e) arrows[e] = e % 2 == 0 ? Arrow::forward : Arrow::backward;
    return ZigzagShape(std::move(arrows));
  }

  static ZigzagShape linear(std::size_t length) {
    if (length == 0) throw DomainError("zigzag length must be at least 1");
    return ZigzagShape(std::vector<Arrow>(length - 1, Arrow::forward));
  }

  std::size_t length() const { return arrows_.size() + 1; }
  std::size_t edge_count() const { return arrows_.size(); }
  Arrow arrow(std::size_t e) const { return arrows_.at(e); }
  std::size_t source(std::size_t e) const { return arrow(e) == Arrow::forward ? e : e + 1; }
  std::size_t target(std::size_t e) const { return arrow(e) == Arrow::forward ? e + 1 : e; }

  friend bool operator==(const ZigzagShape&, const ZigzagShape&) = default;

 private:
  std::vector<Arrow> arrows_;
};

// Contiguous vertex range [first, last].
struct ZzInterval {
  std::size_t first = 0;
  std::size_t last = 0;

  bool contains(std::size_t v) const { return first <= v && v <= last; }
  friend auto operator<=>(const ZzInterval&, const ZzInterval&) = default;
};

using ZzBarcode = std::map<ZzInterval, std::size_t>;

// --- Points and decorated intervals of the infinite zigzag poset -----------
//
// ZZ = {(c, d) : c = d or c = d + 1} ⊂ Z^op × Z. Walking the Hasse diagram
// gives the linear position c + d: (x, x) sits at 2x and the minimum
// (x + 1, x) sits at 2x + 1.

struct ZzPoint {
  std::int64_t c = 0;
  std::int64_t d = 0;

  friend bool operator==(const ZzPoint&, const ZzPoint&) = default;
};

inline bool is_zz_point(ZzPoint p) { return p.c == p.d || p.c == p.d + 1; }

inline std::int64_t zz_position(ZzPoint p) {
  if (!is_zz_point(p))
    throw DomainError("(" + std::to_string(p.c) + ", " + std::to_string(p.d) + ") is not a zigzag point");
  return p.c + p.d;
}

inline ZzPoint zz_point_at(std::int64_t t) {
  if (t % 2 == 0) return {t / 2, t / 2};
  const std::int64_t x = (t - 1) / 2;  // t - 1 is even, so exact
  return {x + 1, x};
}

enum class Decoration : std::uint8_t { closed_closed, closed_open, open_closed, open_open };

// [a,b]_ZZ, [a,b)_ZZ, (a,b]_ZZ or (a,b)_ZZ.
struct DecoratedInterval {
  Decoration kind = Decoration::closed_closed;
  std::int64_t a = 0;
  std::int64_t b = 0;
  bool whole = false;  // all of ZZ; a and b are ignored

  static DecoratedInterval whole_zigzag() { return {Decoration::closed_closed, 0, 0, true}; }
  static DecoratedInterval cc(std::int64_t a, std::int64_t b) { return {Decoration::closed_closed, a, b}; }
  static DecoratedInterval co(std::int64_t a, std::int64_t b) { return {Decoration::closed_open, a, b}; }
  static DecoratedInterval oc(std::int64_t a, std::int64_t b) { return {Decoration::open_closed, a, b}; }
  static DecoratedInterval oo(std::int64_t a, std::int64_t b) { return {Decoration::open_open, a, b}; }

  // Literal set-membership definition.
  bool contains(ZzPoint p) const {
    if (!is_zz_point(p)) return false;
    if (whole) return true;
    switch (kind) {
      case Decoration::closed_closed: return p.c <= b && p.d >= a;
      case Decoration::closed_open: return a <= p.d && p.d < b;
      case Decoration::open_closed: return a < p.c && p.c <= b;
      case Decoration::open_open: return p.c > a && p.d < b;
    }
    return false;
  }

  friend bool operator==(const DecoratedInterval&, const DecoratedInterval&) = default;
};

inline std::string to_string(const DecoratedInterval& iv) {
  if (iv.whole) return "ZZ";
  const bool left_closed = iv.kind == Decoration::closed_closed || iv.kind == Decoration::closed_open;
  const bool right_closed = iv.kind == Decoration::closed_closed || iv.kind == Decoration::open_closed;
  return std::string(left_closed ? "[" : "(") + std::to_string(iv.a) + ", " + std::to_string(iv.b) +
         (right_closed ? "]" : ")");
}

// Inclusive position range [s, e] of a finite decorated interval.
//   [a,b] : (a,a)   .. (b,b)      -> [2a,   2b]
//   [a,b) : (a,a)   .. (b,b-1)    -> [2a,   2b-1]
//   (a,b] : (a+1,a) .. (b,b)      -> [2a+1, 2b]
//   (a,b) : (a+1,a) .. (b,b-1)    -> [2a+1, 2b-1]
inline std::pair<std::int64_t, std::int64_t> zz_positions(const DecoratedInterval& iv) {
  if (iv.whole) throw DomainError("the whole zigzag has no finite position range");
  const bool left_closed = iv.kind == Decoration::closed_closed || iv.kind == Decoration::closed_open;
  const bool right_closed = iv.kind == Decoration::closed_closed || iv.kind == Decoration::open_closed;
  const std::int64_t s = left_closed ? 2 * iv.a : 2 * iv.a + 1;
  const std::int64_t e = right_closed ? 2 * iv.b : 2 * iv.b - 1;
  if (s > e) throw DomainError("empty decorated interval " + to_string(iv));
  return {s, e};
}

inline DecoratedInterval decorate_positions(std::int64_t s, std::int64_t e) {
  if (s > e) throw DomainError("empty position range");
  const bool left_closed = s % 2 == 0;
  const bool right_closed = e % 2 == 0;
  const std::int64_t a = left_closed ? s / 2 : (s - 1) / 2;
  const std::int64_t b = right_closed ? e / 2 : (e + 1) / 2;
  const Decoration kind = left_closed ? (right_closed ? Decoration::closed_closed : Decoration::closed_open)
                                      : (right_closed ? Decoration::open_closed : Decoration::open_open);
  return {kind, a, b};
}

// Vertex v of a finite zigzag sits at position origin + v.
inline DecoratedInterval decorate(const ZzInterval& iv, std::int64_t origin) {
  return decorate_positions(origin + static_cast<std::int64_t>(iv.first),
                            origin + static_cast<std::int64_t>(iv.last));
}

inline ZzInterval undecorate(const DecoratedInterval& iv, std::int64_t origin, std::size_t length) {
  if (iv.whole) return {0, length - 1};
  auto [s, e] = zz_positions(iv);
  if (s < origin || e >= origin + static_cast<std::int64_t>(length))
    throw DomainError(to_string(iv) + " does not fit in the finite zigzag");
  return {static_cast<std::size_t>(s - origin), static_cast<std::size_t>(e - origin)};
}

// --- Representations --------------------------------------------------------

class ZigzagRep {
 public:
  ZigzagRep() = default;

  // maps[e] is oriented from shape.source(e) to shape.target(e).
  ZigzagRep(ZigzagShape shape, Field field, std::vector<std::size_t> dims, std::vector<Matrix> maps)
      : shape_(std::move(shape)), field_(field), dims_(std::move(dims)), maps_(std::move(maps)) {
    if (dims_.size() != shape_.length())
      throw ValidationError("expected " + std::to_string(shape_.length()) + " dimensions, got " +
                            std::to_string(dims_.size()));
    if (maps_.size() != shape_.edge_count())
      throw ValidationError("expected " + std::to_string(shape_.edge_count()) + " maps, got " +
                            std::to_string(maps_.size()));
    for (std::size_t e = 0; e < maps_.size(); ++e) {
      const Matrix& m = maps_[e];
      if (m.field() != field_) throw ValidationError("map " + std::to_string(e) + " is over a different field");
      if (m.rows() != dims_[shape_.target(e)] || m.cols() != dims_[shape_.source(e)])
        throw ValidationError("map " + std::to_string(shape_.source(e)) + "->" + std::to_string(shape_.target(e)) +
                              " has shape " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                              ", expected " + std::to_string(dims_[shape_.target(e)]) + "x" +
                              std::to_string(dims_[shape_.source(e)]));
    }
  }

  static ZigzagRep zero(const ZigzagShape& shape, Field field) {
    std::vector<Matrix> maps(shape.edge_count(), Matrix(0, 0, field));
    return ZigzagRep(shape, field, std::vector<std::size_t>(shape.length(), 0), std::move(maps));
  }

  const ZigzagShape& shape() const { return shape_; }
  const Field& field() const { return field_; }
  std::size_t length() const { return shape_.length(); }
  const std::vector<std::size_t>& dims() const { return dims_; }
  std::size_t dim(std::size_t v) const { return dims_.at(v); }
  const Matrix& map(std::size_t e) const { return maps_.at(e); }
  const std::vector<Matrix>& maps() const { return maps_; }

  friend bool operator==(const ZigzagRep&, const ZigzagRep&) = default;

 private:
  ZigzagShape shape_;
  Field field_;
  std::vector<std::size_t> dims_;
  std::vector<Matrix> maps_;
};

inline void require_range(const ZigzagShape& shape, const ZzInterval& iv) {
  if (iv.first > iv.last || iv.last >= shape.length())
    throw DomainError("vertex range [" + std::to_string(iv.first) + ", " + std::to_string(iv.last) +
                      "] is empty or outside a zigzag of length " + std::to_string(shape.length()));
}

inline ZigzagRep interval_rep(const ZigzagShape& shape, Field field, const ZzInterval& iv) {
  require_range(shape, iv);
  std::vector<std::size_t> dims(shape.length(), 0);
  for (std::size_t v = iv.first; v <= iv.last; ++v) dims[v] = 1;
  std::vector<Matrix> maps;
  maps.reserve(shape.edge_count());
  for (std::size_t e = 0; e < shape.edge_count(); ++e) {
    const std::size_t s = shape.source(e), t = shape.target(e);
    maps.push_back(iv.contains(s) && iv.contains(t) ? Matrix::identity(1, field)
                                                    : Matrix(dims[t], dims[s], field));
  }
  return ZigzagRep(shape, field, std::move(dims), std::move(maps));
}

inline ZigzagRep direct_sum(const ZigzagRep& a, const ZigzagRep& b) {
  if (a.shape() != b.shape() || a.field() != b.field())
    throw DomainError("direct sum of zigzags with different shapes or fields");
  std::vector<std::size_t> dims(a.length());
  for (std::size_t v = 0; v < a.length(); ++v) dims[v] = a.dim(v) + b.dim(v);
  std::vector<Matrix> maps;
  maps.reserve(a.maps().size());
  for (std::size_t e = 0; e < a.maps().size(); ++e) maps.push_back(block_diag(a.map(e), b.map(e)));
  return ZigzagRep(a.shape(), a.field(), std::move(dims), std::move(maps));
}

// Edge u -> v becomes bases[v] * map * bases[u]^-1.
inline ZigzagRep change_basis(const ZigzagRep& r, const std::vector<Matrix>& bases) {
  if (bases.size() != r.length()) throw DomainError("one basis matrix per vertex is required");
  std::vector<Matrix> inverses;
  inverses.reserve(bases.size());
  for (std::size_t v = 0; v < bases.size(); ++v) {
    if (bases[v].rows() != r.dim(v) || bases[v].cols() != r.dim(v))
      throw DomainError("basis at vertex " + std::to_string(v) + " has the wrong size");
    inverses.push_back(inverse(bases[v]));  // throws on singular input
  }
  std::vector<Matrix> maps;
  maps.reserve(r.maps().size());
  for (std::size_t e = 0; e < r.maps().size(); ++e) {
    const auto s = r.shape().source(e), t = r.shape().target(e);
    maps.push_back(bases[t] * r.map(e) * inverses[s]);
  }
  return ZigzagRep(r.shape(), r.field(), r.dims(), std::move(maps));
}

inline ZigzagRep random_change_basis(const ZigzagRep& r, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Matrix> bases;
  bases.reserve(r.length());
  for (std::size_t v = 0; v < r.length(); ++v) bases.push_back(random_invertible(r.dim(v), rng, r.field()));
  return change_basis(r, bases);
}

// Rank of lim -> colim of r restricted to the vertex range, built from one
// stacked constraint system (limit) and one stacked relation system
// (colimit).
inline std::size_t generalized_rank(const ZigzagRep& r, const ZzInterval& range) {
  require_range(r.shape(), range);
  const Field& f = r.field();
  std::vector<std::size_t> offset(range.last - range.first + 2, 0);
  for (std::size_t v = range.first; v <= range.last; ++v)
    offset[v - range.first + 1] = offset[v - range.first] + r.dim(v);
  const std::size_t total = offset.back();
  if (total == 0) return 0;
  auto block = [&](std::size_t v) { return offset[v - range.first]; };

  std::size_t constraint_rows = 0, relation_cols = 0;
  for (std::size_t e = range.first; e < range.last; ++e) {
    constraint_rows += r.dim(r.shape().target(e));
    relation_cols += r.dim(r.shape().source(e));
  }

  // Limit: rows  map_e x_src - x_tgt = 0.
  Matrix constraints(constraint_rows, total, f);
  // Colimit relations: columns  iota_tgt(map_e y) - iota_src(y).
  Matrix relations(total, relation_cols, f);
  std::size_t row = 0, col = 0;
  for (std::size_t e = range.first; e < range.last; ++e) {
    const std::size_t s = r.shape().source(e), t = r.shape().target(e);
    const Matrix& m = r.map(e);
    for (std::size_t i = 0; i < r.dim(t); ++i) {
      for (std::size_t j = 0; j < r.dim(s); ++j) constraints.set(row + i, block(s) + j, m.at(i, j));
      constraints.set(row + i, block(t) + i, f.neg(1));
    }
    for (std::size_t j = 0; j < r.dim(s); ++j) {
      for (std::size_t i = 0; i < r.dim(t); ++i) relations.set(block(t) + i, col + j, m.at(i, j));
      relations.set(block(s) + j, col + j, f.neg(1));
    }
    row += r.dim(t);
    col += r.dim(s);
  }

  const Matrix limit = kernel_basis(constraints);       // total x k
  const Matrix to_colimit = cokernel_projection(relations);  // c x total
  // A compatible family is sent to the colimit through any one vertex; use
  // the first.
  Matrix at_first(total, limit.cols(), f);
  for (std::size_t i = 0; i < r.dim(range.first); ++i)
    for (std::size_t k = 0; k < limit.cols(); ++k) at_first.set(i, k, limit.at(i, k));
  return rank(to_colimit * at_first);
}

// table[p][q] = generalized rank of [p, q] for p <= q.
//
// Same quantity as generalized_rank, but for each left end p the limit and
// colimit are grown one edge at a time (pullback for backward edges, pushout
// for forward ones), which keeps every matrix about the size of one vertex
// space.
inline std::vector<std::vector<std::size_t>> generalized_rank_table(const ZigzagRep& r) {
  const std::size_t length = r.length();
  const Field& f = r.field();
  std::vector<std::vector<std::size_t>> table(length, std::vector<std::size_t>(length, 0));
  for (std::size_t p = 0; p < length; ++p) {
    const std::size_t dp = r.dim(p);
    if (dp == 0) continue;
    table[p][p] = dp;
    Matrix lim_p = Matrix::identity(dp, f), lim_q = lim_p;  // limit -> V_p, V_q
    Matrix col_p = lim_p, col_q = lim_p;                    // V_p, V_q -> colimit
    for (std::size_t q = p; q + 1 < length; ++q) {
      const Matrix& m = r.map(q);
      const std::size_t dn = r.dim(q + 1);
      if (r.shape().arrow(q) == Arrow::forward) {
        lim_q = m * lim_q;
        const std::size_t c = col_q.rows();
        const Matrix proj = cokernel_projection(vstack(col_q, negate(m)));
        col_p = proj * vstack(col_p, Matrix(dn, dp, f));
        col_q = proj * vstack(Matrix(c, dn, f), Matrix::identity(dn, f));
      } else {
        const std::size_t k = lim_q.cols();
        const Matrix ker = kernel_basis(hstack(lim_q, negate(m)));
        lim_p = hstack(lim_p, Matrix(dp, dn, f)) * ker;
        lim_q = hstack(Matrix(dn, k, f), Matrix::identity(dn, f)) * ker;
        col_q = col_q * m;
      }
      const std::size_t rk = rank(col_p * lim_p);
      table[p][q + 1] = rk;
      if (rk == 0) break;  // ranks only shrink as the range grows
    }
  }
  return table;
}

inline bool conserves(const ZzBarcode& bars, const std::vector<std::size_t>& dims) {
  std::vector<std::size_t> covered(dims.size(), 0);
  for (const auto& [iv, mult] : bars) {
    if (iv.last >= dims.size()) return false;
    for (std::size_t v = iv.first; v <= iv.last; ++v) covered[v] += mult;
  }
  return covered == dims;
}

inline ZzBarcode barcode(const ZigzagRep& r) {
  const auto table = generalized_rank_table(r);
  const std::size_t length = r.length();
  auto rk = [&](std::ptrdiff_t p, std::ptrdiff_t q) -> std::int64_t {
    if (p < 0 || q >= static_cast<std::ptrdiff_t>(length)) return 0;
    return static_cast<std::int64_t>(table[p][q]);
  };
  ZzBarcode bars;
  for (std::size_t p = 0; p < length; ++p) {
    for (std::size_t q = p; q < length; ++q) {
      const auto sp = static_cast<std::ptrdiff_t>(p), sq = static_cast<std::ptrdiff_t>(q);
      const std::int64_t mult = rk(sp, sq) - rk(sp - 1, sq) - rk(sp, sq + 1) + rk(sp - 1, sq + 1);
      if (mult < 0)
        throw ConsistencyError("negative multiplicity for [" + std::to_string(p) + ", " + std::to_string(q) + "]");
      if (mult > 0) bars[{p, q}] = static_cast<std::size_t>(mult);
    }
  }
  if (!conserves(bars, r.dims())) throw ConsistencyError("barcode does not account for every dimension");
  return bars;
}

inline ZzBarcode barcode_union(ZzBarcode a, const ZzBarcode& b) {
  for (const auto& [iv, mult] : b) a[iv] += mult;
  return a;
}

// Direct sum of the given intervals (with multiplicity) in a random basis.
inline ZigzagRep planted_zigzag(const ZigzagShape& shape, Field field, const ZzBarcode& bars,
                                std::uint64_t seed) {
  ZigzagRep r = ZigzagRep::zero(shape, field);
  for (const auto& [iv, mult] : bars)
    for (std::size_t k = 0; k < mult; ++k) r = direct_sum(r, interval_rep(shape, field, iv));
  return random_change_basis(r, seed);
}

// Random multiset of up to max_bars intervals whose pointwise coverage never
// exceeds max_dim.
inline ZzBarcode random_bars(std::size_t length, std::size_t max_bars, std::size_t max_dim,
                             std::mt19937_64& rng) {
  ZzBarcode bars;
  std::vector<std::size_t> covered(length, 0);
  std::uniform_int_distribution<std::size_t> count_dist(0, max_bars);
  const std::size_t count = count_dist(rng);
  for (std::size_t k = 0, attempts = 0; k < count && attempts < 20 * (count + 1); ++attempts) {
    std::uniform_int_distribution<std::size_t> vertex(0, length - 1);
    std::size_t a = vertex(rng), b = vertex(rng);
    if (a > b) std::swap(a, b);
    bool fits = true;
    for (std::size_t v = a; v <= b; ++v) fits = fits && covered[v] < max_dim;
    if (!fits) continue;
    for (std::size_t v = a; v <= b; ++v) ++covered[v];
    ++bars[{a, b}];
    ++k;
  }
  return bars;
}

}  // namespace bipath
