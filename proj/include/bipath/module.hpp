#pragma once

// Bipath posets, their interval modules, and arc-code computation through a
// finite zigzag slice of the covering map.

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
#include "bipath/zigzag.hpp"

namespace bipath {

// B(n, m) on vertices {0, ..., n+m-1}, ordered by the two maximal chains
//   0 < 1 < ... < n   and   0 < n+m-1 < n+m-2 < ... < n+1 < n.
class BipathPoset {
 public:
  BipathPoset(std::size_t n, std::size_t m) : n_(n), m_(m) {
    if (n < 2) throw DomainError("bipath top parameter n must be at least 2");
    if (m < 1) throw DomainError("bipath bottom parameter m must be at least 1");
  }

  std::size_t n() const { return n_; }
  std::size_t m() const { return m_; }
  std::size_t period() const { return n_ + m_ - 1; }
  std::size_t vertex_count() const { return n_ + m_; }

  bool on_top_chain(std::size_t v) const { return v <= n_; }
  bool on_bottom_chain(std::size_t v) const { return v == 0 || (v >= n_ && v < n_ + m_); }

  std::vector<std::size_t> top_chain() const {
    std::vector<std::size_t> chain;
    for (std::size_t v = 0; v <= n_; ++v) chain.push_back(v);
    return chain;
  }
  std::vector<std::size_t> bottom_chain() const {
    std::vector<std::size_t> chain{0};
    for (std::size_t v = n_ + m_ - 1; v > n_; --v) chain.push_back(v);
    chain.push_back(n_);
    return chain;
  }

  // Hasse arrows in storage order: the top chain ascending, then the bottom
  // chain 0 -> n+m-1 -> ... -> n+1 -> n.
  std::vector<std::pair<std::size_t, std::size_t>> arrows() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t v = 0; v < n_; ++v) out.emplace_back(v, v + 1);
    const auto bottom = bottom_chain();
    for (std::size_t k = 0; k + 1 < bottom.size(); ++k) out.emplace_back(bottom[k], bottom[k + 1]);
    return out;
  }

  bool leq(std::size_t u, std::size_t v) const {
    check_vertex(u);
    check_vertex(v);
    if (u == v || u == 0 || v == n_) return true;
    if (u < n_ && v < n_) return u < v;        // top interior
    if (u > n_ && v > n_) return u > v;        // bottom interior runs downward in label
    return false;
  }

  void check_vertex(std::size_t v) const {
    if (v >= vertex_count())
      throw DomainError("vertex " + std::to_string(v) + " is not in B(" + std::to_string(n_) + ", " +
                        std::to_string(m_) + ")");
  }

  // The covering map ZZ -> B. Period 2N in position, i.e. N in each
  // coordinate.
  std::size_t covering_vertex(ZzPoint p) const {
    const std::int64_t t = zz_position(p);
    const auto n = static_cast<std::int64_t>(n_), m = static_cast<std::int64_t>(m_);
    const std::int64_t lo = 3 - 2 * m;  // position of (-m+2, -m+1)
    const std::int64_t span = 2 * static_cast<std::int64_t>(period());
    std::int64_t r = (t - lo) % span;
    if (r < 0) r += span;
    const std::int64_t u = lo + r;  // representative in [3 - 2m, 2n]
    if (u == 1) return 0;
    if (u >= 2 && u <= 2 * n - 1) return static_cast<std::size_t>(u / 2);
    if (u == 2 * n) return n_;
    const std::int64_t i = (2 - u) / 2;  // u in {-2i+1, -2i+2}, 1 <= i <= m-1
    return static_cast<std::size_t>(n + m - i);
  }

  // The finite slice (-m+1, n+m)_ZZ; its vertex 0 sits at position 3 - 2m.
  std::int64_t slice_origin() const { return 3 - 2 * static_cast<std::int64_t>(m_); }
  std::size_t slice_length() const { return 2 * n_ + 4 * m_ - 3; }
  ZigzagShape slice_shape() const { return ZigzagShape::alternating(slice_length()); }
  DecoratedInterval slice_interval() const {
    return DecoratedInterval::oo(1 - static_cast<std::int64_t>(m_), static_cast<std::int64_t>(n_ + m_));
  }
  ZzPoint slice_point(std::size_t v) const { return zz_point_at(slice_origin() + static_cast<std::int64_t>(v)); }

  friend bool operator==(const BipathPoset&, const BipathPoset&) = default;

 private:
  std::size_t n_;
  std::size_t m_;
};

enum class IntervalKind : std::uint8_t { full, left, right, top, bottom };

inline const char* to_string(IntervalKind kind) {
  switch (kind) {
    case IntervalKind::full: return "full";
    case IntervalKind::left: return "left";
    case IntervalKind::right: return "right";
    case IntervalKind::top: return "top";
    case IntervalKind::bottom: return "bottom";
  }
  return "?";
}

// Bottom(i, j) is {z : j <= z <= i} in the poset order, so i <= j as labels.
struct BipathInterval {
  IntervalKind kind = IntervalKind::full;
  std::size_t i = 0;
  std::size_t j = 0;

  static BipathInterval full() { return {IntervalKind::full, 0, 0}; }
  static BipathInterval left(std::size_t i, std::size_t j) { return {IntervalKind::left, i, j}; }
  static BipathInterval right(std::size_t i, std::size_t j) { return {IntervalKind::right, i, j}; }
  static BipathInterval top(std::size_t i, std::size_t j) { return {IntervalKind::top, i, j}; }
  static BipathInterval bottom(std::size_t i, std::size_t j) { return {IntervalKind::bottom, i, j}; }

  friend auto operator<=>(const BipathInterval&, const BipathInterval&) = default;
};

inline std::string to_string(const BipathInterval& iv) {
  if (iv.kind == IntervalKind::full) return "full";
  return std::string(to_string(iv.kind)) + "[" + std::to_string(iv.i) + ", " + std::to_string(iv.j) + "]";
}

inline bool is_valid_interval(const BipathPoset& poset, const BipathInterval& iv) {
  const std::size_t n = poset.n(), last = poset.n() + poset.m() - 1;
  const bool bottom_interior_j = iv.j > n && iv.j <= last;
  switch (iv.kind) {
    case IntervalKind::full: return iv.i == 0 && iv.j == 0;
    case IntervalKind::left: return iv.i < n && (iv.j == 0 || bottom_interior_j);
    case IntervalKind::right: return iv.i >= 1 && iv.i <= n && iv.j >= n && iv.j <= last;
    case IntervalKind::top: return iv.i >= 1 && iv.i <= iv.j && iv.j < n;
    case IntervalKind::bottom: return iv.i > n && iv.i <= iv.j && iv.j <= last;
  }
  return false;
}

inline void require_valid(const BipathPoset& poset, const BipathInterval& iv) {
  if (!is_valid_interval(poset, iv))
    throw DomainError(to_string(iv) + " is not an interval of B(" + std::to_string(poset.n()) + ", " +
                      std::to_string(poset.m()) + ")");
}

// Membership mask over vertices 0..n+m-1.
inline std::vector<bool> support(const BipathPoset& poset, const BipathInterval& iv) {
  require_valid(poset, iv);
  const std::size_t n = poset.n(), count = poset.vertex_count();
  std::vector<bool> in(count, false);
  switch (iv.kind) {
    case IntervalKind::full: std::fill(in.begin(), in.end(), true); break;
    case IntervalKind::left:
      for (std::size_t v = 0; v <= iv.i; ++v) in[v] = true;
      if (iv.j != 0)
        for (std::size_t v = iv.j; v < count; ++v) in[v] = true;
      break;
    case IntervalKind::right:
      for (std::size_t v = iv.i; v <= n; ++v) in[v] = true;
      for (std::size_t v = n + 1; v <= iv.j; ++v) in[v] = true;
      break;
    case IntervalKind::top:
    case IntervalKind::bottom:
      for (std::size_t v = iv.i; v <= iv.j; ++v) in[v] = true;
      break;
  }
  return in;
}

inline std::vector<BipathInterval> enumerate_intervals(const BipathPoset& poset) {
  const std::size_t n = poset.n(), last = poset.n() + poset.m() - 1;
  std::vector<BipathInterval> out{BipathInterval::full()};
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(BipathInterval::left(i, 0));
    for (std::size_t j = n + 1; j <= last; ++j) out.push_back(BipathInterval::left(i, j));
  }
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = n; j <= last; ++j) out.push_back(BipathInterval::right(i, j));
  for (std::size_t i = 1; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) out.push_back(BipathInterval::top(i, j));
  for (std::size_t i = n + 1; i <= last; ++i)
    for (std::size_t j = i; j <= last; ++j) out.push_back(BipathInterval::bottom(i, j));
  return out;
}

using ArcCode = std::map<BipathInterval, std::size_t>;

inline std::size_t total_multiplicity(const ArcCode& code) {
  std::size_t total = 0;
  for (const auto& [iv, mult] : code) total += mult;
  return total;
}

// --- Modules ------------------------------------------------------------------

class BipathModule {
 public:
  // arrow_maps follow BipathPoset::arrows() order. Throws ValidationError on
  // mismatched shapes or when the two chains 0 -> n do not commute.
  BipathModule(BipathPoset poset, Field field, std::vector<std::size_t> dims, std::vector<Matrix> arrow_maps)
      : poset_(poset), field_(field), dims_(std::move(dims)), arrow_maps_(std::move(arrow_maps)) {
    if (dims_.size() != poset_.vertex_count())
      throw ValidationError("expected " + std::to_string(poset_.vertex_count()) + " dimensions, got " +
                            std::to_string(dims_.size()));
    const auto arrows = poset_.arrows();
    if (arrow_maps_.size() != arrows.size())
      throw ValidationError("expected " + std::to_string(arrows.size()) + " arrow maps, got " +
                            std::to_string(arrow_maps_.size()));
    for (std::size_t k = 0; k < arrows.size(); ++k) {
      const auto [s, t] = arrows[k];
      const Matrix& a = arrow_maps_[k];
      if (a.field() != field_) throw ValidationError("arrow map over a different field");
      if (a.rows() != dims_[t] || a.cols() != dims_[s])
        throw ValidationError("arrow " + std::to_string(s) + "->" + std::to_string(t) + " has shape " +
                              std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + ", expected " +
                              std::to_string(dims_[t]) + "x" + std::to_string(dims_[s]));
    }
    if (chain_composite(poset_.top_chain()) != chain_composite(poset_.bottom_chain()))
      throw ValidationError("top and bottom composites 0 -> " + std::to_string(poset_.n()) + " differ");
  }

  static BipathModule zero(const BipathPoset& poset, Field field) {
    std::vector<Matrix> maps(poset.arrows().size(), Matrix(0, 0, field));
    return BipathModule(poset, field, std::vector<std::size_t>(poset.vertex_count(), 0), std::move(maps));
  }

  const BipathPoset& poset() const { return poset_; }
  const Field& field() const { return field_; }
  const std::vector<std::size_t>& dims() const { return dims_; }
  std::size_t dim(std::size_t v) const { return dims_.at(v); }
  const std::vector<Matrix>& arrow_maps() const { return arrow_maps_; }

  // The internal map M_{u -> v} for u <= v.
  Matrix map(std::size_t u, std::size_t v) const {
    if (!poset_.leq(u, v))
      throw DomainError(std::to_string(u) + " is not below " + std::to_string(v));
    const auto chain = poset_.on_top_chain(u) && poset_.on_top_chain(v) ? poset_.top_chain() : poset_.bottom_chain();
    const std::size_t first = static_cast<std::size_t>(std::find(chain.begin(), chain.end(), u) - chain.begin());
    const std::size_t last = static_cast<std::size_t>(std::find(chain.begin(), chain.end(), v) - chain.begin());
    return composite(chain, first, last);
  }

  friend bool operator==(const BipathModule&, const BipathModule&) = default;

 private:
  std::size_t arrow_index(std::size_t s, std::size_t t) const {
    const auto arrows = poset_.arrows();
    for (std::size_t k = 0; k < arrows.size(); ++k)
      if (arrows[k] == std::make_pair(s, t)) return k;
    throw DomainError("no Hasse arrow " + std::to_string(s) + "->" + std::to_string(t));
  }

  Matrix composite(const std::vector<std::size_t>& chain, std::size_t first, std::size_t last) const {
    Matrix acc = Matrix::identity(dims_[chain[first]], field_);
    for (std::size_t k = first; k < last; ++k) acc = arrow_maps_[arrow_index(chain[k], chain[k + 1])] * acc;
    return acc;
  }

  Matrix chain_composite(const std::vector<std::size_t>& chain) const {
    return composite(chain, 0, chain.size() - 1);
  }

  BipathPoset poset_;
  Field field_;
  std::vector<std::size_t> dims_;
  std::vector<Matrix> arrow_maps_;
};

inline BipathModule interval_module(const BipathPoset& poset, Field field, const BipathInterval& iv) {
  const auto in = support(poset, iv);
  std::vector<std::size_t> dims(poset.vertex_count());
  for (std::size_t v = 0; v < dims.size(); ++v) dims[v] = in[v] ? 1 : 0;
  std::vector<Matrix> maps;
  for (const auto& [s, t] : poset.arrows())
    maps.push_back(in[s] && in[t] ? Matrix::identity(1, field) : Matrix(dims[t], dims[s], field));
  return BipathModule(poset, field, std::move(dims), std::move(maps));
}

inline BipathModule direct_sum(const BipathModule& a, const BipathModule& b) {
  if (a.poset() != b.poset() || a.field() != b.field())
    throw DomainError("direct sum of bipath modules over different posets or fields");
  std::vector<std::size_t> dims(a.dims().size());
  for (std::size_t v = 0; v < dims.size(); ++v) dims[v] = a.dim(v) + b.dim(v);
  std::vector<Matrix> maps;
  for (std::size_t k = 0; k < a.arrow_maps().size(); ++k) maps.push_back(block_diag(a.arrow_maps()[k], b.arrow_maps()[k]));
  return BipathModule(a.poset(), a.field(), std::move(dims), std::move(maps));
}

inline BipathModule change_basis(const BipathModule& module, const std::vector<Matrix>& bases) {
  if (bases.size() != module.dims().size()) throw DomainError("one basis matrix per vertex is required");
  std::vector<Matrix> inverses;
  for (std::size_t v = 0; v < bases.size(); ++v) {
    if (bases[v].rows() != module.dim(v) || bases[v].cols() != module.dim(v))
      throw DomainError("basis at vertex " + std::to_string(v) + " has the wrong size");
    inverses.push_back(inverse(bases[v]));
  }
  std::vector<Matrix> maps;
  const auto arrows = module.poset().arrows();
  for (std::size_t k = 0; k < arrows.size(); ++k)
    maps.push_back(bases[arrows[k].second] * module.arrow_maps()[k] * inverses[arrows[k].first]);
  return BipathModule(module.poset(), module.field(), module.dims(), std::move(maps));
}

// --- The slice ------------------------------------------------------------------

inline ZigzagRep restrict_to_slice(const BipathModule& module) {
  const BipathPoset& poset = module.poset();
  const ZigzagShape shape = poset.slice_shape();
  std::vector<std::size_t> image(shape.length());
  std::vector<std::size_t> dims(shape.length());
  for (std::size_t v = 0; v < shape.length(); ++v) {
    image[v] = poset.covering_vertex(poset.slice_point(v));
    dims[v] = module.dim(image[v]);
  }
  std::vector<Matrix> maps;
  for (std::size_t e = 0; e < shape.edge_count(); ++e)
    maps.push_back(module.map(image[shape.source(e)], image[shape.target(e)]));
  return ZigzagRep(shape, module.field(), std::move(dims), std::move(maps));
}

// Bipath interval -> the slice interval whose multiplicity equals its own.
using SliceCorrespondence = DecoratedInterval (*)(const BipathPoset&, const BipathInterval&);

inline DecoratedInterval corresponding_slice_interval(const BipathPoset& poset, const BipathInterval& iv) {
  require_valid(poset, iv);
  const auto n = static_cast<std::int64_t>(poset.n()), m = static_cast<std::int64_t>(poset.m());
  const auto i = static_cast<std::int64_t>(iv.i), j = static_cast<std::int64_t>(iv.j);
  switch (iv.kind) {
    case IntervalKind::full: return poset.slice_interval();
    case IntervalKind::left: return j == 0 ? DecoratedInterval::oo(0, i + 1) : DecoratedInterval::oo(-n - m + j, i + 1);
    case IntervalKind::right: return DecoratedInterval::cc(i, j);
    case IntervalKind::top: return DecoratedInterval::co(i, j + 1);
    case IntervalKind::bottom: return DecoratedInterval::oc(i - 1, j);
  }
  throw DomainError("unknown interval kind");
}

// Slice barcode of the restriction of k I, one entry per bar.
inline std::vector<DecoratedInterval> slice_restriction_images(const BipathPoset& poset, const BipathInterval& iv) {
  require_valid(poset, iv);
  const auto n = static_cast<std::int64_t>(poset.n()), m = static_cast<std::int64_t>(poset.m());
  const auto i = static_cast<std::int64_t>(iv.i), j = static_cast<std::int64_t>(iv.j);
  switch (iv.kind) {
    case IntervalKind::full: return {poset.slice_interval()};
    case IntervalKind::left:
      // The last slice vertex (n+m, n+m-1) covers 0 again, so k[i,0] also
      // leaves a one-vertex bar there.
      if (j == 0) return {DecoratedInterval::oo(0, i + 1), DecoratedInterval::oo(n + m - 1, n + m)};
      return {DecoratedInterval::oo(-n - m + j, i + 1), DecoratedInterval::oo(j - 1, n + m)};
    case IntervalKind::right:
      if (j == n) return {DecoratedInterval::cc(i, n)};
      return {DecoratedInterval::cc(i, j), DecoratedInterval::oc(-m + 1, -n - m + j + 1)};
    case IntervalKind::top: return {DecoratedInterval::co(i, j + 1)};
    case IntervalKind::bottom:
      return {DecoratedInterval::oc(i - 1, j), DecoratedInterval::oc(-n - m + i, -n - m + j + 1)};
  }
  throw DomainError("unknown interval kind");
}

inline ZzInterval slice_range(const BipathPoset& poset, const DecoratedInterval& iv) {
  return undecorate(iv, poset.slice_origin(), poset.slice_length());
}

// The slice barcode an arc code must produce.
inline ZzBarcode expected_slice_barcode(const BipathPoset& poset, const ArcCode& code) {
  ZzBarcode bars;
  for (const auto& [iv, mult] : code)
    for (const auto& image : slice_restriction_images(poset, iv)) bars[slice_range(poset, image)] += mult;
  return bars;
}

// Read the arc code off the slice barcode, then expand it back through the
// restriction images and demand the same barcode.
inline ArcCode arc_code(const BipathModule& module,
                        SliceCorrespondence correspondence = corresponding_slice_interval) {
  const BipathPoset& poset = module.poset();
  const ZzBarcode bars = barcode(restrict_to_slice(module));
  ArcCode code;
  for (const auto& iv : enumerate_intervals(poset)) {
    const DecoratedInterval target = correspondence(poset, iv);
    ZzInterval range;
    try {
      range = slice_range(poset, target);
    } catch (const DomainError&) {
      throw ConsistencyError(to_string(iv) + " corresponds to " + to_string(target) + ", which is outside the slice");
    }
    if (auto it = bars.find(range); it != bars.end()) code[iv] = it->second;
  }
  if (expected_slice_barcode(poset, code) != bars)
    throw ConsistencyError("arc code does not reproduce the slice barcode; the interval correspondence is off");
  return code;
}

inline bool conserves(const BipathPoset& poset, const ArcCode& code, const std::vector<std::size_t>& dims) {
  std::vector<std::size_t> covered(poset.vertex_count(), 0);
  for (const auto& [iv, mult] : code) {
    const auto in = support(poset, iv);
    for (std::size_t v = 0; v < in.size(); ++v)
      if (in[v]) covered[v] += mult;
  }
  return covered == dims;
}

struct PlantedModule {
  BipathModule module;
  ArcCode code;
};

inline ArcCode random_arc_code(const BipathPoset& poset, std::size_t max_summands, std::mt19937_64& rng) {
  const auto intervals = enumerate_intervals(poset);
  std::uniform_int_distribution<std::size_t> count_dist(0, max_summands);
  std::uniform_int_distribution<std::size_t> pick(0, intervals.size() - 1);
  ArcCode code;
  for (std::size_t k = count_dist(rng); k > 0; --k) ++code[intervals[pick(rng)]];
  return code;
}

inline BipathModule module_from_arc_code(const BipathPoset& poset, Field field, const ArcCode& code) {
  BipathModule module = BipathModule::zero(poset, field);
  for (const auto& [iv, mult] : code)
    for (std::size_t k = 0; k < mult; ++k) module = direct_sum(module, interval_module(poset, field, iv));
  return module;
}

// Direct sum of random interval modules, conjugated by a random basis at
// every vertex.
inline PlantedModule plant_random(const BipathPoset& poset, Field field, std::size_t max_summands, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  ArcCode code = random_arc_code(poset, max_summands, rng);
  const BipathModule plain = module_from_arc_code(poset, field, code);
  std::vector<Matrix> bases;
  for (std::size_t v = 0; v < poset.vertex_count(); ++v) bases.push_back(random_invertible(plain.dim(v), rng, field));
  return {change_basis(plain, bases), std::move(code)};
}

}  // namespace bipath
