#pragma once

// Two-parameter grid modules and their fibers: pullbacks along bipath
// embeddings (fibered arc codes) and restrictions to monotone paths (fibered
// barcodes). Grid coordinates are 1-based (row, column), row 1 at the bottom.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "bipath/errors.hpp"
#include "bipath/field.hpp"
#include "bipath/module.hpp"
#include "bipath/zigzag.hpp"

namespace bipath {

struct GridPoint {
  std::size_t r = 1;
  std::size_t c = 1;

  friend auto operator<=>(const GridPoint&, const GridPoint&) = default;
};

inline bool grid_leq(GridPoint x, GridPoint y) { return x.r <= y.r && x.c <= y.c; }

inline std::string to_string(GridPoint p) { return "(" + std::to_string(p.r) + "," + std::to_string(p.c) + ")"; }

// hmaps[(r-1)*(cols-1) + (c-1)] : (r,c) -> (r,c+1)
// vmaps[(r-1)*cols + (c-1)]     : (r,c) -> (r+1,c)
class GridModule {
 public:
  GridModule(std::size_t rows, std::size_t cols, Field field, std::vector<std::size_t> dims,
             std::vector<Matrix> hmaps, std::vector<Matrix> vmaps)
      : rows_(rows), cols_(cols), field_(field), dims_(std::move(dims)), hmaps_(std::move(hmaps)),
        vmaps_(std::move(vmaps)) {
    if (rows_ == 0 || cols_ == 0) throw ValidationError("grid must have at least one row and one column");
    if (dims_.size() != rows_ * cols_)
      throw ValidationError("expected " + std::to_string(rows_ * cols_) + " dimensions, got " +
                            std::to_string(dims_.size()));
    if (hmaps_.size() != rows_ * (cols_ - 1)) throw ValidationError("wrong number of horizontal maps");
    if (vmaps_.size() != (rows_ - 1) * cols_) throw ValidationError("wrong number of vertical maps");
    for (std::size_t r = 1; r <= rows_; ++r)
      for (std::size_t c = 1; c <= cols_; ++c) {
        if (c < cols_) check_shape(hmap(r, c), {r, c}, {r, c + 1}, "HMAP");
        if (r < rows_) check_shape(vmap(r, c), {r, c}, {r + 1, c}, "VMAP");
      }
  }

  // All-zero module of the given extents.
  static GridModule zero(std::size_t rows, std::size_t cols, Field field) {
    return GridModule(rows, cols, field, std::vector<std::size_t>(rows * cols, 0),
                      std::vector<Matrix>(rows * (cols - 1), Matrix(0, 0, field)),
                      std::vector<Matrix>((rows - 1) * cols, Matrix(0, 0, field)));
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const Field& field() const { return field_; }
  const std::vector<std::size_t>& dims() const { return dims_; }
  std::size_t dim(GridPoint p) const { return dims_[index(p)]; }
  const Matrix& hmap(std::size_t r, std::size_t c) const { return hmaps_.at((r - 1) * (cols_ - 1) + (c - 1)); }
  const Matrix& vmap(std::size_t r, std::size_t c) const { return vmaps_.at((r - 1) * cols_ + (c - 1)); }
  const std::vector<Matrix>& hmaps() const { return hmaps_; }
  const std::vector<Matrix>& vmaps() const { return vmaps_; }

  void check_point(GridPoint p) const {
    if (p.r < 1 || p.r > rows_ || p.c < 1 || p.c > cols_)
      throw DomainError("grid point " + to_string(p) + " is outside the " + std::to_string(rows_) + "x" +
                        std::to_string(cols_) + " grid");
  }

  // M_{x -> y}, composed right along row x.r and then up column y.c.
  Matrix map(GridPoint x, GridPoint y) const {
    check_point(x);
    check_point(y);
    if (!grid_leq(x, y)) throw DomainError(to_string(x) + " is not below " + to_string(y));
    Matrix acc = Matrix::identity(dim(x), field_);
    for (std::size_t c = x.c; c < y.c; ++c) acc = hmap(x.r, c) * acc;
    for (std::size_t r = x.r; r < y.r; ++r) acc = vmap(r, y.c) * acc;
    return acc;
  }

  friend bool operator==(const GridModule&, const GridModule&) = default;

 private:
  std::size_t index(GridPoint p) const {
    check_point(p);
    return (p.r - 1) * cols_ + (p.c - 1);
  }

  void check_shape(const Matrix& a, GridPoint from, GridPoint to, const char* what) const {
    if (a.field() != field_) throw ValidationError(std::string(what) + " at " + to_string(from) + " is over another field");
    if (a.rows() != dim(to) || a.cols() != dim(from))
      throw ValidationError(std::string(what) + " " + to_string(from) + " -> " + to_string(to) + " has shape " +
                            std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + ", expected " +
                            std::to_string(dim(to)) + "x" + std::to_string(dim(from)));
  }

  std::size_t rows_;
  std::size_t cols_;
  Field field_;
  std::vector<std::size_t> dims_;
  std::vector<Matrix> hmaps_;
  std::vector<Matrix> vmaps_;
};

// Throws ValidationError naming the lower-left corner of the first unit square
// whose two composites differ.
inline void validate_grid(const GridModule& m) {
  for (std::size_t r = 1; r < m.rows(); ++r)
    for (std::size_t c = 1; c < m.cols(); ++c)
      if (m.vmap(r, c + 1) * m.hmap(r, c) != m.hmap(r + 1, c) * m.vmap(r, c))
        throw ValidationError("square at " + to_string(GridPoint{r, c}) + " does not commute");
}

// --- Fibers ---------------------------------------------------------------------

struct BipathEmbedding {
  BipathPoset poset;
  std::vector<GridPoint> targets;  // indexed by bipath vertex
};

inline void validate_embedding(const GridModule& m, const BipathEmbedding& f) {
  if (f.targets.size() != f.poset.vertex_count())
    throw DomainError("embedding needs " + std::to_string(f.poset.vertex_count()) + " targets, got " +
                      std::to_string(f.targets.size()));
  for (const auto& p : f.targets) m.check_point(p);
  for (const auto& [s, t] : f.poset.arrows())
    if (!grid_leq(f.targets[s], f.targets[t]))
      throw DomainError("embedding is not order-preserving on " + std::to_string(s) + " -> " + std::to_string(t));
}

inline BipathModule pullback(const GridModule& m, const BipathEmbedding& f) {
  validate_embedding(m, f);
  std::vector<std::size_t> dims;
  for (const auto& p : f.targets) dims.push_back(m.dim(p));
  std::vector<Matrix> maps;
  for (const auto& [s, t] : f.poset.arrows()) maps.push_back(m.map(f.targets[s], f.targets[t]));
  return BipathModule(f.poset, m.field(), std::move(dims), std::move(maps));
}

inline std::vector<ArcCode> fibered_arc_code(const GridModule& m, const std::vector<BipathEmbedding>& fs) {
  std::vector<ArcCode> out;
  for (const auto& f : fs) out.push_back(arc_code(pullback(m, f)));
  return out;
}

struct MonotonePath {
  std::vector<GridPoint> points;
};

inline void validate_path(const GridModule& m, const MonotonePath& path) {
  if (path.points.empty()) throw DomainError("path has no points");
  for (const auto& p : path.points) m.check_point(p);
  for (std::size_t k = 1; k < path.points.size(); ++k) {
    const GridPoint a = path.points[k - 1], b = path.points[k];
    if (a == b) throw DomainError("path repeats " + to_string(a));
    if (!grid_leq(a, b)) throw DomainError("path is not monotone at " + to_string(a) + " -> " + to_string(b));
  }
}

inline ZigzagRep restrict_to_path(const GridModule& m, const MonotonePath& path) {
  validate_path(m, path);
  std::vector<std::size_t> dims;
  for (const auto& p : path.points) dims.push_back(m.dim(p));
  std::vector<Matrix> maps;
  for (std::size_t k = 1; k < path.points.size(); ++k) maps.push_back(m.map(path.points[k - 1], path.points[k]));
  return ZigzagRep(ZigzagShape::linear(path.points.size()), m.field(), std::move(dims), std::move(maps));
}

// Bars index positions along the path.
inline ZzBarcode line_barcode(const GridModule& m, const MonotonePath& path) {
  return barcode(restrict_to_path(m, path));
}

// --- The M_lambda example ---------------------------------------------------------

inline GridModule build_example_Mlambda(std::int64_t lambda, Field field = Field(5)) {
  const auto rows = [&](std::vector<std::vector<std::int64_t>> entries) { return Matrix::from_rows(entries, field); };
  const Matrix id2 = Matrix::identity(2, field);
  // Row 1: 0, 1, 2, 2, 1.  Row 2: 1, 2, 2, 1, 0.
  std::vector<std::size_t> dims{0, 1, 2, 2, 1, 1, 2, 2, 1, 0};
  std::vector<Matrix> hmaps{
      Matrix(1, 0, field), rows({{0}, {1}}), id2, rows({{1, -1}}),
      rows({{1}, {0}}),    id2,              rows({{lambda, -1}}), Matrix(0, 1, field),
  };
  std::vector<Matrix> vmaps{Matrix(1, 0, field), rows({{0}, {1}}), id2, rows({{lambda, -1}}), Matrix(0, 1, field)};
  GridModule m(2, 5, field, std::move(dims), std::move(hmaps), std::move(vmaps));
  validate_grid(m);
  return m;
}

// f : B(3,2) -> G with image (1,3) < (2,3) < (2,4) < (2,5) and (1,3) < (1,5) < (2,5).
inline BipathEmbedding example_embedding() {
  return {BipathPoset(3, 2), {{1, 3}, {2, 3}, {2, 4}, {2, 5}, {1, 5}}};
}

// The grid points met by the lines of slope 0, 1 and 1/2.
inline std::vector<MonotonePath> example_lines() {
  return {
      {{{2, 1}, {2, 2}, {2, 3}, {2, 4}, {2, 5}}},
      {{{1, 3}, {2, 4}}},
      {{{1, 2}, {2, 4}}},
  };
}

// --- Reduced H0 of a one-critical graph bifiltration ---------------------------------

struct GradedEdge {
  std::size_t u = 0;
  std::size_t v = 0;
  GridPoint grade;
};

namespace detail {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  // Keeps the smaller label as the root.
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

// Components at one grid point, each named by its smallest vertex. The first
// component is the root; the rest index the basis {[c] - [root]}.
struct H0Frame {
  std::vector<std::size_t> label;       // vertex -> component name, or npos when absent
  std::vector<std::size_t> components;  // sorted names
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  std::size_t dim() const { return components.empty() ? 0 : components.size() - 1; }
  std::size_t basis_index(std::size_t name) const {
    return static_cast<std::size_t>(std::lower_bound(components.begin(), components.end(), name) - components.begin()) - 1;
  }
};

}  // namespace detail

inline GridModule h0_bifiltration(std::size_t rows, std::size_t cols, const std::vector<GridPoint>& vertex_grades,
                                  const std::vector<GradedEdge>& edges, Field field = Field(2)) {
  const std::size_t n = vertex_grades.size();
  auto in_grid = [&](GridPoint p) { return p.r >= 1 && p.r <= rows && p.c >= 1 && p.c <= cols; };
  for (std::size_t v = 0; v < n; ++v)
    if (!in_grid(vertex_grades[v])) throw DomainError("vertex " + std::to_string(v) + " is graded outside the grid");
  for (const auto& e : edges) {
    if (e.u >= n || e.v >= n)
      throw DomainError("edge " + std::to_string(e.u) + "-" + std::to_string(e.v) + " references an absent vertex");
    if (!in_grid(e.grade)) throw DomainError("edge graded outside the grid");
    if (!grid_leq(vertex_grades[e.u], e.grade) || !grid_leq(vertex_grades[e.v], e.grade))
      throw DomainError("edge " + std::to_string(e.u) + "-" + std::to_string(e.v) + " is graded below an endpoint");
  }

  std::vector<detail::H0Frame> frames(rows * cols);
  std::vector<std::size_t> dims(rows * cols);
  for (std::size_t r = 1; r <= rows; ++r)
    for (std::size_t c = 1; c <= cols; ++c) {
      const GridPoint x{r, c};
      detail::DisjointSets sets(n);
      for (const auto& e : edges)
        if (grid_leq(e.grade, x)) sets.unite(e.u, e.v);
      auto& frame = frames[(r - 1) * cols + (c - 1)];
      frame.label.assign(n, detail::H0Frame::npos);
      for (std::size_t v = 0; v < n; ++v)
        if (grid_leq(vertex_grades[v], x)) frame.label[v] = sets.find(v);
      for (std::size_t v = 0; v < n; ++v)
        if (frame.label[v] == v) frame.components.push_back(v);
      dims[(r - 1) * cols + (c - 1)] = frame.dim();
    }

  const auto induced = [&](const detail::H0Frame& from, const detail::H0Frame& to) {
    Matrix a(to.dim(), from.dim(), field);
    if (from.dim() == 0) return a;
    const std::size_t root = to.label[from.components.front()];
    for (std::size_t k = 1; k < from.components.size(); ++k) {
      const std::size_t image = to.label[from.components[k]];
      if (image == root) continue;
      if (image != to.components.front()) a.set(to.basis_index(image), k - 1, field.add(a.at(to.basis_index(image), k - 1), 1));
      if (root != to.components.front()) a.set(to.basis_index(root), k - 1, field.sub(a.at(to.basis_index(root), k - 1), 1));
    }
    return a;
  };
  std::vector<Matrix> hmaps, vmaps;
  for (std::size_t r = 1; r <= rows; ++r)
    for (std::size_t c = 1; c < cols; ++c)
      hmaps.push_back(induced(frames[(r - 1) * cols + (c - 1)], frames[(r - 1) * cols + c]));
  for (std::size_t r = 1; r < rows; ++r)
    for (std::size_t c = 1; c <= cols; ++c)
      vmaps.push_back(induced(frames[(r - 1) * cols + (c - 1)], frames[r * cols + (c - 1)]));
  GridModule m(rows, cols, field, std::move(dims), std::move(hmaps), std::move(vmaps));
  validate_grid(m);
  return m;
}

}  // namespace bipath
