#include "bipath/fibered.hpp"

#include <random>
#include <set>

#include <gtest/gtest.h>

#include "oracles.hpp"

namespace bipath {
namespace {

const Field kGF2{2};
const Field kGF5{5};

oracle::IntMatrix to_ints(const Matrix& m) {
  oracle::IntMatrix out(m.rows(), std::vector<std::int64_t>(m.cols()));
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out[r][c] = m.at(r, c);
  return out;
}

// k R for the rectangle R = [r0, r1] x [c0, c1].
GridModule rectangle_module(std::size_t rows, std::size_t cols, Field field, GridPoint lo, GridPoint hi) {
  auto inside = [&](std::size_t r, std::size_t c) { return lo.r <= r && r <= hi.r && lo.c <= c && c <= hi.c; };
  std::vector<std::size_t> dims;
  for (std::size_t r = 1; r <= rows; ++r)
    for (std::size_t c = 1; c <= cols; ++c) dims.push_back(inside(r, c) ? 1 : 0);
  auto edge = [&](std::size_t r, std::size_t c, std::size_t r2, std::size_t c2) {
    if (inside(r, c) && inside(r2, c2)) return Matrix::identity(1, field);
    return Matrix(inside(r2, c2) ? 1 : 0, inside(r, c) ? 1 : 0, field);
  };
  std::vector<Matrix> hmaps, vmaps;
  for (std::size_t r = 1; r <= rows; ++r)
    for (std::size_t c = 1; c < cols; ++c) hmaps.push_back(edge(r, c, r, c + 1));
  for (std::size_t r = 1; r < rows; ++r)
    for (std::size_t c = 1; c <= cols; ++c) vmaps.push_back(edge(r, c, r + 1, c));
  return GridModule(rows, cols, field, std::move(dims), std::move(hmaps), std::move(vmaps));
}

GridModule grid_direct_sum(const GridModule& a, const GridModule& b) {
  std::vector<std::size_t> dims(a.dims().size());
  for (std::size_t k = 0; k < dims.size(); ++k) dims[k] = a.dims()[k] + b.dims()[k];
  std::vector<Matrix> hmaps, vmaps;
  for (std::size_t k = 0; k < a.hmaps().size(); ++k) hmaps.push_back(block_diag(a.hmaps()[k], b.hmaps()[k]));
  for (std::size_t k = 0; k < a.vmaps().size(); ++k) vmaps.push_back(block_diag(a.vmaps()[k], b.vmaps()[k]));
  return GridModule(a.rows(), a.cols(), a.field(), std::move(dims), std::move(hmaps), std::move(vmaps));
}

std::set<GridPoint> support_points(const BipathEmbedding& f, const BipathInterval& iv) {
  std::set<GridPoint> out;
  const auto in = support(f.poset, iv);
  for (std::size_t v = 0; v < in.size(); ++v)
    if (in[v]) out.insert(f.targets[v]);
  return out;
}

std::set<std::pair<GridPoint, GridPoint>> bars_as_points(const ZzBarcode& bars, const MonotonePath& path) {
  std::set<std::pair<GridPoint, GridPoint>> out;
  for (const auto& [iv, mult] : bars) {
    EXPECT_EQ(mult, 1u);
    out.insert({path.points[iv.first], path.points[iv.last]});
  }
  return out;
}

// A random monotone chain of k points from a to b (inclusive).
std::vector<GridPoint> random_chain(GridPoint a, GridPoint b, std::size_t k, std::mt19937_64& rng) {
  std::vector<std::size_t> rs, cs;
  for (std::size_t i = 0; i + 2 < k; ++i) {
    rs.push_back(a.r + rng() % (b.r - a.r + 1));
    cs.push_back(a.c + rng() % (b.c - a.c + 1));
  }
  std::sort(rs.begin(), rs.end());
  std::sort(cs.begin(), cs.end());
  std::vector<GridPoint> out{a};
  for (std::size_t i = 0; i < rs.size(); ++i) out.push_back({rs[i], cs[i]});
  out.push_back(b);
  return out;
}

BipathEmbedding random_embedding(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  const BipathPoset poset(2 + rng() % 3, 1 + rng() % 3);
  const GridPoint lo{1 + rng() % rows, 1 + rng() % cols};
  const GridPoint hi{lo.r + rng() % (rows - lo.r + 1), lo.c + rng() % (cols - lo.c + 1)};
  std::vector<GridPoint> targets(poset.vertex_count());
  const auto top = random_chain(lo, hi, poset.n() + 1, rng);
  const auto bottom = random_chain(lo, hi, poset.m() + 1, rng);
  const auto top_vertices = poset.top_chain(), bottom_vertices = poset.bottom_chain();
  for (std::size_t k = 0; k < top.size(); ++k) targets[top_vertices[k]] = top[k];
  for (std::size_t k = 0; k < bottom.size(); ++k) targets[bottom_vertices[k]] = bottom[k];
  return {poset, targets};
}

TEST(GridModuleTest, ValidatesSquares) {
  const auto ones = rectangle_module(3, 3, kGF2, {1, 1}, {3, 3});
  EXPECT_NO_THROW(validate_grid(ones));

  std::vector<Matrix> h(2, Matrix::identity(1, kGF5)), v(2, Matrix::identity(1, kGF5));
  v[1] = Matrix::from_rows({{2}}, kGF5);
  const GridModule bad(2, 2, kGF5, {1, 1, 1, 1}, h, v);
  try {
    validate_grid(bad);
    FAIL() << "expected a validation error";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("(1,1)"), std::string::npos) << e.what();
  }
  EXPECT_THROW(GridModule(1, 2, kGF2, {1, 2}, {Matrix::identity(1, kGF2)}, {}), ValidationError);
}

TEST(MlambdaTest, MatchesTheDisplayedDiagram) {
  const auto m1 = build_example_Mlambda(1), mm1 = build_example_Mlambda(-1);
  EXPECT_EQ(m1.dim({2, 2}), 2u);
  std::vector<std::size_t> row2, row1;
  for (std::size_t c = 1; c <= 5; ++c) {
    row2.push_back(m1.dim({2, c}));
    row1.push_back(m1.dim({1, c}));
  }
  EXPECT_EQ(row2, (std::vector<std::size_t>{1, 2, 2, 1, 0}));
  EXPECT_EQ(row1, (std::vector<std::size_t>{0, 1, 2, 2, 1}));
  EXPECT_NO_THROW(validate_grid(m1));
  EXPECT_NO_THROW(validate_grid(mm1));

  std::size_t differing = 0;
  for (std::size_t k = 0; k < m1.hmaps().size(); ++k) differing += m1.hmaps()[k] != mm1.hmaps()[k];
  for (std::size_t k = 0; k < m1.vmaps().size(); ++k) differing += m1.vmaps()[k] != mm1.vmaps()[k];
  EXPECT_EQ(differing, 2u);
  EXPECT_EQ(m1.hmap(2, 3), Matrix::from_rows({{1, -1}}, kGF5));
  EXPECT_EQ(mm1.vmap(1, 4), Matrix::from_rows({{-1, -1}}, kGF5));
}

TEST(PullbackTest, Examples) {
  const auto ones = rectangle_module(3, 4, kGF5, {1, 1}, {3, 4});
  const BipathEmbedding f{BipathPoset(2, 2), {{1, 1}, {2, 2}, {3, 4}, {1, 3}}};
  const auto m = pullback(ones, f);
  for (const auto& a : m.arrow_maps()) EXPECT_EQ(a, Matrix::identity(1, kGF5));

  const BipathEmbedding constant{BipathPoset(3, 2), std::vector<GridPoint>(5, GridPoint{2, 2})};
  const auto example = build_example_Mlambda(1);
  const auto c = pullback(example, constant);
  for (const auto& a : c.arrow_maps()) EXPECT_EQ(a, Matrix::identity(2, kGF5));

  const BipathEmbedding backwards{BipathPoset(2, 1), {{2, 2}, {1, 1}, {3, 3}}};
  EXPECT_THROW(pullback(ones, backwards), DomainError);
}

TEST(FiberedArcCodeTest, ReproducesExample) {
  const auto f = example_embedding();
  const auto codes = fibered_arc_code(build_example_Mlambda(1), {f});
  const auto codes_neg = fibered_arc_code(build_example_Mlambda(-1), {f});
  ASSERT_EQ(codes.size(), 1u);
  EXPECT_EQ(codes[0], (ArcCode{{BipathInterval::left(2, 4), 1}, {BipathInterval::left(1, 0), 1}}));
  EXPECT_EQ(codes_neg[0], (ArcCode{{BipathInterval::left(1, 4), 1}, {BipathInterval::left(2, 0), 1}}));
  EXPECT_NE(codes[0], codes_neg[0]);

  using Support = std::set<GridPoint>;
  std::set<Support> supports, supports_neg;
  for (const auto& [iv, mult] : codes[0]) supports.insert(support_points(f, iv));
  for (const auto& [iv, mult] : codes_neg[0]) supports_neg.insert(support_points(f, iv));
  EXPECT_EQ(supports, (std::set<Support>{{{1, 3}, {2, 3}, {2, 4}, {1, 5}}, {{1, 3}, {2, 3}}}));
  EXPECT_EQ(supports_neg, (std::set<Support>{{{1, 3}, {2, 3}, {1, 5}}, {{1, 3}, {2, 3}, {2, 4}}}));
}

TEST(FiberedArcCodeTest, ZeroModule) {
  const auto codes = fibered_arc_code(GridModule::zero(2, 5, kGF5), {example_embedding(), example_embedding()});
  ASSERT_EQ(codes.size(), 2u);
  EXPECT_TRUE(codes[0].empty());
  EXPECT_TRUE(codes[1].empty());
}

TEST(LineBarcodeTest, ReproducesExample) {
  const auto lines = example_lines();
  using Bars = std::set<std::pair<GridPoint, GridPoint>>;
  const std::vector<Bars> expected{
      {{{2, 1}, {2, 4}}, {{2, 2}, {2, 3}}},
      {{{1, 3}, {2, 4}}, {{1, 3}, {1, 3}}},
      {{{1, 2}, {2, 4}}},
  };
  for (std::int64_t lambda : {1, -1}) {
    const auto m = build_example_Mlambda(lambda);
    for (std::size_t k = 0; k < lines.size(); ++k)
      EXPECT_EQ(bars_as_points(line_barcode(m, lines[k]), lines[k]), expected[k]) << "lambda " << lambda << " line " << k;
  }
}

TEST(LineBarcodeTest, SinglePointAndInvalidPaths) {
  const auto m = build_example_Mlambda(1);
  EXPECT_EQ(line_barcode(m, {{{2, 2}}}), (ZzBarcode{{{0, 0}, 2}}));
  EXPECT_THROW(line_barcode(m, {{}}), DomainError);
  EXPECT_THROW(line_barcode(m, {{{1, 2}, {1, 2}}}), DomainError);
  EXPECT_THROW(line_barcode(m, {{{2, 2}, {1, 3}}}), DomainError);
  EXPECT_THROW(line_barcode(m, {{{2, 2}, {3, 3}}}), DomainError);
}

// Along a single row the fiber is an ordinary persistence module; compare with
// the rank-of-composites barcode.
TEST(LineBarcodeTest, OneRowMatchesRankOracle) {
  std::mt19937_64 rng(404);
  for (int trial = 0; trial < 100; ++trial) {
    const Field f = trial % 2 ? kGF2 : kGF5;
    const std::size_t cols = 1 + rng() % 9;
    const auto bars = random_bars(cols, 6, 4, rng);
    const auto rep = planted_zigzag(ZigzagShape::linear(cols), f, bars, rng());
    const GridModule m(1, cols, f, rep.dims(), rep.maps(), {});
    MonotonePath row;
    for (std::size_t c = 1; c <= cols; ++c) row.points.push_back({1, c});
    std::vector<oracle::IntMatrix> maps;
    for (const auto& a : rep.maps()) maps.push_back(to_ints(a));
    const auto expected = oracle::chain_barcode(rep.dims(), maps, f.modulus());
    ZzBarcode want;
    for (const auto& [iv, mult] : expected) want[ZzInterval{iv.first, iv.second}] = mult;
    EXPECT_EQ(line_barcode(m, row), want) << "trial " << trial;
  }
}

// Every interval of the pulled-back arc code lives where M is nonzero.
TEST(PullbackTest, SupportsStayInsideTheModuleSupport) {
  std::mt19937_64 rng(505);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t rows = 2 + rng() % 4, cols = 2 + rng() % 4;
    GridModule m = GridModule::zero(rows, cols, kGF5);
    for (auto k = 1 + rng() % 4; k > 0; --k) {
      const GridPoint lo{1 + rng() % rows, 1 + rng() % cols};
      const GridPoint hi{lo.r + rng() % (rows - lo.r + 1), lo.c + rng() % (cols - lo.c + 1)};
      m = grid_direct_sum(m, rectangle_module(rows, cols, kGF5, lo, hi));
    }
    validate_grid(m);
    const auto f = random_embedding(rows, cols, rng);
    const auto pulled = pullback(m, f);
    const auto code = arc_code(pulled);
    EXPECT_TRUE(conserves(f.poset, code, pulled.dims()));
    for (const auto& [iv, mult] : code)
      for (const auto& p : support_points(f, iv)) EXPECT_GT(m.dim(p), 0u) << to_string(iv);
  }
}

TEST(H0BifiltrationTest, Examples) {
  const auto one = h0_bifiltration(3, 3, {{1, 1}}, {});
  for (auto d : one.dims()) EXPECT_EQ(d, 0u);

  const auto three = h0_bifiltration(2, 2, {{1, 1}, {1, 1}, {1, 1}}, {});
  for (auto d : three.dims()) EXPECT_EQ(d, 2u);
  EXPECT_EQ(three.hmap(1, 1), Matrix::identity(2, kGF2));

  const auto merging = h0_bifiltration(1, 4, {{1, 1}, {1, 1}, {1, 1}}, {{0, 1, {1, 2}}, {1, 2, {1, 3}}});
  EXPECT_EQ(merging.dims(), (std::vector<std::size_t>{2, 1, 0, 0}));
  EXPECT_EQ(merging.hmap(1, 1), Matrix::from_rows({{0, 1}}, kGF2));

  EXPECT_THROW(h0_bifiltration(2, 2, {{1, 1}}, {{0, 3, {2, 2}}}), DomainError);
  EXPECT_THROW(h0_bifiltration(2, 2, {{1, 1}, {2, 2}}, {{0, 1, {1, 2}}}), DomainError);
  EXPECT_THROW(h0_bifiltration(2, 2, {{3, 1}}, {}), DomainError);
}

// Dimensions and map ranks against a component count done from scratch at
// every grid point.
TEST(H0BifiltrationTest, MatchesComponentCounts) {
  std::mt19937_64 rng(606);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t rows = 1 + rng() % 4, cols = 1 + rng() % 4, n = 1 + rng() % 6;
    std::vector<GridPoint> grades;
    for (std::size_t v = 0; v < n; ++v) grades.push_back({1 + rng() % rows, 1 + rng() % cols});
    std::vector<GradedEdge> edges;
    for (auto k = rng() % 8; k > 0; --k) {
      const std::size_t u = rng() % n, v = rng() % n;
      const GridPoint lo{std::max(grades[u].r, grades[v].r), std::max(grades[u].c, grades[v].c)};
      edges.push_back({u, v, {lo.r + rng() % (rows - lo.r + 1), lo.c + rng() % (cols - lo.c + 1)}});
    }
    const auto m = h0_bifiltration(rows, cols, grades, edges);
    auto snapshot = [&](GridPoint x) {
      std::vector<bool> present(n);
      std::vector<std::pair<std::size_t, std::size_t>> live;
      for (std::size_t v = 0; v < n; ++v) present[v] = grid_leq(grades[v], x);
      for (const auto& e : edges)
        if (grid_leq(e.grade, x)) live.emplace_back(e.u, e.v);
      return std::make_pair(present, live);
    };
    const auto [present_top, live_top] = snapshot({rows, cols});
    const GridPoint top{rows, cols};
    for (std::size_t r = 1; r <= rows; ++r)
      for (std::size_t c = 1; c <= cols; ++c) {
        const GridPoint x{r, c};
        const auto [present, live] = snapshot(x);
        const std::size_t comps = oracle::component_count(present, live);
        ASSERT_EQ(m.dim(x), comps == 0 ? 0 : comps - 1);
        // Rank of M_{x -> top}: components at the top corner reached from x, minus one.
        const auto same_component = [&](std::size_t v, std::size_t w) {
          auto joined = live_top;
          joined.emplace_back(v, w);
          return oracle::component_count(present_top, joined) == oracle::component_count(present_top, live_top);
        };
        std::set<std::size_t> names;
        for (std::size_t v = 0; v < n; ++v) {
          if (!present[v]) continue;
          std::size_t name = v;
          for (std::size_t w = 0; w < v; ++w)
            if (same_component(v, w)) {
              name = w;
              break;
            }
          names.insert(name);
        }
        const std::size_t hit = names.size();
        const std::size_t expected_rank = hit == 0 ? 0 : hit - 1;
        ASSERT_EQ(rank(m.map(x, top)), expected_rank) << "trial " << trial << " at " << to_string(x);
      }
  }
}

}  // namespace
}  // namespace bipath
