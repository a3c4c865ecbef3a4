#pragma once

// Text formats for zigzag, bipath and grid modules, bipath embeddings,
// graph bifiltrations and monotone paths, plus the JSON forms the CLI prints.
//
// Blank lines and lines starting with '#' are ignored everywhere. Matrix
// blocks list `rows` lines of `cols` integers in [0, p); a block with no rows
// or no columns has no lines at all.

#include <charconv>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "bipath/distances.hpp"
#include "bipath/errors.hpp"
#include "bipath/fibered.hpp"
#include "bipath/field.hpp"
#include "bipath/module.hpp"
#include "bipath/zigzag.hpp"

namespace bipath {

using Json = nlohmann::json;

namespace detail {

struct Line {
  std::size_t number = 0;
  std::vector<std::string> tokens;
};

class LineReader {
 public:
  explicit LineReader(std::string_view text) {
    std::size_t number = 0, pos = 0;
    while (pos <= text.size()) {
      const std::size_t end = std::min(text.find('\n', pos), text.size());
      ++number;
      std::istringstream in{std::string(text.substr(pos, end - pos))};
      Line line{number, {}};
      for (std::string tok; in >> tok;) line.tokens.push_back(tok);
      if (!line.tokens.empty()) last_line_ = number;
      if (!line.tokens.empty() && line.tokens.front().front() != '#') lines_.push_back(std::move(line));
      pos = end + 1;
    }
  }

  bool done() const { return next_ == lines_.size(); }
  const Line& peek() const {
    if (done()) throw ParseError(last_line_, "unexpected end of input");
    return lines_[next_];
  }
  const Line& next() {
    const Line& line = peek();
    ++next_;
    return line;
  }
  void expect_done() const {
    if (!done()) throw ParseError(lines_[next_].number, "unexpected trailing content '" + lines_[next_].tokens[0] + "'");
  }

 private:
  std::vector<Line> lines_;
  std::size_t next_ = 0;
  std::size_t last_line_ = 1;
};

inline std::uint64_t parse_uint(const Line& line, std::size_t k, const char* what) {
  if (k >= line.tokens.size()) throw ParseError(line.number, std::string("missing ") + what);
  const std::string& tok = line.tokens[k];
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc{} || ptr != tok.data() + tok.size())
    throw ParseError(line.number, std::string("expected a non-negative integer for ") + what + ", got '" + tok + "'");
  return value;
}

inline void expect_keyword(const Line& line, std::string_view keyword) {
  if (line.tokens.front() != keyword)
    throw ParseError(line.number, "expected " + std::string(keyword) + ", got '" + line.tokens.front() + "'");
}

inline void expect_arity(const Line& line, std::size_t count) {
  if (line.tokens.size() != count)
    throw ParseError(line.number, "'" + line.tokens.front() + "' line takes " + std::to_string(count - 1) +
                                      " values, got " + std::to_string(line.tokens.size() - 1));
}

// The field a file is read over: the header's modulus, or a --field override
// that every entry must already fit below.
class FieldChoice {
 public:
  FieldChoice(std::size_t header_line, std::uint64_t header_p, std::optional<std::uint32_t> override_p)
      : header_p_(header_p), override_p_(override_p) {
    if (header_p > 0xffffffffu || !Field::is_prime(static_cast<std::uint32_t>(header_p)))
      throw ParseError(header_line, "field modulus " + std::to_string(header_p) + " is not prime");
    field_ = Field(static_cast<std::uint32_t>(override_p ? *override_p : header_p));
  }

  const Field& field() const { return field_; }

  Scalar entry(const Line& line, std::size_t k) const {
    const std::uint64_t x = parse_uint(line, k, "matrix entry");
    if (x >= header_p_)
      throw ParseError(line.number, "entry " + std::to_string(x) + " is not in [0, " + std::to_string(header_p_) + ")");
    if (override_p_ && x >= *override_p_)
      throw ParseError(line.number, "entry " + std::to_string(x) + " does not fit the field override GF(" +
                                        std::to_string(*override_p_) + ")");
    return static_cast<Scalar>(x);
  }

 private:
  std::uint64_t header_p_;
  std::optional<std::uint32_t> override_p_;
  Field field_;
};

inline Matrix read_matrix(LineReader& in, const FieldChoice& fc, std::size_t rows, std::size_t cols) {
  Matrix a(rows, cols, fc.field());
  if (rows == 0 || cols == 0) return a;
  for (std::size_t r = 0; r < rows; ++r) {
    const Line& line = in.next();
    if (line.tokens.size() != cols)
      throw ParseError(line.number, "matrix row needs " + std::to_string(cols) + " entries, got " +
                                        std::to_string(line.tokens.size()));
    for (std::size_t c = 0; c < cols; ++c) a.set(r, c, fc.entry(line, c));
  }
  return a;
}

inline std::vector<std::size_t> read_dims(LineReader& in, std::size_t count) {
  const Line& line = in.next();
  expect_keyword(line, "DIMS");
  expect_arity(line, count + 1);
  std::vector<std::size_t> dims;
  for (std::size_t k = 1; k <= count; ++k) dims.push_back(parse_uint(line, k, "dimension"));
  return dims;
}

inline void write_matrix(std::ostream& out, const Matrix& a) {
  if (a.empty()) return;
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) out << (c ? " " : "") << a.at(r, c);
    out << '\n';
  }
}

inline void write_dims(std::ostream& out, const std::vector<std::size_t>& dims) {
  out << "DIMS";
  for (auto d : dims) out << ' ' << d;
  out << '\n';
}

// A constructor's DomainError becomes a parse error on the given line.
template <typename F>
auto at_line(std::size_t line, F&& build) {
  try {
    return build();
  } catch (const ValidationError&) {
    throw;
  } catch (const DomainError& e) {
    throw ParseError(line, e.what());
  }
}

}  // namespace detail

// First keyword of the first non-comment line, or "" for empty input.
inline std::string format_keyword(std::string_view text) {
  detail::LineReader in(text);
  return in.done() ? std::string() : in.peek().tokens.front();
}

// --- ZIGZAG <L> <p> ------------------------------------------------------------

// The orientation of each edge is read from its MAP header, so linear and
// alternating shapes share the format.
inline ZigzagRep parse_zigzag(std::string_view text, std::optional<std::uint32_t> field_override = std::nullopt) {
  detail::LineReader in(text);
  const auto& header = in.next();
  detail::expect_keyword(header, "ZIGZAG");
  detail::expect_arity(header, 3);
  const std::size_t length = detail::parse_uint(header, 1, "length");
  if (length == 0) throw ParseError(header.number, "zigzag length must be at least 1");
  const detail::FieldChoice fc(header.number, detail::parse_uint(header, 2, "field modulus"), field_override);
  const auto dims = detail::read_dims(in, length);

  std::vector<Arrow> arrows;
  std::vector<Matrix> maps;
  for (std::size_t e = 0; e + 1 < length; ++e) {
    const auto& line = in.next();
    detail::expect_keyword(line, "MAP");
    detail::expect_arity(line, 3);
    const std::size_t s = detail::parse_uint(line, 1, "source"), t = detail::parse_uint(line, 2, "target");
    if (s == e && t == e + 1) arrows.push_back(Arrow::forward);
    else if (s == e + 1 && t == e) arrows.push_back(Arrow::backward);
    else throw ParseError(line.number, "edge " + std::to_string(e) + " must join vertices " + std::to_string(e) +
                                           " and " + std::to_string(e + 1));
    maps.push_back(detail::read_matrix(in, fc, dims[t], dims[s]));
  }
  in.expect_done();
  return ZigzagRep(ZigzagShape(std::move(arrows)), fc.field(), dims, std::move(maps));
}

inline std::string write_zigzag(const ZigzagRep& r) {
  std::ostringstream out;
  out << "ZIGZAG " << r.length() << ' ' << r.field().modulus() << '\n';
  detail::write_dims(out, r.dims());
  for (std::size_t e = 0; e < r.shape().edge_count(); ++e) {
    out << "MAP " << r.shape().source(e) << ' ' << r.shape().target(e) << '\n';
    detail::write_matrix(out, r.map(e));
  }
  return out.str();
}

// --- BIPATH <n> <m> <p> --------------------------------------------------------

inline BipathModule parse_bipath(std::string_view text, std::optional<std::uint32_t> field_override = std::nullopt) {
  detail::LineReader in(text);
  const auto& header = in.next();
  detail::expect_keyword(header, "BIPATH");
  detail::expect_arity(header, 4);
  const BipathPoset poset = detail::at_line(header.number, [&] {
    return BipathPoset(detail::parse_uint(header, 1, "n"), detail::parse_uint(header, 2, "m"));
  });
  const detail::FieldChoice fc(header.number, detail::parse_uint(header, 3, "field modulus"), field_override);
  const auto dims = detail::read_dims(in, poset.vertex_count());

  std::vector<Matrix> maps;
  for (const auto& [s, t] : poset.arrows()) {
    const auto& line = in.next();
    detail::expect_keyword(line, "MAP");
    detail::expect_arity(line, 3);
    if (detail::parse_uint(line, 1, "source") != s || detail::parse_uint(line, 2, "target") != t)
      throw ParseError(line.number, "expected MAP " + std::to_string(s) + " " + std::to_string(t) + " here");
    maps.push_back(detail::read_matrix(in, fc, dims[t], dims[s]));
  }
  in.expect_done();
  return BipathModule(poset, fc.field(), dims, std::move(maps));
}

inline std::string write_bipath(const BipathModule& module) {
  std::ostringstream out;
  const auto& poset = module.poset();
  out << "BIPATH " << poset.n() << ' ' << poset.m() << ' ' << module.field().modulus() << '\n';
  detail::write_dims(out, module.dims());
  const auto arrows = poset.arrows();
  for (std::size_t k = 0; k < arrows.size(); ++k) {
    out << "MAP " << arrows[k].first << ' ' << arrows[k].second << '\n';
    detail::write_matrix(out, module.arrow_maps()[k]);
  }
  return out.str();
}

// --- GRID <rows> <cols> <p> ----------------------------------------------------

// DIMS runs row by row starting at row 1, the bottom row. HMAP r c is the map
// (r,c) -> (r,c+1) and VMAP r c the map (r,c) -> (r+1,c); omitted blocks are
// zero. Commutativity is not checked here; see validate_grid.
inline GridModule parse_grid(std::string_view text, std::optional<std::uint32_t> field_override = std::nullopt) {
  detail::LineReader in(text);
  const auto& header = in.next();
  detail::expect_keyword(header, "GRID");
  detail::expect_arity(header, 4);
  const std::size_t rows = detail::parse_uint(header, 1, "rows"), cols = detail::parse_uint(header, 2, "cols");
  if (rows == 0 || cols == 0) throw ParseError(header.number, "grid needs at least one row and one column");
  const detail::FieldChoice fc(header.number, detail::parse_uint(header, 3, "field modulus"), field_override);
  const auto dims = detail::read_dims(in, rows * cols);
  const auto dim = [&](std::size_t r, std::size_t c) { return dims[(r - 1) * cols + (c - 1)]; };

  std::vector<Matrix> hmaps, vmaps;
  for (std::size_t r = 1; r <= rows; ++r)
    for (std::size_t c = 1; c < cols; ++c) hmaps.emplace_back(dim(r, c + 1), dim(r, c), fc.field());
  for (std::size_t r = 1; r < rows; ++r)
    for (std::size_t c = 1; c <= cols; ++c) vmaps.emplace_back(dim(r + 1, c), dim(r, c), fc.field());
  std::vector<bool> seen_h(hmaps.size(), false), seen_v(vmaps.size(), false);

  while (!in.done()) {
    const auto& line = in.next();
    const bool horizontal = line.tokens.front() == "HMAP";
    if (!horizontal && line.tokens.front() != "VMAP")
      throw ParseError(line.number, "expected HMAP or VMAP, got '" + line.tokens.front() + "'");
    detail::expect_arity(line, 3);
    const std::size_t r = detail::parse_uint(line, 1, "row"), c = detail::parse_uint(line, 2, "column");
    const bool inside = r >= 1 && c >= 1 && (horizontal ? r <= rows && c < cols : r < rows && c <= cols);
    if (!inside)
      throw ParseError(line.number, line.tokens.front() + " " + std::to_string(r) + " " + std::to_string(c) +
                                        " leaves the " + std::to_string(rows) + "x" + std::to_string(cols) + " grid");
    const std::size_t k = horizontal ? (r - 1) * (cols - 1) + (c - 1) : (r - 1) * cols + (c - 1);
    auto& seen = horizontal ? seen_h : seen_v;
    if (seen[k]) throw ParseError(line.number, "duplicate " + line.tokens.front() + " block");
    seen[k] = true;
    const Matrix& slot = horizontal ? hmaps[k] : vmaps[k];
    (horizontal ? hmaps : vmaps)[k] = detail::read_matrix(in, fc, slot.rows(), slot.cols());
  }
  return GridModule(rows, cols, fc.field(), dims, std::move(hmaps), std::move(vmaps));
}

inline std::string write_grid(const GridModule& m) {
  std::ostringstream out;
  out << "GRID " << m.rows() << ' ' << m.cols() << ' ' << m.field().modulus() << '\n';
  detail::write_dims(out, m.dims());
  for (std::size_t r = 1; r <= m.rows(); ++r)
    for (std::size_t c = 1; c < m.cols(); ++c) {
      out << "HMAP " << r << ' ' << c << '\n';
      detail::write_matrix(out, m.hmap(r, c));
    }
  for (std::size_t r = 1; r < m.rows(); ++r)
    for (std::size_t c = 1; c <= m.cols(); ++c) {
      out << "VMAP " << r << ' ' << c << '\n';
      detail::write_matrix(out, m.vmap(r, c));
    }
  return out.str();
}

// --- EMBED <n> <m> -------------------------------------------------------------

inline BipathEmbedding parse_embedding(std::string_view text) {
  detail::LineReader in(text);
  const auto& header = in.next();
  detail::expect_keyword(header, "EMBED");
  detail::expect_arity(header, 3);
  BipathEmbedding f{detail::at_line(header.number,
                                    [&] {
                                      return BipathPoset(detail::parse_uint(header, 1, "n"),
                                                         detail::parse_uint(header, 2, "m"));
                                    }),
                    {}};
  for (std::size_t v = 0; v < f.poset.vertex_count(); ++v) {
    const auto& line = in.next();
    detail::expect_arity(line, 3);
    if (detail::parse_uint(line, 0, "vertex") != v)
      throw ParseError(line.number, "expected the target of vertex " + std::to_string(v) + " here");
    f.targets.push_back({detail::parse_uint(line, 1, "row"), detail::parse_uint(line, 2, "column")});
  }
  in.expect_done();
  return f;
}

inline std::string write_embedding(const BipathEmbedding& f) {
  std::ostringstream out;
  out << "EMBED " << f.poset.n() << ' ' << f.poset.m() << '\n';
  for (std::size_t v = 0; v < f.targets.size(); ++v) out << v << ' ' << f.targets[v].r << ' ' << f.targets[v].c << '\n';
  return out.str();
}

// --- PATH ----------------------------------------------------------------------

inline MonotonePath parse_path(std::string_view text) {
  detail::LineReader in(text);
  const auto& header = in.next();
  detail::expect_keyword(header, "PATH");
  detail::expect_arity(header, 1);
  MonotonePath path;
  while (!in.done()) {
    const auto& line = in.next();
    detail::expect_arity(line, 2);
    path.points.push_back({detail::parse_uint(line, 0, "row"), detail::parse_uint(line, 1, "column")});
  }
  if (path.points.empty()) throw ParseError(header.number, "path has no points");
  return path;
}

inline std::string write_path(const MonotonePath& path) {
  std::ostringstream out;
  out << "PATH\n";
  for (const auto& p : path.points) out << p.r << ' ' << p.c << '\n';
  return out.str();
}

// --- BIFILT <rows> <cols> ------------------------------------------------------

struct Bifiltration {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<GridPoint> vertex_grades;
  std::vector<GradedEdge> edges;
};

// Vertex ids must be exactly 0..k-1, each declared once, in any order.
inline Bifiltration parse_bifiltration(std::string_view text) {
  detail::LineReader in(text);
  const auto& header = in.next();
  detail::expect_keyword(header, "BIFILT");
  detail::expect_arity(header, 3);
  Bifiltration b{detail::parse_uint(header, 1, "rows"), detail::parse_uint(header, 2, "cols"), {}, {}};
  std::map<std::size_t, GridPoint> vertices;
  std::vector<std::size_t> edge_lines;
  while (!in.done()) {
    const auto& line = in.next();
    if (line.tokens.front() == "V") {
      detail::expect_arity(line, 4);
      const std::size_t id = detail::parse_uint(line, 1, "vertex id");
      const GridPoint grade{detail::parse_uint(line, 2, "row"), detail::parse_uint(line, 3, "column")};
      if (!vertices.emplace(id, grade).second) throw ParseError(line.number, "vertex " + std::to_string(id) + " declared twice");
    } else if (line.tokens.front() == "E") {
      detail::expect_arity(line, 5);
      b.edges.push_back({detail::parse_uint(line, 1, "vertex id"), detail::parse_uint(line, 2, "vertex id"),
                         {detail::parse_uint(line, 3, "row"), detail::parse_uint(line, 4, "column")}});
      edge_lines.push_back(line.number);
    } else {
      throw ParseError(line.number, "expected V or E, got '" + line.tokens.front() + "'");
    }
  }
  for (const auto& [id, grade] : vertices) {
    if (id != b.vertex_grades.size())
      throw ParseError(header.number, "vertex ids must be 0.." + std::to_string(vertices.size() - 1));
    b.vertex_grades.push_back(grade);
  }
  for (std::size_t k = 0; k < b.edges.size(); ++k)
    if (!vertices.contains(b.edges[k].u) || !vertices.contains(b.edges[k].v))
      throw ParseError(edge_lines[k], "edge references an undeclared vertex");
  return b;
}

inline GridModule h0_module(const Bifiltration& b, Field field = Field(2)) {
  return h0_bifiltration(b.rows, b.cols, b.vertex_grades, b.edges, field);
}

// --- JSON ----------------------------------------------------------------------

inline Json interval_json(const BipathInterval& iv) {
  Json j;
  j["kind"] = to_string(iv.kind);
  if (iv.kind == IntervalKind::full) {
    j["i"] = nullptr;
    j["j"] = nullptr;
  } else {
    j["i"] = iv.i;
    j["j"] = iv.j;
  }
  return j;
}

// Ordered full < left < right < top < bottom, then by (i, j).
inline Json arc_code_json(const ArcCode& code) {
  Json out = Json::array();
  for (const auto& [iv, mult] : code) {
    Json j = interval_json(iv);
    j["mult"] = mult;
    out.push_back(std::move(j));
  }
  return out;
}

inline std::string arc_code_text(const ArcCode& code) {
  std::ostringstream out;
  for (const auto& [iv, mult] : code) out << to_string(iv) << '\t' << mult << '\n';
  return out.str();
}

inline Json barcode_json(const ZzBarcode& bars) {
  Json out = Json::array();
  for (const auto& [iv, mult] : bars) out.push_back({{"first", iv.first}, {"last", iv.last}, {"mult", mult}});
  return out;
}

// Bars along a path, named by the grid points where they start and end.
inline Json path_barcode_json(const MonotonePath& path, const ZzBarcode& bars) {
  Json out = Json::array();
  for (const auto& [iv, mult] : bars) {
    const GridPoint s = path.points.at(iv.first), e = path.points.at(iv.last);
    out.push_back({{"birth", {s.r, s.c}}, {"death", {e.r, e.c}}, {"mult", mult}});
  }
  return out;
}

inline std::string path_barcode_text(const MonotonePath& path, const ZzBarcode& bars) {
  std::ostringstream out;
  for (const auto& [iv, mult] : bars)
    out << to_string(path.points.at(iv.first)) << '-' << to_string(path.points.at(iv.last)) << '\t' << mult << '\n';
  return out.str();
}

inline Json matching_json(const MatchingResult& result, const std::vector<OrbitBlock>& a,
                          const std::vector<OrbitBlock>& b) {
  Json pairs = Json::array(), del_a = Json::array(), del_b = Json::array();
  for (const auto& p : result.pairs)
    pairs.push_back({{"a", interval_json(a[p.a].source)},
                     {"b", interval_json(b[p.b].source)},
                     {"cost", p.cost.to_string()},
                     {"shift", p.shift}});
  for (auto i : result.deleted_a) del_a.push_back(interval_json(a[i].source));
  for (auto j : result.deleted_b) del_b.push_back(interval_json(b[j].source));
  return {{"pairs", pairs}, {"deleted_a", del_a}, {"deleted_b", del_b}};
}

// d_I equals d_B; both are reported.
inline Json distance_json(const MatchingResult& result, const std::vector<OrbitBlock>& a,
                          const std::vector<OrbitBlock>& b) {
  return {{"d_B", result.epsilon.to_string()},
          {"d_I", result.epsilon.to_string()},
          {"matching", matching_json(result, a, b)}};
}

}  // namespace bipath
