// bipath: decompose bipath modules, compare them, and evaluate fibered arc
// codes of grid modules.
//
// Exit status: 0 success, 1 an input fails validation, 2 parse or usage error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bipath/bipath.hpp"

namespace {

using namespace bipath;

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string format = "text";
  std::optional<std::uint32_t> field;
  std::uint64_t seed = 1;
  std::size_t trials = 100;
  std::string out;
  std::vector<std::string> files;
};

// The file being parsed, for error messages.
std::string current_file;

struct Input {
  std::string path;
  std::string text;
  std::string keyword;
};

Input read_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  current_file = path;
  Input input{path, buf.str(), {}};
  input.keyword = format_keyword(input.text);
  return input;
}

void require_keyword(const Input& in, std::initializer_list<const char*> allowed) {
  for (const char* k : allowed)
    if (in.keyword == k) return;
  std::string list;
  for (const char* k : allowed) list += (list.empty() ? "" : ", ") + std::string(k);
  throw UsageError(in.path + ": expected a " + list + " file, got '" + in.keyword + "'");
}

bool json_output(const Options& opt) { return opt.format == "json"; }

// The module a grid-like input describes: a GRID file or the reduced H0 of a
// BIFILT file.
GridModule grid_from(const Input& in, const Options& opt) {
  if (in.keyword == "BIFILT") return h0_module(parse_bifiltration(in.text), Field(opt.field.value_or(2)));
  return parse_grid(in.text, opt.field);
}

Json zigzag_json(const ZigzagRep& r) {
  Json maps = Json::array();
  for (std::size_t e = 0; e < r.shape().edge_count(); ++e) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < r.map(e).rows(); ++i) {
      const auto row = r.map(e).row(i);
      rows.push_back(std::vector<Scalar>(row.begin(), row.end()));
    }
    maps.push_back({{"source", r.shape().source(e)}, {"target", r.shape().target(e)}, {"rows", rows}});
  }
  return {{"dims", r.dims()}, {"length", r.length()}, {"maps", maps}, {"p", r.field().modulus()}};
}

std::string run_validate(const Options& opt) {
  Json report = Json::array();
  std::ostringstream text;
  std::optional<GridModule> grid;
  for (const auto& path : opt.files) {
    const Input in = read_input(path);
    if (in.keyword == "ZIGZAG") {
      parse_zigzag(in.text, opt.field);
    } else if (in.keyword == "BIPATH") {
      parse_bipath(in.text, opt.field);
    } else if (in.keyword == "GRID" || in.keyword == "BIFILT") {
      grid = grid_from(in, opt);
      validate_grid(*grid);
    } else if (in.keyword == "EMBED") {
      const auto f = parse_embedding(in.text);
      if (grid) validate_embedding(*grid, f);
    } else if (in.keyword == "PATH") {
      const auto p = parse_path(in.text);
      if (grid) validate_path(*grid, p);
    } else {
      throw UsageError(path + ": unknown format '" + in.keyword + "'");
    }
    report.push_back({{"file", path}, {"format", in.keyword}, {"valid", true}});
    text << "ok\t" << in.keyword << '\t' << path << '\n';
  }
  return json_output(opt) ? report.dump(2) + "\n" : text.str();
}

std::string run_decompose(const Options& opt) {
  const Input in = read_input(opt.files.at(0));
  require_keyword(in, {"BIPATH", "ZIGZAG"});
  if (in.keyword == "ZIGZAG") {
    const ZzBarcode bars = barcode(parse_zigzag(in.text, opt.field));
    if (json_output(opt)) return barcode_json(bars).dump(2) + "\n";
    std::ostringstream out;
    for (const auto& [iv, mult] : bars) out << '[' << iv.first << ", " << iv.last << "]\t" << mult << '\n';
    return out.str();
  }
  const ArcCode code = arc_code(parse_bipath(in.text, opt.field));
  return json_output(opt) ? arc_code_json(code).dump(2) + "\n" : arc_code_text(code);
}

std::string run_slice(const Options& opt) {
  const Input in = read_input(opt.files.at(0));
  require_keyword(in, {"BIPATH"});
  const ZigzagRep r = restrict_to_slice(parse_bipath(in.text, opt.field));
  return json_output(opt) ? zigzag_json(r).dump(2) + "\n" : write_zigzag(r);
}

std::string run_distance(const Options& opt) {
  if (opt.files.size() != 2) throw UsageError("distance takes exactly two BIPATH files");
  const auto load = [&](const std::string& path) {
    const Input in = read_input(path);
    require_keyword(in, {"BIPATH"});
    return parse_bipath(in.text, opt.field);
  };
  const BipathModule ma = load(opt.files[0]), mb = load(opt.files[1]);
  if (ma.poset() != mb.poset()) throw DomainError("the two modules live on different bipath posets");
  const auto oa = orbit_blocks(arc_code(ma), ma.poset()), ob = orbit_blocks(arc_code(mb), mb.poset());
  const MatchingResult result = bottleneck_matching(oa, ob, ma.poset().period());
  return json_output(opt) ? distance_json(result, oa, ob).dump(2) + "\n" : result.epsilon.to_string() + "\n";
}

std::string run_fiber(const Options& opt) {
  const Input base = read_input(opt.files.at(0));
  require_keyword(base, {"GRID", "BIFILT"});
  const GridModule grid = grid_from(base, opt);
  validate_grid(grid);
  Json report = Json::array();
  std::ostringstream text;
  for (std::size_t k = 1; k < opt.files.size(); ++k) {
    const Input in = read_input(opt.files[k]);
    require_keyword(in, {"EMBED", "PATH"});
    if (in.keyword == "EMBED") {
      const ArcCode code = arc_code(pullback(grid, parse_embedding(in.text)));
      report.push_back({{"file", in.path}, {"arc_code", arc_code_json(code)}});
      text << "# embedding " << in.path << '\n' << arc_code_text(code);
    } else {
      const MonotonePath path = parse_path(in.text);
      const ZzBarcode bars = line_barcode(grid, path);
      report.push_back({{"file", in.path}, {"barcode", path_barcode_json(path, bars)}});
      text << "# path " << in.path << '\n' << path_barcode_text(path, bars);
    }
  }
  return json_output(opt) ? report.dump(2) + "\n" : text.str();
}

void emit(const Options& opt, const std::string& output) {
  if (opt.out.empty()) {
    std::cout << output;
    return;
  }
  std::ofstream out(opt.out, std::ios::binary);
  if (!out || !(out << output)) throw UsageError("cannot write " + opt.out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decompose and compare bipath persistence modules"};
  app.require_subcommand(1);
  Options opt;

  const auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"text", "json"}));
    sub->add_option("--out", opt.out, "Write output to this file instead of stdout");
  };
  const auto add_field = [&](CLI::App* sub) {
    sub->add_option("--field", opt.field, "Read matrices over GF(p) instead of the header's field")
        ->check([](const std::string& s) {
          std::uint64_t p = 0;
          std::istringstream in(s);
          if (!(in >> p) || !in.eof() || p > 0xffffffffu || !Field::is_prime(static_cast<std::uint32_t>(p)))
            return std::string("must be a prime");
          return std::string();
        });
  };

  auto* validate = app.add_subcommand("validate", "Check files for format and structural errors");
  validate->add_option("files", opt.files, "Inputs; EMBED and PATH files are checked against the preceding grid")
      ->required();
  add_format(validate);
  add_field(validate);

  auto* decompose = app.add_subcommand("decompose", "Arc code of a BIPATH file, or barcode of a ZIGZAG file");
  decompose->add_option("file", opt.files, "Input module")->required()->expected(1);
  add_format(decompose);
  add_field(decompose);

  auto* slice = app.add_subcommand("slice", "Restrict a BIPATH module to its finite zigzag slice");
  slice->add_option("file", opt.files, "Input module")->required()->expected(1);
  add_format(slice);
  add_field(slice);

  auto* distance = app.add_subcommand("distance", "Bottleneck distance between two BIPATH modules");
  distance->add_option("files", opt.files, "Two input modules")->required()->expected(2);
  add_format(distance);
  add_field(distance);

  auto* fiber = app.add_subcommand("fiber", "Fibered arc codes and line barcodes of a grid module");
  fiber->add_option("files", opt.files, "A GRID or BIFILT file followed by EMBED and PATH files")
      ->required()
      ->expected(2, 1 << 20);
  add_format(fiber);
  add_field(fiber);

  auto* selftest = app.add_subcommand("selftest", "Run the planted-instance checks");
  selftest->add_option("--seed", opt.seed, "Master seed");
  selftest->add_option("--trials", opt.trials, "Trials per randomized check")->check(CLI::PositiveNumber);
  selftest->add_option("--out", opt.out, "Write the report to this file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*selftest) {
      std::ostringstream report;
      const bool ok = report_selftest(run_selftest(opt.seed, opt.trials), report);
      emit(opt, report.str());
      return ok ? kOk : kInvalid;
    }
    std::string output;
    if (*validate) output = run_validate(opt);
    else if (*decompose) output = run_decompose(opt);
    else if (*slice) output = run_slice(opt);
    else if (*distance) output = run_distance(opt);
    else output = run_fiber(opt);
    emit(opt, output);
    return kOk;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << current_file << ": " << e.what() << '\n';
    return kUsage;
  } catch (const ValidationError& e) {
    std::cerr << "invalid: " << e.what() << '\n';
    return kInvalid;
  } catch (const DomainError& e) {
    std::cerr << "invalid: " << e.what() << '\n';
    return kInvalid;
  } catch (const ConsistencyError& e) {
    std::cerr << "internal consistency check failed: " << e.what() << '\n';
    return kInvalid;
  }
}
