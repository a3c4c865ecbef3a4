#pragma once

// Planted-instance checks run by `bipath selftest`. Every trial draws its own
// generator from (seed, suite, trial), so a failure is reproducible alone.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "bipath/distances.hpp"
#include "bipath/errors.hpp"
#include "bipath/fibered.hpp"
#include "bipath/module.hpp"
#include "bipath/zigzag.hpp"

namespace bipath {

struct SelfTestResult {
  std::string name;
  std::size_t trials = 0;
  std::size_t failures = 0;
  std::string first_failure;
};

namespace detail {

inline std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t suite, std::uint64_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(suite), static_cast<std::uint32_t>(trial)};
  return std::mt19937_64(seq);
}

inline Field random_small_field(std::mt19937_64& rng) { return Field(rng() % 2 ? 5 : 2); }

inline BipathPoset random_poset(std::mt19937_64& rng, std::size_t max_n, std::size_t max_m) {
  return BipathPoset(2 + rng() % (max_n - 1), 1 + rng() % max_m);
}

// Runs check(rng) per trial; a check returns an empty string on success and a
// description otherwise. Library exceptions count as failures.
inline SelfTestResult run_suite(std::string name, std::uint64_t seed, std::uint64_t suite, std::size_t trials,
                                const std::function<std::string(std::mt19937_64&)>& check) {
  SelfTestResult result{std::move(name), trials, 0, {}};
  for (std::size_t t = 0; t < trials; ++t) {
    auto rng = trial_rng(seed, suite, t);
    std::string failure;
    try {
      failure = check(rng);
    } catch (const Error& e) {
      failure = e.what();
    }
    if (failure.empty()) continue;
    if (result.failures++ == 0) result.first_failure = "trial " + std::to_string(t) + ": " + failure;
  }
  return result;
}

}  // namespace detail

inline std::vector<SelfTestResult> run_selftest(std::uint64_t seed, std::size_t trials) {
  std::vector<SelfTestResult> out;

  out.push_back(detail::run_suite("zigzag plant-and-recover", seed, 1, trials, [](std::mt19937_64& rng) {
    const std::size_t length = 1 + rng() % 12;
    const ZigzagShape shape = rng() % 2 ? ZigzagShape::alternating(length) : ZigzagShape::linear(length);
    const Field field = detail::random_small_field(rng);
    const ZzBarcode bars = random_bars(length, 10, 6, rng);
    const ZigzagRep r = planted_zigzag(shape, field, bars, rng());
    const ZzBarcode got = barcode(r);
    if (got != bars) return std::string("barcode differs from the planted bars");
    if (!conserves(got, r.dims())) return std::string("barcode does not cover the dimensions");
    return std::string();
  }));

  out.push_back(detail::run_suite("bipath plant-and-recover", seed, 2, trials, [](std::mt19937_64& rng) {
    const BipathPoset poset = detail::random_poset(rng, 5, 5);
    const auto planted = plant_random(poset, detail::random_small_field(rng), 10, rng());
    const ArcCode code = arc_code(planted.module);
    if (code != planted.code) return std::string("arc code differs from the planted summands");
    if (!conserves(poset, code, planted.module.dims())) return std::string("arc code does not cover the dimensions");
    return std::string();
  }));

  out.push_back(detail::run_suite("interval round-trip", seed, 3, 1, [](std::mt19937_64&) {
    for (std::size_t n = 2; n <= 5; ++n)
      for (std::size_t m = 1; m <= 4; ++m) {
        const BipathPoset poset(n, m);
        for (const auto& iv : enumerate_intervals(poset))
          if (arc_code(interval_module(poset, Field(2), iv)) != ArcCode{{iv, 1}})
            return "k" + to_string(iv) + " is not recovered on B(" + std::to_string(n) + ", " + std::to_string(m) + ")";
      }
    return std::string();
  }));

  out.push_back(detail::run_suite("shifted correspondence is rejected", seed, 4, trials, [](std::mt19937_64& rng) {
    const BipathPoset poset = detail::random_poset(rng, 5, 4);
    const auto intervals = enumerate_intervals(poset);
    const BipathInterval iv = intervals[rng() % intervals.size()];
    const auto shifted = [](const BipathPoset& p, const BipathInterval& x) {
      DecoratedInterval d = corresponding_slice_interval(p, x);
      if (!d.whole) ++d.b;
      return d;
    };
    const BipathModule module = interval_module(poset, Field(2), iv);
    try {
      arc_code(module, shifted);
    } catch (const ConsistencyError&) {
      return std::string();
    }
    return "off-by-one correspondence accepted on k" + to_string(iv);
  }));

  out.push_back(detail::run_suite("distance axioms", seed, 5, trials, [](std::mt19937_64& rng) {
    const BipathPoset poset = detail::random_poset(rng, 4, 3);
    const ArcCode a = random_arc_code(poset, 4, rng), b = random_arc_code(poset, 4, rng),
                  c = random_arc_code(poset, 4, rng);
    const auto d = [&](const ArcCode& x, const ArcCode& y) { return bottleneck_distance(x, y, poset); };
    if (d(a, a) != ExtRational(0)) return std::string("d(A, A) is not 0");
    if (d(a, b) != d(b, a)) return std::string("d is not symmetric");
    if (d(a, c) > d(a, b) + d(b, c)) return std::string("triangle inequality fails");
    const auto oa = orbit_blocks(a, poset), ob = orbit_blocks(b, poset);
    for (const auto& p : bottleneck_matching(oa, ob, poset.period()).pairs)
      if (oa[p.a].rep.kind != ob[p.b].rep.kind) return std::string("matching pairs blocks of different kinds");
    return std::string();
  }));

  out.push_back(detail::run_suite("M_lambda example", seed, 6, 1, [](std::mt19937_64&) {
    const GridModule m1 = build_example_Mlambda(1), mm1 = build_example_Mlambda(-1);
    const auto f = example_embedding();
    const ArcCode c1 = arc_code(pullback(m1, f)), cm1 = arc_code(pullback(mm1, f));
    if (c1 != ArcCode{{BipathInterval::left(2, 4), 1}, {BipathInterval::left(1, 0), 1}})
      return std::string("unexpected fibered arc code for M_1");
    if (cm1 != ArcCode{{BipathInterval::left(1, 4), 1}, {BipathInterval::left(2, 0), 1}})
      return std::string("unexpected fibered arc code for M_-1");
    for (const auto& line : example_lines())
      if (line_barcode(m1, line) != line_barcode(mm1, line)) return std::string("line barcodes differ");
    return std::string();
  }));

  return out;
}

inline bool report_selftest(const std::vector<SelfTestResult>& results, std::ostream& out) {
  bool ok = true;
  for (const auto& r : results) {
    ok = ok && r.failures == 0;
    out << (r.failures == 0 ? "PASS " : "FAIL ") << r.name << " (" << r.trials - r.failures << "/" << r.trials
        << ")";
    if (r.failures) out << ": " << r.first_failure;
    out << '\n';
  }
  return ok;
}

}  // namespace bipath
