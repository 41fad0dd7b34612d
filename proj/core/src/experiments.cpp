#include "poleswap/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "poleswap/errors.hpp"
#include "poleswap/moves.hpp"
#include "poleswap/oracle.hpp"
#include "poleswap/rqz.hpp"
#include "poleswap/theory.hpp"

namespace poleswap {

namespace {

using nlohmann::json;

constexpr double kSchurBound = 1e-14;
constexpr double kFilterError = 1e-2;

constexpr std::array<const char*, 2> kMatrixLabel{"A", "B"};
constexpr std::array<const char*, 2> kDenominatorLabel{"own", "delta"};

// Runs body(begin, end, out) on contiguous chunks and merges in chunk order.
template <class Result, class Body>
Result run_chunked(std::uint64_t trials, unsigned workers, const Result& empty, Body body) {
  workers = std::max(1u, workers);
  if (workers == 1 || trials < 2 * workers) {
    Result out = empty;
    body(0, trials, out);
    return out;
  }
  std::vector<Result> parts(workers, empty);
  std::vector<std::thread> threads;
  const std::uint64_t chunk = (trials + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::uint64_t begin = std::min<std::uint64_t>(trials, chunk * w);
    const std::uint64_t end = std::min<std::uint64_t>(trials, begin + chunk);
    threads.emplace_back([&, w, begin, end] { body(begin, end, parts[w]); });
  }
  for (auto& t : threads) t.join();
  Result out = empty;
  for (const auto& part : parts) out.merge(part);
  return out;
}

double floored(double e) { return std::max(e, kUnitRoundoff); }

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial) {
  return std::mt19937_64(splitmix64(splitmix64(seed) + trial));
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

Complex complex_normal(std::mt19937_64& rng) {
  const double u1 = 1.0 - uniform01(rng);  // (0, 1]
  const double u2 = uniform01(rng);
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 2.0 * std::numbers::pi * u2;
  return {r * std::cos(t), r * std::sin(t)};
}

Complex random_stress_entry(const StressDistribution& dist, std::mt19937_64& rng) {
  if (!(dist.min_exponent <= dist.max_exponent)) {
    throw std::invalid_argument("stress distribution needs min_exponent <= max_exponent");
  }
  const double e = dist.min_exponent + (dist.max_exponent - dist.min_exponent) * uniform01(rng);
  const double theta = 2.0 * std::numbers::pi * uniform01(rng);
  return std::polar(std::pow(10.0, e), theta);
}

TriangularPencil2 random_stress_triangular(const StressDistribution& dist, std::mt19937_64& rng) {
  TriangularPencil2 p;
  p.alpha1 = random_stress_entry(dist, rng);
  p.a = random_stress_entry(dist, rng);
  p.alpha2 = random_stress_entry(dist, rng);
  p.beta1 = random_stress_entry(dist, rng);
  p.b = random_stress_entry(dist, rng);
  p.beta2 = random_stress_entry(dist, rng);
  return p;
}

ComplexMatrix random_stress_hessenberg(Index n, const StressDistribution& dist, std::mt19937_64& rng) {
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = std::max<Index>(0, i - 1); j < n; ++j) m(i, j) = random_stress_entry(dist, rng);
  }
  return m;
}

std::size_t residual_bin(double r) noexcept {
  for (std::size_t k = 0; k + 1 < kResidualBins; ++k) {
    if (r <= kResidualBinUpper[k]) return k;
  }
  return kResidualBins - 1;
}

void ResidualHistogram::merge(const ResidualHistogram& other) {
  if (other.methods.size() != methods.size()) {
    throw DimensionMismatch("ResidualHistogram::merge: method lists differ");
  }
  trials += other.trials;
  for (std::size_t i = 0; i < methods.size(); ++i) {
    auto& mine = methods[i];
    const auto& theirs = other.methods[i];
    for (std::size_t m = 0; m < 2; ++m) {
      for (std::size_t d = 0; d < 2; ++d) {
        for (std::size_t k = 0; k < kResidualBins; ++k) mine.counts[m][d][k] += theirs.counts[m][d][k];
      }
    }
    for (std::size_t d = 0; d < 2; ++d) mine.tail_trials[d] += theirs.tail_trials[d];
    mine.skipped += theirs.skipped;
  }
}

std::uint64_t ResidualHistogram::count(std::size_t method, ResidualMatrix m, Denominator d, std::size_t bin) const {
  return methods.at(method).counts[static_cast<std::size_t>(m)][static_cast<std::size_t>(d)].at(bin);
}

double ResidualHistogram::fraction_at_most(std::size_t method, ResidualMatrix m, Denominator d, double edge) const {
  if (trials == 0) return 0.0;
  std::uint64_t total = 0;
  for (std::size_t k = 0; k < kResidualBins && kResidualBinUpper[k] <= edge; ++k) total += count(method, m, d, k);
  return static_cast<double>(total) / static_cast<double>(trials);
}

ResidualHistogram run_swap_benchmark(std::uint64_t trials, const StressDistribution& dist,
                                     const std::vector<SwapMethod>& methods, unsigned workers) {
  if (trials < 1) throw std::invalid_argument("run_swap_benchmark: trials must be positive");
  ResidualHistogram empty;
  empty.dist = dist;
  for (SwapMethod m : methods) empty.methods.push_back(MethodCounts{m});
  return run_chunked(trials, workers, empty, [&](std::uint64_t begin, std::uint64_t end, ResidualHistogram& h) {
    for (std::uint64_t i = begin; i < end; ++i) {
      auto rng = trial_rng(dist.seed, i);
      const TriangularPencil2 p = random_stress_triangular(dist, rng);
      for (auto& mc : h.methods) {
        const SwapReport r = swap2x2(p, mc.method);
        if (r.skipped) ++mc.skipped;
        const std::array<std::array<double, 2>, 2> res{{{r.res_a, r.res_a_delta}, {r.res_b, r.res_b_delta}}};
        for (std::size_t m = 0; m < 2; ++m) {
          for (std::size_t d = 0; d < 2; ++d) ++mc.counts[m][d][residual_bin(res[m][d])];
        }
        for (std::size_t d = 0; d < 2; ++d) {
          if (!(std::max(res[0][d], res[1][d]) <= kTailThreshold)) ++mc.tail_trials[d];
        }
      }
      ++h.trials;
    }
  });
}

AccuracyTrial run_accuracy_trial(std::uint64_t seed, std::uint64_t trial, const StressDistribution& dist) {
  auto rng = trial_rng(seed, trial);
  const ComplexMatrix a = random_stress_hessenberg(3, dist, rng);
  const ComplexMatrix b = random_stress_hessenberg(3, dist, rng);
  AccuracyTrial t;
  const OracleResult oracle = eig_3x3_extended(a, b);
  t.oracle_singular = oracle.singular;
  t.oracle_residual_ok = oracle.residual_ok;
  if (oracle.singular) return t;
  const std::vector<OracleEigenvalue> exact(oracle.eigenvalues.begin(), oracle.eigenvalues.end());

  auto run = [&](SwapMethod method, double& err, double& ra, double& rb) {
    SolveOptions opt;
    opt.method = method;
    try {
      const SolveResult r = solve(HessenbergPencil(a, b), opt);
      t.converged = t.converged && r.converged;
      const RelativeErrorResult e = max_relative_error(r.eigenvalues, exact);
      err = e.value;
      t.fallback = t.fallback || e.fallback;
      ra = r.r_a;
      rb = r.r_b;
    } catch (const NumericalBreakdown&) {
      t.converged = false;
    }
  };
  run(SwapMethod::new_method, t.e_new, t.ra_new, t.rb_new);
  run(SwapMethod::van_dooren, t.e_baseline, t.ra_baseline, t.rb_baseline);
  if (std::isinf(t.e_new) && std::isinf(t.e_baseline)) {
    t.ratio = 1.0;
  } else {
    t.ratio = floored(t.e_baseline) / floored(t.e_new);
  }
  return t;
}

namespace {

void add_ratio(RatioCounts& c, double ratio) {
  ++c.scored;
  if (ratio >= 10.0) {
    ++c.new_better;
  } else if (ratio <= 0.1) {
    ++c.baseline_better;
  } else {
    ++c.in_band;
  }
}

void merge_ratio(RatioCounts& c, const RatioCounts& o) {
  c.scored += o.scored;
  c.in_band += o.in_band;
  c.new_better += o.new_better;
  c.baseline_better += o.baseline_better;
}

}  // namespace

void AccuracySummary::add(std::uint64_t trial, const AccuracyTrial& t) {
  ++trials;
  if (t.oracle_singular) {
    ++oracle_singular;
    return;
  }
  if (!t.oracle_residual_ok) {
    ++oracle_residual_failures;
    return;
  }
  if (!t.converged) {
    ++nonconverged;
    return;
  }
  if (t.fallback) ++fallback_scored;
  add_ratio(all, t.ratio);
  if (std::min(t.e_new, t.e_baseline) <= kFilterError) add_ratio(filtered, t.ratio);

  const double lr = std::log10(t.ratio);
  if (lr < kRatioBinLow) {
    ++below_range;
  } else if (lr >= kRatioBinHigh) {
    ++above_range;
  } else {
    ++log_ratio_bins[static_cast<std::size_t>(std::floor(lr) - kRatioBinLow)];
  }
  if (t.ra_new > kSchurBound || t.rb_new > kSchurBound) ++schur_new_above;
  max_ra_new = std::max(max_ra_new, t.ra_new);
  max_rb_new = std::max(max_rb_new, t.rb_new);
  max_ra_baseline = std::max(max_ra_baseline, t.ra_baseline);
  max_rb_baseline = std::max(max_rb_baseline, t.rb_baseline);
  if (all.scored == 1 || t.ratio < min_ratio) {
    min_ratio = t.ratio;
    min_ratio_trial = trial;
  }
  if (all.scored == 1 || t.ratio > max_ratio) {
    max_ratio = t.ratio;
    max_ratio_trial = trial;
  }
}

void AccuracySummary::merge(const AccuracySummary& o) {
  const bool had = all.scored > 0;
  trials += o.trials;
  merge_ratio(all, o.all);
  merge_ratio(filtered, o.filtered);
  for (std::size_t k = 0; k < log_ratio_bins.size(); ++k) log_ratio_bins[k] += o.log_ratio_bins[k];
  below_range += o.below_range;
  above_range += o.above_range;
  oracle_singular += o.oracle_singular;
  oracle_residual_failures += o.oracle_residual_failures;
  nonconverged += o.nonconverged;
  fallback_scored += o.fallback_scored;
  schur_new_above += o.schur_new_above;
  max_ra_new = std::max(max_ra_new, o.max_ra_new);
  max_rb_new = std::max(max_rb_new, o.max_rb_new);
  max_ra_baseline = std::max(max_ra_baseline, o.max_ra_baseline);
  max_rb_baseline = std::max(max_rb_baseline, o.max_rb_baseline);
  if (o.all.scored == 0) return;
  // Ties keep the earlier chunk, matching the serial scan.
  if (!had || o.min_ratio < min_ratio) {
    min_ratio = o.min_ratio;
    min_ratio_trial = o.min_ratio_trial;
  }
  if (!had || o.max_ratio > max_ratio) {
    max_ratio = o.max_ratio;
    max_ratio_trial = o.max_ratio_trial;
  }
}

AccuracySummary run_accuracy_experiment(std::uint64_t trials, const StressDistribution& dist, unsigned workers) {
  if (trials < 1) throw std::invalid_argument("run_accuracy_experiment: trials must be positive");
  AccuracySummary empty;
  empty.dist = dist;
  return run_chunked(trials, workers, empty, [&](std::uint64_t begin, std::uint64_t end, AccuracySummary& s) {
    for (std::uint64_t i = begin; i < end; ++i) s.add(i, run_accuracy_trial(dist.seed, i, dist));
  });
}

OutputFormat parse_output_format(std::string_view s) {
  if (s == "csv") return OutputFormat::csv;
  if (s == "json") return OutputFormat::json;
  throw std::invalid_argument("unknown output format: " + std::string(s));
}

std::string round_trip_string(double x) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc{}) throw std::runtime_error("round_trip_string: conversion failed");
  return std::string(buf, end);
}

namespace {

json metadata_json(const Metadata& meta) {
  json out = json::object();
  for (const auto& [k, v] : meta) out[k] = v;
  return out;
}

void csv_metadata(std::ostream& out, const Metadata& meta) {
  for (const auto& [k, v] : meta) out << "# " << k << '=' << v << '\n';
}

json histogram_json(const ResidualHistogram& h, const Metadata& meta) {
  json doc;
  doc["kind"] = "swap_histogram";
  doc["rng"] = kRngName;
  doc["seed"] = h.dist.seed;
  doc["trials"] = h.trials;
  doc["min_exponent"] = round_trip_string(h.dist.min_exponent);
  doc["max_exponent"] = round_trip_string(h.dist.max_exponent);
  doc["bin_edges"] = json::array();
  for (const char* e : kResidualBinEdgeText) doc["bin_edges"].push_back(e);
  doc["methods"] = json::array();
  for (const auto& mc : h.methods) {
    json m;
    m["method"] = std::string(to_string(mc.method));
    m["skipped"] = mc.skipped;
    m["tail_trials"] = {{"own", mc.tail_trials[0]}, {"delta", mc.tail_trials[1]}};
    for (std::size_t i = 0; i < 2; ++i) {
      for (std::size_t d = 0; d < 2; ++d) {
        m["counts"][kMatrixLabel[i]][kDenominatorLabel[d]] = mc.counts[i][d];
      }
    }
    doc["methods"].push_back(std::move(m));
  }
  doc["config"] = metadata_json(meta);
  return doc;
}

void add_counts(json& doc, const char* key, const RatioCounts& c) {
  doc[key] = {{"scored", c.scored},
              {"in_band", c.in_band},
              {"new_better", c.new_better},
              {"baseline_better", c.baseline_better}};
}

json summary_json(const AccuracySummary& s, const Metadata& meta) {
  json doc;
  doc["kind"] = "accuracy_summary";
  doc["rng"] = kRngName;
  doc["seed"] = s.dist.seed;
  doc["trials"] = s.trials;
  doc["min_exponent"] = round_trip_string(s.dist.min_exponent);
  doc["max_exponent"] = round_trip_string(s.dist.max_exponent);
  add_counts(doc, "all", s.all);
  add_counts(doc, "filtered", s.filtered);
  doc["log10_ratio_bins"] = {{"low", kRatioBinLow},
                             {"high", kRatioBinHigh},
                             {"counts", s.log_ratio_bins},
                             {"below_range", s.below_range},
                             {"above_range", s.above_range}};
  doc["excluded"] = {{"oracle_singular", s.oracle_singular},
                     {"oracle_residual_failures", s.oracle_residual_failures},
                     {"nonconverged", s.nonconverged}};
  doc["fallback_scored"] = s.fallback_scored;
  doc["schur"] = {{"bound", round_trip_string(kSchurBound)},
                  {"new_above_bound", s.schur_new_above},
                  {"max_ra_new", round_trip_string(s.max_ra_new)},
                  {"max_rb_new", round_trip_string(s.max_rb_new)},
                  {"max_ra_baseline", round_trip_string(s.max_ra_baseline)},
                  {"max_rb_baseline", round_trip_string(s.max_rb_baseline)}};
  doc["extremes"] = {{"min_ratio", round_trip_string(s.min_ratio)},
                     {"min_ratio_trial", s.min_ratio_trial},
                     {"max_ratio", round_trip_string(s.max_ratio)},
                     {"max_ratio_trial", s.max_ratio_trial}};
  doc["config"] = metadata_json(meta);
  return doc;
}

constexpr const char* kHistogramHeader =
    "seed,trials,rng,min_exponent,max_exponent,method,matrix,denominator,bin_lower,bin_upper,count";

void write_to_path(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << text;
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  return out;
}

template <class T>
T parse_number(const std::string& s) {
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) throw std::runtime_error("bad number in CSV: " + s);
  return v;
}

std::size_t label_index(const std::array<const char*, 2>& labels, const std::string& s) {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (s == labels[i]) return i;
  }
  throw std::runtime_error("unknown label in CSV: " + s);
}

}  // namespace

void emit_results(const ResidualHistogram& h, OutputFormat format, std::ostream& out, const Metadata& meta) {
  if (format == OutputFormat::json) {
    out << histogram_json(h, meta).dump(2) << '\n';
    return;
  }
  csv_metadata(out, meta);
  out << kHistogramHeader << '\n';
  for (const auto& mc : h.methods) {
    for (std::size_t i = 0; i < 2; ++i) {
      for (std::size_t d = 0; d < 2; ++d) {
        for (std::size_t k = 0; k < kResidualBins; ++k) {
          out << h.dist.seed << ',' << h.trials << ',' << kRngName << ',' << round_trip_string(h.dist.min_exponent)
              << ',' << round_trip_string(h.dist.max_exponent) << ',' << to_string(mc.method) << ','
              << kMatrixLabel[i] << ',' << kDenominatorLabel[d] << ',' << kResidualBinEdgeText[k] << ','
              << kResidualBinEdgeText[k + 1] << ',' << mc.counts[i][d][k] << '\n';
        }
      }
    }
  }
}

void emit_results(const AccuracySummary& s, OutputFormat format, std::ostream& out, const Metadata& meta) {
  if (format == OutputFormat::json) {
    out << summary_json(s, meta).dump(2) << '\n';
    return;
  }
  csv_metadata(out, meta);
  out << "field,value\n";
  // Flattened JSON in document order keeps both formats in step.
  const json flat = summary_json(s, {}).flatten();
  for (const auto& [k, v] : flat.items()) {
    if (k.rfind("/config", 0) == 0) continue;
    out << k << ',' << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
  }
}

void emit_results(const ResidualHistogram& h, OutputFormat format, const std::string& path, const Metadata& meta) {
  std::ostringstream buf;
  emit_results(h, format, buf, meta);
  write_to_path(path, buf.str());
}

void emit_results(const AccuracySummary& s, OutputFormat format, const std::string& path, const Metadata& meta) {
  std::ostringstream buf;
  emit_results(s, format, buf, meta);
  write_to_path(path, buf.str());
}

ResidualHistogram parse_histogram(const std::string& text, OutputFormat format) {
  ResidualHistogram h;
  if (format == OutputFormat::json) {
    const json doc = json::parse(text);
    h.dist.seed = doc.at("seed").get<std::uint64_t>();
    h.trials = doc.at("trials").get<std::uint64_t>();
    h.dist.min_exponent = std::stod(doc.at("min_exponent").get<std::string>());
    h.dist.max_exponent = std::stod(doc.at("max_exponent").get<std::string>());
    for (const auto& m : doc.at("methods")) {
      MethodCounts mc{parse_swap_method(m.at("method").get<std::string>())};
      mc.skipped = m.at("skipped").get<std::uint64_t>();
      mc.tail_trials = {m.at("tail_trials").at("own").get<std::uint64_t>(),
                        m.at("tail_trials").at("delta").get<std::uint64_t>()};
      for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t d = 0; d < 2; ++d) {
          mc.counts[i][d] = m.at("counts").at(kMatrixLabel[i]).at(kDenominatorLabel[d]).get<std::array<std::uint64_t, kResidualBins>>();
        }
      }
      h.methods.push_back(mc);
    }
    return h;
  }
  std::istringstream in(text);
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line != kHistogramHeader) throw std::runtime_error("unexpected CSV header");
      header = true;
      continue;
    }
    const auto cells = split_csv(line);
    if (cells.size() != 11) throw std::runtime_error("CSV row with wrong column count");
    h.dist.seed = parse_number<std::uint64_t>(cells[0]);
    h.trials = parse_number<std::uint64_t>(cells[1]);
    h.dist.min_exponent = parse_number<double>(cells[3]);
    h.dist.max_exponent = parse_number<double>(cells[4]);
    const SwapMethod method = parse_swap_method(cells[5]);
    auto it = std::find_if(h.methods.begin(), h.methods.end(), [&](const MethodCounts& m) { return m.method == method; });
    if (it == h.methods.end()) {
      h.methods.push_back(MethodCounts{method});
      it = h.methods.end() - 1;
    }
    std::size_t bin = kResidualBins;
    for (std::size_t k = 0; k < kResidualBins; ++k) {
      if (cells[8] == kResidualBinEdgeText[k]) bin = k;
    }
    if (bin == kResidualBins) throw std::runtime_error("unknown bin edge in CSV: " + cells[8]);
    it->counts[label_index(kMatrixLabel, cells[6])][label_index(kDenominatorLabel, cells[7])][bin] =
        parse_number<std::uint64_t>(cells[10]);
  }
  if (!header) throw std::runtime_error("missing CSV header");
  return h;
}

bool VerificationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed(); });
}

namespace {

constexpr double kDirectionTol = 1e-10;
constexpr double kSubspaceTol = 1e-8;

ComplexMatrix normal_hessenberg(Index n, std::mt19937_64& rng) {
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = std::max<Index>(0, i - 1); j < n; ++j) m(i, j) = complex_normal(rng);
  }
  return m;
}

struct SuiteSample {
  std::vector<double> values;  // one per check, in report order
};

const std::vector<std::pair<const char*, double>>& suite_checks() {
  static const std::vector<std::pair<const char*, double>> checks{
      {"type1_top_direction", kDirectionTol},  {"type1_bottom_direction", kDirectionTol},
      {"single_move_subspaces", kSubspaceTol}, {"basic_sweep_closed_form", kSubspaceTol},
      {"basic_sweep_move_log", kSubspaceTol},  {"multishift_m2", kSubspaceTol},
      {"bidirectional_m1", kSubspaceTol},      {"bidirectional_m2", kSubspaceTol},
      {"krylov_left_quotient", kSubspaceTol},  {"krylov_right_quotient", kSubspaceTol},
  };
  return checks;
}

template <class F>
void with_acc(const HessenbergPencil& p, F f) {
  HessenbergPencil work = p;
  Transforms acc = Transforms::identity(p.size());
  f(work, acc);
}

// Empty optional means the draw hit a deflation and must be replaced.
std::optional<SuiteSample> run_suite_once(const HessenbergPencil& p, const std::vector<ProjectiveValue>& rho,
                                          const std::vector<ProjectiveValue>& nu,
                                          const std::vector<ProjectiveValue>& tau,
                                          const std::vector<ProjectiveValue>& mu) {
  const Index n = p.size();
  SuiteSample s;
  bool deflated = false;

  {
    HessenbergPencil w = p;
    const MoveRecord r = move_type1_top(w, rho[0]);
    deflated = deflated || r.deflation.has_value();
    s.values.push_back(verify_move_theorem(p, r).angle_q);
  }
  double single = 0.0;
  {
    HessenbergPencil w = p;
    const MoveRecord r = move_type1_bottom(w, tau[0]);
    deflated = deflated || r.deflation.has_value();
    s.values.push_back(verify_bottom_row_direction(p, r));
    single = std::max(single, verify_move_theorem(p, r).angle_z);
  }
  for (Index k = 1; k + 1 < n; ++k) {
    HessenbergPencil w = p;
    const MoveRecord r = move_type2(w, k);
    const MoveAngles a = verify_move_theorem(p, r);
    single = std::max({single, a.angle_q, a.angle_z});
  }
  s.values.push_back(single);

  with_acc(p, [&](HessenbergPencil& w, Transforms& acc) {
    const SweepRecord sw = basic_sweep(w, rho[0], nu[0], &acc);
    deflated = deflated || sw.deflation.has_value();
    s.values.push_back(verify_basic_sweep_theorem(p, rho[0], nu[0], acc));
    s.values.push_back(verify_sweep_theorem(p, sw, acc));
  });
  with_acc(p, [&](HessenbergPencil& w, Transforms& acc) {
    const SweepRecord sw = multishift_sweep(w, {rho[0], rho[1]}, {nu[0], nu[1]}, &acc);
    deflated = deflated || sw.deflation.has_value();
    s.values.push_back(verify_sweep_theorem(p, sw, acc));
  });
  for (std::size_t m = 1; m <= 2; ++m) {
    with_acc(p, [&](HessenbergPencil& w, Transforms& acc) {
      BidirectionalOptions bopt;
      bopt.replace_down = std::vector<ProjectiveValue>(nu.begin(), nu.begin() + m);
      bopt.replace_up = std::vector<ProjectiveValue>(mu.begin(), mu.begin() + m);
      const SweepRecord sw = bidirectional_sweep(w, {rho.begin(), rho.begin() + m}, {tau.begin(), tau.begin() + m},
                                                 &acc, {}, bopt);
      deflated = deflated || sw.deflation.has_value();
      s.values.push_back(verify_sweep_theorem(p, sw, acc));
    });
  }
  const KrylovAngles k = verify_krylov_identities(p);
  s.values.push_back(k.k_variant);
  s.values.push_back(k.l_variant);
  if (deflated) return std::nullopt;
  return s;
}

}  // namespace

VerificationReport run_theorem_suite(std::uint64_t seed, std::uint64_t pencils, Index n) {
  if (n < 4) throw std::invalid_argument("run_theorem_suite: n must be at least 4");
  VerificationReport report;
  for (const auto& [name, tol] : suite_checks()) report.checks.push_back(CheckResult{name, 0.0, tol, 0});

  std::uint64_t draw = 0;
  const std::uint64_t max_draws = 1000 * std::max<std::uint64_t>(pencils, 1);
  while (report.pencils < pencils) {
    if (draw >= max_draws) throw std::runtime_error("run_theorem_suite: conditioning filter rejected every draw");
    auto rng = trial_rng(seed, draw++);
    const HessenbergPencil p(normal_hessenberg(n, rng), normal_hessenberg(n, rng));
    auto draw_values = [&] {
      std::vector<ProjectiveValue> v;
      for (int i = 0; i < 2; ++i) v.push_back(ProjectiveValue::finite(complex_normal(rng)));
      return v;
    };
    const auto rho = draw_values();
    const auto nu = draw_values();
    const auto tau = draw_values();
    const auto mu = draw_values();

    bool ok = check_proper(p).is_proper;
    std::vector<ProjectiveValue> all = poles(p);
    all.push_back(ProjectiveValue::infinity());
    for (const auto* v : {&rho, &nu, &tau, &mu}) all.insert(all.end(), v->begin(), v->end());
    for (const auto& z : all) {
      if (!ok) break;
      ok = shifted_condition(p.A, p.B, z) <= kVerifyConditionCap;
    }
    std::optional<SuiteSample> sample;
    if (ok) {
      try {
        sample = run_suite_once(p, rho, nu, tau, mu);
      } catch (const SingularFactor&) {
        sample.reset();
      } catch (const std::invalid_argument&) {  // bidirectional margin
        sample.reset();
      }
    }
    if (!sample) {
      ++report.rejected;
      continue;
    }
    ++report.pencils;
    for (std::size_t i = 0; i < report.checks.size(); ++i) {
      auto& c = report.checks[i];
      c.worst = std::max(c.worst, sample->values[i]);
      ++c.samples;
    }
  }
  return report;
}

}  // namespace poleswap
