#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "poleswap/numerics.hpp"
#include "poleswap/pencil.hpp"
#include "poleswap/swap_kernel.hpp"

namespace poleswap {

/// Entries have modulus 10^U(min_exponent, max_exponent) and a uniform phase.
struct StressDistribution {
  double min_exponent{-12.0};
  double max_exponent{12.0};
  std::uint64_t seed{0};
};

/// Name recorded in output metadata; trial i draws from
/// mt19937_64(splitmix64(splitmix64(seed) + i)).
inline constexpr const char* kRngName = "mt19937_64/splitmix64-per-trial";

std::uint64_t splitmix64(std::uint64_t x) noexcept;
std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial);
/// 53 random bits in [0, 1).
double uniform01(std::mt19937_64& rng);
/// Standard complex normal (unit variance per component), Box-Muller.
Complex complex_normal(std::mt19937_64& rng);

Complex random_stress_entry(const StressDistribution& dist, std::mt19937_64& rng);
TriangularPencil2 random_stress_triangular(const StressDistribution& dist, std::mt19937_64& rng);
/// Upper Hessenberg n x n, every entry on or above the subdiagonal drawn from dist.
ComplexMatrix random_stress_hessenberg(Index n, const StressDistribution& dist, std::mt19937_64& rng);

enum class ResidualMatrix { a = 0, b = 1 };
enum class Denominator { own = 0, delta = 1 };

inline constexpr std::size_t kResidualBins = 5;
/// Upper edges of [0,1e-16], (1e-16,1e-15], (1e-15,1e-10], (1e-10,1e-5], (1e-5,1].
inline constexpr std::array<double, kResidualBins> kResidualBinUpper{1e-16, 1e-15, 1e-10, 1e-5, 1.0};
inline constexpr std::array<const char*, kResidualBins + 1> kResidualBinEdgeText{"0", "1e-16", "1e-15",
                                                                                    "1e-10", "1e-5", "1"};
inline constexpr double kTailThreshold = 1e-15;

/// Values above 1 and NaN land in the last bin.
std::size_t residual_bin(double r) noexcept;

struct MethodCounts {
  SwapMethod method{SwapMethod::new_method};
  /// counts[matrix][denominator][bin]; each (matrix, denominator) row sums to trials.
  std::array<std::array<std::array<std::uint64_t, kResidualBins>, 2>, 2> counts{};
  /// Trials with max(res_a, res_b) > kTailThreshold, per denominator.
  std::array<std::uint64_t, 2> tail_trials{};
  std::uint64_t skipped{0};
};

struct ResidualHistogram {
  StressDistribution dist;
  std::uint64_t trials{0};
  std::vector<MethodCounts> methods;

  /// Adds counts from a histogram over a disjoint trial range with the same methods.
  void merge(const ResidualHistogram& other);
  std::uint64_t count(std::size_t method, ResidualMatrix m, Denominator d, std::size_t bin) const;
  double fraction_at_most(std::size_t method, ResidualMatrix m, Denominator d, double edge) const;
};

/// workers > 1 splits the trial range into contiguous chunks; the merged
/// counts equal the serial counts.
ResidualHistogram run_swap_benchmark(std::uint64_t trials, const StressDistribution& dist,
                                     const std::vector<SwapMethod>& methods, unsigned workers = 1);

struct AccuracyTrial {
  double e_new{0.0};
  double e_baseline{0.0};
  double ratio{1.0};  ///< e_baseline / e_new, both floored at u
  double ra_new{0.0}, rb_new{0.0}, ra_baseline{0.0}, rb_baseline{0.0};
  bool oracle_singular{false};
  bool oracle_residual_ok{true};
  bool fallback{false};
  bool converged{true};
};

/// Scoring of one accuracy trial, exposed for tests and for replays of single seeds.
AccuracyTrial run_accuracy_trial(std::uint64_t seed, std::uint64_t trial, const StressDistribution& dist);

inline constexpr int kRatioBinLow = -16;  ///< log10 ratio bins [k, k+1) for k in [low, high)
inline constexpr int kRatioBinHigh = 16;

struct RatioCounts {
  std::uint64_t scored{0};
  std::uint64_t in_band{0};          ///< 0.1 < ratio < 10
  std::uint64_t new_better{0};       ///< ratio >= 10
  std::uint64_t baseline_better{0};  ///< ratio <= 0.1
};

struct AccuracySummary {
  StressDistribution dist;
  std::uint64_t trials{0};
  RatioCounts all;
  /// Trials where at least one method reached relative error <= 1e-2.
  RatioCounts filtered;
  std::vector<std::uint64_t> log_ratio_bins =
      std::vector<std::uint64_t>(static_cast<std::size_t>(kRatioBinHigh - kRatioBinLow), 0);
  std::uint64_t below_range{0};
  std::uint64_t above_range{0};
  std::uint64_t oracle_singular{0};
  std::uint64_t oracle_residual_failures{0};
  std::uint64_t nonconverged{0};
  std::uint64_t fallback_scored{0};
  std::uint64_t schur_new_above{0};  ///< new-method trials with r_a or r_b > 1e-14
  double max_ra_new{0.0}, max_rb_new{0.0}, max_ra_baseline{0.0}, max_rb_baseline{0.0};
  double min_ratio{1.0}, max_ratio{1.0};
  std::uint64_t min_ratio_trial{0}, max_ratio_trial{0};

  void add(std::uint64_t trial, const AccuracyTrial& t);
  void merge(const AccuracySummary& other);
};

AccuracySummary run_accuracy_experiment(std::uint64_t trials, const StressDistribution& dist, unsigned workers = 1);

enum class OutputFormat { csv, json };
OutputFormat parse_output_format(std::string_view s);

using Metadata = std::vector<std::pair<std::string, std::string>>;

/// Shortest decimal string that parses back to the same double.
std::string round_trip_string(double x);

void emit_results(const ResidualHistogram& h, OutputFormat format, std::ostream& out, const Metadata& meta = {});
void emit_results(const AccuracySummary& s, OutputFormat format, std::ostream& out, const Metadata& meta = {});
/// Writes to path; throws std::runtime_error on I/O failure.
void emit_results(const ResidualHistogram& h, OutputFormat format, const std::string& path,
                  const Metadata& meta = {});
void emit_results(const AccuracySummary& s, OutputFormat format, const std::string& path, const Metadata& meta = {});

/// Inverse of emit_results for histograms (both formats).
ResidualHistogram parse_histogram(const std::string& text, OutputFormat format);

struct CheckResult {
  std::string name;
  double worst{0.0};
  double threshold{0.0};
  std::uint64_t samples{0};

  bool passed() const { return worst <= threshold; }
};

struct VerificationReport {
  std::vector<CheckResult> checks;
  std::uint64_t pencils{0};
  std::uint64_t rejected{0};  ///< draws discarded by the conditioning filter

  bool passed() const;
};

inline constexpr double kVerifyConditionCap = 1e6;

/**
 * Theorem suite on `pencils` random proper Hessenberg pairs of size n with
 * every shifted solve conditioned below kVerifyConditionCap: single-move
 * directions at both ends, every interior type II move, basic sweeps by the
 * closed form and by the move log, multishift (m = 2) and bidirectional
 * (m = 1, 2) sweeps, and the rational Krylov identities.
 */
VerificationReport run_theorem_suite(std::uint64_t seed, std::uint64_t pencils, Index n);

}  // namespace poleswap
