#include "poleswap_cli/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "poleswap/errors.hpp"
#include "poleswap/experiments.hpp"
#include "poleswap/matrix_io.hpp"
#include "poleswap/rqz.hpp"

namespace poleswap::cli {

namespace {

using nlohmann::json;

struct CliConfig {
  std::string subcommand;
  std::string input;
  std::uint64_t trials{0};
  std::uint64_t seed{0};
  std::string method{"new"};
  std::string shift{"wilkinson"};
  std::string pole{"infinity"};
  std::string format{"json"};
  std::string out;
  double tol_deflate{kUnitRoundoff};
  double min_exp{-12.0};
  double max_exp{12.0};
  Index n{8};
  std::uint64_t pencils{100};
  unsigned workers{1};

  Metadata metadata() const {
    Metadata m{{"subcommand", subcommand}, {"seed", std::to_string(seed)}, {"format", format}};
    if (subcommand == "eig") {
      m.insert(m.end(), {{"input", input},
                         {"method", method},
                         {"shift", shift},
                         {"pole", pole},
                         {"tol_deflate", round_trip_string(tol_deflate)}});
    }
    if (subcommand == "swap-bench" || subcommand == "accuracy") {
      m.insert(m.end(), {{"trials", std::to_string(trials)},
                         {"min_exp", round_trip_string(min_exp)},
                         {"max_exp", round_trip_string(max_exp)},
                         {"workers", std::to_string(workers)},
                         {"rng", kRngName}});
    }
    if (subcommand == "verify") {
      m.insert(m.end(), {{"n", std::to_string(n)}, {"pencils", std::to_string(pencils)}, {"rng", kRngName}});
    }
    if (!out.empty()) m.emplace_back("out", out);
    return m;
  }
};

// Writes the text either to --out or to the given stream.
void deliver(const CliConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(cfg.out, std::ios::binary);
  if (!f || !(f << text)) throw std::runtime_error("cannot write " + cfg.out);
}

json pair_json(Complex z) { return json::array({z.real(), z.imag()}); }

int cmd_eig(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  PencilData data;
  try {
    data = read_pencil_file(cfg.input);
  } catch (const MatrixParseError& e) {
    err << "poleswap eig: " << cfg.input << ": " << e.what() << '\n';
    return kExitInput;
  }
  SolveOptions opt;
  opt.method = parse_swap_method(cfg.method);
  opt.shift = parse_shift_strategy(cfg.shift);
  opt.pole = parse_pole_strategy(cfg.pole);
  opt.eps = cfg.tol_deflate;
  opt.seed = cfg.seed;
  const SolveResult r = solve(data.a, data.b, opt);

  std::ostringstream buf;
  const OutputFormat fmt = parse_output_format(cfg.format);
  if (fmt == OutputFormat::json) {
    json doc;
    doc["config"] = json::object();
    for (const auto& [k, v] : cfg.metadata()) doc["config"][k] = v;
    doc["converged"] = r.converged;
    doc["iterations"] = r.iterations;
    doc["r_a"] = r.r_a;
    doc["r_b"] = r.r_b;
    doc["eigenvalues"] = json::array();
    for (const auto& e : r.eigenvalues) {
      json item{{"alpha", pair_json(e.alpha())}, {"beta", pair_json(e.beta())}};
      item["value"] = e.is_infinite() ? json(nullptr) : pair_json(e.value());
      doc["eigenvalues"].push_back(std::move(item));
    }
    buf << doc.dump(2) << '\n';
  } else {
    for (const auto& [k, v] : cfg.metadata()) buf << "# " << k << '=' << v << '\n';
    buf << "# converged=" << (r.converged ? "true" : "false") << '\n'
        << "# iterations=" << r.iterations << '\n'
        << "# r_a=" << round_trip_string(r.r_a) << '\n'
        << "# r_b=" << round_trip_string(r.r_b) << '\n'
        << "index,alpha_re,alpha_im,beta_re,beta_im,value_re,value_im\n";
    for (std::size_t i = 0; i < r.eigenvalues.size(); ++i) {
      const auto& e = r.eigenvalues[i];
      buf << i << ',' << round_trip_string(e.alpha().real()) << ',' << round_trip_string(e.alpha().imag()) << ','
          << round_trip_string(e.beta().real()) << ',' << round_trip_string(e.beta().imag()) << ',';
      if (e.is_infinite()) {
        buf << "inf,0\n";
      } else {
        buf << round_trip_string(e.value().real()) << ',' << round_trip_string(e.value().imag()) << '\n';
      }
    }
  }
  deliver(cfg, buf.str(), out);
  if (!r.converged) {
    err << "poleswap eig: iteration cap reached on block [" << r.stuck_lo << ", " << r.stuck_hi << ")\n";
    return kExitNonConvergence;
  }
  return kExitOk;
}

StressDistribution distribution(const CliConfig& cfg) {
  if (!(cfg.min_exp <= cfg.max_exp)) throw std::invalid_argument("--min-exp must not exceed --max-exp");
  return StressDistribution{cfg.min_exp, cfg.max_exp, cfg.seed};
}

int cmd_swap_bench(const CliConfig& cfg, std::ostream& out) {
  const ResidualHistogram h =
      run_swap_benchmark(cfg.trials, distribution(cfg),
                         {SwapMethod::new_method, SwapMethod::van_dooren, SwapMethod::sylvester}, cfg.workers);
  std::ostringstream buf;
  emit_results(h, parse_output_format(cfg.format), buf, cfg.metadata());
  deliver(cfg, buf.str(), out);
  return kExitOk;
}

int cmd_accuracy(const CliConfig& cfg, std::ostream& out) {
  const AccuracySummary s = run_accuracy_experiment(cfg.trials, distribution(cfg), cfg.workers);
  std::ostringstream buf;
  emit_results(s, parse_output_format(cfg.format), buf, cfg.metadata());
  deliver(cfg, buf.str(), out);
  return kExitOk;
}

int cmd_verify(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  const VerificationReport rep = run_theorem_suite(cfg.seed, cfg.pencils, cfg.n);
  std::ostringstream buf;
  if (parse_output_format(cfg.format) == OutputFormat::json) {
    json doc;
    doc["config"] = json::object();
    for (const auto& [k, v] : cfg.metadata()) doc["config"][k] = v;
    doc["pencils"] = rep.pencils;
    doc["rejected"] = rep.rejected;
    doc["passed"] = rep.passed();
    doc["checks"] = json::array();
    for (const auto& c : rep.checks) {
      doc["checks"].push_back({{"name", c.name},
                               {"worst", round_trip_string(c.worst)},
                               {"threshold", round_trip_string(c.threshold)},
                               {"samples", c.samples},
                               {"passed", c.passed()}});
    }
    buf << doc.dump(2) << '\n';
  } else {
    for (const auto& [k, v] : cfg.metadata()) buf << "# " << k << '=' << v << '\n';
    buf << "name,worst,threshold,samples,passed\n";
    for (const auto& c : rep.checks) {
      buf << c.name << ',' << round_trip_string(c.worst) << ',' << round_trip_string(c.threshold) << ','
          << c.samples << ',' << (c.passed() ? "true" : "false") << '\n';
    }
  }
  deliver(cfg, buf.str(), out);
  if (!rep.passed()) {
    for (const auto& c : rep.checks) {
      if (!c.passed()) err << "poleswap verify: check " << c.name << " failed (" << c.worst << " > " << c.threshold
                           << ")\n";
    }
    return kExitVerification;
  }
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dense complex generalized eigensolver by pole swapping"};
  app.require_subcommand(1);
  CliConfig cfg;
  const std::vector<std::string> methods{"new", "vandooren", "sylvester"};
  const std::vector<std::string> formats{"csv", "json"};

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", cfg.seed, "Master seed")->capture_default_str();
    sub->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember(formats))->capture_default_str();
    sub->add_option("--out", cfg.out, "Output file (default stdout)");
  };
  std::uint64_t bench_trials = 1000000;
  std::uint64_t accuracy_trials = 10000;
  auto add_stress = [&](CLI::App* sub, std::uint64_t& trials) {
    sub->add_option("--trials", trials, "Number of random trials")->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--min-exp", cfg.min_exp, "Smallest log10 modulus")->capture_default_str();
    sub->add_option("--max-exp", cfg.max_exp, "Largest log10 modulus")->capture_default_str();
    sub->add_option("--workers", cfg.workers, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  };

  CLI::App* eig = app.add_subcommand("eig", "Solve one pencil from a matrix file");
  eig->add_option("--input", cfg.input, "Matrix file")->required();
  eig->add_option("--method", cfg.method, "Swap kernel")->check(CLI::IsMember(methods))->capture_default_str();
  eig->add_option("--shift", cfg.shift, "Shift strategy")
      ->check(CLI::IsMember({"rayleigh", "wilkinson"}))
      ->capture_default_str();
  eig->add_option("--pole", cfg.pole, "New-pole strategy")
      ->check(CLI::IsMember({"infinity", "rayleigh"}))
      ->capture_default_str();
  eig->add_option("--tol-deflate", cfg.tol_deflate, "Deflation threshold")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  add_common(eig);

  CLI::App* bench = app.add_subcommand("swap-bench", "Residual histogram of the 2x2 swap kernels");
  add_stress(bench, bench_trials);
  add_common(bench);

  CLI::App* acc = app.add_subcommand("accuracy", "3x3 accuracy comparison against the extended-precision oracle");
  add_stress(acc, accuracy_trials);
  add_common(acc);

  CLI::App* verify = app.add_subcommand("verify", "Check the subspace-iteration identities on random pencils");
  verify->add_option("--n", cfg.n, "Pencil size")->check(CLI::Range(4, 64))->capture_default_str();
  verify->add_option("--pencils", cfg.pencils, "Number of accepted pencils")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  add_common(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    std::ostringstream msg;
    app.exit(e, msg, msg);
    err << msg.str();
    return e.get_exit_code() == 0 ? kExitOk : kExitInput;
  }
  cfg.subcommand = app.get_subcommands().front()->get_name();
  cfg.trials = cfg.subcommand == "accuracy" ? accuracy_trials : bench_trials;

  try {
    if (cfg.subcommand == "eig") return cmd_eig(cfg, out, err);
    if (cfg.subcommand == "swap-bench") return cmd_swap_bench(cfg, out);
    if (cfg.subcommand == "accuracy") return cmd_accuracy(cfg, out);
    return cmd_verify(cfg, out, err);
  } catch (const NumericalBreakdown& e) {
    err << "poleswap " << cfg.subcommand << ": " << e.what() << '\n';
    return kExitNonConvergence;
  } catch (const std::exception& e) {
    err << "poleswap " << cfg.subcommand << ": " << e.what() << '\n';
    return kExitInput;
  }
}

}  // namespace poleswap::cli
