// Command-line front end: distribution evaluation (dist), joint-outlier
// scanning (cookd), misspecified Hotelling analysis (hotelling), the
// ten-row misspecification table (table1), and Monte Carlo sampling (mc).
//
// Exit codes: 0 converged, 1 usage or I/O error, 2 numeric non-convergence.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "genf/diagnostics.hpp"
#include "genf/genf.hpp"
#include "genf/hotelling.hpp"
#include "genf/mc.hpp"
#include "genf/specialfn.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNoConverge = 2;

double default_tolerance() {
  if (const char* env = std::getenv("GENF_DEFAULT_TOL")) {
    try {
      const double tol = std::stod(env);
      if (tol > 0.0) return tol;
    } catch (const std::exception&) {
      // fall through to the built-in default
    }
    std::cerr << "warning: ignoring invalid GENF_DEFAULT_TOL='" << env
              << "'\n";
  }
  return genf::GeneralizedF::kDefaultTol;
}

std::vector<double> parse_reals(const std::string& csv, const char* flag) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= csv.size()) {
    const std::size_t comma = csv.find(',', start);
    const std::string tok = csv.substr(
        start, comma == std::string::npos ? std::string::npos : comma - start);
    try {
      out.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw CLI::ValidationError(std::string(flag),
                                 "'" + tok + "' is not numeric");
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

std::vector<std::size_t> parse_indices(const std::string& csv,
                                       const char* flag) {
  std::vector<std::size_t> out;
  for (double v : parse_reals(csv, flag)) {
    const auto idx = static_cast<std::size_t>(v);
    if (v <= 0.0 || static_cast<double>(idx) != v) {
      throw CLI::ValidationError(std::string(flag),
                                 "indices must be positive integers");
    }
    out.push_back(idx);
  }
  return out;
}

std::string fixed5(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.5f", v);
  return buf;
}

std::string sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3e", v);
  return buf;
}

struct Emitter {
  bool as_json = false;

  void operator()(const json& record, const std::string& human) const {
    if (as_json) {
      std::cout << record.dump(2) << "\n";
    } else {
      std::cout << human;
    }
  }
};

json subset_report_json(const genf::diagnostics::SubsetReport& r) {
  json j;
  j["indices"] = r.indices;
  j["leverages"] = r.leverages;
  j["d_stat"] = r.d_stat;
  j["nu"] = r.nu;
  j["p_lower"] = r.p_lower;
  j["p_upper"] = r.p_upper;
  if (r.p_exact) {
    j["p_exact"] = *r.p_exact;
    j["error_bound"] = r.p_error_bound;
    j["converged"] = r.converged;
  }
  return j;
}

std::string subset_report_human(const genf::diagnostics::SubsetReport& r) {
  std::string out = "subset      =";
  for (std::size_t idx : r.indices) out += " " + std::to_string(idx);
  out += "\nleverages   =";
  for (double l : r.leverages) out += " " + fixed5(l);
  out += "\nd_stat      = " + fixed5(r.d_stat);
  out += "\nnu          = " + fixed5(r.nu);
  out += "\np_lower     = " + fixed5(r.p_lower);
  out += "\np_upper     = " + fixed5(r.p_upper);
  if (r.p_exact) {
    out += "\np_exact     = " + fixed5(*r.p_exact);
    out += "\nerror_bound = " + sci(r.p_error_bound);
    out += std::string("\nconverged   = ") + (r.converged ? "yes" : "no");
  }
  out += "\n";
  return out;
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  const auto dt = std::chrono::steady_clock::now() - start;
  return std::chrono::duration<double, std::milli>(dt).count();
}

struct DistArgs {
  std::string alphas;
  std::string ms;
  double nu = 0.0;
  double at = 0.0;
  std::string what = "cdf";
  std::string method = "series";
  std::optional<double> tol;
};

int run_dist(const DistArgs& args, const Emitter& emit, double tol_default) {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<double> alphas = parse_reals(args.alphas, "--alphas");
  const std::vector<double> ms = parse_reals(args.ms, "--ms");
  const genf::GeneralizedF dist(alphas, ms, args.nu);
  const double tol = args.tol.value_or(
      args.what == "pdf" && args.at > 0.0 ? args.at * tol_default
      : args.what == "quantile"           ? 1e-8
                                          : tol_default);

  genf::SeriesEvaluation eval;
  if (args.what == "quantile") {
    eval.value = dist.quantile(args.at, tol);
    eval.error_bound = tol;  // guarantee: |cdf(value) - prob| <= tol
    eval.converged = true;
  } else if (args.what == "pdf") {
    const bool exact_ok = dist.weights().alphas.size() == 2;
    if (args.method == "exact-r2" || (args.method == "auto" && exact_ok)) {
      eval.value = dist.pdf_exact_r2(args.at);
      eval.error_bound = 1e-12 * std::max(eval.value, 1.0);
      eval.converged = true;
    } else {
      eval = dist.pdf_series(args.at, tol);
    }
  } else if (args.what == "cdf") {
    eval = dist.cdf_series(args.at, tol);
  } else {
    eval = dist.survival(args.at, tol);
  }

  json record;
  record["command"] = "dist";
  record["inputs"] = {{"alphas", alphas}, {"ms", ms},     {"nu", args.nu},
                      {"at", args.at},    {"what", args.what},
                      {"method", args.method}, {"tol", tol}};
  record["value"] = eval.value;
  record["tau_used"] = eval.tau_used;
  record["error_bound"] = eval.error_bound;
  record["converged"] = eval.converged;
  record["elapsed_ms"] = elapsed_ms(start);

  std::string human = args.what + "(" + fixed5(args.at) + ")" +
                      " = " + fixed5(eval.value) + "\n" +
                      "tau_used    = " + std::to_string(eval.tau_used) + "\n" +
                      "error_bound = " + sci(eval.error_bound) + "\n" +
                      "converged   = " + (eval.converged ? "yes" : "no") +
                      "\n";
  emit(record, human);
  return eval.converged ? kExitOk : kExitNoConverge;
}

struct CookdArgs {
  std::string data;
  std::string response;
  bool no_intercept = false;
  bool header = false;
  std::size_t r = 1;
  std::string subset;
  double level = 0.05;
  std::optional<double> tol;
};

int run_cookd(const CookdArgs& args, const Emitter& emit, double tol_default) {
  const auto start = std::chrono::steady_clock::now();
  genf::diagnostics::CsvOptions options;
  options.header = args.header;
  options.response = args.response;
  options.add_intercept = !args.no_intercept;
  const genf::diagnostics::RegressionData data =
      genf::diagnostics::load_csv(args.data, options);
  const double tol = args.tol.value_or(tol_default);

  json record;
  record["command"] = "cookd";
  record["inputs"] = {{"data", args.data},
                      {"response", args.response},
                      {"add_intercept", !args.no_intercept},
                      {"n", data.n},
                      {"k", data.k},
                      {"tol", tol}};

  if (!args.subset.empty()) {
    const std::vector<std::size_t> subset =
        parse_indices(args.subset, "--subset");
    const genf::diagnostics::SubsetReport report =
        genf::diagnostics::subset_p_value(data, subset, tol);
    record["report"] = subset_report_json(report);
    record["elapsed_ms"] = elapsed_ms(start);
    emit(record, subset_report_human(report));
    return report.converged ? kExitOk : kExitNoConverge;
  }

  const std::vector<genf::diagnostics::SubsetReport> retained =
      genf::diagnostics::screen_subsets(data, args.r, args.level, tol);
  record["r"] = args.r;
  record["level"] = args.level;
  record["retained"] = json::array();
  bool all_converged = true;
  for (const auto& report : retained) {
    record["retained"].push_back(subset_report_json(report));
    all_converged = all_converged && report.converged;
  }
  record["elapsed_ms"] = elapsed_ms(start);

  std::string human = "retained " + std::to_string(retained.size()) +
                      " subset(s) at level " + fixed5(args.level) + "\n";
  for (const auto& report : retained) {
    human += "--\n" + subset_report_human(report);
  }
  emit(record, human);
  return all_converged ? kExitOk : kExitNoConverge;
}

struct HotellingArgs {
  std::string sigma = "identity";
  std::string omega;
  std::size_t n_obs = 0;
  double level = 0.05;
  std::optional<double> at;
  std::optional<double> tol;
};

genf::linalg::Matrix parse_dispersion(const std::string& descriptor,
                                      std::optional<std::size_t> dim,
                                      const char* flag) {
  if (descriptor == "identity") {
    if (!dim) {
      throw CLI::ValidationError(
          std::string(flag),
          "identity needs the dimension from the other matrix; specify the "
          "other matrix first or use a file/equicorr form");
    }
    return genf::linalg::Matrix::identity(*dim);
  }
  if (descriptor.rfind("equicorr:", 0) == 0) {
    const std::string params = descriptor.substr(9);
    const std::size_t comma = params.find(',');
    if (comma == std::string::npos) {
      throw CLI::ValidationError(std::string(flag),
                                 "expected equicorr:p,rho");
    }
    try {
      const std::size_t p = std::stoul(params.substr(0, comma));
      const double rho = std::stod(params.substr(comma + 1));
      return genf::hotelling::equicorrelated(p, rho);
    } catch (const genf::DomainError&) {
      throw;
    } catch (const std::exception&) {
      throw CLI::ValidationError(std::string(flag),
                                 "expected equicorr:p,rho with numeric p, rho");
    }
  }
  return genf::hotelling::load_matrix_csv(descriptor);
}

int run_hotelling(const HotellingArgs& args, const Emitter& emit,
                  double tol_default) {
  const auto start = std::chrono::steady_clock::now();
  // Resolve equicorr/file forms first so "identity" can borrow their order.
  std::optional<genf::linalg::Matrix> omega_first;
  std::optional<std::size_t> dim;
  if (args.omega != "identity") {
    omega_first = parse_dispersion(args.omega, std::nullopt, "--omega");
    dim = omega_first->rows();
  }
  const genf::linalg::Matrix sigma =
      parse_dispersion(args.sigma, dim, "--sigma");
  const genf::linalg::Matrix omega =
      omega_first ? *omega_first
                  : parse_dispersion(args.omega, sigma.rows(), "--omega");

  const genf::hotelling::HotellingScenario scenario =
      genf::hotelling::make_scenario(sigma, omega, args.n_obs);
  const double y = args.at.value_or(genf::specialfn::central_f_quantile(
      1.0 - args.level, static_cast<double>(scenario.dim), scenario.nu));
  const double tol = args.tol.value_or(tol_default);
  const genf::SeriesEvaluation tail =
      genf::hotelling::misspecified_tail(scenario, y, tol);

  json record;
  record["command"] = "hotelling";
  record["inputs"] = {{"sigma", args.sigma}, {"omega", args.omega},
                      {"N", args.n_obs},     {"p", scenario.dim},
                      {"level", args.level}, {"tol", tol}};
  record["pis"] = scenario.pis;
  record["nu"] = scenario.nu;
  record["at"] = y;
  record["tail"] = tail.value;
  record["tau_used"] = tail.tau_used;
  record["error_bound"] = tail.error_bound;
  record["converged"] = tail.converged;
  record["elapsed_ms"] = elapsed_ms(start);

  std::string human = "pis         =";
  for (double pi : scenario.pis) human += " " + fixed5(pi);
  human += "\nnu          = " + fixed5(scenario.nu);
  human += "\nat          = " + fixed5(y);
  human += "\ntail        = " + fixed5(tail.value);
  human += "\ntau_used    = " + std::to_string(tail.tau_used);
  human += "\nerror_bound = " + sci(tail.error_bound);
  human += std::string("\nconverged   = ") + (tail.converged ? "yes" : "no") +
           "\n";
  emit(record, human);
  return tail.converged ? kExitOk : kExitNoConverge;
}

int run_table1(double target, const Emitter& emit) {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<genf::hotelling::Table1Row> rows =
      genf::hotelling::table1(target);

  json record;
  record["command"] = "table1";
  record["inputs"] = {{"target", target}};
  record["rows"] = json::array();
  for (const auto& row : rows) {
    record["rows"].push_back({{"rho", row.rho},
                              {"tau1", row.tau1},
                              {"tau2", row.tau2},
                              {"tau3", row.tau3},
                              {"tail", row.tail}});
  }
  record["elapsed_ms"] = elapsed_ms(start);

  std::string human = "rho   tau1  tau2  tau3  tail\n";
  for (const auto& row : rows) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%.1f   %-5zu %-5zu %-5zu %.5f\n", row.rho,
                  row.tau1, row.tau2, row.tau3, row.tail);
    human += buf;
  }
  emit(record, human);
  return kExitOk;
}

struct McArgs {
  std::string alphas;
  std::string ms;
  double nu = 0.0;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::optional<double> at;
  std::string out;
};

int run_mc(const McArgs& args, const Emitter& emit) {
  const auto start = std::chrono::steady_clock::now();
  genf::mc::SamplerConfig cfg;
  cfg.alphas = parse_reals(args.alphas, "--alphas");
  cfg.ms = parse_reals(args.ms, "--ms");
  cfg.nu = args.nu;
  cfg.n = args.n;
  cfg.seed = args.seed;
  const std::vector<double> draws = genf::mc::sample(cfg);

  double mean = 0.0;
  for (double d : draws) mean += d;
  mean /= static_cast<double>(draws.size());

  json record;
  record["command"] = "mc";
  record["inputs"] = {{"alphas", cfg.alphas}, {"ms", cfg.ms}, {"nu", cfg.nu},
                      {"n", cfg.n},           {"seed", cfg.seed}};
  record["mean"] = mean;
  std::string human = "n           = " + std::to_string(cfg.n) + "\n" +
                      "mean        = " + fixed5(mean) + "\n";

  if (args.at) {
    const double empirical = genf::mc::empirical_cdf(draws, *args.at);
    const genf::GeneralizedF dist(cfg.alphas, cfg.ms, cfg.nu);
    const genf::SeriesEvaluation series = dist.cdf_series(*args.at, 1e-8);
    record["at"] = *args.at;
    record["empirical_cdf"] = empirical;
    record["series_cdf"] = series.value;
    human += "at          = " + fixed5(*args.at) + "\n";
    human += "empirical   = " + fixed5(empirical) + "\n";
    human += "series_cdf  = " + fixed5(series.value) + "\n";
  }
  if (!args.out.empty()) {
    std::ofstream out(args.out);
    if (!out) {
      throw genf::DomainError("mc: cannot open output file '" + args.out +
                              "'");
    }
    out.precision(17);
    for (double d : draws) out << d << "\n";
    record["out"] = args.out;
    human += "wrote       = " + args.out + "\n";
  }
  record["elapsed_ms"] = elapsed_ms(start);
  emit(record, human);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "generalized F distribution toolkit: exact tail probabilities for "
      "weighted chi-square ratios, joint-outlier scanning, and misspecified "
      "T^2 analysis"};
  app.require_subcommand(1);
  Emitter emit;
  app.add_flag("--json", emit.as_json, "emit a structured JSON record");
  const double tol_default = default_tolerance();

  DistArgs dist_args;
  CLI::App* dist = app.add_subcommand(
      "dist", "evaluate pdf/cdf/sf/quantile of the distribution");
  dist->add_option("--alphas", dist_args.alphas,
                   "comma-separated positive weights")->required();
  dist->add_option("--ms", dist_args.ms,
                   "comma-separated numerator dofs")->required();
  dist->add_option("--nu", dist_args.nu, "denominator dof")->required();
  dist->add_option("--at", dist_args.at,
                   "evaluation point (probability for quantile)")->required();
  dist->add_option("--what", dist_args.what, "quantity to compute")
      ->check(CLI::IsMember({"pdf", "cdf", "sf", "quantile"}));
  dist->add_option("--method", dist_args.method, "pdf evaluation method")
      ->check(CLI::IsMember({"series", "exact-r2", "auto"}));
  dist->add_option("--tol", dist_args.tol, "truncation-error tolerance");

  CookdArgs cookd_args;
  CLI::App* cookd = app.add_subcommand(
      "cookd", "joint-outlier influence statistics from a CSV dataset");
  cookd->add_option("--data", cookd_args.data, "CSV file")->required();
  cookd->add_option("--response", cookd_args.response,
                    "response column (1-based index or header name; "
                    "default: last column)");
  cookd->add_flag("--no-intercept", cookd_args.no_intercept,
                  "do not prepend an intercept column");
  cookd->add_flag("--header", cookd_args.header, "first CSV row is a header");
  cookd->add_option("--r", cookd_args.r, "subset size for scanning");
  cookd->add_option("--subset", cookd_args.subset,
                    "explicit comma-separated 1-based observation indices");
  cookd->add_option("--level", cookd_args.level,
                    "screening level on the lower bound");
  cookd->add_option("--tol", cookd_args.tol, "p-value tolerance");

  HotellingArgs hot_args;
  CLI::App* hot = app.add_subcommand(
      "hotelling", "misspecified T^2 tail probability");
  hot->add_option("--sigma", hot_args.sigma,
                  "true dispersion: file, identity, or equicorr:p,rho");
  hot->add_option("--omega", hot_args.omega,
                  "assumed dispersion: file, identity, or equicorr:p,rho")
      ->required();
  hot->add_option("--N", hot_args.n_obs, "sample size")->required();
  hot->add_option("--level", hot_args.level, "nominal test level");
  hot->add_option("--at", hot_args.at,
                  "explicit critical value (overrides --level)");
  hot->add_option("--tol", hot_args.tol, "tail tolerance");

  double table1_target = 1e-4;
  CLI::App* table1 = app.add_subcommand(
      "table1", "ten-row misspecified type-I-error table");
  table1->add_option("--target", table1_target,
                     "truncation-error target for the term counts");

  McArgs mc_args;
  CLI::App* mc = app.add_subcommand("mc", "Monte Carlo sampling of W");
  mc->add_option("--alphas", mc_args.alphas,
                 "comma-separated positive weights")->required();
  mc->add_option("--ms", mc_args.ms, "comma-separated numerator dofs")
      ->required();
  mc->add_option("--nu", mc_args.nu, "denominator dof")->required();
  mc->add_option("--n", mc_args.n, "number of draws")->required();
  mc->add_option("--seed", mc_args.seed, "64-bit seed");
  mc->add_option("--at", mc_args.at, "report the empirical cdf at this point");
  mc->add_option("--out", mc_args.out, "write raw samples, one per line");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      return app.exit(e);  // --help / --version
    }
    std::cerr << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*dist) return run_dist(dist_args, emit, tol_default);
    if (*cookd) return run_cookd(cookd_args, emit, tol_default);
    if (*hot) return run_hotelling(hot_args, emit, tol_default);
    if (*table1) return run_table1(table1_target, emit);
    if (*mc) return run_mc(mc_args, emit);
  } catch (const genf::ConvergenceError& e) {
    std::cerr << "non-convergence: " << e.what() << "\n";
    return kExitNoConverge;
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;  // unreachable given require_subcommand(1)
}
