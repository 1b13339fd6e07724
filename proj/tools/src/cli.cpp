#include "choquard_cli/cli.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "choquard/errors.hpp"
#include "choquard/polarization.hpp"
#include "choquard/profile_io.hpp"
#include "choquard/riesz.hpp"
#include "choquard/scaling.hpp"

namespace choquard::cli {

namespace {

class UsageError : public Error {
 public:
  using Error::Error;
};

std::shared_ptr<spdlog::logger> logger() {
  static std::once_flag once;
  static std::shared_ptr<spdlog::logger> log;
  std::call_once(once, [] {
    log = spdlog::stderr_color_mt("choquard");
    log->set_pattern("[%l] %v");
  });
  const char* env = std::getenv("CHOQUARD_LOG");
  log->set_level(env ? spdlog::level::from_str(env) : spdlog::level::warn);
  return log;
}

// "1.8", "7/3"
double parse_real(const std::string& text) {
  auto one = [&](std::string_view s) {
    double x = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
      throw UsageError("cannot parse number '" + text + "'");
    return x;
  };
  const auto slash = text.find('/');
  if (slash == std::string::npos) return one(text);
  const double den = one(std::string_view(text).substr(slash + 1));
  if (den == 0.0) throw UsageError("zero denominator in '" + text + "'");
  return one(std::string_view(text).substr(0, slash)) / den;
}

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  write_file_atomic(path, j.dump(2) + "\n");
}

void write_meta(const std::filesystem::path& dir, const std::string& command, double seconds) {
  write_json(dir / "report.meta.json",
             {{"command", command}, {"finished_utc", utc_now()}, {"elapsed_seconds", seconds}});
}

std::string_view spacing_name(Spacing s) { return s == Spacing::uniform ? "uniform" : "graded"; }

nlohmann::json params_json(const ProblemParams& pp) {
  return {{"N", pp.dim()},
          {"alpha", pp.alpha()},
          {"p", pp.p()},
          {"riesz_constant", pp.riesz_constant()},
          {"admissible", pp.admissible()},
          {"admissibility", pp.admissibility_reason()}};
}

nlohmann::json grid_json(const GridSpec& g) {
  return {{"r_max", g.r_max}, {"n", g.n}, {"spacing", spacing_name(g.spacing)}};
}

KernelMatrix kernel_for(const RunConfig& cfg, const GridPtr& grid, const ProblemParams& pp) {
  const unsigned threads = std::max(1u, cfg.jobs);
  if (!cfg.cache.empty()) return cached_kernel(cfg.cache, grid, pp, threads);
  return assemble_kernel(grid, pp, threads);
}

GridPtr build_grid(const GridSpec& g, int dim) { return make_grid(dim, g.r_max, g.n, g.spacing); }

// p = 2 extras: local decay rate, fitted power and the energy form of nu.
nlohmann::json linear_checks(const GroundstateResult& res, const ProblemParams& pp, double nu) {
  nlohmann::json j;
  const auto ld = linear_log_derivative_check(res.profile, pp, nu);
  j["log_derivative_max_deviation"] = ld.max_relative_deviation;
  if (pp.alpha() <= pp.dim() - 1.0 + 1e-12) {
    const auto fit = fit_tail_exponent(res.profile, pp, nu);
    j["tail_exponent_fitted"] = fit.exponent;
    j["tail_exponent_predicted"] = fit.predicted;
  }
  if (pp.alpha() > pp.dim() - 4.0)
    j["nu_energy_form"] = nu_parameter(pp, res.values.mass, res.values.energy, NuSource::energy);
  return j;
}

struct Verdict {
  int code;
  std::string status;
};

// Decay analysis and certificate on a profile; shared by solve and verify.
Verdict certify(const RadialProfile& profile, const KernelMatrix& kernel, const ProblemParams& pp,
                nlohmann::json& report, std::optional<DecayReport>& decay,
                const GroundstateResult* result) {
  const auto ver = verify_groundstate(profile, kernel, pp);
  report["verification"] = to_json(ver);
  Verdict v{kOk, "certified"};
  try {
    decay = decay_limit(profile, pp);
    report["decay"] = to_json(*decay);
    if (decay->regime == DecayRegime::linear && result)
      report["decay"]["linear_checks"] = linear_checks(*result, pp, *decay->nu);
  } catch (const UnreliableTail& e) {
    report["decay"] = {{"error", e.what()}};
    v = {kUnreliableTail, "unreliable-tail"};
  }
  if (v.code == kOk && !ver.all_pass()) v = {kNotCertified, "certificate-failed"};
  return v;
}

void write_decay_trace(const std::filesystem::path& dir, const std::optional<DecayReport>& d) {
  if (d) write_csv_columns(dir / "decay_trace.csv", "r,transformed", d->trace_r, d->trace_value);
}

}  // namespace

GridSpec grid_for(const RunConfig& cfg, double p) {
  const bool sub = p < 2.0 - 1e-12;
  return {cfg.r_max.value_or(sub ? 240.0 : 30.0), cfg.n.value_or(3000),
          cfg.spacing.value_or(sub ? Spacing::graded : Spacing::uniform)};
}

PipelineOutcome solve_pipeline(const RunConfig& cfg, double alpha, double p) {
  const ProblemParams pp(cfg.dim, alpha, p);
  const GridSpec gs = grid_for(cfg, p);
  PipelineOutcome out;
  auto& rep = out.report;
  rep["schema_version"] = kSchemaVersion;
  rep["params"] = params_json(pp);
  rep["grid"] = grid_json(gs);
  if (!pp.admissible()) {
    out.exit_code = kInadmissible;
    out.status = "inadmissible";
    rep["status"] = out.status;
    rep["error"] = std::string("no groundstate: ") + pp.admissibility_reason();
    return out;
  }
  const GridPtr grid = build_grid(gs, cfg.dim);
  const KernelMatrix kernel = kernel_for(cfg, grid, pp);
  const SolverConfig& sc = cfg.solver;
  rep["solver"] = {{"max_iter", sc.max_iter},
                   {"tol_residual", sc.tol_residual},
                   {"damping", sc.damping},
                   {"init", to_string(sc.init)}};
  try {
    out.result = solve_groundstate(pp, kernel, sc);
  } catch (const StagnationError& e) {
    out.exit_code = kNotCertified;
    out.status = "stagnated";
    rep["status"] = out.status;
    rep["error"] = e.what();
    return out;
  }
  const auto& res = *out.result;
  rep["solver"]["iterations"] = res.iterations;
  rep["solver"]["converged"] = res.converged;
  rep["solver"]["final_damping"] = res.damping;
  rep["solver"]["nehari_update_residual"] = res.nehari_update_residual;
  rep["solver"]["s_change"] = res.s_change;
  rep["solver"]["fixed_point_residual"] = res.fixed_point_residual;
  rep["values"] = to_json(res.values);
  rep["values"]["mass_over_energy"] = res.values.mass / res.values.energy;
  rep["values"]["predicted_mass_over_energy"] = mass_energy_ratio(pp);
  if (!res.converged) {
    out.exit_code = kNotCertified;
    out.status = "not-converged";
  } else {
    const Verdict v = certify(res.profile, kernel, pp, rep, out.decay, &res);
    out.exit_code = v.code;
    out.status = v.status;
  }
  rep["status"] = out.status;
  return out;
}

int run_solve(const RunConfig& cfg, std::ostream& os) {
  const auto t0 = std::chrono::steady_clock::now();
  auto log = logger();
  log->info("solve N={} alpha={} p={}", cfg.dim, cfg.alpha, cfg.p);
  PipelineOutcome o = solve_pipeline(cfg, cfg.alpha, cfg.p);
  o.report["command"] = "solve";
  o.report["exit_code"] = o.exit_code;
  std::filesystem::create_directories(cfg.out);
  if (o.result) {
    write_profile_csv(cfg.out / "profile.csv", o.result->profile);
    std::vector<double> it(o.result->s_history.size());
    for (std::size_t k = 0; k < it.size(); ++k) it[k] = static_cast<double>(k);
    write_csv_columns(cfg.out / "s_history.csv", "iteration,S", it, o.result->s_history);
    for (std::size_t k = 0; k < o.result->s_history.size(); ++k)
      log->debug("iteration {} S = {}", k, format_double(o.result->s_history[k]));
  }
  write_decay_trace(cfg.out, o.decay);
  write_json(cfg.out / "report.json", o.report);
  write_meta(cfg.out, "solve",
             std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  os << "status: " << o.status << " (exit " << o.exit_code << ")\n";
  if (o.report.contains("error")) os << o.report["error"].get<std::string>() << "\n";
  if (o.exit_code == kUnreliableTail)
    os << o.report["decay"]["error"].get<std::string>() << "\nhint: raise --rmax\n";
  if (o.result)
    os << "S = " << format_double(o.result->values.quotient_s)
       << ", iterations = " << o.result->iterations << "\n";
  return o.exit_code;
}

int run_verify(const RunConfig& cfg, std::ostream& os) {
  const auto t0 = std::chrono::steady_clock::now();
  if (cfg.profile.empty()) throw UsageError("verify needs --profile <csv>");
  const ProblemParams pp(cfg.dim, cfg.alpha, cfg.p);
  const GridSpec gs = grid_for(cfg, cfg.p);
  nlohmann::json rep;
  rep["schema_version"] = kSchemaVersion;
  rep["command"] = "verify";
  rep["params"] = params_json(pp);
  rep["grid"] = grid_json(gs);
  rep["profile"] = cfg.profile.filename().string();
  int code = kOk;
  std::string status;
  std::optional<DecayReport> decay;
  if (!pp.admissible()) {
    code = kInadmissible;
    status = "inadmissible";
    rep["error"] = std::string("no groundstate: ") + pp.admissibility_reason();
  } else {
    const GridPtr grid = build_grid(gs, cfg.dim);
    const KernelMatrix kernel = kernel_for(cfg, grid, pp);
    const auto samples = read_profile_csv(cfg.profile);
    const RadialProfile u = interpolate(samples.r, samples.value, grid);
    rep["values"] = to_json(evaluate(u, kernel, pp));
    const Verdict v = certify(u, kernel, pp, rep, decay, nullptr);
    code = v.code;
    status = v.status;
  }
  rep["status"] = status;
  rep["exit_code"] = code;
  std::filesystem::create_directories(cfg.out);
  write_decay_trace(cfg.out, decay);
  write_json(cfg.out / "report.json", rep);
  write_meta(cfg.out, "verify",
             std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  os << "status: " << status << " (exit " << code << ")\n";
  return code;
}

int run_sweep(const RunConfig& cfg, std::ostream& os) {
  const auto t0 = std::chrono::steady_clock::now();
  const bool by_p = !cfg.p_list.empty();
  if (by_p == !cfg.alpha_list.empty())
    throw UsageError("sweep needs exactly one non-empty --p-list or --alpha-list");
  const auto& list = by_p ? cfg.p_list : cfg.alpha_list;
  std::filesystem::create_directories(cfg.out / "rows");

  struct Row {
    double alpha, p;
    PipelineOutcome outcome;
  };
  std::vector<Row> rows(list.size());
  for (std::size_t k = 0; k < list.size(); ++k) {
    rows[k].alpha = by_p ? cfg.alpha : list[k];
    rows[k].p = by_p ? list[k] : cfg.p;
  }
  const unsigned workers =
      std::max(1u, std::min<unsigned>(cfg.jobs, static_cast<unsigned>(rows.size())));
  // Kernel threads stay at one per row when rows run side by side.
  RunConfig inner = cfg;
  if (workers > 1) inner.jobs = 1;
  auto log = logger();
  auto work = [&](std::size_t k) {
    Row& row = rows[k];
    try {
      row.outcome = solve_pipeline(inner, row.alpha, row.p);
    } catch (const Error& e) {
      row.outcome.exit_code = kUsage;
      row.outcome.status = "error";
      row.outcome.report = {{"schema_version", kSchemaVersion}, {"error", e.what()}};
    }
    row.outcome.report["row"] = k;
    write_json(cfg.out / "rows" / ("row_" + std::to_string(k) + ".json"), row.outcome.report);
    log->info("row {} (alpha={}, p={}): {}", k, row.alpha, row.p, row.outcome.status);
  };
  {
    std::vector<std::jthread> pool;
    std::atomic<std::size_t> next{0};
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t k; (k = next.fetch_add(1)) < rows.size();) work(k);
      });
  }

  auto num = [](const nlohmann::json& j, std::initializer_list<const char*> path) -> std::string {
    const nlohmann::json* node = &j;
    for (const char* key : path) {
      if (!node->is_object() || !node->contains(key)) return "";
      node = &(*node)[key];
    }
    return node->is_number() ? format_double(node->get<double>()) : "";
  };
  std::string csv =
      "N,alpha,p,status,exit_code,S,E,M_over_E,predicted_M_over_E,decay_plateau,"
      "nehari_residual,pohozaev_residual,integral_identity_residual,pde_residual\n";
  nlohmann::json summary;
  summary["schema_version"] = kSchemaVersion;
  summary["command"] = "sweep";
  summary["rows"] = nlohmann::json::array();
  std::size_t ok = 0;
  for (const Row& row : rows) {
    const auto& r = row.outcome.report;
    if (row.outcome.exit_code == kOk) ++ok;
    csv += std::to_string(cfg.dim) + "," + format_double(row.alpha) + "," + format_double(row.p) +
           "," + row.outcome.status + "," + std::to_string(row.outcome.exit_code) + "," +
           num(r, {"values", "quotient_s"}) + "," + num(r, {"values", "energy"}) + "," +
           num(r, {"values", "mass_over_energy"}) + "," +
           num(r, {"values", "predicted_mass_over_energy"}) + "," +
           num(r, {"decay", "plateau"}) + "," +
           num(r, {"verification", "nehari_residual", "value"}) + "," +
           num(r, {"verification", "pohozaev_residual", "value"}) + "," +
           num(r, {"verification", "integral_identity_residual", "value"}) + "," +
           num(r, {"verification", "pde_residual", "value"}) + "\n";
    summary["rows"].push_back(
        {{"alpha", row.alpha}, {"p", row.p}, {"status", row.outcome.status},
         {"exit_code", row.outcome.exit_code}});
  }
  const int code = ok > 0 ? kOk : kNotCertified;
  summary["successes"] = ok;
  summary["exit_code"] = code;
  write_file_atomic(cfg.out / "sweep.csv", csv);
  write_json(cfg.out / "report.json", summary);
  write_meta(cfg.out, "sweep",
             std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  os << ok << " of " << rows.size() << " rows certified\n";
  return code;
}

int run_polarization_campaign(const RunConfig& cfg, std::ostream& os) {
  const auto t0 = std::chrono::steady_clock::now();
  const CampaignReport rep = run_pairing_campaign(cfg.trials, cfg.seed, std::max(1u, cfg.jobs));
  nlohmann::json j = to_json(rep, true);
  j["schema_version"] = kSchemaVersion;
  j["command"] = "polarization-campaign";
  const int code = rep.failures.empty() ? kOk : kNotCertified;
  j["exit_code"] = code;
  std::filesystem::create_directories(cfg.out);
  write_json(cfg.out / "report.json", j);
  write_meta(cfg.out, "polarization-campaign",
             std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  os << rep.trials << " trials, min gain " << format_double(rep.min_gain) << ", "
     << rep.equality_count << " zero-gain, " << rep.failures.size() << " failures\n";
  return code;
}

int run_scaling_audit(const RunConfig& cfg, std::ostream& os) {
  constexpr double kGapTol = 1e-4;
  const auto t0 = std::chrono::steady_clock::now();
  const ProblemParams pp(cfg.dim, cfg.alpha, cfg.p);
  const GridSpec gs = grid_for(cfg, cfg.p);
  const GridPtr grid = build_grid(gs, cfg.dim);
  const KernelMatrix kernel = kernel_for(cfg, grid, pp);
  nlohmann::json rep;
  rep["schema_version"] = kSchemaVersion;
  rep["command"] = "scaling-audit";
  rep["params"] = params_json(pp);
  rep["grid"] = grid_json(gs);
  rep["gap_tolerance"] = kGapTol;
  bool ok = true;
  auto audit = [&](const RadialProfile& u) {
    nlohmann::json j = nlohmann::json::array();
    for (ScanKind k : {ScanKind::e_ray, ScanKind::s_dilate, ScanKind::e0_mass_dilate}) {
      try {
        const ScanReport s = dilation_scan(u, kernel, pp, k);
        j.push_back(to_json(s));
        if (!(s.relative_gap <= kGapTol)) ok = false;
      } catch (const RegimeError& e) {
        j.push_back({{"which", to_string(k)}, {"regime_error", e.what()}});
      }
    }
    return j;
  };
  rep["probe"] = {{"profile", "exp(-r^2)"},
                  {"scans", audit(init_profile(InitKind::gaussian, grid))}};
  int code = kOk;
  if (!pp.admissible()) {
    rep["groundstate"] = {{"skipped", std::string("inadmissible: ") + pp.admissibility_reason()}};
    code = kInadmissible;
  } else {
    const auto res = solve_groundstate(pp, kernel, cfg.solver);
    rep["groundstate"] = {{"converged", res.converged}, {"scans", audit(res.profile)}};
    if (!res.converged) code = kNotCertified;
  }
  if (code == kOk && !ok) code = kNotCertified;
  rep["exit_code"] = code;
  std::filesystem::create_directories(cfg.out);
  write_json(cfg.out / "report.json", rep);
  write_meta(cfg.out, "scaling-audit",
             std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  os << "scaling audit: " << (ok ? "all gaps within " : "gaps exceed ") << kGapTol << " (exit "
     << code << ")\n";
  return code;
}

std::optional<int> parse_args(int argc, const char* const* argv, RunConfig& cfg,
                              std::ostream& out, std::ostream& err) {
  CLI::App app{"Radial groundstates of -Lap u + u = (I_alpha * |u|^p)|u|^{p-2}u", "choquard"};
  app.set_config("--config", "", "file of `key = value` lines; flags given on the command line win");
  app.fallthrough();
  app.require_subcommand(1, 1);

  std::string alpha_s = "2", p_s = "2", spacing_s, init_s = "gaussian";
  std::vector<std::string> p_list_s, alpha_list_s;
  double rmax = 0.0;
  std::size_t n = 0;
  app.add_option("--N", cfg.dim, "spatial dimension")->check(CLI::PositiveNumber);
  app.add_option("--alpha", alpha_s, "Riesz exponent in (0, N); fractions like 3/2 accepted");
  app.add_option("--p", p_s, "nonlinearity exponent > 1; fractions like 7/3 accepted");
  auto* rmax_opt = app.add_option("--rmax", rmax, "outer radius");
  auto* n_opt = app.add_option("--n", n, "number of grid nodes");
  auto* spacing_opt =
      app.add_option("--spacing", spacing_s, "uniform | graded")
          ->check(CLI::IsMember({"uniform", "graded"}));
  app.add_option("--tol", cfg.solver.tol_residual, "stopping tolerance");
  app.add_option("--max-iter", cfg.solver.max_iter, "iteration cap");
  app.add_option("--damping", cfg.solver.damping, "initial damping theta in (0, 1]");
  app.add_option("--init", init_s, "gaussian | exponential | file")
      ->check(CLI::IsMember({"gaussian", "exponential", "file"}));
  app.add_option("--out", cfg.out, "output directory");
  app.add_option("--jobs", cfg.jobs, "worker threads");
  app.add_option("--seed", cfg.seed, "base seed for randomized runs");
  app.add_option("--profile", cfg.profile, "profile CSV (verify, --init file)");
  app.add_option("--p-list", p_list_s, "sweep values of p")->delimiter(',');
  app.add_option("--alpha-list", alpha_list_s, "sweep values of alpha")->delimiter(',');
  app.add_option("--trials", cfg.trials, "polarization campaign trials");
  app.add_option("--cache", cfg.cache, "kernel cache directory");

  const std::vector<std::pair<const char*, const char*>> commands{
      {"solve", "compute and certify a groundstate"},
      {"verify", "certify an existing profile (--profile)"},
      {"sweep", "solve over --p-list or --alpha-list"},
      {"polarization-campaign", "randomized polarization pairing trials"},
      {"scaling-audit", "dilation identities on a probe and on the groundstate"}};
  for (const auto& [name, help] : commands) app.add_subcommand(name, help);

  std::vector<std::string> args;
  for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << "run with --help for options\n";
    return kUsage;
  }
  try {
    cfg.command = app.get_subcommands().front()->get_name();
    cfg.alpha = parse_real(alpha_s);
    cfg.p = parse_real(p_s);
    if (rmax_opt->count()) cfg.r_max = rmax;
    if (n_opt->count()) cfg.n = n;
    if (spacing_opt->count()) cfg.spacing = spacing_s == "graded" ? Spacing::graded : Spacing::uniform;
    cfg.solver.init = parse_init_kind(init_s);
    for (const auto& s : p_list_s) cfg.p_list.push_back(parse_real(s));
    for (const auto& s : alpha_list_s) cfg.alpha_list.push_back(parse_real(s));
    if (cfg.solver.init == InitKind::file && cfg.profile.empty())
      throw UsageError("--init file needs --profile <csv>");
    cfg.solver.init_file = cfg.profile;
    cfg.solver.min_damping = std::min(cfg.solver.min_damping, cfg.solver.damping);
    cfg.solver.validate();
    if (cfg.command == "sweep" && cfg.p_list.empty() && cfg.alpha_list.empty())
      throw UsageError("sweep needs a non-empty --p-list or --alpha-list");
  } catch (const Error& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  }
  return std::nullopt;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  if (auto code = parse_args(argc, argv, cfg, out, err)) return *code;
  try {
    if (cfg.command == "solve") return run_solve(cfg, out);
    if (cfg.command == "verify") return run_verify(cfg, out);
    if (cfg.command == "sweep") return run_sweep(cfg, out);
    if (cfg.command == "polarization-campaign") return run_polarization_campaign(cfg, out);
    if (cfg.command == "scaling-audit") return run_scaling_audit(cfg, out);
    err << "usage error: unknown command " << cfg.command << "\n";
    return kUsage;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const InvalidArgument& e) {
    err << "invalid argument: " << e.what() << "\n";
    return kUsage;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return kUsage;
  } catch (const NonexistenceError& e) {
    err << "no groundstate: " << e.what() << "\n";
    return kInadmissible;
  } catch (const UnreliableTail& e) {
    err << e.what() << "\n";
    return kUnreliableTail;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kNotCertified;
  }
}

}  // namespace choquard::cli
