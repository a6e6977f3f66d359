// Command-line front end: divisors, normalform, freqmap, simulate, analyze, verify-all.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "acceptance_suite.hpp"
#include "gbbm/divisor_analysis.hpp"
#include "gbbm/dynamics.hpp"
#include "gbbm/errors.hpp"
#include "gbbm/json_io.hpp"
#include "gbbm/kam_check.hpp"
#include "gbbm/normal_form.hpp"
#include "gbbm/parallel.hpp"

using namespace gbbm;
using nlohmann::json;

namespace {

struct Common {
  std::string config_path;
  std::string output;
};

int code(ExitCode c) { return static_cast<int>(c); }

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(fmt::format("{} is not valid JSON: {}", path, e.what()));
  }
}

template <class T>
void put(json& cfg, const char* key, const std::optional<T>& v) {
  if (v) cfg[key] = *v;
}

void check_schema(const json& doc, const std::string& name) {
  const auto errs = json_io::validate(doc, json_io::schema(name));
  if (errs.empty()) return;
  std::string msg = name + " schema violation:";
  for (const auto& e : errs) msg += "\n  " + e;
  throw ConfigError(msg);
}

void emit(const json& report, const std::string& schema_name, const std::string& output) {
  const auto errs = json_io::validate(report, json_io::schema(schema_name));
  if (!errs.empty()) throw VerificationFailure("emitted report fails " + schema_name + ": " + errs.front());
  const std::string text = json_io::dump(report);
  if (output.empty() || output == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(output);
  if (!out) throw ConfigError("cannot write " + output);
  out << text;
}

template <class T>
T get_or(const json& cfg, const char* key, T fallback) {
  return cfg.contains(key) ? cfg[key].get<T>() : fallback;
}

// ---------------------------------------------------------------------------

int run_divisors(const json& cfg, int threads, const std::string& output) {
  const int order = cfg["order"];
  const index_sets::TangentialSet s(cfg["n1"].get<long>(), cfg["n2"].get<long>());
  std::vector<index_sets::Label> labels;
  if (cfg.contains("labels"))
    for (const auto& l : cfg["labels"]) labels.push_back(index_sets::label_from_name(l.get<std::string>()));
  else
    labels = divisor_analysis::admissible_labels(order);
  divisor_analysis::SurveyOptions o;
  o.threads = threads;
  o.ceiling = get_or(cfg, "ceiling", 1e9);
  o.non_s_bound = get_or(cfg, "non_s_bound", 0L);
  o.exclude_normal = !get_or(cfg, "include_normal", false);
  const auto r = divisor_analysis::survey_min_divisor(order, labels, s, cfg["jmax"].get<long>(), o);
  emit(divisor_analysis::to_json(r), "divisors.report", output);
  return code(r.clean() || !o.exclude_normal ? ExitCode::kOk : ExitCode::kVerificationFailure);
}

normal_form::NormalFormResult normal_form_for(const json& cfg, int threads, bool residual) {
  const long n1 = cfg["n1"], n2 = cfg["n2"];
  long jmax = get_or(cfg, "jmax", 0L);
  if (jmax == 0) jmax = 5 * n2;
  normal_form::NormalFormOptions o;
  o.threads = threads;
  o.compute_T = get_or(cfg, "compute_T", true);
  o.check_residual = get_or(cfg, "check_residual", residual);
  o.ceiling = get_or(cfg, "ceiling", 1e9);
  return normal_form::compute_normal_form(n1, n2, jmax, o);
}

int run_normalform(const json& cfg, int threads, const std::string& output) {
  const auto nf = normal_form_for(cfg, threads, true);
  emit(normal_form::to_json(nf), "normalform.report", output);
  const bool ok = nf.reality_ok && nf.momentum_ok && (!get_or(cfg, "check_residual", true) || nf.residual_zero);
  return code(ok ? ExitCode::kOk : ExitCode::kVerificationFailure);
}

int run_freqmap(const json& cfg, int threads, const std::string& output) {
  const auto nf = normal_form_for(cfg, threads, false);
  const auto m = kam_check::derive_frequency_model(nf);
  const double eps = cfg["eps"];
  const double lo = std::sqrt(eps), hi = 4 * lo;
  const int t = get_or(cfg, "table", 5);
  std::vector<long> modes = get_or(cfg, "modes", std::vector<long>{1, 2, 3, 10, 100, 1000});
  json table = json::array(), omega = json::array();
  for (int a = 0; a < t; ++a)
    for (int b = 0; b < t; ++b) {
      const double x1 = lo + (hi - lo) * a / (t - 1), x2 = lo + (hi - lo) * b / (t - 1);
      const auto w = kam_check::omega0(m, x1, x2);
      const auto d = kam_check::jacobian(m, x1, x2);
      table.push_back({{"xi", {x1, x2}},
                       {"omega0", {w[0], w[1]}},
                       {"jacobian", {{d[0][0], d[0][1]}, {d[1][0], d[1][1]}}},
                       {"det", kam_check::jacobian_det(m, x1, x2)},
                       {"det_leading", kam_check::leading_det_closed_form(m.n1, m.n2, x1, x2)}});
      for (long j : modes)
        if (j != m.n1 && j != m.n2) omega.push_back({{"j", j}, {"xi", {x1, x2}}, {"value", kam_check::Omega(m, j, x1, x2)}});
    }
  kam_check::AssumptionOptions ao;
  ao.grid = get_or(cfg, "grid", 64);
  ao.random_samples = get_or(cfg, "samples", 1000);
  ao.seed = get_or(cfg, "seed", 7u);
  ao.run_c = get_or(cfg, "scaling", true);
  ao.scaling.threads = threads;
  ao.scaling.jmax = nf.jmax;
  const auto r = kam_check::verify_assumptions(m, eps, get_or(cfg, "omega_jmax", 10000L), nf.reality_ok, ao);
  json report = {{"model", kam_check::to_json(m)}, {"table", table}, {"Omega", omega}, {"assumptions", kam_check::to_json(r)}};
  emit(report, "freqmap.report", output);
  return code(r.pass() ? ExitCode::kOk : ExitCode::kVerificationFailure);
}

int run_simulate(const json& cfg) {
  dynamics::SimConfig c;
  c.n1 = cfg["n1"];
  c.n2 = cfg["n2"];
  c.xi1 = cfg["xi"][0];
  c.xi2 = cfg["xi"][1];
  if (cfg.contains("phases")) {
    c.phase1 = cfg["phases"][0];
    c.phase2 = cfg["phases"][1];
  }
  c.jmax = get_or(cfg, "jmax", c.jmax);
  c.grid = get_or(cfg, "grid", c.grid);
  c.dt = get_or(cfg, "dt", c.dt);
  c.horizon = get_or(cfg, "horizon", c.horizon);
  c.stride = get_or(cfg, "stride", c.stride);
  c.nonlinear = get_or(cfg, "nonlinear", c.nonlinear);
  c.drift_tolerance = get_or(cfg, "drift_tolerance", c.drift_tolerance);
  if (cfg.contains("integrator")) c.integrator = dynamics::integrator_from_name(cfg["integrator"]);
  c.validate();
  const std::string path = cfg["output"];
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  dynamics::write_csv(dynamics::integrate(c), out);
  return code(ExitCode::kOk);
}

int run_analyze(const json& cfg, int threads, const std::string& output) {
  const std::string path = cfg["input"];
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  const auto tr = dynamics::read_csv(in);
  json nfc = {{"n1", tr.n1}, {"n2", tr.n2}, {"compute_T", true}};
  if (cfg.contains("jmax")) nfc["jmax"] = cfg["jmax"];
  const auto m = kam_check::derive_frequency_model(normal_form_for(nfc, threads, false));
  const int count = get_or(cfg, "tones", 3);
  auto tones = [&](const std::vector<dynamics::Complex>& s) {
    json arr = json::array();
    for (const auto& t : dynamics::extract_frequencies(s, tr.sample_dt, count))
      arr.push_back({{"frequency", t.frequency}, {"amplitude", std::abs(t.amplitude)}});
    return arr;
  };
  json report = {{"comparison", dynamics::to_json(dynamics::compare(tr, m))},
                 {"tones", {{"z_n1", tones(tr.z1)}, {"z_n2", tones(tr.z2)}}},
                 {"samples", tr.times.size()}};
  emit(report, "analyze.report", output);
  return code(ExitCode::kOk);
}

int run_verify_all(const json& cfg, int threads, const std::string& output) {
  acceptance::SuiteOptions o;
  o.threads = threads;
  o.only = get_or(cfg, "only", std::vector<int>{});
  const auto outcomes = acceptance::run_suite(o, [](const acceptance::Outcome& x) {
    std::fprintf(stderr, "%s\n", acceptance::format_line(x).c_str());
  });
  const json report = acceptance::to_json(outcomes);
  emit(report, "verify-all.report", output);
  return code(report["pass"].get<bool>() ? ExitCode::kOk : ExitCode::kVerificationFailure);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Small divisors, Birkhoff normal forms, KAM assumption checks and simulations for gBBM tori"};
  app.footer(
      "Exit codes: 0 ok, 2 configuration or schema error, 3 resource ceiling exceeded,\n"
      "            4 verification failure, 5 numerical non-convergence.\n"
      "Threads: --threads, else GBBM_KAM_THREADS, else all hardware threads.");
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "worker threads (0: GBBM_KAM_THREADS or hardware)")->check(CLI::NonNegativeNumber);

  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config_path, "JSON config; flags override its keys");
    sub->add_option("-o,--output", common.output, "report path (default stdout)");
  };

  // divisors
  auto* div = app.add_subcommand("divisors", "exact small-divisor survey");
  add_common(div);
  std::optional<int> d_order;
  std::optional<long> d_n1, d_n2, d_jmax, d_bound;
  std::optional<double> d_ceiling;
  std::vector<std::string> d_labels;
  bool d_normal = false;
  div->add_option("--order", d_order, "6, 10 or 14");
  div->add_option("--n1", d_n1);
  div->add_option("--n2", d_n2);
  div->add_option("--jmax", d_jmax);
  div->add_option("--labels", d_labels, "label names (default: the admissible sets)");
  div->add_option("--non-s-bound", d_bound, "bound on non-S entries (default jmax)");
  div->add_option("--ceiling", d_ceiling, "candidate-count ceiling");
  div->add_flag("--include-normal", d_normal, "diagnostic: do not drop normal tuples");

  // normalform
  auto* nfc = app.add_subcommand("normalform", "normal-form coefficients at orders 6, 10, 14");
  add_common(nfc);
  std::optional<long> n_n1, n_n2, n_jmax;
  bool n_no_T = false, n_no_res = false;
  nfc->add_option("--n1", n_n1);
  nfc->add_option("--n2", n_n2);
  nfc->add_option("--jmax", n_jmax, "mode bound (default 5 n2)");
  nfc->add_flag("--no-T", n_no_T, "skip the order-14 coefficients");
  nfc->add_flag("--no-residual", n_no_res, "skip the homological identity check");

  // freqmap
  auto* fm = app.add_subcommand("freqmap", "frequency map tables and assumption report");
  add_common(fm);
  std::optional<long> f_n1, f_n2, f_jmax, f_ojmax;
  std::optional<double> f_eps;
  std::optional<int> f_grid, f_samples, f_table;
  bool f_no_scaling = false;
  fm->add_option("--n1", f_n1);
  fm->add_option("--n2", f_n2);
  fm->add_option("--eps", f_eps);
  fm->add_option("--jmax", f_jmax, "normal-form mode bound (default 5 n2)");
  fm->add_option("--omega-jmax", f_ojmax, "normal modes checked for Assumption B (default 1e4)");
  fm->add_option("--grid", f_grid, "grid points per axis on O* (default 64)");
  fm->add_option("--samples", f_samples, "random points on O* (default 1000)");
  fm->add_option("--table", f_table, "table points per axis (default 5)");
  fm->add_flag("--no-scaling", f_no_scaling, "skip the remainder scaling check");

  // simulate
  auto* sim = app.add_subcommand("simulate", "integrate from torus data and write a trajectory CSV");
  add_common(sim);
  std::optional<long> s_n1, s_n2;
  std::optional<int> s_jmax, s_stride;
  std::vector<double> s_xi, s_phases;
  std::optional<double> s_dt, s_T, s_tol;
  std::optional<std::size_t> s_grid;
  std::optional<std::string> s_integrator;
  bool s_linear = false;
  sim->add_option("--n1", s_n1);
  sim->add_option("--n2", s_n2);
  sim->add_option("--xi", s_xi)->expected(2);
  sim->add_option("--phases", s_phases)->expected(2);
  sim->add_option("--jmax", s_jmax);
  sim->add_option("--grid", s_grid);
  sim->add_option("--dt", s_dt);
  sim->add_option("--horizon", s_T);
  sim->add_option("--stride", s_stride);
  sim->add_option("--integrator", s_integrator, "splitting or implicit-midpoint");
  sim->add_option("--drift-tolerance", s_tol);
  sim->add_flag("--linear", s_linear, "drop the nonlinearity");

  // analyze
  auto* an = app.add_subcommand("analyze", "frequencies of a trajectory CSV against the normal form");
  add_common(an);
  std::optional<std::string> a_input;
  std::optional<long> a_jmax;
  std::optional<int> a_tones;
  an->add_option("input", a_input, "trajectory CSV");
  an->add_option("--jmax", a_jmax, "normal-form mode bound (default 5 n2)");
  an->add_option("--tones", a_tones, "tones listed per mode (default 3)");

  // verify-all
  auto* va = app.add_subcommand("verify-all", "run every acceptance criterion");
  add_common(va);
  std::vector<int> v_only;
  va->add_option("--only", v_only, "criterion ids to run");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : code(ExitCode::kConfig);
  }

  try {
    const int nthreads = resolve_threads(threads);
    json cfg = load_config(common.config_path);
    if (!cfg.is_object()) throw ConfigError("config must be a JSON object");
    std::string name;
    if (div->parsed()) {
      name = "divisors";
      put(cfg, "order", d_order);
      put(cfg, "n1", d_n1);
      put(cfg, "n2", d_n2);
      put(cfg, "jmax", d_jmax);
      put(cfg, "non_s_bound", d_bound);
      put(cfg, "ceiling", d_ceiling);
      if (!d_labels.empty()) cfg["labels"] = d_labels;
      if (d_normal) cfg["include_normal"] = true;
    } else if (nfc->parsed()) {
      name = "normalform";
      put(cfg, "n1", n_n1);
      put(cfg, "n2", n_n2);
      put(cfg, "jmax", n_jmax);
      if (n_no_T) cfg["compute_T"] = false;
      if (n_no_res) cfg["check_residual"] = false;
    } else if (fm->parsed()) {
      name = "freqmap";
      put(cfg, "n1", f_n1);
      put(cfg, "n2", f_n2);
      put(cfg, "eps", f_eps);
      put(cfg, "jmax", f_jmax);
      put(cfg, "omega_jmax", f_ojmax);
      put(cfg, "grid", f_grid);
      put(cfg, "samples", f_samples);
      put(cfg, "table", f_table);
      if (f_no_scaling) cfg["scaling"] = false;
    } else if (sim->parsed()) {
      name = "simulate";
      put(cfg, "n1", s_n1);
      put(cfg, "n2", s_n2);
      if (!s_xi.empty()) cfg["xi"] = s_xi;
      if (!s_phases.empty()) cfg["phases"] = s_phases;
      put(cfg, "jmax", s_jmax);
      put(cfg, "grid", s_grid);
      put(cfg, "dt", s_dt);
      put(cfg, "horizon", s_T);
      put(cfg, "stride", s_stride);
      put(cfg, "integrator", s_integrator);
      put(cfg, "drift_tolerance", s_tol);
      if (s_linear) cfg["nonlinear"] = false;
      if (!common.output.empty()) cfg["output"] = common.output;
    } else if (an->parsed()) {
      name = "analyze";
      put(cfg, "input", a_input);
      put(cfg, "jmax", a_jmax);
      put(cfg, "tones", a_tones);
    } else {
      name = "verify-all";
      if (!v_only.empty()) cfg["only"] = v_only;
    }
    check_schema(cfg, name + ".config");
    if (name == "divisors") return run_divisors(cfg, nthreads, common.output);
    if (name == "normalform") return run_normalform(cfg, nthreads, common.output);
    if (name == "freqmap") return run_freqmap(cfg, nthreads, common.output);
    if (name == "simulate") return run_simulate(cfg);
    if (name == "analyze") return run_analyze(cfg, nthreads, common.output);
    return run_verify_all(cfg, nthreads, common.output);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return code(ExitCode::kConfig);
  } catch (const ResourceLimitError& e) {
    std::cerr << "resource ceiling: " << e.what() << "\n";
    return code(ExitCode::kResourceCeiling);
  } catch (const VerificationFailure& e) {
    std::cerr << "verification failure: " << e.what() << "\n";
    return code(ExitCode::kVerificationFailure);
  } catch (const ConvergenceError& e) {
    std::cerr << "non-convergence: " << e.what() << "\n";
    return code(ExitCode::kNonConvergence);
  } catch (const json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return code(ExitCode::kConfig);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
