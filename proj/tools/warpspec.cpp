#include <cstdio>
#include <iostream>
#include <set>
#include <string>

#include <CLI11.hpp>

#include "warpspec/warpspec.hpp"

namespace ws = warpspec;
using ws::json;

namespace {

struct Flags {
  std::string config;
  std::string family;
  double alpha = 0.0, r0 = 0.0, k = 0.0, r = 0.0, delta = 0.0, r_max = 0.0, t0 = 0.0, lambda = 0.0, beta = 0.0;
  int n = 0;
  std::string out_json, out_csv, ode_trace;
  std::vector<int> only;
};

struct FlagHandles {
  CLI::Option *family, *alpha, *r0, *k, *n, *r, *delta, *r_max, *t0, *lambda, *beta;
};

FlagHandles add_common(CLI::App &sub, Flags &f) {
  sub.add_option("--config", f.config, "key = value config file")->check(CLI::ExistingFile);
  FlagHandles h{};
  h.family = sub.add_option("--family", f.family, "paper-equality | euclidean | gaussian-soliton | hyperbolic")
                 ->check(CLI::IsMember({"paper-equality", "euclidean", "gaussian-soliton", "hyperbolic"}));
  h.alpha = sub.add_option("--alpha", f.alpha, "paper-equality decay rate");
  h.r0 = sub.add_option("--r0", f.r0, "paper-equality cap radius");
  h.k = sub.add_option("--k", f.k, "hyperbolic curvature scale");
  h.n = sub.add_option("--n", f.n, "dimension");
  h.r = sub.add_option("--r", f.r, "ball radius");
  h.delta = sub.add_option("--delta", f.delta, "annulus width");
  h.r_max = sub.add_option("--r-max", f.r_max, "outer radius for growth exponents");
  h.t0 = sub.add_option("--t0", f.t0, "inner radius for spectrum runs");
  h.lambda = sub.add_option("--lambda", f.lambda, "probe a single lambda");
  h.beta = sub.add_option("--beta", f.beta, "barrier exponent");
  sub.add_option("--out-json", f.out_json, "write the JSON report here");
  sub.add_option("--out-csv", f.out_csv, "write (r, value) samples here");
  sub.add_option("--emit-ode-trace", f.ode_trace, "write the (t, y) ODE trace here");
  return h;
}

ws::RunConfig resolve(const std::string &command, const Flags &f, const FlagHandles &h) {
  ws::RunConfig cfg = f.config.empty() ? ws::RunConfig{} : ws::load_config(f.config);
  cfg.command = command;
  auto &m = cfg.manifold;
  if (h.family->count()) {
    m.family = f.family;
    m.g_rows.clear();
    m.f_rows.clear();
  }
  if (h.alpha->count()) m.alpha = f.alpha;
  if (h.r0->count()) m.r0 = f.r0;
  if (h.k->count()) m.k = f.k;
  if (h.n->count()) m.n = f.n;
  if (h.r->count()) cfg.params.r = f.r;
  if (h.delta->count()) cfg.params.delta = f.delta;
  if (h.r_max->count()) cfg.params.r_max = f.r_max;
  if (h.t0->count()) cfg.params.t0 = f.t0;
  if (h.lambda->count()) cfg.params.lambda = f.lambda;
  if (h.beta->count()) cfg.params.beta = f.beta;
  if (!f.out_json.empty()) cfg.output.json = f.out_json;
  if (!f.out_csv.empty()) cfg.output.csv = f.out_csv;
  if (!f.ode_trace.empty()) cfg.output.ode_trace = f.ode_trace;
  return cfg;
}

/// Runs `body`, storing either its value or the error it raised.
template <class F> json attempt(F &&body) {
  try {
    return body();
  } catch (const ws::Error &e) {
    return json{{"error", {{"kind", std::string(ws::to_string(e.kind()))}, {"message", e.what()}}}};
  }
}

json run_volume(const ws::RunConfig &cfg) {
  const ws::ManifoldSpec spec = ws::build_manifold(cfg.manifold);
  const auto &p = cfg.params;
  const ws::VolumeReport report = ws::volume_report(spec, p.r_max, cfg.quadrature);
  const double log_vol = ws::log_ball_volume(spec, p.r, cfg.quadrature);
  json result{{"r", p.r},
              {"vol_f", ws::number(std::exp(log_vol))},
              {"log_vol_f", ws::number(log_vol)},
              {"delta", p.delta},
              {"annulus_vol_f", ws::number(std::exp(ws::log_annulus_volume(spec, p.r, p.delta, cfg.quadrature)))},
              {"report", ws::to_json(report)}};
  result["mu_delta"] = attempt([&] {
    const auto [lo, hi] = ws::mu_delta(spec, p.delta, p.r_max, cfg.quadrature);
    return json{{"lower", ws::to_json(lo)}, {"upper", ws::to_json(hi)}};
  });
  if (!cfg.output.csv.empty())
    ws::write_pairs_csv(cfg.output.csv, "r,vol_f", report.samples);
  return result;
}

json run_spectrum(const ws::RunConfig &cfg) {
  const ws::ManifoldSpec spec = ws::build_manifold(cfg.manifold);
  const double t0 = cfg.params.t0;
  const ws::SpectrumEstimate osc = ws::oscillation_threshold(spec, t0, cfg.solver);
  json result{{"t0", t0}, {"oscillation", ws::to_json(osc)}};
  result["finite_difference"] = attempt([&] { return ws::to_json(ws::lambda1_exterior_fd(spec, t0, cfg.solver)); });
  result["ess_bottom"] = attempt([&] { return ws::to_json(ws::ess_spectrum_bottom(spec, cfg.solver)); });
  if (cfg.params.beta) {
    const ws::BarrierAnalysis b = ws::barrier_analysis(spec, t0, *cfg.params.beta);
    result["barrier"] = {{"beta", *cfg.params.beta},
                         {"lower_bound", ws::number(b.value)},
                         {"argmin", b.argmin},
                         {"tail_monotone", b.tail_monotone}};
  }
  const double probe_lambda = cfg.params.lambda.value_or(osc.lambda1_upper);
  std::vector<std::pair<double, double>> trace;
  const ws::OscillationVerdict verdict =
      ws::oscillation_probe(spec, t0, probe_lambda, cfg.solver, cfg.output.ode_trace.empty() ? nullptr : &trace);
  result["probe"] = ws::to_json(verdict);
  result["probe"]["lambda"] = probe_lambda;
  if (!cfg.output.ode_trace.empty())
    ws::write_pairs_csv(cfg.output.ode_trace, "t,y", trace);
  if (!cfg.output.csv.empty()) {
    std::vector<std::pair<double, double>> ladder;
    for (const double R : cfg.solver.truncation_radii) {
      const auto &fd = result["finite_difference"];
      const std::string key = "lambda_R" + std::to_string(static_cast<long>(std::lround(R)));
      if (fd.contains("diagnostics") && fd["diagnostics"].contains(key))
        ladder.emplace_back(R, fd["diagnostics"][key].get<double>());
    }
    ws::write_pairs_csv(cfg.output.csv, "r,lambda1", ladder);
  }
  return result;
}

json run_bounds(const ws::RunConfig &cfg) {
  if (!cfg.hypersurface && !cfg.nonexistence)
    ws::fail(ws::ErrorKind::ConfigError, "bounds needs hypersurface.* or nonexistence.* keys in --config");
  json result = json::object();
  if (cfg.hypersurface) {
    const ws::HypersurfaceData &d = *cfg.hypersurface;
    result["mean_curvature"] = ws::to_json(ws::mean_curvature_bounds(d));
    result["assumptions_unchecked"] = {"finite f-stability index", "constant weighted mean curvature"};
    if (d.n == cfg.manifold.n)
      result["spectrum_cross_check"] = attempt([&] {
        return ws::to_json(ws::cross_check_with_spectrum(ws::build_manifold(cfg.manifold), d, cfg.solver));
      });
    else
      result["spectrum_cross_check"] = {{"skipped", "hypersurface.n differs from the manifold dimension"}};
  }
  if (cfg.nonexistence) {
    const ws::GrowthRegime regime = ws::regime_from_query(*cfg.nonexistence);
    result["nonexistence"] = {{"k", cfg.nonexistence->k},
                              {"regime", ws::regime_name(regime)},
                              {"exponent", ws::regime_exponent(regime)},
                              {"threshold", 2.0 * std::sqrt(cfg.nonexistence->k)},
                              {"verdict", ws::nonexistence_verdict(cfg.nonexistence->k, regime)}};
  }
  return result;
}

json run_verify(const std::vector<int> &only, bool &all_passed) {
  const ws::AcceptanceReport report = ws::run_acceptance(std::set<int>(only.begin(), only.end()));
  std::printf("%-4s %-52s %14s %4s %14s %10s  %s\n", "crit", "check", "measured", "rel", "reference", "tol", "result");
  for (const auto &row : report.rows)
    std::printf("%-4d %-52s %14.8g %4s %14.8g %10.3g  %s\n", row.criterion, row.name.c_str(), row.measured,
                row.relation.c_str(), row.expected, row.tol, row.passed ? "pass" : "FAIL");
  std::printf("\n");
  json rows = json::array();
  for (const auto &row : report.rows)
    rows.push_back({{"criterion", row.criterion},
                    {"name", row.name},
                    {"measured", ws::number(row.measured)},
                    {"expected", row.expected},
                    {"tol", row.tol},
                    {"relation", row.relation},
                    {"passed", row.passed}});
  json crit = json::array();
  for (const auto &c : report.criteria) {
    std::printf("criterion %2d %-50s %s%s%s\n", c.id, c.title.c_str(), c.passed ? "PASS" : "FAIL",
                c.error.empty() ? "" : "  error: ", c.error.c_str());
    crit.push_back({{"id", c.id},
                    {"title", c.title},
                    {"passed", c.passed},
                    {"checks", c.checks},
                    {"failures", c.failures},
                    {"error", c.error}});
  }
  all_passed = report.all_passed();
  return {{"rows", rows}, {"criteria", crit}, {"all_passed", all_passed}};
}

void emit(const json &doc, const std::string &path, bool to_stdout) {
  const std::string text = doc.dump(2) + "\n";
  if (to_stdout)
    std::cout << text;
  if (!path.empty())
    ws::write_text_file(path, text);
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Volumes, growth exponents and spectrum bottoms on rotationally symmetric weighted manifolds"};
  app.require_subcommand(1);
  Flags flags;
  std::map<std::string, FlagHandles> handles;
  for (const char *name : {"volume", "spectrum", "bounds"}) {
    CLI::App *sub = app.add_subcommand(name);
    handles[name] = add_common(*sub, flags);
  }
  CLI::App *verify = app.add_subcommand("verify", "run the acceptance suite");
  verify->add_option("--only", flags.only, "criterion ids to run");
  verify->add_option("--out-json", flags.out_json, "write the JSON table here");
  CLI11_PARSE(app, argc, argv);

  const std::string command = app.get_subcommands().front()->get_name();
  if (command == "verify") {
    bool ok = false;
    try {
      const json doc{{"command", "verify"}, {"status", "ok"}, {"result", run_verify(flags.only, ok)}};
      emit(doc, flags.out_json, false);
    } catch (const std::exception &e) {
      std::cout << ws::error_record("Internal", e.what()).dump(2) << "\n";
      return 2;
    }
    return ok ? 0 : 1;
  }

  std::string out_json = flags.out_json;
  try {
    const ws::RunConfig cfg = resolve(command, flags, handles.at(command));
    out_json = cfg.output.json;
    json result;
    if (command == "volume")
      result = run_volume(cfg);
    else if (command == "spectrum")
      result = run_spectrum(cfg);
    else
      result = run_bounds(cfg);
    emit(json{{"status", "ok"}, {"command", command}, {"config", ws::to_json(cfg)}, {"result", result}}, out_json,
         true);
    return 0;
  } catch (const ws::Error &e) {
    json rec = ws::error_record(std::string(ws::to_string(e.kind())), e.what());
    rec["command"] = command;
    try {
      emit(rec, out_json, true);
    } catch (const ws::Error &) {
      std::cout << rec.dump(2) << "\n";
    }
    return 2;
  }
}
