#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "sdrkdg/errors.hpp"
#include "sdrkdg/harness.hpp"

namespace {

using namespace sdrkdg;

constexpr int kOk = 0;
constexpr int kConfig = 2;
constexpr int kBlowUp = 3;
constexpr int kInternal = 4;

struct Flags {
  std::string config, scenario, scheme, mesh, out, limiter, policy, initial, variant, flux, meshes;
  std::optional<int> k;
  std::optional<double> cfl, alpha, t_end, M, perturb;
  std::optional<long long> seed;
};

void add_run_flags(CLI::App* app, Flags& f) {
  app->add_option("--config", f.config, "JSON run configuration");
  app->add_option("--scenario", f.scenario, "scenario name (see list-scenarios)");
  app->add_option("--scheme", f.scheme, "scheme name (see list-schemes)");
  app->add_option("--k", f.k, "polynomial degree");
  app->add_option("--cfl", f.cfl, "CFL number lambda");
  app->add_option("--mesh", f.mesh, "N, or NXxNY in 2D");
  app->add_option("--out", f.out, "output directory");
  app->add_option("--seed", f.seed, "seed of the mesh perturbation");
  app->add_option("--alpha", f.alpha, "parameter of the generic2/generic3 families");
  app->add_option("--variant", f.variant, "variant of the generic families (v1-v4, std)");
  app->add_option("--t-end", f.t_end, "final time");
  app->add_option("--limiter", f.limiter, "none, tvb_minmod or mp_scaling");
  app->add_option("--M", f.M, "TVB constant");
  app->add_option("--flux", f.flux, "numerical flux");
  app->add_option("--perturb", f.perturb, "random node perturbation as a fraction of h");
  app->add_option("--policy", f.policy, "final time policy: auto, clip, floor");
  app->add_option("--initial", f.initial, "initial data: auto, project, interpolate");
}

RunConfig build_config(const Flags& f) {
  nlohmann::json j = nlohmann::json::object();
  if (!f.config.empty()) {
    std::ifstream is(f.config);
    if (!is) throw ConfigurationError("cannot read config file " + f.config);
    try {
      is >> j;
    } catch (const nlohmann::json::exception& e) {
      throw ConfigurationError(std::string("config file: ") + e.what());
    }
  }
  if (!f.scenario.empty()) j["scenario"] = f.scenario;
  if (!f.scheme.empty()) j["scheme"] = f.scheme;
  if (f.k) j["k"] = *f.k;
  if (f.cfl) j["cfl"] = *f.cfl;
  if (!f.mesh.empty()) j["mesh"] = f.mesh;
  if (!f.out.empty()) j["out"] = f.out;
  if (f.seed) j["seed"] = *f.seed;
  if (f.alpha) j["alpha"] = *f.alpha;
  if (!f.variant.empty()) j["variant"] = f.variant;
  if (f.t_end) j["t_end"] = *f.t_end;
  if (!f.limiter.empty()) j["limiter"] = f.limiter;
  if (f.M) j["tvb_M"] = *f.M;
  if (!f.flux.empty()) j["flux"] = f.flux;
  if (f.perturb) j["perturb"] = *f.perturb;
  if (!f.policy.empty()) j["final_time_policy"] = f.policy;
  if (!f.initial.empty()) j["initial"] = f.initial;
  return run_config_from_json(j);
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw ConfigurationError("bad integer list '" + s + "'");
    }
  }
  return out;
}

std::vector<std::pair<std::string, int>> parse_scheme_list(const std::string& s) {
  std::vector<std::pair<std::string, int>> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw ConfigurationError("scheme list entries are name:k, got '" + item + "'");
    try {
      out.emplace_back(item.substr(0, colon), std::stoi(item.substr(colon + 1)));
    } catch (const std::invalid_argument&) {
      throw ConfigurationError("bad degree in '" + item + "'");
    }
  }
  return out;
}

int cmd_run(const Flags& f) {
  const RunConfig c = build_config(f);
  const RunResult r = run_scenario(c);
  std::cout << "completed t=" << r.time << " steps=" << r.steps << " cfl=" << r.cfl
            << " limiter_activations=" << r.limiter_activations << " wall=" << r.wall_seconds << "s\n";
  if (r.max_density > 0.0) std::cout << "density range [" << r.min_density << ", " << r.max_density << "]\n";
  for (const auto& file : r.files) std::cout << "wrote " << file << "\n";
  return kOk;
}

int cmd_converge(const Flags& f) {
  RunConfig c = build_config(f);
  std::vector<int> meshes = f.meshes.empty() ? c.meshes : parse_int_list(f.meshes);
  const ErrorReport rep = convergence_study(c, meshes);
  std::printf("%6s %12s %6s %12s %6s %12s %6s %12s %6s %12s\n", "N", "L1", "ord", "L2", "ord", "Linf", "ord", "eps*",
              "ord", "predicted");
  bool any_blowup = false;
  for (const ErrorRow& r : rep.rows) {
    if (r.blew_up) {
      any_blowup = true;
      std::printf("%6d blow-up detected at t=%g\n", r.n, r.blowup_time);
      continue;
    }
    std::printf("%6d %12.3e %6.2f %12.3e %6.2f %12.3e %6.2f %12.3e %6.2f %12.3e\n", r.n, r.norms.l1, r.order_l1,
                r.norms.l2, r.order_l2, r.norms.linf, r.order_linf, r.eps_star.value_or(0.0), r.order_eps,
                r.predicted.value_or(0.0));
  }
  if (!c.out.empty()) {
    const std::string path = c.out + "/errors.csv";
    write_error_report(rep, c, path);
    std::cout << "wrote " << path << "\n";
  }
  return any_blowup ? kBlowUp : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discontinuous Galerkin solver with stage-dependent polynomial spaces"};
  app.require_subcommand(1);
  Flags rf, cf;
  CLI::App* run = app.add_subcommand("run", "time-march one scenario and write CSV output");
  add_run_flags(run, rf);
  CLI::App* conv = app.add_subcommand("converge", "convergence study over a list of meshes");
  add_run_flags(conv, cf);
  conv->add_option("--meshes", cf.meshes, "comma-separated mesh sizes");

  std::string vn_schemes = "rkdg2:1,ssprk2_sd:1,rkdg3:2,heun_sd:2,ssprk3_sd:2,rkdg4:3,rk4_sd:3";
  std::string vn_out, vn_family, vn_variant = "v1";
  bool vn_pred = false, vn_numeric = false;
  double a0 = 0.5, a1 = 1.5;
  int a_count = 11, vn_k = 1;
  CLI::App* vn = app.add_subcommand("vn", "von Neumann analysis: CFL limits and predicted errors");
  vn->add_option("--schemes", vn_schemes, "comma-separated name:k pairs");
  vn->add_flag("--predictions", vn_pred, "also tabulate predicted errors for N = 20..640");
  vn->add_flag("--numeric", vn_numeric, "also run the advection scenario beside each prediction");
  vn->add_option("--out", vn_out, "output directory for CSV files");
  vn->add_option("--family", vn_family, "sweep lambda_0(alpha) of generic2 or generic3");
  vn->add_option("--variant", vn_variant, "variant of the swept family");
  vn->add_option("--alpha-min", a0);
  vn->add_option("--alpha-max", a1);
  vn->add_option("--alpha-count", a_count);
  vn->add_option("--k", vn_k, "degree of the sweep");

  int fl_k = 1, fl_d = 1;
  CLI::App* flops = app.add_subcommand("flops", "count multiply-adds of the level k-1 and level k operators");
  flops->add_option("--k", fl_k);
  flops->add_option("--d", fl_d);

  CLI::App* ls = app.add_subcommand("list-scenarios", "print the scenario catalog");
  CLI::App* lt = app.add_subcommand("list-schemes", "print the built-in schemes");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }

  try {
    if (*run) return cmd_run(rf);
    if (*conv) return cmd_converge(cf);
    if (*vn) {
      if (!vn_family.empty()) {
        std::vector<double> alphas;
        for (int i = 0; i < a_count; ++i) alphas.push_back(a_count == 1 ? a0 : a0 + (a1 - a0) * i / (a_count - 1));
        std::printf("alpha,lambda0\n");
        for (const CflSample& s : cfl_curve(vn_family, vn_variant, alphas, vn_k)) {
          if (s.singular) std::printf("%.6g,singular\n", s.alpha);
          else std::printf("%.6g,%.6f\n", s.alpha, s.lambda0);
        }
        return kOk;
      }
      const VnReport rep = vn_report(parse_scheme_list(vn_schemes), vn_pred || vn_numeric, vn_numeric);
      std::printf("%-12s %2s %8s\n", "scheme", "k", "lambda0");
      for (const CflRow& r : rep.cfl) std::printf("%-12s %2d %8.4f\n", r.scheme.c_str(), r.degree, r.lambda0);
      if (!rep.predictions.empty()) {
        std::printf("\n%-12s %2s %7s %5s %12s %12s %12s\n", "scheme", "k", "lambda", "N", "predicted", "closed", "numeric");
        for (const PredictionRow& r : rep.predictions)
          std::printf("%-12s %2d %7.3f %5d %12.3e %12.3e %12s\n", r.scheme.c_str(), r.degree, r.lambda, r.n, r.predicted,
                      r.closed_form.value_or(0.0),
                      r.blew_up ? "blow-up" : (r.numeric ? std::to_string(*r.numeric).c_str() : "-"));
      }
      if (!vn_out.empty()) write_vn_report(rep, vn_out);
      return kOk;
    }
    if (*flops) {
      const FlopReport r = flop_report(fl_k, fl_d);
      std::printf("k=%d d=%d theoretical=%.4f measured_assembly=%.4f measured_total=%.4f\n", r.degree, r.dim,
                  r.theoretical, r.measured, r.measured_total);
      if (fl_d == 1) {
        const StepFlopReport s = step_flop_ratio("midpoint_sd", "rkdg2", 1);
        std::printf("midpoint_sd/rkdg2 full step (k=1): theoretical=%.4f measured_assembly=%.4f measured_total=%.4f\n",
                    s.theoretical, s.measured, s.measured_total);
      }
      return kOk;
    }
    if (*ls) {
      for (const Scenario& s : scenario_catalog()) std::printf("%-16s %s\n", s.name.c_str(), s.description.c_str());
      return kOk;
    }
    if (*lt) {
      for (const auto& n : builtin_tableau_names()) {
        const bool family = n == "generic2" || n == "generic3";
        const ExtendedTableau t = builtin_tableau(n, family ? TableauParams{0.5, "v1"} : TableauParams{});
        std::printf("%-12s stages=%d order=%d%s\n", n.c_str(), t.stages(), t.order,
                    family ? "  (family: --alpha, --variant)" : "");
      }
      return kOk;
    }
  } catch (const BlowUpError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBlowUp;
  } catch (const ConfigurationError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kConfig;
  } catch (const LookupError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kConfig;
  } catch (const ValidationError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kOk;
}
