#include "sdrkdg/harness.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>

#include "sdrkdg/errors.hpp"
#include "sdrkdg/quadrature.hpp"
#include "sdrkdg/time_stepper.hpp"

namespace sdrkdg {

namespace fs = std::filesystem;
using nlohmann::json;

// ---------------------------------------------------------------- config

void RunConfig::validate() const {
  if (degree < 0 || degree > kMaxDegree) throw ConfigurationError("k must be in [0, 4]");
  if (cfl && !(*cfl > 0.0)) throw ConfigurationError("cfl must be > 0");
  if (nx < 0 || ny < 0) throw ConfigurationError("mesh sizes must be positive");
  for (int n : meshes)
    if (n < 1) throw ConfigurationError("mesh sizes must be positive");
  if (t_end && !(*t_end > 0.0)) throw ConfigurationError("t_end must be > 0");
  if (tvb_M && !(*tvb_M >= 0.0)) throw ConfigurationError("tvb_M must be >= 0");
  if (!(perturb >= 0.0 && perturb < 0.5)) throw ConfigurationError("perturb must be in [0, 0.5)");
  static const std::set<std::string> policies = {"auto", "clip", "floor"};
  if (!policies.count(final_time_policy)) throw ConfigurationError("final_time_policy must be auto, clip or floor");
  static const std::set<std::string> inits = {"auto", "project", "interpolate"};
  if (!inits.count(initial)) throw ConfigurationError("initial must be auto, project or interpolate");
  if (!(blowup_threshold > 0.0)) throw ConfigurationError("blowup_threshold must be > 0");
}

namespace {

template <typename T>
T get_as(const json& j, const char* key) {
  try {
    return j.get<T>();
  } catch (const json::exception& e) {
    throw ConfigurationError(std::string("config key '") + key + "': " + e.what());
  }
}

void parse_mesh(const json& j, RunConfig& c) {
  if (j.is_number_integer()) {
    c.nx = j.get<int>();
  } else if (j.is_array() && j.size() == 2) {
    c.nx = get_as<int>(j[0], "mesh");
    c.ny = get_as<int>(j[1], "mesh");
  } else if (j.is_string()) {
    const std::string s = j.get<std::string>();
    const auto x = s.find('x');
    try {
      if (x == std::string::npos) {
        c.nx = std::stoi(s);
      } else {
        c.nx = std::stoi(s.substr(0, x));
        c.ny = std::stoi(s.substr(x + 1));
      }
    } catch (const std::exception&) {
      throw ConfigurationError("config key 'mesh': expected N, [nx, ny] or \"NXxNY\"");
    }
  } else {
    throw ConfigurationError("config key 'mesh': expected N, [nx, ny] or \"NXxNY\"");
  }
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

RunConfig run_config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigurationError("config must be a JSON object");
  RunConfig c;
  for (const auto& [key, v] : j.items()) {
    if (key == "scenario") c.scenario = get_as<std::string>(v, "scenario");
    else if (key == "scheme") c.scheme = get_as<std::string>(v, "scheme");
    else if (key == "alpha") c.scheme_params.alpha = get_as<double>(v, "alpha");
    else if (key == "variant") c.scheme_params.variant = get_as<std::string>(v, "variant");
    else if (key == "tableau") c.tableau = tableau_from_json(v);
    else if (key == "k") c.degree = get_as<int>(v, "k");
    else if (key == "cfl") c.cfl = get_as<double>(v, "cfl");
    else if (key == "mesh") parse_mesh(v, c);
    else if (key == "meshes") c.meshes = get_as<std::vector<int>>(v, "meshes");
    else if (key == "t_end") c.t_end = get_as<double>(v, "t_end");
    else if (key == "flux") c.flux = get_as<std::string>(v, "flux");
    else if (key == "limiter") c.limiter = get_as<std::string>(v, "limiter");
    else if (key == "tvb_M") c.tvb_M = get_as<double>(v, "tvb_M");
    else if (key == "characteristic") c.characteristic = get_as<bool>(v, "characteristic");
    else if (key == "perturb") c.perturb = get_as<double>(v, "perturb");
    else if (key == "seed") {
      if (v.is_number_integer() && v.get<long long>() < 0) throw ConfigurationError("seed must be >= 0");
      c.seed = get_as<std::uint64_t>(v, "seed");
    }
    else if (key == "out") c.out = get_as<std::string>(v, "out");
    else if (key == "final_time_policy") c.final_time_policy = get_as<std::string>(v, "final_time_policy");
    else if (key == "initial") c.initial = get_as<std::string>(v, "initial");
    else if (key == "blowup_threshold") c.blowup_threshold = get_as<double>(v, "blowup_threshold");
    else if (key == "cache_dir") c.cache_dir = get_as<std::string>(v, "cache_dir");
    else throw ConfigurationError("unknown config key '" + key + "'");
  }
  c.validate();
  return c;
}

json to_json(const RunConfig& c) {
  json j;
  j["scenario"] = c.scenario;
  j["scheme"] = c.scheme;
  j["alpha"] = c.scheme_params.alpha;
  j["variant"] = c.scheme_params.variant;
  if (c.tableau) j["tableau"] = tableau_to_json(*c.tableau);
  j["k"] = c.degree;
  if (c.cfl) j["cfl"] = *c.cfl;
  j["mesh"] = json::array({c.nx, c.ny});
  if (!c.meshes.empty()) j["meshes"] = c.meshes;
  if (c.t_end) j["t_end"] = *c.t_end;
  if (c.flux) j["flux"] = *c.flux;
  if (c.limiter) j["limiter"] = *c.limiter;
  if (c.tvb_M) j["tvb_M"] = *c.tvb_M;
  if (c.characteristic) j["characteristic"] = *c.characteristic;
  j["perturb"] = c.perturb;
  j["seed"] = c.seed;
  j["out"] = c.out;
  j["final_time_policy"] = c.final_time_policy;
  j["initial"] = c.initial;
  j["blowup_threshold"] = c.blowup_threshold;
  j["cache_dir"] = c.cache_dir;
  return j;
}

// ---------------------------------------------------------------- setup

RunSetup resolve_run(const RunConfig& config) {
  config.validate();
  Scenario sc = make_scenario(config.scenario);
  ExtendedTableau tb = config.tableau ? *config.tableau : builtin_tableau(config.scheme, config.scheme_params);
  try {
    validate_tableau(tb, config.degree);
  } catch (const ValidationError& e) {
    throw ConfigurationError(std::string("scheme: ") + e.what());
  }

  LimiterConfig lim = sc.limiter;
  if (config.limiter) lim.kind = parse_limiter_kind(*config.limiter);
  if (config.tvb_M) lim.M = *config.tvb_M;
  if (config.characteristic) lim.characteristic = *config.characteristic;
  if (lim.kind == LimiterKind::mp_scaling && sc.system.components() != 1)
    throw ConfigurationError("mp_scaling applies to scalar equations only");
  lim.validate();

  const bool shock = lim.kind != LimiterKind::none;
  double cfl = 0.0;
  if (config.cfl) {
    cfl = *config.cfl;
  } else {
    try {
      cfl = default_cfl(config.tableau ? tb.name : config.scheme, config.degree, shock);
    } catch (const LookupError& e) {
      throw ConfigurationError(e.what());
    }
  }
  FluxKind flux = sc.flux;
  if (config.flux) flux = parse_flux_kind(*config.flux);

  std::variant<Mesh1D, Mesh2D> mesh = Mesh1D({0.0, 1.0});
  if (sc.dimension() == 1) {
    const int n = config.nx > 0 ? config.nx : sc.default_nx;
    Mesh1D m = build_uniform_mesh_1d({sc.domain.x0, sc.domain.x1}, n);
    if (config.perturb > 0.0) m = perturb_mesh_1d(m, config.perturb, config.seed);
    mesh = std::move(m);
  } else {
    if (config.perturb > 0.0) throw ConfigurationError("perturb is supported for 1D meshes only");
    int nx = config.nx > 0 ? config.nx : sc.default_nx;
    int ny = config.ny;
    if (ny <= 0) {
      ny = config.nx > 0 ? static_cast<int>(std::lround(nx * (sc.domain.y1 - sc.domain.y0) / (sc.domain.x1 - sc.domain.x0)))
                         : sc.default_ny;
    }
    mesh = build_mesh_2d(sc.domain, nx, std::max(ny, 1), sc.mask);
  }
  DGOperator op = std::visit([&](const auto& m) { return DGOperator(m, config.degree, sc.system, flux, sc.boundaries); },
                             mesh);

  const bool sample_ok = sc.sample_point_error && (config.degree == 1 || config.degree == 2);
  const bool smooth = sc.has_exact() && lim.kind == LimiterKind::none;
  const bool floor_steps =
      config.final_time_policy == "floor" || (config.final_time_policy == "auto" && smooth);
  const bool interpolate =
      config.initial == "interpolate" || (config.initial == "auto" && sample_ok);
  if (interpolate && !sample_ok) throw ConfigurationError("interpolated initial data needs the advection scenario with k = 1 or 2");

  const double t_end = config.t_end.value_or(sc.t_end);
  return RunSetup{std::move(sc), std::move(tb), std::move(mesh), std::move(op), lim, cfl, t_end, floor_steps,
                  interpolate};
}

// ---------------------------------------------------------------- march

namespace {

DGField initial_field(const RunSetup& s) {
  const int M = s.scenario.system.components();
  const int k = s.op.degree();
  if (const auto* m1 = std::get_if<Mesh1D>(&s.mesh)) {
    Function1D f = [&](double x) { return s.scenario.initial(x, 0.0); };
    if (s.interpolate_initial) return interpolate_function(f, *m1, k, M, sample_points(k).reference);
    return project_function(f, *m1, k, M);
  }
  Function2D f = [&](double x, double y) { return s.scenario.initial(x, y); };
  return project_function(f, std::get<Mesh2D>(s.mesh), k, M);
}

double measure_of(const std::variant<Mesh1D, Mesh2D>& mesh, int c) {
  return std::visit([c](const auto& m) { return m.measure(c); }, mesh);
}

void check_blowup(const DGField& u, const std::variant<Mesh1D, Mesh2D>& mesh, double threshold, double t) {
  const int stride = u.n_components() * u.n_basis();
  const double* p = u.coefficients().data();
  for (int c = 0; c < u.n_cells(); ++c) {
    const double bound = threshold * std::sqrt(measure_of(mesh, c));
    for (int i = 0; i < stride; ++i) {
      const double v = p[static_cast<std::size_t>(c) * stride + i];
      if (!std::isfinite(v) || std::abs(v) > bound) {
        std::ostringstream msg;
        msg << "blow-up detected at t=" << t;
        throw BlowUpError(msg.str(), t);
      }
    }
  }
}

std::pair<double, double> density_range(const DGField& u, const std::variant<Mesh1D, Mesh2D>& mesh) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (int c = 0; c < u.n_cells(); ++c) {
    const double mean = u(c, 0, 0) / std::sqrt(measure_of(mesh, c));
    lo = std::min(lo, mean);
    hi = std::max(hi, mean);
  }
  return {lo, hi};
}

}  // namespace

RunResult march(const RunSetup& s, const RunConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  RunResult res;
  res.cfl = s.cfl;
  DGField u = initial_field(s);

  std::optional<TVBLimiter> tvb;
  if (s.limiter.kind == LimiterKind::tvb_minmod) tvb.emplace(s.op, s.limiter);
  const bool limited = s.limiter.kind != LimiterKind::none;
  const bool staged = limited && s.tableau.shu_osher.has_value();

  double t = 0.0, dt = 0.0;
  int stage_calls = 0;
  auto limit = [&](DGField& v, double time) -> int {
    if (s.limiter.kind == LimiterKind::tvb_minmod) {
      const std::vector<char> flags = tvb->apply(v, time);
      int n = 0;
      for (char f : flags) n += f != 0;
      return n;
    }
    if (s.limiter.kind == LimiterKind::mp_scaling) {
      ScalingResult r = std::visit([&](const auto& m) { return apply_mp_scaling(v, m, s.limiter.lower, s.limiter.upper); },
                                   s.mesh);
      v = std::move(r.field);
      return r.n_limited;
    }
    return 0;
  };
  const int n_stages = s.tableau.stages();
  LimiterHook hook = [&](DGField& v) {
    ++stage_calls;
    const double time = stage_calls < n_stages ? t + s.tableau.c[stage_calls] * dt : t + dt;
    return limit(v, time);
  };
  if (limited) res.limiter_activations += limit(u, 0.0);

  long step = 0;
  while (true) {
    if (!s.floor_steps && t >= s.t_end * (1.0 - 1e-14)) break;
    const TimeStep ts = compute_dt(u, s.cfl, s.op);
    dt = ts.dt;
    if (s.floor_steps) {
      if (t + dt > s.t_end * (1.0 + 1e-9)) break;
    } else if (t + dt > s.t_end) {
      dt = s.t_end - t;
    }
    res.zero_speed = res.zero_speed || ts.zero_speed;
    try {
      if (staged) {
        stage_calls = 0;
        u = shu_osher_step(u, dt, s.tableau, s.op, hook, t, &res.limiter_activations);
      } else {
        u = butcher_step(u, dt, s.tableau, s.op, t);
        if (limited) res.limiter_activations += limit(u, t + dt);
      }
    } catch (const StateError& e) {
      std::ostringstream msg;
      msg << "blow-up detected at t=" << t << " (step " << step + 1 << "): " << e.what();
      throw BlowUpError(msg.str(), t);
    }
    ++step;
    t = (!s.floor_steps && t + dt >= s.t_end) ? s.t_end : t + dt;
    check_blowup(u, s.mesh, config.blowup_threshold, t);
  }
  res.time = t;
  res.steps = static_cast<int>(step);
  if (s.scenario.system.kind == SystemKind::euler) {
    const auto [lo, hi] = density_range(u, s.mesh);
    res.min_density = lo;
    res.max_density = hi;
  }
  res.solution = std::move(u);
  res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

// ---------------------------------------------------------------- output

namespace {

void write_metadata(std::ostream& os, const RunConfig& config, const RunSetup* setup) {
  os << "# sdrkdg output\n";
  os << "# config: " << to_json(config).dump() << "\n";
  if (setup) {
    os << "# resolved: scheme=" << setup->tableau.name << " k=" << setup->op.degree() << " cfl=" << fmt(setup->cfl)
       << " t_end=" << fmt(setup->t_end) << " flux=" << to_string(setup->op.flux())
       << " limiter=" << to_string(setup->limiter.kind) << " M=" << fmt(setup->limiter.M) << "\n";
  }
}

std::vector<std::string> component_names(const SystemSpec& sys) {
  if (sys.kind != SystemKind::euler) return {"u"};
  if (sys.dim == 1) return {"rho", "rhow", "E"};
  return {"rho", "rhow", "rhov", "E"};
}

void write_outputs(const RunSetup& s, const RunConfig& config, RunResult& res) {
  fs::create_directories(config.out);
  const DGField& u = res.solution;
  const auto names = component_names(s.scenario.system);
  const bool euler = s.scenario.system.kind == SystemKind::euler;
  const double g = s.scenario.system.gamma;
  const int D = s.scenario.dimension();

  {
    const std::string path = (fs::path(config.out) / "averages.csv").string();
    std::ofstream os(path);
    write_metadata(os, config, &s);
    os << "# time: " << fmt(res.time) << " steps: " << res.steps << "\n";
    os << "cell,x";
    if (D == 2) os << ",y";
    for (const auto& n : names) os << "," << n;
    if (euler) os << (D == 1 ? ",w,p" : ",w,v,p");
    os << "\n";
    for (int c = 0; c < u.n_cells(); ++c) {
      const double scale = 1.0 / std::sqrt(measure_of(s.mesh, c));
      Eigen::VectorXd mean(u.n_components());
      for (int m = 0; m < u.n_components(); ++m) mean[m] = u(c, m, 0) * scale;
      os << c;
      if (D == 1) {
        os << "," << fmt(std::get<Mesh1D>(s.mesh).center(c));
      } else {
        const Eigen::Vector2d xc = std::get<Mesh2D>(s.mesh).center(c);
        os << "," << fmt(xc[0]) << "," << fmt(xc[1]);
      }
      for (int m = 0; m < mean.size(); ++m) os << "," << fmt(mean[m]);
      if (euler) {
        const double rho = mean[0];
        double ke = 0.0;
        for (int d = 0; d < D; ++d) ke += 0.5 * mean[1 + d] * mean[1 + d] / rho;
        for (int d = 0; d < D; ++d) os << "," << fmt(mean[1 + d] / rho);
        os << "," << fmt((g - 1.0) * (mean[D + 1] - ke));
      }
      os << "\n";
    }
    res.files.push_back(path);
  }
  {
    const std::string path = (fs::path(config.out) / "coefficients.csv").string();
    std::ofstream os(path);
    write_metadata(os, config, &s);
    os << "cell,component,mode,value\n";
    for (int c = 0; c < u.n_cells(); ++c)
      for (int m = 0; m < u.n_components(); ++m)
        for (int l = 0; l < u.n_basis(); ++l) os << c << "," << m << "," << l << "," << fmt(u(c, m, l)) << "\n";
    res.files.push_back(path);
  }
  if (D == 2) {
    const std::string path = (fs::path(config.out) / "contour_rho.csv").string();
    std::ofstream os(path);
    write_metadata(os, config, &s);
    os << "x,y,rho\n";
    const Mesh2D& m = std::get<Mesh2D>(s.mesh);
    for (int c = 0; c < u.n_cells(); ++c) {
      const Eigen::Vector2d xc = m.center(c);
      os << fmt(xc[0]) << "," << fmt(xc[1]) << "," << fmt(u(c, 0, 0) / std::sqrt(m.measure(c))) << "\n";
    }
    res.files.push_back(path);
  }
  {
    const std::string path = (fs::path(config.out) / "summary.csv").string();
    std::ofstream os(path);
    write_metadata(os, config, &s);
    os << "key,value\n";
    os << "final_time," << fmt(res.time) << "\n";
    os << "steps," << res.steps << "\n";
    os << "cfl," << fmt(res.cfl) << "\n";
    os << "limiter_activations," << res.limiter_activations << "\n";
    os << "zero_speed," << (res.zero_speed ? 1 : 0) << "\n";
    if (euler) {
      os << "min_density," << fmt(res.min_density) << "\n";
      os << "max_density," << fmt(res.max_density) << "\n";
    }
    res.files.push_back(path);
  }
}

}  // namespace

RunResult run_scenario(const RunConfig& config) {
  const RunSetup setup = resolve_run(config);
  RunResult res = march(setup, config);
  if (!config.out.empty()) write_outputs(setup, config, res);
  return res;
}

// ---------------------------------------------------------------- errors

ErrorNorms field_errors(const DGField& u, const std::variant<Mesh1D, Mesh2D>& mesh, const ExactSolution& exact,
                        double t, int comp) {
  if (!exact) throw LookupError("field_errors: no exact solution");
  const int k = u.degree();
  const QuadratureRule q = gauss_legendre(2 * k + 2);
  ErrorNorms e;
  double l2 = 0.0;
  auto accumulate = [&](double diff, double w) {
    const double a = std::abs(diff);
    e.l1 += w * a;
    l2 += w * a * a;
    e.linf = std::max(e.linf, a);
  };
  if (const auto* m1 = std::get_if<Mesh1D>(&mesh)) {
    for (int c = 0; c < u.n_cells(); ++c)
      for (int i = 0; i < q.points.size(); ++i) {
        const double r = q.points[i];
        const double uh = evaluate_field(u, *m1, c, r)[comp];
        accumulate(uh - exact(m1->map(c, r), 0.0, t)[comp], 0.5 * m1->cell_size(c) * q.weights[i]);
      }
  } else {
    const Mesh2D& m2 = std::get<Mesh2D>(mesh);
    const double w0 = 0.25 * m2.hx() * m2.hy();
    for (int c = 0; c < u.n_cells(); ++c)
      for (int i = 0; i < q.points.size(); ++i)
        for (int j = 0; j < q.points.size(); ++j) {
          const double r = q.points[i], s = q.points[j];
          const double uh = evaluate_field(u, m2, c, r, s)[comp];
          const Eigen::Vector2d x = m2.map(c, r, s);
          accumulate(uh - exact(x[0], x[1], t)[comp], w0 * q.weights[i] * q.weights[j]);
        }
  }
  e.l2 = std::sqrt(l2);
  return e;
}

double sample_point_error(const DGField& u, const Mesh1D& mesh, const ExactSolution& exact, double t) {
  const SamplePoints sp = sample_points(u.degree());
  double err = 0.0;
  for (int c = 0; c < u.n_cells(); ++c)
    for (int p = 0; p < sp.reference.size(); ++p) {
      const double r = sp.reference[p];
      err = std::max(err, std::abs(evaluate_field(u, mesh, c, r)[0] - exact(mesh.map(c, r), 0.0, t)[0]));
    }
  return err;
}

double observed_order(double coarse, double fine) {
  if (!(coarse > 0.0) || !(fine > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  return std::log2(coarse / fine);
}

ErrorReport convergence_study(const RunConfig& config, const std::vector<int>& meshes) {
  if (meshes.size() < 2) throw ConfigurationError("convergence_study needs at least two meshes");
  ErrorReport rep;
  rep.scenario = config.scenario;
  rep.degree = config.degree;
  for (int n : meshes) {
    RunConfig c = config;
    c.nx = n;
    c.ny = 0;
    c.out.clear();
    const RunSetup setup = resolve_run(c);
    rep.scheme = setup.tableau.name;
    rep.cfl = setup.cfl;
    ErrorRow row;
    row.n = n;
    const bool sample = setup.scenario.sample_point_error && (c.degree == 1 || c.degree == 2) &&
                        setup.scenario.system.kind == SystemKind::linear_advection;
    if (sample && setup.floor_steps) {
      const ErrorPrediction p = predicted_error_numeric(setup.tableau, c.degree, setup.cfl, n, setup.t_end);
      row.predicted = p.eps_star;
    }
    try {
      const RunResult r = march(setup, c);
      row.steps = r.steps;
      row.final_time = r.time;
      if (setup.scenario.has_exact()) row.norms = field_errors(r.solution, setup.mesh, setup.scenario.exact, r.time);
      if (sample) row.eps_star = sample_point_error(r.solution, std::get<Mesh1D>(setup.mesh), setup.scenario.exact, r.time);
      if (setup.scenario.reference) {
        const Eigen::MatrixXd ref = reference_solution(c, n);
        row.relative_l1_reference = relative_l1_density(r.solution, std::get<Mesh1D>(setup.mesh), ref);
      }
    } catch (const BlowUpError& e) {
      row.blew_up = true;
      row.blowup_time = e.time();
    }
    rep.rows.push_back(row);
  }
  for (std::size_t i = 1; i < rep.rows.size(); ++i) {
    ErrorRow& f = rep.rows[i];
    const ErrorRow& g = rep.rows[i - 1];
    if (f.blew_up || g.blew_up) continue;
    const double refine = std::log2(static_cast<double>(f.n) / g.n);
    f.order_l1 = observed_order(g.norms.l1, f.norms.l1) / refine;
    f.order_l2 = observed_order(g.norms.l2, f.norms.l2) / refine;
    f.order_linf = observed_order(g.norms.linf, f.norms.linf) / refine;
    if (f.eps_star && g.eps_star) f.order_eps = observed_order(*g.eps_star, *f.eps_star) / refine;
  }
  return rep;
}

void write_error_report(const ErrorReport& rep, const RunConfig& config, const std::string& path) {
  if (fs::path(path).has_parent_path()) fs::create_directories(fs::path(path).parent_path());
  std::ofstream os(path);
  write_metadata(os, config, nullptr);
  os << "# scenario=" << rep.scenario << " scheme=" << rep.scheme << " k=" << rep.degree << " cfl=" << fmt(rep.cfl)
     << "\n";
  os << "N,L1,order_L1,L2,order_L2,Linf,order_Linf,eps_star,order_eps,predicted,rel_L1_reference,blew_up,steps,"
        "final_time\n";
  auto opt = [](const std::optional<double>& v) { return v ? fmt(*v) : std::string(); };
  for (const ErrorRow& r : rep.rows) {
    os << r.n << ",";
    if (r.blew_up) {
      os << ",,,,,,,,," << opt(r.predicted) << ",,1,," << fmt(r.blowup_time) << "\n";
      continue;
    }
    os << fmt(r.norms.l1) << "," << fmt(r.order_l1) << "," << fmt(r.norms.l2) << "," << fmt(r.order_l2) << ","
       << fmt(r.norms.linf) << "," << fmt(r.order_linf) << "," << opt(r.eps_star) << "," << fmt(r.order_eps) << ","
       << opt(r.predicted) << "," << opt(r.relative_l1_reference) << ",0," << r.steps << "," << fmt(r.final_time)
       << "\n";
  }
}

// ---------------------------------------------------------------- reference runs

namespace {

class FileLock {
 public:
  explicit FileLock(const std::string& path) : fd_(::open(path.c_str(), O_CREAT | O_RDWR, 0644)) {
    if (fd_ < 0) throw Error("cannot open lock file " + path);
    ::flock(fd_, LOCK_EX);
  }
  ~FileLock() {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
  FileLock(const FileLock&) = delete;
  FileLock& operator=(const FileLock&) = delete;

 private:
  int fd_;
};

std::optional<Eigen::MatrixXd> load_reference(const std::string& path, const std::string& fingerprint) {
  std::ifstream is(path);
  if (!is) return std::nullopt;
  std::string line;
  if (!std::getline(is, line) || line != "# fingerprint: " + fingerprint) return std::nullopt;
  std::vector<std::array<double, 4>> rows;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#' || line[0] == 'x') continue;
    std::array<double, 4> r{};
    std::istringstream ls(line);
    char comma;
    ls >> r[0] >> comma >> r[1] >> comma >> r[2] >> comma >> r[3];
    if (!ls) return std::nullopt;
    rows.push_back(r);
  }
  Eigen::MatrixXd m(rows.size(), 4);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (int j = 0; j < 4; ++j) m(i, j) = rows[i][j];
  return m;
}

}  // namespace

Eigen::MatrixXd reference_solution(const RunConfig& config, int n_cells) {
  const Scenario sc = make_scenario(config.scenario);
  if (!sc.reference) throw LookupError("scenario '" + sc.name + "' has no reference-run specification");
  if (sc.dimension() != 1 || sc.system.kind != SystemKind::euler)
    throw LookupError("reference runs are defined for 1D Euler scenarios");
  const ReferenceRunSpec& spec = *sc.reference;
  RunConfig rc;
  rc.scenario = config.scenario;
  rc.scheme = spec.scheme;
  rc.degree = spec.degree;
  rc.cfl = spec.cfl;
  rc.nx = spec.refinement * n_cells;
  rc.t_end = config.t_end;
  rc.tvb_M = config.tvb_M;
  rc.characteristic = config.characteristic;
  rc.final_time_policy = "clip";
  rc.initial = "project";
  const double t_end = config.t_end.value_or(sc.t_end);

  std::ostringstream fp;
  fp << sc.name << ";" << spec.scheme << ";k=" << spec.degree << ";cfl=" << fmt(spec.cfl) << ";N=" << rc.nx
     << ";t=" << fmt(t_end) << ";M=" << fmt(config.tvb_M.value_or(sc.limiter.M))
     << ";char=" << config.characteristic.value_or(sc.limiter.characteristic);
  const std::string fingerprint = fp.str();

  fs::create_directories(config.cache_dir);
  const std::string stem = sc.name + "_N" + std::to_string(rc.nx) + "_k" + std::to_string(spec.degree);
  const std::string path = (fs::path(config.cache_dir) / (stem + ".csv")).string();
  const FileLock lock((fs::path(config.cache_dir) / (stem + ".lock")).string());
  if (auto cached = load_reference(path, fingerprint)) return *cached;

  const RunSetup setup = resolve_run(rc);
  const RunResult r = march(setup, rc);
  const Mesh1D& m = std::get<Mesh1D>(setup.mesh);
  const double g = setup.scenario.system.gamma;
  Eigen::MatrixXd out(m.n_cells(), 4);
  for (int c = 0; c < m.n_cells(); ++c) {
    const double s = 1.0 / std::sqrt(m.measure(c));
    const double rho = r.solution(c, 0, 0) * s, mom = r.solution(c, 1, 0) * s, E = r.solution(c, 2, 0) * s;
    out.row(c) << m.center(c), rho, mom / rho, (g - 1.0) * (E - 0.5 * mom * mom / rho);
  }
  const std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp);
    os << "# fingerprint: " << fingerprint << "\n";
    os << "x,rho,w,p\n";
    for (int c = 0; c < out.rows(); ++c)
      os << fmt(out(c, 0)) << "," << fmt(out(c, 1)) << "," << fmt(out(c, 2)) << "," << fmt(out(c, 3)) << "\n";
  }
  fs::rename(tmp, path);
  return out;
}

double relative_l1_density(const DGField& u, const Mesh1D& mesh, const Eigen::MatrixXd& reference) {
  const int n = mesh.n_cells();
  if (reference.rows() % n != 0) throw InvalidArgument("relative_l1_density: reference is not a refinement of the mesh");
  const int r = static_cast<int>(reference.rows()) / n;
  double num = 0.0, den = 0.0;
  for (int c = 0; c < n; ++c) {
    const double rho = u(c, 0, 0) / std::sqrt(mesh.measure(c));
    const double ref = reference.block(static_cast<Eigen::Index>(c) * r, 1, r, 1).mean();
    num += mesh.cell_size(c) * std::abs(rho - ref);
    den += mesh.cell_size(c) * std::abs(ref);
  }
  return num / den;
}

// ---------------------------------------------------------------- von Neumann report

VnReport vn_report(const std::vector<std::pair<std::string, int>>& schemes, bool with_predictions, bool with_numeric,
                   const std::vector<int>& meshes) {
  VnReport rep;
  for (const auto& [name, k] : schemes) {
    const ExtendedTableau tb = builtin_tableau(name);
    const CflResult cr = max_cfl(tb, k);
    rep.cfl.push_back({name, k, cr.lambda0});
    if (!with_predictions || (k != 1 && k != 2)) continue;
    std::vector<double> lambdas = {0.001};
    try {
      lambdas.push_back(default_cfl(name, k, false));
    } catch (const LookupError&) {
    }
    const double lmax = std::floor(cr.lambda0 * 1000.0) / 1000.0;
    if (std::abs(lmax - lambdas.back()) > 1e-9) lambdas.push_back(lmax);
    for (double lam : lambdas)
      for (int n : meshes) {
        PredictionRow row;
        row.scheme = name;
        row.degree = k;
        row.lambda = lam;
        row.n = n;
        row.predicted = predicted_error_numeric(tb, k, lam, n, 1.0).eps_star;
        const std::string id = name == "ssprk2_sd" ? "generic2_v1" : name;
        try {
          row.closed_form = predicted_error_closed_form(id, lam, 1.0, 2.0 * std::numbers::pi / n);
        } catch (const Error&) {
        }
        if (with_numeric) {
          RunConfig c;
          c.scenario = "advection";
          c.scheme = name;
          c.degree = k;
          c.cfl = lam;
          c.nx = n;
          try {
            const RunSetup setup = resolve_run(c);
            const RunResult r = march(setup, c);
            row.numeric = sample_point_error(r.solution, std::get<Mesh1D>(setup.mesh), setup.scenario.exact, r.time);
          } catch (const BlowUpError&) {
            row.blew_up = true;
          }
        }
        rep.predictions.push_back(row);
      }
  }
  return rep;
}

void write_vn_report(const VnReport& rep, const std::string& directory) {
  fs::create_directories(directory);
  {
    std::ofstream os(fs::path(directory) / "cfl.csv");
    os << "# maximum stable CFL number, xi grid 1024, tol 1e-4\n";
    os << "scheme,k,lambda0\n";
    for (const CflRow& r : rep.cfl) os << r.scheme << "," << r.degree << "," << fmt(r.lambda0) << "\n";
  }
  if (!rep.predictions.empty()) {
    std::ofstream os(fs::path(directory) / "predictions.csv");
    os << "# sample-point errors of the advection scenario at t_n = floor(1/dt) dt\n";
    os << "scheme,k,lambda,N,predicted,closed_form,numeric,blew_up\n";
    for (const PredictionRow& r : rep.predictions)
      os << r.scheme << "," << r.degree << "," << fmt(r.lambda) << "," << r.n << "," << fmt(r.predicted) << ","
         << (r.closed_form ? fmt(*r.closed_form) : "") << "," << (r.numeric ? fmt(*r.numeric) : "") << ","
         << (r.blew_up ? 1 : 0) << "\n";
  }
}

// ---------------------------------------------------------------- FLOP counts

namespace {

DGOperator flop_operator(int degree, int dim) {
  SystemSpec sys;
  sys.kind = SystemKind::euler;
  sys.dim = dim;
  const BoundarySet bc = BoundarySet::all(BoundaryCondition::periodic());
  if (dim == 1) return DGOperator(build_uniform_mesh_1d({0.0, 1.0}, 32), degree, sys, FluxKind::lax_friedrichs_local, bc);
  return DGOperator(build_mesh_2d({0.0, 1.0, 0.0, 1.0}, 8, 8), degree, sys, FluxKind::lax_friedrichs_local, bc);
}

DGField flop_state(const DGOperator& op) {
  const int dim = op.dim();
  if (dim == 1) {
    Function1D f = [](double x) {
      Eigen::VectorXd s(3);
      const double rho = 1.0 + 0.2 * std::sin(2.0 * std::numbers::pi * x);
      s << rho, rho, 1.0 / 0.4 + 0.5 * rho;
      return s;
    };
    return project_function(f, std::get<Mesh1D>(op.mesh()), op.degree(), 3);
  }
  Function2D f = [](double x, double y) {
    Eigen::VectorXd s(4);
    const double rho = 1.0 + 0.2 * std::sin(2.0 * std::numbers::pi * (x + y));
    s << rho, 0.7 * rho, 0.3 * rho, 1.0 / 0.4 + 0.5 * rho * 0.58;
    return s;
  };
  return project_function(f, std::get<Mesh2D>(op.mesh()), op.degree(), 4);
}

}  // namespace

FlopReport flop_report(int degree, int dim) {
  if (degree < 1) throw InvalidArgument("flop_report: k must be >= 1");
  if (dim != 1 && dim != 2) throw InvalidArgument("flop_report: d must be 1 or 2");
  const DGOperator op = flop_operator(degree, dim);
  const DGField u = flop_state(op);
  FlopCounter high, low;
  DGField out = op.make_field();
  op.set_counter(&high);
  op.apply(u, degree, 0.0, out);
  op.set_counter(&low);
  op.apply(u, degree - 1, 0.0, out);
  op.set_counter(nullptr);
  FlopReport rep;
  rep.degree = degree;
  rep.dim = dim;
  rep.theoretical = static_cast<double>(basis_size(degree - 1, dim)) / basis_size(degree, dim);
  rep.high_assembly = high.assembly;
  rep.low_assembly = low.assembly;
  rep.measured = static_cast<double>(low.assembly) / static_cast<double>(high.assembly);
  rep.measured_total = static_cast<double>(low.total()) / static_cast<double>(high.total());
  return rep;
}

StepFlopReport step_flop_ratio(const std::string& scheme, const std::string& reference_scheme, int degree) {
  const DGOperator op = flop_operator(degree, 1);
  const DGField u = flop_state(op);
  const ExtendedTableau a = builtin_tableau(scheme), b = builtin_tableau(reference_scheme);
  validate_tableau(a, degree);
  validate_tableau(b, degree);
  FlopCounter ca, cb;
  const double dt = 1e-4;
  op.set_counter(&ca);
  (void)butcher_step(u, dt, a, op, 0.0);
  op.set_counter(&cb);
  (void)butcher_step(u, dt, b, op, 0.0);
  op.set_counter(nullptr);
  auto theoretical = [degree](const ExtendedTableau& t) {
    // one operator per stage state at the highest level it is needed at
    const double ratio = static_cast<double>(basis_size(degree - 1, 1)) / basis_size(degree, 1);
    double w = 0.0;
    for (int j = 0; j < t.stages(); ++j) {
      bool low = false, high = false;
      auto mark = [&](StageLevel l) {
        low = low || l == StageLevel::low;
        high = high || l == StageLevel::high;
      };
      mark(t.e[j]);
      for (int i = j + 1; i < t.stages(); ++i) mark(t.D[i][j]);
      w += high ? 1.0 : (low ? ratio : 0.0);
    }
    return w;
  };
  StepFlopReport rep;
  rep.scheme = a.name;
  rep.reference_scheme = b.name;
  rep.theoretical = theoretical(a) / theoretical(b);
  rep.measured = static_cast<double>(ca.assembly) / static_cast<double>(cb.assembly);
  rep.measured_total = static_cast<double>(ca.total()) / static_cast<double>(cb.total());
  return rep;
}

}  // namespace sdrkdg
