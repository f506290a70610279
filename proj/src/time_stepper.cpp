#include "sdrkdg/time_stepper.hpp"

#include <string>
#include <vector>

#include "sdrkdg/errors.hpp"

namespace sdrkdg {

namespace {

/// Divergences of one stage state at the levels requested of it.
struct StageDivergence {
  DGField low, high;
  bool has_low = false, has_high = false;

  const DGField& at(StageLevel level) const { return level == StageLevel::low ? low : high; }
};

void evaluate(StageDivergence& out, const DGField& state, bool need_low, bool need_high, const DGOperator& op,
              double time, int stage) {
  const int k = state.degree();
  try {
    if (need_high) {
      op.apply(state, k, time, out.high);
      out.has_high = true;
    }
    if (need_low) {
      if (need_high) {
        out.low = project_down(out.high);
      } else {
        op.apply(state, k - 1, time, out.low);
      }
      out.has_low = true;
    }
  } catch (const StateError& e) {
    throw StateError(std::string(e.what()) + " [stage " + std::to_string(stage + 1) + "]");
  }
}

}  // namespace

DGField butcher_step(const DGField& u, double dt, const ExtendedTableau& tb, const DGOperator& op, double t) {
  if (!(dt >= 0.0)) throw InvalidArgument("butcher_step: dt must be >= 0");
  const int s = tb.stages();
  if (dt == 0.0) return u;
  std::vector<StageDivergence> div(s);
  std::vector<bool> need_low(s, false), need_high(s, false);
  for (int j = 0; j < s; ++j) {
    auto mark = [&](StageLevel l) {
      if (l == StageLevel::low) need_low[j] = true;
      if (l == StageLevel::high) need_high[j] = true;
    };
    mark(tb.e[j]);
    for (int i = j + 1; i < s; ++i) mark(tb.D[i][j]);
  }

  DGField stage = u;
  for (int i = 0; i < s; ++i) {
    if (i > 0) {
      stage = u;
      for (int j = 0; j < i; ++j) {
        if (tb.D[i][j] == StageLevel::unused) continue;
        stage.coefficients() -= (dt * tb.A(i, j)) * div[j].at(tb.D[i][j]).coefficients();
      }
    }
    evaluate(div[i], stage, need_low[i], need_high[i], op, t + tb.c[i] * dt, i);
  }
  DGField next = u;
  for (int i = 0; i < s; ++i) {
    if (tb.e[i] == StageLevel::unused) continue;
    next.coefficients() -= (dt * tb.b[i]) * div[i].at(tb.e[i]).coefficients();
  }
  return next;
}

DGField shu_osher_step(const DGField& u, double dt, const ExtendedTableau& tb, const DGOperator& op,
                       const LimiterHook& limiter, double t, int* activations) {
  if (!tb.shu_osher) throw ConfigurationError("scheme '" + tb.name + "' has no Shu-Osher form");
  if (!(dt >= 0.0)) throw InvalidArgument("shu_osher_step: dt must be >= 0");
  const ShuOsherForm& so = *tb.shu_osher;
  const int s = static_cast<int>(so.alpha.rows());
  std::vector<DGField> v;
  v.reserve(s + 1);
  v.push_back(u);
  std::vector<StageDivergence> div(s);
  int count = 0;
  for (int i = 1; i <= s; ++i) {
    const int j_new = i - 1;
    bool low = false, high = false;
    for (int r = j_new; r < s; ++r) {
      if (so.levels[r][j_new] == StageLevel::low) low = true;
      if (so.levels[r][j_new] == StageLevel::high) high = true;
    }
    if (dt > 0.0) evaluate(div[j_new], v[j_new], low, high, op, t + tb.c[j_new] * dt, j_new);

    DGField next = v[0].zeros_like();
    for (int j = 0; j < i; ++j) {
      const double a = so.alpha(i - 1, j);
      if (a != 0.0) next.coefficients() += a * v[j].coefficients();
      const StageLevel lev = so.levels[i - 1][j];
      if (lev != StageLevel::unused && dt > 0.0)
        next.coefficients() -= (dt * so.beta(i - 1, j)) * div[j].at(lev).coefficients();
    }
    if (limiter) count += limiter(next);
    v.push_back(std::move(next));
  }
  if (activations) *activations += count;
  return v.back();
}

TimeStep compute_dt(const DGField& u, double cfl_lambda, const DGOperator& op) {
  if (!(cfl_lambda > 0.0)) throw InvalidArgument("compute_dt: cfl must be > 0");
  const Eigen::Vector2d speed = op.max_wave_speeds(u);
  TimeStep step;
  if (op.dim() == 1) {
    const double h = std::get<Mesh1D>(op.mesh()).min_cell_size();
    if (speed[0] > 0.0) {
      step.dt = cfl_lambda * h / speed[0];
    } else {
      step.dt = cfl_lambda * h;
      step.zero_speed = true;
    }
  } else {
    const Mesh2D& m = std::get<Mesh2D>(op.mesh());
    const double rate = speed[0] / m.hx() + speed[1] / m.hy();
    if (rate > 0.0) {
      step.dt = cfl_lambda / rate;
    } else {
      step.dt = cfl_lambda * m.min_cell_size();
      step.zero_speed = true;
    }
  }
  return step;
}

}  // namespace sdrkdg
