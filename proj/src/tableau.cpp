#include "sdrkdg/tableau.hpp"

#include <algorithm>
#include <cmath>
#include <regex>
#include <sstream>

#include "sdrkdg/errors.hpp"

namespace sdrkdg {

std::string to_string(StageLevel level) {
  switch (level) {
    case StageLevel::unused: return "unused";
    case StageLevel::low: return "low";
    case StageLevel::high: return "high";
  }
  return "unused";
}

StageLevel parse_stage_level(const std::string& text) {
  if (text == "unused" || text == "-" || text.empty()) return StageLevel::unused;
  if (text == "low" || text == "k-1") return StageLevel::low;
  if (text == "high" || text == "k") return StageLevel::high;
  throw ConfigurationError("unknown stage level '" + text + "' (expected low, high or unused)");
}

namespace {

constexpr StageLevel L = StageLevel::low;
constexpr StageLevel H = StageLevel::high;
constexpr StageLevel U = StageLevel::unused;

using Levels = std::vector<std::vector<StageLevel>>;

/// Builds a tableau from rows of A (strictly lower part only), b and tags;
/// tags of exactly-zero coefficients are dropped.
ExtendedTableau make(std::string name, int order, const std::vector<std::vector<double>>& a_rows,
                     const std::vector<double>& b, const Levels& d_rows, const std::vector<StageLevel>& e) {
  const int s = static_cast<int>(b.size());
  ExtendedTableau t;
  t.name = std::move(name);
  t.order = order;
  t.A = Eigen::MatrixXd::Zero(s, s);
  t.b = Eigen::Map<const Eigen::VectorXd>(b.data(), s);
  t.D.assign(s, std::vector<StageLevel>(s, U));
  t.e.assign(e.begin(), e.end());
  for (int i = 1; i < s; ++i) {
    for (int j = 0; j < i; ++j) {
      t.A(i, j) = a_rows[i][j];
      t.D[i][j] = t.A(i, j) != 0.0 ? d_rows[i][j] : U;
    }
  }
  for (int i = 0; i < s; ++i)
    if (t.b[i] == 0.0) t.e[i] = U;
  t.c = t.A.rowwise().sum();
  return t;
}

ShuOsherForm make_so(const std::vector<std::vector<double>>& alpha, const std::vector<std::vector<double>>& beta,
                     const Levels& levels) {
  const int s = static_cast<int>(alpha.size());
  ShuOsherForm f;
  f.alpha = Eigen::MatrixXd::Zero(s, s);
  f.beta = Eigen::MatrixXd::Zero(s, s);
  f.levels.assign(s, std::vector<StageLevel>(s, U));
  for (int i = 0; i < s; ++i) {
    for (int j = 0; j <= i; ++j) {
      f.alpha(i, j) = alpha[i][j];
      f.beta(i, j) = beta[i][j];
      f.levels[i][j] = f.beta(i, j) != 0.0 ? levels[i][j] : U;
    }
  }
  return f;
}

ExtendedTableau ssp2(const std::string& name, StageLevel first, StageLevel second) {
  ExtendedTableau t = make(name, 2, {{}, {1.0}}, {0.5, 0.5}, {{}, {first}}, {first, second});
  t.shu_osher = make_so({{1.0}, {0.5, 0.5}}, {{1.0}, {0.0, 0.5}}, {{first}, {U, second}});
  return t;
}

ExtendedTableau ssp3(const std::string& name, StageLevel l1, StageLevel l2) {
  // l1 tags the operator acting on u^n, l2 those acting on the later stages
  ExtendedTableau t =
      make(name, 3, {{}, {1.0}, {0.25, 0.25}}, {1.0 / 6, 1.0 / 6, 2.0 / 3}, {{}, {l1}, {l1, l2}}, {l1, l2, l2});
  t.shu_osher = make_so({{1.0}, {0.75, 0.25}, {1.0 / 3, 0.0, 2.0 / 3}}, {{1.0}, {0.0, 0.25}, {0.0, 0.0, 2.0 / 3}},
                        {{l1}, {U, l2}, {U, U, l2}});
  return t;
}

ExtendedTableau rk4(const std::string& name, StageLevel inner) {
  return make(name, 4, {{}, {0.5}, {0.0, 0.5}, {0.0, 0.0, 1.0}}, {1.0 / 6, 1.0 / 3, 1.0 / 3, 1.0 / 6},
              {{}, {inner}, {U, inner}, {U, U, inner}}, {inner, inner, inner, H});
}

ExtendedTableau heun(const std::string& name, StageLevel inner) {
  return make(name, 3, {{}, {1.0 / 3}, {0.0, 2.0 / 3}}, {0.25, 0.0, 0.75}, {{}, {inner}, {U, inner}}, {H, U, H});
}

ExtendedTableau generic2(double alpha, const std::string& variant) {
  if (alpha == 0.0 || !std::isfinite(alpha)) throw InvalidArgument("generic2: alpha must be finite and nonzero");
  StageLevel d, e1;
  if (variant == "v1") d = L, e1 = L;
  else if (variant == "v2") d = L, e1 = H;
  else if (variant == "v3") d = H, e1 = L;
  else if (variant == "v4") d = H, e1 = H;
  else throw InvalidArgument("generic2: variant must be v1, v2, v3 or v4");
  std::ostringstream name;
  name << "generic2(" << alpha << "," << variant << ")";
  return make(name.str(), 2, {{}, {alpha}}, {1.0 - 1.0 / (2.0 * alpha), 1.0 / (2.0 * alpha)}, {{}, {d}}, {e1, H});
}

ExtendedTableau generic3(double alpha, const std::string& variant) {
  if (!std::isfinite(alpha) || alpha == 0.0 || alpha == 1.0 || std::abs(3.0 * alpha - 2.0) < 1e-14)
    throw InvalidArgument("generic3: alpha must avoid the singular values 0, 2/3 and 1");
  const double g = (1.0 - alpha) / (alpha * (3.0 * alpha - 2.0));
  const std::vector<std::vector<double>> a = {{}, {alpha}, {1.0 + g, -g}};
  const std::vector<double> b = {0.5 - 1.0 / (6.0 * alpha), 1.0 / (6.0 * alpha * (1.0 - alpha)),
                                 (2.0 - 3.0 * alpha) / (6.0 * (1.0 - alpha))};
  std::ostringstream name;
  name << "generic3(" << alpha << "," << variant << ")";
  if (variant == "v1") return make(name.str(), 3, a, b, {{}, {H}, {L, L}}, {H, H, H});
  if (variant == "v2") return make(name.str(), 3, a, b, {{}, {L}, {L, L}}, {L, L, H});
  if (variant == "std") return make(name.str(), 3, a, b, {{}, {H}, {H, H}}, {H, H, H});
  throw InvalidArgument("generic3: variant must be v1, v2 or std (all levels k)");
}

}  // namespace

std::vector<std::string> builtin_tableau_names() {
  return {"midpoint_sd", "heun_sd", "ssprk2_sd", "ssprk3_sd", "rk4_sd", "rkdg2",
          "rkdg3_heun",  "rkdg3_ssp", "rkdg3",   "rkdg4",     "generic2", "generic3"};
}

ExtendedTableau builtin_tableau(const std::string& name, const TableauParams& params) {
  static const std::regex inline_form(R"(^(generic[23])\(\s*([-+0-9.eE]+)\s*(?:,\s*(v[1-4]|std)\s*)?\)$)");
  std::smatch match;
  if (std::regex_match(name, match, inline_form)) {
    TableauParams p = params;
    p.alpha = std::stod(match[2].str());
    if (match[3].matched) p.variant = match[3].str();
    return builtin_tableau(match[1].str(), p);
  }
  if (name == "midpoint_sd") return make(name, 2, {{}, {0.5}}, {0.0, 1.0}, {{}, {L}}, {U, H});
  if (name == "heun_sd") return heun(name, L);
  if (name == "ssprk2_sd") return ssp2(name, L, H);
  if (name == "ssprk3_sd") return ssp3(name, L, H);
  if (name == "rk4_sd") return rk4(name, L);
  if (name == "rkdg2") return ssp2(name, H, H);
  if (name == "rkdg3_heun") return heun(name, H);
  if (name == "rkdg3_ssp" || name == "rkdg3") return ssp3(name, H, H);
  if (name == "rkdg4") return rk4(name, H);
  if (name == "generic2") return generic2(params.alpha, params.variant);
  if (name == "generic3") return generic3(params.alpha, params.variant);
  std::string valid;
  for (const auto& n : builtin_tableau_names()) valid += (valid.empty() ? "" : ", ") + n;
  throw LookupError("unknown scheme '" + name + "'; valid names: " + valid);
}

TableauDiagnostics validate_tableau(const ExtendedTableau& t, int degree) {
  const int s = t.stages();
  auto fail = [&](const std::string& what) { throw ValidationError("tableau '" + t.name + "': " + what); };
  if (s < 1) fail("no stages");
  if (t.A.rows() != s || t.A.cols() != s) fail("A must be s x s");
  if (t.c.size() != s) fail("c must have s entries");
  if (static_cast<int>(t.D.size()) != s || static_cast<int>(t.e.size()) != s) fail("D and e must have s rows");
  TableauDiagnostics diag;
  diag.stages = s;
  auto count = [&](StageLevel level, const std::string& entry) {
    if (level == L) {
      if (degree < 1) fail(entry + " uses level k-1 but k = 0");
      ++diag.low_operators;
    } else if (level == H) {
      ++diag.high_operators;
    }
  };
  for (int i = 0; i < s; ++i) {
    if (static_cast<int>(t.D[i].size()) != s) fail("row " + std::to_string(i + 1) + " of D must have s entries");
    for (int j = 0; j < s; ++j) {
      const std::string entry = "a_" + std::to_string(i + 1) + std::to_string(j + 1);
      if (j >= i && t.A(i, j) != 0.0) fail(entry + " must be zero (A strictly lower triangular)");
      const bool defined = t.D[i][j] != U;
      if (defined != (t.A(i, j) != 0.0)) fail("d for " + entry + " must be defined exactly where the coefficient is nonzero");
      count(t.D[i][j], "d for " + entry);
    }
    const std::string entry = "b_" + std::to_string(i + 1);
    if ((t.e[i] != U) != (t.b[i] != 0.0)) fail("e for " + entry + " must be defined exactly where the weight is nonzero");
    count(t.e[i], "e for " + entry);
    if (std::abs(t.c[i] - t.A.row(i).sum()) > 1e-14) fail("c_" + std::to_string(i + 1) + " must equal the row sum of A");
  }
  if (t.b[s - 1] != 0.0 && t.e[s - 1] != H) fail("e_s must be k");
  if (std::abs(t.b.sum() - 1.0) > 1e-14) fail("weights must sum to 1");
  diag.label = TableauClass::A;
  for (int i = 0; i < s; ++i)
    if (t.e[i] == L) diag.label = TableauClass::B;

  if (t.shu_osher) {
    const ShuOsherForm& f = *t.shu_osher;
    if (f.alpha.rows() != s || f.alpha.cols() != s || f.beta.rows() != s || f.beta.cols() != s ||
        static_cast<int>(f.levels.size()) != s)
      fail("Shu-Osher arrays must be s x s");
    for (int i = 0; i < s; ++i) {
      if (std::abs(f.alpha.row(i).sum() - 1.0) > 1e-14) fail("Shu-Osher alpha row " + std::to_string(i + 1) + " must sum to 1");
      for (int j = 0; j < s; ++j) {
        if (j > i && (f.alpha(i, j) != 0.0 || f.beta(i, j) != 0.0)) fail("Shu-Osher arrays must be lower triangular");
        if (f.alpha(i, j) < 0.0) fail("Shu-Osher alpha must be nonnegative");
        if ((f.levels[i][j] != U) != (f.beta(i, j) != 0.0)) fail("Shu-Osher level tags must match nonzero beta");
        if (f.levels[i][j] == L && degree < 1) fail("Shu-Osher term uses level k-1 but k = 0");
      }
    }
    const ExtendedTableau converted = butcher_from_shu_osher(f);
    if ((converted.A - t.A).cwiseAbs().maxCoeff() > 1e-14 || (converted.b - t.b).cwiseAbs().maxCoeff() > 1e-14 ||
        converted.D != t.D || converted.e != t.e)
      fail("Shu-Osher form does not match the Butcher arrays");
  }
  return diag;
}

ExtendedTableau butcher_from_shu_osher(const ShuOsherForm& f, const std::string& name, int order) {
  const int s = static_cast<int>(f.alpha.rows());
  // coef[i](j, lev): v_i = u^n - dt sum_j sum_lev coef(j, lev) L_lev v_j
  std::vector<Eigen::MatrixXd> coef(s + 1, Eigen::MatrixXd::Zero(s, 2));
  for (int i = 1; i <= s; ++i) {
    for (int j = 0; j < i; ++j) {
      coef[i] += f.alpha(i - 1, j) * coef[j];
      const StageLevel lev = f.levels[i - 1][j];
      if (lev != U) coef[i](j, lev == L ? 0 : 1) += f.beta(i - 1, j);
    }
  }
  ExtendedTableau t;
  t.name = name;
  t.order = order;
  t.A = Eigen::MatrixXd::Zero(s, s);
  t.b = Eigen::VectorXd::Zero(s);
  t.D.assign(s, std::vector<StageLevel>(s, U));
  t.e.assign(s, U);
  auto pick = [&](const Eigen::MatrixXd& cf, int j, double& value, StageLevel& level) {
    const double lo = cf(j, 0), hi = cf(j, 1);
    if (lo != 0.0 && hi != 0.0)
      throw ValidationError("Shu-Osher form mixes both levels on one stage; no Butcher equivalent");
    value = lo != 0.0 ? lo : hi;
    level = lo != 0.0 ? L : (hi != 0.0 ? H : U);
  };
  for (int i = 1; i < s; ++i)
    for (int j = 0; j < i; ++j) pick(coef[i], j, t.A(i, j), t.D[i][j]);
  for (int j = 0; j < s; ++j) pick(coef[s], j, t.b[j], t.e[j]);
  t.c = t.A.rowwise().sum();
  return t;
}

namespace {

nlohmann::json matrix_json(const Eigen::MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

nlohmann::json levels_json(const Levels& levels) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : levels) {
    nlohmann::json row = nlohmann::json::array();
    for (StageLevel l : r) row.push_back(to_string(l));
    rows.push_back(row);
  }
  return rows;
}

Eigen::MatrixXd matrix_from(const nlohmann::json& j, int s, const std::string& key) {
  if (!j.is_array() || static_cast<int>(j.size()) != s) throw ConfigurationError("tableau '" + key + "' must have s rows");
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(s, s);
  for (int i = 0; i < s; ++i) {
    if (!j[i].is_array() || static_cast<int>(j[i].size()) > s) throw ConfigurationError("tableau '" + key + "' row too long");
    for (int c = 0; c < static_cast<int>(j[i].size()); ++c) m(i, c) = j[i][c].get<double>();
  }
  return m;
}

Levels levels_from(const nlohmann::json& j, int s, const std::string& key) {
  if (!j.is_array() || static_cast<int>(j.size()) != s) throw ConfigurationError("tableau '" + key + "' must have s rows");
  Levels levels(s, std::vector<StageLevel>(s, U));
  for (int i = 0; i < s; ++i) {
    if (!j[i].is_array() || static_cast<int>(j[i].size()) > s) throw ConfigurationError("tableau '" + key + "' row too long");
    for (int c = 0; c < static_cast<int>(j[i].size()); ++c) levels[i][c] = parse_stage_level(j[i][c].get<std::string>());
  }
  return levels;
}

}  // namespace

nlohmann::json tableau_to_json(const ExtendedTableau& t) {
  nlohmann::json j;
  j["name"] = t.name;
  j["order"] = t.order;
  j["A"] = matrix_json(t.A);
  j["b"] = std::vector<double>(t.b.data(), t.b.data() + t.b.size());
  j["D"] = levels_json(t.D);
  nlohmann::json e = nlohmann::json::array();
  for (StageLevel l : t.e) e.push_back(to_string(l));
  j["e"] = e;
  if (t.shu_osher) {
    j["shu_osher"] = {{"alpha", matrix_json(t.shu_osher->alpha)},
                      {"beta", matrix_json(t.shu_osher->beta)},
                      {"levels", levels_json(t.shu_osher->levels)}};
  }
  return j;
}

ExtendedTableau tableau_from_json(const nlohmann::json& j) {
  static const std::vector<std::string> known = {"name", "order", "A", "b", "c", "D", "e", "shu_osher"};
  if (!j.is_object()) throw ConfigurationError("tableau must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw ConfigurationError("unknown tableau key '" + key + "'");
  }
  try {
    ExtendedTableau t;
    t.name = j.value("name", std::string("user"));
    t.order = j.value("order", 0);
    const auto b = j.at("b").get<std::vector<double>>();
    const int s = static_cast<int>(b.size());
    t.b = Eigen::Map<const Eigen::VectorXd>(b.data(), s);
    t.A = matrix_from(j.at("A"), s, "A");
    t.D = levels_from(j.at("D"), s, "D");
    const auto e = j.at("e").get<std::vector<std::string>>();
    if (static_cast<int>(e.size()) != s) throw ConfigurationError("tableau 'e' must have s entries");
    for (const auto& x : e) t.e.push_back(parse_stage_level(x));
    if (j.contains("c")) {
      const auto c = j.at("c").get<std::vector<double>>();
      if (static_cast<int>(c.size()) != s) throw ConfigurationError("tableau 'c' must have s entries");
      t.c = Eigen::Map<const Eigen::VectorXd>(c.data(), s);
    } else {
      t.c = t.A.rowwise().sum();
    }
    if (j.contains("shu_osher")) {
      const auto& so = j.at("shu_osher");
      ShuOsherForm f;
      f.alpha = matrix_from(so.at("alpha"), s, "alpha");
      f.beta = matrix_from(so.at("beta"), s, "beta");
      f.levels = levels_from(so.at("levels"), s, "levels");
      t.shu_osher = f;
    }
    return t;
  } catch (const nlohmann::json::exception& ex) {
    throw ConfigurationError(std::string("malformed tableau: ") + ex.what());
  }
}

}  // namespace sdrkdg
