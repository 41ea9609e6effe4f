#include "stabsim/serialize.hpp"

#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace stabsim {

namespace {

void require_keys(const json& j, const std::set<std::string>& allowed,
                  const std::set<std::string>& required,
                  const std::string& where) {
  if (!j.is_object())
    throw std::invalid_argument(where + ": expected an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key()))
      throw std::invalid_argument(where + ": unknown key '" + it.key() + "'");
  for (const auto& k : required)
    if (!j.contains(k))
      throw std::invalid_argument(where + ": missing key '" + k + "'");
}

KSpec k_spec_from_name(const std::string& s) {
  if (s == "full-space") return KSpec::FullSpace;
  if (s == "boundary-of-body") return KSpec::BoundaryOfBody;
  if (s == "level-set-f") return KSpec::LevelSetF;
  throw std::invalid_argument("unknown k_spec '" + s + "'");
}

}  // namespace

json space_to_json(const Space& space) {
  json params = json::object();
  if (space.kind() == SpaceKind::Ball) params["radius"] = space.radius();
  if (space.kind() == SpaceKind::TriangleUnderF)
    params["coeffs"] = space.region().coeffs;
  return {{"kind", space.kind_name()},
          {"dim", space.dim()},
          {"gamma", space.gamma()},
          {"k_spec", space.k_spec_name()},
          {"params", params}};
}

Space space_from_json(const json& j) {
  require_keys(j, {"kind", "dim", "gamma", "k_spec", "params"},
               {"kind", "dim"}, "space");
  std::string kind = j.at("kind").get<std::string>();
  int dim = j.at("dim").get<int>();
  KSpec k = KSpec::FullSpace;
  if (j.contains("k_spec"))
    k = k_spec_from_name(j.at("k_spec").get<std::string>());
  json params = j.value("params", json::object());

  Space sp = Space::unit_cube(2);
  if (kind == "unit-cube") {
    require_keys(params, {}, {}, "space.params");
    sp = Space::unit_cube(dim, k);
  } else if (kind == "ball") {
    require_keys(params, {"radius"}, {}, "space.params");
    sp = Space::ball(dim, params.value("radius", 1.0), k);
  } else if (kind == "triangle-under-f") {
    require_keys(params, {"coeffs"}, {"coeffs"}, "space.params");
    sp = Space::triangle_under_f(dim,
                                 params.at("coeffs").get<std::vector<double>>(),
                                 k);
  } else if (kind == "geodesic-sphere") {
    require_keys(params, {}, {}, "space.params");
    sp = Space::geodesic_sphere(dim);
  } else if (kind == "convex-body-dmax") {
    require_keys(params, {}, {}, "space.params");
    sp = Space::convex_body_dmax();
  } else {
    throw std::invalid_argument("unknown space kind '" + kind + "'");
  }
  if (j.contains("gamma") &&
      std::abs(j.at("gamma").get<double>() - sp.gamma()) > 1e-12)
    throw std::invalid_argument("declared gamma disagrees with the space");
  return sp;
}

json marks_to_json(const MarkDistribution& m) {
  switch (m.kind) {
    case MarkKind::Dirac:
      return {{"kind", "dirac"}};
    case MarkKind::HalfNormal:
      return {{"kind", "half-normal"}, {"sigma", m.sigma}};
    case MarkKind::Exponentialized:
      return {{"kind", "exponentialized"}, {"c1", m.c1}, {"c2", m.c2}};
  }
  return {};
}

MarkDistribution marks_from_json(const json& j) {
  require_keys(j, {"kind", "sigma", "c1", "c2"}, {"kind"}, "marks");
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "dirac") return MarkDistribution::dirac();
  if (kind == "half-normal")
    return MarkDistribution::half_normal(j.value("sigma", 1.0));
  if (kind == "exponentialized")
    return MarkDistribution::exponentialized(j.value("c1", 1.0),
                                             j.value("c2", 1.0));
  throw std::invalid_argument("unknown mark kind '" + kind + "'");
}

json experiment_spec_to_json(const ExperimentSpec& spec) {
  return {{"functional", spec.functional_id},
          {"k", spec.params.k},
          {"q", spec.params.q},
          {"beta", spec.params.beta},
          {"process",
           spec.process == ProcessKind::Poisson ? "poisson" : "binomial"},
          {"space", space_to_json(spec.space)},
          {"sizes", spec.sizes},
          {"replications", spec.replications},
          {"seed", spec.seed},
          {"marks", marks_to_json(spec.marks)},
          {"threads", spec.threads}};
}

ExperimentSpec experiment_spec_from_json(const json& j) {
  require_keys(j,
               {"functional", "k", "q", "beta", "process", "space", "sizes",
                "replications", "seed", "marks", "threads"},
               {"functional", "sizes"}, "spec");
  ExperimentSpec spec;
  spec.functional_id = j.at("functional").get<std::string>();
  spec.params.k = j.value("k", 1);
  spec.params.q = j.value("q", 0.0);
  spec.params.beta = j.value("beta", 1.0);
  std::string proc = j.value("process", std::string("poisson"));
  if (proc == "poisson")
    spec.process = ProcessKind::Poisson;
  else if (proc == "binomial")
    spec.process = ProcessKind::Binomial;
  else
    throw std::invalid_argument("unknown process '" + proc + "'");
  if (j.contains("space")) spec.space = space_from_json(j.at("space"));
  spec.sizes = j.at("sizes").get<std::vector<double>>();
  spec.replications = j.value("replications", 2000);
  spec.seed = j.value("seed", std::uint64_t{1});
  if (j.contains("marks")) spec.marks = marks_from_json(j.at("marks"));
  spec.threads = j.value("threads", 1);
  return spec;
}

json rate_fit_to_json(const RateFit& f) {
  return {{"slope", f.slope},
          {"intercept", f.intercept},
          {"stderr", f.stderr_slope},
          {"r2", f.r2}};
}

json rate_report_to_json(const RateReport& r) {
  json rows = json::array();
  for (const SummaryRow& row : r.rows)
    rows.push_back({{"size", row.size},
                    {"mean", row.mean},
                    {"variance", row.variance},
                    {"central4", row.central4},
                    {"dk", row.dk_emp},
                    {"dw", row.dw_emp},
                    {"dkw_floor", row.dkw_floor},
                    {"runtime_sec", row.runtime_sec}});
  json out = {{"spec", experiment_spec_to_json(r.spec)}, {"rows", rows}};
  if (r.var_fit_ok) out["var_slope"] = rate_fit_to_json(r.var_slope);
  if (r.dk_fit_ok) out["dk_slope"] = rate_fit_to_json(r.dk_slope);
  if (r.mean_fit_ok) out["mean_slope"] = rate_fit_to_json(r.mean_slope);
  return out;
}

std::string rate_report_to_csv(const RateReport& r) {
  std::ostringstream os;
  os.precision(17);
  os << "size,mean,variance,central4,dk,dw,dkw_floor,runtime_sec\n";
  for (const SummaryRow& row : r.rows)
    os << row.size << ',' << row.mean << ',' << row.variance << ','
       << row.central4 << ',' << row.dk_emp << ',' << row.dw_emp << ','
       << row.dkw_floor << ',' << row.runtime_sec << '\n';
  return os.str();
}

json tail_fit_to_json(const TailFit& f) {
  return {{"C_hat", f.C_hat},
          {"c_hat", f.c_hat},
          {"alpha_hat", f.alpha_hat},
          {"residual", f.residual},
          {"log_scaled_r", f.log_scaled_r},
          {"survivals", f.survivals}};
}

json identity_report_to_json(const IdentityReport& r) {
  return {{"max_rel_residual_first", r.max_rel_residual_first},
          {"max_rel_residual_second", r.max_rel_residual_second},
          {"trials", r.trials},
          {"pass", r.pass}};
}

json vanishing_report_to_json(const VanishingReport& r) {
  return {{"trials", r.trials},
          {"violations", r.violations},
          {"skipped", r.skipped},
          {"pass", r.pass}};
}

json growth_report_to_json(const GrowthReport& r) {
  return {{"max_ratio", r.max_ratio},
          {"declared_kappa", r.declared_kappa},
          {"std_error", r.std_error},
          {"flagged", r.flagged}};
}

json stein_estimate_to_json(const SteinEstimate& e) {
  return {{"gamma_term", e.gamma_term},
          {"gamma_se", e.gamma_se},
          {"psi_sq_integral", e.psi_sq_integral},
          {"psi_sq_se", e.psi_sq_se},
          {"psi_inner_sq_integral", e.psi_inner_sq_integral},
          {"psi_inner_sq_se", e.psi_inner_sq_se},
          {"s1", e.s1},
          {"s2", e.s2},
          {"s3", e.s3},
          {"i_ks", e.i_ks},
          {"bound", e.bound},
          {"mc", {{"outer", e.mc.outer},
                  {"inner", e.mc.inner},
                  {"p", e.mc.p},
                  {"seed", e.mc.seed}}}};
}

json fourth_moment_report_to_json(const FourthMomentReport& r) {
  return {{"lhs", r.lhs},
          {"rhs", r.rhs},
          {"lhs_se", r.lhs_se},
          {"pass", r.pass}};
}

RunConfig run_config_from_json(const json& j) {
  require_keys(j, {"spec", "predicates", "out_json", "out_csv", "out_svg"},
               {"spec"}, "config");
  RunConfig c;
  c.spec = experiment_spec_from_json(j.at("spec"));
  if (j.contains("predicates")) {
    if (!j.at("predicates").is_array())
      throw std::invalid_argument("config: predicates must be an array");
    for (const json& p : j.at("predicates")) {
      require_keys(p, {"field", "min", "max"}, {"field"}, "predicate");
      Predicate pr;
      pr.field = p.at("field").get<std::string>();
      pr.min = p.value("min", -1e300);
      pr.max = p.value("max", 1e300);
      c.predicates.push_back(pr);
    }
  }
  c.out_json = j.value("out_json", std::string());
  c.out_csv = j.value("out_csv", std::string());
  c.out_svg = j.value("out_svg", std::string());
  return c;
}

json run_config_to_json(const RunConfig& c) {
  json preds = json::array();
  for (const Predicate& p : c.predicates)
    preds.push_back({{"field", p.field}, {"min", p.min}, {"max", p.max}});
  return {{"spec", experiment_spec_to_json(c.spec)},
          {"predicates", preds},
          {"out_json", c.out_json},
          {"out_csv", c.out_csv},
          {"out_svg", c.out_svg}};
}

std::vector<std::string> check_predicates(const RunConfig& c,
                                          const RateReport& r) {
  std::vector<std::string> failures;
  for (const Predicate& p : c.predicates) {
    double value;
    bool have = true;
    if (p.field == "var_slope") {
      value = r.var_slope.slope;
      have = r.var_fit_ok;
    } else if (p.field == "dk_slope") {
      value = r.dk_slope.slope;
      have = r.dk_fit_ok;
    } else if (p.field == "mean_slope") {
      value = r.mean_slope.slope;
      have = r.mean_fit_ok;
    } else {
      failures.push_back("unknown predicate field '" + p.field + "'");
      continue;
    }
    if (!have) {
      failures.push_back(p.field + ": fit unavailable");
    } else if (!(value >= p.min && value <= p.max)) {
      std::ostringstream os;
      os.precision(6);
      os << p.field << " = " << value << " outside [" << p.min << ", "
         << p.max << "]";
      failures.push_back(os.str());
    }
  }
  return failures;
}

std::string svg_loglog_plot(const std::vector<double>& x,
                            const std::vector<double>& y, const RateFit& fit,
                            const std::string& title) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("plot needs >= 2 points");
  const double W = 480, H = 360, M = 50;
  std::vector<double> lx(x.size()), ly(y.size());
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] <= 0 || y[i] <= 0)
      throw std::invalid_argument("plot needs positive data");
    lx[i] = std::log10(x[i]);
    ly[i] = std::log10(y[i]);
    xmin = std::min(xmin, lx[i]);
    xmax = std::max(xmax, lx[i]);
    ymin = std::min(ymin, ly[i]);
    ymax = std::max(ymax, ly[i]);
  }
  if (xmax - xmin < 1e-12) xmax = xmin + 1;
  if (ymax - ymin < 1e-12) ymax = ymin + 1;
  auto px = [&](double v) { return M + (v - xmin) / (xmax - xmin) * (W - 2 * M); };
  auto py = [&](double v) { return H - M - (v - ymin) / (ymax - ymin) * (H - 2 * M); };
  std::ostringstream os;
  os.precision(6);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
     << "\" height=\"" << H << "\">\n";
  os << "<rect width=\"" << W << "\" height=\"" << H
     << "\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"20\" text-anchor=\"middle\">" << title
     << " (slope " << fit.slope << ")</text>\n";
  os << "<line x1=\"" << M << "\" y1=\"" << H - M << "\" x2=\"" << W - M
     << "\" y2=\"" << H - M << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << M << "\" y1=\"" << M << "\" x2=\"" << M << "\" y2=\""
     << H - M << "\" stroke=\"black\"/>\n";
  // fitted line in natural-log coordinates, converted to log10 for drawing
  double ln10 = std::log(10.0);
  auto fit_ly = [&](double lxv) {
    return (fit.intercept + fit.slope * (lxv * ln10)) / ln10;
  };
  os << "<line x1=\"" << px(xmin) << "\" y1=\"" << py(fit_ly(xmin))
     << "\" x2=\"" << px(xmax) << "\" y2=\"" << py(fit_ly(xmax))
     << "\" stroke=\"red\"/>\n";
  for (std::size_t i = 0; i < lx.size(); ++i)
    os << "<circle cx=\"" << px(lx[i]) << "\" cy=\"" << py(ly[i])
       << "\" r=\"3\" fill=\"blue\"/>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace stabsim
