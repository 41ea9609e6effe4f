#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "stabsim/serialize.hpp"

namespace py = pybind11;
using namespace stabsim;

namespace {

Point to_point(const std::vector<double>& v) {
  if (v.size() > kMaxDim) throw std::invalid_argument("dim > 5");
  Point p(static_cast<int>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) p[static_cast<int>(i)] = v[i];
  return p;
}

std::vector<double> from_point(const Point& p) {
  std::vector<double> v(p.dim());
  for (int i = 0; i < p.dim(); ++i) v[i] = p[i];
  return v;
}

Space make_space(const std::string& json_text) {
  return space_from_json(json::parse(json_text));
}

}  // namespace

PYBIND11_MODULE(_stabsim, m) {
  m.doc() = "point process score functional simulator";

  py::class_<Space>(m, "Space")
      .def_static("from_json", &make_space)
      .def_property_readonly("dim", &Space::dim)
      .def_property_readonly("gamma", &Space::gamma)
      .def("contains", [](const Space& s, const std::vector<double>& x) {
        return s.contains(to_point(x));
      })
      .def("semimetric",
           [](const Space& s, const std::vector<double>& x,
              const std::vector<double>& y) {
             return s.semimetric(to_point(x), to_point(y));
           })
      .def("distance_to_k",
           [](const Space& s, const std::vector<double>& x) {
             return s.distance_to_k(to_point(x));
           })
      .def("to_json", [](const Space& s) { return space_to_json(s).dump(); });

  py::class_<Configuration>(m, "Configuration")
      .def(py::init<>())
      .def_static("from_points",
                  [](const std::vector<std::vector<double>>& pts,
                     const std::vector<double>& marks) {
                    std::vector<MarkedPoint> mps;
                    for (std::size_t i = 0; i < pts.size(); ++i)
                      mps.push_back({to_point(pts[i]),
                                     i < marks.size() ? marks[i] : 1.0});
                    return Configuration::from_unsorted(std::move(mps));
                  },
                  py::arg("points"),
                  py::arg("marks") = std::vector<double>{})
      .def("__len__", &Configuration::size)
      .def("points",
           [](const Configuration& c) {
             std::vector<std::vector<double>> out;
             for (const auto& mp : c.items()) out.push_back(from_point(mp.pt));
             return out;
           })
      .def("marks", [](const Configuration& c) {
        std::vector<double> out;
        for (const auto& mp : c.items()) out.push_back(mp.mark);
        return out;
      })
      .def("to_csv", &configuration_to_csv)
      .def_static("from_csv", &configuration_from_csv);

  m.def(
      "sample_poisson",
      [](const Space& sp, double s, std::uint64_t seed) {
        RandomStream rng(seed, 0);
        return sample_poisson(sp, s, MarkDistribution::dirac(), rng);
      },
      py::arg("space"), py::arg("s"), py::arg("seed") = 1);
  m.def(
      "sample_binomial",
      [](const Space& sp, std::size_t n, std::uint64_t seed) {
        RandomStream rng(seed, 0);
        return sample_binomial(sp, n, MarkDistribution::dirac(), rng);
      },
      py::arg("space"), py::arg("n"), py::arg("seed") = 1);

  m.def(
      "statistic",
      [](const std::string& id, const Configuration& c, const Space& space,
         int k, double q, double beta, double scale) {
        FunctionalParams params;
        params.k = k;
        params.q = q;
        params.beta = beta;
        params.scale = scale;
        return make_functional(id, params, space)->total(c);
      },
      py::arg("id"), py::arg("config"), py::arg("space"), py::arg("k") = 1,
      py::arg("q") = 0.0, py::arg("beta") = 1.0, py::arg("scale") = 1.0);

  m.def(
      "scores",
      [](const std::string& id, const Configuration& c, const Space& space,
         int k, double q, double beta, double scale) {
        FunctionalParams params;
        params.k = k;
        params.q = q;
        params.beta = beta;
        params.scale = scale;
        auto fam = make_functional(id, params, space);
        if (!fam->has_scores())
          throw std::invalid_argument(id + " exposes no per-point scores");
        std::vector<double> out(c.size());
        for (std::size_t i = 0; i < c.size(); ++i) out[i] = fam->score(i, c);
        return out;
      },
      py::arg("id"), py::arg("config"), py::arg("space"), py::arg("k") = 1,
      py::arg("q") = 0.0, py::arg("beta") = 1.0, py::arg("scale") = 1.0);

  m.def("normal_cdf", &normal_cdf);
  m.def("normal_quantile", &normal_quantile);
  m.def("kolmogorov_distance", &kolmogorov_distance, py::arg("samples"),
        py::arg("standardize") = true);
  m.def("wasserstein_distance", &wasserstein_distance, py::arg("samples"),
        py::arg("standardize") = true);

  m.def(
      "run_experiment_json",
      [](const std::string& spec_json) {
        ExperimentSpec spec =
            experiment_spec_from_json(json::parse(spec_json));
        return rate_report_to_json(run_experiment(spec)).dump();
      },
      py::arg("spec_json"));

  m.def(
      "identity_check_json",
      [](const std::string& id, const std::string& space_json, int trials,
         std::uint64_t seed) {
        Space space = space_from_json(json::parse(space_json));
        FunctionalParams params;
        auto fam = make_functional(id, params, space);
        return identity_report_to_json(
                   score_sum_identity_check(*fam, space, trials, seed))
            .dump();
      },
      py::arg("id"), py::arg("space_json"), py::arg("trials") = 50,
      py::arg("seed") = 1);

  m.def(
      "bound_rhs",
      [](double i_ks_value, double variance, double user_constant,
         bool binomial) {
        return closed_form_bound_rhs(i_ks_value, variance, user_constant, binomial);
      },
      py::arg("i_ks"), py::arg("variance"), py::arg("user_constant") = 1.0,
      py::arg("binomial") = false);
}
