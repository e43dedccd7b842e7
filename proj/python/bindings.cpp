#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "kicked_top/classical.hpp"
#include "kicked_top/coeff_stats.hpp"
#include "kicked_top/multifractal.hpp"
#include "kicked_top/spectral.hpp"

namespace py = pybind11;
using namespace kicked_top;

namespace {

Axis parse_axis(const std::string& name) {
  if (name == "x") return Axis::x;
  if (name == "y") return Axis::y;
  if (name == "z") return Axis::z;
  throw py::value_error("axis must be 'x', 'y' or 'z'");
}

// Spin given as j (integer or half-integer float).
SpinBasis spin(double j) {
  const double twice = 2.0 * j;
  if (twice != std::floor(twice) || twice < 1) throw py::value_error("j must be a positive multiple of 1/2");
  return SpinBasis(static_cast<int>(twice));
}

std::vector<SpherePoint> points_from(const std::vector<std::pair<double, double>>& angles) {
  std::vector<SpherePoint> out;
  out.reserve(angles.size());
  for (const auto& [theta, phi] : angles) out.push_back({theta, phi});
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Quantum kicked top core";
  m.attr("__version__") = KICKED_TOP_VERSION;

  py::register_exception<DegenerateSubspaceError>(m, "DegenerateSubspaceError", PyExc_ArithmeticError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const DomainError& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    }
  });

  py::enum_<Parity>(m, "Parity").value("even", Parity::even).value("odd", Parity::odd);
  py::enum_<DiagonalizationMethod>(m, "DiagonalizationMethod")
      .value("full", DiagonalizationMethod::full)
      .value("sector", DiagonalizationMethod::sector);
  py::enum_<ExpansionBasis>(m, "ExpansionBasis")
      .value("full", ExpansionBasis::full)
      .value("even", ExpansionBasis::even)
      .value("odd", ExpansionBasis::odd);
  py::enum_<ScalingModel>(m, "ScalingModel")
      .value("linear_in_invlogN", ScalingModel::linear_in_invlogN)
      .value("loglog_in_invlogN", ScalingModel::loglog_in_invlogN);

  py::class_<KickedTopParams>(m, "KickedTopParams")
      .def(py::init([](double alpha, double kappa, int j) {
             KickedTopParams p{alpha, kappa, j};
             p.validate();
             return p;
           }),
           py::arg("alpha"), py::arg("kappa"), py::arg("j"))
      .def_readwrite("alpha", &KickedTopParams::alpha)
      .def_readwrite("kappa", &KickedTopParams::kappa)
      .def_readwrite("j", &KickedTopParams::j)
      .def("__repr__", [](const KickedTopParams& p) {
        return "KickedTopParams(alpha=" + std::to_string(p.alpha) + ", kappa=" + std::to_string(p.kappa) +
               ", j=" + std::to_string(p.j) + ")";
      });

  py::class_<FloquetEigensystem>(m, "FloquetEigensystem")
      .def_readonly("params", &FloquetEigensystem::params)
      .def_readonly("quasienergies", &FloquetEigensystem::quasienergies)
      .def_readonly("eigenvectors", &FloquetEigensystem::eigenvectors)
      .def_readonly("degenerate_clusters", &FloquetEigensystem::degenerate_clusters)
      .def_property_readonly("parities",
                             [](const FloquetEigensystem& e) {
                               std::vector<int> out;
                               for (Parity p : e.parities) out.push_back(static_cast<int>(p));
                               return out;
                             })
      .def("count", &FloquetEigensystem::count)
      .def("sector_quasienergies", &FloquetEigensystem::sector_quasienergies)
      .def("sector_vectors", &FloquetEigensystem::sector_vectors)
      .def("__len__", &FloquetEigensystem::dim);

  m.def("angular_momentum", [](double j, const std::string& axis) { return angular_momentum(spin(j), parse_axis(axis)); },
        py::arg("j"), py::arg("axis"));
  m.def("coherent_state", [](double j, double theta, double phi) { return coherent_state(spin(j), theta, phi).amplitudes; },
        py::arg("j"), py::arg("theta"), py::arg("phi"));
  m.def("wigner_d_matrix", [](double j, double alpha) { return wigner_d_matrix(spin(j), alpha); }, py::arg("j"),
        py::arg("alpha"));
  m.def("parity_operator", [](int j) { return parity_operator(SpinBasis::integer(j)); }, py::arg("j"));
  m.def("build_floquet", [](const KickedTopParams& p) { return build_floquet(p).matrix; }, py::arg("params"));
  m.def("solve_floquet",
        [](const KickedTopParams& p, DiagonalizationMethod method, double degeneracy_tolerance) {
          DiagonalizeOptions o;
          o.degeneracy_tolerance = degeneracy_tolerance;
          return solve_floquet(p, method, o);
        },
        py::arg("params"), py::arg("method") = DiagonalizationMethod::full, py::arg("degeneracy_tolerance") = 1e-10,
        py::call_guard<py::gil_scoped_release>());
  m.def("evolve_state",
        [](const KickedTopParams& p, const ComplexVector& psi, int n) { return evolve_state(build_floquet(p), psi, n); },
        py::arg("params"), py::arg("psi0"), py::arg("n_kicks"));

  m.def("classical_step",
        [](const Eigen::Vector3d& s, const KickedTopParams& p) { return classical_step(ClassicalState{s}, p).s; },
        py::arg("s"), py::arg("params"));
  m.def("tangent_map", [](const Eigen::Vector3d& s, const KickedTopParams& p) { return tangent_map(ClassicalState{s}, p); },
        py::arg("s"), py::arg("params"));
  m.def("lyapunov_exponent",
        [](double theta, double phi, const KickedTopParams& p, int n_kicks, int transient) {
          const LyapunovEstimate e =
              lyapunov_exponent(ClassicalState::from_angles(theta, phi), p, n_kicks, {transient, 10});
          return py::make_tuple(e.lambda, e.error);
        },
        py::arg("theta"), py::arg("phi"), py::arg("params"), py::arg("n_kicks"), py::arg("transient") = 100);
  m.def("lyapunov_field",
        [](const KickedTopParams& p, int n_phi, int n_theta, int n_kicks) {
          GridSpec g;
          g.n_phi = n_phi;
          g.n_theta = n_theta;
          py::gil_scoped_release release;
          const LyapunovField f = lyapunov_field(p, g, n_kicks);
          return Eigen::Map<const Eigen::MatrixXd>(f.lambda.data(), n_phi, n_theta).transpose().eval();
        },
        py::arg("params"), py::arg("n_phi") = 50, py::arg("n_theta") = 50, py::arg("n_kicks") = 5000);
  m.def("averaged_lyapunov",
        [](const KickedTopParams& p, int n_samples, int n_kicks, std::uint64_t seed) {
          py::gil_scoped_release release;
          const AveragedLyapunov a = averaged_lyapunov(p, n_samples, n_kicks, seed);
          py::gil_scoped_acquire acquire;
          return py::dict(py::arg("mean") = a.mean, py::arg("stderr") = a.stderr_of_mean,
                          py::arg("ks_entropy") = a.ks_entropy);
        },
        py::arg("params"), py::arg("n_samples") = 1000, py::arg("n_kicks") = 2000, py::arg("seed") = 1);
  m.def("kappa_threshold",
        [](double alpha, double threshold, int n_samples, int n_kicks, std::uint64_t seed) {
          ThresholdOptions o;
          o.threshold = threshold;
          o.n_samples = n_samples;
          o.n_kicks = n_kicks;
          o.seed = seed;
          return kappa_threshold(alpha, o);
        },
        py::arg("alpha"), py::arg("threshold") = 0.002, py::arg("n_samples") = 1000, py::arg("n_kicks") = 5000,
        py::arg("seed") = 1, py::call_guard<py::gil_scoped_release>());

  m.def("spacings",
        [](const std::vector<double>& nu, bool periodic) { return spacings_from_quasienergies(nu, periodic).spacings; },
        py::arg("quasienergies"), py::arg("periodic") = true);
  m.def("fit_brody", [](const std::vector<double>& s) { return fit_brody(std::span<const double>(s)).beta; },
        py::arg("spacings"));
  m.def("ratio_stats",
        [](const std::vector<double>& nu, bool periodic) {
          return ratio_stats(spacings_from_quasienergies(nu, periodic).raw_gaps).mean_r;
        },
        py::arg("quasienergies"), py::arg("periodic") = true);

  m.def("expansion_weights",
        [](const FloquetEigensystem& eig, const std::vector<std::pair<double, double>>& angles, ExpansionBasis b) {
          const auto pts = points_from(angles);
          return expansion_weights(eig, pts, b);
        },
        py::arg("eigensystem"), py::arg("angles"), py::arg("basis") = ExpansionBasis::full);
  m.def("fractal_dimensions",
        [](const std::vector<double>& w, const std::vector<double>& q) { return fractal_dimensions(w, q).dimensions; },
        py::arg("weights"), py::arg("q"));
  m.def("averaged_dq",
        [](const FloquetEigensystem& eig, int n, const std::vector<double>& q, std::uint64_t seed) {
          const AveragedDq a = averaged_dq(eig, n, q, seed);
          return py::make_tuple(a.mean, a.stderr_of_mean);
        },
        py::arg("eigensystem"), py::arg("n_samples"), py::arg("q"), py::arg("seed") = 1);
  m.def("scaling_fit",
        [](const std::vector<double>& dims, const std::vector<double>& values, ScalingModel model) {
          if (dims.size() != values.size()) throw py::value_error("dimensions and values differ in length");
          std::vector<ScalingPoint> pts;
          for (std::size_t i = 0; i < dims.size(); ++i) pts.push_back({dims[i], values[i]});
          const ScalingFit f = scaling_fit(pts, model);
          return py::dict(py::arg("intercept") = f.intercept, py::arg("slope") = f.slope,
                          py::arg("residual") = f.residual);
        },
        py::arg("dimensions"), py::arg("values"), py::arg("model") = ScalingModel::linear_in_invlogN);

  m.def("chisq_pdf", &chisq_pdf, py::arg("x"), py::arg("nu"), py::arg("mean") = 1.0);
  m.def("chisq_cdf", &chisq_cdf, py::arg("x"), py::arg("nu"), py::arg("mean") = 1.0);
  m.def("pool_rescaled_coefficients",
        [](const FloquetEigensystem& eig, int n, std::uint64_t seed) {
          return pool_rescaled_coefficients(eig, n, seed).x;
        },
        py::arg("eigensystem"), py::arg("n_states"), py::arg("seed") = 1);
  m.def("distance_report",
        [](std::vector<double> x, double nu, bool literal) {
          const DistanceReport d = distance_report(make_pool(std::move(x)), nu, {literal});
          return py::dict(py::arg("skld") = d.skld, py::arg("rmse") = d.rmse, py::arg("bins") = d.bins,
                          py::arg("zero_excluded") = d.zero_excluded);
        },
        py::arg("x"), py::arg("nu") = 2.0, py::arg("literal_rmse") = false);
}
