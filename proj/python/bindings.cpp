// Python bindings for the kaon-decoherence core. Matrices cross the
// boundary as complex128 numpy arrays; states as DensityMatrix objects.

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <complex>
#include <string>
#include <vector>

#include "kaondec/entanglement.hpp"
#include "kaondec/evolution.hpp"
#include "kaondec/fit.hpp"
#include "kaondec/observables.hpp"

namespace py = pybind11;
using namespace kaondec;

namespace {

using ComplexArray =
    py::array_t<Complex, py::array::c_style | py::array::forcecast>;

CMatrix to_cmatrix(const ComplexArray& arr) {
  const py::buffer_info info = arr.request();
  if (info.ndim != 2 || info.shape[0] != info.shape[1])
    throw std::invalid_argument("expected a square 2-d array");
  const int dim = static_cast<int>(info.shape[0]);
  CMatrix m(dim);
  const Complex* data = static_cast<const Complex*>(info.ptr);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) m(r, c) = data[r * dim + c];
  return m;
}

py::array_t<Complex> to_array(const CMatrix& m) {
  py::array_t<Complex> arr({m.dim(), m.dim()});
  Complex* data = static_cast<Complex*>(arr.request().ptr);
  for (int r = 0; r < m.dim(); ++r)
    for (int c = 0; c < m.dim(); ++c) data[r * m.dim() + c] = m(r, c);
  return arr;
}

std::vector<CMatrix> to_cmatrices(const std::vector<ComplexArray>& arrs) {
  std::vector<CMatrix> out;
  out.reserve(arrs.size());
  for (const ComplexArray& a : arrs) out.push_back(to_cmatrix(a));
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "Decoherence of single and entangled neutral kaons: density-matrix "
      "evolution, strangeness asymmetries, entanglement measures, and "
      "decoherence-strength fits";

  py::enum_<Side>(m, "Side")
      .value("left", Side::left)
      .value("right", Side::right);

  py::enum_<Strangeness>(m, "Strangeness")
      .value("plus", Strangeness::plus)
      .value("minus", Strangeness::minus);

  py::enum_<ZetaKind>(m, "ZetaKind")
      .value("two_particle_min", ZetaKind::two_particle_min)
      .value("single_time", ZetaKind::single_time)
      .value("one_particle_sum", ZetaKind::one_particle_sum)
      .value("constant", ZetaKind::constant);

  py::enum_<CplearConfig>(m, "CplearConfig")
      .value("cfg_2cm_2cm", CplearConfig::cfg_2cm_2cm)
      .value("cfg_2cm_7cm", CplearConfig::cfg_2cm_7cm)
      .value("custom", CplearConfig::custom);

  py::class_<Constants>(m, "Constants")
      .def(py::init<>())
      .def_readwrite("gamma_L_over_gamma_S", &Constants::gamma_L_over_gamma_S)
      .def_readwrite("delta_m_over_gamma_S", &Constants::delta_m_over_gamma_S)
      .def_readwrite("gamma_S_mev", &Constants::gamma_S_mev)
      .def_readwrite("tau_S_per_cm", &Constants::tau_S_per_cm);
  m.def("load_constants", &load_constants, py::arg("path"),
        "Parse a key = value constants file");

  py::class_<KaonParams>(m, "KaonParams")
      .def(py::init([](double lambda_, double gamma_L, double delta_m,
                       double gamma_S) {
             KaonParams p{gamma_S, gamma_L, delta_m, lambda_};
             p.validate();
             return p;
           }),
           py::arg("lambda_") = 0.0,
           py::arg("gamma_L") = Constants{}.gamma_L_over_gamma_S,
           py::arg("delta_m") = Constants{}.delta_m_over_gamma_S,
           py::arg("gamma_S") = 1.0)
      .def_static("from_constants", &KaonParams::from_constants,
                  py::arg("constants"), py::arg("lambda_"))
      .def_readwrite("gamma_S", &KaonParams::gamma_S)
      .def_readwrite("gamma_L", &KaonParams::gamma_L)
      .def_readwrite("delta_m", &KaonParams::delta_m)
      .def_readwrite("lambda_", &KaonParams::lambda)
      .def_property_readonly("gamma", &KaonParams::gamma)
      .def_property_readonly("delta_gamma", &KaonParams::delta_gamma)
      .def("__repr__", [](const KaonParams& p) {
        return "KaonParams(lambda_=" + std::to_string(p.lambda) +
               ", gamma_L=" + std::to_string(p.gamma_L) +
               ", delta_m=" + std::to_string(p.delta_m) + ")";
      });

  py::class_<DensityMatrix>(m, "DensityMatrix")
      .def(py::init([](const ComplexArray& arr) {
             return DensityMatrix(to_cmatrix(arr));
           }),
           py::arg("matrix"))
      .def_property_readonly(
          "matrix", [](const DensityMatrix& d) { return to_array(d.mat()); })
      .def_property_readonly("dim", &DensityMatrix::dim)
      .def_property_readonly("trace", &DensityMatrix::trace_real)
      .def_property_readonly("normalized", &DensityMatrix::normalized)
      .def("__repr__", [](const DensityMatrix& d) {
        return "DensityMatrix(dim=" + std::to_string(d.dim()) +
               ", trace=" + std::to_string(d.trace_real()) + ")";
      });

  // matrix utilities
  m.def(
      "tensor",
      [](const ComplexArray& a, const ComplexArray& b) {
        return to_array(tensor(to_cmatrix(a), to_cmatrix(b)));
      },
      py::arg("a"), py::arg("b"), "Kronecker product of two 2x2 matrices");
  m.def(
      "partial_trace",
      [](const DensityMatrix& rho, Side traced_out) {
        return partial_trace(rho, traced_out);
      },
      py::arg("rho"), py::arg("traced_out"),
      "Trace out the named subsystem of a two-particle state");
  m.def(
      "partial_transpose",
      [](const DensityMatrix& rho, Side side) {
        return to_array(partial_transpose(rho, side));
      },
      py::arg("rho"), py::arg("side"));
  m.def(
      "herm_eigvals",
      [](const ComplexArray& arr) { return herm_eigvals(to_cmatrix(arr)); },
      py::arg("matrix"),
      "Eigenvalues of a Hermitian matrix, decreasing order");
  m.def(
      "spin_flip",
      [](const ComplexArray& arr) {
        return to_array(spin_flip(to_cmatrix(arr)));
      },
      py::arg("matrix"));

  // evolution
  py::class_<EffectiveHamiltonian>(m, "EffectiveHamiltonian")
      .def(py::init([](const ComplexArray& arr) {
             return EffectiveHamiltonian(to_cmatrix(arr));
           }),
           py::arg("matrix"))
      .def_static("one_particle", &EffectiveHamiltonian::one_particle)
      .def_static("two_particle", &EffectiveHamiltonian::two_particle)
      .def_property_readonly("matrix", [](const EffectiveHamiltonian& h) {
        return to_array(h.mat());
      });

  py::class_<LindbladOperatorSet>(m, "LindbladOperatorSet")
      .def(py::init([](const std::vector<ComplexArray>& ops) {
             return LindbladOperatorSet(to_cmatrices(ops));
           }),
           py::arg("ops"))
      .def_static(
          "from_projectors",
          [](const std::vector<ComplexArray>& projectors, double lambda_) {
            return LindbladOperatorSet::from_projectors(
                to_cmatrices(projectors), lambda_);
          },
          py::arg("projectors"), py::arg("lambda_"))
      .def_static("one_particle", &LindbladOperatorSet::one_particle)
      .def_static("two_particle", &LindbladOperatorSet::two_particle)
      .def_property_readonly("ops", [](const LindbladOperatorSet& s) {
        std::vector<py::array_t<Complex>> out;
        for (const CMatrix& a : s.ops()) out.push_back(to_array(a));
        return out;
      });

  m.def("singlet_state", &singlet_state,
        "The antisymmetric maximally entangled initial state");
  m.def("evolve_1p_analytic", &evolve_1p_analytic, py::arg("rho0"),
        py::arg("t"), py::arg("params"));
  m.def("evolve_2p_analytic", &evolve_2p_analytic, py::arg("t"),
        py::arg("params"));
  m.def("evolve_numeric", &evolve_numeric, py::arg("rho0"),
        py::arg("hamiltonian"), py::arg("ops"), py::arg("t"), py::arg("step"),
        "Fixed-step RK4 integration of the master equation");
  m.def("normalize", &normalize, py::arg("rho"));

  // observables
  py::class_<TwoTimeOutcome>(m, "TwoTimeOutcome")
      .def(py::init([](Strangeness s_left, Strangeness s_right, double t_left,
                       double t_right) {
             return TwoTimeOutcome{s_left, s_right, t_left, t_right};
           }),
           py::arg("s_left"), py::arg("s_right"), py::arg("t_left"),
           py::arg("t_right"))
      .def_readwrite("s_left", &TwoTimeOutcome::s_left)
      .def_readwrite("s_right", &TwoTimeOutcome::s_right)
      .def_readwrite("t_left", &TwoTimeOutcome::t_left)
      .def_readwrite("t_right", &TwoTimeOutcome::t_right)
      .def_property_readonly("dt", &TwoTimeOutcome::dt);

  py::class_<ZetaModel>(m, "ZetaModel")
      .def_static("min_time", &ZetaModel::min_time, py::arg("lambda_"))
      .def_static("single_time", &ZetaModel::single_time, py::arg("lambda_"))
      .def_static("sum_time", &ZetaModel::sum_time, py::arg("lambda_"))
      .def_static("constant_zeta", &ZetaModel::constant_zeta, py::arg("zeta"))
      .def_readonly("kind", &ZetaModel::kind)
      .def_readonly("lambda_", &ZetaModel::lambda)
      .def_readonly("zeta_const", &ZetaModel::zeta_const);

  m.def("zeta_eval", &zeta_eval, py::arg("model"), py::arg("t_l"),
        py::arg("t_r"));
  m.def("prob_lambda", &prob_lambda, py::arg("outcome"), py::arg("params"));
  m.def("prob_lambda_sequential", &prob_lambda_sequential, py::arg("outcome"),
        py::arg("params"),
        "Same probability via projection, one-particle QM evolution, "
        "projection");
  m.def("prob_zeta", &prob_zeta, py::arg("outcome"), py::arg("params"),
        py::arg("zeta"));
  m.def("asymmetry_qm", &asymmetry_qm, py::arg("dt"), py::arg("params"),
        py::arg("dt_scale") = 1.0);
  m.def("asymmetry_lambda", &asymmetry_lambda, py::arg("t_l"), py::arg("t_r"),
        py::arg("params"), py::arg("dt_scale") = 1.0);
  m.def("asymmetry_zeta", &asymmetry_zeta, py::arg("t_l"), py::arg("t_r"),
        py::arg("params"), py::arg("model"), py::arg("dt_scale") = 1.0);

  // entanglement
  py::class_<BellDecomposition>(m, "BellDecomposition")
      .def_readonly("w_minus", &BellDecomposition::w_minus)
      .def_readonly("w_plus", &BellDecomposition::w_plus)
      .def_readonly("w_phi_minus", &BellDecomposition::w_phi_minus)
      .def_readonly("w_phi_plus", &BellDecomposition::w_phi_plus)
      .def("sum", &BellDecomposition::sum);

  py::class_<SeparabilityResult>(m, "SeparabilityResult")
      .def_readonly("separable_candidate",
                    &SeparabilityResult::separable_candidate)
      .def_readonly("min_eigval", &SeparabilityResult::min_eigval);

  py::class_<EntanglementReport>(m, "EntanglementReport")
      .def_readonly("t", &EntanglementReport::t)
      .def_readonly("entropy", &EntanglementReport::entropy)
      .def_readonly("reduced_entropy_left",
                    &EntanglementReport::reduced_entropy_left)
      .def_readonly("reduced_entropy_right",
                    &EntanglementReport::reduced_entropy_right)
      .def_readonly("bell", &EntanglementReport::bell)
      .def_readonly("ppt_min_eigval", &EntanglementReport::ppt_min_eigval)
      .def_readonly("reduction_min_eigval",
                    &EntanglementReport::reduction_min_eigval)
      .def_readonly("concurrence", &EntanglementReport::concurrence)
      .def_readonly("fraction", &EntanglementReport::fraction)
      .def_readonly("eof", &EntanglementReport::eof)
      .def_readonly("zeta", &EntanglementReport::zeta)
      .def_readonly("loss_concurrence", &EntanglementReport::loss_concurrence)
      .def_readonly("loss_eof", &EntanglementReport::loss_eof);

  m.def("binary_entropy", &binary_entropy, py::arg("x"));
  m.def("vn_entropy", &vn_entropy, py::arg("rho"),
        "Von Neumann entropy in bits");
  m.def("reduced_entropies", &reduced_entropies, py::arg("rho"));
  m.def("bell_decompose", &bell_decompose, py::arg("rho"));
  m.def("ppt_test", &ppt_test, py::arg("rho"));
  m.def("reduction_test", &reduction_test, py::arg("rho"));
  m.def("concurrence", &concurrence, py::arg("rho"));
  m.def("concurrence_roots", &concurrence_roots, py::arg("rho"));
  m.def("fully_entangled_fraction", &fully_entangled_fraction, py::arg("rho"));
  m.def("eof", &eof, py::arg("rho"), "Entanglement of formation");
  m.def("eof_from_concurrence", &eof_from_concurrence, py::arg("c"));
  m.def("eof_lower_bound_from_fraction", &eof_lower_bound_from_fraction,
        py::arg("f"));
  m.def("entanglement_report", &entanglement_report, py::arg("t"),
        py::arg("params"));
  m.def("sweep_report", &sweep_report, py::arg("t_grid"), py::arg("params"));

  // fit
  py::class_<AsymmetryRecord>(m, "AsymmetryRecord")
      .def(py::init([](double t_l, double t_r, double a_meas, double sigma) {
             return AsymmetryRecord{t_l, t_r, a_meas, sigma};
           }),
           py::arg("t_l"), py::arg("t_r"), py::arg("a_meas"), py::arg("sigma"))
      .def_readwrite("t_l", &AsymmetryRecord::t_l)
      .def_readwrite("t_r", &AsymmetryRecord::t_r)
      .def_readwrite("a_meas", &AsymmetryRecord::a_meas)
      .def_readwrite("sigma", &AsymmetryRecord::sigma);

  py::class_<AsymmetryDataset>(m, "AsymmetryDataset")
      .def(py::init<>())
      .def_readwrite("records", &AsymmetryDataset::records)
      .def_readwrite("label", &AsymmetryDataset::label)
      .def_readwrite("config", &AsymmetryDataset::config)
      .def("validate", &AsymmetryDataset::validate)
      .def("min_time", &AsymmetryDataset::min_time);

  m.def("load_dataset_csv", &load_dataset_csv, py::arg("path"));
  m.def("save_dataset_csv", &save_dataset_csv, py::arg("path"),
        py::arg("dataset"));

  py::class_<FitOptions>(m, "FitOptions")
      .def(py::init<>())
      .def_readwrite("lambda_max", &FitOptions::lambda_max)
      .def_readwrite("dt_scale", &FitOptions::dt_scale)
      .def_readwrite("coarse_points", &FitOptions::coarse_points);

  py::class_<FitResult>(m, "FitResult")
      .def_readonly("param", &FitResult::param)
      .def_readonly("lambda_hat", &FitResult::lambda_hat)
      .def_readonly("lambda_err_lo", &FitResult::lambda_err_lo)
      .def_readonly("lambda_err_hi", &FitResult::lambda_err_hi)
      .def_readonly("zeta_hat", &FitResult::zeta_hat)
      .def_readonly("zeta_err_lo", &FitResult::zeta_err_lo)
      .def_readonly("zeta_err_hi", &FitResult::zeta_err_hi)
      .def_readonly("chi2_min", &FitResult::chi2_min)
      .def_readonly("ndf", &FitResult::ndf)
      .def_readonly("boundary", &FitResult::boundary)
      .def_readonly("label", &FitResult::label)
      .def_readonly("per_config", &FitResult::per_config)
      .def("to_json", &fit_result_to_json, py::arg("gamma_S_mev"),
           py::arg("indent") = 2);

  m.def("chi2", &chi2, py::arg("dataset"), py::arg("params"), py::arg("model"),
        py::arg("dt_scale") = 1.0);
  m.def("fit_lambda", &fit_lambda, py::arg("dataset"), py::arg("params"),
        py::arg("kind"), py::arg("options") = FitOptions{});
  m.def("average_configs", &average_configs, py::arg("results"));
  m.def("synth_dataset", &synth_dataset, py::arg("params"), py::arg("model"),
        py::arg("t_grid"), py::arg("sigma"), py::arg("seed"),
        py::arg("dt_scale") = 1.0);
  m.def("config_times", &config_times, py::arg("config"),
        py::arg("tau_s_per_cm") = Constants{}.tau_S_per_cm);
}
