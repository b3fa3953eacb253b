#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "seqmeas/chain.hpp"
#include "seqmeas/conditional_model.hpp"
#include "seqmeas/joint_model.hpp"
#include "seqmeas/mpur.hpp"
#include "seqmeas/presets.hpp"
#include "seqmeas/sampling.hpp"
#include "seqmeas/spin_reference.hpp"

namespace py = pybind11;
using namespace seqmeas;

namespace {

MeasurementStage make_stage(const Observable& obs, double sigma, std::string label) {
  return MeasurementStage{obs, Pointer(sigma), std::move(label)};
}

py::dict stats_dict(const OutcomeStats& s) {
  py::dict d;
  d["mean"] = s.mean;
  d["variance"] = s.variance;
  d["extracted_system_variance"] = s.extracted_system_variance;
  d["clamped"] = s.clamped;
  d["sub_probe_width"] = s.sub_probe_width;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Sequential indirect measurements with Gaussian pointers";
  m.attr("__version__") = SEQMEAS_VERSION;

  py::register_exception<Error>(m, "SeqmeasError", PyExc_RuntimeError);

  py::class_<Observable>(m, "Observable")
      .def(py::init<const ComplexMatrix&, double>(), py::arg("matrix"), py::arg("gap_tol") = kDegeneracyTol)
      .def_property_readonly("dim", &Observable::dim)
      .def_property_readonly("matrix", &Observable::matrix)
      .def_property_readonly("levels", &Observable::levels)
      .def_property_readonly("projectors", &Observable::projectors);

  py::class_<PureState>(m, "PureState")
      .def(py::init<ComplexVector>(), py::arg("amplitudes"))
      .def_static("normalized", &PureState::normalized)
      .def_property_readonly("amplitudes", &PureState::amplitudes);

  py::class_<DensityMatrix>(m, "DensityMatrix")
      .def(py::init<const ComplexMatrix&>(), py::arg("matrix"))
      .def_static("from_pure", &DensityMatrix::from_pure)
      .def_property_readonly("dim", &DensityMatrix::dim)
      .def_property_readonly("normalized_matrix", &DensityMatrix::normalized_matrix)
      .def_property_readonly("log_trace", &DensityMatrix::log_trace)
      .def("matrix", &DensityMatrix::matrix);

  py::class_<MeasurementStage>(m, "Stage")
      .def(py::init(&make_stage), py::arg("observable"), py::arg("sigma"), py::arg("label") = "")
      .def_property_readonly("sigma", &MeasurementStage::sigma)
      .def_property_readonly("dim", &MeasurementStage::dim)
      .def_readonly("observable", &MeasurementStage::observable)
      .def_readonly("label", &MeasurementStage::label);

  auto presets_m = m.def_submodule("presets");
  presets_m.def("spin_x", &presets::spin_x);
  presets_m.def("spin_y", &presets::spin_y);
  presets_m.def("spin_z", &presets::spin_z);
  presets_m.def("ket_up", &presets::ket_up);
  presets_m.def("ket_down", &presets::ket_down);
  presets_m.def("ket_plus", &presets::ket_plus);
  presets_m.def("ket_minus", &presets::ket_minus);

  m.def("variance_of", py::overload_cast<const Observable&, const DensityMatrix&>(&variance_of));
  m.def("kraus_at", [](const MeasurementStage& s, double x) { return kraus_at(s, x).matrix; });
  m.def("conditional_state", &conditional_state);

  m.def(
      "joint_model",
      [](const DensityMatrix& rho0, const MeasurementStage& a, const MeasurementStage& b) {
        const JointModelResult r = joint_model(rho0, a, b);
        py::dict d;
        d["rho1"] = r.rho1;
        d["mean_x1"] = r.mean_x1;
        d["var_x1"] = r.var_x1;
        d["mean_x2"] = r.mean_x2;
        d["var_x2"] = r.var_x2;
        d["var_A_rho0"] = r.var_A_rho0;
        d["var_B_rho1"] = r.var_B_rho1;
        d["var_B_rho0"] = r.var_B_rho0;
        return d;
      },
      py::arg("rho0"), py::arg("stage1"), py::arg("stage2"));

  m.def(
      "forward_stats",
      [](const DensityMatrix& rho0, const MeasurementStage& a, const MeasurementStage& b, double x1) {
        return stats_dict(forward_stats(rho0, a, b, x1));
      },
      py::arg("rho0"), py::arg("stage1"), py::arg("stage2"), py::arg("x1"));
  m.def(
      "backward_stats",
      [](const DensityMatrix& rho0, const MeasurementStage& a, const MeasurementStage& b, double x2) {
        return stats_dict(backward_stats(rho0, a, b, x2));
      },
      py::arg("rho0"), py::arg("stage1"), py::arg("stage2"), py::arg("x2"));
  m.def(
      "forward_pdf",
      [](const DensityMatrix& rho0, const MeasurementStage& a, const MeasurementStage& b, double x1,
         const std::vector<double>& xs) {
        const ConditionalDensity cd = forward_density(rho0, a, b, x1);
        std::vector<double> out;
        out.reserve(xs.size());
        for (double x : xs) out.push_back(cd.density.pdf(x));
        return out;
      },
      py::arg("rho0"), py::arg("stage1"), py::arg("stage2"), py::arg("x1"), py::arg("x2"));
  m.def(
      "backward_pdf",
      [](const DensityMatrix& rho0, const MeasurementStage& a, const MeasurementStage& b, double x2,
         const std::vector<double>& xs) {
        const ConditionalDensity cd = backward_density(rho0, a, b, x2);
        std::vector<double> out;
        out.reserve(xs.size());
        for (double x : xs) out.push_back(cd.density.pdf(x));
        return out;
      },
      py::arg("rho0"), py::arg("stage1"), py::arg("stage2"), py::arg("x2"), py::arg("x1"));
  m.def("log_joint", &log_joint);

  py::class_<MeasurementChain>(m, "Chain")
      .def(py::init<DensityMatrix, std::vector<MeasurementStage>>(), py::arg("initial"), py::arg("stages"))
      .def("__len__", &MeasurementChain::size)
      .def_property_readonly("dim", &MeasurementChain::dim)
      .def("stage", &MeasurementChain::stage);

  // fixed outcomes as a list; the entry at free_stage is ignored
  m.def(
      "conditional_stats_k",
      [](const MeasurementChain& chain, std::size_t free_stage, std::vector<double> outcomes) {
        const ChainResult r = conditional_stats_k(chain, ChainQuery{free_stage, std::move(outcomes)});
        py::dict d;
        d["mean"] = r.mean;
        d["variance"] = r.variance;
        d["extracted_variance"] = r.extracted_variance;
        d["clamped"] = r.clamped;
        d["sub_probe_width"] = r.sub_probe_width;
        return d;
      },
      py::arg("chain"), py::arg("free_stage"), py::arg("outcomes"));
  m.def("chain_log_likelihood",
        [](const MeasurementChain& chain, const std::vector<double>& xs) { return chain_log_likelihood(chain, xs); });

  m.def(
      "mc_conditional_variance",
      [](const MeasurementChain& chain, std::size_t free_stage, std::vector<double> outcomes, std::size_t samples,
         std::uint64_t seed) {
        oracle::SamplerConfig cfg;
        cfg.samples = samples;
        cfg.seed = seed;
        const oracle::McConditional mc =
            oracle::mc_conditional_variance(chain, ChainQuery{free_stage, std::move(outcomes)}, cfg);
        py::dict d;
        d["estimate"] = mc.estimate;
        d["standard_error"] = mc.standard_error;
        d["mean"] = mc.mean;
        d["acceptance"] = mc.acceptance;
        return d;
      },
      py::arg("chain"), py::arg("free_stage"), py::arg("outcomes"), py::arg("samples") = 100'000,
      py::arg("seed") = 0);

  m.def(
      "mpur_check",
      [](const PureState& psi, const Observable& a, const Observable& b) {
        const MpurReport r = mpur_check(psi, a, b);
        py::dict d;
        d["lhs_sum"] = r.lhs_sum;
        d["r_a"] = r.r_a;
        d["r_b"] = r.r_b;
        d["bound"] = r.bound;
        d["satisfied"] = r.satisfied;
        return d;
      },
      py::arg("psi"), py::arg("a"), py::arg("b"));

  auto spin = m.def_submodule("spin", "Closed forms for the spin-1/2 S_z then S_x example");
  spin.def("var_sx_rho1", &spin_reference::var_sx_rho1_closed, py::arg("sigma1"));
  spin.def("var_sx_given_sz", &spin_reference::var_sx_given_sz_closed, py::arg("sigma1"), py::arg("x1"));
  spin.def("var_sz_given_sx", &spin_reference::var_sz_given_sx_closed, py::arg("sigma1"), py::arg("sigma2"),
           py::arg("x2"));
}
