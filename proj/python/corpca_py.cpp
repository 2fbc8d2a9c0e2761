#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "corpca/bench.hpp"
#include "corpca/estimators.hpp"
#include "corpca/spectrum.hpp"
#include "corpca/theory.hpp"

namespace py = pybind11;
using namespace corpca;

namespace {

BasisMatrix as_basis(const RealMatrix& m) { return BasisMatrix(m); }

py::dict stats_dict(const ClusterStats& s) {
  py::dict d;
  d["vartheta"] = s.vartheta;
  d["g_eff"] = s.g_eff;
  d["chi"] = s.chi;
  d["f"] = s.f;
  return d;
}

py::dict summary_dict(const MethodSummary& s) {
  py::dict d;
  d["mean_se"] = s.mean_se;
  d["mean_time_ms"] = s.mean_time_ms;
  d["successes"] = s.successes;
  d["failure_count"] = s.failure_count;
  return d;
}

py::dict record_dict(const TrialRecord& r) {
  py::dict d;
  d["trial"] = r.trial;
  d["method"] = method_name(r.method);
  d["se"] = r.se ? py::cast(*r.se) : py::none();
  d["time_ms"] = r.time_ms;
  d["vartheta_hat"] = r.vartheta_hat;
  d["rank_hat"] = r.rank_hat;
  d["q_measured"] = r.q_measured;
  d["seed"] = r.seed;
  d["cluster_sizes"] = r.cluster_sizes;
  d["failure"] = r.failure;
  return d;
}

}  // namespace

PYBIND11_MODULE(corpca, m) {
  m.doc() = "Subspace estimation under sparse data-dependent noise";

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ParameterError>(m, "ParameterError", error);
  py::register_exception<DimensionError>(m, "DimensionError", error);
  py::register_exception<BasisError>(m, "BasisError", error);
  py::register_exception<OrderError>(m, "OrderError", error);
  py::register_exception<GapError>(m, "GapError", error);
  py::register_exception<EmptySubspaceError>(m, "EmptySubspaceError", error);
  py::register_exception<NoClusterError>(m, "NoClusterError", error);
  py::register_exception<InsufficientDataError>(m, "InsufficientDataError", error);
  py::register_exception<CapacityError>(m, "CapacityError", error);
  py::register_exception<ScheduleError>(m, "ScheduleError", error);
  py::register_exception<ParseError>(m, "ParseError", error);

  m.def(
      "sym_eig",
      [](const RealMatrix& a) {
        auto eig = sym_eig(a);
        return py::make_tuple(eig.eigenvalues, eig.eigenvectors.mat());
      },
      py::arg("m"), "Eigenvalues (descending) and eigenvectors of a symmetric matrix.");
  m.def(
      "subspace_error",
      [](const RealMatrix& p_hat, const RealMatrix& p) { return subspace_error(as_basis(p_hat), as_basis(p)); },
      py::arg("p_hat"), py::arg("p"), "||(I - Phat Phat^T) P|| for orthonormal Phat, P.");
  m.def("spectral_norm", &spectral_norm, py::arg("m"));
  m.def("empirical_covariance", &empirical_covariance, py::arg("y"));

  m.def(
      "g_partition",
      [](const std::vector<double>& eigs, double g) {
        const auto p = g_partition(eigs, g);
        return py::make_tuple(p.sizes(), stats_dict(partition_stats(p, eigs)));
      },
      py::arg("eigenvalues"), py::arg("g"), "Cluster sizes and statistics of the greedy g-partition.");

  m.def(
      "simple_evd", [](const RealMatrix& y, double thresh) { return simple_evd(y, {thresh}).mat(); }, py::arg("y"),
      py::arg("thresh"));
  m.def(
      "cluster_evd",
      [](const RealMatrix& y, Index alpha, double g_hat, double thresh) {
        MatrixBlockSource source(y);
        const auto res = cluster_evd(source, {alpha, g_hat, thresh});
        return py::make_tuple(res.p_hat.mat(), res.cluster_sizes);
      },
      py::arg("y"), py::arg("alpha"), py::arg("g_hat"), py::arg("thresh"),
      "Cluster-wise EVD over consecutive alpha-column blocks of y; returns (P_hat, cluster_sizes).");

  py::class_<BoundInputs>(m, "BoundInputs")
      .def(py::init<>())
      .def_readwrite("n", &BoundInputs::n)
      .def_readwrite("r", &BoundInputs::r)
      .def_readwrite("r_k", &BoundInputs::r_k)
      .def_readwrite("f", &BoundInputs::f)
      .def_readwrite("g_plus", &BoundInputs::g_plus)
      .def_readwrite("chi_plus", &BoundInputs::chi_plus)
      .def_readwrite("q", &BoundInputs::q)
      .def_readwrite("eta", &BoundInputs::eta)
      .def_readwrite("zeta", &BoundInputs::zeta)
      .def_readwrite("vartheta", &BoundInputs::vartheta);
  m.def("alpha0_simple", &alpha0_simple);
  m.def("beta_frac_simple", &beta_frac_simple);
  m.def("alpha0_cluster", &alpha0_cluster);
  m.def("beta_frac_cluster", &beta_frac_cluster);

  m.def(
      "support_schedule",
      [](Index n, Index alpha, Index s, Index rho, Index beta_tilde, Index start, bool wrap) {
        return generate_support_schedule(n, alpha, s, rho, beta_tilde, start, wrap).supports();
      },
      py::arg("n"), py::arg("alpha"), py::arg("s"), py::arg("rho"), py::arg("beta_tilde"), py::arg("start") = 0,
      py::arg("wrap") = false, "Moving-block supports as lists of 0-based indices.");

  m.def(
      "run_trial",
      [](const std::filesystem::path& config, Index trial) {
        py::list out;
        for (const auto& r : run_trial(parse_config(config), trial)) out.append(record_dict(r));
        return out;
      },
      py::arg("config"), py::arg("trial"));
  m.def(
      "run_experiment",
      [](const std::filesystem::path& config, std::optional<Index> trials, std::optional<std::uint64_t> seed,
         unsigned threads) {
        ExperimentConfig cfg = parse_config(config);
        if (trials) cfg.trials = *trials;
        if (seed) cfg.base_seed = *seed;
        ExperimentResult res;
        {
          py::gil_scoped_release release;
          res = run_experiment(cfg, {threads, std::nullopt});
        }
        py::dict summary;
        summary["evd"] = summary_dict(res.summary.evd);
        summary["cluster_evd"] = summary_dict(res.summary.cluster_evd);
        py::list records;
        for (const auto& r : res.records) records.append(record_dict(r));
        return py::make_tuple(records, summary);
      },
      py::arg("config"), py::arg("trials") = py::none(), py::arg("seed") = py::none(), py::arg("threads") = 0);
}
