#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "birkhoff/core/checks.hpp"
#include "birkhoff/core/error.hpp"
#include "birkhoff/harness/batch_io.hpp"
#include "birkhoff/harness/config.hpp"
#include "birkhoff/harness/experiments.hpp"
#include "birkhoff/samplers/exact.hpp"
#include "birkhoff/samplers/gibbs.hpp"
#include "birkhoff/statistics/distances.hpp"
#include "birkhoff/statistics/mixing.hpp"
#include "birkhoff/statistics/spectral.hpp"
#include "birkhoff/volumes/volumes.hpp"

namespace py = pybind11;
using namespace birkhoff;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

py::array_t<double> to_array(const SampleBatch& batch) {
  const auto n = static_cast<py::ssize_t>(batch.n());
  py::array_t<double> out({static_cast<py::ssize_t>(batch.size()), n, n});
  double* dst = out.mutable_data();
  for (const auto& m : batch) dst = std::copy(m.entries().begin(), m.entries().end(), dst);
  return out;
}

SquareMatrix to_matrix(const Array& a) {
  if (a.ndim() != 2 || a.shape(0) != a.shape(1)) throw PreconditionError("expected a square 2-D array");
  const auto n = static_cast<std::size_t>(a.shape(0));
  return SquareMatrix(n, std::vector<double>(a.data(), a.data() + n * n));
}

std::vector<double> as_vector(const EmpiricalDistribution& d) { return {d.values().begin(), d.values().end()}; }

ChainPlan plan(std::size_t chains, unsigned workers) { return ChainPlan{chains, workers}; }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Uniform random doubly stochastic matrices: samplers, statistics and volumes";

  // Translators run most recent first: register the base class first.
  py::register_exception<Error>(m, "BirkhoffError", PyExc_RuntimeError);
  py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
  py::register_exception<harness::BatchFormatError>(m, "BatchFormatError", PyExc_ValueError);

  m.def(
      "gibbs_chain",
      [](std::size_t n, std::size_t count, std::uint64_t seed, std::optional<std::uint64_t> burn_in,
         std::optional<std::uint64_t> spacing, std::uint64_t stream_index) {
        auto cfg = GibbsConfig::defaults(n);
        if (burn_in) cfg.burn_in = *burn_in;
        if (spacing) cfg.spacing = *spacing;
        py::gil_scoped_release release;
        return gibbs_chain(cfg, count, seed, stream_index);
      },
      py::arg("n"), py::arg("count"), py::arg("seed"), py::arg("burn_in") = py::none(),
      py::arg("spacing") = py::none(), py::arg("stream_index") = 0);
  m.def(
      "rejection_exact",
      [](std::size_t n, std::size_t count, std::uint64_t seed, std::size_t chains, unsigned workers) {
        py::gil_scoped_release release;
        auto r = rejection_exact(n, count, seed, plan(chains, workers));
        return std::make_tuple(std::move(r.batch), r.proposals, r.accepted);
      },
      py::arg("n"), py::arg("count"), py::arg("seed"), py::arg("chains") = 1, py::arg("workers") = 1);
  m.def("vertex_mixture", &vertex_mixture, py::arg("n"), py::arg("count"), py::arg("seed"));

  py::class_<SampleBatch>(m, "SampleBatch")
      .def_property_readonly("n", &SampleBatch::n)
      .def("__len__", &SampleBatch::size)
      .def_property_readonly("sampler", [](const SampleBatch& b) { return std::string(to_string(b.provenance().sampler)); })
      .def_property_readonly("seed", [](const SampleBatch& b) { return b.provenance().seed; })
      .def("to_numpy", &to_array);

  m.def(
      "check_doubly_stochastic",
      [](const Array& a, double tol) {
        const auto r = check_doubly_stochastic(to_matrix(a), tol);
        return py::dict(py::arg("ok") = r.ok, py::arg("max_violation") = r.max_violation);
      },
      py::arg("matrix"), py::arg("tol") = 1e-8);
  m.def(
      "singular_values", [](const Array& a) { return as_vector(singular_values(to_matrix(a))); },
      py::arg("matrix"));
  m.def(
      "mixing_profile",
      [](const Array& a, std::size_t t_max) {
        const auto r = mixing_profile(to_matrix(a), t_max);
        return py::dict(py::arg("d") = r.d, py::arg("d_row_mean") = r.d_row_mean,
                        py::arg("mixing_time") = r.mixing_time);
      },
      py::arg("matrix"), py::arg("t_max"));
  m.def(
      "ks_exp1",
      [](std::vector<double> x) { return ks_distance(EmpiricalDistribution(std::move(x)), ReferenceLaw::exp1()); },
      py::arg("values"));

  m.def(
      "uniform_sum_density", [](const std::vector<double>& bounds, double r) { return uniform_sum_density(bounds, r); },
      py::arg("bounds"), py::arg("r"));
  m.def("canfield_mckay_birkhoff", &canfield_mckay_birkhoff, py::arg("n"));
  m.def(
      "canfield_mckay_rect", [](std::size_t a, std::size_t b) { return canfield_mckay_rect(a, b); },
      py::arg("m"), py::arg("n"));
  m.def(
      "mc_volume",
      [](std::vector<double> rows, std::vector<double> cols, std::uint64_t proposals, std::uint64_t seed) {
        py::gil_scoped_release release;
        const auto v = mc_volume(MarginSpec(std::move(rows), std::move(cols)), proposals, seed);
        return std::make_pair(v.log_volume, v.std_error);
      },
      py::arg("row_sums"), py::arg("col_sums"), py::arg("proposals"), py::arg("seed"));

  m.def(
      "load_batch",
      [](const std::string& path) {
        auto loaded = harness::load_batch(path);
        return std::make_pair(std::move(loaded.batch), loaded.warnings);
      },
      py::arg("path"));
  m.def(
      "persist_batch", [](const SampleBatch& b, const std::string& path) { harness::persist_batch(b, path); },
      py::arg("batch"), py::arg("path"));

  m.def("config_schema", [] { return harness::config_schema().dump(); });
  m.def(
      "run_experiment",
      [](const std::string& config_json) {
        const auto cfg = harness::config_from_json(nlohmann::json::parse(config_json));
        harness::RunReport report;
        {
          py::gil_scoped_release release;
          report = harness::run_experiment(cfg);
        }
        return report.to_json().dump();
      },
      py::arg("config_json"));
}
