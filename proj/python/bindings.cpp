// Python bindings for the estimation core.  The module mirrors the C++
// surface closely: params in/out as (means, weights) pairs, samples as
// flat float lists.

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "vtmix/adjustment.hpp"
#include "vtmix/cli.hpp"
#include "vtmix/estimators.hpp"
#include "vtmix/harness.hpp"
#include "vtmix/mle.hpp"
#include "vtmix/model.hpp"
#include "vtmix/partition.hpp"

namespace py = pybind11;
using namespace vtmix;

namespace {

Algorithm algorithm_from_string(const std::string& name) {
    if (name == "vt") return Algorithm::VT;
    if (name == "va1") return Algorithm::VA1;
    if (name == "va2") return Algorithm::VA2;
    if (name == "em") return Algorithm::EM;
    throw std::invalid_argument("unknown algorithm: " + name);
}

RunConfig make_run_config(double step_tol, int max_iter, bool weights_known,
                          const std::string& mode) {
    RunConfig rc;
    rc.step_tol = step_tol;
    rc.max_iter = max_iter;
    rc.weights_known = weights_known;
    if (mode == "isolated")
        rc.mode = AdjustmentMode::ISOLATED;
    else if (mode == "exact")
        rc.mode = AdjustmentMode::EXACT;
    else
        throw std::invalid_argument("mode must be 'exact' or 'isolated'");
    return rc;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Gaussian-mixture estimation: hard-assignment training, its "
              "adjusted variants, soft refitting, and direct likelihood "
              "maximization";

    py::class_<MixtureParams>(m, "MixtureParams")
        .def(py::init<std::vector<double>, std::vector<double>>(),
             py::arg("means"), py::arg("weights"))
        .def_readonly("means", &MixtureParams::means)
        .def_readonly("weights", &MixtureParams::weights)
        .def("__repr__", [](const MixtureParams& p) {
            std::string s = "MixtureParams(means=[";
            for (std::size_t i = 0; i < p.means.size(); ++i)
                s += (i ? ", " : "") + format_full(p.means[i]);
            s += "], weights=[";
            for (std::size_t i = 0; i < p.weights.size(); ++i)
                s += (i ? ", " : "") + format_full(p.weights[i]);
            return s + "])";
        });

    m.def(
        "simulate",
        [](const MixtureParams& params, std::size_t n, std::uint64_t seed,
           std::uint64_t replication) {
            return simulate_sample(params, n, SeedSpec{seed, replication})
                .values;
        },
        py::arg("params"), py::arg("n"), py::arg("seed"),
        py::arg("replication") = 0,
        "Deterministic sample draw keyed by (seed, replication)");

    m.def(
        "log_likelihood",
        [](const MixtureParams& params, const std::vector<double>& values) {
            return log_likelihood(params, Sample{values});
        },
        py::arg("params"), py::arg("values"));

    m.def("mixture_pdf", &mixture_pdf, py::arg("params"), py::arg("x"));

    m.def(
        "decision_boundaries",
        [](const MixtureParams& params) {
            return voronoi_partition(params).breakpoints;
        },
        py::arg("params"),
        "Interior breakpoints of the highest-weighted-density partition");

    m.def("pairwise_boundary", &pairwise_boundary, py::arg("mean_i"),
          py::arg("mean_j"), py::arg("weight_i"), py::arg("weight_j"),
          "Crossing point of two weighted unit-variance normal densities");

    m.def(
        "adjustment_delta",
        [](const MixtureParams& params, const std::string& mode) {
            return adjustment_delta(params,
                                    mode == "isolated"
                                        ? AdjustmentMode::ISOLATED
                                        : AdjustmentMode::EXACT);
        },
        py::arg("params"), py::arg("mode") = "exact",
        "Per-component mean corrections added by the first adjusted variant");

    m.def(
        "weight_correction",
        [](const MixtureParams& params) { return weight_correction(params); },
        py::arg("params"),
        "Per-component weight corrections (they sum to zero)");

    m.def(
        "step",
        [](const std::string& algorithm, const MixtureParams& params,
           const std::vector<double>& values, bool weights_known,
           const std::string& mode, bool vt_correct_weights) {
            Sample s{values};
            switch (algorithm_from_string(algorithm)) {
                case Algorithm::VT:
                    return vt_step(params, s, weights_known,
                                   vt_correct_weights);
                case Algorithm::VA1:
                    return va1_step(params, s, weights_known,
                                    mode == "isolated"
                                        ? AdjustmentMode::ISOLATED
                                        : AdjustmentMode::EXACT);
                case Algorithm::VA2:
                    return va2_step(params, s, weights_known,
                                    mode == "isolated"
                                        ? AdjustmentMode::ISOLATED
                                        : AdjustmentMode::EXACT);
                case Algorithm::EM:
                    return em_step(params, s, weights_known);
            }
            throw std::logic_error("unreachable");
        },
        py::arg("algorithm"), py::arg("params"), py::arg("values"),
        py::arg("weights_known") = true, py::arg("mode") = "exact",
        py::arg("vt_correct_weights") = false,
        "One update of the named estimator");

    m.def(
        "estimate",
        [](const std::string& algorithm, const std::vector<double>& values,
           const MixtureParams& init, double step_tol, int max_iter,
           bool weights_known, const std::string& mode,
           bool vt_correct_weights) {
            RunConfig rc =
                make_run_config(step_tol, max_iter, weights_known, mode);
            rc.vt_weight_correction = vt_correct_weights;
            EstimationResult r = run_estimator(
                algorithm_from_string(algorithm), Sample{values}, init, rc);
            py::dict d;
            d["params"] = r.params;
            d["iterations"] = r.iterations;
            d["converged"] = r.converged;
            d["total_seconds"] = r.total_seconds;
            return d;
        },
        py::arg("algorithm"), py::arg("values"), py::arg("init"),
        py::arg("step_tol") = 1e-3, py::arg("max_iter") = 1000,
        py::arg("weights_known") = true, py::arg("mode") = "exact",
        py::arg("vt_correct_weights") = false,
        "Iterate the named estimator to the step-size stopping rule");

    m.def(
        "mle",
        [](const std::vector<double>& values, const MixtureParams& init,
           bool weights_known) {
            MleResult r = maximize_loglik(Sample{values}, init, weights_known,
                                          Tolerance{1e-9, 0.0, 20000});
            py::dict d;
            d["params"] = r.params;
            d["loglik"] = r.loglik;
            d["converged"] = r.converged;
            d["evaluations"] = r.evaluations;
            return d;
        },
        py::arg("values"), py::arg("init"), py::arg("weights_known") = true,
        "Direct likelihood maximization from the given start");

    m.def(
        "run_experiment",
        [](const std::string& preset, std::uint64_t seed, int replications,
           int sample_size, int workers, bool include_mle,
           bool include_timings) {
            ExperimentConfig cfg = table_preset(preset);
            cfg.base_seed = seed;
            if (replications > 0) cfg.replications = replications;
            if (sample_size > 0) cfg.sample_size = sample_size;
            cfg.workers = workers;
            cfg.include_mle = include_mle;
            ExperimentReport report = run_experiment(std::move(cfg));
            py::dict d;
            d["csv"] = render_report(report, ReportFormat::CSV,
                                     include_timings);
            d["markdown"] = render_report(report, ReportFormat::MARKDOWN,
                                          include_timings);
            py::dict cols;
            for (const auto& col : report.columns) {
                py::dict c;
                py::list theta_means;
                for (const auto& t : col.theta) theta_means.append(t.mean);
                c["theta_mean"] = theta_means;
                if (col.weight) c["weight_mean"] = col.weight->mean;
                c["l2_mean"] = col.l2.mean;
                if (col.iterations)
                    c["iterations_mean"] = col.iterations->mean;
                c["max_iter_hits"] = col.max_iter_hits;
                cols[py::str(col.name)] = c;
            }
            d["columns"] = cols;
            return d;
        },
        py::arg("preset"), py::arg("seed"), py::arg("replications") = 0,
        py::arg("sample_size") = 0, py::arg("workers") = 0,
        py::arg("include_mle") = true, py::arg("include_timings") = true,
        "Run a named preset study and return the rendered reports");

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::vector<const char*> argv;
            argv.push_back("vtmix");
            for (const auto& a : args) argv.push_back(a.c_str());
            return run_cli(static_cast<int>(argv.size()), argv.data());
        },
        py::arg("args"), "Drive the command-line front end in-process");
}
