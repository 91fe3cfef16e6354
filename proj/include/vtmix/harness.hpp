#ifndef VTMIX_HARNESS_HPP
#define VTMIX_HARNESS_HPP

// Replicated simulation studies: run every estimator (plus the direct
// likelihood maximizer) on R independently seeded samples, aggregate
// mean +- std summaries, and render them as CSV or Markdown tables.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "vtmix/estimators.hpp"
#include "vtmix/mle.hpp"
#include "vtmix/model.hpp"

namespace vtmix {

enum class InitRegime { ARBITRARY, TRUE_PARAMS, BOUNDARY };

struct ExperimentConfig {
    std::string label = "experiment";
    MixtureParams true_params;
    std::vector<double> init_means;
    std::vector<double> init_weights;  // starting guess when weights are estimated
    InitRegime regime = InitRegime::ARBITRARY;
    bool weights_known = true;
    int replications = 1000;
    int sample_size = 1000;
    std::uint64_t base_seed = 0;
    std::vector<Algorithm> algorithms{Algorithm::VT, Algorithm::VA1,
                                      Algorithm::VA2, Algorithm::EM};
    bool include_mle = true;
    RunConfig run;
    int workers = 0;  // 0: use the hardware thread count
};

// Throws std::invalid_argument on inconsistent sizes, a BOUNDARY init whose
// implied decision boundary strays more than 1e-3 from the true one, or a
// VA2 request with K != 2.  Fills empty init_weights with the uniform
// vector when weights are estimated.
void validate_experiment_config(ExperimentConfig& config);

// The named presets "table1".."table6": the two-component reference model
// (means -2.5/0, weights 0.7/0.3), R = 1000 replications of n = 1000, all
// four estimators plus the reference maximizer.  1-3 treat the weights as
// known, 4-6 estimate them from a uniform initial guess; the init regimes
// are arbitrary (-1, 2), the true means, and the equal-boundary point.
ExperimentConfig table_preset(const std::string& name);

// L1 and L2 distances between estimated and true means.
std::pair<double, double> error_norms(const MixtureParams& estimate,
                                      const MixtureParams& truth);

struct StatSummary {
    double mean = 0.0;
    double sd = 0.0;  // n-1 denominator; 0 when only one replication
};

// Mean +- std over replications; computed with the two-pass formula.
StatSummary summarize(const std::vector<double>& values);

// One report column: an estimator's aggregated statistics.
struct ColumnSummary {
    std::string name;
    std::vector<StatSummary> theta;
    std::optional<StatSummary> weight;      // first-component weight
    StatSummary l1;
    StatSummary l2;
    std::optional<StatSummary> iterations;  // absent for the MLE column
    std::optional<StatSummary> ms_per_iter;
    std::optional<StatSummary> total_ms;
    int max_iter_hits = 0;
};

// One raw row: a single replication under a single estimator.
struct RawRecord {
    int replication = 0;
    std::string algorithm;
    MixtureParams params;
    double l1 = 0.0;
    double l2 = 0.0;
    int iterations = -1;  // -1: not iterative (MLE)
    bool converged = true;
    double ms_per_iter = 0.0;
    double total_ms = 0.0;
};

struct ExperimentReport {
    ExperimentConfig config;
    std::vector<std::string> echo;  // resolved-config lines for the CSV head
    std::vector<ColumnSummary> columns;
    std::vector<RawRecord> raw;
};

using ProgressFn = std::function<void(int done, int total)>;

// Run the full study.  Replications are distributed over worker threads;
// results are keyed by replication index, so serial and parallel execution
// produce identical reports.
ExperimentReport run_experiment(ExperimentConfig config,
                                const ProgressFn& progress = {});

enum class ReportFormat { CSV, MARKDOWN };

// Render the aggregated report.  Parameters and norms carry 4 decimals,
// iteration counts and times 2; the CSV keeps full-precision columns next
// to the formatted ones.  Wall-clock rows are volatile by nature; pass
// include_timings = false for byte-stable output.
std::string render_report(const ExperimentReport& report, ReportFormat format,
                          bool include_timings = true);

void write_report_csv(const ExperimentReport& report, const std::string& path,
                      bool include_timings = true);

// Re-load a written CSV report (echo lines and summary columns; raw
// per-replication rows are not part of the report file).
ExperimentReport load_report_csv(const std::string& path);

// Per-replication dump, one row per (replication, estimator).
void write_raw_csv(const ExperimentReport& report, const std::string& path);

}  // namespace vtmix

#endif  // VTMIX_HARNESS_HPP
