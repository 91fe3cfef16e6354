#ifndef VTMIX_MODEL_HPP
#define VTMIX_MODEL_HPP

// The statistical model: K-component mixtures of unit-variance normals with
// translated means, plus deterministic sampling keyed by (base seed,
// replication index) and CSV sample I/O.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace vtmix {

// Mean/weight pairs for a unit-variance normal mixture.  The validating
// constructor enforces matching sizes, finite means, strictly positive
// weights and a weight sum of 1 within 1e-12; it throws
// std::invalid_argument otherwise.
struct MixtureParams {
    std::vector<double> means;
    std::vector<double> weights;

    MixtureParams() = default;
    MixtureParams(std::vector<double> means_in, std::vector<double> weights_in);

    int components() const { return static_cast<int>(means.size()); }
};

// An observed univariate sample.
struct Sample {
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
};

// Replication seeding: every (base_seed, replication) pair names an
// independent stream, so replications can run in any order or in parallel
// and still draw identical values.
struct SeedSpec {
    std::uint64_t base_seed = 0;
    std::uint64_t replication = 0;
};

// Mixture density sum(w_l * phi(x - mean_l)).
double mixture_pdf(const MixtureParams& params, double x);

// Sum of log densities over the sample.  Returns -infinity if the density
// underflows to zero at any point.
double log_likelihood(const MixtureParams& params, const Sample& sample);

// Draw n points from the mixture.  Deterministic in (params, n, seed); the
// k-th draw is a pure function of the seeded stream, independent of call
// ordering.  When `component_labels` is non-null it receives the index of
// the component each draw came from (instrumentation for frequency checks).
Sample simulate_sample(const MixtureParams& params, std::size_t n,
                       SeedSpec seed,
                       std::vector<int>* component_labels = nullptr);

// One value per line, 17 significant digits, no header.
void write_sample_csv(const Sample& sample, const std::string& path);
Sample read_sample_csv(const std::string& path);

// Shared formatting helper: shortest round-trippable decimal form used by
// every CSV writer in the project (printf %.17g).
std::string format_full(double v);

}  // namespace vtmix

#endif  // VTMIX_MODEL_HPP
