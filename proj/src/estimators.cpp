#include "vtmix/estimators.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "vtmix/partition.hpp"

namespace vtmix {

namespace {

constexpr double kWeightFloor = 1e-6;

// Clip to [kWeightFloor, 1] and renormalize.  Every unknown-weights update
// funnels through here so the floor rule is applied uniformly.
std::vector<double> normalize_weights(std::vector<double> w) {
    double sum = 0.0;
    for (double& v : w) {
        v = std::clamp(v, kWeightFloor, 1.0);
        sum += v;
    }
    for (double& v : w) v /= sum;
    return w;
}

// Cell fractions with the empty-cell freeze: a component whose cell caught
// no points keeps its current weight.
std::vector<double> updated_weights(const MixtureParams& params,
                                    const SubsampleStats& stats,
                                    const std::vector<double>* correction) {
    std::vector<double> w(params.weights.size());
    for (std::size_t l = 0; l < w.size(); ++l) {
        if (stats.counts[l] > 0) {
            w[l] = stats.fractions[l];
            if (correction) w[l] += (*correction)[l];
        } else {
            w[l] = params.weights[l];
        }
    }
    return normalize_weights(std::move(w));
}

}  // namespace

MixtureParams vt_step(const MixtureParams& params, const Sample& sample,
                      bool weights_known, bool correct_weights) {
    const auto stats = subsample_stats(voronoi_partition(params), sample);

    MixtureParams next = params;
    for (std::size_t l = 0; l < next.means.size(); ++l)
        if (stats.means[l]) next.means[l] = *stats.means[l];
    if (!weights_known) {
        if (correct_weights) {
            const auto D = weight_correction(params);
            next.weights = updated_weights(params, stats, &D);
        } else {
            next.weights = updated_weights(params, stats, nullptr);
        }
    }
    return next;
}

MixtureParams va1_step(const MixtureParams& params, const Sample& sample,
                       bool weights_known, AdjustmentMode mode) {
    const auto stats = subsample_stats(voronoi_partition(params), sample);
    const auto delta = adjustment_delta(params, mode);

    MixtureParams next = params;
    for (std::size_t l = 0; l < next.means.size(); ++l)
        if (stats.means[l]) next.means[l] = *stats.means[l] + delta[l];
    if (!weights_known) {
        const auto D = weight_correction(params);
        next.weights = updated_weights(params, stats, &D);
    }
    return next;
}

MixtureParams va2_step(const MixtureParams& params, const Sample& sample,
                       bool weights_known, AdjustmentMode mode,
                       std::pair<double, double> bracket,
                       const Tolerance& root_tol) {
    if (params.components() != 2)
        throw std::invalid_argument("va2_step: requires exactly 2 components");

    const auto stats = subsample_stats(voronoi_partition(params), sample);
    const IsoPartitionFamily family{
        pairwise_boundary(params.means[0], params.means[1], params.weights[0],
                          params.weights[1]),
        {params.weights[0], params.weights[1]}};

    MixtureParams next = params;
    std::vector<double> delta;  // fallback correction, computed on demand
    for (int l = 0; l < 2; ++l) {
        const auto lz = static_cast<std::size_t>(l);
        if (!stats.means[lz]) continue;  // empty cell keeps its mean
        const auto a = va2_invert(family, *stats.means[lz], l, bracket,
                                  root_tol);
        if (a) {
            next.means[lz] =
                (l == 0) ? family.center(*a) - *a : family.center(*a) + *a;
        } else {
            if (delta.empty()) delta = adjustment_delta(params, mode);
            next.means[lz] = *stats.means[lz] + delta[lz];
        }
    }
    if (!weights_known) {
        const auto D = weight_correction(params);
        next.weights = updated_weights(params, stats, &D);
    }
    return next;
}

MixtureParams em_step(const MixtureParams& params, const Sample& sample,
                      bool weights_known) {
    const int K = params.components();
    const auto Kz = static_cast<std::size_t>(K);

    std::vector<double> log_w(Kz);
    for (std::size_t l = 0; l < Kz; ++l) log_w[l] = std::log(params.weights[l]);

    std::vector<double> resp_sum(Kz, 0.0);
    std::vector<double> resp_x(Kz, 0.0);
    std::vector<double> ld(Kz);
    for (double x : sample.values) {
        // Responsibilities via a max-shifted exponential so far-out points
        // cannot underflow the whole row.
        double m = -std::numeric_limits<double>::infinity();
        for (std::size_t l = 0; l < Kz; ++l) {
            double d = x - params.means[l];
            ld[l] = log_w[l] - 0.5 * d * d;
            m = std::max(m, ld[l]);
        }
        double row = 0.0;
        for (std::size_t l = 0; l < Kz; ++l) {
            ld[l] = std::exp(ld[l] - m);
            row += ld[l];
        }
        for (std::size_t l = 0; l < Kz; ++l) {
            double r = ld[l] / row;
            resp_sum[l] += r;
            resp_x[l] += r * x;
        }
    }

    MixtureParams next = params;
    for (std::size_t l = 0; l < Kz; ++l)
        if (resp_sum[l] > 0.0) next.means[l] = resp_x[l] / resp_sum[l];
    if (!weights_known) {
        std::vector<double> w(Kz);
        const double n = static_cast<double>(sample.size());
        for (std::size_t l = 0; l < Kz; ++l) w[l] = resp_sum[l] / n;
        next.weights = normalize_weights(std::move(w));
    }
    return next;
}

EstimationResult run_estimator(Algorithm algorithm, const Sample& sample,
                               const MixtureParams& init,
                               const RunConfig& config) {
    using clock = std::chrono::steady_clock;

    EstimationResult res;
    res.algorithm = algorithm;
    res.params = init;
    if (config.record_trajectory) res.trajectory.push_back(init);

    for (int iter = 0; iter < config.max_iter; ++iter) {
        const auto t0 = clock::now();
        MixtureParams next;
        switch (algorithm) {
            case Algorithm::VT:
                next = vt_step(res.params, sample, config.weights_known,
                               config.vt_weight_correction);
                break;
            case Algorithm::VA1:
                next = va1_step(res.params, sample, config.weights_known,
                                config.mode);
                break;
            case Algorithm::VA2:
                next = va2_step(res.params, sample, config.weights_known,
                                config.mode, config.va2_bracket,
                                config.root_tol);
                break;
            case Algorithm::EM:
                next = em_step(res.params, sample, config.weights_known);
                break;
        }
        const auto t1 = clock::now();
        res.total_seconds +=
            std::chrono::duration<double>(t1 - t0).count();
        ++res.iterations;

        double step2 = 0.0;
        for (std::size_t l = 0; l < next.means.size(); ++l) {
            double d = next.means[l] - res.params.means[l];
            step2 += d * d;
        }
        res.params = std::move(next);
        if (config.record_trajectory) res.trajectory.push_back(res.params);

        if (std::sqrt(step2) < config.step_tol) {
            res.converged = true;
            break;
        }
    }
    if (res.iterations > 0)
        res.per_iter_seconds = res.total_seconds / res.iterations;
    return res;
}

const char* algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::VT: return "VT";
        case Algorithm::VA1: return "VA1";
        case Algorithm::VA2: return "VA2";
        case Algorithm::EM: return "EM";
    }
    return "?";
}

}  // namespace vtmix
