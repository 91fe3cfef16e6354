#include "vtmix/partition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace vtmix {

namespace {

// Argmax of ln(w_l) - (x - theta_l)^2 / 2 (the log weighted density up to a
// shared constant), lowest index on ties.
int argmax_component(const MixtureParams& params, double x) {
    int best = 0;
    double best_v = -std::numeric_limits<double>::infinity();
    for (int l = 0; l < params.components(); ++l) {
        double d = x - params.means[l];
        double v = std::log(params.weights[l]) - 0.5 * d * d;
        if (v > best_v) {
            best_v = v;
            best = l;
        }
    }
    return best;
}

}  // namespace

double pairwise_boundary(double theta_i, double theta_j, double w_i,
                         double w_j) {
    if (theta_i == theta_j)
        throw std::invalid_argument("pairwise_boundary: equal means");
    return 0.5 * (theta_i + theta_j) +
           std::log(w_i / w_j) / (theta_j - theta_i);
}

Partition1D voronoi_partition(const MixtureParams& params) {
    const int K = params.components();
    for (int i = 0; i < K; ++i)
        for (int j = i + 1; j < K; ++j)
            if (std::fabs(params.means[i] - params.means[j]) < 1e-9)
                throw std::invalid_argument(
                    "voronoi_partition: means closer than 1e-9");

    Partition1D part;
    part.num_components = K;
    if (K == 1) {
        part.labels = {0};
        return part;
    }

    // Candidate breakpoints: all pairwise crossings.  Between consecutive
    // candidates no pair of components swaps order, so the argmax is
    // constant there and one probe per interval suffices.
    std::vector<double> cand;
    cand.reserve(static_cast<std::size_t>(K) * (K - 1) / 2);
    for (int i = 0; i < K; ++i)
        for (int j = i + 1; j < K; ++j)
            cand.push_back(pairwise_boundary(params.means[i], params.means[j],
                                             params.weights[i],
                                             params.weights[j]));
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

    std::vector<int> raw_labels;
    raw_labels.reserve(cand.size() + 1);
    for (std::size_t j = 0; j <= cand.size(); ++j) {
        double probe;
        if (j == 0)
            probe = cand.front() - 1.0;
        else if (j == cand.size())
            probe = cand.back() + 1.0;
        else
            probe = 0.5 * (cand[j - 1] + cand[j]);
        raw_labels.push_back(argmax_component(params, probe));
    }

    // Merge equal-labelled neighbours (drops crossings that never win and
    // the boundaries of dominated components).
    part.labels.push_back(raw_labels[0]);
    for (std::size_t j = 0; j < cand.size(); ++j) {
        if (raw_labels[j + 1] != part.labels.back()) {
            part.breakpoints.push_back(cand[j]);
            part.labels.push_back(raw_labels[j + 1]);
        }
    }
    return part;
}

int classify(const Partition1D& partition, double x) {
    // Interval j is (b[j-1], b[j]], so the owning interval of x is the
    // first breakpoint >= x; exact hits land left.
    auto it = std::lower_bound(partition.breakpoints.begin(),
                               partition.breakpoints.end(), x);
    return partition.labels[static_cast<std::size_t>(
        it - partition.breakpoints.begin())];
}

std::vector<std::vector<std::pair<double, double>>> cell_intervals(
    const Partition1D& partition) {
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<std::vector<std::pair<double, double>>> cells(
        static_cast<std::size_t>(partition.num_components));
    for (std::size_t j = 0; j < partition.labels.size(); ++j) {
        double lo = (j == 0) ? -inf : partition.breakpoints[j - 1];
        double hi =
            (j == partition.breakpoints.size()) ? inf : partition.breakpoints[j];
        cells[static_cast<std::size_t>(partition.labels[j])].emplace_back(lo,
                                                                          hi);
    }
    return cells;
}

SubsampleStats subsample_stats(const Partition1D& partition,
                               const Sample& sample) {
    const auto K = static_cast<std::size_t>(partition.num_components);
    SubsampleStats stats;
    stats.counts.assign(K, 0);
    stats.means.assign(K, std::nullopt);
    stats.fractions.assign(K, 0.0);

    std::vector<double> sums(K, 0.0);
    for (double x : sample.values) {
        auto l = static_cast<std::size_t>(classify(partition, x));
        ++stats.counts[l];
        sums[l] += x;
    }
    const double n = static_cast<double>(sample.size());
    for (std::size_t l = 0; l < K; ++l) {
        if (stats.counts[l] > 0)
            stats.means[l] = sums[l] / static_cast<double>(stats.counts[l]);
        if (n > 0) stats.fractions[l] = static_cast<double>(stats.counts[l]) / n;
    }
    return stats;
}

}  // namespace vtmix
