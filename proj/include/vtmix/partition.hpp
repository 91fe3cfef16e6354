#ifndef VTMIX_PARTITION_HPP
#define VTMIX_PARTITION_HPP

// Decision regions of the weighted-density argmax on the real line, and the
// per-cell statistics of a sample classified by them.

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "vtmix/model.hpp"

namespace vtmix {

// Partition of the real line into labelled intervals.  `breakpoints` is
// strictly increasing; `labels[j]` is the component owning the j-th
// interval, where interval j is (breakpoints[j-1], breakpoints[j]] -- so a
// point sitting exactly on a breakpoint belongs to the interval on its
// left.  Adjacent intervals always carry distinct labels.  A component that
// is nowhere the argmax (possible for K > 2) owns no interval.
struct Partition1D {
    int num_components = 0;
    std::vector<double> breakpoints;
    std::vector<int> labels;
};

// Crossing point of w_i * phi(x - theta_i) and w_j * phi(x - theta_j):
//   (theta_i + theta_j)/2 + ln(w_i/w_j)/(theta_j - theta_i).
// Only the weight ratio matters.  Requires theta_i != theta_j.
double pairwise_boundary(double theta_i, double theta_j, double w_i,
                         double w_j);

// Argmax regions of w_l * phi(x - theta_l).  Candidate breakpoints are the
// pairwise crossings; each interval between consecutive candidates has a
// constant argmax, read off at an interior probe point (ties at probes go
// to the lowest component index), and equal-labelled neighbours are merged.
// Requires pairwise mean separation of at least 1e-9.
Partition1D voronoi_partition(const MixtureParams& params);

// Index of the component owning x.  Breakpoint hits classify left.
int classify(const Partition1D& partition, double x);

// The intervals making up each component's cell, as (lo, hi) pairs with
// infinite outer endpoints.  Empty vector for components owning nothing.
std::vector<std::vector<std::pair<double, double>>> cell_intervals(
    const Partition1D& partition);

// Per-cell count, mean and n-fraction of a classified sample.  Cells with
// no points report a disengaged mean.
struct SubsampleStats {
    std::vector<std::int64_t> counts;
    std::vector<std::optional<double>> means;
    std::vector<double> fractions;
};

SubsampleStats subsample_stats(const Partition1D& partition,
                               const Sample& sample);

}  // namespace vtmix

#endif  // VTMIX_PARTITION_HPP
