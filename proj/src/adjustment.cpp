#include "vtmix/adjustment.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "vtmix/partition.hpp"

namespace vtmix {

std::vector<std::optional<double>> mu_bar(const MixtureParams& params,
                                          AdjustmentMode mode) {
    const auto cells = cell_intervals(voronoi_partition(params));
    const int K = params.components();

    std::vector<std::optional<double>> out(static_cast<std::size_t>(K));
    for (int l = 0; l < K; ++l) {
        const auto& cell = cells[static_cast<std::size_t>(l)];
        if (cell.empty()) continue;  // dominated component, no region
        double num = 0.0;
        double den = 0.0;
        for (const auto& [a, b] : cell) {
            if (mode == AdjustmentMode::ISOLATED) {
                num += truncated_first_moment(params.means[l], a, b);
                den += truncated_mass(params.means[l], a, b);
            } else {
                for (int i = 0; i < K; ++i) {
                    num += params.weights[i] *
                           truncated_first_moment(params.means[i], a, b);
                    den += params.weights[i] *
                           truncated_mass(params.means[i], a, b);
                }
            }
        }
        out[static_cast<std::size_t>(l)] = num / den;
    }
    return out;
}

std::vector<double> adjustment_delta(const MixtureParams& params,
                                     AdjustmentMode mode) {
    const auto mu = mu_bar(params, mode);
    std::vector<double> delta(mu.size(), 0.0);
    for (std::size_t l = 0; l < mu.size(); ++l)
        if (mu[l]) delta[l] = params.means[l] - *mu[l];
    return delta;
}

std::vector<double> weight_correction(const MixtureParams& params) {
    const auto cells = cell_intervals(voronoi_partition(params));
    const int K = params.components();
    std::vector<double> D(static_cast<std::size_t>(K));
    for (int l = 0; l < K; ++l) {
        double mass = 0.0;
        for (const auto& [a, b] : cells[static_cast<std::size_t>(l)])
            for (int i = 0; i < K; ++i)
                mass += params.weights[i] *
                        truncated_mass(params.means[i], a, b);
        D[static_cast<std::size_t>(l)] = params.weights[l] - mass;
    }
    return D;
}

double IsoPartitionFamily::center(double a) const {
    return t - std::log(weights[0] / weights[1]) / (2.0 * a);
}

std::array<double, 2> IsoPartitionFamily::means(double a) const {
    const double c = center(a);
    return {c - a, c + a};
}

double mu_restricted(const IsoPartitionFamily& family, double a, int l) {
    if (!(a > 0.0))
        throw std::invalid_argument("mu_restricted: half-gap must be > 0");
    if (l != 0 && l != 1)
        throw std::invalid_argument("mu_restricted: component index");

    const auto th = family.means(a);
    const double inf = std::numeric_limits<double>::infinity();
    const double lo = (l == 0) ? -inf : family.t;
    const double hi = (l == 0) ? family.t : inf;

    double num = 0.0;
    double den = 0.0;
    for (int i = 0; i < 2; ++i) {
        num += family.weights[static_cast<std::size_t>(i)] *
               truncated_first_moment(th[static_cast<std::size_t>(i)], lo, hi);
        den += family.weights[static_cast<std::size_t>(i)] *
               truncated_mass(th[static_cast<std::size_t>(i)], lo, hi);
    }
    if (den <= 0.0) return std::numeric_limits<double>::quiet_NaN();
    return num / den;
}

std::optional<double> va2_invert(const IsoPartitionFamily& family,
                                 double mu_hat, int l,
                                 std::pair<double, double> bracket,
                                 const Tolerance& tol) {
    const auto [a_lo, a_hi] = bracket;
    if (!(a_lo > 0.0) || !(a_hi > a_lo))
        throw std::invalid_argument("va2_invert: bad bracket");

    auto h = [&](double a) { return mu_restricted(family, a, l) - mu_hat; };

    // Logarithmic pre-scan.  The restricted-mean map can fold back when the
    // weights differ, so there may be zero, one or two sign changes; keep
    // the rightmost bracket.  NaN probes (mass underflow at extreme
    // members) are skipped.
    constexpr int kGrid = 64;
    const double ratio = std::pow(a_hi / a_lo, 1.0 / (kGrid - 1));
    double prev_a = a_lo;
    double prev_h = h(a_lo);
    double best_lo = 0.0, best_hi = 0.0;
    bool found = false;
    double a = a_lo;
    for (int i = 1; i < kGrid; ++i) {
        a = (i == kGrid - 1) ? a_hi : a * ratio;
        double ha = h(a);
        if (std::isnan(ha)) {
            prev_a = a;
            prev_h = ha;
            continue;
        }
        if (!std::isnan(prev_h) &&
            (prev_h == 0.0 || prev_h * ha <= 0.0)) {
            best_lo = prev_a;
            best_hi = a;
            found = true;
        }
        prev_a = a;
        prev_h = ha;
    }
    if (!found) return std::nullopt;
    return find_root_monotone(h, best_lo, best_hi, tol);
}

}  // namespace vtmix
