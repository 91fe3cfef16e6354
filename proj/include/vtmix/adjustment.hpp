#ifndef VTMIX_ADJUSTMENT_HPP
#define VTMIX_ADJUSTMENT_HPP

// Bias corrections that turn hard-assignment training into an estimator
// with the right asymptotic fixed point: the cell-restricted mixture means,
// the mean adjustment delta, the weight correction, and the fixed-boundary
// one-parameter family inverted by the two-component variant.

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "vtmix/model.hpp"
#include "vtmix/numerics.hpp"

namespace vtmix {

// EXACT: restricted means of the full mixture density over each cell.
// ISOLATED: each component's own density truncated to its cell (cheaper,
// coincides with EXACT as component overlap vanishes).
enum class AdjustmentMode { EXACT, ISOLATED };

// Mean of the (mode-dependent) density restricted to each component's cell.
// Entries for components owning no cell are disengaged.
std::vector<std::optional<double>> mu_bar(const MixtureParams& params,
                                          AdjustmentMode mode);

// delta_l = theta_l - mu_bar_l; zero where the cell is empty.  Depends on
// the parameters only -- never on data.
std::vector<double> adjustment_delta(const MixtureParams& params,
                                     AdjustmentMode mode);

// D_l = w_l - integral of the mixture density over cell l.  Sums to zero.
std::vector<double> weight_correction(const MixtureParams& params);

// Two-component families sharing one decision boundary t: for half-gap
// a > 0 the member has means c(a) -+ a with c(a) = t - ln(w1/w2)/(2a), and
// every member's weighted-density crossing sits exactly at t.
struct IsoPartitionFamily {
    double t = 0.0;
    std::array<double, 2> weights{0.5, 0.5};

    double center(double a) const;
    std::array<double, 2> means(double a) const;
};

// Mean of the family member's mixture density restricted to cell l
// (component 0 owns (-inf, t], component 1 owns (t, inf)).  NaN when the
// cell mass underflows to zero (degenerate far-field members).
double mu_restricted(const IsoPartitionFamily& family, double a, int l);

// Solve mu_restricted(a, l) = mu_hat for a on [bracket.first,
// bracket.second].  A 64-point logarithmic scan locates sign changes; the
// rightmost one is refined (the map can fold back for unequal weights, and
// the right branch is the spread-component solution, a function of the
// boundary and weights alone).  Disengaged when no sign change exists.
std::optional<double> va2_invert(const IsoPartitionFamily& family,
                                 double mu_hat, int l,
                                 std::pair<double, double> bracket = {1e-6,
                                                                      50.0},
                                 const Tolerance& tol = Tolerance{});

}  // namespace vtmix

#endif  // VTMIX_ADJUSTMENT_HPP
