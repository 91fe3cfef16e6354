#ifndef VTMIX_ESTIMATORS_HPP
#define VTMIX_ESTIMATORS_HPP

// One-step updates for the four iterative estimators and the driver that
// iterates them to the step-size stopping rule.

#include <utility>
#include <vector>

#include "vtmix/adjustment.hpp"
#include "vtmix/model.hpp"
#include "vtmix/numerics.hpp"

namespace vtmix {

enum class Algorithm { VT, VA1, VA2, EM };

// Shared iteration controls.  `step_tol` stops the loop once the L2 change
// of the means drops below it (weights never enter the stopping rule);
// `weights_known` freezes the weights at their current values.
struct RunConfig {
    double step_tol = 1e-3;
    int max_iter = 1000;
    bool weights_known = true;
    AdjustmentMode mode = AdjustmentMode::EXACT;
    std::pair<double, double> va2_bracket{1e-6, 50.0};
    Tolerance root_tol{1e-10, 0.0, 200};
    // Apply the weight correction to VT's fraction update as well.  Off by
    // default (plain fractions are the baseline rule); the unknown-weights
    // study presets switch it on.
    bool vt_weight_correction = false;
    bool record_trajectory = false;
};

// Hard-assignment update: classify the sample by the current weighted
// densities, move each mean to its cell average (components with empty
// cells keep their mean), and, when weights are estimated, re-fit them to
// the cell fractions.  Weight updates clip to [1e-6, 1] and renormalize;
// components with empty cells keep their weight through the same rule.
// `correct_weights` adds the same data-independent weight correction the
// adjusted variants use (the means stay uncorrected).
MixtureParams vt_step(const MixtureParams& params, const Sample& sample,
                      bool weights_known, bool correct_weights = false);

// The hard-assignment update plus the parameter-only corrections: means get
// adjustment_delta added, weight fractions get weight_correction added
// (then the same clip-and-renormalize rule).
MixtureParams va1_step(const MixtureParams& params, const Sample& sample,
                       bool weights_known,
                       AdjustmentMode mode = AdjustmentMode::EXACT);

// Two-component variant: inverts the restricted-mean map along the family
// of parameter pairs sharing the current decision boundary.  Components
// whose inversion finds no root fall back to the va1 update; weights are
// handled as in va1_step.  Throws std::invalid_argument unless K == 2.
MixtureParams va2_step(const MixtureParams& params, const Sample& sample,
                       bool weights_known,
                       AdjustmentMode mode = AdjustmentMode::EXACT,
                       std::pair<double, double> bracket = {1e-6, 50.0},
                       const Tolerance& root_tol = Tolerance{});

// Soft-assignment update: posterior responsibilities, then the weighted
// mean (and, when estimated, weight) refit.  Never decreases the sample
// log-likelihood.
MixtureParams em_step(const MixtureParams& params, const Sample& sample,
                      bool weights_known);

struct EstimationResult {
    Algorithm algorithm = Algorithm::VT;
    MixtureParams params;
    int iterations = 0;
    bool converged = false;  // false when max_iter ran out
    double total_seconds = 0.0;
    double per_iter_seconds = 0.0;
    std::vector<MixtureParams> trajectory;  // filled when requested
};

// Iterate `algorithm` from `init` until the means move less than step_tol
// (that final step is counted) or max_iter steps have run.  Each step is
// timed with a monotonic clock around the full update.
EstimationResult run_estimator(Algorithm algorithm, const Sample& sample,
                               const MixtureParams& init,
                               const RunConfig& config);

const char* algorithm_name(Algorithm a);

}  // namespace vtmix

#endif  // VTMIX_ESTIMATORS_HPP
