#ifndef VTMIX_MLE_HPP
#define VTMIX_MLE_HPP

// Direct local maximization of the mixture log-likelihood, used as the
// reference column next to the iterative estimators.

#include "vtmix/model.hpp"
#include "vtmix/numerics.hpp"

namespace vtmix {

struct MleResult {
    MixtureParams params;
    double loglik = 0.0;
    bool converged = false;
    int evaluations = 0;
};

// Nelder-Mead ascent from `init`.  Means are optimized as (first mean,
// log-gaps), which pins the component order; unknown weights ride along as
// softmax logits.  Convergence is declared when the decoded parameters
// across the simplex agree within tol.abs_tol (default 1e-9, comfortably
// under the 1e-8 contract); tol.max_eval caps objective evaluations, and a
// run that exhausts it reports converged = false with the best point found.
// `init` must have strictly increasing means.
MleResult maximize_loglik(const Sample& sample, const MixtureParams& init,
                          bool weights_known,
                          const Tolerance& tol = Tolerance{1e-9, 0.0, 20000});

}  // namespace vtmix

#endif  // VTMIX_MLE_HPP
