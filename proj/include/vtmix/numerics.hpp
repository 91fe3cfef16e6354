#ifndef VTMIX_NUMERICS_HPP
#define VTMIX_NUMERICS_HPP

// Scalar numerics shared by the estimators: standard-normal density, CDF and
// quantile, exact first moments of a unit-variance normal over an interval,
// and a bracketed root finder.

#include <cmath>
#include <optional>

namespace vtmix {

// Convergence control for iterative scalar searches.  `abs_tol`/`rel_tol`
// bound the accepted bracket (or step) width; `max_eval` caps function
// evaluations.
struct Tolerance {
    double abs_tol = 1e-10;
    double rel_tol = 0.0;
    int max_eval = 200;
};

// Density of N(0,1).  Underflows to 0 for |x| > ~38.6, which is exact enough
// for every use below.
double std_normal_pdf(double x);

// CDF of N(0,1), accurate to well under 1e-12 absolute error everywhere.
// Accepts +-infinity (returns exactly 1 / 0).  Built on erfc so the far
// tails keep full relative precision.
double std_normal_cdf(double x);

// Inverse CDF on (0,1), refined to full double precision.
double std_normal_quantile(double u);

// Integral of phi(x - mean) over (a, b) with a <= b; endpoints may be
// infinite.  Computed in whichever tail keeps the subtraction benign, so
// masses deep in either tail retain relative precision.
double truncated_mass(double mean, double a, double b);

// Integral of x * phi(x - mean) over (a, b).
double truncated_first_moment(double mean, double a, double b);

// Root of a continuous f with a sign change on [lo, hi]: bisection with a
// secant shortcut.  Returns the located root once the bracket width drops
// below abs_tol + rel_tol * |midpoint|, or std::nullopt when f(lo) and
// f(hi) have the same (nonzero) sign.  Non-finite f values at probe points
// fall back to plain bisection steps.
template <typename F>
std::optional<double> find_root_monotone(F&& f, double lo, double hi,
                                         const Tolerance& tol = Tolerance{}) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (!(flo * fhi < 0.0)) return std::nullopt;

    int evals = 2;
    double mid = 0.5 * (lo + hi);
    while (hi - lo > tol.abs_tol + tol.rel_tol * std::fabs(mid) &&
           evals < tol.max_eval) {
        // Prefer the secant point when it lands comfortably inside the
        // bracket; otherwise bisect.  Guards against the slow creep secant
        // iterations suffer on one-sided brackets.
        double trial = mid;
        if (std::isfinite(flo) && std::isfinite(fhi) && fhi != flo) {
            double sec = lo - flo * (hi - lo) / (fhi - flo);
            double margin = 0.01 * (hi - lo);
            if (sec > lo + margin && sec < hi - margin) trial = sec;
        }
        double ft = f(trial);
        ++evals;
        if (ft == 0.0) return trial;
        if (flo * ft < 0.0) {
            hi = trial;
            fhi = ft;
        } else {
            lo = trial;
            flo = ft;
        }
        mid = 0.5 * (lo + hi);
    }
    return mid;
}

}  // namespace vtmix

#endif  // VTMIX_NUMERICS_HPP
