#include "vtmix/mle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace vtmix {

namespace {

// Decode the optimizer's coordinates into mixture parameters.  Layout:
// v[0] = first mean, v[1..K-1] = log gaps between consecutive means,
// v[K..K+K-2] = weight logits (last component pinned at 0).
MixtureParams decode(const std::vector<double>& v, int K, bool weights_known,
                     const std::vector<double>& fixed_weights) {
    const auto Kz = static_cast<std::size_t>(K);
    MixtureParams p;
    p.means.resize(Kz);
    p.means[0] = v[0];
    for (std::size_t l = 1; l < Kz; ++l)
        p.means[l] = p.means[l - 1] + std::exp(v[l]);
    if (weights_known) {
        p.weights = fixed_weights;
    } else {
        p.weights.resize(Kz);
        double sum = 0.0;
        for (std::size_t l = 0; l < Kz; ++l) {
            double logit = (l + 1 < Kz) ? v[Kz + l] : 0.0;
            p.weights[l] = std::exp(logit);
            sum += p.weights[l];
        }
        for (double& w : p.weights) w /= sum;
    }
    return p;
}

std::vector<double> encode(const MixtureParams& init, bool weights_known) {
    const auto Kz = init.means.size();
    std::vector<double> v;
    v.push_back(init.means[0]);
    for (std::size_t l = 1; l < Kz; ++l) {
        double gap = init.means[l] - init.means[l - 1];
        if (!(gap > 0.0))
            throw std::invalid_argument(
                "maximize_loglik: init means must be strictly increasing");
        v.push_back(std::log(gap));
    }
    if (!weights_known)
        for (std::size_t l = 0; l + 1 < Kz; ++l)
            v.push_back(std::log(init.weights[l] / init.weights[Kz - 1]));
    return v;
}

}  // namespace

MleResult maximize_loglik(const Sample& sample, const MixtureParams& init,
                          bool weights_known, const Tolerance& tol) {
    if (sample.values.empty())
        throw std::invalid_argument("maximize_loglik: sample must be non-empty");
    const int K = init.components();
    const std::vector<double> fixed_weights = init.weights;

    int evals = 0;
    auto objective = [&](const std::vector<double>& v) {
        ++evals;
        const MixtureParams p = decode(v, K, weights_known, fixed_weights);
        double ll = log_likelihood(p, sample);
        // A finite floor keeps the simplex ordering sane if the search
        // wanders far enough for the density to underflow.
        if (!std::isfinite(ll)) ll = -1e300;
        return -ll;
    };

    std::vector<double> x0 = encode(init, weights_known);
    const std::size_t dim = x0.size();

    // Parameter-space agreement across the simplex, measured on decoded
    // means and weights (the contract's metric, not the internal one).
    auto decoded_spread = [&](const std::vector<std::vector<double>>& pts) {
        MixtureParams best = decode(pts[0], K, weights_known, fixed_weights);
        double spread = 0.0;
        for (std::size_t i = 1; i < pts.size(); ++i) {
            MixtureParams q = decode(pts[i], K, weights_known, fixed_weights);
            for (std::size_t l = 0; l < best.means.size(); ++l) {
                spread = std::max(spread,
                                  std::fabs(q.means[l] - best.means[l]));
                spread = std::max(spread,
                                  std::fabs(q.weights[l] - best.weights[l]));
            }
        }
        return spread;
    };

    // Standard Nelder-Mead with one polish restart around the incumbent.
    std::vector<std::vector<double>> pts;
    std::vector<double> fv;
    auto init_simplex = [&](const std::vector<double>& centre, double scale) {
        pts.assign(1, centre);
        for (std::size_t j = 0; j < dim; ++j) {
            auto v = centre;
            v[j] += scale;
            pts.push_back(v);
        }
        fv.resize(pts.size());
        for (std::size_t i = 0; i < pts.size(); ++i) fv[i] = objective(pts[i]);
    };

    bool converged = false;
    for (int round = 0; round < 2; ++round) {
        init_simplex(x0, round == 0 ? 0.25 : 1e-6);
        while (evals < tol.max_eval) {
            // Order best..worst.
            std::vector<std::size_t> idx(pts.size());
            std::iota(idx.begin(), idx.end(), std::size_t{0});
            std::sort(idx.begin(), idx.end(),
                      [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
            std::vector<std::vector<double>> spts(pts.size());
            std::vector<double> sfv(pts.size());
            for (std::size_t i = 0; i < idx.size(); ++i) {
                spts[i] = pts[idx[i]];
                sfv[i] = fv[idx[i]];
            }
            pts.swap(spts);
            fv.swap(sfv);

            if (decoded_spread(pts) < tol.abs_tol) {
                converged = true;
                break;
            }

            std::vector<double> centroid(dim, 0.0);
            for (std::size_t i = 0; i + 1 < pts.size(); ++i)
                for (std::size_t j = 0; j < dim; ++j)
                    centroid[j] += pts[i][j];
            for (double& c : centroid) c /= static_cast<double>(dim);

            auto blend = [&](double coef) {
                std::vector<double> v(dim);
                for (std::size_t j = 0; j < dim; ++j)
                    v[j] = centroid[j] + coef * (pts.back()[j] - centroid[j]);
                return v;
            };

            auto xr = blend(-1.0);  // reflect
            double fr = objective(xr);
            if (fr < fv[0]) {
                auto xe = blend(-2.0);  // expand
                double fe = objective(xe);
                if (fe < fr) {
                    pts.back() = xe;
                    fv.back() = fe;
                } else {
                    pts.back() = xr;
                    fv.back() = fr;
                }
            } else if (fr < fv[fv.size() - 2]) {
                pts.back() = xr;
                fv.back() = fr;
            } else {
                bool outside = fr < fv.back();
                auto xc = blend(outside ? -0.5 : 0.5);
                double fc = objective(xc);
                if (fc < std::min(fr, fv.back())) {
                    pts.back() = xc;
                    fv.back() = fc;
                } else {
                    // Shrink toward the best vertex.
                    for (std::size_t i = 1; i < pts.size(); ++i) {
                        for (std::size_t j = 0; j < dim; ++j)
                            pts[i][j] = pts[0][j] + 0.5 * (pts[i][j] - pts[0][j]);
                        fv[i] = objective(pts[i]);
                    }
                }
            }
        }
        // Restart from the incumbent best vertex.
        std::size_t besti = static_cast<std::size_t>(
            std::min_element(fv.begin(), fv.end()) - fv.begin());
        x0 = pts[besti];
        if (!converged) break;  // budget ran out; skip the polish round
        if (round == 0) converged = false;
    }

    std::size_t besti = static_cast<std::size_t>(
        std::min_element(fv.begin(), fv.end()) - fv.begin());
    MleResult res;
    res.params = decode(pts[besti], K, weights_known, fixed_weights);
    res.loglik = -fv[besti];
    res.converged = converged;
    res.evaluations = evals;
    return res;
}

}  // namespace vtmix
