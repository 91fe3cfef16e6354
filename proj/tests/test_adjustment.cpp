#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "vtmix/adjustment.hpp"
#include "vtmix/model.hpp"
#include "vtmix/numerics.hpp"
#include "vtmix/partition.hpp"

using namespace vtmix;

namespace {

const MixtureParams kRef({-2.5, 0.0}, {0.7, 0.3});

// Closed form for the restricted mean of the equal-weight two-component
// family with boundary t and half-gap a, left cell:
//   mu_1(a) = t - a*(1 - 2*Phi(-a)) - 2*phi(a).
double mu1_equal_closed(double a, double t) {
    return t - a * (1.0 - 2.0 * std_normal_cdf(-a)) - 2.0 * std_normal_pdf(a);
}

}  // namespace

TEST_CASE("restricted means at the reference parameters") {
    // mpmath: means of the true mixture restricted to its own cells.
    auto mu = mu_bar(kRef, AdjustmentMode::EXACT);
    REQUIRE(mu.size() == 2);
    REQUIRE(mu[0].has_value());
    REQUIRE(mu[1].has_value());
    CHECK(std::fabs(*mu[0] - (-2.5310615050205007)) < 1e-12);
    CHECK(std::fabs(*mu[1] - 0.21056709310687920) < 1e-12);
}

TEST_CASE("single component: restricted mean is the mean itself") {
    auto mu = mu_bar(MixtureParams({1.7}, {1.0}), AdjustmentMode::EXACT);
    REQUIRE(mu.size() == 1);
    CHECK(*mu[0] == doctest::Approx(1.7).epsilon(1e-14));
}

TEST_CASE("dominated component has a disengaged restricted mean") {
    auto mu = mu_bar(MixtureParams({-1.0, 0.0, 1.0}, {0.45, 0.10, 0.45}),
                     AdjustmentMode::EXACT);
    REQUIRE(mu.size() == 3);
    CHECK(mu[0].has_value());
    CHECK(!mu[1].has_value());
    CHECK(mu[2].has_value());
}

TEST_CASE("adjustment delta at the reference parameters") {
    auto d = adjustment_delta(kRef, AdjustmentMode::EXACT);
    REQUIRE(d.size() == 2);
    CHECK(std::fabs(d[0] - 0.031061505020500702) < 1e-12);
    CHECK(std::fabs(d[1] - (-0.21056709310687920)) < 1e-12);
}

TEST_CASE("delta vanishes for well-separated components") {
    auto d = adjustment_delta(MixtureParams({-10.0, 10.0}, {0.5, 0.5}),
                              AdjustmentMode::EXACT);
    CHECK(std::fabs(d[0]) < 1e-8);
    CHECK(std::fabs(d[1]) < 1e-8);
}

TEST_CASE("delta for K=1 is zero") {
    auto d = adjustment_delta(MixtureParams({0.3}, {1.0}),
                              AdjustmentMode::EXACT);
    REQUIRE(d.size() == 1);
    CHECK(d[0] == 0.0);
}

TEST_CASE("dominated component gets delta zero") {
    auto d = adjustment_delta(MixtureParams({-1.0, 0.0, 1.0},
                                            {0.45, 0.10, 0.45}),
                              AdjustmentMode::EXACT);
    CHECK(d[1] == 0.0);
}

TEST_CASE("mass-weighted restricted means conserve the mixture mean") {
    // sum_l mass_l * mu_l = sum_l w_l * theta_l for any params: restricting
    // to cells only repartitions the first moment.
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> mean_d(-4.0, 4.0);
    std::uniform_real_distribution<double> w_d(0.2, 0.8);
    for (int trial = 0; trial < 25; ++trial) {
        double m1 = mean_d(gen), m2 = mean_d(gen);
        if (std::fabs(m1 - m2) < 0.1) continue;
        double w = w_d(gen);
        MixtureParams p({m1, m2}, {w, 1.0 - w});

        auto mu = mu_bar(p, AdjustmentMode::EXACT);
        auto cells = cell_intervals(voronoi_partition(p));
        double lhs = 0.0;
        for (std::size_t l = 0; l < 2; ++l) {
            double mass = 0.0;
            for (const auto& [lo, hi] : cells[l])
                for (std::size_t i = 0; i < 2; ++i)
                    mass += p.weights[i] * truncated_mass(p.means[i], lo, hi);
            lhs += mass * *mu[l];
        }
        double rhs = p.weights[0] * p.means[0] + p.weights[1] * p.means[1];
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    }
}

TEST_CASE("restricted means agree with a Monte-Carlo cell-mean oracle") {
    // Independent machinery: mt19937_64 draws classified by the partition,
    // cell averages compared against the quadrature-free exact values.
    std::mt19937_64 gen(33);
    std::uniform_real_distribution<double> mean_d(-4.0, 4.0);
    std::uniform_real_distribution<double> w_d(0.2, 0.8);
    std::normal_distribution<double> z(0.0, 1.0);
    std::uniform_real_distribution<double> u(0.0, 1.0);

    int tested = 0;
    for (int trial = 0; tested < 20; ++trial) {
        REQUIRE(trial < 100);
        double m1 = mean_d(gen), m2 = mean_d(gen);
        if (std::fabs(m1 - m2) < 0.5) continue;
        double w = w_d(gen);
        MixtureParams p({m1, m2}, {w, 1.0 - w});
        ++tested;

        Partition1D part = voronoi_partition(p);
        auto mu = mu_bar(p, AdjustmentMode::EXACT);

        const int N = 1000000;
        double sum[2] = {0.0, 0.0};
        long cnt[2] = {0, 0};
        for (int i = 0; i < N; ++i) {
            double x = (u(gen) < w ? m1 : m2) + z(gen);
            int l = classify(part, x);
            sum[l] += x;
            ++cnt[l];
        }
        for (int l = 0; l < 2; ++l) {
            REQUIRE(cnt[l] > 1000);
            double mc = sum[l] / static_cast<double>(cnt[l]);
            CHECK(std::fabs(mc - *mu[static_cast<std::size_t>(l)]) < 0.01);
        }
    }
}

TEST_CASE("isolated mode approaches exact mode as separation grows") {
    // ISOLATED ignores the neighbour's density leaking over the boundary,
    // so the two modes agree in the well-separated limit and differ
    // measurably when components overlap.
    auto gap = [](double sep) {
        MixtureParams p({-sep / 2, sep / 2}, {0.5, 0.5});
        auto e = mu_bar(p, AdjustmentMode::EXACT);
        auto i = mu_bar(p, AdjustmentMode::ISOLATED);
        return std::fabs(*e[0] - *i[0]);
    };
    CHECK(gap(1.0) > 1e-3);
    CHECK(gap(12.0) < 1e-8);
    CHECK(gap(4.0) < gap(2.0));
}

TEST_CASE("isolated mode equals the truncated own-component mean") {
    MixtureParams p({-2.5, 0.0}, {0.7, 0.3});
    double t = pairwise_boundary(-2.5, 0.0, 0.7, 0.3);
    auto mu = mu_bar(p, AdjustmentMode::ISOLATED);
    double own0 = truncated_first_moment(-2.5, -HUGE_VAL, t) /
                  truncated_mass(-2.5, -HUGE_VAL, t);
    double own1 = truncated_first_moment(0.0, t, HUGE_VAL) /
                  truncated_mass(0.0, t, HUGE_VAL);
    CHECK(*mu[0] == doctest::Approx(own0).epsilon(1e-14));
    CHECK(*mu[1] == doctest::Approx(own1).epsilon(1e-14));
}

TEST_CASE("weight correction at the reference parameters") {
    auto D = weight_correction(kRef);
    REQUIRE(D.size() == 2);
    CHECK(std::fabs(D[0] - (-0.015110388929415635)) < 1e-12);
    CHECK(std::fabs(D[1] - 0.015110388929415635) < 1e-12);
}

TEST_CASE("weight corrections sum to zero") {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> mean_d(-4.0, 4.0);
    std::uniform_real_distribution<double> w_d(0.1, 1.0);
    for (int trial = 0; trial < 25; ++trial) {
        int K = 2 + static_cast<int>(gen() % 3);
        std::vector<double> means, weights;
        bool ok = true;
        for (int l = 0; l < K; ++l) {
            double m = mean_d(gen);
            for (double prev : means)
                if (std::fabs(prev - m) < 0.1) ok = false;
            means.push_back(m);
            weights.push_back(w_d(gen));
        }
        if (!ok) continue;
        double wsum = 0.0;
        for (double w : weights) wsum += w;
        for (double& w : weights) w /= wsum;

        auto D = weight_correction(MixtureParams(means, weights));
        double sum = 0.0;
        for (double d : D) sum += d;
        CHECK(std::fabs(sum) < 1e-12);
    }
    // Symmetric equal-weight pair: both corrections vanish identically.
    auto D0 = weight_correction(MixtureParams({-1.0, 1.0}, {0.5, 0.5}));
    CHECK(std::fabs(D0[0]) < 1e-14);
    CHECK(std::fabs(D0[1]) < 1e-14);
    // K=1: nothing to correct.
    auto D1 = weight_correction(MixtureParams({2.0}, {1.0}));
    CHECK(D1[0] == 0.0);
}

TEST_CASE("family members share the boundary") {
    // Every member of the fixed-boundary family produces the same
    // weighted-density crossing t, by construction.
    IsoPartitionFamily fam{-0.91108085584511855, {0.7, 0.3}};
    for (double a : {0.05, 0.3, 1.0, 1.25, 2.0, 7.0}) {
        auto m = fam.means(a);
        CHECK(pairwise_boundary(m[0], m[1], 0.7, 0.3) ==
              doctest::Approx(fam.t).epsilon(1e-12));
        CHECK(m[1] - m[0] == doctest::Approx(2 * a).epsilon(1e-12));
    }
    // The reference parameters are the member at half-gap 1.25.
    auto m = fam.means(1.25);
    CHECK(m[0] == doctest::Approx(-2.5).epsilon(1e-13));
    CHECK(m[1] == doctest::Approx(0.0));
}

TEST_CASE("restricted mean maps: frozen reference values") {
    // mpmath, family at the reference boundary with weights (0.7, 0.3).
    IsoPartitionFamily fam{-0.91108085584511855, {0.7, 0.3}};
    CHECK(std::fabs(mu_restricted(fam, 0.5, 0) - (-2.3001556161642800)) < 1e-12);
    CHECK(std::fabs(mu_restricted(fam, 0.5, 1) - (-0.30745757064073470)) < 1e-12);
    CHECK(std::fabs(mu_restricted(fam, 1.25, 0) - (-2.5310615050205007)) < 1e-12);
    CHECK(std::fabs(mu_restricted(fam, 1.25, 1) - 0.21056709310687920) < 1e-12);
    CHECK(std::fabs(mu_restricted(fam, 2.0, 0) - (-3.1288018639045838)) < 1e-12);
    CHECK(std::fabs(mu_restricted(fam, 2.0, 1) - 0.91267151305461158) < 1e-12);

    CHECK_THROWS_AS(mu_restricted(fam, 0.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(mu_restricted(fam, -1.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(mu_restricted(fam, 1.0, 2), std::invalid_argument);
}

TEST_CASE("equal weights: restricted mean matches the closed form") {
    for (double t : {0.0, -0.9111}) {
        IsoPartitionFamily fam{t, {0.5, 0.5}};
        for (double a : {0.1, 0.5, 1.0, 2.0, 5.0}) {
            CHECK(std::fabs(mu_restricted(fam, a, 0) -
                            mu1_equal_closed(a, t)) < 1e-12);
            // Mirror symmetry of the equal-weight family about t.
            CHECK(mu_restricted(fam, a, 1) ==
                  doctest::Approx(2 * t - mu_restricted(fam, a, 0))
                      .epsilon(1e-12));
        }
    }
    // Frozen spot values at t = 0, from mpmath.
    IsoPartitionFamily fam0{0.0, {0.5, 0.5}};
    CHECK(std::fabs(mu_restricted(fam0, 0.1, 0) - (-0.80187066240942933)) < 1e-12);
    CHECK(std::fabs(mu_restricted(fam0, 1.0, 0) - (-1.1666309411753726)) < 1e-12);
    CHECK(std::fabs(mu_restricted(fam0, 5.0, 0) - (-5.0000001069233107)) < 1e-12);
}

TEST_CASE("inversion round-trips on the equal-weight family") {
    IsoPartitionFamily fam{0.0, {0.5, 0.5}};
    for (double a = 0.1; a <= 10.0 + 1e-9; a += 0.3) {
        for (int l : {0, 1}) {
            double target = mu_restricted(fam, a, l);
            auto got = va2_invert(fam, target, l);
            REQUIRE(got.has_value());
            CHECK(std::fabs(*got - a) < 1e-6);
        }
    }
}

TEST_CASE("inversion round-trips on the injective reference branches") {
    // With weights (0.7, 0.3) the left-cell map folds back at a ~ 0.647
    // (peak -2.26911...), so only the branch right of the peak can be
    // recovered; the right-cell map is monotone on the tested range.
    IsoPartitionFamily fam{-0.91108085584511855, {0.7, 0.3}};
    for (double a = 0.75; a <= 10.0 + 1e-9; a += 0.25) {
        double target = mu_restricted(fam, a, 0);
        auto got = va2_invert(fam, target, 0);
        REQUIRE(got.has_value());
        CHECK(std::fabs(*got - a) < 1e-6);
    }
    for (double a = 0.1; a <= 10.0 + 1e-9; a += 0.25) {
        double target = mu_restricted(fam, a, 1);
        auto got = va2_invert(fam, target, 1);
        REQUIRE(got.has_value());
        CHECK(std::fabs(*got - a) < 1e-6);
    }
}

TEST_CASE("folded branch resolves to the rightmost preimage") {
    // Values just under the left-cell peak have two preimages; the solver
    // must pick the right-branch one deterministically.
    IsoPartitionFamily fam{-0.91108085584511855, {0.7, 0.3}};
    double peak_a = 0.6474788028695253;
    double target = mu_restricted(fam, 0.3, 0);  // also hit by some a > peak
    auto got = va2_invert(fam, target, 0);
    REQUIRE(got.has_value());
    CHECK(*got > peak_a);
    CHECK(std::fabs(mu_restricted(fam, *got, 0) - target) < 1e-9);
}

TEST_CASE("inversion declines unreachable targets") {
    // The equal-weight left-cell map is bounded above by t - 2*phi(0); a
    // target above that bound has no preimage anywhere.
    IsoPartitionFamily fam{0.0, {0.5, 0.5}};
    CHECK(!va2_invert(fam, -0.79, 0).has_value());   // above sup = -0.7978846
    CHECK(!va2_invert(fam, 0.5, 0).has_value());     // wrong side of t
    CHECK(va2_invert(fam, -0.81, 0).has_value());    // just below: solvable
}
