#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <stdexcept>
#include <string>

#include "vtmix/model.hpp"

using namespace vtmix;

namespace {

// Unique-ish temp path per test run; files are cleaned up by each test.
std::string temp_path(const char* stem) {
    return std::string("/tmp/vtmix_model_") + stem + ".csv";
}

}  // namespace

TEST_CASE("params constructor validates") {
    CHECK_NOTHROW(MixtureParams({-2.5, 0.0}, {0.7, 0.3}));
    CHECK_NOTHROW(MixtureParams({1.0}, {1.0}));

    CHECK_THROWS_AS(MixtureParams({}, {}), std::invalid_argument);
    CHECK_THROWS_AS(MixtureParams({0.0, 1.0}, {1.0}), std::invalid_argument);
    CHECK_THROWS_AS(MixtureParams({0.0}, {0.5}), std::invalid_argument);
    CHECK_THROWS_AS(MixtureParams({0.0, 1.0}, {1.2, -0.2}),
                    std::invalid_argument);
    CHECK_THROWS_AS(MixtureParams({0.0, 1.0}, {0.0, 1.0}),
                    std::invalid_argument);
    double nan = std::nan("");
    CHECK_THROWS_AS(MixtureParams({nan, 1.0}, {0.5, 0.5}),
                    std::invalid_argument);
    double inf = HUGE_VAL;
    CHECK_THROWS_AS(MixtureParams({inf, 1.0}, {0.5, 0.5}),
                    std::invalid_argument);
    // Weight sum off by more than 1e-12 is rejected; within it is accepted.
    CHECK_THROWS_AS(MixtureParams({0.0, 1.0}, {0.6, 0.4 + 1e-9}),
                    std::invalid_argument);
    CHECK_NOTHROW(MixtureParams({0.0, 1.0}, {0.6, 0.4 + 1e-13}));
}

TEST_CASE("mixture pdf reference values") {
    // mpmath: 0.7*phi(x+2.5) + 0.3*phi(x)
    MixtureParams p({-2.5, 0.0}, {0.7, 0.3});
    CHECK(std::fabs(mixture_pdf(p, -2.5) - 0.28451808642907344) < 1e-15);
    CHECK(std::fabs(mixture_pdf(p, 0.0) - 0.13195249446592778) < 1e-15);

    // Single component reduces to the shifted normal density.
    MixtureParams one({1.5}, {1.0});
    CHECK(mixture_pdf(one, 1.5) == doctest::Approx(0.39894228040143268));
}

TEST_CASE("log likelihood sums pointwise logs") {
    MixtureParams p({-2.5, 0.0}, {0.7, 0.3});
    Sample s{{-2.5, 0.0}};
    double expect = std::log(0.28451808642907344) +
                    std::log(0.13195249446592778);
    CHECK(log_likelihood(p, s) == doctest::Approx(expect).epsilon(1e-14));

    // A point so remote the density underflows: -inf, not an exception.
    Sample far{{1e5}};
    CHECK(std::isinf(log_likelihood(p, far)));
    CHECK(log_likelihood(p, far) < 0);
}

TEST_CASE("simulation is deterministic in the seed spec") {
    MixtureParams p({-2.5, 0.0}, {0.7, 0.3});
    Sample a = simulate_sample(p, 500, {42, 3});
    Sample b = simulate_sample(p, 500, {42, 3});
    REQUIRE(a.size() == 500);
    CHECK(a.values == b.values);

    Sample c = simulate_sample(p, 500, {42, 4});
    Sample d = simulate_sample(p, 500, {43, 3});
    CHECK(a.values != c.values);
    CHECK(a.values != d.values);
}

TEST_CASE("draws are a pure function of their index") {
    // The first 100 draws of a long run equal the 100 draws of a short run:
    // no hidden sequential state ties k-th output to preceding calls.
    MixtureParams p({0.0, 4.0}, {0.5, 0.5});
    Sample longer = simulate_sample(p, 400, {7, 0});
    Sample shorter = simulate_sample(p, 100, {7, 0});
    for (std::size_t k = 0; k < shorter.size(); ++k)
        CHECK(longer.values[k] == shorter.values[k]);
}

TEST_CASE("component labels match the data generating process") {
    MixtureParams p({-2.5, 0.0}, {0.7, 0.3});
    std::vector<int> labels;
    Sample s = simulate_sample(p, 200000, {99, 0}, &labels);
    REQUIRE(labels.size() == s.size());

    // Mixing fraction: se = sqrt(0.7*0.3/200000) ~ 0.001.
    double frac1 = 0.0;
    for (int l : labels) frac1 += (l == 0);
    frac1 /= static_cast<double>(labels.size());
    CHECK(frac1 == doctest::Approx(0.7).epsilon(0.01));

    // Conditional moments: each labeled subsample is N(theta_l, 1).
    for (int comp : {0, 1}) {
        double sum = 0.0, sumsq = 0.0;
        std::size_t cnt = 0;
        for (std::size_t k = 0; k < s.size(); ++k) {
            if (labels[k] != comp) continue;
            sum += s.values[k];
            ++cnt;
        }
        double mean = sum / static_cast<double>(cnt);
        for (std::size_t k = 0; k < s.size(); ++k) {
            if (labels[k] != comp) continue;
            sumsq += (s.values[k] - mean) * (s.values[k] - mean);
        }
        double var = sumsq / static_cast<double>(cnt - 1);
        CHECK(mean == doctest::Approx(p.means[static_cast<std::size_t>(comp)])
                          .epsilon(0.02));
        CHECK(var == doctest::Approx(1.0).epsilon(0.02));
    }
}

TEST_CASE("sample moments match the mixture") {
    // Mixture mean 0.7*(-2.5) = -1.75; variance 1 + spread = 2.3125.
    MixtureParams p({-2.5, 0.0}, {0.7, 0.3});
    Sample s = simulate_sample(p, 400000, {1234, 0});
    double mean = std::accumulate(s.values.begin(), s.values.end(), 0.0) /
                  static_cast<double>(s.size());
    double var = 0.0;
    for (double x : s.values) var += (x - mean) * (x - mean);
    var /= static_cast<double>(s.size() - 1);
    CHECK(mean == doctest::Approx(-1.75).epsilon(0.01));
    CHECK(var == doctest::Approx(2.3125).epsilon(0.01));
}

TEST_CASE("sample csv writes and reads back exactly") {
    MixtureParams p({-2.5, 0.0}, {0.7, 0.3});
    Sample s = simulate_sample(p, 257, {5, 9});
    const std::string path = temp_path("roundtrip");
    write_sample_csv(s, path);
    Sample back = read_sample_csv(path);
    CHECK(back.values == s.values);  // 17 significant digits round-trip
    std::remove(path.c_str());
}

TEST_CASE("empty sample round-trips") {
    const std::string path = temp_path("empty");
    write_sample_csv(Sample{}, path);
    Sample back = read_sample_csv(path);
    CHECK(back.size() == 0);
    std::remove(path.c_str());
}

TEST_CASE("reading rejects malformed input") {
    const std::string path = temp_path("bad");
    {
        std::ofstream f(path);
        f << "1.5\nnot-a-number\n2.5\n";
    }
    CHECK_THROWS_AS(read_sample_csv(path), std::runtime_error);
    {
        std::ofstream f(path);
        f << "1.5 trailing\n";
    }
    CHECK_THROWS_AS(read_sample_csv(path), std::runtime_error);
    std::remove(path.c_str());
    CHECK_THROWS_AS(read_sample_csv("/nonexistent/nowhere.csv"),
                    std::runtime_error);
}

TEST_CASE("format_full round-trips doubles") {
    for (double v : {0.0, -1.75, 0.1, 1e-300, -2.5310615050205007,
                     12345.678901234567}) {
        CHECK(std::stod(format_full(v)) == v);
    }
}
