#include "vtmix/model.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "vtmix/numerics.hpp"

namespace vtmix {

namespace {

// SplitMix64 finalizer: a bijective 64-bit mixer.  Evaluating it at
// key + k*GOLDEN yields the SplitMix64 sequence at counter k, which makes
// the whole stream random-access: draw k never depends on draws before it.
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
}

std::uint64_t stream_key(SeedSpec seed) {
    // Distinct (base, replication) pairs map to distinct keys; the extra
    // mix decorrelates neighbouring replication indices.
    return mix64(seed.base_seed + kGolden * (seed.replication + 1));
}

double uniform01(std::uint64_t key, std::uint64_t k) {
    std::uint64_t z = mix64(key + kGolden * (k + 1));
    // 53 random bits, centred in the bin: strictly inside (0, 1) so the
    // quantile transform never sees 0 or 1.
    return (static_cast<double>(z >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace

MixtureParams::MixtureParams(std::vector<double> means_in,
                             std::vector<double> weights_in)
    : means(std::move(means_in)), weights(std::move(weights_in)) {
    if (means.empty())
        throw std::invalid_argument("MixtureParams: at least one component");
    if (means.size() != weights.size())
        throw std::invalid_argument(
            "MixtureParams: means and weights must have equal length");
    double sum = 0.0;
    for (std::size_t l = 0; l < means.size(); ++l) {
        if (!std::isfinite(means[l]))
            throw std::invalid_argument("MixtureParams: non-finite mean");
        if (!(weights[l] > 0.0) || !std::isfinite(weights[l]))
            throw std::invalid_argument(
                "MixtureParams: weights must be strictly positive");
        sum += weights[l];
    }
    if (std::fabs(sum - 1.0) > 1e-12)
        throw std::invalid_argument("MixtureParams: weights must sum to 1");
}

double mixture_pdf(const MixtureParams& params, double x) {
    double f = 0.0;
    for (std::size_t l = 0; l < params.means.size(); ++l)
        f += params.weights[l] * std_normal_pdf(x - params.means[l]);
    return f;
}

double log_likelihood(const MixtureParams& params, const Sample& sample) {
    double ll = 0.0;
    for (double x : sample.values) {
        double f = mixture_pdf(params, x);
        if (f <= 0.0) return -std::numeric_limits<double>::infinity();
        ll += std::log(f);
    }
    return ll;
}

Sample simulate_sample(const MixtureParams& params, std::size_t n,
                       SeedSpec seed, std::vector<int>* component_labels) {
    const std::uint64_t key = stream_key(seed);
    const int K = params.components();

    Sample out;
    out.values.resize(n);
    if (component_labels) component_labels->resize(n);

    for (std::size_t k = 0; k < n; ++k) {
        // Two stream words per draw: one picks the component, one drives
        // the normal quantile.
        double u = uniform01(key, 2 * k);
        int comp = K - 1;
        double acc = 0.0;
        for (int l = 0; l < K; ++l) {
            acc += params.weights[l];
            if (u < acc) {
                comp = l;
                break;
            }
        }
        double z = std_normal_quantile(uniform01(key, 2 * k + 1));
        out.values[k] = params.means[comp] + z;
        if (component_labels) (*component_labels)[k] = comp;
    }
    return out;
}

std::string format_full(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_sample_csv(const Sample& sample, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open for writing: " + path);
    for (double v : sample.values) out << format_full(v) << '\n';
    if (!out)
        throw std::runtime_error("write failed: " + path);
}

Sample read_sample_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open for reading: " + path);
    Sample s;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::size_t pos = 0;
        double v;
        try {
            v = std::stod(line, &pos);
        } catch (const std::exception&) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": not a number: " + line);
        }
        while (pos < line.size() &&
               (line[pos] == ' ' || line[pos] == '\r' || line[pos] == '\t'))
            ++pos;
        if (pos != line.size())
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": trailing junk: " + line);
        s.values.push_back(v);
    }
    return s;
}

}  // namespace vtmix
