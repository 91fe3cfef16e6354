#include "vtmix/harness.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "vtmix/partition.hpp"

namespace vtmix {

namespace {

std::string format_fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return buf;
}

std::string join_full(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += format_full(v[i]);
    }
    return out;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

// Unicode subscript digits for the Markdown row labels.
std::string subscript(int i) {
    static const char* kDigits[10] = {"₀", "₁", "₂", "₃",
                                      "₄", "₅", "₆", "₇",
                                      "₈", "₉"};
    std::string s = std::to_string(i);
    std::string out;
    for (char c : s) out += kDigits[c - '0'];
    return out;
}

const char* regime_name(InitRegime r) {
    switch (r) {
        case InitRegime::ARBITRARY: return "arbitrary";
        case InitRegime::TRUE_PARAMS: return "true";
        case InitRegime::BOUNDARY: return "boundary";
    }
    return "?";
}

std::vector<std::string> build_echo(const ExperimentConfig& c) {
    // Statistical identity of the run.  Deliberately excludes the worker
    // count: thread scheduling must never show up in the report.
    std::vector<std::string> e;
    e.push_back("label=" + c.label);
    e.push_back("true_means=" + join_full(c.true_params.means));
    e.push_back("true_weights=" + join_full(c.true_params.weights));
    e.push_back("init_means=" + join_full(c.init_means));
    if (!c.weights_known)
        e.push_back("init_weights=" + join_full(c.init_weights));
    e.push_back(std::string("regime=") + regime_name(c.regime));
    e.push_back(std::string("weights_known=") +
                (c.weights_known ? "1" : "0"));
    e.push_back("replications=" + std::to_string(c.replications));
    e.push_back("sample_size=" + std::to_string(c.sample_size));
    e.push_back("base_seed=" + std::to_string(c.base_seed));
    std::string algos;
    for (std::size_t i = 0; i < c.algorithms.size(); ++i) {
        if (i) algos += ',';
        algos += algorithm_name(c.algorithms[i]);
    }
    if (c.include_mle) algos += algos.empty() ? "MLE" : ",MLE";
    e.push_back("algorithms=" + algos);
    e.push_back("step_tol=" + format_full(c.run.step_tol));
    e.push_back("max_iter=" + std::to_string(c.run.max_iter));
    e.push_back(std::string("mode=") +
                (c.run.mode == AdjustmentMode::EXACT ? "exact" : "isolated"));
    if (!c.weights_known)
        e.push_back(std::string("vt_weight_correction=") +
                    (c.run.vt_weight_correction ? "1" : "0"));
    return e;
}

struct RepOutcome {
    std::vector<RawRecord> records;
};

}  // namespace

void validate_experiment_config(ExperimentConfig& config) {
    const int K = config.true_params.components();
    if (K < 1) throw std::invalid_argument("experiment: true params missing");
    if (static_cast<int>(config.init_means.size()) != K)
        throw std::invalid_argument(
            "experiment: init means length does not match component count");
    if (config.replications < 1)
        throw std::invalid_argument("experiment: replications must be >= 1");
    if (config.sample_size < 1)
        throw std::invalid_argument("experiment: sample size must be >= 1");
    if (!config.weights_known) {
        if (config.init_weights.empty())
            config.init_weights.assign(static_cast<std::size_t>(K), 1.0 / K);
        if (static_cast<int>(config.init_weights.size()) != K)
            throw std::invalid_argument(
                "experiment: init weights length does not match components");
    }
    for (Algorithm a : config.algorithms)
        if (a == Algorithm::VA2 && K != 2)
            throw std::invalid_argument("experiment: VA2 needs K == 2");
    if (config.regime == InitRegime::BOUNDARY && K == 2) {
        const auto& tp = config.true_params;
        double t_true = pairwise_boundary(tp.means[0], tp.means[1],
                                          tp.weights[0], tp.weights[1]);
        double t_init = pairwise_boundary(config.init_means[0],
                                          config.init_means[1], tp.weights[0],
                                          tp.weights[1]);
        if (std::fabs(t_true - t_init) > 1e-3)
            throw std::invalid_argument(
                "experiment: boundary-regime init misses the true boundary");
    }
    config.run.weights_known = config.weights_known;
}

ExperimentConfig table_preset(const std::string& name) {
    ExperimentConfig c;
    c.label = name;
    c.true_params = MixtureParams({-2.5, 0.0}, {0.7, 0.3});

    // The equal-boundary init: the member of the fixed-boundary family with
    // half-gap 2, which reproduces the true decision boundary to the ulp.
    const double t = pairwise_boundary(-2.5, 0.0, 0.7, 0.3);
    const double c2 = t - std::log(0.7 / 0.3) / 4.0;
    const std::vector<double> boundary_init{c2 - 2.0, c2 + 2.0};

    if (name == "table1") {
        c.init_means = {-1.0, 2.0};
        c.regime = InitRegime::ARBITRARY;
    } else if (name == "table2") {
        c.init_means = {-2.5, 0.0};
        c.regime = InitRegime::TRUE_PARAMS;
    } else if (name == "table3") {
        c.init_means = boundary_init;
        c.regime = InitRegime::BOUNDARY;
    } else if (name == "table4") {
        c.init_means = {-1.0, 2.0};
        c.regime = InitRegime::ARBITRARY;
        c.weights_known = false;
    } else if (name == "table5") {
        c.init_means = {-2.5, 0.0};
        c.regime = InitRegime::TRUE_PARAMS;
        c.weights_known = false;
    } else if (name == "table6") {
        c.init_means = boundary_init;
        c.regime = InitRegime::BOUNDARY;
        c.weights_known = false;
    } else {
        throw std::invalid_argument("unknown preset: " + name);
    }
    if (!c.weights_known) {
        // The unknown-weights studies run VT with the corrected fraction
        // update.  The weight guess follows the regime: uniform when the
        // means are arbitrary, the true weights otherwise (the equal-boundary
        // init only reproduces the true boundary under the true weights).
        c.run.vt_weight_correction = true;
        c.init_weights = c.regime == InitRegime::ARBITRARY
                             ? std::vector<double>{0.5, 0.5}
                             : c.true_params.weights;
    }
    return c;
}

std::pair<double, double> error_norms(const MixtureParams& estimate,
                                      const MixtureParams& truth) {
    if (estimate.means.size() != truth.means.size())
        throw std::invalid_argument("error_norms: component count mismatch");
    double l1 = 0.0;
    double l2 = 0.0;
    for (std::size_t l = 0; l < truth.means.size(); ++l) {
        double d = estimate.means[l] - truth.means[l];
        l1 += std::fabs(d);
        l2 += d * d;
    }
    return {l1, std::sqrt(l2)};
}

StatSummary summarize(const std::vector<double>& values) {
    StatSummary s;
    if (values.empty()) return s;
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(values.size());
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) {
            double d = v - s.mean;
            ss += d * d;
        }
        s.sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
    }
    return s;
}

ExperimentReport run_experiment(ExperimentConfig config,
                                const ProgressFn& progress) {
    validate_experiment_config(config);
    const int K = config.true_params.components();
    const int R = config.replications;

    const MixtureParams init(
        config.init_means,
        config.weights_known ? config.true_params.weights
                             : config.init_weights);
    // Reference-column starting point: the true parameters (the maximizer is
    // init-independent under the ordering constraint, so the cheapest
    // well-ordered start is used).
    const MixtureParams mle_init = config.true_params;
    const Tolerance mle_tol{1e-9, 0.0, 20000};

    std::vector<RepOutcome> outcomes(static_cast<std::size_t>(R));

    auto run_replication = [&](int rep) {
        const Sample sample = simulate_sample(
            config.true_params, static_cast<std::size_t>(config.sample_size),
            SeedSpec{config.base_seed, static_cast<std::uint64_t>(rep)});

        RepOutcome out;
        for (Algorithm alg : config.algorithms) {
            EstimationResult r =
                run_estimator(alg, sample, init, config.run);
            RawRecord rec;
            rec.replication = rep;
            rec.algorithm = algorithm_name(alg);
            rec.params = r.params;
            std::tie(rec.l1, rec.l2) =
                error_norms(r.params, config.true_params);
            rec.iterations = r.iterations;
            rec.converged = r.converged;
            rec.ms_per_iter = r.per_iter_seconds * 1e3;
            rec.total_ms = r.total_seconds * 1e3;
            out.records.push_back(std::move(rec));
        }
        if (config.include_mle) {
            MleResult m = maximize_loglik(sample, mle_init,
                                          config.weights_known, mle_tol);
            RawRecord rec;
            rec.replication = rep;
            rec.algorithm = "MLE";
            rec.params = m.params;
            std::tie(rec.l1, rec.l2) =
                error_norms(m.params, config.true_params);
            rec.iterations = -1;
            rec.converged = m.converged;
            out.records.push_back(std::move(rec));
        }
        return out;
    };

    int workers = config.workers > 0
                      ? config.workers
                      : static_cast<int>(std::thread::hardware_concurrency());
    workers = std::max(1, std::min(workers, R));

    std::atomic<int> next{0};
    std::atomic<int> done{0};
    std::mutex progress_mutex;
    auto worker = [&]() {
        for (int rep = next.fetch_add(1); rep < R; rep = next.fetch_add(1)) {
            outcomes[static_cast<std::size_t>(rep)] = run_replication(rep);
            int d = done.fetch_add(1) + 1;
            if (progress) {
                std::lock_guard<std::mutex> lock(progress_mutex);
                progress(d, R);
            }
        }
    };
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers - 1));
        for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
        worker();
        for (auto& th : pool) th.join();
    }

    // Aggregate in replication order; identical regardless of which thread
    // produced which outcome.
    ExperimentReport report;
    report.echo = build_echo(config);

    std::vector<std::string> column_names;
    for (Algorithm a : config.algorithms) column_names.push_back(algorithm_name(a));
    if (config.include_mle) column_names.push_back("MLE");

    for (std::size_t col = 0; col < column_names.size(); ++col) {
        ColumnSummary cs;
        cs.name = column_names[col];
        std::vector<std::vector<double>> theta(static_cast<std::size_t>(K));
        std::vector<double> w1, l1, l2, iters, mspi, totms;
        for (int rep = 0; rep < R; ++rep) {
            const RawRecord& rec =
                outcomes[static_cast<std::size_t>(rep)].records[col];
            for (int l = 0; l < K; ++l)
                theta[static_cast<std::size_t>(l)].push_back(
                    rec.params.means[static_cast<std::size_t>(l)]);
            if (!config.weights_known) w1.push_back(rec.params.weights[0]);
            l1.push_back(rec.l1);
            l2.push_back(rec.l2);
            if (rec.iterations >= 0) {
                iters.push_back(static_cast<double>(rec.iterations));
                mspi.push_back(rec.ms_per_iter);
                totms.push_back(rec.total_ms);
            }
            if (!rec.converged) ++cs.max_iter_hits;
        }
        for (const auto& tv : theta) cs.theta.push_back(summarize(tv));
        if (!config.weights_known) cs.weight = summarize(w1);
        cs.l1 = summarize(l1);
        cs.l2 = summarize(l2);
        if (!iters.empty()) {
            cs.iterations = summarize(iters);
            cs.ms_per_iter = summarize(mspi);
            cs.total_ms = summarize(totms);
        }
        report.columns.push_back(std::move(cs));
    }

    for (auto& out : outcomes)
        for (auto& rec : out.records) report.raw.push_back(std::move(rec));
    report.config = std::move(config);
    return report;
}

namespace {

// The row schema shared by both renderers: slug, display label, decimals,
// and accessors into ColumnSummary.
struct Row {
    std::string slug;
    std::string label;
    int decimals;
    std::function<const StatSummary*(const ColumnSummary&)> get;
};

std::vector<Row> report_rows(const ExperimentReport& report,
                             bool include_timings) {
    std::vector<Row> rows;
    std::size_t K = report.columns.empty() ? 0 : report.columns[0].theta.size();
    for (std::size_t l = 0; l < K; ++l) {
        rows.push_back(Row{
            "theta_" + std::to_string(l + 1),
            "θ" + subscript(static_cast<int>(l + 1)), 4,
            [l](const ColumnSummary& c) { return &c.theta[l]; }});
    }
    bool has_weight = false;
    for (const auto& c : report.columns) has_weight |= c.weight.has_value();
    if (has_weight)
        rows.push_back(Row{"p", "p" + subscript(1), 4,
                           [](const ColumnSummary& c) {
                               return c.weight ? &*c.weight : nullptr;
                           }});
    rows.push_back(Row{"l1", "‖θ−θ*‖" + subscript(1),
                       4, [](const ColumnSummary& c) { return &c.l1; }});
    rows.push_back(Row{"l2", "‖θ−θ*‖" + subscript(2),
                       4, [](const ColumnSummary& c) { return &c.l2; }});
    rows.push_back(Row{"iterations", "iterations", 2,
                       [](const ColumnSummary& c) {
                           return c.iterations ? &*c.iterations : nullptr;
                       }});
    if (include_timings) {
        rows.push_back(Row{"ms_per_iter", "ms/iteration", 2,
                           [](const ColumnSummary& c) {
                               return c.ms_per_iter ? &*c.ms_per_iter : nullptr;
                           }});
        rows.push_back(Row{"total_ms", "total ms", 2,
                           [](const ColumnSummary& c) {
                               return c.total_ms ? &*c.total_ms : nullptr;
                           }});
    }
    return rows;
}

std::string echo_value(const std::vector<std::string>& echo,
                       const std::string& key) {
    for (const auto& line : echo)
        if (line.rfind(key + "=", 0) == 0) return line.substr(key.size() + 1);
    return "";
}

}  // namespace

std::string render_report(const ExperimentReport& report, ReportFormat format,
                          bool include_timings) {
    const auto rows = report_rows(report, include_timings);
    std::ostringstream out;

    if (format == ReportFormat::CSV) {
        out << "# experiment report\n";
        for (const auto& line : report.echo) out << "# " << line << '\n';
        out << "algorithm,statistic,mean,std,mean_fmt,std_fmt\n";
        for (const auto& col : report.columns) {
            for (const auto& row : rows) {
                const StatSummary* s = row.get(col);
                if (!s) continue;
                out << col.name << ',' << row.slug << ','
                    << format_full(s->mean) << ',' << format_full(s->sd) << ','
                    << format_fixed(s->mean, row.decimals) << ','
                    << format_fixed(s->sd, row.decimals) << '\n';
            }
            out << col.name << ",max_iter_hits," << col.max_iter_hits
                << ",0," << col.max_iter_hits << ",0\n";
        }
        return out.str();
    }

    // Markdown: statistics as rows, estimators as columns.
    std::string label = echo_value(report.echo, "label");
    std::string R = echo_value(report.echo, "replications");
    std::string n = echo_value(report.echo, "sample_size");
    std::string seed = echo_value(report.echo, "base_seed");
    out << "## " << (label.empty() ? "experiment" : label) << " (R=" << R
        << ", n=" << n << ", seed=" << seed << ")\n\n";
    out << "| statistic |";
    for (const auto& col : report.columns) out << ' ' << col.name << " |";
    out << "\n|---|";
    for (std::size_t i = 0; i < report.columns.size(); ++i) out << "---:|";
    out << '\n';
    for (const auto& row : rows) {
        out << "| " << row.label << " |";
        for (const auto& col : report.columns) {
            const StatSummary* s = row.get(col);
            if (!s)
                out << " n/a |";
            else
                out << ' ' << format_fixed(s->mean, row.decimals) << "±"
                    << format_fixed(s->sd, row.decimals) << " |";
        }
        out << '\n';
    }
    out << "| max-iter hits |";
    for (const auto& col : report.columns) out << ' ' << col.max_iter_hits << " |";
    out << '\n';
    return out.str();
}

void write_report_csv(const ExperimentReport& report, const std::string& path,
                      bool include_timings) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << render_report(report, ReportFormat::CSV, include_timings);
    if (!f) throw std::runtime_error("write failed: " + path);
}

ExperimentReport load_report_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open for reading: " + path);

    ExperimentReport report;
    std::map<std::string, std::size_t> col_index;
    std::string line;
    bool saw_header = false;
    std::size_t lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::string body = line.substr(line.size() > 1 && line[1] == ' ' ? 2 : 1);
            if (body.find('=') != std::string::npos)
                report.echo.push_back(body);
            continue;
        }
        if (!saw_header) {
            if (line.rfind("algorithm,statistic,", 0) != 0)
                throw std::runtime_error(path + ": unrecognized header");
            saw_header = true;
            continue;
        }
        auto fields = split(line, ',');
        if (fields.size() < 4)
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": short row");
        const std::string& algo = fields[0];
        const std::string& stat = fields[1];
        StatSummary s{std::stod(fields[2]), std::stod(fields[3])};

        auto it = col_index.find(algo);
        if (it == col_index.end()) {
            it = col_index.emplace(algo, report.columns.size()).first;
            report.columns.push_back(ColumnSummary{});
            report.columns.back().name = algo;
        }
        ColumnSummary& col = report.columns[it->second];
        if (stat.rfind("theta_", 0) == 0) {
            col.theta.push_back(s);
        } else if (stat == "p") {
            col.weight = s;
        } else if (stat == "l1") {
            col.l1 = s;
        } else if (stat == "l2") {
            col.l2 = s;
        } else if (stat == "iterations") {
            col.iterations = s;
        } else if (stat == "ms_per_iter") {
            col.ms_per_iter = s;
        } else if (stat == "total_ms") {
            col.total_ms = s;
        } else if (stat == "max_iter_hits") {
            col.max_iter_hits = static_cast<int>(s.mean);
        } else {
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": unknown statistic " + stat);
        }
    }
    if (!saw_header)
        throw std::runtime_error(path + ": not a report file");
    return report;
}

void write_raw_csv(const ExperimentReport& report, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    const std::size_t K =
        report.raw.empty() ? 0 : report.raw[0].params.means.size();
    f << "replication,algorithm";
    for (std::size_t l = 1; l <= K; ++l) f << ",theta_" << l;
    for (std::size_t l = 1; l <= K; ++l) f << ",weight_" << l;
    f << ",l1,l2,iterations,converged,ms_per_iter,total_ms\n";
    for (const auto& rec : report.raw) {
        f << rec.replication << ',' << rec.algorithm;
        for (double m : rec.params.means) f << ',' << format_full(m);
        for (double w : rec.params.weights) f << ',' << format_full(w);
        f << ',' << format_full(rec.l1) << ',' << format_full(rec.l2) << ',';
        if (rec.iterations >= 0) f << rec.iterations;
        f << ',' << (rec.converged ? 1 : 0) << ',';
        if (rec.iterations >= 0)
            f << format_full(rec.ms_per_iter) << ','
              << format_full(rec.total_ms);
        else
            f << ',';
        f << '\n';
    }
    if (!f) throw std::runtime_error("write failed: " + path);
}

}  // namespace vtmix
