#include "vtmix/cli.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vtmix/harness.hpp"
#include "vtmix/partition.hpp"

namespace vtmix {

namespace {

std::vector<double> parse_double_list(const std::string& text,
                                      const std::string& what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t pos = 0;
        double v;
        try {
            v = std::stod(item, &pos);
        } catch (const std::exception&) {
            throw CLI::ValidationError(what, "not a number: '" + item + "'");
        }
        if (pos != item.size())
            throw CLI::ValidationError(what, "not a number: '" + item + "'");
        out.push_back(v);
    }
    if (out.empty()) throw CLI::ValidationError(what, "empty list");
    return out;
}

Algorithm algorithm_from_name(std::string name) {
    for (char& c : name) c = static_cast<char>(std::tolower(c));
    if (name == "vt") return Algorithm::VT;
    if (name == "va1") return Algorithm::VA1;
    if (name == "va2") return Algorithm::VA2;
    if (name == "em") return Algorithm::EM;
    throw CLI::ValidationError("--algorithm", "unknown algorithm: " + name);
}

void write_density_csv(const MixtureParams& params, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    double lo = params.means[0];
    double hi = params.means[0];
    for (double m : params.means) {
        lo = std::min(lo, m);
        hi = std::max(hi, m);
    }
    lo -= 5.0;
    hi += 5.0;
    f << "x,density\n";
    for (long i = 0;; ++i) {
        double x = lo + 0.01 * static_cast<double>(i);
        if (x > hi + 1e-12) break;
        f << format_full(x) << ',' << format_full(mixture_pdf(params, x))
          << '\n';
    }
    if (!f) throw std::runtime_error("write failed: " + path);
}

int do_run(int argc, const char* const* argv) {
    CLI::App app{"Gaussian-mixture estimation by hard-assignment training, "
                 "its adjusted variants, soft-assignment refitting, and "
                 "direct likelihood maximization"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "vtmix 0.1.0");
    app.set_config("--config", "", "Read options from a TOML config file");

    // ---- simulate ----
    auto* sim = app.add_subcommand("simulate", "Draw a sample and write CSV");
    std::string sim_means, sim_weights, sim_out, sim_density_out;
    std::size_t sim_n = 0;
    std::uint64_t sim_seed = 0, sim_rep = 0;
    sim->add_option("--means", sim_means, "Component means, comma-separated")
        ->required();
    sim->add_option("--weights", sim_weights,
                    "Component weights, comma-separated")
        ->required();
    sim->add_option("--n", sim_n, "Sample size")->required();
    sim->add_option("--seed", sim_seed, "Base seed")->required();
    sim->add_option("--replication", sim_rep,
                    "Replication index within the seed's stream");
    sim->add_option("--out", sim_out, "Output sample CSV")->required();
    sim->add_option("--density-out", sim_density_out,
                    "Also write an x,density grid CSV (gnuplot-friendly)");

    // ---- estimate ----
    auto* est = app.add_subcommand("estimate", "Fit one estimator to a sample");
    std::string est_in, est_alg, est_init, est_weights, est_mode = "exact";
    bool est_unknown_w = false, est_strict = false;
    double est_tol = 1e-3;
    int est_max_iter = 1000;
    est->add_option("--in", est_in, "Input sample CSV")->required();
    est->add_option("--algorithm", est_alg, "vt | va1 | va2 | em | mle")
        ->required();
    est->add_option("--init", est_init, "Initial means, comma-separated")
        ->required();
    est->add_option("--weights", est_weights,
                    "Component weights: held fixed, or the starting guess "
                    "under --estimate-weights (default: uniform)");
    est->add_flag("--estimate-weights", est_unknown_w,
                  "Treat weights as unknown and re-fit them");
    bool est_vt_correct = false;
    est->add_flag("--vt-correct-weights", est_vt_correct,
                  "Apply the weight correction to VT's fraction update");
    est->add_option("--tol", est_tol, "Stopping threshold on the mean step");
    est->add_option("--max-iter", est_max_iter, "Iteration cap");
    est->add_option("--mode", est_mode, "Adjustment mode: exact | isolated")
        ->check(CLI::IsMember({"exact", "isolated"}));
    est->add_flag("--strict", est_strict,
                  "Exit with status 2 when the run does not converge");

    // ---- experiment ----
    auto* exp = app.add_subcommand(
        "experiment", "Replicated study across estimators, with a report");
    std::string exp_preset, exp_true_means, exp_true_weights, exp_init_means,
        exp_init_weights, exp_regime = "arbitrary", exp_mode = "exact",
        exp_algorithms, exp_out = "report.csv", exp_raw_out, exp_md_out,
        exp_echo_out;
    int exp_R = 1000, exp_n = 1000, exp_workers = 0, exp_max_iter = 1000;
    std::uint64_t exp_seed = 0;
    double exp_tol = 1e-3;
    bool exp_unknown_w = false, exp_no_mle = false, exp_omit_timings = false,
         exp_quiet = false;
    auto* preset_opt = exp->add_option("--preset", exp_preset,
                                       "Named study: table1 .. table6");
    exp->add_option("--true-means", exp_true_means,
                    "True component means (custom study)")
        ->excludes(preset_opt);
    exp->add_option("--true-weights", exp_true_weights,
                    "True component weights (custom study)")
        ->excludes(preset_opt);
    exp->add_option("--init-means", exp_init_means, "Initial means");
    exp->add_option("--init-weights", exp_init_weights,
                    "Initial weights when estimating them");
    exp->add_flag("--estimate-weights", exp_unknown_w,
                  "Treat weights as unknown (custom study)");
    bool exp_vt_correct = false;
    exp->add_flag("--vt-correct-weights", exp_vt_correct,
                  "Apply the weight correction to VT's fraction update");
    exp->add_option("--regime", exp_regime,
                    "Init regime label: arbitrary | true | boundary")
        ->check(CLI::IsMember({"arbitrary", "true", "boundary"}));
    exp->add_option("--replications,-R", exp_R, "Number of replications");
    exp->add_option("--sample-size,--n", exp_n, "Sample size per replication");
    exp->add_option("--seed", exp_seed, "Base seed (required: runs must be "
                     "reproducible by construction)")
        ->required();
    exp->add_option("--workers", exp_workers,
                    "Worker threads (0 = hardware count)");
    exp->add_option("--algorithms", exp_algorithms,
                    "Comma-separated subset of vt,va1,va2,em");
    exp->add_flag("--no-mle", exp_no_mle, "Skip the reference MLE column");
    exp->add_option("--tol", exp_tol, "Stopping threshold on the mean step");
    exp->add_option("--max-iter", exp_max_iter, "Iteration cap");
    exp->add_option("--mode", exp_mode, "Adjustment mode: exact | isolated")
        ->check(CLI::IsMember({"exact", "isolated"}));
    exp->add_option("--out", exp_out, "Report CSV path");
    exp->add_option("--raw-out", exp_raw_out,
                    "Also dump per-replication rows to this CSV");
    exp->add_option("--markdown-out", exp_md_out,
                    "Also write the Markdown table to this file");
    exp->add_flag("--omit-timings", exp_omit_timings,
                  "Drop wall-clock rows for byte-stable reports");
    exp->add_flag("--quiet", exp_quiet, "No progress counter on stderr");
    exp->add_option("--echo-config", exp_echo_out,
                    "Write the fully resolved configuration to this file");

    // ---- report ----
    auto* rep = app.add_subcommand("report", "Re-render a written report");
    std::string rep_in, rep_format = "markdown", rep_out;
    bool rep_omit_timings = false;
    rep->add_option("--in", rep_in, "Report CSV produced by 'experiment'")
        ->required();
    rep->add_option("--format", rep_format, "markdown | csv")
        ->check(CLI::IsMember({"markdown", "csv"}));
    rep->add_option("--out", rep_out, "Output path (default: stdout)");
    rep->add_flag("--omit-timings", rep_omit_timings,
                  "Drop wall-clock rows");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    if (app.got_subcommand(sim)) {
        MixtureParams params(parse_double_list(sim_means, "--means"),
                             parse_double_list(sim_weights, "--weights"));
        Sample s = simulate_sample(params, sim_n,
                                   SeedSpec{sim_seed, sim_rep});
        write_sample_csv(s, sim_out);
        if (!sim_density_out.empty())
            write_density_csv(params, sim_density_out);
        std::cerr << "wrote " << s.size() << " draws to " << sim_out << '\n';
        return 0;
    }

    if (app.got_subcommand(est)) {
        Sample s = read_sample_csv(est_in);
        std::vector<double> init_means = parse_double_list(est_init, "--init");
        std::vector<double> weights =
            est_weights.empty()
                ? std::vector<double>(init_means.size(),
                                      1.0 / static_cast<double>(
                                                init_means.size()))
                : parse_double_list(est_weights, "--weights");
        MixtureParams init(init_means, weights);

        std::string alg_lower = est_alg;
        for (char& c : alg_lower) c = static_cast<char>(std::tolower(c));

        bool converged;
        MixtureParams fitted;
        double ll, total_ms;
        int steps;
        if (alg_lower == "mle") {
            MleResult m = maximize_loglik(s, init, !est_unknown_w,
                                          Tolerance{1e-9, 0.0, 20000});
            converged = m.converged;
            fitted = m.params;
            ll = m.loglik;
            steps = m.evaluations;
            total_ms = 0.0;
            std::cout << "algorithm: MLE\nevaluations: " << steps << '\n';
        } else {
            RunConfig rc;
            rc.step_tol = est_tol;
            rc.max_iter = est_max_iter;
            rc.weights_known = !est_unknown_w;
            rc.mode = est_mode == "isolated" ? AdjustmentMode::ISOLATED
                                             : AdjustmentMode::EXACT;
            rc.vt_weight_correction = est_vt_correct;
            EstimationResult r =
                run_estimator(algorithm_from_name(alg_lower), s, init, rc);
            converged = r.converged;
            fitted = r.params;
            ll = log_likelihood(fitted, s);
            steps = r.iterations;
            total_ms = r.total_seconds * 1e3;
            std::cout << "algorithm: " << algorithm_name(r.algorithm)
                      << "\niterations: " << steps << '\n'
                      << "total_ms: " << format_full(total_ms) << '\n';
        }
        std::cout << "converged: " << (converged ? "yes" : "no") << '\n';
        std::cout << "means:";
        for (double m : fitted.means) std::cout << ' ' << format_full(m);
        std::cout << "\nweights:";
        for (double w : fitted.weights) std::cout << ' ' << format_full(w);
        std::cout << "\nlog_likelihood: " << format_full(ll) << '\n';
        if (est_strict && !converged) {
            std::cerr << "estimate: did not converge (strict mode)\n";
            return 2;
        }
        return 0;
    }

    if (app.got_subcommand(exp)) {
        ExperimentConfig cfg;
        if (!exp_preset.empty()) {
            cfg = table_preset(exp_preset);
        } else {
            if (exp_true_means.empty() || exp_init_means.empty())
                throw CLI::ValidationError(
                    "experiment",
                    "either --preset or --true-means/--init-means required");
            std::vector<double> tm =
                parse_double_list(exp_true_means, "--true-means");
            std::vector<double> tw =
                exp_true_weights.empty()
                    ? std::vector<double>(tm.size(),
                                          1.0 / static_cast<double>(tm.size()))
                    : parse_double_list(exp_true_weights, "--true-weights");
            cfg.true_params = MixtureParams(tm, tw);
            cfg.label = "custom";
            cfg.weights_known = !exp_unknown_w;
            if (exp_regime == "true")
                cfg.regime = InitRegime::TRUE_PARAMS;
            else if (exp_regime == "boundary")
                cfg.regime = InitRegime::BOUNDARY;
        }
        if (exp->count("--init-means"))
            cfg.init_means = parse_double_list(exp_init_means, "--init-means");
        if (exp->count("--init-weights"))
            cfg.init_weights =
                parse_double_list(exp_init_weights, "--init-weights");
        if (exp->count("--estimate-weights")) cfg.weights_known = false;
        if (exp->count("--vt-correct-weights"))
            cfg.run.vt_weight_correction = exp_vt_correct;
        if (exp->count("--replications")) cfg.replications = exp_R;
        if (exp->count("--sample-size")) cfg.sample_size = exp_n;
        cfg.base_seed = exp_seed;
        cfg.workers = exp_workers;
        if (exp->count("--algorithms")) {
            cfg.algorithms.clear();
            std::stringstream ss(exp_algorithms);
            std::string item;
            while (std::getline(ss, item, ','))
                cfg.algorithms.push_back(algorithm_from_name(item));
        }
        cfg.include_mle = !exp_no_mle;
        if (exp->count("--tol")) cfg.run.step_tol = exp_tol;
        if (exp->count("--max-iter")) cfg.run.max_iter = exp_max_iter;
        cfg.run.mode = exp_mode == "isolated" ? AdjustmentMode::ISOLATED
                                              : AdjustmentMode::EXACT;

        if (!exp_echo_out.empty()) {
            std::ofstream f(exp_echo_out);
            if (!f)
                throw std::runtime_error("cannot open for writing: " +
                                         exp_echo_out);
            f << app.config_to_str(true, false);
        }
        std::cerr << "# resolved configuration:\n";
        {
            std::istringstream echo(app.config_to_str(true, false));
            std::string line;
            while (std::getline(echo, line)) std::cerr << "#   " << line << '\n';
        }

        ProgressFn progress;
        if (!exp_quiet)
            progress = [](int done, int total) {
                std::fprintf(stderr, "\rreplication %d/%d", done, total);
                if (done == total) std::fputc('\n', stderr);
                std::fflush(stderr);
            };
        ExperimentReport report = run_experiment(std::move(cfg), progress);
        write_report_csv(report, exp_out, !exp_omit_timings);
        if (!exp_raw_out.empty()) write_raw_csv(report, exp_raw_out);
        std::string md =
            render_report(report, ReportFormat::MARKDOWN, !exp_omit_timings);
        if (!exp_md_out.empty()) {
            std::ofstream f(exp_md_out);
            if (!f)
                throw std::runtime_error("cannot open for writing: " +
                                         exp_md_out);
            f << md;
        }
        std::cout << md;
        int hits = 0;
        for (const auto& col : report.columns) hits += col.max_iter_hits;
        if (hits > 0)
            std::cerr << "warning: " << hits
                      << " non-converged runs (see max-iter hits)\n";
        return 0;
    }

    if (app.got_subcommand(rep)) {
        ExperimentReport report = load_report_csv(rep_in);
        std::string text = render_report(
            report,
            rep_format == "csv" ? ReportFormat::CSV : ReportFormat::MARKDOWN,
            !rep_omit_timings);
        if (rep_out.empty()) {
            std::cout << text;
        } else {
            std::ofstream f(rep_out);
            if (!f)
                throw std::runtime_error("cannot open for writing: " + rep_out);
            f << text;
        }
        return 0;
    }

    return 1;  // unreachable: require_subcommand(1)
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    try {
        return do_run(argc, argv);
    } catch (const CLI::ParseError&) {
        return 1;  // ValidationError thrown outside parse()
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace vtmix
