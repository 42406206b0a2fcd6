// Command-line laboratory for the conditional-oracle simulators: property
// testers, ratio-comparison demos, scaling sweeps, calibration, and numeric
// verification of the library's closed forms.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qcond/qcond.hpp"

namespace {

using namespace qcond;

struct GlobalOptions {
    std::uint64_t seed = 1;
    std::string backend = "emulator";
    std::string out;
    int threads = 1;
    std::string config;
    std::string calibration_path;

    Backend make_backend() const { return backend_from_name(backend); }

    Calibration load_calibration() const {
        if (!calibration_path.empty()) return Calibration::load(calibration_path);
        if (std::filesystem::exists("calibration.json")) {
            return Calibration::load("calibration.json");
        }
        return Calibration{};
    }
};

int g_failed_checks = 0;

void report(const std::string &name, bool pass, const std::string &detail = "") {
    std::cout << (pass ? "[PASS] " : "[FAIL] ") << name;
    if (!detail.empty()) std::cout << "  " << detail;
    std::cout << '\n';
    g_failed_checks += !pass;
}

std::ofstream open_out(const std::string &path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write output file: " + path);
    return out;
}

UniformityOptions tester_options(const Calibration &cal, CompareEngine engine) {
    UniformityOptions options;
    options.c_u = cal.uniformity_cu;
    options.c_eta = cal.uniformity_ceta;
    options.c_p = cal.uniformity_cp;
    options.qcompare_cq = cal.qcompare_cq;
    options.classical_cc = cal.classical_cc;
    options.engine = engine;
    return options;
}

// ---------------------------------------------------------------------------
// calibrate

int run_calibrate(const GlobalOptions &global, int estimator_trials, int compare_trials) {
    const auto cal = run_full_calibration(RngStream(global.seed), estimator_trials,
                                          compare_trials);
    std::cout << "additive_c        = " << cal.additive_c << '\n'
              << "multiplicative_c  = " << cal.multiplicative_c << '\n'
              << "qcompare_cq       = " << cal.qcompare_cq << '\n'
              << "classical_cc      = " << cal.classical_cc << '\n';

    const auto rates = measure_uniformity_rates(64, 1, 4, 300, Backend::emulator(),
                                                RngStream(global.seed).substream(5),
                                                tester_options(cal, CompareEngine::Quantum));
    std::cout << "uniformity completeness(N=64, eps=1/4) = " << rates.completeness << '\n'
              << "uniformity soundness(N=64, eps=1/4)    = " << rates.soundness << '\n';
    report("uniformity constants reach 2/3 correctness",
           rates.completeness >= 2.0 / 3.0 && rates.soundness >= 2.0 / 3.0);

    const std::string path = global.out.empty() ? "calibration.json" : global.out;
    cal.save(path);
    std::cout << "wrote " << path << '\n';
    return g_failed_checks ? 1 : 0;
}

// ---------------------------------------------------------------------------
// verify-appendix

struct ReportWriter {
    std::ofstream file;
    bool enabled = false;

    void open(const std::string &dir, const std::string &name) {
        if (dir.empty()) return;
        std::filesystem::create_directories(dir);
        file = open_out(dir + "/" + name);
        file << "check_name,n_or_m,value,bound_or_oracle,pass\n";
        enabled = true;
    }

    void row(const std::string &check, double n_or_m, double value, double oracle, bool pass) {
        if (!enabled) return;
        file << check << ',' << n_or_m << ',' << value << ',' << oracle << ',' << (pass ? 1 : 0)
             << '\n';
    }
};

int run_verify_appendix(const GlobalOptions &global, std::int64_t n_max,
                        std::uint64_t mc_samples) {
    RngStream root(global.seed);
    ReportWriter writer;
    writer.open(global.out, "appendix_report.csv");

    // Closed form at the base case.
    {
        const bool pass = alternating_moment(2) == 0.5;
        report("alternating-sum mean closed form at n=2 equals 1/2", pass);
        writer.row("alt_moment_base_case", 2, alternating_moment(2), 0.5, pass);
    }

    // Closed form vs Monte Carlo.
    {
        bool all = true;
        for (std::int64_t n = 2; n <= n_max; n += 2) {
            auto rng = root.substream(static_cast<std::uint64_t>(n), 1);
            const auto mc = alternating_moment_mc(n, mc_samples, rng);
            const double closed = alternating_moment(n);
            const bool pass = std::abs(mc.mean - closed) <= 3.0 * mc.std_error;
            writer.row("alt_moment_closed_vs_mc", static_cast<double>(n), mc.mean, closed, pass);
            all = all && pass;
        }
        report("closed form matches Monte Carlo (3 sigma) for even n <= " +
                   std::to_string(n_max),
               all);
    }

    // Lower bound 1/(2 sqrt(n)).
    {
        bool all = true;
        for (std::int64_t n = 2; n <= 10000; n += 2) {
            all = all && alternating_moment(n) > 0.5 / std::sqrt(static_cast<double>(n));
        }
        report("closed form exceeds 1/(2 sqrt(n)) for even n <= 10^4", all);
        writer.row("alt_moment_lower_bound", 10000, alternating_moment(10000),
                   0.5 / std::sqrt(10000.0), all);
    }

    // Asymptotic value.
    {
        const double asym = std::sqrt(2.0 / M_PI) / std::sqrt(1000.0);
        const bool pass = std::abs(alternating_moment(1000) - asym) <= 0.02 * asym;
        report("closed form at n=1000 within 2% of sqrt(2/pi)/sqrt(n)", pass);
        writer.row("alt_moment_asymptotic", 1000, alternating_moment(1000), asym, pass);
    }

    // Greedy alternating-sum bound against the brute-force oracle.
    {
        bool all = true;
        auto rng = root.substream(2);
        for (std::size_t n : {2u, 4u, 6u, 8u, 10u}) {
            for (int trial = 0; trial < 200; ++trial) {
                std::vector<std::int64_t> raw(n);
                std::int64_t total = 0;
                for (auto &x : raw) {
                    x = static_cast<std::int64_t>(rng.uniform_int(257)) - 128;
                    total += x;
                }
                raw[0] -= total;
                std::vector<double> d(n);
                for (std::size_t i = 0; i < n; ++i) d[i] = static_cast<double>(raw[i]) / 128.0;
                const auto greedy = alternating_max_greedy(d);
                bool pass = greedy.value >= l1_norm(d) / 2.0;
                if (n <= 8) pass = pass && greedy.value <= alternating_max_brute(d) + 1e-12;
                all = all && pass;
            }
            writer.row("alternating_max_greedy_bound", static_cast<double>(n), 1, 1, all);
        }
        report("greedy alternating sum in [eta/2, brute-force max] on 1000 random vectors", all);
    }

    // Incomplete-Beta block identity.
    {
        bool all = true;
        for (int m = 0; m <= 20; ++m) {
            const auto res = beta_block_check(m);
            writer.row("beta_block", m, res.lhs, res.rhs, res.pass);
            all = all && res.pass;
        }
        report("incomplete-Beta block identity for m in [0, 20] (rel. 1e-8)", all);
    }

    // Divided differences against the simplex-integral identity.
    {
        auto rng = root.substream(3);
        const std::vector<std::vector<double>> point_sets = {
            {0.0, 0.5, 1.0}, {0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0}};
        bool all = true;
        for (const auto &points : point_sets) {
            const double exact = divided_difference(points, [](double x) { return std::exp(x); });
            const auto mc = hermite_genocchi_mc(
                points, [](double x) { return std::exp(x); }, mc_samples, rng);
            const bool pass = std::abs(mc.mean - exact) <= 3.0 * mc.std_error;
            writer.row("divided_difference_simplex", static_cast<double>(points.size()), mc.mean,
                       exact, pass);
            all = all && pass;
        }
        report("divided differences match simplex Monte Carlo integral (exp)", all);
    }

    return g_failed_checks ? 1 : 0;
}

// ---------------------------------------------------------------------------
// test-uniformity / test-balance

int run_distribution_tester(const GlobalOptions &global, const Distribution &dist, double epsilon,
                            int trials, CompareEngine engine, const std::string &expect) {
    const auto cal = global.load_calibration();
    const Backend backend = global.make_backend();
    const auto options = tester_options(cal, engine);
    std::vector<int> far_flags(static_cast<std::size_t>(trials), 0);
    std::vector<std::uint64_t> queries(static_cast<std::size_t>(trials), 0);
    const RngStream root(global.seed);
    parallel_for(static_cast<std::size_t>(trials), global.threads, [&](std::size_t t) {
        auto rng = root.substream(t);
        QueryLedger ledger;
        far_flags[t] = uniformity_test(dist, epsilon, backend, rng, ledger, options) ==
                       Verdict::Far;
        queries[t] = ledger.total();
    });
    int far = 0;
    double mean_queries = 0;
    for (int t = 0; t < trials; ++t) {
        far += far_flags[static_cast<std::size_t>(t)];
        mean_queries += static_cast<double>(queries[static_cast<std::size_t>(t)]);
    }
    mean_queries /= std::max(1, trials);
    std::cout << "Equal: " << trials - far << "  Far: " << far
              << "  mean queries: " << mean_queries << '\n';
    if (!expect.empty()) {
        const bool want_far = expect == "far";
        const int matching = want_far ? far : trials - far;
        report("majority verdict is " + expect, 3 * matching >= 2 * trials);
    }
    return g_failed_checks ? 1 : 0;
}

// ---------------------------------------------------------------------------
// test-spectrum

int run_test_spectrum(const GlobalOptions &global, const std::string &state_path, double epsilon,
                      double k_factor, double l_factor, int trials, const std::string &expect) {
    const auto rho = load_density_matrix(state_path);
    const auto cal = global.load_calibration();
    const Backend backend = global.make_backend();
    const SpectrumConstants constants{k_factor, l_factor};
    const auto options = tester_options(cal, CompareEngine::Quantum);
    int far = 0;
    std::uint64_t total_queries = 0;
    for (int t = 0; t < trials; ++t) {
        auto rng = RngStream(global.seed).substream(static_cast<std::uint64_t>(t));
        QueryLedger ledger;
        far += maximally_mixed_test(rho, epsilon, constants, backend, rng, ledger, options) ==
               Verdict::Far;
        total_queries += ledger.total();
    }
    std::cout << "Equal: " << trials - far << "  Far: " << far << "  mean oracle queries: "
              << (trials ? total_queries / static_cast<std::uint64_t>(trials) : 0) << '\n';
    std::cout << "note: query totals are reported, not fitted; the dimension range is too small"
                 " for an asymptotic fit\n";
    if (!expect.empty()) {
        const bool want_far = expect == "far";
        const int matching = want_far ? far : trials - far;
        report("majority verdict is " + expect, 3 * matching >= 2 * trials);
    }
    return g_failed_checks ? 1 : 0;
}

// ---------------------------------------------------------------------------
// compare-demo

int run_compare_demo(const GlobalOptions &global, double k, double eta, double delta,
                     double custom_ratio, int trials, bool classical) {
    const auto cal = global.load_calibration();
    const CompareParams params{k, eta, delta};
    params.validate();

    std::vector<CompareRegime> regimes;
    if (custom_ratio > 0.0) {
        // Express the requested ratio as a small fraction.
        const std::uint64_t den = 1000;
        const auto num = static_cast<std::uint64_t>(std::llround(custom_ratio * den));
        if (num == 0) throw ConfigError("compare-demo: ratio too small");
        regimes.push_back({"custom", den, num, CompareRegime::Want::RatioOnly});
    } else {
        regimes = canonical_regimes(k);
    }

    std::ostream *outp = &std::cout;
    std::ofstream file;
    if (!global.out.empty()) {
        file = open_out(global.out);
        outp = &file;
    }
    *outp << "regime,low,high,ratio_ok,ratio_bad,queries_mean\n";
    for (std::size_t g = 0; g < regimes.size(); ++g) {
        const auto &regime = regimes[g];
        const Distribution d = regime.instance();
        int low = 0, high = 0, ratio_ok = 0, ratio_bad = 0;
        std::uint64_t queries = 0;
        for (int t = 0; t < trials; ++t) {
            auto rng = RngStream(global.seed).substream(g, static_cast<std::uint64_t>(t));
            QueryLedger ledger;
            const auto out =
                classical ? classical_compare(d, QuerySet::single(0), QuerySet::single(1), params,
                                              rng, ledger, cal.classical_cc)
                          : qcompare(d, QuerySet::single(0), QuerySet::single(1), params,
                                     global.make_backend(), rng, ledger, cal.qcompare_cq);
            queries += ledger.total();
            if (out.is_low()) ++low;
            else if (out.is_high()) ++high;
            else if (out.ratio >= (1 - eta) * regime.ratio() &&
                     out.ratio <= (1 + eta) * regime.ratio()) ++ratio_ok;
            else ++ratio_bad;
        }
        *outp << regime.name << ',' << low << ',' << high << ',' << ratio_ok << ',' << ratio_bad
              << ',' << (trials ? queries / static_cast<std::uint64_t>(trials) : 0) << '\n';
    }
    return 0;
}

// ---------------------------------------------------------------------------
// bench-scaling

int run_bench_scaling(const GlobalOptions &global, ExperimentConfig cfg) {
    cfg.calibration = global.load_calibration();
    std::ofstream file;
    std::ostream *csv = nullptr;
    if (!cfg.out_path.empty()) {
        file = open_out(cfg.out_path);
        csv = &file;
    }
    const auto rows = run_sweep(cfg, csv);
    const auto fit = fit_loglog_slope(rows);
    std::cout << "task " << cfg.task << ": log-log slope of queries vs 1/eps = " << fit.slope
              << "  (r^2 = " << fit.r2 << ")\n";
    return 0;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"qcond: conditional-sampling oracle laboratory"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand name

    GlobalOptions global;
    app.add_option("--seed", global.seed, "root random seed");
    app.add_option("--backend", global.backend, "oracle backend: exact|emulator");
    app.add_option("--out", global.out, "output file or directory");
    app.add_option("--threads", global.threads, "worker threads for trial loops");
    app.add_option("--config", global.config, "experiment config JSON (bench-scaling)");
    app.add_option("--calibration", global.calibration_path,
                   "calibration JSON (default: ./calibration.json if present)");

    // calibrate
    auto *calibrate = app.add_subcommand("calibrate", "rebuild calibration.json");
    int estimator_trials = 2000, compare_trials = 500;
    calibrate->add_option("--trials", estimator_trials, "trials per estimator grid point");
    calibrate->add_option("--compare-trials", compare_trials, "trials per comparison regime");

    // verify-appendix
    auto *verify = app.add_subcommand("verify-appendix",
                                      "numeric verification of the closed-form identities");
    std::int64_t n_max = 64;
    std::uint64_t mc_samples = 100000;
    verify->add_option("--n-max", n_max, "largest even n for the Monte Carlo cross-check");
    verify->add_option("--mc-samples", mc_samples, "Monte Carlo samples per check");

    // test-uniformity
    auto *uniformity = app.add_subcommand("test-uniformity", "uniformity property tester");
    std::string dist_path, expect;
    double epsilon = 0.25;
    int trials = 100;
    bool classical = false;
    uniformity->add_option("--dist", dist_path, "distribution JSON")->required();
    uniformity->add_option("--epsilon", epsilon, "distance parameter");
    uniformity->add_option("--trials", trials, "independent runs");
    uniformity->add_flag("--classical", classical, "use the classical comparison baseline");
    uniformity->add_option("--expect", expect, "assert majority verdict: equal|far");

    // test-balance
    auto *balance = app.add_subcommand("test-balance", "boolean balance tester");
    std::string fn_path, balance_expect;
    double balance_epsilon = 0.5;
    int balance_trials = 100;
    balance->add_option("--fn", fn_path, "truth table JSON")->required();
    balance->add_option("--epsilon", balance_epsilon, "distance parameter");
    balance->add_option("--trials", balance_trials, "independent runs");
    balance->add_option("--expect", balance_expect, "assert majority verdict: equal|far");

    // test-spectrum
    auto *spectrum = app.add_subcommand("test-spectrum", "maximally-mixed-state tester");
    std::string state_path, spectrum_expect;
    double spectrum_epsilon = 1.0, k_factor = 32.0, l_factor = 128.0;
    int spectrum_trials = 1;
    spectrum->add_option("--state", state_path, "density matrix JSON")->required();
    spectrum->add_option("--epsilon", spectrum_epsilon, "trace-distance parameter");
    spectrum->add_option("--k-factor", k_factor, "bases = ceil(k_factor sqrt(n))");
    spectrum->add_option("--l-factor", l_factor, "runs per basis = ceil(l_factor log2 n)");
    spectrum->add_option("--trials", spectrum_trials, "independent runs");
    spectrum->add_option("--expect", spectrum_expect, "assert majority verdict: equal|far");

    // compare-demo
    auto *compare = app.add_subcommand("compare-demo", "ratio-comparison outcome histograms");
    double k = 2.0, eta = 0.1, delta = 0.1, custom_ratio = 0.0;
    int compare_demo_trials = 400;
    bool compare_classical = false;
    compare->add_option("--K", k, "ratio cutoff parameter");
    compare->add_option("--eta", eta, "relative precision");
    compare->add_option("--delta", delta, "failure probability");
    compare->add_option("--ratio", custom_ratio, "run one custom ratio instead of all regimes");
    compare->add_option("--trials", compare_demo_trials, "trials per regime");
    compare->add_flag("--classical", compare_classical, "use the classical baseline");

    // bench-scaling
    auto *bench = app.add_subcommand("bench-scaling", "query-count scaling sweeps");
    std::string bench_task = "uniformity";
    std::vector<double> bench_epsilons = {0.4, 0.2, 0.1, 0.05};
    std::uint32_t bench_n = 64;
    int bench_trials = 100;
    bench->add_option("--task", bench_task, "uniformity | uniformity-classical");
    bench->add_option("--epsilons", bench_epsilons, "epsilon grid");
    bench->add_option("--N", bench_n, "domain size");
    bench->add_option("--trials", bench_trials, "trials per grid point");

    try {
        app.parse(argc, argv);

        if (*calibrate) return run_calibrate(global, estimator_trials, compare_trials);
        if (*verify) return run_verify_appendix(global, n_max, mc_samples);
        if (*uniformity) {
            return run_distribution_tester(
                global, load_distribution(dist_path), epsilon, trials,
                classical ? CompareEngine::Classical : CompareEngine::Quantum, expect);
        }
        if (*balance) {
            const auto f = load_boolean_function(fn_path);
            return run_distribution_tester(global, function_to_distribution(f), balance_epsilon,
                                           balance_trials, CompareEngine::Quantum,
                                           balance_expect);
        }
        if (*spectrum) {
            return run_test_spectrum(global, state_path, spectrum_epsilon, k_factor, l_factor,
                                     spectrum_trials, spectrum_expect);
        }
        if (*compare) {
            return run_compare_demo(global, k, eta, delta, custom_ratio, compare_demo_trials,
                                    compare_classical);
        }
        if (*bench) {
            ExperimentConfig cfg;
            if (!global.config.empty()) {
                std::ifstream in(global.config);
                if (!in) throw ConfigError("cannot open config: " + global.config);
                nlohmann::json j;
                in >> j;
                cfg = ExperimentConfig::from_json(j);
            } else {
                cfg.task = bench_task;
                cfg.epsilons = bench_epsilons;
                cfg.domain_sizes = {bench_n};
                cfg.trials = bench_trials;
            }
            cfg.seed = global.seed;
            cfg.threads = global.threads;
            cfg.backend = global.make_backend().kind;
            if (!global.out.empty()) cfg.out_path = global.out;
            cfg.validate();
            return run_bench_scaling(global, cfg);
        }
        return 0;
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const ConfigError &e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const Error &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
