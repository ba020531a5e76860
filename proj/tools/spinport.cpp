// spinport: command-line runner for the teleportation experiments.
//
//   spinport qubit --case I
//   spinport coherent --scheme su11 --n 10 --n-theta 40
//   spinport prior-sweep --n 10 --betas 0,1,4,16
//   spinport unequal --n 10 --n-a 9,10,11
//   spinport dicke --n 10 --excitations 0,1,2
//   spinport bench --curve fcl
//
// Exit codes: 0 success, 1 configuration error, 2 runtime error.

#include "spinport/spinport.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace fs = std::filesystem;
using namespace spinport;

namespace {

struct Common {
    std::string config;
    std::string out = "out";
    int n_theta = 40;
    bool paper_mode = false;
    unsigned threads = 0;
    double beta = 0.0;
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--config", c.config, "JSON config file (keys overlay the flags)");
    sub->add_option("--out", c.out, "output directory")->capture_default_str();
    sub->add_option("--n-theta", c.n_theta, "theta samples on the input grid")->capture_default_str();
    sub->add_flag("--paper-mode", c.paper_mode, "full-density grid (n_theta = 200)");
    sub->add_option("--threads", c.threads, "worker threads (0 = all cores)");
    sub->add_option("--beta", c.beta, "von Mises-Fisher prior concentration (0 = uniform)");
}

ExperimentConfig finish(Scenario s, const Common& c) {
    s.grid.n_theta = c.paper_mode ? 200 : c.n_theta;
    s.prior = Prior::von_mises_fisher(c.beta);
    ExperimentConfig cfg;
    try {
        s.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    cfg = c.config.empty() ? ExperimentConfig{s} : load_config(c.config, s);
    if (c.config.empty() || cfg.output_dir == ".") cfg.output_dir = c.out;
    if (c.threads) cfg.threads = c.threads;
    return cfg;
}

double benchmark_for(const Scenario& s) {
    if (s.scheme == Scheme::qubit_bell) return qubit_classical_limit();
    // Occupation counted from the pole where the prior peaks.
    return classical_fidelity_coherent(vmf_mean_occupation(s.n_c, std::abs(s.prior.beta())));
}

int run_build(const ExperimentConfig& cfg) {
    const Scenario& s = cfg.scenario;
    const LibraryBuild build = build_library(s, cfg.threads);
    FidelityReport rep = evaluate_teleportation(build.library, s, build.inputs, cfg.threads);
    attach_optimized(rep, build);
    rep.set_benchmark(benchmark_for(s));

    write_text(cfg.output_dir / "raw.csv", raw_csv(rep));
    write_text(cfg.output_dir / "inputs.csv", input_csv(rep));
    write_text(cfg.output_dir / "summary.csv", summary_csv(rep, build.unconverged));
    save_library(build.library, cfg.output_dir / "library.json");

    std::cout << "inputs " << build.inputs.size() << ", pairs " << build.raw.size() << ", library entries "
              << build.library.entries.size() << "\n"
              << "grand mean " << fmt12(rep.grand_mean) << ", benchmark " << fmt12(rep.benchmark)
              << ", fraction above " << fmt12(rep.fraction_above_benchmark) << "\n"
              << "pairs above 0.8: " << fmt12(build.fraction_pairs_above(0.8)) << ", unconverged "
              << build.unconverged << "\n";
    return 0;
}

int run_prior_sweep(const ExperimentConfig& cfg, const std::vector<double>& betas) {
    const Scheme schemes[] = {Scheme::su11, Scheme::su2, Scheme::not_gate};
    std::vector<SweepRow> rows(betas.size());
    const int n = cfg.scenario.n_c;
    for (std::size_t b = 0; b < betas.size(); ++b) {
        rows[b].beta = betas[b];
        rows[b].mean_n = vmf_mean_occupation(n, std::abs(betas[b]));
        rows[b].f_cl = classical_fidelity_coherent(rows[b].mean_n);
    }
    for (Scheme scheme : schemes) {
        Scenario s = coherent_scenario(scheme, n, cfg.scenario.grid.n_theta);
        s.optimizer = cfg.scenario.optimizer;
        s.probability_weighted_averaging = cfg.scenario.probability_weighted_averaging;
        // Optimized angles do not depend on the prior; only the averaging weights do.
        const LibraryBuild build = build_library(s, cfg.threads);
        for (std::size_t b = 0; b < betas.size(); ++b) {
            s.prior = Prior::von_mises_fisher(favored_pole(scheme) * std::abs(betas[b]));
            const AngleLibrary lib = average_library(build.raw, s);
            const double f = evaluate_teleportation(lib, s, build.inputs, cfg.threads).grand_mean;
            (scheme == Scheme::su11 ? rows[b].fidelity_su11
                                    : scheme == Scheme::su2 ? rows[b].fidelity_su2 : rows[b].fidelity_not) = f;
        }
        std::cout << to_string(scheme) << " done\n";
    }
    write_text(cfg.output_dir / "prior_sweep.csv", sweep_csv(rows));
    for (const auto& r : rows)
        std::cout << "beta " << fmt12(r.beta) << "  <n> " << fmt12(r.mean_n) << "  su11 " << fmt12(r.fidelity_su11)
                  << "  su2 " << fmt12(r.fidelity_su2) << "  not " << fmt12(r.fidelity_not) << "  F_cl "
                  << fmt12(r.f_cl) << "\n";
    return 0;
}

int run_unequal(const ExperimentConfig& cfg, const std::vector<int>& n_a_values) {
    const Scenario& base = cfg.scenario;
    const LibraryBuild build = build_library(base, cfg.threads);
    save_library(build.library, cfg.output_dir / "library.json");
    std::vector<UnequalRow> rows;
    for (int n_a : n_a_values) {
        Scenario s = base;
        s.n_a = n_a;
        FidelityReport rep = evaluate_teleportation(build.library, s, build.inputs, cfg.threads);
        rep.set_benchmark(benchmark_for(s));
        write_text(cfg.output_dir / ("inputs_na" + std::to_string(n_a) + ".csv"), input_csv(rep));
        rows.push_back({s.n_a, s.n_b, s.n_c, rep.grand_mean, rep.fraction_above_benchmark});
        std::cout << "N_A " << n_a << "  grand mean " << fmt12(rep.grand_mean) << "\n";
    }
    write_text(cfg.output_dir / "unequal.csv", unequal_csv(rows));
    return 0;
}

int run_dicke(const ExperimentConfig& cfg, const std::vector<int>& excitations) {
    const Scenario& base = cfg.scenario;
    const LibraryBuild build = build_library(base, cfg.threads);
    save_library(build.library, cfg.output_dir / "library.json");
    std::vector<DickeRow> rows;
    for (int n : excitations) {
        Scenario s = base;
        s.input = InputFamily::dicke(n);
        FidelityReport rep = evaluate_teleportation(build.library, s, build.inputs, cfg.threads);
        const double fc = dicke_classical_fidelity(s.n_c, n);
        rep.set_benchmark(fc);
        write_text(cfg.output_dir / ("inputs_dicke" + std::to_string(n) + ".csv"), input_csv(rep));
        rows.push_back({n, fc, rep.grand_mean, rep.fraction_above_benchmark, rep.fraction_above_in_region(fc)});
        std::cout << "n " << n << "  F_classical " << fmt12(fc) << "  grand mean " << fmt12(rep.grand_mean)
                  << "  above " << fmt12(rows.back().fraction_above_classical) << "  above (region) "
                  << fmt12(rows.back().fraction_above_classical_in_region) << "\n";
    }
    write_text(cfg.output_dir / "dicke.csv", dicke_csv(rows));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Learned teleportation protocols for collective spins"};
    app.require_subcommand(1);

    Common common;

    std::string qcase = "I";
    auto* qubit = app.add_subcommand("qubit", "single-qubit teleportation through a Bell measurement");
    qubit->add_option("--case", qcase, "I (exact start), II (fixed start), III (two-axis)")
        ->check(CLI::IsMember({"I", "II", "III"}))
        ->capture_default_str();

    std::string scheme = "su11";
    int n = 10;
    auto* coherent = app.add_subcommand("coherent", "N-particle coherent-state teleportation");
    coherent->add_option("--scheme", scheme, "su11 | su2 | not")
        ->check(CLI::IsMember({"su11", "su2", "not"}))
        ->capture_default_str();
    coherent->add_option("--n", n, "particles in A, B and C")->check(CLI::Range(1, 64))->capture_default_str();

    std::vector<double> betas{0.0, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0};
    auto* sweep = app.add_subcommand(
        "prior-sweep", "grand mean against prior concentration, all schemes; each prior peaks at the scheme's favored pole");
    sweep->add_option("--n", n, "particles")->check(CLI::Range(1, 64))->capture_default_str();
    sweep->add_option("--betas", betas, "prior concentrations")->delimiter(',');

    std::vector<int> n_a_values{9, 10, 11};
    auto* unequal = app.add_subcommand("unequal", "library built at equal N, evaluated with other N_A");
    unequal->add_option("--n", n, "particles in B and C (and A when building)")->check(CLI::Range(1, 64))
        ->capture_default_str();
    unequal->add_option("--n-a", n_a_values, "particle numbers of A at evaluation")->delimiter(',');

    std::vector<int> excitations{0, 1, 2};
    auto* dicke = app.add_subcommand("dicke", "rotated Dicke inputs with a coherent-state library");
    dicke->add_option("--n", n, "particles")->check(CLI::Range(1, 64))->capture_default_str();
    dicke->add_option("--excitations", excitations, "Dicke excitation numbers")->delimiter(',');

    std::string curve = "fcl";
    std::vector<double> mean_n{0.0, 0.25, 0.5, 1.0, 2.0, 3.0, 4.0, 5.0};
    auto* bench = app.add_subcommand("bench", "classical benchmark curves");
    bench->add_option("--curve", curve, "fcl (coherent, vs <n>) | dicke (vs n)")
        ->check(CLI::IsMember({"fcl", "dicke"}))
        ->capture_default_str();
    bench->add_option("--mean-n", mean_n, "<n> values for the fcl curve")->delimiter(',');
    bench->add_option("--n", n, "particles for the dicke curve")->check(CLI::Range(1, 170))->capture_default_str();
    bench->add_option("--out", common.out, "output directory")->capture_default_str();

    for (auto* sub : {qubit, coherent, sweep, unequal, dicke}) add_common(sub, common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (bench->parsed()) {
            const fs::path out = common.out;
            if (curve == "fcl") {
                write_text(out / "bench_fcl.csv", curve_csv(coherent_benchmark_curve(mean_n), "mean_n", "f_cl"));
                std::cout << "wrote " << (out / "bench_fcl.csv").string() << "\n";
            } else {
                write_text(out / "bench_dicke.csv", curve_csv(dicke_benchmark_curve(n), "n", "f_classical"));
                std::cout << "wrote " << (out / "bench_dicke.csv").string() << "\n";
            }
            return 0;
        }
        if (qubit->parsed()) return run_build(finish(qubit_scenario(parse_qubit_case(qcase)), common));
        if (coherent->parsed()) return run_build(finish(coherent_scenario(parse_scheme(scheme), n), common));
        if (sweep->parsed()) {
            for (double b : betas)
                if (!std::isfinite(b)) throw ConfigError("betas must be finite");
            return run_prior_sweep(finish(coherent_scenario(Scheme::su11, n), common), betas);
        }
        if (unequal->parsed()) {
            for (int v : n_a_values)
                if (v < 1) throw ConfigError("--n-a values must be >= 1");
            return run_unequal(finish(coherent_scenario(Scheme::su11, n), common), n_a_values);
        }
        if (dicke->parsed()) {
            for (int v : excitations)
                if (v < 0 || v > n) throw ConfigError("--excitations must lie in [0, n]");
            return run_dicke(finish(coherent_scenario(Scheme::su11, n), common), excitations);
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
