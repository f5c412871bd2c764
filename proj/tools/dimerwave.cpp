#include <CLI11.hpp>

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "dimerwave/config.hpp"
#include "dimerwave/rng.hpp"
#include "dimerwave/errors.hpp"
#include "dimerwave/linear.hpp"
#include "dimerwave/serialize.hpp"
#include "dimerwave/solver.hpp"
#include "dimerwave/verify.hpp"
#include "dimerwave/wave_operator.hpp"

namespace dw = dimerwave;

namespace {

struct CommonArgs {
    std::string config_path;
    std::vector<std::string> params;
    std::string out_dir;
};

void attach_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "JSON config file");
    cmd->add_option("--param", args.params,
                    "dotted-path override, e.g. numerics.truncation=64 (repeatable)");
    cmd->add_option("--out", args.out_dir, "output directory (overrides config)");
}

dw::RunConfig load_config(const CommonArgs& args) {
    std::string text = "{}";
    if (!args.config_path.empty()) {
        std::ifstream in(args.config_path);
        if (!in) throw dw::ConfigError("cannot read config file: " + args.config_path);
        std::ostringstream os;
        os << in.rdbuf();
        text = os.str();
    }
    dw::RunConfig cfg = dw::RunConfig::parse(text, args.params);
    if (!args.out_dir.empty()) cfg.out_dir = args.out_dir;
    return cfg;
}

std::string out_path(const dw::RunConfig& cfg, const std::string& name) {
    return (std::filesystem::path(cfg.out_dir) / name).string();
}

int env_threads() {
    const char* v = std::getenv("DIMERWAVE_THREADS");
    if (v == nullptr) return 1;
    int n = std::atoi(v);
    if (n < 1) return 1;
    unsigned hw = std::thread::hardware_concurrency();
    return std::min<int>(n, hw > 0 ? static_cast<int>(hw) : n);
}

// Index-parallel sweep with deterministic slot-per-index writes.
void parallel_for(int n, const std::function<void(int)>& body) {
    int threads = std::min(env_threads(), n > 0 ? n : 1);
    if (threads <= 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
        });
    for (auto& th : pool) th.join();
}

dw::WaveProblem problem_from(const dw::RunConfig& cfg, double c) {
    return dw::WaveProblem::make(cfg.material, c, cfg.numerics.truncation, cfg.numerics.grid);
}

int run_dispersion(const dw::RunConfig& cfg) {
    double k_min = cfg.task_number("k_min", 0.0);
    double k_max = cfg.task_number("k_max", 3.141592653589793);
    int count = static_cast<int>(cfg.task_integer("count", 100));
    if (count < 2) throw dw::ConfigError("task.count must be >= 2");
    std::vector<std::vector<double>> rows(static_cast<size_t>(count));
    const dw::Material mat = cfg.material;
    parallel_for(count, [&](int i) {
        double K = k_min + (k_max - k_min) * i / (count - 1);
        dw::DispersionPoint d = dw::dispersion(mat, K);
        rows[static_cast<size_t>(i)] = {K, d.lambda_minus, d.lambda_plus, d.rho};
    });
    dw::write_atomic(out_path(cfg, "dispersion.csv"),
                     dw::csv_table({"K", "lambda_minus", "lambda_plus", "rho"}, rows));
    std::cout << "wrote " << out_path(cfg, "dispersion.csv") << "\n";
    return 0;
}

int run_omegac(const dw::RunConfig& cfg) {
    double cs = dw::speed_of_sound(cfg.material);
    std::vector<double> speeds = cfg.task_numbers("speeds", {});
    if (speeds.empty()) {
        for (double r : cfg.task_numbers("speed_ratios", {1.01, 1.1, 1.5, 2.0, 3.0}))
            speeds.push_back(r * cs);
    }
    std::vector<std::vector<double>> rows;
    for (double c : speeds) {
        double wc = dw::critical_frequency(cfg.material, c);
        double lo = std::sqrt(dw::dispersion(cfg.material, 3.141592653589793 / 2.0).lambda_plus) / c;
        double hi = std::sqrt((1.0 + cfg.material.kappa) * (1.0 + cfg.material.w)) / c;
        dw::DispersionPoint d = dw::dispersion(cfg.material, wc);
        double residual = c * c * wc * wc - d.lambda_plus;
        double margin =
            2.0 * c * c * wc + 4.0 * cfg.material.kappa * cfg.material.w * std::sin(2.0 * wc) / d.rho;
        rows.push_back({c, wc, lo, hi, residual, margin});
    }
    dw::write_atomic(
        out_path(cfg, "omegac.csv"),
        dw::csv_table({"c", "omega_c", "bracket_low", "bracket_high", "residual",
                       "transversality_margin"},
                      rows));
    std::cout << "wrote " << out_path(cfg, "omegac.csv") << "\n";
    return 0;
}

int run_kernel(const dw::RunConfig& cfg) {
    double c = std::sqrt(cfg.c2);
    dw::LinearData d = dw::kernel_basis(cfg.material, c, cfg.numerics.truncation);
    dw::write_atomic(out_path(cfg, "kernel.json"), dw::lineardata_to_json(d));
    std::cout << "wrote " << out_path(cfg, "kernel.json") << "\n";
    return 0;
}

int run_solve(const dw::RunConfig& cfg) {
    double c = std::sqrt(cfg.c2);
    dw::WaveProblem p = problem_from(cfg, c);
    dw::LinearData d = dw::kernel_basis(cfg.material, c, p.truncation);
    double a = cfg.task_number("amplitude", 1e-3);
    dw::BranchPoint pt = dw::solve_point(p, d, a, cfg.numerics);
    dw::write_atomic(out_path(cfg, "solve.json"), dw::branch_point_to_json(pt));
    std::cout << "wrote " << out_path(cfg, "solve.json") << " (iterations " << pt.iterations
              << ", residual " << dw::format_double(pt.phi_residual) << ")\n";
    return 0;
}

dw::SolverConfig branch_numerics(const dw::RunConfig& cfg, const dw::WaveProblem& p,
                                 const dw::LinearData& d) {
    dw::SolverConfig numerics = cfg.numerics;
    numerics.amplitudes = cfg.task_numbers("amplitudes", {});
    if (numerics.amplitudes.empty()) {
        double amax = cfg.task_number("amplitude_max", 0.0);
        if (amax <= 0.0) amax = dw::amplitude_cap(p, d);
        int count = static_cast<int>(cfg.task_integer("amplitude_count", 20));
        if (count < 1) throw dw::ConfigError("task.amplitude_count must be >= 1");
        for (int i = 1; i <= count; ++i) numerics.amplitudes.push_back(amax * i / count);
    }
    return numerics;
}

int run_branch(const dw::RunConfig& cfg) {
    double c = std::sqrt(cfg.c2);
    dw::WaveProblem p = problem_from(cfg, c);
    dw::LinearData d = dw::kernel_basis(cfg.material, c, p.truncation);
    dw::Branch br = dw::solve_branch(p, branch_numerics(cfg, p, d));
    dw::write_atomic(out_path(cfg, "branch.json"), dw::branch_to_json(br));
    std::cout << "wrote " << out_path(cfg, "branch.json") << " (" << br.points.size()
              << " points" << (br.truncated ? ", truncated" : "") << ")\n";
    return br.truncated ? 3 : 0;
}

int run_longwave(const dw::RunConfig& cfg) {
    std::vector<double> epsilons = cfg.task_numbers("epsilons", {0.05, 0.1, 0.2});
    std::vector<double> alphas = cfg.task_numbers("alphas", {});
    double cs = dw::speed_of_sound(cfg.material);
    if (alphas.empty()) {
        double alpha_max = 1e300;
        for (double eps : epsilons) {
            double c = std::sqrt(cs * cs + eps * eps);
            dw::WaveProblem p = problem_from(cfg, c);
            dw::LinearData d = dw::kernel_basis(cfg.material, c, p.truncation);
            alpha_max = std::min(alpha_max, dw::amplitude_cap(p, d) / (eps * eps));
        }
        alpha_max *= 0.9;
        int count = static_cast<int>(cfg.task_integer("alpha_count", 5));
        for (int i = 1; i <= count; ++i) alphas.push_back(alpha_max * i / count);
    }
    std::vector<dw::LongWaveBranch> lw =
        dw::longwave_branches(cfg.material, epsilons, alphas, cfg.numerics);
    dw::write_atomic(out_path(cfg, "longwave.json"), dw::longwave_to_json(lw));
    std::cout << "wrote " << out_path(cfg, "longwave.json") << "\n";
    for (const auto& b : lw)
        if (b.branch.truncated) return 3;
    return 0;
}

int run_verify(const dw::RunConfig& cfg) {
    dw::VerifySetup setup;
    setup.material = cfg.material;
    setup.c2 = cfg.c2;
    setup.truncation = cfg.numerics.truncation;
    setup.grid = cfg.numerics.grid;
    setup.seed = cfg.seed;
    std::vector<dw::CriterionResult> results = dw::run_verification(setup);
    bool all = true;
    int i = 0;
    for (const auto& r : results) {
        ++i;
        std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << i << ". " << r.name << " — " << r.detail
                  << "\n";
        all = all && r.pass;
    }
    dw::write_atomic(out_path(cfg, "verify.json"), dw::verify_report_to_json(results));
    std::cout << (all ? "all criteria passed" : "verification FAILED") << "\n";
    return all ? 0 : 4;
}

int run_lattice_check(const dw::RunConfig& cfg) {
    double c = std::sqrt(cfg.c2);
    dw::WaveProblem p = problem_from(cfg, c);
    dw::LinearData d = dw::kernel_basis(cfg.material, c, p.truncation);
    double a = cfg.task_number("amplitude", 1e-3);
    dw::BranchPoint pt = dw::solve_point(p, d, a, cfg.numerics);

    dw::Rng rng(cfg.seed);
    int count = static_cast<int>(cfg.task_integer("samples", 100));
    long long jr = cfg.task_integer("j_range", 50);
    double tmax = cfg.task_number("t_max", 20.0);
    std::vector<dw::LatticeSample> samples;
    for (int s = 0; s < count; ++s) samples.emplace_back(rng.integer(-jr, jr), rng.uniform(0.0, tmax));

    dw::PeriodicField phi = pt.assemble_phi(d);
    dw::ResidualReport rep;
    dw::PeriodicField Phi = dw::phi_op(p, phi, pt.omega);
    rep.phi_residual_l2 = dw::l2_norm(Phi);
    rep.derivative_orthogonality = dw::inner_product(Phi, dw::derivative(phi, 1));
    rep.nu0_orthogonality = dw::inner_product(Phi, d.nu0);
    rep.jc_variation = dw::first_integral(p, phi, pt.omega).max_variation;
    rep.lattice_residual_max = dw::lattice_residual(p, phi, pt.omega, samples);
    dw::write_atomic(out_path(cfg, "lattice_check.json"), dw::residual_report_to_json(rep));
    std::cout << "wrote " << out_path(cfg, "lattice_check.json") << " (max residual "
              << dw::format_double(rep.lattice_residual_max) << ")\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dimerwave: periodic traveling waves of dimer FPUT lattices"};
    app.require_subcommand(1);

    struct Sub {
        const char* name;
        const char* help;
        std::function<int(const dw::RunConfig&)> run;
    };
    const std::vector<Sub> subs = {
        {"dispersion", "tabulate the dispersion branches over a wavenumber grid", run_dispersion},
        {"omegac", "critical frequencies over a speed grid with bracket checks", run_omegac},
        {"kernel", "linearization data (kernel basis, transversality) as JSON", run_kernel},
        {"solve", "solve a single wave at a given amplitude", run_solve},
        {"branch", "solve an amplitude-parametrized branch", run_branch},
        {"longwave", "long-wave sweeps over epsilon and rescaled amplitude", run_longwave},
        {"verify", "run the full certification suite", run_verify},
        {"lattice-check", "Newton-law residual report for a solved wave", run_lattice_check},
    };

    std::vector<CommonArgs> args(subs.size());
    std::vector<CLI::App*> cmds;
    for (size_t i = 0; i < subs.size(); ++i) {
        CLI::App* cmd = app.add_subcommand(subs[i].name, subs[i].help);
        attach_common(cmd, args[i]);
        cmds.push_back(cmd);
    }

    CLI11_PARSE(app, argc, argv);

    for (size_t i = 0; i < subs.size(); ++i) {
        if (!cmds[i]->parsed()) continue;
        try {
            dw::RunConfig cfg = load_config(args[i]);
            return subs[i].run(cfg);
        } catch (const dw::ConfigError& e) {
            std::cerr << "config error: " << e.what() << "\n";
            return 2;
        } catch (const dw::DomainError& e) {
            std::cerr << "config error: " << e.what() << "\n";
            return 2;
        } catch (const dw::NonConvergenceError& e) {
            std::cerr << "solver error: " << e.what() << "\n";
            return 3;
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 1;
        }
    }
    return 0;
}
