// Command line front end: solve variational problems on affine-jump time
// scales, evaluate Euler-Lagrange residuals, and run the calculus identity
// and fundamental-lemma verifications.
//
// Exit codes: 0 success / converged, 1 verification threshold breach,
// 2 input or i/o error, 3 solver did not converge.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tsvar/delta.hpp"
#include "tsvar/errors.hpp"
#include "tsvar/problem_io.hpp"
#include "tsvar/rng.hpp"
#include "tsvar/solver.hpp"
#include "tsvar/variational.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBreach = 1;
constexpr int kExitInput = 2;
constexpr int kExitNotConverged = 3;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt_short(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.4e", v);
    return buf;
}

void write_or_die(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw tsvar::Error("i/o: cannot open '" + path + "' for writing");
    out << content;
    out.flush();
    if (!out) throw tsvar::Error("i/o: failed writing '" + path + "'");
}

tsvar::GridFunction random_grid_function(const tsvar::TimeScalePtr& scale, std::size_t lo,
                                         std::size_t hi, tsvar::Rng& rng) {
    std::vector<double> v(hi - lo + 1);
    for (double& x : v) x = rng.uniform(-1.0, 1.0);
    return tsvar::GridFunction(scale, lo, std::move(v));
}

// ---------------------------------------------------------------------------
// solve
// ---------------------------------------------------------------------------

int cmd_solve(const std::string& problem_path, const std::string& out_path,
              const std::string& report_path) {
    const tsvar::LoadedProblem loaded = tsvar::load_problem(problem_path);
    const tsvar::SolveResult result = tsvar::solve(loaded.problem, loaded.options);

    std::string csv = "index,t,y\n";
    const tsvar::GridFunction& y = result.trajectory;
    for (std::size_t i = 0; i <= loaded.problem.max_index(); ++i) {
        csv += std::to_string(i) + "," + fmt(y.t(i)) + "," + fmt(y.at(i)) + "\n";
    }
    write_or_die(out_path, csv);

    nlohmann::json report;
    report["functional_value"] = result.report.functional_value;
    report["iterations"] = result.report.iterations;
    report["converged"] = result.report.converged;
    report["grad_norm"] = result.report.grad_norm;
    report["max_el_residual"] = result.report.max_el_residual;
    write_or_die(report_path, report.dump(2) + "\n");

    std::cout << (result.report.converged ? "converged" : "not converged") << " after "
              << result.report.iterations << " iterations, functional "
              << fmt(result.report.functional_value) << ", grad sup-norm "
              << fmt_short(result.report.grad_norm) << ", max |EL residual| "
              << fmt_short(result.report.max_el_residual) << "\n";
    return result.report.converged ? kExitOk : kExitNotConverged;
}

// ---------------------------------------------------------------------------
// residual
// ---------------------------------------------------------------------------

std::vector<double> read_trajectory_csv(const std::string& path, std::size_t expected_rows) {
    std::ifstream in(path);
    if (!in) throw tsvar::Error("i/o: cannot read trajectory '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw tsvar::Error("trajectory file is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "index,t,y") {
        throw tsvar::ValidationError("trajectory header must be 'index,t,y', got '" + line +
                                     "'");
    }
    std::vector<double> values;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::size_t c1 = line.find(',');
        const std::size_t c2 = c1 == std::string::npos ? c1 : line.find(',', c1 + 1);
        if (c2 == std::string::npos) {
            throw tsvar::ValidationError("malformed trajectory row '" + line + "'");
        }
        values.push_back(std::strtod(line.c_str() + c2 + 1, nullptr));
    }
    if (values.size() != expected_rows) {
        throw tsvar::ValidationError("row-count mismatch: trajectory has " +
                                     std::to_string(values.size()) + " rows but the scale has " +
                                     std::to_string(expected_rows) + " points");
    }
    return values;
}

int cmd_residual(const std::string& problem_path, const std::string& traj_path,
                 const std::string& out_path) {
    const tsvar::LoadedProblem loaded = tsvar::load_problem(problem_path);
    const tsvar::VariationalProblem& p = loaded.problem;
    std::vector<double> values = read_trajectory_csv(traj_path, p.max_index() + 1);
    const tsvar::GridFunction y(p.scale(), 0, std::move(values));
    const tsvar::GridFunction r = tsvar::el_residual(p, y);

    std::string csv = "index,t,residual\n";
    for (std::size_t i = r.lo(); i <= r.hi(); ++i) {
        csv += std::to_string(i) + "," + fmt(r.t(i)) + "," + fmt(r.at(i)) + "\n";
    }
    write_or_die(out_path, csv);
    std::cout << "max |residual| = " << fmt(r.max_abs()) << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

struct ScaleFlags {
    std::string kind;
    double a = 0.0, b = 1.0;
    long n = 8;
    double t0 = 1.0, q = 2.0;
    long k = 8;
    std::vector<double> points;
};

tsvar::TimeScalePtr scale_from_flags(const ScaleFlags& f) {
    if (f.kind == "uniform") return tsvar::make_uniform(f.a, f.b, static_cast<std::size_t>(f.n));
    if (f.kind == "qscale") return tsvar::make_qscale(f.t0, f.q, static_cast<std::size_t>(f.k));
    if (f.kind == "explicit") return tsvar::make_explicit(f.points);
    throw tsvar::ValidationError("--kind must be uniform, qscale or explicit");
}

int cmd_verify(const std::optional<std::string>& problem_path, const ScaleFlags& flags,
               long trials, std::uint64_t seed) {
    tsvar::TimeScalePtr scale;
    if (problem_path) {
        scale = tsvar::load_problem(*problem_path).problem.scale();
    } else if (!flags.kind.empty()) {
        scale = scale_from_flags(flags);
    } else {
        throw tsvar::ValidationError("verify needs a problem file or --kind scale flags");
    }

    struct Check {
        const char* name;
        double threshold;
        double worst = 0.0;
        std::uint64_t worst_seed = 0;
    };
    std::vector<Check> checks = {
        {"transfor", 1e-12, 0.0, 0},      {"product_rule", 1e-12, 0.0, 0},
        {"by_parts_form1", 1e-10, 0.0, 0}, {"by_parts_form2", 1e-10, 0.0, 0},
        {"commutation", 1e-12, 0.0, 0},
    };

    const std::size_t top = scale->max_index();
    for (long trial = 0; trial < trials; ++trial) {
        const std::uint64_t trial_seed = seed + static_cast<std::uint64_t>(trial);
        tsvar::Rng rng(trial_seed);
        const tsvar::GridFunction f = random_grid_function(scale, 0, top, rng);
        const tsvar::GridFunction g = random_grid_function(scale, 0, top, rng);
        const double r[5] = {
            tsvar::check_transfor(f).relative(),
            tsvar::check_product_rule(f, g).relative(),
            tsvar::check_by_parts(f, g, 1).relative(),
            tsvar::check_by_parts(f, g, 2).relative(),
            tsvar::check_commutation(f).relative(),
        };
        for (int i = 0; i < 5; ++i) {
            if (r[i] > checks[i].worst) {
                checks[i].worst = r[i];
                checks[i].worst_seed = trial_seed;
            }
        }
    }

    bool ok = true;
    std::printf("%-16s %7s %18s %11s %s\n", "identity", "trials", "max_rel_residual",
                "threshold", "status");
    for (const Check& c : checks) {
        const bool pass = c.worst <= c.threshold;
        ok = ok && pass;
        std::printf("%-16s %7ld %18s %11.0e %s\n", c.name, trials, fmt_short(c.worst).c_str(),
                    c.threshold, pass ? "ok" : "FAIL");
    }
    if (!ok) {
        for (const Check& c : checks) {
            if (c.worst > c.threshold) {
                std::cerr << "verify: " << c.name << " residual " << fmt_short(c.worst)
                          << " exceeds " << fmt_short(c.threshold) << " (trial seed "
                          << c.worst_seed << ")\n";
            }
        }
        return kExitBreach;
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// lemma
// ---------------------------------------------------------------------------

int cmd_lemma(const std::string& problem_path, std::uint64_t seed) {
    const tsvar::LoadedProblem loaded = tsvar::load_problem(problem_path);
    const tsvar::VariationalProblem& p = loaded.problem;
    const std::size_t top = p.max_index() - 2 * static_cast<std::size_t>(p.order());

    tsvar::Rng rng(seed);
    const tsvar::GridFunction f = random_grid_function(p.scale(), 0, top, rng);
    const tsvar::LemmaProbe probe = tsvar::fundamental_lemma_probe(p.scale(), p.order(), f);

    double err = 0.0;
    for (std::size_t j = 0; j <= top; ++j) {
        err = std::max(err, std::abs(probe.reconstructed.at(j) - f.at(j)));
    }
    err /= 1.0 + f.max_abs();

    std::cout << "pairings: " << probe.pairings.size() << "\n"
              << "reconstruction error: " << fmt_short(err) << "\n"
              << "kernel verdict: "
              << (probe.kernel_trivial ? "pairings vanish iff f vanishes"
                                       : "MISMATCH between pairings and f")
              << "\n";
    const bool pass = probe.kernel_trivial && err <= 1e-10;
    return pass ? kExitOk : kExitBreach;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"delta calculus and higher-order variational problems on time scales"};
    app.require_subcommand(1);

    std::string problem_path;
    std::string out_path = "traj.csv";
    std::string report_path = "report.json";
    std::string traj_path;
    std::string res_path = "res.csv";
    std::optional<std::string> verify_problem;
    ScaleFlags flags;
    long trials = 100;
    std::uint64_t seed = 0;

    CLI::App* solve = app.add_subcommand("solve", "minimize a problem, write trajectory + report");
    solve->add_option("problem", problem_path, "problem file")->required();
    solve->add_option("--out", out_path, "trajectory CSV path");
    solve->add_option("--report", report_path, "report JSON path");

    CLI::App* residual =
        app.add_subcommand("residual", "Euler-Lagrange residual of a trajectory");
    residual->add_option("problem", problem_path, "problem file")->required();
    residual->add_option("--traj", traj_path, "trajectory CSV (from solve)")->required();
    residual->add_option("--out", res_path, "residual CSV path");

    CLI::App* verify =
        app.add_subcommand("verify", "randomized delta-calculus identity checks");
    verify->add_option("problem", verify_problem, "problem file (scale source)");
    verify->add_option("--kind", flags.kind, "scale kind: uniform | qscale | explicit");
    verify->add_option("--a", flags.a, "uniform: left endpoint");
    verify->add_option("--b", flags.b, "uniform: right endpoint");
    verify->add_option("--n", flags.n, "uniform: subintervals");
    verify->add_option("--t0", flags.t0, "qscale: first point");
    verify->add_option("--q", flags.q, "qscale: ratio");
    verify->add_option("--k", flags.k, "qscale: steps");
    verify->add_option("--points", flags.points, "explicit: point list");
    verify->add_option("--trials", trials, "random trials per identity");
    verify->add_option("--seed", seed, "base seed; trial i uses seed + i");

    CLI::App* lemma = app.add_subcommand("lemma", "fundamental-lemma pairing probe");
    lemma->add_option("problem", problem_path, "problem file")->required();
    lemma->add_option("--seed", seed, "seed for the random probe function");

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) return cmd_solve(problem_path, out_path, report_path);
        if (residual->parsed()) return cmd_residual(problem_path, traj_path, res_path);
        if (verify->parsed()) return cmd_verify(verify_problem, flags, trials, seed);
        if (lemma->parsed()) return cmd_lemma(problem_path, seed);
    } catch (const tsvar::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitInput;
    } catch (const tsvar::HypothesisError& e) {
        std::cerr << "hypothesis violation: " << e.what() << "\n";
        return kExitInput;
    } catch (const tsvar::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitInput;
    } catch (const tsvar::DivergenceError& e) {
        std::cerr << "solver divergence: " << e.what() << "\n";
        return kExitInput;
    } catch (const tsvar::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitInput;
}
