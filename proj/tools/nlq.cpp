// nlq: solve SAT variants with simulated nonlinear qubit gates and emit plot data.
//
// Exit codes: 0 ok, 1 --verify mismatch, 2 parse or usage error, 3 resource cap, 4 contract.

#include <fnmatch.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nlq/nlq.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitMismatch = 1;
constexpr int kExitParse = 2;
constexpr int kExitResource = 3;
constexpr int kExitContract = 4;

struct SolveArgs {
    std::vector<std::string> files;
    std::string glob;
    double g = 1.0;
    double eps = nlq::kDefaultEpsilon;
    std::uint64_t seed = 0;
    std::string mode = "analytic";
    std::string readout = "sign";
    int reps = 11;
    bool verify = false;
    bool promise = false;
    std::string format = "json";
    std::string out;
};

struct TrajectoryArgs {
    std::string model = "pitchfork";
    double theta0 = 1.0;
    double phi0 = 0.0;
    int n = 0;
    int s = 0;
    std::optional<double> gt;
    std::optional<double> torsion_b;
    double g = 1.0;
    double step_control = nlq::kDefaultStepControl;
    bool field_grid = false;
    std::string out;
};

struct BenchArgs {
    int n_min = 1;
    int n_max = 60;
    std::vector<double> eps{nlq::kDefaultEpsilon};
    double g = 1.0;
    std::string format = "csv";
    std::string out;
};

struct EncodeArgs {
    std::string file;
    std::uint64_t seed = 0;
    std::string out;
};

struct GridArgs {
    std::string model = "morse-smale";
    double g = 1.0;
    double torsion_b = 0.5;
    std::string out;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw nlq::ParseError(0, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw nlq::ParseError(0, "cannot write '" + out_path + "'");
    out << text;
}

// Files matching a shell pattern in its parent directory, sorted by path.
std::vector<std::string> expand_glob(const std::string& pattern) {
    const fs::path p(pattern);
    const fs::path dir = p.has_parent_path() ? p.parent_path() : fs::path(".");
    std::vector<std::string> hits;
    if (!fs::is_directory(dir)) return hits;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const std::string name = entry.path().filename().string();
        if (::fnmatch(p.filename().string().c_str(), name.c_str(), 0) == 0) {
            hits.push_back((p.has_parent_path() ? entry.path() : entry.path().filename()).string());
        }
    }
    return hits;
}

nlq::SolverOptions solver_options(const SolveArgs& a) {
    nlq::SolverOptions opts;
    opts.g = a.g;
    opts.eps = a.eps;
    opts.mode = a.mode == "circuit" ? nlq::PrepMode::circuit : nlq::PrepMode::analytic;
    opts.readout.mode = a.readout == "sampled" ? nlq::ReadoutMode::sampled : nlq::ReadoutMode::sign;
    opts.readout.repetitions = a.reps;
    opts.readout.seed = a.seed;
    return opts;
}

int run_solve(nlq::ProblemKind kind, const SolveArgs& a) {
    if (kind == nlq::ProblemKind::unique && !a.promise && !a.verify) {
        throw nlq::ContractError("unique requires --promise (at most one solution) or --verify");
    }
    std::vector<std::string> files = a.files;
    if (!a.glob.empty()) {
        const auto hits = expand_glob(a.glob);
        files.insert(files.end(), hits.begin(), hits.end());
    }
    if (files.empty()) throw nlq::ParseError(0, "no input files");
    std::sort(files.begin(), files.end());
    files.erase(std::unique(files.begin(), files.end()), files.end());

    const auto opts = solver_options(a);
    int status = kExitOk;
    nlq::Json batch = nlq::Json::array();
    nlq::Json single;
    for (const auto& path : files) {
        const auto formula = nlq::parse_dimacs(read_file(path));
        nlq::SolveReport report;
        std::uint64_t expected = 0;
        if (a.verify) {
            const auto s = nlq::count_solutions(formula).s;
            if (kind == nlq::ProblemKind::unique && s > 1) {
                throw nlq::ContractError(path + ": promise violated, formula has " + std::to_string(s) +
                                         " solutions");
            }
            expected = kind == nlq::ProblemKind::decide ? (s > 0 ? 1 : 0) : s;
        }
        switch (kind) {
        case nlq::ProblemKind::unique: report = nlq::solve_unique_sat(formula, opts); break;
        case nlq::ProblemKind::decide: report = nlq::solve_decision(formula, opts); break;
        case nlq::ProblemKind::count: report = nlq::count_sat(formula, opts); break;
        }
        auto j = nlq::to_json(report);
        if (a.verify) {
            j["verified"] = report.answer == expected;
            if (report.answer != expected) {
                std::cerr << path << ": answer " << report.answer << " disagrees with oracle " << expected << "\n";
                status = kExitMismatch;
            }
        }
        if (files.size() == 1) {
            single = std::move(j);
        } else {
            nlq::Json entry;
            entry["file"] = path;
            entry["report"] = std::move(j);
            batch.push_back(std::move(entry));
        }
    }
    emit((files.size() == 1 ? single : batch).dump(2) + "\n", a.out);
    return status;
}

int run_encode(const EncodeArgs& a) {
    const auto formula = nlq::parse_dimacs(read_file(a.file));
    const auto sample = nlq::sample_preparation(formula, a.seed);
    nlq::Json j;
    j["s"] = sample.state.s;
    j["theta_s"] = sample.state.theta_s;
    j["success_probability"] = nlq::postselection_probability(sample.state.s, formula.n);
    j["attempts"] = sample.attempts;
    emit(j.dump(2) + "\n", a.out);
    return kExitOk;
}

int run_trajectory(const TrajectoryArgs& a) {
    double torsion_b = a.torsion_b.value_or(0.5 * a.g);
    double theta0 = a.theta0;
    double duration = a.gt ? *a.gt / a.g : 0.0;
    if (a.n > 0) {
        // Torsion gate for n bits: start from the rotated input r_a (s = 0) or r_b (s = 1).
        if (a.model != "torsion") throw nlq::DomainError("--n applies to the torsion model only");
        if (a.s != 0 && a.s != 1) throw nlq::DomainError("--s must be 0 or 1");
        const double theta1 = nlq::theta_of_s(1, a.n);
        torsion_b = a.torsion_b.value_or(nlq::torsion_choose_B(theta1, a.g));
        theta0 = nlq::theta_of_s(static_cast<std::uint64_t>(a.s), a.n) + 0.5 * std::numbers::pi - 0.5 * theta1;
        if (!a.gt) duration = nlq::torsion_gate_time(theta1, a.g).exact;
    }
    const auto model = nlq::make_model(a.model, a.g, torsion_b);
    std::ostringstream out;
    if (a.field_grid) {
        nlq::write_field_grid_csv(out, model);
    } else {
        if (!a.gt && a.n == 0) throw nlq::DomainError("--gt is required unless --n selects a torsion gate");
        const auto start = nlq::to_bloch({theta0, a.phi0});
        const auto tr = nlq::propagate(model, start, duration, a.step_control);
        nlq::write_trajectory_csv(out, model, tr);
    }
    emit(out.str(), a.out);
    return kExitOk;
}

int run_bench(const BenchArgs& a) {
    const auto rows = nlq::bench_table(a.n_min, a.n_max, a.eps, a.g);
    if (a.format == "json") {
        emit(nlq::bench_json(rows).dump(2) + "\n", a.out);
    } else {
        std::ostringstream out;
        nlq::write_bench_csv(out, rows);
        emit(out.str(), a.out);
    }
    return kExitOk;
}

int run_grid(const GridArgs& a) {
    const auto model = nlq::make_model(a.model, a.g, a.torsion_b);
    std::ostringstream out;
    nlq::write_grid_diagnostics_csv(out, nlq::grid_diagnostics(model));
    emit(out.str(), a.out);
    return kExitOk;
}

void add_solve_options(CLI::App* cmd, SolveArgs& a) {
    cmd->add_option("files", a.files, "DIMACS CNF input files");
    cmd->add_option("--glob", a.glob, "Shell pattern selecting input files (sorted by path)");
    cmd->add_option("--g", a.g, "Nonlinearity rate g > 0")->check(CLI::PositiveNumber);
    cmd->add_option("--eps", a.eps, "Error budget in (0, 1)")->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--seed", a.seed, "Seed for sampled readout");
    cmd->add_option("--mode", a.mode, "Ancilla preparation")->check(CLI::IsMember({"analytic", "circuit"}));
    cmd->add_option("--readout", a.readout, "Measurement model")->check(CLI::IsMember({"sign", "sampled"}));
    cmd->add_option("--reps", a.reps, "Odd number of samples for majority vote")->check(CLI::PositiveNumber);
    cmd->add_flag("--verify", a.verify, "Check the answer against the truth-table count");
    cmd->add_option("--format", a.format, "Output format")->check(CLI::IsMember({"json"}));
    cmd->add_option("--out", a.out, "Write output to this path instead of stdout");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Nonlinear-qubit SAT solvers, trajectories and gate-time tables"};
    app.require_subcommand(1);

    SolveArgs count_args;
    SolveArgs decide_args;
    SolveArgs unique_args;
    auto* count_cmd = app.add_subcommand("count", "Count satisfying assignments with pitchfork gates");
    add_solve_options(count_cmd, count_args);
    auto* decide_cmd = app.add_subcommand("decide", "Decide satisfiability with a Morse-Smale gate");
    add_solve_options(decide_cmd, decide_args);
    auto* unique_cmd = app.add_subcommand("unique", "Solve UNIQUE SAT with a torsion gate");
    add_solve_options(unique_cmd, unique_args);
    unique_cmd->add_flag("--promise", unique_args.promise, "Acknowledge the at-most-one-solution promise");

    EncodeArgs encode_args;
    auto* encode_cmd = app.add_subcommand("encode", "Simulate the encoding circuit with postselection");
    encode_cmd->add_option("file", encode_args.file, "DIMACS CNF input file")->required();
    encode_cmd->add_option("--seed", encode_args.seed, "Seed for postselection draws");
    encode_cmd->add_option("--out", encode_args.out, "Output path");

    TrajectoryArgs traj_args;
    auto* traj_cmd = app.add_subcommand("trajectory", "Integrate a model and emit t,x,y,z(,E) CSV");
    traj_cmd->add_option("--model", traj_args.model, "torsion, morse-smale or pitchfork");
    traj_cmd->add_option("--theta0", traj_args.theta0, "Initial polar angle");
    traj_cmd->add_option("--phi0", traj_args.phi0, "Initial azimuth");
    traj_cmd->add_option("--n", traj_args.n, "Torsion gate for n bits (sets start, B and duration)")
        ->check(CLI::Range(2, nlq::kMaxAnalyticBits));
    traj_cmd->add_option("--s", traj_args.s, "With --n: start from the rotated |psi_0> or |psi_1>");
    traj_cmd->add_option("--gt", traj_args.gt, "Duration in units of 1/g");
    traj_cmd->add_option("--B", traj_args.torsion_b, "Torsion transverse field");
    traj_cmd->add_option("--g", traj_args.g, "Nonlinearity rate g > 0")->check(CLI::PositiveNumber);
    traj_cmd->add_option("--step-control", traj_args.step_control, "Endpoint tolerance for step doubling");
    traj_cmd->add_flag("--field-grid", traj_args.field_grid, "Emit the velocity field on the validation grid");
    traj_cmd->add_option("--out", traj_args.out, "Output path");

    BenchArgs bench_args;
    auto* bench_cmd = app.add_subcommand("bench", "Gate-time scaling table");
    bench_cmd->add_option("--n-min", bench_args.n_min, "Smallest n");
    bench_cmd->add_option("--n-max", bench_args.n_max, "Largest n");
    bench_cmd->add_option("--eps", bench_args.eps, "Error budgets (repeatable)")->expected(1, -1);
    bench_cmd->add_option("--g", bench_args.g, "Nonlinearity rate g > 0")->check(CLI::PositiveNumber);
    bench_cmd->add_option("--format", bench_args.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    bench_cmd->add_option("--out", bench_args.out, "Output path");

    GridArgs grid_args;
    auto* grid_cmd = app.add_subcommand("grid", "div_S v and curl_S u on the validation grid as CSV");
    grid_cmd->add_option("--model", grid_args.model, "torsion, morse-smale or pitchfork");
    grid_cmd->add_option("--g", grid_args.g, "Nonlinearity rate g > 0")->check(CLI::PositiveNumber);
    grid_cmd->add_option("--B", grid_args.torsion_b, "Torsion transverse field");
    grid_cmd->add_option("--out", grid_args.out, "Output path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitParse;
    }

    try {
        if (*count_cmd) return run_solve(nlq::ProblemKind::count, count_args);
        if (*decide_cmd) return run_solve(nlq::ProblemKind::decide, decide_args);
        if (*unique_cmd) return run_solve(nlq::ProblemKind::unique, unique_args);
        if (*encode_cmd) return run_encode(encode_args);
        if (*traj_cmd) return run_trajectory(traj_args);
        if (*bench_cmd) return run_bench(bench_args);
        if (*grid_cmd) return run_grid(grid_args);
    } catch (const nlq::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const nlq::ResourceError& e) {
        std::cerr << "resource error: " << e.what() << "\n";
        return kExitResource;
    } catch (const nlq::ContractError& e) {
        std::cerr << "contract error: " << e.what() << "\n";
        return kExitContract;
    } catch (const nlq::UnsupportedModelError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const nlq::DomainError& e) {
        std::cerr << "invalid argument: " << e.what() << "\n";
        return kExitParse;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitMismatch;
    }
    return kExitParse;
}
