#pragma once

// End-to-end discrimination algorithms on the encoded ancilla:
//   solve_unique_sat  torsion gate, promise s in {0, 1}
//   solve_decision    Morse-Smale gate, s == 0 versus s > 0
//   count_sat         n + 1 pitchfork gates, binary search for s

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "nlq/bloch.hpp"
#include "nlq/cnf.hpp"
#include "nlq/encoder.hpp"
#include "nlq/errors.hpp"
#include "nlq/integrator.hpp"
#include "nlq/models.hpp"

namespace nlq {

enum class ProblemKind { unique, decide, count };
enum class PrepMode { analytic, circuit };
enum class ReadoutMode { sign, sampled };

inline std::string_view to_string(ProblemKind k) {
    switch (k) {
    case ProblemKind::unique: return "unique";
    case ProblemKind::decide: return "decide";
    case ProblemKind::count: return "count";
    }
    return "?";
}

inline std::string_view to_string(PrepMode m) { return m == PrepMode::analytic ? "analytic" : "circuit"; }
inline std::string_view to_string(ReadoutMode m) { return m == ReadoutMode::sign ? "sign" : "sampled"; }

struct ReadoutPolicy {
    ReadoutMode mode = ReadoutMode::sign;
    int repetitions = 11;  // used in sampled mode; must be odd
    std::uint64_t seed = 0;
};

struct SolverOptions {
    double g = 1.0;
    double eps = kDefaultEpsilon;
    PrepMode mode = PrepMode::analytic;
    ReadoutPolicy readout;
    bool test_mode = false;  // check promises and bisection intervals against count_solutions
    double step_control = kDefaultStepControl;
};

struct SolveReport {
    ProblemKind kind = ProblemKind::count;
    int n = 0;
    std::uint64_t answer = 0;
    std::vector<int> bits;               // s_n ... s_0 for counting, empty otherwise
    std::vector<double> gate_times;
    double total_time = 0.0;
    std::uint64_t preparations = 0;
    std::vector<double> heights;         // final z after each gate
    std::vector<double> initial_heights; // z after each pre-rotation, before the gate
    SolverOptions params;
};

// ---------------------------------------------------------------------------------------------
// Readout

// Measurement of sigma_z. Sign mode returns (z < 0), so z == 0 reads as |0>. Sampled mode takes a
// majority over Bernoulli draws with p(1) = (1 - z) / 2.
inline int readout(double z_final, const ReadoutPolicy& policy, std::mt19937_64& rng) {
    if (!(std::abs(z_final) <= 1.0 + 1e-12)) throw DomainError("readout height must satisfy |z| <= 1");
    if (policy.mode == ReadoutMode::sign) return z_final < 0.0 ? 1 : 0;
    if (policy.repetitions < 1 || policy.repetitions % 2 == 0) {
        throw DomainError("sampled readout needs an odd number of repetitions");
    }
    const double p1 = 0.5 * (1.0 - z_final);
    int ones = 0;
    for (int i = 0; i < policy.repetitions; ++i) {
        if (std::ldexp(static_cast<double>(rng() >> 11), -53) < p1) ++ones;
    }
    return 2 * ones > policy.repetitions ? 1 : 0;
}

inline int readout(double z_final, const ReadoutPolicy& policy) {
    std::mt19937_64 rng(policy.seed);
    return readout(z_final, policy, rng);
}

// ---------------------------------------------------------------------------------------------

namespace detail {

// Produces fresh copies of |psi_s> on demand and counts them.
class AncillaSource {
public:
    AncillaSource(const CnfFormula& f, PrepMode mode) : formula_(f), mode_(mode) {
        validate(f);
        if (mode == PrepMode::analytic) {
            s_ = count_solutions(f).s;
        } else if (f.n > circuit_cap()) {
            throw ResourceError("n = " + std::to_string(f.n) + " exceeds the circuit cap " +
                                std::to_string(circuit_cap()));
        }
    }

    BlochVector prepare() {
        ++count_;
        if (mode_ == PrepMode::analytic) return encode_state(s_, formula_.n).bloch;
        const auto result = run_encoding_circuit(formula_);
        const auto c = std::conj(result.ancilla[0]) * result.ancilla[1];
        return BlochVector::project({2.0 * c.real(), 2.0 * c.imag(),
                                     std::norm(result.ancilla[0]) - std::norm(result.ancilla[1])});
    }

    std::uint64_t count() const { return count_; }

private:
    const CnfFormula& formula_;
    PrepMode mode_;
    std::uint64_t s_ = 0;
    std::uint64_t count_ = 0;
};

inline BlochVector evolve(const NonlinearModel& m, const BlochVector& r0, double duration, double step_control) {
    PropagateOptions opts;
    opts.step_control = step_control;
    opts.record = false;
    return propagate(m, r0, duration, opts).final_point();
}

inline void check_caps(const CnfFormula& f) {
    if (f.n > brute_force_cap() || f.n > kMaxAnalyticBits) {
        throw ResourceError("n = " + std::to_string(f.n) + " exceeds the solver cap " +
                            std::to_string(brute_force_cap()));
    }
}

} // namespace detail

// Torsion gate. R_y(pi/2 - theta1/2) sends |psi_0> to r_a (flows to |0>) and |psi_1> to r_b
// (flows to |1>); the gate runs for K(cos(theta1/2)) / g with B = (g/2) cos(theta1/2).
inline SolveReport solve_unique_sat(const CnfFormula& f, const SolverOptions& opts = {}) {
    detail::check_caps(f);
    if (opts.test_mode) {
        const auto s = count_solutions(f).s;
        if (s > 1) throw ContractError("UNIQUE SAT promise violated: formula has " + std::to_string(s) + " solutions");
    }
    SolveReport report;
    report.kind = ProblemKind::unique;
    report.n = f.n;
    report.params = opts;

    const double theta1 = theta_of_s(1, f.n);
    const TorsionModel model(opts.g, torsion_choose_B(theta1, opts.g));
    const double t_g = torsion_gate_time(theta1, opts.g).exact;

    detail::AncillaSource source(f, opts.mode);
    std::mt19937_64 rng(opts.readout.seed);
    const BlochVector start = rotate_y(source.prepare(), 0.5 * std::numbers::pi - 0.5 * theta1);
    const BlochVector end = detail::evolve(model, start, t_g, opts.step_control);

    report.answer = static_cast<std::uint64_t>(readout(end.z(), opts.readout, rng));
    report.gate_times = {t_g};
    report.total_time = t_g;
    report.initial_heights = {start.z()};
    report.heights = {end.z()};
    report.preparations = source.count();
    return report;
}

// Morse-Smale gate. Every s > 0 flows to within eps of |1>; s = 0 sits on the source.
inline SolveReport solve_decision(const CnfFormula& f, const SolverOptions& opts = {}) {
    detail::check_caps(f);
    SolveReport report;
    report.kind = ProblemKind::decide;
    report.n = f.n;
    report.params = opts;

    const MorseSmaleModel model(opts.g);
    const double t_g = morse_smale_gate_time(f.n, opts.eps, opts.g).exact;

    detail::AncillaSource source(f, opts.mode);
    std::mt19937_64 rng(opts.readout.seed);
    const BlochVector start = source.prepare();
    const BlochVector end = detail::evolve(model, start, t_g, opts.step_control);

    report.answer = static_cast<std::uint64_t>(readout(end.z(), opts.readout, rng));
    report.gate_times = {t_g};
    report.total_time = t_g;
    report.initial_heights = {start.z()};
    report.heights = {end.z()};
    report.preparations = source.count();
    return report;
}

// Pitchfork binary search. Each gate rotates the plane midway between theta_k and theta_{k+1}
// onto the equator (the separatrix), then runs for the gate time set by the nearest inputs,
// z_i = sin((theta_{k+1} - theta_k) / 2). The first gate separates s = 2^n from the rest.
inline SolveReport count_sat(const CnfFormula& f, const SolverOptions& opts = {}) {
    detail::check_caps(f);
    const int n = f.n;
    const std::uint64_t total = std::uint64_t{1} << n;
    const std::uint64_t truth = opts.test_mode ? count_solutions(f).s : 0;

    SolveReport report;
    report.kind = ProblemKind::count;
    report.n = n;
    report.params = opts;
    report.bits.assign(static_cast<std::size_t>(n) + 1, 0);

    const PitchforkModel model(opts.g);
    detail::AncillaSource source(f, opts.mode);
    std::mt19937_64 rng(opts.readout.seed);

    // Measures whether s > k.
    auto gate = [&](std::uint64_t k) {
        const double lo = theta_of_s(k, n);
        const double hi = theta_of_s(k + 1, n);
        const double plane = 0.5 * (lo + hi);
        const double z_i = std::sin(0.5 * (hi - lo));
        const double t_g = pitchfork_gate_time(z_i, opts.eps, opts.g);
        const BlochVector start = rotate_y(source.prepare(), 0.5 * std::numbers::pi - plane);
        const BlochVector end = detail::evolve(model, start, t_g, opts.step_control);
        report.gate_times.push_back(t_g);
        report.total_time += t_g;
        report.initial_heights.push_back(start.z());
        report.heights.push_back(end.z());
        return readout(end.z(), opts.readout, rng);
    };

    const int top = gate(total - 1);
    report.bits[0] = top;
    if (top == 1) {
        report.answer = total;
        report.preparations = source.count();
        if (opts.test_mode && truth != total) {
            throw InternalError("count_sat halted with s = 2^n but the oracle count is " + std::to_string(truth));
        }
        return report;
    }

    std::uint64_t s_min = 0;
    std::uint64_t s_max = total - 1;
    for (int j = n - 1; j >= 0; --j) {
        const std::uint64_t k = s_min + (s_max - s_min) / 2;
        const int bit = gate(k);
        report.bits[static_cast<std::size_t>(n - j)] = bit;
        if (bit == 0) {
            s_max = k;
        } else {
            s_min = k + 1;
        }
        if (s_min > s_max) throw InternalError("bisection interval became empty");
        if (opts.test_mode && (truth < s_min || truth > s_max)) {
            throw InternalError("oracle count " + std::to_string(truth) + " left the interval [" +
                                std::to_string(s_min) + ", " + std::to_string(s_max) + "]");
        }
    }
    if (s_min != s_max) throw InternalError("bisection did not converge to a single count");
    report.answer = s_min;
    report.preparations = source.count();
    return report;
}

struct TotalTimeReport {
    double per_gate = 0.0;    // pitchfork gate time at the worst-case z_i = sin(theta_1 / 2)
    double total = 0.0;       // (n + 1) * per_gate
    double asymptotic = 0.0;  // n log(2^n eps^{-1/2}) / g, the scaling form without constants
};

inline TotalTimeReport total_time_report(int n, double eps, double g) {
    if (n < 1 || n > kMaxAnalyticBits) throw DomainError("n must lie in [1, 62]");
    TotalTimeReport r;
    r.per_gate = pitchfork_gate_time(std::sin(0.5 * theta_of_s(1, n)), eps, g);
    r.total = static_cast<double>(n + 1) * r.per_gate;
    r.asymptotic = n * (n * std::numbers::ln2 - 0.5 * std::log(eps)) / g;
    return r;
}

} // namespace nlq
