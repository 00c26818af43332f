#pragma once

// Statevector simulation of the amplitude-encoding circuit:
//   |0>^n |0>  --H^n-->  --U_f-->  --H^n-->  project first register on |0>^n.
// The surviving ancilla is ((2^n - s)|0> + s|1>) / norm.

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "nlq/bloch.hpp"
#include "nlq/cnf.hpp"
#include "nlq/errors.hpp"

namespace nlq {

// n + 1 qubits, ancilla fastest: index = (x << 1) | y.
class StateVector {
public:
    explicit StateVector(int n) : n_(n), amplitudes_(std::size_t{2} << n) { amplitudes_[0] = 1.0; }

    int n() const { return n_; }
    std::span<const std::complex<double>> amplitudes() const { return amplitudes_; }

    // Hadamard on qubit q (0-based) of the first register.
    void hadamard(int q) {
        const std::size_t stride = std::size_t{2} << q;
        const double h = 1.0 / std::numbers::sqrt2;
        for (std::size_t base = 0; base < amplitudes_.size(); base += 2 * stride) {
            for (std::size_t i = base; i < base + stride; ++i) {
                const auto a = amplitudes_[i];
                const auto b = amplitudes_[i + stride];
                amplitudes_[i] = h * (a + b);
                amplitudes_[i + stride] = h * (a - b);
            }
        }
    }

    void hadamard_all() {
        for (int q = 0; q < n_; ++q) hadamard(q);
    }

    // |x>|y> -> |x>|y xor f(x)>: swaps the ancilla pair of every satisfying x.
    void apply_oracle(const ClauseMasks& f) {
        const std::uint64_t count = std::uint64_t{1} << n_;
        for (std::uint64_t x = 0; x < count; ++x) {
            if (f.satisfied(x)) std::swap(amplitudes_[2 * x], amplitudes_[2 * x + 1]);
        }
    }

    double norm_squared() const {
        double acc = 0.0;
        for (const auto& a : amplitudes_) acc += std::norm(a);
        return acc;
    }

private:
    int n_;
    std::vector<std::complex<double>> amplitudes_;
};

struct PostselectionResult {
    double success_probability = 1.0;
    std::array<std::complex<double>, 2> ancilla{1.0, 0.0};
    EncodedState equivalent;  // encode_state of the count read off the ancilla amplitudes
};

// ((2^n - s)^2 + s^2) / 2^{2n}; never below 1/2.
inline double postselection_probability(std::uint64_t s, int n) {
    detail::check_count_args(s, n);
    const double total = std::ldexp(1.0, n);
    const double a = static_cast<double>((std::uint64_t{1} << n) - s) / total;
    const double b = static_cast<double>(s) / total;
    return a * a + b * b;
}

inline PostselectionResult run_encoding_circuit(const CnfFormula& f, int cap = circuit_cap()) {
    validate(f);
    if (f.n > cap) {
        throw ResourceError("n = " + std::to_string(f.n) + " exceeds the circuit cap " + std::to_string(cap));
    }
    StateVector psi(f.n);
    psi.hadamard_all();
    psi.apply_oracle(ClauseMasks(f));
    psi.hadamard_all();

    const auto amps = psi.amplitudes();
    PostselectionResult out;
    out.success_probability = std::norm(amps[0]) + std::norm(amps[1]);
    const double len = std::sqrt(out.success_probability);
    out.ancilla = {amps[0] / len, amps[1] / len};

    const double a0 = std::abs(out.ancilla[0]);
    const double a1 = std::abs(out.ancilla[1]);
    const double total = std::ldexp(1.0, f.n);
    out.equivalent = encode_state(static_cast<std::uint64_t>(std::llround(total * a1 / (a0 + a1))), f.n);
    return out;
}

struct PreparationSample {
    EncodedState state;
    std::uint64_t attempts = 0;
};

// Repeats the circuit until the first register reads |0>^n, drawing each outcome with the
// exact postselection probability.
inline PreparationSample sample_preparation(const CnfFormula& f, std::uint64_t seed) {
    const auto result = run_encoding_circuit(f);
    std::mt19937_64 rng(seed);
    PreparationSample sample;
    sample.state = result.equivalent;
    do {
        ++sample.attempts;
    } while (!(std::ldexp(static_cast<double>(rng() >> 11), -53) < result.success_probability));
    return sample;
}

} // namespace nlq
