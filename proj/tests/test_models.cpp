#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "nlq/models.hpp"
#include "oracles.hpp"

using namespace nlq;

namespace {

constexpr double kPi = std::numbers::pi;

} // namespace

TEST(EllipticK, Basics) {
    EXPECT_DOUBLE_EQ(elliptic_K(0.0), kPi / 2);
    EXPECT_THROW(elliptic_K(1.0), DomainError);
    EXPECT_THROW(elliptic_K(-0.1), DomainError);
    EXPECT_THROW(elliptic_K_imaginary(-1.0), DomainError);
}

TEST(EllipticK, MatchesQuadrature) {
    for (double k : {0.1, 0.3, 0.5, 0.7, 0.9, 0.95, 0.99}) {
        EXPECT_NEAR(elliptic_K(k), oracle::quad_K(k), 1e-12) << "k=" << k;
    }
}

TEST(EllipticK, ImaginaryArgumentMatchesQuadrature) {
    for (double lambda : {0.5, 1.0, 5.0}) {
        EXPECT_NEAR(elliptic_K_imaginary(lambda), oracle::quad_K_squared(-lambda * lambda), 1e-10);
    }
}

TEST(EllipticK, IncreasingAndLogarithmicDivergence) {
    double previous = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double k = i / 100.0;
        EXPECT_GT(elliptic_K(k), previous);
        previous = elliptic_K(k);
    }
    for (int m = 6; m <= 12; ++m) {
        const double k = 1.0 - std::pow(10.0, -m);
        const double asymptote = 0.5 * std::log(16.0 / ((1.0 - k) * (1.0 + k)));
        EXPECT_LT(std::abs(elliptic_K(k) / asymptote - 1.0), 0.01);
    }
}

TEST(Torsion, ChooseB) {
    EXPECT_NEAR(torsion_choose_B(1e-9, 2.0), 1.0, 1e-15);
    EXPECT_NEAR(torsion_choose_B(kPi / 2, 1.0), 0.353553, 1e-6);
    EXPECT_THROW(torsion_choose_B(0.0, 1.0), DomainError);
    for (int n = 2; n <= 30; n += 4) {
        const double theta1 = theta_of_s(1, n);
        const double g = 1.7;
        const TorsionModel m(g, torsion_choose_B(theta1, g));
        const Vec3 ra{std::cos(theta1 / 2), 0.0, std::sin(theta1 / 2)};
        EXPECT_NEAR(m.energy(ra) - g / 2, 0.0, 1e-14);
        EXPECT_NEAR(m.energy({0, 0, 1}), g / 2, 1e-15);
        EXPECT_NEAR(m.energy(ra), m.B() * std::cos(theta1 / 2) + 0.5 * g * std::pow(std::sin(theta1 / 2), 2), 1e-15);
    }
}

TEST(Torsion, TrajectoryXY) {
    const double theta1 = kPi / 2;
    const auto top = torsion_trajectory_xy(theta1, 1.0);
    EXPECT_EQ(top.x, 0.0);
    EXPECT_EQ(top.y_squared, 0.0);
    const auto start = torsion_trajectory_xy(theta1, std::sin(theta1 / 2));
    EXPECT_NEAR(start.x, std::cos(theta1 / 2), 1e-15);
    EXPECT_NEAR(start.y_squared, 0.0, 1e-15);
    const auto mid = torsion_trajectory_xy(theta1, 0.9);
    EXPECT_NEAR(mid.x, 0.19 / std::cos(kPi / 4), 1e-12);
    EXPECT_NEAR(mid.x, 0.268701, 1e-6);
    EXPECT_NEAR(mid.y_squared, 0.1178, 1e-12);
    EXPECT_THROW(torsion_trajectory_xy(theta1, 0.5), DomainError);
    EXPECT_THROW(torsion_trajectory_xy(theta1, 1.1), DomainError);
}

TEST(Torsion, TrajectoryXYLiesOnSphereAndEnergyShell) {
    const double theta1 = 0.3;
    const double g = 1.0;
    const TorsionModel m(g, torsion_choose_B(theta1, g));
    for (double z = std::sin(theta1 / 2); z <= 1.0; z += 0.01) {
        const auto xy = torsion_trajectory_xy(theta1, z);
        EXPECT_NEAR(xy.x * xy.x + xy.y_squared + z * z, 1.0, 1e-13);
        EXPECT_NEAR(m.energy({xy.x, std::sqrt(xy.y_squared), z}), g / 2, 1e-14);
    }
}

TEST(Torsion, GateTime) {
    const double theta1 = theta_of_s(1, 2);
    EXPECT_NEAR(std::cos(theta1 / 2), 0.948683, 1e-6);
    EXPECT_NEAR(torsion_gate_time(theta1, 1.0).exact, 2.57809, 1e-5);
    EXPECT_NEAR(torsion_gate_time(theta1, 2.0).exact, 2.57809 / 2, 1e-5);
    for (int n = 2; n <= 20; n += 3) {
        const double t1 = theta_of_s(1, n);
        EXPECT_NEAR(torsion_gate_time(t1, 1.0).exact, oracle::quad_K_complement(std::sin(t1 / 2)), 1e-12 * oracle::quad_K_complement(std::sin(t1 / 2)));
        EXPECT_NEAR(torsion_gate_time(t1, 1.0).exact, oracle::quad_torsion_time(t1), 1e-10);
        // Via the imaginary modulus i cot(theta1/2).
        const double via_imag = elliptic_K_imaginary(1.0 / std::tan(t1 / 2)) / std::sin(t1 / 2);
        EXPECT_NEAR(torsion_gate_time(t1, 1.0).exact, via_imag, 1e-12 * via_imag);
    }
}

TEST(Torsion, LargeNApproximationAndLinearGrowth) {
    for (int n = 20; n <= 60; n += 5) {
        const auto t = torsion_gate_time(theta_of_s(1, n), 1.0);
        EXPECT_LT(std::abs(t.approximate / t.exact - 1.0), 1e-3);
    }
    const double g = 3.0;
    const double inc = torsion_gate_time(theta_of_s(1, 40), g).exact - torsion_gate_time(theta_of_s(1, 39), g).exact;
    EXPECT_NEAR(inc, std::numbers::ln2 / g, 1e-9);
}

TEST(MorseSmale, Height) {
    EXPECT_EQ(morse_smale_height(1.0, 5.0, 1.0), 1.0);
    EXPECT_EQ(morse_smale_height(-1.0, 5.0, 1.0), -1.0);
    for (double t : {0.0, 0.1, 0.7, 3.0}) EXPECT_NEAR(morse_smale_height(0.0, t, 1.3), -std::tanh(2 * 1.3 * t), 1e-15);
    const double e = std::exp(1.0);
    EXPECT_NEAR(morse_smale_height(0.5, 0.25, 1.0), (1 - e / 3) / (1 + e / 3), 1e-15);
    EXPECT_NEAR(morse_smale_height(0.5, 0.25, 1.0), 0.0492662, 1e-7);
    EXPECT_THROW(morse_smale_height(1.5, 1.0, 1.0), DomainError);
    EXPECT_THROW(morse_smale_height(0.5, -1.0, 1.0), DomainError);
}

TEST(MorseSmale, HeightBeyondOverflowThreshold) {
    // 4gt >= 700 uses the tanh form; both branches must agree around the switch.
    for (double z0 : {0.9, 0.0, -0.5}) {
        const double below = morse_smale_height(z0, 699.0 / 4.0, 1.0);
        const double above = morse_smale_height(z0, 701.0 / 4.0, 1.0);
        EXPECT_NEAR(below, -1.0, 1e-15);
        EXPECT_NEAR(above, -1.0, 1e-15);
        const double th = std::tanh(2.0 * 200.0);
        EXPECT_NEAR(morse_smale_height(z0, 200.0, 1.0), (z0 - th) / (1 - z0 * th), 1e-15);
    }
}

TEST(MorseSmale, ClosedFormSatisfiesOde) {
    const double g = 0.8;
    const double h = 1e-5;
    for (double z0 : {0.99, 0.5, 0.0, -0.7}) {
        for (double t = 0.05; t < 3.0; t += 0.25) {
            const double dz = (morse_smale_height(z0, t + h, g) - morse_smale_height(z0, t - h, g)) / (2 * h);
            const double z = morse_smale_height(z0, t, g);
            EXPECT_NEAR(dz, 2 * g * (z * z - 1), 1e-6);
        }
    }
}

TEST(MorseSmale, PreservesOrdering) {
    const int n = 4;
    for (double t : {0.0, 0.1, 0.5, 1.0, 2.0, 4.0}) {
        for (std::uint64_t s = 0; s < 15; ++s) {
            const double za = morse_smale_height_polar(theta_of_s(s, n), t, 1.0);
            const double zb = morse_smale_height_polar(theta_of_s(s + 1, n), t, 1.0);
            if (zb > -1.0) {
                EXPECT_GT(za, zb) << "t=" << t << " s=" << s;
            }
        }
    }
}

TEST(MorseSmale, PolarFormAgreesWithHeight) {
    for (double theta0 : {0.1, 0.4, 1.5, 2.9}) {
        for (double t : {0.0, 0.3, 2.0}) {
            EXPECT_NEAR(morse_smale_height_polar(theta0, t, 1.0), morse_smale_height(std::cos(theta0), t, 1.0), 1e-13);
        }
    }
}

TEST(MorseSmale, GateTime) {
    const auto t = morse_smale_gate_time(2, 0.01, 1.0);
    EXPECT_NEAR(t.exact, 0.25 * std::log(2985.0), 1e-12);
    EXPECT_NEAR(t.exact, 2.00034, 1e-5);
    EXPECT_NEAR(t.approximate, 0.25 * std::log(32.0 / 0.01), 1e-12);
    const auto big = morse_smale_gate_time(30, 1e-9, 1.0);
    EXPECT_LT(std::abs(big.approximate / big.exact - 1.0), 1e-6);
    EXPECT_THROW(morse_smale_gate_time(2, 0.0, 1.0), DomainError);
    EXPECT_THROW(morse_smale_gate_time(2, 1.0, 1.0), DomainError);
}

TEST(MorseSmale, GateTimeReachesTarget) {
    // The closed-form gate time assumes z_i = 1 - 2^{1-2n}; the true cos(theta1) sits slightly
    // lower, so the s = 1 state ends at or below -1 + eps.
    for (int n = 1; n <= 30; ++n) {
        for (double eps : {1e-2, 1e-6, 1e-9}) {
            const double theta1 = theta_of_s(1, n);
            const double t_g = morse_smale_gate_time(n, eps, 1.0).exact;
            EXPECT_LE(morse_smale_height_polar(theta1, t_g, 1.0), -1.0 + eps * (1 + 1e-9)) << n;
        }
    }
    for (int n = 1; n <= 8; ++n) {
        const double eps = 1e-6;
        // (1 - z_i)/(1 + z_i) = 2^{-2n}/(1 - 2^{-2n}) defines the height the formula encodes.
        const double q = std::ldexp(1.0, -2 * n) / (1.0 - std::ldexp(1.0, -2 * n));
        const double z_i = (1.0 - q) / (1.0 + q);
        const double t_g = morse_smale_gate_time(n, eps, 1.0).exact;
        EXPECT_NEAR(morse_smale_height(z_i, t_g, 1.0), -1.0 + eps, 1e-9);
        EXPECT_NEAR(morse_smale_time_between(z_i, -1.0 + eps, 1.0), t_g, 1e-9);
    }
}

TEST(Pitchfork, Height) {
    EXPECT_EQ(pitchfork_height(1.0, 3.0, 1.0), 1.0);
    EXPECT_EQ(pitchfork_height(0.0, 3.0, 1.0), 0.0);
    for (double t : {0.0, 0.2, 1.0}) {
        EXPECT_NEAR(pitchfork_height(1 / std::numbers::sqrt2, t, 1.0), 1 / std::sqrt(1 + std::exp(-4 * t)), 1e-15);
    }
    EXPECT_NEAR(pitchfork_height(-0.3, 0.5, 1.0), -1 / std::sqrt(1 + (1 / 0.09 - 1) * std::exp(-2.0)), 1e-15);
    EXPECT_NEAR(pitchfork_height(-0.3, 0.5, 1.0), -0.649791, 1e-6);
}

TEST(Pitchfork, BasinDichotomyAndMonotoneApproach) {
    for (double z0 : {-0.99, -0.5, -1e-6, 1e-6, 0.3, 0.9}) {
        double previous = std::abs(z0);
        for (double t = 0.0; t < 10.0; t += 0.1) {
            const double z = pitchfork_height(z0, t, 1.0);
            EXPECT_EQ(std::signbit(z), std::signbit(z0));
            EXPECT_GE(std::abs(z), previous - 1e-15);
            previous = std::abs(z);
        }
    }
}

TEST(Pitchfork, ClosedFormSatisfiesOde) {
    const double g = 1.4;
    const double h = 1e-5;
    for (double z0 : {0.99, 0.5, 0.1, -0.1, -0.8}) {
        for (double t = 0.05; t < 3.0; t += 0.25) {
            const double dz = (pitchfork_height(z0, t + h, g) - pitchfork_height(z0, t - h, g)) / (2 * h);
            const double z = pitchfork_height(z0, t, g);
            EXPECT_NEAR(dz, 2 * g * z * (1 - z * z), 1e-6);
        }
    }
}

TEST(Pitchfork, GateTime) {
    EXPECT_NEAR(pitchfork_gate_time(0.1, 0.01, 1.0), 0.5 * std::log(1 / (std::sqrt(0.02) * 0.1)), 1e-15);
    EXPECT_NEAR(pitchfork_gate_time(0.1, 0.01, 1.0), 2.12930, 1e-5);
    const double eps = 1e-3;
    EXPECT_GT(pitchfork_gate_time(1 - eps, eps, 1.0), 0.0);
    EXPECT_THROW(pitchfork_gate_time(0.0, 0.01, 1.0), DomainError);
    EXPECT_THROW(pitchfork_gate_time(0.1, 0.0, 1.0), DomainError);
}

TEST(Pitchfork, GateTimeEndpointWithinApproximation) {
    for (double z_i : {1e-2, 1e-4, 1e-8}) {
        for (double eps : {1e-4, 1e-6, 1e-9}) {
            const double z = pitchfork_height(z_i, pitchfork_gate_time(z_i, eps, 1.0), 1.0);
            // Small-eps, small-z_i form: the endpoint misses 1 - eps by O(eps^2 + eps z_i^2).
            EXPECT_NEAR(z, 1.0 - eps, 2 * eps * (eps + z_i * z_i) + 1e-15);
        }
    }
    EXPECT_NEAR(pitchfork_time_between(0.1, 0.99, 1.0),
                0.5 * (std::log(0.99 / std::sqrt(1 - 0.99 * 0.99)) - std::log(0.1 / std::sqrt(0.99))), 1e-14);
}

TEST(Models, RejectNonPositiveRate) {
    EXPECT_THROW(MorseSmaleModel(0.0), DomainError);
    EXPECT_THROW(PitchforkModel(-1.0), DomainError);
    EXPECT_THROW(TorsionModel(-1.0, 0.5), DomainError);
    EXPECT_THROW(make_model("linear", 1.0), UnsupportedModelError);
    EXPECT_EQ(model_name(make_model("morse-smale", 1.0)), "morse-smale");
}
