#pragma once

// The three built-in nonlinear qubit models, their closed-form solutions and gate times.
//
// Each model is defined by a u-field; the Bloch equation of motion is dr/dt = v = u x r and
// the mean-field Hamiltonian is H = u(<sigma>) . sigma / 2.
//
//   torsion      u = (2B, 0, 2gz)        H = B sx + g <sz> sz
//   morse-smale  u = 2g (-y, x, 0)       H = g (<sx> sy - <sy> sx)
//   pitchfork    u = 2g (yz, -xz, 0)     H = g (<sy><sz> sx - <sx><sz> sy)

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <string_view>
#include <variant>

#include "nlq/bloch.hpp"
#include "nlq/elliptic.hpp"
#include "nlq/errors.hpp"

namespace nlq {

inline constexpr double kDefaultEpsilon = 1e-6;

namespace detail {

inline double checked_rate(double g) {
    if (!(g > 0.0) || !std::isfinite(g)) {
        throw DomainError("nonlinearity rate g must be finite and > 0, got " + std::to_string(g));
    }
    return g;
}

inline void check_epsilon(double eps) {
    if (!(eps > 0.0 && eps < 1.0)) {
        throw DomainError("error budget eps must lie in (0, 1), got " + std::to_string(eps));
    }
}

inline void check_time(double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("time must be finite and >= 0");
}

} // namespace detail

class TorsionModel {
public:
    static constexpr std::string_view kName = "torsion";

    TorsionModel(double g, double B) : g_(detail::checked_rate(g)), b_(B) {
        if (!std::isfinite(B)) throw DomainError("torsion field B must be finite");
    }

    double g() const { return g_; }
    double B() const { return b_; }

    // Not tangential: carries the radial part 2(Bx + gz^2) that the gauge freedom allows.
    Vec3 u(const Vec3& r) const { return {2.0 * b_, 0.0, 2.0 * g_ * r.z}; }
    Vec3 velocity(const Vec3& r) const { return cross(u(r), r); }

    // Conserved E = Bx + (g/2) z^2; differs from <H> = Bx + g z^2 by the mean-field term.
    double energy(const Vec3& r) const { return b_ * r.x + 0.5 * g_ * r.z * r.z; }

private:
    double g_;
    double b_;
};

class MorseSmaleModel {
public:
    static constexpr std::string_view kName = "morse-smale";

    explicit MorseSmaleModel(double g) : g_(detail::checked_rate(g)) {}

    double g() const { return g_; }
    Vec3 u(const Vec3& r) const { return {-2.0 * g_ * r.y, 2.0 * g_ * r.x, 0.0}; }
    // u x r = 2g (xz, yz, -(x^2 + y^2)); the last entry equals 2g(z^2 - 1) on the sphere
    // without cancelling near the poles.
    Vec3 velocity(const Vec3& r) const { return cross(u(r), r); }

private:
    double g_;
};

class PitchforkModel {
public:
    static constexpr std::string_view kName = "pitchfork";

    explicit PitchforkModel(double g) : g_(detail::checked_rate(g)) {}

    double g() const { return g_; }
    Vec3 u(const Vec3& r) const { return {2.0 * g_ * r.y * r.z, -2.0 * g_ * r.x * r.z, 0.0}; }
    Vec3 velocity(const Vec3& r) const { return cross(u(r), r); }

private:
    double g_;
};

using NonlinearModel = std::variant<TorsionModel, MorseSmaleModel, PitchforkModel>;

inline Vec3 velocity(const NonlinearModel& m, const Vec3& r) {
    return std::visit([&](const auto& model) { return model.velocity(r); }, m);
}

inline Vec3 u_field(const NonlinearModel& m, const Vec3& r) {
    return std::visit([&](const auto& model) { return model.u(r); }, m);
}

inline double rate(const NonlinearModel& m) {
    return std::visit([](const auto& model) { return model.g(); }, m);
}

inline std::string_view model_name(const NonlinearModel& m) {
    return std::visit([](const auto& model) { return std::decay_t<decltype(model)>::kName; }, m);
}

// Builds a model from its CLI name. Torsion takes its B from the caller.
inline NonlinearModel make_model(std::string_view name, double g, double torsion_b = 0.0) {
    if (name == TorsionModel::kName) return TorsionModel(g, torsion_b);
    if (name == MorseSmaleModel::kName) return MorseSmaleModel(g);
    if (name == PitchforkModel::kName) return PitchforkModel(g);
    throw UnsupportedModelError("unknown model '" + std::string(name) +
                                "' (expected torsion, morse-smale or pitchfork)");
}

// A gate time together with the large-n / small-eps approximation quoted for it.
struct GateTime {
    double exact = 0.0;
    double approximate = 0.0;
};

enum class GateKind { torsion, morse_smale, pitchfork };

// One discrimination step: pre-rotation R_y(gamma) followed by evolution for duration.
struct GatePlan {
    GateKind kind = GateKind::pitchfork;
    double gamma = 0.0;
    double duration = 0.0;
    double eps = kDefaultEpsilon;
};

// ---------------------------------------------------------------------------------------------
// Torsion gate

namespace detail {

inline void check_theta1(double theta1) {
    if (!(theta1 > 0.0 && theta1 < std::numbers::pi)) {
        throw DomainError("theta1 must lie in (0, pi), got " + std::to_string(theta1));
    }
}

} // namespace detail

// B that equates the energy of the rotated inputs r_a, r_b with the pole energy g/2.
inline double torsion_choose_B(double theta1, double g) {
    detail::check_theta1(theta1);
    return 0.5 * detail::checked_rate(g) * std::cos(0.5 * theta1);
}

struct TorsionXY {
    double x = 0.0;
    double y_squared = 0.0;
};

// x and y^2 along the E = g/2 level set, parametrised by the height z.
inline TorsionXY torsion_trajectory_xy(double theta1, double z) {
    detail::check_theta1(theta1);
    const double sh = std::sin(0.5 * theta1);
    const double ch = std::cos(0.5 * theta1);
    const double az = std::abs(z);
    if (!(az <= 1.0) || az < sh * (1.0 - 1e-14)) {
        throw DomainError("torsion trajectory requires sin(theta1/2) <= |z| <= 1, got z = " +
                          std::to_string(z));
    }
    const double one_minus_z2 = (1.0 - z) * (1.0 + z);
    TorsionXY xy;
    xy.x = one_minus_z2 / ch;
    xy.y_squared = std::max(0.0, one_minus_z2 * (z - sh) * (z + sh) / (ch * ch));
    return xy;
}

// t_g = K(cos(theta1/2)) / g, with the approximation log(8/theta1)/g.
inline GateTime torsion_gate_time(double theta1, double g) {
    detail::check_theta1(theta1);
    detail::checked_rate(g);
    // Complementary modulus sin(theta1/2) keeps full precision at small theta1.
    return {elliptic_K_complement(std::sin(0.5 * theta1)) / g, std::log(8.0 / theta1) / g};
}

// ---------------------------------------------------------------------------------------------
// Morse-Smale gate, dz/dt = 2g(z^2 - 1)

inline double morse_smale_height(double z0, double t, double g) {
    detail::checked_rate(g);
    detail::check_time(t);
    if (!(z0 >= -1.0 && z0 <= 1.0)) throw DomainError("height z0 must lie in [-1, 1]");
    if (z0 == -1.0 || z0 == 1.0) return z0;  // sink and source
    const double arg = 4.0 * g * t;
    if (arg < 700.0) {
        const double c = (z0 - 1.0) / (z0 + 1.0);
        const double ce = c * std::exp(arg);
        return (1.0 + ce) / (1.0 - ce);
    }
    // exp(4gt) overflows; same solution written with tanh(2gt).
    const double th = std::tanh(0.5 * arg);
    return (z0 - th) / (1.0 - z0 * th);
}

// Same flow started from polar angle theta0. c = -tan^2(theta0/2) is exact even when
// cos(theta0) rounds to 1.
inline double morse_smale_height_polar(double theta0, double t, double g) {
    detail::checked_rate(g);
    detail::check_time(t);
    if (!(theta0 >= 0.0 && theta0 <= std::numbers::pi)) throw DomainError("theta0 must lie in [0, pi]");
    if (theta0 == 0.0) return 1.0;
    if (theta0 == std::numbers::pi) return -1.0;
    const double tan_half = std::tan(0.5 * theta0);
    const double arg = 4.0 * g * t;
    if (arg < 700.0) {
        const double ce = -tan_half * tan_half * std::exp(arg);
        return (1.0 + ce) / (1.0 - ce);
    }
    return -1.0;
}

// Time to flow from z_i down to z_f, both in (-1, 1]: (1/4g) [log |(z-1)/(z+1)|]_{z_i}^{z_f}.
inline double morse_smale_time_between(double z_i, double z_f, double g) {
    detail::checked_rate(g);
    auto potential = [](double z) { return std::log(std::abs((z - 1.0) / (z + 1.0))); };
    if (!(z_i > -1.0 && z_i < 1.0 && z_f > -1.0 && z_f <= z_i)) {
        throw DomainError("morse_smale_time_between requires -1 < z_f <= z_i < 1");
    }
    return (potential(z_f) - potential(z_i)) / (4.0 * g);
}

// t_g = (1/4g) log((2 - eps)(1 - 2^{-2n}) / (2^{-2n} eps)), approx (1/4g) log(2^{2n+1}/eps).
inline GateTime morse_smale_gate_time(int n, double eps, double g) {
    if (n < 1 || n > kMaxAnalyticBits) throw DomainError("n must lie in [1, 62]");
    detail::check_epsilon(eps);
    detail::checked_rate(g);
    const double ln2 = std::numbers::ln2;
    const double two_n_ln2 = 2.0 * n * ln2;
    const double exact =
        std::log(2.0 - eps) + std::log1p(-std::exp2(-2.0 * n)) + two_n_ln2 - std::log(eps);
    const double approx = two_n_ln2 + ln2 - std::log(eps);
    return {exact / (4.0 * g), approx / (4.0 * g)};
}

// ---------------------------------------------------------------------------------------------
// Pitchfork gate, dz/dt = 2gz(1 - z^2)

// Upper hemisphere: z(t) = (1 + c e^{-4gt})^{-1/2}, c = z0^{-2} - 1; lower by z -> -z.
inline double pitchfork_height(double z0, double t, double g) {
    detail::checked_rate(g);
    detail::check_time(t);
    if (!(z0 >= -1.0 && z0 <= 1.0)) throw DomainError("height z0 must lie in [-1, 1]");
    if (z0 == 0.0) return 0.0;
    const double a = std::abs(z0);
    const double c = (1.0 - a) * (1.0 + a) / (a * a);
    const double z = 1.0 / std::sqrt(1.0 + c * std::exp(-4.0 * g * t));
    return z0 > 0.0 ? z : -z;
}

// Exact flow time from |z_i| to |z_f| in one hemisphere: (1/2g) [log |z / sqrt(1 - z^2)|].
inline double pitchfork_time_between(double z_i, double z_f, double g) {
    detail::checked_rate(g);
    const double a = std::abs(z_i);
    const double b = std::abs(z_f);
    if (!(a > 0.0 && b < 1.0 && a <= b)) {
        throw DomainError("pitchfork_time_between requires 0 < |z_i| <= |z_f| < 1");
    }
    auto potential = [](double z) { return std::log(z) - 0.5 * std::log1p(-z * z); };
    return (potential(b) - potential(a)) / (2.0 * g);
}

// t_g = (1/2g) log(1 / (sqrt(2 eps) z_i)), the small-z_i / small-eps form with z_f = 1 - eps.
inline double pitchfork_gate_time(double z_i, double eps, double g) {
    if (!(z_i > 0.0 && z_i < 1.0)) throw DomainError("pitchfork gate requires 0 < z_i < 1");
    detail::check_epsilon(eps);
    detail::checked_rate(g);
    return -std::log(std::sqrt(2.0 * eps) * z_i) / (2.0 * g);
}

} // namespace nlq
