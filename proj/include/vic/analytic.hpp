#pragma once

// Closed-form results for the reduced model, used as oracles for the
// numerical engines.

#include <cmath>
#include <complex>
#include <sstream>
#include <utility>

#include "vic/model.hpp"

namespace vic {

/// Excited population rho_{psi1 psi1}(t) for the undriven reduced model
/// started in |psi1> with Delta = 0 and gamma1 = gamma2 = gamma.
struct VacuumClosedForm {
    double g = 0.0;
    double gamma = 0.0;
    double kappa = 1.0;

    static VacuumClosedForm from(const SystemParams& p) {
        if (p.Delta != 0.0) throw UnsupportedConfiguration("closed form requires Delta = 0");
        if (p.gamma1 != p.gamma2) throw UnsupportedConfiguration("closed form requires gamma1 == gamma2");
        return {p.g, p.gamma1, p.kappa};
    }

    /// B^2 = 8 g^2 - (gamma - kappa)^2; negative in the overdamped regime.
    double b_squared() const { return 8.0 * g * g - (gamma - kappa) * (gamma - kappa); }
    Complex b() const { return std::sqrt(Complex(b_squared())); }
};

namespace detail {

// Evaluates the closed form as a function of B alone, with g^2 eliminated
// through 8 g^2 = B^2 + c^2, so that it can be sampled on either side of
// B^2 = 0. The trigonometric factors are written as complex exponentials so
// that exp(c t) cos(B t) never overflows in the overdamped regime.
inline Complex rho11_for_b(double t, const VacuumClosedForm& cf, Complex b) {
    const double c = cf.gamma - cf.kappa;
    const Complex i(0.0, 1.0);
    const Complex b2 = b * b;
    const Complex g2 = (b2 + c * c) / 8.0;
    auto ecos = [&](double s) { return 0.5 * (std::exp((c + i * b) * s) + std::exp((c - i * b) * s)); };
    auto esin = [&](double s) { return (std::exp((c + i * b) * s) - std::exp((c - i * b) * s)) / (2.0 * i); };
    // 2 M B exp(c t / 2) with M = -B cos(Bt/2) + c sin(Bt/2)
    const Complex m_term = 2.0 * b * (-b * ecos(0.5 * t) + c * esin(0.5 * t));
    // N exp(c t) with N = (-4 g^2 + c^2) cos(Bt) + B c sin(Bt)
    const Complex n_term = (-4.0 * g2 + c * c) * ecos(t) + b * c * esin(t);
    const Complex bracket = -b2 - 4.0 * g2 * std::exp(c * t) + m_term + n_term;
    return -std::exp(-2.0 * cf.gamma * t) * bracket / (4.0 * b2);
}

inline double checked_real(Complex v, double t) {
    if (std::abs(v.imag()) > 1e-12 * std::max(1.0, std::abs(v.real()))) {
        std::ostringstream msg;
        msg << "closed form has imaginary residue " << v.imag() << " at t=" << t;
        throw InvalidState(msg.str());
    }
    return v.real();
}

}  // namespace detail

inline double rho11_analytic(double t, const VacuumClosedForm& cf) {
    if (t < 0.0) throw InvalidState("closed form requires t >= 0");
    const double b2 = cf.b_squared();
    const double scale = 8.0 * cf.g * cf.g + (cf.gamma - cf.kappa) * (cf.gamma - cf.kappa);
    const double h = 1e-5 * std::max(scale, 1e-300);
    if (std::abs(b2) < h) {
        // Near critical damping the expression is analytic in B^2 but loses
        // precision; interpolate between samples at B^2 = -h and +h.
        const Complex up = detail::rho11_for_b(t, cf, std::sqrt(Complex(h)));
        const Complex down = detail::rho11_for_b(t, cf, std::sqrt(Complex(-h)));
        return detail::checked_real(down + (b2 + h) / (2.0 * h) * (up - down), t);
    }
    return detail::checked_real(detail::rho11_for_b(t, cf, cf.b()), t);
}

/// Same population for gamma = 0, written with the lowercase m(t), n(t)
/// coefficients and plain trigonometric functions.
inline double rho11_analytic_lossless_emitter(double t, double g, double kappa) {
    const Complex b = std::sqrt(Complex(8.0 * g * g - kappa * kappa));
    const Complex m = -b * std::cos(b * t / 2.0) - kappa * std::sin(b * t / 2.0);
    const Complex n = (-4.0 * g * g + kappa * kappa) * std::cos(b * t) - b * kappa * std::sin(b * t);
    const Complex num = -b * b - 4.0 * g * g * std::exp(-t * kappa) + 2.0 * b * std::exp(-t * kappa / 2.0) * m +
                        std::exp(-t * kappa) * n;
    return detail::checked_real(-num / (4.0 * b * b), t);
}

struct TrappedLimits {
    double rho11;
    double rho22;
    double rho12;
};

/// Long-time populations of the lossless emitter started in |psi1>: the dark
/// component (|psi1> - |psi2>)/sqrt2 is retained.
inline constexpr TrappedLimits trapped_limits() { return {0.25, 0.25, -0.25}; }

/// Weak-probe steady state with G1 = G2 = G and gamma1 = gamma2 = gamma.
struct SteadyClosedForm {
    double g = 0.0;
    double gamma = 0.0;
    double kappa = 1.0;
    double G = 0.0;
    double delta = 0.0;

    double denominator() const {
        const double g2 = g * g, d2 = delta * delta, y2 = gamma * gamma, k2 = kappa * kappa;
        return 4.0 * g2 * g2 - 4.0 * g2 * d2 + y2 * d2 + 4.0 * g2 * gamma * kappa + y2 * k2 + d2 * d2 + d2 * k2;
    }
};

struct SteadyPopulations {
    double rho11;
    double rho22;
    double rho12;
    double rho33;
};

inline SteadyPopulations steady_populations(const SteadyClosedForm& sf) {
    const double a = sf.denominator();
    const double excited = sf.G * sf.G * (sf.delta * sf.delta + sf.kappa * sf.kappa) / a;
    return {excited, excited, excited, 4.0 * sf.G * sf.G * sf.g * sf.g / a};
}

struct PeakDetunings {
    double lower;
    double upper;
};

/// Probe detunings +-delta* maximizing rho_{psi1 psi1}, by golden-section
/// search over delta in [0, 10 kappa + 2 g].
inline PeakDetunings steady_peak_detunings(const SteadyClosedForm& sf, double tol = 1e-7) {
    auto f = [&](double d) {
        SteadyClosedForm s = sf;
        s.delta = d;
        return steady_populations(s).rho11;
    };
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = 0.0, hi = 10.0 * sf.kappa + 2.0 * std::abs(sf.g);
    double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    while (hi - lo > tol * sf.kappa) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = f(x1);
        }
    }
    const double best = 0.5 * (lo + hi);
    return {-best, best};
}

}  // namespace vic
