#pragma once

// Two-time cavity correlation <a^dag(t+tau) a(t)> from the quantum regression
// theorem and the cavity-emitted spectrum
//   S(w) = Re int_0^inf dtau (<a^dag(t+tau) a(t)> - <a^dag><a>) exp(-i w tau),
// with w measured from the drive frequency.

#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "vic/liouville.hpp"

namespace vic {

struct Correlation {
    std::vector<double> taus;
    std::vector<Complex> values;
    Complex coherent_part{0.0, 0.0};  // <a^dag><a> at the anchor
    double anchor_residual = 0.0;      // max |L(rho_anchor)|
    std::optional<std::string> warning;
};

struct Spectrum {
    std::vector<double> omegas;
    std::vector<double> values;
};

inline constexpr double kStationarityTol = 1e-6;
inline constexpr double kDefaultTauMax = 50.0;
inline constexpr int kDefaultTauSamples = 4096;

/// Evolves a * rho_anchor under L and samples Tr[a^dag X(tau)].
inline Correlation regression_correlation(const Liouvillian& L, const DensityMatrix& rho_anchor,
                                          std::span<const double> taus, double tol = kDefaultTolerance) {
    if (taus.empty() || taus.front() != 0.0) throw InvalidState("correlation delay grid must start at 0");
    if (!(rho_anchor.space() == L.space()) || L.space().factor != Factor::composite) {
        throw SpaceMismatch("correlation requires an anchor on the Liouvillian's composite space");
    }
    const int n_states = L.space().cavity_dim;
    const Matrix a = cavity_annihilation(n_states).matrix();
    const Matrix ad = a.adjoint();
    const Matrix& rho = rho_anchor.matrix();

    Correlation c;
    c.taus.assign(taus.begin(), taus.end());
    c.anchor_residual = L.apply(rho).cwiseAbs().maxCoeff();
    if (c.anchor_residual > kStationarityTol) {
        std::ostringstream msg;
        msg << "anchor state is not stationary: |L(rho)| = " << c.anchor_residual;
        c.warning = msg.str();
    }
    const Complex mean_a = expectation(rho, a);
    c.coherent_part = std::conj(mean_a) * mean_a;
    const auto xs = propagate(L, a * rho, taus, options_for_tolerance(tol));
    c.values.reserve(xs.size());
    for (const auto& x : xs) c.values.push_back(expectation(x, ad));
    return c;
}

/// Uniform delay grid [0, tau_max] with `samples` points.
inline std::vector<double> delay_grid(double tau_max = kDefaultTauMax, int samples = kDefaultTauSamples) {
    if (samples < 2 || !(tau_max > 0.0)) throw InvalidState("delay grid needs tau_max > 0 and >= 2 samples");
    std::vector<double> taus(static_cast<std::size_t>(samples));
    for (int k = 0; k < samples; ++k) taus[k] = tau_max * k / (samples - 1);
    return taus;
}

/// Delay grid long enough for the slowest decaying mode of L to fall by
/// 1e-7, at the default sample spacing and never shorter than the default.
inline std::vector<double> delay_grid_for(const Liouvillian& L) {
    const double spacing = kDefaultTauMax / (kDefaultTauSamples - 1);
    const double gap = spectral_gap(L);
    double tau_max = kDefaultTauMax;
    if (std::isfinite(gap) && gap > 0.0) tau_max = std::max(tau_max, std::ceil(std::log(1e7) / gap));
    const int samples = static_cast<int>(std::ceil(tau_max / spacing)) + 1;
    return delay_grid(tau_max, samples);
}

namespace detail {

// Delay at which the subtracted correlation would drop below 1e-6 |C(0)|,
// extrapolated from the envelope decay over the last half of the record.
inline double required_tau_max(const Correlation& c) {
    const std::size_t n = c.values.size();
    auto envelope = [&](std::size_t from, std::size_t to) {
        double m = 0.0;
        for (std::size_t k = from; k < to; ++k) m = std::max(m, std::abs(c.values[k] - c.coherent_part));
        return m;
    };
    const double t_end = c.taus.back();
    const std::size_t half = n / 2, three_q = (3 * n) / 4;
    const double e1 = envelope(half, three_q), e2 = envelope(three_q, n);
    const double target = 1e-6 * std::abs(c.values.front());
    const double dt = c.taus[n - 1] - c.taus[three_q];
    if (e2 <= 0.0 || e1 <= e2 || dt <= 0.0 || target <= 0.0) return 2.0 * t_end;
    const double rate = std::log(e1 / e2) / dt;
    return t_end + std::log(e2 / target) / rate;
}

}  // namespace detail

/// Trapezoidal quadrature of the half-line integral, coherent part removed.
/// Throws TruncationError when the correlation has not decayed to
/// 1e-6 |C(0)| by the end of the record.
inline Spectrum cavity_spectrum(const Correlation& corr, std::span<const double> omegas) {
    const std::size_t n = corr.values.size();
    if (n < 2 || corr.taus.size() != n) throw InvalidState("correlation record needs at least two samples");
    Spectrum s;
    s.omegas.assign(omegas.begin(), omegas.end());
    s.values.assign(omegas.size(), 0.0);
    const double c0 = std::abs(corr.values.front());
    if (c0 == 0.0 && std::abs(corr.coherent_part) == 0.0) {
        bool all_zero = true;
        for (const auto& v : corr.values) all_zero = all_zero && v == Complex(0.0);
        if (all_zero) return s;
    }
    if (std::abs(corr.values.back() - corr.coherent_part) >= 1e-6 * c0) {
        const double need = detail::required_tau_max(corr);
        std::ostringstream msg;
        msg << "correlation has not decayed by tau=" << corr.taus.back() << "; need tau_max of about " << need;
        throw TruncationError(msg.str(), need);
    }

    std::vector<Complex> weighted(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double left = k > 0 ? corr.taus[k] - corr.taus[k - 1] : 0.0;
        const double right = k + 1 < n ? corr.taus[k + 1] - corr.taus[k] : 0.0;
        weighted[k] = 0.5 * (left + right) * (corr.values[k] - corr.coherent_part);
    }
    const double step = corr.taus[1] - corr.taus[0];
    bool uniform = true;
    for (std::size_t k = 1; k < n && uniform; ++k)
        uniform = std::abs((corr.taus[k] - corr.taus[k - 1]) - step) <= 1e-9 * step;

    for (std::size_t w = 0; w < omegas.size(); ++w) {
        const double om = omegas[w];
        Complex acc(0.0, 0.0);
        if (uniform) {
            // Phase recurrence, re-anchored periodically to bound drift.
            const Complex rot = std::polar(1.0, -om * step);
            Complex phase(1.0, 0.0);
            for (std::size_t k = 0; k < n; ++k) {
                if (k % 512 == 0) phase = std::polar(1.0, -om * corr.taus[k]);
                acc += weighted[k] * phase;
                phase *= rot;
            }
        } else {
            for (std::size_t k = 0; k < n; ++k) acc += weighted[k] * std::polar(1.0, -om * corr.taus[k]);
        }
        s.values[w] = acc.real();
    }
    return s;
}

struct Anchor {
    DensityMatrix state;
    bool from_steady_state;
    double residual;
};

/// Steady state when unique; otherwise the state reached from `initial`
/// after `settle_time`, with its stationarity residual.
inline Anchor stationary_anchor(const Liouvillian& L, const DensityMatrix& initial, double settle_time = 200.0,
                                double tol = kDefaultTolerance) {
    try {
        auto ss = steady_state(L);
        return {std::move(ss.state), true, ss.residual};
    } catch (const DegenerateSteadyState&) {
        const double grid[] = {0.0, settle_time};
        const auto tr = evolve(L, initial, grid, tol);
        DensityMatrix rho = detail::to_density(L.space(), tr.states.back());
        const double residual = L.apply(rho.matrix()).cwiseAbs().maxCoeff();
        return {std::move(rho), false, residual};
    }
}

/// Trapezoidal integral of a sampled spectrum over its frequency grid.
inline double integrate_spectrum(const Spectrum& s) {
    double acc = 0.0;
    for (std::size_t k = 1; k < s.values.size(); ++k)
        acc += 0.5 * (s.omegas[k] - s.omegas[k - 1]) * (s.values[k] + s.values[k - 1]);
    return acc;
}

/// Indices of interior local maxima whose height is at least
/// `relative_height` times the global maximum.
inline std::vector<std::size_t> find_peaks(const Spectrum& s, double relative_height = 0.0) {
    std::vector<std::size_t> out;
    if (s.values.size() < 3) return out;
    const double top = *std::max_element(s.values.begin(), s.values.end());
    for (std::size_t k = 1; k + 1 < s.values.size(); ++k) {
        if (s.values[k] > s.values[k - 1] && s.values[k] >= s.values[k + 1] && s.values[k] >= relative_height * top)
            out.push_back(k);
    }
    return out;
}

/// Full width at half maximum of the peak at `index`, by linear
/// interpolation of the half-height crossings. Returns NaN if a crossing is
/// not found before a neighbouring local minimum rises above half height.
inline double peak_fwhm(const Spectrum& s, std::size_t index) {
    const double half = 0.5 * s.values[index];
    auto crossing = [&](int dir) -> double {
        std::size_t k = index;
        while (true) {
            if ((dir < 0 && k == 0) || (dir > 0 && k + 1 >= s.values.size())) return std::nan("");
            const std::size_t j = dir < 0 ? k - 1 : k + 1;
            if (s.values[j] > s.values[k]) return std::nan("");
            if (s.values[j] <= half) {
                const double f = (s.values[k] - half) / (s.values[k] - s.values[j]);
                return s.omegas[k] + f * (s.omegas[j] - s.omegas[k]);
            }
            k = j;
        }
    };
    const double lo = crossing(-1), hi = crossing(+1);
    return hi - lo;
}

}  // namespace vic
