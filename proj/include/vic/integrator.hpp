#pragma once

// Adaptive Dormand-Prince 5(4) integrator with the fourth-order continuous
// extension, for complex linear or nonlinear ODE systems y' = f(t, y).
// Outputs are interpolated onto a caller-supplied increasing time grid.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <sstream>
#include <vector>

#include "vic/hilbert.hpp"

namespace vic {

struct IntegratorOptions {
    double rtol = 1e-9;
    double atol = 1e-12;
    double initial_step = 0.0;  // 0 selects automatically
    double max_step = 0.0;      // 0 means unbounded
    long max_steps = 50'000'000;
};

struct IntegratorStats {
    long accepted = 0;
    long rejected = 0;
    long rhs_evaluations = 0;
};

namespace dopri5 {

inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                        a65 = -5103.0 / 18656;
inline constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                        a76 = 11.0 / 84;
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                        e6 = 22.0 / 525, e7 = -1.0 / 40;
inline constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                        d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                        d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

}  // namespace dopri5

/// Integrates y' = rhs(t, y) from times.front() and returns y at every grid
/// point. Throws StiffnessError if the step size underflows.
template <class Rhs>
std::vector<Vector> integrate_dopri5(Rhs&& rhs, const Vector& y0, std::span<const double> times,
                                     const IntegratorOptions& opt = {}, IntegratorStats* stats = nullptr) {
    using namespace dopri5;
    std::vector<Vector> out;
    if (times.empty()) return out;
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (!(times[i] > times[i - 1])) throw InvalidState("output time grid must be strictly increasing");
    }
    if (!(opt.rtol > 0.0) || !(opt.atol >= 0.0)) throw InvalidState("tolerances must be positive");

    IntegratorStats local;
    IntegratorStats& st = stats ? *stats : local;
    const Eigen::Index n = y0.size();

    auto error_norm = [&](const Vector& err, const Vector& ya, const Vector& yb) {
        double acc = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double sc = opt.atol + opt.rtol * std::max(std::abs(ya(i)), std::abs(yb(i)));
            const double r = std::abs(err(i)) / sc;
            acc += r * r;
        }
        return n > 0 ? std::sqrt(acc / static_cast<double>(n)) : 0.0;
    };

    double t = times.front();
    const double t_end = times.back();
    Vector y = y0;
    out.reserve(times.size());
    out.push_back(y);
    if (times.size() == 1) return out;

    Vector k1 = rhs(t, y);
    ++st.rhs_evaluations;

    double h = opt.initial_step;
    if (h <= 0.0) {
        // Hairer's starting step heuristic.
        Vector scale(n);
        for (Eigen::Index i = 0; i < n; ++i) scale(i) = opt.atol + opt.rtol * std::abs(y(i));
        auto wnorm = [&](const Vector& v) {
            double acc = 0.0;
            for (Eigen::Index i = 0; i < n; ++i) acc += std::norm(v(i) / scale(i));
            return n > 0 ? std::sqrt(acc / static_cast<double>(n)) : 0.0;
        };
        const double d0 = wnorm(y), d1n = wnorm(k1);
        double h0 = (d0 < 1e-5 || d1n < 1e-5) ? 1e-6 : 0.01 * d0 / d1n;
        h0 = std::min(h0, t_end - t);
        const Vector k2 = rhs(t + h0, y + h0 * k1);
        ++st.rhs_evaluations;
        const double d2 = wnorm(k2 - k1) / h0;
        const double h1 = (std::max(d1n, d2) <= 1e-15) ? std::max(1e-6, h0 * 1e-3)
                                                       : std::pow(0.01 / std::max(d1n, d2), 1.0 / 5.0);
        h = std::min(100.0 * h0, h1);
    }
    const double h_max = opt.max_step > 0.0 ? opt.max_step : std::abs(t_end - t);
    h = std::min(h, h_max);

    std::size_t next = 1;
    double err_prev = 1e-4;
    bool last_rejected = false;
    Vector k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), y1(n), ytmp(n), err(n);
    Vector r2(n), r3(n), r4(n), r5(n);

    while (next < times.size()) {
        if (st.accepted + st.rejected >= opt.max_steps) {
            std::ostringstream msg;
            msg << "integrator exceeded " << opt.max_steps << " steps at t=" << t;
            throw StiffnessError(msg.str(), t);
        }
        const double min_h = 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t));
        if (h < min_h) {
            std::ostringstream msg;
            msg << "step size underflow (h=" << h << ") at t=" << t << "; problem may be stiff";
            throw StiffnessError(msg.str(), t);
        }
        bool hits_end = false;
        if (t + h >= t_end) {
            h = t_end - t;
            hits_end = true;
        }

        ytmp = y + h * a21 * k1;
        k2 = rhs(t + c2 * h, ytmp);
        ytmp = y + h * (a31 * k1 + a32 * k2);
        k3 = rhs(t + c3 * h, ytmp);
        ytmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
        k4 = rhs(t + c4 * h, ytmp);
        ytmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
        k5 = rhs(t + c5 * h, ytmp);
        ytmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
        k6 = rhs(t + h, ytmp);
        y1 = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
        k7 = rhs(t + h, y1);
        st.rhs_evaluations += 6;
        err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
        const double en = error_norm(err, y, y1);

        if (en <= 1.0) {
            ++st.accepted;
            const double t_new = hits_end ? t_end : t + h;
            // Continuous extension coefficients for this step.
            const Vector ydiff = y1 - y;
            const Vector bspl = h * k1 - ydiff;
            r2 = ydiff;
            r3 = bspl;
            r4 = ydiff - h * k7 - bspl;
            r5 = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
            while (next < times.size() && times[next] <= t_new) {
                if (times[next] == t_new) {
                    out.push_back(y1);
                } else {
                    const double s = (times[next] - t) / h;
                    const double s1 = 1.0 - s;
                    out.push_back(y + s * (r2 + s1 * (r3 + s * (r4 + s1 * r5))));
                }
                ++next;
            }
            t = t_new;
            y = y1;
            k1 = k7;
            // PI step control (Gustafsson) with beta = 0.04.
            const double e = std::max(en, 1e-10);
            double fac = 0.9 * std::pow(e, -0.7 / 5.0) * std::pow(err_prev, 0.04);
            fac = std::clamp(fac, 0.2, 10.0);
            if (last_rejected) fac = std::min(fac, 1.0);
            h = std::min(h * fac, h_max);
            err_prev = std::max(en, 1e-4);
            last_rejected = false;
        } else {
            ++st.rejected;
            h *= std::max(0.2, 0.9 * std::pow(en, -1.0 / 5.0));
            last_rejected = true;
        }
    }
    return out;
}

}  // namespace vic
