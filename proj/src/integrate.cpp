#include "rollsing/integrate.hpp"

#include <algorithm>
#include <cmath>

namespace rollsing {

namespace {

// Dormand-Prince 5(4) tableau. Stage 7 is first-same-as-last.
constexpr double C2 = 1.0 / 5.0, C3 = 3.0 / 10.0, C4 = 4.0 / 5.0, C5 = 8.0 / 9.0;

constexpr double A21 = 1.0 / 5.0;
constexpr double A31 = 3.0 / 40.0, A32 = 9.0 / 40.0;
constexpr double A41 = 44.0 / 45.0, A42 = -56.0 / 15.0, A43 = 32.0 / 9.0;
constexpr double A51 = 19372.0 / 6561.0, A52 = -25360.0 / 2187.0, A53 = 64448.0 / 6561.0,
                 A54 = -212.0 / 729.0;
constexpr double A61 = 9017.0 / 3168.0, A62 = -355.0 / 33.0, A63 = 46732.0 / 5247.0,
                 A64 = 49.0 / 176.0, A65 = -5103.0 / 18656.0;
constexpr double A71 = 35.0 / 384.0, A73 = 500.0 / 1113.0, A74 = 125.0 / 192.0,
                 A75 = -2187.0 / 6784.0, A76 = 11.0 / 84.0;

// e = b(5th) - b(4th): error estimate weights.
constexpr double E1 = 71.0 / 57600.0, E3 = -71.0 / 16695.0, E4 = 71.0 / 1920.0,
                 E5 = -17253.0 / 339200.0, E6 = 22.0 / 525.0, E7 = -1.0 / 40.0;

// Quartic continuous-extension weights (Hairer-Norsett-Wanner dopri5).
constexpr double D1 = -12715105075.0 / 11282082432.0, D3 = 87487479700.0 / 32700410799.0,
                 D4 = -10690763975.0 / 1880347072.0, D5 = 701980252875.0 / 199316789632.0,
                 D6 = -1453857185.0 / 822651844.0, D7 = 69997945.0 / 29380423.0;

constexpr double kSafety = 0.9;
constexpr double kFacMin = 0.2;
constexpr double kFacMax = 5.0;
constexpr double kErrExponent = -0.2;  // -(1 / order)

bool all_finite(std::span<const double> v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

// Interpolation coefficients of one accepted step, valid on [t, t + h].
struct DenseStep {
    double t, h;
    std::vector<double> r1, r2, r3, r4, r5;

    std::vector<double> eval(double tq) const {
        const double s = (tq - t) / h;
        const double s1 = 1.0 - s;
        std::vector<double> out(r1.size());
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] = r1[i] + s * (r2[i] + s1 * (r3[i] + s * (r4[i] + s1 * r5[i])));
        return out;
    }
};

}  // namespace

SolutionTrace integrate_adaptive(const RhsFunc& rhs, std::span<const double> y0,
                                 double t0, double t1, const IntegratorConfig& cfg,
                                 double sample_dt, SampleMode mode) {
    const std::size_t dim = y0.size();
    const double span = t1 - t0;

    SolutionTrace trace;
    trace.times.push_back(t0);
    trace.states.emplace_back(y0.begin(), y0.end());
    if (!(span > 0.0)) return trace;

    // Sample grid after t0; the final point is clamped to t1 exactly.
    std::vector<double> samples;
    const double tiny = 1e-12 * std::max(1.0, std::abs(t1));
    if (sample_dt > 0.0) {
        for (std::size_t k = 1;; ++k) {
            const double tk = t0 + static_cast<double>(k) * sample_dt;
            if (tk > t1 + tiny) break;
            samples.push_back(tk);
        }
    }
    if (samples.empty() || samples.back() < t1 - tiny)
        samples.push_back(t1);
    else
        samples.back() = t1;

    std::vector<double> y(y0.begin(), y0.end());
    std::vector<double> k1(dim), k2(dim), k3(dim), k4(dim), k5(dim), k6(dim), k7(dim);
    std::vector<double> ytmp(dim), ynew(dim), errv(dim);

    double t = t0;
    std::size_t next_sample = 0;

    auto fail = [&](IntegratorStatus st, double tf) {
        trace.status = st;
        trace.failure_time = tf;
        return trace;
    };

    ++trace.n_rhs_evals;
    if (!rhs(t, y, k1) || !all_finite(k1)) return fail(IntegratorStatus::RhsFailure, t);

    const double h_max = cfg.h_max > 0.0 ? cfg.h_max : span / 10.0;
    double h = cfg.h_init > 0.0 ? cfg.h_init : span / 1000.0;
    h = std::min(std::max(h, cfg.h_min), h_max);

    std::size_t attempts = 0;
    while (t < t1 - tiny) {
        if (attempts++ >= cfg.max_steps) return fail(IntegratorStatus::BudgetExceeded, t);
        if (h < cfg.h_min) return fail(IntegratorStatus::StepUnderflow, t);

        double h_step = std::min(h, t1 - t);
        if (mode == SampleMode::StepEndpoint && next_sample < samples.size())
            h_step = std::min(h_step, samples[next_sample] - t);

        auto stage = [&](std::vector<double>& k, double c, auto... aw) {
            const double* ks[] = {k1.data(), k2.data(), k3.data(), k4.data(), k5.data(), k6.data()};
            const double as[] = {aw...};
            for (std::size_t i = 0; i < dim; ++i) {
                double sum = 0.0;
                for (std::size_t j = 0; j < sizeof...(aw); ++j) sum += as[j] * ks[j][i];
                ytmp[i] = y[i] + h_step * sum;
            }
            ++trace.n_rhs_evals;
            return rhs(t + c * h_step, ytmp, k) && all_finite(k);
        };

        bool ok = stage(k2, C2, A21) && stage(k3, C3, A31, A32) &&
                  stage(k4, C4, A41, A42, A43) && stage(k5, C5, A51, A52, A53, A54) &&
                  stage(k6, 1.0, A61, A62, A63, A64, A65);
        if (ok) {
            for (std::size_t i = 0; i < dim; ++i)
                ynew[i] = y[i] + h_step * (A71 * k1[i] + A73 * k3[i] + A74 * k4[i] +
                                           A75 * k5[i] + A76 * k6[i]);
            ++trace.n_rhs_evals;
            ok = rhs(t + h_step, ynew, k7) && all_finite(k7);
        }
        if (!ok) return fail(IntegratorStatus::RhsFailure, t + h_step);

        double err = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            errv[i] = h_step * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] +
                                E6 * k6[i] + E7 * k7[i]);
            const double scale =
                cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            err = std::max(err, std::abs(errv[i]) / scale);
        }

        if (!std::isfinite(err)) {
            ++trace.n_rejected;
            h = h_step * kFacMin;
            continue;
        }

        if (err <= 1.0) {
            DenseStep dense;
            const bool need_dense =
                mode == SampleMode::Interpolant && next_sample < samples.size() &&
                samples[next_sample] <= t + h_step + tiny;
            if (need_dense) {
                dense.t = t;
                dense.h = h_step;
                dense.r1.resize(dim);
                dense.r2.resize(dim);
                dense.r3.resize(dim);
                dense.r4.resize(dim);
                dense.r5.resize(dim);
                for (std::size_t i = 0; i < dim; ++i) {
                    const double dy = ynew[i] - y[i];
                    const double bspl = h_step * k1[i] - dy;
                    dense.r1[i] = y[i];
                    dense.r2[i] = dy;
                    dense.r3[i] = bspl;
                    dense.r4[i] = dy - h_step * k7[i] - bspl;
                    dense.r5[i] = h_step * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] +
                                            D5 * k5[i] + D6 * k6[i] + D7 * k7[i]);
                }
            }

            t += h_step;
            y.swap(ynew);
            k1.swap(k7);  // first-same-as-last
            ++trace.n_accepted;
            trace.step_sizes.push_back(h_step);

            while (next_sample < samples.size() && samples[next_sample] <= t + tiny) {
                const double ts = samples[next_sample];
                trace.times.push_back(ts);
                if (mode == SampleMode::Interpolant && std::abs(ts - t) > tiny)
                    trace.states.push_back(dense.eval(ts));
                else
                    trace.states.emplace_back(y.begin(), y.end());
                ++next_sample;
            }
        } else {
            ++trace.n_rejected;
        }

        const double fac = std::clamp(kSafety * std::pow(err, kErrExponent), kFacMin, kFacMax);
        h = std::min(h_step * fac, h_max);
    }

    return trace;
}

}  // namespace rollsing
