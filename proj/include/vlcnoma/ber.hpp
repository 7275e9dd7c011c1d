#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "vlcnoma/link.hpp"
#include "vlcnoma/math.hpp"
#include "vlcnoma/qfit.hpp"

namespace vlcnoma {

/// Stage decision errors (decided minus sent) for the cancelled stages.
using StageErrorVector = std::vector<int>;

/// Enumeration of the residual-interference bit patterns over the signals
/// decoded after stage k. Row i is the binary expansion of i-1 with the
/// last user in the least significant position.
struct InterferencePattern {
    int users = 0;
    int order = 0;

    int columns() const { return users - order; }
    int rows() const { return 1 << columns(); }

    /// Entry for row (0-based) and column index c in 0..columns()-1,
    /// where column c refers to the signal of user order+1+c.
    int entry(int row, int c) const { return (row >> (columns() - 1 - c)) & 1; }

    /// Residual interference power of one row.
    double row_power(int row, const PowerAllocation& alloc) const {
        double s = 0.0;
        for (int c = 0; c < columns(); ++c)
            if (entry(row, c)) s += alloc.powers[order + c];
        return s;
    }
};

inline InterferencePattern interference_matrix(int users, int order) {
    if (order < 1 || order > users)
        throw std::invalid_argument("interference_matrix: order outside 1..users");
    return InterferencePattern{users, order};
}

namespace detail {

inline double stage_error_offset(const StageErrorVector& e, const PowerAllocation& alloc) {
    double s = 0.0;
    for (size_t j = 0; j < e.size(); ++j) s += e[j] * alloc.powers[j];
    return s;
}

/// Chain the per-stage conditional error kernels over every residual-error
/// pattern of the cancelled stages. kernel(stage, prefix) must return the
/// conditional bit-error probability of that stage given the prefix errors.
template <class Kernel>
double sic_chain(int order, Kernel&& kernel) {
    if (order == 1) return kernel(1, StageErrorVector{});
    StageErrorVector e;
    e.reserve(order - 1);
    std::function<double(int)> descend = [&](int stage) -> double {
        if (stage == order) return kernel(order, e);
        double pr = kernel(stage, e);
        double acc = 0.0;
        for (int v : {-1, 0, 1}) {
            e.push_back(v);
            acc += (v == 0 ? 1.0 - pr : 0.5 * pr) * descend(stage + 1);
            e.pop_back();
        }
        return acc;
    };
    return descend(1);
}

} // namespace detail

/// Conditional bit-error probability of decoding stage `stage` at a receiver
/// with channel gain `gain`, given the stage errors accumulated so far.
inline double conditional_ber_perfect(int stage, const StageErrorVector& e,
                                      const PowerAllocation& alloc, double gain,
                                      double responsivity, double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("conditional_ber_perfect: sigma <= 0");
    if (static_cast<int>(e.size()) != stage - 1)
        throw std::invalid_argument("conditional_ber_perfect: error vector length != stage-1");
    const int users = alloc.user_count();
    auto pattern = interference_matrix(users, stage);
    const double eoff = detail::stage_error_offset(e, alloc);
    const double half = alloc.powers[stage - 1] / 2.0;
    const double scale = responsivity * gain / sigma;
    CompensatedSum acc;
    for (int r = 0; r < pattern.rows(); ++r) {
        double interference = pattern.row_power(r, alloc);
        acc.add(q_function(scale * (half - eoff - interference)));
        acc.add(q_function(scale * (half + eoff + interference)));
    }
    return acc.value() / std::pow(2.0, users - stage + 1);
}

/// Bit-error rate of the user at decoding order k under exact channel
/// knowledge, chaining the conditional stage error probabilities.
inline double ber_perfect(int order, const PowerAllocation& alloc, double gain,
                          double responsivity, double sigma) {
    return detail::sic_chain(order, [&](int stage, const StageErrorVector& e) {
        return conditional_ber_perfect(stage, e, alloc, gain, responsivity, sigma);
    });
}

/// Counters surfaced by the noisy-CSI evaluation.
struct NoisyEvalCounters {
    long long fallback_terms = 0; // terms integrated numerically
    long long clamped = 0;        // closed-form values clamped into [0, 1]
};

namespace detail {

/// Closed-form Gaussian average of the exponential tail surrogate with
/// argument u = resp*(gain+eps)*margin/sigma, eps ~ N(0, var).
inline double noisy_closed_term(double margin, double gain, double responsivity, double sigma,
                                double eps_var, const QExpFit& fit) {
    const double gh = responsivity * gain;
    const double gv = responsivity * responsivity * eps_var;
    const double a = fit.a, b = fit.b, c = fit.c;
    const double alpha = 1.0 / gv - 2.0 * a * margin * margin / (sigma * sigma);
    const double num =
        margin * (2.0 * a * gh * gh * margin + b * (b * margin * gv + 2.0 * gh * sigma));
    const double den = 4.0 * a * margin * margin * gv - 2.0 * sigma * sigma;
    return std::exp(c - num / den) / std::sqrt(gv * alpha);
}

/// One term of the exact error-mixture integral: the stage error
/// probability averaged over the Gaussian estimation error, with the
/// estimate entering the decision threshold.
inline double noisy_quadrature_term(double margin, double stage_power, double gain,
                                    double responsivity, double sigma, double eps_sd) {
    return gaussian_expectation(
        [&](double eps) {
            return q_function(responsivity * (stage_power * eps / 2.0 + gain * margin) / sigma);
        },
        eps_sd);
}

} // namespace detail

/// Conditional stage error probability under Gaussian gain-estimation error.
/// Terms whose power margin is positive use the closed form; the rest fall
/// back to adaptive quadrature of the exact mixture integral.
inline double conditional_ber_noisy(int stage, const StageErrorVector& e,
                                    const PowerAllocation& alloc, double gain,
                                    double responsivity, double sigma, double eps_var,
                                    const QExpFit& fit, NoisyEvalCounters* counters = nullptr,
                                    bool force_quadrature = false) {
    if (!(eps_var > 0.0)) throw std::invalid_argument("conditional_ber_noisy: eps_var <= 0");
    if (!(fit.a < 0.0)) throw std::invalid_argument("conditional_ber_noisy: fit.a must be < 0");
    const int users = alloc.user_count();
    auto pattern = interference_matrix(users, stage);
    const double eoff = detail::stage_error_offset(e, alloc);
    const double half = alloc.powers[stage - 1] / 2.0;
    const double eps_sd = std::sqrt(eps_var);
    const double prefactor = 1.0 / std::pow(2.0, users - stage + 1);
    CompensatedSum acc;
    auto term = [&](double margin) {
        if (!force_quadrature && margin > 0.0)
            return detail::noisy_closed_term(margin, gain, responsivity, sigma, eps_var, fit);
        if (counters) ++counters->fallback_terms;
        return detail::noisy_quadrature_term(margin, alloc.powers[stage - 1], gain, responsivity,
                                             sigma, eps_sd);
    };
    for (int r = 0; r < pattern.rows(); ++r) {
        double interference = pattern.row_power(r, alloc);
        acc.add(term(half - eoff - interference));
        acc.add(term(half + eoff + interference));
    }
    double v = acc.value() * prefactor;
    if (v < 0.0 || v > 1.0) {
        if (counters) ++counters->clamped;
        v = std::clamp(v, 0.0, 1.0);
    }
    return v;
}

/// Noisy-CSI bit-error rate; same chain as ber_perfect with noisy kernels.
inline double ber_noisy(int order, const PowerAllocation& alloc, double gain,
                        double responsivity, double sigma, double eps_var, const QExpFit& fit,
                        NoisyEvalCounters* counters = nullptr, bool force_quadrature = false) {
    return detail::sic_chain(order, [&](int stage, const StageErrorVector& e) {
        return conditional_ber_noisy(stage, e, alloc, gain, responsivity, sigma, eps_var, fit,
                                     counters, force_quadrature);
    });
}

/// Worst-case conditional stage error probability when the gain estimate is
/// stale but its deviation is bounded by error_bound. Both tail arguments
/// shift down by the bound term.
inline double conditional_ber_outdated(int stage, const StageErrorVector& e,
                                       const PowerAllocation& alloc, double gain,
                                       double responsivity, double sigma, double error_bound) {
    if (error_bound < 0.0) throw std::invalid_argument("conditional_ber_outdated: bound < 0");
    if (!(sigma > 0.0)) throw std::invalid_argument("conditional_ber_outdated: sigma <= 0");
    const int users = alloc.user_count();
    auto pattern = interference_matrix(users, stage);
    const double eoff = detail::stage_error_offset(e, alloc);
    const double half = alloc.powers[stage - 1] / 2.0;
    const double scale = responsivity * gain / sigma;
    const double shift = responsivity * error_bound * alloc.powers[stage - 1] / (2.0 * sigma);
    CompensatedSum acc;
    for (int r = 0; r < pattern.rows(); ++r) {
        double interference = pattern.row_power(r, alloc);
        acc.add(q_function(-shift + scale * (half - eoff - interference)));
        acc.add(q_function(-shift + scale * (half + eoff + interference)));
    }
    return acc.value() / std::pow(2.0, users - stage + 1);
}

/// Stale-CSI bit-error upper bound at decoding order k.
inline double ber_outdated(int order, const PowerAllocation& alloc, double gain,
                           double responsivity, double sigma, double error_bound) {
    return detail::sic_chain(order, [&](int stage, const StageErrorVector& e) {
        return conditional_ber_outdated(stage, e, alloc, gain, responsivity, sigma, error_bound);
    });
}

/// Majority-vote repetition decoding error over n slots with raw slot error
/// probability p. Even split counts as an error.
inline double vook_ber(double p_raw, int n) {
    if (p_raw < 0.0 || p_raw > 1.0) throw std::invalid_argument("vook_ber: p outside [0,1]");
    if (n < 1) throw std::invalid_argument("vook_ber: n < 1");
    int lo = (n + 1) / 2; // ceil(n/2)
    CompensatedSum acc;
    for (int i = lo; i <= n; ++i)
        acc.add(binomial(n, i) * std::pow(p_raw, i) * std::pow(1.0 - p_raw, n - i));
    return std::clamp(acc.value(), 0.0, 1.0);
}

/// Repetition count for a digital-dimming target; symmetric about 1/2.
inline int vook_redundancy(double dimming_factor) {
    if (!(dimming_factor > 0.0) || !(dimming_factor < 1.0))
        throw std::invalid_argument("vook_redundancy: no data at factor 0 or 1");
    double n = dimming_factor <= 0.5 ? 20.0 * dimming_factor : 20.0 - 20.0 * dimming_factor;
    return static_cast<int>(std::lround(n));
}

} // namespace vlcnoma
