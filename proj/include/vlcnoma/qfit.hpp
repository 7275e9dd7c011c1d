#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "vlcnoma/math.hpp"

namespace vlcnoma {

/// Exponential surrogate for the Gaussian tail, Q(x) ~ exp(a x^2 + b x + c)
/// on x >= 0. Valid only with a < 0.
struct QExpFit {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double domain_lo = 0.0;
    double domain_hi = 8.0;
    double max_rel_error = 0.0; // measured on the fit grid

    double evaluate(double x) const { return std::exp((a * x + b) * x + c); }
};

/// Largest relative deviation of the surrogate from Q over [lo, hi].
inline double measure_qfit_rel_error(const QExpFit& f, double lo, double hi,
                                     double step = 0.0025) {
    double worst = 0.0;
    for (double x = lo; x <= hi + 1e-12; x += step) {
        double q = q_function(x);
        worst = std::max(worst, std::fabs(f.evaluate(x) - q) / q);
    }
    return worst;
}

/// Least-squares fit of ln Q(x) by a quadratic over the supplied grid.
inline QExpFit fit_q_exp(const std::vector<double>& grid) {
    if (grid.size() < 100) throw std::invalid_argument("fit_q_exp: fewer than 100 grid points");
    for (double x : grid)
        if (x < 0.0 || x > 8.0) throw std::invalid_argument("fit_q_exp: grid outside [0, 8]");

    double s[3][4] = {};
    for (double x : grid) {
        double y = std::log(q_function(x));
        double v[3] = {x * x, x, 1.0};
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) s[i][j] += v[i] * v[j];
            s[i][3] += v[i] * y;
        }
    }
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::fabs(s[r][col]) > std::fabs(s[piv][col])) piv = r;
        if (std::fabs(s[piv][col]) < 1e-30)
            throw std::runtime_error("fit_q_exp: singular normal equations");
        for (int j = 0; j < 4; ++j) std::swap(s[col][j], s[piv][j]);
        for (int r = 0; r < 3; ++r) {
            if (r == col) continue;
            double f = s[r][col] / s[col][col];
            for (int j = col; j < 4; ++j) s[r][j] -= f * s[col][j];
        }
    }
    QExpFit fit;
    fit.a = s[0][3] / s[0][0];
    fit.b = s[1][3] / s[1][1];
    fit.c = s[2][3] / s[2][2];
    fit.domain_lo = grid.front();
    fit.domain_hi = grid.back();
    if (!(fit.a < 0.0)) throw std::runtime_error("fit_q_exp: fitted a is not negative");
    double worst = 0.0;
    for (double x : grid) {
        double q = q_function(x);
        worst = std::max(worst, std::fabs(fit.evaluate(x) - q) / q);
    }
    fit.max_rel_error = worst;
    return fit;
}

/// Uniform grid helper for the default fitting domain.
inline std::vector<double> uniform_grid(double lo, double hi, double step) {
    std::vector<double> g;
    for (double x = lo; x <= hi + 1e-12; x += step) g.push_back(x);
    return g;
}

/// Nelder-Mead polish of (a, b, c) toward the minimax relative error
/// over [lo, hi]. Deterministic given the start point.
inline QExpFit refine_q_fit_minimax(QExpFit start, double lo, double hi, int iters = 3000) {
    auto obj = [&](const std::array<double, 3>& p) {
        QExpFit f{p[0], p[1], p[2], lo, hi, 0.0};
        return measure_qfit_rel_error(f, lo, hi);
    };
    std::array<std::pair<double, std::array<double, 3>>, 4> simplex;
    std::array<double, 3> p0{start.a, start.b, start.c};
    simplex[0] = {obj(p0), p0};
    for (int i = 0; i < 3; ++i) {
        auto p = p0;
        p[i] += (i == 2 ? 0.02 : 0.01);
        simplex[i + 1] = {obj(p), p};
    }
    for (int it = 0; it < iters; ++it) {
        std::sort(simplex.begin(), simplex.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        std::array<double, 3> cen{};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) cen[j] += simplex[i].second[j] / 3.0;
        auto refl = cen;
        for (int j = 0; j < 3; ++j) refl[j] = cen[j] + (cen[j] - simplex[3].second[j]);
        double fr = obj(refl);
        if (fr < simplex[0].first) {
            auto ext = cen;
            for (int j = 0; j < 3; ++j) ext[j] = cen[j] + 2.0 * (cen[j] - simplex[3].second[j]);
            double fe = obj(ext);
            simplex[3] = fe < fr ? std::make_pair(fe, ext) : std::make_pair(fr, refl);
        } else if (fr < simplex[2].first) {
            simplex[3] = {fr, refl};
        } else {
            auto con = cen;
            for (int j = 0; j < 3; ++j) con[j] = cen[j] + 0.5 * (simplex[3].second[j] - cen[j]);
            double fc = obj(con);
            if (fc < simplex[3].first) {
                simplex[3] = {fc, con};
            } else {
                for (int i = 1; i < 4; ++i) {
                    for (int j = 0; j < 3; ++j)
                        simplex[i].second[j] =
                            simplex[0].second[j] + 0.5 * (simplex[i].second[j] - simplex[0].second[j]);
                    simplex[i].first = obj(simplex[i].second);
                }
            }
        }
    }
    std::sort(simplex.begin(), simplex.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    QExpFit out{simplex[0].second[0], simplex[0].second[1], simplex[0].second[2], lo, hi,
                simplex[0].first};
    return out;
}

/// Coefficients used by the closed-form noisy-CSI expressions. These are the
/// minimax refinement of the least-squares fit over [0.5, 8]; the refinement
/// is reproducible via refine_q_fit_minimax and checked in the test suite.
inline const QExpFit& canonical_q_fit() {
    static const QExpFit fit{-0.47109567, -0.49404652, -0.86227340, 0.5, 8.0,
                             measure_qfit_rel_error({-0.47109567, -0.49404652, -0.86227340,
                                                     0.5, 8.0, 0.0},
                                                    0.5, 8.0)};
    return fit;
}

} // namespace vlcnoma
