#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

namespace vlcnoma {

inline constexpr double kPi = 3.14159265358979323846;

/// Gaussian tail probability Q(x) = P(N(0,1) > x), evaluated via erfc.
inline double q_function(double x) {
    return 0.5 * std::erfc(x / std::sqrt(2.0));
}

/// Standard normal density.
inline double gauss_pdf(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * kPi);
}

/// Neumaier compensated summation.
class CompensatedSum {
public:
    void add(double v) {
        double t = sum_ + v;
        if (std::fabs(sum_) >= std::fabs(v))
            comp_ += (sum_ - t) + v;
        else
            comp_ += (v - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// Binomial coefficient as double; exact for the small n used here.
inline double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    k = std::min(k, n - k);
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return std::round(r);
}

namespace detail {

inline double simpson(const std::function<double(double)>& f, double a, double b,
                      double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adapt(const std::function<double(double)>& f, double a, double b,
                    double fa, double fm, double fb, double whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = simpson(f, a, m, fa, flm, fm);
    double right = simpson(f, m, b, fm, frm, fb);
    if (depth <= 0 || std::fabs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adapt(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adapt(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

} // namespace detail

/// Adaptive Simpson quadrature of f over [a, b].
inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-12, int max_depth = 40) {
    if (!(b > a)) return 0.0;
    double m = 0.5 * (a + b);
    double fa = f(a), fm = f(m), fb = f(b);
    double whole = detail::simpson(f, a, b, fa, fm, fb);
    return detail::adapt(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

/// Expectation of f(e) under e ~ N(0, sd^2), integrated over +-span standard
/// deviations. The domain is pre-split so that integrands much narrower than
/// the Gaussian cannot slip between the initial sample points.
inline double gaussian_expectation(const std::function<double(double)>& f, double sd,
                                   double span = 8.0, double tol = 1e-12) {
    if (sd <= 0.0) return f(0.0);
    auto g = [&](double e) { return f(e) * std::exp(-0.5 * e * e / (sd * sd)); };
    double norm = sd * std::sqrt(2.0 * kPi);
    const int panels = 32;
    double lo = -span * sd, width = 2.0 * span * sd / panels;
    CompensatedSum acc;
    for (int i = 0; i < panels; ++i)
        acc.add(integrate(g, lo + i * width, lo + (i + 1) * width, tol * norm / panels));
    return acc.value() / norm;
}

/// Bisection for a continuous monotone-bracketed root of f on [lo, hi].
inline double bisect(const std::function<double(double)>& f, double lo, double hi,
                     int iters = 200) {
    double flo = f(lo), fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0))
        throw std::invalid_argument("bisect: root not bracketed");
    for (int i = 0; i < iters; ++i) {
        double mid = 0.5 * (lo + hi);
        double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace vlcnoma
