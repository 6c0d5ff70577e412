#pragma once

// Special functions consumed by the basis and the coherent-state families:
// Pochhammer symbols, terminating and non-terminating 1F1, 2F1 at unit
// argument, modified Bessel functions of real order and Mittag-Leffler
// functions.

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "isocs/errors.hpp"
#include "isocs/quadrature.hpp"
#include "isocs/summation.hpp"

namespace isocs {

/// Value of a (possibly infinite) series together with how it was obtained.
template <class T>
struct SeriesResult {
    T value{};
    std::size_t terms_used = 1;
    double tail_bound = 0.0;
};

/// Upper limit on terms for every open-ended series in the library.
inline constexpr std::size_t series_term_cap = 1'000'000;

inline double log_gamma(double x) { return detail::log_gamma(x); }

/// log (a)_m for a > 0.
inline double log_pochhammer(double a, long m) {
    detail::require(a > 0.0, "a > 0 for log_pochhammer");
    detail::require(m >= 0, "m >= 0");
    if (m == 0) return 0.0;
    if (m <= 16) {
        double p = 1.0;
        for (long k = 0; k < m; ++k) p *= a + static_cast<double>(k);
        return std::log(p);
    }
    return log_gamma(a + static_cast<double>(m)) - log_gamma(a);
}

/// Rising factorial (a)_m = a (a+1) ... (a+m-1); (a)_0 = 1.
inline double pochhammer(double a, long m) {
    detail::require(m >= 0, "m >= 0");
    constexpr long direct_limit = 1000;
    if (m <= direct_limit) {
        double p = 1.0;
        for (long k = 0; k < m; ++k) {
            p *= a + static_cast<double>(k);
            if (p == 0.0) return 0.0;
        }
        if (std::isfinite(p)) return p;
        if (!(a > 0.0)) throw std::overflow_error("pochhammer: result exceeds double range");
    }
    if (a > 0.0) {
        const double lp = log_gamma(a + static_cast<double>(m)) - log_gamma(a);
        if (lp > std::log(std::numeric_limits<double>::max()))
            throw std::overflow_error("pochhammer: result exceeds double range even in log form");
        return std::exp(lp);
    }
    // a <= 0: zero if a is a non-positive integer inside the product range
    if (a == std::floor(a) && -a < static_cast<double>(m)) return 0.0;
    throw std::overflow_error("pochhammer: product length too large for non-positive a");
}

namespace detail {

// Double-double arithmetic (error-free transformations). Enough for the
// terminating 1F1 series, whose alternating terms can exceed the result by
// sixteen orders of magnitude.
struct DoubleDouble {
    double hi = 0.0;
    double lo = 0.0;
};

inline DoubleDouble two_sum(double a, double b) {
    const double s = a + b;
    const double bb = s - a;
    return {s, (a - (s - bb)) + (b - bb)};
}

inline DoubleDouble quick_two_sum(double a, double b) {
    const double s = a + b;
    return {s, b - (s - a)};
}

inline DoubleDouble two_prod(double a, double b) {
    const double p = a * b;
    return {p, std::fma(a, b, -p)};
}

inline DoubleDouble operator+(DoubleDouble a, DoubleDouble b) {
    DoubleDouble s = two_sum(a.hi, b.hi);
    DoubleDouble t = two_sum(a.lo, b.lo);
    s.lo += t.hi;
    s = quick_two_sum(s.hi, s.lo);
    s.lo += t.lo;
    return quick_two_sum(s.hi, s.lo);
}

inline DoubleDouble operator-(DoubleDouble a) { return {-a.hi, -a.lo}; }
inline DoubleDouble operator-(DoubleDouble a, DoubleDouble b) { return a + (-b); }

inline DoubleDouble operator*(DoubleDouble a, DoubleDouble b) {
    DoubleDouble p = two_prod(a.hi, b.hi);
    p.lo += a.hi * b.lo + a.lo * b.hi;
    return quick_two_sum(p.hi, p.lo);
}

inline DoubleDouble operator/(DoubleDouble a, DoubleDouble b) {
    const double q1 = a.hi / b.hi;
    DoubleDouble r = a - b * DoubleDouble{q1, 0.0};
    const double q2 = r.hi / b.hi;
    r = r - b * DoubleDouble{q2, 0.0};
    const double q3 = r.hi / b.hi;
    DoubleDouble q = quick_two_sum(q1, q2);
    return q + DoubleDouble{q3, 0.0};
}

inline double to_double(DoubleDouble a) { return a.hi + a.lo; }

}  // namespace detail

/// Result of the terminating series 1F1(-m; b; x).
struct TerminatingHyp1F1 {
    double value = 1.0;
    /// Largest |term| met along the way.
    double max_term = 1.0;
    /// Set when max_term > 1e8 |value|: the series cancelled heavily. The value
    /// is still carried in double-double, but downstream checks widen their
    /// tolerance for it.
    bool cancellation = false;
};

inline constexpr double cancellation_ratio = 1e8;

/// 1F1(-m; b; x) = sum_{k=0}^{m} (-m)_k / (b)_k x^k / k!, exactly m+1 terms.
/// Terms follow t_{k+1} = t_k (k - m) x / ((b + k)(k + 1)); both the recursion
/// and the summation run in double-double.
inline TerminatingHyp1F1 hyp1f1_terminating(long m, double b, double x) {
    detail::require(m >= 0, "m >= 0");
    detail::require(b > 0.0, "b > 0");
    using detail::DoubleDouble;
    DoubleDouble term{1.0, 0.0};
    DoubleDouble sum{1.0, 0.0};
    double max_term = 1.0;
    for (long k = 0; k < m; ++k) {
        const DoubleDouble num = detail::two_prod(static_cast<double>(k - m), x);
        const DoubleDouble den = detail::two_sum(b, static_cast<double>(k)) * DoubleDouble{static_cast<double>(k + 1), 0.0};
        term = term * num / den;
        sum = sum + term;
        max_term = std::max(max_term, std::abs(term.hi));
    }
    TerminatingHyp1F1 out;
    out.value = detail::to_double(sum);
    out.max_term = max_term;
    out.cancellation = max_term > cancellation_ratio * std::abs(out.value);
    return out;
}

/// All of 1F1(-k; b; x) for k = 0..M from the contiguous relation
///   (b + k) F_{k+1} = (2k + b - x) F_k - k F_{k-1},
/// i.e. the Laguerre recurrence in 1F1 normalization. Linear cost; used for the
/// long truncations (M up to 1e6) where the explicit series is hopeless.
inline std::vector<double> hyp1f1_terminating_sequence(long M, double b, double x) {
    detail::require(M >= 0, "M >= 0");
    detail::require(b > 0.0, "b > 0");
    std::vector<double> f(static_cast<std::size_t>(M + 1));
    f[0] = 1.0;
    if (M >= 1) f[1] = 1.0 - x / b;
    for (long k = 1; k < M; ++k) {
        const auto kk = static_cast<std::size_t>(k);
        f[kk + 1] = ((2.0 * k + b - x) * f[kk] - k * f[kk - 1]) / (b + k);
    }
    return f;
}

/// 1F1(1; b; x) = sum_k x^k / (b)_k for real or complex x. The tail bound is the
/// geometric majorant |t_{k+1}| / (1 - |x| / (b + k + 1)) once |x| < b + k + 1.
template <class T>
SeriesResult<T> hyp1f1_one(double b, T x, double tol = 1e-17) {
    detail::require(b > 0.0, "b > 0");
    CompensatedSum<T> sum;
    T term = T(1.0);
    sum += term;
    const double ax = std::abs(x);
    for (std::size_t k = 0; k < series_term_cap; ++k) {
        term = term * x / (b + static_cast<double>(k));
        sum += term;
        const double ratio = ax / (b + static_cast<double>(k) + 1.0);
        if (ratio < 1.0) {
            const double tail = std::abs(term) * ratio / (1.0 - ratio);
            if (tail <= tol * std::abs(sum.value()) || term == T(0.0))
                return {sum.value(), k + 2, tail};
        }
    }
    throw NonConvergence("hyp1f1_one: tolerance not met within term cap", std::complex<double>(sum.value()),
                         series_term_cap);
}

/// 2F1(-m, 1; b; 1) = (b-1)_m / (b)_m = (b-1) / (b-1+m) by Chu-Vandermonde.
inline double gauss2f1_unit(long m, double b) {
    detail::require(m >= 0, "m >= 0");
    detail::require(b > 1.0, "b > 1");
    return (b - 1.0) / (b - 1.0 + static_cast<double>(m));
}

/// I_nu(x) from the ascending series sum (x/2)^{2k+nu} / (k! Gamma(k+nu+1)).
inline SeriesResult<double> bessel_i(double nu, double x, double tol = 1e-17) {
    detail::require(nu >= 0.0, "nu >= 0");
    detail::require(x > 0.0, "x > 0");
    const double q = 0.25 * x * x;
    double term = std::exp(nu * std::log(0.5 * x) - log_gamma(nu + 1.0));
    CompensatedSum<double> sum;
    sum += term;
    for (std::size_t k = 0; k < series_term_cap; ++k) {
        const double kk = static_cast<double>(k);
        term *= q / ((kk + 1.0) * (kk + 1.0 + nu));
        sum += term;
        const double ratio = q / ((kk + 2.0) * (kk + 2.0 + nu));
        if (ratio < 1.0) {
            const double tail = term * ratio / (1.0 - ratio);
            if (tail <= tol * sum.value()) {
                if (!std::isfinite(sum.value())) throw std::overflow_error("bessel_i: overflow");
                return {sum.value(), k + 2, tail};
            }
        }
    }
    throw NonConvergence("bessel_i: tolerance not met within term cap", sum.value(), series_term_cap);
}

/// e^x K_nu(x) = int_0^inf exp(-x (cosh t - 1)) cosh(nu t) dt, by adaptive
/// quadrature. tail_bound carries the quadrature error estimate, terms_used the
/// number of panels.
inline SeriesResult<double> bessel_k_scaled(double nu, double x, double rel_tol = 1e-13) {
    detail::require(nu >= 0.0, "nu >= 0");
    detail::require(x > 0.0, "x > 0");
    auto f = [nu, x](double t) {
        const double base = -x * (std::cosh(t) - 1.0);
        return 0.5 * (std::exp(base + nu * t) + std::exp(base - nu * t));
    };
    SemiInfiniteMap map;
    map.rel_tol = rel_tol;
    // the integrand lives on t <~ acosh(1 + 40/x); put the log-map scale there
    map.scale = std::max(1.0, 0.5 * std::acosh(1.0 + 40.0 / x));
    const IntegralEstimate est = integrate_semi_infinite(f, map);
    return {est.value, static_cast<std::size_t>(est.panels), est.error};
}

/// K_nu(x). Throws std::underflow_error when the value is below the smallest
/// normal double instead of returning a silent zero.
inline SeriesResult<double> bessel_k(double nu, double x, double rel_tol = 1e-13) {
    SeriesResult<double> s = bessel_k_scaled(nu, x, rel_tol);
    const double log_k = std::log(s.value) - x;
    if (log_k < std::log(std::numeric_limits<double>::min()))
        throw std::underflow_error("bessel_k: K_nu(x) underflows double at x = " + std::to_string(x));
    const double scale = std::exp(-x);
    return {s.value * scale, s.terms_used, s.tail_bound * scale};
}

/// Mittag-Leffler function E_{a,b}(x) = sum_m x^m / Gamma(a m + b).
inline SeriesResult<double> mittag_leffler(double a, double b, double x, double tol = 1e-17) {
    detail::require(a > 0.0, "a > 0");
    detail::require(b > 0.0, "b > 0");
    const double g0 = log_gamma(b);
    if (x == 0.0) return {std::exp(-g0), 1, 0.0};
    const double lx = std::log(std::abs(x));
    const bool alternating = x < 0.0;
    CompensatedSum<double> sum;
    sum += std::exp(-g0);
    for (std::size_t m = 1; m < series_term_cap; ++m) {
        const double md = static_cast<double>(m);
        const double lg = log_gamma(a * md + b);
        double term = std::exp(md * lx - lg);
        if (alternating && (m % 2 == 1)) term = -term;
        sum += term;
        // ratio |t_{m+1}/t_m|; decreasing once a m + b > 2 (Gamma increasing, log-convex)
        const double ratio = std::exp(lx + lg - log_gamma(a * (md + 1.0) + b));
        if (a * md + b > 2.0 && ratio < 1.0) {
            const double tail = std::abs(term) * ratio / (1.0 - ratio);
            if (tail <= tol * std::abs(sum.value())) return {sum.value(), m + 1, tail};
        }
    }
    throw NonConvergence("mittag_leffler: tolerance not met within term cap", sum.value(), series_term_cap);
}

}  // namespace isocs
