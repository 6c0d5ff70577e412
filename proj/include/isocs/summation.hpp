#pragma once

// Summation helpers shared by the series evaluators and the identity checks.

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace isocs {

/// Neumaier (improved Kahan) running sum.
template <class T>
class CompensatedSum {
public:
    void add(T v) {
        if constexpr (std::is_floating_point_v<T>) {
            add_real(sum_, comp_, v);
        } else {
            typename T::value_type sr = sum_.real(), cr = comp_.real();
            typename T::value_type si = sum_.imag(), ci = comp_.imag();
            add_real(sr, cr, v.real());
            add_real(si, ci, v.imag());
            sum_ = T(sr, si);
            comp_ = T(cr, ci);
        }
    }
    CompensatedSum& operator+=(T v) {
        add(v);
        return *this;
    }
    T value() const { return sum_ + comp_; }

private:
    template <class R>
    static void add_real(R& sum, R& comp, R v) {
        R t = sum + v;
        if (std::abs(sum) >= std::abs(v))
            comp += (sum - t) + v;
        else
            comp += (v - t) + sum;
        sum = t;
    }

    T sum_{};
    T comp_{};
};

template <class T>
T compensated_sum(std::span<const T> terms) {
    CompensatedSum<T> s;
    for (const T& t : terms) s += t;
    return s.value();
}

/// Running partial sums S_0..S_{n-1}.
inline std::vector<double> partial_sums(std::span<const double> terms) {
    std::vector<double> out;
    out.reserve(terms.size());
    CompensatedSum<double> s;
    for (double t : terms) {
        s += t;
        out.push_back(s.value());
    }
    return out;
}

/// (C,1) Cesaro mean: the arithmetic mean of all partial sums.
inline double cesaro_mean(std::span<const double> terms) {
    if (terms.empty()) return 0.0;
    // mean of partial sums = sum_k a_k (n - k) / n
    const double n = static_cast<double>(terms.size());
    CompensatedSum<double> s;
    for (std::size_t k = 0; k < terms.size(); ++k) s += terms[k] * ((n - static_cast<double>(k)) / n);
    return s.value();
}

namespace detail {
inline double smooth_step_half(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }
}  // namespace detail

/// C-infinity cutoff: 1 on (-inf, 0], 0 on [1, inf), all derivatives vanish at both ends.
inline double smooth_cutoff(double t) {
    if (t <= 0.0) return 1.0;
    if (t >= 1.0) return 0.0;
    const double a = detail::smooth_step_half(1.0 - t);
    const double b = detail::smooth_step_half(t);
    return a / (a + b);
}

/// Smoothly tapered sum  sum_k a_k * phi(k / n)  with phi = smooth_cutoff.
///
/// For series whose tail is a slowly decaying oscillation (Laguerre-type terms
/// a_k ~ k^-p cos(c sqrt(k))) the tapered sum approaches the regular (Cesaro/Abel)
/// value faster than any power of 1/n, and it assigns the same value to series
/// that are only summable, not convergent.
inline double tapered_sum(std::span<const double> terms) {
    if (terms.empty()) return 0.0;
    const double n = static_cast<double>(terms.size() - 1);
    CompensatedSum<double> s;
    for (std::size_t k = 0; k < terms.size(); ++k) {
        const double w = n > 0 ? smooth_cutoff(static_cast<double>(k) / n) : 1.0;
        if (w == 0.0) break;
        s += terms[k] * w;
    }
    return s.value();
}

/// Richardson step for a partial sum whose error behaves like C * n^-p:
/// combines S(n) and S(n / r) with r = n / n_coarse.
inline double richardson_tail(double s_fine, double s_coarse, double ratio, double p) {
    const double f = std::pow(ratio, p);
    return (f * s_fine - s_coarse) / (f - 1.0);
}

}  // namespace isocs
