#pragma once

// Coherent-state families over the isotonic oscillator basis.

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "isocs/errors.hpp"
#include "isocs/isotonic.hpp"
#include "isocs/quadrature.hpp"
#include "isocs/specfun.hpp"
#include "isocs/summation.hpp"

namespace isocs {

using cplx = std::complex<double>;

enum class Family { class1, class2, gk_isotonic, gk_shifted, general_spectrum, mittag_leffler };

inline const char* family_name(Family f) {
    switch (f) {
        case Family::class1: return "class1";
        case Family::class2: return "class2";
        case Family::gk_isotonic: return "gk";
        case Family::gk_shifted: return "gk-shifted";
        case Family::general_spectrum: return "general";
        case Family::mittag_leffler: return "mittag-leffler";
    }
    return "?";
}

/// Which version of a printed constant to use.
enum class ConstantVariant { corrected, as_printed };

/// Sign of the angle phase for the general linear spectrum.
/// printed: e^{+i(cm+d)alpha};  gazeau_klauder: e^{-i(cm+d)alpha}, the convention of the isotonic GK family.
enum class PhaseConvention { printed, gazeau_klauder };

struct PointLabel {
    double x = 1.0;
    double theta = 0.0;
    double gamma = 3.0;
};

struct ActionAngle {
    double J = 0.0;
    double alpha = 0.0;
    double gamma = 3.0;
};

struct GeneralSpectrumLabel {
    double J = 0.0;
    double alpha = 0.0;
    double c = 4.0;
    double d = 6.0;
    PhaseConvention convention = PhaseConvention::printed;
    double omega() const { return 1.0 + d / c; }
};

struct MittagLefflerLabel {
    cplx z{0.0, 0.0};
    double a = 1.0;
    double b = 1.0;
};

using CSLabel = std::variant<PointLabel, ActionAngle, GeneralSpectrumLabel, MittagLefflerLabel>;

struct Truncation {
    long M = -1;            // fixed order; negative picks M adaptively
    long max_M = 100000;    // cap for the adaptive search
    double rel_tail = 1e-16;
};

struct TruncatedState {
    Family family{};
    CSLabel label;
    long M = 0;
    std::vector<cplx> coeffs;
    double norm_series = 0.0;
    std::optional<double> norm_closed;
    bool positivity_ok = true;  // only meaningful for class2
    bool converged = true;      // last term small relative to the norm
};

namespace detail {

inline void check_label(Family f, const CSLabel& l) {
    switch (f) {
        case Family::class1: {
            const auto* p = std::get_if<PointLabel>(&l);
            require(p != nullptr, "class1 needs a point label (x, theta, gamma)");
            require(p->gamma > 2.0, "gamma > 2 for class1");
            require(p->x > 0.0, "x > 0");
            break;
        }
        case Family::class2: {
            const auto* p = std::get_if<PointLabel>(&l);
            require(p != nullptr, "class2 needs a point label (x, theta, gamma)");
            require(p->gamma > 1.0, "gamma > 1 for class2");
            require(p->x > 0.0, "x > 0");
            break;
        }
        case Family::gk_isotonic:
        case Family::gk_shifted: {
            const auto* p = std::get_if<ActionAngle>(&l);
            require(p != nullptr, "gk families need an action-angle label (J, alpha, gamma)");
            require(p->J >= 0.0, "J >= 0");
            require(p->gamma > 0.0, "gamma > 0");
            break;
        }
        case Family::general_spectrum: {
            const auto* p = std::get_if<GeneralSpectrumLabel>(&l);
            require(p != nullptr, "general spectrum needs (J, alpha, c, d)");
            require(p->c > 0.0 && p->d > 0.0, "c > 0 and d > 0");
            require(p->J >= 0.0, "J >= 0");
            break;
        }
        case Family::mittag_leffler: {
            const auto* p = std::get_if<MittagLefflerLabel>(&l);
            require(p != nullptr, "mittag-leffler needs (z, a, b)");
            require(p->a > 0.0 && p->b > 0.0, "a > 0 and b > 0");
            break;
        }
    }
}

// log of the unnormalized squared magnitude |Phi_m|^2 / rho(m) for the fast families
inline double log_weight(Family f, const CSLabel& l, long m) {
    const double dm = static_cast<double>(m);
    // dm * log(r) with the convention 0 * log(0) = 0
    auto pw = [dm](double r) { return dm == 0.0 ? 0.0 : dm * std::log(r); };
    switch (f) {
        case Family::gk_isotonic: {
            const auto& p = std::get<ActionAngle>(l);
            return pw(p.J / 4.0) - log_pochhammer(p.gamma / 2.0 + 1.0, m);
        }
        case Family::gk_shifted: {
            const auto& p = std::get<ActionAngle>(l);
            return pw(p.J / 4.0) - log_gamma(dm + 1.0);
        }
        case Family::general_spectrum: {
            const auto& p = std::get<GeneralSpectrumLabel>(l);
            return pw(p.J / p.c) - log_pochhammer(p.omega(), m);
        }
        case Family::mittag_leffler: {
            const auto& p = std::get<MittagLefflerLabel>(l);
            return pw(std::norm(p.z)) + log_gamma(p.b) - log_gamma(p.a * dm + p.b);
        }
        default: break;
    }
    throw DomainError("precondition violated: log_weight is for the entire-series families");
}

inline double label_phase(Family f, const CSLabel& l, long m) {
    const double dm = static_cast<double>(m);
    switch (f) {
        case Family::class1:
        case Family::class2: return dm * std::get<PointLabel>(l).theta;
        case Family::gk_isotonic: {
            const auto& p = std::get<ActionAngle>(l);
            return -2.0 * (2.0 * dm + p.gamma) * p.alpha;
        }
        case Family::gk_shifted: return -4.0 * dm * std::get<ActionAngle>(l).alpha;
        case Family::general_spectrum: {
            const auto& p = std::get<GeneralSpectrumLabel>(l);
            const double s = p.convention == PhaseConvention::printed ? 1.0 : -1.0;
            return s * (p.c * dm + p.d) * p.alpha;
        }
        case Family::mittag_leffler: return dm * std::arg(std::get<MittagLefflerLabel>(l).z);
    }
    return 0.0;
}

inline bool label_is_origin(Family f, const CSLabel& l) {
    switch (f) {
        case Family::gk_isotonic:
        case Family::gk_shifted: return std::get<ActionAngle>(l).J == 0.0;
        case Family::general_spectrum: return std::get<GeneralSpectrumLabel>(l).J == 0.0;
        case Family::mittag_leffler: return std::get<MittagLefflerLabel>(l).z == cplx(0.0, 0.0);
        default: return false;
    }
}

// Smallest M past the series peak whose term is negligible against the running sum.
inline long adaptive_order_entire(Family f, const CSLabel& l, const Truncation& tr) {
    if (label_is_origin(f, l)) return 0;
    double log_sum = log_weight(f, l, 0);
    double prev = log_sum;
    for (long m = 1; m <= tr.max_M; ++m) {
        const double lw = log_weight(f, l, m);
        const double hi = std::max(log_sum, lw);
        log_sum = hi + std::log(std::exp(log_sum - hi) + std::exp(lw - hi));
        if (lw < prev && lw - log_sum < std::log(tr.rel_tail)) return m;
        prev = lw;
    }
    return tr.max_M;
}

}  // namespace detail

/// Unnormalized coefficients Phi_m / sqrt(rho(m)) for m = 0..M.
/// Their squared norm is the series normalization of the family.
inline std::vector<cplx> raw_coefficients(Family f, const CSLabel& l, long M) {
    detail::check_label(f, l);
    detail::require(M >= 0, "M >= 0");
    const auto n = static_cast<std::size_t>(M) + 1;
    std::vector<cplx> u(n);
    switch (f) {
        case Family::class1: {
            const auto& p = std::get<PointLabel>(l);
            const auto F = hyp1f1_terminating_sequence(M, p.gamma, p.x * p.x);
            for (std::size_t m = 0; m < n; ++m) {
                const long mm = static_cast<long>(m);
                const double lmag = 0.5 * (log_pochhammer(p.gamma, mm) - log_gamma(static_cast<double>(m) + 1.0) -
                                           std::log(p.gamma / 2.0 + static_cast<double>(m)));
                u[m] = std::polar(std::exp(lmag) * F[m], detail::label_phase(f, l, mm));
            }
            break;
        }
        case Family::class2: {
            const auto& p = std::get<PointLabel>(l);
            const auto F = hyp1f1_terminating_sequence(M, p.gamma + 1.0, p.x);
            for (std::size_t m = 0; m < n; ++m) {
                const double w = (p.gamma + static_cast<double>(m)) * F[m] / p.gamma;
                // principal square root: a negative radicand gives i sqrt(|w|)
                const cplx root = std::sqrt(cplx(w, 0.0));
                u[m] = root * std::polar(1.0, detail::label_phase(f, l, static_cast<long>(m)));
            }
            break;
        }
        default: {
            if (detail::label_is_origin(f, l)) {
                u.assign(n, cplx(0.0, 0.0));
                u[0] = std::polar(std::exp(0.5 * detail::log_weight(f, l, 0)), detail::label_phase(f, l, 0));
                break;
            }
            for (std::size_t m = 0; m < n; ++m) {
                const long mm = static_cast<long>(m);
                u[m] = std::polar(std::exp(0.5 * detail::log_weight(f, l, mm)), detail::label_phase(f, l, mm));
            }
            break;
        }
    }
    return u;
}

// ---- closed-form normalizations ----

/// Class-I: Gamma(gamma) e^{x^2} x^{-2(gamma-1)} K_nu(x^2/2) I_nu(x^2/2), nu = (gamma-1)/2.
inline double class1_normalization_closed(double x, double gamma) {
    detail::require(x > 0.0, "x > 0");
    detail::require(gamma > 1.0, "gamma > 1 (closed form needs nu > 0)");
    const double nu = 0.5 * (gamma - 1.0);
    const double y = 0.5 * x * x;
    const double ks = bessel_k_scaled(nu, y).value;  // e^y K_nu(y)
    const double iv = bessel_i(nu, y).value;
    return std::exp(log_gamma(gamma) + y - 2.0 * (gamma - 1.0) * std::log(x)) * ks * iv;
}

/// Class-II signed normalization (gamma-1)(1/x + 1/x^2).
inline double class2_normalization_closed(double x, double gamma) {
    detail::require(x > 0.0, "x > 0");
    return (gamma - 1.0) * (1.0 / x + 1.0 / (x * x));
}

/// GK: N^2 = 1F1(1; gamma/2 + 1; J/4); the printed variant uses gamma + 1.
inline double gk_normalization_closed(double J, double gamma, ConstantVariant v = ConstantVariant::corrected) {
    const double b = v == ConstantVariant::corrected ? gamma / 2.0 + 1.0 : gamma + 1.0;
    return hyp1f1_one(b, J / 4.0).value;
}

inline double gk_shifted_normalization_closed(double J) { return std::exp(J / 4.0); }

inline double general_normalization_closed(double J, double c, double d) {
    return hyp1f1_one(1.0 + d / c, J / c).value;
}

inline double ml_normalization_closed(cplx z, double a, double b) {
    return std::tgamma(b) * mittag_leffler(a, b, std::norm(z)).value;
}

inline std::optional<double> normalization_closed(Family f, const CSLabel& l) {
    switch (f) {
        case Family::class1: {
            const auto& p = std::get<PointLabel>(l);
            return class1_normalization_closed(p.x, p.gamma);
        }
        case Family::class2: {
            const auto& p = std::get<PointLabel>(l);
            return class2_normalization_closed(p.x, p.gamma);
        }
        case Family::gk_isotonic: {
            const auto& p = std::get<ActionAngle>(l);
            return gk_normalization_closed(p.J, p.gamma);
        }
        case Family::gk_shifted: return gk_shifted_normalization_closed(std::get<ActionAngle>(l).J);
        case Family::general_spectrum: {
            const auto& p = std::get<GeneralSpectrumLabel>(l);
            return general_normalization_closed(p.J, p.c, p.d);
        }
        case Family::mittag_leffler: {
            const auto& p = std::get<MittagLefflerLabel>(l);
            return ml_normalization_closed(p.z, p.a, p.b);
        }
    }
    return std::nullopt;
}

// ---- state construction ----

inline long choose_order(Family f, const CSLabel& l, const Truncation& tr) {
    if (tr.M >= 0) return tr.M;
    if (f == Family::class1 || f == Family::class2) {
        // terms decay only algebraically; scan the raw terms up to the cap
        const auto u = raw_coefficients(f, l, tr.max_M);
        CompensatedSum<double> s;
        int quiet = 0;
        for (std::size_t m = 0; m < u.size(); ++m) {
            const double t = std::norm(u[m]);
            s += t;
            quiet = (t < tr.rel_tail * std::abs(s.value())) ? quiet + 1 : 0;
            if (quiet >= 8) return static_cast<long>(m);
        }
        return tr.max_M;
    }
    return detail::adaptive_order_entire(f, l, tr);
}

inline TruncatedState build_state(Family f, const CSLabel& l, const Truncation& tr = {}) {
    detail::check_label(f, l);
    TruncatedState s;
    s.family = f;
    s.label = l;
    s.M = choose_order(f, l, tr);
    s.coeffs = raw_coefficients(f, l, s.M);

    CompensatedSum<double> norm;
    if (f == Family::class2) {
        // signed sum of (gamma + m) 1F1(-m; gamma+1; x) / gamma
        const auto& p = std::get<PointLabel>(l);
        const auto F = hyp1f1_terminating_sequence(s.M, p.gamma + 1.0, p.x);
        for (std::size_t m = 0; m < F.size(); ++m) {
            norm += (p.gamma + static_cast<double>(m)) * F[m] / p.gamma;
            if (F[m] < 0.0) s.positivity_ok = false;
        }
    } else {
        for (const cplx& c : s.coeffs) norm += std::norm(c);
    }
    s.norm_series = norm.value();
    s.norm_closed = normalization_closed(f, l);

    const double last = s.coeffs.empty() ? 0.0 : std::norm(s.coeffs.back());
    s.converged = last <= 1e-12 * std::abs(s.norm_series) || detail::label_is_origin(f, l);

    detail::require(s.norm_series > 0.0, "positive series normalization");
    const double scale = 1.0 / std::sqrt(s.norm_series);
    for (cplx& c : s.coeffs) c *= scale;
    return s;
}

inline TruncatedState class1_state(double x, double theta, double gamma, const Truncation& tr = {}) {
    return build_state(Family::class1, PointLabel{x, theta, gamma}, tr);
}
inline TruncatedState class2_state(double x, double theta, double gamma, const Truncation& tr = {}) {
    return build_state(Family::class2, PointLabel{x, theta, gamma}, tr);
}
inline TruncatedState gk_state(double J, double alpha, double gamma, const Truncation& tr = {}) {
    return build_state(Family::gk_isotonic, ActionAngle{J, alpha, gamma}, tr);
}
inline TruncatedState shifted_gk_state(double J, double alpha, double gamma, const Truncation& tr = {}) {
    return build_state(Family::gk_shifted, ActionAngle{J, alpha, gamma}, tr);
}
inline TruncatedState general_spectrum_state(double J, double alpha, double c, double d, const Truncation& tr = {},
                                             PhaseConvention pc = PhaseConvention::printed) {
    return build_state(Family::general_spectrum, GeneralSpectrumLabel{J, alpha, c, d, pc}, tr);
}
inline TruncatedState mittag_leffler_state(cplx z, double a, double b, const Truncation& tr = {}) {
    return build_state(Family::mittag_leffler, MittagLefflerLabel{z, a, b}, tr);
}

// ---- series normalizations with slow tails ----

/// Class-I partial sum of the normalization series up to M.
inline double class1_normalization_series(double x, double gamma, long M) {
    const auto u = raw_coefficients(Family::class1, PointLabel{x, 0.0, gamma}, M);
    CompensatedSum<double> s;
    for (const cplx& c : u) s += std::norm(c);
    return s.value();
}

/// Terms decay like m^{-3/2}, so S(M) = N - C M^{-1/2} + ...; one Richardson step with S(M/4).
inline double class1_normalization_extrapolated(double x, double gamma, long M) {
    detail::require(M >= 8, "M >= 8");
    const auto u = raw_coefficients(Family::class1, PointLabel{x, 0.0, gamma}, M);
    CompensatedSum<double> s;
    double coarse = 0.0;
    for (std::size_t m = 0; m < u.size(); ++m) {
        s += std::norm(u[m]);
        if (static_cast<long>(m) == M / 4) coarse = s.value();
    }
    return richardson_tail(s.value(), coarse, static_cast<double>(M) / static_cast<double>(M / 4), 0.5);
}

/// Terms (gamma+m) 1F1(-m; gamma+1; x) / gamma, m = 0..M.
inline std::vector<double> class2_normalization_terms(double x, double gamma, long M) {
    detail::require(gamma > 1.0, "gamma > 1 for class2");
    detail::require(x > 0.0, "x > 0");
    auto F = hyp1f1_terminating_sequence(M, gamma + 1.0, x);
    for (std::size_t m = 0; m < F.size(); ++m) F[m] *= (gamma + static_cast<double>(m)) / gamma;
    return F;
}

// ---- densities ----

struct MeasureDensity {
    Family family{};
    ConstantVariant variant = ConstantVariant::corrected;
    std::map<std::string, double> params;
    std::function<double(double)> density;      // lambda on (0, inf)
    std::function<double(long)> moment_target;  // value the m-th moment must hit
    std::function<double(long)> moment;         // computed m-th moment
    std::string method;
};

/// lambda(x) = (gamma / Gamma(gamma-2)) x^{2 gamma - 5} e^{-x^2}; the printed prefactor is Gamma(gamma-2)/gamma.
/// Moments are int [1F1(-m; gamma; x^2)]^2 lambda(x) dx, done after t = x^2 with an alpha = gamma - 3 rule.
inline MeasureDensity class1_density(double gamma, ConstantVariant v = ConstantVariant::corrected) {
    detail::require(gamma > 2.0, "gamma > 2 for class1");
    MeasureDensity d;
    d.family = Family::class1;
    d.variant = v;
    d.params = {{"gamma", gamma}};
    const double lg = log_gamma(gamma - 2.0);
    const double log_pref = v == ConstantVariant::corrected ? std::log(gamma) - lg : lg - std::log(gamma);
    d.density = [=](double x) {
        return x > 0.0 ? std::exp(log_pref + (2.0 * gamma - 5.0) * std::log(x) - x * x) : 0.0;
    };
    d.moment_target = [=](long m) {
        return std::exp(log_gamma(static_cast<double>(m) + 1.0) - log_pochhammer(gamma, m)) *
               (gamma / 2.0 + static_cast<double>(m));
    };
    d.moment = [=](long m) {
        const auto rule = gauss_gen_laguerre(static_cast<int>(m) + 2, gamma - 3.0);
        const double q = rule.apply([&](double t) {
            const double f = hyp1f1_terminating(m, gamma, t).value;
            return f * f;
        });
        return 0.5 * std::exp(log_pref) * q;
    };
    d.method = "generalized Gauss-Laguerre, alpha = gamma - 3, after t = x^2";
    return d;
}

/// lambda(x) = e^{-x}; moments int 1F1(-m; gamma+1; x) e^{-x} dx = gamma / (gamma + m).
inline MeasureDensity class2_density(double gamma) {
    detail::require(gamma > 1.0, "gamma > 1 for class2");
    MeasureDensity d;
    d.family = Family::class2;
    d.params = {{"gamma", gamma}};
    d.density = [](double x) { return std::exp(-x); };
    d.moment_target = [=](long m) { return gamma / (gamma + static_cast<double>(m)); };
    d.moment = [=](long m) {
        const auto rule = gauss_gen_laguerre(static_cast<int>(m / 2) + 2, 0.0);
        return rule.apply([&](double x) { return hyp1f1_terminating(m, gamma + 1.0, x).value; });
    };
    d.method = "Gauss-Laguerre, alpha = 0";
    return d;
}

namespace detail {

// int_0^inf J^{m+p} e^{-J/s} dJ = s^{m+p+1} Gamma(m+p+1), continued analytically in p
inline double mellin_moment(long m, double p, double s) {
    const double e = static_cast<double>(m) + p + 1.0;
    return std::pow(s, e) * std::tgamma(e);
}

}  // namespace detail

/// lambda(J) = J^{gamma/2} e^{-J/4} / (2^{gamma+2} Gamma(1 + gamma/2)); printed exponent is -gamma/2.
inline MeasureDensity gk_density(double gamma, ConstantVariant v = ConstantVariant::corrected) {
    detail::require(gamma > 0.0, "gamma > 0");
    MeasureDensity d;
    d.family = Family::gk_isotonic;
    d.variant = v;
    d.params = {{"gamma", gamma}};
    const double p = v == ConstantVariant::corrected ? gamma / 2.0 : -gamma / 2.0;
    const double log_c = -(gamma + 2.0) * std::log(2.0) - log_gamma(1.0 + gamma / 2.0);
    d.density = [=](double J) { return J > 0.0 ? std::exp(log_c + p * std::log(J) - J / 4.0) : 0.0; };
    d.moment_target = [=](long m) {
        return std::exp(static_cast<double>(m) * std::log(4.0) + log_pochhammer(gamma / 2.0 + 1.0, m));
    };
    if (v == ConstantVariant::corrected) {
        d.moment = [=](long m) {
            // u = J/4: int (4u)^m u^{gamma/2} e^{-u} du * 4^{gamma/2+1} e^{log_c}
            const auto rule = gauss_gen_laguerre(static_cast<int>(m / 2) + 2, gamma / 2.0);
            const double q = rule.apply([&](double u) { return std::pow(4.0 * u, static_cast<double>(m)); });
            return q * std::exp((gamma / 2.0 + 1.0) * std::log(4.0) + log_c);
        };
        d.method = "generalized Gauss-Laguerre, alpha = gamma/2, after u = J/4";
    } else {
        d.moment = [=](long m) { return detail::mellin_moment(m, p, 4.0) * std::exp(log_c); };
        d.method = "Mellin transform (analytic continuation)";
    }
    return d;
}

/// Shifted spectrum 4m: lambda(J) = e^{-J/4} / 4, so that N(J) lambda(J) dJ = dJ / 4.
inline MeasureDensity gk_shifted_density() {
    MeasureDensity d;
    d.family = Family::gk_shifted;
    d.density = [](double J) { return 0.25 * std::exp(-J / 4.0); };
    d.moment_target = [](long m) {
        return std::exp(static_cast<double>(m) * std::log(4.0) + log_gamma(static_cast<double>(m) + 1.0));
    };
    d.moment = [](long m) {
        const auto rule = gauss_gen_laguerre(static_cast<int>(m / 2) + 2, 0.0);
        return rule.apply([&](double u) { return std::pow(4.0 * u, static_cast<double>(m)); });
    };
    d.method = "Gauss-Laguerre, alpha = 0, after u = J/4";
    return d;
}

/// lambda(J) = e^{-J/c} J^{d/c} / (Gamma(1 + d/c) c^{1+d/c}); printed exponent is -d/c.
inline MeasureDensity general_density(double c, double dd, ConstantVariant v = ConstantVariant::corrected) {
    detail::require(c > 0.0 && dd > 0.0, "c > 0 and d > 0");
    MeasureDensity d;
    d.family = Family::general_spectrum;
    d.variant = v;
    d.params = {{"c", c}, {"d", dd}};
    const double w = 1.0 + dd / c;
    const double p = v == ConstantVariant::corrected ? dd / c : -dd / c;
    const double log_c = -log_gamma(w) - w * std::log(c);
    d.density = [=](double J) { return J > 0.0 ? std::exp(log_c + p * std::log(J) - J / c) : 0.0; };
    d.moment_target = [=](long m) {
        return std::exp(static_cast<double>(m) * std::log(c) + log_pochhammer(w, m));
    };
    if (v == ConstantVariant::corrected) {
        d.moment = [=](long m) {
            // u = J/c: c^m int u^{m + d/c} e^{-u} du / Gamma(w)
            const auto rule = gauss_gen_laguerre(static_cast<int>(m / 2) + 2, dd / c);
            const double q = rule.apply([&](double u) { return std::pow(c * u, static_cast<double>(m)); });
            return q * std::exp(-log_gamma(w));
        };
        d.method = "generalized Gauss-Laguerre, alpha = d/c, after u = J/c";
    } else {
        d.moment = [=](long m) { return detail::mellin_moment(m, p, c) * std::exp(log_c); };
        d.method = "Mellin transform (analytic continuation)";
    }
    return d;
}

/// Radial part of the Mittag-Leffler weight: x^{(b-a)/a} e^{-x^{1/a}} / (a Gamma(b)), x = |z|^2.
inline MeasureDensity ml_weight(double a, double b) {
    detail::require(a > 0.0 && b > 0.0, "a > 0 and b > 0");
    MeasureDensity d;
    d.family = Family::mittag_leffler;
    d.params = {{"a", a}, {"b", b}};
    const double lgb = log_gamma(b);
    d.density = [=](double x) {
        return x > 0.0 ? std::exp(((b - a) / a) * std::log(x) - std::pow(x, 1.0 / a) - std::log(a) - lgb) : 0.0;
    };
    d.moment_target = [=](long m) { return std::exp(log_gamma(a * static_cast<double>(m) + b) - lgb); };
    d.moment = [=](long m) {
        // s = x^{1/a}: int s^{a m + b - 1} e^{-s} ds / Gamma(b), integrated adaptively
        const double e = a * static_cast<double>(m) + b - 1.0;
        const double shift = log_gamma(e + 1.0);
        SemiInfiniteMap map;
        map.rel_tol = 1e-13;
        map.scale = std::max(1.0, e);
        const auto r = integrate_semi_infinite(
            [&](double s) { return s > 0.0 ? std::exp(e * std::log(s) - s - shift) : 0.0; }, map);
        return r.value * std::exp(shift - lgb);
    };
    d.method = "adaptive Gauss-Legendre after s = x^{1/a}";
    return d;
}

/// The full Mittag-Leffler resolution weight W(x) = N(x)/pi * radial(x).
inline double ml_resolution_weight(double x, double a, double b) {
    return ml_normalization_closed(cplx(std::sqrt(x), 0.0), a, b) / std::numbers::pi * ml_weight(a, b).density(x);
}

// ---- dynamics ----

/// Energy of basis level m under the Hamiltonian attached to the family.
inline double family_energy(Family f, const CSLabel& l, long m) {
    const double dm = static_cast<double>(m);
    switch (f) {
        case Family::class1:
        case Family::class2: return 2.0 * (2.0 * dm + std::get<PointLabel>(l).gamma);
        case Family::gk_isotonic: return 2.0 * (2.0 * dm + std::get<ActionAngle>(l).gamma);
        case Family::gk_shifted: return 4.0 * dm;  // H - e_0
        case Family::general_spectrum: {
            const auto& p = std::get<GeneralSpectrumLabel>(l);
            return p.c * dm + p.d;
        }
        case Family::mittag_leffler: break;
    }
    throw DomainError("precondition violated: mittag-leffler states carry no spectrum");
}

/// Multiply coefficient m by e^{-i E_m t}.
inline TruncatedState evolve(const TruncatedState& s, double t) {
    TruncatedState out = s;
    for (std::size_t m = 0; m < out.coeffs.size(); ++m)
        out.coeffs[m] *= std::polar(1.0, -family_energy(s.family, s.label, static_cast<long>(m)) * t);
    return out;
}

/// Label that evolve(., t) should reproduce for the temporally stable families.
inline CSLabel time_shifted_label(Family f, const CSLabel& l, double t) {
    switch (f) {
        case Family::gk_isotonic:
        case Family::gk_shifted: {
            auto p = std::get<ActionAngle>(l);
            p.alpha += t;
            return p;
        }
        case Family::general_spectrum: {
            auto p = std::get<GeneralSpectrumLabel>(l);
            p.alpha += p.convention == PhaseConvention::printed ? -t : t;
            return p;
        }
        default: break;
    }
    throw DomainError("precondition violated: family is not temporally stable");
}

inline double probability(const TruncatedState& s, long m) {
    detail::require(m >= 0, "m >= 0");
    if (m > s.M) return 0.0;
    return std::norm(s.coeffs[static_cast<std::size_t>(m)]);
}

inline double expected_energy(const TruncatedState& s) {
    CompensatedSum<double> e, n;
    for (std::size_t m = 0; m < s.coeffs.size(); ++m) {
        const double p = std::norm(s.coeffs[m]);
        e += family_energy(s.family, s.label, static_cast<long>(m)) * p;
        n += p;
    }
    return e.value() / n.value();
}

inline cplx overlap(const TruncatedState& bra, const TruncatedState& ket) {
    const std::size_t n = std::min(bra.coeffs.size(), ket.coeffs.size());
    CompensatedSum<cplx> s;
    for (std::size_t m = 0; m < n; ++m) s += std::conj(bra.coeffs[m]) * ket.coeffs[m];
    return s.value();
}

inline double distance(const TruncatedState& a, const TruncatedState& b) {
    const std::size_t n = std::max(a.coeffs.size(), b.coeffs.size());
    CompensatedSum<double> s;
    for (std::size_t m = 0; m < n; ++m) {
        const cplx ca = m < a.coeffs.size() ? a.coeffs[m] : cplx{};
        const cplx cb = m < b.coeffs.size() ? b.coeffs[m] : cplx{};
        s += std::norm(ca - cb);
    }
    return std::sqrt(s.value());
}

struct GkOverlap {
    cplx series;
    cplx closed;          // e^{-2i gamma D} 1F1(1; gamma/2+1; e^{-4iD} sqrt(J1 J2)/4) / (N1 N2)
    cplx closed_literal;  // same with the printed e^{-4i gamma D}
    long terms = 0;
};

/// <J2, alpha2 | J1, alpha1> for the isotonic GK family, D = alpha1 - alpha2.
inline GkOverlap gk_overlap(double J2, double alpha2, double J1, double alpha1, double gamma) {
    detail::require(J1 >= 0.0 && J2 >= 0.0, "J >= 0");
    detail::require(gamma > 0.0, "gamma > 0");
    const double D = alpha1 - alpha2;
    const double b = gamma / 2.0 + 1.0;
    GkOverlap out;

    const double n1 = std::sqrt(gk_normalization_closed(J1, gamma));
    const double n2 = std::sqrt(gk_normalization_closed(J2, gamma));
    const double r = std::sqrt(J1 * J2) / 4.0;
    if (r == 0.0) {
        out.series = std::polar(1.0, -2.0 * gamma * D) / (n1 * n2);
        out.closed = out.closed_literal = out.series;
        out.terms = 1;
        return out;
    }

    // series with its own truncation and series norms
    CompensatedSum<cplx> s;
    CompensatedSum<double> s1, s2;
    const double lr = std::log(r), l1 = std::log(J1 / 4.0), l2 = std::log(J2 / 4.0);
    long m = 0;
    for (;; ++m) {
        const double lp = log_pochhammer(b, m);
        const double dm = static_cast<double>(m);
        const double t = std::exp(dm * lr - lp);
        s += std::polar(t, -2.0 * (2.0 * dm + gamma) * D);
        s1 += std::exp(dm * l1 - lp);
        s2 += std::exp(dm * l2 - lp);
        const double tail = std::max({t, std::exp(dm * l1 - lp), std::exp(dm * l2 - lp)});
        if (dm > std::max(J1, J2) / 4.0 + 2.0 && tail < 1e-17 * std::min(s1.value(), s2.value())) break;
        if (m > static_cast<long>(series_term_cap)) throw NonConvergence("gk_overlap series", s.value(), static_cast<std::size_t>(m));
    }
    out.terms = m + 1;
    out.series = s.value() / std::sqrt(s1.value() * s2.value());
    out.closed = std::polar(1.0, -2.0 * gamma * D) * hyp1f1_one(b, std::polar(r, -4.0 * D)).value / (n1 * n2);
    out.closed_literal = std::polar(1.0, -2.0 * gamma * D) * hyp1f1_one(b, std::polar(r, -4.0 * gamma * D)).value / (n1 * n2);
    return out;
}

struct ActionIdentity {
    double value = 0.0;  // <H - e_0> for shifted, <H> for the isotonic GK family
    double J = 0.0;
    double gap = 0.0;    // value - J
    long M = 0;
};

/// Shifted family: <J| (H - e_0) |J> which should equal J. Otherwise <J|H|J> for the isotonic GK states.
inline ActionIdentity action_identity_check(double J, double gamma, bool shifted, const Truncation& tr = {}) {
    const auto s = shifted ? shifted_gk_state(J, 0.0, gamma, tr) : gk_state(J, 0.0, gamma, tr);
    ActionIdentity out;
    out.J = J;
    out.M = s.M;
    CompensatedSum<double> e;
    for (std::size_t m = 0; m < s.coeffs.size(); ++m) {
        const double em = shifted ? 4.0 * static_cast<double>(m) : 2.0 * (2.0 * static_cast<double>(m) + gamma);
        e += em * std::norm(s.coeffs[m]);
    }
    out.value = e.value();
    out.gap = out.value - J;
    return out;
}

// ---- energies ----

/// Argument used inside 1F1(-m; gamma+1; .) for the class-II energy sum.
enum class EnergyArgument { x, x_squared };

struct Class2Energy {
    double series = 0.0;      // tapered numerator / tapered normalization
    double raw = 0.0;         // plain partial sums
    double closed = 0.0;      // Buchholz closed form for the same argument
    double closed_printed = 0.0;  // 2 (x^2-x+2)(x^2+x+2)(gamma-1)(gamma-2) / (x^6 N(x^2))
    double y = 0.0;
    long terms = 0;
};

/// E N(y) = 2 (gamma-1)(gamma-2)(y^2 + 3y + 4) / y^3 with N(y) = (gamma-1)(1/y + 1/y^2).
inline double class2_energy_closed(double y, double gamma) {
    return 2.0 * (gamma - 1.0) * (gamma - 2.0) * (y * y + 3.0 * y + 4.0) / (y * y * y) / class2_normalization_closed(y, gamma);
}

inline Class2Energy class2_energy(double x, double gamma, EnergyArgument arg = EnergyArgument::x_squared,
                                  long terms = 400000) {
    detail::require(gamma > 2.0, "gamma > 2 for the class2 energy sum");
    detail::require(x > 0.0, "x > 0");
    detail::require(terms >= 16, "terms >= 16");
    Class2Energy out;
    out.y = arg == EnergyArgument::x_squared ? x * x : x;
    out.terms = terms;
    const auto F = hyp1f1_terminating_sequence(terms - 1, gamma + 1.0, out.y);
    std::vector<double> num(F.size()), den(F.size());
    CompensatedSum<double> rn, rd;
    for (std::size_t m = 0; m < F.size(); ++m) {
        const double dm = static_cast<double>(m);
        num[m] = 2.0 * (gamma + dm) * (gamma + 2.0 * dm) / gamma * F[m];
        den[m] = (gamma + dm) / gamma * F[m];
        rn += num[m];
        rd += den[m];
    }
    out.series = tapered_sum(num) / tapered_sum(den);
    out.raw = rn.value() / rd.value();
    out.closed = class2_energy_closed(out.y, gamma);
    const double x2 = x * x;
    out.closed_printed = 2.0 / (std::pow(x, 6) * class2_normalization_closed(x2, gamma)) * (x2 - x + 2.0) * (x2 + x + 2.0) *
                         (gamma - 1.0) * (gamma - 2.0);
    return out;
}

struct H2Energy {
    double shifted_form = 0.0;   // (1/N) sum_{m>=0} |Phi_{m+1}|^2 / rho(m)
    double weighted_form = 0.0;  // (1/N) sum_{m>=1} y_m |Phi_m|^2 / rho(m)
    bool divergent = false;
};

/// Average of H_2 = sum y_m |phi_m><phi_m|, y_m = rho(m)/rho(m-1), y_0 = 0, rho(0) = 1.
inline H2Energy generic_h2_energy(const std::vector<double>& phi_magnitudes, const std::vector<double>& rho, double N) {
    detail::require(N > 0.0, "N > 0");
    detail::require(!rho.empty() && rho[0] == 1.0, "rho(0) = 1");
    for (double r : rho) detail::require(r > 0.0, "rho positive");
    const std::size_t K = std::min(phi_magnitudes.size(), rho.size());
    H2Energy out;
    CompensatedSum<double> a, b;
    double last_a = 0.0, last_b = 0.0;
    for (std::size_t m = 0; m + 1 < K; ++m) {
        const double p = phi_magnitudes[m + 1];
        last_a = p * p / rho[m];
        a += last_a;
    }
    for (std::size_t m = 1; m < K; ++m) {
        const double y = rho[m] / rho[m - 1];
        const double p = phi_magnitudes[m];
        last_b = y * p * p / rho[m];
        b += last_b;
    }
    out.shifted_form = a.value() / N;
    out.weighted_form = b.value() / N;
    out.divergent = std::abs(last_a) > 1e-12 * std::abs(a.value()) || std::abs(last_b) > 1e-12 * std::abs(b.value());
    return out;
}

/// K(l1, l2) = sum_m conj(Phi_m(l1)) Phi_m(l2) / rho(m), truncated at M.
inline cplx reproducing_kernel(Family f, const CSLabel& l1, const CSLabel& l2, long M) {
    const auto u1 = raw_coefficients(f, l1, M);
    const auto u2 = raw_coefficients(f, l2, M);
    CompensatedSum<cplx> s;
    for (std::size_t m = 0; m < u1.size(); ++m) s += std::conj(u1[m]) * u2[m];
    return s.value();
}

}  // namespace isocs
