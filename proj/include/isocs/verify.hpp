#pragma once

// Identity checks that turn each closed-form claim into a pass/fail record.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <future>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "isocs/families.hpp"
#include "isocs/isotonic.hpp"
#include "isocs/specfun.hpp"
#include "isocs/summation.hpp"

namespace isocs {

using Param = std::variant<double, long, std::string>;

struct VerificationReport {
    std::string check_id;
    std::vector<std::pair<std::string, Param>> parameters;
    cplx observed{};
    cplx expected{};
    bool complex_valued = false;
    double abs_err = 0.0;
    double rel_err = 0.0;
    double tolerance = 0.0;
    bool identity_holds = false;  // rel_err <= tol, or abs_err <= tol when expected == 0
    bool expect_failure = false;  // documented discrepancy: a failing identity is the pass condition
    bool pass = false;
    std::string notes;
};

/// Every tolerance used by the checks.
struct Tolerances {
    double gram = 1e-10;
    double fd_residual = 1e-3;
    double fd_order = 0.1;             // relative band around the ratio 4
    double resolution = 1e-9;
    double moment = 1e-10;
    double class2_moment = 1e-12;
    double class1_norm = 1e-3;
    double class2_norm_raw = 1e-4;
    double class2_norm_accelerated = 1e-6;
    double fast_norm = 1e-12;
    double buchholz_raw = 1e-4;
    double buchholz_accelerated = 1e-6;
    double temporal = 1e-13;
    double counterexample_distance = 1e-2;
    double overlap_closed = 1e-12;
    double self_overlap = 1e-14;
    double overlap_bound = 1e-14;
    double action = 1e-12;
    double ml_reduction = 1e-13;
    double ml_identity = 1e-12;
    double class2_energy = 1e-8;
    double h2_dual = 1e-12;
    double cancellation_widened = 1e-6;
};

struct VerifyConfig {
    double gamma = 2.5;
    std::uint64_t seed = 20240601;
    Tolerances tol;
    long class1_terms = 50000;
    long class2_terms = 100000;
    long buchholz_terms = 100000;
    long energy_terms = 400000;
    bool parallel = true;
};

enum class CheckGroup { orthonormality, resolution, normalization, buchholz, temporal, action, discrepancies };

inline const std::vector<std::pair<CheckGroup, std::string>>& check_groups() {
    static const std::vector<std::pair<CheckGroup, std::string>> g = {
        {CheckGroup::orthonormality, "orthonormality"}, {CheckGroup::resolution, "resolution"},
        {CheckGroup::normalization, "normalization"},   {CheckGroup::buchholz, "buchholz"},
        {CheckGroup::temporal, "temporal"},             {CheckGroup::action, "action"},
        {CheckGroup::discrepancies, "discrepancies"}};
    return g;
}

namespace detail {

inline std::string fmt_num(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

inline std::string make_id(const std::string& base, const std::vector<std::pair<std::string, Param>>& params) {
    std::string id = base + "[";
    bool first = true;
    for (const auto& [k, v] : params) {
        if (k.starts_with("raw") || k == "gap") continue;  // measured values, not identifying
        if (!first) id += ",";
        first = false;
        id += k + "=";
        if (const auto* d = std::get_if<double>(&v)) id += fmt_num(*d);
        else if (const auto* l = std::get_if<long>(&v)) id += std::to_string(*l);
        else id += std::get<std::string>(v);
    }
    return id + "]";
}

}  // namespace detail

/// Fills errors and the pass flag from observed, expected and tolerance.
inline VerificationReport make_report(std::string base, std::vector<std::pair<std::string, Param>> params, cplx observed,
                                      cplx expected, double tol, std::string notes = {}, bool expect_failure = false) {
    VerificationReport r;
    r.check_id = detail::make_id(base, params);
    r.parameters = std::move(params);
    r.observed = observed;
    r.expected = expected;
    r.complex_valued = observed.imag() != 0.0 || expected.imag() != 0.0;
    r.abs_err = std::abs(observed - expected);
    r.rel_err = expected == cplx{} ? r.abs_err : r.abs_err / std::abs(expected);
    r.tolerance = tol;
    r.identity_holds = (r.rel_err <= tol) || (expected == cplx{} && r.abs_err <= tol);
    r.expect_failure = expect_failure;
    r.pass = expect_failure ? !r.identity_holds : r.identity_holds;
    r.notes = std::move(notes);
    return r;
}

inline VerificationReport make_report(std::string base, std::vector<std::pair<std::string, Param>> params, double observed,
                                      double expected, double tol, std::string notes = {}, bool expect_failure = false) {
    return make_report(std::move(base), std::move(params), cplx(observed, 0.0), cplx(expected, 0.0), tol,
                       std::move(notes), expect_failure);
}

namespace detail {

inline std::string sci(double v) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << v;
    return os.str();
}

// any terminating 1F1(-k; b; node) with k <= m_max flagged for cancellation
inline bool rule_has_cancellation(long m_max, double b, const std::vector<double>& nodes) {
    for (double t : nodes)
        for (long k = 0; k <= m_max; ++k)
            if (hyp1f1_terminating(k, b, t).cancellation) return true;
    return false;
}

// Radial coefficient law |Phi_m|^2 / rho(m) with the label-dependent polynomial factor stripped.
inline double radial_weight(Family f, const std::map<std::string, double>& p, long m) {
    const double dm = static_cast<double>(m);
    switch (f) {
        case Family::class1: {
            const double g = p.at("gamma");
            return std::exp(log_pochhammer(g, m) - log_gamma(dm + 1.0)) / (g / 2.0 + dm);
        }
        case Family::class2: {
            const double g = p.at("gamma");
            return (g + dm) / g;
        }
        case Family::gk_isotonic:
            return std::exp(-dm * std::log(4.0) - log_pochhammer(p.at("gamma") / 2.0 + 1.0, m));
        case Family::gk_shifted: return std::exp(-dm * std::log(4.0) - log_gamma(dm + 1.0));
        case Family::general_spectrum: {
            const double c = p.at("c"), d = p.at("d");
            return std::exp(-dm * std::log(c) - log_pochhammer(1.0 + d / c, m));
        }
        case Family::mittag_leffler: {
            const double a = p.at("a"), b = p.at("b");
            return std::exp(log_gamma(b) - log_gamma(a * dm + b));
        }
    }
    return 0.0;
}

inline std::vector<std::pair<std::string, Param>> density_params(const MeasureDensity& d) {
    std::vector<std::pair<std::string, Param>> out;
    out.emplace_back("family", std::string(family_name(d.family)));
    for (const auto& [k, v] : d.params) out.emplace_back(k, v);
    return out;
}

}  // namespace detail

/// S_mn = delta_mn w_m int moment; the angular average is applied analytically as the Kronecker delta.
inline Matrix resolution_matrix(const MeasureDensity& d, long M) {
    detail::require(M >= 0 && M <= 20, "0 <= M <= 20");
    const auto n = static_cast<std::size_t>(M) + 1;
    Matrix S(n, n);
    for (std::size_t m = 0; m < n; ++m) {
        const long mm = static_cast<long>(m);
        S(m, m) = detail::radial_weight(d.family, d.params, mm) * d.moment(mm);
    }
    return S;
}

inline VerificationReport check_resolution_of_identity(const MeasureDensity& d, long M, double tol) {
    const auto S = resolution_matrix(d, M);
    auto params = detail::density_params(d);
    params.emplace_back("M", M);
    std::string notes = "max|S - I|; " + d.method + "; angular average applied as exact Kronecker delta";
    if (d.family == Family::class2) notes += "; signed radial weight (gamma+m)/gamma";
    return make_report("resolution.matrix", std::move(params), S.max_abs_deviation_from_identity(), 0.0, tol, notes);
}

/// Buchholz: sum_n (-nu)_n Gamma(gamma+nu+1) / (n! Gamma(gamma+1)) 1F1(-n; gamma+1; y) = y^nu.
struct BuchholzSums {
    double raw = 0.0;
    double tapered = 0.0;
    double cesaro = 0.0;
    double target = 0.0;
};

inline BuchholzSums buchholz_sums(int nu, double gamma, double y, long terms) {
    detail::require(nu <= 0, "nu <= 0 integer");
    detail::require(gamma + nu > -1.0, "gamma + nu > -1");
    detail::require(y > 0.0, "y > 0");
    detail::require(terms >= 1, "terms >= 1");
    BuchholzSums out;
    out.target = std::pow(y, nu);
    const auto F = hyp1f1_terminating_sequence(terms - 1, gamma + 1.0, y);
    const double lg = log_gamma(gamma + nu + 1.0) - log_gamma(gamma + 1.0);
    std::vector<double> a(F.size());
    for (std::size_t n = 0; n < F.size(); ++n) {
        // (-nu)_n / n! = C(n - nu - 1, n), a polynomial of degree -nu - 1 in n
        double binom = 1.0;
        for (int j = 1; j <= -nu - 1; ++j) binom *= (static_cast<double>(n) + j) / j;
        if (nu == 0) binom = n == 0 ? 1.0 : 0.0;
        a[n] = binom * std::exp(lg) * F[n];
    }
    CompensatedSum<double> s;
    for (double v : a) s += v;
    out.raw = s.value();
    out.tapered = tapered_sum(a);
    out.cesaro = cesaro_mean(a);
    return out;
}

inline VerificationReport check_buchholz(int nu, double gamma, double y, long terms, const Tolerances& tol = {}) {
    const auto b = buchholz_sums(nu, gamma, y, terms);
    const double raw_err = std::abs(b.raw - b.target) / std::abs(b.target);
    const double ces_err = std::abs(b.cesaro - b.target) / std::abs(b.target);
    std::string notes = "accelerated by C-infinity tapered summation; raw partial sum rel err " + detail::sci(raw_err) +
                        " (raw tolerance " + detail::sci(tol.buchholz_raw) + (raw_err <= tol.buchholz_raw ? ", met" : ", not met") +
                        "); (C,1) Cesaro rel err " + detail::sci(ces_err);
    // |a_n| ~ n^{-nu-1} n^{-gamma/2-1/4}
    const double p = gamma / 2.0 + 0.25 + nu + 1.0;
    notes += "; term decay n^{-" + detail::fmt_num(p) + "}";
    if (nu != 0 && p <= 0.0) notes += ", insufficient decay: terms do not vanish, only the tapered value is meaningful";
    return make_report("buchholz.identity",
                       {{"nu", static_cast<long>(nu)}, {"gamma", gamma}, {"y", y}, {"terms", terms}, {"raw", b.raw},
                        {"raw_rel_err", raw_err}},
                       b.tapered, b.target, tol.buchholz_accelerated, notes);
}

// ---- check groups ----

namespace detail {

using Reports = std::vector<VerificationReport>;

inline std::vector<double> gamma_grid(std::vector<double> base, double g, double lower) {
    if (g > lower && std::find(base.begin(), base.end(), g) == base.end()) base.push_back(g);
    return base;
}

inline Reports orthonormality_checks(const VerifyConfig& cfg) {
    Reports out;
    const auto& t = cfg.tol;
    for (double g : gamma_grid({1.75, 2.5, 3.5, 4.7}, cfg.gamma, 1.5 - 1e-15)) {
        const auto p = OscillatorParams::from_gamma(g);
        for (long M : {15L, 20L}) {
            const auto rule = gram_rule(p, M);
            double tl = t.gram;
            std::string notes = "max|G - I|, generalized Gauss-Laguerre order M+2 after t = x^2";
            if (rule_has_cancellation(M, g, rule.nodes)) {
                tl = std::max(tl, t.cancellation_widened);
                notes += "; cancellation flagged, tolerance widened";
            }
            const auto G = gram_matrix(p, M, rule);
            out.push_back(make_report("orthonormality.gram", {{"gamma", g}, {"M", M}}, G.max_abs_deviation_from_identity(),
                                      0.0, tl, notes));
        }
    }
    // residual bound pinned at gamma = 2.5; the order test also runs at the configured gamma
    for (double g : gamma_grid({2.5}, cfg.gamma, 1.5 - 1e-15)) {
        const auto p = OscillatorParams::from_gamma(g);
        for (long m = 0; m <= 5; ++m) {
            const auto r1 = apply_hamiltonian_fd(m, p, {10.0, 1e-3, 10});
            // same excluded layer in x at h/2
            const auto r2 = apply_hamiltonian_fd(m, p, {10.0, 5e-4, 20});
            if (g == 2.5)
                out.push_back(make_report("orthonormality.fd_residual", {{"gamma", g}, {"m", m}, {"h", 1e-3}, {"L", 10.0}},
                                          r1.residual, 0.0, t.fd_residual,
                                          "||H psi - e psi|| / ||psi||, first 10 grid points excluded"));
            out.push_back(make_report("orthonormality.fd_order", {{"gamma", g}, {"m", m}, {"h", 1e-3}}, r1.residual / r2.residual,
                                      4.0, t.fd_order, "residual(h) / residual(h/2) over x >= 0.01; 4 for a second-order scheme"));
        }
    }
    return out;
}

inline Reports resolution_checks(const VerifyConfig& cfg) {
    Reports out;
    const auto& t = cfg.tol;
    const double g = cfg.gamma;
    const double g1 = g > 2.0 ? g : 3.2;
    out.push_back(check_resolution_of_identity(class1_density(3.2), 10, t.resolution));
    if (g1 != 3.2) out.push_back(check_resolution_of_identity(class1_density(g1), 10, t.resolution));
    out.push_back(check_resolution_of_identity(class2_density(g > 1.0 ? g : 2.5), 12, t.resolution));
    out.push_back(check_resolution_of_identity(gk_density(g), 12, t.resolution));
    out.push_back(check_resolution_of_identity(gk_shifted_density(), 12, t.resolution));
    out.push_back(check_resolution_of_identity(general_density(4.0, 2.0 * g), 12, t.resolution));
    out.push_back(check_resolution_of_identity(general_density(3.0, 1.5), 12, t.resolution));
    for (auto [a, b] : {std::pair{1.0, 1.0}, std::pair{0.5, 1.0}, std::pair{2.0, 1.5}})
        out.push_back(check_resolution_of_identity(ml_weight(a, b), 12, t.resolution));

    auto moments = [&](const MeasureDensity& d, long m_max, double tl) {
        for (long m = 0; m <= m_max; ++m) {
            auto params = density_params(d);
            params.emplace_back("m", m);
            out.push_back(make_report("resolution.moment", std::move(params), d.moment(m), d.moment_target(m), tl, d.method));
        }
    };
    for (double gg : gamma_grid({2.6, 3.0, 4.0}, g, 2.0)) moments(class1_density(gg), 12, t.moment);
    moments(class2_density(g > 1.0 ? g : 2.5), 15, t.class2_moment);
    moments(gk_density(g), 12, t.moment);
    moments(gk_shifted_density(), 12, t.moment);
    moments(general_density(4.0, 2.0 * g), 12, t.moment);
    moments(general_density(3.0, 1.5), 12, t.moment);
    moments(ml_weight(1.0, 2.0), 6, t.moment);
    moments(ml_weight(2.0, 1.0), 6, t.moment);
    return out;
}

inline Reports normalization_checks(const VerifyConfig& cfg) {
    Reports out;
    const auto& t = cfg.tol;

    for (double J : {0.0, 1.0, 4.0, 10.0}) {
        const auto s = gk_state(J, 0.0, 3.0);
        out.push_back(make_report("normalization.gk", {{"gamma", 3.0}, {"J", J}, {"M", s.M}}, s.norm_series,
                                  gk_normalization_closed(J, 3.0), t.fast_norm, "series vs 1F1(1; gamma/2+1; J/4)"));
        const auto h = shifted_gk_state(J, 0.0, 3.0);
        out.push_back(make_report("normalization.gk_shifted", {{"J", J}, {"M", h.M}}, h.norm_series, std::exp(J / 4.0),
                                  t.fast_norm, "series vs e^{J/4}"));
        for (auto [c, d] : {std::pair{4.0, 2.0 * cfg.gamma}, std::pair{3.0, 1.5}}) {
            const auto gs = general_spectrum_state(J, 0.0, c, d);
            out.push_back(make_report("normalization.general", {{"c", c}, {"d", d}, {"J", J}, {"M", gs.M}}, gs.norm_series,
                                      general_normalization_closed(J, c, d), t.fast_norm, "series vs 1F1(1; 1+d/c; J/c)"));
        }
    }

    // Mittag-Leffler a = b = 1: canonical coherent states
    for (cplx z : {cplx(0.3, 0.0), cplx(0.8, -0.5), cplx(-1.2, 1.7)}) {
        const auto s = mittag_leffler_state(z, 1.0, 1.0);
        out.push_back(make_report("normalization.ml_canonical_norm", {{"re_z", z.real()}, {"im_z", z.imag()}},
                                  *s.norm_closed, std::exp(std::norm(z)), t.ml_reduction, "Gamma(1) E_{1,1}(|z|^2) vs e^{|z|^2}"));
        double worst = 0.0;
        for (long m = 0; m <= s.M; ++m) {
            const cplx want = std::pow(z, static_cast<double>(m)) * std::exp(-0.5 * std::norm(z) - 0.5 * log_gamma(m + 1.0));
            worst = std::max(worst, std::abs(s.coeffs[static_cast<std::size_t>(m)] - want));
        }
        out.push_back(make_report("normalization.ml_canonical_coeffs", {{"re_z", z.real()}, {"im_z", z.imag()}, {"M", s.M}},
                                  worst, 0.0, t.ml_reduction, "max |c_m - z^m e^{-|z|^2/2} / sqrt(m!)|"));
    }
    for (double w : {1.5, 2.5, 3.7}) {
        for (double x : {0.5, 2.0, 7.0}) {
            out.push_back(make_report("normalization.ml_identity", {{"omega", w}, {"x", x}},
                                      std::tgamma(w) * mittag_leffler(1.0, w, x).value, hyp1f1_one(w, x).value,
                                      t.ml_identity, "Gamma(w) E_{1,w}(x) vs 1F1(1; w; x)"));
        }
    }

    // Class I: m^{-3/2} terms; the record uses one Richardson step on S(M), S(M/4)
    for (double x : {0.5, 0.8, 1.2}) {
        const double closed = class1_normalization_closed(x, 3.0);
        const double raw = class1_normalization_series(x, 3.0, cfg.class1_terms);
        const double ext = class1_normalization_extrapolated(x, 3.0, cfg.class1_terms);
        const double raw_err = std::abs(raw - closed) / closed;
        out.push_back(make_report(
            "normalization.class1", {{"gamma", 3.0}, {"x", x}, {"M", cfg.class1_terms}, {"raw", raw}, {"raw_rel_err", raw_err}},
            ext, closed, t.class1_norm,
            "Richardson 2 S(M) - S(M/4) vs Bessel product; raw partial sum rel err " + sci(raw_err) +
                (raw_err <= t.class1_norm ? " (meets " : " (does not meet ") + sci(t.class1_norm) + ", tail ~ M^{-1/2})"));
    }

    // Class II: signed normalization sum
    for (double x : {0.5, 1.0, 2.0, 5.0}) {
        const double g = 4.0;
        const auto terms = class2_normalization_terms(x, g, cfg.class2_terms - 1);
        CompensatedSum<double> s;
        for (double v : terms) s += v;
        const double closed = class2_normalization_closed(x, g);
        const double raw_err = std::abs(s.value() - closed) / closed;
        const double ces_err = std::abs(cesaro_mean(terms) - closed) / closed;
        out.push_back(make_report(
            "normalization.class2", {{"gamma", g}, {"x", x}, {"terms", cfg.class2_terms}, {"raw", s.value()}, {"raw_rel_err", raw_err}},
            tapered_sum(terms), closed, t.class2_norm_accelerated,
            "tapered sum vs (gamma-1)(1/x + 1/x^2); raw rel err " + sci(raw_err) +
                (raw_err <= t.class2_norm_raw ? " (meets " : " (does not meet ") + sci(t.class2_norm_raw) +
                "); (C,1) Cesaro rel err " + sci(ces_err)));
    }

    // Class II energy, x^2 convention
    for (double x : {0.7, 1.0, 1.5}) {
        const auto e = class2_energy(x, 4.0, EnergyArgument::x_squared, cfg.energy_terms);
        out.push_back(make_report("normalization.class2_energy", {{"gamma", 4.0}, {"x", x}, {"terms", cfg.energy_terms}},
                                  e.series, e.closed_printed, t.class2_energy,
                                  "tapered series with 1F1(-m; gamma+1; x^2) vs 2 (x^4+3x^2+4)(gamma-1)(gamma-2) / (x^6 N); raw " +
                                      sci(std::abs(e.raw - e.closed_printed) / e.closed_printed)));
    }
    double worst = 0.0;
    for (int i = -40; i <= 40; ++i) {
        const double x = 0.25 * i;
        worst = std::max(worst, std::abs((x * x - x + 2.0) * (x * x + x + 2.0) - (x * x * x * x + 3.0 * x * x + 4.0)));
    }
    out.push_back(make_report("normalization.class2_energy_factorization", {{"grid", std::string("x=-10:0.25:10")}}, worst,
                              0.0, 0.0, "(x^2-x+2)(x^2+x+2) - (x^4+3x^2+4) on dyadic points, exact"));
    return out;
}

inline Reports buchholz_checks(const VerifyConfig& cfg) {
    Reports out;
    for (int nu : {-1, -2}) out.push_back(check_buchholz(nu, 4.0, 2.0, cfg.buchholz_terms, cfg.tol));
    for (double y : {0.5, 5.0}) out.push_back(check_buchholz(-1, 4.0, y, cfg.buchholz_terms, cfg.tol));
    out.push_back(check_buchholz(0, 4.0, 2.0, 50, cfg.tol));
    return out;
}

inline Reports temporal_checks(const VerifyConfig& cfg) {
    Reports out;
    const auto& t = cfg.tol;
    const double g = cfg.gamma;
    const std::vector<double> Js = {1.0, 3.0, 8.0}, ts = {0.1, 1.0, 7.0};

    auto coeff_gap = [](const TruncatedState& a, const TruncatedState& b) {
        double worst = 0.0;
        for (std::size_t m = 0; m < a.coeffs.size(); ++m) worst = std::max(worst, std::abs(a.coeffs[m] - b.coeffs[m]));
        return worst;
    };
    auto stable = [&](Family f, const CSLabel& l, std::vector<std::pair<std::string, Param>> params, double tt) {
        const auto s = build_state(f, l);
        const auto e = evolve(s, tt);
        const auto r = build_state(f, time_shifted_label(f, l, tt), {s.M});
        params.emplace_back("t", tt);
        params.emplace_back("M", s.M);
        out.push_back(make_report(std::string("temporal.") + family_name(f), std::move(params), coeff_gap(e, r), 0.0,
                                  t.temporal, "max_m |evolve(t) - relabel|"));
    };
    for (double J : Js) {
        for (double tt : ts) {
            stable(Family::gk_isotonic, ActionAngle{J, 0.25, g}, {{"gamma", g}, {"J", J}}, tt);
            stable(Family::gk_shifted, ActionAngle{J, 0.25, g}, {{"J", J}}, tt);
            stable(Family::general_spectrum, GeneralSpectrumLabel{J, 0.25, 3.0, 1.5}, {{"c", 3.0}, {"d", 1.5}, {"J", J}}, tt);
        }
    }

    // Class I: no angle reproduces the evolved vector
    {
        const double gg = 3.0, x = 0.8, tt = 0.3;
        const long M = 400;
        const auto e = evolve(class1_state(x, 0.0, gg, {M}), tt);
        double best = 1e300;
        for (int k = 0; k < 720; ++k)
            best = std::min(best, distance(e, class1_state(x, 2.0 * std::numbers::pi * k / 720.0, gg, {M})));
        const auto ray = class1_state(x, -4.0 * tt, gg, {M});
        const double proj = 1.0 - std::abs(overlap(ray, e));
        out.push_back(make_report("temporal.class1_counterexample", {{"gamma", gg}, {"x", x}, {"t", tt}, {"M", M}}, best, 0.0,
                                  t.counterexample_distance,
                                  "min over 720 angles of ||evolve(t) - state(theta')||; projectively the state returns at "
                                  "theta - 4t up to the global phase e^{-2i gamma t} (1 - |overlap| = " +
                                      sci(proj) + ")",
                                  true));
    }

    // overlaps of the isotonic GK family
    for (double J : {0.5, 4.0, 20.0}) {
        const auto o = gk_overlap(J, 0.7, J, 0.7, g);
        out.push_back(make_report("temporal.overlap_self", {{"gamma", g}, {"J", J}}, o.series, cplx(1.0, 0.0), t.self_overlap));
    }
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> uJ(0.0, 12.0), uD(-3.0, 3.0);
    for (long i = 0; i < 10; ++i) {
        const double J1 = uJ(rng), J2 = uJ(rng), D = uD(rng);
        const auto o = gk_overlap(J2, 0.0, J1, D, g);
        out.push_back(make_report("temporal.overlap_closed", {{"gamma", g}, {"sample", i}, {"J1", J1}, {"J2", J2}, {"delta", D}},
                                  o.closed, o.series, t.overlap_closed, "corrected closed form vs series"));
    }

    // |overlap| <= 1 on 25 sampled label pairs per family
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    auto bound = [&](Family f, auto make_label, const std::string& what) {
        double worst = 0.0;
        for (int i = 0; i < 25; ++i) {
            const auto a = build_state(f, make_label(), {120});
            const auto b = build_state(f, make_label(), {120});
            worst = std::max(worst, std::abs(overlap(a, b)));
        }
        out.push_back(make_report("temporal.overlap_bound", {{"family", std::string(family_name(f))}, {"labels", what}},
                                  std::max(0.0, worst - 1.0), 0.0, t.overlap_bound,
                                  "max(0, max |<a|b>| - 1) over 25 sampled pairs; max |<a|b>| = " + sci(worst)));
    };
    const double g1 = g > 2.0 ? g : 3.0;
    bound(Family::class1, [&] { return PointLabel{0.2 + 1.5 * u01(rng), 6.0 * u01(rng), g1}; }, "x in [0.2,1.7]");
    bound(Family::class2, [&] { return PointLabel{0.005 + 0.05 * u01(rng), 6.0 * u01(rng), g > 1.0 ? g : 2.5}; },
          "x in [0.005,0.055]");
    bound(Family::gk_isotonic, [&] { return ActionAngle{10.0 * u01(rng), 6.0 * u01(rng), g}; }, "J in [0,10]");
    bound(Family::gk_shifted, [&] { return ActionAngle{10.0 * u01(rng), 6.0 * u01(rng), g}; }, "J in [0,10]");
    bound(Family::general_spectrum, [&] { return GeneralSpectrumLabel{10.0 * u01(rng), 6.0 * u01(rng), 3.0, 1.5}; },
          "J in [0,10]");
    bound(Family::mittag_leffler, [&] { return MittagLefflerLabel{std::polar(2.0 * u01(rng), 6.0 * u01(rng)), 0.7, 1.3}; },
          "|z| in [0,2]");
    return out;
}

inline Reports action_checks(const VerifyConfig& cfg) {
    Reports out;
    const auto& t = cfg.tol;
    const double g = cfg.gamma;
    for (double J : {0.0, 1.0, 4.0, 10.0}) {
        const auto a = action_identity_check(J, g, true);
        out.push_back(make_report("action.shifted", {{"gamma", g}, {"J", J}, {"M", a.M}}, a.value, J, t.action,
                                  "<J|(H - e_0)|J> with rho(m) = 4^m m!"));
    }
    for (double J : {1.0, 4.0, 10.0}) {
        const auto a = action_identity_check(J, g, false);
        out.push_back(make_report("action.unshifted", {{"gamma", g}, {"J", J}, {"M", a.M}, {"gap", a.gap}}, a.value, J,
                                  t.action, "<J|H|J> with rho(m) = 4^m (gamma/2+1)_m; gap " + sci(a.gap) + " is expected",
                                  true));
    }
    // H_2 average: harmonic oracle and the dual forms for the GK rho
    {
        const double r = 1.3;
        std::vector<double> phi, rho;
        for (int m = 0; m < 80; ++m) {
            phi.push_back(std::pow(r, m));
            rho.push_back(std::tgamma(m + 1.0));
        }
        const auto e = generic_h2_energy(phi, rho, std::exp(r * r));
        out.push_back(make_report("action.h2_harmonic", {{"abs_z", r}}, e.shifted_form, r * r, t.h2_dual,
                                  "rho(m) = m!, Phi_m = z^m, N = e^{|z|^2}"));
    }
    for (double J : {1.0, 5.0}) {
        std::vector<double> phi, rho;
        for (int m = 0; m < 120; ++m) {
            phi.push_back(std::pow(J, m / 2.0));
            rho.push_back(std::exp(m * std::log(4.0) + log_pochhammer(g / 2.0 + 1.0, m)));
        }
        const auto e = generic_h2_energy(phi, rho, gk_normalization_closed(J, g));
        out.push_back(make_report("action.h2_dual_forms", {{"gamma", g}, {"J", J}}, e.shifted_form, e.weighted_form, t.h2_dual,
                                  e.divergent ? "partial sums not settled" : "shifted-index form vs y_m-weighted form"));
    }
    return out;
}

inline Reports discrepancy_checks(const VerifyConfig& cfg) {
    Reports out;
    const auto& t = cfg.tol;
    const double g = 3.0, J = 4.0;

    {
        const auto s = gk_state(J, 0.0, g);
        out.push_back(make_report("discrepancies.gk_normalization_parameter.literal", {{"gamma", g}, {"J", J}},
                                  gk_normalization_closed(J, g, ConstantVariant::as_printed), s.norm_series, t.fast_norm,
                                  "printed 1F1(1; gamma+1; J/4) fails; corrected parameter is gamma/2+1", true));
        out.push_back(make_report("discrepancies.gk_normalization_parameter.corrected", {{"gamma", g}, {"J", J}},
                                  gk_normalization_closed(J, g), s.norm_series, t.fast_norm, "1F1(1; gamma/2+1; J/4)"));
    }
    {
        const auto lit = gk_density(g, ConstantVariant::as_printed);
        const auto cor = gk_density(g);
        out.push_back(make_report("discrepancies.gk_density_exponent.literal", {{"gamma", g}, {"m", 0L}}, lit.moment(0),
                                  lit.moment_target(0), t.moment,
                                  "printed J^{-gamma/2} fails the m = 0 moment (Mellin value); corrected exponent is +gamma/2",
                                  true));
        out.push_back(make_report("discrepancies.gk_density_exponent.corrected", {{"gamma", g}, {"m", 0L}}, cor.moment(0),
                                  cor.moment_target(0), t.moment, cor.method));
        const auto S = resolution_matrix(lit, 6);
        out.push_back(make_report("discrepancies.gk_density_exponent.resolution_literal", {{"gamma", g}, {"M", 6L}},
                                  S.max_abs_deviation_from_identity(), 0.0, t.resolution,
                                  "resolution matrix with the printed exponent; diagonal != 1, corrected exponent is +gamma/2", true));
    }
    {
        const double c = 4.0, d = 6.0;
        const auto lit = general_density(c, d, ConstantVariant::as_printed);
        const auto cor = general_density(c, d);
        out.push_back(make_report("discrepancies.general_density_exponent.literal", {{"c", c}, {"d", d}, {"m", 0L}},
                                  lit.moment(0), lit.moment_target(0), t.moment,
                                  "printed J^{-d/c} fails the m = 0 moment (Mellin value); corrected exponent is +d/c", true));
        out.push_back(make_report("discrepancies.general_density_exponent.corrected", {{"c", c}, {"d", d}, {"m", 0L}},
                                  cor.moment(0), cor.moment_target(0), t.moment, cor.method));
    }
    {
        const double gg = 2.5;
        const auto o = gk_overlap(3.0, 0.1, 5.0, 0.9, gg);
        out.push_back(make_report("discrepancies.overlap_phase.literal", {{"gamma", gg}, {"J1", 5.0}, {"J2", 3.0}, {"delta", 0.8}},
                                  o.closed_literal, o.series, t.overlap_closed,
                                  "printed e^{-4i gamma delta} fails; corrected phase is e^{-4i delta}", true));
        out.push_back(make_report("discrepancies.overlap_phase.corrected", {{"gamma", gg}, {"J1", 5.0}, {"J2", 3.0}, {"delta", 0.8}},
                                  o.closed, o.series, t.overlap_closed, "e^{-4i delta} inside 1F1"));
    }
    {
        const auto lit = class1_density(g, ConstantVariant::as_printed);
        const auto cor = class1_density(g);
        out.push_back(make_report("discrepancies.class1_density_prefactor.literal", {{"gamma", g}, {"m", 0L}}, lit.moment(0),
                                  lit.moment_target(0), t.moment,
                                  "printed Gamma(gamma-2)/gamma fails; corrected prefactor is gamma/Gamma(gamma-2)", true));
        out.push_back(make_report("discrepancies.class1_density_prefactor.corrected", {{"gamma", g}, {"m", 0L}}, cor.moment(0),
                                  cor.moment_target(0), t.moment, cor.method));
    }
    return out;
}

}  // namespace detail

inline std::vector<VerificationReport> run_group(CheckGroup g, const VerifyConfig& cfg) {
    switch (g) {
        case CheckGroup::orthonormality: return detail::orthonormality_checks(cfg);
        case CheckGroup::resolution: return detail::resolution_checks(cfg);
        case CheckGroup::normalization: return detail::normalization_checks(cfg);
        case CheckGroup::buchholz: return detail::buchholz_checks(cfg);
        case CheckGroup::temporal: return detail::temporal_checks(cfg);
        case CheckGroup::action: return detail::action_checks(cfg);
        case CheckGroup::discrepancies: return detail::discrepancy_checks(cfg);
    }
    return {};
}

/// Runs the selected groups (concurrently if asked) and orders records by check_id.
inline std::vector<VerificationReport> run_checks(const std::vector<CheckGroup>& groups, const VerifyConfig& cfg) {
    std::vector<VerificationReport> all;
    if (cfg.parallel && groups.size() > 1) {
        std::vector<std::future<std::vector<VerificationReport>>> fs;
        for (CheckGroup g : groups) fs.push_back(std::async(std::launch::async, [g, &cfg] { return run_group(g, cfg); }));
        for (auto& f : fs) {
            auto part = f.get();
            all.insert(all.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
        }
    } else {
        for (CheckGroup g : groups) {
            auto part = run_group(g, cfg);
            all.insert(all.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
        }
    }
    std::stable_sort(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.check_id < b.check_id; });
    return all;
}

inline std::vector<VerificationReport> run_all(const VerifyConfig& cfg = {}) {
    std::vector<CheckGroup> gs;
    for (const auto& [g, name] : check_groups()) gs.push_back(g);
    return run_checks(gs, cfg);
}

struct ReportSummary {
    std::size_t total = 0, passed = 0, failed = 0;
};

inline ReportSummary summarize(const std::vector<VerificationReport>& rs) {
    ReportSummary s;
    s.total = rs.size();
    for (const auto& r : rs) (r.pass ? s.passed : s.failed)++;
    return s;
}

}  // namespace isocs
