#pragma once

// Gauss rules and semi-infinite integration.
//
// Generalized Gauss-Laguerre rules come from the Jacobi matrix of the monic
// Laguerre recurrence (Golub-Welsch); nodes are then Newton-polished on
// L_n^alpha and the weights recomputed from the derivative formula, which keeps
// full relative accuracy in the tiny weights at the far end of the rule.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "isocs/errors.hpp"
#include "isocs/summation.hpp"

namespace isocs {

namespace detail {

/// log|Gamma(x)| without touching the global signgam.
inline double log_gamma(double x) {
#if defined(__GLIBC__)
    int sign = 0;
    return ::lgamma_r(x, &sign);
#else
    return std::lgamma(x);
#endif
}

}  // namespace detail

enum class RuleKind { generalized_laguerre, legendre };

/// Nodes and weights of a Gauss rule. For generalized_laguerre the weight
/// function is x^alpha e^-x on [0, inf); for legendre it is 1 on [-1, 1].
struct QuadratureRule {
    RuleKind kind = RuleKind::legendre;
    double alpha = 0.0;
    std::vector<double> nodes;
    std::vector<double> weights;

    int order() const { return static_cast<int>(nodes.size()); }

    /// Highest polynomial degree integrated exactly against the weight function.
    int exact_degree() const { return 2 * order() - 1; }

    template <class F>
    auto apply(F&& f) const {
        using R = decltype(f(0.0) * 1.0);
        CompensatedSum<R> s;
        for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
        return s.value();
    }
};

/// Eigenvalues and first eigenvector components of a symmetric tridiagonal
/// matrix by the implicit-shift QL iteration. `diag` has n entries, `off` has
/// n-1 (off[i] couples rows i and i+1).
struct TridiagonalEigen {
    std::vector<double> values;
    std::vector<double> first_components;
};

inline TridiagonalEigen symmetric_tridiagonal_eigen(std::vector<double> d, std::vector<double> off) {
    const std::size_t n = d.size();
    std::vector<double> e(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) e[i] = off[i];
    std::vector<double> z(n, 0.0);
    if (n > 0) z[0] = 1.0;

    constexpr int max_iter = 60;
    for (std::size_t l = 0; l < n; ++l) {
        int iter = 0;
        std::size_t m;
        do {
            for (m = l; m + 1 < n; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= std::numeric_limits<double>::epsilon() * dd) break;
            }
            if (m != l) {
                if (++iter > max_iter)
                    throw NonConvergence("tridiagonal QL: eigenvalue did not converge", d[l],
                                         static_cast<std::size_t>(iter));
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                std::size_t i = m;
                bool underflow = false;
                while (i-- > l) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        underflow = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    f = z[i + 1];
                    z[i + 1] = s * z[i] + c * f;
                    z[i] = c * z[i] - s * f;
                }
                if (underflow) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }

    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });
    TridiagonalEigen out;
    out.values.reserve(n);
    out.first_components.reserve(n);
    for (std::size_t i : idx) {
        out.values.push_back(d[i]);
        out.first_components.push_back(z[i]);
    }
    return out;
}

namespace detail {

struct LaguerreEval {
    double value;       // L_n^alpha(x)
    double derivative;  // d/dx L_n^alpha(x)
};

inline LaguerreEval laguerre_with_derivative(int n, double alpha, double x) {
    double p0 = 1.0;
    double p1 = 1.0 + alpha - x;
    if (n == 0) return {1.0, 0.0};
    for (int k = 1; k < n; ++k) {
        const double p2 = ((2.0 * k + 1.0 + alpha - x) * p1 - (k + alpha) * p0) / (k + 1.0);
        p0 = p1;
        p1 = p2;
    }
    // x L_n' = n L_n - (n + alpha) L_{n-1}
    return {p1, (n * p1 - (n + alpha) * p0) / x};
}

}  // namespace detail

/// Generalized Gauss-Laguerre rule of order n for the weight x^alpha e^-x.
inline QuadratureRule gauss_gen_laguerre(int n, double alpha) {
    detail::require(n >= 1, "n >= 1");
    detail::require(alpha > -1.0, "alpha > -1");

    std::vector<double> diag(static_cast<std::size_t>(n));
    std::vector<double> off(static_cast<std::size_t>(n > 0 ? n - 1 : 0));
    for (int k = 0; k < n; ++k) diag[static_cast<std::size_t>(k)] = 2.0 * k + alpha + 1.0;
    for (int k = 1; k < n; ++k) off[static_cast<std::size_t>(k - 1)] = std::sqrt(k * (k + alpha));

    const TridiagonalEigen eig = symmetric_tridiagonal_eigen(std::move(diag), std::move(off));
    const double mu0 = std::exp(detail::log_gamma(alpha + 1.0));

    QuadratureRule rule;
    rule.kind = RuleKind::generalized_laguerre;
    rule.alpha = alpha;
    rule.nodes = eig.values;
    rule.weights.resize(eig.values.size());

    const double log_scale = detail::log_gamma(n + alpha + 1.0) - detail::log_gamma(n + 1.0);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        double x = rule.nodes[i];
        // Newton polish; Golub-Welsch nodes are already within a few ulps.
        for (int it = 0; it < 3; ++it) {
            const auto ev = detail::laguerre_with_derivative(n, alpha, x);
            if (ev.derivative == 0.0) break;
            const double dx = ev.value / ev.derivative;
            x -= dx;
            if (std::abs(dx) <= 4.0 * std::numeric_limits<double>::epsilon() * x) break;
        }
        const auto ev = detail::laguerre_with_derivative(n, alpha, x);
        const double lw = log_scale - std::log(x) - 2.0 * std::log(std::abs(ev.derivative));
        double w = std::exp(lw);
        if (!std::isfinite(w) || w <= 0.0) {
            const double v0 = eig.first_components[i];
            w = mu0 * v0 * v0;
        }
        rule.nodes[i] = x;
        rule.weights[i] = w;
    }
    return rule;
}

/// Gauss-Legendre rule of order n on [-1, 1].
inline QuadratureRule gauss_legendre(int n) {
    detail::require(n >= 1, "n >= 1");
    QuadratureRule rule;
    rule.kind = RuleKind::legendre;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            const double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) <= 1e-16) break;
        }
        const double w = 2.0 / ((1.0 - z * z) * pp * pp);
        rule.nodes[static_cast<std::size_t>(i)] = -z;
        rule.nodes[static_cast<std::size_t>(n - 1 - i)] = z;
        rule.weights[static_cast<std::size_t>(i)] = w;
        rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
    }
    if (n % 2 == 1) rule.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
    return rule;
}

/// Configuration for integrate_semi_infinite. The half-line is mapped to (0, 1]
/// by x = -scale * ln(u); scale should be of the order of the decay length.
struct SemiInfiniteMap {
    double scale = 1.0;
    double rel_tol = 1e-12;
    double abs_tol = 0.0;
    int max_panels = 4000;
};

struct IntegralEstimate {
    double value = 0.0;
    double error = 0.0;
    int panels = 0;
    int evaluations = 0;
};

namespace detail {

inline const QuadratureRule& legendre_fine() {
    static const QuadratureRule r = gauss_legendre(20);
    return r;
}
inline const QuadratureRule& legendre_coarse() {
    static const QuadratureRule r = gauss_legendre(10);
    return r;
}

struct Panel {
    double a, b, value, error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

template <class G>
Panel integrate_panel(G& g, double a, double b, int& evals) {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    const auto& fine = legendre_fine();
    const auto& coarse = legendre_coarse();
    CompensatedSum<double> sf, sc;
    for (std::size_t i = 0; i < fine.nodes.size(); ++i) sf += fine.weights[i] * g(mid + half * fine.nodes[i]);
    for (std::size_t i = 0; i < coarse.nodes.size(); ++i)
        sc += coarse.weights[i] * g(mid + half * coarse.nodes[i]);
    evals += static_cast<int>(fine.nodes.size() + coarse.nodes.size());
    const double vf = half * sf.value(), vc = half * sc.value();
    return {a, b, vf, std::abs(vf - vc)};
}

}  // namespace detail

/// Adaptive integral of f over [0, inf). Panels in the mapped variable are
/// bisected, worst error first, until the summed error estimate meets the
/// tolerance. Throws NonConvergence (carrying the best value) if the panel
/// budget runs out.
template <class F>
IntegralEstimate integrate_semi_infinite(F&& f, const SemiInfiniteMap& map = {}) {
    detail::require(map.scale > 0.0, "map scale > 0");
    const double s = map.scale;
    auto g = [&](double u) -> double {
        const double x = -s * std::log(u);
        const double fx = f(x);
        if (fx == 0.0) return 0.0;
        return fx * s / u;
    };

    int evals = 0;
    std::priority_queue<detail::Panel> heap;
    constexpr int initial = 8;
    for (int i = 0; i < initial; ++i) {
        auto p = detail::integrate_panel(g, static_cast<double>(i) / initial, static_cast<double>(i + 1) / initial,
                                         evals);
        heap.push(p);
    }
    auto totals = [&]() {
        CompensatedSum<double> v;
        double e = 0.0;
        auto copy = heap;
        while (!copy.empty()) {
            v += copy.top().value;
            e += copy.top().error;
            copy.pop();
        }
        return std::pair{v.value(), e};
    };

    auto [value, error] = totals();
    int panels = initial;
    // incremental totals drift; re-sum from the heap every 64 splits
    while (error > std::max(map.abs_tol, map.rel_tol * std::abs(value))) {
        if (panels >= map.max_panels)
            throw NonConvergence("integrate_semi_infinite: tolerance not met within panel budget", value,
                                 static_cast<std::size_t>(panels));
        const detail::Panel worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        const auto left = detail::integrate_panel(g, worst.a, mid, evals);
        const auto right = detail::integrate_panel(g, mid, worst.b, evals);
        heap.push(left);
        heap.push(right);
        ++panels;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        if (panels % 64 == 0) std::tie(value, error) = totals();
    }
    std::tie(value, error) = totals();
    return {value, error, panels, evals};
}

}  // namespace isocs
