#pragma once

// Isotonic oscillator H = -d^2/dx^2 + x^2 + A/x^2 on (0, inf), Dirichlet at 0.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "isocs/errors.hpp"
#include "isocs/quadrature.hpp"
#include "isocs/specfun.hpp"
#include "isocs/summation.hpp"

namespace isocs {

struct OscillatorParams {
    double A = 0.0;
    double gamma = 1.5;

    static OscillatorParams from_coupling(double A) {
        detail::require(A >= 0.0, "A >= 0");
        return {A, 1.0 + 0.5 * std::sqrt(1.0 + 4.0 * A)};
    }
    static OscillatorParams from_gamma(double gamma) {
        detail::require(gamma >= 1.5, "gamma >= 3/2");
        const double g = gamma - 1.0;
        return {g * g - 0.25, gamma};
    }
};

struct BasisIndex {
    long m = 0;
    BasisIndex() = default;
    BasisIndex(long m_) : m(m_) { detail::require(m_ >= 0, "m >= 0"); }
};

/// Dense row-major matrix, just enough for Gram and resolution checks.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double max_abs_deviation_from_identity() const {
        double dev = 0.0;
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                dev = std::max(dev, std::abs((*this)(i, j) - (i == j ? 1.0 : 0.0)));
        return dev;
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<double> data_;
};

/// e_m = 2(2m + gamma)
inline double eigenvalue(BasisIndex m, const OscillatorParams& p) { return 2.0 * (2.0 * static_cast<double>(m.m) + p.gamma); }

/// log of sqrt(2 (gamma)_m / (m! Gamma(gamma)))
inline double log_basis_prefactor(long m, double gamma) {
    return 0.5 * (std::log(2.0) + log_pochhammer(gamma, m) - log_gamma(static_cast<double>(m) + 1.0) - log_gamma(gamma));
}

inline double wavefunction(BasisIndex m, const OscillatorParams& p, double x) {
    detail::require(x > 0.0, "x > 0");
    const double f = hyp1f1_terminating(m.m, p.gamma, x * x).value;
    if (f == 0.0) return 0.0;
    const double log_mag = log_basis_prefactor(m.m, p.gamma) + (p.gamma - 0.5) * std::log(x) - 0.5 * x * x;
    const double sign = (m.m % 2 == 0) ? 1.0 : -1.0;
    return sign * std::exp(log_mag) * f;
}

/// Generalized Laguerre rule (alpha = gamma - 1) that makes the M+1 Gram matrix exact.
inline QuadratureRule gram_rule(const OscillatorParams& p, long M) {
    return gauss_gen_laguerre(static_cast<int>(M) + 2, p.gamma - 1.0);
}

/// G_mn = int psi_m psi_n dx, computed after t = x^2:
///   G_mn = 1/2 c_m c_n int t^(gamma-1) e^-t F_m(t) F_n(t) dt.
inline Matrix gram_matrix(const OscillatorParams& p, long M, const QuadratureRule& rule) {
    detail::require(M >= 0, "M >= 0");
    if (rule.kind != RuleKind::generalized_laguerre || std::abs(rule.alpha - (p.gamma - 1.0)) > 1e-12)
        throw RuleTooSmall("gram_matrix needs a generalized Laguerre rule with alpha = gamma - 1");
    if (rule.order() < M + 1) throw RuleTooSmall("gram_matrix needs rule order >= M + 1");

    const auto n = static_cast<std::size_t>(M) + 1;
    const std::size_t q = rule.nodes.size();
    std::vector<double> F(n * q), c(n);
    for (std::size_t m = 0; m < n; ++m) {
        const long mm = static_cast<long>(m);
        c[m] = ((mm % 2 == 0) ? 1.0 : -1.0) * std::exp(log_basis_prefactor(mm, p.gamma));
        for (std::size_t i = 0; i < q; ++i) F[m * q + i] = hyp1f1_terminating(mm, p.gamma, rule.nodes[i]).value;
    }
    Matrix G(n, n);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a; b < n; ++b) {
            CompensatedSum<double> s;
            for (std::size_t i = 0; i < q; ++i) s += rule.weights[i] * F[a * q + i] * F[b * q + i];
            G(a, b) = G(b, a) = 0.5 * c[a] * c[b] * s.value();
        }
    }
    return G;
}

inline Matrix gram_matrix(const OscillatorParams& p, long M) { return gram_matrix(p, M, gram_rule(p, M)); }

struct FdGrid {
    double L = 10.0;
    double h = 1e-3;
    int exclude = 10;  // points next to the origin left out of the norm
};

struct FdResidual {
    double residual = 0.0;  // ||H psi - e psi|| / ||psi|| on the kept points
    std::size_t points = 0;
    bool singularity_warning = false;
};

/// Central-difference eigen-residual on the grid x_k = k h, k = 1..L/h.
inline FdResidual apply_hamiltonian_fd(BasisIndex m, const OscillatorParams& p, const FdGrid& grid = {}) {
    detail::require(grid.L > 0.0 && grid.h > 0.0, "L > 0 and h > 0");
    detail::require(grid.h <= 1e-3 * grid.L * (1.0 + 1e-12), "h <= 1e-3 L");
    detail::require(grid.exclude >= 1, "exclude >= 1");

    const auto n = static_cast<long>(std::floor(grid.L / grid.h + 1e-9));
    const double e = eigenvalue(m, p);
    auto psi = [&](long k) { return wavefunction(m, p, static_cast<double>(k) * grid.h); };

    FdResidual out;
    const long first = std::max<long>(grid.exclude, 1);
    out.singularity_warning = static_cast<double>(first) * grid.h < 10.0 * grid.h;

    CompensatedSum<double> r2, n2;
    double prev = psi(first - 1 > 0 ? first - 1 : 1), cur = psi(first);
    if (first == 1) prev = 0.0;  // Dirichlet value at x = 0
    for (long k = first; k < n; ++k) {
        const double next = psi(k + 1);
        const double x = static_cast<double>(k) * grid.h;
        const double hpsi = -(next - 2.0 * cur + prev) / (grid.h * grid.h) + (x * x + p.A / (x * x)) * cur;
        const double r = hpsi - e * cur;
        r2 += r * r;
        n2 += cur * cur;
        ++out.points;
        prev = cur;
        cur = next;
    }
    out.residual = std::sqrt(r2.value() / n2.value());
    return out;
}

}  // namespace isocs
