// Builds a few coherent states and prints the quantities the library checks.

#include <cstdio>

#include "isocs/isocs.hpp"

int main() {
    using namespace isocs;

    const auto p = OscillatorParams::from_coupling(2.0);
    std::printf("A = %g  gamma = %.6f\n", p.A, p.gamma);
    for (long m = 0; m < 3; ++m) std::printf("e_%ld = %g  psi_%ld(1) = %.12f\n", m, eigenvalue(m, p), m, wavefunction(m, p, 1.0));
    std::printf("max|G - I| (M = 15) = %.3e\n", gram_matrix(p, 15).max_abs_deviation_from_identity());

    // isotonic Gazeau-Klauder state and its normalization
    const auto s = gk_state(4.0, 0.3, p.gamma);
    std::printf("GK: M = %ld  N series = %.15f  closed = %.15f\n", s.M, s.norm_series, *s.norm_closed);

    // temporal stability: evolving equals shifting alpha
    const auto e = evolve(s, 1.0);
    const auto r = gk_state(4.0, 1.3, p.gamma, {s.M});
    std::printf("|| e^{-iHt}|J,a> - |J,a+t> || = %.3e\n", distance(e, r));

    const auto o = gk_overlap(3.0, 0.0, 5.0, 0.8, p.gamma);
    std::printf("overlap series (%.15f, %.15f)  closed (%.15f, %.15f)\n", o.series.real(), o.series.imag(), o.closed.real(),
                o.closed.imag());

    // class I needs gamma > 2 and has a slow m^{-3/2} term decay
    std::printf("class I N(0.8): closed %.10f  partial sum %.10f  extrapolated %.10f\n",
                class1_normalization_closed(0.8, p.gamma), class1_normalization_series(0.8, p.gamma, 50000),
                class1_normalization_extrapolated(0.8, p.gamma, 50000));

    const auto rs = run_checks({CheckGroup::discrepancies}, {});
    for (const auto& rep : rs) std::printf("%-70s %s\n", rep.check_id.c_str(), rep.pass ? "pass" : "FAIL");
    return 0;
}
