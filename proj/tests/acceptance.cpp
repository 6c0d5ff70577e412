// Acceptance suite: one PASS/FAIL line per criterion, details indented below it.
// Usage: acceptance [criterion-number]   (no argument runs all twelve)

#include <sys/wait.h>

#include <array>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "isocs/isocs.hpp"

#ifndef ISOCS_CLI_PATH
#error "ISOCS_CLI_PATH must point at the built isocs binary"
#endif

namespace {

using namespace isocs;

// tolerances, one per clause
namespace tol {
constexpr double gram = 1e-10;
constexpr double fd_residual = 1e-3;
constexpr double fd_ratio_band = 0.1;  // |ratio/4 - 1|
constexpr double class1_moment = 1e-10;
constexpr double class1_norm = 1e-3;
constexpr double class1_runtime_s = 30.0;
constexpr double class2_raw = 1e-4;
constexpr double class2_cesaro = 1e-6;
constexpr double class2_moment = 1e-12;
constexpr double gk_norm = 1e-12;
constexpr double gk_moment = 1e-10;
constexpr double temporal = 1e-13;
constexpr double counterexample = 1e-2;
constexpr double overlap_closed = 1e-12;
constexpr double self_overlap = 1e-14;
constexpr double action = 1e-12;
constexpr double ml_canonical = 1e-13;
constexpr double ml_identity = 1e-12;
constexpr double general_moment = 1e-10;
constexpr double class2_energy = 1e-8;
constexpr double suite_runtime_s = 300.0;
constexpr double criterion_runtime_s = 60.0;
}  // namespace tol

struct Outcome {
    bool pass = true;
    std::vector<std::string> lines;

    void add(bool ok, const std::string& what) {
        pass = pass && ok;
        lines.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
    }
    void info(const std::string& what) { lines.push_back("     " + what); }
};

std::string e3(double v) {
    char b[32];
    std::snprintf(b, sizeof b, "%.3e", v);
    return b;
}

std::string g6(double v) {
    char b[32];
    std::snprintf(b, sizeof b, "%.6g", v);
    return b;
}

double rel(double got, double want) { return want == 0.0 ? std::abs(got) : std::abs(got - want) / std::abs(want); }

// independent targets built from lgamma
double class1_moment_target(long m, double g) {
    return std::exp(std::lgamma(m + 1.0) - (std::lgamma(g + m) - std::lgamma(g))) * (g / 2.0 + m);
}

Outcome c1() {
    Outcome o;
    for (double g : {1.75, 2.5, 3.5, 4.7}) {
        const auto p = OscillatorParams::from_gamma(g);
        const double dev = gram_matrix(p, 15, gram_rule(p, 15)).max_abs_deviation_from_identity();
        o.add(dev <= tol::gram, "gamma=" + g6(g) + " M=15 max|G-I| = " + e3(dev) + " (<= " + e3(tol::gram) + ")");
    }
    return o;
}

Outcome c2() {
    Outcome o;
    const auto p = OscillatorParams::from_gamma(2.5);
    for (long m = 0; m <= 5; ++m) {
        const auto r1 = apply_hamiltonian_fd(m, p, {10.0, 1e-3, 10});
        const auto r2 = apply_hamiltonian_fd(m, p, {10.0, 5e-4, 20});
        const double ratio = r1.residual / r2.residual;
        o.add(r1.residual <= tol::fd_residual, "m=" + std::to_string(m) + " residual(h=1e-3) = " + e3(r1.residual));
        o.add(std::abs(ratio / 4.0 - 1.0) <= tol::fd_ratio_band,
              "m=" + std::to_string(m) + " residual(h)/residual(h/2) = " + g6(ratio) + " (4 +- 10%)");
    }
    return o;
}

Outcome c3() {
    Outcome o;
    for (double g : {2.6, 3.0, 4.0}) {
        const auto d = class1_density(g);
        double worst = 0.0;
        for (long m = 0; m <= 12; ++m) worst = std::max(worst, rel(d.moment(m), class1_moment_target(m, g)));
        o.add(worst <= tol::class1_moment, "gamma=" + g6(g) + " m<=12 max rel err = " + e3(worst));
    }
    return o;
}

Outcome c4() {
    Outcome o;
    const long M = 50000;
    const auto t0 = std::chrono::steady_clock::now();
    for (double x : {0.5, 0.8, 1.2}) {
        const double closed = class1_normalization_closed(x, 3.0);
        const double raw = class1_normalization_series(x, 3.0, M);
        const double ext = class1_normalization_extrapolated(x, 3.0, M);
        o.add(rel(raw, closed) <= tol::class1_norm,
              "x=" + g6(x) + " partial sum M=5e4 rel err = " + e3(rel(raw, closed)) + " (<= " + e3(tol::class1_norm) + ")");
        o.info("x=" + g6(x) + " Richardson 2S(M)-S(M/4) rel err = " + e3(rel(ext, closed)) + " (terms ~ m^{-3/2}, tail ~ M^{-1/2})");
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.add(secs <= tol::class1_runtime_s, "runtime " + g6(secs) + " s (<= 30 s)");
    return o;
}

Outcome c5() {
    Outcome o;
    const double g = 4.0;
    const long terms = 100000;
    for (double x : {0.5, 1.0, 2.0, 5.0}) {
        const auto a = class2_normalization_terms(x, g, terms - 1);
        CompensatedSum<double> s;
        for (double v : a) s += v;
        const double closed = (g - 1.0) * (1.0 / x + 1.0 / (x * x));
        const double er = rel(s.value(), closed), ec = rel(cesaro_mean(a), closed), et = rel(tapered_sum(a), closed);
        o.add(er <= tol::class2_raw, "(a) x=" + g6(x) + " raw rel err = " + e3(er) + " (<= 1e-4)");
        o.add(ec <= tol::class2_cesaro, "(a) x=" + g6(x) + " (C,1) Cesaro rel err = " + e3(ec) + " (<= 1e-6)");
        o.info("(a) x=" + g6(x) + " tapered-sum rel err = " + e3(et));
    }
    for (int nu : {-1, -2}) {
        const auto b = buchholz_sums(nu, g, 2.0, terms);
        const double er = rel(b.raw, b.target), ec = rel(b.cesaro, b.target), et = rel(b.tapered, b.target);
        o.add(er <= tol::class2_raw, "(b) nu=" + std::to_string(nu) + " y=2 raw rel err = " + e3(er) + " (<= 1e-4)");
        o.add(ec <= tol::class2_cesaro, "(b) nu=" + std::to_string(nu) + " y=2 (C,1) Cesaro rel err = " + e3(ec) + " (<= 1e-6)");
        o.info("(b) nu=" + std::to_string(nu) + " y=2 tapered-sum rel err = " + e3(et));
    }
    const auto d = class2_density(g);
    double worst = 0.0;
    for (long m = 0; m <= 15; ++m) worst = std::max(worst, rel(d.moment(m), g / (g + m)));
    o.add(worst <= tol::class2_moment, "(c) moments m<=15 max rel err = " + e3(worst));
    return o;
}

Outcome c6() {
    Outcome o;
    const double g = 3.0;
    for (double J : {0.0, 1.0, 4.0, 10.0}) {
        const auto s = gk_state(J, 0.0, g);
        const double want = hyp1f1_one(g / 2.0 + 1.0, J / 4.0).value;
        o.add(rel(s.norm_series, want) <= tol::gk_norm, "J=" + g6(J) + " series vs 1F1(1;gamma/2+1;J/4) rel err = " +
                                                             e3(rel(s.norm_series, want)));
    }
    for (double gg : {2.5, 3.0}) {
        const auto d = gk_density(gg);
        double worst = 0.0;
        for (long m = 0; m <= 12; ++m)
            worst = std::max(worst, rel(d.moment(m), std::pow(4.0, m) * std::exp(std::lgamma(gg / 2.0 + 1.0 + m) -
                                                                                   std::lgamma(gg / 2.0 + 1.0))));
        o.add(worst <= tol::gk_moment, "gamma=" + g6(gg) + " corrected density m<=12 max rel err = " + e3(worst));
    }
    const auto lit = gk_density(g, ConstantVariant::as_printed);
    const double e0 = rel(lit.moment(0), 1.0);
    o.add(e0 > tol::gk_moment, "literal exponent -gamma/2: m=0 moment = " + g6(lit.moment(0)) + " != 1 (documented failure)");
    return o;
}

Outcome c7() {
    Outcome o;
    auto gap = [](const TruncatedState& a, const TruncatedState& b) {
        double w = 0.0;
        for (std::size_t m = 0; m < a.coeffs.size(); ++m) w = std::max(w, std::abs(a.coeffs[m] - b.coeffs[m]));
        return w;
    };
    for (double J : {1.0, 3.0, 8.0}) {
        for (double t : {0.1, 1.0, 7.0}) {
            const auto s = gk_state(J, 0.3, 2.5);
            const auto r = gk_state(J, 0.3 + t, 2.5, {s.M});
            const double dg = gap(evolve(s, t), r);
            const auto q = general_spectrum_state(J, 0.3, 3.0, 1.5);
            const auto qr = general_spectrum_state(J, 0.3 - t, 3.0, 1.5, {q.M});
            const double dq = gap(evolve(q, t), qr);
            o.add(dg <= tol::temporal && dq <= tol::temporal,
                  "J=" + g6(J) + " t=" + g6(t) + " GK " + e3(dg) + ", general(c=3,d=1.5) " + e3(dq));
        }
    }
    const auto e = evolve(class1_state(0.8, 0.0, 3.0, {400}), 0.3);
    double best = 1e300;
    for (int k = 0; k < 720; ++k) best = std::min(best, distance(e, class1_state(0.8, 2.0 * std::numbers::pi * k / 720.0, 3.0, {400})));
    o.add(best > tol::counterexample, "class1 gamma=3 x=0.8 t=0.3: min over 720 angles of distance = " + g6(best) + " (> 0.01)");
    return o;
}

Outcome c8() {
    Outcome o;
    const double g = 2.5;
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> uJ(0.0, 12.0), uD(-3.0, 3.0), u01(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
        const double J1 = uJ(rng), J2 = uJ(rng), D = uD(rng);
        const auto ov = gk_overlap(J2, 0.0, J1, D, g);
        worst = std::max(worst, std::abs(ov.closed - ov.series) / std::abs(ov.series));
    }
    o.add(worst <= tol::overlap_closed, "10 (J,J',delta) triples: max rel err series vs closed form = " + e3(worst));
    double self = 0.0;
    for (double J : {0.0, 0.5, 4.0, 20.0}) self = std::max(self, std::abs(gk_overlap(J, 1.1, J, 1.1, g).series - 1.0));
    o.add(self <= tol::self_overlap, "self-overlap |<J|J> - 1| max = " + e3(self));
    double biggest = 0.0;
    for (int i = 0; i < 25; ++i) {
        const auto a = gk_state(10.0 * u01(rng), 6.0 * u01(rng), g, {120});
        const auto b = gk_state(10.0 * u01(rng), 6.0 * u01(rng), g, {120});
        const auto c = class1_state(0.2 + 1.5 * u01(rng), 6.0 * u01(rng), 3.0, {120});
        const auto d = class1_state(0.2 + 1.5 * u01(rng), 6.0 * u01(rng), 3.0, {120});
        const auto e = mittag_leffler_state(std::polar(2.0 * u01(rng), 6.0 * u01(rng)), 0.7, 1.3, {120});
        const auto f = mittag_leffler_state(std::polar(2.0 * u01(rng), 6.0 * u01(rng)), 0.7, 1.3, {120});
        biggest = std::max({biggest, std::abs(overlap(a, b)), std::abs(overlap(c, d)), std::abs(overlap(e, f))});
    }
    o.add(biggest <= 1.0 + tol::self_overlap, "75 sampled pairs (gk, class1, mittag-leffler): max |overlap| = " + g6(biggest));
    return o;
}

Outcome c9() {
    Outcome o;
    const double g = 2.5;
    for (double J : {0.0, 1.0, 4.0, 10.0}) {
        const auto a = action_identity_check(J, g, true);
        const double err = J == 0.0 ? std::abs(a.value) : rel(a.value, J);
        o.add(err <= tol::action, "shifted J=" + g6(J) + " <H - e_0> = " + g6(a.value) + " err " + e3(err));
    }
    for (double J : {1.0, 4.0, 10.0}) {
        const auto a = action_identity_check(J, g, false);
        o.add(std::abs(a.gap) > tol::action, "unshifted J=" + g6(J) + " <H> - J = " + g6(a.gap) + " (nonzero)");
    }
    return o;
}

Outcome c10() {
    Outcome o;
    for (cplx z : {cplx(0.3, 0.0), cplx(0.8, -0.5), cplx(-1.2, 1.7)}) {
        const auto s = mittag_leffler_state(z, 1.0, 1.0);
        double w = 0.0;
        for (long m = 0; m <= s.M; ++m) {
            const cplx want = std::pow(z, static_cast<double>(m)) * std::exp(-0.5 * std::norm(z) - 0.5 * std::lgamma(m + 1.0));
            w = std::max(w, std::abs(s.coeffs[static_cast<std::size_t>(m)] - want));
        }
        const double en = rel(*s.norm_closed, std::exp(std::norm(z)));
        o.add(w <= tol::ml_canonical && en <= tol::ml_canonical,
              "a=b=1 z=" + g6(z.real()) + (z.imag() < 0 ? "" : "+") + g6(z.imag()) + "i: coeff err " + e3(w) + ", N rel err " + e3(en));
    }
    double worst = 0.0;
    for (double w : {1.5, 2.5, 3.7})
        for (double x : {0.5, 2.0, 7.0}) worst = std::max(worst, rel(std::tgamma(w) * mittag_leffler(1.0, w, x).value, hyp1f1_one(w, x).value));
    o.add(worst <= tol::ml_identity, "Gamma(w) E_{1,w}(x) vs 1F1(1;w;x) max rel err = " + e3(worst));
    for (auto [c, d] : {std::pair{3.0, 1.5}, std::pair{4.0, 6.0}, std::pair{2.0, 0.7}}) {
        const auto den = general_density(c, d);
        double mw = 0.0;
        for (long m = 0; m <= 12; ++m)
            mw = std::max(mw, rel(den.moment(m), std::pow(c, m) * std::exp(std::lgamma(1.0 + d / c + m) - std::lgamma(1.0 + d / c))));
        o.add(mw <= tol::general_moment, "general density c=" + g6(c) + " d=" + g6(d) + " m<=12 max rel err = " + e3(mw));
    }
    return o;
}

Outcome c11() {
    Outcome o;
    const double g = 4.0;
    for (double x : {0.7, 1.0, 1.5}) {
        const auto e = class2_energy(x, g, EnergyArgument::x_squared);
        const double y = x * x;
        const double N = (g - 1.0) * (1.0 / y + 1.0 / (y * y));
        const double want = 2.0 / std::pow(x, 6) * (x * x * x * x + 3.0 * x * x + 4.0) * (g - 1.0) * (g - 2.0) / N;
        o.add(rel(e.series, want) <= tol::class2_energy, "x=" + g6(x) + " series " + g6(e.series) + " vs closed " + g6(want) +
                                                             " rel err " + e3(rel(e.series, want)));
    }
    bool exact = true;
    for (int i = -64; i <= 64; ++i) {
        const double x = i / 8.0;
        exact = exact && (x * x - x + 2.0) * (x * x + x + 2.0) == x * x * x * x + 3.0 * x * x + 4.0;
    }
    o.add(exact, "(x^2-x+2)(x^2+x+2) == x^4+3x^2+4 on x = k/8, |k| <= 64, bitwise");
    return o;
}

Outcome c12() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    const std::string cmd = std::string(ISOCS_CLI_PATH) + " verify all --gamma 2.5 --format json";
    std::string out;
    FILE* p = popen(cmd.c_str(), "r");
    if (p == nullptr) {
        o.add(false, "could not start " + cmd);
        return o;
    }
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = std::fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), n);
    const int st = pclose(p);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const int code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    o.add(code == 0, "`isocs verify all --gamma 2.5` exit status " + std::to_string(code));
    try {
        const auto doc = nlohmann::json::parse(out);
        const auto& s = doc.at("summary");
        o.add(s.at("failed").get<long>() == 0, "summary: total " + std::to_string(s.at("total").get<long>()) + ", passed " +
                                                  std::to_string(s.at("passed").get<long>()) + ", failed " +
                                                  std::to_string(s.at("failed").get<long>()));
    } catch (const std::exception& e) {
        o.add(false, std::string("report not parseable: ") + e.what());
    }
    o.add(secs <= tol::suite_runtime_s, "runtime " + g6(secs) + " s (<= 300 s)");
    return o;
}

struct Criterion {
    int id;
    const char* title;
    std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> all = {
        {1, "orthonormality of the eigenbasis", c1},
        {2, "finite-difference eigen-residual", c2},
        {3, "class I resolution-of-identity moments", c3},
        {4, "class I normalization series vs Bessel product", c4},
        {5, "class II normalization, Buchholz sums, moments", c5},
        {6, "isotonic GK normalization and density", c6},
        {7, "temporal stability and class I counterexample", c7},
        {8, "overlap closed form, self-overlap, bounds", c8},
        {9, "action identity", c9},
        {10, "Mittag-Leffler reductions and general density", c10},
        {11, "class II energy", c11},
        {12, "full verification suite", c12},
    };
    int only = 0;
    if (argc > 1) only = std::atoi(argv[1]);

    int failed = 0, ran = 0;
    for (const auto& c : all) {
        if (only != 0 && c.id != only) continue;
        ++ran;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.add(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.id != 12 && secs > tol::criterion_runtime_s) o.add(false, "criterion runtime " + g6(secs) + " s (> 60 s)");
        if (!o.pass) ++failed;
        std::printf("[%s] %2d %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.title, secs);
        for (const auto& l : o.lines) std::printf("       %s\n", l.c_str());
    }
    if (ran == 0) {
        std::fprintf(stderr, "unknown criterion %s\n", argv[1]);
        return 2;
    }
    std::printf("acceptance: %d of %d criteria passed\n", ran - failed, ran);
    return failed == 0 ? 0 : 1;
}
