// isocs command-line front end.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "isocs/isocs.hpp"

namespace {

using json = nlohmann::ordered_json;
using isocs::cplx;
using isocs::Family;

constexpr int exit_ok = 0;
constexpr int exit_check_failed = 1;
constexpr int exit_usage = 2;

using Cell = std::variant<long, double, std::string, bool>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    json results = json::object();  // scalar outputs shown above the table
    json records;                   // overrides the row-derived JSON records when set
    std::optional<isocs::ReportSummary> summary;
};

std::string num17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string cell_text(const Cell& c) {
    if (const auto* l = std::get_if<long>(&c)) return std::to_string(*l);
    if (const auto* d = std::get_if<double>(&c)) return num17(*d);
    if (const auto* b = std::get_if<bool>(&c)) return *b ? "true" : "false";
    return std::get<std::string>(c);
}

json cell_json(const Cell& c) {
    return std::visit([](const auto& v) { return json(v); }, c);
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

std::string json_scalar_text(const json& v) {
    if (v.is_number_float()) return num17(v.get<double>());
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

void write_table(std::ostream& os, const Table& t) {
    for (const auto& [k, v] : t.results.items()) os << "# " << k << ": " << json_scalar_text(v) << "\n";
    std::vector<std::size_t> w(t.columns.size());
    for (std::size_t j = 0; j < t.columns.size(); ++j) w[j] = t.columns[j].size();
    for (const auto& r : t.rows)
        for (std::size_t j = 0; j < r.size(); ++j) w[j] = std::max(w[j], cell_text(r[j]).size());
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t j = 0; j < cells.size(); ++j) {
            os << cells[j];
            if (j + 1 < cells.size()) os << std::string(w[j] - cells[j].size() + 2, ' ');
        }
        os << "\n";
    };
    line(t.columns);
    for (const auto& r : t.rows) {
        std::vector<std::string> cells;
        for (const auto& c : r) cells.push_back(cell_text(c));
        line(cells);
    }
    if (t.summary)
        os << "# summary: total " << t.summary->total << ", passed " << t.summary->passed << ", failed "
           << t.summary->failed << "\n";
}

void write_csv(std::ostream& os, const Table& t) {
    for (std::size_t j = 0; j < t.columns.size(); ++j) os << (j ? "," : "") << csv_field(t.columns[j]);
    os << "\n";
    for (const auto& r : t.rows) {
        for (std::size_t j = 0; j < r.size(); ++j) os << (j ? "," : "") << csv_field(cell_text(r[j]));
        os << "\n";
    }
}

void write_json(std::ostream& os, const Table& t, const json& config) {
    json doc;
    doc["version"] = isocs::version;
    doc["config"] = config;
    if (!t.results.empty()) doc["results"] = t.results;
    if (!t.records.is_null()) {
        doc["records"] = t.records;
    } else {
        json recs = json::array();
        for (const auto& r : t.rows) {
            json o;
            for (std::size_t j = 0; j < r.size(); ++j) o[t.columns[j]] = cell_json(r[j]);
            recs.push_back(o);
        }
        doc["records"] = recs;
    }
    if (t.summary)
        doc["summary"] = {{"total", t.summary->total}, {"passed", t.summary->passed}, {"failed", t.summary->failed}};
    os << doc.dump(2) << "\n";
}

json complex_json(cplx v, bool as_complex) {
    if (!as_complex) return v.real();
    return {{"re", v.real()}, {"im", v.imag()}};
}

// ---- labels ----

struct LabelOpts {
    double x = 1.0, theta = 0.0;
    double J = 1.0, alpha = 0.0;
    double c = 4.0;
    std::optional<double> d;
    double re_z = 0.5, im_z = 0.0, a = 1.0, b = 1.0;
};

struct Common {
    std::string format = "table";
    std::string output;
    std::uint64_t seed = 20240601;
    double gamma = 2.5;
    std::optional<double> A;
    std::string family = "gk";
    std::string convention = "printed";
    long M = -1;
    long max_M = 2000;

    double effective_gamma() const { return A ? isocs::OscillatorParams::from_coupling(*A).gamma : gamma; }
};

const std::map<std::string, Family> family_map = {
    {"class1", Family::class1}, {"class2", Family::class2},         {"gk", Family::gk_isotonic},
    {"gk-shifted", Family::gk_shifted}, {"general", Family::general_spectrum}, {"mittag-leffler", Family::mittag_leffler}};

void add_label_options(CLI::App* sub, LabelOpts& o, const std::string& suffix) {
    const std::string s = suffix;
    sub->add_option("--x" + s, o.x, "point label x (class1, class2)")->capture_default_str();
    sub->add_option("--theta" + s, o.theta, "angle theta (class1, class2)")->capture_default_str();
    sub->add_option("--J" + s, o.J, "action J (gk, gk-shifted, general)")->capture_default_str();
    sub->add_option("--alpha" + s, o.alpha, "angle alpha (gk, gk-shifted, general)")->capture_default_str();
    sub->add_option("--re-z" + s, o.re_z, "Re z (mittag-leffler)")->capture_default_str();
    sub->add_option("--im-z" + s, o.im_z, "Im z (mittag-leffler)")->capture_default_str();
    if (suffix.empty()) {
        sub->add_option("--c", o.c, "spectrum slope c (general)")->capture_default_str();
        sub->add_option("--d", o.d, "spectrum offset d (general; default 2 gamma)");
        sub->add_option("--a", o.a, "Mittag-Leffler a")->capture_default_str();
        sub->add_option("--b", o.b, "Mittag-Leffler b")->capture_default_str();
    }
}

void add_family_options(CLI::App* sub, Common& c) {
    sub->add_option("--family", c.family, "class1 | class2 | gk | gk-shifted | general | mittag-leffler")
        ->check(CLI::IsMember({"class1", "class2", "gk", "gk-shifted", "general", "mittag-leffler"}))
        ->capture_default_str();
    sub->add_option("--convention", c.convention, "general-spectrum phase: printed | gazeau-klauder")
        ->check(CLI::IsMember({"printed", "gazeau-klauder"}))
        ->capture_default_str();
    sub->add_option("--M", c.M, "truncation order; negative picks it adaptively")->capture_default_str();
    sub->add_option("--max-M", c.max_M, "cap for the adaptive order")->capture_default_str();
}

isocs::CSLabel make_label(Family f, const LabelOpts& o, const LabelOpts& shared, const Common& c) {
    const double g = c.effective_gamma();
    switch (f) {
        case Family::class1:
        case Family::class2: return isocs::PointLabel{o.x, o.theta, g};
        case Family::gk_isotonic:
        case Family::gk_shifted: return isocs::ActionAngle{o.J, o.alpha, g};
        case Family::general_spectrum:
            return isocs::GeneralSpectrumLabel{
                o.J, o.alpha, shared.c, shared.d.value_or(2.0 * g),
                c.convention == "printed" ? isocs::PhaseConvention::printed : isocs::PhaseConvention::gazeau_klauder};
        case Family::mittag_leffler: return isocs::MittagLefflerLabel{cplx(o.re_z, o.im_z), shared.a, shared.b};
    }
    throw isocs::DomainError("unknown family");
}

json label_json(const isocs::CSLabel& l) {
    return std::visit(
        [](const auto& v) -> json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, isocs::PointLabel>) return {{"x", v.x}, {"theta", v.theta}, {"gamma", v.gamma}};
            else if constexpr (std::is_same_v<T, isocs::ActionAngle>)
                return {{"J", v.J}, {"alpha", v.alpha}, {"gamma", v.gamma}};
            else if constexpr (std::is_same_v<T, isocs::GeneralSpectrumLabel>)
                return {{"J", v.J}, {"alpha", v.alpha}, {"c", v.c}, {"d", v.d},
                        {"convention", v.convention == isocs::PhaseConvention::printed ? "printed" : "gazeau-klauder"}};
            else return {{"re_z", v.z.real()}, {"im_z", v.z.imag()}, {"a", v.a}, {"b", v.b}};
        },
        l);
}

isocs::Truncation truncation(const Common& c) {
    isocs::Truncation t;
    t.M = c.M;
    t.max_M = c.max_M;
    return t;
}

void state_results(Table& t, const isocs::TruncatedState& s) {
    t.results["M"] = s.M;
    t.results["norm_series"] = s.norm_series;
    if (s.norm_closed) t.results["norm_closed"] = *s.norm_closed;
    if (s.family == Family::class2) t.results["positivity_ok"] = s.positivity_ok;
    t.results["converged"] = s.converged;
}

// ---- verify ----

Table verify_table(const std::vector<isocs::VerificationReport>& rs) {
    Table t;
    t.columns = {"check_id", "pass", "observed", "expected", "abs_err", "rel_err", "tolerance", "notes"};
    t.records = json::array();
    for (const auto& r : rs) {
        auto cx = [&](cplx v) -> std::string {
            if (!r.complex_valued) return num17(v.real());
            return num17(v.real()) + (v.imag() < 0 ? "-" : "+") + num17(std::abs(v.imag())) + "i";
        };
        t.rows.push_back({r.check_id, r.pass, cx(r.observed), cx(r.expected), r.abs_err, r.rel_err, r.tolerance, r.notes});
        json params = json::object();
        for (const auto& [k, v] : r.parameters) params[k] = std::visit([](const auto& x) { return json(x); }, v);
        t.records.push_back({{"check_id", r.check_id},
                             {"parameters", params},
                             {"observed", complex_json(r.observed, r.complex_valued)},
                             {"expected", complex_json(r.expected, r.complex_valued)},
                             {"abs_err", r.abs_err},
                             {"rel_err", r.rel_err},
                             {"tolerance", r.tolerance},
                             {"pass", r.pass},
                             {"expect_failure", r.expect_failure},
                             {"notes", r.notes}});
    }
    t.summary = isocs::summarize(rs);
    return t;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Coherent states over the isotonic oscillator eigenbasis: evaluation and identity checks", "isocs"};
    app.set_version_flag("--version", std::string(isocs::version));
    app.require_subcommand(1);
    app.fallthrough();

    Common c;
    app.add_option("--format", c.format, "table | csv | json")
        ->check(CLI::IsMember({"table", "csv", "json"}))
        ->capture_default_str();
    app.add_option("--output,-o", c.output, "write to this file instead of stdout");
    app.add_option("--seed", c.seed, "seed for sampled label grids")->capture_default_str();
    auto* gamma_opt = app.add_option("--gamma", c.gamma, "gamma = 1 + sqrt(1+4A)/2")->capture_default_str();
    app.add_option("--A", c.A, "coupling A >= 0 (overrides --gamma)")->excludes(gamma_opt);

    // eval-psi
    long m_index = 0;
    std::vector<double> xs;
    auto* eval_psi = app.add_subcommand("eval-psi", "normalized eigenfunction psi_m(x); columns m,x,psi");
    eval_psi->add_option("--m", m_index, "basis index")->capture_default_str();
    eval_psi->add_option("--x", xs, "one or more points x > 0")->required();

    // eigenvalues
    long m_max = 5;
    auto* eigen = app.add_subcommand("eigenvalues", "e_m = 2(2m + gamma); columns m,e_m");
    eigen->add_option("--m-max", m_max, "largest index")->capture_default_str();

    // gram
    long gram_M = 10;
    std::optional<int> rule_order;
    auto* gram = app.add_subcommand("gram", "Gram matrix of psi_0..psi_M; columns m,n,value");
    gram->add_option("--M", gram_M, "largest index")->capture_default_str();
    gram->add_option("--rule-order", rule_order, "Gauss-Laguerre order (default M+2)");

    LabelOpts l1, l2;
    double t_evolve = 0.0;
    std::string energy_arg = "x2";

    auto* build = app.add_subcommand("cs-build", "truncated coherent state; columns m,re,im,probability");
    auto* prob = app.add_subcommand("cs-prob", "probabilities |c_m|^2; columns m,probability");
    auto* ovl = app.add_subcommand("cs-overlap", "<label2|label1>; columns re,im,abs");
    auto* evo = app.add_subcommand("cs-evolve", "e^{-iHt} on a state; columns m,re,im");
    auto* energy = app.add_subcommand("cs-energy", "<H> in a state; class2 uses the closed-form comparison");
    auto* kern = app.add_subcommand("kernel", "reproducing kernel sum_m conj(u_m(l1)) u_m(l2); columns re,im,abs");
    for (auto* s : {build, prob, ovl, evo, energy, kern}) {
        add_family_options(s, c);
        add_label_options(s, l1, "");
    }
    for (auto* s : {ovl, kern}) add_label_options(s, l2, "2");
    std::optional<long> prob_m_max;
    prob->add_option("--m-max", prob_m_max, "list probabilities up to this index (default: truncation order)");
    evo->add_option("--t", t_evolve, "time")->capture_default_str();
    energy->add_option("--argument", energy_arg, "class2 hypergeometric argument: x | x2")
        ->check(CLI::IsMember({"x", "x2"}))
        ->capture_default_str();

    std::vector<std::string> selection;
    auto* verify = app.add_subcommand("verify", "identity checks; exit 0 iff every selected check passes");
    std::vector<std::string> groups = {"all"};
    for (const auto& [g, name] : isocs::check_groups()) groups.push_back(name);
    verify->add_option("selection", selection, "all | orthonormality | resolution | normalization | buchholz | temporal | action | discrepancies")
        ->check(CLI::IsMember(groups));
    bool serial = false;
    verify->add_flag("--serial", serial, "run the groups one after another");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }

    json config;
    Table table;
    int status = exit_ok;
    try {
        const double g = c.effective_gamma();
        const auto* sub = app.get_subcommands().front();
        config["command"] = sub->get_name();
        config["gamma"] = g;
        if (c.A) config["A"] = *c.A;
        config["seed"] = c.seed;
        config["format"] = c.format;

        if (sub == eval_psi) {
            const auto p = isocs::OscillatorParams::from_gamma(g);
            config["m"] = m_index;
            table.columns = {"m", "x", "psi"};
            for (double x : xs) table.rows.push_back({m_index, x, isocs::wavefunction(m_index, p, x)});
        } else if (sub == eigen) {
            const auto p = isocs::OscillatorParams::from_gamma(g);
            isocs::detail::require(m_max >= 0, "m-max >= 0");
            config["m_max"] = m_max;
            table.columns = {"m", "e_m"};
            for (long m = 0; m <= m_max; ++m) table.rows.push_back({m, isocs::eigenvalue(m, p)});
        } else if (sub == gram) {
            const auto p = isocs::OscillatorParams::from_gamma(g);
            config["M"] = gram_M;
            const auto rule = isocs::gauss_gen_laguerre(rule_order.value_or(static_cast<int>(gram_M) + 2), g - 1.0);
            config["rule_order"] = rule.order();
            const auto G = isocs::gram_matrix(p, gram_M, rule);
            table.columns = {"m", "n", "value"};
            for (std::size_t i = 0; i < G.rows(); ++i)
                for (std::size_t j = 0; j < G.cols(); ++j)
                    table.rows.push_back({static_cast<long>(i), static_cast<long>(j), G(i, j)});
            table.results["max_abs_deviation_from_identity"] = G.max_abs_deviation_from_identity();
        } else if (sub == verify) {
            isocs::VerifyConfig vc;
            vc.gamma = g;
            vc.seed = c.seed;
            vc.parallel = !serial;
            std::vector<isocs::CheckGroup> chosen;
            if (selection.empty() || std::find(selection.begin(), selection.end(), "all") != selection.end()) {
                for (const auto& [grp, name] : isocs::check_groups()) chosen.push_back(grp);
                config["selection"] = {"all"};
            } else {
                for (const auto& [grp, name] : isocs::check_groups())
                    if (std::find(selection.begin(), selection.end(), name) != selection.end()) chosen.push_back(grp);
                config["selection"] = selection;
            }
            table = verify_table(isocs::run_checks(chosen, vc));
            if (table.summary->failed > 0) status = exit_check_failed;
        } else {
            const Family f = family_map.at(c.family);
            const auto lab = make_label(f, l1, l1, c);
            config["family"] = c.family;
            config["label"] = label_json(lab);
            config["M"] = c.M;
            config["max_M"] = c.max_M;

            if (sub == build || sub == prob) {
                const auto s = isocs::build_state(f, lab, truncation(c));
                state_results(table, s);
                if (sub == build) {
                    table.columns = {"m", "re", "im", "probability"};
                    for (long m = 0; m <= s.M; ++m) {
                        const cplx v = s.coeffs[static_cast<std::size_t>(m)];
                        table.rows.push_back({m, v.real(), v.imag(), isocs::probability(s, m)});
                    }
                } else {
                    table.columns = {"m", "probability"};
                    for (long m = 0; m <= prob_m_max.value_or(s.M); ++m) table.rows.push_back({m, isocs::probability(s, m)});
                }
            } else if (sub == ovl || sub == kern) {
                const auto lab2 = make_label(f, l2, l1, c);
                config["label2"] = label_json(lab2);
                cplx v;
                if (sub == ovl) {
                    const auto a = isocs::build_state(f, lab, truncation(c));
                    auto tr = truncation(c);
                    tr.M = c.M >= 0 ? c.M : std::max(a.M, isocs::build_state(f, lab2, truncation(c)).M);
                    const auto a2 = isocs::build_state(f, lab, tr);
                    const auto b2 = isocs::build_state(f, lab2, tr);
                    v = isocs::overlap(b2, a2);
                    table.results["M"] = tr.M;
                    if (f == Family::gk_isotonic) {
                        const auto& p1 = std::get<isocs::ActionAngle>(lab);
                        const auto& p2 = std::get<isocs::ActionAngle>(lab2);
                        const auto o = isocs::gk_overlap(p2.J, p2.alpha, p1.J, p1.alpha, g);
                        table.results["closed_re"] = o.closed.real();
                        table.results["closed_im"] = o.closed.imag();
                        table.results["closed_literal_re"] = o.closed_literal.real();
                        table.results["closed_literal_im"] = o.closed_literal.imag();
                    }
                } else {
                    const long kM = c.M >= 0 ? c.M : 40;  // kernel default order
                    table.results["M"] = kM;
                    v = isocs::reproducing_kernel(f, lab, lab2, kM);
                }
                table.columns = {"re", "im", "abs"};
                table.rows.push_back({v.real(), v.imag(), std::abs(v)});
            } else if (sub == evo) {
                config["t"] = t_evolve;
                const auto s = isocs::build_state(f, lab, truncation(c));
                const auto e = isocs::evolve(s, t_evolve);
                state_results(table, e);
                if (f == Family::gk_isotonic || f == Family::gk_shifted || f == Family::general_spectrum) {
                    auto tr = truncation(c);
                    tr.M = s.M;
                    const auto r = isocs::build_state(f, isocs::time_shifted_label(f, lab, t_evolve), tr);
                    table.results["distance_to_relabeled"] = isocs::distance(e, r);
                }
                table.columns = {"m", "re", "im"};
                for (long m = 0; m <= e.M; ++m) {
                    const cplx v = e.coeffs[static_cast<std::size_t>(m)];
                    table.rows.push_back({m, v.real(), v.imag()});
                }
            } else if (sub == energy) {
                if (f == Family::class2) {
                    config["argument"] = energy_arg;
                    const auto e = isocs::class2_energy(l1.x, g, energy_arg == "x" ? isocs::EnergyArgument::x
                                                                                  : isocs::EnergyArgument::x_squared);
                    table.columns = {"x", "y", "series", "raw", "closed", "closed_printed", "terms"};
                    table.rows.push_back({l1.x, e.y, e.series, e.raw, e.closed, e.closed_printed, e.terms});
                } else {
                    const auto s = isocs::build_state(f, lab, truncation(c));
                    state_results(table, s);
                    table.columns = {"energy"};
                    table.rows.push_back({isocs::expected_energy(s)});
                }
            }
        }
    } catch (const isocs::DomainError& e) {
        std::cerr << "isocs: domain error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "isocs: invalid argument: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "isocs: " << e.what() << "\n";
        return exit_check_failed;
    }

    std::ofstream file;
    if (!c.output.empty()) {
        file.open(c.output, std::ios::binary);
        if (!file) {
            std::cerr << "isocs: cannot open " << c.output << "\n";
            return exit_usage;
        }
    }
    std::ostream& os = c.output.empty() ? std::cout : file;
    if (c.format == "json") write_json(os, table, config);
    else if (c.format == "csv") write_csv(os, table);
    else write_table(os, table);
    return status;
}
