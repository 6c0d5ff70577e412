#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "isocs/isotonic.hpp"

#ifndef ISOCS_CLI_PATH
#error "ISOCS_CLI_PATH must point at the built isocs binary"
#endif

namespace {

struct Run {
    int status = -1;
    std::string out;
};

Run run(const std::string& args, bool merge_stderr = false) {
    const std::string cmd = std::string(ISOCS_CLI_PATH) + " " + args + (merge_stderr ? " 2>&1" : " 2>/dev/null");
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    if (p == nullptr) return r;
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = std::fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
    const int st = pclose(p);
    r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        std::vector<std::string> cells;
        std::string cur;
        bool quoted = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            const char ch = line[i];
            if (quoted) {
                if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') cur += '"', ++i;
                else if (ch == '"') quoted = false;
                else cur += ch;
            } else if (ch == '"') {
                quoted = true;
            } else if (ch == ',') {
                cells.push_back(cur);
                cur.clear();
            } else {
                cur += ch;
            }
        }
        cells.push_back(cur);
        rows.push_back(cells);
    }
    return rows;
}

TEST(Cli, EigenvaluesTable) {
    const auto r = run("eigenvalues --gamma 2.5 --m-max 2 --format csv");
    ASSERT_EQ(r.status, 0);
    const auto rows = parse_csv(r.out);
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"m", "e_m"}));
    EXPECT_EQ(rows[1][1], "5");
    EXPECT_EQ(rows[2][1], "9");
    EXPECT_EQ(rows[3][1], "13");
}

TEST(Cli, CsvUsesLfAndNoCarriageReturn) {
    const auto r = run("eigenvalues --m-max 3 --format csv");
    EXPECT_EQ(r.out.find('\r'), std::string::npos);
    EXPECT_EQ(r.out.back(), '\n');
}

TEST(Cli, ProbabilityAtTheOrigin) {
    const auto r = run("cs-prob --family gk --gamma 3 --J 0 --alpha 0 --m-max 4 --format csv");
    ASSERT_EQ(r.status, 0);
    const auto rows = parse_csv(r.out);
    ASSERT_EQ(rows.size(), 6u);
    EXPECT_EQ(std::stod(rows[1][1]), 1.0);
    for (std::size_t i = 2; i < rows.size(); ++i) EXPECT_EQ(std::stod(rows[i][1]), 0.0);
}

TEST(Cli, CsvValuesRoundTrip) {
    const auto r = run("eval-psi --gamma 3.3 --m 4 --x 0.1 0.7 1.9 3.5 --format csv");
    ASSERT_EQ(r.status, 0);
    const auto rows = parse_csv(r.out);
    ASSERT_EQ(rows.size(), 5u);
    const auto p = isocs::OscillatorParams::from_gamma(3.3);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double x = std::strtod(rows[i][1].c_str(), nullptr);
        EXPECT_EQ(std::strtod(rows[i][2].c_str(), nullptr), isocs::wavefunction(4, p, x)) << rows[i][1];
    }
}

TEST(Cli, DomainErrorNamesPrecondition) {
    const auto r = run("cs-build --family class1 --gamma 2 --x 1", true);
    EXPECT_EQ(r.status, 2);
    EXPECT_NE(r.out.find("gamma > 2"), std::string::npos) << r.out;
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(run("eigenvalues --no-such-flag").status, 2);
    EXPECT_EQ(run("").status, 2);
    EXPECT_EQ(run("verify nonsense").status, 2);
    EXPECT_EQ(run("eigenvalues --format xml").status, 2);
    EXPECT_EQ(run("cs-energy --family mittag-leffler").status, 2);
    EXPECT_EQ(run("gram --M 10 --rule-order 5").status, 2);
}

TEST(Cli, HelpExitsZero) {
    const auto r = run("--help");
    EXPECT_EQ(r.status, 0);
    EXPECT_NE(r.out.find("verify"), std::string::npos);
}

TEST(Cli, VerifyAllJsonSchema) {
    const auto r = run("verify all --gamma 2.5 --format json");
    ASSERT_EQ(r.status, 0);
    const auto doc = nlohmann::json::parse(r.out);
    for (const char* k : {"version", "config", "records", "summary"}) EXPECT_TRUE(doc.contains(k)) << k;
    EXPECT_EQ(doc["summary"]["failed"], 0);
    EXPECT_EQ(doc["summary"]["total"], doc["records"].size());
    for (const auto& rec : doc["records"]) {
        for (const char* k : {"check_id", "parameters", "observed", "expected", "abs_err", "rel_err", "tolerance", "pass", "notes"})
            ASSERT_TRUE(rec.contains(k)) << k;
        EXPECT_TRUE(rec["pass"].get<bool>()) << rec["check_id"];
    }
}

TEST(Cli, VerifyDiscrepanciesAssertDocumentedFailures) {
    const auto r = run("verify discrepancies --format json");
    ASSERT_EQ(r.status, 0);
    const auto doc = nlohmann::json::parse(r.out);
    int literal = 0;
    for (const auto& rec : doc["records"]) {
        if (rec["expect_failure"].get<bool>()) {
            ++literal;
            EXPECT_GT(rec["rel_err"].get<double>(), rec["tolerance"].get<double>());
        }
    }
    EXPECT_GE(literal, 5);
}

TEST(Cli, SeedFixesSampledGrid) {
    const auto a = run("verify temporal --seed 11 --format json");
    const auto b = run("verify temporal --seed 11 --format json --serial");
    const auto c = run("verify temporal --seed 12 --format json");
    ASSERT_EQ(a.status, 0);
    auto strip = [](std::string s) {
        auto doc = nlohmann::json::parse(s);
        return doc["records"].dump();
    };
    EXPECT_EQ(strip(a.out), strip(b.out));
    EXPECT_NE(strip(a.out), strip(c.out));
}

TEST(Cli, OutputFile) {
    const auto path = std::filesystem::temp_directory_path() / "isocs_cli_test_output.csv";
    std::filesystem::remove(path);
    const auto r = run("eigenvalues --m-max 1 --format csv --output " + path.string());
    ASSERT_EQ(r.status, 0);
    EXPECT_TRUE(r.out.empty());
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    EXPECT_EQ(ss.str(), "m,e_m\n0,5\n1,9\n");
    std::filesystem::remove(path);
}

TEST(Cli, CouplingOption) {
    // A = 3/4 gives gamma = 2
    const auto r = run("eigenvalues --A 0.75 --m-max 0 --format csv");
    ASSERT_EQ(r.status, 0);
    EXPECT_EQ(parse_csv(r.out)[1][1], "4");
}

TEST(Cli, GkOverlapAgreesWithClosedForm) {
    const auto r = run("cs-overlap --family gk --gamma 3 --J 2 --alpha 0.5 --J2 3 --format json");
    ASSERT_EQ(r.status, 0);
    const auto doc = nlohmann::json::parse(r.out);
    EXPECT_NEAR(doc["records"][0]["re"].get<double>(), doc["results"]["closed_re"].get<double>(), 1e-12);
    EXPECT_NEAR(doc["records"][0]["im"].get<double>(), doc["results"]["closed_im"].get<double>(), 1e-12);
}

TEST(Cli, EvolveReportsRelabelDistance) {
    const auto r = run("cs-evolve --family gk --gamma 2.5 --J 3 --t 7 --format json");
    ASSERT_EQ(r.status, 0);
    EXPECT_LE(nlohmann::json::parse(r.out)["results"]["distance_to_relabeled"].get<double>(), 1e-13);
}

TEST(Cli, Class2EnergyClosedForm) {
    const auto r = run("cs-energy --family class2 --gamma 4 --x 1 --format json");
    ASSERT_EQ(r.status, 0);
    const auto rec = nlohmann::json::parse(r.out)["records"][0];
    EXPECT_EQ(rec["closed_printed"].get<double>(), 16.0);
    EXPECT_NEAR(rec["series"].get<double>(), 16.0, 16.0 * 1e-8);
}

}  // namespace
