#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "eepq/cli.hpp"

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = eepq::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> split_rows(const std::string& text, char sep) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        if (sep == ',') {
            std::istringstream ls(line);
            std::string cell;
            while (std::getline(ls, cell, ',')) cells.push_back(cell);
        } else {
            std::istringstream ls(line);
            std::string cell;
            while (ls >> cell) cells.push_back(cell);
        }
        rows.push_back(cells);
    }
    return rows;
}

std::map<std::string, double> parse_summary(const std::string& text) {
    std::map<std::string, double> out;
    const auto pos = text.find("summary:");
    REQUIRE(pos != std::string::npos);
    std::istringstream is(text.substr(pos + 8));
    std::string kv;
    while (is >> kv) {
        const auto eq = kv.find('=');
        out[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
    }
    return out;
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("eepq_test_" + name)).string();
}

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("usage and exit codes") {
    CHECK(run({}).code == eepq::cli::kUsage);
    CHECK(run({"nonsense"}).code == eepq::cli::kUsage);
    CHECK(run({"airy", "--bogus", "1"}).code == eepq::cli::kUsage);
    CHECK(run({"airy"}).code == eepq::cli::kUsage);
    CHECK(run({"airy", "--eval", "1", "--zeros", "2"}).code == eepq::cli::kUsage);
    CHECK(run({"airy", "--eval", "abc"}).code == eepq::cli::kUsage);
    CHECK(run({"bouncer", "--levels", "51"}).code == eepq::cli::kUsage);
    CHECK(run({"bouncer", "--mass", "-1"}).code == eepq::cli::kUsage);
    CHECK(run({"cow", "--lambda", "0"}).code == eepq::cli::kUsage);
    CHECK(run({"evolve"}).code == eepq::cli::kUsage);
    CHECK(run({"evolve", "--demo", "other"}).code == eepq::cli::kUsage);

    const auto help = run({"--help"});
    CHECK(help.code == eepq::cli::kOk);
    CHECK(help.out.find("evolve") != std::string::npos);
    CHECK(run({"bouncer", "--help"}).code == eepq::cli::kOk);

    // the packet falls out of the domain long before t = 10
    const auto contact = run({"evolve", "--demo", "bouncer-moments", "--dt", "1e-2", "--duration", "10"});
    CHECK(contact.code == eepq::cli::kNumericFailure);
    CHECK(contact.err.find("boundary") != std::string::npos);
}

TEST_CASE("airy command") {
    const auto zeros = run({"airy", "--zeros", "6"});
    REQUIRE(zeros.code == 0);
    const auto rows = split_rows(zeros.out, ' ');
    REQUIRE(rows.size() == 7);
    CHECK(rows[1][2] == "2.33810741");
    CHECK(rows[6][1] == "-9.02265085");

    const auto at0 = run({"airy", "--eval", "0"});
    REQUIRE(at0.code == 0);
    CHECK(split_rows(at0.out, ' ')[1][1] == "0.35502805");

    const auto bad = run({"airy", "--zeros", "0"});
    CHECK(bad.code == eepq::cli::kUsage);
    CHECK_FALSE(bad.err.empty());

    const auto csv = run({"airy", "--zeros", "3", "--format", "csv"});
    const auto c = split_rows(csv.out, ',');
    REQUIRE(c.size() == 4);
    CHECK(c[0][0] == "n");
    CHECK(std::stod(c[1][1]) == doctest::Approx(-2.338107410459767).epsilon(1e-14));
}

TEST_CASE("bouncer command") {
    const auto ten = run({"bouncer", "--levels", "10"});
    REQUIRE(ten.code == 0);
    const auto rows = split_rows(ten.out, ' ');
    REQUIRE(rows.size() == 11);
    CHECK(rows[0][3] == "p_outside[%]");
    const double reference_table[] = {13.62, 10.39, 8.95, 8.07, 7.46, 7.01, 6.64, 6.34, 6.09, 5.88};
    for (int n = 1; n <= 10; ++n) {
        CHECK(rows[n][3].size() == rows[n][3].find('.') + 3);
        CHECK(std::fabs(std::stod(rows[n][3]) - reference_table[n - 1]) <= 0.05);
    }
    // 7.0046 % rounds to 7.00
    CHECK(rows[6][3] == "7.00");
    CHECK(rows[1][3] == "13.62");
    CHECK(rows[10][3] == "5.88");

    const auto three = split_rows(run({"bouncer", "--levels", "3"}).out, ' ');
    CHECK(three[1][1] == "2.3381");
    CHECK(three[2][1] == "4.0879");
    CHECK(three[3][1] == "5.5206");
    CHECK(three[1][2] == "2.3381"); // energy scale is 1 for the defaults

    const auto si = split_rows(run({"bouncer", "--levels", "1", "--si-neutron"}).out, ' ');
    CHECK(si[0][4] == "energy_peV");
    CHECK(std::stod(si[1][4]) == doctest::Approx(1.41).epsilon(0.01));

    // stored values are fractions
    const auto csv = split_rows(run({"bouncer", "--levels", "1", "--format", "csv"}).out, ',');
    CHECK(std::stod(csv[1][3]) == doctest::Approx(0.136237).epsilon(1e-5));
}

TEST_CASE("cow command") {
    const auto unit = split_rows(run({"cow", "--format", "csv"}).out, ',');
    CHECK(std::stod(unit[1][0]) == doctest::Approx(1.0).epsilon(1e-15));

    const auto both = run({"cow", "--lambda", "3.1", "--height", "0.7", "--length", "2.2", "--a", "1.9", "--via-eq34",
                           "--format", "csv"});
    REQUIRE(both.code == 0);
    const auto rows = split_rows(both.out, ',');
    CHECK(rows[0][2] == "phase_transit_rad");
    const double a = std::stod(rows[1][0]), b = std::stod(rows[1][2]);
    CHECK(std::fabs(a - b) <= 1e-12 * a);
    CHECK(std::stod(rows[1][1]) == doctest::Approx(a / (2 * 3.141592653589793)).epsilon(1e-15));

    const auto si = split_rows(run({"cow", "--si", "--lambda", "1.419e-10", "--height", "0.02", "--length", "0.05",
                                    "--format", "csv"})
                                   .out,
                               ',');
    CHECK(std::stod(si[1][0]) == doctest::Approx(55.86797193824025).epsilon(1e-12));
}

TEST_CASE("redshift command") {
    const auto zero = split_rows(run({"redshift", "--z", "0", "--format", "csv"}).out, ',');
    CHECK(std::stod(zero[1][1]) == 0.0);
    CHECK(std::stod(zero[1][2]) == 0.0);

    const auto si = split_rows(run({"redshift", "--z", "22.5", "--si", "--format", "csv"}).out, ',');
    const double c = 299792458.0;
    CHECK(std::stod(si[1][2]) == doctest::Approx(9.80665 * 22.5 / (c * c)).epsilon(1e-14));

    const auto nat = split_rows(
        run({"redshift", "--z", "1.5", "--mass", "2", "--a", "0.3", "--hbar", "0.5", "--format", "csv"}).out, ',');
    CHECK(std::stod(nat[1][1]) == doctest::Approx(2 * 0.3 * 1.5 / 0.5).epsilon(1e-15));

    CHECK(run({"redshift"}).code == eepq::cli::kUsage);
}

TEST_CASE("evolve: frame-equivalence CSV round trip") {
    const std::string path = temp_path("frame.csv");
    const auto r = run({"evolve", "--demo", "frame-equivalence", "--out", path});
    REQUIRE(r.code == 0);
    const auto summary = parse_summary(r.out);
    CHECK(summary.at("max_mismatch") <= 1e-6);

    const auto rows = split_rows(slurp(path), ',');
    REQUIRE(rows.size() == 4097);
    CHECK(rows[0].back() == "abs_diff");
    double worst = 0.0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double re = std::stod(rows[i][1]) - std::stod(rows[i][3]);
        const double im = std::stod(rows[i][2]) - std::stod(rows[i][4]);
        CHECK(std::stod(rows[i][5]) == std::hypot(re, im));
        worst = std::max(worst, std::stod(rows[i][5]));
    }
    CHECK(worst == summary.at("max_mismatch"));
    std::remove(path.c_str());
}

TEST_CASE("evolve: free-dispersion to stdout and JSON") {
    const auto r = run({"evolve", "--demo", "free-dispersion", "--format", "csv"});
    REQUIRE(r.code == 0);
    const auto summary = parse_summary(r.err);
    CHECK(summary.at("max_rel_err") <= 1e-4);
    const auto rows = split_rows(r.out, ',');
    double worst = 0.0;
    for (std::size_t i = 1; i < rows.size(); ++i) worst = std::max(worst, std::stod(rows[i][3]));
    CHECK(worst == summary.at("max_rel_err"));

    const auto missing = run({"evolve", "--demo", "free-dispersion", "--format", "json"});
    CHECK(missing.code == eepq::cli::kUsage);

    const std::string path = temp_path("free.json");
    const auto j = run({"evolve", "--demo", "free-dispersion", "--format", "json", "--out", path, "--duration", "0.5"});
    REQUIRE(j.code == 0);
    const auto doc = nlohmann::json::parse(slurp(path));
    CHECK(doc["meta"]["command"] == "evolve");
    CHECK(doc["meta"]["units"] == "natural");
    CHECK(doc["meta"]["parameters"]["n_steps"] == 5000);
    CHECK(doc["data"].size() == 101);
    double jworst = 0.0;
    for (const auto& row : doc["data"]) jworst = std::max(jworst, row["rel_err"].get<double>());
    CHECK(jworst == doc["meta"]["summary"]["max_rel_err"].get<double>());
    CHECK(parse_summary(j.out).at("max_rel_err") == jworst);
    std::remove(path.c_str());
}

TEST_CASE("evolve: bouncer-moments") {
    const std::string path = temp_path("moments.csv");
    const auto r = run({"evolve", "--demo", "bouncer-moments", "--out", path});
    REQUIRE(r.code == 0);
    const auto s = parse_summary(r.out);
    CHECK(s.at("all_passed") == 1.0);
    CHECK(s.at("momentum_slope") <= 1e-6);
    const auto rows = split_rows(slurp(path), ',');
    CHECK(rows[0][2] == "mean_p");
    CHECK(std::stod(rows.back()[0]) == 1.0);
    CHECK(std::stod(rows.back()[2]) == doctest::Approx(-1.0).epsilon(1e-6));
    std::remove(path.c_str());
}
