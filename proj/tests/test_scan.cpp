#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "wls/errors.hpp"
#include "wls/scan.hpp"

using namespace wls;

namespace {

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> f;
        std::string cur;
        for (char ch : line) {
            if (ch == ',') {
                f.push_back(cur);
                cur.clear();
            } else {
                cur += ch;
            }
        }
        f.push_back(cur);
        rows.push_back(f);
    }
    return rows;
}

ScanSpec grid(int d, double bmin, double bmax, int bs, double gmin, double gmax, int gs) {
    ScanSpec s;
    s.d = d;
    s.beta = {bmin, bmax, bs};
    s.gamma = {gmin, gmax, gs};
    return s;
}

}  // namespace

TEST_CASE("column set and header") {
    const auto& c = scan_columns();
    REQUIRE(c.size() == 13);
    CHECK(c.front() == "d");
    CHECK(c.back() == "lambda1");
    const auto rows = parse_csv(format_csv({}));
    REQUIRE(rows.size() == 1);
    CHECK(rows[0] == c);
}

TEST_CASE("reference row at (3, -1, -1)") {
    const ScanRow r = scan_point({3, -1.0, -1.0});
    CHECK(r.admissible);
    CHECK(r.region == Region::SymmetryBreaking);
    CHECK(r.lambda1 == doctest::Approx(std::sqrt(3.0) - 2.0).epsilon(1e-13));
    CHECK(r.c_star == doctest::Approx(-(2.0 + std::log(8.0 * M_PI))).epsilon(1e-13));
    const auto rows = parse_csv(format_csv({r}));
    REQUIRE(rows.size() == 2);
    CHECK(rows[1][4] == "SymmetryBreaking");
    CHECK(std::strtod(rows[1][12].c_str(), nullptr) == r.lambda1);
}

TEST_CASE("inadmissible rows have empty derived columns") {
    const ScanRow r = scan_point({3, 5.0, -1.0});
    CHECK_FALSE(r.admissible);
    const auto rows = parse_csv(format_csv({r}));
    REQUIRE(rows[1].size() == 13);
    CHECK(rows[1][3] == "false");
    CHECK(rows[1][4] == "Inadmissible");
    for (std::size_t i = 5; i < 13; ++i) CHECK(rows[1][i].empty());
}

TEST_CASE("3x3 grid has 9 rows, gamma outer and beta inner") {
    const ScanSpec s = grid(3, -3.0, -1.0, 3, -2.0, 0.0, 3);
    const auto rows = scan_serial(s);
    REQUIRE(rows.size() == 9);
    for (int g = 0; g < 3; ++g)
        for (int b = 0; b < 3; ++b) {
            CHECK(rows[3 * g + b].params.gamma == -2.0 + g);
            CHECK(rows[3 * g + b].params.beta == -3.0 + b);
        }
    CHECK(parse_csv(format_csv(rows)).size() == 10);
}

TEST_CASE("serial and parallel scans are byte-identical") {
    const ScanSpec s = grid(3, -6.0, 1.0, 37, -6.0, 2.9, 41);
    const std::string a = format_csv(scan_serial(s));
    const std::string b = format_csv(scan_parallel(s));
    CHECK(a == b);
    CHECK(a == format_csv(scan_parallel(s)));
    CHECK(format_json(scan_serial(s), s) == format_json(scan_parallel(s), s));
}

TEST_CASE("selected columns") {
    ScanSpec s = grid(2, -2.0, -1.0, 2, -1.0, 0.0, 2);
    s.outputs = {"beta", "region", "lambda1"};
    const auto rows = parse_csv(format_csv(scan_serial(s), s.outputs));
    REQUIRE(rows.size() == 5);
    CHECK(rows[0] == s.outputs);
    for (const auto& r : rows) CHECK(r.size() == 3);
}

TEST_CASE("json mirrors the csv") {
    ScanSpec s = grid(3, -3.0, 0.5, 4, -2.0, 0.0, 2);
    const auto rows = scan_serial(s);
    const auto doc = nlohmann::json::parse(format_json(rows, s));
    CHECK(doc["meta"]["tool"] == "wls");
    CHECK(doc["meta"]["beta"]["steps"] == 4);
    REQUIRE(doc["rows"].size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& o = doc["rows"][i];
        CHECK(o["beta"].get<double>() == rows[i].params.beta);
        CHECK(o["admissible"].get<bool>() == rows[i].admissible);
        if (rows[i].admissible)
            CHECK(o["c_star"].get<double>() == rows[i].c_star);
        else
            CHECK(o["c_star"].is_null());
    }
}

TEST_CASE("number formatting round-trips") {
    for (double v : {M_PI, -1.8284271247461903, 1e-300, 6.02214076e23, 0.1})
        CHECK(std::strtod(format_number(v).c_str(), nullptr) == v);
}

TEST_CASE("validation") {
    CHECK_THROWS_AS(scan_serial(grid(3, 0.0, 1.0, 1, 0.0, 1.0, 2)), DomainError);
    CHECK_THROWS_AS(scan_serial(grid(3, 0.0, INFINITY, 2, 0.0, 1.0, 2)), DomainError);
    ScanSpec s = grid(3, 0.0, 1.0, 2, 0.0, 1.0, 2);
    s.outputs = {"beta", "nope"};
    CHECK_THROWS_AS(validate(s), DomainError);
}
