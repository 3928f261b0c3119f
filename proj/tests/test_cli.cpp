#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "wls/cli.hpp"
#include "wls/errors.hpp"

using namespace wls::cli;

namespace {

struct Run {
    int code = 0;
    std::string out, err;
};

Run call(std::initializer_list<const char*> args) {
    std::vector<const char*> argv{"wls"};
    argv.insert(argv.end(), args.begin(), args.end());
    std::ostringstream out, err;
    Run r;
    r.code = run(static_cast<int>(argv.size()), argv.data(), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> v;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);) v.push_back(l);
    return v;
}

std::vector<std::string> fields(const std::string& line) {
    std::vector<std::string> f(1);
    for (char c : line) {
        if (c == ',')
            f.emplace_back();
        else
            f.back() += c;
    }
    return f;
}

}  // namespace

TEST_CASE("classify") {
    const Run r = call({"classify", "--d", "3", "--beta", "-1", "--gamma", "-1"});
    CHECK(r.code == exit_ok);
    const auto l = lines(r.out);
    REQUIRE(l.size() == 2);
    CHECK(l[0] == "d,beta,gamma,admissible,region");
    CHECK(l[1] == "3,-1,-1,true,SymmetryBreaking");
}

TEST_CASE("n, alpha input is converted") {
    const Run r = call({"constants", "--d", "3", "--n", "4", "--alpha", "1"});
    REQUIRE(r.code == exit_ok);
    const auto l = lines(r.out);
    const auto head = fields(l[0]), row = fields(l[1]);
    REQUIRE(head.size() == row.size());
    for (std::size_t i = 0; i < head.size(); ++i) {
        if (head[i] == "beta" || head[i] == "gamma") CHECK(std::stod(row[i]) == doctest::Approx(-1.0));
        if (head[i] == "c_star") CHECK(std::stod(row[i]) == doctest::Approx(-(2.0 + std::log(8.0 * M_PI))).epsilon(1e-14));
        if (head[i] == "lambda1") CHECK(std::stod(row[i]) == doctest::Approx(std::sqrt(3.0) - 2.0).epsilon(1e-14));
    }
}

TEST_CASE("scan grid order and row count") {
    const Run r = call({"scan", "--d", "3", "--beta-range", "-3", "-1", "3", "--gamma-range", "-2", "0", "3"});
    REQUIRE(r.code == exit_ok);
    const auto l = lines(r.out);
    REQUIRE(l.size() == 10);
    CHECK(fields(l[0]).size() == 13);
    CHECK(fields(l[1])[1] == "-3");
    CHECK(fields(l[1])[2] == "-2");
    CHECK(fields(l[2])[1] == "-2");
    CHECK(fields(l[4])[2] == "-1");
}

TEST_CASE("scan serial flag and parallel give identical bytes") {
    const Run a = call({"scan", "--d", "4", "--beta-range", "-5", "1", "17", "--gamma-range", "-4", "3", "13"});
    const Run b =
        call({"scan", "--d", "4", "--beta-range", "-5", "1", "17", "--gamma-range", "-4", "3", "13", "--serial"});
    CHECK(a.code == exit_ok);
    CHECK(a.out == b.out);
}

TEST_CASE("scan json has meta and rows") {
    const Run r = call({"scan", "--d", "2", "--beta-range", "-2", "-1", "2", "--gamma-range", "-1", "0", "2", "--format",
                        "json", "--columns", "beta,gamma,region"});
    REQUIRE(r.code == exit_ok);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["meta"]["d"] == 2);
    REQUIRE(doc["rows"].size() == 4);
    CHECK(doc["rows"][0].size() == 3);
}

TEST_CASE("--out writes a file") {
    const auto path = std::filesystem::temp_directory_path() / "wls_cli_test.csv";
    const std::string p = path.string();
    const Run r = call({"classify", "--d", "3", "--beta", "-2.5", "--gamma", "-1", "--out", p.c_str()});
    CHECK(r.code == exit_ok);
    CHECK(r.out.empty());
    std::ifstream f(path);
    std::stringstream ss;
    ss << f.rdbuf();
    CHECK(ss.str() == "d,beta,gamma,admissible,region\n3,-2.5,-1,true,Symmetry\n");
    std::filesystem::remove(path);

    const Run bad = call({"classify", "--d", "3", "--beta", "-1", "--gamma", "-1", "--out", "/nonexistent/dir/x.csv"});
    CHECK(bad.code == exit_failure);
    CHECK(bad.err.find("/nonexistent/dir/x.csv") != std::string::npos);
}

TEST_CASE("exit code 2 for invalid or inadmissible parameters") {
    CHECK(call({"constants", "--d", "3", "--beta", "5", "--gamma", "-1"}).code == exit_domain);
    CHECK(call({"classify", "--d", "3", "--beta", "1", "--gamma", "1", "--n", "4", "--alpha", "1"}).code == exit_domain);
    CHECK(call({"classify", "--d", "3", "--beta", "1"}).code == exit_domain);
    CHECK(call({"scan", "--beta-range", "0", "1", "1", "--gamma-range", "0", "1", "2"}).code == exit_domain);
    CHECK(call({"constants", "--d", "3", "--beta", "-1", "--gamma", "-1", "--format", "xml"}).code == exit_domain);
    CHECK(call({"nonsense"}).code == exit_domain);
    // inadmissible points are reported by classify, not rejected
    const Run r = call({"classify", "--d", "3", "--beta", "5", "--gamma", "-1"});
    CHECK(r.code == exit_ok);
    CHECK(lines(r.out)[1] == "3,5,-1,false,Inadmissible");
}

TEST_CASE("exit code 4 for non-convergence") {
    const Run r = call({"eigen", "--d", "3", "--beta", "-1", "--gamma", "-1", "--grid", "64", "--tol", "1e-14"});
    CHECK(r.code == exit_convergence);
    CHECK(r.err.find("no convergence") != std::string::npos);
}

TEST_CASE("exit code mapping") {
    CHECK(exit_code_for(wls::DomainError("x")) == exit_domain);
    CHECK(exit_code_for(wls::ConsistencyError("x")) == exit_consistency);
    CHECK(exit_code_for(wls::ConvergenceError("x")) == exit_convergence);
    CHECK(exit_code_for(wls::AccuracyError("x")) == exit_convergence);
    CHECK(exit_code_for(std::runtime_error("x")) == exit_failure);
}

TEST_CASE("help and version") {
    const Run h = call({"--help"});
    CHECK(h.code == exit_ok);
    for (const char* s : {"classify", "constants", "scan", "eigen", "deficit", "identity", "flow", "hyper", "ckn-limit",
                          "search"})
        CHECK(h.out.find(s) != std::string::npos);
    CHECK(call({"--version"}).code == exit_ok);
}

TEST_CASE("eigen, deficit, identity, ckn-limit and hyper run") {
    {
        const Run r = call({"eigen", "--d", "3", "--n", "4", "--alpha", "1", "--format", "json"});
        REQUIRE(r.code == exit_ok);
        const auto doc = nlohmann::json::parse(r.out);
        CHECK(doc["rows"][0]["lambda_numeric"].get<double>() == doctest::Approx(std::sqrt(3.0) - 2.0).epsilon(1e-6));
        CHECK(doc["rows"][0]["verdict"] == "unstable");
    }
    {
        const Run r = call({"deficit", "--d", "3", "--beta", "-1", "--gamma", "-1", "--eps", "0.1", "--radial-count",
                            "256", "--format", "json"});
        REQUIRE(r.code == exit_ok);
        CHECK(nlohmann::json::parse(r.out)["rows"][0]["deficit"].get<double>() < 0.0);
    }
    {
        const Run r = call({"identity", "--d", "3", "--beta", "-2.5", "--gamma", "-1", "--count", "3"});
        REQUIRE(r.code == exit_ok);
        const auto l = lines(r.out);
        CHECK(l.size() == 6);
        for (std::size_t i = 1; i < l.size(); ++i) CHECK(fields(l[i]).back() == "true");
    }
    {
        const Run r = call({"ckn-limit", "--d", "3", "--beta", "-2.5", "--gamma", "-1", "--format", "json"});
        REQUIRE(r.code == exit_ok);
        const auto doc = nlohmann::json::parse(r.out);
        CHECK(doc["rows"].size() == 11);
        CHECK(doc["meta"]["limit"].get<double>() == doctest::Approx(doc["rows"][0]["c_star"].get<double>()).epsilon(1e-4));
    }
    {
        const Run r = call({"hyper", "--d", "3", "--beta", "-2.5", "--gamma", "-1", "--grid", "512", "--format", "json"});
        REQUIRE(r.code == exit_ok);
        const auto doc = nlohmann::json::parse(r.out);
        CHECK(doc["meta"]["t_star_ok"] == true);
        CHECK(doc["meta"]["bound_ok"] == true);
    }
}

TEST_CASE("flow trace header") {
    const Run r = call({"flow", "--d", "3", "--n", "4", "--alpha", "1", "--variant", "ou", "--grid", "256", "--dt", "0.01",
                        "--t-end", "0.5", "--interval", "0.1", "--q", "2,4"});
    REQUIRE(r.code == exit_ok);
    const auto l = lines(r.out);
    CHECK(l[0] == "t,mass,entropy,fisher,lq_2,lq_4");
    REQUIRE(l.size() == 7);  // t = 0 and five samples
    CHECK(fields(l[1])[0] == "0");
    CHECK(fields(l[6])[0] == "0.5");
}

TEST_CASE("search is reproducible") {
    const auto a = call({"search", "--d", "3", "--beta", "-2.5", "--gamma", "-1", "--family", "gaussian_times_poly",
                         "--budget", "100", "--seed", "7"});
    const auto b = call({"search", "--d", "3", "--beta", "-2.5", "--gamma", "-1", "--family", "gaussian_times_poly",
                         "--budget", "100", "--seed", "7"});
    REQUIRE(a.code == exit_ok);
    CHECK(a.out == b.out);
    CHECK(call({"search", "--d", "3", "--beta", "-2.5", "--gamma", "-1", "--budget", "10"}).code == exit_domain);
}
