#include <cstdio>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "doctest.h"

using kummod::cli::run;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result call(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("integer lists") {
    using kummod::cli::parse_int_list;
    CHECK(parse_int_list("2,3") == std::vector<int>{2, 3});
    CHECK(parse_int_list("1..3") == std::vector<int>{1, 2, 3});
    CHECK(parse_int_list("3,1..2,2") == std::vector<int>{1, 2, 3});
    CHECK_THROWS(parse_int_list("1..x"));
    CHECK_THROWS(parse_int_list("3..1"));
}

TEST_CASE("cli examples") {
    auto r = call({"indecomp", "--p", "3", "--n", "2", "--m", "2", "--a", "0,2", "--d", "1", "--oracle"});
    CHECK(r.code == 0);
    CHECK(r.out.find("-> true") != std::string::npos);
    CHECK(r.out.find("oracle: indecomposable") != std::string::npos);

    r = call({"decompose", "--spec", "quadratic2 a=-1", "--m", "2"});
    CHECK(r.code == 0);
    CHECK(r.out.find("gate: Theorem2") != std::string::npos);
    CHECK(r.out.find("nu: 2") != std::string::npos);

    r = call({"lemmas", "--p", "2", "--n", "1", "--m", "1..2", "--samples", "100", "--seed", "3"});
    CHECK(r.code == 0);
    CHECK(r.out.find("FAIL") == std::string::npos);
}

TEST_CASE("cli exit codes") {
    CHECK(call({}).code == 2);
    CHECK(call({"decompose", "--m", "2"}).code == 2);
    CHECK(call({"decompose", "--spec", "bogus", "--m", "1"}).code == 2);
    CHECK(call({"normpair", "--spec", "unramified p=3 n=1", "--m", "1"}).code == 2);
    CHECK(call({"lemmas", "--m", "0..9"}).code == 2);
    auto r = call({"decompose", "--spec", "cyclotomic p=3 n=1", "--m", "2", "--digits", "3"});
    CHECK(r.code == 3);
    CHECK(r.err.find("\"precision\"") != std::string::npos);
    CHECK(call({"indecomp", "--p", "3", "--n", "2", "--m", "3", "--sweep"}).code == 3);
    CHECK(call({"--help"}).code == 0);
}

TEST_CASE("cli output is deterministic and reports round-trip through verify") {
    const std::string path = "kummod_cli_report.json";
    for (const char* spec : {"cyclotomic p=3 n=1", "quadratic2 a=-1", "unramified p=3 n=1"}) {
        std::vector<std::string> args{"decompose", "--spec", spec, "--m", "2", "--json"};
        auto a = call(args), b = call(args);
        REQUIRE(a.code == 0);
        CHECK(a.out == b.out);
        {
            std::ofstream f(path);
            f << a.out;
        }
        auto v = call({"verify", path, "--spec", spec, "--json"});
        CHECK(v.code == 0);
        CHECK(v.out == a.out);
        CHECK(call({"verify", path, "--spec", "quadratic2 a=2"}).code == 2);

        // a report with one free certificate removed no longer generates J_m
        std::string t = a.out;
        auto pos = t.find("\"T\": [");
        REQUIRE(pos != std::string::npos);
        auto open = t.find('{', pos), close = t.find('}', t.find('}', open) + 1);
        auto next = t.find_first_not_of(" \n,", close + 1);
        if (t[next] == '{') {
            t.erase(open, next - open);
            {
                std::ofstream f(path);
                f << t;
            }
            auto bad = call({"verify", path});
            CAPTURE(bad.err);
            CHECK(bad.code == 1);
            CHECK(bad.err.find("\"fail\"") != std::string::npos);
        }
    }
    std::remove(path.c_str());
}
