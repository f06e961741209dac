#include "galois_lab/cli.hpp"
#include "galois_lab/selftest.hpp"

#include <doctest.h>
#include <json.hpp>

#include <sstream>

using namespace galois_lab;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(const std::vector<std::string> &args)
{
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

} // namespace

TEST_SUITE("cli")
{
    TEST_CASE("check-prime")
    {
        const auto r = run({"check-prime", "11", "--json"});
        CHECK(r.code == exit_ok);
        const auto j = nlohmann::json::parse(r.out);
        CHECK(j["route"] == "quadratic");
        CHECK(j["quadratic_route"]["class_number"] == "1");
        CHECK(j["quadratic_route"]["m_range"] == "all m >= 1");
        CHECK(j["verdict"] == "eligible");

        const auto b = run({"check-prime", "257", "--m", "257", "--json"});
        CHECK(b.code == exit_ok);
        const auto k = nlohmann::json::parse(b.out);
        CHECK(k["verdict"] == "blocked_by_ii");
        CHECK(k["cyclotomic_route"]["k_indices"] == nlohmann::json::array({"93"}));

        const auto h = run({"check-prime", "257", "--m", "257"});
        CHECK(h.out.find("blocked_by_ii") != std::string::npos);
        CHECK(h.out.find("93") != std::string::npos);

        CHECK(run({"check-prime", "4"}).code == exit_usage);
        CHECK(run({"check-prime", "-7"}).code == exit_usage);
        CHECK(run({"check-prime", "13", "--method", "magic"}).code == exit_usage);
    }

    TEST_CASE("scan")
    {
        const auto r = run({"scan", "--limit", "300", "--json"});
        CHECK(r.code == exit_ok);
        const auto j = nlohmann::json::parse(r.out);
        REQUIRE(j["exceptions"].size() == 1);
        CHECK(j["exceptions"][0]["p"] == "257");
        CHECK(j["exceptions"][0]["k"] == "93");
        CHECK(run({"scan", "--limit", "300", "--json", "--jobs", "2"}).out == r.out);

        const auto empty = nlohmann::json::parse(run({"scan", "--limit", "100", "--json"}).out);
        CHECK(empty["exceptions"].empty());

        CHECK(run({"scan", "--limit", "3"}).code == exit_usage);
        CHECK(run({"scan"}).code == exit_usage);
        CHECK(run({"scan", "--limit", "50", "--checkpoint", "/nonexistent-dir/x/scan.jsonl"}).code == exit_usage);
    }

    TEST_CASE("witness")
    {
        const auto r = run({"witness", "11", "3", "4", "--json"});
        CHECK(r.code == exit_ok);
        const auto j = nlohmann::json::parse(r.out);
        CHECK(j["passed"] == true);
        CHECK(run({"witness", "11", "--m", "3", "-N", "4", "--json"}).out == r.out);
        CHECK(run({"witness", "11", "3", "4", "--json"}).out == r.out);

        const auto refused = run({"witness", "5", "3", "4", "--route", "cyclotomic"});
        CHECK(refused.code == exit_failed);
        CHECK(refused.err.find("blocked_by_i") != std::string::npos);
        const auto forced = run({"witness", "5", "3", "4", "--route", "cyclotomic", "--force"});
        CHECK(forced.code == exit_ok);
        CHECK(forced.err.find("warning") != std::string::npos);

        const auto m2 = run({"witness", "11", "2", "3"});
        CHECK(m2.code == exit_ok);
        CHECK(m2.out.find("z1 -> +1, z2 -> -1") != std::string::npos);

        CHECK(run({"witness", "11"}).code == exit_usage);
        CHECK(run({"witness", "11", "3", "4", "--m", "5"}).code == exit_usage);
        CHECK(run({"witness", "12", "3", "4"}).code == exit_usage);
        CHECK(run({"witness", "11", "3", "100000"}).code == exit_usage);
        CHECK(run({"witness", "11", "3", "4", "--route", "sideways"}).code == exit_usage);
    }

    TEST_CASE("selftest and usage")
    {
        const auto r = run({"selftest", "--json"});
        CHECK(r.code == exit_ok);
        CHECK(nlohmann::json::parse(r.out)["passed"] == true);
        CHECK(run({"--help"}).code == exit_ok);
        CHECK(run({}).code == exit_usage);
        CHECK(run({"frobnicate"}).code == exit_usage);
    }

    TEST_CASE("a sabotaged bracket fails the bracket-closure suite by name")
    {
        const auto flipped = [](const LieElement &a, const LieElement &b) { return bracket(b, a); };
        const auto rep = run_selftest(SelftestProfile::quick, flipped);
        CHECK_FALSE(rep.passed());
        for (const auto &s : rep.results)
            CHECK_MESSAGE(s.passed == (s.name != "bracket-closure"), s.name);
    }
}
