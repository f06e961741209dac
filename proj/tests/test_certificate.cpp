#include "galois_lab/certificate.hpp"

#include <doctest.h>
#include <json.hpp>

using namespace galois_lab;

namespace {

WitnessRequest request(std::uint64_t p, std::size_t m, unsigned n)
{
    WitnessRequest r;
    r.p = p;
    r.m = m;
    r.precision = n;
    return r;
}

std::vector<bool> verdicts(const std::vector<CertificateCheck> &checks)
{
    std::vector<bool> out;
    for (const auto &c : checks)
        out.push_back(c.passed);
    return out;
}

const CertificateCheck &find(const WitnessCertificate &c, const std::string &name)
{
    for (const auto &k : c.checks)
        if (k.name == name)
            return k;
    throw std::runtime_error("no check named " + name);
}

} // namespace

TEST_SUITE("certificate")
{
    TEST_CASE("quadratic witness for m = 3")
    {
        const auto c = build_witness(request(11, 3, 4));
        CHECK(c.route == DeltaRoute::quadratic);
        CHECK(c.passed());
        CHECK(find(c, "generation_dimension").detail.find("= 8") != std::string::npos);
        CHECK(find(c, "action_eigenvalues").detail == "z1 -> -1, z2 -> +1");
        CHECK(find(c, "exp_log_round_trip").passed);
        CHECK(find(c, "p_rank").passed);
        const auto [z1, z2] = standard_generators(3, 11);
        CHECK(c.z1 == z1.entries());
        CHECK(c.z2 == z2.entries());
    }

    TEST_CASE("m = 2 uses the swapped pair")
    {
        const auto c = build_witness(request(11, 2, 3));
        CHECK(c.passed());
        CHECK(c.z1 == (LieElement::unit(11, 2, 0, 0) - LieElement::unit(11, 2, 1, 1)).entries());
        CHECK(c.z2 == (LieElement::unit(11, 2, 0, 1) + LieElement::unit(11, 2, 1, 0)).entries());
        CHECK(find(c, "action_eigenvalues").detail == "z1 -> +1, z2 -> -1");
    }

    TEST_CASE("cyclotomic route and eligibility")
    {
        auto r = request(5, 3, 4);
        r.route = DeltaRoute::cyclotomic;
        CHECK_THROWS_AS(build_witness(r), NotEligible);
        r.force = true;
        const auto forced = build_witness(r);
        CHECK(forced.forced);
        CHECK(forced.passed());
        CHECK(forced.eligibility.rfind("blocked_by_i", 0) == 0);

        const auto c = build_witness(request(13, 5, 3));
        CHECK(c.route == DeltaRoute::cyclotomic);
        CHECK(c.a == 3);
        CHECK(c.passed());

        auto blocked = request(257, 257, 2);
        blocked.route = DeltaRoute::cyclotomic;
        CHECK_THROWS_AS(build_witness(blocked), NotEligible);
    }

    TEST_CASE("malformed requests")
    {
        CHECK_THROWS_AS(build_witness(request(9, 3, 3)), std::invalid_argument);
        CHECK_THROWS_AS(build_witness(request(5, 3, 1)), std::invalid_argument);
        CHECK_THROWS_AS(build_witness(request(5, 3, 5000)), std::invalid_argument);
        auto r = request(13, 2, 3);
        r.route = DeltaRoute::cyclotomic;
        CHECK_THROWS_AS(build_witness(r), std::invalid_argument);
    }

    TEST_CASE("serialized certificates re-verify")
    {
        for (auto [p, m, n] : {std::tuple{11ull, 3ul, 4u}, {3ull, 2ul, 3u}, {13ull, 5ul, 3u}, {7ull, 4ul, 3u}}) {
            const auto c = build_witness(request(p, m, n));
            const auto text = certificate_to_json(c);
            const auto back = certificate_from_json(text);
            CHECK(verdicts(verify_certificate(back)) == verdicts(c.checks));
            CHECK(certificate_to_json(back) == text);
            const auto j = nlohmann::json::parse(text);
            CHECK(j["p"].is_string());
            CHECK(j["z1"][0][0].is_string());
        }
    }

    TEST_CASE("tampering is detected")
    {
        const auto c = build_witness(request(11, 3, 4));
        auto j = nlohmann::ordered_json::parse(certificate_to_json(c));
        j["g1"][0][1] = "5";
        const auto bad = certificate_from_json(j.dump());
        const auto checks = verify_certificate(bad);
        bool round_trip_ok = true;
        for (const auto &k : checks)
            if (k.name == "exp_log_round_trip")
                round_trip_ok = k.passed;
        CHECK_FALSE(round_trip_ok);

        auto wrong_action = nlohmann::ordered_json::parse(certificate_to_json(c));
        wrong_action["action"]["matrix"][1][1] = "1";
        CHECK_THROWS(certificate_from_json(wrong_action.dump()));

        CHECK_THROWS(certificate_from_json("{}"));
    }

    TEST_CASE("a pair that misses the eigenspaces fails by name")
    {
        auto r = request(11, 3, 3);
        const auto [x, y] = standard_generators(3, 11);
        r.pair = std::pair{x + LieElement::unit(11, 3, 0, 0) - LieElement::unit(11, 3, 1, 1), y};
        const auto c = build_witness(r);
        CHECK_FALSE(c.passed());
        CHECK(c.first_failure() == "action_eigenvalues");
    }
}
