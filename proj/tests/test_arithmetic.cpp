#include "oracles.hpp"

#include "galois_lab/arithmetic.hpp"
#include "galois_lab/padic.hpp"

#include <doctest.h>

using namespace galois_lab;

TEST_SUITE("arithmetic")
{
    TEST_CASE("Bernoulli residues match exact rationals")
    {
        const auto exact = oracle::bernoulli_exact(48);
        for (std::uint64_t p = 5; p <= 50; ++p) {
            if (!is_prime(p))
                continue;
            for (auto method : {BernoulliMethod::recurrence, BernoulliMethod::power_sum,
                                BernoulliMethod::power_sum_direct, BernoulliMethod::automatic}) {
                const auto table = bernoulli_table(p, method);
                REQUIRE(table.size() == (p - 3) / 2);
                for (std::uint64_t t = 1; t <= (p - 3) / 2; ++t)
                    CHECK_MESSAGE(static_cast<std::int64_t>(table[t - 1]) ==
                                      oracle::residue(exact[2 * t], static_cast<std::int64_t>(p)),
                                  "p = " << p << ", 2t = " << 2 * t << ", method " << method_name(method));
            }
        }
        CHECK(bernoulli_table(3).empty());
        CHECK(bernoulli_mod_p(3).empty());
    }

    TEST_CASE("known vanishing values")
    {
        const auto b37 = bernoulli_mod_p(37);
        for (const auto &[n, v] : b37)
            CHECK((v == 0) == (n == 32));
        for (const auto &[n, v] : bernoulli_mod_p(13))
            CHECK(v != 0);
        CHECK(bernoulli_mod_p(257).at(164) == 0);
    }

    TEST_CASE("methods agree")
    {
        for (auto p : primes_up_to(1500)) {
            if (p < 5)
                continue;
            const auto r = bernoulli_table(p, BernoulliMethod::recurrence);
            CHECK(bernoulli_table(p, BernoulliMethod::power_sum) == r);
            if (p < 400)
                CHECK(bernoulli_table(p, BernoulliMethod::power_sum_direct) == r);
        }
        CHECK(parse_method("power-sum") == BernoulliMethod::power_sum);
        CHECK_FALSE(parse_method("magic").has_value());
    }

    TEST_CASE("irregular indices")
    {
        const auto r257 = irregular_report(257);
        CHECK(r257.class_char_indices == std::vector<std::uint64_t>{93});
        CHECK(r257.lambda == 8);
        CHECK(r257.a == 1);
        const auto r37 = irregular_report(37);
        CHECK(r37.class_char_indices == std::vector<std::uint64_t>{5});
        CHECK(r37.lambda == 2);
        CHECK(r37.a == 9);
        CHECK(irregular_report(157).class_char_indices == std::vector<std::uint64_t>{47, 95});
        CHECK(irregular_report(13).e() == 0);
        CHECK(irregular_report(163841, BernoulliMethod::power_sum).class_char_indices ==
              std::vector<std::uint64_t>{140801});
    }

    TEST_CASE("eligibility verdicts")
    {
        const auto e257 = check_theorem_conditions(257, 257);
        CHECK(e257.verdict == Verdict::blocked_by_ii);
        CHECK(e257.failing_indices == std::vector<std::uint64_t>{93});
        CHECK(e257.cond_i);

        const auto e5 = check_theorem_conditions(5, 5);
        CHECK(e5.verdict == Verdict::eligible);
        CHECK(e5.m_valuation == 2);

        const auto e53 = check_theorem_conditions(5, 3);
        CHECK(e53.verdict == Verdict::blocked_by_i);
        CHECK(e53.m_valuation == 1);

        const auto e157 = check_theorem_conditions(157, 157);
        CHECK(e157.verdict == Verdict::eligible);
        CHECK(e157.irregularity.a == 39);
        CHECK(e157.cond_ii);

        CHECK(check_theorem_conditions(11, 5).verdict == Verdict::out_of_theorem);
        CHECK(check_theorem_conditions(257, 4).verdict == Verdict::blocked_by_i);  // both fail
        CHECK(check_theorem_conditions(13, 6).verdict == Verdict::eligible);       // v2(4) = 2 = lambda
        CHECK_THROWS_AS(check_theorem_conditions(13, 2), std::invalid_argument);
    }

    TEST_CASE("class numbers match the analytic formula")
    {
        CHECK(imag_quadratic_class_number(23).h == 3);
        CHECK(imag_quadratic_class_number(163).h == 1);
        CHECK(imag_quadratic_class_number(3).h == 1);
        CHECK(imag_quadratic_class_number(5).h == 2);
        CHECK(imag_quadratic_class_number(5).discriminant == -20);
        for (auto p : primes_up_to(2000)) {
            if (p < 3)
                continue;
            const auto h = imag_quadratic_class_number(p);
            CHECK(h.discriminant == quadratic_discriminant(p));
            CHECK_MESSAGE(static_cast<std::int64_t>(h.h) == oracle::class_number_dirichlet(h.discriminant),
                          "p = " << p);
        }
        for (std::uint64_t p : {5u, 7u, 23u})
            CHECK(quadratic_route_check(p));
    }

    TEST_CASE("sieve")
    {
        const auto ps = primes_up_to(100);
        CHECK(ps.size() == 25);
        for (std::uint64_t n = 0; n <= 100; ++n)
            CHECK(is_prime(n) == std::binary_search(ps.begin(), ps.end(), n));
        CHECK(v2(256) == 8);
        CHECK(v2(12) == 2);
    }
}
