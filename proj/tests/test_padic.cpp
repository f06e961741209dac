#include "oracles.hpp"

#include "galois_lab/padic.hpp"

#include <doctest.h>

#include <random>

using namespace galois_lab;

namespace {

PadicMatrix from_oracle(const PadicContext &ctx, const oracle::Mat &a, std::size_t m)
{
    std::vector<mpz_class> e;
    for (auto x : a)
        e.emplace_back(static_cast<long>(x));
    return PadicMatrix(ctx, m, std::move(e));
}

oracle::Mat random_oracle(std::mt19937_64 &rng, std::size_t m, std::int64_t n)
{
    oracle::Mat a(m * m);
    for (auto &x : a)
        x = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(n));
    return a;
}

} // namespace

TEST_SUITE("padic")
{
    TEST_CASE("valuations")
    {
        CHECK(val_p(std::int64_t{256}, 2) == 8u);
        CHECK(val_p(std::int64_t{7}, 3) == 0u);
        CHECK_FALSE(val_p(std::int64_t{0}, 5).has_value());
        CHECK(val_p(std::int64_t{-250}, 5) == 3u);
        CHECK(val_p(mpz_class("1237940039285380274899124224"), 2) == 90u);  // 2^90
    }

    TEST_CASE("context rejects non-primes")
    {
        CHECK_THROWS_AS(PadicContext(4, 2), std::invalid_argument);
        CHECK_THROWS_AS(PadicContext(1, 2), std::invalid_argument);
        CHECK_NOTHROW(PadicContext(2, 5));
    }

    TEST_CASE("small products")
    {
        const PadicContext ctx(5, 2);
        const auto d = PadicMatrix::diagonal(ctx, {6, 21});
        CHECK(d * d == PadicMatrix::diagonal(ctx, {11, 16}));

        const PadicContext c3(3, 2);
        auto a = PadicMatrix::identity(c3, 2), b = PadicMatrix::identity(c3, 2), want = PadicMatrix::identity(c3, 2);
        a.set(0, 1, 3);
        b.set(1, 0, 3);
        want.set(0, 1, 3);
        want.set(1, 0, 3);
        CHECK(a * b == want);
    }

    TEST_CASE("inverses")
    {
        const PadicContext ctx(7, 3);
        CHECK(PadicMatrix::identity(ctx, 3).inverse().is_identity());
        auto u = PadicMatrix::identity(ctx, 2);
        u.set(0, 1, 7);
        auto want = PadicMatrix::identity(ctx, 2);
        want.set(0, 1, ctx.modulus() - 7);
        CHECK(u.inverse() == want);
        const auto a = PadicMatrix::diagonal(ctx, {1, -1, 1});
        CHECK(a.inverse() == a);
        CHECK_THROWS_AS(PadicMatrix::diagonal(ctx, {7, 1}).inverse(), NotInvertible);
    }

    TEST_CASE("context mismatch is an error")
    {
        const auto a = PadicMatrix::identity(PadicContext(3, 2), 2);
        const auto b = PadicMatrix::identity(PadicContext(3, 3), 2);
        CHECK_THROWS_AS(a * b, ContextMismatch);
        CHECK_THROWS_AS(a + PadicMatrix::identity(PadicContext(5, 2), 2), ContextMismatch);
    }

    TEST_CASE("ring operations agree with plain integer arithmetic")
    {
        std::mt19937_64 rng(11);
        for (auto [p, n, m] : {std::tuple{3ull, 4u, 3ul}, {2ull, 6u, 2ul}, {7ull, 2u, 4ul}}) {
            const PadicContext ctx(p, n);
            const std::int64_t mod = oracle::ipow(static_cast<std::int64_t>(p), n);
            for (int i = 0; i < 40; ++i) {
                const auto a = random_oracle(rng, m, mod), b = random_oracle(rng, m, mod),
                           c = random_oracle(rng, m, mod);
                const auto A = from_oracle(ctx, a, m), B = from_oracle(ctx, b, m), C = from_oracle(ctx, c, m);
                CHECK(A * B == from_oracle(ctx, oracle::mul(a, b, m, mod), m));
                CHECK((A * B) * C == A * (B * C));
                CHECK(A * (B + C) == A * B + A * C);
                CHECK(A - A == PadicMatrix(ctx, m));
                CHECK(A.determinant() == oracle::det(a, m, mod));
                if (oracle::det(a, m, mod) % static_cast<std::int64_t>(p) != 0) {
                    CHECK((A * A.inverse()).is_identity());
                    CHECK((A.inverse() * A).is_identity());
                }
            }
        }
    }

    TEST_CASE("powers, keys and reduction")
    {
        const PadicContext ctx(5, 3);
        auto g = PadicMatrix::identity(ctx, 2);
        g.set(0, 1, 5);
        g.set(1, 0, 10);
        auto acc = PadicMatrix::identity(ctx, 2);
        for (int i = 0; i < 37; ++i)
            acc = acc * g;
        CHECK(g.pow(std::uint64_t{37}) == acc);
        CHECK(g.pow(std::uint64_t{25}).is_identity());
        CHECK(PadicMatrix::from_key(ctx, 2, g.key()) == g);
        CHECK(g.congruent_to_identity(1));
        CHECK_FALSE(g.congruent_to_identity(2));
        const PadicContext low(5, 1);
        CHECK(g.reduced_to(low).is_identity());
    }

    TEST_CASE("integer determinant")
    {
        std::vector<mpz_class> e{2, -1, 0, -1, 2, -1, 0, -1, 2};
        CHECK(integer_determinant(e, 3) == 4);
        CHECK(integer_determinant({0, 1, 1, 0}, 2) == -1);
    }
}
