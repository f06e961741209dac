#include "galois_lab/lie.hpp"

#include <doctest.h>

#include <random>

using namespace galois_lab;

namespace {

LieElement E(std::uint64_t p, std::size_t m, std::size_t i, std::size_t j) { return LieElement::unit(p, m, i - 1, j - 1); }

// Product of integer matrices, computed entry by entry.
std::vector<mpz_class> product(const LieElement &a, const LieElement &b)
{
    const std::size_t m = a.dim();
    std::vector<mpz_class> r(m * m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            for (std::size_t k = 0; k < m; ++k)
                r[i * m + j] += a.at(i, k) * b.at(k, j);
    return r;
}

LieElement random_element(std::mt19937_64 &rng, std::uint64_t p, std::size_t m)
{
    auto x = LieElement::zero(p, m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            x = x + LieElement::unit(p, m, i, j).scaled(static_cast<long>(rng() % 50) - 25);
    return x;
}

} // namespace

TEST_SUITE("lie")
{
    TEST_CASE("lattice membership")
    {
        CHECK_THROWS_AS(LieElement(3, 2, {1, 0, 0, 0}), std::invalid_argument);
        CHECK_THROWS_AS(LieElement(2, 2, {2, 0, 0, 0}), std::invalid_argument);  // p^{1+eps} = 4
        CHECK_NOTHROW(LieElement(2, 2, {4, 0, 0, -4}));
        CHECK(E(5, 3, 1, 2).at(0, 1) == 5);
        CHECK(E(2, 3, 1, 2).at(0, 1) == 4);
    }

    TEST_CASE("bracket values")
    {
        for (std::uint64_t p : {2u, 3u, 5u, 7u}) {
            const auto x = E(p, 2, 1, 2) + E(p, 2, 2, 1), y = E(p, 2, 1, 1) - E(p, 2, 2, 2);
            const mpz_class q = power_of(p, 1 + epsilon_for(p));
            CHECK(bracket(x, y) == (E(p, 2, 2, 1) - E(p, 2, 1, 2)).scaled(2 * q));
            CHECK(bracket(x, x).is_zero());
            CHECK(bracket(E(p, 3, 1, 2), E(p, 3, 2, 3)) == E(p, 3, 1, 3).scaled(q));
        }
    }

    TEST_CASE("bracket is the matrix commutator")
    {
        std::mt19937_64 rng(3);
        for (int i = 0; i < 20; ++i) {
            const auto a = random_element(rng, 3, 3), b = random_element(rng, 3, 3), c = random_element(rng, 3, 3);
            const auto ab = product(a, b), ba = product(b, a);
            std::vector<mpz_class> want(9);
            for (std::size_t k = 0; k < 9; ++k)
                want[k] = ab[k] - ba[k];
            CHECK(bracket(a, b) == LieElement(3, 3, want));
            CHECK((bracket(a, bracket(b, c)) + bracket(b, bracket(c, a)) + bracket(c, bracket(a, b))).is_zero());
            CHECK(bracket(a, b) == -bracket(b, a));
            CHECK(bracket(a, b).in_sl());
        }
    }

    TEST_CASE("standard generators")
    {
        for (std::uint64_t p : {3u, 5u}) {
            auto [x2, y2] = standard_generators(2, p);
            CHECK(x2 == E(p, 2, 1, 2) + E(p, 2, 2, 1));
            CHECK(y2 == E(p, 2, 1, 1) - E(p, 2, 2, 2));
            auto [x3, y3] = standard_generators(3, p);
            CHECK(x3 == E(p, 3, 1, 2) + E(p, 3, 2, 3));
            CHECK(y3 == E(p, 3, 3, 1));
            auto [x4, y4] = standard_generators(4, p);
            CHECK(x4 == E(p, 4, 1, 2) + E(p, 4, 2, 3) + E(p, 4, 3, 4));
            CHECK(y4 == E(p, 4, 3, 1) + E(p, 4, 4, 2));
        }
    }

    TEST_CASE("closure dimensions")
    {
        for (std::uint64_t p : {2u, 3u, 5u, 7u})
            for (std::size_t m = 2; m <= 6; ++m) {
                const auto [x, y] = standard_generators(m, p);
                const std::vector<LieElement> gens{x, y};
                CHECK(bracket_closure(gens).dim() == m * m - 1);
            }
        // A single element spans an abelian line.
        const auto [x, y] = standard_generators(3, 5);
        const std::vector<LieElement> one{x};
        CHECK(bracket_closure(one).dim() == 1);
        const std::vector<LieElement> zero{LieElement::zero(5, 3)};
        CHECK(bracket_closure(zero).dim() == 0);
        // Diagonal elements commute.
        const std::vector<LieElement> diag{E(5, 3, 1, 1) - E(5, 3, 2, 2), E(5, 3, 2, 2) - E(5, 3, 3, 3)};
        CHECK(bracket_closure(diag).dim() == 2);
        // Upper triangular nilpotent algebra of sl_3.
        const std::vector<LieElement> upper{E(5, 3, 1, 2), E(5, 3, 2, 3)};
        CHECK(bracket_closure(upper).dim() == 3);
        const std::vector<LieElement> gl{x, y, E(5, 3, 1, 1)};
        CHECK(bracket_closure(gl).dim() == 9);
        CHECK_THROWS_AS(bracket_closure(gl, 5), std::logic_error);
    }

    TEST_CASE("closure is monotone and contains its generators")
    {
        std::mt19937_64 rng(17);
        for (int i = 0; i < 10; ++i) {
            std::vector<LieElement> gens{random_element(rng, 3, 3)};
            std::size_t last = 0;
            for (int j = 0; j < 3; ++j) {
                const auto span = bracket_closure(gens);
                CHECK(span.dim() >= last);
                for (const auto &g : gens)
                    CHECK(span.contains(g));
                for (const auto &a : span.elements)
                    for (const auto &b : span.elements)
                        CHECK(span.contains(bracket(a, b)));
                last = span.dim();
                gens.push_back(random_element(rng, 3, 3));
            }
        }
    }

    TEST_CASE("w valuation")
    {
        const auto [x, y] = standard_generators(3, 5);
        CHECK(w_valuation(x) == 0u);
        CHECK(w_valuation(y) == 0u);
        CHECK(w_valuation(E(5, 3, 1, 2).scaled(25)) == 2u);
        CHECK_FALSE(w_valuation(LieElement::zero(5, 3)).has_value());
        CHECK(w_valuation(E(2, 2, 1, 2).scaled(6)) == 1u);
        CHECK(leading_coefficients(E(5, 2, 1, 2).scaled(5 * 3), 1) == std::vector<std::uint64_t>{0, 3, 0, 0});
    }

    TEST_CASE("normalization")
    {
        const auto x = (E(3, 2, 1, 2) + E(3, 2, 2, 1)).scaled(3), y = E(3, 2, 1, 1) - E(3, 2, 2, 2);
        const auto n = normalize_generators(x, y, 10);
        CHECK(n.k == 1);
        CHECK(n.x == x);
        CHECK(n.y == y.scaled(3));
        CHECK(independent_at_level(n.x, n.y, n.k));

        const auto [a, b] = standard_generators(3, 7);
        const auto s = normalize_generators(a, b, 10);
        CHECK(s.k == 0);
        CHECK(s.x == a);
        CHECK(s.y == b);

        CHECK_THROWS_AS(normalize_generators(a, a, 10), NormalizationError);
    }
}
