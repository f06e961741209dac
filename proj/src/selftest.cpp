#include "galois_lab/selftest.hpp"

#include "galois_lab/arithmetic.hpp"
#include "galois_lab/characters.hpp"
#include "galois_lab/groups.hpp"

#include <fmt/format.h>

#include <functional>
#include <random>

namespace galois_lab {

bool SelftestReport::passed() const
{
    for (const auto &r : results)
        if (!r.passed)
            return false;
    return !results.empty();
}

namespace {

// Suites return an empty string on success, else what broke.
using Suite = std::function<std::string()>;

mpz_class random_residue(std::mt19937_64 &rng, const mpz_class &modulus)
{
    // moduli here stay far below 2^64
    return mpz_from_u64(rng() % modulus.get_ui());
}

PadicMatrix random_matrix(std::mt19937_64 &rng, const PadicContext &ctx, std::size_t m)
{
    std::vector<mpz_class> e(m * m);
    for (auto &x : e)
        x = random_residue(rng, ctx.modulus());
    return PadicMatrix(ctx, m, std::move(e));
}

LieElement random_lie(std::mt19937_64 &rng, std::uint64_t p, std::size_t m, unsigned precision)
{
    const mpz_class scale = power_of(p, 1 + epsilon_for(p));
    const mpz_class range = power_of(p, precision);
    std::vector<mpz_class> e(m * m);
    for (auto &x : e)
        x = scale * random_residue(rng, range);
    return LieElement(p, m, std::move(e));
}

std::string padic_suite()
{
    std::mt19937_64 rng(20240601);
    const PadicContext ctx(3, 4);
    for (int i = 0; i < 50; ++i) {
        const auto a = random_matrix(rng, ctx, 3), b = random_matrix(rng, ctx, 3), c = random_matrix(rng, ctx, 3);
        if ((a * b) * c != a * (b * c))
            return "matrix product is not associative";
        if (a * (b + c) != a * b + a * c)
            return "matrix product does not distribute over addition";
        try {
            if (a.inverse().inverse() != a || !(a * a.inverse()).is_identity())
                return "inverse is not an involution";
        } catch (const NotInvertible &) {
            if (a.determinant() % 3 != 0)
                return "unit-determinant matrix reported singular";
        }
    }
    for (int i = 0; i < 200; ++i) {
        const std::int64_t x = static_cast<std::int64_t>(rng() % 100000) + 1;
        const std::int64_t y = static_cast<std::int64_t>(rng() % 100000) + 1;
        for (std::uint64_t p : {2u, 3u, 5u, 7u})
            if (*val_p(x * y, p) != *val_p(x, p) + *val_p(y, p))
                return fmt::format("val_p({} * {}) is not additive at p = {}", x, y, p);
    }
    return "";
}

std::string bracket_suite(const BracketFn &br)
{
    for (std::uint64_t p : {3u, 5u, 7u}) {
        const auto [x, y] = standard_generators(2, p);
        const LieElement want =
            (LieElement::unit(p, 2, 1, 0) - LieElement::unit(p, 2, 0, 1)).scaled(mpz_from_u64(2 * p));
        if (br(x, y) != want)
            return fmt::format("(x, y) != 2p(E21(p) - E12(p)) for p = {}", p);
        for (std::size_t m = 2; m <= 6; ++m) {
            const auto [z1, z2] = standard_generators(m, p);
            const std::vector<LieElement> gens{z1, z2};
            const auto span = bracket_closure(gens, {}, br);
            if (span.dim() != m * m - 1)
                return fmt::format("closure of the standard pair has dimension {} for m = {}, p = {}", span.dim(), m,
                                   p);
        }
    }
    std::mt19937_64 rng(7);
    for (int i = 0; i < 30; ++i) {
        const auto a = random_lie(rng, 5, 3, 3), b = random_lie(rng, 5, 3, 3), c = random_lie(rng, 5, 3, 3);
        if (!(br(a, br(b, c)) + br(b, br(c, a)) + br(c, br(a, b))).is_zero())
            return "Jacobi identity fails";
        if (!br(a, a).is_zero())
            return "bracket is not alternating";
    }
    return "";
}

std::string round_trip_suite(int samples)
{
    std::mt19937_64 rng(314159);
    struct Case {
        std::uint64_t p;
        std::size_t m;
        unsigned n;
    };
    for (const Case c : {Case{3, 2, 4}, Case{5, 3, 4}, Case{7, 2, 6}}) {
        const PadicContext ctx(c.p, c.n);
        for (int i = 0; i < samples; ++i) {
            const auto x = random_lie(rng, c.p, c.m, c.n);
            if (log_mat(exp_mat(x, ctx)).to_matrix(ctx) != x.to_matrix(ctx))
                return fmt::format("log(exp(x)) != x for (p, m, N) = ({}, {}, {})", c.p, c.m, c.n);
        }
    }
    return "";
}

std::string filtration_suite()
{
    const unsigned n = 3;
    const auto kernel = congruence_kernel({3, 2, 1, n}, true);
    const auto series = p_central_series(kernel);
    if (series.terms.size() != n)
        return fmt::format("central series has {} terms, expected {}", series.terms.size(), n);
    for (unsigned k = 1; k <= n; ++k) {
        const auto level = congruence_kernel({3, 2, k, n}, true);
        if (!series.terms[k - 1].same_elements(level))
            return fmt::format("G_{} differs from the congruence level {}", k, k);
        if (!exp_lattice_image({3, 2, k, n}, true).same_elements(level))
            return fmt::format("exp(p^{} sl_2) differs from Sl_2^({})", k - 1, k);
    }
    if (!uniformity_check(series).passed())
        return "the Sl_2 kernel fails the finite uniformity check";
    return "";
}

std::string embedding_suite()
{
    const PadicContext ctx(3, 3);
    const auto act = DeltaAction::quadratic(3, 2);
    const auto [z1, z2] = delta_generators(act);
    const std::vector<PadicMatrix> gens{exp_mat(z1, ctx), exp_mat(z2, ctx)};
    const auto gprime = generated_subgroup(gens, ctx);
    if (const unsigned d = p_rank(gprime); d != 2)
        return fmt::format("p_rank(G') = {}", d);
    const auto series = p_central_series(congruence_kernel({3, 2, 1, 3}, true));
    const auto rep = decalage_check(gprime, series, 1);
    if (!rep.passed())
        return fmt::format("decalage: {}", rep.failures.front());
    if (!proper_solution_rank_check(gprime, rep))
        return "proper-solution rank check fails";
    return "";
}

std::string delta_suite()
{
    for (std::uint64_t p : {5u, 13u, 17u})
        for (std::size_t m = 2; m <= 8; ++m) {
            const auto act = DeltaAction::quadratic(p, m);
            const auto [z1, z2] = delta_generators(act);
            const auto rep = verify_delta_action(act, z1, z2);
            if (!rep.passed())
                return fmt::format("quadratic p = {}, m = {}: {}", p, m, rep.failures.front());
        }
    for (const auto &[p, a] : {std::pair<std::uint64_t, std::int64_t>{13, 3}, {17, 1}})
        for (std::size_t m = 3; m <= 8; ++m) {
            const auto act = DeltaAction::cyclotomic(p, m, a);
            const auto [z1, z2] = delta_generators(act);
            const auto rep = verify_delta_action(act, z1, z2);
            if (!rep.passed())
                return fmt::format("cyclotomic p = {}, a = {}, m = {}: {}", p, a, m, rep.failures.front());
        }
    return "";
}

std::string class_number_suite()
{
    if (imag_quadratic_class_number(23).h != 3 || imag_quadratic_class_number(163).h != 1)
        return "h(-23) or h(-163) is wrong";
    for (auto p : primes_up_to(1000))
        if (p >= 5 && !quadratic_route_check(p))
            return fmt::format("p = {} divides h(Q(sqrt(-p)))", p);
    return "";
}

std::string bernoulli_suite(std::uint64_t limit)
{
    if (irregular_report(37).class_char_indices != std::vector<std::uint64_t>{5})
        return "p = 37 should carry k = 5";
    if (irregular_report(257).class_char_indices != std::vector<std::uint64_t>{93})
        return "p = 257 should carry k = 93";
    for (auto p : primes_up_to(limit)) {
        if (p < 5)
            continue;
        if (bernoulli_table(p, BernoulliMethod::recurrence) != bernoulli_table(p, BernoulliMethod::power_sum))
            return fmt::format("recurrence and power-sum disagree at p = {}", p);
    }
    return "";
}

std::string scan_suite(std::uint64_t limit, const std::vector<std::pair<std::uint64_t, std::uint64_t>> &want)
{
    const auto got = scan_exception_table(limit);
    if (got != want)
        return fmt::format("scan to {} returned {} rows, expected {}", limit, got.size(), want.size());
    return "";
}

} // namespace

SelftestReport run_selftest(SelftestProfile profile, const BracketFn &br)
{
    const bool full = profile == SelftestProfile::full;
    std::vector<std::pair<std::string, Suite>> suites = {
        {"padic-arithmetic", padic_suite},
        {"bracket-closure", [&] { return bracket_suite(br); }},
        {"exp-log-round-trip", [&] { return round_trip_suite(full ? 100 : 20); }},
        {"filtration-coincidence", filtration_suite},
        {"embedding-ingredients", embedding_suite},
        {"delta-action", delta_suite},
        {"class-numbers", class_number_suite},
        {"bernoulli-dual-method", [&] { return bernoulli_suite(full ? 5000 : 1000); }},
        {"exception-table", [&] {
             return full ? scan_suite(12000, {{257, 93}, {3329, 1951}, {11777, 8879}}) : scan_suite(300, {{257, 93}});
         }},
    };
    SelftestReport report{profile, {}};
    for (auto &[name, run] : suites) {
        const auto t0 = std::chrono::steady_clock::now();
        SelftestResult r{name, false, "", 0};
        try {
            r.detail = run();
            r.passed = r.detail.empty();
        } catch (const std::exception &e) {
            r.detail = fmt::format("exception: {}", e.what());
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        report.results.push_back(std::move(r));
    }
    return report;
}

} // namespace galois_lab
