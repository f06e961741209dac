#include "galois_lab/arithmetic.hpp"
#include "galois_lab/padic.hpp"

#include <fmt/format.h>

#include <cmath>

namespace galois_lab {

const char *verdict_name(Verdict v)
{
    switch (v) {
    case Verdict::eligible:
        return "eligible";
    case Verdict::blocked_by_i:
        return "blocked_by_i";
    case Verdict::blocked_by_ii:
        return "blocked_by_ii";
    case Verdict::out_of_theorem:
        return "out_of_theorem";
    }
    return "?";
}

std::vector<std::uint64_t> cond_ii_failures(const IrregularityReport &irr)
{
    std::vector<std::uint64_t> out;
    for (auto k : irr.class_char_indices)
        if ((k - 1) % irr.a == 0)
            out.push_back(k);
    return out;
}

EligibilityReport check_theorem_conditions(const IrregularityReport &irr, std::uint64_t m)
{
    if (m < 3)
        throw std::invalid_argument("check_theorem_conditions: m must be >= 3");
    EligibilityReport r;
    r.p = irr.p;
    r.m = m;
    r.irregularity = irr;
    if (irr.p % 4 != 1)
        return r;  // quadratic route territory
    r.m_valuation = v2(m % 2 == 1 ? m - 1 : m - 2);
    r.cond_i = r.m_valuation >= irr.lambda;
    r.failing_indices = cond_ii_failures(irr);
    r.cond_ii = r.failing_indices.empty();
    // both failing is reported as blocked_by_i; the flags keep the full picture
    if (!r.cond_i)
        r.verdict = Verdict::blocked_by_i;
    else if (!r.cond_ii)
        r.verdict = Verdict::blocked_by_ii;
    else
        r.verdict = Verdict::eligible;
    return r;
}

EligibilityReport check_theorem_conditions(std::uint64_t p, std::uint64_t m, BernoulliMethod method)
{
    if (!is_prime(p))
        throw std::invalid_argument(fmt::format("check_theorem_conditions: {} is not prime", p));
    if (m < 3)
        throw std::invalid_argument("check_theorem_conditions: m must be >= 3");
    if (p % 4 != 1) {
        IrregularityReport irr;
        irr.p = p;
        irr.lambda = v2(p - 1);
        irr.a = (p - 1) >> irr.lambda;
        return check_theorem_conditions(irr, m);
    }
    return check_theorem_conditions(irregular_report(p, method), m);
}

// ------------------------------------------------------- class numbers

std::int64_t quadratic_discriminant(std::uint64_t p)
{
    if (p < 3 || !is_prime(p))
        throw std::invalid_argument(fmt::format("quadratic_discriminant: {} is not an odd prime", p));
    const auto sp = static_cast<std::int64_t>(p);
    return p % 4 == 3 ? -sp : -4 * sp;
}

std::uint64_t count_reduced_forms(std::int64_t discriminant)
{
    if (discriminant >= 0 || (discriminant % 4 != 0 && discriminant % 4 != -3))
        throw std::invalid_argument(fmt::format("count_reduced_forms: bad discriminant {}", discriminant));
    const std::int64_t d = -discriminant;
    std::uint64_t h = 0;
    // a <= sqrt(|D| / 3) for reduced forms
    for (std::int64_t a = 1; 3 * a * a <= d; ++a)
        for (std::int64_t b = -a + 1; b <= a; ++b) {
            if (((b - discriminant) & 1) != 0)
                continue;
            const std::int64_t num = b * b + d;  // b^2 - D = 4ac
            if (num % (4 * a) != 0)
                continue;
            const std::int64_t c = num / (4 * a);
            if (c < a)
                continue;
            if (b < 0 && a == c)
                continue;
            ++h;
        }
    return h;
}

QuadraticClassNumber imag_quadratic_class_number(std::uint64_t p)
{
    QuadraticClassNumber q;
    q.discriminant = quadratic_discriminant(p);
    q.h = count_reduced_forms(q.discriminant);
    return q;
}

bool quadratic_route_check(std::uint64_t p)
{
    if (p <= 3)
        throw std::invalid_argument("quadratic_route_check: p must be > 3");
    return imag_quadratic_class_number(p).h % p != 0;
}

std::vector<std::uint64_t> primes_up_to(std::uint64_t limit)
{
    std::vector<std::uint64_t> out;
    if (limit < 2)
        return out;
    std::vector<bool> composite(limit + 1, false);
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (composite[i])
            continue;
        out.push_back(i);
        for (std::uint64_t j = i * i; j <= limit; j += i)
            composite[j] = true;
    }
    return out;
}

} // namespace galois_lab
