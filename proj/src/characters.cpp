#include "galois_lab/characters.hpp"

#include <fmt/format.h>

#include <stdexcept>

namespace galois_lab {

namespace {

std::uint64_t pow_mod(std::uint64_t b, std::uint64_t e, std::uint64_t m)
{
    unsigned __int128 r = 1 % m, x = b % m;
    while (e) {
        if (e & 1)
            r = r * x % m;
        x = x * x % m;
        e >>= 1;
    }
    return static_cast<std::uint64_t>(r);
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n)
{
    std::vector<std::uint64_t> out;
    for (std::uint64_t q = 2; q * q <= n; ++q)
        if (n % q == 0) {
            out.push_back(q);
            while (n % q == 0)
                n /= q;
        }
    if (n > 1)
        out.push_back(n);
    return out;
}

void require_odd_prime(std::uint64_t p, const char *what)
{
    if (p < 3 || !is_prime(p))
        throw std::invalid_argument(fmt::format("{}: {} is not an odd prime", what, p));
}

} // namespace

// -------------------------------------------------------- CharacterVector

CharacterVector::CharacterVector(std::uint64_t modulus) : modulus_(modulus)
{
    if (modulus == 0)
        throw std::invalid_argument("CharacterVector: modulus must be positive");
}

CharacterVector::CharacterVector(std::uint64_t modulus, const std::vector<std::int64_t> &exponents)
    : CharacterVector(modulus)
{
    for (auto e : exponents)
        add(e);
}

std::uint64_t CharacterVector::reduce(std::int64_t e) const
{
    const auto m = static_cast<std::int64_t>(modulus_);
    return static_cast<std::uint64_t>(((e % m) + m) % m);
}

void CharacterVector::add(std::int64_t exponent, std::uint64_t multiplicity)
{
    if (multiplicity)
        mult_[reduce(exponent)] += multiplicity;
}

std::uint64_t CharacterVector::multiplicity(std::int64_t exponent) const
{
    auto it = mult_.find(reduce(exponent));
    return it == mult_.end() ? 0 : it->second;
}

std::uint64_t CharacterVector::total() const
{
    std::uint64_t t = 0;
    for (const auto &[e, k] : mult_)
        t += k;
    return t;
}

std::vector<std::uint64_t> CharacterVector::support() const
{
    std::vector<std::uint64_t> out;
    for (const auto &[e, k] : mult_)
        out.push_back(e);
    return out;
}

std::string CharacterVector::to_string() const
{
    std::string s = "{";
    bool first = true;
    for (const auto &[e, k] : mult_) {
        s += first ? "" : ", ";
        s += k == 1 ? fmt::format("{}", e) : fmt::format("{}x{}", e, k);
        first = false;
    }
    return s + "}";
}

CharacterVector adjoint_weights(std::uint64_t p, std::size_t m, std::int64_t a)
{
    require_odd_prime(p, "adjoint_weights");
    if (m < 2)
        throw std::invalid_argument("adjoint_weights: m must be >= 2");
    CharacterVector out(p - 1);
    for (std::size_t i = 1; i <= m; ++i)
        for (std::size_t j = 1; j <= m; ++j)
            out.add((static_cast<std::int64_t>(i) - static_cast<std::int64_t>(j)) * a);
    return out;
}

bool orthogonal(const CharacterVector &a, const CharacterVector &b)
{
    return obstruction_dimension(a, b) == 0;
}

std::uint64_t obstruction_dimension(const CharacterVector &torsion, const CharacterVector &module)
{
    if (torsion.modulus() != module.modulus())
        throw ContextMismatch(fmt::format("character moduli differ ({} vs {})", torsion.modulus(), module.modulus()));
    std::uint64_t d = 0;
    for (const auto &[e, k] : torsion.multiplicities())
        d += k * module.multiplicity(static_cast<std::int64_t>(e));
    return d;
}

CharacterVector frank_character(std::uint64_t p)
{
    require_odd_prime(p, "frank_character");
    CharacterVector out(p - 1);
    out.add(0);
    for (std::uint64_t e = 1; e < p - 1; e += 2)
        out.add(static_cast<std::int64_t>(e));
    return out;
}

std::uint64_t mirror_index(std::uint64_t p, std::int64_t k)
{
    require_odd_prime(p, "mirror_index");
    const auto m = static_cast<std::int64_t>(p - 1);
    return static_cast<std::uint64_t>((((1 - k) % m) + m) % m);
}

CharacterVector torsion_character(std::uint64_t p, const std::vector<std::uint64_t> &class_indices)
{
    CharacterVector out(p - 1);
    for (auto k : class_indices)
        out.add(static_cast<std::int64_t>(mirror_index(p, static_cast<std::int64_t>(k))));
    return out;
}

std::uint64_t smallest_primitive_root(std::uint64_t p)
{
    if (!is_prime(p))
        throw std::invalid_argument(fmt::format("smallest_primitive_root: {} is not prime", p));
    if (p == 2)
        return 1;
    const auto factors = prime_factors(p - 1);
    for (std::uint64_t g = 2;; ++g) {
        bool ok = true;
        for (auto q : factors)
            if (pow_mod(g, (p - 1) / q, p) == 1) {
                ok = false;
                break;
            }
        if (ok)
            return g;
    }
}

// ------------------------------------------------------------ Delta action

DeltaAction DeltaAction::quadratic(std::uint64_t p, std::size_t m)
{
    if (!is_prime(p))
        throw std::invalid_argument(fmt::format("DeltaAction: {} is not prime", p));
    if (m < 2)
        throw std::invalid_argument("DeltaAction: m must be >= 2");
    DeltaAction act{DeltaRoute::quadratic, p, m, 1, {}};
    for (std::size_t i = 1; i <= m; ++i)
        act.diagonal.push_back(i % 2 == 1 ? 1 : -1);
    return act;
}

DeltaAction DeltaAction::cyclotomic(std::uint64_t p, std::size_t m, std::int64_t a)
{
    require_odd_prime(p, "DeltaAction");
    if (m < 3)
        throw std::invalid_argument("DeltaAction: the cyclotomic action needs m >= 3");
    if (a < 1 || a > static_cast<std::int64_t>(p) - 2 || a % 2 == 0)
        throw std::invalid_argument(fmt::format("DeltaAction: twist {} must be odd in [1, p-2]", a));
    DeltaAction act{DeltaRoute::cyclotomic, p, m, a, {}};
    const auto n = static_cast<std::int64_t>(p - 1);
    for (std::size_t i = 1; i <= m; ++i)
        act.diagonal.push_back(static_cast<std::int64_t>(i) * a % n);
    return act;
}

std::pair<LieElement, LieElement> delta_generators(const DeltaAction &action)
{
    if (action.route == DeltaRoute::quadratic && action.m == 2) {
        const std::uint64_t p = action.p;
        return {LieElement::unit(p, 2, 0, 0) - LieElement::unit(p, 2, 1, 1),
                LieElement::unit(p, 2, 0, 1) + LieElement::unit(p, 2, 1, 0)};
    }
    return standard_generators(action.m, action.p);
}

std::pair<std::int64_t, std::int64_t> expected_delta_pattern(const DeltaAction &action)
{
    if (action.route == DeltaRoute::quadratic)
        return action.m == 2 ? std::pair<std::int64_t, std::int64_t>{1, -1}
                             : std::pair<std::int64_t, std::int64_t>{-1, 1};
    const auto n = static_cast<std::int64_t>(action.p - 1);
    const auto m = static_cast<std::int64_t>(action.m);
    const std::int64_t z2 = action.a * (m % 2 == 1 ? m - 1 : m - 2);
    return {((-action.a) % n + n) % n, (z2 % n + n) % n};
}

namespace {

// Exact conjugation by diag(s_i) with s_i = +-1.
std::optional<std::int64_t> sign_eigenvalue(const DeltaAction &act, const LieElement &z)
{
    if (z.is_zero())
        return std::nullopt;
    bool plus = true, minus = true;
    const std::size_t m = act.m;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            const mpz_class &v = z.at(i, j);
            if (v == 0)
                continue;
            const mpz_class w = v * (act.diagonal[i] * act.diagonal[j]);
            plus = plus && w == v;
            minus = minus && w == -v;
        }
    if (plus)
        return 1;
    if (minus)
        return -1;
    return std::nullopt;
}

// Conjugation by diag(omega^{d_i}) scales E_ij by omega^{d_i - d_j}.
std::optional<std::int64_t> omega_exponent(const DeltaAction &act, const LieElement &z)
{
    const auto n = static_cast<std::int64_t>(act.p - 1);
    std::optional<std::int64_t> found;
    for (std::size_t i = 0; i < act.m; ++i)
        for (std::size_t j = 0; j < act.m; ++j) {
            if (z.at(i, j) == 0)
                continue;
            const std::int64_t e = ((act.diagonal[i] - act.diagonal[j]) % n + n) % n;
            if (found && *found != e)
                return std::nullopt;
            found = e;
        }
    return found;
}

// The same statement read in F_p with omega(s) = s mod p, on the leading term of z.
bool numeric_check(const DeltaAction &act, const LieElement &z, std::int64_t exponent)
{
    const std::uint64_t p = act.p;
    const auto w = w_valuation(z);
    if (!w)
        return false;
    const auto lead = leading_coefficients(z, *w);
    const std::uint64_t s = smallest_primitive_root(p);
    std::vector<std::uint64_t> d(act.m), dinv(act.m);
    for (std::size_t i = 0; i < act.m; ++i) {
        d[i] = pow_mod(s, static_cast<std::uint64_t>(act.diagonal[i]), p);
        dinv[i] = pow_mod(d[i], p - 2, p);
    }
    const std::uint64_t lambda = pow_mod(s, static_cast<std::uint64_t>(exponent), p);
    for (std::size_t i = 0; i < act.m; ++i)
        for (std::size_t j = 0; j < act.m; ++j) {
            const unsigned __int128 lhs = static_cast<unsigned __int128>(d[i]) * lead[i * act.m + j] % p * dinv[j] % p;
            const unsigned __int128 rhs = static_cast<unsigned __int128>(lambda) * lead[i * act.m + j] % p;
            if (lhs != rhs)
                return false;
        }
    return true;
}

} // namespace

DeltaActionReport verify_delta_action(const DeltaAction &action, const LieElement &z1, const LieElement &z2)
{
    if (z1.dim() != action.m || z2.dim() != action.m)
        throw std::invalid_argument("verify_delta_action: dimension mismatch");
    if (z1.p() != action.p || z2.p() != action.p)
        throw ContextMismatch("verify_delta_action: prime mismatch");

    DeltaActionReport report{action.route, {}, {}};
    const auto [e1, e2] = expected_delta_pattern(action);
    const std::pair<const char *, const LieElement *> items[] = {{"z1", &z1}, {"z2", &z2}};
    const std::int64_t expected[] = {e1, e2};
    for (int t = 0; t < 2; ++t) {
        const LieElement &z = *items[t].second;
        EigenCheck c{items[t].first, {}, expected[t], true};
        if (action.route == DeltaRoute::quadratic) {
            c.found = sign_eigenvalue(action, z);
        } else {
            c.found = omega_exponent(action, z);
            if (c.found)
                c.numeric_ok = numeric_check(action, z, *c.found);
        }
        if (!c.found)
            report.failures.push_back(fmt::format("{} is not an eigenvector: the action does not stabilise its span",
                                                  c.name));
        else if (*c.found != c.expected)
            report.failures.push_back(fmt::format("{}: found {} expected {}", c.name, *c.found, c.expected));
        else if (!c.numeric_ok)
            report.failures.push_back(fmt::format("{}: F_p evaluation disagrees with the exponent", c.name));
        report.checks.push_back(std::move(c));
    }
    return report;
}

const char *route_name(DeltaRoute r) { return r == DeltaRoute::quadratic ? "quadratic" : "cyclotomic"; }

} // namespace galois_lab
