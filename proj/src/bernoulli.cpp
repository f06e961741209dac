#include "galois_lab/arithmetic.hpp"
#include "galois_lab/characters.hpp"
#include "galois_lab/padic.hpp"
#include "ntt.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <limits>

namespace galois_lab {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mulm(u64 a, u64 b, u64 p) { return static_cast<u64>(static_cast<u128>(a) * b % p); }

u64 powm(u64 b, u64 e, u64 p)
{
    u64 r = 1 % p;
    b %= p;
    while (e) {
        if (e & 1)
            r = mulm(r, b, p);
        b = mulm(b, b, p);
        e >>= 1;
    }
    return r;
}

u64 invm(u64 a, u64 p) { return powm(a, p - 2, p); }

// B_n / n! from the generating function x / (e^x - 1):
//   sum_{j<=n} b_j / (n+1-j)! = [n == 0]
std::vector<u64> by_recurrence(u64 p)
{
    const u64 top = p - 3;
    std::vector<u64> fact(p), ifact(p);
    fact[0] = 1;
    for (u64 k = 1; k < p; ++k)
        fact[k] = mulm(fact[k - 1], k, p);
    ifact[p - 1] = invm(fact[p - 1], p);
    for (u64 k = p - 1; k > 0; --k)
        ifact[k - 1] = mulm(ifact[k], k, p);

    // products stay below (p-1)^2; reduce before the sum can overflow
    const u64 sq = (p - 1) * (p - 1);
    const u64 batch = std::max<u64>(1, std::numeric_limits<u64>::max() / sq - 1);

    const u64 b1 = p - (p + 1) / 2;  // -1/2
    std::vector<u64> even(top / 2 + 1);  // even[t] = b_{2t}
    even[0] = 1;
    for (u64 t = 1; 2 * t <= top; ++t) {
        const u64 n = 2 * t;
        u64 acc = (ifact[n + 1] + mulm(b1, ifact[n], p)) % p;
        u64 part = 0, count = 0;
        for (u64 u = 1; u < t; ++u) {
            part += even[u] * ifact[n - 2 * u + 1];
            if (++count == batch) {
                part %= p;
                count = 0;
            }
        }
        acc = (acc + part % p) % p;
        even[t] = acc == 0 ? 0 : p - acc;
    }
    std::vector<u64> out;
    out.reserve(top / 2);
    for (u64 t = 1; 2 * t <= top; ++t)
        out.push_back(mulm(fact[2 * t], even[t], p));
    return out;
}

// B_{2k} = 2k g^{2k-1} S_k / (g^{2k} - 1),  S_k = sum_{j=1}^{p-1} j^{2k-1} floor(jg/p)
std::vector<u64> finish_power_sums(u64 p, u64 g, const std::vector<u64> &sums)
{
    std::vector<u64> out;
    out.reserve(sums.size());
    u64 gpow = g;  // g^{2k-1}
    const u64 g2 = mulm(g, g, p);
    for (u64 k = 1; k <= sums.size(); ++k) {
        const u64 g2k = mulm(gpow, g, p);
        const u64 denom = (g2k + p - 1) % p;
        u64 v = mulm(mulm(2 * k % p, gpow, p), sums[k - 1], p);
        out.push_back(mulm(v, invm(denom, p), p));
        gpow = mulm(gpow, g2, p);
    }
    return out;
}

std::vector<u64> by_power_sum_direct(u64 p)
{
    const u64 g = smallest_primitive_root(p);
    const u64 count = (p - 3) / 2;
    std::vector<u64> pw(p), sq(p), floor_part(p);
    for (u64 j = 1; j < p; ++j) {
        pw[j] = j;
        sq[j] = mulm(j, j, p);
        floor_part[j] = static_cast<u64>(static_cast<u128>(j) * g / p);
    }
    std::vector<u64> sums(count);
    for (u64 k = 1; k <= count; ++k) {
        u128 s = 0;
        for (u64 j = 1; j < p; ++j) {
            s += static_cast<u128>(pw[j]) * floor_part[j];
            pw[j] = mulm(pw[j], sq[j], p);
        }
        sums[k - 1] = static_cast<u64>(s % p);
    }
    return finish_power_sums(p, g, sums);
}

// Same sums, all at once. With j = g^i and i e = T(i+e) - T(i) - T(e),
// T(n) = n(n-1)/2:
//   S(e) = g^{-T(e)} sum_i a_i b_{i+e},  a_i = floor(g^i g / p) g^{-T(i)},  b_n = g^{T(n)}
// which is one correlation, read off a single cyclic convolution.
std::vector<u64> by_power_sum_ntt(u64 p)
{
    if (static_cast<u128>(p) * p * p >= detail::ntt_prime)
        throw std::domain_error(fmt::format("power-sum Bernoulli method: p = {} exceeds the exact NTT range", p));
    const u64 g = smallest_primitive_root(p);
    const u64 ginv = invm(g, p);
    const u64 len = p - 1;
    const u64 span = 2 * len - 1;

    std::vector<u64> b(span), a_rev(len);
    u64 gt = 1, gti = 1;     // g^{T(n)}, g^{-T(n)}
    u64 gn = 1, gni = 1;     // g^n, g^{-n}
    u64 gi = 1;              // g^i mod p, the element j
    for (u64 n = 0; n < span; ++n) {
        b[n] = gt;
        if (n < len) {
            const u64 c = static_cast<u64>(static_cast<u128>(gi) * g / p);
            a_rev[len - 1 - n] = mulm(c, gti, p);
            gi = mulm(gi, g, p);
        }
        gt = mulm(gt, gn, p);
        gti = mulm(gti, gni, p);
        gn = mulm(gn, g, p);
        gni = mulm(gni, ginv, p);
    }
    std::size_t size = 1;
    while (size < span)
        size <<= 1;
    const auto conv = detail::cyclic_convolution(std::move(a_rev), std::move(b), size);

    const u64 count = (p - 3) / 2;
    std::vector<u64> sums(count);
    // g^{-T(e)} for e = 1, 3, 5, ...
    for (u64 k = 1; k <= count; ++k) {
        const u64 e = 2 * k - 1;
        const u64 te = (e * (e - 1) / 2) % (p - 1);
        const u64 scale = powm(ginv, te, p);
        sums[k - 1] = mulm(conv[len - 1 + e] % p, scale, p);
    }
    return finish_power_sums(p, g, sums);
}

} // namespace

std::vector<std::uint64_t> bernoulli_table(std::uint64_t p, BernoulliMethod method)
{
    if (!is_prime(p))
        throw std::invalid_argument(fmt::format("bernoulli_table: {} is not prime", p));
    if (p < 5)
        return {};
    switch (method) {
    case BernoulliMethod::recurrence:
        return by_recurrence(p);
    case BernoulliMethod::power_sum:
        return by_power_sum_ntt(p);
    case BernoulliMethod::power_sum_direct:
        return by_power_sum_direct(p);
    case BernoulliMethod::automatic:
        break;
    }
    return p < automatic_threshold ? by_recurrence(p) : by_power_sum_ntt(p);
}

std::map<std::uint64_t, std::uint64_t> bernoulli_mod_p(std::uint64_t p, BernoulliMethod method)
{
    std::map<std::uint64_t, std::uint64_t> out;
    const auto table = bernoulli_table(p, method);
    for (std::size_t t = 0; t < table.size(); ++t)
        out.emplace(2 * (t + 1), table[t]);
    return out;
}

const char *method_name(BernoulliMethod m)
{
    switch (m) {
    case BernoulliMethod::recurrence:
        return "recurrence";
    case BernoulliMethod::power_sum:
        return "power-sum";
    case BernoulliMethod::power_sum_direct:
        return "power-sum-direct";
    case BernoulliMethod::automatic:
        return "auto";
    }
    return "?";
}

std::optional<BernoulliMethod> parse_method(const std::string &s)
{
    for (auto m : {BernoulliMethod::recurrence, BernoulliMethod::power_sum, BernoulliMethod::power_sum_direct,
                   BernoulliMethod::automatic})
        if (s == method_name(m))
            return m;
    return std::nullopt;
}

unsigned v2(std::uint64_t n)
{
    if (n == 0)
        throw std::invalid_argument("v2: zero has infinite valuation");
    return static_cast<unsigned>(__builtin_ctzll(n));
}

IrregularityReport irregular_report(std::uint64_t p, BernoulliMethod method)
{
    if (!is_prime(p))
        throw std::invalid_argument(fmt::format("irregular_report: {} is not prime", p));
    IrregularityReport r;
    r.p = p;
    r.lambda = v2(p - 1);
    r.a = (p - 1) >> r.lambda;
    const auto table = bernoulli_table(p, method);
    for (std::size_t t = 0; t < table.size(); ++t)
        if (table[t] == 0)
            r.class_char_indices.push_back(p - 2 * (t + 1));
    std::sort(r.class_char_indices.begin(), r.class_char_indices.end());
    return r;
}

} // namespace galois_lab
