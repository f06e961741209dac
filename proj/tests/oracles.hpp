#pragma once

// Independent reference computations for the tests. Nothing here calls into
// the library: plain integer matrices, exhaustive enumeration, exact rationals.

#include <gmpxx.h>

#include <cstdint>
#include <deque>
#include <set>
#include <vector>

namespace oracle {

using Mat = std::vector<std::int64_t>;  // row-major m x m, entries in [0, n)

inline std::int64_t mod(std::int64_t x, std::int64_t n) { return ((x % n) + n) % n; }

inline std::int64_t ipow(std::int64_t b, unsigned e)
{
    std::int64_t r = 1;
    while (e--)
        r *= b;
    return r;
}

inline Mat identity(std::size_t m)
{
    Mat r(m * m, 0);
    for (std::size_t i = 0; i < m; ++i)
        r[i * m + i] = 1;
    return r;
}

inline Mat mul(const Mat &a, const Mat &b, std::size_t m, std::int64_t n)
{
    Mat r(m * m, 0);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            __int128 s = 0;
            for (std::size_t k = 0; k < m; ++k)
                s += static_cast<__int128>(a[i * m + k]) * b[k * m + j];
            r[i * m + j] = static_cast<std::int64_t>(((s % n) + n) % n);
        }
    return r;
}

// Laplace expansion; fine for m <= 4.
inline std::int64_t det(const Mat &a, std::size_t m, std::int64_t n)
{
    if (m == 1)
        return mod(a[0], n);
    std::int64_t s = 0;
    for (std::size_t c = 0; c < m; ++c) {
        Mat minor;
        for (std::size_t i = 1; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j)
                if (j != c)
                    minor.push_back(a[i * m + j]);
        const std::int64_t term = mod(a[c] * det(minor, m - 1, n), n);
        s = mod(s + (c % 2 ? -term : term), n);
    }
    return s;
}

// Every matrix I + X with X divisible by p^k, modulo p^N, optionally det == 1.
inline std::set<Mat> congruence_kernel(std::int64_t p, std::size_t m, unsigned k, unsigned precision, bool sl)
{
    const std::int64_t n = ipow(p, precision), step = ipow(p, k);
    const std::int64_t choices = n / step;
    std::set<Mat> out;
    std::vector<std::int64_t> digits(m * m, 0);
    while (true) {
        Mat g = identity(m);
        for (std::size_t i = 0; i < m * m; ++i)
            g[i] = mod(g[i] + digits[i] * step, n);
        if (!sl || det(g, m, n) == 1)
            out.insert(g);
        std::size_t i = 0;
        while (i < m * m && ++digits[i] == choices)
            digits[i++] = 0;
        if (i == m * m)
            break;
    }
    return out;
}

// Closure of gens under multiplication; every element has finite order, so
// this is the generated group.
inline std::set<Mat> closure(const std::vector<Mat> &gens, std::size_t m, std::int64_t n)
{
    std::set<Mat> seen{identity(m)};
    std::deque<Mat> todo{identity(m)};
    while (!todo.empty()) {
        const Mat g = todo.front();
        todo.pop_front();
        for (const auto &s : gens) {
            Mat h = mul(g, s, m, n);
            if (seen.insert(h).second)
                todo.push_back(std::move(h));
        }
    }
    return seen;
}

// Exact Bernoulli numbers B_0 .. B_n (B_1 = -1/2).
inline std::vector<mpq_class> bernoulli_exact(unsigned n)
{
    std::vector<mpq_class> b(n + 1);
    b[0] = 1;
    for (unsigned k = 1; k <= n; ++k) {
        mpq_class s = 0;
        mpz_class binom = 1;  // C(k+1, j)
        for (unsigned j = 0; j < k; ++j) {
            s += binom * b[j];
            binom = binom * (k + 1 - j) / (j + 1);
        }
        b[k] = -s / (k + 1);
        b[k].canonicalize();
    }
    return b;
}

// Numerator-side residue of a p-integral rational, or -1 when p divides the denominator.
inline std::int64_t residue(const mpq_class &q, std::int64_t p)
{
    const mpz_class pp = p;
    if (mpz_divisible_p(q.get_den_mpz_t(), pp.get_mpz_t()))
        return -1;
    mpz_class inv;
    mpz_invert(inv.get_mpz_t(), q.get_den_mpz_t(), pp.get_mpz_t());
    mpz_class r = q.get_num() * inv;
    mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), pp.get_mpz_t());
    return r.get_si();
}

// Analytic class number formula for an imaginary quadratic fundamental
// discriminant D < 0: h = -(w / 2|D|) * sum_{a=1}^{|D|} (D/a) a.
inline std::int64_t class_number_dirichlet(std::int64_t D)
{
    const std::int64_t n = -D;
    const std::int64_t w = D == -3 ? 6 : D == -4 ? 4 : 2;
    std::int64_t s = 0;
    const mpz_class d = D;
    for (std::int64_t a = 1; a <= n; ++a) {
        const mpz_class aa = a;
        s += mpz_kronecker(d.get_mpz_t(), aa.get_mpz_t()) * a;
    }
    return -w * s / (2 * n);
}

} // namespace oracle
