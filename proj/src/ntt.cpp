#include "ntt.hpp"

#include <stdexcept>

namespace galois_lab::detail {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

constexpr u64 newton_inverse(u64 mod)
{
    u64 x = mod;  // Newton iteration for mod^-1 mod 2^64
    for (int i = 0; i < 6; ++i)
        x *= 2 - mod * x;
    return x;
}

// Montgomery arithmetic with R = 2^64.
struct Mont {
    static constexpr u64 mod = ntt_prime;
    static constexpr u64 inv = newton_inverse(ntt_prime);

    static u64 reduce(u128 t)
    {
        const u64 m = static_cast<u64>(t) * -inv;
        const u64 r = static_cast<u64>((t + static_cast<u128>(m) * mod) >> 64);
        return r >= mod ? r - mod : r;
    }
    static u64 mul(u64 a, u64 b) { return reduce(static_cast<u128>(a) * b); }
    static u64 add(u64 a, u64 b)
    {
        const u64 s = a + b;
        return s >= mod ? s - mod : s;
    }
    static u64 sub(u64 a, u64 b) { return a >= b ? a - b : a + mod - b; }
    static u64 to(u64 a) { return mul(a % mod, r2_value()); }
    static u64 from(u64 a) { return reduce(a); }
    static u64 r2_value()
    {
        // R^2 mod p
        static const u64 v = [] {
            const u128 r = (static_cast<u128>(1) << 64) % mod;
            return static_cast<u64>(r * r % mod);
        }();
        return v;
    }
    static u64 pow(u64 a, u64 e)
    {
        u64 r = to(1);
        while (e) {
            if (e & 1)
                r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }
};

void transform(std::vector<u64> &a, bool invert)
{
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1)
            j ^= bit;
        j ^= bit;
        if (i < j)
            std::swap(a[i], a[j]);
    }
    const u64 g = Mont::to(3);
    std::vector<u64> w;
    for (std::size_t len = 2; len <= n; len <<= 1) {
        u64 root = Mont::pow(g, (Mont::mod - 1) / len);
        if (invert)
            root = Mont::pow(root, Mont::mod - 2);
        const std::size_t half = len / 2;
        w.assign(half, 0);
        w[0] = Mont::to(1);
        for (std::size_t k = 1; k < half; ++k)
            w[k] = Mont::mul(w[k - 1], root);
        for (std::size_t i = 0; i < n; i += len)
            for (std::size_t k = 0; k < half; ++k) {
                const u64 u = a[i + k];
                const u64 v = Mont::mul(a[i + k + half], w[k]);
                a[i + k] = Mont::add(u, v);
                a[i + k + half] = Mont::sub(u, v);
            }
    }
    if (invert) {
        const u64 ninv = Mont::pow(Mont::to(n % Mont::mod), Mont::mod - 2);
        for (auto &x : a)
            x = Mont::mul(x, ninv);
    }
}

} // namespace

std::vector<std::uint64_t> cyclic_convolution(std::vector<std::uint64_t> a, std::vector<std::uint64_t> b,
                                              std::size_t n)
{
    if (n == 0 || (n & (n - 1)) != 0 || n > (std::size_t{1} << ntt_max_log2))
        throw std::invalid_argument("cyclic_convolution: length must be a power of two within the NTT range");
    if (a.size() > n || b.size() > n)
        throw std::invalid_argument("cyclic_convolution: input longer than the transform");
    a.resize(n, 0);
    b.resize(n, 0);
    for (auto &x : a)
        x = Mont::to(x);
    for (auto &x : b)
        x = Mont::to(x);
    transform(a, false);
    transform(b, false);
    for (std::size_t i = 0; i < n; ++i)
        a[i] = Mont::mul(a[i], b[i]);
    transform(a, true);
    for (auto &x : a)
        x = Mont::from(x);
    return a;
}

} // namespace galois_lab::detail
