#include "galois_lab/padic.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <utility>

namespace galois_lab {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mul_mod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 pow_mod(u64 a, u64 e, u64 m)
{
    u64 r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1)
            r = mul_mod(r, a, m);
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    return r;
}

bool mr_round(u64 n, u64 a, u64 d, unsigned s)
{
    a %= n;
    if (a == 0)
        return true;
    u64 x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1)
        return true;
    for (unsigned i = 1; i < s; ++i) {
        x = mul_mod(x, x, n);
        if (x == n - 1)
            return true;
    }
    return false;
}

} // namespace

bool is_prime(std::uint64_t n)
{
    if (n < 2)
        return false;
    for (u64 q : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u}) {
        if (n == q)
            return true;
        if (n % q == 0)
            return false;
    }
    u64 d = n - 1;
    unsigned s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    // this base set is exact below 2^64
    for (u64 a : {2ull, 325ull, 9375ull, 28178ull, 450775ull, 9780504ull, 1795265022ull})
        if (!mr_round(n, a, d, s))
            return false;
    return true;
}

mpz_class mpz_from_u64(std::uint64_t v)
{
    mpz_class r;
    mpz_import(r.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
    return r;
}

mpz_class power_of(std::uint64_t p, unsigned k)
{
    mpz_class r;
    mpz_class base = mpz_from_u64(p);
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), k);
    return r;
}

std::optional<unsigned> val_p(const mpz_class &n, std::uint64_t p)
{
    if (p < 2)
        throw std::invalid_argument("val_p: p must be >= 2");
    if (n == 0)
        return std::nullopt;
    mpz_class rest;
    mpz_class pz = mpz_from_u64(p);
    return static_cast<unsigned>(mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), pz.get_mpz_t()));
}

std::optional<unsigned> val_p(std::int64_t n, std::uint64_t p)
{
    if (p < 2)
        throw std::invalid_argument("val_p: p must be >= 2");
    if (n == 0)
        return std::nullopt;
    u64 v = n < 0 ? static_cast<u64>(-(n + 1)) + 1 : static_cast<u64>(n);
    unsigned k = 0;
    while (v % p == 0) {
        v /= p;
        ++k;
    }
    return k;
}

// ---------------------------------------------------------------- context

PadicContext::PadicContext(std::uint64_t p, unsigned precision)
{
    if (!is_prime(p))
        throw std::invalid_argument(fmt::format("PadicContext: {} is not prime", p));
    if (precision < 1)
        throw std::invalid_argument("PadicContext: precision must be >= 1");
    auto d = std::make_shared<Data>();
    d->p = p;
    d->precision = precision;
    d->prime = mpz_from_u64(p);
    d->powers.reserve(precision + 1);
    mpz_class acc = 1;
    for (unsigned k = 0; k <= precision; ++k) {
        d->powers.push_back(acc);
        acc *= d->prime;
    }
    d->modulus = d->powers.back();
    mpz_class top = d->modulus - 1;
    d->residue_bytes = std::max<std::size_t>(1, (mpz_sizeinbase(top.get_mpz_t(), 2) + 7) / 8);
    data_ = std::move(d);
}

mpz_class PadicContext::power(unsigned k) const
{
    if (k < data_->powers.size())
        return data_->powers[k];
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), data_->prime.get_mpz_t(), k);
    return r;
}

mpz_class PadicContext::reduce(const mpz_class &x) const
{
    mpz_class r;
    mpz_mod(r.get_mpz_t(), x.get_mpz_t(), data_->modulus.get_mpz_t());
    return r;
}

PadicContext PadicContext::with_precision(unsigned precision) const
{
    if (precision == this->precision())
        return *this;
    return PadicContext(p(), precision);
}

// ----------------------------------------------------------------- scalar

PadicScalar::PadicScalar(PadicContext ctx, const mpz_class &value)
    : ctx_(std::move(ctx)), residue_(ctx_.reduce(value))
{
}

PadicScalar::PadicScalar(PadicContext ctx, std::int64_t value)
    : PadicScalar(std::move(ctx), mpz_class(static_cast<long>(value)))
{
}

void PadicScalar::require_same(const PadicScalar &o) const
{
    if (!(ctx_ == o.ctx_))
        throw ContextMismatch("PadicScalar: operands live in different contexts");
}

unsigned PadicScalar::valuation() const
{
    auto v = val_p(residue_, ctx_.p());
    return v ? std::min(*v, ctx_.precision()) : ctx_.precision();
}

bool PadicScalar::is_unit() const { return valuation() == 0; }

PadicScalar PadicScalar::inverse() const
{
    if (!is_unit())
        throw NotInvertible("PadicScalar: not a unit at p");
    mpz_class r;
    mpz_invert(r.get_mpz_t(), residue_.get_mpz_t(), ctx_.modulus().get_mpz_t());
    return PadicScalar(ctx_, r);
}

PadicScalar PadicScalar::operator+(const PadicScalar &o) const
{
    require_same(o);
    return PadicScalar(ctx_, residue_ + o.residue_);
}

PadicScalar PadicScalar::operator-(const PadicScalar &o) const
{
    require_same(o);
    return PadicScalar(ctx_, residue_ - o.residue_);
}

PadicScalar PadicScalar::operator*(const PadicScalar &o) const
{
    require_same(o);
    return PadicScalar(ctx_, residue_ * o.residue_);
}

PadicScalar PadicScalar::operator-() const { return PadicScalar(ctx_, -residue_); }

bool PadicScalar::operator==(const PadicScalar &o) const
{
    return ctx_ == o.ctx_ && residue_ == o.residue_;
}

// ----------------------------------------------------------------- matrix

PadicMatrix::PadicMatrix(PadicContext ctx, std::size_t m)
    : ctx_(std::move(ctx)), m_(m), entries_(m * m)
{
    if (m == 0)
        throw std::invalid_argument("PadicMatrix: dimension must be >= 1");
}

PadicMatrix::PadicMatrix(PadicContext ctx, std::size_t m, std::vector<mpz_class> entries)
    : ctx_(std::move(ctx)), m_(m), entries_(std::move(entries))
{
    if (m == 0 || entries_.size() != m * m)
        throw std::invalid_argument("PadicMatrix: entry count does not match dimension");
    for (auto &e : entries_)
        if (e < 0 || e >= ctx_.modulus())
            e = ctx_.reduce(e);
}

PadicMatrix PadicMatrix::identity(PadicContext ctx, std::size_t m)
{
    PadicMatrix r(std::move(ctx), m);
    mpz_class one = r.ctx_.reduce(1);
    for (std::size_t i = 0; i < m; ++i)
        r.entries_[i * m + i] = one;
    return r;
}

PadicMatrix PadicMatrix::diagonal(PadicContext ctx, const std::vector<mpz_class> &diag)
{
    PadicMatrix r(std::move(ctx), diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i)
        r.set(i, i, diag[i]);
    return r;
}

PadicMatrix PadicMatrix::from_key(PadicContext ctx, std::size_t m, const std::string &key)
{
    const std::size_t w = ctx.residue_bytes();
    if (key.size() != w * m * m)
        throw std::invalid_argument("PadicMatrix::from_key: malformed key");
    PadicMatrix r(std::move(ctx), m);
    for (std::size_t i = 0; i < m * m; ++i)
        mpz_import(r.entries_[i].get_mpz_t(), w, 1, 1, 0, 0, key.data() + i * w);
    return r;
}

void PadicMatrix::set(std::size_t i, std::size_t j, const mpz_class &v)
{
    entries_[i * m_ + j] = ctx_.reduce(v);
}

void PadicMatrix::require_same(const PadicMatrix &o) const
{
    if (!(ctx_ == o.ctx_))
        throw ContextMismatch("PadicMatrix: operands live in different contexts");
    if (m_ != o.m_)
        throw ContextMismatch("PadicMatrix: dimension mismatch");
}

PadicMatrix PadicMatrix::operator*(const PadicMatrix &o) const
{
    require_same(o);
    PadicMatrix r(ctx_, m_);
    mpz_class acc;
    for (std::size_t i = 0; i < m_; ++i)
        for (std::size_t j = 0; j < m_; ++j) {
            acc = 0;
            for (std::size_t k = 0; k < m_; ++k)
                mpz_addmul(acc.get_mpz_t(), entries_[i * m_ + k].get_mpz_t(),
                           o.entries_[k * m_ + j].get_mpz_t());
            mpz_mod(r.entries_[i * m_ + j].get_mpz_t(), acc.get_mpz_t(),
                    ctx_.modulus().get_mpz_t());
        }
    return r;
}

PadicMatrix PadicMatrix::operator+(const PadicMatrix &o) const
{
    require_same(o);
    PadicMatrix r(ctx_, m_);
    for (std::size_t i = 0; i < entries_.size(); ++i)
        r.entries_[i] = ctx_.reduce(entries_[i] + o.entries_[i]);
    return r;
}

PadicMatrix PadicMatrix::operator-(const PadicMatrix &o) const
{
    require_same(o);
    PadicMatrix r(ctx_, m_);
    for (std::size_t i = 0; i < entries_.size(); ++i)
        r.entries_[i] = ctx_.reduce(entries_[i] - o.entries_[i]);
    return r;
}

PadicMatrix PadicMatrix::scaled(const mpz_class &c) const
{
    PadicMatrix r(ctx_, m_);
    for (std::size_t i = 0; i < entries_.size(); ++i)
        r.entries_[i] = ctx_.reduce(entries_[i] * c);
    return r;
}

bool PadicMatrix::operator==(const PadicMatrix &o) const
{
    return ctx_ == o.ctx_ && m_ == o.m_ && entries_ == o.entries_;
}

PadicMatrix PadicMatrix::pow(const mpz_class &e) const
{
    if (e < 0)
        return inverse().pow(mpz_class(-e));
    PadicMatrix r = identity(ctx_, m_);
    const std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
    for (std::size_t b = bits; b-- > 0;) {
        r = r * r;
        if (mpz_tstbit(e.get_mpz_t(), b))
            r = r * *this;
    }
    return r;
}

PadicMatrix PadicMatrix::inverse() const
{
    const std::size_t m = m_;
    const mpz_class &mod = ctx_.modulus();
    std::vector<mpz_class> a = entries_;
    std::vector<mpz_class> inv = identity(ctx_, m).entries_;
    mpz_class t;
    for (std::size_t col = 0; col < m; ++col) {
        std::size_t piv = m;
        for (std::size_t r = col; r < m; ++r)
            if (mpz_divisible_p(a[r * m + col].get_mpz_t(), ctx_.prime().get_mpz_t()) == 0) {
                piv = r;
                break;
            }
        if (piv == m)
            throw NotInvertible("mat_inverse: matrix is not invertible at p");
        if (piv != col)
            for (std::size_t j = 0; j < m; ++j) {
                std::swap(a[piv * m + j], a[col * m + j]);
                std::swap(inv[piv * m + j], inv[col * m + j]);
            }
        mpz_class pinv;
        mpz_invert(pinv.get_mpz_t(), a[col * m + col].get_mpz_t(), mod.get_mpz_t());
        for (std::size_t j = 0; j < m; ++j) {
            a[col * m + j] = ctx_.reduce(a[col * m + j] * pinv);
            inv[col * m + j] = ctx_.reduce(inv[col * m + j] * pinv);
        }
        for (std::size_t r = 0; r < m; ++r) {
            if (r == col || a[r * m + col] == 0)
                continue;
            t = a[r * m + col];
            for (std::size_t j = 0; j < m; ++j) {
                a[r * m + j] = ctx_.reduce(a[r * m + j] - t * a[col * m + j]);
                inv[r * m + j] = ctx_.reduce(inv[r * m + j] - t * inv[col * m + j]);
            }
        }
    }
    return PadicMatrix(ctx_, m, std::move(inv));
}

mpz_class integer_determinant(std::vector<mpz_class> a, std::size_t m)
{
    // Bareiss: every intermediate division is exact.
    if (a.size() != m * m)
        throw std::invalid_argument("integer_determinant: bad size");
    int sign = 1;
    mpz_class prev = 1;
    for (std::size_t k = 0; k + 1 < m; ++k) {
        if (a[k * m + k] == 0) {
            std::size_t r = k + 1;
            while (r < m && a[r * m + k] == 0)
                ++r;
            if (r == m)
                return 0;
            for (std::size_t j = 0; j < m; ++j)
                std::swap(a[k * m + j], a[r * m + j]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < m; ++i)
            for (std::size_t j = k + 1; j < m; ++j) {
                mpz_class v = a[i * m + j] * a[k * m + k] - a[i * m + k] * a[k * m + j];
                mpz_divexact(a[i * m + j].get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
            }
        prev = a[k * m + k];
    }
    return sign * a[m * m - 1];
}

mpz_class PadicMatrix::determinant() const
{
    return ctx_.reduce(integer_determinant(entries_, m_));
}

bool PadicMatrix::is_identity() const { return congruent_to_identity(ctx_.precision()); }

bool PadicMatrix::congruent_to_identity(unsigned k) const
{
    const mpz_class pk = ctx_.power(k);
    for (std::size_t i = 0; i < m_; ++i)
        for (std::size_t j = 0; j < m_; ++j) {
            mpz_class d = entries_[i * m_ + j] - (i == j ? 1 : 0);
            if (mpz_divisible_p(d.get_mpz_t(), pk.get_mpz_t()) == 0)
                return false;
        }
    return true;
}

unsigned PadicMatrix::valuation() const
{
    unsigned v = ctx_.precision();
    for (const auto &e : entries_)
        if (auto ve = val_p(e, ctx_.p()))
            v = std::min(v, *ve);
    return v;
}

PadicMatrix PadicMatrix::reduced_to(const PadicContext &lower) const
{
    if (lower.p() != ctx_.p() || lower.precision() > ctx_.precision())
        throw PrecisionError("reduced_to: target precision exceeds the source precision");
    return PadicMatrix(lower, m_, entries_);
}

std::string PadicMatrix::key() const
{
    const std::size_t w = ctx_.residue_bytes();
    std::string out(w * entries_.size(), '\0');
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        const mpz_class &e = entries_[i];
        if (e == 0)
            continue;
        std::size_t used = (mpz_sizeinbase(e.get_mpz_t(), 2) + 7) / 8;
        std::size_t count = 0;
        mpz_export(out.data() + i * w + (w - used), &count, 1, 1, 0, 0, e.get_mpz_t());
    }
    return out;
}

std::vector<std::string> PadicMatrix::to_decimal_strings() const
{
    std::vector<std::string> out;
    out.reserve(entries_.size());
    for (const auto &e : entries_)
        out.push_back(e.get_str());
    return out;
}

PadicMatrix mat_mul(const PadicMatrix &a, const PadicMatrix &b) { return a * b; }

PadicMatrix mat_inverse(const PadicMatrix &a) { return a.inverse(); }

PadicMatrix commutator(const PadicMatrix &a, const PadicMatrix &b)
{
    return a * b * a.inverse() * b.inverse();
}

} // namespace galois_lab
