#include "galois_lab/lie.hpp"

#include <fmt/format.h>

#include <deque>
#include <stdexcept>

namespace galois_lab {

namespace {

mpz_class lattice_scale(std::uint64_t p)
{
    mpz_class s;
    mpz_ui_pow_ui(s.get_mpz_t(), p, 1 + epsilon_for(p));
    return s;
}

} // namespace

LieElement::LieElement(std::uint64_t p, std::size_t m, std::vector<mpz_class> entries)
    : p_(p), m_(m), entries_(std::move(entries))
{
    if (!is_prime(p))
        throw std::invalid_argument(fmt::format("LieElement: {} is not prime", p));
    if (m == 0 || entries_.size() != m * m)
        throw std::invalid_argument("LieElement: entry count does not match dimension");
    const mpz_class s = lattice_scale(p);
    for (const auto &e : entries_)
        if (mpz_divisible_p(e.get_mpz_t(), s.get_mpz_t()) == 0)
            throw std::invalid_argument(
                fmt::format("LieElement: entry {} is not divisible by {}", e.get_str(), s.get_str()));
}

LieElement LieElement::zero(std::uint64_t p, std::size_t m)
{
    return LieElement(p, m, std::vector<mpz_class>(m * m));
}

LieElement LieElement::unit(std::uint64_t p, std::size_t m, std::size_t i, std::size_t j)
{
    if (i >= m || j >= m)
        throw std::out_of_range("LieElement::unit: index out of range");
    std::vector<mpz_class> e(m * m);
    e[i * m + j] = lattice_scale(p);
    return LieElement(p, m, std::move(e));
}

mpz_class LieElement::trace() const
{
    mpz_class t = 0;
    for (std::size_t i = 0; i < m_; ++i)
        t += entries_[i * m_ + i];
    return t;
}

bool LieElement::is_zero() const
{
    for (const auto &e : entries_)
        if (e != 0)
            return false;
    return true;
}

void LieElement::require_same(const LieElement &o) const
{
    if (p_ != o.p_ || m_ != o.m_)
        throw ContextMismatch("LieElement: operands differ in p or dimension");
}

LieElement LieElement::operator+(const LieElement &o) const
{
    require_same(o);
    std::vector<mpz_class> e(entries_.size());
    for (std::size_t i = 0; i < e.size(); ++i)
        e[i] = entries_[i] + o.entries_[i];
    return LieElement(p_, m_, std::move(e));
}

LieElement LieElement::operator-(const LieElement &o) const
{
    require_same(o);
    std::vector<mpz_class> e(entries_.size());
    for (std::size_t i = 0; i < e.size(); ++i)
        e[i] = entries_[i] - o.entries_[i];
    return LieElement(p_, m_, std::move(e));
}

LieElement LieElement::operator-() const { return scaled(-1); }

LieElement LieElement::scaled(const mpz_class &c) const
{
    std::vector<mpz_class> e(entries_.size());
    for (std::size_t i = 0; i < e.size(); ++i)
        e[i] = entries_[i] * c;
    return LieElement(p_, m_, std::move(e));
}

bool LieElement::operator==(const LieElement &o) const
{
    return p_ == o.p_ && m_ == o.m_ && entries_ == o.entries_;
}

PadicMatrix LieElement::to_matrix(const PadicContext &ctx) const
{
    if (ctx.p() != p_)
        throw ContextMismatch("LieElement::to_matrix: prime mismatch");
    return PadicMatrix(ctx, m_, entries_);
}

LieElement bracket(const LieElement &a, const LieElement &b)
{
    if (a.p() != b.p() || a.dim() != b.dim())
        throw ContextMismatch("bracket: operands differ in p or dimension");
    const std::size_t m = a.dim();
    std::vector<mpz_class> r(m * m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            mpz_class &acc = r[i * m + j];
            for (std::size_t k = 0; k < m; ++k) {
                mpz_addmul(acc.get_mpz_t(), a.at(i, k).get_mpz_t(), b.at(k, j).get_mpz_t());
                mpz_submul(acc.get_mpz_t(), b.at(i, k).get_mpz_t(), a.at(k, j).get_mpz_t());
            }
        }
    return LieElement(a.p(), m, std::move(r));
}

std::pair<LieElement, LieElement> standard_generators(std::size_t m, std::uint64_t p)
{
    if (m < 2)
        throw std::invalid_argument("standard_generators: m must be >= 2");
    if (m == 2)
        return {LieElement::unit(p, 2, 0, 1) + LieElement::unit(p, 2, 1, 0),
                LieElement::unit(p, 2, 0, 0) - LieElement::unit(p, 2, 1, 1)};
    LieElement x = LieElement::zero(p, m);
    for (std::size_t i = 0; i + 1 < m; ++i)
        x = x + LieElement::unit(p, m, i, i + 1);
    LieElement y = (m % 2 == 1) ? LieElement::unit(p, m, m - 1, 0)
                                : LieElement::unit(p, m, m - 2, 0) + LieElement::unit(p, m, m - 1, 1);
    return {x, y};
}

// ------------------------------------------------------------- span basis

namespace {

std::vector<mpq_class> flatten(const LieElement &x)
{
    std::vector<mpq_class> v(x.entries().size());
    for (std::size_t i = 0; i < v.size(); ++i)
        v[i] = x.entries()[i];
    return v;
}

// Reduces v against the RREF rows; afterwards v has zeros in all pivot columns.
void reduce_against(std::vector<mpq_class> &v, const std::vector<std::vector<mpq_class>> &rows,
                    const std::vector<std::size_t> &pivots)
{
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const mpq_class c = v[pivots[r]];
        if (c == 0)
            continue;
        for (std::size_t j = 0; j < v.size(); ++j)
            if (rows[r][j] != 0)
                v[j] -= c * rows[r][j];
    }
}

} // namespace

bool SpanBasis::contains(const LieElement &x) const
{
    auto v = flatten(x);
    reduce_against(v, basis, pivots);
    for (const auto &c : v)
        if (c != 0)
            return false;
    return true;
}

bool SpanBasis::insert(const LieElement &x)
{
    auto v = flatten(x);
    reduce_against(v, basis, pivots);
    std::size_t piv = v.size();
    for (std::size_t j = 0; j < v.size(); ++j)
        if (v[j] != 0) {
            piv = j;
            break;
        }
    if (piv == v.size())
        return false;
    const mpq_class lead = v[piv];
    for (auto &c : v)
        c /= lead;
    // keep the form reduced: clear the new pivot column in older rows
    for (auto &row : basis) {
        const mpq_class c = row[piv];
        if (c == 0)
            continue;
        for (std::size_t j = 0; j < v.size(); ++j)
            if (v[j] != 0)
                row[j] -= c * v[j];
    }
    // rows stay sorted by pivot column
    std::size_t pos = 0;
    while (pos < pivots.size() && pivots[pos] < piv)
        ++pos;
    basis.insert(basis.begin() + static_cast<std::ptrdiff_t>(pos), std::move(v));
    pivots.insert(pivots.begin() + static_cast<std::ptrdiff_t>(pos), piv);
    elements.push_back(x);
    return true;
}

SpanBasis bracket_closure(std::span<const LieElement> gens, std::optional<std::size_t> max_dim,
                          const BracketFn &br)
{
    if (gens.empty())
        throw std::invalid_argument("bracket_closure: empty generator list");
    SpanBasis span;
    span.m = gens.front().dim();
    span.p = gens.front().p();
    const std::size_t limit = max_dim.value_or(span.m * span.m);

    std::deque<std::size_t> queue;
    auto add = [&](const LieElement &x) {
        if (x.p() != span.p || x.dim() != span.m)
            throw ContextMismatch("bracket_closure: generators differ in p or dimension");
        if (!span.insert(x))
            return;
        if (span.dim() > limit)
            throw std::logic_error(
                fmt::format("bracket_closure: span exceeded max_dim = {}", limit));
        queue.push_back(span.elements.size() - 1);
    };

    for (const auto &g : gens)
        add(g);
    while (!queue.empty()) {
        const std::size_t idx = queue.front();
        queue.pop_front();
        // elements may grow while we iterate; a copy keeps the reference valid
        const LieElement fresh = span.elements[idx];
        for (std::size_t j = 0; j < span.elements.size(); ++j) {
            if (j == idx)
                continue;
            add(br(fresh, span.elements[j]));
        }
    }
    return span;
}

// -------------------------------------------------------------- valuation

std::optional<unsigned> w_valuation(const LieElement &x)
{
    std::optional<unsigned> v;
    for (const auto &e : x.entries())
        if (auto ve = val_p(e, x.p()))
            v = v ? std::min(*v, *ve) : *ve;
    if (!v)
        return std::nullopt;
    return *v - (1 + x.epsilon());
}

std::vector<std::uint64_t> leading_coefficients(const LieElement &x, unsigned k)
{
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), x.p(), 1 + x.epsilon() + k);
    std::vector<std::uint64_t> out(x.entries().size());
    const mpz_class pz = mpz_from_u64(x.p());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const auto &e = x.entries()[i];
        if (mpz_divisible_p(e.get_mpz_t(), scale.get_mpz_t()) == 0)
            throw PrecisionError("leading_coefficients: element is not in p^k gl_m");
        mpz_class q, r;
        mpz_divexact(q.get_mpz_t(), e.get_mpz_t(), scale.get_mpz_t());
        mpz_mod(r.get_mpz_t(), q.get_mpz_t(), pz.get_mpz_t());
        out[i] = r.get_ui();
    }
    return out;
}

namespace {

using u64 = std::uint64_t;

u64 inv_mod_p(u64 a, u64 p)
{
    mpz_class r;
    mpz_class az = mpz_from_u64(a), pz = mpz_from_u64(p);
    mpz_invert(r.get_mpz_t(), az.get_mpz_t(), pz.get_mpz_t());
    return r.get_ui();
}

// If lx = c * ly over F_p (ly != 0), returns c; otherwise nullopt.
std::optional<u64> proportional(const std::vector<u64> &lx, const std::vector<u64> &ly, u64 p)
{
    std::size_t j = 0;
    while (j < ly.size() && ly[j] == 0)
        ++j;
    if (j == ly.size())
        return std::nullopt;
    const u64 c = static_cast<u64>(static_cast<unsigned __int128>(lx[j]) * inv_mod_p(ly[j], p) % p);
    for (std::size_t i = 0; i < lx.size(); ++i)
        if (static_cast<u64>(static_cast<unsigned __int128>(c) * ly[i] % p) != lx[i])
            return std::nullopt;
    return c;
}

} // namespace

bool independent_at_level(const LieElement &x, const LieElement &y, unsigned k)
{
    const auto lx = leading_coefficients(x, k);
    const auto ly = leading_coefficients(y, k);
    auto nonzero = [](const std::vector<u64> &v) {
        for (u64 c : v)
            if (c)
                return true;
        return false;
    };
    if (!nonzero(lx) || !nonzero(ly))
        return false;
    return !proportional(lx, ly, x.p()).has_value();
}

NormalizedPair normalize_generators(const LieElement &x, const LieElement &y, unsigned precision_budget)
{
    if (x.p() != y.p() || x.dim() != y.dim())
        throw ContextMismatch("normalize_generators: operands differ in p or dimension");
    const u64 p = x.p();
    const auto wx0 = w_valuation(x);
    const auto wy0 = w_valuation(y);
    if (!wx0 || !wy0)
        throw NormalizationError("normalize_generators: zero generator spans an abelian algebra");

    LieElement cx = x;
    const LieElement base_y = y;
    const unsigned wy = *wy0;
    unsigned wx = *wx0;
    // the lower-valuation side is lifted by a p-power first
    if (wx < wy) {
        cx = cx.scaled(power_of(p, wy - wx));
        wx = wy;
    }
    for (unsigned iter = 0;; ++iter) {
        const unsigned k = wx;
        const LieElement cy = base_y.scaled(power_of(p, k - wy));
        const auto lx = leading_coefficients(cx, k);
        const auto ly = leading_coefficients(cy, k);
        const auto c = proportional(lx, ly, p);
        if (!c)
            return {cx, cy, k, iter};
        if (iter >= precision_budget)
            throw NormalizationError(
                "normalization did not terminate within budget (abelian span or budget too small)");
        cx = cx - cy.scaled(mpz_from_u64(*c));
        const auto w = w_valuation(cx);
        if (!w)
            throw NormalizationError(
                "normalize_generators: x is a multiple of y, the pair spans an abelian algebra");
        wx = *w;
    }
}

} // namespace galois_lab
