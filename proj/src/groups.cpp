#include "galois_lab/groups.hpp"

#include <fmt/format.h>

#include <cstdlib>
#include <algorithm>
#include <functional>

namespace galois_lab {

// ------------------------------------------------------------ exp and log

namespace {

unsigned floor_log(std::uint64_t p, std::uint64_t n)
{
    unsigned k = 0;
    while (n >= p) {
        n /= p;
        ++k;
    }
    return k;
}

unsigned legendre(std::uint64_t p, std::uint64_t n)
{
    unsigned v = 0;
    while (n) {
        n /= p;
        v += static_cast<unsigned>(n);
    }
    return v;
}

// smallest n >= 1 with n(1+eps)(p-1) - (n-1) >= N(p-1)
std::uint64_t exp_cutoff(std::uint64_t p, unsigned precision)
{
    const unsigned __int128 e1 = 1 + epsilon_for(p);
    const unsigned __int128 target = static_cast<unsigned __int128>(precision) * (p - 1);
    std::uint64_t n = 1;
    while (static_cast<unsigned __int128>(n) * e1 * (p - 1) - (n - 1) < target)
        ++n;
    return n;
}

std::uint64_t log_cutoff(std::uint64_t p, unsigned precision)
{
    const std::uint64_t e1 = 1 + epsilon_for(p);
    std::uint64_t n = 1;
    while (n * e1 < precision + static_cast<std::uint64_t>(floor_log(p, n)))
        ++n;
    return n;
}

// Divides every entry exactly by p^v; throws if the division is not exact.
void divide_exact(std::vector<mpz_class> &entries, const mpz_class &pv, const char *where)
{
    for (auto &e : entries) {
        if (mpz_divisible_p(e.get_mpz_t(), pv.get_mpz_t()) == 0)
            throw PrecisionError(fmt::format("{}: series term not divisible by {}", where, pv.get_str()));
        mpz_divexact(e.get_mpz_t(), e.get_mpz_t(), pv.get_mpz_t());
    }
}

std::vector<mpz_class> mul_mod(const std::vector<mpz_class> &a, const std::vector<mpz_class> &b,
                               std::size_t m, const mpz_class &mod)
{
    std::vector<mpz_class> r(m * m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            mpz_class &acc = r[i * m + j];
            for (std::size_t k = 0; k < m; ++k)
                mpz_addmul(acc.get_mpz_t(), a[i * m + k].get_mpz_t(), b[k * m + j].get_mpz_t());
            mpz_mod(acc.get_mpz_t(), acc.get_mpz_t(), mod.get_mpz_t());
        }
    return r;
}

} // namespace

unsigned exp_truncation(std::uint64_t p, unsigned precision)
{
    return static_cast<unsigned>(exp_cutoff(p, precision) + 1);
}

unsigned log_truncation(std::uint64_t p, unsigned precision)
{
    return static_cast<unsigned>(log_cutoff(p, precision) + 1);
}

PadicMatrix exp_mat(const LieElement &x, const PadicContext &ctx)
{
    const std::uint64_t p = ctx.p();
    if (x.p() != p)
        throw ContextMismatch("exp_mat: prime mismatch");
    const std::size_t m = x.dim();
    const unsigned N = ctx.precision();
    const std::uint64_t last = exp_cutoff(p, N);
    // headroom for the p-parts of 1, 2, ..., last
    unsigned work = N + legendre(p, last);
    const mpz_class pz = mpz_from_u64(p);

    std::vector<mpz_class> xw(m * m);
    mpz_class mod_w = power_of(p, work);
    for (std::size_t i = 0; i < xw.size(); ++i)
        mpz_mod(xw[i].get_mpz_t(), x.entries()[i].get_mpz_t(), mod_w.get_mpz_t());

    std::vector<mpz_class> term = PadicMatrix::identity(ctx, m).entries();
    std::vector<mpz_class> sum = term;
    for (std::uint64_t n = 1; n <= last; ++n) {
        term = mul_mod(term, xw, m, mod_w);
        const unsigned vn = *val_p(static_cast<std::int64_t>(n), p);
        if (vn) {
            divide_exact(term, power_of(p, vn), "exp_mat");
            work -= vn;
            mod_w = power_of(p, work);
        }
        mpz_class unit = mpz_from_u64(n);
        mpz_class pv = power_of(p, vn);
        mpz_divexact(unit.get_mpz_t(), unit.get_mpz_t(), pv.get_mpz_t());
        mpz_class inv;
        mpz_invert(inv.get_mpz_t(), unit.get_mpz_t(), mod_w.get_mpz_t());
        bool zero = true;
        for (std::size_t i = 0; i < term.size(); ++i) {
            term[i] = term[i] * inv;
            mpz_mod(term[i].get_mpz_t(), term[i].get_mpz_t(), mod_w.get_mpz_t());
            sum[i] += term[i];
            if (term[i] != 0)
                zero = false;
        }
        if (zero)
            break;
    }
    return PadicMatrix(ctx, m, std::move(sum));
}

LieElement log_mat(const PadicMatrix &z)
{
    const PadicContext &ctx = z.context();
    const std::uint64_t p = ctx.p();
    const unsigned e1 = 1 + ctx.epsilon();
    if (!z.congruent_to_identity(std::min(e1, ctx.precision())))
        throw DomainError("log_mat: argument is not congruent to 1 mod p^(1+eps)");
    const std::size_t m = z.dim();
    const unsigned N = ctx.precision();
    const std::uint64_t last = log_cutoff(p, N);
    const unsigned work = N + floor_log(p, last);
    const mpz_class mod_w = power_of(p, work);
    const mpz_class &mod_n = ctx.modulus();

    std::vector<mpz_class> u = z.entries();
    for (std::size_t i = 0; i < m; ++i)
        u[i * m + i] -= 1;
    for (auto &e : u)
        mpz_mod(e.get_mpz_t(), e.get_mpz_t(), mod_w.get_mpz_t());

    std::vector<mpz_class> power = u;
    std::vector<mpz_class> sum(m * m);
    for (std::uint64_t n = 1; n <= last; ++n) {
        if (n > 1)
            power = mul_mod(power, u, m, mod_w);
        std::vector<mpz_class> term = power;
        const unsigned vn = *val_p(static_cast<std::int64_t>(n), p);
        mpz_class pv = power_of(p, vn);
        if (vn)
            divide_exact(term, pv, "log_mat");
        mpz_class unit = mpz_from_u64(n);
        mpz_divexact(unit.get_mpz_t(), unit.get_mpz_t(), pv.get_mpz_t());
        mpz_class inv;
        mpz_invert(inv.get_mpz_t(), unit.get_mpz_t(), mod_n.get_mpz_t());
        const bool negative = (n % 2 == 0);
        bool zero = true;
        for (std::size_t i = 0; i < term.size(); ++i) {
            if (power[i] != 0)
                zero = false;
            mpz_class t = term[i] * inv;
            if (negative)
                sum[i] -= t;
            else
                sum[i] += t;
        }
        if (zero)
            break;
    }
    for (auto &e : sum)
        mpz_mod(e.get_mpz_t(), e.get_mpz_t(), mod_n.get_mpz_t());
    return LieElement(p, m, std::move(sum));
}


// --------------------------------------------------------- finite groups

std::uint64_t default_max_elements()
{
    if (const char *env = std::getenv("GALOIS_LAB_MAX_ELEMENTS")) {
        char *end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0' && v > 0)
            return v;
    }
    return 1'000'000;
}

struct GroupBuilder {
    static FiniteMatrixGroup empty(const PadicContext &ctx, std::size_t m) { return FiniteMatrixGroup(ctx, m); }
    static bool insert(FiniteMatrixGroup &g, const PadicMatrix &x) { return g.insert(x); }
    static void set_generators(FiniteMatrixGroup &g, std::vector<PadicMatrix> gens)
    {
        g.generators_ = std::move(gens);
    }
    static const std::string &key_at(const FiniteMatrixGroup &g, std::size_t i) { return g.order_[i]; }

    // BFS closure of gens. With `inside` set, the closure must stay within it
    // and nullopt is returned as soon as it leaves.
    static std::optional<FiniteMatrixGroup> closure(const PadicContext &ctx, std::size_t m,
                                                    std::span<const PadicMatrix> gens,
                                                    std::uint64_t max_elements, const FiniteMatrixGroup *inside)
    {
        std::vector<PadicMatrix> step;
        std::unordered_map<std::string, char> seen;
        auto push = [&](const PadicMatrix &h) {
            if (!h.is_identity() && seen.emplace(h.key(), 0).second)
                step.push_back(h);
        };
        for (const auto &h : gens) {
            if (!(h.context() == ctx) || h.dim() != m)
                throw ContextMismatch("generate: generator context mismatch");
            push(h);
        }
        const std::size_t base = step.size();
        for (std::size_t i = 0; i < base; ++i)
            push(step[i].inverse());

        FiniteMatrixGroup out(ctx, m);
        out.insert(PadicMatrix::identity(ctx, m));
        for (std::size_t head = 0; head < out.order_.size(); ++head) {
            const PadicMatrix e = PadicMatrix::from_key(ctx, m, out.order_[head]);
            for (const auto &s : step) {
                std::string key = (e * s).key();
                if (out.index_.count(key))
                    continue;
                if (inside && !inside->contains_key(key))
                    return std::nullopt;
                if (out.order() >= max_elements)
                    throw EnumerationInfeasible(
                        fmt::format("enumeration infeasible: group order exceeds the element bound {}",
                                    max_elements),
                        mpz_from_u64(max_elements) + 1);
                out.insert_key(std::move(key));
            }
        }
        out.generators_.assign(gens.begin(), gens.end());
        return out;
    }

    // Greedy generating set drawn from the elements in discovery order; the
    // flag reports whether the element set turned out to be a group.
    static std::pair<std::vector<PadicMatrix>, bool> greedy(const FiniteMatrixGroup &set)
    {
        std::vector<PadicMatrix> gens;
        if (set.order() == 0 || !set.contains(PadicMatrix::identity(set.ctx_, set.m_)))
            return {gens, false};
        FiniteMatrixGroup cover = FiniteMatrixGroup::trivial(set.ctx_, set.m_);
        for (const auto &key : set.order_) {
            if (cover.contains_key(key))
                continue;
            gens.push_back(PadicMatrix::from_key(set.ctx_, set.m_, key));
            auto next = closure(set.ctx_, set.m_, gens, UINT64_MAX, &set);
            if (!next)
                return {gens, false};
            cover = std::move(*next);
        }
        return {gens, true};
    }
};

PadicMatrix FiniteMatrixGroup::element(std::size_t i) const
{
    return PadicMatrix::from_key(ctx_, m_, order_.at(i));
}

std::vector<PadicMatrix> FiniteMatrixGroup::elements() const
{
    std::vector<PadicMatrix> out;
    out.reserve(order_.size());
    for (const auto &k : order_)
        out.push_back(PadicMatrix::from_key(ctx_, m_, k));
    return out;
}

bool FiniteMatrixGroup::contains(const PadicMatrix &g) const
{
    if (!(g.context() == ctx_) || g.dim() != m_)
        return false;
    return index_.count(g.key()) != 0;
}

bool FiniteMatrixGroup::insert(const PadicMatrix &g) { return insert_key(g.key()); }

bool FiniteMatrixGroup::insert_key(std::string key)
{
    auto [it, fresh] = index_.emplace(key, order_.size());
    if (fresh)
        order_.push_back(std::move(key));
    return fresh;
}

FiniteMatrixGroup FiniteMatrixGroup::trivial(const PadicContext &ctx, std::size_t m)
{
    FiniteMatrixGroup g(ctx, m);
    g.insert(PadicMatrix::identity(ctx, m));
    return g;
}

FiniteMatrixGroup FiniteMatrixGroup::from_elements(const PadicContext &ctx, std::size_t m,
                                                   std::span<const PadicMatrix> elements)
{
    FiniteMatrixGroup g(ctx, m);
    for (const auto &e : elements) {
        if (!(e.context() == ctx) || e.dim() != m)
            throw ContextMismatch("FiniteMatrixGroup::from_elements: element context mismatch");
        g.insert(e);
    }
    return g;
}

FiniteMatrixGroup FiniteMatrixGroup::generate(const PadicContext &ctx, std::size_t m,
                                              std::span<const PadicMatrix> gens, std::uint64_t max_elements)
{
    return *GroupBuilder::closure(ctx, m, gens, max_elements, nullptr);
}

std::vector<PadicMatrix> FiniteMatrixGroup::generating_set() const
{
    if (!generators_.empty() || order() <= 1)
        return generators_;
    return GroupBuilder::greedy(*this).first;
}

bool FiniteMatrixGroup::is_closed() const
{
    if (!contains(PadicMatrix::identity(ctx_, m_)))
        return false;
    if (generators_.empty())
        return order() == 1 || GroupBuilder::greedy(*this).second;
    for (const auto &g : generators_)
        if (!contains(g))
            return false;
    for (const auto &key : order_) {
        const PadicMatrix e = PadicMatrix::from_key(ctx_, m_, key);
        for (const auto &g : generators_)
            if (!contains(e * g))
                return false;
    }
    return true;
}

bool FiniteMatrixGroup::is_pro_p_level() const
{
    const unsigned level = std::min(1 + ctx_.epsilon(), ctx_.precision());
    for (const auto &key : order_)
        if (!PadicMatrix::from_key(ctx_, m_, key).congruent_to_identity(level))
            return false;
    return true;
}

std::optional<unsigned> FiniteMatrixGroup::log_order() const
{
    std::size_t n = order();
    if (n == 0)
        return std::nullopt;
    unsigned k = 0;
    while (n % ctx_.p() == 0) {
        n /= ctx_.p();
        ++k;
    }
    if (n != 1)
        return std::nullopt;
    return k;
}

bool FiniteMatrixGroup::is_subgroup_of(const FiniteMatrixGroup &other) const
{
    if (!(ctx_ == other.ctx_) || m_ != other.m_)
        return false;
    for (const auto &key : order_)
        if (!other.contains_key(key))
            return false;
    return true;
}

bool FiniteMatrixGroup::same_elements(const FiniteMatrixGroup &other) const
{
    return order() == other.order() && is_subgroup_of(other);
}

// ------------------------------------------------------ congruence groups

namespace {

struct Counter {
    std::vector<std::uint64_t> digits;
    std::uint64_t radix;
    // false once every combination has been visited
    bool next()
    {
        for (auto &d : digits) {
            if (++d < radix)
                return true;
            d = 0;
        }
        return false;
    }
};

std::uint64_t checked_count(const mpz_class &estimate, std::uint64_t max_elements, const char *what)
{
    if (estimate > mpz_from_u64(max_elements))
        throw EnumerationInfeasible(
            fmt::format("{}: estimated order {} exceeds the element bound {}", what, estimate.get_str(),
                        max_elements),
            estimate);
    return estimate.get_ui();
}

void validate_level(const CongruenceSubgroupLevel &level)
{
    if (level.m == 0)
        throw std::invalid_argument("congruence level: m must be >= 1");
    if (level.k == 0)
        throw std::invalid_argument("congruence level: k must be >= 1");
}

std::vector<PadicMatrix> kernel_candidates(const PadicContext &ctx, std::size_t m, unsigned e, bool sl_only)
{
    const mpz_class pe = ctx.power(e);
    std::vector<PadicMatrix> out;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            if (i == j && sl_only)
                continue;
            PadicMatrix a = PadicMatrix::identity(ctx, m);
            a.set(i, j, a.at(i, j) + pe);
            out.push_back(std::move(a));
        }
    if (sl_only) {
        const mpz_class u = 1 + pe;
        mpz_class uinv;
        mpz_invert(uinv.get_mpz_t(), u.get_mpz_t(), ctx.modulus().get_mpz_t());
        for (std::size_t i = 0; i + 1 < m; ++i) {
            PadicMatrix a = PadicMatrix::identity(ctx, m);
            a.set(i, i, u);
            a.set(i + 1, i + 1, uinv);
            out.push_back(std::move(a));
        }
    }
    return out;
}

} // namespace

FiniteMatrixGroup congruence_kernel(const CongruenceSubgroupLevel &level, bool sl_only, std::uint64_t max_elements)
{
    validate_level(level);
    const PadicContext ctx(level.p, level.precision);
    const std::size_t m = level.m;
    const unsigned e = level.k + ctx.epsilon();
    if (e >= level.precision || (sl_only && m == 1))
        return FiniteMatrixGroup::trivial(ctx, m);

    const std::size_t free = sl_only ? m * m - 1 : m * m;
    const mpz_class q = ctx.power(level.precision - e);
    mpz_class estimate;
    mpz_pow_ui(estimate.get_mpz_t(), q.get_mpz_t(), free);
    checked_count(estimate, max_elements, "congruence_kernel");

    const mpz_class pe = ctx.power(e);
    const mpz_class &mod = ctx.modulus();
    FiniteMatrixGroup group = GroupBuilder::empty(ctx, m);
    Counter counter{std::vector<std::uint64_t>(free, 0), q.get_ui()};
    const std::size_t last = m * m - 1;
    do {
        std::vector<mpz_class> a(m * m);
        for (std::size_t t = 0; t < free; ++t)
            a[t] = pe * mpz_from_u64(counter.digits[t]);
        for (std::size_t i = 0; i < m; ++i)
            a[i * m + i] += 1;
        if (sl_only) {
            // det A = a_mm * C + R with C the leading (m-1)-minor, a unit
            a[last] = 0;
            const mpz_class r = integer_determinant(a, m);
            std::vector<mpz_class> minor;
            minor.reserve((m - 1) * (m - 1));
            for (std::size_t i = 0; i + 1 < m; ++i)
                for (std::size_t j = 0; j + 1 < m; ++j)
                    minor.push_back(a[i * m + j]);
            mpz_class c = integer_determinant(std::move(minor), m - 1);
            mpz_mod(c.get_mpz_t(), c.get_mpz_t(), mod.get_mpz_t());
            mpz_class cinv;
            mpz_invert(cinv.get_mpz_t(), c.get_mpz_t(), mod.get_mpz_t());
            a[last] = (1 - r) * cinv;
        }
        GroupBuilder::insert(group, PadicMatrix(ctx, m, std::move(a)));
    } while (counter.next());

    auto candidates = kernel_candidates(ctx, m, e, sl_only);
    auto check = GroupBuilder::closure(ctx, m, candidates, UINT64_MAX, &group);
    if (check && check->order() == group.order())
        GroupBuilder::set_generators(group, std::move(candidates));
    else
        GroupBuilder::set_generators(group, GroupBuilder::greedy(group).first);
    return group;
}

FiniteMatrixGroup exp_lattice_image(const CongruenceSubgroupLevel &level, bool sl_only, std::uint64_t max_elements)
{
    validate_level(level);
    const PadicContext ctx(level.p, level.precision);
    const std::size_t m = level.m;
    const unsigned e = level.k + ctx.epsilon();
    if (e >= level.precision || (sl_only && m == 1))
        return FiniteMatrixGroup::trivial(ctx, m);

    const std::size_t free = sl_only ? m * m - 1 : m * m;
    const mpz_class q = ctx.power(level.precision - e);
    mpz_class estimate;
    mpz_pow_ui(estimate.get_mpz_t(), q.get_mpz_t(), free);
    checked_count(estimate, max_elements, "exp_lattice_image");

    const mpz_class pe = ctx.power(e);
    FiniteMatrixGroup group = GroupBuilder::empty(ctx, m);
    Counter counter{std::vector<std::uint64_t>(free, 0), q.get_ui()};
    do {
        std::vector<mpz_class> x(m * m);
        for (std::size_t t = 0; t < free; ++t)
            x[t] = pe * mpz_from_u64(counter.digits[t]);
        if (sl_only) {
            mpz_class trace = 0;
            for (std::size_t i = 0; i + 1 < m; ++i)
                trace += x[i * m + i];
            x[m * m - 1] = -trace;
        }
        GroupBuilder::insert(group, exp_mat(LieElement(level.p, m, std::move(x)), ctx));
    } while (counter.next());
    return group;
}

FiniteMatrixGroup generated_subgroup(std::span<const PadicMatrix> gens, const PadicContext &ctx,
                                     std::uint64_t max_elements)
{
    if (gens.empty())
        throw std::invalid_argument("generated_subgroup: empty generator list");
    const unsigned level = std::min(1 + ctx.epsilon(), ctx.precision());
    for (const auto &g : gens)
        if (!(g.context() == ctx) || !g.congruent_to_identity(level))
            throw DomainError("generated_subgroup: generator is not congruent to 1 mod p^(1+eps)");
    return FiniteMatrixGroup::generate(ctx, gens.front().dim(), gens, max_elements);
}

// ------------------------------------------------------ subgroup calculus

namespace {

std::vector<PadicMatrix> with_inverses(const std::vector<PadicMatrix> &gens)
{
    std::vector<PadicMatrix> out = gens;
    for (const auto &g : gens)
        out.push_back(g.inverse());
    return out;
}

unsigned log_order_or_throw(const FiniteMatrixGroup &g, const char *what)
{
    auto k = g.log_order();
    if (!k)
        throw std::invalid_argument(fmt::format("{}: group order {} is not a power of p", what, g.order()));
    return *k;
}

unsigned quotient_rank_given(const FiniteMatrixGroup &group, const FiniteMatrixGroup &phi,
                             const FiniteMatrixGroup &normal)
{
    std::vector<PadicMatrix> gens = phi.generating_set();
    for (auto &g : normal.generating_set())
        gens.push_back(std::move(g));
    const FiniteMatrixGroup product = FiniteMatrixGroup::generate(group.context(), group.dim(), gens);
    return log_order_or_throw(group, "quotient_p_rank") - log_order_or_throw(product, "quotient_p_rank");
}

} // namespace

FiniteMatrixGroup normal_closure(std::span<const PadicMatrix> seeds, const FiniteMatrixGroup &group,
                                 std::uint64_t max_elements)
{
    const auto conj = with_inverses(group.generating_set());
    std::vector<PadicMatrix> hgens;
    for (const auto &s : seeds)
        if (!s.is_identity())
            hgens.push_back(s);
    FiniteMatrixGroup h = FiniteMatrixGroup::generate(group.context(), group.dim(), hgens, max_elements);
    std::size_t checked = 0;
    while (checked < hgens.size()) {
        const std::size_t end = hgens.size();
        bool grew = false;
        for (; checked < end; ++checked)
            for (const auto &s : conj) {
                PadicMatrix c = s * hgens[checked] * s.inverse();
                if (h.contains(c))
                    continue;
                hgens.push_back(std::move(c));
                h = FiniteMatrixGroup::generate(group.context(), group.dim(), hgens, max_elements);
                grew = true;
            }
        if (!grew)
            break;
    }
    return h;
}

FiniteMatrixGroup frattini_subgroup(const FiniteMatrixGroup &group)
{
    const auto gens = group.generating_set();
    const std::uint64_t p = group.context().p();
    std::vector<PadicMatrix> seeds;
    for (std::size_t i = 0; i < gens.size(); ++i) {
        seeds.push_back(gens[i].pow(p));
        for (std::size_t j = i + 1; j < gens.size(); ++j)
            seeds.push_back(commutator(gens[i], gens[j]));
    }
    return normal_closure(seeds, group);
}

unsigned p_rank(const FiniteMatrixGroup &group)
{
    return log_order_or_throw(group, "p_rank") - log_order_or_throw(frattini_subgroup(group), "p_rank");
}

unsigned quotient_p_rank(const FiniteMatrixGroup &group, const FiniteMatrixGroup &normal)
{
    return quotient_rank_given(group, frattini_subgroup(group), normal);
}

CentralSeries p_central_series(const FiniteMatrixGroup &group)
{
    CentralSeries series{group, {group}};
    const auto outer = group.generating_set();
    const std::uint64_t p = group.context().p();
    while (series.terms.back().order() > 1) {
        const auto inner = series.terms.back().generating_set();
        std::vector<PadicMatrix> seeds;
        for (const auto &t : inner) {
            seeds.push_back(t.pow(p));
            for (const auto &s : outer)
                seeds.push_back(commutator(s, t));
        }
        FiniteMatrixGroup next = normal_closure(seeds, group);
        if (next.order() == series.terms.back().order())
            throw std::invalid_argument("p_central_series: series stalls, the group is not a p-group");
        series.terms.push_back(std::move(next));
    }
    return series;
}

UniformityReport uniformity_check(const CentralSeries &series)
{
    UniformityReport report;
    const auto &terms = series.terms;
    for (std::size_t n = 0; n + 1 < terms.size(); ++n)
        report.layer_ranks.push_back(log_order_or_throw(terms[n], "uniformity_check") -
                                     log_order_or_throw(terms[n + 1], "uniformity_check"));
    report.equal_layers = std::adjacent_find(report.layer_ranks.begin(), report.layer_ranks.end(),
                                             std::not_equal_to<>()) == report.layer_ranks.end();

    // x -> x^p from G_n/G_{n+1} to G_{n+1}/G_{n+2} has trivial kernel
    report.power_map_injective = true;
    const std::uint64_t p = series.group.context().p();
    for (std::size_t n = 0; n + 2 < terms.size() && report.power_map_injective; ++n) {
        const auto &gn = terms[n];
        for (std::size_t i = 0; i < gn.order(); ++i) {
            const std::string &key = GroupBuilder::key_at(gn, i);
            if (terms[n + 1].contains_key(key))
                continue;
            if (terms[n + 2].contains(gn.element(i).pow(p))) {
                report.power_map_injective = false;
                break;
            }
        }
    }
    return report;
}

// -------------------------------------------------------------- décalage

DecalageReport decalage_check(const FiniteMatrixGroup &gprime, const CentralSeries &ambient_series, unsigned k)
{
    const auto &terms = ambient_series.terms;
    if (k == 0 || k > terms.size())
        throw PreconditionViolated(fmt::format("decalage_check: level {} outside the series (length {})", k,
                                               terms.size()));
    if (!gprime.is_subgroup_of(terms[k - 1]))
        throw PreconditionViolated(fmt::format("decalage_check: G' is not contained in G_{}", k));

    DecalageReport report;
    report.k = k;
    const PadicContext &ctx = gprime.context();
    const std::size_t m = gprime.dim();
    const auto all = gprime.elements();

    for (unsigned n = 1;; ++n) {
        const std::size_t idx = n + k - 2;
        std::vector<PadicMatrix> members;
        if (idx < terms.size())
            for (const auto &g : all)
                if (terms[idx].contains(g))
                    members.push_back(g);
        if (members.empty())
            members.push_back(PadicMatrix::identity(ctx, m));
        report.filtration.push_back(FiniteMatrixGroup::from_elements(ctx, m, members));
        if (report.filtration.back().order() == 1) {
            report.cutoff_level = n;
            break;
        }
    }
    report.intersection_trivial = report.filtration.back().contains(PadicMatrix::identity(ctx, m));
    if (!report.intersection_trivial)
        report.failures.push_back("filtration does not reach the trivial group");

    const std::uint64_t p = ctx.p();
    const auto outer = with_inverses(gprime.generating_set());
    const FiniteMatrixGroup trivial = FiniteMatrixGroup::trivial(ctx, m);
    for (std::size_t i = 0; i < report.filtration.size(); ++i) {
        const FiniteMatrixGroup &f = report.filtration[i];
        const FiniteMatrixGroup &next = i + 1 < report.filtration.size() ? report.filtration[i + 1] : trivial;
        const auto members = f.elements();
        DecalageLevel lv{static_cast<unsigned>(i + 1), f.order(), f.is_closed(), true, true, true};

        for (const auto &g : outer) {
            const PadicMatrix ginv = g.inverse();
            for (const auto &x : members) {
                if (lv.normal && !f.contains(g * x * ginv))
                    lv.normal = false;
                if (lv.trivial_action && !next.contains(commutator(g, x)))
                    lv.trivial_action = false;
            }
        }
        for (const auto &x : members)
            if (!next.contains(x.pow(p))) {
                lv.elementary_abelian_quotient = false;
                break;
            }
        const auto fgens = f.generating_set();
        for (std::size_t a = 0; a < fgens.size() && lv.elementary_abelian_quotient; ++a)
            for (std::size_t b = a + 1; b < fgens.size(); ++b)
                if (!next.contains(commutator(fgens[a], fgens[b]))) {
                    lv.elementary_abelian_quotient = false;
                    break;
                }

        if (!lv.is_subgroup)
            report.failures.push_back(fmt::format("level {}: G'_[{}] is not a subgroup", lv.n, lv.n));
        if (!lv.normal)
            report.failures.push_back(fmt::format("level {}: G'_[{}] is not normal in G'", lv.n, lv.n));
        if (!lv.elementary_abelian_quotient)
            report.failures.push_back(
                fmt::format("level {}: G'_[{}]/G'_[{}] is not elementary abelian", lv.n, lv.n, lv.n + 1));
        if (!lv.trivial_action)
            report.failures.push_back(
                fmt::format("level {}: G' acts nontrivially on G'_[{}]/G'_[{}]", lv.n, lv.n, lv.n + 1));
        report.levels.push_back(lv);
    }
    return report;
}

RankCheckResult proper_solution_rank_check(const FiniteMatrixGroup &gprime, const DecalageReport &report)
{
    RankCheckResult result;
    const auto &f = report.filtration;
    const FiniteMatrixGroup trivial = FiniteMatrixGroup::trivial(gprime.context(), gprime.dim());
    const FiniteMatrixGroup phi = frattini_subgroup(gprime);
    auto term = [&](std::size_t n) -> const FiniteMatrixGroup & { return n <= f.size() ? f[n - 1] : trivial; };
    for (std::size_t n = 2; n <= std::max<std::size_t>(f.size(), 2); ++n) {
        RankComparison c{static_cast<unsigned>(n), quotient_rank_given(gprime, phi, term(n + 1)),
                         quotient_rank_given(gprime, phi, term(n))};
        if (c.rank_upper != c.rank_lower)
            result.ok = false;
        result.comparisons.push_back(c);
    }
    return result;
}

} // namespace galois_lab
