#pragma once

#include "galois_lab/lie.hpp"
#include "galois_lab/padic.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace galois_lab {

// ------------------------------------------------------------ exp and log

// Number of series terms (indices 0..T-1) beyond which every term of
// exp vanishes mod p^N: n(1+eps) - (n-1)/(p-1) >= N for all n >= T, plus one
// guard term.
unsigned exp_truncation(std::uint64_t p, unsigned precision);
// Same for log: n(1+eps) - floor(log_p n) >= N for all n >= T, plus one guard term.
unsigned log_truncation(std::uint64_t p, unsigned precision);

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// exp(x) = sum x^n / n! over Z/p^N. Throws DomainError unless x is in gl_m.
PadicMatrix exp_mat(const LieElement &x, const PadicContext &ctx);

// log(z) = sum (-1)^{n+1} (z-1)^n / n, returned with entries in [0, p^N).
// Throws DomainError unless z = 1 mod p^{1+eps}.
LieElement log_mat(const PadicMatrix &z);

// --------------------------------------------------------- finite groups

struct EnumerationInfeasible : std::runtime_error {
    EnumerationInfeasible(const std::string &what, mpz_class estimate)
        : std::runtime_error(what), estimated_order(std::move(estimate))
    {
    }
    mpz_class estimated_order;
};

// 10^6 unless GALOIS_LAB_MAX_ELEMENTS is set to a positive integer.
std::uint64_t default_max_elements();

/// An explicitly enumerated group of matrices over Z/p^N.
///
/// Elements are keyed by their canonical byte encoding (PadicMatrix::key) and
/// kept in discovery order, which is deterministic for a given generator list.
class FiniteMatrixGroup {
  public:
    // Breadth-first closure of gens (and their inverses) starting at I.
    static FiniteMatrixGroup generate(const PadicContext &ctx, std::size_t m,
                                      std::span<const PadicMatrix> gens,
                                      std::uint64_t max_elements = default_max_elements());
    static FiniteMatrixGroup trivial(const PadicContext &ctx, std::size_t m);
    // Wraps an element list as-is; the set is not checked for closure.
    static FiniteMatrixGroup from_elements(const PadicContext &ctx, std::size_t m,
                                           std::span<const PadicMatrix> elements);

    const PadicContext &context() const { return ctx_; }
    std::size_t dim() const { return m_; }
    std::size_t order() const { return order_.size(); }
    PadicMatrix element(std::size_t i) const;
    std::vector<PadicMatrix> elements() const;
    bool contains(const PadicMatrix &g) const;
    bool contains_key(const std::string &key) const { return index_.count(key) != 0; }
    const std::vector<PadicMatrix> &generators() const { return generators_; }

    // The stored generator list, or a greedily built one when the group was
    // assembled from raw elements.
    std::vector<PadicMatrix> generating_set() const;

    // Closed under right multiplication by every generating element.
    bool is_closed() const;
    // Every element is congruent to I mod p^{1+eps}.
    bool is_pro_p_level() const;
    // k with order = p^k, if the order is a power of p.
    std::optional<unsigned> log_order() const;

    bool is_subgroup_of(const FiniteMatrixGroup &other) const;
    bool same_elements(const FiniteMatrixGroup &other) const;

  private:
    friend struct GroupBuilder;
    FiniteMatrixGroup(PadicContext ctx, std::size_t m) : ctx_(std::move(ctx)), m_(m) {}
    bool insert(const PadicMatrix &g);
    bool insert_key(std::string key);

    PadicContext ctx_;
    std::size_t m_;
    std::vector<PadicMatrix> generators_;
    std::unordered_map<std::string, std::size_t> index_;
    std::vector<std::string> order_;
};

struct CongruenceSubgroupLevel {
    std::uint64_t p;
    std::size_t m;
    unsigned k;          // level, >= 1
    unsigned precision;  // N
};

// { A mod p^N : A = I mod p^{k+eps} }, intersected with det A = 1 when sl_only.
FiniteMatrixGroup congruence_kernel(const CongruenceSubgroupLevel &level, bool sl_only,
                                    std::uint64_t max_elements = default_max_elements());

// Image of exp on p^{k-1} gl_m (or p^{k-1} sl_m) at precision N.
FiniteMatrixGroup exp_lattice_image(const CongruenceSubgroupLevel &level, bool sl_only,
                                    std::uint64_t max_elements = default_max_elements());

FiniteMatrixGroup generated_subgroup(std::span<const PadicMatrix> gens, const PadicContext &ctx,
                                     std::uint64_t max_elements = default_max_elements());

// Smallest subgroup of `group` containing `seeds` and normalised by it.
FiniteMatrixGroup normal_closure(std::span<const PadicMatrix> seeds, const FiniteMatrixGroup &group,
                                 std::uint64_t max_elements = default_max_elements());

// G^p [G, G]
FiniteMatrixGroup frattini_subgroup(const FiniteMatrixGroup &group);

// dim_{F_p} G / G^p[G,G]
unsigned p_rank(const FiniteMatrixGroup &group);

// d_p of the quotient G / N for a normal subgroup N.
unsigned quotient_p_rank(const FiniteMatrixGroup &group, const FiniteMatrixGroup &normal);

/// p-descending central series G_1 = G, G_{n+1} = G_n^p [G, G_n], down to
/// the trivial group (which is the last term).
struct CentralSeries {
    FiniteMatrixGroup group;
    std::vector<FiniteMatrixGroup> terms;
};

CentralSeries p_central_series(const FiniteMatrixGroup &group);

// Finite-precision uniformity: equal layer orders and injective p-power maps
// G_n/G_{n+1} -> G_{n+1}/G_{n+2} on every layer where both sides are nontrivial.
struct UniformityReport {
    std::vector<unsigned> layer_ranks;  // log_p |G_n / G_{n+1}|
    bool equal_layers = false;
    bool power_map_injective = false;
    bool passed() const { return equal_layers && power_map_injective; }
};

UniformityReport uniformity_check(const CentralSeries &series);

/// Induced filtration G'_[n] = G' ∩ G_{n+k-1} and the checks made on it.
///
/// The intersection condition is only checkable at finite precision: the
/// report states whether the filtration reaches the trivial group before the
/// ambient series runs out (cutoff_level).
struct DecalageLevel {
    unsigned n;
    std::size_t order;
    bool is_subgroup;
    bool normal;
    bool elementary_abelian_quotient;
    bool trivial_action;
};

struct DecalageReport {
    unsigned k = 1;
    std::vector<FiniteMatrixGroup> filtration;  // filtration[n-1] = G'_[n]
    std::vector<DecalageLevel> levels;
    unsigned cutoff_level = 0;  // first n with G'_[n] trivial (0 if never reached)
    bool intersection_trivial = false;
    std::vector<std::string> failures;
    bool passed() const { return failures.empty(); }
};

struct PreconditionViolated : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// k is 1-based: G' must lie in ambient_series.terms[k-1].
DecalageReport decalage_check(const FiniteMatrixGroup &gprime, const CentralSeries &ambient_series,
                              unsigned k);

struct RankComparison {
    unsigned n;
    unsigned rank_upper;  // d_p(G'/G'_[n+1])
    unsigned rank_lower;  // d_p(G'/G'_[n])
};

struct RankCheckResult {
    bool ok = true;
    std::vector<RankComparison> comparisons;
    explicit operator bool() const { return ok; }
};

// d_p(G'/G'_[n+1]) == d_p(G'/G'_[n]) for every computable n >= 2.
RankCheckResult proper_solution_rank_check(const FiniteMatrixGroup &gprime, const DecalageReport &report);

} // namespace galois_lab
