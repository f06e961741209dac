#pragma once

#include "galois_lab/padic.hpp"

#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace galois_lab {

/// Element of the powerful lattice gl_m spanned over Z_p by
/// E_{i,j}(p) = p^{1+eps} E_{i,j}, stored as an exact integer matrix.
///
/// Indices are 0-based throughout the API; the 1-based E_{i,j} of the
/// literature maps to unit(p, m, i-1, j-1).
class LieElement {
  public:
    // Throws std::invalid_argument unless every entry is divisible by p^{1+eps}.
    LieElement(std::uint64_t p, std::size_t m, std::vector<mpz_class> entries);

    static LieElement zero(std::uint64_t p, std::size_t m);
    // E_{i,j}(p)
    static LieElement unit(std::uint64_t p, std::size_t m, std::size_t i, std::size_t j);

    std::uint64_t p() const { return p_; }
    std::size_t dim() const { return m_; }
    unsigned epsilon() const { return epsilon_for(p_); }
    const std::vector<mpz_class> &entries() const { return entries_; }
    const mpz_class &at(std::size_t i, std::size_t j) const { return entries_[i * m_ + j]; }

    mpz_class trace() const;
    bool is_zero() const;
    bool in_sl() const { return trace() == 0; }

    LieElement operator+(const LieElement &o) const;
    LieElement operator-(const LieElement &o) const;
    LieElement operator-() const;
    LieElement scaled(const mpz_class &c) const;
    bool operator==(const LieElement &o) const;
    bool operator!=(const LieElement &o) const { return !(*this == o); }

    // Entry-wise reduction into a matrix over Z/p^N.
    PadicMatrix to_matrix(const PadicContext &ctx) const;

  private:
    void require_same(const LieElement &o) const;
    std::uint64_t p_;
    std::size_t m_;
    std::vector<mpz_class> entries_;
};

// AB - BA. The result always lies in p^{1+eps} gl_m.
LieElement bracket(const LieElement &a, const LieElement &b);

using BracketFn = std::function<LieElement(const LieElement &, const LieElement &)>;

// Two-element generating pair of sl_m(Q_p):
//   m = 2:  (E12(p)+E21(p), E11(p)-E22(p))
//   m >= 3: (sum_i E_{i,i+1}(p), E_{m,1}(p))            m odd
//           (sum_i E_{i,i+1}(p), E_{m-1,1}(p)+E_{m,2}(p)) m even
std::pair<LieElement, LieElement> standard_generators(std::size_t m, std::uint64_t p);

/// Rational span closed under the bracket.
struct SpanBasis {
    std::size_t m = 0;
    std::uint64_t p = 0;
    // Reduced row echelon form over Q of the flattened m*m coordinates.
    std::vector<std::vector<mpq_class>> basis;
    std::vector<std::size_t> pivots;
    // The independent integer elements in the order the closure found them.
    std::vector<LieElement> elements;

    std::size_t dim() const { return basis.size(); }
    bool contains(const LieElement &x) const;
    // Adds x when it is independent of the current span; returns whether it was added.
    bool insert(const LieElement &x);
};

// Smallest Q-subspace containing gens and closed under the bracket. New
// elements are processed FIFO, each bracketed against every basis element in
// insertion order. max_dim defaults to m^2; exceeding it throws std::logic_error.
SpanBasis bracket_closure(std::span<const LieElement> gens, std::optional<std::size_t> max_dim = {},
                          const BracketFn &br = bracket);

/// Lattice valuation on gl_m: the largest k with x in p^k gl_m, i.e. every
/// entry divisible by p^{1+eps+k}. std::nullopt means +infinity (x == 0).
///
/// This is the algebra-side convention w(E_{i,j}(p)) = 0. The group-side
/// filtration starts at G_1 = G, so exp(x) sits in congruence level w(x) + 1.
std::optional<unsigned> w_valuation(const LieElement &x);

// Image of x in p^k gl / p^{k+1} gl as a matrix over F_p (entries x / p^{1+eps+k} mod p).
std::vector<std::uint64_t> leading_coefficients(const LieElement &x, unsigned k);

// F_p-linear independence of the images of x and y in p^k gl / p^{k+1} gl.
bool independent_at_level(const LieElement &x, const LieElement &y, unsigned k);

struct NormalizationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NormalizedPair {
    LieElement x;
    LieElement y;
    unsigned k;
    unsigned iterations;
};

// Brings (x, y) to a common valuation k with F_p-independent leading terms by
// repeatedly subtracting unit multiples of (a p-power multiple of) y from x.
NormalizedPair normalize_generators(const LieElement &x, const LieElement &y, unsigned precision_budget);

} // namespace galois_lab
