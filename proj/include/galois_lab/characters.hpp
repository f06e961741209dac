#pragma once

#include "galois_lab/lie.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace galois_lab {

/// A character of the cyclic group Delta written as a multiset of exponents
/// of the Teichmueller character omega, reduced mod its order p-1.
class CharacterVector {
  public:
    explicit CharacterVector(std::uint64_t modulus);
    CharacterVector(std::uint64_t modulus, const std::vector<std::int64_t> &exponents);

    std::uint64_t modulus() const { return modulus_; }
    void add(std::int64_t exponent, std::uint64_t multiplicity = 1);
    std::uint64_t multiplicity(std::int64_t exponent) const;
    std::uint64_t total() const;
    bool empty() const { return mult_.empty(); }
    const std::map<std::uint64_t, std::uint64_t> &multiplicities() const { return mult_; }
    std::vector<std::uint64_t> support() const;

    bool operator==(const CharacterVector &o) const = default;

    // "{0x3, 1x2, ...}"
    std::string to_string() const;

  private:
    std::uint64_t reduce(std::int64_t e) const;
    std::uint64_t modulus_;
    std::map<std::uint64_t, std::uint64_t> mult_;
};

// {(i-j) a mod (p-1) : 1 <= i, j <= m}
CharacterVector adjoint_weights(std::uint64_t p, std::size_t m, std::int64_t a);

// Disjoint supports. Throws ContextMismatch on differing moduli.
bool orthogonal(const CharacterVector &a, const CharacterVector &b);

// sum over residues r of mult_T(r) * mult_M(r)
std::uint64_t obstruction_dimension(const CharacterVector &torsion, const CharacterVector &module);

// 1 + omega + omega^3 + ... + omega^{p-2}
CharacterVector frank_character(std::uint64_t p);

// k -> (1 - k) mod (p-1): class-group index to torsion-character exponent.
std::uint64_t mirror_index(std::uint64_t p, std::int64_t k);

// Torsion character built from the class-group indices k_i.
CharacterVector torsion_character(std::uint64_t p, const std::vector<std::uint64_t> &class_indices);

std::uint64_t smallest_primitive_root(std::uint64_t p);

enum class DeltaRoute { quadratic, cyclotomic };

/// Diagonal representative of the generator s of Delta.
///
/// quadratic:  diagonal holds the signs (-1)^{i+1}.
/// cyclotomic: diagonal holds the omega-exponents i*a mod (p-1), i = 1..m;
///             omega(s) is the smallest primitive root s mod p.
struct DeltaAction {
    DeltaRoute route;
    std::uint64_t p;
    std::size_t m;
    std::int64_t a;
    std::vector<std::int64_t> diagonal;

    static DeltaAction quadratic(std::uint64_t p, std::size_t m);
    // Requires m >= 3 and a odd with 1 <= a <= p-2.
    static DeltaAction cyclotomic(std::uint64_t p, std::size_t m, std::int64_t a);
};

// The pair the action is checked against: for the quadratic route with m = 2
// the roles are swapped, z1 = E11(p)-E22(p), z2 = E12(p)+E21(p).
std::pair<LieElement, LieElement> delta_generators(const DeltaAction &action);

// Eigenvalues (quadratic) or omega-exponents mod p-1 (cyclotomic) the pair
// (z1, z2) should carry.
std::pair<std::int64_t, std::int64_t> expected_delta_pattern(const DeltaAction &action);

struct EigenCheck {
    std::string name;
    std::optional<std::int64_t> found;  // nullopt: not an eigenvector
    std::int64_t expected;
    bool numeric_ok = true;             // F_p evaluation (cyclotomic only)
    bool ok() const { return found && *found == expected && numeric_ok; }
};

struct DeltaActionReport {
    DeltaRoute route;
    std::vector<EigenCheck> checks;
    std::vector<std::string> failures;
    bool passed() const { return failures.empty(); }
};

DeltaActionReport verify_delta_action(const DeltaAction &action, const LieElement &z1, const LieElement &z2);

const char *route_name(DeltaRoute r);

} // namespace galois_lab
