#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace galois_lab {

struct ContextMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct NotInvertible : std::domain_error {
    using std::domain_error::domain_error;
};

// Raised whenever an operation would need more p-adic precision than the
// context carries (e.g. dividing a residue by p).
struct PrecisionError : std::domain_error {
    using std::domain_error::domain_error;
};

// Deterministic Miller-Rabin, exact for all 64-bit inputs.
bool is_prime(std::uint64_t n);

// p-adic valuation of an integer. std::nullopt stands for +infinity (n == 0).
std::optional<unsigned> val_p(const mpz_class &n, std::uint64_t p);
std::optional<unsigned> val_p(std::int64_t n, std::uint64_t p);

// 1 when p == 2, 0 otherwise.
constexpr unsigned epsilon_for(std::uint64_t p) { return p == 2 ? 1u : 0u; }

mpz_class mpz_from_u64(std::uint64_t v);
mpz_class power_of(std::uint64_t p, unsigned k);

/// Fixed precision p^N shared by scalars and matrices. Copies are cheap
/// (shared immutable state) and the precision never changes implicitly.
class PadicContext {
  public:
    PadicContext(std::uint64_t p, unsigned precision);

    std::uint64_t p() const { return data_->p; }
    unsigned precision() const { return data_->precision; }
    unsigned epsilon() const { return epsilon_for(data_->p); }
    const mpz_class &prime() const { return data_->prime; }
    const mpz_class &modulus() const { return data_->modulus; }

    // p^k for 0 <= k <= precision (cached); larger k computed on demand.
    mpz_class power(unsigned k) const;
    mpz_class reduce(const mpz_class &x) const;
    PadicContext with_precision(unsigned precision) const;

    // Bytes needed to store one residue in [0, p^N).
    std::size_t residue_bytes() const { return data_->residue_bytes; }

    bool operator==(const PadicContext &other) const {
        return data_ == other.data_ ||
               (p() == other.p() && precision() == other.precision());
    }

  private:
    struct Data {
        std::uint64_t p;
        unsigned precision;
        mpz_class prime;
        mpz_class modulus;
        std::vector<mpz_class> powers;
        std::size_t residue_bytes;
    };
    std::shared_ptr<const Data> data_;
};

class PadicScalar {
  public:
    PadicScalar(PadicContext ctx, const mpz_class &value);
    PadicScalar(PadicContext ctx, std::int64_t value);

    const PadicContext &context() const { return ctx_; }
    const mpz_class &residue() const { return residue_; }

    // Capped at N; valuation of zero is reported as N.
    unsigned valuation() const;
    bool is_unit() const;
    PadicScalar inverse() const;

    PadicScalar operator+(const PadicScalar &o) const;
    PadicScalar operator-(const PadicScalar &o) const;
    PadicScalar operator*(const PadicScalar &o) const;
    PadicScalar operator-() const;
    bool operator==(const PadicScalar &o) const;

  private:
    void require_same(const PadicScalar &o) const;
    PadicContext ctx_;
    mpz_class residue_;
};

/// Square matrix over Z/p^N, row-major, every entry kept in [0, p^N).
class PadicMatrix {
  public:
    PadicMatrix(PadicContext ctx, std::size_t m);
    PadicMatrix(PadicContext ctx, std::size_t m, std::vector<mpz_class> entries);

    static PadicMatrix identity(PadicContext ctx, std::size_t m);
    static PadicMatrix diagonal(PadicContext ctx, const std::vector<mpz_class> &diag);
    // Inverse of key(): rebuilds a matrix from its canonical byte encoding.
    static PadicMatrix from_key(PadicContext ctx, std::size_t m, const std::string &key);

    const PadicContext &context() const { return ctx_; }
    std::size_t dim() const { return m_; }
    const std::vector<mpz_class> &entries() const { return entries_; }
    const mpz_class &at(std::size_t i, std::size_t j) const { return entries_[i * m_ + j]; }
    void set(std::size_t i, std::size_t j, const mpz_class &v);

    PadicMatrix operator*(const PadicMatrix &o) const;
    PadicMatrix operator+(const PadicMatrix &o) const;
    PadicMatrix operator-(const PadicMatrix &o) const;
    PadicMatrix scaled(const mpz_class &c) const;
    bool operator==(const PadicMatrix &o) const;
    bool operator!=(const PadicMatrix &o) const { return !(*this == o); }

    PadicMatrix pow(const mpz_class &e) const;
    PadicMatrix pow(std::uint64_t e) const { return pow(mpz_from_u64(e)); }
    PadicMatrix inverse() const;
    mpz_class determinant() const;

    bool is_identity() const;
    // True iff every entry of (this - I) is divisible by p^k.
    bool congruent_to_identity(unsigned k) const;
    // Minimum valuation over entries, capped at N.
    unsigned valuation() const;

    // Same residues viewed at a lower precision.
    PadicMatrix reduced_to(const PadicContext &lower) const;

    // Row-major fixed-width big-endian residues; equal matrices give equal keys.
    std::string key() const;
    std::vector<std::string> to_decimal_strings() const;

  private:
    void require_same(const PadicMatrix &o) const;
    PadicContext ctx_;
    std::size_t m_;
    std::vector<mpz_class> entries_;
};

PadicMatrix mat_mul(const PadicMatrix &a, const PadicMatrix &b);
PadicMatrix mat_inverse(const PadicMatrix &a);

// a b a^-1 b^-1
PadicMatrix commutator(const PadicMatrix &a, const PadicMatrix &b);

// Exact determinant of an integer matrix (fraction-free elimination).
mpz_class integer_determinant(std::vector<mpz_class> entries, std::size_t m);

} // namespace galois_lab
