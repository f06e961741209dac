#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace galois_lab {

// ------------------------------------------------------------- Bernoulli

enum class BernoulliMethod {
    recurrence,  // sum_{j<=n} C(n+1, j) B_j = 0 over F_p, O(p^2)
    power_sum,   // primitive-root power sums evaluated by one NTT convolution
    power_sum_direct,  // the same identity summed term by term, O(p^2)
    automatic,   // recurrence below automatic_threshold, power_sum above
};

inline constexpr std::uint64_t automatic_threshold = 20000;

// B_{2t} mod p for t = 1 .. (p-3)/2, stored at index t-1. Empty for p < 5.
std::vector<std::uint64_t> bernoulli_table(std::uint64_t p, BernoulliMethod method = BernoulliMethod::recurrence);

// Even index 2t -> B_{2t} mod p for 2 <= 2t <= p-3.
std::map<std::uint64_t, std::uint64_t> bernoulli_mod_p(std::uint64_t p,
                                                       BernoulliMethod method = BernoulliMethod::recurrence);

const char *method_name(BernoulliMethod m);
std::optional<BernoulliMethod> parse_method(const std::string &s);

// ---------------------------------------------------------- irregularity

struct IrregularityReport {
    std::uint64_t p = 0;
    unsigned lambda = 0;      // v_2(p-1)
    std::uint64_t a = 0;      // odd part of p-1
    std::vector<std::uint64_t> class_char_indices;  // k = p - 2t with p | B_{2t}, ascending
    std::size_t e() const { return class_char_indices.size(); }
};

IrregularityReport irregular_report(std::uint64_t p, BernoulliMethod method = BernoulliMethod::automatic);

// --------------------------------------------------------- eligibility

enum class Verdict { eligible, blocked_by_i, blocked_by_ii, out_of_theorem };
const char *verdict_name(Verdict v);

struct EligibilityReport {
    std::uint64_t p = 0;
    std::uint64_t m = 0;
    IrregularityReport irregularity;
    unsigned m_valuation = 0;  // v_2(m-1) for odd m, v_2(m-2) for even m
    bool cond_i = false;
    bool cond_ii = false;
    std::vector<std::uint64_t> failing_indices;  // k with a | (k-1)
    Verdict verdict = Verdict::out_of_theorem;
};

// p must be prime. Primes not congruent to 1 mod 4 give out_of_theorem.
// Throws std::invalid_argument for m < 3.
EligibilityReport check_theorem_conditions(std::uint64_t p, std::uint64_t m,
                                           BernoulliMethod method = BernoulliMethod::automatic);
// Same, reusing an irregularity report computed earlier.
EligibilityReport check_theorem_conditions(const IrregularityReport &irr, std::uint64_t m);

// Indices k with a | (k - 1).
std::vector<std::uint64_t> cond_ii_failures(const IrregularityReport &irr);

unsigned v2(std::uint64_t n);

// ---------------------------------------------------------------- scan

struct ScanRecord {
    std::uint64_t p = 0;
    IrregularityReport irregularity;
    std::vector<std::uint64_t> cond_ii_fails;

    std::string to_json_line() const;
    static ScanRecord from_json_line(const std::string &line);
    bool operator==(const ScanRecord &o) const;
};

struct ScanOptions {
    std::uint64_t limit = 0;
    std::optional<std::filesystem::path> checkpoint;
    unsigned jobs = 1;
    BernoulliMethod method = BernoulliMethod::automatic;
    std::function<void(const ScanRecord &)> on_record;  // called in prime order
};

struct ScanResult {
    std::vector<ScanRecord> records;  // every p = 1 mod 4 in [5, limit]
    std::vector<std::pair<std::uint64_t, std::uint64_t>> exceptions;  // (p, k), sorted
    std::size_t resumed_records = 0;  // taken from the checkpoint file
};

struct CheckpointError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Primes p = 1 mod 4 up to limit where some k_i has a | (k_i - 1).
ScanResult scan_exception_table(const ScanOptions &options);
std::vector<std::pair<std::uint64_t, std::uint64_t>> scan_exception_table(std::uint64_t limit);

// --------------------------------------------------- quadratic route

struct QuadraticClassNumber {
    std::int64_t discriminant = 0;
    std::uint64_t h = 0;
    std::string method = "reduced-forms";
};

// D = -p for p = 3 mod 4, -4p for p = 1 mod 4.
std::int64_t quadratic_discriminant(std::uint64_t p);

// Number of reduced forms (a, b, c) of discriminant D < 0.
std::uint64_t count_reduced_forms(std::int64_t discriminant);

QuadraticClassNumber imag_quadratic_class_number(std::uint64_t p);

// p does not divide h(Q(sqrt(-p))). Requires p > 3.
bool quadratic_route_check(std::uint64_t p);

std::vector<std::uint64_t> primes_up_to(std::uint64_t limit);

} // namespace galois_lab
