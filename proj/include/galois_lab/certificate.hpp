#pragma once

#include "galois_lab/arithmetic.hpp"
#include "galois_lab/characters.hpp"
#include "galois_lab/groups.hpp"

#include <optional>
#include <string>
#include <vector>

namespace galois_lab {

struct CertificateCheck {
    std::string name;
    bool passed = false;
    std::string detail;
    bool operator==(const CertificateCheck &o) const { return name == o.name && passed == o.passed; }
};

/// z1, z2, g_i = exp(z_i) mod p^N and the Delta-action representative for
/// one (p, m), together with the outcome of every embedded check.
struct WitnessCertificate {
    std::uint64_t p = 0;
    std::size_t m = 0;
    unsigned precision = 0;
    DeltaRoute route = DeltaRoute::quadratic;
    std::int64_t a = 1;  // twist, cyclotomic route only
    bool forced = false;
    std::string eligibility;  // verdict text recorded at emission time
    std::vector<mpz_class> z1, z2;  // exact integers, row-major
    std::vector<mpz_class> g1, g2;  // residues mod p^N, row-major
    std::vector<CertificateCheck> checks;

    bool passed() const;
    std::optional<std::string> first_failure() const;
};

struct WitnessRequest {
    std::uint64_t p = 0;
    std::size_t m = 0;
    unsigned precision = 0;
    std::optional<DeltaRoute> route;  // chosen from p and m when empty
    std::optional<std::pair<LieElement, LieElement>> pair;  // standard pair when empty
    bool force = false;
    std::uint64_t max_elements = default_max_elements();
};

struct NotEligible : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Quadratic for p = 3 mod 4 or m < 3, cyclotomic with a the odd part of p-1 otherwise.
DeltaRoute default_route(std::uint64_t p, std::size_t m);

// Throws NotEligible when the route's hypotheses fail and force is off, and
// std::invalid_argument on malformed input.
WitnessCertificate build_witness(const WitnessRequest &request);

// Recomputes every check from the matrices stored in the certificate.
std::vector<CertificateCheck> verify_certificate(const WitnessCertificate &cert,
                                                 std::uint64_t max_elements = default_max_elements());

std::string certificate_to_json(const WitnessCertificate &cert, int indent = 2);
WitnessCertificate certificate_from_json(const std::string &text);

} // namespace galois_lab
