#include "galois_lab/certificate.hpp"

#include <fmt/format.h>
#include <fmt/ranges.h>
#include <json.hpp>

#include <functional>

namespace galois_lab {

using ordered_json = nlohmann::ordered_json;

namespace {

constexpr const char *format_tag = "galois-lab-witness/1";
constexpr unsigned max_witness_precision = 1024;

DeltaAction action_for(const WitnessCertificate &c)
{
    return c.route == DeltaRoute::quadratic ? DeltaAction::quadratic(c.p, c.m)
                                            : DeltaAction::cyclotomic(c.p, c.m, c.a);
}

std::string pattern_text(const DeltaActionReport &rep)
{
    std::string s;
    for (const auto &c : rep.checks) {
        if (!s.empty())
            s += ", ";
        std::string v = !c.found ? "not an eigenvector"
                         : rep.route == DeltaRoute::quadratic ? fmt::format("{:+d}", *c.found)
                                                              : fmt::format("omega^{}", *c.found);
        s += fmt::format("{} -> {}", c.name, v);
    }
    return s;
}

CertificateCheck check_membership(const WitnessCertificate &c, const LieElement &z1, const LieElement &z2,
                                  const PadicMatrix &g1, const PadicMatrix &g2)
{
    CertificateCheck out{"sl_membership", true, ""};
    const unsigned level = std::min(1 + epsilon_for(c.p), c.precision);
    std::vector<std::string> bad;
    if (!z1.in_sl())
        bad.push_back("trace(z1) != 0");
    if (!z2.in_sl())
        bad.push_back("trace(z2) != 0");
    for (const auto *g : {&g1, &g2}) {
        const char *name = g == &g1 ? "g1" : "g2";
        if (!g->congruent_to_identity(level))
            bad.push_back(fmt::format("{} is not 1 mod p^{}", name, level));
        if (g->determinant() != g->context().reduce(1))
            bad.push_back(fmt::format("det {} != 1", name));
    }
    out.passed = bad.empty();
    out.detail = out.passed ? "z1, z2 in sl_m; g1, g2 in Sl_m^1" : fmt::format("{}", fmt::join(bad, "; "));
    return out;
}

CertificateCheck check_p_rank(const WitnessCertificate &c, const PadicMatrix &g1, const PadicMatrix &g2,
                              std::uint64_t max_elements)
{
    // <g1, g2> is 2-generated, so a rank-2 quotient pins d_p(G') = 2. Walk
    // down from N until G' mod p^n is small enough to enumerate: its image in
    // the first layer has order <= p^2, each later layer <= p^(m^2-1).
    const unsigned eps = epsilon_for(c.p);
    const unsigned floor_precision = 2 + eps;
    for (unsigned n = c.precision; n >= floor_precision; --n) {
        mpz_class bound;
        mpz_ui_pow_ui(bound.get_mpz_t(), c.p, static_cast<unsigned long>(2 + (c.m * c.m - 1) * (n - 2 - eps)));
        if (bound > mpz_from_u64(max_elements))
            continue;
        const PadicContext ctx(c.p, n);
        std::vector<PadicMatrix> gens{g1.reduced_to(ctx), g2.reduced_to(ctx)};
        const auto group = generated_subgroup(gens, ctx, max_elements);
        const unsigned d = p_rank(group);
        return {"p_rank", d == 2,
                fmt::format("d_p(G') = {} at precision {} (|G'| = {})", d, n, group.order())};
    }
    return {"p_rank", false,
            fmt::format("enumeration infeasible: |G' mod p^{}| may exceed the element bound {}", floor_precision,
                        max_elements)};
}

ordered_json matrix_json(const std::vector<mpz_class> &entries, std::size_t m)
{
    ordered_json rows = ordered_json::array();
    for (std::size_t i = 0; i < m; ++i) {
        ordered_json row = ordered_json::array();
        for (std::size_t j = 0; j < m; ++j)
            row.push_back(entries[i * m + j].get_str());
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<mpz_class> matrix_from_json(const ordered_json &v, std::size_t m, const char *field)
{
    if (!v.is_array() || v.size() != m)
        throw std::invalid_argument(fmt::format("certificate: '{}' must have {} rows", field, m));
    std::vector<mpz_class> out;
    out.reserve(m * m);
    for (const auto &row : v) {
        if (!row.is_array() || row.size() != m)
            throw std::invalid_argument(fmt::format("certificate: '{}' rows must have {} entries", field, m));
        for (const auto &x : row) {
            if (!x.is_string())
                throw std::invalid_argument(fmt::format("certificate: '{}' entries must be decimal strings", field));
            mpz_class z;
            if (z.set_str(x.get<std::string>(), 10) != 0)
                throw std::invalid_argument(fmt::format("certificate: bad integer in '{}'", field));
            out.push_back(z);
        }
    }
    return out;
}

std::uint64_t u64_field(const ordered_json &j, const char *field)
{
    if (!j.contains(field) || !j[field].is_string())
        throw std::invalid_argument(fmt::format("certificate: missing string field '{}'", field));
    mpz_class z;
    if (z.set_str(j[field].get<std::string>(), 10) != 0 || z < 0 || !z.fits_ulong_p())
        throw std::invalid_argument(fmt::format("certificate: field '{}' is not a non-negative integer", field));
    return z.get_ui();
}

ordered_json action_json(const WitnessCertificate &c)
{
    const DeltaAction act = action_for(c);
    ordered_json j;
    j["route"] = route_name(c.route);
    if (c.route == DeltaRoute::quadratic) {
        std::vector<mpz_class> diag(c.m * c.m);
        for (std::size_t i = 0; i < c.m; ++i)
            diag[i * c.m + i] = static_cast<long>(act.diagonal[i]);
        j["matrix"] = matrix_json(diag, c.m);
    } else {
        const std::uint64_t s = smallest_primitive_root(c.p);
        j["a"] = std::to_string(c.a);
        j["generator"] = std::to_string(s);
        ordered_json ex = ordered_json::array();
        std::vector<mpz_class> diag(c.m * c.m);
        mpz_class sz = mpz_from_u64(s), pz = mpz_from_u64(c.p);
        for (std::size_t i = 0; i < c.m; ++i) {
            ex.push_back(std::to_string(act.diagonal[i]));
            mpz_powm_ui(diag[i * c.m + i].get_mpz_t(), sz.get_mpz_t(), static_cast<unsigned long>(act.diagonal[i]),
                        pz.get_mpz_t());
        }
        j["omega_exponents"] = std::move(ex);
        j["matrix_mod_p"] = matrix_json(diag, c.m);
    }
    return j;
}

} // namespace

bool WitnessCertificate::passed() const
{
    if (checks.empty())
        return false;
    for (const auto &c : checks)
        if (!c.passed)
            return false;
    return true;
}

std::optional<std::string> WitnessCertificate::first_failure() const
{
    for (const auto &c : checks)
        if (!c.passed)
            return c.name;
    return std::nullopt;
}

DeltaRoute default_route(std::uint64_t p, std::size_t m)
{
    return (p % 4 == 1 && m >= 3) ? DeltaRoute::cyclotomic : DeltaRoute::quadratic;
}

namespace {

// A check that throws is a failed check, named after what it was verifying.
CertificateCheck guarded(const char *name, const std::function<CertificateCheck()> &check)
{
    try {
        return check();
    } catch (const std::exception &e) {
        return {name, false, e.what()};
    }
}

} // namespace

std::vector<CertificateCheck> verify_certificate(const WitnessCertificate &c, std::uint64_t max_elements)
{
    const PadicContext ctx(c.p, c.precision);
    const LieElement z1(c.p, c.m, c.z1), z2(c.p, c.m, c.z2);
    const PadicMatrix g1(ctx, c.m, c.g1), g2(ctx, c.m, c.g2);
    std::vector<CertificateCheck> out;

    out.push_back(guarded("sl_membership", [&] { return check_membership(c, z1, z2, g1, g2); }));

    const std::vector<LieElement> pair{z1, z2};
    const auto span = bracket_closure(pair);
    const std::size_t want = c.m * c.m - 1;
    out.push_back({"generation_dimension", span.dim() == want,
                   fmt::format("dim <z1, z2> = {} (sl_m has dimension {})", span.dim(), want)});

    const auto rep = verify_delta_action(action_for(c), z1, z2);
    const auto [e1, e2] = expected_delta_pattern(action_for(c));
    out.push_back({"action_eigenvalues", rep.passed(),
                   rep.passed() ? pattern_text(rep)
                                : fmt::format("{}; expected ({}, {})", fmt::join(rep.failures, "; "), e1, e2)});

    std::vector<std::string> bad;
    try {
        if (exp_mat(z1, ctx) != g1)
            bad.push_back("g1 != exp(z1)");
        if (exp_mat(z2, ctx) != g2)
            bad.push_back("g2 != exp(z2)");
        if (log_mat(g1).to_matrix(ctx) != z1.to_matrix(ctx))
            bad.push_back("log(g1) != z1");
        if (log_mat(g2).to_matrix(ctx) != z2.to_matrix(ctx))
            bad.push_back("log(g2) != z2");
    } catch (const std::exception &e) {
        bad.push_back(e.what());
    }
    out.push_back({"exp_log_round_trip", bad.empty(),
                   bad.empty() ? fmt::format("exp/log agree mod p^{}", c.precision)
                               : fmt::format("{}", fmt::join(bad, "; "))});

    out.push_back(guarded("p_rank", [&] { return check_p_rank(c, g1, g2, max_elements); }));
    return out;
}

WitnessCertificate build_witness(const WitnessRequest &req)
{
    if (!is_prime(req.p))
        throw std::invalid_argument(fmt::format("witness: {} is not prime", req.p));
    if (req.m < 2)
        throw std::invalid_argument("witness: m must be >= 2");
    const unsigned eps = epsilon_for(req.p);
    if (req.precision < 2 + eps)
        throw std::invalid_argument(fmt::format("witness: precision must be >= {}", 2 + eps));
    if (req.precision > max_witness_precision)
        throw std::invalid_argument(
            fmt::format("witness: precision {} is infeasible (limit {})", req.precision, max_witness_precision));

    WitnessCertificate c;
    c.p = req.p;
    c.m = req.m;
    c.precision = req.precision;
    c.route = req.route.value_or(default_route(req.p, req.m));
    c.forced = req.force;

    bool eligible = false;
    if (c.route == DeltaRoute::quadratic) {
        if (req.p == 2) {
            c.eligibility = "no quadratic route for p = 2";
        } else if (req.p == 3) {
            eligible = true;
            c.eligibility = "eligible (Q(sqrt(-3)) is 3-rational)";
        } else {
            const auto h = imag_quadratic_class_number(req.p);
            eligible = h.h % req.p != 0;
            c.eligibility = fmt::format("{} (h({}) = {})", eligible ? "eligible" : "blocked", h.discriminant, h.h);
        }
    } else {
        if (req.m < 3)
            throw std::invalid_argument("witness: the cyclotomic route needs m >= 3");
        if (req.p < 3)
            throw std::invalid_argument("witness: the cyclotomic route needs an odd prime");
        const auto rep = check_theorem_conditions(req.p, req.m);
        c.a = static_cast<std::int64_t>(rep.irregularity.a);
        if (c.a >= static_cast<std::int64_t>(req.p) - 1)
            throw std::invalid_argument("witness: p - 1 has no admissible odd twist");
        eligible = rep.verdict == Verdict::eligible;
        c.eligibility = verdict_name(rep.verdict);
        if (rep.verdict == Verdict::blocked_by_i)
            c.eligibility += fmt::format(" (v2 = {} < lambda = {})", rep.m_valuation, rep.irregularity.lambda);
        else if (rep.verdict == Verdict::blocked_by_ii)
            c.eligibility += fmt::format(" (a = {} divides k - 1 for k in {})", rep.irregularity.a,
                                         fmt::join(rep.failing_indices, ", "));
    }
    if (!eligible && !req.force)
        throw NotEligible(fmt::format("witness refused for p = {}, m = {} on the {} route: {}", req.p, req.m,
                                      route_name(c.route), c.eligibility));

    const DeltaAction act = action_for(c);
    const auto pair = req.pair.value_or(delta_generators(act));
    if (pair.first.p() != req.p || pair.first.dim() != req.m || pair.second.p() != req.p ||
        pair.second.dim() != req.m)
        throw std::invalid_argument("witness: generator pair does not match (p, m)");
    const PadicContext ctx(req.p, req.precision);
    c.z1 = pair.first.entries();
    c.z2 = pair.second.entries();
    c.g1 = exp_mat(pair.first, ctx).entries();
    c.g2 = exp_mat(pair.second, ctx).entries();
    c.checks = verify_certificate(c, req.max_elements);
    return c;
}

std::string certificate_to_json(const WitnessCertificate &c, int indent)
{
    ordered_json j;
    j["format"] = format_tag;
    j["p"] = std::to_string(c.p);
    j["m"] = std::to_string(c.m);
    j["precision"] = std::to_string(c.precision);
    j["route"] = route_name(c.route);
    if (c.route == DeltaRoute::cyclotomic)
        j["a"] = std::to_string(c.a);
    j["forced"] = c.forced;
    j["eligibility"] = c.eligibility;
    j["z1"] = matrix_json(c.z1, c.m);
    j["z2"] = matrix_json(c.z2, c.m);
    j["g1"] = matrix_json(c.g1, c.m);
    j["g2"] = matrix_json(c.g2, c.m);
    j["action"] = action_json(c);
    ordered_json checks = ordered_json::array();
    for (const auto &k : c.checks)
        checks.push_back({{"name", k.name}, {"passed", k.passed}, {"detail", k.detail}});
    j["checks"] = std::move(checks);
    j["passed"] = c.passed();
    return j.dump(indent);
}

WitnessCertificate certificate_from_json(const std::string &text)
{
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        throw std::invalid_argument(fmt::format("certificate: {}", e.what()));
    }
    if (!j.is_object() || j.value("format", "") != format_tag)
        throw std::invalid_argument("certificate: unknown format");
    WitnessCertificate c;
    c.p = u64_field(j, "p");
    c.m = u64_field(j, "m");
    c.precision = static_cast<unsigned>(u64_field(j, "precision"));
    if (!is_prime(c.p) || c.m < 2 || c.precision < 1 || c.precision > max_witness_precision)
        throw std::invalid_argument("certificate: p, m or precision out of range");
    const std::string route = j.value("route", "");
    if (route == "quadratic")
        c.route = DeltaRoute::quadratic;
    else if (route == "cyclotomic") {
        c.route = DeltaRoute::cyclotomic;
        c.a = static_cast<std::int64_t>(u64_field(j, "a"));
    } else
        throw std::invalid_argument(fmt::format("certificate: unknown route '{}'", route));
    c.forced = j.value("forced", false);
    c.eligibility = j.value("eligibility", "");
    c.z1 = matrix_from_json(j["z1"], c.m, "z1");
    c.z2 = matrix_from_json(j["z2"], c.m, "z2");
    c.g1 = matrix_from_json(j["g1"], c.m, "g1");
    c.g2 = matrix_from_json(j["g2"], c.m, "g2");
    if (!j.contains("action") || j["action"] != action_json(c))
        throw std::invalid_argument("certificate: action block does not match (p, m, route)");
    if (j.contains("checks") && j["checks"].is_array())
        for (const auto &k : j["checks"])
            c.checks.push_back(
                {k.value("name", ""), k.value("passed", false), k.value("detail", "")});
    return c;
}

} // namespace galois_lab
