#include "galois_lab/cli.hpp"

#include "galois_lab/arithmetic.hpp"
#include "galois_lab/certificate.hpp"
#include "galois_lab/selftest.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ranges.h>
#include <json.hpp>

#include <algorithm>

namespace galois_lab {

using ordered_json = nlohmann::ordered_json;

namespace {

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

ordered_json strings(const std::vector<std::uint64_t> &xs)
{
    ordered_json arr = ordered_json::array();
    for (auto x : xs)
        arr.push_back(std::to_string(x));
    return arr;
}

std::string joined(const ordered_json &arr)
{
    std::vector<std::string> parts;
    for (const auto &x : arr)
        parts.push_back(x.get<std::string>());
    return fmt::format("{}", fmt::join(parts, ", "));
}

// ---------------------------------------------------------- check-prime

ordered_json quadratic_section(std::uint64_t p)
{
    ordered_json j;
    if (p == 2) {
        j["applicable"] = false;
        j["note"] = "no quadratic route for p = 2";
        return j;
    }
    const auto h = imag_quadratic_class_number(p);
    const bool ok = h.h % p != 0;
    j["applicable"] = true;
    j["field"] = fmt::format("Q(sqrt(-{}))", p);
    j["discriminant"] = std::to_string(h.discriminant);
    j["class_number"] = std::to_string(h.h);
    j["class_number_method"] = h.method;
    j["p_divides_h"] = !ok;
    j["eligible"] = ok;
    j["unramified_outside"] = p % 4 == 3 ? fmt::format("{{{}, inf}}", p) : fmt::format("{{2, {}, inf}}", p);
    j["m_range"] = ok ? "all m >= 1" : "none";
    return j;
}

ordered_json cyclotomic_section(std::uint64_t p, std::optional<std::uint64_t> m, BernoulliMethod method)
{
    ordered_json j;
    const auto irr = irregular_report(p, method);
    j["lambda"] = std::to_string(irr.lambda);
    j["a"] = std::to_string(irr.a);
    j["e"] = std::to_string(irr.e());
    j["k_indices"] = strings(irr.class_char_indices);
    const auto fails = cond_ii_failures(irr);
    j["cond_ii"] = fails.empty();
    j["cond_ii_fails"] = strings(fails);
    const std::uint64_t mod = std::uint64_t{1} << irr.lambda;
    if (!m) {
        j["eligible_m"] = fails.empty() ? fmt::format("m >= 3 with m = 1 or 2 mod {}", mod) : "none";
        return j;
    }
    j["m"] = std::to_string(*m);
    if (*m < 3) {
        j["verdict"] = verdict_name(Verdict::out_of_theorem);
        j["note"] = "the cyclotomic route needs m >= 3";
        return j;
    }
    const auto rep = check_theorem_conditions(irr, *m);
    j["m_valuation"] = std::to_string(rep.m_valuation);
    j["cond_i"] = rep.cond_i;
    j["verdict"] = verdict_name(rep.verdict);
    return j;
}

ordered_json check_prime_json(std::uint64_t p, std::optional<std::uint64_t> m, BernoulliMethod method)
{
    if (!is_prime(p))
        throw UsageError(fmt::format("check-prime: {} is not prime", p));
    ordered_json j;
    j["p"] = std::to_string(p);
    if (m)
        j["m"] = std::to_string(*m);
    const auto quad = quadratic_section(p);
    j["quadratic_route"] = quad;
    if (p % 4 == 1) {
        const auto cyc = cyclotomic_section(p, m, method);
        j["route"] = "cyclotomic";
        j["cyclotomic_route"] = cyc;
        if (m)
            j["verdict"] = cyc["verdict"];
    } else {
        j["route"] = p == 2 ? "none" : "quadratic";
        j["verdict"] = quad["eligible"].get<bool>() ? verdict_name(Verdict::eligible)
                                                     : verdict_name(Verdict::out_of_theorem);
    }
    return j;
}

void print_check_prime(const ordered_json &j, std::ostream &out)
{
    out << fmt::format("p = {}\n", j["p"].get<std::string>());
    const auto &q = j["quadratic_route"];
    if (q["applicable"].get<bool>())
        out << fmt::format("quadratic route: {}, D = {}, h = {}, {}\n", q["field"].get<std::string>(),
                           q["discriminant"].get<std::string>(), q["class_number"].get<std::string>(),
                           q["eligible"].get<bool>() ? "eligible for " + q["m_range"].get<std::string>()
                                                     : "blocked (p | h)");
    else
        out << fmt::format("quadratic route: {}\n", q["note"].get<std::string>());
    if (j.contains("cyclotomic_route")) {
        const auto &c = j["cyclotomic_route"];
        out << fmt::format("cyclotomic route: lambda = {}, a = {}, irregular indices k = [{}]\n",
                           c["lambda"].get<std::string>(), c["a"].get<std::string>(), joined(c["k_indices"]));
        if (c["cond_ii"].get<bool>())
            out << "  condition (ii) holds\n";
        else
            out << fmt::format("  condition (ii) fails for k = {}\n", joined(c["cond_ii_fails"]));
        if (c.contains("eligible_m"))
            out << fmt::format("  eligible m: {}\n", c["eligible_m"].get<std::string>());
        if (c.contains("m_valuation"))
            out << fmt::format("  m = {}: v2 = {}, condition (i) {}\n", c["m"].get<std::string>(),
                               c["m_valuation"].get<std::string>(), c["cond_i"].get<bool>() ? "holds" : "fails");
        if (c.contains("note"))
            out << fmt::format("  {}\n", c["note"].get<std::string>());
    }
    if (j.contains("verdict"))
        out << fmt::format("verdict: {}\n", j["verdict"].get<std::string>());
}

// ----------------------------------------------------------------- scan

ordered_json scan_json(const ScanResult &r, std::uint64_t limit, BernoulliMethod method)
{
    ordered_json j;
    j["limit"] = std::to_string(limit);
    j["method"] = method_name(method);
    j["primes_scanned"] = std::to_string(r.records.size());
    ordered_json rows = ordered_json::array();
    for (const auto &[p, k] : r.exceptions)
        rows.push_back({{"p", std::to_string(p)}, {"k", std::to_string(k)}});
    j["exceptions"] = std::move(rows);
    return j;
}

void print_scan(const ordered_json &j, std::ostream &out)
{
    out << fmt::format("primes p = 1 mod 4 up to {}: {}\n", j["limit"].get<std::string>(),
                       j["primes_scanned"].get<std::string>());
    if (j["exceptions"].empty()) {
        out << "no exceptions\n";
        return;
    }
    out << fmt::format("{:>10} {:>10}\n", "p", "k");
    for (const auto &row : j["exceptions"])
        out << fmt::format("{:>10} {:>10}\n", row["p"].get<std::string>(), row["k"].get<std::string>());
}

// -------------------------------------------------------------- witness

void print_witness(const ordered_json &j, std::ostream &out)
{
    out << fmt::format("witness p = {}, m = {}, N = {}, route {}{}\n", j["p"].get<std::string>(),
                       j["m"].get<std::string>(), j["precision"].get<std::string>(), j["route"].get<std::string>(),
                       j.contains("a") ? fmt::format(" (a = {})", j["a"].get<std::string>()) : "");
    out << fmt::format("eligibility: {}{}\n", j["eligibility"].get<std::string>(),
                       j["forced"].get<bool>() ? " [forced]" : "");
    for (const auto &c : j["checks"])
        out << fmt::format("  {:<22} {}  {}\n", c["name"].get<std::string>(),
                           c["passed"].get<bool>() ? "pass" : "FAIL", c["detail"].get<std::string>());
}

// ------------------------------------------------------------- selftest

ordered_json selftest_json(const SelftestReport &r)
{
    ordered_json j;
    j["profile"] = r.profile == SelftestProfile::full ? "full" : "quick";
    j["passed"] = r.passed();
    ordered_json suites = ordered_json::array();
    for (const auto &s : r.results) {
        ordered_json e;
        e["name"] = s.name;
        e["passed"] = s.passed;
        e["detail"] = s.detail;
        e["seconds"] = fmt::format("{:.2f}", s.seconds);
        suites.push_back(std::move(e));
    }
    j["suites"] = std::move(suites);
    return j;
}

void print_selftest(const ordered_json &j, std::ostream &out)
{
    for (const auto &s : j["suites"])
        out << fmt::format("{:<24} {}  {}s{}\n", s["name"].get<std::string>(),
                           s["passed"].get<bool>() ? "pass" : "FAIL", s["seconds"].get<std::string>(),
                           s["detail"].get<std::string>().empty() ? "" : "  " + s["detail"].get<std::string>());
    out << fmt::format("selftest ({}): {}\n", j["profile"].get<std::string>(),
                       j["passed"].get<bool>() ? "pass" : "FAIL");
}

BernoulliMethod method_from(const std::string &s)
{
    const auto m = parse_method(s);
    if (!m)
        throw UsageError(fmt::format("unknown Bernoulli method '{}'", s));
    return *m;
}

} // namespace

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
{
    CLI::App app{"p-adic Lie lattices, embedding-problem checks and Galois eligibility criteria"};
    app.name("galois-lab");
    app.require_subcommand(1);
    bool json = false;

    auto *check = app.add_subcommand("check-prime", "eligibility report for one prime");
    std::uint64_t cp_p = 0;
    std::optional<std::uint64_t> cp_m;
    std::string cp_method = "auto";
    check->add_option("p", cp_p, "prime")->required();
    check->add_option("--m", cp_m, "matrix size");
    check->add_option("--method", cp_method, "Bernoulli method: recurrence, power-sum, power-sum-direct, auto");
    check->add_flag("--json", json, "print JSON");

    auto *scan = app.add_subcommand("scan", "primes p = 1 mod 4 where condition (ii) fails");
    std::uint64_t sc_limit = 0;
    std::string sc_checkpoint;
    unsigned sc_jobs = 1;
    std::string sc_method = "auto";
    scan->add_option("--limit", sc_limit, "largest prime to examine")->required();
    scan->add_option("--checkpoint", sc_checkpoint, "JSON-lines file to resume from and append to");
    scan->add_option("--jobs", sc_jobs, "worker threads")->check(CLI::Range(1u, 256u));
    scan->add_option("--method", sc_method, "Bernoulli method");
    scan->add_flag("--json", json, "print JSON");

    auto *wit = app.add_subcommand("witness", "emit and verify a witness certificate");
    std::uint64_t w_p = 0;
    std::optional<std::uint64_t> w_m_pos, w_m_opt;
    std::optional<unsigned> w_n_pos, w_n_opt;
    std::string w_route = "auto";
    bool w_force = false;
    wit->add_option("p", w_p, "prime")->required();
    wit->add_option("m_pos", w_m_pos, "matrix size");
    wit->add_option("N_pos", w_n_pos, "precision");
    wit->add_option("--m", w_m_opt, "matrix size");
    wit->add_option("-N,--precision", w_n_opt, "precision N (work mod p^N)");
    wit->add_option("--route", w_route, "auto, quadratic or cyclotomic")
        ->check(CLI::IsMember({"auto", "quadratic", "cyclotomic"}));
    wit->add_flag("--force", w_force, "emit even when the eligibility criteria fail");
    wit->add_flag("--json", json, "print JSON");

    auto *self = app.add_subcommand("selftest", "run the invariant suites");
    std::string st_profile = "quick";
    self->add_option("--profile", st_profile, "quick or full")->check(CLI::IsMember({"quick", "full"}));
    self->add_flag("--json", json, "print JSON");

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        ordered_json result;
        int status = exit_ok;
        void (*print)(const ordered_json &, std::ostream &) = nullptr;

        if (*check) {
            result = check_prime_json(cp_p, cp_m, method_from(cp_method));
            print = print_check_prime;
        } else if (*scan) {
            ScanOptions opt;
            opt.limit = sc_limit;
            opt.jobs = sc_jobs;
            opt.method = method_from(sc_method);
            if (!sc_checkpoint.empty())
                opt.checkpoint = sc_checkpoint;
            ScanResult r;
            try {
                r = scan_exception_table(opt);
            } catch (const std::invalid_argument &e) {
                throw UsageError(e.what());
            }
            if (opt.checkpoint)
                err << fmt::format("resumed {} records from {}\n", r.resumed_records, sc_checkpoint);
            result = scan_json(r, sc_limit, opt.method);
            print = print_scan;
        } else if (*wit) {
            if (w_m_pos && w_m_opt && *w_m_pos != *w_m_opt)
                throw UsageError("witness: m given twice with different values");
            if (w_n_pos && w_n_opt && *w_n_pos != *w_n_opt)
                throw UsageError("witness: N given twice with different values");
            const auto m = w_m_pos ? w_m_pos : w_m_opt;
            if (!m)
                throw UsageError("witness: m is required");
            WitnessRequest req;
            req.p = w_p;
            req.m = *m;
            req.precision = w_n_pos.value_or(w_n_opt.value_or(3 + epsilon_for(w_p)));
            req.force = w_force;
            if (w_route == "quadratic")
                req.route = DeltaRoute::quadratic;
            else if (w_route == "cyclotomic")
                req.route = DeltaRoute::cyclotomic;
            WitnessCertificate cert;
            try {
                cert = build_witness(req);
            } catch (const NotEligible &e) {
                err << fmt::format("error: {} (use --force to emit anyway)\n", e.what());
                return exit_failed;
            } catch (const std::invalid_argument &e) {
                throw UsageError(e.what());
            }
            if (cert.forced)
                err << fmt::format("warning: certificate emitted with --force; eligibility: {}\n", cert.eligibility);
            result = ordered_json::parse(certificate_to_json(cert));
            print = print_witness;
            if (const auto f = cert.first_failure()) {
                err << fmt::format("error: check '{}' failed\n", *f);
                status = exit_failed;
            }
        } else if (*self) {
            const auto rep = run_selftest(st_profile == "full" ? SelftestProfile::full : SelftestProfile::quick);
            result = selftest_json(rep);
            print = print_selftest;
            for (const auto &s : rep.results)
                if (!s.passed) {
                    err << fmt::format("error: suite '{}' failed: {}\n", s.name, s.detail);
                    status = exit_failed;
                }
        }

        if (json)
            out << result.dump(2) << '\n';
        else
            print(result, out);
        return status;
    } catch (const UsageError &e) {
        err << fmt::format("error: {}\n", e.what());
        return exit_usage;
    } catch (const CheckpointError &e) {
        err << fmt::format("error: {}\n", e.what());
        return exit_usage;
    } catch (const std::exception &e) {
        err << fmt::format("error: {}\n", e.what());
        return exit_failed;
    }
}

} // namespace galois_lab
