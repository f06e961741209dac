#include "galois_lab/arithmetic.hpp"
#include "galois_lab/padic.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <fstream>
#include <thread>

namespace galois_lab {

using ordered_json = nlohmann::ordered_json;

namespace {

std::uint64_t parse_u64(const ordered_json &v, const char *field)
{
    if (!v.is_string())
        throw CheckpointError(fmt::format("checkpoint field '{}' must be a decimal string", field));
    const std::string s = v.get<std::string>();
    if (s.empty() || s.size() > 20 || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; }))
        throw CheckpointError(fmt::format("checkpoint field '{}' is not a decimal integer: '{}'", field, s));
    return std::stoull(s);
}

ordered_json string_list(const std::vector<std::uint64_t> &xs)
{
    ordered_json arr = ordered_json::array();
    for (auto x : xs)
        arr.push_back(std::to_string(x));
    return arr;
}

std::vector<std::uint64_t> parse_list(const ordered_json &v, const char *field)
{
    if (!v.is_array())
        throw CheckpointError(fmt::format("checkpoint field '{}' must be an array", field));
    std::vector<std::uint64_t> out;
    for (const auto &x : v)
        out.push_back(parse_u64(x, field));
    return out;
}

ScanRecord compute_record(std::uint64_t p, BernoulliMethod method)
{
    ScanRecord r;
    r.p = p;
    r.irregularity = irregular_report(p, method);
    r.cond_ii_fails = cond_ii_failures(r.irregularity);
    return r;
}

// Reads the complete lines of an existing checkpoint. A torn final line (an
// interrupted write) is cut off the file; damage anywhere else is an error.
std::vector<ScanRecord> load_checkpoint(const std::filesystem::path &path)
{
    std::vector<ScanRecord> out;
    std::ifstream in(path, std::ios::binary);
    if (!in)
        return out;
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    in.close();

    std::size_t pos = 0, good_end = 0;
    while (pos < content.size()) {
        const std::size_t nl = content.find('\n', pos);
        if (nl == std::string::npos)
            break;  // unterminated tail
        const std::string line = content.substr(pos, nl - pos);
        try {
            out.push_back(ScanRecord::from_json_line(line));
        } catch (const std::exception &e) {
            if (content.find('\n', nl + 1) != std::string::npos || nl + 1 < content.size())
                throw CheckpointError(fmt::format("{}: corrupt line {}: {}", path.string(), out.size() + 1, e.what()));
            break;
        }
        pos = nl + 1;
        good_end = pos;
    }
    if (good_end < content.size())
        std::filesystem::resize_file(path, good_end);
    return out;
}

} // namespace

std::string ScanRecord::to_json_line() const
{
    ordered_json j;
    j["p"] = std::to_string(p);
    j["e"] = std::to_string(irregularity.e());
    j["k_indices"] = string_list(irregularity.class_char_indices);
    j["lambda"] = std::to_string(irregularity.lambda);
    j["a"] = std::to_string(irregularity.a);
    j["cond_ii_fails"] = string_list(cond_ii_fails);
    return j.dump();
}

ScanRecord ScanRecord::from_json_line(const std::string &line)
{
    ordered_json j;
    try {
        j = ordered_json::parse(line);
    } catch (const nlohmann::json::parse_error &e) {
        throw CheckpointError(fmt::format("malformed checkpoint line: {}", e.what()));
    }
    for (const char *f : {"p", "e", "k_indices", "lambda", "a", "cond_ii_fails"})
        if (!j.contains(f))
            throw CheckpointError(fmt::format("checkpoint line lacks field '{}'", f));
    ScanRecord r;
    r.p = parse_u64(j["p"], "p");
    r.irregularity.p = r.p;
    r.irregularity.class_char_indices = parse_list(j["k_indices"], "k_indices");
    r.irregularity.lambda = static_cast<unsigned>(parse_u64(j["lambda"], "lambda"));
    r.irregularity.a = parse_u64(j["a"], "a");
    r.cond_ii_fails = parse_list(j["cond_ii_fails"], "cond_ii_fails");
    if (parse_u64(j["e"], "e") != r.irregularity.e())
        throw CheckpointError(fmt::format("checkpoint line for p={}: e disagrees with k_indices", r.p));
    if (r.p < 5 || !is_prime(r.p) || r.irregularity.a == 0 ||
        (r.irregularity.a << r.irregularity.lambda) != r.p - 1 || r.irregularity.a % 2 == 0)
        throw CheckpointError(fmt::format("checkpoint line for p={}: inconsistent lambda/a", r.p));
    if (cond_ii_failures(r.irregularity) != r.cond_ii_fails)
        throw CheckpointError(fmt::format("checkpoint line for p={}: cond_ii_fails inconsistent", r.p));
    return r;
}

bool ScanRecord::operator==(const ScanRecord &o) const
{
    return p == o.p && irregularity.lambda == o.irregularity.lambda && irregularity.a == o.irregularity.a &&
           irregularity.class_char_indices == o.irregularity.class_char_indices && cond_ii_fails == o.cond_ii_fails;
}

ScanResult scan_exception_table(const ScanOptions &options)
{
    if (options.limit < 5)
        throw std::invalid_argument("scan: limit must be >= 5");
    std::vector<std::uint64_t> targets;
    for (auto p : primes_up_to(options.limit))
        if (p % 4 == 1)
            targets.push_back(p);

    ScanResult result;
    std::ofstream out;
    if (options.checkpoint) {
        auto saved = load_checkpoint(*options.checkpoint);
        for (std::size_t i = 0; i < saved.size(); ++i) {
            const std::uint64_t expect = i < targets.size() ? targets[i] : 0;
            if (i >= targets.size()) {
                if (saved[i].p <= options.limit)
                    throw CheckpointError("checkpoint does not follow the prime sequence");
                break;  // written by a longer scan; everything we need is already there
            }
            if (saved[i].p != expect)
                throw CheckpointError(fmt::format("checkpoint entry {} is p={}, expected p={}", i + 1, saved[i].p,
                                                  expect));
            result.records.push_back(std::move(saved[i]));
        }
        result.resumed_records = result.records.size();
        out.open(*options.checkpoint, std::ios::app | std::ios::binary);
        if (!out)
            throw CheckpointError(fmt::format("cannot write checkpoint file {}", options.checkpoint->string()));
    }
    for (const auto &r : result.records)
        if (options.on_record)
            options.on_record(r);

    const unsigned jobs = std::max(1u, options.jobs);
    const std::size_t chunk = jobs == 1 ? 1 : static_cast<std::size_t>(jobs) * 4;
    std::size_t next = result.records.size();
    while (next < targets.size()) {
        const std::size_t end = std::min(targets.size(), next + chunk);
        std::vector<ScanRecord> slots(end - next);
        if (jobs == 1) {
            for (std::size_t i = next; i < end; ++i)
                slots[i - next] = compute_record(targets[i], options.method);
        } else {
            std::atomic<std::size_t> cursor{next};
            std::vector<std::exception_ptr> errors(jobs);
            std::vector<std::thread> pool;
            for (unsigned w = 0; w < jobs; ++w)
                pool.emplace_back([&, w] {
                    try {
                        for (std::size_t i; (i = cursor.fetch_add(1)) < end;)
                            slots[i - next] = compute_record(targets[i], options.method);
                    } catch (...) {
                        errors[w] = std::current_exception();
                    }
                });
            for (auto &t : pool)
                t.join();
            for (auto &e : errors)
                if (e)
                    std::rethrow_exception(e);
        }
        // merge in prime order regardless of completion order
        for (auto &r : slots) {
            if (out.is_open()) {
                out << r.to_json_line() << '\n';
                out.flush();
                if (!out)
                    throw CheckpointError(fmt::format("write to {} failed", options.checkpoint->string()));
            }
            if (options.on_record)
                options.on_record(r);
            result.records.push_back(std::move(r));
        }
        next = end;
    }

    for (const auto &r : result.records)
        for (auto k : r.cond_ii_fails)
            result.exceptions.emplace_back(r.p, k);
    return result;
}

std::vector<std::pair<std::uint64_t, std::uint64_t>> scan_exception_table(std::uint64_t limit)
{
    ScanOptions opt;
    opt.limit = limit;
    return scan_exception_table(opt).exceptions;
}

} // namespace galois_lab
