#include "critspace/sweep.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "critspace/errors.hpp"

namespace critspace {

using nlohmann::json;

const char* to_string(RankClass c)
{
    switch (c) {
    case RankClass::MaxRank: return "MaxRank";
    case RankClass::Defective: return "Defective";
    }
    return "?";
}

const char* to_string(ConjectureStatus c)
{
    switch (c) {
    case ConjectureStatus::Consistent: return "Consistent";
    case ConjectureStatus::Violation: return "Violation";
    case ConjectureStatus::DefectiveFamily: return "DefectiveFamily";
    }
    return "?";
}

const char* to_string(RowStatus s)
{
    switch (s) {
    case RowStatus::Ok: return "ok";
    case RowStatus::Disagreement: return "disagreement";
    case RowStatus::GuardRefused: return "guard_refused";
    case RowStatus::Error: return "error";
    }
    return "?";
}

namespace {

template <class E>
E enum_from(const std::string& s, std::initializer_list<E> all)
{
    for (E e : all)
        if (s == to_string(e))
            return e;
    throw InputError("unknown enum value '" + s + "' in report");
}

std::uint64_t to_u64(const BigInt& v)
{
    if (v < 0 || mpz_sizeinbase(v.get_mpz_t(), 2) > 64)
        throw std::overflow_error("dimension exceeds 64 bits");
    std::uint64_t out = 0;
    mpz_export(&out, nullptr, -1, sizeof out, 0, 0, v.get_mpz_t());
    return out;
}

}  // namespace

bool in_defective_family(const Format& format)
{
    const auto d = format.canonical().dims();
    return d.size() == 3 && d[0] == 2 && d[2] == d[1] + 2;
}

std::vector<Format> sweep_formats(int k, int max_n)
{
    if (k < 2)
        throw InputError("sweep needs k >= 2");
    std::vector<Format> out;
    for (const auto& t : sorted_tuples(k, max_n))
        out.push_back(beyond_by_one(t));
    std::sort(out.begin(), out.end());
    return out;
}

SweepRow sweep_row(const Format& format, const SweepOptions& options)
{
    SweepRow row;
    row.format = format.canonical();
    try {
        const AlphaShape shape = alpha_shape(row.format);
        row.domain_dim = to_u64(shape.domain);
        row.codomain_dim = to_u64(shape.codomain);
        row.expected_kernel = row.domain_dim > row.codomain_dim ? row.domain_dim - row.codomain_dim : 0;
        if (!alpha_within_guard(shape, options.guard)) {
            row.status = RowStatus::GuardRefused;
            row.message = "alpha matrix " + std::to_string(row.codomain_dim) + " x " +
                          std::to_string(row.domain_dim) + " exceeds the resource guard";
            return row;
        }
        const auto res = generic_protocol(row.format, options.primes, options.seeds,
                                          [](const IntTensor& t, PrimeField f) { return rank(alpha_matrix(t, f)); });
        for (auto r : res.runs)
            row.runs.push_back(r);
        row.alpha_rank = res.value;
        row.kernel_dim = row.domain_dim - res.value;
        if (in_defective_family(row.format)) {
            row.classification = RankClass::Defective;
            row.conjecture_status = ConjectureStatus::DefectiveFamily;
        } else if (*row.kernel_dim > row.expected_kernel) {
            row.classification = RankClass::Defective;
            row.conjecture_status = ConjectureStatus::Violation;
        } else {
            row.classification = RankClass::MaxRank;
            row.conjecture_status = ConjectureStatus::Consistent;
        }
        if (!res.agreed) {
            row.status = RowStatus::Disagreement;
            row.message = "protocol runs disagree; maximum rank reported";
        }
    } catch (const std::exception& e) {
        row.status = RowStatus::Error;
        row.message = e.what();
    }
    return row;
}

std::vector<SweepRow> sweep(const SweepOptions& options, const std::vector<SweepRow>& done)
{
    const auto formats = sweep_formats(options.k, options.max_n);
    std::map<std::vector<int>, const SweepRow*> reuse;
    for (const auto& r : done)
        if (r.status != RowStatus::Error)
            reuse[r.format.canonical().dims()] = &r;

    std::vector<SweepRow> rows(formats.size());
    const long count = static_cast<long>(formats.size());
#pragma omp parallel for schedule(dynamic, 1) if (options.parallel)
    for (long i = 0; i < count; ++i) {
        const auto& f = formats[static_cast<std::size_t>(i)];
        auto it = reuse.find(f.dims());
        rows[static_cast<std::size_t>(i)] = it != reuse.end() ? *it->second : sweep_row(f, options);
    }
    return rows;
}

std::string row_to_json(const SweepRow& row)
{
    // ordered_json keeps the key order fixed
    nlohmann::ordered_json j;
    j["format"] = row.format.to_string();
    j["domain_dim"] = row.domain_dim;
    j["codomain_dim"] = row.codomain_dim;
    j["alpha_rank"] = row.alpha_rank ? json(*row.alpha_rank) : json(nullptr);
    j["kernel_dim"] = row.kernel_dim ? json(*row.kernel_dim) : json(nullptr);
    j["expected_kernel"] = row.expected_kernel;
    j["classification"] = row.classification ? json(to_string(*row.classification)) : json(nullptr);
    j["conjecture_status"] = row.conjecture_status ? json(to_string(*row.conjecture_status)) : json(nullptr);
    j["status"] = to_string(row.status);
    j["runs"] = row.runs;
    j["message"] = row.message;
    return j.dump();
}

SweepRow row_from_json(const std::string& line)
{
    SweepRow row;
    try {
        const json j = json::parse(line);
        row.format = Format::parse(j.at("format").get<std::string>());
        row.domain_dim = j.at("domain_dim").get<std::uint64_t>();
        row.codomain_dim = j.at("codomain_dim").get<std::uint64_t>();
        if (!j.at("alpha_rank").is_null())
            row.alpha_rank = j["alpha_rank"].get<std::uint64_t>();
        if (!j.at("kernel_dim").is_null())
            row.kernel_dim = j["kernel_dim"].get<std::uint64_t>();
        row.expected_kernel = j.at("expected_kernel").get<std::uint64_t>();
        if (!j.at("classification").is_null())
            row.classification =
                enum_from(j["classification"].get<std::string>(), {RankClass::MaxRank, RankClass::Defective});
        if (!j.at("conjecture_status").is_null())
            row.conjecture_status =
                enum_from(j["conjecture_status"].get<std::string>(),
                          {ConjectureStatus::Consistent, ConjectureStatus::Violation, ConjectureStatus::DefectiveFamily});
        row.status = enum_from(j.at("status").get<std::string>(),
                               {RowStatus::Ok, RowStatus::Disagreement, RowStatus::GuardRefused, RowStatus::Error});
        row.runs = j.at("runs").get<std::vector<std::uint64_t>>();
        row.message = j.at("message").get<std::string>();
    } catch (const json::exception& e) {
        throw InputError(std::string("malformed sweep row: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw InputError(std::string("malformed sweep row: ") + e.what());
    }
    return row;
}

void write_jsonl(std::ostream& out, const std::vector<SweepRow>& rows)
{
    for (const auto& r : rows)
        out << row_to_json(r) << '\n';
}

std::vector<SweepRow> read_jsonl(std::istream& in)
{
    std::vector<SweepRow> rows;
    std::string line;
    while (std::getline(in, line))
        if (line.find_first_not_of(" \t\r") != std::string::npos)
            rows.push_back(row_from_json(line));
    return rows;
}

std::string csv_header()
{
    return "format,domain_dim,codomain_dim,alpha_rank,kernel_dim,expected_kernel,classification,"
           "conjecture_status,status,runs,message";
}

namespace {

std::string csv_quote(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + "\"";
}

template <class T>
std::string opt_str(const std::optional<T>& v)
{
    if (!v)
        return "";
    if constexpr (std::is_enum_v<T>)
        return to_string(*v);
    else
        return std::to_string(*v);
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<SweepRow>& rows)
{
    out << csv_header() << '\n';
    for (const auto& r : rows) {
        std::string runs;
        for (std::size_t i = 0; i < r.runs.size(); ++i)
            runs += (i ? ";" : "") + std::to_string(r.runs[i]);
        out << r.format.to_string() << ',' << r.domain_dim << ',' << r.codomain_dim << ',' << opt_str(r.alpha_rank)
            << ',' << opt_str(r.kernel_dim) << ',' << r.expected_kernel << ',' << opt_str(r.classification) << ','
            << opt_str(r.conjecture_status) << ',' << to_string(r.status) << ',' << runs << ','
            << csv_quote(r.message) << '\n';
    }
}

}  // namespace critspace
