#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "critspace/critical.hpp"
#include "critspace/format.hpp"

namespace critspace {

enum class RankClass { MaxRank, Defective };
enum class ConjectureStatus { Consistent, Violation, DefectiveFamily };
/// ok: computed and all protocol runs agreed; disagreement: runs differ
/// (max rank reported); guard_refused: over the resource guard; error: the
/// computation threw, see message.
enum class RowStatus { Ok, Disagreement, GuardRefused, Error };

const char* to_string(RankClass c);
const char* to_string(ConjectureStatus c);
const char* to_string(RowStatus s);

struct SweepRow {
    Format format;
    std::uint64_t domain_dim = 0;
    std::uint64_t codomain_dim = 0;
    std::uint64_t expected_kernel = 0;  // max(0, domain - codomain)
    std::optional<std::uint64_t> alpha_rank;
    std::optional<std::uint64_t> kernel_dim;
    std::optional<RankClass> classification;
    std::optional<ConjectureStatus> conjecture_status;
    RowStatus status = RowStatus::Ok;
    std::vector<std::uint64_t> runs;  // rank per (prime, seed)
    std::string message;

    friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

/// (2, n, n+2): three factors with a leading factor of size 2.
bool in_defective_family(const Format& format);

struct SweepOptions {
    int k = 2;
    int max_n = 6;
    std::vector<std::uint32_t> primes = default_primes();
    std::vector<std::uint64_t> seeds = default_seeds();
    AlphaGuard guard;
    bool parallel = true;
};

/// Beyond-by-one formats with k leading factors 1 <= n_1 <= ... <= n_k <= max_n,
/// in canonical format order.
std::vector<Format> sweep_formats(int k, int max_n);

SweepRow sweep_row(const Format& format, const SweepOptions& options);

/// Rows in canonical format order. Rows of `done` whose format is in the
/// sweep and whose status is not Error are reused instead of recomputed.
std::vector<SweepRow> sweep(const SweepOptions& options, const std::vector<SweepRow>& done = {});

std::string row_to_json(const SweepRow& row);
SweepRow row_from_json(const std::string& line);

void write_jsonl(std::ostream& out, const std::vector<SweepRow>& rows);
std::vector<SweepRow> read_jsonl(std::istream& in);

std::string csv_header();
void write_csv(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace critspace
