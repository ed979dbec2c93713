#pragma once

// End-to-end driver: candidate loading, certification of every candidate,
// distinctness over the certified ones, and the JSON certificate report.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kcert/certify.hpp"
#include "kcert/distinct.hpp"

namespace kcert {

/// Malformed candidate file or unreadable input.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Candidates from a JSON array of rows, each row an array of [re, im]
/// pairs. Every row must have `expected_length` entries (when nonzero) or the
/// length of the first row.
std::vector<Candidate> parse_solutions(const std::string& text, std::size_t expected_length = 0);
std::vector<Candidate> load_solutions(const std::string& path, std::size_t expected_length = 0);

struct RunOptions {
    std::string system_path;
    std::string solutions_path;
    /// Report destination; nothing is written when empty.
    std::string output_path;
    int max_bits = kDefaultMaxBits;
    std::uint64_t seed = 0;
    /// 0 uses the OpenMP default, 1 runs the serial reference path.
    int threads = 0;
    bool horner = true;
};

struct CertificationSummary {
    std::size_t total_candidates = 0;
    std::size_t certified_count = 0;
    /// Counts below are over one representative per distinctness group.
    std::size_t distinct_count = 0;
    std::size_t real_count = 0;
    std::size_t positive_count = 0;
    std::vector<CertificateResult> results;
    DistinctnessReport distinctness;
    /// Distinctness group of each result; empty for uncertified ones.
    std::vector<std::optional<std::size_t>> group_of;

    std::vector<PrecisionLevel> ladder;
    std::uint64_t seed = 0;
    std::string system_path;
    std::string solutions_path;
};

/// Certification, grouping and counting for an already compiled system.
CertificationSummary summarize(const CompiledSystem& sys, const std::vector<Candidate>& candidates,
                               const std::vector<PrecisionLevel>& ladder, std::uint64_t seed, int threads = 0);

/// Loads both files, runs summarize, and writes the report if requested.
CertificationSummary run(const RunOptions& options);

std::string report_json(const CertificationSummary& summary);
void write_report(const CertificationSummary& summary, const std::string& path);

/// Short human-readable count table.
std::string format_summary(const CertificationSummary& summary);

}  // namespace kcert
