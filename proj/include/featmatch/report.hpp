#pragma once

#include "featmatch/matcher.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace featmatch::report {

enum class ReportFormat { csv, json };

ReportFormat parse_format(std::string_view text);
std::string_view to_string(ReportFormat format);

/// Renders a score at the report precision (8 decimals, fixed).
std::string format_score(double value);

/// CSV with header left_feature,right_feature,left_id,right_id,jaccard,
/// cosine,weighted_score,degenerate; scores at 8 decimals, LF line ends.
std::string to_csv(const matcher::MatchReport& report);

/// Full report including run metadata and input feature lists; key order
/// and float rendering are deterministic.
std::string to_json(const matcher::MatchReport& report);

/// Re-parses CSV report rows. Scores carry CSV precision; threshold,
/// weights, and metadata are not stored in CSV and come back as defaults.
matcher::MatchReport from_csv(std::string_view text);

/// Exact inverse of to_json.
matcher::MatchReport from_json(std::string_view text);

/// Writes via a temp file and atomic rename, so interrupted runs never
/// leave a partial report. Throws UnwritablePath.
void write_report_file(const matcher::MatchReport& report, ReportFormat format,
                       const std::filesystem::path& path);

/// Loads a report, sniffing JSON vs CSV from extension and content.
matcher::MatchReport read_report_file(const std::filesystem::path& path);

/// A human-curated correct correspondence.
struct GoldPair {
    std::string left;
    std::string right;

    bool operator==(const GoldPair&) const = default;
};

/// Reads a gold mapping: CSV with columns `left` and `right`.
std::vector<GoldPair> read_gold_file(const std::filesystem::path& path);

struct EvalResult {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::uint64_t true_positives = 0;
    std::uint64_t false_positives = 0;
    std::uint64_t false_negatives = 0;
    /// Gold pairs skipped because they reference names absent from the
    /// report's recorded inputs (diagnostic, not an error).
    std::uint64_t unknown_gold = 0;
};

/// Scores a report against a gold mapping. A row is a true positive iff
/// its (left, right) names are a gold pair; recall is over distinct gold
/// pairs. When the report carries its input feature lists (JSON reports
/// do), gold pairs referencing unknown names are skipped and counted.
/// Order-insensitive in rows and gold.
EvalResult evaluate(const matcher::MatchReport& report, const std::vector<GoldPair>& gold);

std::string to_json(const EvalResult& result);

} // namespace featmatch::report
