#pragma once

#include "featmatch/embeddings.hpp"
#include "featmatch/ingest.hpp"
#include "featmatch/matcher.hpp"
#include "featmatch/report.hpp"
#include "featmatch/textnorm.hpp"

#include <filesystem>
#include <optional>
#include <string>

namespace featmatch::runner {

struct SourceConfig {
    std::filesystem::path path;
    std::string label; // defaults to the file stem
    ingest::ColumnMap columns;
};

/// One run, end to end: two sources through ingest, textnorm,
/// embeddings, matcher, and report serialization.
struct RunConfig {
    SourceConfig left;
    SourceConfig right;
    ingest::ComposePolicy compose = ingest::ComposePolicy::name_plus_description;
    textnorm::NormConfig norm;
    std::optional<std::filesystem::path> stopwords_file;
    embeddings::ProviderConfig provider;
    matcher::WeightConfig weights; // option1 unless overridden
    double threshold = 0.7;
    std::optional<std::size_t> top_k;
    std::filesystem::path output = "-"; // "-" writes to stdout
    report::ReportFormat format = report::ReportFormat::csv;
    std::optional<std::filesystem::path> cache_path;
};

/// Parses the JSON run-config file (schema in the README). Unknown keys
/// are rejected so typos fail loudly.
RunConfig load_config_file(const std::filesystem::path& path);

/// Canonical JSON of the effective config (stopwords resolved).
std::string config_to_json(const RunConfig& config);

/// FNV-1a 64 hex of the canonical config JSON.
std::string config_hash(const RunConfig& config);

/// Checks ranges, provider requirements, and that referenced files
/// exist. Throws ConfigError or UnreadableSource before any work runs.
void validate(const RunConfig& config);

/// Executes the pipeline and returns the finished report (metadata
/// filled, ids attached, top-k applied) without writing anything.
matcher::MatchReport run_to_report(const RunConfig& config);

/// run_to_report plus report serialization to config.output ("-" means
/// stdout; file writes are atomic). Returns 0; failures throw Error.
int run(const RunConfig& config);

/// ISO-8601 UTC now; SOURCE_DATE_EPOCH overrides the clock so runs can
/// be byte-reproducible.
std::string current_timestamp();

} // namespace featmatch::runner
