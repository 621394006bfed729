#pragma once

#include "featmatch/embeddings.hpp"
#include "featmatch/similarity.hpp"
#include "featmatch/textnorm.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace featmatch::matcher {

/// Convex fusion weights; w_cosine + w_jaccard = 1 within 1e-12.
struct WeightConfig {
    double w_cosine = 0.7;
    double w_jaccard = 0.3;

    bool operator==(const WeightConfig&) const = default;
};

enum class WeightOption { option1, option2, option3 };

/// option1 (default): cosine 0.7 / jaccard 0.3; option2: 0.5 / 0.5;
/// option3: 0.3 / 0.7.
WeightConfig weight_option(WeightOption option);

/// Explicit cosine weight; jaccard gets the complement. Throws
/// InvalidWeight outside [0,1].
WeightConfig weight_from_cosine(double w_cosine);

/// Parses "option1" | "option2" | "option3" | a float literal.
WeightConfig parse_weights(std::string_view text);

/// w_cosine * cosine + w_jaccard * jaccard.
double fuse(double jaccard, double cosine, const WeightConfig& weights);

/// One scored (left, right) feature pair.
struct PairScore {
    std::size_t left_index = 0;
    std::size_t right_index = 0;
    std::string left_name;
    std::string right_name;
    std::optional<std::string> left_id;
    std::optional<std::string> right_id;
    double jaccard = 0.0;
    double cosine = 0.0;
    double weighted = 0.0;
    double cosine_raw = 0.0; // unclamped, for debugging
    WeightConfig weights;
    bool degenerate = false;
};

struct RunMetadata {
    std::string timestamp;   // ISO-8601 UTC; honors SOURCE_DATE_EPOCH
    std::string config_hash; // FNV-1a 64 hex of the canonical run config
};

/// Thresholded match rows sorted by weighted score descending, ties by
/// left then right name ascending (then pair index, for duplicate names).
struct MatchReport {
    std::vector<PairScore> rows;
    double threshold = 0.7;
    WeightConfig weights;
    std::string provider_id;
    RunMetadata metadata;
    std::vector<std::string> left_features;  // input names, input order
    std::vector<std::string> right_features;
    std::uint64_t pairs_scored = 0; // pre-filter cross-product count
    bool empty_input = false;       // warning: one side had no features
};

/// Scores one pair: jaccard and cosine through the similarity module,
/// fused with the given weights; degenerate is the OR of both scorers.
PairScore score_pair(const textnorm::NormalizedFeature& left,
                     const textnorm::NormalizedFeature& right,
                     const embeddings::EmbeddingVector& left_vec,
                     const embeddings::EmbeddingVector& right_vec,
                     const WeightConfig& weights);

/// Scores all |left| x |right| pairs (embedding each unique text once),
/// keeps rows with weighted >= threshold, and sorts them. Pair scoring
/// fans out across threads; results are reduced in pair-index order, so
/// the report is deterministic. Empty input on either side yields an
/// empty report flagged empty_input.
MatchReport match_all(const std::vector<textnorm::NormalizedFeature>& left,
                      const std::vector<textnorm::NormalizedFeature>& right,
                      const WeightConfig& weights, double threshold,
                      embeddings::EmbeddingProvider& provider);

/// Annotates rows with ids where the maps know the feature name; rows
/// and order are otherwise untouched.
MatchReport attach_ids(MatchReport report, const std::map<std::string, std::string>& left_ids,
                       const std::map<std::string, std::string>& right_ids);

/// Keeps each left feature's k best rows and re-sorts globally.
MatchReport top_k_per_left(MatchReport report, std::size_t k);

} // namespace featmatch::matcher
