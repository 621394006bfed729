#pragma once

#include "featmatch/embeddings.hpp"
#include "featmatch/textnorm.hpp"

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace featmatch::similarity {

enum class ScoreKind { jaccard, cosine };

/// A score in [0,1]. `degenerate` marks the convention cases (empty token
/// sets, zero vectors) where 0 stands for "no evidence", not measured
/// dissimilarity. `raw` keeps the unclamped value for debug output; it
/// equals `value` except for negative cosines.
struct SimilarityScore {
    double value = 0.0;
    ScoreKind kind = ScoreKind::jaccard;
    bool degenerate = false;
    double raw = 0.0;
};

/// |A ∩ B| / |A ∪ B| over deduplicated token sets. Two empty sets score
/// 0 with degenerate set.
SimilarityScore jaccard(const textnorm::TokenSet& a, const textnorm::TokenSet& b);

/// u·v / (‖u‖‖v‖), clamped to [0,1]. A zero vector on either side scores
/// 0 with degenerate set. Throws DimensionMismatch when dimensions or
/// providers differ — that is a wiring bug, not data.
SimilarityScore cosine(const embeddings::EmbeddingVector& u, const embeddings::EmbeddingVector& v);

/// Pluggable scorer over normalized features; lets further token- or
/// string-based measures register without touching the matcher.
using Scorer = std::function<SimilarityScore(const textnorm::NormalizedFeature&,
                                             const textnorm::NormalizedFeature&)>;

class ScorerRegistry {
public:
    static ScorerRegistry& instance();

    void add(std::string name, Scorer scorer);
    [[nodiscard]] const Scorer* find(std::string_view name) const;
    [[nodiscard]] std::vector<std::string> names() const;

private:
    ScorerRegistry();
    std::map<std::string, Scorer, std::less<>> scorers_;
};

/// A Scorer that embeds both features' embedding_text through the given
/// provider and returns their cosine.
Scorer make_cosine_scorer(std::shared_ptr<embeddings::EmbeddingProvider> provider);

} // namespace featmatch::similarity
