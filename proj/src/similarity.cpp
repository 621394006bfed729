#include "featmatch/similarity.hpp"

#include "featmatch/errors.hpp"

#include <algorithm>
#include <cmath>

namespace featmatch::similarity {

SimilarityScore jaccard(const textnorm::TokenSet& a, const textnorm::TokenSet& b) {
    SimilarityScore score;
    score.kind = ScoreKind::jaccard;
    if (a.empty() && b.empty()) {
        score.degenerate = true;
        return score;
    }

    // Both token lists are sorted and unique; count the overlap in one walk.
    std::size_t common = 0;
    auto ia = a.tokens.begin();
    auto ib = b.tokens.begin();
    while (ia != a.tokens.end() && ib != b.tokens.end()) {
        if (*ia == *ib) {
            ++common;
            ++ia;
            ++ib;
        } else if (*ia < *ib) {
            ++ia;
        } else {
            ++ib;
        }
    }
    auto united = a.size() + b.size() - common;
    score.value = static_cast<double>(common) / static_cast<double>(united);
    score.raw = score.value;
    return score;
}

SimilarityScore cosine(const embeddings::EmbeddingVector& u,
                       const embeddings::EmbeddingVector& v) {
    if (u.dim() != v.dim()) {
        throw DimensionMismatch("similarity: cosine of dim " + std::to_string(u.dim()) +
                                " against dim " + std::to_string(v.dim()));
    }
    if (u.provider_id != v.provider_id) {
        throw DimensionMismatch("similarity: cosine across providers '" + u.provider_id +
                                "' and '" + v.provider_id + "'");
    }

    SimilarityScore score;
    score.kind = ScoreKind::cosine;

    double dot = 0.0, norm_u = 0.0, norm_v = 0.0;
    for (std::size_t i = 0; i < u.values.size(); ++i) {
        dot += u.values[i] * v.values[i];
        norm_u += u.values[i] * u.values[i];
        norm_v += v.values[i] * v.values[i];
    }
    if (norm_u == 0.0 || norm_v == 0.0) {
        score.degenerate = true;
        return score;
    }
    score.raw = dot / (std::sqrt(norm_u) * std::sqrt(norm_v));
    score.value = std::clamp(score.raw, 0.0, 1.0);
    return score;
}

ScorerRegistry& ScorerRegistry::instance() {
    static ScorerRegistry registry;
    return registry;
}

ScorerRegistry::ScorerRegistry() {
    scorers_.emplace("jaccard",
                     [](const textnorm::NormalizedFeature& a, const textnorm::NormalizedFeature& b) {
                         return jaccard(a.token_set, b.token_set);
                     });
}

void ScorerRegistry::add(std::string name, Scorer scorer) {
    scorers_.insert_or_assign(std::move(name), std::move(scorer));
}

const Scorer* ScorerRegistry::find(std::string_view name) const {
    auto it = scorers_.find(name);
    return it == scorers_.end() ? nullptr : &it->second;
}

std::vector<std::string> ScorerRegistry::names() const {
    std::vector<std::string> out;
    out.reserve(scorers_.size());
    for (const auto& [name, scorer] : scorers_) out.push_back(name);
    return out;
}

Scorer make_cosine_scorer(std::shared_ptr<embeddings::EmbeddingProvider> provider) {
    return [provider = std::move(provider)](const textnorm::NormalizedFeature& a,
                                            const textnorm::NormalizedFeature& b) {
        auto vectors = provider->embed_many({a.embedding_text, b.embedding_text});
        return cosine(vectors[0], vectors[1]);
    };
}

} // namespace featmatch::similarity
