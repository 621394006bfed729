#pragma once

#include "featmatch/ingest.hpp"

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace featmatch::textnorm {

enum class Lemmatizer { porter, none };

Lemmatizer parse_lemmatizer(std::string_view text);
std::string_view to_string(Lemmatizer lemmatizer);

/// The default stopword list. Small and enumerable by design; swap it
/// out via NormConfig::stopwords or a stopword file when it does not fit
/// the data — the choice directly changes Jaccard values.
const std::set<std::string>& default_stopwords();

/// Loads a newline-delimited stopword file (lowercased, '#' comments and
/// blank lines skipped).
std::set<std::string> load_stopwords_file(const std::filesystem::path& path);

struct NormConfig {
    std::set<std::string> stopwords = default_stopwords();
    Lemmatizer lemmatizer = Lemmatizer::porter;
    bool keep_digits = true;
    /// When set, the embedding text is the sanitized string, skipping
    /// stopword removal and lemmatization. The token set is unaffected.
    bool embed_raw = false;
    /// Consulted before the stemmer; empty by default.
    std::map<std::string, std::string> lemma_exceptions;
};

/// Deduplicated lowercase tokens, each matching [a-z0-9]+.
struct TokenSet {
    std::vector<std::string> tokens; // sorted, unique

    [[nodiscard]] static TokenSet from_tokens(const std::vector<std::string>& raw);
    [[nodiscard]] bool contains(std::string_view token) const;
    [[nodiscard]] std::size_t size() const { return tokens.size(); }
    [[nodiscard]] bool empty() const { return tokens.empty(); }
    bool operator==(const TokenSet&) const = default;
};

/// A feature after the full normalization pipeline.
struct NormalizedFeature {
    ingest::ComposedText composed;
    TokenSet token_set;
    std::string embedding_text; // lemmatized tokens rejoined, original order, duplicates kept
};

/// Lowercases, maps every character outside [a-z0-9] or whitespace to a
/// space, collapses runs of whitespace, and trims. Accented Latin letters
/// transliterate to their base letter; other non-ASCII is dropped.
/// Idempotent. With keep_digits=false digits are dropped as well.
std::string sanitize(std::string_view text, bool keep_digits = true);

/// Whitespace split of sanitized text; no empty tokens.
std::vector<std::string> tokenize(std::string_view text);

/// Removes configured stopwords, preserving survivor order.
std::vector<std::string> remove_stopwords(std::vector<std::string> tokens,
                                          const NormConfig& config);

/// Stems one token per the configured lemmatizer, consulting the
/// exception dictionary first.
std::string lemmatize(const std::string& token, const NormConfig& config);

/// sanitize -> tokenize -> remove_stopwords -> lemmatize per token.
/// Deterministic: identical composed text and config give an identical
/// NormalizedFeature.
NormalizedFeature normalize(const ingest::ComposedText& composed, const NormConfig& config);

} // namespace featmatch::textnorm
