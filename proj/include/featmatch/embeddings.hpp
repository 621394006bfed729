#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace featmatch::embeddings {

/// Fixed-dimension real vector from a named provider. Values are finite;
/// a provider keeps one dimension for a whole run.
struct EmbeddingVector {
    std::string provider_id;
    std::vector<double> values;

    [[nodiscard]] std::size_t dim() const { return values.size(); }
    bool operator==(const EmbeddingVector&) const = default;
};

enum class ProviderKind { baseline, remote };

ProviderKind parse_provider_kind(std::string_view text);
std::string_view to_string(ProviderKind kind);

struct ProviderConfig {
    ProviderKind kind = ProviderKind::baseline;
    std::size_t dim = 256;       // baseline only; must be >= 8
    std::uint64_t seed = 0;      // baseline only
    std::string endpoint;        // remote only; required
    std::size_t batch_size = 64; // remote request batching
    std::chrono::milliseconds timeout{30000};
};

inline constexpr std::uint64_t kFnvOffsetBasis = 0xcbf29ce484222325ULL;
inline constexpr std::uint64_t kFnvPrime = 0x00000100000001b3ULL;

/// FNV-1a 64 over raw bytes, continuing from a prior state.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t state = kFnvOffsetBasis);

/// Platform-independent hashed embedding: each whitespace token (weight
/// 1.0) and each character trigram of "^token$" (weight 0.5) is hashed
/// with FNV-1a 64 — the eight seed bytes little-endian first, then the
/// string — landing at index hash % dim with sign from hash bit 63. The
/// result is L2-normalized; empty input stays the zero vector.
std::vector<double> baseline_embed(std::string_view text, std::size_t dim, std::uint64_t seed);

/// A source of embedding vectors. Implementations must be safe for
/// concurrent embed_many calls.
class EmbeddingProvider {
public:
    virtual ~EmbeddingProvider() = default;

    [[nodiscard]] virtual const std::string& provider_id() const = 0;

    /// One vector per text, in request order. Empty texts yield zero
    /// vectors without touching any backend. Never returns partial
    /// results: failures throw.
    virtual std::vector<EmbeddingVector> embed_many(const std::vector<std::string>& texts) = 0;
};

class BaselineProvider final : public EmbeddingProvider {
public:
    BaselineProvider(std::size_t dim, std::uint64_t seed);

    [[nodiscard]] const std::string& provider_id() const override { return id_; }
    std::vector<EmbeddingVector> embed_many(const std::vector<std::string>& texts) override;

private:
    std::size_t dim_;
    std::uint64_t seed_;
    std::string id_;
};

/// Speaks the embedding wire protocol: POST endpoint with JSON body
/// {"texts": [...]}, response {"dim": n, "vectors": [[...], ...]} in
/// request order. Requests are chunked at batch_size texts.
class RemoteProvider final : public EmbeddingProvider {
public:
    RemoteProvider(std::string endpoint, std::size_t batch_size,
                   std::chrono::milliseconds timeout);

    [[nodiscard]] const std::string& provider_id() const override { return id_; }
    std::vector<EmbeddingVector> embed_many(const std::vector<std::string>& texts) override;

    /// Backend calls made so far (diagnostics).
    [[nodiscard]] std::size_t request_count() const;

private:
    std::vector<std::vector<double>> post_batch(const std::vector<std::string>& texts);

    std::string endpoint_;
    std::string host_base_; // scheme://host[:port]
    std::string path_;
    std::size_t batch_size_;
    std::chrono::milliseconds timeout_;
    std::string id_;
    mutable std::mutex mutex_;
    std::size_t dim_ = 0; // fixed by the first response
    std::size_t request_count_ = 0;
};

/// Memoizes an inner provider so each unique text is embedded exactly
/// once per run. Thread-safe; results are identical with or without it.
class CachingProvider final : public EmbeddingProvider {
public:
    explicit CachingProvider(std::shared_ptr<EmbeddingProvider> inner);

    [[nodiscard]] const std::string& provider_id() const override;
    std::vector<EmbeddingVector> embed_many(const std::vector<std::string>& texts) override;

    /// Load a previously saved cache; entries from another provider are
    /// ignored. Missing file is not an error.
    void load(const std::filesystem::path& path);
    void save(const std::filesystem::path& path) const;

    [[nodiscard]] std::size_t size() const;

private:
    std::shared_ptr<EmbeddingProvider> inner_;
    mutable std::mutex mutex_;
    std::unordered_map<std::string, EmbeddingVector> cache_;
};

/// Builds the configured provider wrapped in a cache.
std::shared_ptr<CachingProvider> make_provider(const ProviderConfig& config);

/// Embeds one text. Deterministic per (provider identity, text).
EmbeddingVector embed(const std::string& text, EmbeddingProvider& provider);

/// Elementwise equal to mapping embed over texts; duplicate texts are
/// embedded once.
std::vector<EmbeddingVector> embed_batch(const std::vector<std::string>& texts,
                                         EmbeddingProvider& provider);

} // namespace featmatch::embeddings
