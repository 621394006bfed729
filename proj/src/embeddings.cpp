#include "featmatch/embeddings.hpp"

#include "featmatch/errors.hpp"
#include "featmatch/textnorm.hpp"

#include <httplib.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <unordered_set>

namespace featmatch::embeddings {

ProviderKind parse_provider_kind(std::string_view text) {
    if (text == "baseline") return ProviderKind::baseline;
    if (text == "remote") return ProviderKind::remote;
    throw ConfigError("embeddings: unknown provider kind '" + std::string(text) + "'");
}

std::string_view to_string(ProviderKind kind) {
    return kind == ProviderKind::baseline ? "baseline" : "remote";
}

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t state) {
    for (unsigned char b : bytes) {
        state ^= b;
        state *= kFnvPrime;
    }
    return state;
}

namespace {

std::uint64_t seeded_hash(std::uint64_t seed, std::string_view text) {
    char seed_bytes[8];
    for (int i = 0; i < 8; ++i) {
        seed_bytes[i] = static_cast<char>((seed >> (8 * i)) & 0xff);
    }
    return fnv1a64(text, fnv1a64(std::string_view(seed_bytes, 8)));
}

} // namespace

std::vector<double> baseline_embed(std::string_view text, std::size_t dim, std::uint64_t seed) {
    if (dim < 8) throw ConfigError("embeddings: baseline dim must be >= 8");

    std::vector<double> vec(dim, 0.0);
    auto accumulate = [&](std::string_view key, double weight) {
        auto hash = seeded_hash(seed, key);
        double sign = (hash >> 63) ? -1.0 : 1.0;
        vec[hash % dim] += sign * weight;
    };

    for (const auto& token : textnorm::tokenize(text)) {
        accumulate(token, 1.0);
        std::string padded = "^" + token + "$";
        for (std::size_t i = 0; i + 3 <= padded.size(); ++i) {
            accumulate(std::string_view(padded).substr(i, 3), 0.5);
        }
    }

    double norm_sq = 0.0;
    for (double v : vec) norm_sq += v * v;
    if (norm_sq > 0.0) {
        double inv = 1.0 / std::sqrt(norm_sq);
        for (double& v : vec) v *= inv;
    }
    return vec;
}

BaselineProvider::BaselineProvider(std::size_t dim, std::uint64_t seed)
    : dim_(dim), seed_(seed),
      id_("baseline-fnv1a64/dim=" + std::to_string(dim) + "/seed=" + std::to_string(seed)) {
    if (dim < 8) throw ConfigError("embeddings: baseline dim must be >= 8");
}

std::vector<EmbeddingVector> BaselineProvider::embed_many(const std::vector<std::string>& texts) {
    std::vector<EmbeddingVector> out;
    out.reserve(texts.size());
    for (const auto& text : texts) {
        out.push_back({id_, baseline_embed(text, dim_, seed_)});
    }
    return out;
}

namespace {

// Splits "http(s)://host[:port]/path" into base and path for httplib.
std::pair<std::string, std::string> split_endpoint(const std::string& endpoint) {
    auto scheme_end = endpoint.find("://");
    if (scheme_end == std::string::npos) {
        throw ConfigError("embeddings: endpoint must start with http:// or https://");
    }
    auto path_start = endpoint.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {endpoint, "/"};
    return {endpoint.substr(0, path_start), endpoint.substr(path_start)};
}

} // namespace

RemoteProvider::RemoteProvider(std::string endpoint, std::size_t batch_size,
                               std::chrono::milliseconds timeout)
    : endpoint_(std::move(endpoint)), batch_size_(batch_size ? batch_size : 1),
      timeout_(timeout), id_("remote/" + endpoint_) {
    std::tie(host_base_, path_) = split_endpoint(endpoint_);
}

std::size_t RemoteProvider::request_count() const {
    std::lock_guard lock(mutex_);
    return request_count_;
}

std::vector<std::vector<double>> RemoteProvider::post_batch(const std::vector<std::string>& texts) {
    httplib::Client client(host_base_);
    auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout_);
    auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(timeout_ - secs);
    client.set_connection_timeout(secs.count(), usecs.count());
    client.set_read_timeout(secs.count(), usecs.count());
    client.set_write_timeout(secs.count(), usecs.count());

    nlohmann::json body;
    body["texts"] = texts;

    {
        std::lock_guard lock(mutex_);
        ++request_count_;
    }
    auto result = client.Post(path_, body.dump(), "application/json");
    if (!result) {
        throw RemoteUnavailable("embeddings: endpoint " + endpoint_ + " unreachable (" +
                                httplib::to_string(result.error()) + ")");
    }
    if (result->status != 200) {
        throw RemoteUnavailable("embeddings: endpoint " + endpoint_ + " returned status " +
                                std::to_string(result->status));
    }

    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(result->body);
    } catch (const nlohmann::json::exception&) {
        throw RemoteUnavailable("embeddings: endpoint " + endpoint_ + " returned malformed JSON");
    }
    if (!doc.is_object() || !doc.contains("dim") || !doc.contains("vectors") ||
        !doc["dim"].is_number_integer() || !doc["vectors"].is_array()) {
        throw RemoteUnavailable("embeddings: endpoint " + endpoint_ +
                                " response missing dim/vectors");
    }
    auto dim = doc["dim"].get<std::size_t>();
    const auto& vectors = doc["vectors"];
    if (vectors.size() != texts.size()) {
        throw RemoteUnavailable("embeddings: endpoint returned " +
                                std::to_string(vectors.size()) + " vectors for " +
                                std::to_string(texts.size()) + " texts");
    }

    {
        std::lock_guard lock(mutex_);
        if (dim_ == 0) dim_ = dim;
        if (dim != dim_) {
            throw DimensionMismatch("embeddings: endpoint changed dimension from " +
                                    std::to_string(dim_) + " to " + std::to_string(dim));
        }
    }

    std::vector<std::vector<double>> out;
    out.reserve(vectors.size());
    for (const auto& row : vectors) {
        if (!row.is_array() || row.size() != dim) {
            throw DimensionMismatch("embeddings: endpoint returned a vector of length " +
                                    std::to_string(row.size()) + ", expected " +
                                    std::to_string(dim));
        }
        std::vector<double> values;
        values.reserve(dim);
        for (const auto& v : row) {
            if (!v.is_number()) {
                throw RemoteUnavailable("embeddings: endpoint returned a non-numeric value");
            }
            double d = v.get<double>();
            if (!std::isfinite(d)) {
                throw RemoteUnavailable("embeddings: endpoint returned a non-finite value");
            }
            values.push_back(d);
        }
        out.push_back(std::move(values));
    }
    return out;
}

std::vector<EmbeddingVector> RemoteProvider::embed_many(const std::vector<std::string>& texts) {
    // Empty texts short-circuit to zero vectors; only the rest go out.
    std::vector<std::string> outbound;
    std::vector<std::size_t> outbound_index;
    for (std::size_t i = 0; i < texts.size(); ++i) {
        if (!texts[i].empty()) {
            outbound.push_back(texts[i]);
            outbound_index.push_back(i);
        }
    }

    std::vector<std::vector<double>> fetched;
    fetched.reserve(outbound.size());
    for (std::size_t start = 0; start < outbound.size(); start += batch_size_) {
        auto end = std::min(outbound.size(), start + batch_size_);
        std::vector<std::string> chunk(outbound.begin() + static_cast<std::ptrdiff_t>(start),
                                       outbound.begin() + static_cast<std::ptrdiff_t>(end));
        auto vectors = post_batch(chunk);
        for (auto& v : vectors) fetched.push_back(std::move(v));
    }

    std::size_t dim;
    {
        std::lock_guard lock(mutex_);
        dim = dim_;
    }
    std::vector<EmbeddingVector> out(texts.size());
    for (auto& vector : out) vector = {id_, std::vector<double>(dim, 0.0)};
    for (std::size_t k = 0; k < outbound_index.size(); ++k) {
        out[outbound_index[k]].values = std::move(fetched[k]);
    }
    return out;
}

CachingProvider::CachingProvider(std::shared_ptr<EmbeddingProvider> inner)
    : inner_(std::move(inner)) {}

const std::string& CachingProvider::provider_id() const { return inner_->provider_id(); }

std::vector<EmbeddingVector> CachingProvider::embed_many(const std::vector<std::string>& texts) {
    // First-seen order of cache misses keeps backend requests deterministic.
    std::vector<std::string> missing;
    {
        std::unordered_set<std::string_view> queued;
        std::lock_guard lock(mutex_);
        for (const auto& text : texts) {
            if (!cache_.contains(text) && queued.insert(text).second) {
                missing.push_back(text);
            }
        }
    }

    if (!missing.empty()) {
        auto fetched = inner_->embed_many(missing);
        std::lock_guard lock(mutex_);
        for (std::size_t i = 0; i < missing.size(); ++i) {
            cache_.insert_or_assign(missing[i], std::move(fetched[i]));
        }
    }

    std::vector<EmbeddingVector> out;
    out.reserve(texts.size());
    std::lock_guard lock(mutex_);
    for (const auto& text : texts) out.push_back(cache_.at(text));
    return out;
}

void CachingProvider::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return;
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception&) {
        return; // stale or foreign cache files are ignored
    }
    if (!doc.is_object() || doc.value("provider_id", "") != provider_id()) return;
    if (!doc.contains("entries") || !doc["entries"].is_object()) return;

    std::lock_guard lock(mutex_);
    for (const auto& [text, values] : doc["entries"].items()) {
        if (!values.is_array()) continue;
        EmbeddingVector vector{provider_id(), values.get<std::vector<double>>()};
        cache_.insert_or_assign(text, std::move(vector));
    }
}

void CachingProvider::save(const std::filesystem::path& path) const {
    nlohmann::json entries = nlohmann::json::object();
    {
        std::lock_guard lock(mutex_);
        for (const auto& [text, vector] : cache_) entries[text] = vector.values;
    }
    nlohmann::json doc;
    doc["provider_id"] = provider_id();
    doc["entries"] = std::move(entries);

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw UnwritablePath("embeddings: cannot write cache " + path.string());
    out << doc.dump(2) << '\n';
}

std::size_t CachingProvider::size() const {
    std::lock_guard lock(mutex_);
    return cache_.size();
}

std::shared_ptr<CachingProvider> make_provider(const ProviderConfig& config) {
    std::shared_ptr<EmbeddingProvider> inner;
    switch (config.kind) {
    case ProviderKind::baseline:
        inner = std::make_shared<BaselineProvider>(config.dim, config.seed);
        break;
    case ProviderKind::remote:
        if (config.endpoint.empty()) {
            throw ConfigError("embeddings: remote provider requires an endpoint");
        }
        inner = std::make_shared<RemoteProvider>(config.endpoint, config.batch_size,
                                                 config.timeout);
        break;
    }
    return std::make_shared<CachingProvider>(std::move(inner));
}

EmbeddingVector embed(const std::string& text, EmbeddingProvider& provider) {
    return provider.embed_many({text}).front();
}

std::vector<EmbeddingVector> embed_batch(const std::vector<std::string>& texts,
                                         EmbeddingProvider& provider) {
    if (texts.empty()) return {};

    // Dedupe before hitting the provider; fan results back out.
    std::vector<std::string> unique;
    std::unordered_map<std::string, std::size_t> index;
    for (const auto& text : texts) {
        if (index.emplace(text, unique.size()).second) unique.push_back(text);
    }
    auto vectors = provider.embed_many(unique);
    std::vector<EmbeddingVector> out;
    out.reserve(texts.size());
    for (const auto& text : texts) out.push_back(vectors[index.at(text)]);
    return out;
}

} // namespace featmatch::embeddings
