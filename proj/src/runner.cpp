#include "featmatch/runner.hpp"

#include "featmatch/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>

namespace featmatch::runner {

namespace {

void reject_unknown_keys(const nlohmann::json& object, std::initializer_list<const char*> known,
                         const std::string& where) {
    for (const auto& [key, value] : object.items()) {
        bool found = false;
        for (const auto* k : known) {
            if (key == k) {
                found = true;
                break;
            }
        }
        if (!found) throw ConfigError("config: unknown key '" + key + "' in " + where);
    }
}

SourceConfig source_from_json(const nlohmann::json& j, const std::string& side) {
    reject_unknown_keys(j, {"path", "label", "columns"}, side);
    SourceConfig source;
    source.path = j.at("path").get<std::string>();
    source.label = j.value("label", "");
    if (j.contains("columns")) {
        const auto& c = j["columns"];
        reject_unknown_keys(c, {"name", "description", "id", "values"}, side + ".columns");
        source.columns.name = c.value("name", source.columns.name);
        source.columns.description = c.value("description", source.columns.description);
        source.columns.id = c.value("id", source.columns.id);
        source.columns.values = c.value("values", source.columns.values);
    }
    return source;
}

nlohmann::json source_to_json(const SourceConfig& source) {
    nlohmann::json j;
    j["path"] = source.path.string();
    j["label"] = source.label;
    j["columns"] = {{"name", source.columns.name},
                    {"description", source.columns.description},
                    {"id", source.columns.id},
                    {"values", source.columns.values}};
    return j;
}

} // namespace

RunConfig load_config_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UnreadableSource("config: cannot open " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config: " + path.string() + " is not valid JSON: " + e.what());
    }
    if (!j.is_object()) throw ConfigError("config: " + path.string() + " must hold a JSON object");

    reject_unknown_keys(j,
                        {"left", "right", "compose", "norm", "provider", "weights", "threshold",
                         "top_k", "output", "format", "cache"},
                        "config");

    RunConfig config;
    if (j.contains("left")) config.left = source_from_json(j["left"], "left");
    if (j.contains("right")) config.right = source_from_json(j["right"], "right");
    if (j.contains("compose")) {
        config.compose = ingest::parse_compose_policy(j["compose"].get<std::string>());
    }
    if (j.contains("norm")) {
        const auto& n = j["norm"];
        reject_unknown_keys(n, {"lemmatizer", "keep_digits", "embed_raw", "stopwords",
                                "stopwords_file"},
                            "norm");
        if (n.contains("lemmatizer")) {
            config.norm.lemmatizer = textnorm::parse_lemmatizer(n["lemmatizer"].get<std::string>());
        }
        config.norm.keep_digits = n.value("keep_digits", config.norm.keep_digits);
        config.norm.embed_raw = n.value("embed_raw", config.norm.embed_raw);
        if (n.contains("stopwords")) {
            config.norm.stopwords.clear();
            for (const auto& entry : n["stopwords"]) {
                auto word = entry.get<std::string>();
                std::transform(word.begin(), word.end(), word.begin(), [](unsigned char c) {
                    return static_cast<char>(std::tolower(c));
                });
                config.norm.stopwords.insert(std::move(word));
            }
        }
        if (n.contains("stopwords_file")) {
            config.stopwords_file = std::filesystem::path(n["stopwords_file"].get<std::string>());
        }
    }
    if (j.contains("provider")) {
        const auto& p = j["provider"];
        reject_unknown_keys(p, {"kind", "dim", "seed", "endpoint", "batch_size", "timeout_ms"},
                            "provider");
        if (p.contains("kind")) {
            config.provider.kind = embeddings::parse_provider_kind(p["kind"].get<std::string>());
        }
        config.provider.dim = p.value("dim", config.provider.dim);
        config.provider.seed = p.value("seed", config.provider.seed);
        config.provider.endpoint = p.value("endpoint", config.provider.endpoint);
        config.provider.batch_size = p.value("batch_size", config.provider.batch_size);
        if (p.contains("timeout_ms")) {
            config.provider.timeout = std::chrono::milliseconds(p["timeout_ms"].get<std::int64_t>());
        }
    }
    if (j.contains("weights")) {
        if (j["weights"].is_number()) {
            config.weights = matcher::weight_from_cosine(j["weights"].get<double>());
        } else {
            config.weights = matcher::parse_weights(j["weights"].get<std::string>());
        }
    }
    if (j.contains("threshold")) config.threshold = j["threshold"].get<double>();
    if (j.contains("top_k") && !j["top_k"].is_null()) {
        config.top_k = j["top_k"].get<std::size_t>();
    }
    if (j.contains("output")) config.output = std::filesystem::path(j["output"].get<std::string>());
    if (j.contains("format")) config.format = report::parse_format(j["format"].get<std::string>());
    if (j.contains("cache")) {
        config.cache_path = std::filesystem::path(j["cache"].get<std::string>());
    }
    return config;
}

std::string config_to_json(const RunConfig& config) {
    nlohmann::json j;
    j["left"] = source_to_json(config.left);
    j["right"] = source_to_json(config.right);
    j["compose"] = std::string(ingest::to_string(config.compose));
    j["norm"] = {{"lemmatizer", std::string(textnorm::to_string(config.norm.lemmatizer))},
                 {"keep_digits", config.norm.keep_digits},
                 {"embed_raw", config.norm.embed_raw},
                 {"stopwords", config.norm.stopwords}};
    j["provider"] = {{"kind", std::string(embeddings::to_string(config.provider.kind))},
                     {"dim", config.provider.dim},
                     {"seed", config.provider.seed},
                     {"endpoint", config.provider.endpoint},
                     {"batch_size", config.provider.batch_size},
                     {"timeout_ms", config.provider.timeout.count()}};
    j["weights"] = {{"w_cosine", config.weights.w_cosine},
                    {"w_jaccard", config.weights.w_jaccard}};
    j["threshold"] = config.threshold;
    j["top_k"] = config.top_k ? nlohmann::json(*config.top_k) : nlohmann::json(nullptr);
    j["format"] = std::string(report::to_string(config.format));
    return j.dump();
}

std::string config_hash(const RunConfig& config) {
    auto hash = embeddings::fnv1a64(config_to_json(config));
    char buffer[17];
    std::snprintf(buffer, sizeof(buffer), "%016llx", static_cast<unsigned long long>(hash));
    return buffer;
}

void validate(const RunConfig& config) {
    if (!(config.threshold >= 0.0 && config.threshold <= 1.0)) {
        throw ConfigError("config: threshold " + std::to_string(config.threshold) +
                          " outside [0,1]");
    }
    if (!(config.weights.w_cosine >= 0.0 && config.weights.w_cosine <= 1.0)) {
        throw InvalidWeight("config: cosine weight outside [0,1]");
    }
    if (std::abs(config.weights.w_cosine + config.weights.w_jaccard - 1.0) > 1e-12) {
        throw InvalidWeight("config: weights must sum to 1");
    }
    if (config.top_k && *config.top_k == 0) {
        throw ConfigError("config: top_k must be >= 1");
    }
    if (config.provider.kind == embeddings::ProviderKind::baseline && config.provider.dim < 8) {
        throw ConfigError("config: baseline provider dim must be >= 8");
    }
    if (config.provider.kind == embeddings::ProviderKind::remote &&
        config.provider.endpoint.empty()) {
        throw ConfigError("config: remote provider requires an endpoint");
    }
    for (const auto* source : {&config.left, &config.right}) {
        if (source->path.empty()) {
            throw ConfigError("config: both --left and --right sources are required");
        }
        if (!std::filesystem::exists(source->path)) {
            throw UnreadableSource("config: source file does not exist: " +
                                   source->path.string());
        }
    }
    if (config.stopwords_file && !std::filesystem::exists(*config.stopwords_file)) {
        throw UnreadableSource("config: stopword file does not exist: " +
                               config.stopwords_file->string());
    }
}

std::string current_timestamp() {
    std::time_t now;
    if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) {
        now = static_cast<std::time_t>(std::strtoll(epoch, nullptr, 10));
    } else {
        now = std::time(nullptr);
    }
    std::tm utc{};
    gmtime_r(&now, &utc);
    char buffer[32];
    std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &utc);
    return buffer;
}

matcher::MatchReport run_to_report(const RunConfig& config) {
    RunConfig effective = config;
    if (effective.left.label.empty()) effective.left.label = effective.left.path.stem().string();
    if (effective.right.label.empty()) effective.right.label = effective.right.path.stem().string();
    validate(effective);
    if (effective.stopwords_file) {
        effective.norm.stopwords = textnorm::load_stopwords_file(*effective.stopwords_file);
    }

    auto left_records = ingest::load_schema(effective.left.path, effective.left.label,
                                            effective.left.columns);
    auto right_records = ingest::load_schema(effective.right.path, effective.right.label,
                                             effective.right.columns);

    auto normalize_side = [&](const std::vector<ingest::FeatureRecord>& records) {
        std::vector<textnorm::NormalizedFeature> features;
        features.reserve(records.size());
        for (std::size_t i = 0; i < records.size(); ++i) {
            features.push_back(textnorm::normalize(
                ingest::compose_text(records[i], effective.compose, i), effective.norm));
        }
        return features;
    };
    auto left_features = normalize_side(left_records);
    auto right_features = normalize_side(right_records);

    auto provider = embeddings::make_provider(effective.provider);
    if (effective.cache_path) provider->load(*effective.cache_path);

    auto report = matcher::match_all(left_features, right_features, effective.weights,
                                     effective.threshold, *provider);

    auto id_map = [](const std::vector<ingest::FeatureRecord>& records) {
        std::map<std::string, std::string> ids;
        for (const auto& record : records) {
            if (record.feature_id) ids.emplace(record.name, *record.feature_id);
        }
        return ids;
    };
    report = matcher::attach_ids(std::move(report), id_map(left_records), id_map(right_records));
    if (effective.top_k) report = matcher::top_k_per_left(std::move(report), *effective.top_k);

    report.metadata.timestamp = current_timestamp();
    report.metadata.config_hash = config_hash(effective);

    if (effective.cache_path) provider->save(*effective.cache_path);
    return report;
}

int run(const RunConfig& config) {
    auto match_report = run_to_report(config);
    if (config.output == "-") {
        std::cout << (config.format == report::ReportFormat::csv ? report::to_csv(match_report)
                                                                 : report::to_json(match_report));
        std::cout.flush();
    } else {
        report::write_report_file(match_report, config.format, config.output);
    }
    if (match_report.empty_input) {
        std::cerr << "featmatch: warning: one input had no features; report is empty\n";
    }
    return 0;
}

} // namespace featmatch::runner
