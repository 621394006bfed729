#include "featmatch/embeddings.hpp"
#include "featmatch/errors.hpp"
#include "featmatch/ingest.hpp"
#include "featmatch/matcher.hpp"
#include "featmatch/porter.hpp"
#include "featmatch/report.hpp"
#include "featmatch/similarity.hpp"
#include "featmatch/textnorm.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

namespace py = pybind11;
using namespace featmatch;

namespace {

textnorm::NormConfig make_norm_config(const std::string& lemmatizer, bool keep_digits,
                                      bool embed_raw,
                                      const std::optional<std::vector<std::string>>& stopwords) {
    textnorm::NormConfig config;
    config.lemmatizer = textnorm::parse_lemmatizer(lemmatizer);
    config.keep_digits = keep_digits;
    config.embed_raw = embed_raw;
    if (stopwords) {
        config.stopwords.clear();
        for (auto word : *stopwords) {
            std::transform(word.begin(), word.end(), word.begin(), [](unsigned char c) {
                return static_cast<char>(std::tolower(c));
            });
            config.stopwords.insert(std::move(word));
        }
    }
    return config;
}

py::dict row_to_dict(const matcher::PairScore& row) {
    py::dict d;
    d["left"] = row.left_name;
    d["right"] = row.right_name;
    d["left_index"] = row.left_index;
    d["right_index"] = row.right_index;
    d["jaccard"] = row.jaccard;
    d["cosine"] = row.cosine;
    d["weighted"] = row.weighted;
    d["degenerate"] = row.degenerate;
    return d;
}

} // namespace

PYBIND11_MODULE(_featmatch, m) {
    m.doc() = "Feature matching between two datasets' feature lists: "
              "token-set Jaccard fused with embedding cosine.";

    py::register_exception<Error>(m, "FeatmatchError");

    m.def("sanitize", &textnorm::sanitize, py::arg("text"), py::arg("keep_digits") = true,
          "Lowercase, strip special characters, collapse whitespace.");

    m.def("stem", [](const std::string& token) { return textnorm::porter_stem(token); },
          py::arg("token"), "Porter stem of a lowercase token.");

    m.def(
        "normalize",
        [](const std::string& text, const std::string& lemmatizer, bool keep_digits,
           bool embed_raw, const std::optional<std::vector<std::string>>& stopwords) {
            auto config = make_norm_config(lemmatizer, keep_digits, embed_raw, stopwords);
            ingest::ComposedText composed;
            composed.text = text;
            auto feature = textnorm::normalize(composed, config);
            py::dict d;
            d["tokens"] = feature.token_set.tokens;
            d["embedding_text"] = feature.embedding_text;
            return d;
        },
        py::arg("text"), py::arg("lemmatizer") = "porter", py::arg("keep_digits") = true,
        py::arg("embed_raw") = false, py::arg("stopwords") = py::none(),
        "Full normalization: sanitize, tokenize, stopwords, lemmatize. "
        "Returns the deduplicated token set and the embedding text.");

    m.def(
        "jaccard",
        [](const std::vector<std::string>& a, const std::vector<std::string>& b) {
            return similarity::jaccard(textnorm::TokenSet::from_tokens(a),
                                       textnorm::TokenSet::from_tokens(b))
                .value;
        },
        py::arg("a"), py::arg("b"), "Jaccard similarity of two token collections.");

    m.def(
        "cosine",
        [](const std::vector<double>& u, const std::vector<double>& v) {
            return similarity::cosine({"py", u}, {"py", v}).value;
        },
        py::arg("u"), py::arg("v"),
        "Cosine similarity of two equal-length vectors, clamped to [0,1].");

    m.def("baseline_embed", &embeddings::baseline_embed, py::arg("text"), py::arg("dim") = 256,
          py::arg("seed") = 0,
          "Deterministic hashed embedding (token and character-trigram features).");

    m.def(
        "fuse",
        [](double jaccard, double cosine, double w_cosine) {
            return matcher::fuse(jaccard, cosine, matcher::weight_from_cosine(w_cosine));
        },
        py::arg("jaccard"), py::arg("cosine"), py::arg("w_cosine") = 0.7,
        "Weighted average of the two scores; jaccard gets 1 - w_cosine.");

    m.def(
        "match",
        [](const std::vector<std::string>& left, const std::vector<std::string>& right,
           const std::string& weights, double threshold, std::size_t dim, std::uint64_t seed,
           std::optional<std::size_t> top_k, const std::string& lemmatizer, bool keep_digits,
           bool embed_raw, const std::optional<std::vector<std::string>>& stopwords) {
            auto norm = make_norm_config(lemmatizer, keep_digits, embed_raw, stopwords);
            auto build = [&](const std::vector<std::string>& names) {
                std::vector<textnorm::NormalizedFeature> features;
                features.reserve(names.size());
                for (std::size_t i = 0; i < names.size(); ++i) {
                    ingest::FeatureRecord record;
                    record.name = names[i];
                    features.push_back(textnorm::normalize(
                        ingest::compose_text(record, ingest::ComposePolicy::name_only, i), norm));
                }
                return features;
            };
            auto left_features = build(left);
            auto right_features = build(right);

            embeddings::ProviderConfig provider_config;
            provider_config.dim = dim;
            provider_config.seed = seed;
            auto provider = embeddings::make_provider(provider_config);

            auto report = matcher::match_all(left_features, right_features,
                                             matcher::parse_weights(weights), threshold,
                                             *provider);
            if (top_k) report = matcher::top_k_per_left(std::move(report), *top_k);

            py::list rows;
            for (const auto& row : report.rows) rows.append(row_to_dict(row));
            return rows;
        },
        py::arg("left"), py::arg("right"), py::kw_only(), py::arg("weights") = "option1",
        py::arg("threshold") = 0.7, py::arg("dim") = 256, py::arg("seed") = 0,
        py::arg("top_k") = py::none(), py::arg("lemmatizer") = "porter",
        py::arg("keep_digits") = true, py::arg("embed_raw") = false,
        py::arg("stopwords") = py::none(),
        "Score every left x right feature-name pair with the baseline "
        "provider and return the thresholded, ranked rows as dicts.");

    m.attr("__version__") = "0.1.0";
}
