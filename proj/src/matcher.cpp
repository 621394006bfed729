#include "featmatch/matcher.hpp"

#include "featmatch/errors.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <thread>

namespace featmatch::matcher {

WeightConfig weight_option(WeightOption option) {
    switch (option) {
    case WeightOption::option1: return {0.7, 0.3};
    case WeightOption::option2: return {0.5, 0.5};
    case WeightOption::option3: return {0.3, 0.7};
    }
    return {0.7, 0.3};
}

WeightConfig weight_from_cosine(double w_cosine) {
    if (!(w_cosine >= 0.0 && w_cosine <= 1.0)) {
        throw InvalidWeight("matcher: cosine weight " + std::to_string(w_cosine) +
                            " outside [0,1]");
    }
    return {w_cosine, 1.0 - w_cosine};
}

WeightConfig parse_weights(std::string_view text) {
    if (text == "option1") return weight_option(WeightOption::option1);
    if (text == "option2") return weight_option(WeightOption::option2);
    if (text == "option3") return weight_option(WeightOption::option3);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw InvalidWeight("matcher: weights must be option1|option2|option3 or a number, got '" +
                            std::string(text) + "'");
    }
    return weight_from_cosine(value);
}

double fuse(double jaccard, double cosine, const WeightConfig& weights) {
    return weights.w_cosine * cosine + weights.w_jaccard * jaccard;
}

PairScore score_pair(const textnorm::NormalizedFeature& left,
                     const textnorm::NormalizedFeature& right,
                     const embeddings::EmbeddingVector& left_vec,
                     const embeddings::EmbeddingVector& right_vec,
                     const WeightConfig& weights) {
    auto jac = similarity::jaccard(left.token_set, right.token_set);
    auto cos = similarity::cosine(left_vec, right_vec);

    PairScore pair;
    pair.left_index = left.composed.record_index;
    pair.right_index = right.composed.record_index;
    pair.left_name = left.composed.name;
    pair.right_name = right.composed.name;
    pair.jaccard = jac.value;
    pair.cosine = cos.value;
    pair.cosine_raw = cos.raw;
    pair.weighted = fuse(jac.value, cos.value, weights);
    pair.weights = weights;
    pair.degenerate = jac.degenerate || cos.degenerate;
    return pair;
}

namespace {

// Report order: weighted descending, then left and right name ascending;
// indices settle duplicates of the same name pair.
bool report_order(const PairScore& a, const PairScore& b) {
    if (a.weighted != b.weighted) return a.weighted > b.weighted;
    if (a.left_name != b.left_name) return a.left_name < b.left_name;
    if (a.right_name != b.right_name) return a.right_name < b.right_name;
    if (a.left_index != b.left_index) return a.left_index < b.left_index;
    return a.right_index < b.right_index;
}

} // namespace

MatchReport match_all(const std::vector<textnorm::NormalizedFeature>& left,
                      const std::vector<textnorm::NormalizedFeature>& right,
                      const WeightConfig& weights, double threshold,
                      embeddings::EmbeddingProvider& provider) {
    if (!(threshold >= 0.0 && threshold <= 1.0)) {
        throw ConfigError("matcher: threshold " + std::to_string(threshold) + " outside [0,1]");
    }

    MatchReport report;
    report.threshold = threshold;
    report.weights = weights;
    report.provider_id = provider.provider_id();
    report.left_features.reserve(left.size());
    for (const auto& f : left) report.left_features.push_back(f.composed.name);
    report.right_features.reserve(right.size());
    for (const auto& f : right) report.right_features.push_back(f.composed.name);

    if (left.empty() || right.empty()) {
        report.empty_input = true;
        return report;
    }

    // One batched embedding pass over both sides; the provider cache
    // collapses duplicate texts.
    std::vector<std::string> texts;
    texts.reserve(left.size() + right.size());
    for (const auto& f : left) texts.push_back(f.embedding_text);
    for (const auto& f : right) texts.push_back(f.embedding_text);
    auto vectors = embeddings::embed_batch(texts, provider);

    const std::size_t m = left.size();
    const std::size_t n = right.size();
    const std::size_t total = m * n;

    // Instrumented: counts pairs actually scored, so tests can assert
    // cross-product completeness against |left| * |right|.
    std::atomic<std::uint64_t> scored{0};

    auto score_range = [&](std::size_t begin, std::size_t end, std::vector<PairScore>& out) {
        std::uint64_t local = 0;
        for (std::size_t p = begin; p < end; ++p) {
            const std::size_t i = p / n;
            const std::size_t j = p % n;
            auto pair = score_pair(left[i], right[j], vectors[i], vectors[m + j], weights);
            ++local;
            if (pair.weighted >= threshold) out.push_back(std::move(pair));
        }
        scored += local;
    };

    std::size_t workers = std::max<std::size_t>(1, std::thread::hardware_concurrency());
    workers = std::min(workers, std::max<std::size_t>(1, total / 1024));

    if (workers <= 1) {
        score_range(0, total, report.rows);
    } else {
        // Contiguous ranges per worker; concatenation preserves pair order.
        std::vector<std::vector<PairScore>> partial(workers);
        std::vector<std::thread> threads;
        std::vector<std::exception_ptr> failures(workers);
        const std::size_t chunk = (total + workers - 1) / workers;
        for (std::size_t w = 0; w < workers; ++w) {
            threads.emplace_back([&, w] {
                try {
                    const std::size_t begin = w * chunk;
                    const std::size_t end = std::min(total, begin + chunk);
                    if (begin < end) score_range(begin, end, partial[w]);
                } catch (...) {
                    failures[w] = std::current_exception();
                }
            });
        }
        for (auto& t : threads) t.join();
        for (const auto& failure : failures) {
            if (failure) std::rethrow_exception(failure);
        }
        for (auto& part : partial) {
            report.rows.insert(report.rows.end(), std::make_move_iterator(part.begin()),
                               std::make_move_iterator(part.end()));
        }
    }

    report.pairs_scored = scored.load();
    std::sort(report.rows.begin(), report.rows.end(), report_order);
    return report;
}

MatchReport attach_ids(MatchReport report, const std::map<std::string, std::string>& left_ids,
                       const std::map<std::string, std::string>& right_ids) {
    for (auto& row : report.rows) {
        if (auto it = left_ids.find(row.left_name); it != left_ids.end()) {
            row.left_id = it->second;
        }
        if (auto it = right_ids.find(row.right_name); it != right_ids.end()) {
            row.right_id = it->second;
        }
    }
    return report;
}

MatchReport top_k_per_left(MatchReport report, std::size_t k) {
    if (k == 0) throw ConfigError("matcher: top_k must be >= 1");

    // Rows are already globally sorted, so within one left feature they
    // run weighted-descending with right-name tie order; keeping the
    // first k per left index realizes the per-group cut.
    std::map<std::size_t, std::size_t> kept;
    std::vector<PairScore> rows;
    rows.reserve(report.rows.size());
    for (auto& row : report.rows) {
        if (kept[row.left_index]++ < k) rows.push_back(std::move(row));
    }
    report.rows = std::move(rows);
    std::sort(report.rows.begin(), report.rows.end(), report_order);
    return report;
}

} // namespace featmatch::matcher
