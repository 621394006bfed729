#include <doctest.h>

#include "featmatch/errors.hpp"
#include "featmatch/similarity.hpp"

#include <random>
#include <set>
#include <string>

using namespace featmatch;
using embeddings::EmbeddingVector;
using similarity::ScoreKind;
using textnorm::TokenSet;

namespace {

TokenSet set_of(std::initializer_list<const char*> tokens) {
    std::vector<std::string> raw(tokens.begin(), tokens.end());
    return TokenSet::from_tokens(raw);
}

EmbeddingVector vec(std::vector<double> values, std::string provider = "test") {
    return {std::move(provider), std::move(values)};
}

// Independent oracle: double loop over both sets.
double jaccard_oracle(const std::set<std::string>& a, const std::set<std::string>& b) {
    if (a.empty() && b.empty()) return 0.0;
    std::size_t common = 0;
    for (const auto& x : a) {
        for (const auto& y : b) {
            if (x == y) ++common;
        }
    }
    std::set<std::string> all(a.begin(), a.end());
    all.insert(b.begin(), b.end());
    return static_cast<double>(common) / static_cast<double>(all.size());
}

} // namespace

TEST_CASE("jaccard on the worked token sets") {
    auto score = similarity::jaccard(set_of({"ai", "friend"}), set_of({"ai", "human", "friend"}));
    CHECK(score.value == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(score.kind == ScoreKind::jaccard);
    CHECK_FALSE(score.degenerate);
}

TEST_CASE("jaccard edge conventions") {
    auto same = set_of({"releas", "year"});
    CHECK(similarity::jaccard(same, same).value == 1.0);
    CHECK(similarity::jaccard(set_of({"a"}), set_of({"b"})).value == 0.0);

    auto degenerate = similarity::jaccard(set_of({}), set_of({}));
    CHECK(degenerate.value == 0.0);
    CHECK(degenerate.degenerate);

    CHECK(similarity::jaccard(set_of({}), set_of({"x"})).value == 0.0);
    CHECK_FALSE(similarity::jaccard(set_of({}), set_of({"x"})).degenerate);
}

TEST_CASE("jaccard equals the brute-force oracle on random set pairs") {
    std::mt19937 rng(1234);
    std::uniform_int_distribution<int> size(0, 20);
    std::uniform_int_distribution<int> symbol(0, 39);
    for (int trial = 0; trial < 1000; ++trial) {
        std::set<std::string> a, b;
        int na = size(rng), nb = size(rng);
        for (int i = 0; i < na; ++i) a.insert("s" + std::to_string(symbol(rng)));
        for (int i = 0; i < nb; ++i) b.insert("s" + std::to_string(symbol(rng)));

        TokenSet ta = TokenSet::from_tokens({a.begin(), a.end()});
        TokenSet tb = TokenSet::from_tokens({b.begin(), b.end()});
        CHECK(similarity::jaccard(ta, tb).value == jaccard_oracle(a, b));
    }
}

TEST_CASE("jaccard is symmetric and monotone under shared insertions") {
    std::mt19937 rng(77);
    std::uniform_int_distribution<int> size(0, 12);
    std::uniform_int_distribution<int> symbol(0, 25);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<std::string> raw_a, raw_b;
        int na = size(rng), nb = size(rng);
        for (int i = 0; i < na; ++i) raw_a.push_back(std::string(1, char('a' + symbol(rng))));
        for (int i = 0; i < nb; ++i) raw_b.push_back(std::string(1, char('a' + symbol(rng))));
        auto a = TokenSet::from_tokens(raw_a);
        auto b = TokenSet::from_tokens(raw_b);

        CHECK(similarity::jaccard(a, b).value == similarity::jaccard(b, a).value);

        // Adding one token to both sets never lowers the score.
        auto before = similarity::jaccard(a, b).value;
        raw_a.push_back("zz");
        raw_b.push_back("zz");
        auto after = similarity::jaccard(TokenSet::from_tokens(raw_a),
                                         TokenSet::from_tokens(raw_b)).value;
        CHECK(after >= before);
    }
}

TEST_CASE("cosine on the hand-worked vectors") {
    auto score = similarity::cosine(vec({1, 2, 3}), vec({4, 5, 6}));
    CHECK(score.value == doctest::Approx(0.9746318461970762).epsilon(1e-9));
    CHECK(score.kind == ScoreKind::cosine);
}

TEST_CASE("cosine edge conventions") {
    auto v = vec({0.5, -0.25, 0.75, 1.0});
    CHECK(similarity::cosine(v, v).value == doctest::Approx(1.0).epsilon(1e-12));

    CHECK(similarity::cosine(vec({1, 0, 0}), vec({0, 1, 0})).value == 0.0);

    auto degenerate = similarity::cosine(vec({0, 0, 0}), vec({1, 2, 3}));
    CHECK(degenerate.value == 0.0);
    CHECK(degenerate.degenerate);
}

TEST_CASE("cosine clamps negatives but keeps the raw value") {
    auto score = similarity::cosine(vec({1, 0}), vec({-1, 0}));
    CHECK(score.value == 0.0);
    CHECK(score.raw == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK_FALSE(score.degenerate);
}

TEST_CASE("cosine rejects mixed dimensions or providers") {
    CHECK_THROWS_AS(similarity::cosine(vec({1, 2}), vec({1, 2, 3})), DimensionMismatch);
    CHECK_THROWS_AS(similarity::cosine(vec({1, 2}, "p1"), vec({1, 2}, "p2")), DimensionMismatch);
}

TEST_CASE("cosine is scale invariant") {
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> component(-1.0, 1.0);
    std::uniform_real_distribution<double> scale(0.001, 1000.0);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> u(16), v(16);
        for (auto& x : u) x = component(rng);
        for (auto& x : v) x = component(rng);
        auto base = similarity::cosine(vec(u), vec(v)).value;
        double alpha = scale(rng);
        auto su = u;
        for (auto& x : su) x *= alpha;
        auto scaled = similarity::cosine(vec(su), vec(v)).value;
        CHECK(scaled == doctest::Approx(base).epsilon(1e-12));
    }
}

TEST_CASE("scorer registry serves jaccard and accepts plugins") {
    auto& registry = similarity::ScorerRegistry::instance();
    const auto* jac = registry.find("jaccard");
    REQUIRE(jac != nullptr);

    textnorm::NormalizedFeature a, b;
    a.token_set = set_of({"ai", "friend"});
    b.token_set = set_of({"ai", "human", "friend"});
    CHECK((*jac)(a, b).value == doctest::Approx(2.0 / 3.0));

    registry.add("constant", [](const textnorm::NormalizedFeature&,
                                const textnorm::NormalizedFeature&) {
        similarity::SimilarityScore s;
        s.value = 0.5;
        return s;
    });
    REQUIRE(registry.find("constant") != nullptr);
    CHECK((*registry.find("constant"))(a, b).value == 0.5);
    CHECK(registry.find("monge-elkan") == nullptr);
}

TEST_CASE("cosine scorer plugin embeds through a provider") {
    embeddings::ProviderConfig config;
    config.dim = 64;
    auto provider = embeddings::make_provider(config);
    auto scorer = similarity::make_cosine_scorer(provider);

    textnorm::NormalizedFeature a, b;
    a.embedding_text = "releas year";
    b.embedding_text = "releas year";
    CHECK(scorer(a, b).value == doctest::Approx(1.0).epsilon(1e-12));
}
