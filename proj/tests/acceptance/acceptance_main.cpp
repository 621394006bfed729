// Acceptance suite: runs every shipping criterion at its stated
// tolerance and prints one PASS/FAIL line per criterion. Exits non-zero
// if any criterion fails.

#include "featmatch/embeddings.hpp"
#include "featmatch/errors.hpp"
#include "featmatch/matcher.hpp"
#include "featmatch/porter.hpp"
#include "featmatch/report.hpp"
#include "featmatch/runner.hpp"
#include "featmatch/similarity.hpp"
#include "featmatch/textnorm.hpp"

#include "../stub_server.hpp"

#include <sys/resource.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace featmatch;

namespace {

struct Context {
    fs::path cli;
    fs::path fixtures;
    fs::path scratch;
};

struct Failure {
    std::string message;
};

#define REQUIRE_MSG(cond, msg)                                                                     \
    do {                                                                                           \
        if (!(cond)) {                                                                             \
            std::ostringstream os;                                                                 \
            os << msg;                                                                             \
            throw Failure{os.str()};                                                               \
        }                                                                                          \
    } while (0)

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE_MSG(in.good(), "cannot open " << path);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

std::vector<textnorm::NormalizedFeature> normalize_names(const std::vector<std::string>& names,
                                                         const textnorm::NormConfig& config) {
    std::vector<textnorm::NormalizedFeature> features;
    features.reserve(names.size());
    for (std::size_t i = 0; i < names.size(); ++i) {
        ingest::FeatureRecord record;
        record.name = names[i];
        features.push_back(textnorm::normalize(
            ingest::compose_text(record, ingest::ComposePolicy::name_only, i), config));
    }
    return features;
}

// 1. Jaccard equals a brute-force double-loop oracle exactly on 1000
//    random set pairs; the whole check runs in under a second.
void criterion_jaccard_oracle(const Context&) {
    auto started = std::chrono::steady_clock::now();

    std::mt19937 rng(20240501);
    std::uniform_int_distribution<int> size(0, 20);
    std::uniform_int_distribution<int> symbol(0, 39);

    for (int trial = 0; trial < 1000; ++trial) {
        std::set<std::string> a, b;
        int na = size(rng), nb = size(rng);
        for (int i = 0; i < na; ++i) a.insert("w" + std::to_string(symbol(rng)));
        for (int i = 0; i < nb; ++i) b.insert("w" + std::to_string(symbol(rng)));

        // Oracle: double loop for the intersection, set union for the
        // denominator, independent of the library walk.
        std::size_t common = 0;
        for (const auto& x : a) {
            for (const auto& y : b) {
                if (x == y) ++common;
            }
        }
        std::set<std::string> all(a.begin(), a.end());
        all.insert(b.begin(), b.end());
        double expected = all.empty() ? 0.0
                                      : static_cast<double>(common) /
                                            static_cast<double>(all.size());

        auto ta = textnorm::TokenSet::from_tokens({a.begin(), a.end()});
        auto tb = textnorm::TokenSet::from_tokens({b.begin(), b.end()});
        double actual = similarity::jaccard(ta, tb).value;
        REQUIRE_MSG(actual == expected,
                    "trial " << trial << ": jaccard " << actual << " != oracle " << expected);
    }

    auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - started);
    REQUIRE_MSG(elapsed.count() < 1.0, "1000 pairs took " << elapsed.count() << "s (limit 1s)");
}

// 2. Cosine matches a long-double reference within 1e-9 on 100 random
//    pairs (dim 8..512) and on the hand-worked (1,2,3)x(4,5,6) case.
void criterion_cosine_reference(const Context&) {
    auto reference = [](const std::vector<double>& u, const std::vector<double>& v) {
        long double dot = 0.0L, nu = 0.0L, nv = 0.0L;
        for (std::size_t i = 0; i < u.size(); ++i) {
            dot += static_cast<long double>(u[i]) * v[i];
            nu += static_cast<long double>(u[i]) * u[i];
            nv += static_cast<long double>(v[i]) * v[i];
        }
        if (nu == 0.0L || nv == 0.0L) return 0.0;
        long double raw = dot / (std::sqrt(nu) * std::sqrt(nv));
        if (raw < 0.0L) raw = 0.0L;
        if (raw > 1.0L) raw = 1.0L;
        return static_cast<double>(raw);
    };

    auto hand = similarity::cosine({"t", {1, 2, 3}}, {"t", {4, 5, 6}});
    REQUIRE_MSG(std::abs(hand.value - 0.9746318461970762) < 1e-9,
                "hand case returned " << hand.value);

    std::mt19937 rng(7777);
    std::uniform_int_distribution<std::size_t> dim_of(8, 512);
    std::uniform_real_distribution<double> component(-2.0, 2.0);
    for (int trial = 0; trial < 100; ++trial) {
        auto dim = dim_of(rng);
        std::vector<double> u(dim), v(dim);
        for (auto& x : u) x = component(rng);
        for (auto& x : v) x = component(rng);
        auto actual = similarity::cosine({"t", u}, {"t", v}).value;
        auto expected = reference(u, v);
        REQUIRE_MSG(std::abs(actual - expected) < 1e-9,
                    "trial " << trial << " dim " << dim << ": " << actual << " vs reference "
                             << expected);
    }
}

// 3. Lemmatizer golden cases.
void criterion_lemmatizer_golden(const Context&) {
    REQUIRE_MSG(textnorm::porter_stem("pointing") == "point",
                "pointing -> " << textnorm::porter_stem("pointing"));
    REQUIRE_MSG(textnorm::porter_stem("swimming") == "swim",
                "swimming -> " << textnorm::porter_stem("swimming"));
    REQUIRE_MSG(textnorm::porter_stem("friends") == "friend",
                "friends -> " << textnorm::porter_stem("friends"));
    auto released = textnorm::porter_stem("released");
    auto release = textnorm::porter_stem("release");
    REQUIRE_MSG(released == release,
                "released -> " << released << " but release -> " << release);
}

// 4. Perfect-match reproduction on the bundled fixture feature lists:
//    nothing here depends on a neural backend; identical normalized
//    names force both channels to 1.
void criterion_perfect_matches(const Context& ctx) {
    auto run_fixture = [&](const std::string& left, const std::string& right) {
        runner::RunConfig config;
        config.left.path = ctx.fixtures / left;
        config.right.path = ctx.fixtures / right;
        config.compose = ingest::ComposePolicy::name_only;
        // defaults: baseline provider, option1 weights, threshold 0.7
        return runner::run_to_report(config);
    };

    auto table1 = run_fixture("table1_perth.csv", "table1_king_county.csv");
    REQUIRE_MSG(table1.rows.size() >= 2, "table1 kept " << table1.rows.size() << " rows");
    for (std::size_t i = 0; i < 2; ++i) {
        REQUIRE_MSG(std::abs(table1.rows[i].weighted - 1.0) < 1e-6,
                    "table1 top row " << i << " scored " << table1.rows[i].weighted);
    }
    REQUIRE_MSG(table1.rows[0].left_name == "BEDROOMS" && table1.rows[0].right_name == "bedrooms",
                "table1 rank 1 is " << table1.rows[0].left_name << " / "
                                    << table1.rows[0].right_name);
    REQUIRE_MSG(table1.rows[1].left_name == "PRICE" && table1.rows[1].right_name == "price",
                "table1 rank 2 is " << table1.rows[1].left_name << " / "
                                    << table1.rows[1].right_name);

    auto table2 = run_fixture("table2_imdb.csv", "table2_netflix.csv");
    REQUIRE_MSG(!table2.rows.empty(), "table2 report is empty");
    REQUIRE_MSG(table2.rows[0].left_name == "Director" && table2.rows[0].right_name == "director",
                "table2 rank 1 is " << table2.rows[0].left_name << " / "
                                    << table2.rows[0].right_name);
    REQUIRE_MSG(std::abs(table2.rows[0].weighted - 1.0) < 1e-6,
                "Director/director scored " << table2.rows[0].weighted);
}

// 5. The jaccard channel alone reproduces the Released Year analysis:
//    score exactly 1, so the fused value stays at or above w_jaccard.
void criterion_jaccard_channel(const Context&) {
    textnorm::NormConfig norm;
    auto features = normalize_names({"Released Year", "Release year"}, norm);
    auto jac = similarity::jaccard(features[0].token_set, features[1].token_set);
    REQUIRE_MSG(jac.value == 1.0, "jaccard channel scored " << jac.value);

    auto weights = matcher::weight_option(matcher::WeightOption::option1);
    for (double cosine : {0.0, 0.25, 1.0}) {
        auto fused = matcher::fuse(jac.value, cosine, weights);
        REQUIRE_MSG(fused >= 0.3 - 1e-12, "fused " << fused << " fell below w_jaccard");
    }
}

// 6. Fusion algebra at the three weight options plus convexity on
//    10,000 random triples.
void criterion_fusion_algebra(const Context&) {
    for (auto option : {matcher::WeightOption::option1, matcher::WeightOption::option2,
                        matcher::WeightOption::option3}) {
        auto weights = matcher::weight_option(option);
        REQUIRE_MSG(std::abs(matcher::fuse(1.0, 1.0, weights) - 1.0) < 1e-12, "fuse(1,1) != 1");
        REQUIRE_MSG(matcher::fuse(0.0, 0.0, weights) == 0.0, "fuse(0,0) != 0");
    }
    auto option1 = matcher::weight_option(matcher::WeightOption::option1);
    REQUIRE_MSG(std::abs(matcher::fuse(0.0, 1.0, option1) - 0.7) < 1e-12,
                "fuse(0,1,option1) = " << matcher::fuse(0.0, 1.0, option1));

    std::mt19937 rng(31337);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 10000; ++trial) {
        double jac = unit(rng), cos = unit(rng);
        auto weights = matcher::weight_from_cosine(unit(rng));
        double fused = matcher::fuse(jac, cos, weights);
        REQUIRE_MSG(fused >= std::min(jac, cos) - 1e-12 && fused <= std::max(jac, cos) + 1e-12,
                    "convexity broke at trial " << trial << ": fuse(" << jac << ", " << cos
                                                << ") = " << fused);
    }
}

// 7. Filter and ranking invariants over seeded random feature lists.
void criterion_filter_ranking(const Context&) {
    textnorm::NormConfig norm;
    norm.stopwords.clear();
    norm.lemmatizer = textnorm::Lemmatizer::none;

    static const char* vocab[] = {"price", "year", "area", "zip", "lot", "view",
                                  "grade", "floor", "bed", "bath"};
    std::mt19937 rng(97);
    std::uniform_int_distribution<int> words(1, 3);
    std::uniform_int_distribution<std::size_t> pick(0, std::size(vocab) - 1);
    auto random_names = [&](int count) {
        std::vector<std::string> names;
        for (int i = 0; i < count; ++i) {
            std::string name;
            int n = words(rng);
            for (int w = 0; w < n; ++w) {
                if (!name.empty()) name += ' ';
                name += vocab[pick(rng)];
            }
            names.push_back(name);
        }
        return names;
    };

    embeddings::BaselineProvider provider(64, 0);
    auto weights = matcher::weight_option(matcher::WeightOption::option1);
    auto left = normalize_names(random_names(12), norm);
    auto right = normalize_names(random_names(9), norm);

    std::vector<double> thresholds = {0.0, 0.25, 0.5, 0.7, 0.9, 1.0};
    std::size_t previous_count = 0;
    bool first = true;
    std::vector<std::set<std::pair<std::size_t, std::size_t>>> kept_sets;
    for (double threshold : thresholds) {
        auto report = matcher::match_all(left, right, weights, threshold, provider);
        REQUIRE_MSG(report.pairs_scored == left.size() * right.size(),
                    "pre-filter count " << report.pairs_scored << " != "
                                        << left.size() * right.size());
        std::set<std::pair<std::size_t, std::size_t>> keys;
        for (const auto& row : report.rows) {
            REQUIRE_MSG(row.weighted >= threshold, "row below threshold " << threshold);
            keys.emplace(row.left_index, row.right_index);
        }
        // Thresholds ascend, so each kept set must contain the next.
        if (!first) {
            const auto& looser = kept_sets.back();
            for (const auto& key : keys) {
                REQUIRE_MSG(looser.contains(key), "tightening the threshold added a row");
            }
            REQUIRE_MSG(keys.size() <= previous_count, "tightening the threshold grew the report");
        }
        kept_sets.push_back(keys);
        previous_count = keys.size();
        first = false;
    }

    // Inclusive retention at an exactly-representable boundary: with
    // cosine weight 0 the fused score is the jaccard ratio itself.
    matcher::WeightConfig jaccard_only{0.0, 1.0};
    auto boundary_left = normalize_names({"a b c d e f g"}, norm);  // 7 tokens
    auto boundary_right = normalize_names({"a b c d e f g h i j"}, norm); // 10, overlap 7
    auto boundary = matcher::match_all(boundary_left, boundary_right, jaccard_only, 0.7, provider);
    REQUIRE_MSG(boundary.rows.size() == 1 && boundary.rows[0].weighted == 0.7,
                "score exactly at the threshold was not retained");

    // Deterministic tie-breaks: identical scores order by name.
    auto tie_left = normalize_names({"zz", "aa"}, norm);
    auto tie_right = normalize_names({"yy", "bb"}, norm);
    auto ties = matcher::match_all(tie_left, tie_right, weights, 0.0, provider);
    REQUIRE_MSG(ties.rows.size() == 4, "tie fixture kept " << ties.rows.size());
    for (std::size_t i = 1; i < ties.rows.size(); ++i) {
        auto a = std::make_pair(ties.rows[i - 1].left_name, ties.rows[i - 1].right_name);
        auto b = std::make_pair(ties.rows[i].left_name, ties.rows[i].right_name);
        REQUIRE_MSG(ties.rows[i - 1].weighted > ties.rows[i].weighted ||
                        (ties.rows[i - 1].weighted == ties.rows[i].weighted && a < b),
                    "tie order violated at row " << i);
    }
}

// 8. Two CLI runs on the same fixture produce byte-identical CSV.
void criterion_cli_determinism(const Context& ctx) {
    auto out_a = ctx.scratch / "determinism_a.csv";
    auto out_b = ctx.scratch / "determinism_b.csv";
    fs::remove(out_a);
    fs::remove(out_b);

    auto invoke = [&](const fs::path& out) {
        std::ostringstream cmd;
        cmd << ctx.cli << " match"
            << " --left " << ctx.fixtures / "table2_imdb.csv"
            << " --right " << ctx.fixtures / "table2_netflix.csv"
            << " --compose name_only --weights option1 --threshold 0.7"
            << " --provider baseline --format csv"
            << " --output " << out;
        int rc = std::system(cmd.str().c_str());
        REQUIRE_MSG(rc == 0, "CLI exited with " << rc);
    };
    invoke(out_a);
    invoke(out_b);

    auto a = slurp(out_a);
    auto b = slurp(out_b);
    REQUIRE_MSG(!a.empty() && a == b, "consecutive CLI runs differ");
    REQUIRE_MSG(a.find("Director") != std::string::npos, "report lacks the Director match");
}

// 9. Throughput: 1,000 x 1,000 features, baseline dim 256, full
//    cross-product plus report writing under 30 s and 2 GB.
void criterion_throughput(const Context& ctx) {
    static const char* vocab[] = {"price", "year", "area", "zip", "lot", "view", "grade",
                                  "floor", "bed", "bath", "tax", "deck", "roof", "wall",
                                  "attic", "solar", "hvac", "fence", "pool", "shed"};
    auto synth_names = [&](int count, unsigned salt) {
        std::vector<std::string> names;
        names.reserve(count);
        for (int i = 0; i < count; ++i) {
            // Every hundredth name ignores the salt, planting exact
            // cross-list matches so the report has rows to write.
            unsigned effective = (i % 100 == 0) ? 0 : salt;
            unsigned a = (static_cast<unsigned>(i) * 7 + effective) % std::size(vocab);
            unsigned b = (static_cast<unsigned>(i) * 13 + effective / 2) % std::size(vocab);
            names.push_back(std::string(vocab[a]) + " " + vocab[b] + " " + std::to_string(i));
        }
        return names;
    };

    auto started = std::chrono::steady_clock::now();

    textnorm::NormConfig norm;
    auto left = normalize_names(synth_names(1000, 0), norm);
    auto right = normalize_names(synth_names(1000, 3), norm);

    embeddings::ProviderConfig provider_config; // baseline, dim 256
    auto provider = embeddings::make_provider(provider_config);
    auto weights = matcher::weight_option(matcher::WeightOption::option1);
    auto match_report = matcher::match_all(left, right, weights, 0.7, *provider);
    REQUIRE_MSG(match_report.pairs_scored == 1000ULL * 1000ULL, "wrong pair count");

    REQUIRE_MSG(match_report.rows.size() >= 10, "synthetic fixture kept too few rows");
    auto out = ctx.scratch / "throughput.csv";
    report::write_report_file(match_report, report::ReportFormat::csv, out);

    auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - started);
    REQUIRE_MSG(elapsed.count() < 30.0,
                "1M pair run took " << elapsed.count() << "s (limit 30s)");

    struct rusage usage{};
    getrusage(RUSAGE_SELF, &usage);
    double peak_gb = static_cast<double>(usage.ru_maxrss) / (1024.0 * 1024.0);
    REQUIRE_MSG(peak_gb < 2.0, "peak memory " << peak_gb << " GB (limit 2 GB)");

    std::cerr << "    (throughput: " << elapsed.count() << " s, peak " << peak_gb << " GB, "
              << match_report.rows.size() << " rows kept)\n";
}

// 10. Remote-provider wire contract against an in-process stub.
void criterion_remote_contract(const Context&) {
    {
        testing::StubEmbeddingServer server;
        embeddings::RemoteProvider provider(server.endpoint(), 64,
                                            std::chrono::milliseconds(5000));
        std::vector<std::string> texts;
        for (int i = 0; i < 100; ++i) texts.push_back("feature " + std::to_string(i));
        auto vectors = provider.embed_many(texts);
        REQUIRE_MSG(vectors.size() == 100, "expected 100 vectors");
        for (std::size_t i = 0; i < texts.size(); ++i) {
            REQUIRE_MSG(vectors[i].values == testing::StubEmbeddingServer::vector_for(texts[i], 16),
                        "vector " << i << " out of order");
        }
        REQUIRE_MSG(server.requests_seen() == 2,
                    "expected 2 backend calls, saw " << server.requests_seen());
        REQUIRE_MSG(server.max_batch_seen() == 64,
                    "batch size not honored: " << server.max_batch_seen());
    }
    {
        testing::StubEmbeddingServer::Options options;
        options.delay = std::chrono::milliseconds(2000);
        testing::StubEmbeddingServer server(options);
        embeddings::RemoteProvider provider(server.endpoint(), 64,
                                            std::chrono::milliseconds(200));
        bool threw = false;
        try {
            provider.embed_many({"slow"});
        } catch (const RemoteUnavailable&) {
            threw = true;
        }
        REQUIRE_MSG(threw, "timeout did not surface as RemoteUnavailable");
    }
}

struct Criterion {
    std::string name;
    std::function<void(const Context&)> check;
};

} // namespace

int main(int argc, char** argv) {
    Context ctx;
    ctx.cli = "tools/featmatch";
    ctx.fixtures = "fixtures";
    for (int i = 1; i + 1 < argc; i += 2) {
        std::string flag = argv[i];
        if (flag == "--cli") ctx.cli = argv[i + 1];
        if (flag == "--fixtures") ctx.fixtures = argv[i + 1];
    }
    ctx.scratch = fs::temp_directory_path() / "featmatch_acceptance";
    fs::create_directories(ctx.scratch);

    const std::vector<Criterion> criteria = {
        {"jaccard matches a brute-force oracle on 1000 random set pairs", criterion_jaccard_oracle},
        {"cosine matches a high-precision reference within 1e-9", criterion_cosine_reference},
        {"lemmatizer golden cases (pointing, swimming, friends, released/release)",
         criterion_lemmatizer_golden},
        {"perfect matches reproduce at 1.0 on the bundled fixtures", criterion_perfect_matches},
        {"jaccard channel scores Released Year / Release year at exactly 1",
         criterion_jaccard_channel},
        {"fusion algebra and convexity hold at all weight options", criterion_fusion_algebra},
        {"filter and ranking invariants hold across thresholds", criterion_filter_ranking},
        {"consecutive CLI runs emit byte-identical CSV", criterion_cli_determinism},
        {"1000x1000 cross-product completes under 30 s and 2 GB", criterion_throughput},
        {"remote provider honors the wire contract against a stub", criterion_remote_contract},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        auto started = std::chrono::steady_clock::now();
        std::string verdict = "PASS";
        std::string detail;
        try {
            criteria[i].check(ctx);
        } catch (const Failure& failure) {
            verdict = "FAIL";
            detail = failure.message;
            ++failures;
        } catch (const std::exception& e) {
            verdict = "FAIL";
            detail = std::string("unexpected error: ") + e.what();
            ++failures;
        }
        auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - started);
        std::cout << verdict << " [" << i + 1 << "/" << criteria.size() << "] "
                  << criteria[i].name << " (" << elapsed.count() << " s)";
        if (!detail.empty()) std::cout << " -- " << detail;
        std::cout << "\n";
    }

    if (failures == 0) {
        std::cout << "acceptance: all " << criteria.size() << " criteria passed\n";
        return 0;
    }
    std::cout << "acceptance: " << failures << " of " << criteria.size() << " criteria FAILED\n";
    return 1;
}
