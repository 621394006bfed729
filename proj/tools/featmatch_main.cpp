#include "featmatch/errors.hpp"
#include "featmatch/report.hpp"
#include "featmatch/runner.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>

namespace {

int run_match(const CLI::App& cmd) {
    featmatch::runner::RunConfig config;
    if (const auto* opt = cmd.get_option("--config"); opt->count() > 0) {
        config = featmatch::runner::load_config_file(opt->as<std::string>());
    }

    // Flags win over the config file.
    auto override_str = [&](const char* flag, auto&& apply) {
        if (const auto* opt = cmd.get_option(flag); opt->count() > 0) {
            apply(opt->as<std::string>());
        }
    };
    override_str("--left", [&](const std::string& v) { config.left.path = v; });
    override_str("--right", [&](const std::string& v) { config.right.path = v; });
    override_str("--left-desc-col",
                 [&](const std::string& v) { config.left.columns.description = v; });
    override_str("--right-desc-col",
                 [&](const std::string& v) { config.right.columns.description = v; });
    override_str("--compose", [&](const std::string& v) {
        config.compose = featmatch::ingest::parse_compose_policy(v);
    });
    override_str("--weights", [&](const std::string& v) {
        config.weights = featmatch::matcher::parse_weights(v);
    });
    if (const auto* opt = cmd.get_option("--threshold"); opt->count() > 0) {
        config.threshold = opt->as<double>();
    }
    override_str("--provider", [&](const std::string& v) {
        config.provider.kind = featmatch::embeddings::parse_provider_kind(v);
    });
    override_str("--endpoint", [&](const std::string& v) { config.provider.endpoint = v; });
    if (const auto* opt = cmd.get_option("--top-k"); opt->count() > 0) {
        config.top_k = opt->as<std::size_t>();
    }
    override_str("--output", [&](const std::string& v) { config.output = v; });
    override_str("--format", [&](const std::string& v) {
        config.format = featmatch::report::parse_format(v);
    });
    if (cmd.get_option("--embed-raw")->count() > 0) config.norm.embed_raw = true;
    override_str("--stopwords", [&](const std::string& v) { config.stopwords_file = v; });

    return featmatch::runner::run(config);
}

int run_evaluate(const std::string& report_path, const std::string& gold_path) {
    auto match_report = featmatch::report::read_report_file(report_path);
    auto gold = featmatch::report::read_gold_file(gold_path);
    auto result = featmatch::report::evaluate(match_report, gold);
    if (result.unknown_gold > 0) {
        std::cerr << "featmatch: warning: " << result.unknown_gold
                  << " gold pair(s) reference unknown feature names and were skipped\n";
    }
    std::cout << featmatch::report::to_json(result);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Feature matching: rank correspondences between two datasets' "
                 "feature lists by fused token-set Jaccard and embedding cosine."};
    app.require_subcommand(1);

    auto* match = app.add_subcommand("match", "Score all feature pairs and write a report");
    match->add_option("--left", "Left feature list (CSV or JSON array)");
    match->add_option("--right", "Right feature list (CSV or JSON array)");
    match->add_option("--left-desc-col", "Description column in the left source");
    match->add_option("--right-desc-col", "Description column in the right source");
    match->add_option("--compose", "name_only|name_plus_description|name_plus_values")
        ->check(CLI::IsMember({"name_only", "name_plus_description", "name_plus_values"}));
    match->add_option("--weights", "option1|option2|option3 or an explicit cosine weight");
    match->add_option("--threshold", "Minimum fused score kept, in [0,1] (default 0.7)");
    match->add_option("--provider", "baseline|remote")
        ->check(CLI::IsMember({"baseline", "remote"}));
    match->add_option("--endpoint", "Remote embedding endpoint URL");
    match->add_option("--top-k", "Keep only each left feature's k best rows");
    match->add_option("--output", "Report path ('-' for stdout)");
    match->add_option("--format", "csv|json")->check(CLI::IsMember({"csv", "json"}));
    match->add_flag("--embed-raw", "Embed sanitized text, skipping stopword/lemma stages");
    match->add_option("--stopwords", "Newline-delimited stopword file");
    match->add_option("--config", "JSON run config; explicit flags win");

    auto* evaluate = app.add_subcommand("evaluate", "Score a report against a gold mapping");
    std::string report_path;
    std::string gold_path;
    evaluate->add_option("--report", report_path, "Match report (CSV or JSON)")->required();
    evaluate->add_option("--gold", gold_path, "Gold CSV with left,right columns")->required();

    try {
        app.parse(argc, argv);
        if (match->parsed()) return run_match(*match);
        if (evaluate->parsed()) return run_evaluate(report_path, gold_path);
        return 1;
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const featmatch::Error& e) {
        std::cerr << "featmatch: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "featmatch: " << e.what() << "\n";
        return 1;
    }
}
