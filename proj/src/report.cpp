#include "featmatch/report.hpp"

#include "featmatch/csv.hpp"
#include "featmatch/errors.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <fstream>
#include <set>
#include <unordered_set>

namespace featmatch::report {

ReportFormat parse_format(std::string_view text) {
    if (text == "csv") return ReportFormat::csv;
    if (text == "json") return ReportFormat::json;
    throw ConfigError("report: unknown format '" + std::string(text) + "'");
}

std::string_view to_string(ReportFormat format) {
    return format == ReportFormat::csv ? "csv" : "json";
}

std::string format_score(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.8f", value);
    return buffer;
}

std::string to_csv(const matcher::MatchReport& report) {
    std::string out = "left_feature,right_feature,left_id,right_id,jaccard,cosine,"
                      "weighted_score,degenerate\n";
    for (const auto& row : report.rows) {
        csv::append_row(out, {
                                 row.left_name,
                                 row.right_name,
                                 row.left_id.value_or(""),
                                 row.right_id.value_or(""),
                                 format_score(row.jaccard),
                                 format_score(row.cosine),
                                 format_score(row.weighted),
                                 row.degenerate ? "true" : "false",
                             });
    }
    return out;
}

namespace {

nlohmann::json row_to_json(const matcher::PairScore& row) {
    nlohmann::json j;
    j["left_feature"] = row.left_name;
    j["right_feature"] = row.right_name;
    j["left_index"] = row.left_index;
    j["right_index"] = row.right_index;
    j["left_id"] = row.left_id ? nlohmann::json(*row.left_id) : nlohmann::json(nullptr);
    j["right_id"] = row.right_id ? nlohmann::json(*row.right_id) : nlohmann::json(nullptr);
    j["jaccard"] = row.jaccard;
    j["cosine"] = row.cosine;
    j["cosine_raw"] = row.cosine_raw;
    j["weighted_score"] = row.weighted;
    j["degenerate"] = row.degenerate;
    return j;
}

matcher::PairScore row_from_json(const nlohmann::json& j, const matcher::WeightConfig& weights) {
    matcher::PairScore row;
    row.left_name = j.at("left_feature").get<std::string>();
    row.right_name = j.at("right_feature").get<std::string>();
    row.left_index = j.value("left_index", std::size_t{0});
    row.right_index = j.value("right_index", std::size_t{0});
    if (j.contains("left_id") && !j["left_id"].is_null()) {
        row.left_id = j["left_id"].get<std::string>();
    }
    if (j.contains("right_id") && !j["right_id"].is_null()) {
        row.right_id = j["right_id"].get<std::string>();
    }
    row.jaccard = j.at("jaccard").get<double>();
    row.cosine = j.at("cosine").get<double>();
    row.cosine_raw = j.value("cosine_raw", row.cosine);
    row.weighted = j.at("weighted_score").get<double>();
    row.degenerate = j.at("degenerate").get<bool>();
    row.weights = weights;
    return row;
}

} // namespace

std::string to_json(const matcher::MatchReport& report) {
    nlohmann::json j;
    j["threshold"] = report.threshold;
    j["weights"] = {{"w_cosine", report.weights.w_cosine},
                    {"w_jaccard", report.weights.w_jaccard}};
    j["provider_id"] = report.provider_id;
    j["run_metadata"] = {{"timestamp", report.metadata.timestamp},
                         {"config_hash", report.metadata.config_hash}};
    j["left_features"] = report.left_features;
    j["right_features"] = report.right_features;
    j["pairs_scored"] = report.pairs_scored;
    j["empty_input"] = report.empty_input;
    j["rows"] = nlohmann::json::array();
    for (const auto& row : report.rows) j["rows"].push_back(row_to_json(row));
    return j.dump(2) + "\n";
}

matcher::MatchReport from_csv(std::string_view text) {
    auto table = csv::parse(text);
    const std::vector<std::string> expected = {"left_feature", "right_feature", "left_id",
                                               "right_id",     "jaccard",       "cosine",
                                               "weighted_score", "degenerate"};
    if (table.header != expected) {
        throw UnreadableSource("report: CSV header does not match a match report");
    }

    matcher::MatchReport report;
    report.threshold = 0.0; // not stored in CSV
    for (const auto& cells : table.rows) {
        matcher::PairScore row;
        row.left_name = cells[0];
        row.right_name = cells[1];
        if (!cells[2].empty()) row.left_id = cells[2];
        if (!cells[3].empty()) row.right_id = cells[3];
        try {
            row.jaccard = std::stod(cells[4]);
            row.cosine = std::stod(cells[5]);
            row.weighted = std::stod(cells[6]);
        } catch (const std::exception&) {
            throw UnreadableSource("report: non-numeric score in CSV report");
        }
        row.cosine_raw = row.cosine;
        if (cells[7] == "true") {
            row.degenerate = true;
        } else if (cells[7] == "false") {
            row.degenerate = false;
        } else {
            throw UnreadableSource("report: degenerate column must be true or false");
        }
        report.rows.push_back(std::move(row));
    }
    return report;
}

matcher::MatchReport from_json(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw UnreadableSource(std::string("report: JSON parse failure: ") + e.what());
    }
    matcher::MatchReport report;
    try {
        report.threshold = j.at("threshold").get<double>();
        report.weights.w_cosine = j.at("weights").at("w_cosine").get<double>();
        report.weights.w_jaccard = j.at("weights").at("w_jaccard").get<double>();
        report.provider_id = j.at("provider_id").get<std::string>();
        report.metadata.timestamp = j.at("run_metadata").at("timestamp").get<std::string>();
        report.metadata.config_hash = j.at("run_metadata").at("config_hash").get<std::string>();
        report.left_features = j.at("left_features").get<std::vector<std::string>>();
        report.right_features = j.at("right_features").get<std::vector<std::string>>();
        report.pairs_scored = j.at("pairs_scored").get<std::uint64_t>();
        report.empty_input = j.at("empty_input").get<bool>();
        for (const auto& row : j.at("rows")) {
            report.rows.push_back(row_from_json(row, report.weights));
        }
    } catch (const nlohmann::json::exception& e) {
        throw UnreadableSource(std::string("report: JSON report malformed: ") + e.what());
    }
    return report;
}

void write_report_file(const matcher::MatchReport& report, ReportFormat format,
                       const std::filesystem::path& path) {
    auto body = format == ReportFormat::csv ? to_csv(report) : to_json(report);
    auto temp = path;
    temp += ".tmp";
    {
        std::ofstream out(temp, std::ios::binary | std::ios::trunc);
        if (!out) throw UnwritablePath("report: cannot write " + temp.string());
        out << body;
        out.flush();
        if (!out) {
            std::error_code ignored;
            std::filesystem::remove(temp, ignored);
            throw UnwritablePath("report: write failed for " + temp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(temp, path, ec);
    if (ec) {
        std::error_code ignored;
        std::filesystem::remove(temp, ignored);
        throw UnwritablePath("report: cannot move report into place at " + path.string() + ": " +
                             ec.message());
    }
}

matcher::MatchReport read_report_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UnreadableSource("report: cannot open " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    auto ext = path.extension().string();
    auto first = text.find_first_not_of(" \t\r\n");
    bool is_json = ext == ".json" || (first != std::string::npos && text[first] == '{');
    return is_json ? from_json(text) : from_csv(text);
}

std::vector<GoldPair> read_gold_file(const std::filesystem::path& path) {
    auto table = csv::parse_file(path);
    auto left_col = table.column("left");
    auto right_col = table.column("right");
    if (!left_col || !right_col) {
        throw UnreadableSource("report: gold file " + path.string() +
                               " needs a header with left,right columns");
    }
    std::vector<GoldPair> gold;
    gold.reserve(table.rows.size());
    for (const auto& row : table.rows) {
        gold.push_back({row[*left_col], row[*right_col]});
    }
    return gold;
}

EvalResult evaluate(const matcher::MatchReport& report, const std::vector<GoldPair>& gold) {
    EvalResult result;

    const bool universe_known = !report.left_features.empty() || !report.right_features.empty();
    std::unordered_set<std::string> left_names(report.left_features.begin(),
                                               report.left_features.end());
    std::unordered_set<std::string> right_names(report.right_features.begin(),
                                                report.right_features.end());

    // Distinct valid gold pairs; unknown names are skipped and counted.
    std::set<std::pair<std::string, std::string>> valid_gold;
    for (const auto& pair : gold) {
        if (universe_known &&
            (!left_names.contains(pair.left) || !right_names.contains(pair.right))) {
            ++result.unknown_gold;
            continue;
        }
        valid_gold.emplace(pair.left, pair.right);
    }

    std::set<std::pair<std::string, std::string>> matched;
    for (const auto& row : report.rows) {
        auto key = std::make_pair(row.left_name, row.right_name);
        if (valid_gold.contains(key)) {
            ++result.true_positives;
            matched.insert(std::move(key));
        } else {
            ++result.false_positives;
        }
    }
    result.false_negatives = valid_gold.size() - matched.size();

    auto rows = result.true_positives + result.false_positives;
    result.precision = rows ? static_cast<double>(result.true_positives) / static_cast<double>(rows)
                            : 0.0;
    result.recall = valid_gold.empty()
                        ? 0.0
                        : static_cast<double>(matched.size()) / static_cast<double>(valid_gold.size());
    auto pr = result.precision + result.recall;
    result.f1 = pr > 0.0 ? 2.0 * result.precision * result.recall / pr : 0.0;
    return result;
}

std::string to_json(const EvalResult& result) {
    nlohmann::json j;
    j["precision"] = result.precision;
    j["recall"] = result.recall;
    j["f1"] = result.f1;
    j["true_positives"] = result.true_positives;
    j["false_positives"] = result.false_positives;
    j["false_negatives"] = result.false_negatives;
    j["unknown_gold"] = result.unknown_gold;
    return j.dump(2) + "\n";
}

} // namespace featmatch::report
