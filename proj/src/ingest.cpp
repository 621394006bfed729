#include "featmatch/ingest.hpp"

#include "featmatch/csv.hpp"
#include "featmatch/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_set>

namespace featmatch::ingest {

namespace {

std::string trim(std::string_view s) {
    auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string_view::npos) return {};
    auto end = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(begin, end - begin + 1));
}

std::vector<std::string> split_values(std::string_view cell) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= cell.size()) {
        auto sep = cell.find('|', start);
        if (sep == std::string_view::npos) sep = cell.size();
        auto piece = trim(cell.substr(start, sep - start));
        if (!piece.empty()) out.push_back(std::move(piece));
        start = sep + 1;
    }
    return out;
}

void check_unique_ids(const std::vector<FeatureRecord>& records) {
    std::unordered_set<std::string> seen;
    for (const auto& record : records) {
        if (!record.feature_id) continue;
        if (!seen.insert(*record.feature_id).second) {
            throw DuplicateFeatureId("ingest: duplicate feature_id '" + *record.feature_id +
                                     "' in dataset '" + record.dataset_label + "'");
        }
    }
}

bool looks_like_json(std::string_view text) {
    auto pos = text.find_first_not_of(" \t\r\n");
    return pos != std::string_view::npos && text[pos] == '[';
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UnreadableSource("ingest: cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw UnreadableSource("ingest: read failed for " + path.string());
    return buffer.str();
}

} // namespace

ComposePolicy parse_compose_policy(std::string_view text) {
    if (text == "name_only") return ComposePolicy::name_only;
    if (text == "name_plus_description") return ComposePolicy::name_plus_description;
    if (text == "name_plus_values") return ComposePolicy::name_plus_values;
    throw ConfigError("ingest: unknown compose policy '" + std::string(text) + "'");
}

std::string_view to_string(ComposePolicy policy) {
    switch (policy) {
    case ComposePolicy::name_only: return "name_only";
    case ComposePolicy::name_plus_description: return "name_plus_description";
    case ComposePolicy::name_plus_values: return "name_plus_values";
    }
    return "name_only";
}

std::vector<FeatureRecord> load_schema(const std::filesystem::path& source,
                                       const std::string& dataset_label,
                                       const ColumnMap& columns) {
    auto text = read_file(source);
    auto ext = source.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (ext == ".json" || looks_like_json(text)) {
        return load_schema_json(text, dataset_label, columns);
    }
    return load_schema_csv(text, dataset_label, columns);
}

std::vector<FeatureRecord> load_schema_csv(std::string_view text,
                                           const std::string& dataset_label,
                                           const ColumnMap& columns) {
    auto table = csv::parse(text);
    if (table.header.empty()) return {};

    auto name_col = table.column(columns.name);
    if (!name_col) {
        throw MissingNameColumn("ingest: name column '" + columns.name +
                                "' not found in dataset '" + dataset_label + "'");
    }
    auto desc_col = table.column(columns.description);
    auto id_col = table.column(columns.id);
    auto values_col = table.column(columns.values);

    std::vector<FeatureRecord> records;
    records.reserve(table.rows.size());
    for (const auto& row : table.rows) {
        FeatureRecord record;
        record.dataset_label = dataset_label;
        record.name = row[*name_col];
        if (desc_col) record.description = row[*desc_col];
        if (id_col && !trim(row[*id_col]).empty()) record.feature_id = trim(row[*id_col]);
        if (values_col) record.sample_values = split_values(row[*values_col]);
        records.push_back(std::move(record));
    }
    records = clean_records(std::move(records));
    check_unique_ids(records);
    return records;
}

std::vector<FeatureRecord> load_schema_json(std::string_view text,
                                            const std::string& dataset_label,
                                            const ColumnMap& columns) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw UnreadableSource(std::string("ingest: JSON parse failure: ") + e.what());
    }
    if (!doc.is_array()) throw UnreadableSource("ingest: JSON source is not an array of objects");

    bool any_name_key = false;
    std::vector<FeatureRecord> records;
    records.reserve(doc.size());
    for (const auto& item : doc) {
        if (!item.is_object()) throw UnreadableSource("ingest: JSON array element is not an object");
        FeatureRecord record;
        record.dataset_label = dataset_label;
        if (auto it = item.find(columns.name); it != item.end() && it->is_string()) {
            any_name_key = true;
            record.name = it->get<std::string>();
        }
        if (auto it = item.find(columns.description); it != item.end() && it->is_string()) {
            record.description = it->get<std::string>();
        }
        if (auto it = item.find(columns.id); it != item.end() && it->is_string()) {
            if (auto id = trim(it->get<std::string>()); !id.empty()) record.feature_id = id;
        }
        if (auto it = item.find(columns.values); it != item.end()) {
            if (it->is_string()) {
                record.sample_values = split_values(it->get<std::string>());
            } else if (it->is_array()) {
                for (const auto& v : *it) {
                    if (!v.is_string()) continue;
                    if (auto piece = trim(v.get<std::string>()); !piece.empty()) {
                        record.sample_values.push_back(std::move(piece));
                    }
                }
            }
        }
        records.push_back(std::move(record));
    }
    if (!doc.empty() && !any_name_key) {
        throw MissingNameColumn("ingest: no object carries the name key '" + columns.name +
                                "' in dataset '" + dataset_label + "'");
    }
    records = clean_records(std::move(records));
    check_unique_ids(records);
    return records;
}

std::vector<FeatureRecord> clean_records(std::vector<FeatureRecord> records) {
    std::vector<FeatureRecord> cleaned;
    cleaned.reserve(records.size());
    for (auto& record : records) {
        record.name = trim(record.name);
        if (record.name.empty()) continue;
        if (record.description && trim(*record.description).empty()) {
            record.description.reset();
        }
        cleaned.push_back(std::move(record));
    }
    return cleaned;
}

ComposedText compose_text(const FeatureRecord& record, ComposePolicy policy,
                          std::size_t record_index) {
    ComposedText composed;
    composed.record_index = record_index;
    composed.name = record.name;
    composed.text = record.name;

    switch (policy) {
    case ComposePolicy::name_only:
        break;
    case ComposePolicy::name_plus_description:
        if (record.description) {
            composed.text += ". ";
            composed.text += *record.description;
        }
        break;
    case ComposePolicy::name_plus_values: {
        std::vector<std::string> unique;
        for (const auto& value : record.sample_values) {
            if (unique.size() >= kMaxComposedValues) break;
            if (std::find(unique.begin(), unique.end(), value) == unique.end()) {
                unique.push_back(value);
            }
        }
        if (!unique.empty()) {
            composed.text += ". ";
            for (std::size_t i = 0; i < unique.size(); ++i) {
                if (i) composed.text += ", ";
                composed.text += unique[i];
            }
        }
        break;
    }
    }
    return composed;
}

} // namespace featmatch::ingest
