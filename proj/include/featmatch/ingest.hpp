#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace featmatch::ingest {

/// One feature (column) of one dataset.
struct FeatureRecord {
    std::string dataset_label;
    std::optional<std::string> feature_id; // stable external ID, unique per dataset
    std::string name;                      // non-empty after cleaning
    std::optional<std::string> description;
    std::vector<std::string> sample_values;
};

/// Maps logical fields to source column names / JSON keys.
struct ColumnMap {
    std::string name = "name";
    std::string description = "description";
    std::string id = "id";
    std::string values = "values"; // pipe-separated within a CSV cell
};

enum class ComposePolicy {
    name_only,
    name_plus_description,
    name_plus_values,
};

ComposePolicy parse_compose_policy(std::string_view text);
std::string_view to_string(ComposePolicy policy);

/// A feature's matching text. Always begins with the record's name;
/// composition is deterministic given (record, policy).
struct ComposedText {
    std::size_t record_index = 0; // position in the owning record list
    std::string name;             // the record's raw name
    std::string text;
};

/// Maximum distinct sample values joined under name_plus_values.
inline constexpr std::size_t kMaxComposedValues = 32;

/// Loads a feature list from a CSV file or a JSON array of objects
/// (detected by extension, with a '[' sniff fallback). Rows with
/// empty names are dropped; input order is preserved.
///
/// Throws UnreadableSource, MissingNameColumn, or DuplicateFeatureId.
std::vector<FeatureRecord> load_schema(const std::filesystem::path& source,
                                       const std::string& dataset_label,
                                       const ColumnMap& columns = {});

/// Same, from in-memory CSV text.
std::vector<FeatureRecord> load_schema_csv(std::string_view text,
                                           const std::string& dataset_label,
                                           const ColumnMap& columns = {});

/// Same, from an in-memory JSON array of objects.
std::vector<FeatureRecord> load_schema_json(std::string_view text,
                                            const std::string& dataset_label,
                                            const ColumnMap& columns = {});

/// Drops records whose trimmed name is empty and normalizes empty
/// descriptions to absent. Total and idempotent.
std::vector<FeatureRecord> clean_records(std::vector<FeatureRecord> records);

/// Builds the matching text for one record under the given policy.
ComposedText compose_text(const FeatureRecord& record, ComposePolicy policy,
                          std::size_t record_index = 0);

} // namespace featmatch::ingest
