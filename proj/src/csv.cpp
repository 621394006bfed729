#include "featmatch/csv.hpp"

#include "featmatch/errors.hpp"

#include <fstream>
#include <sstream>

namespace featmatch::csv {

std::optional<std::size_t> Table::column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return i;
    }
    return std::nullopt;
}

namespace {

// Splits raw text into records of cells, honoring quoted fields.
std::vector<std::vector<std::string>> split_records(std::string_view text) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> row;
    std::string cell;
    bool quoted = false;
    bool cell_started = false; // row has at least one cell boundary

    auto end_cell = [&] {
        row.push_back(std::move(cell));
        cell.clear();
        cell_started = true;
    };
    auto end_row = [&] {
        end_cell();
        // A record of one empty cell is a blank line; skip it.
        if (!(row.size() == 1 && row[0].empty())) records.push_back(std::move(row));
        row.clear();
        cell_started = false;
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    cell += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cell += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            end_cell();
        } else if (c == '\n') {
            if (!cell.empty() && cell.back() == '\r') cell.pop_back();
            end_row();
        } else {
            cell += c;
        }
    }
    if (quoted) throw UnreadableSource("csv: unterminated quoted field");
    if (!cell.empty() || cell_started) {
        if (!cell.empty() && cell.back() == '\r') cell.pop_back();
        end_row();
    }
    return records;
}

} // namespace

Table parse(std::string_view text) {
    auto records = split_records(text);
    Table table;
    if (records.empty()) return table;
    table.header = std::move(records.front());
    for (std::size_t r = 1; r < records.size(); ++r) {
        if (records[r].size() != table.header.size()) {
            std::ostringstream msg;
            msg << "csv: row " << r + 1 << " has " << records[r].size()
                << " cells, header has " << table.header.size();
            throw UnreadableSource(msg.str());
        }
        table.rows.push_back(std::move(records[r]));
    }
    return table;
}

Table parse_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UnreadableSource("csv: cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw UnreadableSource("csv: read failed for " + path.string());
    return parse(buffer.str());
}

std::string escape(std::string_view field) {
    bool needs_quotes = field.find_first_of(",\"\r\n") != std::string_view::npos;
    if (!needs_quotes) return std::string(field);
    std::string out;
    out.reserve(field.size() + 2);
    out += '"';
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

void append_row(std::string& out, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += escape(cells[i]);
    }
    out += '\n';
}

} // namespace featmatch::csv
