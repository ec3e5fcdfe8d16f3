#pragma once

// Tabular results with per-row provenance, serialized as JSON, CSV
// (quoted per RFC 4180) or a markdown pipe table.

#include <cstdint>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

namespace powerslab {

inline constexpr const char* kVersion = "1.0.0";

enum class CellKind { Int, Real, Text };
enum class Provenance { PaperReproduction, Derived, Heuristic };
enum class Format { Json, Csv, Markdown };

using Cell = std::variant<std::int64_t, double, std::string>;

struct Column {
    std::string name;
    CellKind kind;

    friend bool operator==(const Column&, const Column&) = default;
};

struct Row {
    std::vector<Cell> cells;
    Provenance provenance = Provenance::Derived;

    friend bool operator==(const Row&, const Row&) = default;
};

inline std::string_view to_string(CellKind k) {
    switch (k) {
        case CellKind::Int: return "int";
        case CellKind::Real: return "real";
        case CellKind::Text: return "text";
    }
    return "text";
}

inline std::string_view to_string(Provenance p) {
    switch (p) {
        case Provenance::PaperReproduction: return "paper-reproduction";
        case Provenance::Derived: return "derived";
        case Provenance::Heuristic: return "heuristic";
    }
    return "derived";
}

inline CellKind cell_kind_from(std::string_view s) {
    if (s == "int") return CellKind::Int;
    if (s == "real") return CellKind::Real;
    if (s == "text") return CellKind::Text;
    throw std::invalid_argument("unknown column kind '" + std::string(s) + "'");
}

inline Provenance provenance_from(std::string_view s) {
    if (s == "paper-reproduction") return Provenance::PaperReproduction;
    if (s == "derived") return Provenance::Derived;
    if (s == "heuristic") return Provenance::Heuristic;
    throw std::invalid_argument("unknown provenance '" + std::string(s) + "'");
}

inline Format format_from(std::string_view s) {
    if (s == "json") return Format::Json;
    if (s == "csv") return Format::Csv;
    if (s == "md") return Format::Markdown;
    throw std::invalid_argument("unknown format '" + std::string(s) + "' (expected json, csv or md)");
}

class ReportTable {
public:
    ReportTable() = default;
    ReportTable(std::string title, std::vector<Column> columns)
        : title_(std::move(title)), columns_(std::move(columns)) {}

    void add_row(std::vector<Cell> cells, Provenance provenance) {
        if (cells.size() != columns_.size()) {
            throw std::invalid_argument("ReportTable: row arity " + std::to_string(cells.size()) +
                                        " does not match " + std::to_string(columns_.size()) + " columns");
        }
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (cells[i].index() != static_cast<std::size_t>(columns_[i].kind)) {
                throw std::invalid_argument("ReportTable: cell kind mismatch in column '" +
                                            columns_[i].name + "'");
            }
        }
        rows_.push_back({std::move(cells), provenance});
    }

    [[nodiscard]] const std::string& title() const { return title_; }
    [[nodiscard]] const std::vector<Column>& columns() const { return columns_; }
    [[nodiscard]] const std::vector<Row>& rows() const { return rows_; }

    // Extra metadata for the JSON form (parameters, version, runtime).
    nlohmann::ordered_json& meta() { return meta_; }
    [[nodiscard]] const nlohmann::ordered_json& meta() const { return meta_; }

    [[nodiscard]] std::size_t column_index(std::string_view name) const {
        for (std::size_t i = 0; i < columns_.size(); ++i) {
            if (columns_[i].name == name) return i;
        }
        throw std::out_of_range("ReportTable: no column '" + std::string(name) + "'");
    }

    [[nodiscard]] double real_at(std::size_t row, std::string_view column) const {
        return std::get<double>(rows_.at(row).cells.at(column_index(column)));
    }

    // Table contents only; meta is not part of equality.
    friend bool operator==(const ReportTable& a, const ReportTable& b) {
        return a.title_ == b.title_ && a.columns_ == b.columns_ && a.rows_ == b.rows_;
    }

private:
    std::string title_;
    std::vector<Column> columns_;
    std::vector<Row> rows_;
    nlohmann::ordered_json meta_ = nlohmann::ordered_json::object();
};

namespace detail {

inline nlohmann::ordered_json cell_to_json(const Cell& c) {
    return std::visit([](const auto& v) { return nlohmann::ordered_json(v); }, c);
}

inline std::string format_real_fixed(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.5f", v);
    std::string s(buf);
    if (s == "-0.00000") s = "0.00000";
    return s;
}

inline std::string cell_to_text(const Cell& c) {
    if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
    if (const auto* d = std::get_if<double>(&c)) return format_real_fixed(*d);
    return std::get<std::string>(c);
}

inline std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    out += '"';
    return out;
}

inline std::string md_escape(const std::string& s) {
    std::string out;
    for (char ch : s) {
        if (ch == '|') out += '\\';
        out += ch == '\n' ? ' ' : ch;
    }
    return out;
}

}  // namespace detail

inline nlohmann::ordered_json to_json(const ReportTable& t) {
    nlohmann::ordered_json j;
    j["title"] = t.title();
    auto cols = nlohmann::ordered_json::array();
    for (const auto& c : t.columns()) cols.push_back({{"name", c.name}, {"kind", to_string(c.kind)}});
    j["columns"] = cols;
    auto rows = nlohmann::ordered_json::array();
    auto prov = nlohmann::ordered_json::array();
    for (const auto& r : t.rows()) {
        auto cells = nlohmann::ordered_json::array();
        for (const auto& c : r.cells) cells.push_back(detail::cell_to_json(c));
        rows.push_back(cells);
        prov.push_back(to_string(r.provenance));
    }
    j["rows"] = rows;
    j["provenance"] = prov;
    nlohmann::ordered_json meta = t.meta();
    if (!meta.contains("version")) meta["version"] = kVersion;
    j["meta"] = meta;
    return j;
}

inline ReportTable table_from_json(const nlohmann::ordered_json& j) {
    std::vector<Column> cols;
    for (const auto& c : j.at("columns")) {
        cols.push_back({c.at("name").get<std::string>(), cell_kind_from(c.at("kind").get<std::string>())});
    }
    ReportTable t(j.at("title").get<std::string>(), cols);
    const auto& rows = j.at("rows");
    const auto& prov = j.at("provenance");
    for (std::size_t r = 0; r < rows.size(); ++r) {
        std::vector<Cell> cells;
        for (std::size_t i = 0; i < cols.size(); ++i) {
            const auto& v = rows[r].at(i);
            switch (cols[i].kind) {
                case CellKind::Int: cells.emplace_back(v.get<std::int64_t>()); break;
                case CellKind::Real: cells.emplace_back(v.get<double>()); break;
                case CellKind::Text: cells.emplace_back(v.get<std::string>()); break;
            }
        }
        t.add_row(std::move(cells), provenance_from(prov.at(r).get<std::string>()));
    }
    if (j.contains("meta")) t.meta() = j.at("meta");
    return t;
}

// Tables serialize in full. A one-row table can instead be written as a flat
// JSON record {title, <column>: value..., provenance, meta}; CSV and
// markdown are unaffected by `as_record`.
inline std::string serialize(const ReportTable& t, Format format, bool as_record = false) {
    std::ostringstream os;
    switch (format) {
        case Format::Json: {
            if (as_record && t.rows().size() == 1) {
                nlohmann::ordered_json j;
                j["title"] = t.title();
                const Row& r = t.rows().front();
                for (std::size_t i = 0; i < t.columns().size(); ++i) {
                    j[t.columns()[i].name] = detail::cell_to_json(r.cells[i]);
                }
                j["provenance"] = to_string(r.provenance);
                nlohmann::ordered_json meta = t.meta();
                if (!meta.contains("version")) meta["version"] = kVersion;
                j["meta"] = meta;
                os << j.dump(2) << '\n';
            } else {
                os << to_json(t).dump(2) << '\n';
            }
            break;
        }
        case Format::Csv: {
            for (const auto& c : t.columns()) os << detail::csv_quote(c.name) << ',';
            os << "provenance\n";
            for (const auto& r : t.rows()) {
                for (const auto& c : r.cells) os << detail::csv_quote(detail::cell_to_text(c)) << ',';
                os << to_string(r.provenance) << '\n';
            }
            break;
        }
        case Format::Markdown: {
            os << "### " << detail::md_escape(t.title()) << "\n\n|";
            for (const auto& c : t.columns()) os << ' ' << detail::md_escape(c.name) << " |";
            os << " provenance |\n|";
            for (const auto& c : t.columns()) os << (c.kind == CellKind::Text ? " --- |" : " ---: |");
            os << " --- |\n";
            for (const auto& r : t.rows()) {
                os << '|';
                for (const auto& c : r.cells) os << ' ' << detail::md_escape(detail::cell_to_text(c)) << " |";
                os << ' ' << to_string(r.provenance) << " |\n";
            }
            break;
        }
    }
    return os.str();
}

}  // namespace powerslab
