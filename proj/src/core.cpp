#include "dl/core.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <sstream>

namespace dl {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::ShapeMismatch: return "ShapeMismatch";
        case ErrorKind::BoundViolation: return "BoundViolation";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::EmptyTable: return "EmptyTable";
        case ErrorKind::InvalidThreshold: return "InvalidThreshold";
        case ErrorKind::InvalidEpsilon: return "InvalidEpsilon";
        case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
        case ErrorKind::TooManyColumns: return "TooManyColumns";
        case ErrorKind::InvalidWitness: return "InvalidWitness";
        case ErrorKind::SearchBudgetExceeded: return "SearchBudgetExceeded";
        case ErrorKind::BudgetExceeded: return "BudgetExceeded";
        case ErrorKind::EmptySubset: return "EmptySubset";
        case ErrorKind::EmptySelection: return "EmptySelection";
        case ErrorKind::InvalidSize: return "InvalidSize";
        case ErrorKind::SolverFailure: return "SolverFailure";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

ThresholdPair::ThresholdPair(double s, double r) : s_(s), r_(r) {
    if (!std::isfinite(s) || !std::isfinite(r) || !(s < r)) {
        std::ostringstream os;
        os << "threshold pair requires finite s < r (got s=" << s << ", r=" << r << ")";
        throw Error(ErrorKind::InvalidThreshold, os.str());
    }
}

Epsilon::Epsilon(double eps) : eps_(eps) {
    if (!std::isfinite(eps) || !(eps > 0.0)) {
        std::ostringstream os;
        os << "epsilon must be finite and positive (got " << eps << ")";
        throw Error(ErrorKind::InvalidEpsilon, os.str());
    }
}

EvalTable::EvalTable(std::size_t n_rows, std::size_t n_cols, double bound, std::vector<double> entries,
                     std::optional<std::vector<std::string>> row_labels,
                     std::optional<std::vector<std::string>> col_labels)
    : n_rows_(n_rows),
      n_cols_(n_cols),
      bound_(bound),
      entries_(std::move(entries)),
      row_labels_(std::move(row_labels)),
      col_labels_(std::move(col_labels)) {
    if (n_rows_ == 0 || n_cols_ == 0) throw Error(ErrorKind::EmptyTable, "table has no rows or no columns");
    if (entries_.size() != n_rows_ * n_cols_)
        throw Error(ErrorKind::ShapeMismatch, "entry count does not match n_rows * n_cols");
    if (!std::isfinite(bound_) || !(bound_ > 0.0))
        throw Error(ErrorKind::BoundViolation, "bound must be finite and positive");
    for (std::size_t k = 0; k < entries_.size(); ++k) {
        const double e = entries_[k];
        if (!std::isfinite(e)) {
            throw Error(ErrorKind::ParseError, "non-finite entry at (" + std::to_string(k / n_cols_) + "," +
                                                   std::to_string(k % n_cols_) + ")");
        }
        if (std::abs(e) > bound_) {
            std::ostringstream os;
            os << "entry " << e << " at (" << k / n_cols_ << "," << k % n_cols_ << ") exceeds bound " << bound_;
            throw Error(ErrorKind::BoundViolation, os.str());
        }
    }
    if (row_labels_ && row_labels_->size() != n_rows_)
        throw Error(ErrorKind::ShapeMismatch, "row_labels length does not match n_rows");
    if (col_labels_ && col_labels_->size() != n_cols_)
        throw Error(ErrorKind::ShapeMismatch, "col_labels length does not match n_cols");
}

EvalTable EvalTable::from_rows(const std::vector<std::vector<double>>& rows, double bound) {
    if (rows.empty() || rows.front().empty()) throw Error(ErrorKind::EmptyTable, "no entries");
    const std::size_t width = rows.front().size();
    std::vector<double> flat;
    flat.reserve(rows.size() * width);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != width) {
            throw Error(ErrorKind::ShapeMismatch, "row " + std::to_string(i) + " has " +
                                                      std::to_string(rows[i].size()) + " cells, expected " +
                                                      std::to_string(width));
        }
        flat.insert(flat.end(), rows[i].begin(), rows[i].end());
    }
    return EvalTable(rows.size(), width, bound, std::move(flat));
}

double EvalTable::at(std::size_t row, std::size_t col) const {
    if (row >= n_rows_ || col >= n_cols_) {
        throw Error(ErrorKind::IndexOutOfRange,
                    "cell (" + std::to_string(row) + "," + std::to_string(col) + ") outside table");
    }
    return (*this)(row, col);
}

std::vector<double> EvalTable::column(std::size_t c) const {
    std::vector<double> out(n_rows_);
    for (std::size_t i = 0; i < n_rows_; ++i) out[i] = (*this)(i, c);
    return out;
}

std::vector<double> EvalTable::distinct_values() const {
    std::vector<double> v(entries_.begin(), entries_.end());
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

bool EvalTable::operator==(const EvalTable& other) const {
    if (n_rows_ != other.n_rows_ || n_cols_ != other.n_cols_) return false;
    if (std::bit_cast<std::uint64_t>(bound_) != std::bit_cast<std::uint64_t>(other.bound_)) return false;
    for (std::size_t k = 0; k < entries_.size(); ++k) {
        if (std::bit_cast<std::uint64_t>(entries_[k]) != std::bit_cast<std::uint64_t>(other.entries_[k]))
            return false;
    }
    return row_labels_ == other.row_labels_ && col_labels_ == other.col_labels_;
}

std::optional<TableFormat> format_from_path(std::string_view path) {
    auto ends_with = [&](std::string_view suffix) {
        if (path.size() < suffix.size()) return false;
        const auto tail = path.substr(path.size() - suffix.size());
        return std::equal(tail.begin(), tail.end(), suffix.begin(),
                          [](char a, char b) { return std::tolower(static_cast<unsigned char>(a)) == b; });
    };
    if (ends_with(".csv")) return TableFormat::Csv;
    if (ends_with(".json")) return TableFormat::Json;
    return std::nullopt;
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

double parse_cell(std::string_view cell, std::size_t line_no) {
    cell = trim(cell);
    if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(value)) {
        throw Error(ErrorKind::ParseError,
                    "line " + std::to_string(line_no) + ": non-numeric cell '" + std::string(cell) + "'");
    }
    return value;
}

EvalTable load_csv(std::istream& in, std::optional<double> bound_override) {
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view = trim(line);
        if (view.empty()) continue;
        std::vector<double> row;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = view.find(',', start);
            row.push_back(parse_cell(view.substr(start, comma - start), line_no));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw Error(ErrorKind::EmptyTable, "CSV input has no rows");
    double bound = 0.0;
    if (bound_override) {
        bound = *bound_override;
    } else {
        for (const auto& row : rows)
            for (double v : row) bound = std::max(bound, std::abs(v));
        if (bound == 0.0) bound = 1.0;
    }
    return EvalTable::from_rows(rows, bound);
}

std::optional<std::vector<std::string>> labels_from_json(const nlohmann::json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    if (!j.at(key).is_array()) throw Error(ErrorKind::ParseError, std::string(key) + " must be an array");
    std::vector<std::string> out;
    for (const auto& v : j.at(key)) {
        if (!v.is_string()) throw Error(ErrorKind::ParseError, std::string(key) + " entries must be strings");
        out.push_back(v.get<std::string>());
    }
    return out;
}

}  // namespace

EvalTable table_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw Error(ErrorKind::ParseError, "table JSON must be an object");
    if (!j.contains("bound") || !j.at("bound").is_number())
        throw Error(ErrorKind::ParseError, "table JSON requires a numeric \"bound\"");
    if (!j.contains("entries") || !j.at("entries").is_array())
        throw Error(ErrorKind::ParseError, "table JSON requires an \"entries\" array");
    const double bound = j.at("bound").get<double>();
    const auto& entries = j.at("entries");
    if (entries.empty()) throw Error(ErrorKind::EmptyTable, "\"entries\" is empty");
    std::vector<std::vector<double>> rows;
    rows.reserve(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const auto& row = entries[i];
        if (!row.is_array()) throw Error(ErrorKind::ParseError, "row " + std::to_string(i) + " is not an array");
        std::vector<double> values;
        values.reserve(row.size());
        for (const auto& cell : row) {
            if (!cell.is_number())
                throw Error(ErrorKind::ParseError, "row " + std::to_string(i) + " has a non-numeric cell");
            values.push_back(cell.get<double>());
        }
        rows.push_back(std::move(values));
    }
    EvalTable shape = EvalTable::from_rows(rows, bound);
    return EvalTable(shape.rows(), shape.cols(), bound,
                     std::vector<double>(shape.entries().begin(), shape.entries().end()),
                     labels_from_json(j, "row_labels"), labels_from_json(j, "col_labels"));
}

EvalTable load_table(std::istream& in, TableFormat format, std::optional<double> bound_override) {
    if (!in) throw Error(ErrorKind::ParseError, "input stream is not readable");
    if (format == TableFormat::Csv) return load_csv(in, bound_override);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorKind::ParseError, e.what());
    }
    if (bound_override && j.is_object()) j["bound"] = *bound_override;
    return table_from_json(j);
}

EvalTable load_table_file(const std::string& path, std::optional<TableFormat> format,
                          std::optional<double> bound_override) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::ParseError, "cannot open " + path);
    auto fmt = format ? format : format_from_path(path);
    if (!fmt) throw Error(ErrorKind::ParseError, "cannot infer table format from " + path + "; pass --format");
    return load_table(in, *fmt, bound_override);
}

nlohmann::json to_json(const EvalTable& t) {
    nlohmann::json j;
    j["bound"] = t.bound();
    auto entries = nlohmann::json::array();
    for (std::size_t i = 0; i < t.rows(); ++i) {
        auto row = nlohmann::json::array();
        for (std::size_t c = 0; c < t.cols(); ++c) row.push_back(t(i, c));
        entries.push_back(std::move(row));
    }
    j["entries"] = std::move(entries);
    if (t.row_labels()) j["row_labels"] = *t.row_labels();
    if (t.col_labels()) j["col_labels"] = *t.col_labels();
    return j;
}

EvalTable transpose(const EvalTable& t) {
    std::vector<double> out(t.rows() * t.cols());
    for (std::size_t i = 0; i < t.rows(); ++i)
        for (std::size_t c = 0; c < t.cols(); ++c) out[c * t.rows() + i] = t(i, c);
    return EvalTable(t.cols(), t.rows(), t.bound(), std::move(out), t.col_labels(), t.row_labels());
}

std::uint64_t table_digest(const EvalTable& t) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](std::uint64_t word) {
        for (int b = 0; b < 8; ++b) {
            h ^= (word >> (8 * b)) & 0xffU;
            h *= 0x100000001b3ULL;
        }
    };
    mix(t.rows());
    mix(t.cols());
    mix(std::bit_cast<std::uint64_t>(t.bound()));
    for (double e : t.entries()) mix(std::bit_cast<std::uint64_t>(e));
    return h;
}

std::string hex_digest(std::uint64_t digest) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(digest));
    return buf;
}

void check_indices(std::span<const std::size_t> idx, std::size_t limit, std::string_view what) {
    for (std::size_t v : idx) {
        if (v >= limit) {
            throw Error(ErrorKind::IndexOutOfRange, std::string(what) + " index " + std::to_string(v) +
                                                        " out of range (size " + std::to_string(limit) + ")");
        }
    }
}

}  // namespace dl
