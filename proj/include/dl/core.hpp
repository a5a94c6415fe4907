#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace dl {

/// Error categories surfaced by the library. The CLI maps them to exit codes.
enum class ErrorKind {
    ShapeMismatch,
    BoundViolation,
    ParseError,
    EmptyTable,
    InvalidThreshold,
    InvalidEpsilon,
    IndexOutOfRange,
    TooManyColumns,
    InvalidWitness,
    SearchBudgetExceeded,
    BudgetExceeded,
    EmptySubset,
    EmptySelection,
    InvalidSize,
    SolverFailure,
    InvalidArgument,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Threshold pair s < r. Construction enforces the ordering.
class ThresholdPair {
public:
    ThresholdPair(double s, double r);

    double s() const noexcept { return s_; }
    double r() const noexcept { return r_; }
    double gap() const noexcept { return r_ - s_; }

    bool operator==(const ThresholdPair&) const = default;

private:
    double s_;
    double r_;
};

class Epsilon {
public:
    explicit Epsilon(double eps);

    double value() const noexcept { return eps_; }

    bool operator==(const Epsilon&) const = default;

private:
    double eps_;
};

/// Immutable bounded real matrix. Rows are the x-side (points), columns the
/// y-side (parameters / functions).
class EvalTable {
public:
    EvalTable(std::size_t n_rows, std::size_t n_cols, double bound, std::vector<double> entries,
              std::optional<std::vector<std::string>> row_labels = std::nullopt,
              std::optional<std::vector<std::string>> col_labels = std::nullopt);

    /// Builds from nested rows; throws ShapeMismatch on ragged input.
    static EvalTable from_rows(const std::vector<std::vector<double>>& rows, double bound);

    std::size_t rows() const noexcept { return n_rows_; }
    std::size_t cols() const noexcept { return n_cols_; }
    double bound() const noexcept { return bound_; }

    double operator()(std::size_t row, std::size_t col) const noexcept {
        return entries_[row * n_cols_ + col];
    }
    double at(std::size_t row, std::size_t col) const;

    std::span<const double> row(std::size_t r) const noexcept {
        return {entries_.data() + r * n_cols_, n_cols_};
    }
    std::vector<double> column(std::size_t c) const;
    std::span<const double> entries() const noexcept { return entries_; }

    const std::optional<std::vector<std::string>>& row_labels() const noexcept { return row_labels_; }
    const std::optional<std::vector<std::string>>& col_labels() const noexcept { return col_labels_; }

    /// Sorted distinct entry values.
    std::vector<double> distinct_values() const;

    bool operator==(const EvalTable& other) const;

private:
    std::size_t n_rows_;
    std::size_t n_cols_;
    double bound_;
    std::vector<double> entries_;
    std::optional<std::vector<std::string>> row_labels_;
    std::optional<std::vector<std::string>> col_labels_;
};

enum class TableFormat { Csv, Json };

/// Infers the format from a path extension (".csv" or ".json").
std::optional<TableFormat> format_from_path(std::string_view path);

/// Reads a table. For CSV the bound is the maximum absolute entry (1 for an
/// all-zero table) unless `bound_override` is given; JSON requires "bound".
EvalTable load_table(std::istream& in, TableFormat format,
                     std::optional<double> bound_override = std::nullopt);
EvalTable load_table_file(const std::string& path, std::optional<TableFormat> format = std::nullopt,
                          std::optional<double> bound_override = std::nullopt);

EvalTable table_from_json(const nlohmann::json& j);
nlohmann::json to_json(const EvalTable& t);

/// The dual table: result(j, i) == t(i, j).
EvalTable transpose(const EvalTable& t);

/// FNV-1a over shape, bound and the IEEE-754 bit patterns of the entries.
std::uint64_t table_digest(const EvalTable& t);
std::string hex_digest(std::uint64_t digest);

/// Checks that every index in `idx` is below `limit`.
void check_indices(std::span<const std::size_t> idx, std::size_t limit, std::string_view what);

}  // namespace dl
