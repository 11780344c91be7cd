#pragma once

#include <complex>
#include <limits>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace relkac {

/// How a row decides pass/fail, always from columns written to the CSV.
enum class Criterion {
  None,
  /// |estimate - reference| / std_error <= tolerance.
  SeLe,
  /// |estimate - reference| / |reference| <= tolerance.
  RelLe,
  /// |estimate - reference| <= tolerance.
  AbsLe,
  /// Re(estimate) <= tolerance.
  ValueLe,
  /// Re(estimate) < tolerance.
  ValueLt,
  /// Re(estimate) >= tolerance.
  ValueGe,
  /// Re(estimate) > tolerance.
  ValueGt,
  /// |estimate| <= |reference|.
  ModLeRef,
};

std::string to_string(Criterion criterion);

enum class ReferenceSource { None, ClosedForm, Oracle };

std::string to_string(ReferenceSource source);

struct ResultRow {
  std::string id;
  /// Values for the table's parameter columns, by column name.
  std::vector<std::pair<std::string, double>> params;
  std::complex<double> estimate{0.0, 0.0};
  /// NaN for deterministic values.
  double std_error = std::numeric_limits<double>::quiet_NaN();
  std::optional<std::complex<double>> reference;
  ReferenceSource source = ReferenceSource::None;
  Criterion criterion = Criterion::None;
  double tolerance = 0.0;
  /// Not part of pass/fail (e.g. infinite reference, informational rows).
  bool excluded = false;
  /// Failures are absorbed by the table's outlier budget row.
  bool budgeted = false;
  /// Seconds; written only to the metadata sidecar.
  double wall_time = 0.0;
  std::string note;

  ResultRow();

  /// |estimate - reference| / std_error, NaN without a reference or std_error.
  double discrepancy() const;
  double abs_error() const;
  double rel_error() const;
  /// Evaluates the criterion; rows with Criterion::None pass.
  bool passes() const;
};

struct ResultTable {
  std::string experiment_id;
  std::string kind;
  /// Parameter columns in output order.
  std::vector<std::string> param_columns;
  std::vector<ResultRow> rows;

  void add(ResultRow row);
  bool has_reference() const;
  /// Rows that are counted and fail.
  std::vector<std::size_t> failures() const;
  bool all_pass() const { return failures().empty(); }
};

struct RunMetadata {
  std::string config_echo;
  std::uint64_t seed = 0;
  int workers = 1;
  double total_wall_time = 0.0;
};

/// CSV text: fixed column order, 12 significant digits.
std::string format_csv(const ResultTable& table);
/// JSON sidecar text.
std::string format_metadata(const ResultTable& table, const RunMetadata& meta);

struct EmittedFiles {
  std::string csv;
  std::string json;
};

/// Writes <dir>/<experiment_id>.csv and .json. Throws OutputError with the
/// offending path.
EmittedFiles emit_results(const ResultTable& table, const RunMetadata& meta,
                          const std::string& directory);

/// "%.11e"-style formatting with explicit inf / -inf / nan.
std::string format_number(double value);

}  // namespace relkac
