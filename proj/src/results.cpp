#include "relkac/results.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "relkac/errors.hpp"

namespace relkac {

std::string to_string(Criterion criterion) {
  switch (criterion) {
    case Criterion::None: return "none";
    case Criterion::SeLe: return "se_le";
    case Criterion::RelLe: return "rel_le";
    case Criterion::AbsLe: return "abs_le";
    case Criterion::ValueLe: return "value_le";
    case Criterion::ValueLt: return "value_lt";
    case Criterion::ValueGe: return "value_ge";
    case Criterion::ValueGt: return "value_gt";
    case Criterion::ModLeRef: return "mod_le_ref";
  }
  return "?";
}

std::string to_string(ReferenceSource source) {
  switch (source) {
    case ReferenceSource::None: return "none";
    case ReferenceSource::ClosedForm: return "closed_form";
    case ReferenceSource::Oracle: return "oracle";
  }
  return "?";
}

ResultRow::ResultRow() = default;

double ResultRow::abs_error() const {
  if (!reference) return std::numeric_limits<double>::quiet_NaN();
  const auto diff = estimate - *reference;
  if (std::isinf(reference->real())) {
    return std::numeric_limits<double>::infinity();
  }
  return std::abs(diff);
}

double ResultRow::rel_error() const {
  const double scale = reference ? std::abs(*reference) : 0.0;
  return scale > 0.0 ? abs_error() / scale : std::numeric_limits<double>::quiet_NaN();
}

double ResultRow::discrepancy() const {
  if (!reference || !(std_error > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  return abs_error() / std_error;
}

bool ResultRow::passes() const {
  switch (criterion) {
    case Criterion::None: return true;
    case Criterion::SeLe: {
      if (!reference) return false;
      // A zero standard error is a deterministic match only if exact.
      if (!(std_error > 0.0)) return abs_error() == 0.0;
      return discrepancy() <= tolerance;
    }
    case Criterion::RelLe: return rel_error() <= tolerance;
    case Criterion::AbsLe: return abs_error() <= tolerance;
    case Criterion::ValueLe: return estimate.real() <= tolerance;
    case Criterion::ValueLt: return estimate.real() < tolerance;
    case Criterion::ValueGe: return estimate.real() >= tolerance;
    case Criterion::ValueGt: return estimate.real() > tolerance;
    case Criterion::ModLeRef: return reference && std::abs(estimate) <= std::abs(*reference);
  }
  return false;
}

void ResultTable::add(ResultRow row) { rows.push_back(std::move(row)); }

bool ResultTable::has_reference() const {
  for (const auto& row : rows) {
    if (row.reference) return true;
  }
  return false;
}

std::vector<std::size_t> ResultTable::failures() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (row.excluded || row.budgeted) continue;
    if (!row.passes()) out.push_back(i);
  }
  return out;
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.11e", value);
  return buffer;
}

namespace {

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string out = "\"";
  for (const char ch : text) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

std::string format_csv(const ResultTable& table) {
  const bool with_reference = table.has_reference();
  std::ostringstream out;
  out << "id";
  for (const auto& column : table.param_columns) out << ',' << csv_field(column);
  out << ",estimate_re,estimate_im,stderr";
  if (with_reference) {
    out << ",reference_re,reference_im,source,abs_error,rel_error,discrepancy_se";
  }
  out << ",criterion,tolerance,excluded,budgeted,pass,note\n";

  for (const auto& row : table.rows) {
    out << csv_field(row.id);
    for (const auto& column : table.param_columns) {
      out << ',';
      for (const auto& [name, value] : row.params) {
        if (name == column) {
          out << format_number(value);
          break;
        }
      }
    }
    out << ',' << format_number(row.estimate.real()) << ',' << format_number(row.estimate.imag())
        << ',' << format_number(row.std_error);
    if (with_reference) {
      if (row.reference) {
        out << ',' << format_number(row.reference->real()) << ','
            << format_number(row.reference->imag());
      } else {
        out << ",,";
      }
      out << ',' << to_string(row.source) << ',' << format_number(row.abs_error()) << ','
          << format_number(row.rel_error()) << ',' << format_number(row.discrepancy());
    }
    out << ',' << to_string(row.criterion) << ',' << format_number(row.tolerance) << ','
        << (row.excluded ? 1 : 0) << ',' << (row.budgeted ? 1 : 0) << ','
        << (row.passes() ? 1 : 0) << ',' << csv_field(row.note) << '\n';
  }
  return out.str();
}

std::string format_metadata(const ResultTable& table, const RunMetadata& meta) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["experiment_id"] = table.experiment_id;
  doc["kind"] = table.kind;
  doc["version"] = RELKAC_VERSION;
  doc["seed"] = meta.seed;
  doc["workers"] = meta.workers;
  doc["config"] = meta.config_echo;
  doc["rows"] = table.rows.size();
  const auto failed = table.failures();
  doc["all_pass"] = failed.empty();
  ordered_json failed_ids = ordered_json::array();
  for (const auto i : failed) failed_ids.push_back(table.rows[i].id);
  doc["failed_rows"] = failed_ids;
  ordered_json walls = ordered_json::array();
  for (const auto& row : table.rows) walls.push_back({{"id", row.id}, {"seconds", row.wall_time}});
  doc["wall_times"] = walls;
  doc["total_wall_time"] = meta.total_wall_time;
  return doc.dump(2) + "\n";
}

EmittedFiles emit_results(const ResultTable& table, const RunMetadata& meta,
                          const std::string& directory) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(directory, ec);
  if (ec) throw OutputError("cannot create output directory '" + directory + "': " + ec.message());

  EmittedFiles files;
  files.csv = (fs::path(directory) / (table.experiment_id + ".csv")).string();
  files.json = (fs::path(directory) / (table.experiment_id + ".json")).string();
  auto write = [](const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw OutputError("cannot open '" + path + "' for writing");
    out << text;
    if (!out) throw OutputError("write to '" + path + "' failed");
  };
  write(files.csv, format_csv(table));
  write(files.json, format_metadata(table, meta));
  return files;
}

}  // namespace relkac
