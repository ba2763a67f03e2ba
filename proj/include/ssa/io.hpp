#pragma once

#include <string>
#include <vector>

#include "ssa/core.hpp"
#include "ssa/integrated.hpp"
#include "ssa/stationary.hpp"
#include "ssa/targets.hpp"

namespace ssa {

// A value series with pass-through date labels; no calendar arithmetic.
struct DatedSeries {
  std::vector<std::string> dates;
  Vec values;

  int size() const { return static_cast<int>(values.size()); }
};

// Two-column CSV (date, value) with a header row. Missing values, unparseable
// rows and non-monotone dates are rejected with their line number.
DatedSeries ingest_csv(const std::string& path);

enum class TransformOp { log, diff };

std::vector<TransformOp> parse_transforms(const std::string& spec);

// Applies transforms in order; diff shortens the series by one and drops the
// first date label.
DatedSeries transform(DatedSeries series, const std::vector<TransformOp>& ops);

// An optional comment is emitted as a leading '#' metadata line; ingest_csv
// skips such lines.
void write_series_csv(const std::string& path, const DatedSeries& series,
                      const std::string& value_header = "value",
                      const std::string& comment = "");

// Coefficient CSV, columns lag,weight. Weights are printed with enough digits
// to round-trip exactly.
void write_coeffs_csv(const std::string& path, const Vec& coeffs, int min_lag = 0);

struct CoeffsCsv {
  std::vector<int> lags;
  Vec weights;
};
CoeffsCsv read_coeffs_csv(const std::string& path);

std::string solution_to_json(const SsaSolution& solution);
std::string integrated_to_json(const IntegratedSolution& solution);

ProcessModel model_from_json(const std::string& text);

void write_text_file(const std::string& path, const std::string& text);

}  // namespace ssa
