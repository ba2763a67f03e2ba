#include "ssa/io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace ssa {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

bool parse_double(const std::string& s, double& out) {
  const std::string t = trim(s);
  if (t.empty()) return false;
  char* end = nullptr;
  out = std::strtod(t.c_str(), &end);
  return end == t.c_str() + t.size();
}

std::string format_full(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

DatedSeries ingest_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open " + path);
  DatedSeries series;
  std::vector<double> values;
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty() && line[0] == '#') continue;  // comment/metadata line
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    if (trim(line).empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw Error(ErrorCode::parse, "line " + std::to_string(line_no) + ": expected date,value");
    const std::string date = trim(line.substr(0, comma));
    const std::string value_text = trim(line.substr(comma + 1));
    if (date.empty())
      throw Error(ErrorCode::parse, "line " + std::to_string(line_no) + ": empty date");
    if (value_text.empty() || value_text == ".")
      throw Error(ErrorCode::parse,
                  "line " + std::to_string(line_no) + ": missing value");
    double v = 0.0;
    if (!parse_double(value_text, v))
      throw Error(ErrorCode::parse,
                  "line " + std::to_string(line_no) + ": unparseable value '" + value_text + "'");
    if (!series.dates.empty() && date <= series.dates.back())
      throw Error(ErrorCode::parse,
                  "line " + std::to_string(line_no) + ": dates not strictly increasing");
    series.dates.push_back(date);
    values.push_back(v);
  }
  if (values.empty()) throw Error(ErrorCode::parse, "no data rows in " + path);
  series.values = Eigen::Map<Vec>(values.data(), static_cast<int>(values.size()));
  return series;
}

std::vector<TransformOp> parse_transforms(const std::string& spec) {
  std::vector<TransformOp> ops;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const std::string t = trim(item);
    if (t.empty()) continue;
    if (t == "log")
      ops.push_back(TransformOp::log);
    else if (t == "diff")
      ops.push_back(TransformOp::diff);
    else
      throw Error(ErrorCode::config, "unknown transform '" + t + "'");
  }
  return ops;
}

DatedSeries transform(DatedSeries series, const std::vector<TransformOp>& ops) {
  for (TransformOp op : ops) {
    if (op == TransformOp::log) {
      for (int i = 0; i < series.size(); ++i) {
        if (series.values(i) <= 0.0)
          throw Error(ErrorCode::domain,
                      "log of non-positive value at index " + std::to_string(i) +
                          " (" + series.dates[i] + ")");
        series.values(i) = std::log(series.values(i));
      }
    } else {
      if (series.size() < 2)
        throw Error(ErrorCode::insufficient_data, "diff needs at least two observations");
      Vec d(series.size() - 1);
      for (int i = 1; i < series.size(); ++i) d(i - 1) = series.values(i) - series.values(i - 1);
      series.values = d;
      series.dates.erase(series.dates.begin());
    }
  }
  return series;
}

void write_series_csv(const std::string& path, const DatedSeries& series,
                      const std::string& value_header, const std::string& comment) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::io, "cannot write " + path);
  if (!comment.empty()) out << "# " << comment << "\n";
  out << "date," << value_header << "\n";
  for (int i = 0; i < series.size(); ++i)
    out << series.dates[i] << "," << format_full(series.values(i)) << "\n";
}

void write_coeffs_csv(const std::string& path, const Vec& coeffs, int min_lag) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::io, "cannot write " + path);
  out << "lag,weight\n";
  for (int i = 0; i < coeffs.size(); ++i)
    out << (min_lag + i) << "," << format_full(coeffs(i)) << "\n";
}

CoeffsCsv read_coeffs_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open " + path);
  CoeffsCsv out;
  std::vector<double> w;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1 || trim(line).empty()) continue;
    const auto comma = line.find(',');
    double lag = 0.0, weight = 0.0;
    if (comma == std::string::npos || !parse_double(line.substr(0, comma), lag) ||
        !parse_double(line.substr(comma + 1), weight))
      throw Error(ErrorCode::parse,
                  "line " + std::to_string(line_no) + ": expected lag,weight");
    out.lags.push_back(static_cast<int>(lag));
    w.push_back(weight);
  }
  if (w.empty()) throw Error(ErrorCode::parse, "no coefficients in " + path);
  out.weights = Eigen::Map<Vec>(w.data(), static_cast<int>(w.size()));
  return out;
}

std::string solution_to_json(const SsaSolution& solution) {
  nlohmann::json j;
  j["nu"] = std::isfinite(solution.nu) ? nlohmann::json(solution.nu)
                                       : nlohmann::json("infinity");
  j["d_sign"] = solution.d_sign;
  switch (solution.kind) {
    case SolutionKind::regular: j["kind"] = "regular"; break;
    case SolutionKind::degenerate_mse: j["kind"] = "degenerate_mse"; break;
    case SolutionKind::boundary: j["kind"] = "boundary"; break;
    case SolutionKind::completed: j["kind"] = "completed"; break;
  }
  if (solution.kind == SolutionKind::completed) {
    j["completed_index"] = solution.completed_index + 1;
    j["n_tilde"] = solution.n_tilde;
  }
  const SsaDiagnostics& d = solution.diagnostics;
  j["criterion_value"] = d.criterion_value;
  j["target_correlation"] = d.target_correlation;
  j["acf1"] = d.acf1;
  j["holding_time"] = d.holding_time;
  j["sign_accuracy"] = d.sign_accuracy;
  j["mse"] = d.mse_vs_target;
  j["branch"] = d.branch;
  j["iterations"] = d.iterations;
  j["residual"] = d.residual;
  j["coefficients"] = std::vector<double>(solution.b.data(),
                                          solution.b.data() + solution.b.size());
  return j.dump(2);
}

std::string integrated_to_json(const IntegratedSolution& solution) {
  nlohmann::json j;
  j["lambda_tilde"] = solution.lambda_tilde;
  j["gamma0"] = solution.gamma0;
  j["gamma0_dot"] = solution.gamma0_dot;
  const IntegratedDiagnostics& d = solution.diagnostics;
  j["acf1"] = d.acf1_of_diff;
  j["holding_time"] = d.ht_of_diff;
  j["mse_vs_benchmark"] = d.mse_vs_benchmark;
  j["residual"] = d.residual;
  j["iterations"] = d.iterations;
  j["condition_warning"] = d.condition_warning;
  j["rcond"] = d.rcond;
  j["coefficients"] = std::vector<double>(solution.b_x.data(),
                                          solution.b_x.data() + solution.b_x.size());
  return j.dump(2);
}

ProcessModel model_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::parse, std::string("model JSON: ") + e.what());
  }
  std::vector<double> ar, ma;
  if (j.contains("ar")) ar = j["ar"].get<std::vector<double>>();
  if (j.contains("ma")) ma = j["ma"].get<std::vector<double>>();
  const double sigma = j.value("sigma", 1.0);
  if (ar.empty() && ma.empty()) return ProcessModel::white_noise(sigma);
  return ProcessModel::arma(std::move(ar), std::move(ma), sigma);
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::io, "cannot write " + path);
  out << text;
}

}  // namespace ssa
