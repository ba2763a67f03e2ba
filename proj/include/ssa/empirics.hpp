#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ssa/rng.hpp"
#include "ssa/stationary.hpp"
#include "ssa/targets.hpp"

namespace ssa {

struct GeneratorSpec {
  enum class Kind { gaussian_wn, t_wn, ar1, arima } kind = Kind::gaussian_wn;
  double df = 0.0;     // t_wn
  double a = 0.0;      // ar1
  ProcessModel model;  // arima
  int d = 0;           // arima integration order

  static GeneratorSpec gaussian();
  static GeneratorSpec student(double df);
  static GeneratorSpec ar1(double a);
  static GeneratorSpec arima(ProcessModel model, int d);
  std::string name() const;
};

Vec generate(const GeneratorSpec& spec, int n, std::uint64_t seed);

// Causal convolution; output j corresponds to input index j + L - 1.
Vec apply_filter(const Vec& b, const Vec& series);

// Two-sided filter output; entry j corresponds to input index j + max_lag.
// Output length is n - (span - 1).
Vec apply_two_sided(const TargetSpec& target, const Vec& series);

// Mean gap between consecutive sign changes; exact zeros inherit the previous
// sign. Empty optional when fewer than two crossings occur.
std::optional<double> empirical_holding_time(const Vec& series);

// Indices t with sign(y_t) != sign(y_{t+1}) under the zero-inheritance rule.
std::vector<int> sign_crossings(const Vec& series);

double sample_acf1(const Vec& series);
double sample_mse(const Vec& series, const Vec& reference);

struct SignAccuracyResult {
  double accuracy = 0.0;
  int ties = 0;
};
SignAccuracyResult sample_sign_accuracy(const Vec& y, const Vec& z);

// Sample summary of a filtered series, optionally against an aligned
// reference series.
struct SeriesDiagnostics {
  double sample_acf1 = 0.0;
  std::optional<double> sample_ht;  // empty when fewer than two crossings
  std::vector<int> crossings;
  std::optional<double> sample_mse;
  std::optional<double> sample_sign_accuracy;
};

SeriesDiagnostics diagnose(const Vec& series, const Vec* reference = nullptr);

struct HeavyTailTable {
  std::vector<std::string> filter_names;
  std::vector<std::string> row_names;          // one per distribution + theoretical
  std::vector<std::vector<double>> ht;         // row-major [row][filter]
  std::string rng_algorithm;
  std::uint64_t seed = 0;
  int n = 0;

  std::string to_csv() const;
};

// Empirical holding times of each filter under Gaussian and t-distributed
// white noise, with the Gaussian-theory values as the last row. Distributions
// run on independent derived streams, optionally in parallel (capped by the
// SSA_THREADS environment variable).
HeavyTailTable heavy_tail_experiment(const std::vector<Vec>& filters,
                                     const std::vector<std::string>& filter_names,
                                     const std::vector<double>& dfs, int n,
                                     std::uint64_t seed);

int max_threads();

}  // namespace ssa
