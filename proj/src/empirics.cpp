#include "ssa/empirics.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <thread>

#include "ssa/core.hpp"

namespace ssa {

GeneratorSpec GeneratorSpec::gaussian() { return {}; }

GeneratorSpec GeneratorSpec::student(double df) {
  GeneratorSpec g;
  g.kind = Kind::t_wn;
  g.df = df;
  return g;
}

GeneratorSpec GeneratorSpec::ar1(double a) {
  GeneratorSpec g;
  g.kind = Kind::ar1;
  g.a = a;
  return g;
}

GeneratorSpec GeneratorSpec::arima(ProcessModel model, int d) {
  GeneratorSpec g;
  g.kind = Kind::arima;
  g.model = std::move(model);
  g.d = d;
  return g;
}

std::string GeneratorSpec::name() const {
  switch (kind) {
    case Kind::gaussian_wn: return "gaussian";
    case Kind::t_wn: {
      std::ostringstream os;
      os << "t(df=" << df << ")";
      return os.str();
    }
    case Kind::ar1: {
      std::ostringstream os;
      os << "ar1(" << a << ")";
      return os.str();
    }
    case Kind::arima: {
      std::ostringstream os;
      os << "arima(d=" << d << ")";
      return os.str();
    }
  }
  return "?";
}

Vec generate(const GeneratorSpec& spec, int n, std::uint64_t seed) {
  if (n < 1) throw Error(ErrorCode::invalid_dimension, "need n >= 1");
  Rng rng(seed);
  Vec x(n);
  switch (spec.kind) {
    case GeneratorSpec::Kind::gaussian_wn:
      for (int t = 0; t < n; ++t) x(t) = rng.normal();
      break;
    case GeneratorSpec::Kind::t_wn:
      if (spec.df <= 2.0)
        throw Error(ErrorCode::domain, "t noise needs df > 2 for finite variance");
      for (int t = 0; t < n; ++t) x(t) = rng.student_t_unit(spec.df);
      break;
    case GeneratorSpec::Kind::ar1: {
      if (!(std::abs(spec.a) < 1.0))
        throw Error(ErrorCode::invalid_model, "|a| < 1 required for AR(1)");
      // Stationary start, so no burn-in is needed.
      x(0) = rng.normal() / std::sqrt(1.0 - spec.a * spec.a);
      for (int t = 1; t < n; ++t) x(t) = spec.a * x(t - 1) + rng.normal();
      break;
    }
    case GeneratorSpec::Kind::arima: {
      const int p = static_cast<int>(spec.model.ar.size());
      const int q = static_cast<int>(spec.model.ma.size());
      const int burn = 5000 + 10 * (p + q);
      std::vector<double> eps(q, 0.0);
      std::vector<double> xs(p, 0.0);
      Vec u(n);
      for (int t = -burn; t < n; ++t) {
        const double e = rng.normal() * spec.model.sigma;
        double v = e;
        for (int i = 0; i < p; ++i) v += spec.model.ar[i] * xs[i];
        for (int j = 0; j < q; ++j) v += spec.model.ma[j] * eps[j];
        for (int j = q - 1; j > 0; --j) eps[j] = eps[j - 1];
        if (q > 0) eps[0] = e;
        for (int i = p - 1; i > 0; --i) xs[i] = xs[i - 1];
        if (p > 0) xs[0] = v;
        if (t >= 0) u(t) = v;
      }
      for (int j = 0; j < spec.d; ++j) {
        double acc = 0.0;
        for (int t = 0; t < n; ++t) u(t) = acc += u(t);
      }
      x = u;
      break;
    }
  }
  return x;
}

Vec apply_filter(const Vec& b, const Vec& series) {
  const int L = static_cast<int>(b.size());
  const int n = static_cast<int>(series.size());
  if (n < L) throw Error(ErrorCode::insufficient_data, "series shorter than filter");
  Vec out(n - L + 1);
  for (int t = L - 1; t < n; ++t) {
    double acc = 0.0;
    for (int k = 0; k < L; ++k) acc += b(k) * series(t - k);
    out(t - L + 1) = acc;
  }
  return out;
}

Vec apply_two_sided(const TargetSpec& target, const Vec& series) {
  const int span = static_cast<int>(target.gamma.size());
  const int n = static_cast<int>(series.size());
  if (n < span) throw Error(ErrorCode::insufficient_data, "series shorter than target span");
  Vec out(n - span + 1);
  for (int j = 0; j < out.size(); ++j) {
    const int t = j + target.max_lag();
    double acc = 0.0;
    for (int i = 0; i < span; ++i) acc += target.gamma(i) * series(t - (target.min_lag + i));
    out(j) = acc;
  }
  return out;
}

std::vector<int> sign_crossings(const Vec& series) {
  std::vector<int> out;
  const int n = static_cast<int>(series.size());
  int prev = 0;
  for (int t = 0; t < n; ++t) {
    int s = series(t) > 0.0 ? 1 : (series(t) < 0.0 ? -1 : prev);
    if (prev != 0 && s != 0 && s != prev) out.push_back(t - 1);
    if (s != 0) prev = s;
  }
  return out;
}

std::optional<double> empirical_holding_time(const Vec& series) {
  if (series.size() < 2)
    throw Error(ErrorCode::insufficient_data, "need at least two observations");
  const std::vector<int> cross = sign_crossings(series);
  if (cross.size() < 2) return std::nullopt;
  return static_cast<double>(cross.back() - cross.front()) /
         static_cast<double>(cross.size() - 1);
}

double sample_acf1(const Vec& series) {
  const int n = static_cast<int>(series.size());
  if (n < 2) throw Error(ErrorCode::insufficient_data, "need at least two observations");
  const double mean = series.mean();
  double num = 0.0, den = 0.0;
  for (int t = 0; t < n; ++t) {
    const double c = series(t) - mean;
    den += c * c;
    if (t + 1 < n) num += c * (series(t + 1) - mean);
  }
  return num / den;
}

double sample_mse(const Vec& series, const Vec& reference) {
  if (series.size() != reference.size())
    throw Error(ErrorCode::invalid_dimension, "length mismatch");
  return (series - reference).squaredNorm() / series.size();
}

SignAccuracyResult sample_sign_accuracy(const Vec& y, const Vec& z) {
  if (y.size() != z.size()) throw Error(ErrorCode::invalid_dimension, "length mismatch");
  SignAccuracyResult r;
  long hits = 0, effective = 0;
  for (int t = 0; t < y.size(); ++t) {
    const double p = y(t) * z(t);
    if (p == 0.0) {
      ++r.ties;
      continue;
    }
    ++effective;
    if (p > 0.0) ++hits;
  }
  r.accuracy = effective > 0 ? static_cast<double>(hits) / effective : 0.0;
  return r;
}

SeriesDiagnostics diagnose(const Vec& series, const Vec* reference) {
  SeriesDiagnostics d;
  d.sample_acf1 = sample_acf1(series);
  d.crossings = sign_crossings(series);
  d.sample_ht = empirical_holding_time(series);
  if (reference) {
    d.sample_mse = sample_mse(series, *reference);
    d.sample_sign_accuracy = sample_sign_accuracy(series, *reference).accuracy;
  }
  return d;
}

int max_threads() {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw < 1) hw = 1;
  if (const char* env = std::getenv("SSA_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1) hw = std::min(hw, cap);
  }
  return hw;
}

std::string HeavyTailTable::to_csv() const {
  std::ostringstream os;
  os << "# rng=" << rng_algorithm << " seed=" << seed << " n=" << n << "\n";
  os << "distribution";
  for (const auto& f : filter_names) os << "," << f;
  os << "\n";
  os.precision(6);
  for (std::size_t r = 0; r < row_names.size(); ++r) {
    os << row_names[r];
    for (double v : ht[r]) os << "," << v;
    os << "\n";
  }
  return os.str();
}

HeavyTailTable heavy_tail_experiment(const std::vector<Vec>& filters,
                                     const std::vector<std::string>& filter_names,
                                     const std::vector<double>& dfs, int n,
                                     std::uint64_t seed) {
  if (filters.size() != filter_names.size())
    throw Error(ErrorCode::invalid_dimension, "one name per filter required");
  // validate up front so generator errors never escape a worker thread
  for (double df : dfs)
    if (df <= 2.0)
      throw Error(ErrorCode::domain, "t noise needs df > 2 for finite variance");
  HeavyTailTable table;
  table.filter_names = filter_names;
  table.rng_algorithm = kRngAlgorithm;
  table.seed = seed;
  table.n = n;
  if (filters.empty()) return table;

  const int n_dist = static_cast<int>(dfs.size()) + 1;  // t rows plus gaussian
  table.ht.assign(n_dist + 1, std::vector<double>(filters.size(), 0.0));
  for (int r = 0; r < n_dist; ++r) {
    const bool gaussian = r == static_cast<int>(dfs.size());
    std::ostringstream name;
    if (gaussian)
      name << "gaussian";
    else
      name << "t(df=" << dfs[r] << ")";
    table.row_names.push_back(name.str());
  }
  table.row_names.push_back("theoretical");

  auto run_row = [&](int r) {
    const bool gaussian = r == static_cast<int>(dfs.size());
    const GeneratorSpec spec =
        gaussian ? GeneratorSpec::gaussian() : GeneratorSpec::student(dfs[r]);
    Rng stream = Rng::stream(seed, static_cast<std::uint64_t>(r));
    const Vec noise = generate(spec, n, stream.next_u64());
    for (std::size_t f = 0; f < filters.size(); ++f) {
      const auto ht = empirical_holding_time(apply_filter(filters[f], noise));
      table.ht[r][f] = ht.value_or(std::numeric_limits<double>::quiet_NaN());
    }
  };

  const int workers = std::min(max_threads(), n_dist);
  if (workers <= 1) {
    for (int r = 0; r < n_dist; ++r) run_row(r);
  } else {
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (int r = next.fetch_add(1); r < n_dist; r = next.fetch_add(1)) run_row(r);
      });
    for (auto& th : pool) th.join();
  }

  for (std::size_t f = 0; f < filters.size(); ++f)
    table.ht[n_dist][f] = ht_from_rho(acf1(filters[f]));
  return table;
}

}  // namespace ssa
