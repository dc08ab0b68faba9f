#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

// Small statistics used by the test suites to compare empirical samples
// without pulling in a stats library.
namespace statutil {

// sup |F_n(x) - x| against the uniform law on [0,1]
inline double ks_uniform(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  double n = double(xs.size());
  double d = 0;
  for (size_t i = 0; i < xs.size(); ++i)
    d = std::max({d, xs[i] - i / n, (i + 1) / n - xs[i]});
  return d;
}

inline double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  size_t i = 0, j = 0;
  double d = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j])
      ++i;
    else
      ++j;
    d = std::max(d, std::abs(double(i) / a.size() - double(j) / b.size()));
  }
  return d;
}

// asymptotic 1% critical values
inline double ks_critical(size_t n) { return 1.628 / std::sqrt(double(n)); }
inline double ks2_critical(size_t n, size_t m) {
  return 1.628 * std::sqrt(double(n + m) / (double(n) * double(m)));
}

// 99th percentile of chi-squared via the Wilson-Hilferty cube approximation
inline double chi2_quantile99(int df) {
  const double z = 2.3263478740408408;
  double t = 1.0 - 2.0 / (9.0 * df) + z * std::sqrt(2.0 / (9.0 * df));
  return df * t * t * t;
}

// equal-size two-sample chi-squared statistic over bins; bins empty in both
// samples are dropped and df is reported through *df_out
inline double chi2_two_sample_equal(const std::vector<long>& o1, const std::vector<long>& o2,
                                    int* df_out) {
  double stat = 0;
  int used = 0;
  for (size_t i = 0; i < o1.size(); ++i) {
    double tot = double(o1[i] + o2[i]);
    if (tot == 0) continue;
    double diff = double(o1[i] - o2[i]);
    stat += diff * diff / tot;
    ++used;
  }
  *df_out = used - 1;
  return stat;
}

}  // namespace statutil
