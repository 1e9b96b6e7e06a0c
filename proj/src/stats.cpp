#include "swarmfredy/stats.hpp"

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <map>
#include <numeric>

namespace swarmfredy::stats {

std::vector<double> average_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && values[idx[j + 1]] == values[idx[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t t = i; t <= j; ++t) ranks[idx[t]] = avg;
    i = j + 1;
  }
  return ranks;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double kolmogorov_q(double lambda) {
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * j * j * lambda * lambda);
    sum += sign * term;
    if (term < 1e-16) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_normality(std::span<const double> sample) {
  const std::size_t n = sample.size();
  if (n < 5) throw std::invalid_argument("KS normality test needs at least 5 values");
  const double mean = std::accumulate(sample.begin(), sample.end(), 0.0) / static_cast<double>(n);
  double ss = 0.0;
  for (double x : sample) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  if (!(sd > 0.0)) throw DegenerateSample("sample has zero standard deviation");

  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  double d = 0.0;
  const double nn = static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double f = normal_cdf((sorted[i] - mean) / sd);
    d = std::max({d, (static_cast<double>(i) + 1.0) / nn - f, f - static_cast<double>(i) / nn});
  }
  const double rn = std::sqrt(nn);
  return {d, kolmogorov_q((rn + 0.12 + 0.11 / rn) * d)};
}

void check_matrix(const ResultMatrix& m) {
  if (m.methods.size() < 2) throw std::invalid_argument("result matrix needs at least 2 methods");
  if (m.blocks.size() < 2) throw std::invalid_argument("result matrix needs at least 2 blocks");
  if (m.values.size() != m.blocks.size()) throw std::invalid_argument("result matrix row count mismatch");
  for (const auto& row : m.values) {
    if (row.size() != m.methods.size()) throw std::invalid_argument("result matrix has missing cells");
    for (double v : row) {
      if (!std::isfinite(v)) throw std::invalid_argument("result matrix has non-finite cells");
    }
  }
}

FriedmanResult aligned_friedman(const ResultMatrix& m, Direction direction) {
  check_matrix(m);
  const std::size_t k = m.methods.size();
  const std::size_t n = m.blocks.size();

  std::vector<double> aligned;
  aligned.reserve(n * k);
  for (const auto& row : m.values) {
    const double mean = std::accumulate(row.begin(), row.end(), 0.0) / static_cast<double>(k);
    for (double v : row) aligned.push_back(v - mean);
  }
  const auto ranks = average_ranks(aligned);

  std::vector<double> method_sum(k, 0.0), block_sum(n, 0.0);
  for (std::size_t b = 0; b < n; ++b) {
    for (std::size_t j = 0; j < k; ++j) {
      method_sum[j] += ranks[b * k + j];
      block_sum[b] += ranks[b * k + j];
    }
  }

  const double kd = static_cast<double>(k);
  const double nd = static_cast<double>(n);
  const double kn = kd * nd;
  double sum_methods_sq = 0.0;
  for (double r : method_sum) sum_methods_sq += r * r;
  double sum_blocks_sq = 0.0;
  for (double r : block_sum) sum_blocks_sq += r * r;
  const double numerator = (kd - 1.0) * (sum_methods_sq - (kd * nd * nd / 4.0) * (kn + 1.0) * (kn + 1.0));
  const double denominator = kn * (kn + 1.0) * (2.0 * kn + 1.0) / 6.0 - sum_blocks_sq / kd;

  FriedmanResult res;
  res.rank_sums = method_sum;
  res.statistic = denominator > 0.0 ? std::max(0.0, numerator / denominator) : 0.0;
  boost::math::chi_squared chi(kd - 1.0);
  res.p_value = boost::math::cdf(boost::math::complement(chi, res.statistic));

  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return direction == Direction::HigherIsBetter ? method_sum[a] > method_sum[b] : method_sum[a] < method_sum[b];
  });
  for (std::size_t pos = 0; pos < k; ++pos) {
    const std::size_t j = order[pos];
    res.ranking.push_back({m.methods[j], static_cast<int>(pos + 1), method_sum[j] / nd});
  }
  return res;
}

WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("wilcoxon: samples must have equal length");
  if (a.size() < 6) throw std::invalid_argument("wilcoxon: needs at least 6 pairs");

  std::vector<double> diff;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) diff.push_back(a[i] - b[i]);
  }
  if (diff.empty()) throw AllTies();

  std::vector<double> mags(diff.size());
  std::transform(diff.begin(), diff.end(), mags.begin(), [](double d) { return std::fabs(d); });
  const auto ranks = average_ranks(mags);

  WilcoxonResult res;
  res.n = diff.size();
  for (std::size_t i = 0; i < diff.size(); ++i) (diff[i] > 0 ? res.w_plus : res.w_minus) += ranks[i];

  if (res.n <= 20) {
    // Average ranks are multiples of 1/2, so doubled ranks are integral.
    std::vector<int> doubled(res.n);
    for (std::size_t i = 0; i < res.n; ++i) doubled[i] = static_cast<int>(std::lround(2.0 * ranks[i]));
    const int total = std::accumulate(doubled.begin(), doubled.end(), 0);
    std::vector<double> ways(static_cast<std::size_t>(total) + 1, 0.0);
    ways[0] = 1.0;
    for (int r : doubled) {
      for (int s = total; s >= r; --s) ways[s] += ways[s - r];
    }
    const double all = std::ldexp(1.0, static_cast<int>(res.n));
    const int observed = static_cast<int>(std::lround(2.0 * res.w_plus));
    double ge = 0.0, le = 0.0;
    for (int s = 0; s <= total; ++s) {
      if (s >= observed) ge += ways[s];
      if (s <= observed) le += ways[s];
    }
    res.exact = true;
    res.p_greater = ge / all;
    res.p_less = le / all;
  } else {
    const double nd = static_cast<double>(res.n);
    const double mu = nd * (nd + 1.0) / 4.0;
    double tie = 0.0;
    std::map<double, int> groups;
    for (double r : ranks) ++groups[r];
    for (const auto& [r, t] : groups) tie += static_cast<double>(t) * t * t - t;
    const double sd = std::sqrt(nd * (nd + 1.0) * (2.0 * nd + 1.0) / 24.0 - tie / 48.0);
    res.p_greater = 1.0 - normal_cdf((res.w_plus - mu - 0.5) / sd);
    res.p_less = normal_cdf((res.w_plus - mu + 0.5) / sd);
  }
  res.p_two_sided = std::min(1.0, 2.0 * std::min(res.p_greater, res.p_less));
  return res;
}

}  // namespace swarmfredy::stats
