#pragma once

// Nonparametric tests used to compare congestion-control methods.

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace swarmfredy::stats {

class DegenerateSample : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

class AllTies : public std::invalid_argument {
public:
  AllTies() : std::invalid_argument("all paired differences are zero") {}
};

/// Ranks starting at 1, ties share their average rank.
std::vector<double> average_ranks(std::span<const double> values);

double normal_cdf(double z);

/// Asymptotic Kolmogorov survival function Q(lambda).
double kolmogorov_q(double lambda);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// One-sample KS distance to a normal fitted by sample mean and stdev
/// (Lilliefors setting) with the asymptotic Kolmogorov p-value.
/// Needs at least 5 values; throws DegenerateSample for zero spread.
KsResult ks_normality(std::span<const double> sample);

enum class Direction { HigherIsBetter, LowerIsBetter };

/// One aggregated value per (block, method); values[b][m].
struct ResultMatrix {
  std::vector<std::string> methods;
  std::vector<std::string> blocks;
  std::vector<std::vector<double>> values;
};

/// Throws std::invalid_argument on a malformed matrix.
void check_matrix(const ResultMatrix& matrix);

struct RankEntry {
  std::string method;
  int position = 0;
  double rank_value = 0.0;  // mean aligned rank; larger means larger values
};

struct FriedmanResult {
  std::vector<RankEntry> ranking;  // best first
  std::vector<double> rank_sums;   // per method, matrix order
  double statistic = 0.0;
  double p_value = 1.0;
};

/// Aligned Friedman ranks: remove each block's mean, rank all aligned values
/// jointly, and test the per-method rank sums against a chi-square with
/// (methods - 1) degrees of freedom.
FriedmanResult aligned_friedman(const ResultMatrix& matrix, Direction direction);

struct WilcoxonResult {
  std::size_t n = 0;      // non-zero differences
  double w_plus = 0.0;    // rank sum of a > b
  double w_minus = 0.0;
  double p_greater = 1.0; // H1: a tends to exceed b
  double p_less = 1.0;
  double p_two_sided = 1.0;
  bool exact = false;
};

/// Paired signed-rank test on a - b. Zero differences are dropped; exact
/// null distribution for n <= 20, normal approximation with tie and
/// continuity correction above. Requires equal lengths of at least 6.
WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b);

}  // namespace swarmfredy::stats
