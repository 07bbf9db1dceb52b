#ifndef REVCONF_STATS_HPP
#define REVCONF_STATS_HPP

#include <span>
#include <string>
#include <vector>

namespace revconf::stats {

// ---------------------------------------------------------------------------
// Special functions
// ---------------------------------------------------------------------------

double normal_cdf(double x);
// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double incomplete_beta(double a, double b, double x);
// Two-sided p for a t statistic with df degrees of freedom.
double student_t_two_sided_p(double t, double df);

// ---------------------------------------------------------------------------
// Ranking
// ---------------------------------------------------------------------------

// Average ranks (1-based); tied values share the mean of their positions.
std::vector<double> average_ranks(std::span<const double> values);
// Sum of t^3 - t over tie groups, the tie-correction term.
double tie_correction(std::span<const double> values);

// ---------------------------------------------------------------------------
// Spearman rank correlation
// ---------------------------------------------------------------------------

struct SpearmanResult {
  double rho = 0.0;
  double p_value = 1.0;
  bool defined = false;  // false when either vector is constant
  bool exact = false;    // p from exact permutation enumeration
  std::size_t n = 0;
};

// rho = Pearson correlation of average ranks. p two-sided: exact permutation
// enumeration for n <= kSpearmanExactLimit, t-approximation with n-2 degrees
// of freedom otherwise.
inline constexpr std::size_t kSpearmanExactLimit = 12;
SpearmanResult spearman(std::span<const double> x, std::span<const double> y);

// ---------------------------------------------------------------------------
// Mann-Whitney U
// ---------------------------------------------------------------------------

struct MannWhitneyResult {
  double u = 0.0;        // U statistic of the first sample
  double p_value = 1.0;  // two-sided
  bool exact = false;
};

// U from rank sums with average-rank ties. Exact p for pooled size <= 12 by
// enumeration of all labelings, as the probability of a deviation
// |U' - n1*n2/2| at least as large as observed; otherwise normal
// approximation with tie-corrected variance and continuity correction.
MannWhitneyResult mann_whitney_u(std::span<const double> a,
                                 std::span<const double> b);

// ---------------------------------------------------------------------------
// Binary logistic regression by iteratively reweighted least squares
// ---------------------------------------------------------------------------

struct LogisticData {
  std::vector<std::string> names;       // one per design column
  std::vector<std::vector<double>> x;   // rows; each row has names.size() values
  std::vector<int> y;                   // 0/1, same length as x
};

struct LogisticFit {
  std::vector<std::string> names;       // fitted columns (dropped ones removed)
  std::vector<double> coef;
  std::vector<double> std_err;
  std::vector<double> z_value;
  std::vector<double> p_value;          // two-sided Wald
  std::vector<double> ci_low, ci_high;  // 95% Wald interval
  double log_likelihood = 0.0;
  int iterations = 0;
  bool converged = false;
  bool separation = false;              // diverging weights detected
  double grad_max_norm = 0.0;
  std::vector<std::string> dropped;     // all-zero columns removed pre-fit
};

struct LogisticOptions {
  int max_iterations = 100;
  double grad_tolerance = 1e-9;
  double separation_bound = 30.0;  // |coef| beyond this flags separation
};

// Maximum-likelihood fit; standard errors from the inverse observed
// information. Throws AnalyticsError when y has a single class or the design
// is rank deficient (the error names the collinear column).
LogisticFit logistic_fit(const LogisticData& data,
                         const LogisticOptions& options = {});

// Log-likelihood and its gradient for externally chosen coefficients; used
// by diagnostics and tests.
double logistic_log_likelihood(const LogisticData& data,
                               std::span<const double> coef);
std::vector<double> logistic_gradient(const LogisticData& data,
                                      std::span<const double> coef);

}  // namespace revconf::stats

#endif  // REVCONF_STATS_HPP
