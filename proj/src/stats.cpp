#include "revconf/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>

#include "revconf/errors.hpp"

namespace revconf::stats {

namespace {

constexpr double kZ975 = 1.959963984540054;  // Phi^-1(0.975)

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  double e = std::exp(x);
  return e / (1.0 + e);
}

// log(1 + exp(x)) without overflow
double log1pexp(double x) {
  if (x > 0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

}  // namespace

// ---------------------------------------------------------------------------
// Special functions
// ---------------------------------------------------------------------------

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

namespace {

// Continued fraction for the incomplete beta, modified Lentz algorithm.
double beta_cont_frac(double a, double b, double x) {
  constexpr int kMaxIter = 300;
  constexpr double kEps = 3e-16;
  constexpr double kFpMin = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kFpMin) d = kFpMin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_front = std::lgamma(a + b) - std::lgamma(a) -
                          std::lgamma(b) + a * std::log(x) +
                          b * std::log1p(-x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_cont_frac(a, b, x) / a;
  return 1.0 - front * beta_cont_frac(b, a, 1.0 - x) / b;
}

double student_t_two_sided_p(double t, double df) {
  if (!std::isfinite(t)) return 0.0;
  if (df <= 0) return 1.0;
  const double x = df / (df + t * t);
  double p = incomplete_beta(df / 2.0, 0.5, x);
  return std::clamp(p, 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// Ranking
// ---------------------------------------------------------------------------

std::vector<double> average_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double avg = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

double tie_correction(std::span<const double> values) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  double total = 0.0;
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t j = i;
    while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
    const double t = static_cast<double>(j - i + 1);
    total += t * t * t - t;
    i = j + 1;
  }
  return total;
}

// ---------------------------------------------------------------------------
// Spearman
// ---------------------------------------------------------------------------

namespace {

bool is_constant(std::span<const double> v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] != v[0]) return false;
  return true;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  return sxy / std::sqrt(sxx * syy);
}

// Exact two-sided permutation p: fraction of distinct arrangements of the
// y-ranks whose |rho| reaches the observed one. Enumerating distinct
// arrangements is sound with ties because every arrangement of a multiset
// stands for the same number of underlying permutations.
double spearman_exact_p(const std::vector<double>& rx, std::vector<double> ry,
                        double rho_obs) {
  const std::size_t n = rx.size();
  const double dn = static_cast<double>(n);
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= dn;
  my /= dn;
  double sxx = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  const double denom = std::sqrt(sxx * syy);
  const double center = dn * mx * my;
  const double target = std::fabs(rho_obs) - 1e-12;

  std::sort(ry.begin(), ry.end());
  long long hits = 0, total = 0;
  do {
    double dot = 0;
    for (std::size_t i = 0; i < n; ++i) dot += rx[i] * ry[i];
    const double rho = (dot - center) / denom;
    if (std::fabs(rho) >= target) ++hits;
    ++total;
  } while (std::next_permutation(ry.begin(), ry.end()));
  return static_cast<double>(hits) / static_cast<double>(total);
}

}  // namespace

SpearmanResult spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw AnalyticsError("spearman: size mismatch (" + std::to_string(x.size()) +
                         " vs " + std::to_string(y.size()) + ")");
  if (x.size() < 3)
    throw AnalyticsError("spearman: need at least 3 observations, got " +
                         std::to_string(x.size()));

  SpearmanResult result;
  result.n = x.size();
  if (is_constant(x) || is_constant(y)) {
    result.defined = false;
    result.rho = std::numeric_limits<double>::quiet_NaN();
    result.p_value = std::numeric_limits<double>::quiet_NaN();
    return result;
  }
  result.defined = true;

  const std::vector<double> rx = average_ranks(x);
  const std::vector<double> ry = average_ranks(y);
  result.rho = pearson(rx, ry);

  if (x.size() <= kSpearmanExactLimit) {
    result.exact = true;
    result.p_value = spearman_exact_p(rx, ry, result.rho);
    return result;
  }
  const double n = static_cast<double>(x.size());
  const double r2 = result.rho * result.rho;
  if (r2 >= 1.0) {
    result.p_value = 0.0;
    return result;
  }
  const double t = result.rho * std::sqrt((n - 2.0) / (1.0 - r2));
  result.p_value = student_t_two_sided_p(t, n - 2.0);
  return result;
}

// ---------------------------------------------------------------------------
// Mann-Whitney U
// ---------------------------------------------------------------------------

namespace {

// Exact two-sided p over all C(N, n1) labelings via a subset-count dynamic
// program on doubled ranks (average ranks are half-integers).
double mann_whitney_exact_p(const std::vector<double>& pooled_ranks,
                            std::size_t n1, double u_obs) {
  const std::size_t n = pooled_ranks.size();
  const std::size_t n2 = n - n1;
  std::vector<long long> scaled(n);
  long long total_scaled = 0;
  for (std::size_t i = 0; i < n; ++i) {
    scaled[i] = std::llround(2.0 * pooled_ranks[i]);
    total_scaled += scaled[i];
  }
  // ways[k][s]: subsets of size k with doubled-rank sum s
  const std::size_t max_sum = static_cast<std::size_t>(total_scaled);
  std::vector<std::vector<double>> ways(
      n1 + 1, std::vector<double>(max_sum + 1, 0.0));
  ways[0][0] = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t limit = std::min(i + 1, n1);
    for (std::size_t k = limit; k >= 1; --k) {
      const auto s_item = static_cast<std::size_t>(scaled[i]);
      for (std::size_t s = max_sum; s >= s_item; --s) {
        if (ways[k - 1][s - s_item] > 0.0)
          ways[k][s] += ways[k - 1][s - s_item];
      }
    }
  }

  const double mu = static_cast<double>(n1) * static_cast<double>(n2) / 2.0;
  const double dev_obs = std::fabs(u_obs - mu) - 1e-9;
  double hits = 0.0, total = 0.0;
  const double offset = static_cast<double>(n1) * static_cast<double>(n1 + 1) / 2.0;
  for (std::size_t s = 0; s <= max_sum; ++s) {
    if (ways[n1][s] == 0.0) continue;
    const double u = static_cast<double>(s) / 2.0 - offset;
    total += ways[n1][s];
    if (std::fabs(u - mu) >= dev_obs) hits += ways[n1][s];
  }
  return hits / total;
}

}  // namespace

MannWhitneyResult mann_whitney_u(std::span<const double> a,
                                 std::span<const double> b) {
  if (a.empty() || b.empty())
    throw AnalyticsError("mann_whitney_u: both samples must be non-empty");

  const std::size_t n1 = a.size(), n2 = b.size();
  std::vector<double> pooled;
  pooled.reserve(n1 + n2);
  pooled.insert(pooled.end(), a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  const std::vector<double> ranks = average_ranks(pooled);

  double r1 = 0;
  for (std::size_t i = 0; i < n1; ++i) r1 += ranks[i];
  const double u1 = r1 - static_cast<double>(n1) * static_cast<double>(n1 + 1) / 2.0;

  MannWhitneyResult result;
  result.u = u1;

  if (n1 + n2 <= 12) {
    result.exact = true;
    result.p_value = mann_whitney_exact_p(ranks, n1, u1);
    return result;
  }

  const double n1d = static_cast<double>(n1), n2d = static_cast<double>(n2);
  const double nd = n1d + n2d;
  const double mu = n1d * n2d / 2.0;
  const double tie_term = tie_correction(pooled) / (nd * (nd - 1.0));
  const double var = n1d * n2d / 12.0 * ((nd + 1.0) - tie_term);
  if (var <= 0.0) {  // every pooled value identical
    result.p_value = 1.0;
    return result;
  }
  const double dev = std::max(0.0, std::fabs(u1 - mu) - 0.5);
  const double z = dev / std::sqrt(var);
  result.p_value = std::clamp(std::erfc(z / std::sqrt(2.0)), 0.0, 1.0);
  return result;
}

// ---------------------------------------------------------------------------
// Logistic regression (IRLS)
// ---------------------------------------------------------------------------

namespace {

// Cholesky factorization of a symmetric matrix stored row-major; returns the
// index of the first non-positive pivot, or -1 on success.
int cholesky_factor(std::vector<double>& m, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    double d = m[j * n + j];
    for (std::size_t k = 0; k < j; ++k) d -= m[j * n + k] * m[j * n + k];
    if (d <= 1e-12) return static_cast<int>(j);
    const double root = std::sqrt(d);
    m[j * n + j] = root;
    for (std::size_t i = j + 1; i < n; ++i) {
      double v = m[i * n + j];
      for (std::size_t k = 0; k < j; ++k) v -= m[i * n + k] * m[j * n + k];
      m[i * n + j] = v / root;
    }
  }
  return -1;
}

// Solve L L^T x = rhs given the factor from cholesky_factor.
std::vector<double> cholesky_solve(const std::vector<double>& l, std::size_t n,
                                   std::span<const double> rhs) {
  std::vector<double> x(rhs.begin(), rhs.end());
  for (std::size_t i = 0; i < n; ++i) {
    double v = x[i];
    for (std::size_t k = 0; k < i; ++k) v -= l[i * n + k] * x[k];
    x[i] = v / l[i * n + i];
  }
  for (std::size_t ii = n; ii-- > 0;) {
    double v = x[ii];
    for (std::size_t k = ii + 1; k < n; ++k) v -= l[k * n + ii] * x[k];
    x[ii] = v / l[ii * n + ii];
  }
  return x;
}

// Inverse from the Cholesky factor, column by column.
std::vector<double> cholesky_inverse(const std::vector<double>& l,
                                     std::size_t n) {
  std::vector<double> inv(n * n, 0.0);
  std::vector<double> e(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    std::fill(e.begin(), e.end(), 0.0);
    e[j] = 1.0;
    const std::vector<double> col = cholesky_solve(l, n, e);
    for (std::size_t i = 0; i < n; ++i) inv[i * n + j] = col[i];
  }
  return inv;
}

}  // namespace

double logistic_log_likelihood(const LogisticData& data,
                               std::span<const double> coef) {
  double ll = 0.0;
  for (std::size_t i = 0; i < data.x.size(); ++i) {
    double eta = 0.0;
    for (std::size_t j = 0; j < coef.size(); ++j)
      eta += data.x[i][j] * coef[j];
    ll += data.y[i] * eta - log1pexp(eta);
  }
  return ll;
}

std::vector<double> logistic_gradient(const LogisticData& data,
                                      std::span<const double> coef) {
  std::vector<double> grad(coef.size(), 0.0);
  for (std::size_t i = 0; i < data.x.size(); ++i) {
    double eta = 0.0;
    for (std::size_t j = 0; j < coef.size(); ++j)
      eta += data.x[i][j] * coef[j];
    const double resid = data.y[i] - sigmoid(eta);
    for (std::size_t j = 0; j < coef.size(); ++j)
      grad[j] += data.x[i][j] * resid;
  }
  return grad;
}

LogisticFit logistic_fit(const LogisticData& data,
                         const LogisticOptions& options) {
  const std::size_t rows = data.x.size();
  if (rows == 0) throw AnalyticsError("logistic_fit: no rows");
  if (data.y.size() != rows)
    throw AnalyticsError("logistic_fit: x/y size mismatch");
  for (const auto& row : data.x)
    if (row.size() != data.names.size())
      throw AnalyticsError("logistic_fit: ragged design matrix");

  long ones = std::accumulate(data.y.begin(), data.y.end(), 0L);
  if (ones == 0 || ones == static_cast<long>(rows))
    throw AnalyticsError(
        "logistic_fit: outcome has a single class; both classes required");

  // drop all-zero columns up front
  LogisticFit fit;
  std::vector<std::size_t> keep;
  for (std::size_t j = 0; j < data.names.size(); ++j) {
    bool all_zero = true;
    for (std::size_t i = 0; i < rows && all_zero; ++i)
      if (data.x[i][j] != 0.0) all_zero = false;
    if (all_zero)
      fit.dropped.push_back(data.names[j]);
    else
      keep.push_back(j);
  }
  const std::size_t p = keep.size();
  if (p == 0) throw AnalyticsError("logistic_fit: all design columns are zero");

  LogisticData d;
  d.names.reserve(p);
  for (std::size_t j : keep) d.names.push_back(data.names[j]);
  d.x.reserve(rows);
  for (const auto& row : data.x) {
    std::vector<double> r(p);
    for (std::size_t j = 0; j < p; ++j) r[j] = row[keep[j]];
    d.x.push_back(std::move(r));
  }
  d.y = data.y;

  // rank check on X'X before iterating, to name the collinear column
  {
    std::vector<double> xtx(p * p, 0.0);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t a = 0; a < p; ++a)
        for (std::size_t b = 0; b <= a; ++b)
          xtx[a * p + b] += d.x[i][a] * d.x[i][b];
    for (std::size_t a = 0; a < p; ++a)
      for (std::size_t b = a + 1; b < p; ++b) xtx[a * p + b] = xtx[b * p + a];
    const int bad = cholesky_factor(xtx, p);
    if (bad >= 0)
      throw AnalyticsError(
          "logistic_fit: design matrix rank deficient; column \"" +
          d.names[static_cast<std::size_t>(bad)] +
          "\" is collinear with earlier columns");
  }

  std::vector<double> coef(p, 0.0);
  double ll = logistic_log_likelihood(d, coef);
  std::vector<double> hessian(p * p, 0.0);
  int iter = 0;

  for (iter = 1; iter <= options.max_iterations; ++iter) {
    std::vector<double> grad(p, 0.0);
    std::fill(hessian.begin(), hessian.end(), 0.0);
    for (std::size_t i = 0; i < rows; ++i) {
      double eta = 0.0;
      for (std::size_t j = 0; j < p; ++j) eta += d.x[i][j] * coef[j];
      const double mu = sigmoid(eta);
      const double w = std::max(mu * (1.0 - mu), 1e-10);
      const double resid = d.y[i] - mu;
      for (std::size_t a = 0; a < p; ++a) {
        grad[a] += d.x[i][a] * resid;
        for (std::size_t b = 0; b <= a; ++b)
          hessian[a * p + b] += w * d.x[i][a] * d.x[i][b];
      }
    }
    for (std::size_t a = 0; a < p; ++a)
      for (std::size_t b = a + 1; b < p; ++b)
        hessian[a * p + b] = hessian[b * p + a];

    double grad_max = 0.0;
    for (double g : grad) grad_max = std::max(grad_max, std::fabs(g));
    fit.grad_max_norm = grad_max;
    if (grad_max < options.grad_tolerance) {
      fit.converged = true;
      break;
    }

    std::vector<double> factor = hessian;
    if (cholesky_factor(factor, p) >= 0) {
      // weights collapsed; treat as separation
      fit.separation = true;
      break;
    }
    const std::vector<double> delta = cholesky_solve(factor, p, grad);

    // step-halving keeps the likelihood non-decreasing
    double step = 1.0;
    std::vector<double> proposal(p);
    double ll_new = ll;
    for (int h = 0; h < 30; ++h) {
      for (std::size_t j = 0; j < p; ++j)
        proposal[j] = coef[j] + step * delta[j];
      ll_new = logistic_log_likelihood(d, proposal);
      if (ll_new >= ll - 1e-12) break;
      step /= 2.0;
    }
    coef = proposal;
    ll = ll_new;

    double coef_max = 0.0;
    for (double c : coef) coef_max = std::max(coef_max, std::fabs(c));
    if (coef_max > options.separation_bound) {
      fit.separation = true;
      break;
    }
  }
  fit.iterations = std::min(iter, options.max_iterations);

  // final gradient and information at the returned coefficients
  {
    const std::vector<double> grad = logistic_gradient(d, coef);
    double grad_max = 0.0;
    for (double g : grad) grad_max = std::max(grad_max, std::fabs(g));
    fit.grad_max_norm = grad_max;
    if (!fit.separation && grad_max < 1e-6) fit.converged = true;

    std::fill(hessian.begin(), hessian.end(), 0.0);
    for (std::size_t i = 0; i < rows; ++i) {
      double eta = 0.0;
      for (std::size_t j = 0; j < p; ++j) eta += d.x[i][j] * coef[j];
      const double mu = sigmoid(eta);
      const double w = std::max(mu * (1.0 - mu), 1e-10);
      for (std::size_t a = 0; a < p; ++a)
        for (std::size_t b = 0; b <= a; ++b)
          hessian[a * p + b] += w * d.x[i][a] * d.x[i][b];
    }
    for (std::size_t a = 0; a < p; ++a)
      for (std::size_t b = a + 1; b < p; ++b)
        hessian[a * p + b] = hessian[b * p + a];
  }

  std::vector<double> factor = hessian;
  std::vector<double> cov;
  if (cholesky_factor(factor, p) < 0) {
    cov = cholesky_inverse(factor, p);
  } else {
    cov.assign(p * p, std::numeric_limits<double>::quiet_NaN());
  }

  fit.names = d.names;
  fit.coef = coef;
  fit.log_likelihood = logistic_log_likelihood(d, coef);
  fit.std_err.resize(p);
  fit.z_value.resize(p);
  fit.p_value.resize(p);
  fit.ci_low.resize(p);
  fit.ci_high.resize(p);
  for (std::size_t j = 0; j < p; ++j) {
    const double se = std::sqrt(cov[j * p + j]);
    fit.std_err[j] = se;
    fit.z_value[j] = coef[j] / se;
    fit.p_value[j] =
        std::clamp(std::erfc(std::fabs(fit.z_value[j]) / std::sqrt(2.0)), 0.0, 1.0);
    fit.ci_low[j] = coef[j] - kZ975 * se;
    fit.ci_high[j] = coef[j] + kZ975 * se;
  }
  return fit;
}

}  // namespace revconf::stats
