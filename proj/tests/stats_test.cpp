#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "revconf/errors.hpp"
#include "revconf/stats.hpp"

using namespace revconf;

TEST_CASE("special functions match frozen external values") {
  // reference values computed with an independent scientific stack
  CHECK(stats::student_t_two_sided_p(2.0, 10) ==
        doctest::Approx(0.0733880347707404).epsilon(1e-12));
  CHECK(stats::student_t_two_sided_p(0.5, 3) ==
        doctest::Approx(0.651447964848151).epsilon(1e-12));
  CHECK(stats::student_t_two_sided_p(-1.7, 25) ==
        doctest::Approx(0.101541170485221).epsilon(1e-12));
  CHECK(stats::incomplete_beta(2.5, 3.5, 0.4) ==
        doctest::Approx(0.486904191526118).epsilon(1e-12));
  CHECK(stats::incomplete_beta(0.5, 0.5, 0.9) ==
        doctest::Approx(0.795167235300867).epsilon(1e-12));
  CHECK(stats::incomplete_beta(5, 1, 0.2) ==
        doctest::Approx(0.00032).epsilon(1e-12));
  CHECK(stats::normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(2.0 * (1.0 - stats::normal_cdf(1.96)) ==
        doctest::Approx(0.0499957902964409).epsilon(1e-10));
}

TEST_CASE("average ranks agree with pairwise-counting oracle") {
  oracle::Rng rng(12345);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = rng.uniform_int(1, 30);
    std::vector<double> v(n);
    for (auto& x : v) x = rng.uniform_int(0, 8);  // force ties
    const auto got = stats::average_ranks(v);
    const auto want = oracle::ranks(v);
    for (int i = 0; i < n; ++i) CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-12));
  }
}

TEST_CASE("spearman identity and antithesis") {
  const std::vector<double> x = {1, 2, 3, 4};
  auto r = stats::spearman(x, x);
  CHECK(r.defined);
  CHECK(r.rho == doctest::Approx(1.0).epsilon(1e-14));

  std::vector<double> neg = {-1, -2, -3, -4};
  auto rn = stats::spearman(x, neg);
  CHECK(rn.rho == doctest::Approx(-1.0).epsilon(1e-14));
}

TEST_CASE("spearman rho equals rank-then-pearson oracle on random vectors") {
  oracle::Rng rng(777);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = rng.uniform_int(3, 24);
    std::vector<double> x(n), y(n);
    for (auto& v : x) v = rng.uniform_int(0, 9);
    for (auto& v : y) v = rng.uniform() * 10.0;
    bool cx = true, cy = true;
    for (int i = 1; i < n; ++i) {
      cx = cx && x[i] == x[0];
      cy = cy && y[i] == y[0];
    }
    if (cx || cy) continue;
    const auto got = stats::spearman(x, y);
    const double want = oracle::spearman_rho(x, y);
    CHECK(got.rho == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("spearman invariant under strictly increasing transforms") {
  oracle::Rng rng(4242);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = rng.uniform_int(5, 20);
    std::vector<double> x(n), y(n), tx(n), ty(n);
    for (int i = 0; i < n; ++i) {
      x[i] = rng.uniform() * 6 - 3;
      y[i] = rng.uniform_int(0, 5);
      tx[i] = std::exp(x[i]);               // strictly increasing
      ty[i] = y[i] * y[i] * y[i] + 2 * y[i];  // strictly increasing on ints
    }
    const auto a = stats::spearman(x, y);
    const auto b = stats::spearman(tx, ty);
    if (!a.defined) {
      CHECK(!b.defined);
      continue;
    }
    CHECK(a.rho == doctest::Approx(b.rho).epsilon(1e-12));
    CHECK(a.p_value == doctest::Approx(b.p_value).epsilon(1e-12));
  }
}

TEST_CASE("spearman exact p matches full index-permutation oracle") {
  oracle::Rng rng(31337);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = rng.uniform_int(3, 7);
    std::vector<double> x(n), y(n);
    for (auto& v : x) v = rng.uniform_int(0, 4);  // ties likely
    for (auto& v : y) v = rng.uniform_int(0, 4);
    bool cx = true, cy = true;
    for (int i = 1; i < n; ++i) {
      cx = cx && x[i] == x[0];
      cy = cy && y[i] == y[0];
    }
    if (cx || cy) continue;
    const auto got = stats::spearman(x, y);
    REQUIRE(got.exact);
    const double want = oracle::spearman_exact_p(x, y);
    CHECK(got.p_value == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("spearman t-approximation matches frozen external value") {
  const std::vector<double> x = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13};
  const std::vector<double> y = {2, 1, 4, 3, 7, 5, 6, 9, 8, 11, 13, 10, 12};
  const auto r = stats::spearman(x, y);
  CHECK(!r.exact);
  CHECK(r.rho == doctest::Approx(0.93956043956044).epsilon(1e-12));
  CHECK(r.p_value == doctest::Approx(1.87824842993889e-06).epsilon(1e-9));
}

TEST_CASE("spearman degenerate and error cases") {
  const std::vector<double> c = {2, 2, 2, 2};
  const std::vector<double> y = {1, 2, 3, 4};
  CHECK(!stats::spearman(c, y).defined);
  CHECK(!stats::spearman(y, c).defined);
  CHECK_THROWS_AS((void)stats::spearman({1.0, 2.0}, {1.0, 2.0}), AnalyticsError);
  CHECK_THROWS_AS((void)stats::spearman({1.0, 2.0, 3.0}, {1.0, 2.0}), AnalyticsError);
}

TEST_CASE("mann-whitney rank-sum identity U_a + U_b = n_a * n_b") {
  oracle::Rng rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    const int na = rng.uniform_int(1, 15), nb = rng.uniform_int(1, 15);
    std::vector<double> a(na), b(nb);
    for (auto& v : a) v = rng.uniform_int(0, 6);
    for (auto& v : b) v = rng.uniform_int(0, 6);
    const auto ra = stats::mann_whitney_u(a, b);
    const auto rb = stats::mann_whitney_u(b, a);
    CHECK(ra.u + rb.u == doctest::Approx(static_cast<double>(na * nb)).epsilon(1e-12));
    CHECK(ra.p_value == doctest::Approx(rb.p_value).epsilon(1e-12));
  }
}

TEST_CASE("mann-whitney identical samples give p = 1") {
  const std::vector<double> a = {1, 2, 3};
  const auto r = stats::mann_whitney_u(a, a);
  CHECK(r.exact);
  CHECK(r.p_value == doctest::Approx(1.0));
  CHECK(r.u == doctest::Approx(4.5));
}

TEST_CASE("mann-whitney U statistic equals pairwise-comparison oracle") {
  oracle::Rng rng(555);
  for (int trial = 0; trial < 100; ++trial) {
    const int na = rng.uniform_int(1, 20), nb = rng.uniform_int(1, 20);
    std::vector<double> a(na), b(nb);
    for (auto& v : a) v = rng.uniform_int(0, 9);
    for (auto& v : b) v = rng.uniform_int(0, 9);
    const auto r = stats::mann_whitney_u(a, b);
    CHECK(r.u == doctest::Approx(oracle::mann_whitney_u_stat(a, b)).epsilon(1e-12));
  }
}

TEST_CASE("mann-whitney exact p equals exhaustive labeling oracle") {
  oracle::Rng rng(2024);
  for (int trial = 0; trial < 60; ++trial) {
    const int na = rng.uniform_int(1, 6);
    const int nb = rng.uniform_int(1, std::min(6, 12 - na));
    std::vector<double> a(na), b(nb);
    for (auto& v : a) v = rng.uniform_int(0, 5);
    for (auto& v : b) v = rng.uniform_int(0, 5);
    const auto r = stats::mann_whitney_u(a, b);
    REQUIRE(r.exact);
    const double want = oracle::mann_whitney_exact_p(a, b);
    CHECK(r.p_value == doctest::Approx(want).epsilon(1e-9));
  }
}

TEST_CASE("mann-whitney normal approximation matches frozen external value") {
  const std::vector<double> a = {1.2, 3.4, 2.2, 5.0, 1.1, 0.4, 9.9,
                                 3.3, 2.0, 4.1, 6.6, 1.9, 2.8};
  const std::vector<double> b = {2.1, 4.4, 6.1, 3.3, 5.5, 7.2, 8.8,
                                 1.0, 3.9, 5.1, 0.7, 2.2, 6.0, 4.9};
  const auto r = stats::mann_whitney_u(a, b);
  CHECK(!r.exact);
  CHECK(r.u == doctest::Approx(65.0));
  CHECK(r.p_value == doctest::Approx(0.215792105349258).epsilon(1e-10));
}

TEST_CASE("mann-whitney rejects empty samples") {
  CHECK_THROWS_AS((void)stats::mann_whitney_u({}, {1.0}), AnalyticsError);
  CHECK_THROWS_AS((void)stats::mann_whitney_u({1.0}, {}), AnalyticsError);
}

// ---------------------------------------------------------------------------
// Logistic regression
// ---------------------------------------------------------------------------

namespace {

stats::LogisticData synthetic_data(oracle::Rng& rng, std::size_t n,
                                   const std::vector<double>& beta) {
  stats::LogisticData data;
  data.names.push_back("intercept");
  for (std::size_t j = 1; j < beta.size(); ++j)
    data.names.push_back("x" + std::to_string(j));
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> row(beta.size());
    row[0] = 1.0;
    for (std::size_t j = 1; j < beta.size(); ++j)
      row[j] = static_cast<double>(rng.uniform_int(0, 4));
    double eta = 0;
    for (std::size_t j = 0; j < beta.size(); ++j) eta += row[j] * beta[j];
    const double p = 1.0 / (1.0 + std::exp(-eta));
    data.y.push_back(rng.uniform() < p ? 1 : 0);
    data.x.push_back(std::move(row));
  }
  return data;
}

}  // namespace

TEST_CASE("logistic_fit matches independent gradient-descent optimizer") {
  oracle::Rng rng(808);
  const std::vector<double> truth = {0.4, -0.6, 0.3, 0.2};
  const auto data = synthetic_data(rng, 200, truth);
  const auto fit = stats::logistic_fit(data);
  REQUIRE(fit.converged);
  CHECK(fit.grad_max_norm < 1e-6);

  const auto gd = oracle::logistic_gd(data.x, data.y, truth.size());
  for (std::size_t j = 0; j < truth.size(); ++j)
    CHECK(fit.coef[j] == doctest::Approx(gd[j]).epsilon(1e-6));
}

TEST_CASE("logistic_fit log-likelihood at optimum beats zero vector") {
  oracle::Rng rng(909);
  const auto data = synthetic_data(rng, 150, {0.2, -0.4, 0.5});
  const auto fit = stats::logistic_fit(data);
  const std::vector<double> zero(3, 0.0);
  CHECK(fit.log_likelihood >= stats::logistic_log_likelihood(data, zero));
}

TEST_CASE("logistic_fit intercept-only on balanced classes is zero") {
  stats::LogisticData data;
  data.names = {"intercept"};
  for (int i = 0; i < 40; ++i) {
    data.x.push_back({1.0});
    data.y.push_back(i % 2);
  }
  const auto fit = stats::logistic_fit(data);
  CHECK(fit.coef[0] == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(fit.converged);
}

TEST_CASE("logistic_fit drops all-zero columns with a warning entry") {
  oracle::Rng rng(11);
  auto data = synthetic_data(rng, 100, {0.1, 0.4});
  data.names.push_back("all_zero");
  for (auto& row : data.x) row.push_back(0.0);
  const auto fit = stats::logistic_fit(data);
  REQUIRE(fit.dropped.size() == 1);
  CHECK(fit.dropped[0] == "all_zero");
  CHECK(fit.names.size() == 2);
}

TEST_CASE("logistic_fit errors: single class and rank deficiency") {
  stats::LogisticData single;
  single.names = {"intercept"};
  for (int i = 0; i < 5; ++i) {
    single.x.push_back({1.0});
    single.y.push_back(1);
  }
  CHECK_THROWS_AS((void)stats::logistic_fit(single), AnalyticsError);

  oracle::Rng rng(22);
  auto data = synthetic_data(rng, 80, {0.1, 0.3});
  data.names.push_back("dup");
  for (auto& row : data.x) row.push_back(row[1] * 2.0);  // collinear
  CHECK_THROWS_WITH_AS((void)stats::logistic_fit(data),
                       doctest::Contains("dup"), AnalyticsError);
}

TEST_CASE("logistic_fit flags separation on separable data") {
  stats::LogisticData data;
  data.names = {"intercept", "x"};
  for (int i = 0; i < 30; ++i) {
    const double x = i < 15 ? -1.0 - i * 0.1 : 1.0 + i * 0.1;
    data.x.push_back({1.0, x});
    data.y.push_back(i < 15 ? 0 : 1);
  }
  const auto fit = stats::logistic_fit(data);
  CHECK(fit.separation);
}

TEST_CASE("logistic_fit invariant under row permutation") {
  oracle::Rng rng(303);
  auto data = synthetic_data(rng, 120, {0.3, -0.5, 0.2});
  const auto fit1 = stats::logistic_fit(data);

  // rotate rows deterministically
  std::rotate(data.x.begin(), data.x.begin() + 41, data.x.end());
  std::rotate(data.y.begin(), data.y.begin() + 41, data.y.end());
  const auto fit2 = stats::logistic_fit(data);

  for (std::size_t j = 0; j < fit1.coef.size(); ++j) {
    CHECK(fit1.coef[j] == doctest::Approx(fit2.coef[j]).epsilon(1e-9));
    CHECK(fit1.z_value[j] == doctest::Approx(fit2.z_value[j]).epsilon(1e-9));
  }
}

TEST_CASE("logistic gradient matches central finite differences") {
  oracle::Rng rng(606);
  const auto data = synthetic_data(rng, 60, {0.2, -0.3, 0.4});
  std::vector<double> beta = {0.15, -0.22, 0.31};
  const auto grad = stats::logistic_gradient(data, beta);
  const double h = 1e-6;
  for (std::size_t j = 0; j < beta.size(); ++j) {
    auto hi = beta, lo = beta;
    hi[j] += h;
    lo[j] -= h;
    const double fd = (stats::logistic_log_likelihood(data, hi) -
                       stats::logistic_log_likelihood(data, lo)) /
                      (2 * h);
    CHECK(grad[j] == doctest::Approx(fd).epsilon(1e-4));
  }
}
