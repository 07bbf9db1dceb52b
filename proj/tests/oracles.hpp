// Independent reference implementations used as test oracles. They stay
// deliberately naive (O(n^2) ranking, explicit enumeration, plain gradient
// descent) and must not share code with the library paths they check.
#ifndef REVCONF_TESTS_ORACLES_HPP
#define REVCONF_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <vector>

namespace oracle {

// Average ranks via pairwise counting: rank_i = 1 + #smaller + #equal/2.
inline std::vector<double> ranks(std::span<const double> v) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    double smaller = 0, equal = 0;
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (v[j] < v[i]) ++smaller;
      if (v[j] == v[i]) ++equal;
    }
    out[i] = smaller + (equal + 1.0) / 2.0;
  }
  return out;
}

inline double pearson(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

// Brute-force Spearman rho: rank both vectors, then Pearson.
inline double spearman_rho(std::span<const double> x, std::span<const double> y) {
  const std::vector<double> rx = ranks(x);
  const std::vector<double> ry = ranks(y);
  return pearson(rx, ry);
}

// Exact Spearman permutation p over all index permutations (two-sided).
inline double spearman_exact_p(std::span<const double> x,
                               std::span<const double> y) {
  const std::vector<double> rx = ranks(x);
  const std::vector<double> ry = ranks(y);
  const double observed = std::fabs(pearson(rx, ry));
  std::vector<std::size_t> idx(y.size());
  std::iota(idx.begin(), idx.end(), 0);
  long long hits = 0, total = 0;
  std::vector<double> permuted(y.size());
  do {
    for (std::size_t i = 0; i < idx.size(); ++i) permuted[i] = ry[idx[i]];
    if (std::fabs(pearson(rx, permuted)) >= observed - 1e-12) ++hits;
    ++total;
  } while (std::next_permutation(idx.begin(), idx.end()));
  return static_cast<double>(hits) / static_cast<double>(total);
}

// Mann-Whitney U of the first sample, from pairwise comparisons (not rank
// sums): U = #(a > b) + #(a == b)/2.
inline double mann_whitney_u_stat(std::span<const double> a,
                                  std::span<const double> b) {
  double u = 0;
  for (double va : a)
    for (double vb : b) {
      if (va > vb)
        u += 1.0;
      else if (va == vb)
        u += 0.5;
    }
  return u;
}

// Exact two-sided p by explicit enumeration of every size-|a| labeling of
// the pooled sample: P(|U' - n1 n2 / 2| >= |U_obs - n1 n2 / 2|).
inline double mann_whitney_exact_p(std::span<const double> a,
                                   std::span<const double> b) {
  std::vector<double> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  const std::size_t n = pooled.size(), n1 = a.size();
  const double mu =
      static_cast<double>(n1) * static_cast<double>(n - n1) / 2.0;
  const double dev_obs = std::fabs(mann_whitney_u_stat(a, b) - mu) - 1e-9;

  long long hits = 0, total = 0;
  std::vector<std::size_t> pick(n1);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t start,
                                                          std::size_t chosen) {
    if (chosen == n1) {
      std::vector<double> ga, gb;
      std::vector<bool> in_a(n, false);
      for (std::size_t i = 0; i < n1; ++i) in_a[pick[i]] = true;
      for (std::size_t i = 0; i < n; ++i)
        (in_a[i] ? ga : gb).push_back(pooled[i]);
      ++total;
      if (std::fabs(mann_whitney_u_stat(ga, gb) - mu) >= dev_obs) ++hits;
      return;
    }
    for (std::size_t i = start; i + (n1 - chosen) <= n; ++i) {
      pick[chosen] = i;
      rec(i + 1, chosen + 1);
    }
  };
  rec(0, 0);
  return static_cast<double>(hits) / static_cast<double>(total);
}

// Gradient descent with Armijo backtracking on the (unregularized) logistic
// log-likelihood; an optimizer route independent of IRLS.
inline std::vector<double> logistic_gd(
    const std::vector<std::vector<double>>& x, const std::vector<int>& y,
    std::size_t dim, int max_iters = 500000, double grad_tol = 1e-10) {
  std::vector<double> beta(dim, 0.0);
  auto loglik = [&](const std::vector<double>& coefs) {
    double ll = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      double eta = 0;
      for (std::size_t j = 0; j < dim; ++j) eta += x[i][j] * coefs[j];
      const double lse = eta > 0 ? eta + std::log1p(std::exp(-eta))
                                 : std::log1p(std::exp(eta));
      ll += y[i] * eta - lse;
    }
    return ll;
  };
  auto gradient = [&](const std::vector<double>& coefs) {
    std::vector<double> g(dim, 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) {
      double eta = 0;
      for (std::size_t j = 0; j < dim; ++j) eta += x[i][j] * coefs[j];
      const double mu = eta >= 0 ? 1.0 / (1.0 + std::exp(-eta))
                                 : std::exp(eta) / (1.0 + std::exp(eta));
      for (std::size_t j = 0; j < dim; ++j) g[j] += x[i][j] * (y[i] - mu);
    }
    return g;
  };

  double ll = loglik(beta);
  double step = 1e-2;
  for (int it = 0; it < max_iters; ++it) {
    const std::vector<double> g = gradient(beta);
    double gmax = 0, gnorm2 = 0;
    for (double v : g) {
      gmax = std::max(gmax, std::fabs(v));
      gnorm2 += v * v;
    }
    if (gmax < grad_tol) break;

    step *= 2.0;  // allow growth, then backtrack
    std::vector<double> next(dim);
    double ll_next;
    while (true) {
      for (std::size_t j = 0; j < dim; ++j) next[j] = beta[j] + step * g[j];
      ll_next = loglik(next);
      if (ll_next >= ll + 1e-4 * step * gnorm2 || step < 1e-18) break;
      step /= 2.0;
    }
    if (ll_next <= ll && step < 1e-18) break;
    beta = next;
    ll = ll_next;
  }
  return beta;
}

// xorshift-based deterministic generator for test instances
struct Rng {
  std::uint64_t state;
  explicit Rng(std::uint64_t seed) : state(seed ? seed : 0x9e3779b97f4a7c15ull) {}
  std::uint64_t next() {
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    return state;
  }
  double uniform() {  // [0, 1)
    return static_cast<double>(next() >> 11) / 9007199254740992.0;
  }
  int uniform_int(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  double normal() {
    const double u1 = std::max(uniform(), 1e-12);
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }
};

}  // namespace oracle

#endif  // REVCONF_TESTS_ORACLES_HPP
