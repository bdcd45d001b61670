#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "partinf/errors.hpp"
#include "partinf/parallel.hpp"
#include "partinf/rng.hpp"

namespace partinf {

// ---------------------------------------------------------------------------
// First-stage recovery rate

struct RateInputs {
  int n = 0;               // nodes
  int k = 0;               // labels to recover, n/2 <= k <= n
  double p = 0.0;          // edge noise
  double phi = 0.0;        // Cheeger constant
  double delta_max = 1.0;  // maximum degree

  void validate() const {
    detail::require(n >= 1, "rate: n must be >= 1");
    detail::require(2 * static_cast<long long>(k) >= n && k <= n, "rate: need n/2 <= k <= n");
    detail::require(p >= 0.0 && p < 0.5, "rate: p must lie in [0, 0.5)");
    detail::require(phi >= 0.0, "rate: phi must be >= 0");
    detail::require(delta_max >= 1.0, "rate: delta_max must be >= 1");
  }
};

// The three summands of epsilon(phi, Delta_max, p, k):
//   spectral = n exp(-(1-2p)^2 phi^4 / (512 p(1-p) D^3 + 11 (1-2p)(1-p) D phi^2))
//   in_set   = k exp(-2(1-2p)^2 / D * (phi^2/(16 D) - (n-k))^2)
//   out_set  = (n-k) exp(-2(1-2p)^2 / D * (phi^2/(16 D) - (2k + D - n))^2)
struct RateTerms {
  double spectral = 0.0;
  double in_set = 0.0;
  double out_set = 0.0;

  double total() const { return spectral + in_set + out_set; }
};

inline RateTerms epsilon_terms(const RateInputs& ri) {
  ri.validate();
  const double n = ri.n, k = ri.k, p = ri.p, phi = ri.phi, d = ri.delta_max;
  const double s = 1.0 - 2.0 * p;
  const double phi2 = phi * phi;

  const double num = s * s * phi2 * phi2;
  const double den = 512.0 * p * (1.0 - p) * d * d * d + 11.0 * s * (1.0 - p) * d * phi2;
  // phi = 0 together with p = 0 leaves 0/0; the exponent is taken as 0.
  const double spectral_exp = num == 0.0 ? 0.0 : num / den;

  const double centre = phi2 / (16.0 * d);
  const double coeff = 2.0 * s * s / d;
  const double in_dev = centre - (n - k);
  const double out_dev = centre - (2.0 * k + d - n);

  RateTerms t;
  t.spectral = n * std::exp(-spectral_exp);
  t.in_set = k * std::exp(-coeff * in_dev * in_dev);
  t.out_set = (n - k) * std::exp(-coeff * out_dev * out_dev);
  return t;
}

// Error term of the first-stage guarantee. It can exceed 1.
inline double epsilon_rate(const RateInputs& ri) { return epsilon_terms(ri).total(); }

inline double log_binomial(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// sum_{i=k}^{n} C(n,k) (1 - eps); the summand does not depend on i, so this
// is (n-k+1) C(n,k) (1 - eps), evaluated in log space. Unclamped; returns 0
// for eps >= 1.
inline double recovery_sum(int n, int k, double eps) {
  detail::require(n >= 1 && k >= 0 && k <= n, "recovery_sum: need 0 <= k <= n");
  if (!(eps < 1.0)) return 0.0;
  return std::exp(std::log(n - k + 1.0) + log_binomial(n, k) + std::log1p(-eps));
}

// recovery_sum with eps = epsilon_rate(ri), clamped to [0, 1].
inline double recovery_prob_bound(const RateInputs& ri) {
  return std::clamp(recovery_sum(ri.n, ri.k, epsilon_rate(ri)), 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// Mixed Chernoff bound

struct ChernoffInputs {
  int n = 0;       // total number of Bernoulli variables
  int m = 0;       // how many are Ber(r); the other n - m are Ber(1 - r)
  double r = 0.5;  // r in [0.5, 1)
  double t = 0.0;  // deviation above the mean

  void validate() const {
    detail::require(n >= 1, "chernoff: n must be >= 1");
    detail::require(m >= 0 && m <= n, "chernoff: need 0 <= m <= n");
    detail::require(r >= 0.5 && r < 1.0, "chernoff: r must lie in [0.5, 1)");
    detail::require(t >= 0.0, "chernoff: t must be >= 0");
  }

  double mean() const { return m * r + (n - m) * (1.0 - r); }
};

// exp(-(2(n-m) + m / (2r(1-r))) t^2 / n^2)
inline double mixed_chernoff_bound(const ChernoffInputs& ci) {
  ci.validate();
  const double n = ci.n, m = ci.m, r = ci.r, t = ci.t;
  return std::exp(-(2.0 * (n - m) + m / (2.0 * r * (1.0 - r))) * t * t / (n * n));
}

struct ChernoffValidation {
  double empirical_tail = 0.0;
  double bound = 0.0;
  std::uint64_t hits = 0;
  std::uint64_t trials = 0;
};

// Monte-Carlo estimate of P(s >= E[s] + t). Variable i of trial j uses the
// uniform draw counter_hash(seed, {chernoff, j, i}).
inline ChernoffValidation validate_chernoff_monte_carlo(const ChernoffInputs& ci, std::uint64_t trials,
                                                        std::uint64_t seed, unsigned threads = 0) {
  ci.validate();
  detail::require(trials >= 1000, "chernoff validation needs at least 1000 trials");
  const double threshold = ci.mean() + ci.t - 1e-9;
  constexpr std::uint64_t kChunk = 4096;
  const std::size_t chunks = static_cast<std::size_t>((trials + kChunk - 1) / kChunk);
  std::vector<std::uint64_t> hits(chunks, 0);
  parallel_for(
      chunks,
      [&](std::size_t c) {
        const std::uint64_t begin = c * kChunk;
        const std::uint64_t end = std::min(trials, begin + kChunk);
        std::uint64_t local = 0;
        for (std::uint64_t j = begin; j < end; ++j) {
          int s = 0;
          for (int i = 0; i < ci.n; ++i) {
            const double u = to_unit_interval(
                counter_hash(seed, {static_cast<std::uint64_t>(Stream::chernoff), j, static_cast<std::uint64_t>(i)}));
            s += u < (i < ci.m ? ci.r : 1.0 - ci.r);
          }
          local += s >= threshold;
        }
        hits[c] = local;
      },
      threads);
  ChernoffValidation v;
  for (auto h : hits) v.hits += h;
  v.trials = trials;
  v.empirical_tail = static_cast<double>(v.hits) / static_cast<double>(trials);
  v.bound = mixed_chernoff_bound(ci);
  return v;
}

// ---------------------------------------------------------------------------
// Second stage

namespace detail {
inline void require_stage2(int n, double q) {
  require(n >= 1, "stage2: n must be >= 1");
  require(q >= 0.0 && q < 0.5, "stage2: q must lie in [0, 0.5)");
}
}  // namespace detail

// e^{-(1 - 2 q^2) n / 2}.
inline double stage2_error_bound(int n, double q) {
  detail::require_stage2(n, q);
  return std::exp(-(1.0 - 2.0 * q * q) * n / 2.0);
}

// Hoeffding for sum_i w_i y*_i (n terms in [-1, 1], mean 1 - 2q):
// P(sum <= 0) <= e^{-(1 - 2q)^2 n / 2}.
inline double stage2_hoeffding_bound(int n, double q) {
  detail::require_stage2(n, q);
  const double s = 1.0 - 2.0 * q;
  return std::exp(-s * s * n / 2.0);
}

// ---------------------------------------------------------------------------
// Expander conditions

struct ConditionReport {
  double degree_ratio = 0.0;   // d / log n
  double in_set_ratio = 0.0;   // (c^2 d/16 - (n-k))^2 / (d log max(k,2))
  double out_set_ratio = 0.0;  // (c^2 d/16 - (2k+d-n))^2 / (d log max(n-k,2)); +inf when k = n
  RateTerms terms;             // epsilon terms with phi = c d, Delta_max = d

  friend bool operator==(const ConditionReport& a, const ConditionReport& b) {
    return a.degree_ratio == b.degree_ratio && a.in_set_ratio == b.in_set_ratio &&
           a.out_set_ratio == b.out_set_ratio && a.terms.spectral == b.terms.spectral &&
           a.terms.in_set == b.terms.in_set && a.terms.out_set == b.terms.out_set;
  }
};

// Finite-n values of the three growth conditions for a d-regular expander
// with constant c. No verdict: the conditions are asymptotic.
inline ConditionReport expander_conditions(int n, int d, double c, int k, double p) {
  detail::require(n >= 2, "expander: n must be >= 2");
  detail::require(d >= 1 && d < n, "expander: need 1 <= d < n");
  detail::require(c > 0.0, "expander: c must be positive");
  detail::require(2 * static_cast<long long>(k) >= n && k <= n, "expander: need n/2 <= k <= n");
  const double centre = c * c * d / 16.0;
  ConditionReport r;
  r.degree_ratio = d / std::log(static_cast<double>(n));
  const double in_dev = centre - (n - k);
  r.in_set_ratio = in_dev * in_dev / (d * std::log(std::max(k, 2)));
  if (n == k) {
    r.out_set_ratio = std::numeric_limits<double>::infinity();
  } else {
    const double out_dev = centre - (2.0 * k + d - n);
    r.out_set_ratio = out_dev * out_dev / (d * std::log(std::max(n - k, 2)));
  }
  r.terms = epsilon_terms(RateInputs{n, k, p, c * d, static_cast<double>(d)});
  return r;
}

}  // namespace partinf
