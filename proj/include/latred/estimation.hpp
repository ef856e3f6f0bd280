#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <vector>

#include "latred/errors.hpp"
#include "latred/matrix.hpp"
#include "latred/reduction.hpp"

namespace latred {

// Componentwise integer box l <= x <= u.
struct BoxConstraint {
  std::vector<long long> l;
  std::vector<long long> u;

  BoxConstraint() = default;
  BoxConstraint(std::vector<long long> lo, std::vector<long long> hi)
      : l(std::move(lo)), u(std::move(hi)) {
    if (l.size() != u.size())
      throw DimensionError("box bounds must have equal length");
    for (std::size_t i = 0; i < l.size(); ++i)
      if (l[i] > u[i]) throw ParameterError("box requires l <= u");
  }
  static BoxConstraint uniform(std::size_t n, long long lo, long long hi) {
    return BoxConstraint(std::vector<long long>(n, lo),
                         std::vector<long long>(n, hi));
  }
  std::size_t size() const { return l.size(); }
};

struct BabaiResult {
  std::vector<long long> x;  // estimate in the original domain
  std::vector<long long> z;  // reduced-domain point (equals x when Z = I)
  std::vector<double> c;     // pre-rounding targets, for diagnostics
};

namespace detail {

// Scalar error function: Maclaurin series for |x| <= 4 (absolute error
// below 1e-10 there), saturated to +-1 beyond, where 1 - erf(4) < 1.6e-8.
// Total absolute error under 1e-7 everywhere.
inline double erf_series(double x) {
  if (x > 4.0) return 1.0;
  if (x < -4.0) return -1.0;
  const double x2 = x * x;
  double term = x;   // (-1)^k x^(2k+1) / k!
  double sum = x;    // accumulating term / (2k+1)
  for (int k = 1; k <= 200; ++k) {
    term *= -x2 / k;
    const double add = term / (2 * k + 1);
    sum += add;
    if (std::fabs(add) < 1e-17 * std::fabs(sum)) break;
  }
  constexpr double two_over_sqrt_pi = 1.1283791670955126;
  return two_over_sqrt_pi * sum;
}

}  // namespace detail

/* Babai nearest-plane on an upper-triangular system: back substitution with
   rounding at each level,

     c_i = (y_i - sum_{j>i} r_ij x_j) / r_ii,   x_i = round(c_i),

   taken from the last row upwards. Returns the plain estimate (z == x). */
inline BabaiResult babai(const UpperTriangular& r,
                         const std::vector<double>& y_t) {
  const std::size_t n = r.n();
  if (y_t.size() != n) throw DimensionError("babai: length(y) != n");
  BabaiResult out;
  out.x.assign(n, 0);
  out.c.assign(n, 0.0);
  for (std::size_t i = n; i-- > 0;) {
    double s = y_t[i];
    for (std::size_t j = i + 1; j < n; ++j)
      s -= r(i, j) * static_cast<double>(out.x[j]);
    out.c[i] = s / r(i, i);
    out.x[i] = std::llround(out.c[i]);
  }
  out.z = out.x;
  return out;
}

/* Babai point through a reduction: rotate the target by the accumulated
   orthogonal factor (y_bar = Q^T y), round in the reduced basis, and map
   back with the unimodular Z: x = Z z. */
inline BabaiResult reduced_babai(const ReductionState& state,
                                 const std::vector<double>& y_t) {
  if (y_t.size() != state.r.n())
    throw DimensionError("reduced_babai: length(y) != n");
  const std::vector<double> y_bar = transpose_times(state.q, y_t);
  BabaiResult out = babai(state.r, y_bar);
  out.z = out.x;
  out.x = state.z * out.z;
  return out;
}

inline std::vector<long long> clamp_to_box(const std::vector<long long>& x,
                                           const BoxConstraint& box) {
  if (x.size() != box.size())
    throw DimensionError("clamp_to_box: length mismatch");
  std::vector<long long> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    out[i] = std::clamp(x[i], box.l[i], box.u[i]);
  return out;
}

/* Probability that one Babai rounding step is correct for a diagonal entry
   r under i.i.d. N(0, sigma^2) noise:

     phi(r) = sqrt(2/pi) \int_0^{|r|/(2 sigma)} exp(-t^2/2) dt
            = erf(|r| / (2 sqrt(2) sigma)).                         */
inline double phi(double r, double sigma) {
  if (!(sigma > 0.0)) throw ParameterError("phi: sigma must be > 0");
  constexpr double inv_2_sqrt2 = 0.35355339059327373;  // 1/(2 sqrt 2)
  return detail::erf_series(std::fabs(r) * inv_2_sqrt2 / sigma);
}

// Success probability of the (unconstrained) Babai point: prod_i phi(r_ii).
inline double success_probability(const UpperTriangular& r, double sigma) {
  if (!(sigma > 0.0))
    throw ParameterError("success_probability: sigma must be > 0");
  double p = 1.0;
  for (std::size_t i = 0; i < r.n(); ++i) p *= phi(r(i, i), sigma);
  return p;
}

/* Exhaustive box-constrained integer least squares, the test oracle:
   minimizes ||y - R x||^2 over x in the box, ties broken toward the
   lexicographically smallest x. Guarded to small search spaces. */
inline std::vector<long long> ils_brute_force(const UpperTriangular& r,
                                              const std::vector<double>& y_t,
                                              const BoxConstraint& box) {
  const std::size_t n = r.n();
  if (y_t.size() != n || box.size() != n)
    throw DimensionError("ils_brute_force: length mismatch");
  if (n == 0) return {};
  if (n > 6) throw ParameterError("ils_brute_force: n must be <= 6");
  double volume = 1.0;
  for (std::size_t i = 0; i < n; ++i)
    volume *= static_cast<double>(box.u[i] - box.l[i] + 1);
  if (volume > 1e6)
    throw ParameterError("ils_brute_force: search space too large");

  std::vector<long long> x(box.l);  // odometer, first coordinate slowest
  std::vector<long long> best(x);
  double best_cost = -1.0;
  while (true) {
    double cost = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double s = y_t[i];
      for (std::size_t j = i; j < n; ++j)
        s -= r(i, j) * static_cast<double>(x[j]);
      cost += s * s;
    }
    // Strict improvement keeps the first (lex-smallest) minimizer.
    if (best_cost < 0.0 || cost < best_cost) {
      best_cost = cost;
      best = x;
    }
    std::size_t i = n;
    while (i-- > 0) {
      if (x[i] < box.u[i]) {
        ++x[i];
        break;
      }
      x[i] = box.l[i];
      if (i == 0) return best;
    }
  }
}

}  // namespace latred
