#pragma once

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <utility>
#include <vector>

#include "latred/errors.hpp"
#include "latred/matrix.hpp"
#include "latred/qr.hpp"

namespace latred {

// Greedy pair-selection rule: G1 scores a candidate swap by the ratio of the
// old to the new leading diagonal entry, G2 by the drop in the inverse of the
// trailing one.
enum class Strategy { G1, G2 };

struct ReductionReport {
  long long permutations_performed = 0;
  long long sweeps_performed = 0;
  long long lovasz_tests = 0;  // evaluations of the swap condition
  bool terminated_early = false;
  double wall_seconds = 0.0;
};

/* The mutable object every reduction transforms. Starting from a QR
   factorization A = Q1 R0, the state maintains

       R0 Z == Q R      (so A Z == Q1 Q R)

   with Z unimodular and Q the n x n orthogonal factor accumulated from the
   retriangularization rotations. `scores` caches the greedy gains for
   column pairs; entry k (1 <= k < n) is zero exactly when swapping columns
   k-1 and k cannot help. */
struct ReductionState {
  UpperTriangular r;
  Matrix q;
  IntMatrix z;
  std::vector<double> scores;
  long long perm_count = 0;

  ReductionState() = default;
  explicit ReductionState(UpperTriangular r0)
      : r(std::move(r0)),
        q(Matrix::identity(r.n())),
        z(IntMatrix::identity(r.n())),
        scores(r.n(), 0.0) {}
};

namespace detail {

inline void check_delta(double delta) {
  if (!(delta > 0.25) || !(delta <= 1.0))
    throw ParameterError("delta must lie in (1/4, 1]");
}

inline void check_pair_index(const UpperTriangular& r, std::size_t k) {
  if (k < 1 || k >= r.n())
    throw DimensionError("column pair index out of range");
}

// Nearest integer, halves away from zero (the library-wide rounding rule).
inline long long round_int(double x) { return std::llround(x); }

}  // namespace detail

/* Size-reduce entry (i, k), i < k: subtract mu = round(r_ik / r_ii) times
   column i from column k of both R and Z. Afterwards |r_ik| <= |r_ii| / 2. */
inline void size_reduce_entry(ReductionState& s, std::size_t i,
                              std::size_t k) {
  if (i >= k || k >= s.r.n())
    throw DimensionError("size_reduce_entry: need i < k < n");
  const long long mu = detail::round_int(s.r(i, k) / s.r(i, i));
  if (mu == 0) return;
  s.r.add_scaled_column(k, i, static_cast<double>(-mu), i);
  s.z.add_scaled_column(k, i, -mu);
}

/* Whether the Lovasz condition at pair k would still fail after the
   superdiagonal entry r(k-1, k) is size reduced:

     delta * r(k-1,k-1)^2 > (r(k-1,k) - round(r(k-1,k)/r(k-1,k-1)) * r(k-1,k-1))^2
                            + r(k,k)^2

   Pure; R is not modified. */
inline bool lovasz_violated_after_reduce(const UpperTriangular& r,
                                         std::size_t k, double delta) {
  detail::check_delta(delta);
  detail::check_pair_index(r, k);
  const double d = r(k - 1, k - 1);
  const long long mu = detail::round_int(r(k - 1, k) / d);
  const double rr = r(k - 1, k) - static_cast<double>(mu) * d;
  return delta * d * d > rr * rr + r(k, k) * r(k, k);
}

/* Swap columns k-1 and k of R and Z and restore triangularity with one
   Givens rotation, accumulated into Q. The caller is expected to have size
   reduced r(k-1, k) first. The new entries satisfy

     r_new(k-1,k-1) = hypot(r_old(k-1,k), r_old(k,k))        (decreases)
     |r_new(k,k)|   = |r_old(k-1,k-1) r_old(k,k)| / r_new(k-1,k-1)  (increases)
*/
inline void swap_and_retriangularize(ReductionState& s, std::size_t k) {
  detail::check_pair_index(s.r, k);
  s.r.swap_columns(k - 1, k, k);
  s.z.swap_columns(k - 1, k);
  apply_givens_rows(s.r, s.q, k);
  ++s.perm_count;
}

/* Greedy gain of swapping pair k, or 0 when the Lovasz condition would hold
   anyway. Uses the closed-form post-swap entries, so no state is touched. */
inline double score(const UpperTriangular& r, std::size_t k, double delta,
                    Strategy strategy) {
  if (!lovasz_violated_after_reduce(r, k, delta)) return 0.0;
  const double d = r(k - 1, k - 1);
  const long long mu = detail::round_int(r(k - 1, k) / d);
  const double rr = r(k - 1, k) - static_cast<double>(mu) * d;
  const double new_lead = std::hypot(rr, r(k, k));
  if (strategy == Strategy::G1) return std::fabs(d) / new_lead;
  const double new_trail = std::fabs(d * r(k, k)) / new_lead;
  return 1.0 / std::fabs(r(k, k)) - 1.0 / new_trail;
}

inline bool is_lll_reduced(const UpperTriangular& r, double delta) {
  detail::check_delta(delta);
  const std::size_t n = r.n();
  for (std::size_t k = 1; k < n; ++k)
    for (std::size_t i = 0; i < k; ++i)
      if (std::fabs(r(i, k)) > 0.5 * std::fabs(r(i, i))) return false;
  for (std::size_t k = 1; k < n; ++k) {
    const double d = r(k - 1, k - 1), sd = r(k - 1, k), t = r(k, k);
    if (delta * d * d > sd * sd + t * t) return false;
  }
  return true;
}

// True when size reductions alone would make R LLL reduced.
inline bool is_effectively_lll_reduced(const UpperTriangular& r,
                                       double delta) {
  detail::check_delta(delta);
  for (std::size_t k = 1; k < r.n(); ++k)
    if (lovasz_violated_after_reduce(r, k, delta)) return false;
  return true;
}

// Full size-reduction pass establishing |r_ik| <= |r_ii|/2 everywhere.
inline void size_reduce_all(ReductionState& s) {
  for (std::size_t k = 1; k < s.r.n(); ++k)
    for (std::size_t i = k; i-- > 0;) size_reduce_entry(s, i, k);
}

// Called after each executed swap, with the updated state and the pair index.
using SwapObserver =
    std::function<void(const ReductionState&, std::size_t k)>;

/* Greedy fixed-complexity reduction. Each step scans the cached scores,
   picks the best pair j (smallest j on ties), size-reduces r(j-1, j), swaps
   and retriangularizes, then refreshes the only scores a swap at j can
   change: j-1, j and j+1. Stops after max_permutations swaps, or earlier
   with terminated_early set once every score is zero (R is then effectively
   LLL reduced). `final_size_reduce` optionally finishes with a full size
   reduction; the Babai estimate downstream is invariant to it. */
inline ReductionReport gfclll(ReductionState& s, Strategy strategy,
                              long long max_permutations, double delta,
                              bool final_size_reduce = false,
                              const SwapObserver& observer = {}) {
  detail::check_delta(delta);
  if (max_permutations < 0)
    throw ParameterError("gfclll: permutation budget must be >= 0");
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t n = s.r.n();
  ReductionReport rep;

  for (std::size_t k = 1; k < n; ++k) {
    s.scores[k] = score(s.r, k, delta, strategy);
    ++rep.lovasz_tests;
  }

  while (true) {
    std::size_t j = 1;
    double best = 0.0;
    for (std::size_t k = 1; k < n; ++k)
      if (s.scores[k] > best) {
        best = s.scores[k];
        j = k;
      }
    if (best == 0.0) {
      rep.terminated_early = true;
      break;
    }
    if (rep.permutations_performed == max_permutations) break;

    size_reduce_entry(s, j - 1, j);
    swap_and_retriangularize(s, j);
    ++rep.permutations_performed;
    for (std::size_t k = (j > 1 ? j - 1 : 1); k <= j + 1 && k < n; ++k) {
      s.scores[k] = score(s.r, k, delta, strategy);
      ++rep.lovasz_tests;
    }
    if (observer) observer(s, j);
  }

  if (final_size_reduce) size_reduce_all(s);
  rep.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return rep;
}

/* Classic LLL (Lenstra, Lenstra & Lovasz 1982) on the R factor: work at
   pair k, size-reduce column k fully, test the Lovasz condition; on failure
   swap and step back (floor at the first pair), otherwise advance. */
inline ReductionReport lll(ReductionState& s, double delta) {
  detail::check_delta(delta);
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t n = s.r.n();
  ReductionReport rep;

  std::size_t k = 1;
  while (k < n) {
    for (std::size_t i = k; i-- > 0;) size_reduce_entry(s, i, k);
    const double d = s.r(k - 1, k - 1), sd = s.r(k - 1, k), t = s.r(k, k);
    ++rep.lovasz_tests;
    if (delta * d * d > sd * sd + t * t) {
      swap_and_retriangularize(s, k);
      ++rep.permutations_performed;
      k = (k > 1) ? k - 1 : 1;
    } else {
      ++k;
    }
  }
  rep.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return rep;
}

namespace detail {

template <bool SuperdiagonalOnly>
inline ReductionReport fixed_sweeps(ReductionState& s, long long sweeps,
                                    double delta) {
  check_delta(delta);
  if (sweeps < 1) throw ParameterError("sweep count must be >= 1");
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t n = s.r.n();
  ReductionReport rep;

  for (long long sweep = 0; sweep < sweeps; ++sweep) {
    for (std::size_t k = 1; k < n; ++k) {
      if constexpr (SuperdiagonalOnly) {
        size_reduce_entry(s, k - 1, k);
      } else {
        for (std::size_t i = k; i-- > 0;) size_reduce_entry(s, i, k);
      }
      const double d = s.r(k - 1, k - 1), sd = s.r(k - 1, k), t = s.r(k, k);
      ++rep.lovasz_tests;
      if (delta * d * d > sd * sd + t * t) {
        swap_and_retriangularize(s, k);
        ++rep.permutations_performed;
      }
    }
    ++rep.sweeps_performed;
  }
  rep.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return rep;
}

}  // namespace detail

/* Fixed-complexity LLL: J forward sweeps over pairs 2..n with full size
   reduction at each pair, swapping on a failed Lovasz test but never
   stepping back. Exactly J(n-1) tests are executed. */
inline ReductionReport fclll(ReductionState& s, long long sweeps,
                             double delta) {
  return detail::fixed_sweeps<false>(s, sweeps, delta);
}

/* Effective fixed-complexity LLL: like fclll but size reduces only the
   superdiagonal entry before each test. Its permutation count is the K the
   budget protocol hands to the greedy variants. */
inline ReductionReport efclll(ReductionState& s, long long sweeps,
                              double delta) {
  return detail::fixed_sweeps<true>(s, sweeps, delta);
}

}  // namespace latred
