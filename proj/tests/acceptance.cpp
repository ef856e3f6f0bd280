// Acceptance suite: end-to-end checks of the reduction library and the
// Monte-Carlo benchmark at desk scale. Each criterion prints one line;
// the process exits nonzero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "latred/cli.hpp"
#include "latred/latred.hpp"

using namespace latred;

namespace {

Matrix random_matrix(std::size_t n, RandomStream& rng) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = rng.gaussian();
  return m;
}

UpperTriangular random_upper(std::size_t n, RandomStream& rng) {
  UpperTriangular r(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) r(i, j) = rng.gaussian();
    const double g = rng.gaussian();
    r(i, i) = (g >= 0.0 ? 1.0 : -1.0) * (0.3 + std::fabs(g));
  }
  return r;
}

bool approx(double a, double b, double tol) { return std::fabs(a - b) <= tol; }

double elapsed_s(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

// ---------------------------------------------------------------- criterion 1
bool classic_reduction_invariants(std::string& detail) {
  const auto t0 = std::chrono::steady_clock::now();
  RandomStream rng(derive_stream(1001, {1}));
  for (int trial = 0; trial < 500; ++trial) {
    const Matrix a = random_matrix(16, rng);
    const QrFactors f = qr_factorize(a);
    const double diag0 = f.r.abs_diag_product();
    ReductionState s(f.r);
    lll(s, 1.0);
    if (!is_lll_reduced(s.r, 1.0)) {
      detail = "output not reduced";
      return false;
    }
    const auto det = bareiss_determinant(s.z);
    if (!det || std::llabs(*det) != 1) {
      detail = "transform not unimodular";
      return false;
    }
    if (residual_norm(a, f.q1 * s.q, s.r, s.z) > 1e-9 * frobenius_norm(a)) {
      detail = "factorization residual too large";
      return false;
    }
    if (!approx(s.r.abs_diag_product(), diag0, 1e-10 * diag0)) {
      detail = "diagonal product drifted";
      return false;
    }
  }
  const double secs = elapsed_s(t0);
  detail = "500 random 16x16 systems in " + std::to_string(secs) + " s";
  return secs < 10.0;
}

// ---------------------------------------------------------------- criterion 2
bool greedy_reaches_fixed_point(std::string& detail) {
  const auto t0 = std::chrono::steady_clock::now();
  RandomStream rng(derive_stream(1002, {1}));
  for (int trial = 0; trial < 500; ++trial) {
    const Matrix a = random_matrix(16, rng);
    const QrFactors f = qr_factorize(a);
    for (Strategy st : {Strategy::G1, Strategy::G2}) {
      ReductionState s(f.r);
      const ReductionReport rep = gfclll(s, st, 1000000000LL, 1.0);
      if (!rep.terminated_early || !is_effectively_lll_reduced(s.r, 1.0)) {
        detail = "greedy run did not reach the fixed point";
        return false;
      }
    }
  }
  const double secs = elapsed_s(t0);
  detail = "both strategies on 500 random 16x16 systems in " +
           std::to_string(secs) + " s";
  return secs < 10.0;
}

// ---------------------------------------------------------------- criterion 3
bool swaps_raise_success_probability(std::string& detail) {
  RandomStream rng(derive_stream(1002, {1}));  // same runs as criterion 2
  const double sigma = 1.0;
  long long swaps_checked = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const Matrix a = random_matrix(16, rng);
    const QrFactors f = qr_factorize(a);
    for (Strategy st : {Strategy::G1, Strategy::G2}) {
      ReductionState s(f.r);
      std::vector<double> prev(16);
      for (std::size_t i = 0; i < 16; ++i) prev[i] = s.r(i, i);
      bool ok = true;
      gfclll(s, st, 1000000000LL, 1.0, false,
             [&](const ReductionState& cur, std::size_t k) {
               double p_prev = 1.0, p_cur = 1.0;
               for (std::size_t i = 0; i < 16; ++i) {
                 p_prev *= phi(prev[i], sigma);
                 p_cur *= phi(cur.r(i, i), sigma);
               }
               const double gain = p_cur / p_prev;
               const double pair_gain =
                   phi(cur.r(k - 1, k - 1), sigma) *
                   phi(cur.r(k, k), sigma) /
                   (phi(prev[k - 1], sigma) * phi(prev[k], sigma));
               if (!(p_cur > p_prev)) ok = false;
               if (std::fabs(gain - pair_gain) > 1e-8 * pair_gain) ok = false;
               for (std::size_t i = 0; i < 16; ++i) prev[i] = cur.r(i, i);
               ++swaps_checked;
             });
      if (!ok) {
        detail = "a swap failed the probability-gain identity";
        return false;
      }
    }
  }
  detail = std::to_string(swaps_checked) + " swaps all strictly improving";
  return swaps_checked > 0;
}

// ---------------------------------------------------------------- criterion 4
bool strategies_diverge_on_witness(std::string& detail) {
  UpperTriangular r(3);
  r(0, 0) = 4;
  r(0, 1) = 1;
  r(1, 1) = 1;
  r(2, 2) = 0.5;

  ReductionState s1(r);
  std::size_t pair1 = 0;
  gfclll(s1, Strategy::G1, 1, 1.0, false,
         [&](const ReductionState&, std::size_t k) { pair1 = k; });
  const double sqrt2 = std::sqrt(2.0);
  if (pair1 != 1 || !approx(std::fabs(s1.r(0, 0)), sqrt2, 1e-10) ||
      !approx(std::fabs(s1.r(1, 1)), 2 * sqrt2, 1e-10) ||
      !approx(std::fabs(s1.r(2, 2)), 0.5, 1e-10)) {
    detail = "diagonal-ratio strategy picked the wrong pair or diagonal";
    return false;
  }

  ReductionState s2(r);
  std::size_t pair2 = 0;
  gfclll(s2, Strategy::G2, 1, 1.0, false,
         [&](const ReductionState&, std::size_t k) { pair2 = k; });
  // Post-swap trailing entry must keep |r11*r22*r33| = 2: (4, 0.5, 1).
  if (pair2 != 2 || !approx(std::fabs(s2.r(0, 0)), 4.0, 1e-10) ||
      !approx(std::fabs(s2.r(1, 1)), 0.5, 1e-10) ||
      !approx(std::fabs(s2.r(2, 2)), 1.0, 1e-10)) {
    detail = "inverse-diagonal strategy picked the wrong pair or diagonal";
    return false;
  }
  detail = "strategies chose pairs (1,2) and (2,3) with the traced diagonals";
  return true;
}

// ---------------------------------------------------------------- criterion 5
bool success_probability_matches_monte_carlo(std::string& detail) {
  const auto t0 = std::chrono::steady_clock::now();
  RandomStream setup(derive_stream(1005, {1}));
  const int draws = 100000;
  int configs = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const UpperTriangular r = random_upper(4, setup);
    for (double sigma : {0.3, 0.7}) {
      const double p = success_probability(r, sigma);
      RandomStream noise(derive_stream(1005, {2, static_cast<std::uint64_t>(
                                                    configs)}));
      int hits = 0;
      std::vector<double> y(4);
      for (int d = 0; d < draws; ++d) {
        for (auto& v : y) v = sigma * noise.gaussian();
        const BabaiResult est = babai(r, y);  // truth is the zero vector
        hits += (est.x[0] == 0 && est.x[1] == 0 && est.x[2] == 0 &&
                 est.x[3] == 0);
      }
      const double p_hat = static_cast<double>(hits) / draws;
      const double se = std::sqrt(p * (1.0 - p) / draws);
      if (std::fabs(p_hat - p) > 3.0 * se) {
        detail = "config " + std::to_string(configs) + ": |" +
                 std::to_string(p_hat) + " - " + std::to_string(p) +
                 "| > 3 SE";
        return false;
      }
      ++configs;
    }
  }
  const double secs = elapsed_s(t0);
  detail = "40 configurations x 1e5 draws within 3 SE in " +
           std::to_string(secs) + " s";
  return secs < 60.0;
}

// ---------------------------------------------------------------- criterion 6
bool oracle_dominance_and_reduction_gain(std::string& detail) {
  RandomStream rng(derive_stream(1006, {1}));
  const BoxConstraint box = BoxConstraint::uniform(4, 0, 3);
  const double sigma = 0.2;
  int plain_errors = 0, reduced_errors = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const UpperTriangular r = random_upper(4, rng);
    std::vector<long long> truth(4);
    for (auto& v : truth) v = rng.bit() + 2 * rng.bit();
    std::vector<double> y(4, 0.0);
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = i; j < 4; ++j)
        y[i] += r(i, j) * static_cast<double>(truth[j]);
      y[i] += sigma * rng.gaussian();
    }
    auto cost = [&](const std::vector<long long>& x) {
      double s = 0.0;
      for (std::size_t i = 0; i < 4; ++i) {
        double d = y[i];
        for (std::size_t j = i; j < 4; ++j)
          d -= r(i, j) * static_cast<double>(x[j]);
        s += d * d;
      }
      return s;
    };
    const std::vector<long long> exact = ils_brute_force(r, y, box);
    const std::vector<long long> plain = clamp_to_box(babai(r, y).x, box);
    if (cost(exact) > cost(plain) + 1e-9) {
      detail = "oracle lost to the rounding estimate";
      return false;
    }
    ReductionState s(r);
    lll(s, 1.0);
    const std::vector<long long> reduced =
        clamp_to_box(reduced_babai(s, y).x, box);
    plain_errors += (plain != truth);
    reduced_errors += (reduced != truth);
  }
  detail = "error rate " + std::to_string(reduced_errors) + "/1000 reduced vs " +
           std::to_string(plain_errors) + "/1000 plain";
  return reduced_errors <= plain_errors;
}

// ------------------------------------------------------- criteria 7, 8 and 9
ExperimentConfig benchmark_config() {
  ExperimentConfig cfg;  // defaults already match the benchmark setup
  cfg.seed = 42;
  return cfg;
}

double pooled_se(double pa, double pb, double n) {
  return std::sqrt((pa * (1.0 - pa) + pb * (1.0 - pb)) / n);
}

bool benchmark_orderings(const ExperimentResult& result,
                         const ExperimentConfig& cfg, std::string& detail) {
  std::map<std::string, std::vector<const BerRecord*>> by_alg;
  for (const BerRecord& rec : result.records)
    by_alg[rec.algorithm].push_back(&rec);
  const double n = static_cast<double>(result.records.front().bits_total);

  for (std::size_t e = 0; e < cfg.ebn0_grid.size(); ++e) {
    if (cfg.ebn0_grid[e] < 14.0) continue;
    const double g1 = by_alg["gfclll1"][e]->ber;
    const double g2 = by_alg["gfclll2"][e]->ber;
    const double ef = by_alg["efclll"][e]->ber;
    const double qr = by_alg["qr-babai"][e]->ber;
    if (g2 > g1 + 3.0 * pooled_se(g2, g1, n)) {
      detail = "inverse-diagonal strategy worse than diagonal-ratio at " +
               std::to_string(cfg.ebn0_grid[e]) + " dB";
      return false;
    }
    if (g1 > ef + 3.0 * pooled_se(g1, ef, n) ||
        g2 > ef + 3.0 * pooled_se(g2, ef, n)) {
      detail = "greedy strategy worse than the fixed-sweep baseline at " +
               std::to_string(cfg.ebn0_grid[e]) + " dB";
      return false;
    }
    for (const char* alg : {"lll", "fclll", "efclll", "gfclll1", "gfclll2"})
      if (by_alg[alg][e]->ber > qr) {
        detail = std::string(alg) + " worse than the unreduced estimate at " +
                 std::to_string(cfg.ebn0_grid[e]) + " dB";
        return false;
      }
  }
  for (auto& [alg, recs] : by_alg)
    for (std::size_t e = 0; e + 1 < recs.size(); ++e) {
      const double pa = recs[e]->ber, pb = recs[e + 1]->ber;
      if (pb > pa + 3.0 * pooled_se(pa, pb, n)) {
        detail = alg + " bit error rate increased at " +
                 std::to_string(cfg.ebn0_grid[e + 1]) + " dB";
        return false;
      }
    }
  return true;
}

bool desk_scale_benchmark(const ExperimentResult& result,
                          const ExperimentConfig& cfg, double secs,
                          std::string& detail) {
  if (!benchmark_orderings(result, cfg, detail)) return false;
  detail = "orderings and monotonicity hold on the 10^4-instance run in " +
           std::to_string(secs) + " s";
  return secs < 300.0;
}

bool budget_protocol(const ExperimentResult& result,
                     const ExperimentConfig& cfg, std::string& detail) {
  long long rows = 0;
  for (const ChannelReduction& cr : result.reductions) {
    if (cr.algorithm != Algorithm::Gfclll1 &&
        cr.algorithm != Algorithm::Gfclll2)
      continue;
    const long long expected =
        std::llround(cfg.budget_ratio * static_cast<double>(cr.k_efclll));
    if (cr.budget != expected || cr.permutations > cr.budget) {
      detail = "channel " + std::to_string(cr.channel) +
               " violated its permutation budget";
      return false;
    }
    ++rows;
  }
  detail = std::to_string(rows) + " greedy channel runs within budget";
  return rows > 0;
}

bool worker_count_determinism(std::string& detail) {
  ExperimentConfig cfg = benchmark_config();
  cfg.measure_timing = false;  // wall time is the one nondeterministic field
  cfg.workers = 1;
  const ExperimentResult serial = run_experiment(cfg);
  cfg.workers = 4;
  const ExperimentResult parallel = run_experiment(cfg);
  const std::string csv1 = render_csv(serial.records);
  const std::string csv2 = render_csv(parallel.records);
  if (csv1 != csv2) {
    detail = "CSV output depends on the worker count";
    return false;
  }
  detail = "1-worker and 4-worker CSV outputs are byte-identical (" +
           std::to_string(csv1.size()) + " bytes)";
  return true;
}

// --------------------------------------------------------------- criterion 10
bool estimate_invariant_under_size_reduction(std::string& detail) {
  RandomStream rng(derive_stream(1010, {1}));
  for (int trial = 0; trial < 1000; ++trial) {
    const UpperTriangular r = random_upper(4, rng);
    ReductionState s(r);
    gfclll(s, (trial % 2) ? Strategy::G1 : Strategy::G2, 1000000, 1.0);
    std::vector<double> y(4);
    for (auto& v : y) v = 2.0 * rng.gaussian();
    const BabaiResult before = reduced_babai(s, y);
    ReductionState t = s;
    size_reduce_all(t);
    const BabaiResult after = reduced_babai(t, y);
    if (before.x != after.x) {
      detail = "estimate changed after extra size reductions";
      return false;
    }
  }
  detail = "1000 instances, estimates identical";
  return true;
}

}  // namespace

int main() {
  int failures = 0;
  const auto report = [&](int id, const char* name, bool ok,
                          const std::string& detail) {
    std::printf("criterion %2d %-4s %s (%s)\n", id, ok ? "pass" : "FAIL",
                name, detail.c_str());
    if (!ok) ++failures;
  };

  std::string detail;
  bool ok;

  ok = classic_reduction_invariants(detail);
  report(1, "classic reduction invariants", ok, detail);

  ok = greedy_reaches_fixed_point(detail);
  report(2, "greedy termination at the effective fixed point", ok, detail);

  ok = swaps_raise_success_probability(detail);
  report(3, "per-swap success-probability gain", ok, detail);

  ok = strategies_diverge_on_witness(detail);
  report(4, "strategy divergence witness", ok, detail);

  ok = success_probability_matches_monte_carlo(detail);
  report(5, "closed-form success probability vs monte carlo", ok, detail);

  ok = oracle_dominance_and_reduction_gain(detail);
  report(6, "oracle dominance and reduction gain", ok, detail);

  {
    const ExperimentConfig cfg = benchmark_config();
    const auto t0 = std::chrono::steady_clock::now();
    const ExperimentResult result = run_experiment(cfg);
    const double secs = elapsed_s(t0);

    ok = desk_scale_benchmark(result, cfg, secs, detail);
    report(7, "desk-scale benchmark orderings", ok, detail);

    ok = budget_protocol(result, cfg, detail);
    report(8, "greedy permutation budget protocol", ok, detail);
  }

  ok = worker_count_determinism(detail);
  report(9, "worker-count determinism", ok, detail);

  ok = estimate_invariant_under_size_reduction(detail);
  report(10, "estimate invariance under size reduction", ok, detail);

  if (failures == 0) {
    std::printf("all 10 criteria passed\n");
    return 0;
  }
  std::printf("%d criteria FAILED\n", failures);
  return 1;
}
