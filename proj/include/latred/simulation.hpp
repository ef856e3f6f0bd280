#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "latred/errors.hpp"
#include "latred/estimation.hpp"
#include "latred/matrix.hpp"
#include "latred/qam.hpp"
#include "latred/qr.hpp"
#include "latred/reduction.hpp"
#include "latred/rng.hpp"

namespace latred {

struct ComplexMatrix {
  Matrix re;
  Matrix im;
};

// i.i.d. standard complex normal entries: (g1 + i g2) / sqrt(2).
inline ComplexMatrix generate_channel(std::size_t n_c, RandomStream& rng) {
  if (n_c < 1) throw ParameterError("channel dimension must be >= 1");
  ComplexMatrix ac{Matrix(n_c, n_c), Matrix(n_c, n_c)};
  constexpr double inv_sqrt2 = 0.7071067811865476;
  for (std::size_t i = 0; i < n_c; ++i)
    for (std::size_t j = 0; j < n_c; ++j) {
      ac.re(i, j) = rng.gaussian() * inv_sqrt2;
      ac.im(i, j) = rng.gaussian() * inv_sqrt2;
    }
  return ac;
}

/* Standard block realification: the real model matrix [[Re, -Im], [Im, Re]]
   acting on stacked (Re x; Im x) vectors reproduces complex multiplication. */
inline Matrix complex_to_real(const ComplexMatrix& ac) {
  if (ac.re.rows() != ac.im.rows() || ac.re.cols() != ac.im.cols())
    throw DimensionError("complex parts must have equal shape");
  const std::size_t m = ac.re.rows(), n = ac.re.cols();
  Matrix a(2 * m, 2 * n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      a(i, j) = ac.re(i, j);
      a(i, j + n) = -ac.im(i, j);
      a(i + m, j) = ac.im(i, j);
      a(i + m, j + n) = ac.re(i, j);
    }
  return a;
}

inline std::vector<double> complex_to_real(const std::vector<double>& re,
                                           const std::vector<double>& im) {
  if (re.size() != im.size())
    throw DimensionError("complex parts must have equal length");
  std::vector<double> out(2 * re.size());
  for (std::size_t i = 0; i < re.size(); ++i) {
    out[i] = re[i];
    out[i + re.size()] = im[i];
  }
  return out;
}

enum class Algorithm { QrBabai, Lll, Fclll, Efclll, Gfclll1, Gfclll2 };

inline const char* algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::QrBabai: return "qr-babai";
    case Algorithm::Lll: return "lll";
    case Algorithm::Fclll: return "fclll";
    case Algorithm::Efclll: return "efclll";
    case Algorithm::Gfclll1: return "gfclll1";
    case Algorithm::Gfclll2: return "gfclll2";
  }
  return "?";
}

inline std::optional<Algorithm> algorithm_from_name(const std::string& s) {
  for (Algorithm a :
       {Algorithm::QrBabai, Algorithm::Lll, Algorithm::Fclll,
        Algorithm::Efclll, Algorithm::Gfclll1, Algorithm::Gfclll2})
    if (s == algorithm_name(a)) return a;
  return std::nullopt;
}

inline std::vector<Algorithm> all_algorithms() {
  return {Algorithm::QrBabai, Algorithm::Lll,     Algorithm::Fclll,
          Algorithm::Efclll,  Algorithm::Gfclll1, Algorithm::Gfclll2};
}

enum class OutputFormat { Csv, Json };

struct ExperimentConfig {
  std::size_t n_complex = 8;
  int qam = 4;
  std::vector<double> ebn0_grid = {2,  4,  6,  8,  10, 12, 14, 16,
                                   18, 20, 22, 24, 26, 28, 30};
  std::size_t channels = 100;
  std::size_t vectors_per_channel = 100;
  std::vector<Algorithm> algorithms = all_algorithms();
  long long sweeps = 1;        // J, the fixed sweep count
  double budget_ratio = 0.7;   // greedy budget = round(ratio * K)
  double delta = 1.0;
  std::uint64_t seed = 42;
  std::string output_path = "ber_results.csv";
  OutputFormat format = OutputFormat::Csv;
  std::size_t workers = 0;     // 0 = one per hardware thread
  bool measure_timing = true;  // false writes reduce_time_s = 0 exactly
};

inline void validate_config(const ExperimentConfig& c) {
  if (c.n_complex < 1) throw ParameterError("dimension must be >= 1");
  if (c.qam != 4 && c.qam != 16)
    throw ParameterError("QAM order must be 4 or 16");
  if (c.ebn0_grid.empty()) throw ParameterError("Eb/N0 grid must be nonempty");
  for (double v : c.ebn0_grid)
    if (!std::isfinite(v)) throw ParameterError("Eb/N0 values must be finite");
  if (c.channels < 1) throw ParameterError("channel count must be >= 1");
  if (c.vectors_per_channel < 1)
    throw ParameterError("vectors per channel must be >= 1");
  if (c.algorithms.empty())
    throw ParameterError("algorithm list must be nonempty");
  if (c.sweeps < 1) throw ParameterError("sweep count must be >= 1");
  if (!(c.budget_ratio > 0.0) || !(c.budget_ratio <= 1.0))
    throw ParameterError("budget ratio must lie in (0, 1]");
  if (!(c.delta > 0.25) || !(c.delta <= 1.0))
    throw ParameterError("delta must lie in (1/4, 1]");
}

// One row of the experiment output (the CSV schema, in column order).
struct BerRecord {
  std::string algorithm;
  double ebn0_db = 0.0;
  long long bits_total = 0;
  long long bit_errors = 0;
  double ber = 0.0;
  long long permutations_total = 0;
  double reduce_time_s = 0.0;
};

// Per-channel reduction accounting, mainly for budget-compliance checks.
struct ChannelReduction {
  std::size_t channel = 0;
  Algorithm algorithm = Algorithm::QrBabai;
  long long permutations = 0;
  long long budget = -1;     // greedy algorithms only; -1 otherwise
  long long k_efclll = 0;    // this channel's K from the probe run
  double seconds = 0.0;
};

struct ExperimentResult {
  std::vector<BerRecord> records;
  std::vector<ChannelReduction> reductions;  // channel-major, config order
};

// The real-valued model y = A x + v with x integer in a box.
struct LinearModelInstance {
  Matrix a;
  std::vector<long long> x_true;
  std::vector<double> y;
  double sigma = 0.0;
  BoxConstraint box;
};

/* Draw one transmission through a fixed model matrix: uniform bits ->
   shifted QAM symbols, then additive white Gaussian noise of the given
   per-dimension standard deviation. */
inline LinearModelInstance draw_instance(const Matrix& a_model,
                                         const QamSpec& spec, double sigma,
                                         RandomStream& rng) {
  const std::size_t n = a_model.cols();
  LinearModelInstance inst;
  inst.a = a_model;
  inst.sigma = sigma;
  inst.box = BoxConstraint::uniform(
      n, 0, static_cast<long long>(spec.pam_levels.size()) - 1);
  inst.x_true = qam_encode(
      rng.bits(n * static_cast<std::size_t>(spec.bits_per_dim)), spec);
  std::vector<double> xd(n);
  for (std::size_t i = 0; i < n; ++i)
    xd[i] = static_cast<double>(inst.x_true[i]);
  inst.y = a_model * xd;
  for (double& v : inst.y) v += sigma * rng.gaussian();
  return inst;
}

namespace detail {

struct ChannelOutcome {
  // errors[algorithm index][grid index], algorithms in config order
  std::vector<std::vector<long long>> errors;
  std::vector<ChannelReduction> reductions;
};

/* Everything one channel realization contributes: draw the channel, build
   the shifted-integer real model, factorize once, probe EfcLLL for K, run
   every configured reduction against the shared R, then push the V noise
   draws per grid point through each algorithm's Babai pipeline. */
inline ChannelOutcome run_channel(const ExperimentConfig& cfg,
                                  const QamSpec& qspec,
                                  const std::vector<double>& sigmas,
                                  std::size_t channel) {
  constexpr std::uint64_t kChannelTag = 0x43, kVectorTag = 0x56;
  const std::size_t n = 2 * cfg.n_complex;
  const std::size_t n_algs = cfg.algorithms.size();
  ChannelOutcome out;
  out.errors.assign(n_algs, std::vector<long long>(sigmas.size(), 0));

  RandomStream channel_rng(
      derive_stream(cfg.seed, {kChannelTag, channel}));
  const ComplexMatrix ac = generate_channel(cfg.n_complex, channel_rng);
  Matrix a = complex_to_real(ac);
  // Fold the level spacing (levels = 2 * shifted - (q-1)) into the model so
  // the lattice domain is the consecutive-integer box directly.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) *= 2.0;

  const QrFactors qr = qr_factorize(a);

  // Probe run fixing this channel's permutation count K and greedy budget.
  ReductionState probe(qr.r);
  const ReductionReport probe_rep = efclll(probe, cfg.sweeps, cfg.delta);
  const long long k = probe_rep.permutations_performed;
  const long long budget =
      std::llround(cfg.budget_ratio * static_cast<double>(k));

  std::vector<ReductionState> states;
  states.reserve(n_algs);
  for (Algorithm alg : cfg.algorithms) {
    ChannelReduction cr;
    cr.channel = channel;
    cr.algorithm = alg;
    cr.k_efclll = k;
    ReductionReport rep;
    switch (alg) {
      case Algorithm::QrBabai:
        states.emplace_back(qr.r);
        break;
      case Algorithm::Lll:
        states.emplace_back(qr.r);
        rep = lll(states.back(), cfg.delta);
        break;
      case Algorithm::Fclll:
        states.emplace_back(qr.r);
        rep = fclll(states.back(), cfg.sweeps, cfg.delta);
        break;
      case Algorithm::Efclll:
        states.push_back(probe);
        rep = probe_rep;
        break;
      case Algorithm::Gfclll1:
      case Algorithm::Gfclll2: {
        states.emplace_back(qr.r);
        const Strategy strat = (alg == Algorithm::Gfclll1) ? Strategy::G1
                                                           : Strategy::G2;
        rep = gfclll(states.back(), strat, budget, cfg.delta);
        cr.budget = budget;
        break;
      }
    }
    cr.permutations = rep.permutations_performed;
    cr.seconds = cfg.measure_timing ? rep.wall_seconds : 0.0;
    out.reductions.push_back(cr);
  }

  const BoxConstraint box = BoxConstraint::uniform(
      n, 0, static_cast<long long>(qspec.pam_levels.size()) - 1);
  for (std::size_t e = 0; e < sigmas.size(); ++e)
    for (std::size_t t = 0; t < cfg.vectors_per_channel; ++t) {
      RandomStream rng(
          derive_stream(cfg.seed, {kVectorTag, channel, e, t}));
      const LinearModelInstance inst =
          draw_instance(a, qspec, sigmas[e], rng);
      const std::vector<int> bits_true = qam_decode(inst.x_true, qspec);
      const std::vector<double> y_t = transpose_times(qr.q1, inst.y);
      for (std::size_t ai = 0; ai < n_algs; ++ai) {
        const BabaiResult est = reduced_babai(states[ai], y_t);
        const std::vector<int> bits_hat =
            qam_decode(clamp_to_box(est.x, box), qspec);
        long long errs = 0;
        for (std::size_t b = 0; b < bits_true.size(); ++b)
          errs += (bits_true[b] != bits_hat[b]);
        out.errors[ai][e] += errs;
      }
    }
  return out;
}

}  // namespace detail

inline ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  validate_config(cfg);
  const QamSpec qspec = make_qam(cfg.qam);
  std::vector<double> sigmas(cfg.ebn0_grid.size());
  for (std::size_t e = 0; e < sigmas.size(); ++e)
    sigmas[e] = ebn0_to_sigma(cfg.ebn0_grid[e], qspec);

  std::vector<detail::ChannelOutcome> outcomes(cfg.channels);
  std::size_t workers = cfg.workers != 0
                            ? cfg.workers
                            : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<std::size_t>(workers, cfg.channels);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t c; (c = next.fetch_add(1)) < cfg.channels;) {
      try {
        outcomes[c] = detail::run_channel(cfg, qspec, sigmas, c);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  // Deterministic ordered merge, independent of worker scheduling.
  ExperimentResult result;
  const long long bits_total = static_cast<long long>(cfg.channels) *
                               static_cast<long long>(cfg.vectors_per_channel) *
                               static_cast<long long>(2 * cfg.n_complex) *
                               qspec.bits_per_dim;
  for (std::size_t ai = 0; ai < cfg.algorithms.size(); ++ai) {
    long long total_perms = 0;
    double total_time = 0.0;
    for (std::size_t c = 0; c < cfg.channels; ++c) {
      total_perms += outcomes[c].reductions[ai].permutations;
      total_time += outcomes[c].reductions[ai].seconds;
    }
    for (std::size_t e = 0; e < cfg.ebn0_grid.size(); ++e) {
      BerRecord rec;
      rec.algorithm = algorithm_name(cfg.algorithms[ai]);
      rec.ebn0_db = cfg.ebn0_grid[e];
      rec.bits_total = bits_total;
      for (std::size_t c = 0; c < cfg.channels; ++c)
        rec.bit_errors += outcomes[c].errors[ai][e];
      rec.ber = static_cast<double>(rec.bit_errors) /
                static_cast<double>(rec.bits_total);
      rec.permutations_total = total_perms;
      rec.reduce_time_s =
          total_time / static_cast<double>(cfg.ebn0_grid.size());
      result.records.push_back(std::move(rec));
    }
  }
  for (std::size_t c = 0; c < cfg.channels; ++c)
    for (const ChannelReduction& cr : outcomes[c].reductions)
      result.reductions.push_back(cr);
  return result;
}

}  // namespace latred
