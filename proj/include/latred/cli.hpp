#pragma once

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "latred/errors.hpp"
#include "latred/simulation.hpp"

namespace latred {

struct ParseResult {
  ExperimentConfig config;
  bool dry_run = false;
  bool should_exit = false;  // help or error; message and exit_code are set
  int exit_code = 0;
  std::string message;
};

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::size_t from = 0;
  while (true) {
    const std::size_t at = s.find(sep, from);
    if (at == std::string::npos) {
      parts.push_back(s.substr(from));
      return parts;
    }
    parts.push_back(s.substr(from, at - from));
    from = at + 1;
  }
}

inline double parse_double_strict(const std::string& s, const char* flag) {
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0' || errno == ERANGE ||
      !std::isfinite(v))
    throw ParameterError(std::string(flag) + ": invalid number '" + s + "'");
  return v;
}

}  // namespace detail

/* Eb/N0 grid syntax: either "start:step:stop" (inclusive arithmetic
   progression) or a comma-separated list of dB values. */
inline std::vector<double> parse_ebn0_grid(const std::string& s) {
  std::vector<double> grid;
  if (s.find(':') != std::string::npos) {
    const auto parts = detail::split(s, ':');
    if (parts.size() != 3)
      throw ParameterError("--ebn0: expected start:step:stop");
    const double start = detail::parse_double_strict(parts[0], "--ebn0");
    const double step = detail::parse_double_strict(parts[1], "--ebn0");
    const double stop = detail::parse_double_strict(parts[2], "--ebn0");
    if (!(step > 0.0)) throw ParameterError("--ebn0: step must be > 0");
    const double eps = 1e-9 * std::max(1.0, std::fabs(step));
    for (long long k = 0;; ++k) {
      const double v = start + static_cast<double>(k) * step;
      if (v > stop + eps) break;
      grid.push_back(v);
    }
  } else {
    for (const std::string& tok : detail::split(s, ','))
      grid.push_back(detail::parse_double_strict(tok, "--ebn0"));
  }
  if (grid.empty()) throw ParameterError("--ebn0: grid is empty");
  return grid;
}

inline ParseResult parse_args(int argc, const char* const* argv) {
  ParseResult res;
  ExperimentConfig& cfg = res.config;

  std::string ebn0_str = "2:2:30";
  std::string algorithms_str =
      "qr-babai,lll,fclll,efclll,gfclll1,gfclll2";
  std::string format_str = "csv";
  bool no_timing = false;

  CLI::App app{
      "Lattice-reduction-aided MIMO detection benchmark: Monte-Carlo BER "
      "and reduction-timing comparison of Babai estimators"};
  app.add_option("--n", cfg.n_complex,
                 "Complex channel dimension (real model has size 2n)")
      ->capture_default_str();
  app.add_option("--qam", cfg.qam, "Constellation order, 4 or 16")
      ->capture_default_str();
  app.add_option("--ebn0", ebn0_str,
                 "Eb/N0 grid in dB: start:step:stop or v1,v2,...")
      ->capture_default_str();
  app.add_option("--channels", cfg.channels,
                 "Number of channel realizations")
      ->capture_default_str();
  app.add_option("--vectors", cfg.vectors_per_channel,
                 "Signal/noise draws per channel per grid point")
      ->capture_default_str();
  app.add_option("--algorithms", algorithms_str,
                 "Comma-separated subset of "
                 "qr-babai,lll,fclll,efclll,gfclll1,gfclll2")
      ->capture_default_str();
  app.add_option("--J", cfg.sweeps, "Sweep count for fclll/efclll")
      ->capture_default_str();
  app.add_option("--budget-ratio", cfg.budget_ratio,
                 "Greedy permutation budget as a fraction of K")
      ->capture_default_str();
  app.add_option("--delta", cfg.delta, "Reduction parameter in (1/4, 1]")
      ->capture_default_str();
  app.add_option("--seed", cfg.seed,
                 "Master seed (env LATRED_SEED overrides)")
      ->capture_default_str();
  app.add_option("--output", cfg.output_path, "Result file path")
      ->capture_default_str();
  app.add_option("--format", format_str, "Output format: csv or json")
      ->capture_default_str();
  app.add_option("--workers", cfg.workers,
                 "Worker thread cap (0 = one per hardware thread)")
      ->capture_default_str();
  app.add_flag("--dry-run", res.dry_run,
               "Print the resolved configuration and exit");
  app.add_flag("--no-timing", no_timing,
               "Record reduce_time_s as 0 for byte-stable output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    res.should_exit = true;
    res.exit_code = 0;
    res.message = app.help();
    return res;
  } catch (const CLI::ParseError& e) {
    res.should_exit = true;
    res.exit_code = 2;
    res.message = std::string(e.what()) + "\n";
    return res;
  }

  cfg.measure_timing = !no_timing;

  try {
    if (const char* env = std::getenv("LATRED_SEED"); env && *env) {
      char* end = nullptr;
      errno = 0;
      const unsigned long long v = std::strtoull(env, &end, 10);
      if (errno != 0 || end == env || *end != '\0')
        throw ParameterError(
            "LATRED_SEED: must be a decimal 64-bit unsigned integer");
      cfg.seed = v;
    }

    cfg.ebn0_grid = parse_ebn0_grid(ebn0_str);

    cfg.algorithms.clear();
    for (const std::string& tok : detail::split(algorithms_str, ',')) {
      const auto alg = algorithm_from_name(tok);
      if (!alg)
        throw ParameterError("--algorithms: unknown algorithm '" + tok +
                             "'");
      for (Algorithm seen : cfg.algorithms)
        if (seen == *alg)
          throw ParameterError("--algorithms: '" + tok + "' listed twice");
      cfg.algorithms.push_back(*alg);
    }

    if (format_str == "csv")
      cfg.format = OutputFormat::Csv;
    else if (format_str == "json")
      cfg.format = OutputFormat::Json;
    else
      throw ParameterError("--format: must be csv or json");

    if (cfg.n_complex < 1) throw ParameterError("--n: must be >= 1");
    if (cfg.qam != 4 && cfg.qam != 16)
      throw ParameterError("--qam: must be 4 or 16");
    if (cfg.channels < 1) throw ParameterError("--channels: must be >= 1");
    if (cfg.vectors_per_channel < 1)
      throw ParameterError("--vectors: must be >= 1");
    if (cfg.sweeps < 1) throw ParameterError("--J: must be >= 1");
    if (!(cfg.budget_ratio > 0.0) || !(cfg.budget_ratio <= 1.0))
      throw ParameterError("--budget-ratio: must lie in (0, 1]");
    if (!(cfg.delta > 0.25) || !(cfg.delta <= 1.0))
      throw ParameterError("--delta: must lie in (1/4, 1]");
    if (cfg.output_path.empty())
      throw ParameterError("--output: must be nonempty");
  } catch (const Error& e) {
    res.should_exit = true;
    res.exit_code = 2;
    res.message = std::string(e.what()) + "\n";
    return res;
  }
  return res;
}

inline nlohmann::ordered_json config_to_json(const ExperimentConfig& cfg) {
  nlohmann::ordered_json j;
  j["n_complex"] = cfg.n_complex;
  j["qam"] = cfg.qam;
  j["ebn0_grid"] = cfg.ebn0_grid;
  j["channels"] = cfg.channels;
  j["vectors_per_channel"] = cfg.vectors_per_channel;
  std::vector<std::string> names;
  for (Algorithm a : cfg.algorithms) names.emplace_back(algorithm_name(a));
  j["algorithms"] = names;
  j["J"] = cfg.sweeps;
  j["budget_ratio"] = cfg.budget_ratio;
  j["delta"] = cfg.delta;
  j["seed"] = cfg.seed;
  j["output_path"] = cfg.output_path;
  j["format"] = (cfg.format == OutputFormat::Csv) ? "csv" : "json";
  j["workers"] = cfg.workers;
  j["measure_timing"] = cfg.measure_timing;
  return j;
}

inline std::string render_csv(const std::vector<BerRecord>& records) {
  std::string out =
      "algorithm,ebn0_db,bits_total,bit_errors,ber,permutations_total,"
      "reduce_time_s\n";
  char buf[256];
  for (const BerRecord& r : records) {
    std::snprintf(buf, sizeof buf, "%s,%g,%lld,%lld,%.10g,%lld,%.9g\n",
                  r.algorithm.c_str(), r.ebn0_db, r.bits_total, r.bit_errors,
                  r.ber, r.permutations_total, r.reduce_time_s);
    out += buf;
  }
  return out;
}

// Per-algorithm total reduction time, algorithms in first-appearance order.
inline std::vector<std::pair<std::string, double>> summarize_timing(
    const std::vector<BerRecord>& records) {
  std::vector<std::pair<std::string, double>> rows;
  for (const BerRecord& r : records) {
    bool found = false;
    for (auto& row : rows)
      if (row.first == r.algorithm) {
        row.second += r.reduce_time_s;
        found = true;
        break;
      }
    if (!found) rows.emplace_back(r.algorithm, r.reduce_time_s);
  }
  return rows;
}

inline std::string render_json(const ExperimentResult& result,
                               const ExperimentConfig& cfg) {
  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  j["config"] = config_to_json(cfg);
  nlohmann::ordered_json recs = nlohmann::ordered_json::array();
  for (const BerRecord& r : result.records) {
    nlohmann::ordered_json jr;
    jr["algorithm"] = r.algorithm;
    jr["ebn0_db"] = r.ebn0_db;
    jr["bits_total"] = r.bits_total;
    jr["bit_errors"] = r.bit_errors;
    jr["ber"] = r.ber;
    jr["permutations_total"] = r.permutations_total;
    jr["reduce_time_s"] = r.reduce_time_s;
    recs.push_back(std::move(jr));
  }
  j["records"] = std::move(recs);
  nlohmann::ordered_json timing = nlohmann::ordered_json::array();
  for (const auto& [name, total] : summarize_timing(result.records)) {
    nlohmann::ordered_json row;
    row["algorithm"] = name;
    row["total_reduce_time_s"] = total;
    timing.push_back(std::move(row));
  }
  j["timing_summary"] = std::move(timing);
  return j.dump(2) + "\n";
}

// Write the experiment output to config.output_path in config.format.
inline void emit_results(const ExperimentResult& result,
                         const ExperimentConfig& cfg) {
  const std::string body = (cfg.format == OutputFormat::Csv)
                               ? render_csv(result.records)
                               : render_json(result, cfg);
  std::ofstream ofs(cfg.output_path, std::ios::binary | std::ios::trunc);
  if (!ofs)
    throw IoError("cannot open '" + cfg.output_path + "' for writing");
  ofs.write(body.data(), static_cast<std::streamsize>(body.size()));
  ofs.flush();
  if (!ofs) throw IoError("failed writing '" + cfg.output_path + "'");
}

}  // namespace latred
