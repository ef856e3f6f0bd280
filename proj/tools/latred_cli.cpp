#include <cstdio>
#include <exception>

#include "latred/cli.hpp"
#include "latred/latred.hpp"

int main(int argc, char** argv) {
  latred::ParseResult parsed = latred::parse_args(argc, argv);
  if (parsed.should_exit) {
    std::fputs(parsed.message.c_str(),
               parsed.exit_code == 0 ? stdout : stderr);
    return parsed.exit_code;
  }
  if (parsed.dry_run) {
    std::printf("%s\n", latred::config_to_json(parsed.config).dump(2).c_str());
    return 0;
  }
  try {
    const latred::ExperimentResult result =
        latred::run_experiment(parsed.config);
    latred::emit_results(result, parsed.config);
    std::printf("%-10s %s\n", "algorithm", "total_reduce_time_s");
    for (const auto& [name, total] :
         latred::summarize_timing(result.records))
      std::printf("%-10s %.9g\n", name.c_str(), total);
    std::printf("wrote %s\n", parsed.config.output_path.c_str());
    return 0;
  } catch (const latred::IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const latred::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
