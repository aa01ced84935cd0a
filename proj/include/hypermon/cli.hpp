// Command implementations behind the hypermon executable. Kept in the
// library so the commands are testable without spawning processes.

#ifndef HYPERMON_CLI_HPP
#define HYPERMON_CLI_HPP

#include <iosfwd>
#include <optional>
#include <string>

#include "hypermon/gen.hpp"

namespace hypermon {

struct RunConfig {
  std::string formula_path;          // or inline text via `formula_text`
  std::string formula_text;
  std::string traces_path;           // "-" reads the stream protocol from stdin
  enum class Model { Parallel, Sequential } model = Model::Sequential;
  std::optional<std::uint64_t> bound;  // sequential bounded model
  enum class Mode { Online, Offline } mode = Mode::Online;
  bool spec_analysis = false;
  bool trace_analysis = false;
  bool trie = false;
  bool keep_going = false;
  bool dump_template = false;
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
  std::string stats_path;            // per-trace CSV
  std::size_t state_cap = 100000;
};

// Exit status: 0 satisfied, 1 violation, 2 usage or protocol error.
int cmd_monitor(const RunConfig& cfg, std::istream& in, std::ostream& out, std::ostream& err);

int cmd_analyze(const RunConfig& cfg, std::ostream& out, std::ostream& err);

int cmd_monitorability(const RunConfig& cfg, const std::string& model_name, std::ostream& out,
                       std::ostream& err);

struct GenConfig {
  GeneratorSpec spec;
  std::string output_path;    // trace file; "-" for stdout
  std::string formula_path;   // bounded-obsdet formula emission, optional
};

int cmd_gen(const GenConfig& cfg, std::ostream& out, std::ostream& err);

struct BenchConfig {
  RunConfig run;
  GeneratorSpec spec;
};

// Generates a corpus and monitors it with the configured optimizations,
// reporting verdict and counters.
int cmd_bench(const BenchConfig& cfg, std::ostream& out, std::ostream& err);

const char* csv_header();

}  // namespace hypermon

#endif  // HYPERMON_CLI_HPP
