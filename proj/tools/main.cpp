#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "hypermon/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"hypermon - runtime verification for HyperLTL over finite traces"};
  app.require_subcommand(1);

  hypermon::RunConfig cfg;
  std::string model = "sequential";
  std::string mode = "online";
  std::uint64_t bound_flag = 0;

  auto add_formula_opts = [&](CLI::App* cmd) {
    cmd->add_option("-f,--formula", cfg.formula_path, "formula file");
    cmd->add_option("--formula-text", cfg.formula_text, "formula given inline");
  };

  // monitor
  CLI::App* monitor = app.add_subcommand("monitor", "monitor a trace set or stream");
  add_formula_opts(monitor);
  monitor->add_option("-t,--traces", cfg.traces_path, "trace file, or - for stdin")
      ->required();
  monitor->add_option("--model", model, "parallel|sequential")
      ->check(CLI::IsMember({"parallel", "sequential"}));
  monitor->add_option("--bound", bound_flag, "sequential bounded model: max trace count");
  monitor->add_option("--mode", mode, "online|offline")
      ->check(CLI::IsMember({"online", "offline"}));
  monitor->add_flag("--spec-analysis", cfg.spec_analysis, "symmetry/transitivity/reflexivity");
  monitor->add_flag("--trace-analysis", cfg.trace_analysis, "dominance-based storage minimization");
  monitor->add_flag("--trie", cfg.trie, "trie storage backend");
  monitor->add_flag("--keep-going", cfg.keep_going, "continue after violations");
  monitor->add_flag("--dump-template", cfg.dump_template, "print the monitor template");
  monitor->add_option("--stats", cfg.stats_path, "per-trace statistics CSV");
  monitor->add_option("--seed", cfg.seed, "seed (recorded in reruns)");
  monitor->add_option("--jobs", cfg.jobs, "offline tuple fan-out");
  monitor->add_option("--state-cap", cfg.state_cap, "monitor state cap");

  // analyze
  CLI::App* analyze = app.add_subcommand("analyze", "specification analysis");
  add_formula_opts(analyze);
  analyze->add_option("--state-cap", cfg.state_cap, "automaton state cap");

  // monitorability
  std::string monability_model = "unbounded";
  CLI::App* monability = app.add_subcommand("monitorability", "decide monitorability");
  add_formula_opts(monability);
  monability->add_option("--model", monability_model, "unbounded|bounded|parallel")
      ->check(CLI::IsMember({"unbounded", "bounded", "parallel"}));
  monability->add_option("--bound", bound_flag, "bound for bounded/parallel");
  monability->add_option("--state-cap", cfg.state_cap, "automaton state cap");

  // gen
  hypermon::GenConfig gen;
  std::string family = "random";
  std::string aps_csv = "a";
  std::string in_csv = "i";
  std::string out_csv = "o";
  CLI::App* gen_cmd = app.add_subcommand("gen", "generate benchmark traces");
  gen_cmd->add_option("--family", family, "random|perturbed|bounded-obsdet")
      ->check(CLI::IsMember({"random", "perturbed", "bounded-obsdet"}));
  gen_cmd->add_option("--count", gen.spec.count, "number of traces");
  gen_cmd->add_option("--length", gen.spec.length, "trace length");
  gen_cmd->add_option("--seed", gen.spec.seed, "random seed");
  gen_cmd->add_option("--aps", aps_csv, "comma-separated proposition names");
  gen_cmd->add_option("--flip-prob", gen.spec.flip_prob, "perturbed: bit flip probability");
  gen_cmd->add_option("--n", gen.spec.obsdet_n, "bounded-obsdet: guard window");
  gen_cmd->add_option("--c", gen.spec.obsdet_c, "bounded-obsdet: response window slack");
  gen_cmd->add_option("--inputs", in_csv, "bounded-obsdet: comma-separated input propositions");
  gen_cmd->add_option("--outputs", out_csv, "bounded-obsdet: comma-separated output propositions");
  gen_cmd->add_option("--fault-prob", gen.spec.fault_prob, "bounded-obsdet: output fault rate");
  gen_cmd->add_option("-o,--output", gen.output_path, "trace file output, - for stdout");
  gen_cmd->add_option("--emit-formula", gen.formula_path, "bounded-obsdet: formula file output");

  // bench
  hypermon::BenchConfig bench;
  CLI::App* bench_cmd = app.add_subcommand("bench", "generate a corpus and monitor it");
  bench_cmd->add_option("--family", family, "random|perturbed|bounded-obsdet")
      ->check(CLI::IsMember({"random", "perturbed", "bounded-obsdet"}));
  bench_cmd->add_option("--count", bench.spec.count, "number of traces");
  bench_cmd->add_option("--length", bench.spec.length, "trace length");
  bench_cmd->add_option("--seed", bench.spec.seed, "random seed");
  bench_cmd->add_option("--n", bench.spec.obsdet_n, "bounded-obsdet: guard window");
  bench_cmd->add_option("--c", bench.spec.obsdet_c, "bounded-obsdet: response window slack");
  bench_cmd->add_option("--flip-prob", bench.spec.flip_prob, "perturbed: bit flip probability");
  bench_cmd->add_option("--fault-prob", bench.spec.fault_prob, "bounded-obsdet: output fault rate");
  bench_cmd->add_option("-f,--formula", bench.run.formula_path, "formula file");
  bench_cmd->add_option("--formula-text", bench.run.formula_text, "formula given inline");
  bench_cmd->add_flag("--spec-analysis", bench.run.spec_analysis, "enable specification analysis");
  bench_cmd->add_flag("--trace-analysis", bench.run.trace_analysis, "enable trace analysis");
  bench_cmd->add_flag("--trie", bench.run.trie, "trie storage backend");
  bench_cmd->add_option("--stats", bench.run.stats_path, "per-trace statistics CSV");

  CLI11_PARSE(app, argc, argv);

  auto split_csv = [](const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
      if (c == ',') {
        if (!cur.empty()) out.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
  };

  if (monitor->parsed()) {
    cfg.model =
        model == "parallel" ? hypermon::RunConfig::Model::Parallel
                            : hypermon::RunConfig::Model::Sequential;
    cfg.mode = mode == "offline" ? hypermon::RunConfig::Mode::Offline
                                 : hypermon::RunConfig::Mode::Online;
    if (monitor->count("--bound")) cfg.bound = bound_flag;
    if (cfg.formula_path.empty() && cfg.formula_text.empty()) {
      std::cerr << "error: monitor needs --formula or --formula-text\n";
      return 2;
    }
    return hypermon::cmd_monitor(cfg, std::cin, std::cout, std::cerr);
  }
  if (analyze->parsed()) {
    if (cfg.formula_path.empty() && cfg.formula_text.empty()) {
      std::cerr << "error: analyze needs --formula or --formula-text\n";
      return 2;
    }
    return hypermon::cmd_analyze(cfg, std::cout, std::cerr);
  }
  if (monability->parsed()) {
    if (monability->count("--bound")) cfg.bound = bound_flag;
    if (cfg.formula_path.empty() && cfg.formula_text.empty()) {
      std::cerr << "error: monitorability needs --formula or --formula-text\n";
      return 2;
    }
    return hypermon::cmd_monitorability(cfg, monability_model, std::cout, std::cerr);
  }
  if (gen_cmd->parsed()) {
    gen.spec.kind = family == "perturbed"      ? hypermon::GeneratorSpec::Kind::Perturbed
                    : family == "bounded-obsdet" ? hypermon::GeneratorSpec::Kind::BoundedObsdet
                                                 : hypermon::GeneratorSpec::Kind::Random;
    gen.spec.aps = split_csv(aps_csv);
    gen.spec.input_aps = split_csv(in_csv);
    gen.spec.output_aps = split_csv(out_csv);
    return hypermon::cmd_gen(gen, std::cout, std::cerr);
  }
  if (bench_cmd->parsed()) {
    bench.spec.kind = family == "perturbed"      ? hypermon::GeneratorSpec::Kind::Perturbed
                      : family == "bounded-obsdet" ? hypermon::GeneratorSpec::Kind::BoundedObsdet
                                                   : hypermon::GeneratorSpec::Kind::Random;
    return hypermon::cmd_bench(bench, std::cout, std::cerr);
  }
  return 2;
}
