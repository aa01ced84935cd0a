#include "hypermon/cli.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "hypermon/analysis.hpp"
#include "hypermon/engine.hpp"
#include "hypermon/monitorability.hpp"
#include "hypermon/triestore.hpp"

namespace hypermon {

namespace {

QuantifiedFormula load_formula(const RunConfig& cfg) {
  if (!cfg.formula_text.empty()) return parse_formula(cfg.formula_text);
  std::ifstream in(cfg.formula_path);
  if (!in) throw std::runtime_error("cannot open formula file: " + cfg.formula_path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_formula(ss.str());
}

std::vector<TracePtr> load_traces(const RunConfig& cfg, std::istream& stdin_stream) {
  if (cfg.traces_path == "-") {
    // Sequential stream protocol on stdin, collected into whole traces.
    std::vector<TracePtr> out;
    Trace current;
    bool open = false;
    std::string line;
    std::uint64_t next_id = 0;
    auto close = [&]() {
      if (!open) return;
      current.id = next_id++;
      if (current.name.empty()) current.name = std::to_string(current.id);
      out.push_back(std::make_shared<Trace>(std::move(current)));
      current = Trace{};
      open = false;
    };
    while (std::getline(stdin_stream, line)) {
      auto ev = parse_stream_line(line);
      if (!ev) continue;
      switch (ev->kind) {
        case StreamEvent::Kind::BeginTrace:
          close();
          open = true;
          current.name = ev->name;
          break;
        case StreamEvent::Kind::Step:
          if (!open) throw ProtocolError("step before #trace");
          current.steps.push_back(ev->step);
          break;
        case StreamEvent::Kind::End: close(); break;
        case StreamEvent::Kind::ParallelStep:
          throw ProtocolError("#step lines belong to the parallel model");
      }
    }
    close();
    return out;
  }
  std::ifstream in(cfg.traces_path);
  if (!in) throw std::runtime_error("cannot open trace file: " + cfg.traces_path);
  return parse_trace_file(in);
}

void print_witness(std::ostream& out, const TraceTuple& witness) {
  if (witness.entries.empty()) return;
  out << "witness:\n";
  for (const TracePtr& t : witness.entries) {
    out << "# trace " << t->name << "\n";
    out << format_trace(*t) << "\n";
  }
}

struct CsvWriter {
  std::ofstream file;
  explicit CsvWriter(const std::string& path) {
    if (path.empty()) return;
    file.open(path);
    if (!file) throw std::runtime_error("cannot open stats file: " + path);
    file << csv_header() << "\n";
  }
  void row(const SessionStats& s) {
    if (!file.is_open()) return;
    file << s.traces_seen << "," << s.traces_stored << "," << s.traces_pruned << ","
         << s.violations_found << "," << s.tuples_checked << "," << s.instances_live << ","
         << s.runtime_ms << "\n";
  }
};

int report_verdict(std::ostream& out, const Verdict& v) {
  if (v.kind == VerdictKind::Satisfied) {
    out << "verdict: satisfied\n";
    return 0;
  }
  out << "verdict: violation\n";
  if (v.witness) print_witness(out, *v.witness);
  return 1;
}

int monitor_parallel_stdin(const RunConfig& cfg, const QuantifiedFormula& phi,
                           std::istream& stdin_stream, std::ostream& out, std::ostream& err,
                           EngineOptions opts) {
  std::string line;
  std::optional<Verdict> verdict;
  std::unique_ptr<ParallelOnlineSession> naive;
  std::unique_ptr<TrieParallelSession> trie;
  auto ensure = [&](std::size_t streams) {
    if (naive || trie) return;
    if (cfg.trie)
      trie = std::make_unique<TrieParallelSession>(phi, streams, opts);
    else
      naive = std::make_unique<ParallelOnlineSession>(phi, streams, opts);
  };
  while (std::getline(stdin_stream, line)) {
    auto ev = parse_stream_line(line);
    if (!ev) continue;
    if (ev->kind == StreamEvent::Kind::End) break;
    if (ev->kind != StreamEvent::Kind::ParallelStep) {
      err << "error: the parallel model expects #step lines\n";
      return 2;
    }
    ensure(ev->parallel.size());
    std::vector<std::optional<Step>> steps(ev->parallel.begin(), ev->parallel.end());
    verdict = trie ? trie->push(steps) : naive->push(steps);
    if (verdict) break;
  }
  if (!naive && !trie) {
    err << "error: no #step input\n";
    return 2;
  }
  Verdict v = verdict ? *verdict : (trie ? trie->finish() : naive->finish());
  return report_verdict(out, v);
}

}  // namespace

const char* csv_header() {
  return "traces_seen,traces_stored,traces_pruned,violations_found,tuples_checked,"
         "instances_live,runtime_ms";
}

int cmd_monitor(const RunConfig& cfg, std::istream& in, std::ostream& out, std::ostream& err) {
  try {
    QuantifiedFormula phi = load_formula(cfg);
    if (cfg.trie && cfg.trace_analysis) {
      err << "error: --trie and --trace-analysis cannot be combined\n";
      return 2;
    }
    if (cfg.bound && *cfg.bound < 1) {
      err << "error: --bound must be at least 1\n";
      return 2;
    }
    if (cfg.dump_template) {
      MonitorTemplate tpl = MonitorTemplate::build_for(phi, MonitorBuildOptions{cfg.state_cap});
      out << tpl.dump();
    }

    CsvWriter csv(cfg.stats_path);
    EngineOptions opts;
    opts.spec_analysis = cfg.spec_analysis;
    opts.trace_analysis = cfg.trace_analysis;
    opts.keep_going = cfg.keep_going;
    opts.bound = cfg.bound;
    opts.jobs = cfg.jobs;
    opts.state_cap = cfg.state_cap;
    opts.on_trace = [&](const SessionStats& s) { csv.row(s); };

    if (cfg.model == RunConfig::Model::Parallel && cfg.traces_path == "-" &&
        cfg.mode == RunConfig::Mode::Online)
      return monitor_parallel_stdin(cfg, phi, in, out, err, opts);

    std::vector<TracePtr> traces = load_traces(cfg, in);

    Verdict v;
    bool exceeded = false;
    if (cfg.model == RunConfig::Model::Parallel) {
      if (cfg.mode == RunConfig::Mode::Offline) {
        v = run_parallel_offline(phi, traces);
      } else if (cfg.trie) {
        v = run_trie_parallel(phi, traces, opts);
      } else {
        v = run_parallel_online(phi, traces, opts);
      }
    } else if (cfg.mode == RunConfig::Mode::Offline) {
      switch (phi.shape()) {
        case PrefixShape::ForallOnly: v = run_offline_universal(phi, traces, cfg.jobs); break;
        case PrefixShape::ForallExists:
        case PrefixShape::ExistsForall: v = run_offline_alternating(phi, traces); break;
        default: v = run_parallel_offline(phi, traces); break;
      }
    } else if (cfg.trie) {
      TrieSequentialSession session(phi, opts);
      for (const TracePtr& t : traces) {
        session.begin_trace(t->name);
        for (const Step& s : t->steps) session.push_step(s);
        session.end_trace();
      }
      v = session.finish();
      exceeded = false;
    } else {
      SequentialSession session(phi, opts);
      for (const TracePtr& t : traces) {
        session.begin_trace(t->name);
        for (const Step& s : t->steps) session.push_step(s);
        session.end_trace();
      }
      v = session.finish();
      exceeded = session.bound_exceeded();
    }
    if (exceeded) err << "bound exceeded: extra traces were ignored\n";
    return report_verdict(out, v);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const ProtocolError& e) {
    err << "protocol error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

int cmd_analyze(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    QuantifiedFormula phi = load_formula(cfg);
    auto timed = [&](auto&& f) {
      auto t0 = std::chrono::steady_clock::now();
      auto r = f();
      double ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
      return std::make_pair(r, ms);
    };
    if (phi.arity() >= 2) {
      auto [symm, ms] = timed([&] { return check_symmetry(phi, cfg.state_cap); });
      out << "symmetric: " << (symm ? "yes" : "no") << " (" << ms << " ms)\n";
    } else {
      out << "symmetric: yes (trivial for one variable)\n";
    }
    if (phi.arity() == 2) {
      auto [trans, ms] = timed([&] { return check_transitivity(phi, cfg.state_cap); });
      out << "transitive: " << (trans ? "yes" : "no") << " (" << ms << " ms)\n";
    } else {
      out << "transitive: no (defined for two variables)\n";
    }
    auto [refl, ms] = timed([&] { return check_reflexivity(phi, cfg.state_cap); });
    out << "reflexive: " << (refl ? "yes" : "no") << " (" << ms << " ms)\n";
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

int cmd_monitorability(const RunConfig& cfg, const std::string& model_name, std::ostream& out,
                       std::ostream& err) {
  try {
    QuantifiedFormula phi = load_formula(cfg);
    InputModel model = InputModel::unbounded();
    if (model_name == "bounded") model = InputModel::bounded(cfg.bound.value_or(1));
    if (model_name == "parallel") model = InputModel::parallel(cfg.bound.value_or(1));
    MonitorabilityReport report = classify_model_support(phi, model, cfg.state_cap);
    out << describe(report) << "\n";
    out << "fsm states: " << report.fsm_states << "\n";
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

int cmd_gen(const GenConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    std::vector<TracePtr> traces = generate(cfg.spec);
    std::string text = format_trace_file(traces);
    if (cfg.output_path.empty() || cfg.output_path == "-") {
      out << text;
    } else {
      std::ofstream f(cfg.output_path);
      if (!f) throw std::runtime_error("cannot open output file: " + cfg.output_path);
      f << text;
    }
    if (cfg.spec.kind == GeneratorSpec::Kind::BoundedObsdet && !cfg.formula_path.empty()) {
      std::ofstream f(cfg.formula_path);
      if (!f) throw std::runtime_error("cannot open formula file: " + cfg.formula_path);
      f << bounded_obsdet_formula(cfg.spec.obsdet_n, cfg.spec.obsdet_c, cfg.spec.input_aps,
                                  cfg.spec.output_aps)
        << "\n";
    }
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

int cmd_bench(const BenchConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    std::vector<TracePtr> traces = generate(cfg.spec);
    RunConfig run = cfg.run;
    if (run.formula_text.empty() && run.formula_path.empty()) {
      if (cfg.spec.kind != GeneratorSpec::Kind::BoundedObsdet)
        throw std::runtime_error("bench needs a formula unless the family provides one");
      run.formula_text = bounded_obsdet_formula(cfg.spec.obsdet_n, cfg.spec.obsdet_c,
                                                cfg.spec.input_aps, cfg.spec.output_aps);
    }
    QuantifiedFormula phi = load_formula(run);

    CsvWriter csv(run.stats_path);
    EngineOptions opts;
    opts.spec_analysis = run.spec_analysis;
    opts.trace_analysis = run.trace_analysis;
    opts.keep_going = true;
    opts.bound = run.bound;
    opts.state_cap = run.state_cap;
    opts.on_trace = [&](const SessionStats& s) { csv.row(s); };

    SessionStats last{};
    Verdict v;
    if (run.trie) {
      TrieSequentialSession session(phi, opts);
      for (const TracePtr& t : traces) {
        session.begin_trace(t->name);
        for (const Step& s : t->steps) session.push_step(s);
        session.end_trace();
      }
      v = session.finish();
      last = session.stats();
      out << "trie nodes: " << session.trie().node_count() - 1 << "\n";
    } else {
      SequentialSession session(phi, opts);
      for (const TracePtr& t : traces) {
        session.begin_trace(t->name);
        for (const Step& s : t->steps) session.push_step(s);
        session.end_trace();
      }
      v = session.finish();
      last = session.stats();
    }
    out << "verdict: " << (v.kind == VerdictKind::Satisfied ? "satisfied" : "violation") << "\n";
    out << "seen: " << last.traces_seen << " stored: " << last.traces_stored
        << " pruned: " << last.traces_pruned << " violations: " << last.violations_found
        << " tuples: " << last.tuples_checked << " runtime_ms: " << last.runtime_ms << "\n";
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace hypermon
