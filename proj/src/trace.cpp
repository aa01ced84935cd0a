#include "hypermon/trace.hpp"

#include <algorithm>
#include <istream>
#include <sstream>

namespace hypermon {

namespace {
void canonicalize(std::vector<std::string>& ps) {
  std::sort(ps.begin(), ps.end());
  ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}
}  // namespace

Step::Step(std::initializer_list<std::string> ps) : props(ps) { canonicalize(props); }
Step::Step(std::vector<std::string> ps) : props(std::move(ps)) { canonicalize(props); }

bool Step::contains(const std::string& ap) const {
  return std::binary_search(props.begin(), props.end(), ap);
}

std::size_t TraceTuple::min_length() const {
  std::size_t m = 0;
  bool first = true;
  for (const TracePtr& t : entries) {
    if (first || t->length() < m) m = t->length();
    first = false;
  }
  return m;
}

ZippedLetter::ZippedLetter(std::vector<IndexedAtom> as) : atoms(std::move(as)) {
  std::sort(atoms.begin(), atoms.end());
  atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
}

bool ZippedLetter::contains(const std::string& ap, const std::string& var) const {
  IndexedAtom key{ap, TraceVariable{var}};
  return std::binary_search(atoms.begin(), atoms.end(), key);
}

Trace subsequence(const Trace& t, std::size_t i, std::size_t j) {
  Trace out;
  out.id = t.id;
  out.name = t.name;
  if (i >= t.length()) return out;
  std::size_t hi = std::min(j, t.length() - 1);
  for (std::size_t k = i; k <= hi; ++k) out.steps.push_back(t.steps[k]);
  return out;
}

ZippedWord zip_tuple(const TraceTuple& n, const std::vector<TraceVariable>& vars) {
  if (n.arity() != vars.size()) throw ArityMismatch(n.arity(), vars.size());
  ZippedWord w;
  std::size_t m = n.min_length();
  w.letters.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<IndexedAtom> atoms;
    for (std::size_t j = 0; j < vars.size(); ++j)
      for (const std::string& a : n.entries[j]->steps[i].props)
        atoms.push_back(IndexedAtom{a, vars[j]});
    w.letters.push_back(ZippedLetter(std::move(atoms)));
  }
  return w;
}

Step project(const ZippedLetter& letter, const TraceVariable& var) {
  std::vector<std::string> ps;
  for (const IndexedAtom& a : letter.atoms)
    if (a.var == var) ps.push_back(a.ap);
  return Step(std::move(ps));
}

Step parse_step(const std::string& text) {
  std::string t = trim(text);
  if (t == "-" || t.empty()) return Step{};
  std::vector<std::string> ps;
  std::stringstream ss(t);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) ps.push_back(item);
  }
  return Step(std::move(ps));
}

std::string format_step(const Step& s) {
  if (s.props.empty()) return "-";
  std::string out;
  for (std::size_t i = 0; i < s.props.size(); ++i) {
    if (i) out += ",";
    out += s.props[i];
  }
  return out;
}

std::string format_trace(const Trace& t) {
  std::string out;
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    if (i) out += ";";
    out += format_step(t.steps[i]);
  }
  return out;
}

std::vector<TracePtr> parse_trace_file(std::istream& in) {
  std::vector<TracePtr> out;
  std::string line;
  std::uint64_t next_id = 0;
  while (std::getline(in, line)) {
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    Trace t;
    t.id = next_id++;
    t.name = std::to_string(t.id);
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ';')) t.steps.push_back(parse_step(cell));
    out.push_back(std::make_shared<Trace>(std::move(t)));
  }
  return out;
}

std::vector<TracePtr> parse_trace_text(const std::string& text) {
  std::istringstream in(text);
  return parse_trace_file(in);
}

std::optional<StreamEvent> parse_stream_line(const std::string& raw) {
  std::string line = trim(raw);
  if (line.empty()) return std::nullopt;
  if (line[0] == '#') {
    std::istringstream iss(line.substr(1));
    std::string kw;
    iss >> kw;
    if (kw == "trace") {
      StreamEvent ev{StreamEvent::Kind::BeginTrace, "", {}, {}};
      iss >> ev.name;
      return ev;
    }
    if (kw == "end") return StreamEvent{StreamEvent::Kind::End, "", {}, {}};
    if (kw == "step") {
      StreamEvent ev{StreamEvent::Kind::ParallelStep, "", {}, {}};
      std::string rest;
      std::getline(iss, rest);
      std::stringstream ss(rest);
      std::string cell;
      while (std::getline(ss, cell, '|')) ev.parallel.push_back(parse_step(cell));
      if (ev.parallel.empty()) throw ProtocolError("#step line carries no steps");
      return ev;
    }
    return std::nullopt;  // comment
  }
  return StreamEvent{StreamEvent::Kind::Step, "", parse_step(line), {}};
}

}  // namespace hypermon
