// Finite traces over 2^AP, trace tuples, zipping into the product alphabet
// 2^(AP x V), and the textual trace formats.
//
// Trace file: one trace per line, steps separated by `;`, a step is a
// comma-separated list of proposition names or `-` for the empty step,
// `#` starts a comment.
//
// Stream protocol (line oriented): `#trace <id>` begins a trace, one step
// per line, `#end` closes it. In the parallel model `#step` lines carry
// `|`-separated steps, one per stream.

#ifndef HYPERMON_TRACE_HPP
#define HYPERMON_TRACE_HPP

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hypermon/formula.hpp"

namespace hypermon {

struct Step {
  std::vector<std::string> props;  // sorted, unique

  Step() = default;
  Step(std::initializer_list<std::string> ps);
  explicit Step(std::vector<std::string> ps);

  bool contains(const std::string& ap) const;
  bool operator==(const Step& o) const { return props == o.props; }
  bool operator!=(const Step& o) const { return props != o.props; }
  bool operator<(const Step& o) const { return props < o.props; }
};

struct Trace {
  std::uint64_t id = 0;     // arrival order, also the enumeration key
  std::string name;         // display name, defaults to the id
  std::vector<Step> steps;

  std::size_t length() const { return steps.size(); }
  bool operator==(const Trace& o) const { return steps == o.steps; }
};

using TracePtr = std::shared_ptr<const Trace>;
using TraceSet = std::vector<TracePtr>;

struct TraceTuple {
  std::vector<TracePtr> entries;

  std::size_t arity() const { return entries.size(); }
  // Length of the smallest entry; 0 for the empty tuple.
  std::size_t min_length() const;
};

struct ZippedLetter {
  std::vector<IndexedAtom> atoms;  // sorted

  ZippedLetter() = default;
  explicit ZippedLetter(std::vector<IndexedAtom> as);
  bool contains(const std::string& ap, const std::string& var) const;
  bool operator==(const ZippedLetter& o) const { return atoms == o.atoms; }
};

struct ZippedWord {
  std::vector<ZippedLetter> letters;
  std::size_t length() const { return letters.size(); }
};

class ArityMismatch : public std::invalid_argument {
 public:
  ArityMismatch(std::size_t tuple, std::size_t vars)
      : std::invalid_argument("tuple arity " + std::to_string(tuple) +
                              " does not match variable count " + std::to_string(vars)) {}
};

class ProtocolError : public std::runtime_error {
 public:
  explicit ProtocolError(const std::string& msg) : std::runtime_error(msg) {}
};

// t[i,j] per the finite-trace subsequence rule: empty when i >= |t|,
// otherwise steps i..min(j, |t|-1).
Trace subsequence(const Trace& t, std::size_t i, std::size_t j);

ZippedWord zip_tuple(const TraceTuple& n, const std::vector<TraceVariable>& vars);
Step project(const ZippedLetter& letter, const TraceVariable& var);

// --- textual formats ----------------------------------------------------------

Step parse_step(const std::string& text);
std::string format_step(const Step& s);
std::string format_trace(const Trace& t);  // steps joined with `;`

std::vector<TracePtr> parse_trace_file(std::istream& in);
std::vector<TracePtr> parse_trace_text(const std::string& text);

// Line events of the stream protocol.
struct StreamEvent {
  enum class Kind { BeginTrace, Step, ParallelStep, End } kind;
  std::string name;                 // BeginTrace
  Step step;                        // Step
  std::vector<Step> parallel;       // ParallelStep
};

// Parses one protocol line; nullopt for blanks and comments.
std::optional<StreamEvent> parse_stream_line(const std::string& line);

}  // namespace hypermon

#endif  // HYPERMON_TRACE_HPP
