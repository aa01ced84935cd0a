#include "hypermon/gen.hpp"

#include <random>

namespace hypermon {

namespace {

// Bits drawn directly from the engine keep generated files identical
// across standard libraries.
class BitSource {
 public:
  explicit BitSource(std::uint64_t seed) : rng_(seed) {}
  bool bit() { return (rng_() >> 33) & 1; }
  bool chance(double p) {
    return static_cast<double>(rng_() >> 11) / static_cast<double>(1ull << 53) < p;
  }

 private:
  std::mt19937_64 rng_;
};

std::vector<TracePtr> gen_random(const GeneratorSpec& spec) {
  BitSource bits(spec.seed);
  std::vector<TracePtr> out;
  for (std::uint64_t i = 0; i < spec.count; ++i) {
    Trace t;
    t.id = i;
    t.name = std::to_string(i);
    for (std::uint64_t k = 0; k < spec.length; ++k) {
      std::vector<std::string> props;
      for (const std::string& ap : spec.aps)
        if (bits.bit()) props.push_back(ap);
      t.steps.push_back(Step(std::move(props)));
    }
    out.push_back(std::make_shared<Trace>(std::move(t)));
  }
  return out;
}

std::vector<TracePtr> gen_perturbed(const GeneratorSpec& spec) {
  BitSource bits(spec.seed);
  std::vector<Step> base = spec.base;
  if (base.empty()) {
    for (std::uint64_t k = 0; k < spec.length; ++k) {
      std::vector<std::string> props;
      for (const std::string& ap : spec.aps)
        if (bits.bit()) props.push_back(ap);
      base.push_back(Step(std::move(props)));
    }
  }
  std::vector<TracePtr> out;
  for (std::uint64_t i = 0; i < spec.count; ++i) {
    Trace t;
    t.id = i;
    t.name = std::to_string(i);
    for (std::uint64_t k = 0; k < spec.length && k < base.size(); ++k) {
      std::vector<std::string> props;
      for (const std::string& ap : spec.aps) {
        bool v = base[k].contains(ap);
        if (bits.chance(spec.flip_prob)) v = !v;
        if (v) props.push_back(ap);
      }
      t.steps.push_back(Step(std::move(props)));
    }
    out.push_back(std::make_shared<Trace>(std::move(t)));
  }
  return out;
}

// Inputs are uniform; output bit j at position k echoes input bit j at
// position k - c (zero beforehand), so outputs over the checked window are
// a function of the inputs over the guard window. Faults flip output bits
// and are the only source of violations.
std::vector<TracePtr> gen_bounded_obsdet(const GeneratorSpec& spec) {
  BitSource bits(spec.seed);
  std::size_t width = std::min(spec.input_aps.size(), spec.output_aps.size());
  std::uint64_t delay = spec.obsdet_c;
  std::vector<TracePtr> out;
  for (std::uint64_t i = 0; i < spec.count; ++i) {
    Trace t;
    t.id = i;
    t.name = std::to_string(i);
    std::vector<std::vector<bool>> inputs(spec.length, std::vector<bool>(width));
    for (std::uint64_t k = 0; k < spec.length; ++k)
      for (std::size_t b = 0; b < width; ++b) inputs[k][b] = bits.bit();
    for (std::uint64_t k = 0; k < spec.length; ++k) {
      std::vector<std::string> props;
      for (std::size_t b = 0; b < spec.input_aps.size(); ++b)
        if (b < width && inputs[k][b]) props.push_back(spec.input_aps[b]);
      for (std::size_t b = 0; b < spec.output_aps.size(); ++b) {
        bool v = b < width && k >= delay && inputs[k - delay][b];
        if (bits.chance(spec.fault_prob)) v = !v;
        if (v) props.push_back(spec.output_aps[b]);
      }
      t.steps.push_back(Step(std::move(props)));
    }
    out.push_back(std::make_shared<Trace>(std::move(t)));
  }
  return out;
}

}  // namespace

std::vector<TracePtr> generate(const GeneratorSpec& spec) {
  switch (spec.kind) {
    case GeneratorSpec::Kind::Random: return gen_random(spec);
    case GeneratorSpec::Kind::Perturbed: return gen_perturbed(spec);
    case GeneratorSpec::Kind::BoundedObsdet: return gen_bounded_obsdet(spec);
  }
  return {};
}

std::string bounded_obsdet_formula(std::uint64_t n, std::uint64_t c,
                                   const std::vector<std::string>& input_aps,
                                   const std::vector<std::string>& output_aps) {
  auto equal_vector = [](const std::vector<std::string>& aps) {
    std::string s;
    for (std::size_t i = 0; i < aps.size(); ++i) {
      if (i) s += " & ";
      s += "(" + aps[i] + "[p1] <-> " + aps[i] + "[p2])";
    }
    return aps.empty() ? std::string("true") : s;
  };
  return "forall p1. forall p2. G[<" + std::to_string(n) + "] (" + equal_vector(input_aps) +
         ") -> G[<" + std::to_string(n + c) + "] (" + equal_vector(output_aps) + ")";
}

std::string format_trace_file(const std::vector<TracePtr>& traces) {
  std::string out;
  for (const TracePtr& t : traces) {
    out += format_trace(*t);
    out += "\n";
  }
  return out;
}

}  // namespace hypermon
