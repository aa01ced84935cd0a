// Synthetic trace generators for benchmarking: uniform random traces,
// bit-flip perturbations of a base trace, and the bounded observational
// determinism family together with its formula.

#ifndef HYPERMON_GEN_HPP
#define HYPERMON_GEN_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "hypermon/trace.hpp"

namespace hypermon {

struct GeneratorSpec {
  enum class Kind { Random, Perturbed, BoundedObsdet } kind = Kind::Random;
  std::uint64_t count = 10;
  std::uint64_t length = 10;
  std::uint64_t seed = 0;
  std::vector<std::string> aps = {"a"};

  // Perturbed: every proposition bit of the base trace flips independently
  // with probability flip_prob. The base is drawn from the seed unless
  // given explicitly.
  double flip_prob = 0.01;
  std::vector<Step> base;

  // BoundedObsdet: inputs drive a delayed deterministic response on the
  // outputs; output bits additionally flip with fault_prob, which is what
  // creates violations.
  std::uint64_t obsdet_n = 8;
  std::uint64_t obsdet_c = 3;
  std::vector<std::string> input_aps = {"i"};
  std::vector<std::string> output_aps = {"o"};
  double fault_prob = 0.002;
};

std::vector<TracePtr> generate(const GeneratorSpec& spec);

// forall p1. forall p2. G[<n](inputs equal) -> G[<n+c](outputs equal),
// with vector equalities written expanded.
std::string bounded_obsdet_formula(std::uint64_t n, std::uint64_t c,
                                   const std::vector<std::string>& input_aps,
                                   const std::vector<std::string>& output_aps);

std::string format_trace_file(const std::vector<TracePtr>& traces);

}  // namespace hypermon

#endif  // HYPERMON_GEN_HPP
