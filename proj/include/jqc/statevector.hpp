#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "jqc/circuit.hpp"

namespace jqc {

inline constexpr int kMaxSimulatorWidth = 24;

/// Dense state of `width` qubits. Qubit 0 is the most significant bit of the
/// amplitude index, so qubit q has index weight 2^(width-1-q).
struct Statevector {
  int width = 0;
  std::vector<complexd> amps;

  static Statevector zero_state(int width);
  static Statevector basis_state(int width, std::uint64_t index);

  std::uint64_t dim() const { return amps.size(); }
  double norm() const;
};

void apply_gate(Statevector& state, const Gate& gate);

Statevector run_circuit(const Circuit& circuit, Statevector state);

/// Probability of each register value, indexed by value. Honors the span's
/// bit_reversed flag.
std::vector<double> exact_register_distribution(const Statevector& state,
                                                const RegisterSpan& reg);

/// Measurement counts over `shots` samples of the register.
std::map<std::uint64_t, long> sample_register(const Statevector& state,
                                              const RegisterSpan& reg, long shots,
                                              std::uint64_t seed);

}  // namespace jqc
