#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "jqc/circuit.hpp"

namespace jqc {

enum class CountMode {
  mixed_3q,        // merge neighbors, keep three-qubit gates
  two_qubit_only,  // expand three-qubit gates first, then merge
};

struct GateCounts {
  long one_qubit = 0;
  long two_qubit = 0;
  long three_qubit = 0;
  CountMode mode = CountMode::mixed_3q;
};

GateCounts count_gates(const Circuit& circuit, CountMode mode);

/// Control-path edges needed per gate arity. One-qubit gates default to zero
/// edges because the counting passes merge them into neighbors; a standalone
/// one-qubit pulse takes 6 edges.
struct EdgeWeights {
  long three_qubit = 12;
  long two_qubit = 5;
  long one_qubit = 0;
};

long count_edges(const GateCounts& counts, const EdgeWeights& weights = {});

struct FeasibilityReport {
  long edges = 0;
  double coherence_time = 0.0;                // seconds
  double edge_duration_bound = 0.0;           // coherence_time / edges
  double required_angular_frequency = 0.0;    // 1 / edge_duration_bound
};

FeasibilityReport feasibility(long edges, double coherence_time);

struct ScalingReport {
  int bits = 0;
  long qubits = 0;         // 4*bits + 2
  double relative_time = 0.0;  // bits^3 * log2(bits), normalized to bits = 5
};

ScalingReport scaling_estimate(int bits);

/// Full accounting for factoring `number` with exponentiation base `base`:
/// gate counts in both modes, edge totals, feasibility at the given coherence
/// time, and the scaling row for the instance's bit length.
struct ResourceReport {
  std::int64_t number = 0;
  std::int64_t base = 0;
  int width = 0;
  GateCounts mixed;
  GateCounts two_qubit_only;
  long edges_mixed = 0;
  long edges_two_qubit_only = 0;
  FeasibilityReport feasibility_mixed;
  ScalingReport scaling;
  std::vector<std::string> notes;
};

ResourceReport resource_report(std::int64_t number, std::int64_t base,
                               double coherence_time = 1e-6,
                               const EdgeWeights& weights = {});

}  // namespace jqc
