#include "jqc/resources.hpp"

#include <cmath>
#include <stdexcept>

#include "jqc/shor.hpp"

namespace jqc {

GateCounts count_gates(const Circuit& circuit, CountMode mode) {
  Circuit prepared = (mode == CountMode::two_qubit_only)
                         ? merge_adjacent_gates(decompose_to_two_qubit(circuit))
                         : merge_adjacent_gates(circuit);
  GateCounts counts;
  counts.mode = mode;
  for (const Gate& g : prepared.gates) {
    switch (g.arity()) {
      case 1:
        ++counts.one_qubit;
        break;
      case 2:
        ++counts.two_qubit;
        break;
      default:
        ++counts.three_qubit;
        break;
    }
  }
  return counts;
}

long count_edges(const GateCounts& counts, const EdgeWeights& weights) {
  return counts.three_qubit * weights.three_qubit +
         counts.two_qubit * weights.two_qubit + counts.one_qubit * weights.one_qubit;
}

FeasibilityReport feasibility(long edges, double coherence_time) {
  if (edges < 1) throw std::invalid_argument("edge count must be positive");
  if (!(coherence_time > 0.0))
    throw std::invalid_argument("coherence time must be positive");
  FeasibilityReport r;
  r.edges = edges;
  r.coherence_time = coherence_time;
  r.edge_duration_bound = coherence_time / static_cast<double>(edges);
  r.required_angular_frequency = 1.0 / r.edge_duration_bound;
  return r;
}

ScalingReport scaling_estimate(int bits) {
  if (bits < 2) throw std::invalid_argument("bit length must be at least 2");
  ScalingReport r;
  r.bits = bits;
  r.qubits = 4L * bits + 2;
  const auto cost = [](double b) { return b * b * b * std::log2(b); };
  r.relative_time = cost(static_cast<double>(bits)) / cost(5.0);
  return r;
}

ResourceReport resource_report(std::int64_t number, std::int64_t base,
                               double coherence_time, const EdgeWeights& weights) {
  const ShorInstance inst = ShorInstance::make(number, base);
  const Circuit circuit = build_shor_circuit(inst);

  ResourceReport report;
  report.number = number;
  report.base = base;
  report.width = inst.width();
  report.mixed = count_gates(circuit, CountMode::mixed_3q);
  report.two_qubit_only = count_gates(circuit, CountMode::two_qubit_only);
  report.edges_mixed = count_edges(report.mixed, weights);
  report.edges_two_qubit_only = count_edges(report.two_qubit_only, weights);
  report.feasibility_mixed = feasibility(report.edges_mixed, coherence_time);
  report.scaling = scaling_estimate(inst.n);
  report.notes.push_back(
      "QFT gate counts follow m(m-1)/2 - 3 two-qubit gates plus one three-qubit "
      "block; for m=6 this gives 12, and the occasionally quoted count of 18 is "
      "inconsistent with the m=10 total of 42 and is not used.");
  return report;
}

}  // namespace jqc
