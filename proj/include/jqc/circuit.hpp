#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "jqc/linalg.hpp"

namespace jqc {

enum class GateKind {
  hadamard,
  not_x,
  phase_shift,       // diag(1, w), w = exp(2 pi i num / 2^den)
  controlled_phase,  // w on |11>
  cc_phase,          // w on |111>
  cnot,
  swap,
  fredkin,
  qft_block,      // swap-free three-qubit QFT
  inv_qft_block,  // its inverse
  custom,         // explicit unitary, arity <= 3
};

/// One gate. Qubits are listed controls first, then targets; the first listed
/// qubit is the most significant bit of the local matrix index.
struct Gate {
  GateKind kind = GateKind::custom;
  std::vector<int> qubits;
  std::int64_t phase_num = 0;  // dyadic phase numerator, reduced mod 2^phase_den_log2
  int phase_den_log2 = 0;
  Eigen::MatrixXcd matrix;  // custom gates only

  int arity() const { return static_cast<int>(qubits.size()); }
  bool is_phase_kind() const {
    return kind == GateKind::phase_shift || kind == GateKind::controlled_phase ||
           kind == GateKind::cc_phase;
  }
  complexd phase_factor() const;

  /// Local 2^arity x 2^arity matrix.
  Eigen::MatrixXcd dense() const;
  Gate inverse() const;
  void validate(int width) const;

  static Gate hadamard(int q);
  static Gate not_x(int q);
  static Gate phase_shift(int q, std::int64_t num, int den_log2);
  static Gate controlled_phase(int control, int target, std::int64_t num, int den_log2);
  static Gate cc_phase(int control1, int control2, int target, std::int64_t num,
                       int den_log2);
  static Gate cnot(int control, int target);
  static Gate swap(int a, int b);
  static Gate fredkin(int control, int a, int b);
  static Gate qft_block(const std::vector<int>& qubits);
  static Gate inv_qft_block(const std::vector<int>& qubits);
  static Gate custom(const std::vector<int>& qubits, const Eigen::MatrixXcd& u);
};

/// Contiguous qubit range read MSB-first from `start`, unless `bit_reversed`
/// (after a swap-free QFT), in which case register qubit k carries bit
/// weight 2^k of the value.
struct RegisterSpan {
  int start = 0;
  int size = 0;
  bool bit_reversed = false;
};

struct Circuit {
  int width = 0;
  std::vector<Gate> gates;
  std::map<std::string, RegisterSpan> registers;

  void append(Gate gate);
  void extend(const Circuit& other);
  void validate() const;
};

/// Gate list for a swap-free QFT fragment on m >= 3 qubits (fragment qubit 0 is
/// the value MSB). Hadamards merge into an adjacent controlled phase, the
/// bottom three qubits are one QFTBlock(3), and controlled phases with
/// rotation angle below prune_epsilon radians are dropped.
Circuit qft_decompose(int m, double prune_epsilon = 0.0);

/// Copy of `fragment` acting on `qubits` of a width-`width` circuit
/// (fragment qubit i -> qubits[i]).
Circuit remap(const Circuit& fragment, const std::vector<int>& qubits, int width);

/// Dense unitary of the whole circuit; width must be <= 10.
Eigen::MatrixXcd circuit_unitary(const Circuit& circuit);

/// Dense swap-free QFT on m qubits: bit reversal times the DFT with the first
/// qubit as value MSB. m <= 10.
Eigen::MatrixXcd dense_qft(int m);

Circuit inverse_circuit(const Circuit& circuit);

/// Coalesce runs of one-qubit gates and absorb remaining one-qubit gates into
/// the nearest gate acting on a superset of their wires. Preserves the overall
/// unitary exactly.
Circuit merge_adjacent_gates(const Circuit& circuit);

/// Expand one three-qubit gate into two-qubit gates: 5 for doubly controlled
/// phases, 7 for Fredkin, 3 for a QFT block. Gates of arity <= 2 pass through;
/// general three-qubit customs are rejected.
std::vector<Gate> decompose_to_two_qubit(const Gate& gate);
Circuit decompose_to_two_qubit(const Circuit& circuit);

}  // namespace jqc
