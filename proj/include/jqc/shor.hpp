#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "jqc/circuit.hpp"
#include "jqc/statevector.hpp"

namespace jqc {

/// Qubit layout for factoring `number` with exponentiation base `base`:
/// argument register x (2n qubits), work register y (n), scratch register z
/// (n+1), and one comparator ancilla, where n is the bit length of `number`.
struct ShorInstance {
  std::int64_t number = 0;
  std::int64_t base = 0;
  int n = 0;
  RegisterSpan x, y, z;
  int ancilla = 0;

  int width() const { return 4 * n + 2; }
  std::vector<int> x_qubits() const;
  std::vector<int> y_qubits() const;
  std::vector<int> z_qubits() const;

  static ShorInstance make(std::int64_t number, std::int64_t base);
};

std::int64_t mod_pow(std::int64_t base, std::int64_t exp, std::int64_t mod);

/// Multiplicative inverse of b modulo `modulus`, in [1, modulus).
std::int64_t mod_inverse(std::int64_t b, std::int64_t modulus);

/// Adds the classical constant `value` to a register that is in the swap-free
/// Fourier basis. `z` lists the register qubits value-MSB-first; the gate on
/// z[k] carries numerator value*2^k mod 2^m. With one or two control qubits
/// the addition happens only when all controls are set.
Circuit build_phi_add(int width, const std::vector<int>& z, std::int64_t value,
                      const std::vector<int>& controls = {});

/// Doubly controlled modular adder: in the computational basis,
/// z -> z + value (mod modulus) when both controls are set, else identity.
/// The ancilla must enter as |0> and is restored on every basis input.
Circuit build_cc_madd(int width, int control1, int control2,
                      const std::vector<int>& z, int ancilla, std::int64_t value,
                      std::int64_t modulus);

/// Controlled modular multiplier: |y>|0>_z -> |factor*y mod modulus>|0>_z when
/// the control is set, else identity. Requires gcd(factor, modulus) = 1 and
/// y < modulus.
Circuit build_cmmul(int width, int control, const std::vector<int>& y,
                    const std::vector<int>& z, int ancilla, std::int64_t factor,
                    std::int64_t modulus);

/// 2n controlled modular multipliers realizing |x>|1>|0>|0> -> |x>|a^x>|0>|0>.
Circuit build_modexp(const ShorInstance& inst);

/// Hadamards on x, modular exponentiation, then the swap-free QFT on x.
/// The returned circuit's "x" register is marked bit_reversed.
Circuit build_shor_circuit(const ShorInstance& inst);

/// Final state of the full circuit from the standard initial state (y = 1).
Statevector shor_final_state(const ShorInstance& inst);

/// Period candidate from a measured x-register outcome: the smallest verified
/// r with base^r = 1 (mod modulus) among the convergent denominators of
/// outcome/2^bits and integer multiples below modulus of the denominators
/// larger than 1. Returns nothing for outcome 0 or when no candidate verifies.
std::optional<std::int64_t> continued_fraction_period(std::uint64_t outcome, int bits,
                                                      std::int64_t modulus,
                                                      std::int64_t base);

struct PostprocessResult {
  bool retry = true;
  std::int64_t factor1 = 0;
  std::int64_t factor2 = 0;
  bool success() const;
};

/// Classical tail of the algorithm: odd period or base^(r/2) = -1 signals a
/// retry; otherwise the factors are gcd(base^(r/2) -+ 1, modulus).
PostprocessResult postprocess_period(std::int64_t period, std::int64_t base,
                                     std::int64_t modulus);

struct FactorReport {
  std::int64_t number = 0;
  std::int64_t base = 0;
  int width = 0;
  long shots = 0;
  std::map<std::uint64_t, long> histogram;
  long nonzero_shots = 0;
  long successful_shots = 0;
  std::int64_t period = 0;
  std::int64_t factor1 = 0;
  std::int64_t factor2 = 0;
  bool success = false;
  int attempts = 0;
};

/// Full pipeline. `number` must be odd, composite, and not a prime power.
/// With no fixed base, up to 10 random coprime bases are tried.
FactorReport run_shor(std::int64_t number, long shots, std::uint64_t seed,
                      std::optional<std::int64_t> fixed_base = std::nullopt);

}  // namespace jqc
