#include "jqc/statevector.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <stdexcept>

namespace jqc {

namespace {

std::uint64_t qubit_mask(int width, int q) {
  return std::uint64_t{1} << (width - 1 - q);
}

// Insert zero bits at the positions given by `masks` (sorted ascending), so
// that `idx` enumerates the subspace where those bits are free to be ORed in.
template <int K>
std::uint64_t expand_bits(std::uint64_t idx, const std::array<std::uint64_t, K>& masks) {
  for (int i = 0; i < K; ++i) {
    const std::uint64_t m = masks[i];
    idx = ((idx & ~(m - 1)) << 1) | (idx & (m - 1));
  }
  return idx;
}

template <int K>
std::array<std::uint64_t, K> sorted_masks(const Statevector& s, const Gate& g) {
  std::array<std::uint64_t, K> masks{};
  for (int i = 0; i < K; ++i) masks[i] = qubit_mask(s.width, g.qubits[i]);
  std::sort(masks.begin(), masks.end());
  return masks;
}

void apply_hadamard(Statevector& s, int q) {
  const std::uint64_t m = qubit_mask(s.width, q);
  const double f = 1.0 / std::sqrt(2.0);
  for (std::uint64_t base = 0; base < s.dim(); base += (m << 1)) {
    for (std::uint64_t i = base; i < base + m; ++i) {
      const complexd a = s.amps[i];
      const complexd b = s.amps[i + m];
      s.amps[i] = f * (a + b);
      s.amps[i + m] = f * (a - b);
    }
  }
}

void apply_not(Statevector& s, int q) {
  const std::uint64_t m = qubit_mask(s.width, q);
  for (std::uint64_t base = 0; base < s.dim(); base += (m << 1))
    for (std::uint64_t i = base; i < base + m; ++i)
      std::swap(s.amps[i], s.amps[i + m]);
}

// Multiply amplitudes with all `masks` bits set by `w`.
template <int K>
void apply_diagonal_phase(Statevector& s, const std::array<std::uint64_t, K>& masks,
                          complexd w) {
  std::uint64_t set = 0;
  for (int i = 0; i < K; ++i) set |= masks[i];
  const std::uint64_t groups = s.dim() >> K;
  for (std::uint64_t i = 0; i < groups; ++i)
    s.amps[expand_bits<K>(i, masks) | set] *= w;
}

// Swap the amplitude pairs that differ in `ma` vs `mb` while all `fixed` bits
// are set; `masks` lists every participating bit ascending.
template <int K>
void apply_conditional_swap(Statevector& s, const std::array<std::uint64_t, K>& masks,
                            std::uint64_t fixed, std::uint64_t ma, std::uint64_t mb) {
  const std::uint64_t groups = s.dim() >> K;
  for (std::uint64_t i = 0; i < groups; ++i) {
    const std::uint64_t base = expand_bits<K>(i, masks) | fixed;
    std::swap(s.amps[base | ma], s.amps[base | mb]);
  }
}

template <int K>
void apply_dense(Statevector& s, const Gate& g) {
  constexpr int D = 1 << K;
  const auto masks = sorted_masks<K>(s, g);
  std::array<std::uint64_t, D> offs{};
  for (int l = 1; l < D; ++l) {
    const int low = l & -l;
    int p = 0;
    while ((1 << p) != low) ++p;
    offs[l] = offs[l ^ low] | qubit_mask(s.width, g.qubits[K - 1 - p]);
  }
  std::array<complexd, std::size_t{D} * D> m{};
  const Eigen::MatrixXcd u = g.dense();
  for (int r = 0; r < D; ++r)
    for (int c = 0; c < D; ++c) m[r * D + c] = u(r, c);

  std::array<complexd, D> v{};
  const std::uint64_t groups = s.dim() >> K;
  for (std::uint64_t i = 0; i < groups; ++i) {
    const std::uint64_t base = expand_bits<K>(i, masks);
    for (int l = 0; l < D; ++l) v[l] = s.amps[base | offs[l]];
    for (int r = 0; r < D; ++r) {
      complexd acc = 0.0;
      for (int c = 0; c < D; ++c) acc += m[r * D + c] * v[c];
      s.amps[base | offs[r]] = acc;
    }
  }
}

}  // namespace

Statevector Statevector::zero_state(int width) {
  if (width < 1 || width > kMaxSimulatorWidth)
    throw std::invalid_argument("statevector width must be between 1 and 24");
  Statevector s;
  s.width = width;
  s.amps.assign(std::uint64_t{1} << width, complexd(0.0, 0.0));
  s.amps[0] = 1.0;
  return s;
}

Statevector Statevector::basis_state(int width, std::uint64_t index) {
  Statevector s = zero_state(width);
  if (index >= s.dim()) throw std::invalid_argument("basis index out of range");
  s.amps[0] = 0.0;
  s.amps[index] = 1.0;
  return s;
}

double Statevector::norm() const {
  double total = 0.0;
  for (const complexd& a : amps) total += std::norm(a);
  return std::sqrt(total);
}

void apply_gate(Statevector& state, const Gate& gate) {
  gate.validate(state.width);
  switch (gate.kind) {
    case GateKind::hadamard:
      apply_hadamard(state, gate.qubits[0]);
      return;
    case GateKind::not_x:
      apply_not(state, gate.qubits[0]);
      return;
    case GateKind::phase_shift:
      apply_diagonal_phase<1>(state, sorted_masks<1>(state, gate),
                              gate.phase_factor());
      return;
    case GateKind::controlled_phase:
      apply_diagonal_phase<2>(state, sorted_masks<2>(state, gate),
                              gate.phase_factor());
      return;
    case GateKind::cc_phase:
      apply_diagonal_phase<3>(state, sorted_masks<3>(state, gate),
                              gate.phase_factor());
      return;
    case GateKind::cnot: {
      const auto masks = sorted_masks<2>(state, gate);
      const std::uint64_t c = qubit_mask(state.width, gate.qubits[0]);
      const std::uint64_t t = qubit_mask(state.width, gate.qubits[1]);
      apply_conditional_swap<2>(state, masks, c, 0, t);
      return;
    }
    case GateKind::swap: {
      const auto masks = sorted_masks<2>(state, gate);
      const std::uint64_t a = qubit_mask(state.width, gate.qubits[0]);
      const std::uint64_t b = qubit_mask(state.width, gate.qubits[1]);
      apply_conditional_swap<2>(state, masks, 0, a, b);
      return;
    }
    case GateKind::fredkin: {
      const auto masks = sorted_masks<3>(state, gate);
      const std::uint64_t c = qubit_mask(state.width, gate.qubits[0]);
      const std::uint64_t a = qubit_mask(state.width, gate.qubits[1]);
      const std::uint64_t b = qubit_mask(state.width, gate.qubits[2]);
      apply_conditional_swap<3>(state, masks, c, a, b);
      return;
    }
    case GateKind::qft_block:
    case GateKind::inv_qft_block:
    case GateKind::custom:
      break;
  }
  switch (gate.arity()) {
    case 1:
      apply_dense<1>(state, gate);
      return;
    case 2:
      apply_dense<2>(state, gate);
      return;
    case 3:
      apply_dense<3>(state, gate);
      return;
    default:
      throw std::invalid_argument("gate arity must be 1..3");
  }
}

Statevector run_circuit(const Circuit& circuit, Statevector state) {
  circuit.validate();
  if (circuit.width != state.width)
    throw std::invalid_argument("circuit and state widths differ");
  for (const Gate& g : circuit.gates) apply_gate(state, g);
  return state;
}

std::vector<double> exact_register_distribution(const Statevector& state,
                                                const RegisterSpan& reg) {
  if (reg.size < 1 || reg.start < 0 || reg.start + reg.size > state.width)
    throw std::invalid_argument("register does not fit the state");
  std::array<int, 24> shift{};
  std::array<std::uint64_t, 24> weight{};
  for (int j = 0; j < reg.size; ++j) {
    shift[j] = state.width - 1 - (reg.start + j);
    weight[j] = std::uint64_t{1} << (reg.bit_reversed ? j : reg.size - 1 - j);
  }
  std::vector<double> dist(std::uint64_t{1} << reg.size, 0.0);
  for (std::uint64_t idx = 0; idx < state.dim(); ++idx) {
    const double p = std::norm(state.amps[idx]);
    if (p == 0.0) continue;
    std::uint64_t value = 0;
    for (int j = 0; j < reg.size; ++j) value |= ((idx >> shift[j]) & 1u) * weight[j];
    dist[value] += p;
  }
  return dist;
}

std::map<std::uint64_t, long> sample_register(const Statevector& state,
                                              const RegisterSpan& reg, long shots,
                                              std::uint64_t seed) {
  if (shots < 1) throw std::invalid_argument("shot count must be positive");
  const std::vector<double> dist = exact_register_distribution(state, reg);
  std::vector<double> cum(dist.size());
  double total = 0.0;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    total += dist[i];
    cum[i] = total;
  }
  if (total <= 0.0) throw std::runtime_error("register distribution has no mass");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, total);
  std::map<std::uint64_t, long> counts;
  for (long s = 0; s < shots; ++s) {
    const double u = uniform(rng);
    const auto it = std::upper_bound(cum.begin(), cum.end(), u);
    const std::uint64_t outcome =
        static_cast<std::uint64_t>(std::min<std::ptrdiff_t>(
            it - cum.begin(), static_cast<std::ptrdiff_t>(cum.size()) - 1));
    ++counts[outcome];
  }
  return counts;
}

}  // namespace jqc
