#include "jqc/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>

#include "jqc/statevector.hpp"

namespace jqc {

namespace {

std::int64_t reduce_phase(std::int64_t num, int den_log2) {
  const std::int64_t den = std::int64_t{1} << den_log2;
  num %= den;
  if (num < 0) num += den;
  return num;
}

Gate make_phase_gate(GateKind kind, std::vector<int> qubits, std::int64_t num,
                     int den_log2) {
  if (den_log2 < 0 || den_log2 > 62)
    throw std::invalid_argument("phase denominator exponent out of range");
  Gate g;
  g.kind = kind;
  g.qubits = std::move(qubits);
  g.phase_num = reduce_phase(num, den_log2);
  g.phase_den_log2 = den_log2;
  return g;
}

Eigen::Matrix2cd hadamard_matrix() {
  Eigen::Matrix2cd h;
  const double s = 1.0 / std::numbers::sqrt2;
  h << s, s, s, -s;
  return h;
}

// Embed a one-qubit matrix at local bit position `pos` (0 = MSB) of a
// k-qubit local space.
Eigen::MatrixXcd embed_local(const Eigen::Matrix2cd& u, int pos, int k) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(1, 1);
  for (int i = 0; i < k; ++i) {
    if (i == pos)
      m = kron(m, Eigen::MatrixXcd(u));
    else
      m = kron(m, Eigen::MatrixXcd(Eigen::Matrix2cd::Identity()));
  }
  return m;
}

std::uint32_t bit_reverse(std::uint32_t v, int bits) {
  std::uint32_t r = 0;
  for (int i = 0; i < bits; ++i) r |= ((v >> i) & 1u) << (bits - 1 - i);
  return r;
}

}  // namespace

complexd Gate::phase_factor() const {
  const double den = static_cast<double>(std::int64_t{1} << phase_den_log2);
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(phase_num) / den;
  return std::polar(1.0, angle);
}

Eigen::MatrixXcd Gate::dense() const {
  const int d = 1 << arity();
  switch (kind) {
    case GateKind::hadamard:
      return hadamard_matrix();
    case GateKind::not_x: {
      Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2, 2);
      m(0, 1) = m(1, 0) = 1.0;
      return m;
    }
    case GateKind::phase_shift:
    case GateKind::controlled_phase:
    case GateKind::cc_phase: {
      Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(d, d);
      m(d - 1, d - 1) = phase_factor();
      return m;
    }
    case GateKind::cnot: {
      Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(4, 4);
      m(2, 2) = m(3, 3) = 0.0;
      m(2, 3) = m(3, 2) = 1.0;
      return m;
    }
    case GateKind::swap: {
      Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(4, 4);
      m(1, 1) = m(2, 2) = 0.0;
      m(1, 2) = m(2, 1) = 1.0;
      return m;
    }
    case GateKind::fredkin: {
      Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(8, 8);
      m(5, 5) = m(6, 6) = 0.0;
      m(5, 6) = m(6, 5) = 1.0;
      return m;
    }
    case GateKind::qft_block:
      return dense_qft(arity());
    case GateKind::inv_qft_block:
      return dense_qft(arity()).adjoint();
    case GateKind::custom:
      return matrix;
  }
  throw std::logic_error("unknown gate kind");
}

Gate Gate::inverse() const {
  Gate g = *this;
  switch (kind) {
    case GateKind::hadamard:
    case GateKind::not_x:
    case GateKind::cnot:
    case GateKind::swap:
    case GateKind::fredkin:
      return g;
    case GateKind::phase_shift:
    case GateKind::controlled_phase:
    case GateKind::cc_phase:
      g.phase_num = reduce_phase(-phase_num, phase_den_log2);
      return g;
    case GateKind::qft_block:
      g.kind = GateKind::inv_qft_block;
      return g;
    case GateKind::inv_qft_block:
      g.kind = GateKind::qft_block;
      return g;
    case GateKind::custom:
      g.matrix = matrix.adjoint();
      return g;
  }
  throw std::logic_error("unknown gate kind");
}

void Gate::validate(int width) const {
  const int k = arity();
  if (k < 1 || k > 3) throw std::invalid_argument("gate arity must be 1..3");
  for (int q : qubits)
    if (q < 0 || q >= width) throw std::invalid_argument("gate qubit out of range");
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j)
      if (qubits[i] == qubits[j])
        throw std::invalid_argument("gate qubits must be distinct");

  int expected = -1;
  switch (kind) {
    case GateKind::hadamard:
    case GateKind::not_x:
    case GateKind::phase_shift:
      expected = 1;
      break;
    case GateKind::controlled_phase:
    case GateKind::cnot:
    case GateKind::swap:
      expected = 2;
      break;
    case GateKind::cc_phase:
    case GateKind::fredkin:
    case GateKind::qft_block:
    case GateKind::inv_qft_block:
      expected = 3;
      break;
    case GateKind::custom:
      break;
  }
  if (expected > 0 && k != expected)
    throw std::invalid_argument("gate arity does not match its kind");

  if (is_phase_kind()) {
    if (phase_den_log2 < 0 || phase_den_log2 > 62)
      throw std::invalid_argument("phase denominator exponent out of range");
    if (phase_num < 0 || phase_num >= (std::int64_t{1} << phase_den_log2))
      throw std::invalid_argument("phase numerator out of range");
  }
  if (kind == GateKind::custom) {
    const int d = 1 << k;
    if (matrix.rows() != d || matrix.cols() != d)
      throw std::invalid_argument("custom gate matrix has wrong dimension");
    if (unitarity_defect(matrix) > 1e-10)
      throw std::invalid_argument("custom gate matrix is not unitary");
  }
}

Gate Gate::hadamard(int q) {
  Gate g;
  g.kind = GateKind::hadamard;
  g.qubits = {q};
  return g;
}

Gate Gate::not_x(int q) {
  Gate g;
  g.kind = GateKind::not_x;
  g.qubits = {q};
  return g;
}

Gate Gate::phase_shift(int q, std::int64_t num, int den_log2) {
  return make_phase_gate(GateKind::phase_shift, {q}, num, den_log2);
}

Gate Gate::controlled_phase(int control, int target, std::int64_t num, int den_log2) {
  return make_phase_gate(GateKind::controlled_phase, {control, target}, num, den_log2);
}

Gate Gate::cc_phase(int control1, int control2, int target, std::int64_t num,
                    int den_log2) {
  return make_phase_gate(GateKind::cc_phase, {control1, control2, target}, num,
                         den_log2);
}

Gate Gate::cnot(int control, int target) {
  Gate g;
  g.kind = GateKind::cnot;
  g.qubits = {control, target};
  return g;
}

Gate Gate::swap(int a, int b) {
  Gate g;
  g.kind = GateKind::swap;
  g.qubits = {a, b};
  return g;
}

Gate Gate::fredkin(int control, int a, int b) {
  Gate g;
  g.kind = GateKind::fredkin;
  g.qubits = {control, a, b};
  return g;
}

Gate Gate::qft_block(const std::vector<int>& qubits) {
  Gate g;
  g.kind = GateKind::qft_block;
  g.qubits = qubits;
  return g;
}

Gate Gate::inv_qft_block(const std::vector<int>& qubits) {
  Gate g;
  g.kind = GateKind::inv_qft_block;
  g.qubits = qubits;
  return g;
}

Gate Gate::custom(const std::vector<int>& qubits, const Eigen::MatrixXcd& u) {
  Gate g;
  g.kind = GateKind::custom;
  g.qubits = qubits;
  g.matrix = u;
  return g;
}

void Circuit::append(Gate gate) {
  gate.validate(width);
  gates.push_back(std::move(gate));
}

void Circuit::extend(const Circuit& other) {
  if (other.width != width)
    throw std::invalid_argument("cannot extend a circuit with one of another width");
  for (const Gate& g : other.gates) append(g);
}

void Circuit::validate() const {
  if (width < 1 || width > 24)
    throw std::invalid_argument("circuit width must be between 1 and 24");
  for (const Gate& g : gates) g.validate(width);
  for (const auto& [name, reg] : registers) {
    if (reg.size < 1 || reg.start < 0 || reg.start + reg.size > width)
      throw std::invalid_argument("register '" + name + "' does not fit the circuit");
  }
}

Eigen::MatrixXcd dense_qft(int m) {
  if (m < 1 || m > 10) throw std::invalid_argument("dense QFT supports 1..10 qubits");
  const int d = 1 << m;
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  Eigen::MatrixXcd f(d, d);
  for (int r = 0; r < d; ++r) {
    const std::uint32_t rr = bit_reverse(static_cast<std::uint32_t>(r), m);
    for (int c = 0; c < d; ++c) {
      const double angle =
          2.0 * std::numbers::pi * static_cast<double>(rr) * static_cast<double>(c) / d;
      f(r, c) = std::polar(scale, angle);
    }
  }
  return f;
}

Circuit qft_decompose(int m, double prune_epsilon) {
  if (m < 3) throw std::invalid_argument("QFT decomposition needs at least 3 qubits");
  Circuit c;
  c.width = m;
  for (int l = 0; l + 3 < m; ++l) {
    // Hadamard on l followed by its chain of controlled phases; the Hadamard
    // merges into the first surviving chain gate.
    std::vector<Gate> chain;
    for (int j = l + 1; j < m; ++j) {
      const int den = j - l + 1;
      const double angle = 2.0 * std::numbers::pi / std::pow(2.0, den);
      if (angle < prune_epsilon) continue;
      chain.push_back(Gate::controlled_phase(j, l, 1, den));
    }
    if (chain.empty()) {
      c.append(Gate::hadamard(l));
    } else {
      const Gate& first = chain.front();
      const int ctrl = first.qubits[0];
      Eigen::MatrixXcd cp = Eigen::MatrixXcd::Identity(4, 4);
      cp(3, 3) = first.phase_factor();
      // Local order {l, ctrl}: the Hadamard acts first in time.
      Eigen::MatrixXcd merged = cp * embed_local(hadamard_matrix(), 0, 2);
      c.append(Gate::custom({l, ctrl}, merged));
      for (std::size_t i = 1; i < chain.size(); ++i) c.append(chain[i]);
    }
  }
  c.append(Gate::qft_block({m - 3, m - 2, m - 1}));
  return c;
}

Circuit remap(const Circuit& fragment, const std::vector<int>& qubits, int width) {
  if (static_cast<int>(qubits.size()) != fragment.width)
    throw std::invalid_argument("remap needs one destination qubit per fragment qubit");
  Circuit c;
  c.width = width;
  for (const Gate& g : fragment.gates) {
    Gate h = g;
    for (int& q : h.qubits) q = qubits.at(q);
    c.append(std::move(h));
  }
  return c;
}

Eigen::MatrixXcd circuit_unitary(const Circuit& circuit) {
  if (circuit.width > 10)
    throw std::invalid_argument("dense circuit unitary supports at most 10 qubits");
  circuit.validate();
  const std::uint64_t d = std::uint64_t{1} << circuit.width;
  Eigen::MatrixXcd u(d, d);
  for (std::uint64_t col = 0; col < d; ++col) {
    Statevector s = Statevector::basis_state(circuit.width, col);
    for (const Gate& g : circuit.gates) apply_gate(s, g);
    for (std::uint64_t row = 0; row < d; ++row) u(row, col) = s.amps[row];
  }
  return u;
}

Circuit inverse_circuit(const Circuit& circuit) {
  Circuit c;
  c.width = circuit.width;
  c.registers = circuit.registers;
  c.gates.reserve(circuit.gates.size());
  for (auto it = circuit.gates.rbegin(); it != circuit.gates.rend(); ++it)
    c.gates.push_back(it->inverse());
  return c;
}

namespace {

// Combined custom gate on `wires` equal to `earlier` followed by `later`.
Gate fuse(const std::vector<int>& wires, const Eigen::MatrixXcd& earlier,
          const Eigen::MatrixXcd& later) {
  return Gate::custom(wires, later * earlier);
}

// One-qubit matrix embedded on the wire set of a wider gate.
Eigen::MatrixXcd embed_on_wires(const Gate& one, const std::vector<int>& wires) {
  const auto pos = std::find(wires.begin(), wires.end(), one.qubits[0]);
  Eigen::Matrix2cd u = one.dense();
  return embed_local(u, static_cast<int>(pos - wires.begin()),
                     static_cast<int>(wires.size()));
}

bool touches(const Gate& g, int qubit) {
  return std::find(g.qubits.begin(), g.qubits.end(), qubit) != g.qubits.end();
}

}  // namespace

Circuit merge_adjacent_gates(const Circuit& circuit) {
  std::vector<std::optional<Gate>> slots;
  slots.reserve(circuit.gates.size());
  for (const Gate& g : circuit.gates) slots.emplace_back(g);

  auto next_on_wire = [&](std::size_t from, int qubit) -> std::ptrdiff_t {
    for (std::size_t j = from + 1; j < slots.size(); ++j)
      if (slots[j] && touches(*slots[j], qubit)) return static_cast<std::ptrdiff_t>(j);
    return -1;
  };
  auto prev_on_wire = [&](std::size_t from, int qubit) -> std::ptrdiff_t {
    for (std::ptrdiff_t j = static_cast<std::ptrdiff_t>(from) - 1; j >= 0; --j)
      if (slots[j] && touches(*slots[j], qubit)) return j;
    return -1;
  };

  bool changed = true;
  while (changed) {
    changed = false;

    // Coalesce neighboring one-qubit gates on the same wire.
    for (std::size_t i = 0; i < slots.size(); ++i) {
      if (!slots[i] || slots[i]->arity() != 1) continue;
      const std::ptrdiff_t j = next_on_wire(i, slots[i]->qubits[0]);
      if (j < 0 || slots[j]->arity() != 1) continue;
      slots[j] = fuse(slots[i]->qubits, slots[i]->dense(), slots[j]->dense());
      slots[i].reset();
      changed = true;
    }

    // Absorb leftover one-qubit gates into a neighboring wider gate.
    for (std::size_t i = 0; i < slots.size(); ++i) {
      if (!slots[i] || slots[i]->arity() != 1) continue;
      const int q = slots[i]->qubits[0];
      const std::ptrdiff_t after = next_on_wire(i, q);
      if (after >= 0 && slots[after]->arity() >= 2) {
        const std::vector<int> wires = slots[after]->qubits;
        slots[after] = fuse(wires, embed_on_wires(*slots[i], wires),
                            slots[after]->dense());
        slots[i].reset();
        changed = true;
        continue;
      }
      const std::ptrdiff_t before = prev_on_wire(i, q);
      if (before >= 0 && slots[before]->arity() >= 2) {
        const std::vector<int> wires = slots[before]->qubits;
        slots[before] = fuse(wires, slots[before]->dense(),
                             embed_on_wires(*slots[i], wires));
        slots[i].reset();
        changed = true;
      }
    }
  }

  Circuit out;
  out.width = circuit.width;
  out.registers = circuit.registers;
  for (auto& s : slots)
    if (s) out.gates.push_back(std::move(*s));
  return out;
}

namespace {

Eigen::Matrix2cd sqrt_not() {
  Eigen::Matrix2cd v;
  v << complexd(0.5, 0.5), complexd(0.5, -0.5), complexd(0.5, -0.5), complexd(0.5, 0.5);
  return v;
}

Gate controlled_one_qubit(int control, int target, const Eigen::Matrix2cd& u) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(4, 4);
  m.block<2, 2>(2, 2) = u;
  return Gate::custom({control, target}, m);
}

// Toffoli with controls c1, c2 and target t as five two-qubit gates.
void emit_toffoli(std::vector<Gate>& out, int c1, int c2, int t) {
  const Eigen::Matrix2cd v = sqrt_not();
  const Eigen::Matrix2cd vd = v.adjoint();
  out.push_back(controlled_one_qubit(c2, t, v));
  out.push_back(Gate::cnot(c1, c2));
  out.push_back(controlled_one_qubit(c2, t, vd));
  out.push_back(Gate::cnot(c1, c2));
  out.push_back(controlled_one_qubit(c1, t, v));
}

}  // namespace

std::vector<Gate> decompose_to_two_qubit(const Gate& gate) {
  if (gate.arity() <= 2) return {gate};
  std::vector<Gate> out;
  switch (gate.kind) {
    case GateKind::cc_phase: {
      const int c1 = gate.qubits[0], c2 = gate.qubits[1], t = gate.qubits[2];
      const std::int64_t num = gate.phase_num;
      const int den = gate.phase_den_log2 + 1;
      out.push_back(Gate::controlled_phase(c2, t, num, den));
      out.push_back(Gate::cnot(c1, c2));
      out.push_back(Gate::controlled_phase(c2, t, -num, den));
      out.push_back(Gate::cnot(c1, c2));
      out.push_back(Gate::controlled_phase(c1, t, num, den));
      return out;
    }
    case GateKind::fredkin: {
      const int c = gate.qubits[0], a = gate.qubits[1], b = gate.qubits[2];
      out.push_back(Gate::cnot(b, a));
      emit_toffoli(out, c, a, b);
      out.push_back(Gate::cnot(b, a));
      return out;
    }
    case GateKind::qft_block: {
      const int q0 = gate.qubits[0], q1 = gate.qubits[1], q2 = gate.qubits[2];
      // H(q0) then CP(q1->q0, pi/2), merged.
      Eigen::MatrixXcd cp_i = Eigen::MatrixXcd::Identity(4, 4);
      cp_i(3, 3) = complexd(0.0, 1.0);
      out.push_back(
          Gate::custom({q0, q1}, cp_i * embed_local(hadamard_matrix(), 0, 2)));
      out.push_back(Gate::controlled_phase(q2, q0, 1, 3));
      // H(q1), CP(q2->q1, pi/2), H(q2), merged.
      Eigen::MatrixXcd tail = embed_local(hadamard_matrix(), 1, 2) * cp_i *
                              embed_local(hadamard_matrix(), 0, 2);
      out.push_back(Gate::custom({q1, q2}, tail));
      return out;
    }
    case GateKind::inv_qft_block: {
      Gate fwd = gate;
      fwd.kind = GateKind::qft_block;
      std::vector<Gate> gates = decompose_to_two_qubit(fwd);
      std::reverse(gates.begin(), gates.end());
      for (Gate& g : gates) g = g.inverse();
      return gates;
    }
    default:
      throw std::invalid_argument("no two-qubit decomposition for this gate kind");
  }
}

Circuit decompose_to_two_qubit(const Circuit& circuit) {
  Circuit out;
  out.width = circuit.width;
  out.registers = circuit.registers;
  for (const Gate& g : circuit.gates)
    for (Gate& piece : decompose_to_two_qubit(g)) out.append(std::move(piece));
  return out;
}

}  // namespace jqc
