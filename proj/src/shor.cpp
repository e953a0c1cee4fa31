#include "jqc/shor.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>

namespace jqc {

namespace {

std::vector<int> span_qubits(const RegisterSpan& reg) {
  std::vector<int> qs(reg.size);
  for (int i = 0; i < reg.size; ++i) qs[i] = reg.start + i;
  return qs;
}

Circuit qft_on(int width, const std::vector<int>& qubits) {
  return remap(qft_decompose(static_cast<int>(qubits.size())), qubits, width);
}

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

bool is_prime_power(std::int64_t n) {
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    std::int64_t t = n;
    while (t % p == 0) t /= p;
    return t == 1;
  }
  return false;
}

// Modular adder acting on a register already in the Fourier basis; the
// comparator sandwich leaves the ancilla clean on every basis input.
Circuit fourier_cc_madd(int width, int control1, int control2,
                        const std::vector<int>& z, int ancilla, std::int64_t value,
                        std::int64_t modulus) {
  const std::vector<int> controls = {control1, control2};
  Circuit c;
  c.width = width;
  const Circuit qft = qft_on(width, z);
  const Circuit iqft = inverse_circuit(qft);

  c.extend(build_phi_add(width, z, value, controls));
  c.extend(inverse_circuit(build_phi_add(width, z, modulus)));
  c.extend(iqft);
  c.append(Gate::cnot(z[0], ancilla));
  c.extend(qft);
  c.extend(build_phi_add(width, z, modulus, {ancilla}));
  c.extend(inverse_circuit(build_phi_add(width, z, value, controls)));
  c.extend(iqft);
  c.append(Gate::not_x(z[0]));
  c.append(Gate::cnot(z[0], ancilla));
  c.append(Gate::not_x(z[0]));
  c.extend(qft);
  c.extend(build_phi_add(width, z, value, controls));
  return c;
}

void check_madd_registers(const std::vector<int>& z, std::int64_t value,
                          std::int64_t modulus) {
  const int m = static_cast<int>(z.size());
  if (m < 3) throw std::invalid_argument("modular adder needs at least 3 register qubits");
  if (modulus < 1 || modulus > (std::int64_t{1} << (m - 1)))
    throw std::invalid_argument("modulus must fit below the register's top bit");
  if (value < 0 || value >= modulus)
    throw std::invalid_argument("addend must lie in [0, modulus)");
}

}  // namespace

std::vector<int> ShorInstance::x_qubits() const { return span_qubits(x); }
std::vector<int> ShorInstance::y_qubits() const { return span_qubits(y); }
std::vector<int> ShorInstance::z_qubits() const { return span_qubits(z); }

ShorInstance ShorInstance::make(std::int64_t number, std::int64_t base) {
  if (number < 3) throw std::invalid_argument("number to factor must be at least 3");
  if (base <= 1 || base >= number)
    throw std::invalid_argument("base must lie strictly between 1 and the number");
  if (std::gcd(base, number) != 1)
    throw std::invalid_argument("base must be coprime to the number");
  ShorInstance inst;
  inst.number = number;
  inst.base = base;
  inst.n = std::bit_width(static_cast<std::uint64_t>(number));
  inst.x = {0, 2 * inst.n, false};
  inst.y = {2 * inst.n, inst.n, false};
  inst.z = {3 * inst.n, inst.n + 1, false};
  inst.ancilla = 4 * inst.n + 1;
  if (inst.width() > kMaxSimulatorWidth)
    throw std::invalid_argument("register layout exceeds the 24-qubit simulator cap");
  return inst;
}

std::int64_t mod_pow(std::int64_t base, std::int64_t exp, std::int64_t mod) {
  if (mod < 1) throw std::invalid_argument("modulus must be positive");
  if (exp < 0) throw std::invalid_argument("exponent must be nonnegative");
  unsigned __int128 acc = 1;
  unsigned __int128 b = static_cast<unsigned __int128>(((base % mod) + mod) % mod);
  while (exp > 0) {
    if (exp & 1) acc = acc * b % mod;
    b = b * b % mod;
    exp >>= 1;
  }
  return static_cast<std::int64_t>(acc);
}

std::int64_t mod_inverse(std::int64_t b, std::int64_t modulus) {
  if (modulus < 1) throw std::invalid_argument("modulus must be positive");
  std::int64_t r0 = modulus, r1 = ((b % modulus) + modulus) % modulus;
  std::int64_t t0 = 0, t1 = 1;
  while (r1 != 0) {
    const std::int64_t q = r0 / r1;
    std::int64_t tmp = r0 - q * r1;
    r0 = r1;
    r1 = tmp;
    tmp = t0 - q * t1;
    t0 = t1;
    t1 = tmp;
  }
  if (r0 != 1) throw std::invalid_argument("no modular inverse: operands share a factor");
  return ((t0 % modulus) + modulus) % modulus;
}

Circuit build_phi_add(int width, const std::vector<int>& z, std::int64_t value,
                      const std::vector<int>& controls) {
  const int m = static_cast<int>(z.size());
  if (m < 1 || m > 62) throw std::invalid_argument("adder register width out of range");
  if (controls.size() > 2)
    throw std::invalid_argument("adder supports at most two controls");
  const std::int64_t den = std::int64_t{1} << m;
  if (value < 0 || value >= den)
    throw std::invalid_argument("addend must lie in [0, 2^width)");

  Circuit c;
  c.width = width;
  std::int64_t num = value % den;
  for (int k = 0; k < m; ++k) {
    if (num != 0) {
      switch (controls.size()) {
        case 0:
          c.append(Gate::phase_shift(z[k], num, m));
          break;
        case 1:
          c.append(Gate::controlled_phase(controls[0], z[k], num, m));
          break;
        default:
          c.append(Gate::cc_phase(controls[0], controls[1], z[k], num, m));
          break;
      }
    }
    num = num * 2 % den;
  }
  return c;
}

Circuit build_cc_madd(int width, int control1, int control2,
                      const std::vector<int>& z, int ancilla, std::int64_t value,
                      std::int64_t modulus) {
  check_madd_registers(z, value, modulus);
  Circuit c;
  c.width = width;
  const Circuit qft = qft_on(width, z);
  c.extend(qft);
  c.extend(fourier_cc_madd(width, control1, control2, z, ancilla, value, modulus));
  c.extend(inverse_circuit(qft));
  return c;
}

Circuit build_cmmul(int width, int control, const std::vector<int>& y,
                    const std::vector<int>& z, int ancilla, std::int64_t factor,
                    std::int64_t modulus) {
  const int n = static_cast<int>(y.size());
  if (static_cast<int>(z.size()) != n + 1)
    throw std::invalid_argument("scratch register must be one qubit wider than y");
  if (modulus > (std::int64_t{1} << n))
    throw std::invalid_argument("modulus does not fit the y register");
  if (factor <= 0 || factor >= modulus)
    throw std::invalid_argument("multiplier must lie in [1, modulus)");
  const std::int64_t inverse = mod_inverse(factor, modulus);

  Circuit c;
  c.width = width;
  const Circuit qft = qft_on(width, z);
  const Circuit iqft = inverse_circuit(qft);

  // z += factor * y (mod modulus), one conditional adder per y bit.
  c.extend(qft);
  std::int64_t addend = factor % modulus;
  for (int t = 0; t < n; ++t) {
    c.extend(fourier_cc_madd(width, control, y[n - 1 - t], z, ancilla, addend, modulus));
    addend = addend * 2 % modulus;
  }
  c.extend(iqft);

  for (int j = 0; j < n; ++j) c.append(Gate::fredkin(control, y[j], z[j + 1]));

  // Uncompute the swapped-in scratch: z -= inverse * y (mod modulus).
  std::vector<Circuit> unadders;
  std::int64_t subtrahend = inverse % modulus;
  for (int t = 0; t < n; ++t) {
    unadders.push_back(inverse_circuit(fourier_cc_madd(width, control, y[n - 1 - t], z,
                                                       ancilla, subtrahend, modulus)));
    subtrahend = subtrahend * 2 % modulus;
  }
  c.extend(qft);
  for (auto it = unadders.rbegin(); it != unadders.rend(); ++it) c.extend(*it);
  c.extend(iqft);
  return c;
}

Circuit build_modexp(const ShorInstance& inst) {
  Circuit c;
  c.width = inst.width();
  const std::vector<int> y = inst.y_qubits();
  const std::vector<int> z = inst.z_qubits();
  std::int64_t factor = inst.base % inst.number;
  for (int i = 0; i < 2 * inst.n; ++i) {
    const int control = inst.x.start + (2 * inst.n - 1 - i);
    c.extend(build_cmmul(c.width, control, y, z, inst.ancilla, factor, inst.number));
    factor = factor * factor % inst.number;
  }
  return c;
}

Circuit build_shor_circuit(const ShorInstance& inst) {
  Circuit c;
  c.width = inst.width();
  c.registers["x"] = inst.x;
  c.registers["y"] = inst.y;
  c.registers["z"] = inst.z;
  for (int q : inst.x_qubits()) c.append(Gate::hadamard(q));
  c.extend(build_modexp(inst));
  c.extend(qft_on(c.width, inst.x_qubits()));
  c.registers["x"].bit_reversed = true;
  return c;
}

Statevector shor_final_state(const ShorInstance& inst) {
  const Circuit circuit = build_shor_circuit(inst);
  const int y_lsb = inst.y.start + inst.n - 1;
  const std::uint64_t index = std::uint64_t{1} << (inst.width() - 1 - y_lsb);
  return run_circuit(circuit, Statevector::basis_state(inst.width(), index));
}

std::optional<std::int64_t> continued_fraction_period(std::uint64_t outcome, int bits,
                                                      std::int64_t modulus,
                                                      std::int64_t base) {
  if (bits < 1 || bits > 62) throw std::invalid_argument("bit count out of range");
  if (outcome >= (std::uint64_t{1} << bits))
    throw std::invalid_argument("outcome does not fit the bit count");
  if (modulus < 2) throw std::invalid_argument("modulus must be at least 2");
  if (outcome == 0) return std::nullopt;

  std::int64_t num = static_cast<std::int64_t>(outcome);
  std::int64_t den = std::int64_t{1} << bits;
  std::int64_t qm1 = 0, qm2 = 1;
  std::set<std::int64_t> candidates;
  while (den != 0) {
    const std::int64_t a = num / den;
    const std::int64_t rem = num % den;
    const std::int64_t q = a * qm1 + qm2;
    qm2 = qm1;
    qm1 = q;
    num = den;
    den = rem;
    if (q < 1 || q >= modulus) continue;
    candidates.insert(q);
    if (q > 1)
      for (std::int64_t mult = 2 * q; mult < modulus; mult += q) candidates.insert(mult);
  }
  for (std::int64_t r : candidates)
    if (mod_pow(base, r, modulus) == 1) return r;
  return std::nullopt;
}

bool PostprocessResult::success() const {
  return !retry && factor1 > 1 && factor2 > 1;
}

PostprocessResult postprocess_period(std::int64_t period, std::int64_t base,
                                     std::int64_t modulus) {
  if (period < 1) throw std::invalid_argument("period must be positive");
  PostprocessResult res;
  if (period % 2 != 0) return res;
  const std::int64_t half = mod_pow(base, period / 2, modulus);
  if (half == modulus - 1) return res;
  const std::int64_t f1 = std::gcd(half - 1, modulus);
  const std::int64_t f2 = std::gcd(half + 1, modulus);
  const bool f1_ok = f1 > 1 && f1 < modulus;
  const bool f2_ok = f2 > 1 && f2 < modulus;
  if (!f1_ok && !f2_ok) return res;
  const std::int64_t f = f1_ok ? f1 : f2;
  res.factor1 = std::min(f, modulus / f);
  res.factor2 = std::max(f, modulus / f);
  res.retry = false;
  return res;
}

FactorReport run_shor(std::int64_t number, long shots, std::uint64_t seed,
                      std::optional<std::int64_t> fixed_base) {
  if (number < 3 || number % 2 == 0)
    throw std::invalid_argument("number must be odd and at least 3");
  if (is_prime(number)) throw std::invalid_argument("number must be composite");
  if (is_prime_power(number))
    throw std::invalid_argument("number must not be a prime power");
  if (shots < 1) throw std::invalid_argument("shot count must be positive");

  std::mt19937_64 rng(seed);
  std::vector<std::int64_t> bases;
  if (fixed_base) {
    if (*fixed_base <= 1 || *fixed_base >= number)
      throw std::invalid_argument("base must lie strictly between 1 and the number");
    if (std::gcd(*fixed_base, number) != 1)
      throw std::invalid_argument("base must be coprime to the number");
    bases.push_back(*fixed_base);
  } else {
    std::uniform_int_distribution<std::int64_t> draw(2, number - 2);
    int guard = 0;
    while (bases.size() < 10 && guard < 10000) {
      ++guard;
      const std::int64_t a = draw(rng);
      if (std::gcd(a, number) == 1) bases.push_back(a);
    }
    if (bases.empty()) throw std::runtime_error("no coprime base found");
  }

  FactorReport report;
  report.number = number;
  report.shots = shots;
  for (const std::int64_t a : bases) {
    const ShorInstance inst = ShorInstance::make(number, a);
    const Statevector state = shor_final_state(inst);
    RegisterSpan x_out = inst.x;
    x_out.bit_reversed = true;
    const std::uint64_t sample_seed = rng();
    const auto hist = sample_register(state, x_out, shots, sample_seed);

    report.base = a;
    report.width = inst.width();
    report.histogram = hist;
    report.nonzero_shots = 0;
    report.successful_shots = 0;
    ++report.attempts;

    for (const auto& [outcome, count] : hist) {
      if (outcome == 0) continue;
      report.nonzero_shots += count;
      const auto r = continued_fraction_period(outcome, 2 * inst.n, number, a);
      if (!r) continue;
      report.period = *r;
      const PostprocessResult post = postprocess_period(*r, a, number);
      if (!post.success()) continue;
      report.successful_shots += count;
      if (!report.success) {
        report.success = true;
        report.factor1 = post.factor1;
        report.factor2 = post.factor2;
      }
    }
    if (report.success) break;
  }
  return report;
}

}  // namespace jqc
