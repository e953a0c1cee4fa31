#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "jqc/circuit.hpp"
#include "jqc/propagator.hpp"
#include "jqc/register_model.hpp"
#include "jqc/resources.hpp"
#include "jqc/serialization.hpp"
#include "jqc/shor.hpp"
#include "jqc/statevector.hpp"
#include "jqc/synthesis.hpp"

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Criterion = std::function<Outcome(bool extended)>;

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

jqc::ControlPath random_two_qubit_path(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> box(-2.0, 2.0);
  jqc::ControlPath path;
  path.n = 2;
  for (int v = 0; v < 4; ++v) {
    Eigen::VectorXd x(4);
    for (int d = 0; d < 4; ++d) x(d) = box(rng);
    path.vertices.push_back(x);
  }
  return path;
}

Eigen::Matrix2cd hadamard_times_i() {
  Eigen::Matrix2cd h;
  h << 1.0, 1.0, 1.0, -1.0;
  return jqc::complexd(0.0, 1.0) / std::sqrt(2.0) * h;
}

long read_peak_memory_kb() {
  std::ifstream status("/proc/self/status");
  std::string line;
  while (std::getline(status, line)) {
    if (line.rfind("VmHWM:", 0) == 0) {
      std::istringstream s(line.substr(6));
      long kb = 0;
      s >> kb;
      return kb;
    }
  }
  return -1;
}

std::string library_path(const std::string& name) {
#ifdef JQC_DATA_DIR
  return std::string(JQC_DATA_DIR) + "/" + name;
#else
  return "data/" + name;
#endif
}

Outcome criterion_vertex_minimums(bool) {
  Outcome out;
  out.pass = jqc::min_vertices(2) == 4 && jqc::min_vertices(3) == 11;
  out.detail = "min vertices " + std::to_string(jqc::min_vertices(2)) + " and " +
               std::to_string(jqc::min_vertices(3));
  return out;
}

Outcome criterion_integrator_consistency(bool) {
  std::mt19937_64 rng(2024);
  double worst_distance = 0.0;
  double lowest_ratio = 1e300;
  double highest_ratio = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const jqc::ControlPath path = random_two_qubit_path(rng);

    jqc::PropagationSettings settings;
    settings.dt = 1e-3;
    settings.method = jqc::StepMethod::taylor;
    const Eigen::MatrixXcd ut = jqc::propagate(path, settings);
    settings.method = jqc::StepMethod::spectral;
    const Eigen::MatrixXcd us = jqc::propagate(path, settings);
    worst_distance = std::max(worst_distance, (ut - us).norm());

    Eigen::MatrixXcd h;
    double strongest = -1.0;
    for (int edge = 0; edge < path.vertex_count() + 1; ++edge) {
      const Eigen::MatrixXcd cand = jqc::assemble_hamiltonian(
          jqc::sample_path(path, static_cast<double>(edge) + 0.5));
      const double err = (jqc::step(cand, 1e-2, jqc::StepMethod::taylor, 3)
                          - jqc::step(cand, 1e-2, jqc::StepMethod::spectral))
                             .norm();
      if (err > strongest) {
        strongest = err;
        h = cand;
      }
    }
    auto local_error = [&](double dt) {
      return (jqc::step(h, dt, jqc::StepMethod::taylor, 3)
              - jqc::step(h, dt, jqc::StepMethod::spectral))
          .norm();
    };
    const double ratio = local_error(1e-2) / local_error(5e-3);
    lowest_ratio = std::min(lowest_ratio, ratio);
    highest_ratio = std::max(highest_ratio, ratio);
  }
  Outcome out;
  out.pass = worst_distance <= 1e-6 && lowest_ratio >= 8.0 && highest_ratio <= 32.0;
  out.detail = "max distance " + format_double(worst_distance) +
               ", step-halving ratio in [" + format_double(lowest_ratio) + ", " +
               format_double(highest_ratio) + "]";
  return out;
}

Outcome criterion_analytic_pulses(bool) {
  const Eigen::Matrix2cd target = hadamard_times_i();
  const jqc::ZxzAngles angles = jqc::single_qubit_zxz(target);
  const jqc::ControlPath path = jqc::pulse_integrals_to_path(angles);
  const double distance = jqc::frobenius_distance(jqc::propagate(path), target);
  Outcome out;
  out.pass = distance <= 1e-10;
  out.detail = "pulse reconstruction distance " + format_double(distance);
  return out;
}

Outcome criterion_two_qubit_synthesis(bool) {
  const Eigen::MatrixXcd target = jqc::su_normalize(jqc::Gate::cnot(0, 1).dense());
  const jqc::SynthesisProblem problem =
      jqc::SynthesisProblem::for_target(target, 4, 100000, 1, 1, 1e-6);
  const jqc::SynthesisResult result = jqc::minimize(problem);
  Outcome out;
  out.pass = result.error < 1e-6;
  out.detail = "error " + format_double(result.error) + " after " +
               std::to_string(result.evals) + " evaluations";
  return out;
}

Outcome criterion_three_qubit_synthesis(bool extended) {
  const Eigen::MatrixXcd target =
      jqc::su_normalize(jqc::Gate::fredkin(0, 1, 2).dense());
  const long budget = extended ? 1000000 : 300000;
  const double bound = extended ? 1e-4 : 1e-2;
  const jqc::SynthesisProblem problem =
      jqc::SynthesisProblem::for_target(target, 11, budget, 1, 3, bound);
  const jqc::SynthesisResult result = jqc::minimize(problem);
  Outcome out;
  out.pass = result.error <= bound;
  out.detail = "error " + format_double(result.error) + " after " +
               std::to_string(result.evals) + " evaluations (bound " +
               format_double(bound) + ")";
  return out;
}

Outcome criterion_noise_robustness(bool) {
  Outcome out;
  const std::string file = library_path("gate_library/fredkin_nu11.json");
  jqc::SynthesisResult stored;
  try {
    stored = jqc::synthesis_result_from_json(jqc::read_json_file(file));
  } catch (const std::exception& e) {
    out.pass = false;
    out.detail = std::string("cannot load ") + file + ": " + e.what();
    return out;
  }
  const Eigen::MatrixXcd target =
      jqc::su_normalize(jqc::Gate::fredkin(0, 1, 2).dense());
  const jqc::NoiseRobustness sweep =
      jqc::noise_robustness(stored.path, target, {1e-4, 3e-4, 1e-3, 3e-3, 1e-2},
                            100, 1);
  out.pass = sweep.r_squared >= 0.95 && sweep.slope >= 1.0 && sweep.slope <= 20.0;
  out.detail = "slope " + format_double(sweep.slope) + ", R^2 " +
               format_double(sweep.r_squared) + ", base error " +
               format_double(sweep.base_error);
  return out;
}

bool check_phi_add(std::int64_t modulus) {
  const Eigen::MatrixXcd f = jqc::dense_qft(4);
  const jqc::Circuit adder = jqc::build_phi_add(4, {0, 1, 2, 3}, modulus);
  for (std::uint64_t b = 0; b < 16; ++b) {
    jqc::Statevector state = jqc::Statevector::basis_state(4, 0);
    for (int k = 0; k < 16; ++k) state.amps[k] = f(k, static_cast<int>(b));
    state = jqc::run_circuit(adder, state);
    Eigen::VectorXcd v(16);
    for (int k = 0; k < 16; ++k) v(k) = state.amps[k];
    v = f.adjoint() * v;
    const std::uint64_t expected = (b + static_cast<std::uint64_t>(modulus)) % 16;
    if (std::abs(v(static_cast<int>(expected))) < 1.0 - 1e-9) return false;
  }
  return true;
}

bool check_cc_madd(std::int64_t modulus, std::int64_t value) {
  const std::vector<int> z = {2, 3, 4, 5};
  const jqc::Circuit adder = jqc::build_cc_madd(7, 0, 1, z, 6, value, modulus);
  for (std::uint64_t controls = 0; controls < 4; ++controls) {
    for (std::uint64_t b = 0; b < static_cast<std::uint64_t>(modulus); ++b) {
      const std::uint64_t in = (controls << 5) | (b << 1);
      const std::uint64_t expected_value =
          controls == 3 ? (b + static_cast<std::uint64_t>(value)) %
                              static_cast<std::uint64_t>(modulus)
                        : b;
      const std::uint64_t expected = (controls << 5) | (expected_value << 1);
      const jqc::Statevector state =
          jqc::run_circuit(adder, jqc::Statevector::basis_state(7, in));
      if (std::abs(state.amps[expected]) < 1.0 - 1e-9) return false;
    }
  }
  return true;
}

bool check_cmmul(std::int64_t modulus, std::int64_t factor) {
  const std::vector<int> y = {1, 2, 3};
  const std::vector<int> z = {4, 5, 6, 7};
  const jqc::Circuit mul = jqc::build_cmmul(9, 0, y, z, 8, factor, modulus);
  for (std::uint64_t control = 0; control < 2; ++control) {
    for (std::uint64_t b = 0; b < static_cast<std::uint64_t>(modulus); ++b) {
      const std::uint64_t in = (control << 8) | (b << 5);
      const std::uint64_t expected_value =
          control ? (b * static_cast<std::uint64_t>(factor)) %
                        static_cast<std::uint64_t>(modulus)
                  : b;
      const std::uint64_t expected = (control << 8) | (expected_value << 5);
      const jqc::Statevector state =
          jqc::run_circuit(mul, jqc::Statevector::basis_state(9, in));
      if (std::abs(state.amps[expected]) < 1.0 - 1e-9) return false;
    }
  }
  return true;
}

bool check_modexp(std::int64_t modulus, std::int64_t base) {
  const jqc::ShorInstance inst = jqc::ShorInstance::make(modulus, base);
  const jqc::Circuit modexp = jqc::build_modexp(inst);
  const int x_shift = 2 * inst.n + 2;
  const int y_shift = inst.n + 2;
  for (std::uint64_t x = 0; x < (1ULL << (2 * inst.n)); ++x) {
    const std::uint64_t in = (x << x_shift) | (1ULL << y_shift);
    const std::uint64_t expected_y = static_cast<std::uint64_t>(
        jqc::mod_pow(base, static_cast<std::int64_t>(x), modulus));
    const std::uint64_t expected = (x << x_shift) | (expected_y << y_shift);
    const jqc::Statevector state =
        jqc::run_circuit(modexp, jqc::Statevector::basis_state(inst.width(), in));
    if (std::abs(state.amps[expected]) < 1.0 - 1e-9) return false;
  }
  return true;
}

Outcome criterion_arithmetic_equivalence(bool) {
  Outcome out;
  out.pass = true;
  const std::vector<std::pair<std::int64_t, std::int64_t>> cases = {
      {5, 2}, {6, 5}, {7, 3}};
  for (const auto& [modulus, base] : cases) {
    if (!check_phi_add(modulus)) {
      out.pass = false;
      out.detail = "phase adder failed for modulus " + std::to_string(modulus);
      return out;
    }
    if (!check_cc_madd(modulus, base)) {
      out.pass = false;
      out.detail = "modular adder failed for modulus " + std::to_string(modulus);
      return out;
    }
    if (!check_cmmul(modulus, base)) {
      out.pass = false;
      out.detail = "modular multiplier failed for modulus " + std::to_string(modulus);
      return out;
    }
    if (!check_modexp(modulus, base)) {
      out.pass = false;
      out.detail = "modular exponentiation failed for modulus " +
                   std::to_string(modulus);
      return out;
    }
  }
  out.detail = "adders, multipliers, and exponentiation exact for moduli 5, 6, 7";
  return out;
}

Outcome criterion_qft_decomposition(bool) {
  Outcome out;
  out.pass = true;

  const jqc::Circuit ten = jqc::qft_decompose(10);
  long two_qubit = 0, blocks = 0, other = 0;
  for (const auto& gate : ten.gates) {
    if (gate.kind == jqc::GateKind::qft_block)
      ++blocks;
    else if (gate.arity() == 2)
      ++two_qubit;
    else
      ++other;
  }
  if (two_qubit != 42 || blocks != 1 || other != 0) {
    out.pass = false;
    out.detail = "m=10 produced " + std::to_string(two_qubit) +
                 " two-qubit gates and " + std::to_string(blocks) + " blocks";
    return out;
  }

  double worst = 0.0;
  for (int m = 3; m <= 8; ++m) {
    const Eigen::MatrixXcd dense = jqc::circuit_unitary(jqc::qft_decompose(m));
    worst = std::max(worst, (dense - jqc::dense_qft(m)).norm());
  }
  if (worst > 1e-10) {
    out.pass = false;
    out.detail = "dense reconstruction distance " + format_double(worst);
    return out;
  }

  const jqc::Circuit six = jqc::qft_decompose(6);
  long six_two_qubit = 0;
  for (const auto& gate : six.gates)
    if (gate.arity() == 2) ++six_two_qubit;
  if (six_two_qubit != 12) {
    out.pass = false;
    out.detail = "m=6 produced " + std::to_string(six_two_qubit) + " two-qubit gates";
    return out;
  }

  bool flagged = false;
  for (const auto& note : jqc::resource_report(15, 7).notes)
    if (note.find("18") != std::string::npos && note.find("12") != std::string::npos)
      flagged = true;
  if (!flagged) {
    out.pass = false;
    out.detail = "report does not flag the count discrepancy";
    return out;
  }

  out.detail = "m=10 gives 42 two-qubit gates plus one block; dense match " +
               format_double(worst) + "; m=6 gives 12 with the variant count flagged";
  return out;
}

Outcome criterion_factor_fifteen(bool) {
  Outcome out;
  const jqc::ShorInstance inst = jqc::ShorInstance::make(15, 7);
  const jqc::Statevector state = jqc::shor_final_state(inst);
  jqc::RegisterSpan x = inst.x;
  x.bit_reversed = true;
  const std::vector<double> dist = jqc::exact_register_distribution(state, x);
  double worst = 0.0;
  for (std::size_t k = 0; k < dist.size(); ++k) {
    const bool peak = (k % 64) == 0;
    worst = std::max(worst, std::abs(dist[k] - (peak ? 0.25 : 0.0)));
  }
  if (worst > 1e-9) {
    out.pass = false;
    out.detail = "distribution deviates by " + format_double(worst);
    return out;
  }

  const jqc::FactorReport report = jqc::run_shor(15, 256, 1, 7);
  const std::int64_t lo = std::min(report.factor1, report.factor2);
  const std::int64_t hi = std::max(report.factor1, report.factor2);
  out.pass = report.success && lo == 3 && hi == 5;
  out.detail = "distribution uniform within " + format_double(worst) +
               "; 256 shots give " + std::to_string(lo) + " x " + std::to_string(hi);
  return out;
}

Outcome criterion_factor_twenty_one(bool) {
  Outcome out;
  const jqc::ShorInstance inst = jqc::ShorInstance::make(21, 11);
  if (inst.width() != 22) {
    out.pass = false;
    out.detail = "unexpected width " + std::to_string(inst.width());
    return out;
  }
  const jqc::Statevector state = jqc::shor_final_state(inst);
  jqc::RegisterSpan x = inst.x;
  x.bit_reversed = true;
  const std::vector<double> dist = jqc::exact_register_distribution(state, x);

  std::vector<std::pair<double, std::uint64_t>> ranked;
  for (std::size_t k = 1; k < dist.size(); ++k)
    ranked.push_back({dist[k], static_cast<std::uint64_t>(k)});
  std::sort(ranked.rbegin(), ranked.rend());

  for (int p = 0; p < 5; ++p) {
    const auto period =
        jqc::continued_fraction_period(ranked[p].second, 2 * inst.n, 21, 11);
    if (!period || *period != 6) {
      out.pass = false;
      out.detail = "peak " + std::to_string(ranked[p].second) +
                   " does not recover the period";
      return out;
    }
  }
  const jqc::PostprocessResult post = jqc::postprocess_period(6, 11, 21);
  if (!post.success() || std::min(post.factor1, post.factor2) != 3 ||
      std::max(post.factor1, post.factor2) != 7) {
    out.pass = false;
    out.detail = "period 6 did not split 21";
    return out;
  }

  const auto hist = jqc::sample_register(state, x, 256, 1);
  long nonzero = 0, successful = 0;
  for (const auto& [outcome, count] : hist) {
    if (outcome == 0) continue;
    nonzero += count;
    const auto period = jqc::continued_fraction_period(outcome, 2 * inst.n, 21, 11);
    if (!period) continue;
    const jqc::PostprocessResult shot = jqc::postprocess_period(*period, 11, 21);
    if (shot.success()) successful += count;
  }
  const long peak_kb = read_peak_memory_kb();
  out.pass = nonzero > 0 && 2 * successful >= nonzero &&
             (peak_kb < 0 || peak_kb < 1048576);
  out.detail = std::to_string(successful) + " of " + std::to_string(nonzero) +
               " nonzero shots postprocess; peak memory " +
               std::to_string(peak_kb) + " kB";
  return out;
}

Outcome criterion_resource_identities(bool) {
  Outcome out;
  jqc::GateCounts mixed;
  mixed.two_qubit = 5900;
  mixed.three_qubit = 2300;
  jqc::GateCounts flat;
  flat.two_qubit = 16400;
  if (jqc::count_edges(mixed) != 57100 || jqc::count_edges(flat) != 82000) {
    out.pass = false;
    out.detail = "edge identities broke";
    return out;
  }

  const jqc::ResourceReport report = jqc::resource_report(21, 11);
  auto within = [](long value, long center) {
    return 4 * std::abs(value - center) <= center;
  };
  out.pass = within(report.mixed.three_qubit, 2300) &&
             within(report.mixed.two_qubit, 5900) &&
             within(report.two_qubit_only.two_qubit, 16400);
  out.detail = "57100 and 82000 exact; N=21 counts " +
               std::to_string(report.mixed.three_qubit) + " three-qubit, " +
               std::to_string(report.mixed.two_qubit) + " two-qubit, " +
               std::to_string(report.two_qubit_only.two_qubit) + " flattened";
  return out;
}

Outcome criterion_feasibility(bool) {
  Outcome out;
  const jqc::FeasibilityReport f = jqc::feasibility(10000, 1e-6);
  const bool duration_ok = std::abs(f.edge_duration_bound - 1e-10) <= 1e-22;
  const bool frequency_ok = std::abs(f.required_angular_frequency - 1e10) <= 1e-2;
  const jqc::ScalingReport s = jqc::scaling_estimate(512);
  out.pass = duration_ok && frequency_ok && s.qubits == 2050;
  out.detail = "edge duration " + format_double(f.edge_duration_bound) +
               " s, frequency " + format_double(f.required_angular_frequency) +
               " 1/s, 512-bit plan " + std::to_string(s.qubits) + " qubits";
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  bool extended = false;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg.rfind("--only=", 0) == 0)
      only = std::atoi(arg.c_str() + 7);
    else if (arg == "--extended")
      extended = true;
    else {
      std::cerr << "usage: acceptance [--only=N] [--extended]\n";
      return 2;
    }
  }

  const std::vector<std::pair<std::string, Criterion>> criteria = {
      {"vertex minimums", criterion_vertex_minimums},
      {"integrator consistency", criterion_integrator_consistency},
      {"analytic single-qubit pulses", criterion_analytic_pulses},
      {"two-qubit gate synthesis", criterion_two_qubit_synthesis},
      {"three-qubit gate synthesis", criterion_three_qubit_synthesis},
      {"noise robustness of the library path", criterion_noise_robustness},
      {"arithmetic circuit equivalence", criterion_arithmetic_equivalence},
      {"QFT decomposition", criterion_qft_decomposition},
      {"factoring 15", criterion_factor_fifteen},
      {"factoring 21", criterion_factor_twenty_one},
      {"resource accounting", criterion_resource_identities},
      {"feasibility arithmetic", criterion_feasibility},
  };

  int failures = 0, ran = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int number = static_cast<int>(i) + 1;
    if (only != 0 && only != number) continue;
    ++ran;
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = criteria[i].second(extended);
    } catch (const std::exception& e) {
      outcome.pass = false;
      outcome.detail = std::string("exception: ") + e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    std::printf("[%s] criterion %d: %s: %s (%.1fs)\n",
                outcome.pass ? "PASS" : "FAIL", number,
                criteria[i].first.c_str(), outcome.detail.c_str(), seconds);
    std::fflush(stdout);
    if (!outcome.pass) ++failures;
  }

  if (ran == 0) {
    std::cerr << "no such criterion\n";
    return 2;
  }
  if (ran > 1)
    std::printf("%d of %d criteria passed\n", ran - failures, ran);
  return failures == 0 ? 0 : 1;
}
