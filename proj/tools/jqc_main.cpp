#include <cstdint>
#include <exception>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "jqc/circuit.hpp"
#include "jqc/propagator.hpp"
#include "jqc/resources.hpp"
#include "jqc/serialization.hpp"
#include "jqc/shor.hpp"
#include "jqc/statevector.hpp"
#include "jqc/synthesis.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitPrecondition = 2;
constexpr int kExitUnconverged = 3;

struct SynthTarget {
  Eigen::MatrixXcd matrix;
  int qubits = 1;
  bool analytic_single_qubit = false;
};

SynthTarget parse_target(const std::string& name) {
  SynthTarget t;
  if (name == "cnot") {
    t.matrix = jqc::Gate::cnot(0, 1).dense();
    t.qubits = 2;
  } else if (name == "fredkin") {
    t.matrix = jqc::Gate::fredkin(0, 1, 2).dense();
    t.qubits = 3;
  } else if (name == "qft3") {
    t.matrix = jqc::dense_qft(3);
    t.qubits = 3;
  } else if (name == "hadamard") {
    Eigen::Matrix2cd h;
    const double s = 1.0 / std::numbers::sqrt2;
    h << s, s, s, -s;
    t.matrix = jqc::complexd(0.0, 1.0) * h;
    t.qubits = 1;
    t.analytic_single_qubit = true;
  } else if (name.rfind("ccphase:", 0) == 0) {
    const double angle = std::stod(name.substr(8));
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(8, 8);
    m(7, 7) = std::polar(1.0, angle);
    t.matrix = m;
    t.qubits = 3;
  } else {
    const nlohmann::json j = jqc::read_json_file(name);
    const auto& rows = j.contains("matrix") ? j.at("matrix") : j;
    const auto r = static_cast<Eigen::Index>(rows.size());
    Eigen::MatrixXcd m(r, r);
    for (Eigen::Index i = 0; i < r; ++i)
      for (Eigen::Index c = 0; c < r; ++c) {
        const auto& e = rows.at(i).at(c);
        m(i, c) = jqc::complexd(e.at(0).get<double>(), e.at(1).get<double>());
      }
    t.matrix = m;
    int q = 0;
    while ((Eigen::Index{1} << q) < t.matrix.rows()) ++q;
    if ((Eigen::Index{1} << q) != t.matrix.rows())
      throw std::invalid_argument("matrix dimension must be a power of two");
    t.qubits = q;
  }
  t.matrix = jqc::su_normalize(t.matrix);
  return t;
}

int cmd_synth(const std::string& target_name, int qubits, int vertices, int restarts,
              long budget, std::uint64_t seed, double tolerance, int threads,
              const std::string& out) {
  const SynthTarget target = parse_target(target_name);
  if (qubits > 0 && qubits != target.qubits)
    throw std::invalid_argument("--qubits does not match the target's size");

  jqc::SynthesisResult result;
  if (target.analytic_single_qubit) {
    const jqc::ZxzAngles angles = jqc::single_qubit_zxz(target.matrix);
    result.path = jqc::pulse_integrals_to_path(angles);
    jqc::PropagationSettings settings;
    settings.method = jqc::StepMethod::spectral;
    result.error =
        jqc::frobenius_distance(target.matrix, jqc::propagate(result.path, settings));
    result.evals = 0;
    result.converged = result.error <= tolerance;
    result.trace = {result.error};
  } else {
    const int v = vertices > 0 ? vertices : jqc::min_vertices(target.qubits);
    jqc::SynthesisProblem problem =
        jqc::SynthesisProblem::for_target(target.matrix, v, budget, restarts, seed,
                                          tolerance);
    problem.max_workers = threads;
    result = jqc::minimize(problem);
  }

  jqc::write_json_file(out, jqc::synthesis_result_to_json(result));
  std::cout << "target " << target_name << ": error " << std::scientific
            << std::setprecision(3) << result.error << " after " << result.evals
            << " evaluations -> " << out << '\n';
  return result.converged ? kExitOk : kExitUnconverged;
}

int cmd_propagate(const std::string& path_file, double dt, const std::string& method,
                  int order, const std::string& out) {
  const jqc::ControlPath path = jqc::path_from_json(jqc::read_json_file(path_file));
  jqc::PropagationSettings settings;
  settings.dt = dt;
  settings.taylor_order = order;
  if (method == "taylor")
    settings.method = jqc::StepMethod::taylor;
  else if (method == "cayley")
    settings.method = jqc::StepMethod::cayley;
  else if (method == "spectral")
    settings.method = jqc::StepMethod::spectral;
  else
    throw std::invalid_argument("unknown method '" + method + "'");

  const Eigen::MatrixXcd u = jqc::propagate(path, settings);
  const double defect = jqc::unitarity_defect(u);
  std::cout << std::fixed << std::setprecision(6);
  for (Eigen::Index r = 0; r < u.rows(); ++r) {
    for (Eigen::Index c = 0; c < u.cols(); ++c) {
      const jqc::complexd& e = u(r, c);
      std::cout << (c ? "  " : "") << std::showpos << e.real() << e.imag() << 'i'
                << std::noshowpos;
    }
    std::cout << '\n';
  }
  std::cout << "unitarity defect: " << std::scientific << std::setprecision(3)
            << defect << '\n';
  if (!out.empty()) {
    nlohmann::json j;
    j["unitarity_defect"] = defect;
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index r = 0; r < u.rows(); ++r) {
      nlohmann::json row = nlohmann::json::array();
      for (Eigen::Index c = 0; c < u.cols(); ++c)
        row.push_back(nlohmann::json::array({u(r, c).real(), u(r, c).imag()}));
      rows.push_back(std::move(row));
    }
    j["matrix"] = std::move(rows);
    jqc::write_json_file(out, j);
  }
  return kExitOk;
}

int cmd_factor(std::int64_t number, std::optional<std::int64_t> base, long shots,
               std::uint64_t seed, const std::string& hist_file,
               const std::string& out) {
  const jqc::FactorReport report = jqc::run_shor(number, shots, seed, base);
  if (!hist_file.empty())
    jqc::write_histogram_csv(hist_file, report.histogram, report.shots);
  if (!out.empty()) jqc::write_json_file(out, jqc::factor_report_to_json(report));
  if (report.success) {
    std::cout << report.number << " = " << report.factor1 << " x " << report.factor2
              << "  (base " << report.base << ", period " << report.period << ", "
              << report.successful_shots << "/" << report.shots
              << " shots successful)\n";
    return kExitOk;
  }
  std::cout << "no factors found for " << report.number << " after "
            << report.attempts << " attempt(s)\n";
  return kExitFailure;
}

int cmd_estimate(std::int64_t number, std::int64_t base, double coherence, int bits,
                 long c3, long c2, long c1, const std::string& out) {
  if (c3 >= 0 || c2 >= 0 || c1 >= 0) {
    jqc::GateCounts counts;
    counts.three_qubit = std::max(0L, c3);
    counts.two_qubit = std::max(0L, c2);
    counts.one_qubit = std::max(0L, c1);
    const long edges = jqc::count_edges(counts);
    std::cout << "edges: " << edges << '\n';
    if (coherence > 0.0) {
      const jqc::FeasibilityReport f = jqc::feasibility(edges, coherence);
      std::cout << "edge duration bound: " << std::scientific << std::setprecision(3)
                << f.edge_duration_bound << " s\n"
                << "required angular frequency: " << f.required_angular_frequency
                << " 1/s\n";
    }
    return kExitOk;
  }
  if (bits > 0 && number <= 0) {
    const jqc::ScalingReport s = jqc::scaling_estimate(bits);
    std::cout << "bits " << s.bits << ": " << s.qubits << " qubits, relative time "
              << std::setprecision(4) << s.relative_time << '\n';
    return kExitOk;
  }
  if (number <= 0)
    throw std::invalid_argument("estimate needs --N, --bits, or explicit gate counts");

  if (base <= 0) {
    base = 2;
    while (std::gcd(base, number) != 1) ++base;
  }
  const jqc::ResourceReport report =
      jqc::resource_report(number, base, coherence > 0.0 ? coherence : 1e-6);
  std::cout << "N = " << report.number << " (base " << report.base << "), width "
            << report.width << " qubits\n";
  std::cout << "mixed:          " << report.mixed.three_qubit << " three-qubit, "
            << report.mixed.two_qubit << " two-qubit, " << report.mixed.one_qubit
            << " one-qubit -> " << report.edges_mixed << " edges\n";
  std::cout << "two-qubit only: " << report.two_qubit_only.two_qubit
            << " two-qubit, " << report.two_qubit_only.one_qubit << " one-qubit -> "
            << report.edges_two_qubit_only << " edges\n";
  std::cout << std::scientific << std::setprecision(3)
            << "edge duration bound: " << report.feasibility_mixed.edge_duration_bound
            << " s, required angular frequency: "
            << report.feasibility_mixed.required_angular_frequency << " 1/s\n";
  std::cout << "scaling: " << report.scaling.qubits << " qubits, relative time "
            << std::defaultfloat << std::setprecision(4)
            << report.scaling.relative_time << '\n';
  for (const std::string& note : report.notes) std::cout << "note: " << note << '\n';
  if (!out.empty()) jqc::write_json_file(out, jqc::resource_report_to_json(report));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pulse-level quantum gate synthesis and Shor's algorithm toolkit"};
  app.require_subcommand(1);

  std::string target, path_file, method = "taylor", out, hist_file;
  int qubits = 0, vertices = 0, restarts = 1, order = 3, threads = 1, bits = 0;
  long budget = 100000, shots = 256, c3 = -1, c2 = -1, c1 = -1;
  std::int64_t number = 0, base_value = -1;
  double tolerance = 1e-4, dt = 1e-3, coherence = 0.0;
  std::uint64_t seed = 1;

  CLI::App* synth = app.add_subcommand(
      "synth", "Synthesize a control path for a named gate or matrix file");
  synth->add_option("target", target,
                    "cnot | fredkin | qft3 | hadamard | ccphase:<radians> | file.json")
      ->required();
  synth->add_option("--qubits", qubits, "Expected register size");
  synth->add_option("--vertices", vertices, "Path vertices (default: minimum)");
  synth->add_option("--restarts", restarts, "Optimizer restarts");
  synth->add_option("--budget", budget, "Total objective evaluations");
  synth->add_option("--seed", seed, "Random seed");
  synth->add_option("--tolerance", tolerance, "Convergence threshold");
  synth->add_option("--threads", threads, "Worker cap");
  synth->add_option("--out", out, "Result JSON file")->default_val("synthesis.json");

  CLI::App* propagate = app.add_subcommand("propagate", "Propagate a path file");
  propagate->add_option("--path", path_file, "Path JSON file")->required();
  propagate->add_option("--dt", dt, "Step size");
  propagate->add_option("--method", method, "taylor | cayley | spectral");
  propagate->add_option("--order", order, "Taylor expansion order");
  propagate->add_option("--out", out, "Optional matrix JSON file");

  CLI::App* factor = app.add_subcommand("factor", "Factor an odd composite");
  factor->add_option("--N", number, "Number to factor")->required();
  factor->add_option("--a", base_value, "Fixed exponentiation base");
  factor->add_option("--shots", shots, "Samples of the x register");
  factor->add_option("--seed", seed, "Random seed");
  factor->add_option("--hist", hist_file, "Histogram CSV file");
  factor->add_option("--out", out, "Report JSON file");

  CLI::App* estimate = app.add_subcommand("estimate", "Gate and edge accounting");
  estimate->add_option("--N", number, "Number to factor");
  estimate->add_option("--a", base_value, "Exponentiation base");
  estimate->add_option("--coherence", coherence, "Coherence time in seconds");
  estimate->add_option("--bits", bits, "Scaling row for this bit length");
  estimate->add_option("--three-qubit", c3, "Explicit three-qubit gate count");
  estimate->add_option("--two-qubit", c2, "Explicit two-qubit gate count");
  estimate->add_option("--one-qubit", c1, "Explicit one-qubit gate count");
  estimate->add_option("--out", out, "Report JSON file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitPrecondition;
  }

  try {
    if (synth->parsed())
      return cmd_synth(target, qubits, vertices, restarts, budget, seed, tolerance,
                       threads, out);
    if (propagate->parsed()) return cmd_propagate(path_file, dt, method, order, out);
    if (factor->parsed())
      return cmd_factor(number,
                        base_value > 0 ? std::optional<std::int64_t>(base_value)
                                       : std::nullopt,
                        shots, seed, hist_file, out);
    if (estimate->parsed())
      return cmd_estimate(number, base_value, coherence, bits, c3, c2, c1, out);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitPrecondition;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitPrecondition;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitPrecondition;
}
