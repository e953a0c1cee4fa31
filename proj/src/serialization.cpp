#include "jqc/serialization.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace jqc {

namespace {

using nlohmann::json;

const char* kind_name(GateKind kind) {
  switch (kind) {
    case GateKind::hadamard: return "hadamard";
    case GateKind::not_x: return "not";
    case GateKind::phase_shift: return "phase";
    case GateKind::controlled_phase: return "cphase";
    case GateKind::cc_phase: return "ccphase";
    case GateKind::cnot: return "cnot";
    case GateKind::swap: return "swap";
    case GateKind::fredkin: return "fredkin";
    case GateKind::qft_block: return "qft";
    case GateKind::inv_qft_block: return "iqft";
    case GateKind::custom: return "custom";
  }
  throw std::logic_error("unknown gate kind");
}

GateKind kind_from_name(const std::string& name) {
  if (name == "hadamard") return GateKind::hadamard;
  if (name == "not") return GateKind::not_x;
  if (name == "phase") return GateKind::phase_shift;
  if (name == "cphase") return GateKind::controlled_phase;
  if (name == "ccphase") return GateKind::cc_phase;
  if (name == "cnot") return GateKind::cnot;
  if (name == "swap") return GateKind::swap;
  if (name == "fredkin") return GateKind::fredkin;
  if (name == "qft") return GateKind::qft_block;
  if (name == "iqft") return GateKind::inv_qft_block;
  if (name == "custom") return GateKind::custom;
  throw std::invalid_argument("unknown gate kind '" + name + "'");
}

json matrix_to_json(const Eigen::MatrixXcd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      row.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXcd matrix_from_json(const json& j) {
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (rows == 0) throw std::invalid_argument("matrix must not be empty");
  const auto cols = static_cast<Eigen::Index>(j.at(0).size());
  Eigen::MatrixXcd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    if (static_cast<Eigen::Index>(j.at(r).size()) != cols)
      throw std::invalid_argument("matrix rows have unequal lengths");
    for (Eigen::Index c = 0; c < cols; ++c) {
      const json& e = j.at(r).at(c);
      m(r, c) = complexd(e.at(0).get<double>(), e.at(1).get<double>());
    }
  }
  return m;
}

}  // namespace

json path_to_json(const ControlPath& path) {
  json vertices = json::array();
  for (const Eigen::VectorXd& v : path.vertices) {
    json coords = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) coords.push_back(v[i]);
    vertices.push_back(std::move(coords));
  }
  return json{{"n", path.n}, {"vertices", std::move(vertices)}};
}

ControlPath path_from_json(const json& j) {
  ControlPath path;
  path.n = j.at("n").get<int>();
  for (const json& coords : j.at("vertices")) {
    Eigen::VectorXd v(coords.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = coords.at(i).get<double>();
    path.vertices.push_back(std::move(v));
  }
  path.validate();
  return path;
}

json synthesis_result_to_json(const SynthesisResult& result, std::size_t max_trace) {
  json trace = json::array();
  const std::size_t s = result.trace.size();
  if (s <= max_trace || max_trace < 2) {
    for (double v : result.trace) trace.push_back(v);
  } else {
    const std::size_t stride = (s - 1 + max_trace - 2) / (max_trace - 1);
    for (std::size_t i = 0; i < s - 1; i += stride) trace.push_back(result.trace[i]);
    trace.push_back(result.trace[s - 1]);
  }
  return json{{"path", path_to_json(result.path)},
              {"error", result.error},
              {"evals", result.evals},
              {"converged", result.converged},
              {"trace", std::move(trace)}};
}

SynthesisResult synthesis_result_from_json(const json& j) {
  SynthesisResult r;
  r.path = path_from_json(j.at("path"));
  r.error = j.at("error").get<double>();
  r.evals = j.at("evals").get<long>();
  r.converged = j.at("converged").get<bool>();
  for (const json& v : j.at("trace")) r.trace.push_back(v.get<double>());
  return r;
}

json circuit_to_json(const Circuit& circuit) {
  json gates = json::array();
  for (const Gate& g : circuit.gates) {
    json jg{{"kind", kind_name(g.kind)}, {"qubits", g.qubits}};
    if (g.is_phase_kind()) {
      jg["num"] = g.phase_num;
      jg["den_log2"] = g.phase_den_log2;
    }
    if (g.kind == GateKind::custom) jg["matrix"] = matrix_to_json(g.matrix);
    gates.push_back(std::move(jg));
  }
  json registers = json::object();
  for (const auto& [name, reg] : circuit.registers)
    registers[name] = json{
        {"start", reg.start}, {"size", reg.size}, {"bit_reversed", reg.bit_reversed}};
  return json{{"width", circuit.width},
              {"registers", std::move(registers)},
              {"gates", std::move(gates)}};
}

Circuit circuit_from_json(const json& j) {
  Circuit c;
  c.width = j.at("width").get<int>();
  if (j.contains("registers")) {
    for (const auto& [name, jr] : j.at("registers").items()) {
      RegisterSpan reg;
      reg.start = jr.at("start").get<int>();
      reg.size = jr.at("size").get<int>();
      reg.bit_reversed = jr.at("bit_reversed").get<bool>();
      c.registers[name] = reg;
    }
  }
  for (const json& jg : j.at("gates")) {
    Gate g;
    g.kind = kind_from_name(jg.at("kind").get<std::string>());
    g.qubits = jg.at("qubits").get<std::vector<int>>();
    if (g.is_phase_kind()) {
      g.phase_num = jg.at("num").get<std::int64_t>();
      g.phase_den_log2 = jg.at("den_log2").get<int>();
    }
    if (g.kind == GateKind::custom) g.matrix = matrix_from_json(jg.at("matrix"));
    c.append(std::move(g));
  }
  c.validate();
  return c;
}

json factor_report_to_json(const FactorReport& report) {
  json hist = json::array();
  for (const auto& [outcome, count] : report.histogram)
    hist.push_back(json::array({outcome, count}));
  return json{{"number", report.number},
              {"base", report.base},
              {"width", report.width},
              {"shots", report.shots},
              {"histogram", std::move(hist)},
              {"nonzero_shots", report.nonzero_shots},
              {"successful_shots", report.successful_shots},
              {"period", report.period},
              {"factor1", report.factor1},
              {"factor2", report.factor2},
              {"success", report.success},
              {"attempts", report.attempts}};
}

json resource_report_to_json(const ResourceReport& report) {
  const auto counts_json = [](const GateCounts& counts) {
    return json{{"one_qubit", counts.one_qubit},
                {"two_qubit", counts.two_qubit},
                {"three_qubit", counts.three_qubit}};
  };
  return json{{"number", report.number},
              {"base", report.base},
              {"width", report.width},
              {"mixed", counts_json(report.mixed)},
              {"two_qubit_only", counts_json(report.two_qubit_only)},
              {"edges_mixed", report.edges_mixed},
              {"edges_two_qubit_only", report.edges_two_qubit_only},
              {"feasibility",
               json{{"edges", report.feasibility_mixed.edges},
                    {"coherence_time", report.feasibility_mixed.coherence_time},
                    {"edge_duration_bound", report.feasibility_mixed.edge_duration_bound},
                    {"required_angular_frequency",
                     report.feasibility_mixed.required_angular_frequency}}},
              {"scaling",
               json{{"bits", report.scaling.bits},
                    {"qubits", report.scaling.qubits},
                    {"relative_time", report.scaling.relative_time}}},
              {"notes", report.notes}};
}

void write_json_file(const std::string& file, const json& j) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot open '" + file + "' for writing");
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("failed writing '" + file + "'");
}

json read_json_file(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw std::invalid_argument("cannot open '" + file + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("malformed JSON in '" + file + "': " + e.what());
  }
  return j;
}

void write_histogram_csv(const std::string& file,
                         const std::map<std::uint64_t, long>& histogram, long shots) {
  if (shots < 1) throw std::invalid_argument("shot count must be positive");
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot open '" + file + "' for writing");
  out << "outcome,count,probability\n";
  out << std::setprecision(17);
  for (const auto& [outcome, count] : histogram)
    out << outcome << ',' << count << ','
        << static_cast<double>(count) / static_cast<double>(shots) << '\n';
  if (!out) throw std::runtime_error("failed writing '" + file + "'");
}

std::vector<HistogramRow> read_histogram_csv(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw std::invalid_argument("cannot open '" + file + "'");
  std::string line;
  if (!std::getline(in, line) || line != "outcome,count,probability")
    throw std::invalid_argument("histogram CSV header mismatch in '" + file + "'");
  std::vector<HistogramRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    HistogramRow row;
    char c1 = 0, c2 = 0;
    if (!(ss >> row.outcome >> c1 >> row.count >> c2 >> row.probability) ||
        c1 != ',' || c2 != ',')
      throw std::invalid_argument("malformed histogram CSV row: " + line);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace jqc
