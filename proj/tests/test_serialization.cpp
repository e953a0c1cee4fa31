#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "jqc/serialization.hpp"

namespace {

std::string temp_file(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

struct FileGuard {
  std::string path;
  ~FileGuard() { std::remove(path.c_str()); }
};

jqc::ControlPath random_path(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
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

}  // namespace

TEST_SUITE("serialization") {
  TEST_CASE("control paths survive a file round trip bit for bit") {
    const jqc::ControlPath path = random_path(77);

    const jqc::ControlPath in_memory = jqc::path_from_json(jqc::path_to_json(path));
    REQUIRE(in_memory.vertex_count() == path.vertex_count());
    CHECK(in_memory.n == path.n);
    for (int v = 0; v < path.vertex_count(); ++v)
      CHECK((in_memory.vertices[v] - path.vertices[v]).norm() == 0.0);

    const std::string file = temp_file("jqc_test_path.json");
    FileGuard guard{file};
    jqc::write_json_file(file, jqc::path_to_json(path));
    const jqc::ControlPath from_file = jqc::path_from_json(jqc::read_json_file(file));
    REQUIRE(from_file.vertex_count() == path.vertex_count());
    for (int v = 0; v < path.vertex_count(); ++v)
      CHECK((from_file.vertices[v] - path.vertices[v]).norm() == 0.0);
  }

  TEST_CASE("synthesis results keep their tail when the trace is downsampled") {
    jqc::SynthesisResult result;
    result.path = random_path(5);
    result.error = 3.25e-5;
    result.evals = 25000;
    result.converged = true;
    result.trace.resize(25000);
    for (std::size_t i = 0; i < result.trace.size(); ++i)
      result.trace[i] = 1.0 / static_cast<double>(i + 1);

    const nlohmann::json j = jqc::synthesis_result_to_json(result, 1000);
    const jqc::SynthesisResult back = jqc::synthesis_result_from_json(j);
    CHECK(back.error == result.error);
    CHECK(back.evals == result.evals);
    CHECK(back.converged == result.converged);
    REQUIRE(!back.trace.empty());
    CHECK(back.trace.size() <= 1000);
    CHECK(back.trace.back() == result.trace.back());
    CHECK((back.path.vertices[0] - result.path.vertices[0]).norm() == 0.0);

    const nlohmann::json full = jqc::synthesis_result_to_json(result);
    const jqc::SynthesisResult same = jqc::synthesis_result_from_json(full);
    CHECK(same.trace.size() <= 10000);
  }

  TEST_CASE("circuits round trip with registers and every gate kind") {
    jqc::Circuit circuit;
    circuit.width = 4;
    circuit.registers["x"] = {0, 2, true};
    circuit.registers["y"] = {2, 2, false};
    circuit.append(jqc::Gate::hadamard(0));
    circuit.append(jqc::Gate::not_x(1));
    circuit.append(jqc::Gate::phase_shift(0, 3, 3));
    circuit.append(jqc::Gate::controlled_phase(0, 1, 5, 4));
    circuit.append(jqc::Gate::cc_phase(0, 1, 2, 1, 2));
    circuit.append(jqc::Gate::cnot(2, 3));
    circuit.append(jqc::Gate::swap(1, 2));
    circuit.append(jqc::Gate::fredkin(0, 2, 3));
    circuit.append(jqc::Gate::qft_block({1, 2, 3}));
    circuit.append(jqc::Gate::inv_qft_block({1, 2, 3}));
    Eigen::Matrix2cd u;
    u << jqc::complexd(0, 1), 0, 0, jqc::complexd(0, -1);
    circuit.append(jqc::Gate::custom({2}, u));

    const jqc::Circuit back = jqc::circuit_from_json(jqc::circuit_to_json(circuit));
    REQUIRE(back.gates.size() == circuit.gates.size());
    CHECK(back.width == circuit.width);
    REQUIRE(back.registers.count("x") == 1);
    CHECK(back.registers.at("x").bit_reversed);
    CHECK(back.registers.at("x").size == 2);
    CHECK(back.registers.at("y").start == 2);
    for (std::size_t g = 0; g < circuit.gates.size(); ++g) {
      CHECK(back.gates[g].kind == circuit.gates[g].kind);
      CHECK(back.gates[g].qubits == circuit.gates[g].qubits);
      CHECK(back.gates[g].phase_num == circuit.gates[g].phase_num);
      CHECK(back.gates[g].phase_den_log2 == circuit.gates[g].phase_den_log2);
      CHECK((back.gates[g].dense() - circuit.gates[g].dense()).norm() < 1e-15);
    }

    nlohmann::json j = jqc::circuit_to_json(circuit);
    j["gates"][0]["kind"] = "warp";
    CHECK_THROWS(jqc::circuit_from_json(j));
  }

  TEST_CASE("report serializers expose the headline numbers") {
    jqc::FactorReport report;
    report.number = 15;
    report.base = 7;
    report.width = 18;
    report.shots = 64;
    report.histogram = {{0, 14}, {64, 18}, {128, 17}, {192, 15}};
    report.nonzero_shots = 50;
    report.successful_shots = 50;
    report.period = 4;
    report.factor1 = 3;
    report.factor2 = 5;
    report.success = true;
    report.attempts = 1;
    const nlohmann::json j = jqc::factor_report_to_json(report);
    CHECK(j.at("number").get<std::int64_t>() == 15);
    CHECK(j.at("period").get<std::int64_t>() == 4);
    CHECK(j.at("success").get<bool>());

    const nlohmann::json r = jqc::resource_report_to_json(jqc::resource_report(15, 7));
    CHECK(r.at("number").get<std::int64_t>() == 15);
    CHECK(r.contains("notes"));
  }

  TEST_CASE("histograms round trip through csv") {
    const std::string file = temp_file("jqc_test_hist.csv");
    FileGuard guard{file};
    const std::map<std::uint64_t, long> hist = {{0, 10}, {64, 22}, {192, 32}};
    jqc::write_histogram_csv(file, hist, 64);

    const std::vector<jqc::HistogramRow> rows = jqc::read_histogram_csv(file);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].outcome == 0);
    CHECK(rows[0].count == 10);
    CHECK(rows[0].probability == doctest::Approx(10.0 / 64.0));
    CHECK(rows[2].outcome == 192);
    CHECK(rows[2].probability == doctest::Approx(0.5));
  }

  TEST_CASE("unreadable inputs raise errors instead of garbage") {
    CHECK_THROWS(jqc::read_json_file(temp_file("jqc_missing.json")));
    CHECK_THROWS(jqc::read_histogram_csv(temp_file("jqc_missing.csv")));

    const std::string bad_json = temp_file("jqc_bad.json");
    FileGuard guard_a{bad_json};
    {
      std::ofstream out(bad_json);
      out << "{not json";
    }
    CHECK_THROWS(jqc::read_json_file(bad_json));

    const std::string bad_csv = temp_file("jqc_bad.csv");
    FileGuard guard_b{bad_csv};
    {
      std::ofstream out(bad_csv);
      out << "outcome,count,probability\nfirst,second,third\n";
    }
    CHECK_THROWS(jqc::read_histogram_csv(bad_csv));

    nlohmann::json j;
    j["n"] = 2;
    j["vertices"] = "oops";
    CHECK_THROWS(jqc::path_from_json(j));
  }
}
