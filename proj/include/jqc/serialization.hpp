#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "jqc/circuit.hpp"
#include "jqc/propagator.hpp"
#include "jqc/resources.hpp"
#include "jqc/shor.hpp"
#include "jqc/synthesis.hpp"

namespace jqc {

/// Path schema: {"n": int, "vertices": [[bz..., bx...], ...]}.
nlohmann::json path_to_json(const ControlPath& path);
ControlPath path_from_json(const nlohmann::json& j);

/// Result schema: {"path", "error", "evals", "converged", "trace"}; the trace
/// is downsampled to at most max_trace points (final point always kept).
nlohmann::json synthesis_result_to_json(const SynthesisResult& result,
                                        std::size_t max_trace = 10000);
SynthesisResult synthesis_result_from_json(const nlohmann::json& j);

nlohmann::json circuit_to_json(const Circuit& circuit);
Circuit circuit_from_json(const nlohmann::json& j);

nlohmann::json factor_report_to_json(const FactorReport& report);
nlohmann::json resource_report_to_json(const ResourceReport& report);

void write_json_file(const std::string& file, const nlohmann::json& j);
nlohmann::json read_json_file(const std::string& file);

struct HistogramRow {
  std::uint64_t outcome = 0;
  long count = 0;
  double probability = 0.0;
};

/// CSV with header "outcome,count,probability"; probability = count / shots.
void write_histogram_csv(const std::string& file,
                         const std::map<std::uint64_t, long>& histogram, long shots);
std::vector<HistogramRow> read_histogram_csv(const std::string& file);

}  // namespace jqc
