#pragma once

#include <vector>

#include "jqc/register_model.hpp"

namespace jqc {

/// Piecewise-linear control path. Each vertex holds 2n coordinates, bz[1..n]
/// followed by bx[1..n]. The path is traversed origin -> v1 -> ... -> v_nu ->
/// origin with one time unit per edge, so a path with nu vertices lasts nu+1
/// time units. Controls are interpolated linearly along each edge.
struct ControlPath {
  int n = 1;
  std::vector<Eigen::VectorXd> vertices;

  int vertex_count() const { return static_cast<int>(vertices.size()); }
  double duration() const { return static_cast<double>(vertices.size()) + 1.0; }
  void validate() const;
};

enum class StepMethod { taylor, cayley, spectral };

struct PropagationSettings {
  double dt = 1e-3;  // target sub-step; each edge uses m = ceil(1/dt) steps of 1/m
  StepMethod method = StepMethod::taylor;
  int taylor_order = 3;
  int max_qubits = 3;

  void validate() const;
};

/// Controls at path time t in [0, duration]. Throws std::out_of_range outside.
ControlVector sample_path(const ControlPath& path, double t);

/// One propagator step approximating exp(-i h dt).
///   taylor   : sum_{k<=order} (-i h dt)^k / k!
///   cayley   : (1 - i h dt/2) (1 + i h dt/2)^-1
///   spectral : exact via eigendecomposition of Hermitian h
Eigen::MatrixXcd step(const Eigen::MatrixXcd& h, double dt, StepMethod method,
                      int taylor_order = 3);

/// Time-ordered propagator for the whole path, sampling the Hamiltonian at the
/// midpoint of every sub-step; earliest factor is rightmost.
Eigen::MatrixXcd propagate(const ControlPath& path,
                           const PropagationSettings& settings = {});

}  // namespace jqc
