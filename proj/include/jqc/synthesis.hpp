#pragma once

#include <cstdint>
#include <vector>

#include "jqc/propagator.hpp"

namespace jqc {

/// One stage of the coarse-to-fine optimization schedule.
struct ScheduleStage {
  double dt = 1e-3;
  long max_evals = 0;
};

struct SynthesisProblem {
  Eigen::MatrixXcd target;  // special-unitary target, dimension 2^qubits
  int qubits = 1;
  int vertices = 1;
  std::vector<ScheduleStage> schedule;
  int restarts = 1;
  std::uint64_t seed = 1;
  double tolerance = 1e-4;
  int max_workers = 1;

  /// Default schedule: 40% of the budget at dt=0.05, 40% at 0.01, rest at 1e-3.
  static SynthesisProblem for_target(const Eigen::MatrixXcd& target, int vertices,
                                     long budget, int restarts = 1,
                                     std::uint64_t seed = 1, double tolerance = 1e-4);
  void validate() const;
};

struct SynthesisResult {
  ControlPath path;
  double error = 0.0;  // at the finest scheduled dt
  long evals = 0;
  bool converged = false;
  std::vector<double> trace;  // best-so-far error per evaluation
};

/// Frobenius distance between the target and the path's propagator.
double error_function(const Eigen::MatrixXcd& target, const ControlPath& path,
                      double dt = 1e-3);

/// Smallest vertex count nu with 2*k*nu >= 4^k - 1 control parameters.
int min_vertices(int k);

/// Derivative-free search over vertex coordinates. Restart 0 starts from a
/// uniform random simplex in [-2,2]^(2*k*nu); later restarts perturb the
/// incumbent with Gaussian noise of std 0.1. Never throws on a merely
/// unconverged search; the result carries a converged flag instead.
SynthesisResult minimize(const SynthesisProblem& problem);

/// Pulse-area angles with u = expz(z2) expx(x) expz(z1), where
/// expz(t) = exp(i sigma_z t/2) and expx(t) = exp(i sigma_x t/2).
struct ZxzAngles {
  double z1 = 0.0;
  double x = 0.0;
  double z2 = 0.0;
};

/// Exact decomposition of a special-unitary 2x2 matrix into z/x/z pulse
/// integrals, each reported in [-2*pi, 2*pi).
ZxzAngles single_qubit_zxz(const Eigen::Matrix2cd& u);

/// Single-qubit path of triangular pulses (two edges each, unit peak time)
/// whose time integrals realize the given angles; zero angles emit no pulse.
ControlPath pulse_integrals_to_path(const ZxzAngles& angles, int pulses_per_integral = 1);

struct NoiseRobustness {
  std::vector<double> levels;
  std::vector<double> mean_errors;
  double base_error = 0.0;  // error of the unperturbed path
  double slope = 0.0;       // least-squares fit of mean error vs rms, through origin
  double r_squared = 1.0;
};

/// Mean synthesis error when every vertex coordinate is displaced by
/// independent Gaussian noise of the given rms levels.
NoiseRobustness noise_robustness(const ControlPath& path, const Eigen::MatrixXcd& target,
                                 const std::vector<double>& levels, int trials,
                                 std::uint64_t seed, double dt = 1e-3);

}  // namespace jqc
