#pragma once

#include <vector>

#include "jqc/linalg.hpp"

namespace jqc {

/// Instantaneous control amplitudes for an n-qubit charge-qubit register.
/// The register Hamiltonian is
///   H = sum_i [ -bz[i]/2 sigma_z^i - bx[i]/2 sigma_x^i ]
///       - coupling * sum_{i<j} bx[i] bx[j] sigma_y^i sigma_y^j
struct ControlVector {
  Eigen::VectorXd bz;
  Eigen::VectorXd bx;
  double coupling = 1.0;

  int n() const { return static_cast<int>(bz.size()); }
  void validate() const;

  static ControlVector zero(int n);
};

/// Physical device parameters. Fluxes are in units of the flux quantum,
/// which is set to 1 in the derived coupling constant.
struct DeviceParams {
  double e_c = 1.0;                 // island charging energy
  double e_j_max = 1.0;             // maximal Josephson energy
  std::vector<double> flux;         // per-qubit bias flux
  std::vector<double> gate_charge;  // per-qubit gate charge
  double inductance = 1.0;          // coupling-loop inductance
  double c_qb = 1.0;                // qubit capacitance
  double c_j = 1.0;                 // junction capacitance

  int n() const { return static_cast<int>(flux.size()); }
  void validate() const;
};

enum class PauliAxis { x, y, z };

/// sigma_axis acting on `site` (1-based) of an n-qubit register; site 1 is the
/// most significant bit of the basis-state label.
Eigen::MatrixXcd embed_pauli(PauliAxis axis, int site, int n);

/// Dense 2^n x 2^n register Hamiltonian for the given controls.
/// Always Hermitian and traceless; in fact real symmetric.
Eigen::MatrixXcd assemble_hamiltonian(const ControlVector& controls);

/// Map device parameters to control amplitudes:
///   bx[i] = e_j_max * cos(pi * flux[i])
///   bz[i] = e_c * (1 - 2 * gate_charge[i])
///   coupling = pi^2 * inductance * (c_qb / c_j)^2
ControlVector device_to_controls(const DeviceParams& params);

}  // namespace jqc
