#include "jqc/register_model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace jqc {

void ControlVector::validate() const {
  if (bz.size() < 1) throw std::invalid_argument("ControlVector: need at least one qubit");
  if (bz.size() != bx.size())
    throw std::invalid_argument("ControlVector: bz and bx sizes differ");
  if (!bz.allFinite() || !bx.allFinite() || !std::isfinite(coupling))
    throw std::invalid_argument("ControlVector: non-finite entry");
  if (coupling < 0.0) throw std::invalid_argument("ControlVector: negative coupling");
}

ControlVector ControlVector::zero(int n) {
  if (n < 1) throw std::invalid_argument("ControlVector: need at least one qubit");
  ControlVector c;
  c.bz = Eigen::VectorXd::Zero(n);
  c.bx = Eigen::VectorXd::Zero(n);
  return c;
}

void DeviceParams::validate() const {
  if (flux.empty()) throw std::invalid_argument("DeviceParams: need at least one qubit");
  if (flux.size() != gate_charge.size())
    throw std::invalid_argument("DeviceParams: flux and gate_charge sizes differ");
  if (!(e_c > 0.0) || e_j_max < 0.0)
    throw std::invalid_argument("DeviceParams: energies out of range");
  if (!(inductance > 0.0) || !(c_qb > 0.0) || !(c_j > 0.0))
    throw std::invalid_argument("DeviceParams: circuit constants must be positive");
  for (double f : flux)
    if (!std::isfinite(f)) throw std::invalid_argument("DeviceParams: non-finite flux");
  for (double g : gate_charge)
    if (!std::isfinite(g)) throw std::invalid_argument("DeviceParams: non-finite gate charge");
}

Eigen::MatrixXcd embed_pauli(PauliAxis axis, int site, int n) {
  if (n < 1) throw std::invalid_argument("embed_pauli: need at least one qubit");
  if (site < 1 || site > n) throw std::invalid_argument("embed_pauli: site out of range");
  Eigen::Matrix2cd sigma;
  switch (axis) {
    case PauliAxis::x: sigma << 0, 1, 1, 0; break;
    case PauliAxis::y: sigma << 0, complexd(0, -1), complexd(0, 1), 0; break;
    case PauliAxis::z: sigma << 1, 0, 0, -1; break;
  }
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
  for (int k = 1; k <= n; ++k) {
    out = (k == site) ? kron(out, sigma)
                      : kron(out, Eigen::MatrixXcd::Identity(2, 2));
  }
  return out;
}

Eigen::MatrixXcd assemble_hamiltonian(const ControlVector& controls) {
  controls.validate();
  const int n = controls.n();
  const Eigen::Index dim = Eigen::Index(1) << n;
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  for (int i = 1; i <= n; ++i) {
    h -= 0.5 * controls.bz(i - 1) * embed_pauli(PauliAxis::z, i, n);
    h -= 0.5 * controls.bx(i - 1) * embed_pauli(PauliAxis::x, i, n);
  }
  for (int i = 1; i <= n; ++i) {
    const Eigen::MatrixXcd yi = embed_pauli(PauliAxis::y, i, n);
    for (int j = i + 1; j <= n; ++j) {
      h -= controls.coupling * controls.bx(i - 1) * controls.bx(j - 1) *
           (yi * embed_pauli(PauliAxis::y, j, n));
    }
  }
  return h;
}

ControlVector device_to_controls(const DeviceParams& params) {
  params.validate();
  const int n = params.n();
  ControlVector c = ControlVector::zero(n);
  for (int i = 0; i < n; ++i) {
    c.bx(i) = params.e_j_max * std::cos(std::numbers::pi * params.flux[i]);
    c.bz(i) = params.e_c * (1.0 - 2.0 * params.gate_charge[i]);
  }
  const double cap_ratio = params.c_qb / params.c_j;
  c.coupling = std::numbers::pi * std::numbers::pi * params.inductance * cap_ratio * cap_ratio;
  return c;
}

}  // namespace jqc
