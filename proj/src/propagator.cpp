#include "jqc/propagator.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace jqc {

void ControlPath::validate() const {
  if (n < 1) throw std::invalid_argument("ControlPath: need at least one qubit");
  for (const auto& v : vertices) {
    if (v.size() != 2 * n)
      throw std::invalid_argument("ControlPath: vertex dimension must be 2n");
    if (!v.allFinite()) throw std::invalid_argument("ControlPath: non-finite vertex");
  }
}

void PropagationSettings::validate() const {
  if (!(dt > 0.0) || dt > 1.0)
    throw std::invalid_argument("PropagationSettings: dt must be in (0, 1]");
  if (taylor_order < 1)
    throw std::invalid_argument("PropagationSettings: taylor_order must be >= 1");
  if (max_qubits < 1)
    throw std::invalid_argument("PropagationSettings: max_qubits must be >= 1");
}

ControlVector sample_path(const ControlPath& path, double t) {
  path.validate();
  const int nu = path.vertex_count();
  if (t < 0.0 || t > path.duration())
    throw std::out_of_range("sample_path: t outside [0, duration]");
  int edge = std::min(static_cast<int>(std::floor(t)), nu);
  const double s = t - edge;
  const Eigen::VectorXd origin = Eigen::VectorXd::Zero(2 * path.n);
  const Eigen::VectorXd& from = (edge == 0) ? origin : path.vertices[edge - 1];
  const Eigen::VectorXd& to = (edge == nu) ? origin : path.vertices[edge];
  const Eigen::VectorXd point = (1.0 - s) * from + s * to;
  ControlVector c;
  c.bz = point.head(path.n);
  c.bx = point.tail(path.n);
  return c;
}

Eigen::MatrixXcd step(const Eigen::MatrixXcd& h, double dt, StepMethod method,
                      int taylor_order) {
  if (h.rows() != h.cols()) throw std::invalid_argument("step: matrix must be square");
  if (!is_hermitian(h, 1e-9 * std::max(1.0, h.cwiseAbs().maxCoeff())))
    throw std::invalid_argument("step: Hamiltonian must be Hermitian");
  const Eigen::Index dim = h.rows();
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(dim, dim);
  switch (method) {
    case StepMethod::taylor: {
      if (taylor_order < 1) throw std::invalid_argument("step: taylor_order must be >= 1");
      const Eigen::MatrixXcd a = complexd(0, -dt) * h;
      Eigen::MatrixXcd term = id;
      Eigen::MatrixXcd sum = id;
      for (int k = 1; k <= taylor_order; ++k) {
        term = (term * a) / static_cast<double>(k);
        sum += term;
      }
      return sum;
    }
    case StepMethod::cayley: {
      const Eigen::MatrixXcd half = complexd(0, 0.5 * dt) * h;
      // (1 - i h dt/2) and (1 + i h dt/2) commute, so the quotient may be
      // evaluated as a left solve.
      return (id + half).partialPivLu().solve(id - half);
    }
    case StepMethod::spectral: {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
      if (es.info() != Eigen::Success)
        throw std::runtime_error("step: eigendecomposition failed");
      Eigen::VectorXcd phases(dim);
      for (Eigen::Index i = 0; i < dim; ++i)
        phases(i) = std::exp(complexd(0, -es.eigenvalues()(i) * dt));
      return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
    }
  }
  throw std::invalid_argument("step: unknown method");
}

namespace {

// The register Hamiltonian is real symmetric for every control vector
// (sigma_z, sigma_x and sigma_y x sigma_y all have real matrix elements), so
// the hot path below runs on real fixed-size matrices: one complex product
// against a real H costs two real matmuls instead of four.

template <int NQ>
struct RegisterOps {
  static constexpr int D = 1 << NQ;
  static constexpr int NPairs = NQ * (NQ - 1) / 2;
  using RMat = Eigen::Matrix<double, D, D>;

  std::array<RMat, NQ> z;
  std::array<RMat, NQ> x;
  std::array<RMat, NPairs> yy;

  RegisterOps() {
    for (int i = 1; i <= NQ; ++i) {
      z[i - 1] = embed_pauli(PauliAxis::z, i, NQ).real();
      x[i - 1] = embed_pauli(PauliAxis::x, i, NQ).real();
    }
    int idx = 0;
    for (int i = 1; i <= NQ; ++i)
      for (int j = i + 1; j <= NQ; ++j)
        yy[idx++] = (embed_pauli(PauliAxis::y, i, NQ) * embed_pauli(PauliAxis::y, j, NQ))
                        .real();
  }

  static const RegisterOps& get() {
    static const RegisterOps ops;
    return ops;
  }
};

// Controls along an edge are linear in arc position s, so H(s) is a quadratic
// matrix polynomial (the quadratic part comes only from bx_i * bx_j couplings).
template <int NQ>
struct EdgePoly {
  using RMat = typename RegisterOps<NQ>::RMat;
  RMat e0, e1, e2;

  EdgePoly(const Eigen::VectorXd& from, const Eigen::VectorXd& to) {
    const auto& ops = RegisterOps<NQ>::get();
    e0.setZero();
    e1.setZero();
    e2.setZero();
    std::array<double, NQ> az, dz, ax, dx;
    for (int i = 0; i < NQ; ++i) {
      az[i] = from(i);
      dz[i] = to(i) - from(i);
      ax[i] = from(NQ + i);
      dx[i] = to(NQ + i) - from(NQ + i);
    }
    for (int i = 0; i < NQ; ++i) {
      e0 -= 0.5 * az[i] * ops.z[i] + 0.5 * ax[i] * ops.x[i];
      e1 -= 0.5 * dz[i] * ops.z[i] + 0.5 * dx[i] * ops.x[i];
    }
    int idx = 0;
    for (int i = 0; i < NQ; ++i)
      for (int j = i + 1; j < NQ; ++j) {
        e0 -= ax[i] * ax[j] * ops.yy[idx];
        e1 -= (ax[i] * dx[j] + dx[i] * ax[j]) * ops.yy[idx];
        e2 -= dx[i] * dx[j] * ops.yy[idx];
        ++idx;
      }
  }

  RMat at(double s) const { return e0 + s * (e1 + s * e2); }
};

template <int NQ>
Eigen::MatrixXcd propagate_impl(const ControlPath& path, const PropagationSettings& s) {
  using RMat = typename RegisterOps<NQ>::RMat;
  constexpr int D = RegisterOps<NQ>::D;
  using CMat = Eigen::Matrix<complexd, D, D>;

  RMat ur = RMat::Identity();
  RMat ui = RMat::Zero();
  const int m = static_cast<int>(std::ceil(1.0 / s.dt));
  const double ddt = 1.0 / m;
  const int nu = path.vertex_count();
  const Eigen::VectorXd origin = Eigen::VectorXd::Zero(2 * NQ);

  for (int e = 0; e <= nu; ++e) {
    const Eigen::VectorXd& from = (e == 0) ? origin : path.vertices[e - 1];
    const Eigen::VectorXd& to = (e == nu) ? origin : path.vertices[e];
    const EdgePoly<NQ> poly(from, to);
    for (int k = 0; k < m; ++k) {
      const RMat h = poly.at((k + 0.5) * ddt);
      switch (s.method) {
        case StepMethod::taylor: {
          // U <- T_l(-i h ddt) U accumulated term by term: W_k = (A/k) W_{k-1}.
          RMat wr = ur, wi = ui;
          for (int ord = 1; ord <= s.taylor_order; ++ord) {
            const double f = ddt / ord;
            const RMat nr = f * (h * wi);
            const RMat ni = -f * (h * wr);
            wr = nr;
            wi = ni;
            ur += wr;
            ui += wi;
          }
          break;
        }
        case StepMethod::cayley: {
          const CMat id = CMat::Identity();
          const CMat half = complexd(0, 0.5 * ddt) * h;
          CMat u;
          u.real() = ur;
          u.imag() = ui;
          const CMat next = (id + half).partialPivLu().solve((id - half) * u);
          ur = next.real();
          ui = next.imag();
          break;
        }
        case StepMethod::spectral: {
          Eigen::SelfAdjointEigenSolver<RMat> es(h);
          const RMat& v = es.eigenvectors();
          const Eigen::Array<double, D, 1> ang = es.eigenvalues().array() * ddt;
          const RMat pc = v * ang.cos().matrix().asDiagonal() * v.transpose();
          const RMat ps = v * ang.sin().matrix().asDiagonal() * v.transpose();
          // (pc - i ps)(ur + i ui)
          const RMat nr = pc * ur + ps * ui;
          const RMat ni = pc * ui - ps * ur;
          ur = nr;
          ui = ni;
          break;
        }
      }
    }
  }
  Eigen::MatrixXcd u(D, D);
  u.real() = ur;
  u.imag() = ui;
  return u;
}

Eigen::MatrixXcd propagate_generic(const ControlPath& path, const PropagationSettings& s) {
  const Eigen::Index dim = Eigen::Index(1) << path.n;
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(dim, dim);
  const int m = static_cast<int>(std::ceil(1.0 / s.dt));
  const double ddt = 1.0 / m;
  const int nu = path.vertex_count();
  for (int e = 0; e <= nu; ++e) {
    for (int k = 0; k < m; ++k) {
      const double t = e + (k + 0.5) * ddt;
      u = step(assemble_hamiltonian(sample_path(path, t)), ddt, s.method, s.taylor_order) * u;
    }
  }
  return u;
}

}  // namespace

Eigen::MatrixXcd propagate(const ControlPath& path, const PropagationSettings& settings) {
  path.validate();
  settings.validate();
  if (path.n > settings.max_qubits)
    throw std::invalid_argument("propagate: register wider than configured maximum");
  switch (path.n) {
    case 1: return propagate_impl<1>(path, settings);
    case 2: return propagate_impl<2>(path, settings);
    case 3: return propagate_impl<3>(path, settings);
    default: return propagate_generic(path, settings);
  }
}

}  // namespace jqc
