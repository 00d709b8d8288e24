#include "nlocal/states.hpp"

#include <cmath>

namespace nlocal {

namespace {

CMat make_pauli(int j) {
  CMat m(2);
  switch (j) {
    case 1:
      m(0, 1) = 1;
      m(1, 0) = 1;
      break;
    case 2:
      m(0, 1) = cplx{0, -1};
      m(1, 0) = cplx{0, 1};
      break;
    case 3:
      m(0, 0) = 1;
      m(1, 1) = -1;
      break;
    default:
      throw shape_error("pauli: axis must be 1, 2 or 3");
  }
  return m;
}

// sigma_j (x) I, I (x) sigma_j, sigma_j (x) sigma_k, built once.
struct PauliProducts {
  CMat left[3];
  CMat right[3];
  CMat both[3][3];

  PauliProducts() {
    for (int j = 0; j < 3; ++j) {
      left[j] = kron(pauli(j + 1), identity2(), Exec::Serial);
      right[j] = kron(identity2(), pauli(j + 1), Exec::Serial);
      for (int k = 0; k < 3; ++k)
        both[j][k] = kron(pauli(j + 1), pauli(k + 1), Exec::Serial);
    }
  }
};

const PauliProducts& pauli_products() {
  static const PauliProducts p;
  return p;
}

CMat ket_bra4(const std::array<cplx, 4>& ket) {
  CMat m(4);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) m(r, c) = ket[r] * std::conj(ket[c]);
  return m;
}

}  // namespace

const CMat& pauli(int j) {
  static const CMat sx = make_pauli(1);
  static const CMat sy = make_pauli(2);
  static const CMat sz = make_pauli(3);
  switch (j) {
    case 1:
      return sx;
    case 2:
      return sy;
    case 3:
      return sz;
    default:
      throw shape_error("pauli: axis must be 1, 2 or 3");
  }
}

const CMat& identity2() {
  static const CMat i2 = CMat::identity(2);
  return i2;
}

Bell bell_from_string(const std::string& label) {
  if (label == "phi+") return Bell::PhiPlus;
  if (label == "phi-") return Bell::PhiMinus;
  if (label == "psi+") return Bell::PsiPlus;
  if (label == "psi-") return Bell::PsiMinus;
  throw validation_error("unknown Bell state label: " + label);
}

TwoQubitState::TwoQubitState(CMat rho) : rho_(std::move(rho)) {
  if (rho_.dim() != 4)
    throw shape_error("TwoQubitState: dimension must be 4");
  check_density(rho_);
}

BlochForm bloch_decompose(const TwoQubitState& s) {
  const PauliProducts& pp = pauli_products();
  BlochForm f;
  for (int j = 0; j < 3; ++j) {
    f.a[j] = trace_product(s.rho(), pp.left[j], Exec::Serial).real();
    f.b[j] = trace_product(s.rho(), pp.right[j], Exec::Serial).real();
    for (int k = 0; k < 3; ++k)
      f.w(j, k) = trace_product(s.rho(), pp.both[j][k], Exec::Serial).real();
  }
  const double slack = 1e-10;
  if (norm(f.a) > 1.0 + slack || norm(f.b) > 1.0 + slack)
    throw validation_error("bloch_decompose: local Bloch vector exceeds unit ball");
  for (double x : f.w.a)
    if (std::abs(x) > 1.0 + slack)
      throw validation_error("bloch_decompose: tensor entry outside [-1, 1]");
  return f;
}

Reconstruction bloch_reconstruct(const BlochForm& f) {
  const PauliProducts& pp = pauli_products();
  CMat rho = CMat::identity(4);
  for (int j = 0; j < 3; ++j) {
    rho += f.a[j] * pp.left[j];
    rho += f.b[j] * pp.right[j];
    for (int k = 0; k < 3; ++k) rho += f.w(j, k) * pp.both[j][k];
  }
  rho *= 0.25;

  const std::vector<double> eig = hermitian_eigenvalues(rho);
  const bool physical = is_hermitian(rho, kHermTol) &&
                        std::abs(trace(rho) - cplx{1.0, 0.0}) <= kTraceTol &&
                        eig.front() >= kEigenFloor;
  return Reconstruction{std::move(rho), physical, eig.front()};
}

std::array<double, 3> correlation_singulars(const TwoQubitState& s) {
  return singular_values_3x3(bloch_decompose(s).w);
}

TwoQubitState bell_state(Bell which) {
  // Unnormalized integer kets; the half factor lands on the projector so
  // its entries are exact multiples of 0.5.
  std::array<cplx, 4> ket{};
  switch (which) {
    case Bell::PhiPlus:
      ket = {1, 0, 0, 1};
      break;
    case Bell::PhiMinus:
      ket = {1, 0, 0, -1};
      break;
    case Bell::PsiPlus:
      ket = {0, 1, 1, 0};
      break;
    case Bell::PsiMinus:
      ket = {0, 1, -1, 0};
      break;
  }
  CMat projector = ket_bra4(ket);
  projector *= 0.5;
  return TwoQubitState(std::move(projector));
}

TwoQubitState basis_state2(int i, int j) {
  if ((i != 0 && i != 1) || (j != 0 && j != 1))
    throw shape_error("basis_state2: bits must be 0 or 1");
  CMat m(4);
  m(2 * i + j, 2 * i + j) = 1;
  return TwoQubitState(std::move(m));
}

}  // namespace nlocal
