#pragma once

#include "nlocal/matrixkit.hpp"

namespace nlocal {

/// Pauli operator along axis j (1 = x, 2 = y, 3 = z).
const CMat& pauli(int j);
const CMat& identity2();

enum class Bell { PhiPlus, PhiMinus, PsiPlus, PsiMinus };

Bell bell_from_string(const std::string& label);  // "phi+", "phi-", "psi+", "psi-"

/// Two-qubit density operator. Construction validates the density
/// invariants and throws validation_error on failure.
class TwoQubitState {
 public:
  explicit TwoQubitState(CMat rho);
  const CMat& rho() const { return rho_; }

 private:
  CMat rho_;
};

/// Bloch picture of a two-qubit state: local vectors a (first qubit),
/// b (second qubit) and the 3x3 correlation tensor w.
struct BlochForm {
  Vec3 a{};
  Vec3 b{};
  Mat3 w{};
};

BlochForm bloch_decompose(const TwoQubitState& s);

/// Reconstruction keeps the matrix even when (a, b, w) is unphysical so the
/// caller can inspect it; `physical` reports whether the density invariants
/// hold.
struct Reconstruction {
  CMat rho;
  bool physical;
  double min_eigenvalue;
};

Reconstruction bloch_reconstruct(const BlochForm& f);

/// Singular values of the correlation tensor, descending. The first two
/// drive every detection criterion.
std::array<double, 3> correlation_singulars(const TwoQubitState& s);

TwoQubitState bell_state(Bell which);

/// Computational-basis projector |ij><ij|.
TwoQubitState basis_state2(int i, int j);

}  // namespace nlocal
