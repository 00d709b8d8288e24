#include "nlocal/povm.hpp"

#include <cmath>

namespace nlocal {

namespace {

void require_unit_interval(double x, const char* name) {
  if (!(x >= 0.0 && x <= 1.0))
    throw validation_error(std::string(name) + " must lie in [0, 1], got " +
                           std::to_string(x));
}

}  // namespace

Direction::Direction(const Vec3& raw) : v(raw) {
  if (std::abs(norm(v) - 1.0) > 1e-12)
    throw validation_error("Direction: vector is not unit norm");
}

Direction Direction::normalized(const Vec3& raw) {
  const double n = norm(raw);
  if (n < 1e-12)
    throw validation_error("Direction: cannot normalize a zero vector");
  return Direction({raw[0] / n, raw[1] / n, raw[2] / n});
}

Direction Direction::xz(double theta) {
  return Direction({std::sin(theta), 0.0, std::cos(theta)});
}

void check_povm(const Povm& p) {
  if (p.elements.empty()) throw validation_error("POVM: no elements");
  const std::size_t d = p.elements.front().dim();
  CMat sum(d);
  for (const CMat& e : p.elements) {
    if (e.dim() != d) throw validation_error("POVM: mixed element dimensions");
    if (!is_hermitian(e, kHermTol))
      throw validation_error("POVM: element not Hermitian");
    if (hermitian_eigenvalues(e).front() < kEigenFloor)
      throw validation_error("POVM: element not positive semidefinite");
    sum += e;
  }
  if (max_abs_diff(sum, CMat::identity(d)) > kHermTol)
    throw validation_error("POVM: elements do not sum to identity");
}

Povm bsm_noisy(double beta) {
  require_unit_interval(beta, "beta");
  const Bell order[4] = {Bell::PhiPlus, Bell::PhiMinus, Bell::PsiPlus,
                         Bell::PsiMinus};
  const char* labels[4] = {"00", "01", "10", "11"};
  Povm p;
  const CMat iso = (0.25 * (1.0 - beta)) * CMat::identity(4);
  for (int k = 0; k < 4; ++k) {
    CMat e = bell_state(order[k]).rho();
    e *= beta;
    e += iso;
    p.elements.push_back(std::move(e));
    p.outcome_labels.emplace_back(labels[k]);
  }
  return p;
}

Povm qubit_noisy(const Direction& d, double eta) {
  require_unit_interval(eta, "measurement fidelity");
  CMat dsigma(2);
  for (int j = 0; j < 3; ++j) dsigma += d.v[j] * pauli(j + 1);

  Povm p;
  const CMat iso = (0.5 * (1.0 - eta)) * CMat::identity(2);
  for (int outcome = 0; outcome < 2; ++outcome) {
    const double sign = outcome == 0 ? 1.0 : -1.0;
    CMat projector = CMat::identity(2);
    projector += sign * dsigma;
    projector *= 0.5;  // (I + sign d.sigma)/2
    CMat e = projector;
    e *= eta;
    e += iso;
    p.elements.push_back(std::move(e));
    p.outcome_labels.emplace_back(outcome == 0 ? "0" : "1");
  }
  return p;
}

CMat central_observable(double beta, CentralBit which) {
  const Povm p = bsm_noisy(beta);
  CMat obs(4);
  for (int k = 0; k < 4; ++k) {
    const int bit = which == CentralBit::First ? (k >> 1) : (k & 1);
    if (bit == 0)
      obs += p.elements[k];
    else
      obs -= p.elements[k];
  }
  return obs;
}

CMat extreme_observable(const Direction& d, double eta) {
  const Povm p = qubit_noisy(d, eta);
  CMat obs = p.elements[0];
  obs -= p.elements[1];
  return obs;
}

}  // namespace nlocal
