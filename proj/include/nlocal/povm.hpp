#pragma once

#include "nlocal/states.hpp"

namespace nlocal {

/// Measurement direction on the Bloch sphere, unit norm enforced.
struct Direction {
  Vec3 v{0, 0, 1};

  Direction() = default;
  explicit Direction(const Vec3& raw);

  /// Rescales an arbitrary nonzero vector to unit norm.
  static Direction normalized(const Vec3& raw);

  /// (sin theta, 0, cos theta) in the x-z plane.
  static Direction xz(double theta);
};

struct Povm {
  std::vector<CMat> elements;
  std::vector<std::string> outcome_labels;
};

/// PSD within kEigenFloor and completeness within kHermTol; throws
/// validation_error otherwise.
void check_povm(const Povm& p);

/// Four-outcome Bell measurement that fires with probability beta.
/// Outcome labels 00 -> phi+, 01 -> phi-, 10 -> psi+, 11 -> psi-.
Povm bsm_noisy(double beta);

/// Two-outcome projection along d that fires with probability eta.
Povm qubit_noisy(const Direction& d, double eta);

/// Which output bit of the Bell measurement feeds the sign of the signed
/// observable: the first bit drives I, the second drives J.
enum class CentralBit { First, Second };

/// Signed sum of the noisy Bell POVM elements over the selected bit.
/// Equals beta * sigma_z (x) sigma_z for First and beta * sigma_x (x)
/// sigma_x for Second; the isotropic parts cancel pairwise.
CMat central_observable(double beta, CentralBit which);

/// Signed element difference of qubit_noisy(d, eta); equals eta * d.sigma.
CMat extreme_observable(const Direction& d, double eta);

}  // namespace nlocal
