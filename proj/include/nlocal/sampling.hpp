#pragma once

#include <random>

#include "nlocal/network.hpp"

namespace nlocal {

/// Seeded generator with hand-rolled distributions so that identical seeds
/// give identical draws on every platform and standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform() {  // [0, 1)
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  long integer(long lo, long hi) {  // inclusive
    return lo + static_cast<long>(uniform() * static_cast<double>(hi - lo + 1));
  }

  double gaussian() {  // Box-Muller
    double u1 = uniform();
    while (u1 == 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  cplx gaussian_c() { return {gaussian(), gaussian()}; }

  Vec3 unit_vector() {
    while (true) {
      const Vec3 v{uniform(-1, 1), uniform(-1, 1), uniform(-1, 1)};
      const double n = norm(v);
      if (n > 1e-3 && n <= 1.0) return {v[0] / n, v[1] / n, v[2] / n};
    }
  }

 private:
  std::mt19937_64 gen_;
};

/// rho = A A^dag / Tr, A with iid complex Gaussian entries.
CMat random_density(Rng& rng, std::size_t dim);

/// Random two-qubit density operator.
TwoQubitState random_state(Rng& rng);

/// Options for the randomized network generator used by the verification
/// suites. Channel kinds are drawn from `kinds`.
struct SpecSampler {
  std::vector<ChannelKind> kinds{ChannelKind::None, ChannelKind::Amplitude,
                                 ChannelKind::Phase};
  double fidelity_floor = 0.6;  // lower bound for alpha, delta, beta, mu, nu
  double damping_ceiling = 0.35;
  bool explicit_states = false;  // draw raw density matrices instead
  bool planar_directions = false;

  NetworkSpec draw(Rng& rng, long n) const;
  NetworkSpec draw_homogeneous(Rng& rng, long n) const;
};

}  // namespace nlocal
