#include "nlocal/sampling.hpp"

namespace nlocal {

CMat random_density(Rng& rng, std::size_t dim) {
  CMat a(dim);
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t c = 0; c < dim; ++c) a(r, c) = rng.gaussian_c();
  CMat rho = matmul(a, adjoint(a), Exec::Serial);
  const double tr = trace(rho).real();
  rho *= 1.0 / tr;
  // Clean up rounding so the density checks see an exactly Hermitian matrix.
  for (std::size_t r = 0; r < dim; ++r) {
    rho(r, r) = rho(r, r).real();
    for (std::size_t c = r + 1; c < dim; ++c) {
      const cplx m = 0.5 * (rho(r, c) + std::conj(rho(c, r)));
      rho(r, c) = m;
      rho(c, r) = std::conj(m);
    }
  }
  return rho;
}

TwoQubitState random_state(Rng& rng) {
  return TwoQubitState(random_density(rng, 4));
}

namespace {

Direction draw_direction(Rng& rng, bool planar) {
  if (planar) return Direction::xz(rng.uniform(-3.141592653589793, 3.141592653589793));
  return Direction(rng.unit_vector());
}

}  // namespace

NetworkSpec SpecSampler::draw(Rng& rng, long n) const {
  NetworkSpec spec;
  spec.n = n;
  for (long i = 0; i < n; ++i) {
    SourceSpec s;
    if (explicit_states) {
      s.state = random_density(rng, 4);
    } else {
      s.gate.alpha = rng.uniform(fidelity_floor, 1.0);
      s.gate.delta = rng.uniform(fidelity_floor, 1.0);
    }
    const ChannelKind kind = kinds[static_cast<std::size_t>(
        rng.integer(0, static_cast<long>(kinds.size()) - 1))];
    s.channel.kind = kind;
    if (kind != ChannelKind::None) {
      s.channel.gamma = rng.uniform(0.0, damping_ceiling);
      s.channel.xi = rng.uniform(0.0, damping_ceiling);
    }
    spec.sources.push_back(std::move(s));
  }
  for (long i = 0; i + 1 < n; ++i)
    spec.betas.push_back(rng.uniform(fidelity_floor, 1.0));
  spec.mu = rng.uniform(fidelity_floor, 1.0);
  spec.nu = rng.uniform(fidelity_floor, 1.0);
  spec.m0 = draw_direction(rng, planar_directions);
  spec.m1 = draw_direction(rng, planar_directions);
  spec.n0 = draw_direction(rng, planar_directions);
  spec.n1 = draw_direction(rng, planar_directions);
  return spec;
}

NetworkSpec SpecSampler::draw_homogeneous(Rng& rng, long n) const {
  GateNoise g{rng.uniform(fidelity_floor, 1.0), rng.uniform(fidelity_floor, 1.0)};
  ChannelSpec c;
  c.kind = kinds[static_cast<std::size_t>(
      rng.integer(0, static_cast<long>(kinds.size()) - 1))];
  if (c.kind != ChannelKind::None) {
    c.gamma = rng.uniform(0.0, damping_ceiling);
    c.xi = c.gamma;
  }
  NetworkSpec spec = NetworkSpec::homogeneous(
      n, g, c, rng.uniform(fidelity_floor, 1.0),
      rng.uniform(fidelity_floor, 1.0), rng.uniform(fidelity_floor, 1.0));
  spec.m0 = draw_direction(rng, planar_directions);
  spec.m1 = draw_direction(rng, planar_directions);
  spec.n0 = draw_direction(rng, planar_directions);
  spec.n1 = draw_direction(rng, planar_directions);
  return spec;
}

}  // namespace nlocal
