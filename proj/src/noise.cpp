#include "nlocal/noise.hpp"

#include <cmath>

namespace nlocal {

namespace {

void require_unit_interval(double x, const char* name) {
  if (!(x >= 0.0 && x <= 1.0))
    throw validation_error(std::string(name) + " must lie in [0, 1], got " +
                           std::to_string(x));
}

const CMat& hadamard() {
  static const CMat h = [] {
    CMat m(2);
    const double r = 1.0 / std::sqrt(2.0);
    m(0, 0) = r;
    m(0, 1) = r;
    m(1, 0) = r;
    m(1, 1) = -r;
    return m;
  }();
  return h;
}

const CMat& cnot() {
  static const CMat c = [] {
    CMat m(4);
    m(0, 0) = 1;  // |00> -> |00>
    m(1, 1) = 1;  // |01> -> |01>
    m(2, 3) = 1;  // |11> -> |10>
    m(3, 2) = 1;  // |10> -> |11>
    return m;
  }();
  return c;
}

CMat conjugate_by(const CMat& u, const CMat& rho) {
  return matmul(matmul(u, rho, Exec::Serial), adjoint(u), Exec::Serial);
}

}  // namespace

ChannelKind channel_kind_from_string(const std::string& s) {
  if (s == "none") return ChannelKind::None;
  if (s == "amplitude" || s == "amp") return ChannelKind::Amplitude;
  if (s == "phase" || s == "ph") return ChannelKind::Phase;
  throw validation_error("unknown channel kind: " + s);
}

std::string to_string(ChannelKind k) {
  switch (k) {
    case ChannelKind::None:
      return "none";
    case ChannelKind::Amplitude:
      return "amplitude";
    case ChannelKind::Phase:
      return "phase";
  }
  throw validation_error("invalid channel kind");
}

void ChannelSpec::validate() const {
  require_unit_interval(gamma, "gamma");
  require_unit_interval(xi, "xi");
  if (kind == ChannelKind::None && (gamma != 0.0 || xi != 0.0))
    throw validation_error("channel kind 'none' requires gamma = xi = 0");
}

TwoQubitState noisy_hadamard_prep(double alpha) {
  require_unit_interval(alpha, "alpha");
  // Control |1>, target |0>.
  const TwoQubitState initial = basis_state2(1, 0);
  const CMat hi = kron(hadamard(), identity2(), Exec::Serial);
  CMat rho = conjugate_by(hi, initial.rho());
  rho *= alpha;
  const CMat marginal = partial_trace(initial.rho(), 2, {0});
  rho += (0.5 * (1.0 - alpha)) * kron(identity2(), marginal, Exec::Serial);
  return TwoQubitState(std::move(rho));
}

TwoQubitState noisy_cnot(const TwoQubitState& state, double delta) {
  require_unit_interval(delta, "delta");
  CMat rho = conjugate_by(cnot(), state.rho());
  rho *= delta;
  rho += (0.25 * (1.0 - delta)) * CMat::identity(4);
  return TwoQubitState(std::move(rho));
}

TwoQubitState prepare_source(const GateNoise& g) {
  return noisy_cnot(noisy_hadamard_prep(g.alpha), g.delta);
}

std::vector<CMat> kraus_ops(ChannelKind kind, double p) {
  require_unit_interval(p, "channel parameter");
  if (kind == ChannelKind::None) return {CMat::identity(2)};

  CMat k0(2);
  k0(0, 0) = 1;
  k0(1, 1) = std::sqrt(1.0 - p);
  CMat k1(2);
  if (kind == ChannelKind::Amplitude)
    k1(0, 1) = std::sqrt(p);  // decay |1> -> |0>
  else
    k1(1, 1) = std::sqrt(p);  // pure dephasing
  return {std::move(k0), std::move(k1)};
}

TwoQubitState apply_channel(const TwoQubitState& state, const ChannelSpec& c) {
  c.validate();
  if (c.kind == ChannelKind::None) return state;

  const std::vector<CMat> left = kraus_ops(c.kind, c.gamma);
  const std::vector<CMat> right = kraus_ops(c.kind, c.xi);
  CMat out(4);
  for (const CMat& ka : left)
    for (const CMat& kb : right) {
      const CMat k = kron(ka, kb, Exec::Serial);
      out += conjugate_by(k, state.rho());
    }
  return TwoQubitState(std::move(out));
}

Vec3 closed_tensor(const GateNoise& g, const ChannelSpec& c) {
  require_unit_interval(g.alpha, "alpha");
  require_unit_interval(g.delta, "delta");
  c.validate();
  const double ad = g.alpha * g.delta;
  switch (c.kind) {
    case ChannelKind::None:
      return {-ad, ad, g.delta};
    case ChannelKind::Amplitude: {
      const double d = (1.0 - c.gamma) * (1.0 - c.xi);
      return {-ad * std::sqrt(d), ad * std::sqrt(d),
              g.delta * d + c.gamma * c.xi};
    }
    case ChannelKind::Phase: {
      const double d = (1.0 - c.gamma) * (1.0 - c.xi);
      return {-ad * std::sqrt(d), ad * std::sqrt(d), g.delta};
    }
  }
  throw validation_error("invalid channel kind");
}

}  // namespace nlocal
