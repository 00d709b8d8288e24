#pragma once

#include "nlocal/states.hpp"

namespace nlocal {

/// Gate fidelities of one source: alpha for the Hadamard, delta for the
/// CNOT. 1 is a perfect gate, 0 a fully depolarized one.
struct GateNoise {
  double alpha = 1.0;
  double delta = 1.0;
};

enum class ChannelKind { None, Amplitude, Phase };

ChannelKind channel_kind_from_string(const std::string& s);
std::string to_string(ChannelKind k);

/// Damping channels on the two qubits a source emits: gamma acts on the
/// qubit sent to the left party, xi on the one sent to the right party.
struct ChannelSpec {
  ChannelKind kind = ChannelKind::None;
  double gamma = 0.0;
  double xi = 0.0;

  void validate() const;
};

/// State after an imperfect Hadamard on the control qubit. The source
/// register starts with the control in |1> and the target in |0>; a perfect
/// gate (alpha = 1) followed by a perfect CNOT yields the phi- Bell pair.
TwoQubitState noisy_hadamard_prep(double alpha);

/// delta * CNOT rho CNOT^dag + (1-delta)/4 * I, control on the first qubit.
TwoQubitState noisy_cnot(const TwoQubitState& state, double delta);

/// Full preparation pipeline: imperfect Hadamard then imperfect CNOT.
/// Correlation tensor of the result is diag(-alpha*delta, alpha*delta, delta).
TwoQubitState prepare_source(const GateNoise& g);

/// Single-qubit Kraus set for a damping channel with parameter p.
std::vector<CMat> kraus_ops(ChannelKind kind, double p);

/// Applies the channel independently to both qubits (gamma left, xi right).
TwoQubitState apply_channel(const TwoQubitState& state, const ChannelSpec& c);

/// Closed-form signed correlation tensor diagonal (t_x, t_y, t_z) of
/// apply_channel(prepare_source(g), c). With D = (1-gamma)(1-xi):
///   none      -> (-ad, ad, d)
///   amplitude -> (-ad sqrt(D), ad sqrt(D), d D + gamma xi)
///   phase     -> (-ad sqrt(D), ad sqrt(D), d)
Vec3 closed_tensor(const GateNoise& g, const ChannelSpec& c);

}  // namespace nlocal
