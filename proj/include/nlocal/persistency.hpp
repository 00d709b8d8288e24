#pragma once

#include <optional>
#include <utility>

#include "nlocal/network.hpp"

namespace nlocal {

/// Homogeneous-noise scenarios of the persistency analysis. "Combined"
/// scenarios mix gate, channel and measurement imperfections.
enum class Scenario {
  EntanglementOnly,
  ChannelAmp,
  ChannelPh,
  MeasurementOnly,
  CombinedAmp,
  CombinedPh,
};

Scenario scenario_from_string(const std::string& s);
std::string to_string(Scenario s);

struct PersistencyQuery {
  Scenario scenario = Scenario::EntanglementOnly;
  double alpha = 1.0;
  double delta = 1.0;
  double gamma = 0.0;  // both link channels of every source (gamma = xi)
  double beta = 1.0;
  double mu = 1.0;
  double nu = 1.0;
  double margin = 0.0;      // detection threshold is 1 + margin
  long n_cap = 1'000'000;

  /// Range checks plus scenario consistency: parameters a scenario holds
  /// ideal must not be supplied non-ideal.
  void validate() const;

  /// Signed per-source tensor axis values used by the chain criterion.
  Vec3 tensor() const;

  GateNoise gate() const { return GateNoise{alpha, delta}; }
  ChannelSpec channel() const;

  /// The network this query describes at chain length n.
  NetworkSpec network(long n) const;
};

/// Criterion left-hand side
///   LHS(n)^2 = mu nu beta^(n-1) (|t_z|^n + |t_x|^n)
/// evaluated in log space per term. Accepts real n.
double criterion_lhs(double n, const PersistencyQuery& q);

/// Strict test LHS(n) > 1 + margin, robust to term underflow: a product
/// term that is mathematically positive still tips an exact boundary even
/// when exp() has flushed it to zero.
bool criterion_detects(double n, const PersistencyQuery& q);

struct PersistencyResult {
  long P = 0;                    // largest detecting n; n_cap when unbounded
  bool bounded = true;           // false: still detecting at n_cap
  std::optional<double> n_real;  // boundary solution of LHS(n) = 1 + margin
  bool boundary_tie = false;     // n_real within 1e-9 of an integer
  std::vector<std::pair<long, double>> lhs_trace;
};

/// Exponential galloping plus binary search over n; monotonicity of the
/// criterion is asserted on the probe points.
PersistencyResult persistency(const PersistencyQuery& q);

struct SweepAxis {
  std::string param;  // alpha|delta|gamma|beta|mu|nu|mu_nu
  double start = 0.0;
  double stop = 0.0;
  double step = 0.0;
};

struct SweepRow {
  std::vector<double> values;
  PersistencyResult result;
};

/// Rectangular grid over one or two query parameters, row-major in axis
/// order. Grid points run in parallel; output order is the grid order.
std::vector<SweepRow> sweep(const PersistencyQuery& base,
                            const std::vector<SweepAxis>& axes,
                            Exec ex = Exec::Parallel);

struct Table1Row {
  double alpha = 1.0;
  double delta = 1.0;
  double gamma = 0.0;
  double mu = 1.0;
  double nu = 1.0;
  double beta = 1.0;
  long printed_P = 0;
};

struct Table1Entry {
  Table1Row row;
  PersistencyResult computed;
  bool agree = false;
};

/// Recomputes each row under the combined phase-damping scenario and
/// reports computed-vs-printed without overwriting either.
std::vector<Table1Entry> table1(const std::vector<Table1Row>& rows);

/// The four parameter rows shipped with the comparison table.
std::vector<Table1Row> table1_reference_rows();

}  // namespace nlocal
