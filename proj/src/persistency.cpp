#include "nlocal/persistency.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <set>

namespace nlocal {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_unit_interval(double x, const char* name) {
  if (!(x >= 0.0 && x <= 1.0))
    throw validation_error(std::string(name) + " must lie in [0, 1], got " +
                           std::to_string(x));
}

void require_ideal(double x, double ideal, const char* name, Scenario s) {
  if (x != ideal)
    throw validation_error(std::string(name) + " is fixed to " +
                           std::to_string(ideal) + " under scenario " +
                           to_string(s));
}

// Log-space pieces of LHS(n)^2 = mu nu beta^(n-1) (tz^n + tx^n).
struct LogForm {
  double log_c0;    // log(mu nu)
  double log_beta;  // log(beta)
  double lz, lx;    // log tz, log tx
  double tz, tx;    // absolute axis values
};

LogForm log_form(const PersistencyQuery& q) {
  const Vec3 t = q.tensor();
  LogForm f;
  f.tz = std::abs(t[2]);
  f.tx = std::abs(t[0]);
  f.log_c0 = std::log(q.mu) + std::log(q.nu);
  f.log_beta = std::log(q.beta);
  f.lz = std::log(f.tz);
  f.lx = std::log(f.tx);
  return f;
}

double log_sum_exp(double a, double b) {
  if (a == -kInf && b == -kInf) return -kInf;
  const double m = std::max(a, b);
  const double o = std::min(a, b);
  if (o == -kInf) return m;
  return m + std::log1p(std::exp(o - m));
}

double beta_exponent_term(double n, double log_beta) {
  // beta^0 = 1 even when beta = 0; avoid 0 * (-inf).
  return n == 1.0 ? 0.0 : (n - 1.0) * log_beta;
}

double log_lhs_sq(double n, const LogForm& f) {
  return f.log_c0 + beta_exponent_term(n, f.log_beta) +
         log_sum_exp(n * f.lz, n * f.lx);
}

bool detects(double n, const PersistencyQuery& q, const LogForm& f) {
  const double target = 2.0 * std::log1p(q.margin);
  const double lead =
      f.log_c0 + beta_exponent_term(n, f.log_beta) + n * std::max(f.lz, f.lx);
  if (lead > target) return true;  // subleading term only adds
  if (lead == target) return std::min(f.tz, f.tx) > 0.0;
  return log_lhs_sq(n, f) > target;
}

}  // namespace

Scenario scenario_from_string(const std::string& s) {
  if (s == "entanglement-only") return Scenario::EntanglementOnly;
  if (s == "channel-amp") return Scenario::ChannelAmp;
  if (s == "channel-ph") return Scenario::ChannelPh;
  if (s == "measurement-only") return Scenario::MeasurementOnly;
  if (s == "combined-amp") return Scenario::CombinedAmp;
  if (s == "combined-ph") return Scenario::CombinedPh;
  throw validation_error("unknown scenario: " + s);
}

std::string to_string(Scenario s) {
  switch (s) {
    case Scenario::EntanglementOnly:
      return "entanglement-only";
    case Scenario::ChannelAmp:
      return "channel-amp";
    case Scenario::ChannelPh:
      return "channel-ph";
    case Scenario::MeasurementOnly:
      return "measurement-only";
    case Scenario::CombinedAmp:
      return "combined-amp";
    case Scenario::CombinedPh:
      return "combined-ph";
  }
  throw validation_error("invalid scenario");
}

void PersistencyQuery::validate() const {
  require_unit_interval(alpha, "alpha");
  require_unit_interval(delta, "delta");
  require_unit_interval(gamma, "gamma");
  require_unit_interval(beta, "beta");
  require_unit_interval(mu, "mu");
  require_unit_interval(nu, "nu");
  if (!(margin >= 0.0)) throw validation_error("margin must be >= 0");
  if (n_cap < 2) throw validation_error("n_cap must be >= 2");

  switch (scenario) {
    case Scenario::EntanglementOnly:
      require_ideal(gamma, 0.0, "gamma", scenario);
      require_ideal(beta, 1.0, "beta", scenario);
      require_ideal(mu, 1.0, "mu", scenario);
      require_ideal(nu, 1.0, "nu", scenario);
      break;
    case Scenario::ChannelAmp:
    case Scenario::ChannelPh:
      require_ideal(alpha, 1.0, "alpha", scenario);
      require_ideal(delta, 1.0, "delta", scenario);
      require_ideal(beta, 1.0, "beta", scenario);
      require_ideal(mu, 1.0, "mu", scenario);
      require_ideal(nu, 1.0, "nu", scenario);
      break;
    case Scenario::MeasurementOnly:
      require_ideal(alpha, 1.0, "alpha", scenario);
      require_ideal(delta, 1.0, "delta", scenario);
      require_ideal(gamma, 0.0, "gamma", scenario);
      break;
    case Scenario::CombinedAmp:
    case Scenario::CombinedPh:
      break;
  }
}

ChannelSpec PersistencyQuery::channel() const {
  switch (scenario) {
    case Scenario::EntanglementOnly:
    case Scenario::MeasurementOnly:
      return ChannelSpec{ChannelKind::None, 0.0, 0.0};
    case Scenario::ChannelAmp:
    case Scenario::CombinedAmp:
      return ChannelSpec{ChannelKind::Amplitude, gamma, gamma};
    case Scenario::ChannelPh:
    case Scenario::CombinedPh:
      return ChannelSpec{ChannelKind::Phase, gamma, gamma};
  }
  throw validation_error("invalid scenario");
}

Vec3 PersistencyQuery::tensor() const {
  switch (scenario) {
    case Scenario::MeasurementOnly:
      return {-1.0, 1.0, 1.0};  // ideal Bell pair
    default:
      return closed_tensor(gate(), channel());
  }
}

NetworkSpec PersistencyQuery::network(long n) const {
  return NetworkSpec::homogeneous(n, gate(), channel(), beta, mu, nu);
}

double criterion_lhs(double n, const PersistencyQuery& q) {
  q.validate();
  if (!(n >= 1.0)) throw validation_error("criterion_lhs requires n >= 1");
  const double l = log_lhs_sq(n, log_form(q));
  return l == -kInf ? 0.0 : std::exp(0.5 * l);
}

bool criterion_detects(double n, const PersistencyQuery& q) {
  q.validate();
  if (!(n >= 1.0)) throw validation_error("criterion_detects requires n >= 1");
  return detects(n, q, log_form(q));
}

PersistencyResult persistency(const PersistencyQuery& q) {
  q.validate();
  const LogForm f = log_form(q);

  std::vector<std::pair<long, double>> probes;
  auto probe_detect = [&](long n) {
    probes.emplace_back(n, log_lhs_sq(static_cast<double>(n), f));
    return detects(static_cast<double>(n), q, f);
  };

  PersistencyResult res;
  if (!probe_detect(1)) {
    res.P = 0;
  } else if (probe_detect(q.n_cap)) {
    res.P = q.n_cap;
    res.bounded = false;
  } else {
    long lo = 1, hi = 2;
    while (hi < q.n_cap && probe_detect(hi)) {
      lo = hi;
      hi = std::min(hi * 2, q.n_cap);
    }
    // Invariant: detects(lo), not detects(hi).
    while (hi - lo > 1) {
      const long mid = lo + (hi - lo) / 2;
      if (probe_detect(mid))
        lo = mid;
      else
        hi = mid;
    }
    res.P = lo;
  }

  // The search relies on LHS(n) being non-increasing; check the probes.
  std::sort(probes.begin(), probes.end());
  for (std::size_t i = 1; i < probes.size(); ++i)
    if (probes[i].first > probes[i - 1].first &&
        probes[i].second > probes[i - 1].second + 1e-12)
      throw validation_error("criterion is not monotone over the probe points");

  if (res.bounded && res.P >= 1) {
    const double target = 2.0 * std::log1p(q.margin);
    double lo = static_cast<double>(res.P);
    double hi = static_cast<double>(res.P) + 1.0;
    const double flo = log_lhs_sq(lo, f) - target;
    const double fhi = log_lhs_sq(hi, f) - target;
    if (flo <= 0.0) {
      res.n_real = lo;
    } else if (fhi >= 0.0) {
      res.n_real = hi;
    } else {
      for (int it = 0; it < 100 && hi - lo > 1e-9; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (log_lhs_sq(mid, f) - target > 0.0)
          lo = mid;
        else
          hi = mid;
      }
      res.n_real = 0.5 * (lo + hi);
    }
    res.boundary_tie =
        std::abs(*res.n_real - std::round(*res.n_real)) < 1e-9;
  }

  // Trace of (n, LHS). Full prefix for short scans, probe skeleton plus the
  // boundary neighborhood otherwise.
  std::set<long> ns;
  const long top = res.bounded ? res.P + 1 : q.n_cap;
  if (top <= 256) {
    for (long n = 1; n <= top; ++n) ns.insert(n);
  } else {
    for (long n = 1; n <= 16; ++n) ns.insert(n);
    for (const auto& p : probes) ns.insert(p.first);
    for (long n = std::max<long>(1, res.P - 1); n <= std::min(top, res.P + 1);
         ++n)
      ns.insert(n);
  }
  for (long n : ns)
    res.lhs_trace.emplace_back(n, criterion_lhs(static_cast<double>(n), q));
  return res;
}

std::vector<SweepRow> sweep(const PersistencyQuery& base,
                            const std::vector<SweepAxis>& axes, Exec ex) {
  if (axes.empty() || axes.size() > 2)
    throw validation_error("sweep expects one or two grid axes");

  auto axis_values = [](const SweepAxis& ax) {
    if (!(ax.step > 0.0)) throw validation_error("grid step must be positive");
    if (ax.stop < ax.start)
      throw validation_error("grid stop must be >= start");
    std::vector<double> vs;
    const long count =
        static_cast<long>(std::floor((ax.stop - ax.start) / ax.step + 1e-9));
    for (long j = 0; j <= count; ++j) vs.push_back(ax.start + j * ax.step);
    return vs;
  };

  auto apply = [](PersistencyQuery q, const std::string& name, double v) {
    if (name == "alpha")
      q.alpha = v;
    else if (name == "delta")
      q.delta = v;
    else if (name == "gamma")
      q.gamma = v;
    else if (name == "beta")
      q.beta = v;
    else if (name == "mu")
      q.mu = v;
    else if (name == "nu")
      q.nu = v;
    else if (name == "mu_nu")
      q.mu = q.nu = v;
    else
      throw validation_error("unknown sweep parameter: " + name);
    return q;
  };

  std::vector<std::vector<double>> grids;
  for (const SweepAxis& ax : axes) grids.push_back(axis_values(ax));
  const std::size_t inner = axes.size() == 2 ? grids[1].size() : 1;
  const std::size_t total = grids[0].size() * inner;

  std::vector<SweepRow> rows(total);
  std::exception_ptr error;
  const bool par = (ex == Exec::Parallel);
#pragma omp parallel for schedule(dynamic) if (par)
  for (std::int64_t idx = 0; idx < static_cast<std::int64_t>(total); ++idx) {
    try {
      const std::size_t i0 = static_cast<std::size_t>(idx) / inner;
      const std::size_t i1 = static_cast<std::size_t>(idx) % inner;
      PersistencyQuery q = apply(base, axes[0].param, grids[0][i0]);
      SweepRow row;
      row.values.push_back(grids[0][i0]);
      if (axes.size() == 2) {
        q = apply(q, axes[1].param, grids[1][i1]);
        row.values.push_back(grids[1][i1]);
      }
      row.result = persistency(q);
      rows[static_cast<std::size_t>(idx)] = std::move(row);
    } catch (...) {
#pragma omp critical
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return rows;
}

std::vector<Table1Entry> table1(const std::vector<Table1Row>& rows) {
  std::vector<Table1Entry> out;
  for (const Table1Row& row : rows) {
    PersistencyQuery q;
    q.scenario = Scenario::CombinedPh;
    q.alpha = row.alpha;
    q.delta = row.delta;
    q.gamma = row.gamma;
    q.mu = row.mu;
    q.nu = row.nu;
    q.beta = row.beta;
    Table1Entry e;
    e.row = row;
    e.computed = persistency(q);
    e.agree = e.computed.bounded && e.computed.P == row.printed_P;
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<Table1Row> table1_reference_rows() {
  return {
      {1.00, 1.00, 0.10, 0.94, 0.93, 0.92, 4},
      {0.94, 0.93, 0.10, 1.00, 1.00, 1.00, 7},
      {0.92, 0.95, 0.00, 0.92, 0.94, 0.95, 9},
      {0.92, 0.95, 0.12, 0.94, 0.93, 0.95, 4},
  };
}

}  // namespace nlocal
