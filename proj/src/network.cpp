#include "nlocal/network.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

namespace nlocal {

namespace {

constexpr Vec3 kZ{0.0, 0.0, 1.0};
constexpr Vec3 kX{1.0, 0.0, 0.0};

void require_unit_interval(double x, const char* name) {
  if (!(x >= 0.0 && x <= 1.0))
    throw validation_error(std::string(name) + " must lie in [0, 1], got " +
                           std::to_string(x));
}

double real_trace(const CMat& op, const CMat& rho, Exec ex) {
  const cplx t = trace_product(op, rho, ex);
  if (std::abs(t.imag()) > 1e-9 * std::max(1.0, std::abs(t.real())))
    throw validation_error("expectation value has a non-real trace");
  return t.real();
}

// Per-source transfer factors; everything the I/J contraction needs.
struct ChainFactors {
  Mat3 w_first;
  Mat3 w_last;
  double mid_z = 1.0;  // prod_{i=2}^{n-1} z^T W_i z
  double mid_x = 1.0;
  double scale = 1.0;  // mu nu prod(beta)
};

ChainFactors chain_factors(const NetworkSpec& spec) {
  const long n = spec.n;
  std::vector<double> zz(static_cast<std::size_t>(n));
  std::vector<double> xx(static_cast<std::size_t>(n));
  Mat3 w_first, w_last;

#pragma omp parallel for schedule(static) if (n > 256)
  for (long i = 0; i < n; ++i) {
    const Mat3 w = bloch_decompose(effective_state(spec, i)).w;
    zz[static_cast<std::size_t>(i)] = bilinear(kZ, w, kZ);
    xx[static_cast<std::size_t>(i)] = bilinear(kX, w, kX);
    if (i == 0) w_first = w;
    if (i == n - 1) w_last = w;
  }

  ChainFactors f;
  f.w_first = w_first;
  f.w_last = w_last;
  for (long i = 1; i + 1 < n; ++i) {
    f.mid_z *= zz[static_cast<std::size_t>(i)];
    f.mid_x *= xx[static_cast<std::size_t>(i)];
  }
  f.scale = spec.mu * spec.nu;
  for (double b : spec.betas) f.scale *= b;
  return f;
}

IJ contract(const ChainFactors& f, const Direction& m0, const Direction& m1,
            const Direction& n0, const Direction& n1) {
  const Vec3 ms[2] = {m0.v, m1.v};
  const Vec3 ns[2] = {n0.v, n1.v};
  IJ out;
  for (int y1 = 0; y1 < 2; ++y1)
    for (int y2 = 0; y2 < 2; ++y2) {
      const double ei = bilinear(ms[y1], f.w_first, kZ) * f.mid_z *
                        bilinear(kZ, f.w_last, ns[y2]);
      const double ej = bilinear(ms[y1], f.w_first, kX) * f.mid_x *
                        bilinear(kX, f.w_last, ns[y2]);
      out.I += ei;
      out.J += ((y1 + y2) % 2 == 0 ? 1.0 : -1.0) * ej;
    }
  out.I *= 0.25 * f.scale;
  out.J *= 0.25 * f.scale;
  return out;
}

double golden_max(const std::function<double(double)>& fn, double lo,
                  double hi, double step_tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = fn(c), fd = fn(d);
  while (b - a > step_tol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = fn(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = fn(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

void NetworkSpec::validate() const {
  if (n < 2) throw validation_error("network requires at least 2 sources");
  if (n > kFactorizedMaxSources)
    throw resource_error("network size exceeds the 1e6 source cap");
  if (static_cast<long>(sources.size()) != n)
    throw validation_error("sources list must hold exactly n descriptors");
  if (static_cast<long>(betas.size()) != n - 1)
    throw validation_error("betas list must hold exactly n-1 entries");
  for (double b : betas) require_unit_interval(b, "beta");
  require_unit_interval(mu, "mu");
  require_unit_interval(nu, "nu");
  for (const SourceSpec& s : sources) {
    if (s.is_explicit()) {
      if (s.state->dim() != 4)
        throw validation_error("explicit source state must be 4x4");
    } else {
      require_unit_interval(s.gate.alpha, "alpha");
      require_unit_interval(s.gate.delta, "delta");
    }
    s.channel.validate();
  }
}

NetworkSpec NetworkSpec::homogeneous(long n, const GateNoise& g,
                                     const ChannelSpec& c, double beta,
                                     double mu, double nu) {
  NetworkSpec spec;
  spec.n = n;
  spec.sources.assign(static_cast<std::size_t>(n), SourceSpec{{}, g, c});
  spec.betas.assign(static_cast<std::size_t>(n - 1), beta);
  spec.mu = mu;
  spec.nu = nu;
  return spec;
}

double IJ::S() const { return std::sqrt(std::abs(I)) + std::sqrt(std::abs(J)); }

TwoQubitState effective_state(const NetworkSpec& spec, long i) {
  if (i < 0 || i >= spec.n)
    throw shape_error("effective_state: source index out of range");
  const SourceSpec& s = spec.sources[static_cast<std::size_t>(i)];
  if (s.is_explicit())
    return apply_channel(TwoQubitState(*s.state), s.channel);
  return apply_channel(prepare_source(s.gate), s.channel);
}

std::vector<TwoQubitState> effective_states(const NetworkSpec& spec) {
  spec.validate();
  std::vector<TwoQubitState> out;
  out.reserve(static_cast<std::size_t>(spec.n));
  for (long i = 0; i < spec.n; ++i) out.push_back(effective_state(spec, i));
  return out;
}

IJ compute_IJ_full(const NetworkSpec& spec, Exec ex) {
  spec.validate();
  if (spec.n > kFullPathMaxSources)
    throw resource_error("full joint-state path is capped at n = 6");

  const std::vector<TwoQubitState> states = effective_states(spec);
  CMat rho = states.front().rho();
  for (long i = 1; i < spec.n; ++i) rho = kron(rho, states[i].rho(), ex);

  // Signed central chain, one matrix per output bit.
  CMat mid_first, mid_second;
  for (std::size_t k = 0; k < spec.betas.size(); ++k) {
    const CMat cf = central_observable(spec.betas[k], CentralBit::First);
    const CMat cs = central_observable(spec.betas[k], CentralBit::Second);
    if (k == 0) {
      mid_first = cf;
      mid_second = cs;
    } else {
      mid_first = kron(mid_first, cf, ex);
      mid_second = kron(mid_second, cs, ex);
    }
  }

  const CMat a_obs[2] = {extreme_observable(spec.m0, spec.mu),
                         extreme_observable(spec.m1, spec.mu)};
  const CMat b_obs[2] = {extreme_observable(spec.n0, spec.nu),
                         extreme_observable(spec.n1, spec.nu)};

  IJ out;
  for (int y1 = 0; y1 < 2; ++y1)
    for (int y2 = 0; y2 < 2; ++y2) {
      const CMat op_i =
          kron(kron(a_obs[y1], mid_first, ex), b_obs[y2], ex);
      out.I += real_trace(op_i, rho, ex);
      const CMat op_j =
          kron(kron(a_obs[y1], mid_second, ex), b_obs[y2], ex);
      out.J +=
          ((y1 + y2) % 2 == 0 ? 1.0 : -1.0) * real_trace(op_j, rho, ex);
    }
  out.I *= 0.25;
  out.J *= 0.25;
  return out;
}

IJ compute_IJ_factorized(const NetworkSpec& spec) {
  spec.validate();

  // The contraction drops every term in which a signed observable
  // contributes its identity part; that is only sound because the signed
  // observables are traceless. Check it on one representative of each kind.
  const double tr_central =
      std::abs(trace(central_observable(spec.betas.front(), CentralBit::First)));
  const double tr_extreme = std::abs(trace(extreme_observable(spec.m0, spec.mu)));
  if (tr_central > 1e-13 || tr_extreme > 1e-13)
    throw validation_error("signed observable is not traceless");

  const ChainFactors f = chain_factors(spec);
  return contract(f, spec.m0, spec.m1, spec.n0, spec.n1);
}

DetectionReport detect_closed(const NetworkSpec& spec) {
  spec.validate();
  const long n = spec.n;

  std::vector<double> t1(static_cast<std::size_t>(n)),
      t2(static_cast<std::size_t>(n)), zz(static_cast<std::size_t>(n)),
      xx(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(static) if (n > 256)
  for (long i = 0; i < n; ++i) {
    const BlochForm bf = bloch_decompose(effective_state(spec, i));
    const std::array<double, 3> sv = singular_values_3x3(bf.w);
    t1[static_cast<std::size_t>(i)] = sv[0];
    t2[static_cast<std::size_t>(i)] = sv[1];
    zz[static_cast<std::size_t>(i)] = bilinear(kZ, bf.w, kZ);
    xx[static_cast<std::size_t>(i)] = bilinear(kX, bf.w, kX);
  }

  double p1 = 1.0, p2 = 1.0, az = 1.0, ax = 1.0;
  for (long i = 0; i < n; ++i) {
    p1 *= t1[static_cast<std::size_t>(i)];
    p2 *= t2[static_cast<std::size_t>(i)];
    az *= zz[static_cast<std::size_t>(i)];
    ax *= xx[static_cast<std::size_t>(i)];
  }
  double scale = spec.mu * spec.nu;
  for (double b : spec.betas) scale *= b;

  DetectionReport rep;
  rep.closed_lhs = std::sqrt(scale * (p1 + p2));
  rep.attained_lhs = std::sqrt(scale * (std::abs(az) + std::abs(ax)));

  // Scenario-specific product form when every source carries the same
  // channel kind and no source is an explicit matrix.
  const bool descriptor_based =
      std::none_of(spec.sources.begin(), spec.sources.end(),
                   [](const SourceSpec& s) { return s.is_explicit(); });
  bool uniform_kind = descriptor_based;
  for (const SourceSpec& s : spec.sources)
    uniform_kind = uniform_kind && s.channel.kind == spec.sources[0].channel.kind;
  if (uniform_kind) {
    double prod_x = 1.0, prod_z = 1.0;
    for (const SourceSpec& s : spec.sources) {
      const Vec3 t = closed_tensor(s.gate, s.channel);
      prod_x *= std::abs(t[0]);
      prod_z *= t[2];
    }
    const ChannelKind kind = spec.sources[0].channel.kind;
    double body;
    if (kind == ChannelKind::Amplitude)
      body = std::max(2.0 * prod_x, prod_x + prod_z);
    else
      body = prod_z + prod_x;  // ordering is fixed for none/phase
    rep.scenario_lhs = std::sqrt(scale * body);

    const bool identical = std::all_of(
        spec.sources.begin(), spec.sources.end(), [&](const SourceSpec& s) {
          return s.gate.alpha == spec.sources[0].gate.alpha &&
                 s.gate.delta == spec.sources[0].gate.delta &&
                 s.channel.gamma == spec.sources[0].channel.gamma &&
                 s.channel.xi == spec.sources[0].channel.xi;
        });
    if ((kind != ChannelKind::Amplitude || identical) &&
        std::abs(*rep.scenario_lhs - rep.closed_lhs) >
            1e-12 * std::max(1.0, rep.closed_lhs))
      throw validation_error(
          "scenario-form criterion disagrees with the singular-value form");
  }

  const IJ ij = compute_IJ_factorized(spec);
  rep.I = ij.I;
  rep.J = ij.J;
  rep.S = ij.S();
  rep.detected = rep.closed_lhs > 1.0;
  rep.margin = rep.closed_lhs - 1.0;
  return rep;
}

MaximizeResult maximize_S(const NetworkSpec& spec) {
  spec.validate();
  const ChainFactors f = chain_factors(spec);

  auto eval = [&f](const std::array<double, 4>& th) {
    return contract(f, Direction::xz(th[0]), Direction::xz(th[1]),
                    Direction::xz(th[2]), Direction::xz(th[3]))
        .S();
  };

  {
    // Tie the cached contraction back to the public evaluator once.
    const std::array<double, 4> th0{0.3, -0.9, 1.1, -0.2};
    NetworkSpec probe = spec;
    probe.m0 = Direction::xz(th0[0]);
    probe.m1 = Direction::xz(th0[1]);
    probe.n0 = Direction::xz(th0[2]);
    probe.n1 = Direction::xz(th0[3]);
    const IJ direct = compute_IJ_factorized(probe);
    if (std::abs(direct.S() - eval(th0)) > 1e-12)
      throw validation_error("cached contraction drifted from the evaluator");
  }

  const double pi = std::numbers::pi;
  const double coarse = pi / 60.0;
  const std::array<std::array<double, 4>, 4> starts{{
      {pi / 4, -pi / 4, pi / 4, -pi / 4},
      {0.3, -1.2, 0.9, -0.4},
      {pi / 2, 0.0, pi / 2, 0.0},
      {2.2, 0.4, -0.6, 1.9},
  }};

  std::array<double, 4> best_angles = starts[0];
  double best = -1.0;
  for (const auto& start : starts) {
    std::array<double, 4> th = start;
    double current = eval(th);
    for (int pass = 0; pass < 60; ++pass) {
      const double before = current;
      for (int k = 0; k < 4; ++k) {
        double arg_best = th[k];
        double val_best = current;
        for (int j = 0; j < 120; ++j) {
          const double cand = -pi + static_cast<double>(j) * coarse;
          std::array<double, 4> probe = th;
          probe[k] = cand;
          const double v = eval(probe);
          if (v > val_best) {
            val_best = v;
            arg_best = cand;
          }
        }
        const double refined = golden_max(
            [&](double x) {
              std::array<double, 4> probe = th;
              probe[k] = x;
              return eval(probe);
            },
            arg_best - coarse, arg_best + coarse, 1e-6);
        std::array<double, 4> probe = th;
        probe[k] = refined;
        const double v = eval(probe);
        if (v > current) {
          current = v;
          th = probe;
        }
      }
      if (current - before < 1e-13) break;
    }
    if (current > best) {
      best = current;
      best_angles = th;
    }
  }

  MaximizeResult res;
  res.S = best;
  res.m0 = Direction::xz(best_angles[0]);
  res.m1 = Direction::xz(best_angles[1]);
  res.n0 = Direction::xz(best_angles[2]);
  res.n1 = Direction::xz(best_angles[3]);
  return res;
}

bool theorem1_scaling_check(const NetworkSpec& spec, double tol, Exec ex) {
  spec.validate();
  if (spec.n > 4)
    throw resource_error("scaling check runs the full path twice; n <= 4");

  NetworkSpec ideal = spec;
  ideal.mu = 1.0;
  ideal.nu = 1.0;
  std::fill(ideal.betas.begin(), ideal.betas.end(), 1.0);

  double scale = spec.mu * spec.nu;
  for (double b : spec.betas) scale *= b;

  const IJ noisy = compute_IJ_full(spec, ex);
  const IJ clean = compute_IJ_full(ideal, ex);
  return std::abs(noisy.I - scale * clean.I) <= tol &&
         std::abs(noisy.J - scale * clean.J) <= tol;
}

}  // namespace nlocal
