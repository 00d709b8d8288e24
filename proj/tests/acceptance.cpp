// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Tolerances and runtime limits are fixed here.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "nlocal/persistency.hpp"
#include "nlocal/sampling.hpp"

using namespace nlocal;

namespace {

int g_failures = 0;

struct Criterion {
  int id;
  std::string label;
  double time_limit_s;  // 0 = no limit
};

void run_criterion(const Criterion& c, const std::function<bool(std::string&)>& body) {
  std::string detail;
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = false;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  const double dt =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  if (c.time_limit_s > 0 && dt > c.time_limit_s) {
    ok = false;
    detail += (detail.empty() ? "" : "; ") + std::string("over time limit");
  }
  if (!ok) ++g_failures;
  std::printf("[%s] criterion %d: %s%s%s (%.2fs%s)\n", ok ? "PASS" : "FAIL",
              c.id, c.label.c_str(), detail.empty() ? "" : " -- ",
              detail.c_str(), dt,
              c.time_limit_s > 0
                  ? (" < " + std::to_string(static_cast<int>(c.time_limit_s)) + "s limit").c_str()
                  : "");
}

template <class... Args>
std::string fmt(const char* f, Args... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

}  // namespace

int main() {
  // 1. entanglement-only anchor
  run_criterion({1, "persistency anchor, entanglement-only (P=4, n_real=4.567+-0.001)", 1.0},
                [](std::string& detail) {
    PersistencyQuery q;
    q.scenario = Scenario::EntanglementOnly;
    q.alpha = q.delta = 0.9;
    const PersistencyResult r = persistency(q);
    if (!r.bounded || !r.n_real) return false;
    detail = fmt("P=%.0f, n_real=%.4f", static_cast<double>(r.P), *r.n_real);
    bool ok = r.P == 4 && std::abs(*r.n_real - 4.567) <= 1e-3;

    // the plot-table sweep carries the same anchor point
    const std::vector<SweepRow> rows =
        sweep(PersistencyQuery{Scenario::EntanglementOnly},
              {{"alpha", 0.85, 1.0, 0.05}, {"delta", 0.85, 1.0, 0.05}});
    bool anchored = false;
    for (const SweepRow& row : rows)
      if (std::abs(row.values[0] - 0.9) < 1e-12 &&
          std::abs(row.values[1] - 0.9) < 1e-12)
        anchored = row.result.bounded && row.result.P == 4;
    return ok && anchored;
  });

  // 2. measurement-only anchor
  run_criterion({2, "persistency anchor, measurement-only (P=5)", 1.0},
                [](std::string& detail) {
    PersistencyQuery q;
    q.scenario = Scenario::MeasurementOnly;
    q.mu = q.nu = q.beta = 0.9;
    const PersistencyResult r = persistency(q);
    detail = fmt("P=%.0f", static_cast<double>(r.P));
    if (!(r.bounded && r.P == 5)) return false;

    PersistencyQuery base;
    base.scenario = Scenario::MeasurementOnly;
    const std::vector<SweepRow> rows =
        sweep(base, {{"mu_nu", 0.85, 1.0, 0.05}, {"beta", 0.85, 1.0, 0.05}});
    for (const SweepRow& row : rows)
      if (std::abs(row.values[0] - 0.9) < 1e-12 &&
          std::abs(row.values[1] - 0.9) < 1e-12)
        return row.result.bounded && row.result.P == 5;
    return false;
  });

  // 3. comparison table
  run_criterion({3, "table row 1 reproduced; rows 2-4 recomputed and cross-checked", 0},
                [](std::string& detail) {
    const std::vector<Table1Entry> entries = table1(table1_reference_rows());
    if (entries.size() != 4) return false;

    std::string report = "computed vs printed:";
    bool ok = entries[0].agree && entries[0].computed.P == 4;
    for (const Table1Entry& e : entries) {
      report += fmt(" %.0f/%.0f(%s)", static_cast<double>(e.computed.P),
                    static_cast<double>(e.row.printed_P),
                    e.agree ? "agree" : "disagree");
      if (!e.computed.bounded) return false;

      // internal consistency 1: plain-arithmetic integer scan of the
      // combined phase formula reproduces the log-space result
      long scan_p = 0;
      for (long n = 1; n <= 64; ++n) {
        const double lhs_sq =
            e.row.mu * e.row.nu * std::pow(e.row.beta, n - 1) *
            (std::pow(e.row.alpha * e.row.delta * (1 - e.row.gamma), n) +
             std::pow(e.row.delta, n));
        if (lhs_sq > 1.0) scan_p = n;
      }
      if (scan_p != e.computed.P) return false;

      // internal consistency 2: the joint-state oracle confirms detection
      // at n = P, and the closed criterion stops at P + 1
      PersistencyQuery q;
      q.scenario = Scenario::CombinedPh;
      q.alpha = e.row.alpha;
      q.delta = e.row.delta;
      q.gamma = e.row.gamma;
      q.beta = e.row.beta;
      q.mu = e.row.mu;
      q.nu = e.row.nu;
      if (e.computed.P <= 4) {
        NetworkSpec spec = q.network(e.computed.P);
        const MaximizeResult best = maximize_S(spec);
        spec.m0 = best.m0;
        spec.m1 = best.m1;
        spec.n0 = best.n0;
        spec.n1 = best.n1;
        if (!(compute_IJ_full(spec).S() > 1.0)) return false;
      }
      if (criterion_detects(e.computed.P + 1, q)) return false;
    }
    detail = report;
    return ok;
  });

  // 4. scaling identity via the joint-state oracle
  run_criterion({4, "I_noisy = mu nu prod(beta) I_ideal on 50 random chains (1e-10)", 30.0},
                [](std::string& detail) {
    Rng rng(42);
    const SpecSampler sampler;
    double worst = 0;
    for (int i = 0; i < 50; ++i) {
      const NetworkSpec spec = sampler.draw(rng, 2 + i % 3);
      NetworkSpec ideal = spec;
      ideal.mu = ideal.nu = 1.0;
      std::fill(ideal.betas.begin(), ideal.betas.end(), 1.0);
      double scale = spec.mu * spec.nu;
      for (double b : spec.betas) scale *= b;
      const IJ noisy = compute_IJ_full(spec);
      const IJ clean = compute_IJ_full(ideal);
      worst = std::max({worst, std::abs(noisy.I - scale * clean.I),
                        std::abs(noisy.J - scale * clean.J)});
    }
    detail = fmt("max deviation %.2e", worst);
    return worst <= 1e-10;
  });

  // 5. attainability of the closed bound
  run_criterion({5, "maximize_S matches the closed criterion on 20 homogeneous chains (1e-4)", 60.0},
                [](std::string& detail) {
    Rng rng(43);
    SpecSampler sampler;
    sampler.kinds = {ChannelKind::None, ChannelKind::Phase};
    double worst = 0;
    for (int i = 0; i < 20; ++i) {
      const NetworkSpec spec = sampler.draw_homogeneous(rng, 2 + i % 3);
      worst = std::max(
          worst, std::abs(maximize_S(spec).S - detect_closed(spec).closed_lhs));
    }
    detail = fmt("max gap %.2e", worst);
    return worst <= 1e-4;
  });

  // 6. factorized vs full
  run_criterion({6, "factorized contraction equals the joint-state path on 50 chains (1e-10)", 0},
                [](std::string& detail) {
    Rng rng(44);
    SpecSampler sampler;
    double worst = 0;
    for (int i = 0; i < 50; ++i) {
      sampler.explicit_states = (i % 2 == 0);
      const NetworkSpec spec = sampler.draw(rng, 2 + i % 3);
      const IJ full = compute_IJ_full(spec);
      const IJ fact = compute_IJ_factorized(spec);
      worst = std::max({worst, std::abs(full.I - fact.I),
                        std::abs(full.J - fact.J)});
    }
    detail = fmt("max deviation %.2e", worst);
    return worst <= 1e-10;
  });

  // 7. channel and POVM property grid
  run_criterion({7, "Kraus/POVM properties and closed tensor on a 10^4 grid (1e-12)", 0},
                [](std::string& detail) {
    double worst = 0;
    // Kraus completeness and POVM structure across fidelity grids
    for (int ib = 0; ib <= 20; ++ib) {
      const double p = ib / 20.0;
      for (ChannelKind kind : {ChannelKind::Amplitude, ChannelKind::Phase}) {
        CMat sum(2);
        for (const CMat& k : kraus_ops(kind, p))
          sum += matmul(adjoint(k), k, Exec::Serial);
        worst = std::max(worst, max_abs_diff(sum, CMat::identity(2)));
      }
      check_povm(bsm_noisy(p));
      check_povm(qubit_noisy(Direction::xz(0.37 + p), p));
    }
    if (worst > 1e-12) return false;

    // closed tensor vs the explicit Kraus pipeline: 10x10x10x10 per kind
    double tensor_worst = 0;
    for (ChannelKind kind : {ChannelKind::Amplitude, ChannelKind::Phase})
      for (int ia = 0; ia < 10; ++ia)
        for (int id = 0; id < 10; ++id)
          for (int ig = 0; ig < 10; ++ig)
            for (int ix = 0; ix < 10; ++ix) {
              const GateNoise g{ia / 9.0, id / 9.0};
              const ChannelSpec c{kind, ig / 9.0, ix / 9.0};
              const Vec3 closed = closed_tensor(g, c);
              const BlochForm f =
                  bloch_decompose(apply_channel(prepare_source(g), c));
              tensor_worst = std::max(
                  {tensor_worst, std::abs(f.w(0, 0) - closed[0]),
                   std::abs(f.w(1, 1) - closed[1]),
                   std::abs(f.w(2, 2) - closed[2])});
            }
    detail = fmt("kraus %.2e, tensor %.2e", worst, tensor_worst);
    return tensor_worst <= 1e-12;
  });

  // 8. phase vs amplitude ordering with a pinned point
  run_criterion({8, "P_ph(gamma) >= P_amp(gamma) on the 0.05 grid; P_amp(0.1) = 4", 0},
                [](std::string& detail) {
    long pinned = -1;
    for (int i = 1; i <= 19; ++i) {
      const double gamma = 0.05 * i;
      PersistencyQuery amp;
      amp.scenario = Scenario::ChannelAmp;
      amp.gamma = gamma;
      PersistencyQuery ph;
      ph.scenario = Scenario::ChannelPh;
      ph.gamma = gamma;
      const PersistencyResult ra = persistency(amp);
      const PersistencyResult rp = persistency(ph);
      const long pa = ra.bounded ? ra.P : ra.P + 1;
      const long pp = rp.bounded ? rp.P : rp.P + 1;
      if (pp < pa) return false;
      if (i == 2) pinned = ra.bounded ? ra.P : -1;
    }
    detail = fmt("P_amp(0.1)=%.0f", static_cast<double>(pinned));
    return pinned == 4;
  });

  // 9. monotonicity and combined-vs-single ordering
  run_criterion({9, "criterion and persistency monotone under worsening noise; combined <= singles", 0},
                [](std::string&) {
    const double fid[5] = {1.0, 0.95, 0.9, 0.85, 0.8};
    const double dam[5] = {0.0, 0.1, 0.2, 0.3, 0.4};

    // detection LHS at fixed n = 3, one knob at a time
    auto lhs = [](double alpha, double delta, double gamma, double beta,
                  double mu, double nu, ChannelKind kind) {
      return detect_closed(NetworkSpec::homogeneous(
                               3, GateNoise{alpha, delta},
                               ChannelSpec{kind, gamma, gamma}, beta, mu, nu))
          .closed_lhs;
    };
    for (ChannelKind kind : {ChannelKind::Amplitude, ChannelKind::Phase})
      for (int knob = 0; knob < 6; ++knob) {
        double prev = 1e300;
        for (int i = 0; i < 5; ++i) {
          const double v =
              lhs(knob == 0 ? fid[i] : 0.95, knob == 1 ? fid[i] : 0.95,
                  knob == 2 ? dam[i] : 0.1, knob == 3 ? fid[i] : 0.95,
                  knob == 4 ? fid[i] : 0.95, knob == 5 ? fid[i] : 0.95, kind);
          if (v > prev + 1e-12) return false;
          prev = v;
        }
      }

    // persistency measures along the same axes
    auto p_of = [](PersistencyQuery q) {
      const PersistencyResult r = persistency(q);
      return r.bounded ? r.P : r.P + 1;
    };
    for (int knob = 0; knob < 3; ++knob) {
      long prev = 1L << 40;
      for (int i = 0; i < 5; ++i) {
        PersistencyQuery q;
        q.scenario = Scenario::EntanglementOnly;
        q.alpha = knob == 0 ? fid[i] : 0.95;
        q.delta = knob == 1 ? fid[i] : 0.95;
        if (knob == 2) {
          q.scenario = Scenario::ChannelAmp;
          q.alpha = q.delta = 1.0;
          q.gamma = dam[i];
        }
        const long p = p_of(q);
        if (p > prev) return false;
        prev = p;
      }
    }
    for (int knob = 0; knob < 3; ++knob) {
      long prev = 1L << 40;
      for (int i = 0; i < 5; ++i) {
        PersistencyQuery q;
        q.scenario = Scenario::MeasurementOnly;
        q.beta = knob == 0 ? fid[i] : 0.95;
        q.mu = knob == 1 ? fid[i] : 0.95;
        q.nu = knob == 2 ? fid[i] : 0.95;
        const long p = p_of(q);
        if (p > prev) return false;
        prev = p;
      }
    }

    // combined runs out no later than any single-noise scenario
    for (double gamma : {0.05, 0.1, 0.15})
      for (double f : {0.92, 0.95, 0.98}) {
        PersistencyQuery combined;
        combined.scenario = Scenario::CombinedPh;
        combined.alpha = combined.delta = f;
        combined.gamma = gamma;
        combined.beta = combined.mu = combined.nu = f;
        const long pc = p_of(combined);

        PersistencyQuery ent;
        ent.scenario = Scenario::EntanglementOnly;
        ent.alpha = ent.delta = f;
        PersistencyQuery ph;
        ph.scenario = Scenario::ChannelPh;
        ph.gamma = gamma;
        PersistencyQuery meas;
        meas.scenario = Scenario::MeasurementOnly;
        meas.beta = meas.mu = meas.nu = f;
        if (pc > p_of(ent) || pc > p_of(ph) || pc > p_of(meas)) return false;
      }
    return true;
  });

  std::printf("%s: %d criterion(s) failed\n",
              g_failures == 0 ? "ACCEPTANCE PASSED" : "ACCEPTANCE FAILED",
              g_failures);
  return g_failures == 0 ? 0 : 1;
}
