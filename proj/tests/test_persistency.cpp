#include "doctest.h"

#include <cmath>

#include "nlocal/persistency.hpp"

using namespace nlocal;

namespace {

PersistencyQuery make_query(Scenario s) {
  PersistencyQuery q;
  q.scenario = s;
  return q;
}

}  // namespace

TEST_CASE("criterion values at hand-checked points") {
  PersistencyQuery ent = make_query(Scenario::EntanglementOnly);
  ent.alpha = ent.delta = 0.9;
  // sqrt(0.9^4 (1 + 0.9^4))
  CHECK(criterion_lhs(4, ent) ==
        doctest::Approx(std::sqrt(0.6561 * 1.6561)).epsilon(1e-12));
  CHECK(criterion_lhs(4, ent) == doctest::Approx(1.0424).epsilon(1e-4));

  PersistencyQuery meas = make_query(Scenario::MeasurementOnly);
  CHECK(criterion_lhs(2, meas) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-13));
  CHECK(criterion_lhs(900, meas) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-13));

  PersistencyQuery ph = make_query(Scenario::ChannelPh);
  ph.gamma = 0.3;
  CHECK(criterion_lhs(100, ph) ==
        doctest::Approx(std::sqrt(1.0 + std::pow(0.7, 100))).epsilon(1e-13));
  CHECK(criterion_lhs(100, ph) > 1.0);
  CHECK(criterion_detects(100, ph));
  // far beyond double underflow of 0.7^n the strict test still fires
  CHECK(criterion_detects(1e6, ph));
}

TEST_CASE("entanglement-only anchor: P = 4 at n_real = 4.567") {
  PersistencyQuery q = make_query(Scenario::EntanglementOnly);
  q.alpha = q.delta = 0.9;
  const PersistencyResult r = persistency(q);
  CHECK(r.bounded);
  CHECK(r.P == 4);
  REQUIRE(r.n_real.has_value());
  // closed form: 0.9^n solves x^2 + x = 1 at the boundary
  const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
  const double n_exact = std::log(golden) / std::log(0.9);
  CHECK(*r.n_real == doctest::Approx(n_exact).epsilon(1e-7));
  CHECK(*r.n_real == doctest::Approx(4.567).epsilon(1e-3));
  CHECK_FALSE(r.boundary_tie);
  CHECK(r.P == static_cast<long>(std::floor(*r.n_real)));
}

TEST_CASE("measurement-only anchor: P = 5 at mu = nu = beta = 0.9") {
  PersistencyQuery q = make_query(Scenario::MeasurementOnly);
  q.mu = q.nu = q.beta = 0.9;
  const PersistencyResult r = persistency(q);
  CHECK(r.bounded);
  CHECK(r.P == 5);
  REQUIRE(r.n_real.has_value());
  const double n_exact = 1.0 + std::log(2 * 0.81) / (-std::log(0.9));
  CHECK(*r.n_real == doctest::Approx(n_exact).epsilon(1e-7));
}

TEST_CASE("amplitude channel anchor: P = 4 at gamma = 0.1") {
  PersistencyQuery q = make_query(Scenario::ChannelAmp);
  q.gamma = 0.1;
  // x/z-axis products: 0.9^n + 0.82^n
  CHECK(criterion_lhs(4, q) * criterion_lhs(4, q) ==
        doctest::Approx(std::pow(0.9, 4) + std::pow(0.82, 4)).epsilon(1e-12));
  CHECK(criterion_lhs(4, q) * criterion_lhs(4, q) ==
        doctest::Approx(1.108).epsilon(1e-3));
  CHECK(criterion_lhs(5, q) * criterion_lhs(5, q) ==
        doctest::Approx(0.961).epsilon(1e-3));
  const PersistencyResult r = persistency(q);
  CHECK(r.bounded);
  CHECK(r.P == 4);
}

TEST_CASE("phase channel is unbounded at zero margin, finite with margin") {
  PersistencyQuery q = make_query(Scenario::ChannelPh);
  q.gamma = 0.3;
  const PersistencyResult r = persistency(q);
  CHECK_FALSE(r.bounded);
  CHECK(r.P == q.n_cap);
  CHECK_FALSE(r.n_real.has_value());

  q.margin = 0.02;
  const PersistencyResult rm = persistency(q);
  CHECK(rm.bounded);
  CHECK(rm.P == 8);  // 1 + 0.7^n > 1.02^2 up to n = 8
}

TEST_CASE("all-ideal queries report unbounded-at-cap") {
  for (Scenario s : {Scenario::MeasurementOnly, Scenario::EntanglementOnly,
                     Scenario::CombinedPh}) {
    const PersistencyResult r = persistency(make_query(s));
    CHECK_FALSE(r.bounded);
  }
}

TEST_CASE("trace brackets the boundary") {
  PersistencyQuery q = make_query(Scenario::EntanglementOnly);
  q.alpha = 0.92;
  q.delta = 0.88;
  const PersistencyResult r = persistency(q);
  REQUIRE(r.bounded);
  double at_p = 0.0, past_p = 0.0;
  for (const auto& [n, lhs] : r.lhs_trace) {
    if (n == r.P) at_p = lhs;
    if (n == r.P + 1) past_p = lhs;
  }
  CHECK(at_p > 1.0);
  CHECK(past_p <= 1.0);
  // full prefix for short scans
  CHECK(r.lhs_trace.size() == static_cast<std::size_t>(r.P + 1));
  CHECK(r.lhs_trace.front().first == 1);
}

TEST_CASE("floor consistency across a parameter grid") {
  for (double alpha : {0.86, 0.90, 0.94, 0.98})
    for (double delta : {0.87, 0.91, 0.95}) {
      PersistencyQuery q = make_query(Scenario::EntanglementOnly);
      q.alpha = alpha;
      q.delta = delta;
      const PersistencyResult r = persistency(q);
      if (!r.bounded || r.P == 0) continue;
      REQUIRE(r.n_real.has_value());
      if (!r.boundary_tie)
        CHECK(r.P == static_cast<long>(std::floor(*r.n_real)));
    }
}

TEST_CASE("persistency is monotone under worsening noise") {
  auto p_of = [](Scenario s, double alpha, double delta, double gamma,
                 double beta, double mu, double nu) {
    PersistencyQuery q = make_query(s);
    q.alpha = alpha;
    q.delta = delta;
    q.gamma = gamma;
    q.beta = beta;
    q.mu = mu;
    q.nu = nu;
    const PersistencyResult r = persistency(q);
    return r.bounded ? r.P : q.n_cap + 1;  // unbounded dominates
  };

  long prev = 1L << 40;
  for (double g : {0.0, 0.1, 0.2, 0.3, 0.4}) {  // gamma worsens
    const long p = p_of(Scenario::ChannelAmp, 1, 1, g, 1, 1, 1);
    CHECK(p <= prev);
    prev = p;
  }
  prev = 1L << 40;
  for (double f : {1.0, 0.95, 0.9, 0.85, 0.8}) {  // alpha worsens
    const long p = p_of(Scenario::EntanglementOnly, f, 0.95, 0, 1, 1, 1);
    CHECK(p <= prev);
    prev = p;
  }
  prev = 1L << 40;
  for (double f : {1.0, 0.95, 0.9, 0.85, 0.8}) {  // beta worsens
    const long p = p_of(Scenario::MeasurementOnly, 1, 1, 0, f, 0.95, 0.95);
    CHECK(p <= prev);
    prev = p;
  }
}

TEST_CASE("combined persistency never beats the single-noise cases") {
  PersistencyQuery combined = make_query(Scenario::CombinedPh);
  combined.alpha = 0.93;
  combined.delta = 0.94;
  combined.gamma = 0.08;
  combined.beta = 0.95;
  combined.mu = 0.96;
  combined.nu = 0.97;
  const PersistencyResult rc = persistency(combined);
  REQUIRE(rc.bounded);

  PersistencyQuery ent = make_query(Scenario::EntanglementOnly);
  ent.alpha = combined.alpha;
  ent.delta = combined.delta;
  PersistencyQuery ph = make_query(Scenario::ChannelPh);
  ph.gamma = combined.gamma;
  PersistencyQuery meas = make_query(Scenario::MeasurementOnly);
  meas.beta = combined.beta;
  meas.mu = combined.mu;
  meas.nu = combined.nu;

  for (const PersistencyQuery& single : {ent, ph, meas}) {
    const PersistencyResult rs = persistency(single);
    const long ps = rs.bounded ? rs.P : rs.P + 1;
    CHECK(rc.P <= ps);
  }
}

TEST_CASE("phase damping persists at least as long as amplitude damping") {
  for (int i = 1; i <= 19; ++i) {
    const double gamma = 0.05 * i;
    PersistencyQuery amp = make_query(Scenario::ChannelAmp);
    amp.gamma = gamma;
    PersistencyQuery ph = make_query(Scenario::ChannelPh);
    ph.gamma = gamma;
    const PersistencyResult ra = persistency(amp);
    const PersistencyResult rp = persistency(ph);
    const long pa = ra.bounded ? ra.P : ra.P + 1;
    const long pp = rp.bounded ? rp.P : rp.P + 1;
    CHECK(pp >= pa);
  }
}

TEST_CASE("comparison table: row 1 agrees, rows 2-4 recompute lower") {
  const std::vector<Table1Entry> entries = table1(table1_reference_rows());
  REQUIRE(entries.size() == 4);

  CHECK(entries[0].agree);
  CHECK(entries[0].computed.P == 4);

  CHECK_FALSE(entries[1].agree);
  CHECK(entries[1].computed.P == 4);  // printed 7

  CHECK_FALSE(entries[2].agree);
  CHECK(entries[2].computed.P == 4);  // printed 9

  CHECK_FALSE(entries[3].agree);
  CHECK(entries[3].computed.P == 3);  // printed 4

  // direct arithmetic cross-check of row 2 at its computed boundary
  const double lhs4 = std::pow(0.94 * 0.93 * 0.9, 4) + std::pow(0.93, 4);
  const double lhs5 = std::pow(0.94 * 0.93 * 0.9, 5) + std::pow(0.93, 5);
  CHECK(lhs4 > 1.0);
  CHECK(lhs5 < 1.0);

  // a noiseless row never stops detecting
  const std::vector<Table1Entry> ideal =
      table1({Table1Row{1, 1, 0, 1, 1, 1, 4}});
  REQUIRE(ideal.size() == 1);
  CHECK_FALSE(ideal[0].computed.bounded);
  CHECK_FALSE(ideal[0].agree);
}

TEST_CASE("sweep reproduces anchors and stays monotone") {
  PersistencyQuery base = make_query(Scenario::EntanglementOnly);
  const std::vector<SweepAxis> axes{{"alpha", 0.85, 1.0, 0.05},
                                    {"delta", 0.85, 1.0, 0.05}};
  const std::vector<SweepRow> rows = sweep(base, axes);
  REQUIRE(rows.size() == 16);

  long anchor = -1;
  for (const SweepRow& row : rows)
    if (std::abs(row.values[0] - 0.9) < 1e-12 &&
        std::abs(row.values[1] - 0.9) < 1e-12)
      anchor = row.result.P;
  CHECK(anchor == 4);

  // P non-decreasing along both axes
  auto p_at = [&rows](std::size_t i, std::size_t j) {
    const PersistencyResult& r = rows[4 * i + j].result;
    return r.bounded ? r.P : r.P + 1;
  };
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j + 1 < 4; ++j) {
      CHECK(p_at(i, j) <= p_at(i, j + 1));
      CHECK(p_at(j, i) <= p_at(j + 1, i));
    }

  // serial and parallel sweeps agree entry by entry
  const std::vector<SweepRow> serial = sweep(base, axes, Exec::Serial);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    CHECK(serial[k].result.P == rows[k].result.P);
    CHECK(serial[k].result.bounded == rows[k].result.bounded);
  }

  // degenerate one-point grid reduces to a single persistency call
  PersistencyQuery anchor_q = base;
  anchor_q.alpha = anchor_q.delta = 0.9;
  const std::vector<SweepRow> single =
      sweep(base, {{"alpha", 0.9, 0.9, 0.1}, {"delta", 0.9, 0.9, 0.1}});
  REQUIRE(single.size() == 1);
  CHECK(single[0].result.P == persistency(anchor_q).P);
}

TEST_CASE("oracle confirms detection at P and the criterion stops at P+1") {
  struct Case {
    Scenario s;
    double alpha, delta, gamma, beta, mu, nu;
  };
  const Case cases[] = {
      {Scenario::EntanglementOnly, 0.9, 0.9, 0.0, 1.0, 1.0, 1.0},
      {Scenario::ChannelAmp, 1.0, 1.0, 0.1, 1.0, 1.0, 1.0},
      {Scenario::MeasurementOnly, 1.0, 1.0, 0.0, 0.85, 0.85, 0.85},
      {Scenario::CombinedPh, 1.0, 1.0, 0.1, 0.92, 0.94, 0.93},
      {Scenario::CombinedAmp, 0.95, 0.95, 0.1, 1.0, 1.0, 1.0},
  };
  for (const Case& c : cases) {
    PersistencyQuery q = make_query(c.s);
    q.alpha = c.alpha;
    q.delta = c.delta;
    q.gamma = c.gamma;
    q.beta = c.beta;
    q.mu = c.mu;
    q.nu = c.nu;
    const PersistencyResult r = persistency(q);
    REQUIRE(r.bounded);
    REQUIRE(r.P >= 2);
    REQUIRE(r.P <= 4);

    const NetworkSpec at_p = q.network(r.P);
    const MaximizeResult best = maximize_S(at_p);
    NetworkSpec oracle_spec = at_p;
    oracle_spec.m0 = best.m0;
    oracle_spec.m1 = best.m1;
    oracle_spec.n0 = best.n0;
    oracle_spec.n1 = best.n1;
    const IJ full = compute_IJ_full(oracle_spec);
    CHECK(full.S() > 1.0);
    CHECK(full.S() == doctest::Approx(criterion_lhs(r.P, q)).epsilon(1e-6));
    CHECK_FALSE(criterion_detects(r.P + 1, q));
  }
}

TEST_CASE("query validation rejects inconsistent scenarios") {
  PersistencyQuery q = make_query(Scenario::MeasurementOnly);
  q.alpha = 0.9;
  CHECK_THROWS_AS(q.validate(), validation_error);

  PersistencyQuery ch = make_query(Scenario::ChannelPh);
  ch.beta = 0.8;
  CHECK_THROWS_AS(ch.validate(), validation_error);

  PersistencyQuery neg = make_query(Scenario::EntanglementOnly);
  neg.margin = -0.1;
  CHECK_THROWS_AS(neg.validate(), validation_error);

  PersistencyQuery cap = make_query(Scenario::EntanglementOnly);
  cap.n_cap = 1;
  CHECK_THROWS_AS(cap.validate(), validation_error);

  PersistencyQuery range = make_query(Scenario::CombinedPh);
  range.gamma = 1.2;
  CHECK_THROWS_AS(range.validate(), validation_error);

  CHECK_THROWS_AS(scenario_from_string("bogus"), validation_error);
  CHECK(scenario_from_string("combined-ph") == Scenario::CombinedPh);
}
