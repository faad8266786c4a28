#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <random>

#include <doctest.h>

#include "ergoflow/thermomaj.hpp"
#include "helpers.hpp"

using namespace ergoflow;

namespace {

// The six non-trivial extremal states reachable from the d=3 cold Gibbs
// state (closed forms; indices 4 vs 5/6 split at the crossover temperature
// where e^{-b*w1} + e^{-b*w2} = 1).
std::vector<std::vector<double>> qutrit_closed_forms(double w1, double w2, double bh, double bc) {
  const double h10 = std::exp(-bh * w1), h20 = std::exp(-bh * w2);
  const double h21 = std::exp(-bh * (w2 - w1)), h01 = std::exp(bh * w1);
  const double c10 = std::exp(-bc * w1), c20 = std::exp(-bc * w2);
  const double zc = 1.0 + c10 + c20;
  std::vector<std::vector<double>> states = {
      {(1.0 - h10 + c10) / zc, h10 / zc, c20 / zc},
      {1.0 / zc, ((1.0 - h21) * c10 + c20) / zc, h21 * c10 / zc},
      {(1.0 - h20 + h21 * c10) / zc, ((1.0 - h21) * c10 + c20) / zc, h20 / zc},
  };
  if (h10 + h20 <= 1.0) {
    states.push_back({(1.0 + c10 + c20 - h10 - h20) / zc, h10 / zc, h20 / zc});
  } else {
    states.push_back({((h01 - h21) * c10 + c20) / zc, h10 / zc,
                      ((1.0 - h10) + (1.0 - h01 + h21) * c10) / zc});
    states.push_back({(c10 * (h01 - h21) + c20) / zc,
                      (1.0 - h20 + c10 * (1.0 - h01 + h21)) / zc, h20 / zc});
  }
  return states;
}

double linf(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

bool set_contains(const std::vector<DiagonalState>& states, const std::vector<double>& probs,
                  double tol) {
  for (const DiagonalState& s : states) {
    if (linf(s.probs(), probs) <= tol) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("beta order: gibbs ties, excited mass, labels") {
  const Spectrum s = Spectrum::qutrit(1.0, 2.0);
  const InverseTemperature bh(0.4), bc(1.5);

  CHECK(beta_order(gibbs_state(s, bh), bh) == BetaOrder::identity(3));
  // cold Gibbs judged at the hotter temperature keeps the (123) order
  CHECK(beta_order(gibbs_state(s, bc), bh) == BetaOrder::identity(3));

  const DiagonalState excited(Spectrum::qubit(0.8), {0.0, 1.0});
  CHECK(beta_order(excited, bh).perm == std::vector<std::size_t>{1, 0});
  CHECK(beta_order(excited, bh).label() == "(21)");
  CHECK(BetaOrder::descending(3).label() == "(321)");
  CHECK(BetaOrder::identity(10).label() == "(1,2,3,4,5,6,7,8,9,10)");
}

TEST_CASE("curve: hand-constructed elbows and the gibbs diagonal") {
  const double omega = 1.3, beta = 0.9;
  const Spectrum s = Spectrum::qubit(omega);
  const ThermoCurve ground = curve(DiagonalState(s, {1.0, 0.0}), InverseTemperature(beta));
  REQUIRE(ground.elbow_count() == 3);
  CHECK(ground.elbow_x(0) == 0.0);
  CHECK(ground.elbow_y(0) == 0.0);
  CHECK(ground.elbow_x(1) == doctest::Approx(1.0));
  CHECK(ground.elbow_y(1) == doctest::Approx(1.0));
  CHECK(ground.elbow_x(2) == doctest::Approx(1.0 + std::exp(-beta * omega)));
  CHECK(ground.elbow_y(2) == doctest::Approx(1.0));

  const Spectrum q = Spectrum::qutrit(0.7, 1.9);
  const InverseTemperature b(1.1);
  const ThermoCurve diag = curve(gibbs_state(q, b), b);
  const double zs = diag.total_x();
  for (double t : {0.12, 0.5, 0.83}) {
    CHECK(diag.evaluate(t * zs) == doctest::Approx(t).epsilon(1e-12));
  }
}

TEST_CASE("curves are concave for random states") {
  auto rng = testutil::make_rng(31);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t d = 2 + trial % 5;
    const DiagonalState state = testutil::random_state(rng, d);
    const ThermoCurve c = curve(state, InverseTemperature(0.2 + 0.25 * (trial % 9)));
    double prev_slope = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < c.elbow_count(); ++k) {
      const double slope = (c.elbow_y(k) - c.elbow_y(k - 1)) / (c.elbow_x(k) - c.elbow_x(k - 1));
      CHECK(slope <= prev_slope * (1.0 + 1e-12) + 1e-12);
      prev_slope = slope;
    }
  }
}

TEST_CASE("thermomajorization: reflexive, dominates gibbs, incomparable pairs") {
  auto rng = testutil::make_rng(32);
  const Spectrum s = Spectrum::qutrit(1.0, 2.0);
  const InverseTemperature beta(0.8);
  const DiagonalState gibbs = gibbs_state(s, beta);

  int incomparable = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const DiagonalState p(s, testutil::random_simplex(rng, 3));
    const DiagonalState q(s, testutil::random_simplex(rng, 3));
    CHECK(thermomajorizes(p, p, beta));
    CHECK(thermomajorizes(p, gibbs, beta));
    if (!thermomajorizes(p, q, beta) && !thermomajorizes(q, p, beta)) ++incomparable;
  }
  CHECK(incomparable > 0);  // crossing curves exist and are detected both ways
}

TEST_CASE("thermomajorization is transitive along extremal chains") {
  auto rng = testutil::make_rng(33);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t d = 2 + trial % 3;
    const DiagonalState p = testutil::random_state(rng, d);
    const InverseTemperature beta(0.3 + 0.2 * (trial % 7));
    const std::vector<DiagonalState> first = enumerate_extremal_states(p, beta);
    const DiagonalState& q = first[trial % first.size()];
    const std::vector<DiagonalState> second = enumerate_extremal_states(q, beta);
    const DiagonalState& r = second[(trial / 3) % second.size()];
    REQUIRE(thermomajorizes(p, q, beta));
    REQUIRE(thermomajorizes(q, r, beta));
    CHECK(thermomajorizes(p, r, beta));
  }
}

TEST_CASE("tight extremal state: fixed point, qubit and qutrit closed forms") {
  const InverseTemperature bh(0.5), bc(2.0);

  auto rng = testutil::make_rng(34);
  for (int trial = 0; trial < 100; ++trial) {
    const DiagonalState p = testutil::random_state(rng, 2 + trial % 4);
    const BetaOrder own = beta_order(p, bh);
    CHECK(linf(tight_extremal_state(p, bh, own).probs(), p.probs()) < 1e-12);
  }

  const double omega = 1.2;
  const double qh = std::exp(-bh.value() * omega), qc = std::exp(-bc.value() * omega);
  const DiagonalState cold2 = gibbs_state(Spectrum::qubit(omega), bc);
  const DiagonalState flip = tight_extremal_state(cold2, bh, BetaOrder::descending(2));
  CHECK(flip.prob(0) == doctest::Approx((1.0 + qc - qh) / (1.0 + qc)).epsilon(1e-13));
  CHECK(flip.prob(1) == doctest::Approx(qh / (1.0 + qc)).epsilon(1e-13));

  const double w1 = 1.0, w2 = 2.3;
  const DiagonalState cold3 = gibbs_state(Spectrum::qutrit(w1, w2), bc);
  const DiagonalState rho1 = tight_extremal_state(cold3, bh, BetaOrder{{1, 0, 2}});
  const auto expected = qutrit_closed_forms(w1, w2, bh.value(), bc.value());
  CHECK(linf(rho1.probs(), expected[0]) < 1e-13);
}

TEST_CASE("enumeration: counts, membership, ordering, cap") {
  const InverseTemperature bh(0.6), bc(2.5);

  const DiagonalState cold2 = gibbs_state(Spectrum::qubit(1.0), bc);
  const std::vector<DiagonalState> two = enumerate_extremal_states(cold2, bh);
  CHECK(two.size() == 2);
  CHECK(set_contains(two, cold2.probs(), 1e-12));

  // a state already at the bath temperature cannot move
  const DiagonalState hot = gibbs_state(Spectrum::qutrit(1.0, 2.0), bh);
  CHECK(enumerate_extremal_states(hot, bh).size() == 1);

  auto rng = testutil::make_rng(35);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t d = 2 + trial % 4;
    const DiagonalState p = testutil::random_state(rng, d);
    const InverseTemperature beta(0.2 + 0.3 * (trial % 8));
    const std::vector<DiagonalState> states = enumerate_extremal_states(p, beta);
    CHECK(set_contains(states, p.probs(), 1e-12));
    for (std::size_t k = 1; k < states.size(); ++k) {
      CHECK(states[k - 1].probs() <= states[k].probs());  // lexicographic order
    }
    for (const DiagonalState& q : states) CHECK(thermomajorizes(p, q, beta));
  }

  EnumerationOptions capped;
  capped.max_dim = 3;
  bool threw = false;
  try {
    enumerate_extremal_states(testutil::random_state(rng, 4), bh, capped);
  } catch (const std::invalid_argument& e) {
    threw = true;
    CHECK(std::string(e.what()).find("--max-dim") != std::string::npos);
  }
  CHECK(threw);
}

TEST_CASE("enumeration cap default follows the environment override") {
  const std::size_t base = default_dimension_cap();
  CHECK(base == 9);
  setenv("ERGOFLOW_MAX_DIM", "11", 1);
  CHECK(default_dimension_cap() == 11);
  unsetenv("ERGOFLOW_MAX_DIM");
  CHECK(default_dimension_cap() == 9);
}

TEST_CASE("qutrit enumeration matches the closed forms on both branches") {
  auto rng = testutil::make_rng(36);
  std::uniform_real_distribution<double> omega_dist(0.05, 5.0);
  std::uniform_real_distribution<double> beta_dist(0.01, 3.0);
  int low_branch = 0, high_branch = 0;
  for (int trial = 0; trial < 100; ++trial) {
    double w1 = omega_dist(rng), w2 = omega_dist(rng);
    if (w1 > w2) std::swap(w1, w2);
    if (w2 - w1 < 1e-3) w2 += 1e-2;
    double bh = beta_dist(rng), bc = beta_dist(rng);
    if (bh > bc) std::swap(bh, bc);
    if (bc - bh < 1e-3) bc += 1e-2;

    const Spectrum s = Spectrum::qutrit(w1, w2);
    const DiagonalState cold = gibbs_state(s, InverseTemperature(bc));
    const InverseTemperature hot(bh);
    const std::vector<DiagonalState> states = enumerate_extremal_states(cold, hot);
    const auto expected = qutrit_closed_forms(w1, w2, bh, bc);
    const bool below = std::exp(-bh * w1) + std::exp(-bh * w2) > 1.0;
    (below ? low_branch : high_branch) += 1;

    CHECK(states.size() == expected.size() + 1);
    CHECK(set_contains(states, cold.probs(), 1e-9));
    for (const auto& probs : expected) CHECK(set_contains(states, probs, 1e-9));
  }
  CHECK(low_branch > 10);
  CHECK(high_branch > 10);
}

TEST_CASE("max energy state: gibbs fixed point, two-level ground, dominance") {
  const InverseTemperature beta(0.7);
  const DiagonalState hot = gibbs_state(Spectrum::qutrit(1.0, 2.0), beta);
  CHECK(linf(max_energy_state(hot, beta).probs(), hot.probs()) < 1e-12);

  const double omega = 1.4;
  const double q = std::exp(-beta.value() * omega);
  const DiagonalState ground(Spectrum::qubit(omega), {1.0, 0.0});
  const DiagonalState top = max_energy_state(ground, beta);
  CHECK(top.prob(0) == doctest::Approx(1.0 - q).epsilon(1e-13));
  CHECK(top.prob(1) == doctest::Approx(q).epsilon(1e-13));

  auto rng = testutil::make_rng(37);
  for (int trial = 0; trial < 100; ++trial) {
    const DiagonalState p = testutil::random_state(rng, 2 + trial % 4);
    const InverseTemperature b(0.2 + 0.2 * (trial % 9));
    const double top_energy = energy(max_energy_state(p, b));
    for (const DiagonalState& s : enumerate_extremal_states(p, b)) {
      CHECK(energy(s) <= top_energy + 1e-10);
    }
  }
}

TEST_CASE("maximal-energy state is the optimum below the crossover (d=3)") {
  // below the crossover temperature the (321)-ordered extremal state wins
  const double w1 = 1.0, w2 = 2.0;
  const InverseTemperature bh(0.2), bc(1.0);  // e^{-0.2} + e^{-0.4} > 1
  const DiagonalState cold = gibbs_state(Spectrum::qutrit(w1, w2), bc);
  const auto expected = qutrit_closed_forms(w1, w2, bh.value(), bc.value());
  REQUIRE(expected.size() == 5);  // rho1..rho3, rho5, rho6
  CHECK(linf(max_energy_state(cold, bh).probs(), expected.back()) < 1e-12);
}

TEST_CASE("thermal process matrices: invariants and application") {
  const Spectrum s = Spectrum::qutrit(1.0, 2.0);
  const InverseTemperature beta(0.5);
  const DiagonalState gibbs = gibbs_state(s, beta);

  const ThermalProcessMatrix identity({1, 0, 0, 0, 1, 0, 0, 0, 1}, s, beta);
  const DiagonalState p(s, {0.5, 0.3, 0.2});
  CHECK(linf(identity.apply(p).probs(), p.probs()) == 0.0);

  CHECK_THROWS(ThermalProcessMatrix({0.5, 0, 0, 0.5, 1, 0, 0, 0, 1}, s, beta));  // not Gibbs-fixed
  CHECK_THROWS(ThermalProcessMatrix({2, 0, 0, -1, 1, 0, 0, 0, 1}, s, beta));     // negative entry

  for (QutritProcess which : {QutritProcess::A1, QutritProcess::A2, QutritProcess::A5,
                              QutritProcess::A9}) {
    const ThermalProcessMatrix a = qutrit_process_matrix(which, s, beta);
    for (std::size_t col = 0; col < 3; ++col) {
      double sum = 0.0;
      for (std::size_t row = 0; row < 3; ++row) sum += a.entry(row, col);
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
    }
    CHECK(linf(a.apply(gibbs).probs(), gibbs.probs()) < 1e-12);
  }
}

TEST_CASE("qutrit processes reproduce the closed-form extremal states") {
  const double w1 = 1.0, w2 = 2.3;
  const Spectrum s = Spectrum::qutrit(w1, w2);
  const InverseTemperature bc(2.0);
  const DiagonalState cold = gibbs_state(s, bc);

  // above the crossover: A1, A2, A5, A9 give rho1..rho4
  const InverseTemperature high(1.0);
  REQUIRE(std::exp(-w1) + std::exp(-w2) < 1.0);
  const auto upper = qutrit_closed_forms(w1, w2, 1.0, 2.0);
  REQUIRE(upper.size() == 4);
  const QutritProcess uppers[4] = {QutritProcess::A1, QutritProcess::A2, QutritProcess::A5,
                                   QutritProcess::A9};
  for (int i = 0; i < 4; ++i) {
    const DiagonalState mapped = qutrit_process_matrix(uppers[i], s, high).apply(cold);
    CHECK(linf(mapped.probs(), upper[i]) < 1e-12);
  }
  CHECK_THROWS_AS(qutrit_process_matrix(QutritProcess::A12, s, high), std::domain_error);
  CHECK_THROWS_AS(qutrit_process_matrix(QutritProcess::A13, s, high), std::domain_error);

  // below the crossover: A12, A13 give rho5, rho6 (and A9's entries go negative)
  const InverseTemperature low(0.2);
  const auto lower = qutrit_closed_forms(w1, w2, 0.2, 2.0);
  REQUIRE(lower.size() == 5);
  CHECK(linf(qutrit_process_matrix(QutritProcess::A12, s, low).apply(cold).probs(), lower[3]) <
        1e-12);
  CHECK(linf(qutrit_process_matrix(QutritProcess::A13, s, low).apply(cold).probs(), lower[4]) <
        1e-12);
  CHECK_THROWS(qutrit_process_matrix(QutritProcess::A9, s, low));
}

TEST_CASE("random gibbs-preserving maps stay inside the extremal hull") {
  auto rng = testutil::make_rng(38);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> dims(2, 4);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t d = dims(rng);
    const Spectrum s = testutil::random_spectrum(rng, d);
    const InverseTemperature beta(0.2 + 0.4 * unit(rng));
    const DiagonalState gibbs = gibbs_state(s, beta);
    DiagonalState p(s, testutil::random_simplex(rng, d));
    const std::vector<DiagonalState> hull_states = enumerate_extremal_states(p, beta);

    // compose random two-level partial swaps, each of which fixes Gibbs
    DiagonalState mapped = p;
    for (int step = 0; step < 6; ++step) {
      std::size_t i = dims(rng) % d, j = dims(rng) % d;
      if (i == j) continue;
      if (i > j) std::swap(i, j);
      const double q = gibbs.prob(j) / gibbs.prob(i);
      const double lam = unit(rng);
      std::vector<double> probs = mapped.probs();
      const double pi = probs[i], pj = probs[j];
      probs[i] = (1.0 - lam * q) * pi + lam * pj;
      probs[j] = lam * q * pi + (1.0 - lam) * pj;
      mapped = DiagonalState(s, std::move(probs));
    }

    std::vector<std::vector<double>> vertices;
    for (const DiagonalState& v : hull_states) vertices.push_back(v.probs());
    CHECK(testutil::in_convex_hull(vertices, mapped.probs(), 1e-8));
  }
}
