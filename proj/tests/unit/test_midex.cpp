#include <doctest.h>

#include <cmath>
#include <numeric>

#include "midex/errors.hpp"
#include "midex/midex.hpp"
#include "oracle.hpp"

using namespace midex;

namespace {

MidexState state_with_q(std::vector<double> q) {
  MidexState s = MidexState::initial(static_cast<int>(q.size()));
  s.q = q;
  s.q_tilde = q;
  return s;
}

}  // namespace

TEST_CASE("m' values") {
  CHECK(m_prime(2) == doctest::Approx(2.3360874398765494825).epsilon(1e-15));
  CHECK(m_prime(3) == doctest::Approx(2.5005207790911609752).epsilon(1e-15));
  CHECK(m_prime(4) == doctest::Approx(2.6046240931594460444).epsilon(1e-15));
  CHECK(m_prime(5) == doctest::Approx(2.6762943485964353295).epsilon(1e-15));
  CHECK_THROWS_AS(m_prime(1), BadM);

  double prev = m_prime(2);
  for (int m = 3; m <= 10000; ++m) {
    const double v = m_prime(m);
    CHECK(v > prev);
    CHECK(v < 3.0618621784789726227);
    CHECK(std::abs(v - oracle::m_prime(m)) <= 1e-14);
    prev = v;
  }
  CHECK(m_prime(1000000) == doctest::Approx(3.0618621784789726227).epsilon(1e-6));
  CHECK(m_prime(MSchedule(std::vector<int>{2, 5, 3})) == m_prime(5));
}

TEST_CASE("default parameters") {
  SUBCASE("K=10, T=1e4, m=2") {
    const auto p = default_params(10, 10000, MSchedule(2));
    CHECK(p.eta == doctest::Approx(0.0015721876965582544).epsilon(1e-13));
    CHECK(p.gamma == doctest::Approx(0.15356697382045990).epsilon(1e-13));
    CHECK(p.m_prime == m_prime(2));
  }
  SUBCASE("K=10, T=1e5, m=4") {
    const auto p = default_params(10, 100000, MSchedule(4));
    CHECK(p.eta == doctest::Approx(3.1501682781371610e-4).epsilon(1e-13));
    CHECK(p.gamma == doctest::Approx(0.068740471464820064).epsilon(1e-13));
  }
  SUBCASE("gamma above one is infeasible") {
    CHECK_THROWS_AS(default_params(2, 1, MSchedule(2)), InfeasibleParams);
  }
  SUBCASE("bad input") {
    CHECK_THROWS_AS(default_params(1, 100, MSchedule(2)), ValidationError);
    CHECK_THROWS_AS(default_params(10, 0, MSchedule(2)), ValidationError);
    CHECK_THROWS_AS(default_params(10, 100, MSchedule(1)), BadM);
    CHECK_THROWS_AS(default_params(3, 100000, MSchedule(4)), BadM);
  }
  SUBCASE("explicit parameters") {
    CHECK_NOTHROW(make_params(10, 1000, MSchedule(2), 0.001, 0.5));
    CHECK_THROWS(make_params(10, 1000, MSchedule(2), 0.01, 0.01));
    CHECK_THROWS(make_params(10, 1000, MSchedule(2), -0.01, 0.5));
    CHECK_THROWS(make_params(10, 1000, MSchedule(2), 0.001, 1.5));
    CHECK(min_gamma(0.001, 10) == doctest::Approx(std::sqrt(0.015)));
  }
}

TEST_CASE("g transform") {
  CHECK(g_transform(2, true) == 1.0);
  CHECK(g_transform(2, false) == 0.0);
  CHECK(g_transform(3, true) == 1.25);
  CHECK(g_transform(3, false) == -0.25);
  CHECK(g_transform(4, true) == 1.25);
  CHECK(g_transform(4, false) == -0.25);
  CHECK(g_transform(5, true) == doctest::Approx(4.0 / 3.0).epsilon(1e-16));
  CHECK(g_transform(5, false) == doctest::Approx(-1.0 / 3.0).epsilon(1e-16));
  CHECK(g_transform(8, true) == 11.0 / 8.0);
  CHECK(g_transform(8, false) == -3.0 / 8.0);
  CHECK(g_transform(9, true) == doctest::Approx(7.0 / 5.0).epsilon(1e-16));
  CHECK(g_transform(9, false) == doctest::Approx(-2.0 / 5.0).epsilon(1e-16));
  CHECK_THROWS_AS(g_transform(1, true), BadM);

  for (int m = 2; m <= 200; ++m) {
    const double bound = (3.0 * m + 1.0) / (2.0 * m + 2.0);
    for (bool w : {true, false}) {
      CHECK(std::abs(g_transform(m, w) - oracle::g(m, w)) <= 1e-14);
      CHECK(std::abs(g_transform(m, w)) <= bound + 1e-15);
    }
    const double slope = g_transform(m, true) - g_transform(m, false);
    CHECK(slope > 0.0);
  }
}

TEST_CASE("multiset construction") {
  CHECK(build_multiset(0, 1, 2, true) == ArmMultiset({0, 1}));
  CHECK(build_multiset(0, 1, 3, true) == ArmMultiset({0, 0, 1}));
  CHECK(build_multiset(0, 1, 3, false) == ArmMultiset({0, 1, 1}));
  CHECK(build_multiset(2, 2, 4, true) == ArmMultiset({2, 2, 2, 2}));
  CHECK(build_multiset(3, 1, 5, false) == ArmMultiset({3, 3, 1, 1, 1}));
}

TEST_CASE("select draws from q") {
  const auto params = make_params(3, 1000, MSchedule(3), 0.001, 0.5);
  SUBCASE("near-point-mass q gives x = y mostly and a mixed split") {
    auto s = state_with_q({0.98, 0.01, 0.01});
    Rng rng(1);
    const int n = 100000;
    int both = 0;
    int major = 0;
    for (int i = 0; i < n; ++i) {
      const auto tr = select(s, params, rng);
      both += (tr.x == 0 && tr.y == 0);
      major += tr.x_major;
      CHECK(tr.A.m() == 3);
      CHECK(tr.q_x == s.q[tr.x]);
      CHECK(tr.q_y == s.q[tr.y]);
    }
    CHECK(std::abs(both / double(n) - 0.9604) <= oracle::three_sigma(0.9604, n));
    CHECK(std::abs(major / double(n) - 0.5) <= oracle::three_sigma(0.5, n));
  }
  SUBCASE("x and y marginals") {
    const std::vector<double> q{0.2, 0.3, 0.5};
    auto s = state_with_q(q);
    Rng rng(2);
    const int n = 200000;
    std::vector<int> cx(3, 0), cy(3, 0);
    for (int i = 0; i < n; ++i) {
      const auto tr = select(s, params, rng);
      ++cx[tr.x];
      ++cy[tr.y];
    }
    for (int i = 0; i < 3; ++i) {
      CHECK(std::abs(cx[i] / double(n) - q[i]) <= oracle::three_sigma(q[i], n));
      CHECK(std::abs(cy[i] / double(n) - q[i]) <= oracle::three_sigma(q[i], n));
    }
  }
}

TEST_CASE("estimate_scores") {
  const int K = 4;
  const auto params = make_params(K, 1000, MSchedule(2), 0.001, 0.25);
  MidexState s = MidexState::initial(K);
  RoundTrace tr;
  tr.x = 1;
  tr.y = 2;
  tr.q_x = 0.25;
  tr.q_y = 0.25;
  tr.A = build_multiset(1, 2, 2, true);
  tr = resolve_feedback(tr, 0);
  CHECK(tr.o == 1);
  CHECK(tr.g == 1.0);
  const auto sh = estimate_scores(tr, s.q, params.gamma);
  CHECK(sh.arm == 1);
  CHECK(sh.value == doctest::Approx(4.0).epsilon(1e-15));
  const auto dense = sh.to_dense(K);
  CHECK(dense == std::vector<double>{0.0, 4.0, 0.0, 0.0});

  auto lost = resolve_feedback(tr, 1);
  CHECK(lost.o == 2);
  CHECK(lost.g == 0.0);
  CHECK(estimate_scores(lost, s.q, params.gamma).value == 0.0);

  SUBCASE("x = y always counts as o = x") {
    RoundTrace same = tr;
    same.x = same.y = 3;
    same.A = build_multiset(3, 3, 4, false);
    for (std::size_t w = 0; w < 4; ++w) CHECK(resolve_feedback(same, w).o == 3);
    CHECK_THROWS_AS(resolve_feedback(same, 4), IndexOutOfRange);
  }
  SUBCASE("floor violation") {
    std::vector<double> q{0.97, 0.01, 0.01, 0.01};
    CHECK_THROWS_AS(estimate_scores(tr, q, 0.25), FloorViolation);
  }
}

TEST_CASE("update") {
  SUBCASE("zero estimate keeps uniform q") {
    const auto params = make_params(5, 1000, MSchedule(2), 0.01, 0.5);
    MidexState s = MidexState::initial(5);
    update(s, SparseScore{2, 0.0}, params);
    CHECK(s.round == 2);
    for (double v : s.q) CHECK(v == doctest::Approx(0.2).epsilon(1e-15));
  }
  SUBCASE("large exponent stays finite") {
    const int K = 10;
    const double gamma = 0.1;
    const double eta = 1e-4;
    const auto params = make_params(K, 1000, MSchedule(2), eta, std::max(gamma, min_gamma(eta, K)));
    MidexState s = MidexState::initial(K);
    update(s, SparseScore{0, 50.0 / eta}, params);
    CHECK(std::isfinite(s.q[0]));
    CHECK(s.q[0] == doctest::Approx(0.90999999999999999999844).epsilon(1e-14));
    for (int i = 1; i < K; ++i) CHECK(s.q[i] == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(std::accumulate(s.q.begin(), s.q.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("random updates keep q a distribution above the floor") {
    const int K = 7;
    const auto params = make_params(K, 1000, MSchedule(3), 0.01, 0.4);
    MidexState s = MidexState::initial(K);
    Rng rng(3);
    for (int t = 0; t < 1000; ++t) {
      update(s, SparseScore{static_cast<Arm>(rng.below(K)), rng.uniform(-5.0, 50.0)}, params);
      CHECK(std::abs(std::accumulate(s.q.begin(), s.q.end(), 0.0) - 1.0) <= 1e-12);
      for (double v : s.q) CHECK(v >= params.gamma / K * (1.0 - 1e-12));
    }
  }
}

TEST_CASE("step and learner determinism") {
  const auto params = default_params(5, 2000, MSchedule(std::vector<int>{2, 3, 4}));
  const PreferenceMatrix P = validate({{0.5, 0.7, 0.6, 0.8, 0.9},
                                       {0.3, 0.5, 0.6, 0.7, 0.4},
                                       {0.4, 0.4, 0.5, 0.5, 0.5},
                                       {0.2, 0.3, 0.5, 0.5, 0.6},
                                       {0.1, 0.6, 0.5, 0.4, 0.5}});
  auto run = [&](std::uint64_t seed) {
    MidexLearner learner(params);
    std::vector<RoundTrace> out;
    for (long long t = 1; t <= 2000; ++t) {
      Rng sel = Rng::stream(seed, t, StreamRole::Select);
      Rng env = Rng::stream(seed, t, StreamRole::Environment);
      const int m = params.m_schedule.at(t);
      const ArmMultiset A = learner.select(t, m, sel);
      CHECK(A.m() == m);
      learner.observe(sample_winner(A, P, env));
      out.push_back(learner.last_trace());
    }
    return std::make_pair(out, learner.state());
  };
  const auto [a, sa] = run(42);
  const auto [b, sb] = run(42);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].x == b[i].x);
    CHECK(a[i].y == b[i].y);
    CHECK(a[i].winner_index == b[i].winner_index);
    CHECK(a[i].shat_value == b[i].shat_value);
  }
  CHECK(sa.q == sb.q);
  CHECK(sa.round == 2001);
  // The best arm (arm 1) should end up with the largest weight.
  CHECK(std::max_element(sa.q.begin(), sa.q.end()) - sa.q.begin() == 0);

  MidexLearner learner(params);
  Rng rng(1);
  CHECK_THROWS(learner.select(2, 2, rng));
  CHECK_THROWS(learner.select(1, 3, rng));
}
