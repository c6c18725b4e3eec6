#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include "evflex/datagen/copula.hpp"
#include "evflex/datagen/generate.hpp"
#include "evflex/datagen/rng.hpp"
#include "evflex/datagen/student_t.hpp"
#include "evflex/model/validate.hpp"

using namespace evflex;
using namespace evflex::datagen;

namespace {

// tau-b from tie-group sizes: (C - D) / sqrt((n0 - n1)(n0 - n2)).
double tau_oracle(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double s = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) {
      const double a = (x[i] > x[j]) - (x[i] < x[j]);
      const double b = (y[i] > y[j]) - (y[i] < y[j]);
      s += a * b;
    }
  auto ties = [](const std::vector<double>& v) {
    std::map<double, double> c;
    for (double e : v) c[e] += 1;
    double t = 0;
    for (auto& [k, m] : c) t += m * (m - 1) / 2;
    return t;
  };
  const double n0 = n * (n - 1) / 2.0;
  return s / std::sqrt((n0 - ties(x)) * (n0 - ties(y)));
}

CopulaModel ground_truth(double r01, double r12, double r02, int nu) {
  CopulaModel m;
  m.correlation << 1, r01, r02, r01, 1, r12, r02, r12, 1;
  m.nu = nu;
  std::vector<double> a, d, e;
  for (int i = 0; i <= 200; ++i) {
    const double u = i / 200.0;
    a.push_back(6 + 6 * std::pow(u, 1.5));
    d.push_back(2 + 9 * u);
    e.push_back(3 + 57 * std::pow(u, 2.65));
  }
  m.marginals = {EcdfMarginal(a), EcdfMarginal(d), EcdfMarginal(e)};
  return m;
}

std::vector<SessionRecord> to_records(const std::vector<CopulaDraw>& draws) {
  const auto day = parse_timestamp("2021-06-01T00:00");
  std::vector<SessionRecord> out;
  for (const auto& d : draws) {
    SessionRecord r;
    r.arrival = day + std::chrono::seconds(std::llround(d.arrival_hour * 3600));
    r.departure = day + std::chrono::seconds(std::llround(d.departure_hour * 3600));
    r.energy_kwh = d.energy_kwh;
    out.push_back(r);
  }
  return out;
}

}  // namespace

TEST_CASE("philox known-answer vectors") {
  using A4 = std::array<std::uint32_t, 4>;
  CHECK(philox4x32_10({0, 0, 0, 0}, {0, 0}) == A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
        A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        A4{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("counter streams are reproducible and independent of each other") {
  CounterRng a(42, stream_id("gamma", 3)), b(42, stream_id("gamma", 3)), c(42, stream_id("gamma", 4));
  int same = 0;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
    same += x == c.next_u64();
  }
  CHECK(same == 0);
  CHECK(stream_id("gamma", 0) != stream_id("utility", 0));

  CounterRng u(7, 1);
  double sum = 0, sum2 = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double g = u.normal();
    sum += g;
    sum2 += g * g;
  }
  CHECK(std::abs(sum / n) < 0.01);
  CHECK(std::abs(sum2 / n - 1.0) < 0.02);
  CounterRng v(7, 2);
  double m = 0;
  for (int i = 0; i < n; ++i) {
    const double x = v.uniform();
    CHECK((x >= 0.0 && x < 1.0));
    m += x;
  }
  CHECK(std::abs(m / n - 0.5) < 0.005);
}

TEST_CASE("student t cdf") {
  CHECK(student_t_cdf(0.0, 3.7) == 0.5);
  CHECK(std::abs(student_t_cdf(1e8, 5) - 1.0) <= 1e-10);
  CHECK(std::abs(student_t_cdf(1.0, 1) - (std::atan(1.0) / std::numbers::pi + 0.5)) <= 1e-10);
  for (double nu : {0.5, 1.0, 2.0, 3.0, 4.5, 6.0, 10.0, 30.0, 200.0}) {
    boost::math::students_t dist(nu);
    for (double x = -40; x <= 40; x += 0.37) {
      CHECK(std::abs(student_t_cdf(x, nu) - boost::math::cdf(dist, x)) <= 1e-10);
    }
  }
}

TEST_CASE("incomplete beta against an independent implementation") {
  for (double a : {0.5, 1.0, 2.5, 7.0})
    for (double b : {0.5, 3.0, 15.0})
      for (double x = 0.01; x < 1.0; x += 0.049) CHECK(std::abs(incomplete_beta(a, b, x) - boost::math::ibeta(a, b, x)) <= 1e-12);
}

TEST_CASE("student t quantile inverts the cdf") {
  for (int nu = 1; nu <= 30; nu += 3) {
    for (double p : {1e-6, 0.001, 0.1, 0.37, 0.5, 0.8, 0.999, 1 - 1e-6}) {
      const double q = student_t_quantile(p, nu);
      CHECK(student_t_cdf(q, nu) == doctest::Approx(p).epsilon(1e-10));
      boost::math::students_t dist(nu);
      CHECK(q == doctest::Approx(boost::math::quantile(dist, p)).epsilon(1e-8));
    }
  }
}

TEST_CASE("kendall tau") {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> small(0, 5);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> x, y;
    for (int i = 0; i < 80; ++i) {
      x.push_back(trial % 2 ? small(rng) : g(rng));
      y.push_back(x.back() + (trial % 3 ? small(rng) : g(rng)));
    }
    CHECK(kendall_tau(x, y) == doctest::Approx(tau_oracle(x, y)).epsilon(1e-12));
  }
  CHECK(kendall_tau({1, 2, 3}, {1, 2, 3}) == 1.0);
  CHECK(kendall_tau({1, 2, 3}, {3, 2, 1}) == -1.0);
}

TEST_CASE("ecdf marginal") {
  EcdfMarginal m({3, 1, 2, 5});
  CHECK(m.inverse(0) == 1);
  CHECK(m.inverse(1) == 5);
  CHECK(m.inverse(0.5) == doctest::Approx(2.5));
  for (double u = 0; u <= 1.0; u += 0.01) CHECK(m.cdf(m.inverse(u)) == doctest::Approx(u).epsilon(1e-12));
  CHECK_THROWS_AS(EcdfMarginal({2, 2, 2}), std::invalid_argument);
}

TEST_CASE("fit refuses bad inputs") {
  auto truth = ground_truth(-0.3, 0.5, 0.1, 6);
  auto recs = to_records(sample_copula(truth, 49, 1));
  CHECK_THROWS_WITH_AS(fit_copula(recs), doctest::Contains("at least 50"), FitError);
  recs = to_records(sample_copula(truth, 100, 1));
  auto flat = recs;
  for (auto& r : flat) r.energy_kwh = 10;
  CHECK_THROWS_WITH_AS(fit_copula(flat), doctest::Contains("energy"), FitError);
  auto back = recs;
  back[7].departure = back[7].arrival;
  CHECK_THROWS_WITH_AS(fit_copula(back), doctest::Contains("record 7"), FitError);
}

TEST_CASE("independent columns give a near-identity correlation") {
  CopulaModel indep = ground_truth(0, 0, 0, 30);
  auto recs = to_records(sample_copula(indep, 1000, 5));
  auto fit = fit_copula(recs);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j) CHECK(std::abs(fit.correlation(i, j)) <= 0.1);
}

TEST_CASE("comonotone columns need the projection") {
  auto day = parse_timestamp("2021-06-01T00:00");
  std::vector<SessionRecord> recs;
  for (int i = 0; i < 100; ++i) {
    // arrival and duration rise together, energy too
    recs.push_back({day + std::chrono::minutes(300 + 3 * i), day + std::chrono::minutes(300 + 3 * i + 60 + 5 * i),
                    5.0 + i});
  }
  auto fit = fit_copula(recs);
  CHECK(fit.kendall_tau(0, 1) == doctest::Approx(1.0));
  CHECK(fit.projected);
  CHECK(fit.correlation(0, 1) > 0.99);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(fit.correlation);
  CHECK(es.eigenvalues().minCoeff() > 0);
  CHECK(fit.correlation.diagonal().isOnes(1e-12));
}

TEST_CASE("fit recovers a known copula") {
  auto truth = ground_truth(-0.3, 0.5, 0.1, 6);
  auto fit = fit_copula(to_records(sample_copula(truth, 3000, 11)));
  CHECK(std::abs(fit.correlation(0, 1) + 0.3) < 0.06);
  CHECK(std::abs(fit.correlation(1, 2) - 0.5) < 0.06);
  CHECK(std::abs(fit.correlation(0, 2) - 0.1) < 0.06);
  CHECK(fit.nu >= 3);
  CHECK(fit.nu <= 12);
  CHECK_FALSE(fit.projected);
}

TEST_CASE("sampling is deterministic and respects the marginals") {
  auto truth = ground_truth(-0.3, 0.5, 0.1, 6);
  auto a = sample_copula(truth, 500, 99);
  auto b = sample_copula(truth, 500, 99);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].arrival_hour == b[i].arrival_hour);
    CHECK(a[i].energy_kwh == b[i].energy_kwh);
    CHECK(a[i].departure_hour > a[i].arrival_hour);
    CHECK(a[i].energy_kwh >= truth.marginals[2].min());
    CHECK(a[i].energy_kwh <= truth.marginals[2].max());
  }
}

TEST_CASE("sampled dependence matches the model") {
  auto truth = ground_truth(-0.3, 0.5, 0.1, 6);
  auto draws = sample_copula(truth, 4000, 3);
  std::array<std::vector<double>, 3> cols;
  for (const auto& d : draws) {
    cols[0].push_back(d.arrival_hour);
    cols[1].push_back(d.departure_hour - d.arrival_hour);
    cols[2].push_back(d.energy_kwh);
  }
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      const double implied = 2.0 / std::numbers::pi * std::asin(truth.correlation(i, j));
      CHECK(std::abs(kendall_tau(cols[i], cols[j]) - implied) <= 0.05);
    }
  for (int j = 0; j < 3; ++j)
    CHECK(ks_statistic(cols[j], [&](double x) { return truth.marginals[j].cdf(x); }) <= 0.05);
}

TEST_CASE("ks statistic") {
  // Perfectly spread sample against the uniform cdf: D = 1/(2n).
  std::vector<double> s;
  for (int i = 0; i < 10; ++i) s.push_back((i + 0.5) / 10);
  CHECK(ks_statistic(s, [](double x) { return x; }) == doctest::Approx(0.05));
}

TEST_CASE("random utility curves") {
  CounterRng rng(1, 1);
  double sum_top = 0;
  const int draws = 2000;
  for (int i = 0; i < draws; ++i) {
    const double e = 1 + 60 * rng.uniform();
    const double gamma = rng.uniform();
    auto c = random_utility(e, 0.30, gamma, 4, rng);
    CHECK(c.segments() == 4);
    CHECK(c.domain_end() == e);
    CHECK(check_cap(c, 0.30, gamma * e));
    for (int k = 1; k <= 4; ++k) CHECK(c.breakpoint(k) - c.breakpoint(k - 1) >= e * 1e-3 * (1 - 1e-12));
    if (gamma > 0) sum_top += c.max_value() / (0.30 * gamma * e);
  }
  // Largest of 8 uniforms has mean 8/9.
  CHECK(std::abs(sum_top / draws - 8.0 / 9.0) < 0.012);

  auto one = random_utility(10, 0.3, 0.5, 1, rng);
  CHECK(one.segments() == 1);
  CHECK(one.upper(0) == 0.0);
  CHECK(one.max_value() <= 1.5);
}

TEST_CASE("session generation") {
  auto truth = ground_truth(-0.3, 0.5, 0.1, 6);
  GenPolicy p;
  p.count = 150;
  p.grid = {0.25, 96, parse_timestamp("2021-06-01T00:00")};
  auto a = generate_sessions(truth, p, 5);
  auto b = generate_sessions(truth, p, 5);
  REQUIRE(a.sessions.size() == 150);
  CHECK(a.sessions == b.sessions);
  auto inst = make_instance(p, a.sessions);
  CHECK(validate(inst).ok());
  for (const auto& s : a.sessions) {
    CHECK(s.max_power_kw == 22);
    CHECK(s.efficiency == 0.92);
    CHECK(s.gamma >= 0.5);
    CHECK(s.gamma <= 1.0);
    CHECK(s.required_energy_kwh <= s.efficiency * s.max_power_kw * 0.25 * s.window_length() + 1e-12);
  }

  p.gamma_low = p.gamma_high = 1.0;
  for (const auto& s : generate_sessions(truth, p, 6).sessions) CHECK(s.price_eur_per_kwh == std::vector<double>{0.35});
  p.gamma_low = 0.5;
  p.gamma_high = 0.98;
  for (const auto& s : generate_sessions(truth, p, 6).sessions) CHECK(s.price_eur_per_kwh == std::vector<double>{0.30});

  // A short grid drops late departures.
  p.grid.num_slots = 56;
  auto short_day = generate_sessions(truth, p, 6);
  CHECK(short_day.skipped > 0);
  CHECK(validate(make_instance(p, short_day.sessions)).ok());
}

TEST_CASE("policy documents") {
  auto p = policy_from_json(nlohmann::json::parse(R"({"count": 10, "gamma": {"low": 0.6, "high": 0.9}, "kappa": 3})"));
  CHECK(p.count == 10);
  CHECK(p.gamma_low == 0.6);
  CHECK(p.kappa == 3);
  CHECK(p.max_power_kw == 22);
  auto round = policy_from_json(policy_to_json(p));
  CHECK(round.gamma_high == 0.9);
  CHECK_THROWS_WITH_AS(policy_from_json(nlohmann::json::parse(R"({"colour": 1})")), doctest::Contains("policy.colour"),
                       std::invalid_argument);
  CHECK_THROWS_AS(policy_from_json(nlohmann::json::parse(R"({"gamma": {"low": 0.9, "high": 0.1}})")),
                  std::invalid_argument);
}

TEST_CASE("records csv round trip") {
  auto truth = ground_truth(-0.3, 0.5, 0.1, 6);
  auto recs = to_records(sample_copula(truth, 20, 1));
  for (auto& r : recs) r.energy_kwh = std::round(r.energy_kwh * 1000) / 1000;
  std::stringstream s;
  write_records_csv(recs, s);
  CHECK(read_records_csv(s) == recs);
  std::stringstream bad("arrival_iso8601,departure_iso8601,energy_kwh\n2021-06-01T08:00,2021-06-01T09:00,abc\n");
  CHECK_THROWS_WITH(read_records_csv(bad), doctest::Contains("line 2"));
}
