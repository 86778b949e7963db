#include "geps/landau_operator.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <random>

using namespace geps;

namespace {

constexpr double kPi = std::numbers::pi;

double landau_pair(const TestFunction& phi, const Vec3& v, const Vec3& w, double gamma) {
  const Vec3 u = v - w;
  const double un = u.norm();
  const Mat3 pi = Mat3::Identity() - u * u.transpose() / (un * un);
  const double first = -2.0 * (phi.gradient(v) - phi.gradient(w)).dot(u);
  const double second = 0.5 * un * un * ((phi.hessian(v) + phi.hessian(w)).cwiseProduct(pi)).sum();
  return std::pow(un, gamma) * (first + second);
}

// (4/(pi eps)) int dphi [phi(v') + phi(v_*') - phi(v) - phi(v_*)] on the eps-cone.
double boltzmann_pair(const TestFunction& phi, const Vec3& v, const Vec3& w, const KernelParams<double>& k) {
  const CollisionPair<double> pair{v, w};
  const auto fr = frame_of(pair.u());
  const double theta = theta_eps(k, pair.u_norm());
  const int M = 64;
  double acc = 0.0;
  for (int m = 0; m < M; ++m) {
    const auto [vp, wp] = post_collision(pair, sigma_of(fr, theta, azimuth_node<double>(m, M)));
    acc += phi.value(vp) + phi.value(wp) - phi.value(v) - phi.value(w);
  }
  return 4.0 / (kPi * k.eps) * (2 * kPi / M) * acc;
}

Distribution two_bump(const GridSpec& g) {
  const auto a = maxwellian(g, 1.0, Vec3(1, 0, 0), 0.5);
  const auto b = maxwellian(g, 1.0, Vec3(-1, 0, 0), 0.5);
  return Distribution(g, a.values() + b.values());
}

}  // namespace

TEST_CASE("projector") {
  CHECK((projector(Vec3::UnitX()) - Vec3(0, 1, 1).asDiagonal().toDenseMatrix()).norm() < 1e-15);
  CHECK_THROWS_AS(projector(Vec3::Zero()), std::invalid_argument);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  double worst_null = 0.0, worst_idem = 0.0;
  for (int t = 0; t < 1000000; ++t) {
    const Vec3 w(u(rng), u(rng), u(rng));
    if (w.norm() == 0.0) continue;
    const Mat3 P = projector(w);
    worst_null = std::max(worst_null, (P * w).norm() / w.norm());
    worst_idem = std::max(worst_idem, (P * P - P).norm());
  }
  CHECK(worst_null < 1e-14);
  CHECK(worst_idem < 1e-14);
  const Mat3 P = projector(Vec3(0.3, -1.2, 2.0));
  CHECK((P - P.transpose()).norm() == 0.0);
  CHECK(P.trace() == doctest::Approx(2.0).epsilon(1e-15));
  const Eigen::SelfAdjointEigenSolver<Mat3> es(P);
  CHECK(std::abs(es.eigenvalues()[0]) < 1e-15);
  CHECK(std::abs(es.eigenvalues()[1] - 1.0) < 1e-15);
  CHECK(std::abs(es.eigenvalues()[2] - 1.0) < 1e-15);
}

TEST_CASE("grazing limit of a single pair: the Boltzmann bracket tends to the Landau integrand") {
  // Oracle for the Landau normalization: a second-order Taylor expansion of phi around v and v_*
  // turns the eps-cone average into |u|^gamma G_L, counted once for each ordering of the pair.
  const auto phi = TestFunction::gaussian(Vec3(0.2, -0.3, 0.1), 0.9);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int t = 0; t < 20; ++t) {
    const Vec3 v(u(rng), u(rng), u(rng)), w(u(rng), u(rng), u(rng));
    const double gamma = -3.0 + 2.5 * (u(rng) + 1.5) / 3.0;
    const double target = 2.0 * landau_pair(phi, v, w, gamma);
    const double e1 = std::abs(boltzmann_pair(phi, v, w, {1e-3, gamma}) - target);
    const double e2 = std::abs(boltzmann_pair(phi, v, w, {5e-4, gamma}) - target);
    CHECK(e2 < 0.6 * e1 + 1e-9);
    CHECK(e2 <= 1e-2 * std::abs(target) + 1e-7);
  }
}

TEST_CASE("Landau weak form matches a direct ordered-pair sum") {
  const GridSpec g = GridSpec::make(8, 3.0);
  std::mt19937_64 rng(3);
  const auto f = testing::random_mixture(g, rng, 0.0);
  const auto phi = TestFunction::bump(Vec3(0.3, 0.2, -0.1), 2.5);
  for (double gamma : {-3.0, -1.7, -0.4}) {
    double ref = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
      for (std::size_t j = 0; j < g.size(); ++j)
        if (i != j) ref += f[i] * f[j] * landau_pair(phi, g.node(i), g.node(j), gamma);
    ref *= g.cell_volume() * g.cell_volume();
    const auto w = weak_form_ql(f, phi, gamma);
    CHECK(std::abs(w.value - ref) <= 1e-12 * w.magnitude);
    CHECK(std::abs(w.near_diagonal) <= w.magnitude);
  }
}

TEST_CASE("Landau weak form vanishes on collision invariants") {
  const GridSpec g = GridSpec::make(10, 3.0);
  std::mt19937_64 rng(4);
  const auto f = testing::random_mixture(g, rng, 0.0);
  for (double gamma : {-3.0, -1.0}) {
    CHECK(weak_form_ql(f, TestFunction::constant(), gamma).value == 0.0);
    for (int a = 0; a < 3; ++a) CHECK(weak_form_ql(f, TestFunction::linear(a), gamma).value == 0.0);
    const auto e = weak_form_ql(f, TestFunction::energy(), gamma);
    CHECK(e.magnitude > 0.0);
    CHECK(std::abs(e.value) <= 1e-12 * e.magnitude);
  }
  CHECK_THROWS_AS(weak_form_ql(f, TestFunction::energy(), 0.0), std::invalid_argument);
  CHECK_THROWS_AS(weak_form_ql(f, TestFunction::energy(), -3.5), std::invalid_argument);
}

TEST_CASE("grazing gap harness") {
  const GridSpec g = GridSpec::make(10, 4.0);
  const auto f = two_bump(g);
  const auto phi = TestFunction::bump(Vec3(0.3, 0.2, -0.1), 2.5);
  std::vector<KernelParams<double>> ks{{0.4, -1.0}, {0.2, -1.0}, {0.1, -1.0}};
  const auto recs = grazing_gap(f, "two_bump", phi, ks, QuadratureSpec{});
  REQUIRE(recs.size() == 3);
  for (std::size_t k = 0; k < recs.size(); ++k) {
    CHECK(recs[k].gap >= 0.0);
    CHECK(recs[k].eps == ks[k].eps);
    CHECK(recs[k].phi_id == phi.id());
    CHECK(recs[k].f_id == "two_bump");
    CHECK(recs[k].weak_landau == recs[0].weak_landau);
  }
  CHECK(recs[1].gap < recs[0].gap);
  CHECK(recs[2].gap < recs[1].gap);
  CHECK(loglog_slope(recs) > 0.4);

  const auto single = grazing_gap(f, "two_bump", phi, {{0.3, -1.0}}, QuadratureSpec{});
  CHECK(single.size() == 1);
  CHECK_THROWS_AS(loglog_slope(single), std::invalid_argument);

  const auto energy = grazing_gap(f, "two_bump", TestFunction::energy(), ks, QuadratureSpec{});
  for (const auto& r : energy) CHECK(r.gap <= 1e-10 * std::abs(weak_form_ql(f, TestFunction::energy(), -1.0).magnitude));

  CHECK_THROWS_AS(grazing_gap(f, "x", phi, {}, QuadratureSpec{}), std::invalid_argument);
  CHECK_THROWS_AS(grazing_gap(f, "x", phi, {{0.1, -1.0}, {0.1, -2.0}}, QuadratureSpec{}), std::invalid_argument);
  CHECK_THROWS_AS(grazing_gap(std::vector<Distribution>{f}, "x", phi, ks, QuadratureSpec{}), std::invalid_argument);
  const auto evolved = grazing_gap(std::vector<Distribution>{f, f, f}, "x", phi, ks, QuadratureSpec{});
  for (std::size_t k = 0; k < 3; ++k) CHECK(evolved[k].gap == recs[k].gap);
}

TEST_CASE("log-log slope fit") {
  std::vector<GrazingGapRecord> recs;
  for (double eps : {0.4, 0.2, 0.1, 0.05}) {
    GrazingGapRecord r;
    r.eps = eps;
    r.gap = 3.0 * std::pow(eps, 0.7);
    recs.push_back(r);
  }
  CHECK(loglog_slope(recs) == doctest::Approx(0.7).epsilon(1e-12));
  recs[1].gap = 0.0;  // dropped from the fit
  CHECK(loglog_slope(recs) == doctest::Approx(0.7).epsilon(1e-12));
}
