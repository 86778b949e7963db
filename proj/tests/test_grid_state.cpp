#include "geps/grid_state.hpp"
#include "geps/quadrature.hpp"
#include "geps/snapshot.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

using namespace geps;

namespace {

constexpr double kPi = std::numbers::pi;

Distribution from_fn(const GridSpec& g, auto fn) {
  Eigen::ArrayXd v(Eigen::Index(g.size()));
  for (std::size_t i = 0; i < g.size(); ++i) v[Eigen::Index(i)] = fn(g.node(i));
  return Distribution(g, v);
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("geps_test_" + name);
}

}  // namespace

TEST_CASE("grid spec validation and node layout") {
  CHECK_THROWS_AS(GridSpec::make(7, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(GridSpec::make(8, 0.0), std::invalid_argument);
  const GridSpec g = GridSpec::make(9, 2.0);
  CHECK(g.h() == doctest::Approx(0.5));
  CHECK(g.node(4, 4, 4).norm() == 0.0);
  CHECK(g.node(g.index(1, 2, 3)) == g.node(1, 2, 3));
  const GridSpec even = GridSpec::make(8, 2.0);
  for (std::size_t i = 0; i < even.size(); ++i) CHECK(even.node(i).norm() > 0.0);
}

TEST_CASE("distribution rejects negative, non-finite and mis-sized data") {
  const GridSpec g = GridSpec::make(8, 1.0);
  Eigen::ArrayXd v = Eigen::ArrayXd::Ones(Eigen::Index(g.size()));
  v[3] = -1e-300;
  CHECK_THROWS_AS(Distribution(g, v), std::invalid_argument);
  v[3] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(Distribution(g, v), std::invalid_argument);
  CHECK_THROWS_AS(Distribution(g, Eigen::ArrayXd::Ones(5)), std::invalid_argument);
}

TEST_CASE("moments of a centered unit Maxwellian") {
  const GridSpec g = GridSpec::make(48, 6.0);
  const auto m = moments(maxwellian(g, 1.0, Vec3::Zero(), 1.0), {1.0, 2.0, kInf});
  CHECK(std::abs(m.mass - 1.0) < 1e-8);
  CHECK(m.momentum.norm() < 1e-14);
  CHECK(std::abs(m.energy - 3.0) < 1e-6);
  // int M log M = -3/2 (1 + log 2 pi)
  CHECK(std::abs(m.entropy + 1.5 * (1.0 + std::log(2.0 * kPi))) < 1e-6);
  CHECK(m.lp_norms.at(1.0) == doctest::Approx(m.mass).epsilon(1e-14));
}

TEST_CASE("zero distribution has zero moments") {
  const auto m = moments(Distribution::zeros(GridSpec::make(8, 1.0)), {2.0});
  CHECK(m.mass == 0.0);
  CHECK(m.momentum.norm() == 0.0);
  CHECK(m.energy == 0.0);
  CHECK(m.entropy == 0.0);
  CHECK(m.llogl == 0.0);
  CHECK(m.lp_norms.at(2.0) == 0.0);
}

TEST_CASE("even data has zero momentum") {
  const GridSpec g = GridSpec::make(10, 3.0);
  const auto f = from_fn(g, [](const Vec3& v) { return std::exp(-v.squaredNorm()) * (1.0 + v.x() * v.x()); });
  CHECK(moments(f).momentum.norm() < 1e-14 * moments(f).mass);
}

TEST_CASE("lp norms") {
  const GridSpec g = GridSpec::make(8, 1.0);
  Eigen::ArrayXd v = Eigen::ArrayXd::Zero(Eigen::Index(g.size()));
  for (int i = 0; i < 7; ++i) v[10 + 3 * i] = 2.5;
  const Distribution f(g, v);
  CHECK(lp_norm(f, 1.0) == doctest::Approx(2.5 * 7 * g.cell_volume()).epsilon(1e-14));
  CHECK(lp_norm(f, kInf) == 2.5);
  CHECK(lp_norm(f, 2.0) == doctest::Approx(2.5 * std::sqrt(7 * g.cell_volume())).epsilon(1e-14));
  CHECK_THROWS_AS(lp_norm(f, 0.5), std::invalid_argument);
  CHECK(lp_norm(Distribution::zeros(g), 3.0) == 0.0);

  // ||M||_2 = (rho^2 / (8 pi^{3/2} T^{3/2}))^{1/2}
  const GridSpec fine = GridSpec::make(48, 6.0);
  const double rho = 1.7, T = 0.8;
  const double analytic = std::sqrt(rho * rho / (8.0 * std::pow(kPi, 1.5) * std::pow(T, 1.5)));
  CHECK(std::abs(lp_norm(maxwellian(fine, rho, Vec3(0.2, 0, 0), T), 2.0) - analytic) < 1e-5);
}

TEST_CASE("lp norms are nonnegative and vanish only on zero data") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const GridSpec g = GridSpec::make(8, 2.0);
  for (int t = 0; t < 20; ++t) {
    Eigen::ArrayXd v = Eigen::ArrayXd::Zero(Eigen::Index(g.size()));
    v[Eigen::Index(std::size_t(u(rng) * double(g.size())))] = u(rng) + 1e-3;
    const Distribution f(g, v);
    for (double p : {1.0, 1.5, 2.0, 7.0, kInf}) CHECK(lp_norm(f, p) > 0.0);
  }
}

TEST_CASE("maxwellian sampling") {
  CHECK_THROWS_AS(maxwellian(GridSpec::make(8, 1.0), 0.0, Vec3::Zero(), 1.0), std::invalid_argument);
  CHECK_THROWS_AS(maxwellian(GridSpec::make(8, 1.0), 1.0, Vec3::Zero(), -1.0), std::invalid_argument);
  CHECK(std::abs(moments(maxwellian(GridSpec::make(48, 6.0), 1.0, Vec3::Zero(), 1.0)).mass - 1.0) < 1e-8);

  const GridSpec odd = GridSpec::make(9, 2.0);
  const double T = 0.7, rho = 2.0;
  const auto m = maxwellian(odd, rho, Vec3::Zero(), T);
  CHECK(m(4, 4, 4) == doctest::Approx(rho * std::pow(2.0 * kPi * T, -1.5)).epsilon(1e-15));

  const GridSpec g = GridSpec::make(21, 3.0);
  const auto shifted = maxwellian(g, 1.0, Vec3(1, 0, 0), 0.5);
  Eigen::Index arg = 0;
  shifted.values().maxCoeff(&arg);
  CHECK((g.node(std::size_t(arg)) - Vec3(1, 0, 0)).norm() <= 0.5 * std::sqrt(3.0) * g.h() + 1e-12);
}

TEST_CASE("maxwellian moments converge at least at second order") {
  const Vec3 bulk(0.3, -0.2, 0.1);
  const double T = 1.0;
  auto err = [&](int n) {
    const auto m = moments(maxwellian(GridSpec::make(n, 8.0), 1.0, bulk, T));
    return std::abs(m.mass - 1.0) + (m.momentum - bulk).norm() + std::abs(m.energy - (bulk.squaredNorm() + 3 * T));
  };
  const double coarse = err(12), fine = err(23);
  CHECK(coarse > 0.0);
  CHECK(fine <= coarse / 4.0);
}

TEST_CASE("interpolation") {
  const GridSpec g = GridSpec::make(8, 2.0);
  const auto lin = from_fn(g, [](const Vec3& v) { return 10.0 + v.x() - 2.0 * v.y() + 0.5 * v.z(); });
  CHECK(interpolate(lin, g.node(3, 5, 2)) == lin(3, 5, 2));
  CHECK(interpolate(lin, Vec3(2.5, 0, 0)) == 0.0);
  CHECK(interpolate(lin, Vec3(0, -2.0001, 0)) == 0.0);
  const Vec3 center = g.node(2, 3, 4) + 0.5 * g.h() * Vec3::Ones();
  double avg = 0.0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c) avg += lin(2 + a, 3 + b, 4 + c) / 8.0;
  CHECK(interpolate(lin, center) == doctest::Approx(avg).epsilon(1e-14));
  // exact on affine data anywhere inside
  const Vec3 p(0.37, -1.21, 1.93);
  CHECK(interpolate(lin, p) == doctest::Approx(10.0 + p.x() - 2.0 * p.y() + 0.5 * p.z()).epsilon(1e-13));
  CHECK(interpolate(lin, Vec3(2.0, 2.0, 2.0)) == doctest::Approx(lin(7, 7, 7)).epsilon(1e-14));
}

TEST_CASE("interpolation of nonnegative data is nonnegative") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const GridSpec g = GridSpec::make(8, 1.0);
  Eigen::ArrayXd v(Eigen::Index(g.size()));
  for (auto& x : v) x = u(rng) < 0.5 ? 0.0 : u(rng);
  const Distribution f(g, v);
  for (int t = 0; t < 5000; ++t) {
    const Vec3 p(3 * u(rng) - 1.5, 3 * u(rng) - 1.5, 3 * u(rng) - 1.5);
    CHECK(interpolate(f, p) >= 0.0);
  }
}

TEST_CASE("ball truncation") {
  const GridSpec g = GridSpec::make(17, 4.0);
  const auto m = maxwellian(g, 1.0, Vec3::Zero(), 1.0);
  CHECK_THROWS_AS(truncate_ball(m, 0.0), std::invalid_argument);
  CHECK((truncate_ball(m, std::sqrt(3.0) * 4.0 + 1e-9).values() == m.values()).all());
  const auto tiny = truncate_ball(m, 1e-9);
  CHECK((tiny.values() > 0).count() == 1);
  CHECK(tiny(8, 8, 8) == m(8, 8, 8));
  CHECK(lp_norm(m, 1.0) - lp_norm(truncate_ball(m, 4.0), 1.0) < 1e-2);
  double prev = 0.0;
  for (double R : {0.5, 1.0, 2.0, 3.0, 5.0, 7.0}) {
    const double mass = lp_norm(truncate_ball(m, R), 1.0);
    CHECK(mass >= prev);
    CHECK(mass <= lp_norm(m, 1.0));
    prev = mass;
  }
}

TEST_CASE("matched Maxwellian and boundary mass") {
  const GridSpec g = GridSpec::make(24, 5.0);
  const auto a = maxwellian(g, 0.5, Vec3(1, 0, 0), 0.5);
  const auto b = maxwellian(g, 0.5, Vec3(-1, 0, 0), 0.5);
  const Distribution f(g, a.values() + b.values());
  const auto mf = moments(f), mm = moments(matched_maxwellian(f));
  CHECK(std::abs(mm.mass - mf.mass) < 1e-6);
  CHECK(std::abs(mm.energy - mf.energy) < 1e-5);
  CHECK((mm.momentum - mf.momentum).norm() < 1e-8);
  CHECK(boundary_mass(f) < 1e-4);
  CHECK(boundary_mass(maxwellian(g, 1.0, Vec3(4.5, 0, 0), 0.3)) > 0.1);
}

TEST_CASE("llogl and entropy agree where f <= 1") {
  const GridSpec g = GridSpec::make(16, 5.0);
  const auto m = maxwellian(g, 1.0, Vec3::Zero(), 1.0);
  CHECK(llogl_norm(m) == doctest::Approx(-moments(m).entropy).epsilon(1e-14));
  CHECK(weighted_l1(m, 0.0) == doctest::Approx(lp_norm(m, 1.0)).epsilon(1e-14));
  CHECK(weighted_l1(m, 2.0) == doctest::Approx(lp_norm(m, 1.0) + moments(m).energy).epsilon(1e-13));
}

TEST_CASE("snapshot round trip is exact in both formats") {
  const GridSpec g = GridSpec::make(8, 2.5);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::ArrayXd v(Eigen::Index(g.size()));
  for (auto& x : v) x = u(rng) * std::pow(10.0, -20.0 * u(rng));
  const Snapshot snap{Distribution(g, v), 0.125, 0.1, -3.0};
  for (const char* ext : {".txt", ".bin"}) {
    const auto path = temp_path(std::string("snap") + ext);
    write_snapshot(path, snap);
    const Snapshot back = read_snapshot(path);
    CHECK(back.f.grid() == g);
    CHECK((back.f.values() == v).all());
    CHECK(back.time == 0.125);
    CHECK(back.eps == 0.1);
    CHECK(back.gamma == -3.0);
    std::filesystem::remove(path);
  }
}

TEST_CASE("malformed snapshots are rejected") {
  const auto path = temp_path("bad.txt");
  {
    std::ofstream out(path);
    out << "# geps-snapshot n=8 v_max=1 time=0 eps=1 gamma=-1\n1\n2\n";
  }
  CHECK_THROWS_AS(read_snapshot(path), std::runtime_error);
  {
    std::ofstream out(path);
    out << "hello\n";
  }
  CHECK_THROWS_AS(read_snapshot(path), std::runtime_error);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(read_snapshot(temp_path("missing.txt")), std::runtime_error);
}

TEST_CASE("format_double round-trips") {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 1000; ++t) {
    const double x = std::bit_cast<double>(rng() & 0x7FEFFFFFFFFFFFFFull);
    CHECK(std::strtod(format_double(x).c_str(), nullptr) == x);
  }
  CHECK(format_double(kInf) == "inf");
}

TEST_CASE("Gauss-Legendre rules") {
  for (int n : {1, 2, 5, 12}) {
    const GaussRule r = gauss_legendre(n, 0.0, 2.0);
    CHECK(r.weights.sum() == doctest::Approx(2.0).epsilon(1e-14));
    // exact for degree 2n - 1: int_0^2 x^{2n-1} dx = 2^{2n} / (2n)
    double s = 0.0;
    for (int k = 0; k < n; ++k) s += r.weights[k] * std::pow(r.nodes[k], 2 * n - 1);
    CHECK(s == doctest::Approx(std::pow(2.0, 2 * n) / (2 * n)).epsilon(1e-13));
  }
}
