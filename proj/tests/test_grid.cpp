#include <doctest.h>

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <limits>

#include "support.hpp"

using namespace conboltz;
using testing::grid;
using testing::random_vector;

namespace {

const double pi = std::numbers::pi;

double max_abs(std::span<const cplx> c, std::size_t skip = static_cast<std::size_t>(-1)) {
  double m = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (i != skip) m = std::max(m, std::abs(c[i]));
  return m;
}

// Independent tail of M[1, 0, T] (1 + |v|^2) outside (-L, L)^3 by 1-D GL.
double tail_oracle(double L, double T) {
  const auto phi = [&](double x) { return std::exp(-x * x / (2 * T)) / std::sqrt(2 * pi * T); };
  using GL = boost::math::quadrature::gauss<double, 30>;
  double P = 0.0, S = 0.0;
  const int panels = 40;
  for (int p = 0; p < panels; ++p) {
    const double a = -L + 2 * L * p / panels, b = a + 2 * L / panels;
    P += GL::integrate(phi, a, b);
    S += GL::integrate([&](double x) { return x * x * phi(x); }, a, b);
  }
  return (1.0 - P * P * P) + (3.0 * T - 3.0 * S * P * P);
}

}  // namespace

TEST_CASE("grid geometry") {
  const auto g = grid(3, 2.5, 8);
  CHECK(g->dv() * g->n() == doctest::Approx(2 * g->half_width()).epsilon(1e-15));
  CHECK(g->node(0) == doctest::Approx(-2.5 + 0.5 * g->dv()));
  CHECK(g->cell_volume() == doctest::Approx(std::pow(g->dv(), 3)));
  CHECK(g->wavenumber(1) == doctest::Approx(pi / 2.5));
  CHECK(g->size() == 512);
  CHECK_THROWS_AS(VelocityGrid(3, 1.0, 7), Error);
  CHECK_THROWS_AS(VelocityGrid(4, 1.0, 8), Error);
  CHECK_THROWS_AS(VelocityGrid(3, -1.0, 8), Error);
}

TEST_CASE("constant field transform") {
  for (int d : {2, 3}) {
    const double L = 3.0, c = 1.7;
    const auto g = grid(d, L, 8);
    const State s(g, std::vector<double>(g->size(), c));
    const auto coeffs = s.coeffs();
    const double expect = c * std::pow(2 * L, d) / std::pow(2 * pi, 0.5 * d);
    CHECK(coeffs[0].real() == doctest::Approx(expect).epsilon(1e-13));
    CHECK(max_abs(coeffs, 0) < 1e-12 * expect);
  }
}

TEST_CASE("Maxwellian transform matches the analytic Gaussian transform") {
  const double T = 0.25, L = 4.0;
  const auto g = grid(3, L, 32);
  const State m = maxwellian(g, 1.0, {0, 0, 0}, T);
  const auto c = m.coeffs();
  double worst = 0.0;
  for (std::size_t slot = 0; slot < g->size(); ++slot) {
    const auto idx = g->unflatten(slot);
    bool resolved = true;
    for (int a = 0; a < 3; ++a) resolved = resolved && std::abs(g->signed_mode(idx[a])) <= g->n() / 4;
    if (!resolved) continue;
    const Vec z = g->wavevector(slot);
    const double z2 = z[0] * z[0] + z[1] * z[1] + z[2] * z[2];
    const double exact = std::pow(2 * pi, -1.5) * std::exp(-T * z2 / 2);
    worst = std::max(worst, std::abs(c[slot] - exact));
  }
  // Tail mass outside the cube is ~ erfc(L / sqrt(2T)) ~ 1e-15 and the
  // aliased images sit at |zeta| >= 2 pi / dv - pi.
  CHECK(worst < 1e-12);
}

TEST_CASE("forward/inverse round trip") {
  for (int d : {2, 3}) {
    const auto g = grid(d, 2.0, 10);
    const State s(g, random_vector(g->size(), 7 + d));
    std::vector<double> back(g->size());
    g->inverse_real(s.coeffs(), back);
    double err = 0.0, ref = 0.0;
    for (std::size_t j = 0; j < back.size(); ++j) {
      err = std::max(err, std::abs(back[j] - s.values()[j]));
      ref = std::max(ref, std::abs(s.values()[j]));
    }
    CHECK(err <= 1e-12 * ref);
  }
}

TEST_CASE("non-finite values are rejected with the node") {
  const auto g = grid(3, 1.0, 8);
  std::vector<double> v(g->size(), 1.0);
  v[37] = std::numeric_limits<double>::quiet_NaN();
  const State s(g, v);
  try {
    (void)s.coeffs();
    FAIL("expected NonFiniteError");
  } catch (const NonFiniteError& e) {
    CHECK(e.node == 37);
  }
}

TEST_CASE("Parseval") {
  const auto g = grid(3, 2.0, 8);
  const State s(g, random_vector(g->size(), 3));
  double acc = 0.0;
  for (const auto& c : s.coeffs()) acc += std::norm(c);
  acc *= std::pow(g->mode_spacing(), 3);
  const double l2 = l2_norm(*g, s.values());
  CHECK(acc == doctest::Approx(l2 * l2).epsilon(1e-12));
}

TEST_CASE("projection") {
  const auto g = grid(3, 2.0, 12);
  const State s(g, random_vector(g->size(), 11));
  const State p = project(s, 3);
  const State pp = project(p, 3);
  CHECK(testing::l2_diff(g, p.values(), pp.values()) <= 1e-13 * l2_norm(*g, p.values()));
  CHECK(l2_norm(*g, p.values()) <= l2_norm(*g, s.values()));
  // Band-limited input comes back unchanged.
  const State band = project(s, 2);
  const State same = project(band, 4);
  CHECK(testing::l2_diff(g, band.values(), same.values()) <= 1e-13 * l2_norm(*g, band.values()));
  CHECK_THROWS_AS(project(s, 7), Error);
  CHECK_THROWS_AS(project(s, -1), Error);
}

TEST_CASE("projection error for a Gaussian obeys the spectral estimate") {
  const double L = 6.0;
  const int alpha = 2;
  for (int N : {3, 6}) {
    const auto g = grid(3, L, 32);
    const State m = maxwellian(g, 1.0, {0, 0, 0}, 1.0);
    const State p = project(m, N);
    const double err = testing::l2_diff(g, m.values(), p.values());
    const double h = sobolev_norm(m, {alpha, alpha, alpha}, 0.0);
    // Period-2L modes: every discarded mode has some |zeta_a| >= pi (N + 1) / L.
    const double bound = std::pow(L / (pi * (N + 1)), alpha) * h;
    INFO("N = " << N << " err = " << err << " bound = " << bound);
    CHECK(err <= bound);
  }
}

TEST_CASE("Sobolev norm") {
  const auto g = grid(2, 1.5, 16);
  const State r(g, random_vector(g->size(), 5));
  CHECK(sobolev_norm(r, {0, 0, 0}, 0.0) == doctest::Approx(l2_norm(*g, r.values())).epsilon(1e-14));

  std::vector<double> sn(g->size()), cs(g->size());
  for (std::size_t j = 0; j < sn.size(); ++j) {
    const double x = g->velocity(j)[0];
    sn[j] = std::sin(pi * x / 1.5);
    cs[j] = std::cos(pi * x / 1.5);
  }
  const State s(g, sn);
  const auto d = spectral_derivative(s, {1, 0, 0});
  CHECK(l2_norm(*g, d) == doctest::Approx(pi / 1.5 * l2_norm(*g, cs)).epsilon(1e-12));
}

TEST_CASE("spectral derivative agrees with finite differences to O(dv^2)") {
  const double L = 2.0;
  const auto field = [&](const Vec& v) { return std::exp(std::sin(pi * v[0] / L)) * std::cos(pi * v[1] / L); };
  double prev = 0.0;
  for (int n : {16, 32}) {
    const auto g = grid(2, L, n);
    std::vector<double> x(g->size());
    for (std::size_t j = 0; j < x.size(); ++j) x[j] = field(g->velocity(j));
    const auto d = spectral_derivative(State(g, x), {1, 0, 0});
    std::vector<double> diff(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
      auto idx = g->unflatten(j);
      auto up = idx, dn = idx;
      up[0] = (idx[0] + 1) % n;
      dn[0] = (idx[0] + n - 1) % n;
      const double fd = (x[g->flatten(up)] - x[g->flatten(dn)]) / (2 * g->dv());
      diff[j] = fd - d[j];
    }
    const double err = l2_norm(*g, diff);
    if (prev > 0.0) CHECK(prev / err == doctest::Approx(4.0).epsilon(0.1));
    prev = err;
  }
}

TEST_CASE("choose_domain") {
  DomainRequest req;
  req.tolerance = 1e-6;
  const DomainChoice c = choose_domain(req);
  const double target = 1e-6 * 4.0;
  CHECK_FALSE(c.support_limited);
  CHECK(tail_oracle(c.half_width, 1.0) <= target * (1 + 1e-8));
  CHECK(tail_oracle(c.half_width * (1 - 1e-6), 1.0) > target);
  CHECK(maxwellian_tail(req, c.half_width) == doctest::Approx(tail_oracle(c.half_width, 1.0)).epsilon(1e-8));

  SUBCASE("monotone in tolerance and temperature") {
    DomainRequest loose = req;
    loose.tolerance = 1e-3;
    CHECK(choose_domain(loose).half_width < c.half_width);
    DomainRequest hot = req;
    hot.temperature = 2.0;
    const double Lh = choose_domain(hot).half_width;
    CHECK(Lh > c.half_width);
    // The (1 + |v|^2) weight breaks exact Gaussian scaling; the ratio stays near sqrt 2.
    CHECK(Lh / c.half_width == doctest::Approx(std::sqrt(2.0)).epsilon(0.03));
  }
  SUBCASE("degenerate tolerance") {
    DomainRequest r = req;
    r.tolerance = 1 - 1e-9;
    CHECK(choose_domain(r).half_width < 1e-2);
    r.support_radius = 3.0;
    const auto s = choose_domain(r);
    CHECK(s.support_limited);
    CHECK(s.half_width == 3.0);
  }
  SUBCASE("bad input") {
    DomainRequest r = req;
    r.dilation = 0.5;
    CHECK_THROWS_AS(choose_domain(r), Error);
    r = req;
    r.tolerance = 1.0;
    CHECK_THROWS_AS(choose_domain(r), Error);
  }
}

TEST_CASE("series evaluation reproduces nodes and vanishes outside") {
  const auto g = grid(3, 2.0, 8);
  const State s(g, random_vector(g->size(), 9));
  const auto c = s.coeffs();
  for (std::size_t j : {0ul, 100ul, 511ul})
    CHECK(g->evaluate_series(c, g->velocity(j)) == doctest::Approx(s.values()[j]).epsilon(1e-11));
  CHECK(g->evaluate_series(c, {2.5, 0, 0}) == 0.0);
}
