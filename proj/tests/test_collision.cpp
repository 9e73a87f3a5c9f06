#include <doctest.h>

#include <algorithm>

#include "conboltz/collision.hpp"
#include "support.hpp"

using namespace conboltz;
using testing::grid;

namespace {

std::shared_ptr<const CollisionWorkspace> workspace(const GridPtr& g, const KernelSpec& s,
                                                    TableMode mode = TableMode::Automatic) {
  TableOptions o;
  o.mode = mode;
  return make_workspace(g, s, o);
}

double max_abs(std::span<const cplx> c) {
  double m = 0.0;
  for (const auto& x : c) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

TEST_CASE("convolution basics") {
  const auto g = grid(3, 4.0, 8);
  const auto ws = workspace(g, KernelSpec::isotropic(3, 1.0, 1.0));
  CHECK(ws->normalization() == doctest::Approx(std::pow(2 * std::numbers::pi, -1.5) * std::pow(std::numbers::pi / 4.0, 3)));

  const State zero(g);
  CHECK(max_abs(ws->q_hat(zero.coeffs())) == 0.0);

  const State f = testing::two_gaussian(g);
  const auto qh = ws->q_hat(f.coeffs());
  CHECK(std::abs(qh[0]) <= 1e-10 * max_abs(qh));
  // Out-of-band slots stay empty.
  for (std::size_t slot = 0; slot < g->size(); ++slot) {
    const auto idx = g->unflatten(slot);
    bool out = false;
    for (int a = 0; a < 3; ++a) out = out || std::abs(g->signed_mode(idx[a])) > 3;
    if (out) CHECK(qh[slot] == cplx(0.0));
  }
  CHECK_THROWS_AS(ws->q_hat(std::vector<cplx>(10)), Error);
}

TEST_CASE("q_u is real, quadratic and mass free") {
  const auto g = grid(3, 4.0, 8);
  const auto ws = workspace(g, KernelSpec::isotropic(3, 1.0, 1.0));
  const State f = testing::two_gaussian(g);
  const auto q = q_u(f, *ws);

  std::vector<cplx> field(g->size());
  g->inverse(ws->q_hat(f.coeffs()), field);
  double imag = 0.0;
  for (const auto& z : field) imag = std::max(imag, std::abs(z.imag()));
  const double qn = l2_norm(*g, q);
  CHECK(imag <= 1e-10 * qn);

  const double c = 2.7;
  std::vector<double> scaled(f.values().begin(), f.values().end());
  for (auto& x : scaled) x *= c;
  const auto q2 = q_u(State(g, scaled), *ws);
  std::vector<double> expect(q.size());
  for (std::size_t j = 0; j < q.size(); ++j) expect[j] = c * c * q[j];
  CHECK(testing::l2_diff(g, q2, expect) <= 1e-12 * l2_norm(*g, expect));

  double mass = 0.0, absmass = 0.0;
  for (double x : q) {
    mass += x;
    absmass += std::abs(x);
  }
  CHECK(std::abs(mass) <= 1e-10 * absmass);
}

TEST_CASE("isotropic input gives a symmetric output") {
  const auto g = grid(3, 4.0, 8);
  const auto ws = workspace(g, KernelSpec::isotropic(3, 1.0, 1.0));
  // Radial but non-Gaussian input.
  std::vector<double> v(g->size());
  for (std::size_t j = 0; j < v.size(); ++j) {
    const Vec x = g->velocity(j);
    const double r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    v[j] = (1 + r2) * std::exp(-r2);
  }
  const auto q = q_u(State(g, v), *ws);
  double worst = 0.0, big = 0.0;
  for (std::size_t j = 0; j < q.size(); ++j) {
    const auto i = g->unflatten(j);
    for (const auto& p : {std::array<int, 3>{i[1], i[2], i[0]}, std::array<int, 3>{i[2], i[0], i[1]},
                          std::array<int, 3>{i[1], i[0], i[2]}, std::array<int, 3>{7 - i[0], i[1], i[2]}})
      worst = std::max(worst, std::abs(q[g->flatten(p)] - q[j]));
    big = std::max(big, std::abs(q[j]));
  }
  CHECK(worst <= 1e-12 * big);
}

TEST_CASE("Full and Reduced tables give the same operator") {
  const auto g = grid(3, 3.5, 8);
  const KernelSpec s = KernelSpec::isotropic(3, 0.5, 0.9);
  const State f = testing::two_gaussian(g, 0.8, 0.5);
  const auto a = q_u(f, *workspace(g, s, TableMode::Full));
  const auto b = q_u(f, *workspace(g, s, TableMode::Reduced));
  CHECK(testing::l2_diff(g, a, b) <= 1e-12 * l2_norm(*g, a));
}

TEST_CASE("Maxwellian residual shrinks with resolution") {
  double prev = 0.0;
  for (int n : {8, 12, 16}) {
    const auto g = grid(3, 5.0, n);
    const auto ws = workspace(g, KernelSpec::isotropic(3, 1.0, 1.0));
    const State m = maxwellian(g, 1.0, {0, 0, 0}, 1.0);
    const double r = l2_norm(*g, q_u(m, *ws));
    INFO("n = " << n << " |q_u(M)| = " << r);
    if (prev > 0.0) CHECK(r < prev);
    prev = r;
  }
}

TEST_CASE("two-dimensional operator") {
  const auto g = grid(2, 5.0, 16);
  const auto ws = workspace(g, KernelSpec::isotropic(2, 1.0, 1.0));
  const State m = maxwellian(g, 1.0, {0, 0, 0}, 1.0);
  const State f = testing::two_gaussian(g, 1.5, 0.5);
  const double qm = l2_norm(*g, q_u(m, *ws)), qf = l2_norm(*g, q_u(f, *ws));
  CHECK(qm < 1e-2 * qf);
}
