#include "conboltz/oracle.hpp"

#include <cmath>

#include "conboltz/quadrature.hpp"

namespace conboltz {

namespace {

struct Canonical {
  std::vector<double> c;   // cos(theta)
  std::vector<double> s1;  // transverse components
  std::vector<double> s2;
  std::vector<double> wb;  // weight * b(c)
};

Canonical canonical_rule(const KernelSpec& spec, int order) {
  const int d = spec.dim();
  const SphereRule r = sphere_rule(d, d == 3 ? order : 2 * order, {0.0, 0.0, 1.0});
  Canonical out;
  for (std::size_t q = 0; q < r.nodes.size(); ++q) {
    const Vec& s = r.nodes[q];
    if (d == 3) {
      out.c.push_back(s[2]);
      out.s1.push_back(s[0]);
      out.s2.push_back(s[1]);
    } else {
      out.c.push_back(s[0]);
      out.s1.push_back(s[1]);
      out.s2.push_back(0.0);
    }
    out.wb.push_back(r.weights[q] * spec.b(out.c.back()));
  }
  return out;
}

void frame(int d, const Vec& a, Vec& e1, Vec& e2) {
  if (d == 2) {
    e1 = {-a[1], a[0], 0.0};
    e2 = {0.0, 0.0, 0.0};
    return;
  }
  const Vec t = std::abs(a[0]) < 0.9 ? Vec{1.0, 0.0, 0.0} : Vec{0.0, 1.0, 0.0};
  const double p = t[0] * a[0] + t[1] * a[1] + t[2] * a[2];
  e1 = {t[0] - p * a[0], t[1] - p * a[1], t[2] - p * a[2]};
  const double n1 = std::sqrt(e1[0] * e1[0] + e1[1] * e1[1] + e1[2] * e1[2]);
  for (auto& x : e1) x /= n1;
  e2 = {a[1] * e1[2] - a[2] * e1[1], a[2] * e1[0] - a[0] * e1[2], a[0] * e1[1] - a[1] * e1[0]};
}

// Multilinear stencil of a point: up to 2^d nodes and weights, nodes past
// the grid edge are dropped (zero ghost values).
struct Stencil {
  int count = 0;
  std::size_t node[8];
  double weight[8];
};

bool stencil(const VelocityGrid& g, const Vec& x, Stencil& st) {
  const int d = g.dim();
  const double L = g.half_width();
  int lo[3] = {0, 0, 0};
  double fr[3] = {0.0, 0.0, 0.0};
  for (int a = 0; a < d; ++a) {
    if (!(std::abs(x[a]) < L)) return false;
    const double t = (x[a] + L) / g.dv() - 0.5;
    lo[a] = static_cast<int>(std::floor(t));
    fr[a] = t - lo[a];
  }
  st.count = 0;
  const int n = g.n();
  for (int corner = 0; corner < (1 << d); ++corner) {
    double w = 1.0;
    std::array<int, 3> idx{0, 0, 0};
    bool inside = true;
    for (int a = 0; a < d; ++a) {
      const int bit = (corner >> a) & 1;
      idx[a] = lo[a] + bit;
      w *= bit ? fr[a] : 1.0 - fr[a];
      inside = inside && idx[a] >= 0 && idx[a] < n;
    }
    if (!inside || w == 0.0) continue;
    st.node[st.count] = g.flatten(idx);
    st.weight[st.count] = w;
    ++st.count;
  }
  return true;
}

double interpolate(const VelocityGrid& g, std::span<const double> f, const Vec& x) {
  Stencil st;
  if (!stencil(g, x, st)) return 0.0;
  double acc = 0.0;
  for (int c = 0; c < st.count; ++c) acc += st.weight[c] * f[st.node[c]];
  return acc;
}

}  // namespace

OracleResult collision_direct(const State& fs, const KernelSpec& spec, const QuadratureSpec& q) {
  const VelocityGrid& g = fs.grid();
  if (spec.dim() != g.dim()) throw Error("collision_direct: kernel and grid dimensions differ");
  if (q.sphere_order < 1 || q.stride < 1) throw Error("collision_direct: bad quadrature spec");
  const int d = g.dim();
  const auto f = fs.values();
  const std::size_t M = g.size();
  const double R = truncation_radius(g, spec);
  const double L = g.half_width();
  const double beta = spec.beta();
  const bool elastic = beta == 1.0;
  const double wv = g.cell_volume();
  const double ww = std::pow(q.stride * g.dv(), d);
  const Canonical rule = canonical_rule(spec, q.sphere_order);
  const std::size_t Q = rule.c.size();

  std::vector<std::size_t> wnodes;
  for (std::size_t j = 0; j < M; ++j) {
    const auto idx = g.unflatten(j);
    bool keep = true;
    for (int a = 0; a < d; ++a) keep = keep && idx[a] % q.stride == (q.stride / 2);
    if (keep) wnodes.push_back(j);
  }

  OracleResult out;
  out.field.assign(M, 0.0);
  std::vector<double> scatter(M, 0.0);
  const auto sq = [](const Vec& v) { return v[0] * v[0] + v[1] * v[1] + v[2] * v[2]; };

  for (std::size_t i = 0; i < M; ++i) {
    const Vec v = g.velocity(i);
    double gain = 0.0, loss = 0.0;
    for (std::size_t j : wnodes) {
      if (f[i] == 0.0 && f[j] == 0.0) continue;
      const Vec w = g.velocity(j);
      const Vec u{v[0] - w[0], v[1] - w[1], v[2] - w[2]};
      const double r = std::sqrt(sq(u));
      if (r == 0.0 || r > R) continue;
      const double B = std::pow(r, spec.lambda());
      const double ff = f[i] * f[j];
      loss += B * ff;
      const Vec a{u[0] / r, u[1] / r, u[2] / r};
      Vec e1, e2;
      frame(d, a, e1, e2);
      const Vec mid{0.5 * (v[0] + w[0]), 0.5 * (v[1] + w[1]), 0.5 * (v[2] + w[2])};
      const double pair = ff * B * wv * ww;
      for (std::size_t p = 0; p < Q; ++p) {
        Vec sigma;
        for (int c = 0; c < 3; ++c) sigma[c] = rule.c[p] * a[c] + rule.s1[p] * e1[c] + rule.s2[p] * e2[c];
        // v' = v - (beta/2)(u - |u| sigma)
        Vec vp;
        for (int c = 0; c < 3; ++c) vp[c] = v[c] - 0.5 * beta * (u[c] - r * sigma[c]);
        bool inside = true;
        for (int c = 0; c < d; ++c) inside = inside && std::abs(vp[c]) < L;
        if (inside) {
          const double wq = pair * rule.wb[p];
          out.mass_weak += wq;
          for (int c = 0; c < d; ++c) out.momentum_weak[c] += wq * vp[c];
          out.energy_weak += wq * sq(vp);
        }
        if (elastic) {
          Vec wp;
          for (int c = 0; c < 3; ++c) {
            vp[c] = mid[c] + 0.5 * r * sigma[c];
            wp[c] = mid[c] - 0.5 * r * sigma[c];
          }
          const double fv = interpolate(g, f, vp);
          if (fv == 0.0) continue;
          gain += rule.wb[p] * B * fv * interpolate(g, f, wp);
        } else if (inside) {
          Stencil st;
          stencil(g, vp, st);
          for (int c = 0; c < st.count; ++c) scatter[st.node[c]] += pair * rule.wb[p] * st.weight[c];
        }
      }
      out.mass_weak -= pair;
      for (int c = 0; c < d; ++c) out.momentum_weak[c] -= pair * v[c];
      out.energy_weak -= pair * sq(v);
    }
    out.field[i] = elastic ? ww * (gain - loss) : -ww * loss;
  }
  if (!elastic)
    for (std::size_t k = 0; k < M; ++k) out.field[k] += scatter[k] / wv;
  return out;
}

std::vector<double> nearest_conservative_dense(std::span<const double> qu, const Eigen::MatrixXd& C) {
  const Eigen::Index M = static_cast<Eigen::Index>(qu.size());
  if (C.rows() == 0) return {qu.begin(), qu.end()};
  if (C.cols() != M) throw Error("nearest_conservative_dense: constraint matrix does not match the field");
  Eigen::FullPivLU<Eigen::MatrixXd> rank_check(C);
  if (rank_check.rank() < C.rows()) throw Error("nearest_conservative_dense: constraint matrix is rank deficient");
  const Eigen::Index p = C.rows();
  // [ I  C^T ] [x ]   [qu]
  // [ C  0   ] [mu] = [0 ]
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(M + p, M + p);
  K.topLeftCorner(M, M).setIdentity();
  K.topRightCorner(M, p) = C.transpose();
  K.bottomLeftCorner(p, M) = C;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(M + p);
  rhs.head(M) = Eigen::Map<const Eigen::VectorXd>(qu.data(), M);
  const Eigen::VectorXd sol = K.partialPivLu().solve(rhs);
  return {sol.data(), sol.data() + M};
}

}  // namespace conboltz
