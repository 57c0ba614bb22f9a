#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numeric>

#include "thomjiggle/cocycle.hpp"
#include "thomjiggle/errors.hpp"

namespace thom {

int orientation_sign(std::span<const VertexId> oriented) {
  int sign = 1;
  for (std::size_t i = 0; i < oriented.size(); ++i)
    for (std::size_t j = i + 1; j < oriented.size(); ++j)
      if (oriented[i] > oriented[j]) sign = -sign;
  return sign;
}

double Cochain::at(std::span<const VertexId> oriented) const {
  Simplex s(oriented.begin(), oriented.end());
  std::sort(s.begin(), s.end());
  const auto idx = complex->find(s);
  if (!idx || static_cast<int>(s.size()) != degree + 1) throw UnknownSimplex("simplex is not in the cochain's complex");
  return orientation_sign(oriented) * values[*idx];
}

double Cochain::max_abs() const {
  double m = 0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

double Cochain::l2() const {
  double s = 0;
  for (double v : values) s += v * v;
  return std::sqrt(s);
}

Cochain zero_cochain(const ComplexPtr& c, int degree) {
  return Cochain{c, degree, std::vector<double>(c->num_simplices(degree), 0.0)};
}

Cochain coboundary(const Cochain& a) {
  const SimplicialComplex& c = *a.complex;
  Cochain out = zero_cochain(a.complex, a.degree + 1);
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    const auto s = c.simplex(a.degree + 1, i);
    double sum = 0;
    for (std::size_t drop = 0; drop < s.size(); ++drop) {
      Simplex f;
      for (std::size_t j = 0; j < s.size(); ++j)
        if (j != drop) f.push_back(s[j]);
      sum += (drop % 2 == 0 ? 1.0 : -1.0) * a.values[*c.find(f)];
    }
    out.values[i] = sum;
  }
  return out;
}

CocycleHost host_from_tower(const FoldingTower& tower, std::string name) {
  const ComplexPtr& base = tower.base();
  if (!base->has_coloring()) throw ImproperColoring("host base carries no coloring");
  CocycleHost h;
  h.name = std::move(name);
  h.complex = tower.top();
  h.colors.resize(h.complex->num_vertices());
  for (std::size_t i = 0; i < h.colors.size(); ++i) h.colors[i] = base->color(tower.to_base.back()[i]);
  return h;
}

CocycleHost torus_host(int m, int r, ExecPolicy policy) {
  const auto tower = iterate_fold(torus_triangulation(2, m), thom_pattern(2), r, policy);
  return host_from_tower(tower, "torus m=" + std::to_string(m) + " r=" + std::to_string(r));
}

CocycleHost sphere_host(int r, ExecPolicy policy) {
  std::vector<VertexRecord> verts;
  for (int k = 0; k < 3; ++k)
    for (int s : {1, -1}) {
      RVec p(3, Rational(0));
      p[static_cast<std::size_t>(k)] = s;
      verts.push_back({static_cast<VertexId>(verts.size()), std::move(p)});
    }
  std::vector<Simplex> tris;
  for (VertexId a : {0u, 1u})
    for (VertexId b : {2u, 3u})
      for (VertexId c : {4u, 5u}) tris.push_back({a, b, c});
  const ComplexPtr octa = build_complex(3, std::move(verts), tris);
  const ComplexPtr T = barycentric_subdivide(octa).first;
  const auto tower = iterate_fold(T, thom_pattern(2), r, policy);
  return host_from_tower(tower, "sphere r=" + std::to_string(r));
}

namespace {

struct ColoredTriangle {
  std::array<Eigen::VectorXd, 3> x;  // vertices in color order
  std::array<Eigen::VectorXd, 3> q;  // target vertex of each one's color
  int sign = 1;                      // orientation of the color order w.r.t. ascending ids
};

ColoredTriangle colored_triangle(const CocycleHost& host, const TargetSimplex& delta, std::size_t t) {
  const SimplicialComplex& c = *host.complex;
  const auto s = c.simplex(2, t);
  const auto pts = c.realize(s);
  std::array<int, 3> order{0, 1, 2};
  std::array<int, 3> col{};
  for (int j = 0; j < 3; ++j) col[static_cast<std::size_t>(j)] = host.colors[c.vertex_index(s[static_cast<std::size_t>(j)])];
  if (col[0] == col[1] || col[1] == col[2] || col[0] == col[2])
    throw ImproperColoring("triangle with a repeated color");
  std::sort(order.begin(), order.end(), [&](int a, int b) { return col[static_cast<std::size_t>(a)] < col[static_cast<std::size_t>(b)]; });
  ColoredTriangle tri;
  std::array<VertexId, 3> oriented{};
  for (std::size_t j = 0; j < 3; ++j) {
    const auto o = static_cast<std::size_t>(order[j]);
    tri.x[j] = to_eigen(pts[o]);
    tri.q[j] = to_eigen(delta.vertices.at(static_cast<std::size_t>(col[o])));
    oriented[j] = s[o];
  }
  tri.sign = orientation_sign(oriented);
  return tri;
}

void require_host(const CocycleHost& host, const TargetSimplex& delta) {
  if (host.complex->dimension() != 2) throw DimensionMismatch("cocycle hosts are 2-dimensional");
  if (delta.vertices.size() != 3) throw DimensionMismatch("fibre dimension 2 needs a colored triangle target");
  if (host.colors.size() != host.complex->num_vertices()) throw ImproperColoring("host coloring has the wrong size");
}

}  // namespace

Cochain mu_cocycle(const OneFormField& lambda, const CocycleHost& host, const TargetSimplex& delta,
                   const MuOptions& opts, ExecPolicy policy) {
  require_host(host, delta);
  if (lambda.base_dim != host.complex->ambient_dim() || lambda.fiber_dim != 2)
    throw DimensionMismatch("one-form does not live on host x R^2");
  const QuadratureRule gl = gauss_legendre(opts.quadrature_order);
  Cochain mu = zero_cochain(host.complex, 2);
  const int d = lambda.base_dim;
  auto segment = [&](const Eigen::VectorXd& x0, const Eigen::VectorXd& v0, const Eigen::VectorXd& x1,
                     const Eigen::VectorXd& v1) {
    Eigen::VectorXd a(d + 2), b(d + 2);
    a << x0, v0;
    b << x1, v1;
    const Eigen::VectorXd dir = b - a;
    double sum = 0;
    for (std::size_t k = 0; k < gl.nodes.size(); ++k) sum += gl.weights[k] * lambda(a + gl.nodes[k] * dir).dot(dir);
    return sum;
  };
  parallel_for(
      mu.values.size(),
      [&](std::size_t t) {
        const ColoredTriangle tri = colored_triangle(host, delta, t);
        std::array<Eigen::VectorXd, 3> b;
        for (std::size_t i = 0; i < 3; ++i) b[i] = (tri.x[(i + 2) % 3] + tri.x[i]) / 2;  // b(e_i), e_i = [v_{i-1}, v_i]
        double value = 0;
        for (std::size_t i = 0; i < 3; ++i) {
          const std::size_t prev = (i + 2) % 3, next = (i + 1) % 3;
          value += segment(b[i], tri.q[prev], b[i], tri.q[i]);
          value += segment(b[i], tri.q[i], b[next], tri.q[i]);
        }
        if (!std::isfinite(value)) throw QuadratureFailure("non-finite one-form value on triangle " + std::to_string(t));
        mu.values[t] = tri.sign * value;
      },
      policy);
  return mu;
}

Cochain swept_area_cochain(const TwoFormField& omega, const CocycleHost& host, const TargetSimplex& delta,
                           const SweptOptions& opts, ExecPolicy policy) {
  require_host(host, delta);
  if (omega.base_dim() != host.complex->ambient_dim() || omega.fiber_dim() != 2)
    throw DimensionMismatch("two-form does not live on host x R^2");
  const QuadratureRule gl = gauss_legendre(opts.theta_order);
  const int d = omega.base_dim();
  Cochain out = zero_cochain(host.complex, 2);
  parallel_for(
      out.values.size(),
      [&](std::size_t t) {
        const ColoredTriangle tri = colored_triangle(host, delta, t);
        const Eigen::VectorXd center = (tri.x[0] + tri.x[1] + tri.x[2]) / 3;
        double total = 0;
        for (std::size_t i = 0; i < 3; ++i) {
          const std::size_t prev = (i + 2) % 3;
          const Eigen::VectorXd start = (tri.x[prev] + tri.x[i]) / 2;
          const Eigen::VectorXd dx = center - start;
          const Eigen::VectorXd side = tri.q[i] - tri.q[prev];
          // State (v, w, S): v on the transported side, w = dv/dtheta, S = swept area.
          const OdeRhs rhs = [&](double s, const Eigen::VectorXd& y) {
            const Eigen::VectorXd xs = start + s * dx;
            auto flow = [&](const Eigen::VectorXd& v) {
              Eigen::VectorXd p(d + 2);
              p << xs, v;
              return (kernel_map(omega, p) * dx).eval();
            };
            const Eigen::VectorXd v = y.head(2), w = y.segment(2, 2);
            const Eigen::VectorXd vdot = flow(v);
            const double h = opts.fd_step / std::max(1.0, w.norm());
            const Eigen::VectorXd wdot = (flow(v + h * w) - flow(v - h * w)) / (2 * h);
            Eigen::VectorXd out(5);
            out << vdot, wdot, vdot.dot(omega.omega0 * w);
            return out;
          };
          const OdeMonitor guard = [&](double, const Eigen::VectorXd& y) {
            if (!(y.head(2).norm() <= opts.transport.disk_radius)) throw LeftDomain("swept side left the disk bundle");
          };
          for (std::size_t k = 0; k < gl.nodes.size(); ++k) {
            Eigen::VectorXd y(5);
            y << tri.q[prev] + gl.nodes[k] * side, side, 0.0;
            y = integrate_rk4(rhs, 0.0, 1.0, y, opts.transport.ode, nullptr, guard);
            total += gl.weights[k] * y(4);
          }
        }
        out.values[t] = tri.sign * total;
      },
      policy);
  return out;
}

CoboundaryResult coboundary_solve(const Cochain& mu, double rel_tol) {
  if (mu.degree < 1) throw InvalidParams("coboundary solve needs a cochain of degree >= 1");
  const SimplicialComplex& c = *mu.complex;
  const int k = mu.degree;
  const auto rows = static_cast<Eigen::Index>(c.num_simplices(k));
  const auto cols = static_cast<Eigen::Index>(c.num_simplices(k - 1));
  std::vector<Eigen::Triplet<double>> trips;
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto s = c.simplex(k, static_cast<std::size_t>(i));
    for (std::size_t drop = 0; drop < s.size(); ++drop) {
      Simplex f;
      for (std::size_t j = 0; j < s.size(); ++j)
        if (j != drop) f.push_back(s[j]);
      trips.emplace_back(i, static_cast<Eigen::Index>(*c.find(f)), drop % 2 == 0 ? 1.0 : -1.0);
    }
  }
  Eigen::SparseMatrix<double> D(rows, cols);
  D.setFromTriplets(trips.begin(), trips.end());
  const Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(mu.values.data(), rows);

  CoboundaryResult res;
  res.alpha = zero_cochain(mu.complex, k - 1);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(cols);
  if (b.norm() > 0) {
    Eigen::LeastSquaresConjugateGradient<Eigen::SparseMatrix<double>> solver;
    solver.setTolerance(1e-14);
    solver.setMaxIterations(std::max<Eigen::Index>(1000, 20 * cols));
    solver.compute(D);
    x = solver.solveWithGuess(b, Eigen::VectorXd::Zero(cols));
    res.iterations = static_cast<long>(solver.iterations());
  }
  std::copy(x.data(), x.data() + cols, res.alpha.values.begin());
  res.residual = (D * x - b).norm();
  res.relative_residual = b.norm() > 0 ? res.residual / b.norm() : 0.0;
  res.success = res.relative_residual <= rel_tol;
  return res;
}

std::vector<int> fundamental_cycle(const SimplicialComplex& surface) {
  if (surface.dimension() != 2) return {};
  const std::size_t F = surface.num_simplices(2);
  // Edge -> incident triangles.
  std::map<std::pair<VertexId, VertexId>, std::vector<std::size_t>> incident;
  for (std::size_t t = 0; t < F; ++t) {
    const auto s = surface.simplex(2, t);
    incident[{s[0], s[1]}].push_back(t);
    incident[{s[0], s[2]}].push_back(t);
    incident[{s[1], s[2]}].push_back(t);
  }
  for (const auto& [e, ts] : incident)
    if (ts.size() != 2) return {};
  // Orientation of edge (a<b) induced by triangle t with sign eps: +1 if a->b appears in eps*(s0,s1,s2).
  auto induced = [&](std::size_t t, VertexId a, VertexId b) {
    const auto s = surface.simplex(2, t);
    // Ascending (s0,s1,s2) induces s0->s1, s1->s2, s2->s0.
    if ((a == s[0] && b == s[1]) || (a == s[1] && b == s[2])) return 1;
    return -1;  // (s0, s2) is traversed s2 -> s0
  };
  std::vector<int> eps(F, 0);
  for (std::size_t seed = 0; seed < F; ++seed) {
    if (eps[seed] != 0) continue;
    eps[seed] = 1;
    std::deque<std::size_t> queue{seed};
    while (!queue.empty()) {
      const std::size_t t = queue.front();
      queue.pop_front();
      const auto s = surface.simplex(2, t);
      const std::array<std::pair<VertexId, VertexId>, 3> edges{{{s[0], s[1]}, {s[0], s[2]}, {s[1], s[2]}}};
      for (const auto& e : edges) {
        const auto& ts = incident[e];
        const std::size_t u = ts[0] == t ? ts[1] : ts[0];
        const int want = -eps[t] * induced(t, e.first, e.second) * induced(u, e.first, e.second);
        if (eps[u] == 0) {
          eps[u] = want;
          queue.push_back(u);
        } else if (eps[u] != want) {
          return {};
        }
      }
    }
  }
  return eps;
}

double harmonic_residual(const Cochain& mu) {
  const auto eps = fundamental_cycle(*mu.complex);
  if (eps.empty()) throw InvalidParams("host is not a closed orientable surface");
  double s = 0;
  for (std::size_t t = 0; t < eps.size(); ++t) s += eps[t] * mu.values[t];
  return std::abs(s) / std::sqrt(static_cast<double>(eps.size()));
}

}  // namespace thom
