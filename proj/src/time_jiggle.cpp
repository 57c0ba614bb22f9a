#include <algorithm>
#include <cmath>
#include <random>

#include "thomjiggle/collapse.hpp"
#include "thomjiggle/errors.hpp"
#include "thomjiggle/holonomy.hpp"

namespace thom {

TimeJiggleResult time_jiggle(const EmbeddedPrism& ep, const PlaneField& field, std::uint64_t seed,
                             const TimeJiggleOptions& opts) {
  const SimplicialComplex& c = *ep.embedded;
  if (c.ambient_dim() != field.ambient_dim() || !field.timed)
    throw DimensionMismatch("time jiggling needs a timed field on base x fibre x time");
  if (!(opts.bound >= 0) || opts.radius_levels < 1 || opts.attempts_per_level < 1)
    throw InvalidParams("time jiggling needs a non-negative bound and at least one attempt");
  const int n = ep.fiber_dim;
  const int d = ep.prism.source->ambient_dim();
  const std::size_t V = ep.prism.source->num_vertices();

  TimeJiggleResult res;
  res.before = certify_transversality(c, field, opts.certify);

  // Chart coordinates of every simplex, in doubles; displacements are added on top.
  struct Cell {
    int dim;
    Simplex verts;
    std::vector<Eigen::VectorXd> pts;
  };
  std::vector<Cell> cells;
  for (int k = 1; k <= c.dimension(); ++k)
    for (std::size_t i = 0; i < c.num_simplices(k); ++i) {
      Cell cell{k, c.simplex_vec(k, i), {}};
      for (const auto& g : c.realize(cell.verts)) cell.pts.push_back(to_eigen(g));
      cells.push_back(std::move(cell));
    }
  std::vector<std::vector<std::vector<double>>> lattice(static_cast<std::size_t>(c.dimension() + 1));
  for (int k = 1; k <= c.dimension(); ++k)
    lattice[static_cast<std::size_t>(k)] =
        barycentric_lattice(k, field.constant ? 0 : opts.certify.samples_per_dim);

  std::vector<VertexId> movable;
  for (std::size_t k = 1; k < ep.prism.slices(); k += 2)
    for (std::size_t i = 0; i < V; ++i) movable.push_back(static_cast<VertexId>(k * V + i));
  std::vector<std::size_t> turn(c.num_vertices(), 0);  // 1 + position in `movable`, 0 when fixed
  for (std::size_t i = 0; i < movable.size(); ++i) turn[c.vertex_index(movable[i])] = i + 1;

  // Each simplex is owned by its last movable vertex.
  std::vector<std::vector<std::size_t>> owned(movable.size());
  for (std::size_t j = 0; j < cells.size(); ++j) {
    std::size_t last = 0;
    for (VertexId v : cells[j].verts) last = std::max(last, turn[c.vertex_index(v)]);
    if (last > 0) owned[last - 1].push_back(j);
  }

  std::vector<Eigen::VectorXd> disp(c.num_vertices(), Eigen::VectorXd::Zero(n));
  auto margin_of = [&](const Cell& cell) {
    std::vector<Eigen::VectorXd> pts = cell.pts;
    for (std::size_t q = 0; q < pts.size(); ++q) pts[q].segment(d, n) += disp[c.vertex_index(cell.verts[q])];
    return simplex_margin(pts, field, lattice[static_cast<std::size_t>(cell.dim)]);
  };
  auto owned_min = [&](std::size_t m) {
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t j : owned[m]) worst = std::min(worst, margin_of(cells[j]));
    return worst;
  };

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  for (std::size_t m = 0; m < movable.size(); ++m) {
    const std::size_t vi = c.vertex_index(movable[m]);
    VertexMove mv;
    mv.vertex = movable[m];
    double worst = owned_min(m);
    bool ok = worst > opts.certify.threshold;
    // Best of the samples at the first radius where any sample passes.
    for (int level = 0; level < opts.radius_levels && !ok; ++level) {
      const double radius = std::ldexp(opts.bound, -level);
      Eigen::VectorXd best;
      double best_margin = -std::numeric_limits<double>::infinity();
      for (int a = 0; a < opts.attempts_per_level; ++a) {
        Eigen::VectorXd X(n);
        for (int q = 0; q < n; ++q) X(q) = gauss(rng);
        X *= radius / X.norm();
        // Round to the exact rational that will be stored.
        for (int q = 0; q < n; ++q) X(q) = to_double(from_double(X(q)));
        disp[vi] = X;
        const double mm = owned_min(m);
        if (mm > best_margin) {
          best_margin = mm;
          best = X;
        }
        if (!(mm > opts.certify.threshold)) ++mv.rejected;
      }
      worst = std::max(worst, best_margin);
      disp[vi] = best;
      if (best_margin > opts.certify.threshold) {
        ok = true;
        mv.level = level;
      }
    }
    if (!ok)
      throw RejectionExhausted("no displacement found for vertex " + std::to_string(mv.vertex) +
                               " (best margin " + std::to_string(worst) + ")");
    if (mv.level < 0) disp[vi].setZero();
    mv.displacement.assign(disp[vi].data(), disp[vi].data() + n);
    res.moves.push_back(std::move(mv));
  }

  std::vector<VertexRecord> verts;
  for (std::size_t i = 0; i < c.num_vertices(); ++i) {
    RVec p = c.coords_at(i);
    for (int q = 0; q < n; ++q) p[static_cast<std::size_t>(d + q)] += from_double(disp[i](q));
    verts.push_back({c.vertex_ids()[i], std::move(p)});
  }
  res.prism = ep;
  res.prism.embedded =
      build_complex(c.ambient_dim(), std::move(verts), c.maximal_simplices(), std::nullopt, {c.periodic_dims(), true});
  res.after = certify_transversality(*res.prism.embedded, field, opts.certify);
  return res;
}

double plane_angle(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionMismatch("planes differ in shape");
  const Eigen::MatrixXd qa = Eigen::HouseholderQR<Eigen::MatrixXd>(a).householderQ() *
                             Eigen::MatrixXd::Identity(a.rows(), a.cols());
  const Eigen::MatrixXd qb = Eigen::HouseholderQR<Eigen::MatrixXd>(b).householderQ() *
                             Eigen::MatrixXd::Identity(b.rows(), b.cols());
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(qa.transpose() * qb);
  const double s = std::clamp(svd.singularValues().minCoeff(), -1.0, 1.0);
  return std::acos(s);
}

std::vector<Rational> refine_time_grid(const PlaneField& timed_field, const std::vector<Eigen::VectorXd>& probes,
                                       std::vector<Rational> grid, double max_degrees, int max_slabs) {
  if (!timed_field.timed) throw InvalidParams("field is not timed");
  if (grid.size() < 2) throw InvalidParams("time grid needs at least two entries");
  for (std::size_t k = 1; k < grid.size(); ++k)
    if (!(grid[k - 1] < grid[k])) throw InvalidParams("time grid must be strictly increasing");
  const double limit = max_degrees * M_PI / 180.0;
  auto at = [&](const Eigen::VectorXd& p, const Rational& t) {
    Eigen::VectorXd q(p.size() + 1);
    q << p, to_double(t);
    return timed_field.basis(q);
  };
  auto too_steep = [&](const Rational& a, const Rational& b) {
    for (const auto& p : probes)
      if (plane_angle(at(p, a), at(p, b)) >= limit) return true;
    return false;
  };
  for (;;) {
    std::vector<Rational> next{grid.front()};
    bool split = false;
    for (std::size_t k = 1; k < grid.size(); ++k) {
      if (too_steep(grid[k - 1], grid[k])) {
        next.push_back((grid[k - 1] + grid[k]) / 2);
        split = true;
      }
      next.push_back(grid[k]);
    }
    grid = std::move(next);
    if (!split) return grid;
    if (static_cast<int>(grid.size()) - 1 > max_slabs) throw SizeLimitExceeded("time grid refinement did not settle");
  }
}

}  // namespace thom
