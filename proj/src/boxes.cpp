#include <algorithm>
#include <bit>
#include <map>
#include <set>

#include "thomjiggle/cocycle.hpp"
#include "thomjiggle/errors.hpp"
#include "thomjiggle/exact_linalg.hpp"
#include "thomjiggle/lp.hpp"

namespace thom {

namespace {

std::vector<RVec> face_points(const TargetSimplex& delta, unsigned mask) {
  std::vector<RVec> pts;
  for (std::size_t c = 0; c < delta.vertices.size(); ++c)
    if (mask & (1u << c)) pts.push_back(delta.vertices[c]);
  return pts;
}

std::string face_name(unsigned mask) {
  std::string s = "{";
  for (unsigned c = 0; c < 32; ++c)
    if (mask & (1u << c)) s += (s.size() > 1 ? "," : "") + std::to_string(c);
  return s + "}";
}

/// Generalized cross product of n-1 vectors in R^n (cofactor expansion).
RVec normal_of(const std::vector<RVec>& dirs, std::size_t n) {
  RVec out(n);
  for (std::size_t k = 0; k < n; ++k) {
    RMatrix minor;
    for (const auto& d : dirs) {
      RVec row;
      for (std::size_t j = 0; j < n; ++j)
        if (j != k) row.push_back(d[j]);
      minor.push_back(std::move(row));
    }
    const Rational det = minor.empty() ? Rational(1) : determinant(minor);
    out[k] = (k % 2 == 0) ? det : Rational(-det);
  }
  return out;
}

/// Candidate facet normals of gamma + eps * (L1 ball) in R^n, both signs, scaled to unit max entry.
std::vector<RVec> candidate_normals(const std::vector<RVec>& gamma, std::size_t n) {
  std::vector<RVec> dirs;
  for (std::size_t i = 0; i < gamma.size(); ++i)
    for (std::size_t j = i + 1; j < gamma.size(); ++j) dirs.push_back(gamma[j] - gamma[i]);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (int s : {1, -1}) {
        RVec d(n, Rational(0));
        d[i] = 1;
        d[j] = s;
        dirs.push_back(std::move(d));
      }
  std::set<RVec> out;
  auto add = [&](RVec c) {
    Rational m = 0;
    for (const auto& q : c) m = std::max(m, Rational(abs(q)));
    if (m == 0) return;
    for (auto& q : c) q /= m;
    out.insert(c);
    for (auto& q : c) q = -q;
    out.insert(c);
  };
  if (n == 1) {
    add(RVec{Rational(1)});
    return {out.begin(), out.end()};
  }
  const std::size_t k = n - 1;
  std::vector<std::size_t> pick(k);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t pos, std::size_t from) {
    if (pos == k) {
      std::vector<RVec> chosen;
      for (auto i : pick) chosen.push_back(dirs[i]);
      add(normal_of(chosen, n));
      return;
    }
    for (std::size_t i = from; i < dirs.size(); ++i) {
      pick[pos] = i;
      rec(pos + 1, i + 1);
    }
  };
  rec(0, 0);
  return {out.begin(), out.end()};
}

Rational support(const std::vector<RVec>& pts, const RVec& c) {
  Rational best = dot(c, pts[0]);
  for (const auto& p : pts) best = std::max(best, dot(c, p));
  return best;
}

Rational linf(const RVec& c) {
  Rational m = 0;
  for (const auto& q : c) m = std::max(m, Rational(abs(q)));
  return m;
}

}  // namespace

NeighborhoodReport neighborhood_system_check(const TargetSimplex& delta, const std::vector<Rational>& eps,
                                             const Rational& ball_radius) {
  const std::size_t n = delta.vertices.size() - 1;
  if (n < 1 || n > 8) throw UnsupportedDimension("target simplex dimension out of range");
  if (eps.size() != n) throw InvalidParams("need one epsilon per strict face dimension");
  for (const auto& e : eps)
    if (e <= 0) throw InvalidParams("epsilons must be positive");
  NeighborhoodReport rep;
  rep.condition1 = rep.condition2 = rep.condition3 = true;
  const unsigned full = (1u << (n + 1)) - 1;
  std::vector<unsigned> faces;
  for (unsigned m = 1; m < full; ++m) faces.push_back(m);
  auto eps_of = [&](unsigned m) { return eps[static_cast<std::size_t>(std::popcount(m) - 1)]; };

  for (std::size_t i = 0; i < faces.size(); ++i) {
    for (std::size_t j = i + 1; j < faces.size(); ++j) {
      const unsigned a = faces[i], b = faces[j];
      const unsigned g = a & b;
      if (g == 0) {
        ++rep.pairs_checked;
        ++rep.lps_solved;
        if (!(l1_distance(face_points(delta, a), face_points(delta, b)) > eps_of(a) + eps_of(b))) {
          rep.condition1 = false;
          rep.failures.push_back("condition 1: " + face_name(a) + " and " + face_name(b) + " have meeting neighborhoods");
        }
      } else if ((a & b) != a && (a & b) != b) {
        ++rep.pairs_checked;
        const auto gp = face_points(delta, g);
        for (const auto& c : candidate_normals(gp, n)) {
          ++rep.lps_solved;
          const auto m = max_over_neighborhood_intersection(c, face_points(delta, a), eps_of(a), face_points(delta, b),
                                                            eps_of(b));
          if (m && !(*m < support(gp, c) + eps_of(g) * linf(c))) {
            rep.condition2 = false;
            rep.failures.push_back("condition 2: N" + face_name(a) + " and N" + face_name(b) + " reach the boundary of N" +
                                   face_name(g));
            break;
          }
        }
      }
    }
  }
  const Rational r2 = ball_radius * ball_radius;
  auto inside_ball = [&](unsigned f) {
    const Rational e = eps_of(f);
    for (const auto& p : face_points(delta, f))
      for (std::size_t k = 0; k < n; ++k)
        for (int s : {1, -1}) {
          RVec q = p;
          q[k] += s * e;
          if (!(squared_norm(q) < r2)) return false;
        }
    return true;
  };
  for (unsigned f : faces)
    if (!inside_ball(f)) {
      rep.condition3 = false;
      rep.failures.push_back("condition 3: N" + face_name(f) + " leaves the ball");
    }
  rep.pass = rep.condition1 && rep.condition2 && rep.condition3;
  return rep;
}

bool in_neighborhood(const TargetSimplex& delta, const std::vector<Rational>& eps, const std::vector<int>& face,
                     const RVec& v) {
  const std::size_t n = delta.vertices.size() - 1;
  unsigned mask = 0;
  for (int c : face) mask |= 1u << static_cast<unsigned>(c);
  const unsigned full = (1u << (n + 1)) - 1;
  if (mask == full) {
    if (auto b = barycentric(delta.vertices, v)) {
      if (std::all_of(b->begin(), b->end(), [](const Rational& q) { return q >= 0; })) return true;
    }
    for (unsigned m = 1; m < full; ++m)
      if (l1_distance({v}, face_points(delta, m)) <= eps[static_cast<std::size_t>(std::popcount(m) - 1)]) return true;
    return false;
  }
  return l1_distance({v}, face_points(delta, mask)) <= eps[static_cast<std::size_t>(std::popcount(mask) - 1)];
}

BoxSystem make_box_system(const FoldingTower& tower, TargetSimplex delta, std::vector<Rational> eps, Rational eta,
                          Rational ball_radius) {
  if (!(eta > 0 && eta < 1)) throw InvalidParams("eta must lie in (0,1)");
  const auto rep = neighborhood_system_check(delta, eps, ball_radius);
  if (!rep.pass) throw InvalidParams("neighborhood system fails: " + rep.failures.front());
  const CocycleHost h = host_from_tower(tower, "box host");
  BoxSystem s;
  s.host = h.complex;
  s.colors = h.colors;
  s.delta = std::move(delta);
  s.eps = std::move(eps);
  s.eta = std::move(eta);
  s.ball_radius = std::move(ball_radius);
  return s;
}

CoverageReport box_cover(const BoxSystem& system, const TwoFormField& omega, const PLSection& section,
                         int samples_per_dim, const TransportOptions& transport, ExecPolicy policy) {
  const SimplicialComplex& h = *system.host;
  if (section.base.get() != system.host.get() && section.base->num_vertices() != h.num_vertices())
    throw DomainMismatch("section does not live on the box system's host");
  if (samples_per_dim < 1) throw InvalidParams("need at least one sample per dimension");
  const int n = h.dimension();
  const auto N = static_cast<unsigned>(samples_per_dim);
  const auto k1 = static_cast<std::size_t>(n + 1);

  // Exact barycentric lattice with denominator N.
  std::vector<std::vector<unsigned>> lattice;
  {
    std::vector<unsigned> a(k1, 0);
    std::function<void(std::size_t, unsigned)> rec = [&](std::size_t pos, unsigned left) {
      if (pos + 1 == k1) {
        a[pos] = left;
        lattice.push_back(a);
        return;
      }
      for (unsigned v = 0; v <= left; ++v) {
        a[pos] = v;
        rec(pos + 1, left - v);
      }
    };
    rec(0, N);
  }

  const std::size_t tops = h.num_simplices(n);
  struct TopResult {
    std::size_t uncovered = 0, violations = 0;
    double displacement = 0;
  };
  std::vector<TopResult> results(tops);
  const Rational shrink = 1 - system.eta;
  parallel_for(
      tops,
      [&](std::size_t ti) {
        const auto s = h.simplex(n, ti);
        const auto pts = h.realize(s);
        std::vector<RVec> lifts;
        for (VertexId v : s) lifts.push_back(section.lift[h.vertex_index(v)]);
        TopResult& out = results[ti];
        for (const auto& a : lattice) {
          RVec lam(k1);
          for (std::size_t j = 0; j < k1; ++j) lam[j] = Rational(a[j], N);
          RVec x(pts[0].size(), Rational(0)), z(lifts[0].size(), Rational(0));
          for (std::size_t j = 0; j < k1; ++j) {
            x = x + lam[j] * pts[j];
            z = z + lam[j] * lifts[j];
          }
          std::vector<unsigned> inside;
          for (unsigned f = 1; f < (1u << k1); ++f) {
            // Face tau of this top; y = b + (x - b) / (1 - eta) must stay in the top.
            const Rational share(1, std::popcount(f));
            bool ok = true;
            for (std::size_t j = 0; j < k1 && ok; ++j) {
              const Rational bj = (f & (1u << j)) ? share : Rational(0);
              ok = bj + (lam[j] - bj) / shrink >= 0;
            }
            if (!ok) continue;
            RVec b(pts[0].size(), Rational(0));
            std::vector<int> face;
            for (std::size_t j = 0; j < k1; ++j)
              if (f & (1u << j)) {
                b = b + share * pts[j];
                face.push_back(system.colors[h.vertex_index(s[j])]);
              }
            const Eigen::VectorXd v0 = to_eigen(z);
            const Eigen::VectorXd landed = holonomy_transport(omega, {to_eigen(x), to_eigen(b)}, v0, transport);
            out.displacement = std::max(out.displacement, (landed - v0).norm());
            RVec lv(static_cast<std::size_t>(landed.size()));
            for (Eigen::Index q = 0; q < landed.size(); ++q) lv[static_cast<std::size_t>(q)] = from_double(landed(q));
            if (in_neighborhood(system.delta, system.eps, face, lv)) inside.push_back(f);
          }
          if (inside.empty()) ++out.uncovered;
          for (std::size_t p = 0; p < inside.size(); ++p)
            for (std::size_t q = p + 1; q < inside.size(); ++q)
              if ((inside[p] & inside[q]) == 0) ++out.violations;
        }
      },
      policy);

  CoverageReport rep;
  rep.simplices = tops;
  for (const auto& r : results) {
    rep.samples += lattice.size();
    rep.uncovered_samples += r.uncovered;
    rep.disjointness_violations += r.violations;
    rep.max_displacement = std::max(rep.max_displacement, r.displacement);
    if (r.uncovered == 0) ++rep.covered_simplices;
  }
  rep.pass = rep.uncovered_samples == 0 && rep.disjointness_violations == 0;
  return rep;
}

}  // namespace thom
