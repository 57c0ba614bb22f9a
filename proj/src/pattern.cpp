#include <algorithm>
#include <map>

#include "thomjiggle/errors.hpp"
#include "thomjiggle/exact_linalg.hpp"
#include "thomjiggle/subdivision.hpp"

namespace thom {

namespace {

void check_params(int n, const PatternParams& p) {
  if (n < 0) throw InvalidParams("pattern dimension must be non-negative");
  if (!(p.u1 > 0 && p.u1 < p.u0 && p.u0 < 1)) throw InvalidParams("need 0 < u1 < u0 < 1");
  if (!(p.t > 0 && p.t < 1)) throw InvalidParams("need 0 < t < 1");
  if (n >= 2 && p.t * n >= 1)
    throw InvalidParams("t must be below 1/n so the reflected simplex stays inside Delta^n");
}

PatternData build_level(int n, const PatternParams& params, const std::vector<PatternData>& lower) {
  PatternData out;
  out.n = n;
  const auto np1 = static_cast<std::size_t>(n + 1);
  if (n == 0) {
    out.bary = {RVec{Rational(1)}};
    out.sigma = {0};
    out.tops = {{0}};
    return out;
  }
  std::map<RVec, int> index;
  auto add = [&](const RVec& b, int sigma) {
    auto it = index.find(b);
    if (it != index.end()) {
      if (out.sigma[static_cast<std::size_t>(it->second)] != sigma)
        throw GluingConflict("pattern vertex receives two folding images");
      return it->second;
    }
    const int id = static_cast<int>(out.bary.size());
    index.emplace(b, id);
    out.bary.push_back(b);
    out.sigma.push_back(sigma);
    return id;
  };
  for (std::size_t j = 0; j < np1; ++j) {
    RVec e(np1, Rational(0));
    e[j] = 1;
    add(e, static_cast<int>(j));
  }
  // Interior simplex: delta-vertex j is the reflected copy of corner j and folds onto it.
  std::vector<int> delta(np1);
  for (std::size_t j = 0; j < np1; ++j) {
    RVec d(np1);
    if (n == 1) {
      const Rational& u = (j == 1) ? params.u1 : params.u0;
      d[0] = 1 - u;
      d[1] = u;
    } else {
      const Rational g = (1 + params.t) / Rational(n + 1);
      for (std::size_t i = 0; i < np1; ++i) d[i] = g;
      d[j] -= params.t;
    }
    delta[j] = add(d, static_cast<int>(j));
  }
  // Joins phi * (pattern on F(phi)), F(phi) = face spanned by the corners outside phi.
  for (unsigned mask = 1; mask < (1u << np1); ++mask) {
    std::vector<int> phi;
    std::vector<std::size_t> face;
    for (std::size_t j = 0; j < np1; ++j) {
      if (mask & (1u << j))
        phi.push_back(delta[j]);
      else
        face.push_back(j);
    }
    if (face.empty()) {
      out.tops.push_back(phi);
      continue;
    }
    const PatternData& low = lower[face.size() - 1];
    std::vector<int> embedded(low.bary.size());
    for (std::size_t v = 0; v < low.bary.size(); ++v) {
      RVec b(np1, Rational(0));
      for (std::size_t i = 0; i < face.size(); ++i) b[face[i]] = low.bary[v][i];
      embedded[v] = add(b, static_cast<int>(face[static_cast<std::size_t>(low.sigma[v])]));
    }
    for (const auto& top : low.tops) {
      std::vector<int> s = phi;
      for (int v : top) s.push_back(embedded[static_cast<std::size_t>(v)]);
      out.tops.push_back(std::move(s));
    }
  }
  for (auto& s : out.tops) std::sort(s.begin(), s.end());
  std::sort(out.tops.begin(), out.tops.end());
  return out;
}

ThomPattern realize(std::vector<PatternData> levels, const PatternParams& params) {
  ThomPattern p;
  p.n = levels.back().n;
  p.params = params;
  p.levels = std::move(levels);
  const PatternData& d = p.data();
  std::vector<VertexRecord> verts;
  for (std::size_t i = 0; i < d.bary.size(); ++i) verts.push_back({static_cast<VertexId>(i), bary_to_cartesian(d.bary[i])});
  std::vector<Simplex> tops;
  for (const auto& s : d.tops) tops.emplace_back(s.begin(), s.end());
  BuildOptions opt;
  opt.validate = false;  // degeneracy is reported by verify_pattern instead
  p.pattern = build_complex(p.n, std::move(verts), tops, std::nullopt, opt);
  p.simplex = standard_simplex(p.n);
  std::vector<VertexId> images(d.sigma.begin(), d.sigma.end());
  p.sigma = make_simplicial_map(p.pattern, p.simplex, std::move(images), false);
  return p;
}

std::vector<PatternData> build_levels(int n, const PatternParams& params) {
  std::vector<PatternData> levels;
  for (int k = 0; k <= n; ++k) levels.push_back(build_level(k, params, levels));
  return levels;
}

}  // namespace

RVec bary_to_cartesian(const RVec& bary) { return RVec(bary.begin() + 1, bary.end()); }

ThomPattern thom_pattern_unchecked(int n, PatternParams params) {
  check_params(n, params);
  return realize(build_levels(n, params), params);
}

ThomPattern pattern_from_data(PatternData top, std::vector<PatternData> lower, PatternParams params) {
  lower.push_back(std::move(top));
  return realize(std::move(lower), params);
}

ThomPattern thom_pattern(int n, PatternParams params) {
  check_params(n, params);
  ThomPattern p = thom_pattern_unchecked(n, params);
  PatternReport rep = verify_pattern(p);
  if (rep.pass) return p;
  if (n >= 3 && !rep.tiling.pass && rep.nondegenerate && rep.heredity) {
    const std::vector<Rational> grid = {Rational(1, 4), Rational(1, 5), Rational(1, 6), Rational(1, 8),
                                        Rational(1, 12), Rational(1, 16)};
    for (const auto& t : grid) {
      if (t * n >= 1 || t == params.t) continue;
      PatternParams q = params;
      q.t = t;
      ThomPattern alt = thom_pattern_unchecked(n, q);
      if (verify_pattern(alt).pass) return alt;
    }
  }
  std::string why;
  if (!rep.tiling.pass) why = rep.tiling.failure;
  if (!rep.nondegeneracy_failures.empty()) why += "; " + rep.nondegeneracy_failures.front();
  if (!rep.heredity_failures.empty()) why += "; " + rep.heredity_failures.front();
  throw TilingFailure("pattern of dimension " + std::to_string(n) + " failed verification: " + why);
}

PatternReport verify_pattern(const ThomPattern& p) {
  PatternReport rep;
  const PatternData& d = p.data();
  const int n = p.n;
  rep.top_count = d.tops.size();
  for (const auto& top : d.tops) {
    std::vector<int> img;
    for (int v : top) img.push_back(d.sigma[static_cast<std::size_t>(v)]);
    std::sort(img.begin(), img.end());
    const bool surjective = std::adjacent_find(img.begin(), img.end()) == img.end() &&
                            static_cast<int>(img.size()) == n + 1;
    if (surjective) {
      ++rep.surjective;
    } else {
      std::string s = "simplex (";
      for (std::size_t i = 0; i < top.size(); ++i) s += (i ? "," : "") + std::to_string(top[i]);
      rep.nondegeneracy_failures.push_back(s + ") folds onto a proper face");
    }
  }
  rep.nondegenerate = rep.nondegeneracy_failures.empty();

  // Heredity: the part of the pattern inside facet j against the freestanding (n-1)-pattern.
  rep.heredity = true;
  if (n >= 1) {
    const PatternData& low = p.levels[static_cast<std::size_t>(n - 1)];
    std::vector<VertexRecord> low_verts;
    std::map<VertexId, int> low_labels;
    for (std::size_t i = 0; i < low.bary.size(); ++i) {
      low_verts.push_back({static_cast<VertexId>(i), bary_to_cartesian(low.bary[i])});
      low_labels[static_cast<VertexId>(i)] = low.sigma[i];
    }
    std::vector<Simplex> low_tops;
    for (const auto& s : low.tops) low_tops.emplace_back(s.begin(), s.end());
    BuildOptions lopt;
    lopt.validate = false;
    ComplexPtr low_c = build_complex(n - 1, low_verts, low_tops, std::nullopt, lopt);
    for (int j = 0; j <= n; ++j) {
      const auto ju = static_cast<std::size_t>(j);
      std::vector<VertexRecord> verts;
      std::map<VertexId, int> labels;
      for (std::size_t v = 0; v < d.bary.size(); ++v) {
        if (d.bary[v][ju] != 0) continue;
        RVec b;
        for (std::size_t i = 0; i < d.bary[v].size(); ++i)
          if (i != ju) b.push_back(d.bary[v][i]);
        verts.push_back({static_cast<VertexId>(v), bary_to_cartesian(b)});
        const int s = d.sigma[v];
        labels[static_cast<VertexId>(v)] = (s == j) ? -1 : (s < j ? s : s - 1);
      }
      std::vector<Simplex> facet_simplices;
      for (int k = 0; k <= p.pattern->dimension(); ++k)
        for (std::size_t i = 0; i < p.pattern->num_simplices(k); ++i) {
          auto s = p.pattern->simplex(k, i);
          bool inside = std::all_of(s.begin(), s.end(), [&](VertexId v) { return d.bary[v][ju] == 0; });
          if (inside) facet_simplices.push_back(p.pattern->simplex_vec(k, i));
        }
      BuildOptions fopt;
      fopt.validate = false;
      ComplexPtr facet = build_complex(n - 1, verts, facet_simplices, std::nullopt, fopt);
      IsomorphismOptions iso;
      iso.labels_a = labels;
      iso.labels_b = low_labels;
      auto found = find_isomorphism(*facet, *low_c, iso);
      if (!found) {
        rep.heredity = false;
        rep.heredity_failures.push_back("facet opposite corner " + std::to_string(j) +
                                        " is not sigma-compatibly isomorphic to the lower pattern");
      }
    }
  }

  if (n == 0) {
    rep.tiling.pass = true;
    rep.tiling.volume_sum = rep.tiling.region_volume = 1;
  } else {
    try {
      std::vector<VertexRecord> verts;
      for (std::size_t i = 0; i < d.bary.size(); ++i)
        verts.push_back({static_cast<VertexId>(i), bary_to_cartesian(d.bary[i])});
      ComplexPtr checked = build_complex(n, verts, p.pattern->maximal_simplices());
      rep.tiling = tiling_check(checked, standard_simplex_points(n));
    } catch (const DegenerateSimplex& e) {
      rep.tiling.pass = false;
      rep.tiling.failure = e.what();
    }
  }
  rep.pass = rep.nondegenerate && rep.heredity && rep.tiling.pass;
  return rep;
}

UnfoldingSnapshot unfolding_homotopy(const ThomPattern& p, const Rational& s) {
  if (s < 0 || s > 1) throw InvalidTime("unfolding time must lie in [0,1]");
  const PatternData& d = p.data();
  const auto np1 = static_cast<std::size_t>(p.n + 1);
  UnfoldingSnapshot snap;
  for (std::size_t v = 0; v < d.bary.size(); ++v) {
    // Each vertex is interior to its supporting face; it and its image slide
    // toward that face's barycenter, which restricts to the lower homotopy on faces.
    std::size_t support = 0;
    for (const auto& q : d.bary[v])
      if (q != 0) ++support;
    RVec g(np1, Rational(0));
    for (std::size_t i = 0; i < np1; ++i)
      if (d.bary[v][i] != 0) g[i] = Rational(1, static_cast<long>(support));
    RVec e(np1, Rational(0));
    e[static_cast<std::size_t>(d.sigma[v])] = 1;
    snap.domain.push_back((1 - s) * d.bary[v] + s * g);
    snap.image.push_back((1 - s) * e + s * g);
  }
  return snap;
}

SnapshotRank snapshot_rank(const ThomPattern& p, const UnfoldingSnapshot& snap) {
  SnapshotRank out;
  const PatternData& d = p.data();
  const auto n = static_cast<std::size_t>(p.n);
  for (const auto& top : d.tops) {
    ++out.tops;
    std::vector<RVec> img, dom, dom0;
    for (int v : top) {
      img.push_back(bary_to_cartesian(snap.image[static_cast<std::size_t>(v)]));
      dom.push_back(bary_to_cartesian(snap.domain[static_cast<std::size_t>(v)]));
      dom0.push_back(bary_to_cartesian(d.bary[static_cast<std::size_t>(v)]));
    }
    if (rank(edge_matrix(img)) == n) ++out.full_rank;
    if (n == 0) {
      ++out.orientation_kept;
      continue;
    }
    const Rational a = determinant(edge_matrix(dom));
    const Rational b = determinant(edge_matrix(dom0));
    if (a != 0 && sgn(a) == sgn(b)) ++out.orientation_kept;
  }
  return out;
}

}  // namespace thom
