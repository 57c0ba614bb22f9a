#include <algorithm>
#include <map>
#include <queue>
#include <random>
#include <set>
#include <tuple>

#include "thomjiggle/collapse.hpp"
#include "thomjiggle/errors.hpp"

namespace thom {
namespace {

bool dim_lex_less(const Simplex& a, const Simplex& b) { return a.size() != b.size() ? a.size() < b.size() : a < b; }

// All simplices of c with codimension-one incidences, indexed in (dim, lex) order.
struct Hasse {
  std::vector<Simplex> cells;
  std::vector<std::vector<std::size_t>> faces;
  std::vector<std::vector<std::size_t>> cofaces;

  explicit Hasse(const SimplicialComplex& c) {
    for (int k = 0; k <= c.dimension(); ++k)
      for (const auto& s : c.simplices(k)) cells.push_back(s);
    std::map<Simplex, std::size_t> index;
    for (std::size_t i = 0; i < cells.size(); ++i) index.emplace(cells[i], i);
    faces.resize(cells.size());
    cofaces.resize(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (cells[i].size() < 2) continue;
      for (std::size_t drop = 0; drop < cells[i].size(); ++drop) {
        Simplex f = cells[i];
        f.erase(f.begin() + static_cast<std::ptrdiff_t>(drop));
        const std::size_t j = index.at(f);
        faces[i].push_back(j);
        cofaces[j].push_back(i);
      }
    }
  }

  std::size_t index_of(const Simplex& s) const {
    auto it = std::lower_bound(cells.begin(), cells.end(), s, dim_lex_less);
    if (it == cells.end() || *it != s) throw UnknownSimplex("simplex is not in the complex");
    return static_cast<std::size_t>(it - cells.begin());
  }
};

struct Attempt {
  bool success = false;
  std::vector<CollapseStep> steps;
  std::vector<Simplex> remaining;
};

Attempt greedy(const Hasse& h, const std::vector<char>& in_target, const std::vector<double>& prio,
               const std::vector<std::uint64_t>& tie) {
  const std::size_t N = h.cells.size();
  std::vector<char> alive(N, 1);
  std::vector<int> count(N, 0);
  for (std::size_t i = 0; i < N; ++i) count[i] = static_cast<int>(h.cofaces[i].size());

  // Key: higher priority of the coface, higher dimension, then tie rank, then index.
  using Key = std::tuple<double, std::size_t, std::uint64_t, std::size_t>;
  auto coface_of = [&](std::size_t f) {
    for (std::size_t g : h.cofaces[f])
      if (alive[g]) return g;
    return N;
  };
  auto key_of = [&](std::size_t f) {
    const std::size_t g = coface_of(f);
    return Key{-prio[g], N - h.cells[g].size(), tie[f], f};
  };
  // Stale entries are skipped on pop.
  std::priority_queue<Key, std::vector<Key>, std::greater<Key>> heap;
  auto push_if_free = [&](std::size_t f) {
    if (alive[f] && !in_target[f] && count[f] == 1) heap.push(key_of(f));
  };
  for (std::size_t i = 0; i < N; ++i) push_if_free(i);

  Attempt out;
  while (!heap.empty()) {
    const Key top = heap.top();
    heap.pop();
    const std::size_t f = std::get<3>(top);
    if (!alive[f] || in_target[f] || count[f] != 1) continue;
    if (key_of(f) != top) continue;
    const std::size_t g = coface_of(f);
    out.steps.push_back({h.cells[f], h.cells[g]});
    alive[f] = alive[g] = 0;
    for (std::size_t x : h.faces[g]) {
      --count[x];
      push_if_free(x);
    }
    for (std::size_t x : h.faces[f]) {
      --count[x];
      push_if_free(x);
    }
  }
  for (std::size_t i = 0; i < N; ++i)
    if (alive[i]) out.remaining.push_back(h.cells[i]);
  out.success = true;
  for (std::size_t i = 0; i < N; ++i)
    if (alive[i] != in_target[i]) out.success = false;
  return out;
}

}  // namespace

CollapseResult collapse_sequence(const ComplexPtr& c, const Subcomplex& target, const CollapseOptions& opts) {
  const Hasse h(*c);
  const std::size_t N = h.cells.size();
  std::vector<char> in_target(N, 0);
  for (const auto& s : target.simplices) in_target[h.index_of(s)] = 1;
  for (std::size_t i = 0; i < N; ++i)
    if (in_target[i])
      for (std::size_t f : h.faces[i])
        if (!in_target[f]) throw InvalidParams("target is not face-closed");

  std::vector<double> prio(N, 0.0);
  if (opts.priority)
    for (std::size_t i = 0; i < N; ++i) prio[i] = opts.priority(h.cells[i]);

  std::mt19937_64 rng(opts.seed);
  CollapseResult res;
  Attempt best;
  for (int attempt = 0; attempt <= std::max(0, opts.restarts); ++attempt) {
    std::vector<std::uint64_t> tie(N, 0);
    if (attempt > 0)
      for (auto& t : tie) t = rng();
    Attempt a = greedy(h, in_target, prio, tie);
    res.attempts = attempt + 1;
    if (attempt == 0 || a.remaining.size() < best.remaining.size()) best = std::move(a);
    if (best.success) break;
  }
  res.success = best.success;
  res.steps = std::move(best.steps);
  res.remaining = std::move(best.remaining);
  return res;
}

std::function<double(const Simplex&)> latest_time_priority(const PrismComplex& pc) {
  std::vector<double> t;
  for (const auto& q : pc.times) t.push_back(to_double(q));
  const std::size_t V = pc.source->num_vertices();
  return [t, V](const Simplex& s) {
    double m = -std::numeric_limits<double>::infinity();
    for (VertexId v : s) m = std::max(m, t[v / V]);
    return m;
  };
}

CollapseVerification verify_collapse(const ComplexPtr& c, const Subcomplex& target,
                                     const std::vector<CollapseStep>& steps) {
  CollapseVerification out;
  std::set<Simplex> alive;
  for (int k = 0; k <= c->dimension(); ++k)
    for (const auto& s : c->simplices(k)) alive.insert(s);
  const std::set<Simplex> tgt(target.simplices.begin(), target.simplices.end());
  auto is_face = [](const Simplex& f, const Simplex& g) {
    return f.size() < g.size() && std::includes(g.begin(), g.end(), f.begin(), f.end());
  };

  for (std::size_t i = 0; i < steps.size(); ++i) {
    const auto& [f, g] = steps[i];
    out.failed_step = i;
    if (!alive.count(f) || !alive.count(g)) {
      out.reason = "step removes a simplex that is already gone";
      return out;
    }
    if (tgt.count(f) || tgt.count(g)) {
      out.reason = "step removes a target simplex";
      return out;
    }
    if (g.size() != f.size() + 1 || !is_face(f, g)) {
      out.reason = "pair is not a codimension-one face relation";
      return out;
    }
    for (const auto& s : alive)
      if (s != g && is_face(f, s)) {
        out.reason = "face is not free";
        return out;
      }
    alive.erase(f);
    alive.erase(g);
  }
  out.failed_step = steps.size();
  if (alive != tgt) {
    out.reason = "sequence does not end at the target";
    return out;
  }
  out.valid = true;

  // Matching-modified Hasse diagram: edges point from a simplex to its faces,
  // reversed along matched pairs.
  std::vector<Simplex> cells;
  for (int k = 0; k <= c->dimension(); ++k)
    for (const auto& s : c->simplices(k)) cells.push_back(s);
  std::map<Simplex, std::size_t> index;
  for (std::size_t i = 0; i < cells.size(); ++i) index.emplace(cells[i], i);
  std::map<std::size_t, std::size_t> match;  // face -> coface
  for (const auto& st : steps) match[index.at(st.face)] = index.at(st.coface);
  std::vector<std::vector<std::size_t>> adj(cells.size());
  std::vector<std::size_t> indeg(cells.size(), 0);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (cells[i].size() < 2) continue;
    for (std::size_t drop = 0; drop < cells[i].size(); ++drop) {
      Simplex f = cells[i];
      f.erase(f.begin() + static_cast<std::ptrdiff_t>(drop));
      const std::size_t j = index.at(f);
      auto it = match.find(j);
      if (it != match.end() && it->second == i) adj[j].push_back(i);
      else adj[i].push_back(j);
    }
  }
  for (const auto& a : adj)
    for (std::size_t j : a) ++indeg[j];
  std::vector<std::size_t> ready;
  for (std::size_t i = 0; i < cells.size(); ++i)
    if (indeg[i] == 0) ready.push_back(i);
  std::size_t seen = 0;
  while (!ready.empty()) {
    const std::size_t i = ready.back();
    ready.pop_back();
    ++seen;
    for (std::size_t j : adj[i])
      if (--indeg[j] == 0) ready.push_back(j);
  }
  out.acyclic = seen == cells.size();
  if (!out.acyclic) out.reason = "matching has a cycle";
  return out;
}

}  // namespace thom
