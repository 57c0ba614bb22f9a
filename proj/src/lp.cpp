#include "thomjiggle/lp.hpp"

namespace thom {

namespace {

struct Tableau {
  std::vector<RVec> rows;  // each of length ncols + 1 (last = rhs)
  RVec cost;               // reduced-cost row, last = objective value
  std::vector<std::size_t> basis;
  std::size_t ncols = 0;

  void pivot(std::size_t r, std::size_t c) {
    Rational p = rows[r][c];
    for (auto& v : rows[r]) v /= p;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][c] == 0) continue;
      Rational f = rows[i][c];
      for (std::size_t j = 0; j <= ncols; ++j) rows[i][j] -= f * rows[r][j];
    }
    if (cost[c] != 0) {
      Rational f = cost[c];
      for (std::size_t j = 0; j <= ncols; ++j) cost[j] -= f * rows[r][j];
    }
    basis[r] = c;
  }

  // Returns false on unboundedness.
  bool optimize(std::size_t allowed_cols) {
    for (;;) {
      std::size_t enter = allowed_cols;
      for (std::size_t j = 0; j < allowed_cols; ++j) {
        if (cost[j] < 0) {
          enter = j;
          break;
        }
      }
      if (enter == allowed_cols) return true;
      std::size_t leave = rows.size();
      Rational best;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i][enter] <= 0) continue;
        Rational ratio = rows[i][ncols] / rows[i][enter];
        if (leave == rows.size() || ratio < best || (ratio == best && basis[i] < basis[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == rows.size()) return false;
      pivot(leave, enter);
    }
  }
};

}  // namespace

LpResult solve_lp(const LinearProgram& lp) {
  const std::size_t n = lp.num_vars;
  const std::size_t m_eq = lp.eq_rows.size();
  const std::size_t m_le = lp.le_rows.size();
  const std::size_t m = m_eq + m_le;
  const std::size_t slack0 = n;
  const std::size_t art0 = n + m_le;
  Tableau t;
  t.ncols = n + m_le + m;
  t.rows.assign(m, RVec(t.ncols + 1));
  t.basis.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    RVec& row = t.rows[i];
    const bool is_eq = i < m_eq;
    const RVec& src = is_eq ? lp.eq_rows[i] : lp.le_rows[i - m_eq];
    for (std::size_t j = 0; j < n; ++j) row[j] = src[j];
    row[t.ncols] = is_eq ? lp.eq_rhs[i] : lp.le_rhs[i - m_eq];
    if (!is_eq) row[slack0 + (i - m_eq)] = 1;
    if (row[t.ncols] < 0)
      for (auto& v : row) v = -v;
    row[art0 + i] = 1;
    t.basis[i] = art0 + i;
  }

  // Phase 1: maximize -sum(artificials).
  t.cost.assign(t.ncols + 1, Rational(0));
  for (std::size_t i = 0; i < m; ++i) t.cost[art0 + i] = 1;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j <= t.ncols; ++j) t.cost[j] -= t.rows[i][j];
  t.optimize(t.ncols);
  LpResult result;
  if (t.cost[t.ncols] < 0) {
    result.status = LpStatus::Infeasible;
    return result;
  }
  // Drive remaining artificials out of the basis; drop redundant rows.
  for (std::size_t i = 0; i < t.rows.size();) {
    if (t.basis[i] < art0) {
      ++i;
      continue;
    }
    std::size_t col = art0;
    for (std::size_t j = 0; j < art0; ++j) {
      if (t.rows[i][j] != 0) {
        col = j;
        break;
      }
    }
    if (col == art0) {
      t.rows.erase(t.rows.begin() + static_cast<std::ptrdiff_t>(i));
      t.basis.erase(t.basis.begin() + static_cast<std::ptrdiff_t>(i));
      continue;
    }
    t.pivot(i, col);
    ++i;
  }

  // Phase 2.
  t.cost.assign(t.ncols + 1, Rational(0));
  for (std::size_t j = 0; j < n; ++j) t.cost[j] = -lp.objective[j];
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const std::size_t b = t.basis[i];
    if (t.cost[b] == 0) continue;
    Rational f = t.cost[b];
    for (std::size_t j = 0; j <= t.ncols; ++j) t.cost[j] -= f * t.rows[i][j];
  }
  if (!t.optimize(art0)) {
    result.status = LpStatus::Unbounded;
    return result;
  }
  result.status = LpStatus::Optimal;
  result.value = t.cost[t.ncols];
  result.x.assign(n, Rational(0));
  for (std::size_t i = 0; i < t.rows.size(); ++i)
    if (t.basis[i] < n) result.x[t.basis[i]] = t.rows[i][t.ncols];
  return result;
}

Rational l1_distance(const std::vector<RVec>& a, const std::vector<RVec>& b) {
  const std::size_t d = a.at(0).size();
  const std::size_t na = a.size(), nb = b.size();
  LinearProgram lp;
  lp.num_vars = na + nb + 2 * d;
  lp.objective.assign(lp.num_vars, Rational(0));
  for (std::size_t k = 0; k < 2 * d; ++k) lp.objective[na + nb + k] = -1;
  for (std::size_t k = 0; k < d; ++k) {
    RVec row(lp.num_vars);
    for (std::size_t i = 0; i < na; ++i) row[i] = a[i][k];
    for (std::size_t j = 0; j < nb; ++j) row[na + j] = -b[j][k];
    row[na + nb + k] = -1;
    row[na + nb + d + k] = 1;
    lp.eq_rows.push_back(std::move(row));
    lp.eq_rhs.push_back(0);
  }
  RVec sa(lp.num_vars), sb(lp.num_vars);
  for (std::size_t i = 0; i < na; ++i) sa[i] = 1;
  for (std::size_t j = 0; j < nb; ++j) sb[na + j] = 1;
  lp.eq_rows.push_back(sa);
  lp.eq_rhs.push_back(1);
  lp.eq_rows.push_back(sb);
  lp.eq_rhs.push_back(1);
  LpResult res = solve_lp(lp);
  return -res.value;
}

std::optional<Rational> max_over_neighborhood_intersection(const RVec& c, const std::vector<RVec>& a,
                                                           const Rational& ea, const std::vector<RVec>& b,
                                                           const Rational& eb) {
  const std::size_t d = c.size();
  const std::size_t na = a.size(), nb = b.size();
  // Layout: lambda(na) z+(d) z-(d) mu(nb) w+(d) w-(d)
  const std::size_t zp = na, zm = na + d, mu0 = na + 2 * d, wp = mu0 + nb, wm = wp + d;
  LinearProgram lp;
  lp.num_vars = wm + d;
  lp.objective.assign(lp.num_vars, Rational(0));
  for (std::size_t i = 0; i < na; ++i) lp.objective[i] = dot(c, a[i]);
  for (std::size_t k = 0; k < d; ++k) {
    lp.objective[zp + k] = c[k];
    lp.objective[zm + k] = -c[k];
  }
  for (std::size_t k = 0; k < d; ++k) {
    RVec row(lp.num_vars);
    for (std::size_t i = 0; i < na; ++i) row[i] = a[i][k];
    row[zp + k] = 1;
    row[zm + k] = -1;
    for (std::size_t j = 0; j < nb; ++j) row[mu0 + j] = -b[j][k];
    row[wp + k] = -1;
    row[wm + k] = 1;
    lp.eq_rows.push_back(std::move(row));
    lp.eq_rhs.push_back(0);
  }
  RVec sa(lp.num_vars), sb(lp.num_vars), za(lp.num_vars), wb(lp.num_vars);
  for (std::size_t i = 0; i < na; ++i) sa[i] = 1;
  for (std::size_t j = 0; j < nb; ++j) sb[mu0 + j] = 1;
  for (std::size_t k = 0; k < d; ++k) {
    za[zp + k] = 1;
    za[zm + k] = 1;
    wb[wp + k] = 1;
    wb[wm + k] = 1;
  }
  lp.eq_rows.push_back(sa);
  lp.eq_rhs.push_back(1);
  lp.eq_rows.push_back(sb);
  lp.eq_rhs.push_back(1);
  lp.le_rows.push_back(za);
  lp.le_rhs.push_back(ea);
  lp.le_rows.push_back(wb);
  lp.le_rhs.push_back(eb);
  LpResult res = solve_lp(lp);
  if (res.status != LpStatus::Optimal) return std::nullopt;
  return res.value;
}

}  // namespace thom
