#include "thomjiggle/exact_linalg.hpp"

#include <algorithm>
#include <cstdlib>

namespace thom {

std::size_t rank(RMatrix rows) {
  if (rows.empty()) return 0;
  const std::size_t m = rows.size();
  const std::size_t n = rows[0].size();
  std::size_t r = 0;
  for (std::size_t col = 0; col < n && r < m; ++col) {
    std::size_t piv = r;
    while (piv < m && rows[piv][col] == 0) ++piv;
    if (piv == m) continue;
    std::swap(rows[piv], rows[r]);
    for (std::size_t i = r + 1; i < m; ++i) {
      if (rows[i][col] == 0) continue;
      Rational f = rows[i][col] / rows[r][col];
      for (std::size_t j = col; j < n; ++j) rows[i][j] -= f * rows[r][j];
    }
    ++r;
  }
  return r;
}

Rational determinant(RMatrix m) {
  const std::size_t n = m.size();
  Rational det = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && m[piv][col] == 0) ++piv;
    if (piv == n) return 0;
    if (piv != col) {
      std::swap(m[piv], m[col]);
      det = -det;
    }
    det *= m[col][col];
    for (std::size_t i = col + 1; i < n; ++i) {
      if (m[i][col] == 0) continue;
      Rational f = m[i][col] / m[col][col];
      for (std::size_t j = col; j < n; ++j) m[i][j] -= f * m[col][j];
    }
  }
  return det;
}

std::optional<RVec> solve(RMatrix m, RVec b) {
  const std::size_t n = m.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && m[piv][col] == 0) ++piv;
    if (piv == n) return std::nullopt;
    std::swap(m[piv], m[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == col || m[i][col] == 0) continue;
      Rational f = m[i][col] / m[col][col];
      for (std::size_t j = col; j < n; ++j) m[i][j] -= f * m[col][j];
      b[i] -= f * b[col];
    }
  }
  RVec x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / m[i][i];
  return x;
}

RMatrix edge_matrix(const std::vector<RVec>& points) {
  RMatrix rows;
  for (std::size_t i = 1; i < points.size(); ++i) rows.push_back(points[i] - points[0]);
  return rows;
}

std::optional<RVec> barycentric(const std::vector<RVec>& points, const RVec& x) {
  const std::size_t d = x.size();
  // Solve sum_i l_i (p_i - p_0) = x - p_0 for l_1..l_d.
  RMatrix m(d, RVec(d));
  for (std::size_t i = 1; i <= d; ++i)
    for (std::size_t k = 0; k < d; ++k) m[k][i - 1] = points[i][k] - points[0][k];
  auto sol = solve(std::move(m), x - points[0]);
  if (!sol) return std::nullopt;
  RVec lambda(d + 1);
  Rational rest = 1;
  for (std::size_t i = 0; i < d; ++i) {
    lambda[i + 1] = (*sol)[i];
    rest -= (*sol)[i];
  }
  lambda[0] = rest;
  return lambda;
}

Rational squared_distance_to_simplex(const std::vector<RVec>& points, const RVec& x) {
  const std::size_t k = points.size();
  bool have = false;
  Rational best;
  // The nearest point lies in the relative interior of some face; enumerate
  // faces and keep the projections that land inside their face.
  for (unsigned mask = 1; mask < (1u << k); ++mask) {
    std::vector<const RVec*> face;
    for (std::size_t i = 0; i < k; ++i)
      if (mask & (1u << i)) face.push_back(&points[i]);
    const std::size_t f = face.size();
    RVec proj;
    RVec coeff(f);
    if (f == 1) {
      proj = *face[0];
      coeff[0] = 1;
    } else {
      std::vector<RVec> e;
      for (std::size_t i = 1; i < f; ++i) e.push_back(*face[i] - *face[0]);
      RMatrix gram(f - 1, RVec(f - 1));
      RVec rhs(f - 1);
      const RVec rel = x - *face[0];
      for (std::size_t i = 0; i + 1 < f; ++i) {
        for (std::size_t j = 0; j + 1 < f; ++j) gram[i][j] = dot(e[i], e[j]);
        rhs[i] = dot(e[i], rel);
      }
      auto sol = solve(std::move(gram), std::move(rhs));
      if (!sol) continue;
      Rational sum = 0;
      bool inside = true;
      for (std::size_t i = 0; i + 1 < f; ++i) {
        if ((*sol)[i] < 0) inside = false;
        sum += (*sol)[i];
      }
      if (!inside || sum > 1) continue;
      proj = *face[0];
      for (std::size_t i = 0; i + 1 < f; ++i) proj = proj + (*sol)[i] * e[i];
    }
    Rational d = squared_norm(x - proj);
    if (!have || d < best) {
      best = d;
      have = true;
    }
  }
  return best;
}

Rational squared_hausdorff(const std::vector<RVec>& a, const std::vector<RVec>& b) {
  Rational h = 0;
  for (const auto& p : a) h = std::max(h, squared_distance_to_simplex(b, p));
  for (const auto& p : b) h = std::max(h, squared_distance_to_simplex(a, p));
  return h;
}

Rational factorial(unsigned k) {
  Rational f = 1;
  for (unsigned i = 2; i <= k; ++i) f *= i;
  return f;
}

Rational simplex_volume(const std::vector<RVec>& points) {
  Rational det = determinant(edge_matrix(points));
  return abs(det) / factorial(static_cast<unsigned>(points.size() - 1));
}

}  // namespace thom
