#include <cmath>
#include <numbers>
#include <random>
#include <Eigen/Dense>
#include <unsupported/Eigen/AutoDiff>

#include "thomjiggle/errors.hpp"
#include "thomjiggle/holonomy.hpp"

namespace thom {

Eigen::VectorXd to_eigen(const RVec& v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = to_double(v[i]);
  return out;
}

Eigen::MatrixXd OneFormField::d_numeric(const Eigen::VectorXd& p, double h) const {
  const Eigen::Index D = dim();
  Eigen::MatrixXd J(D, D);  // J(a, b) = d_a lambda_b
  for (Eigen::Index a = 0; a < D; ++a) {
    Eigen::VectorXd hi = p, lo = p;
    hi(a) += h;
    lo(a) -= h;
    J.row(a) = ((lambda(hi) - lambda(lo)) / (2 * h)).transpose();
  }
  return J - J.transpose();
}

Eigen::MatrixXd OneFormField::d(const Eigen::VectorXd& p) const {
  return d_lambda ? d_lambda(p) : d_numeric(p);
}

std::vector<Eigen::VectorXd> probe_points(int base_dim, int fiber_dim, std::size_t count, std::uint64_t seed,
                                          double fiber_radius) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const double side = fiber_radius / std::sqrt(static_cast<double>(fiber_dim));
  std::vector<Eigen::VectorXd> out;
  for (std::size_t i = 0; i < count; ++i) {
    Eigen::VectorXd p(base_dim + fiber_dim);
    for (int j = 0; j < base_dim; ++j) p(j) = unit(rng);
    for (int j = 0; j < fiber_dim; ++j) p(base_dim + j) = side * unit(rng);
    out.push_back(std::move(p));
  }
  return out;
}

FormCheck check_one_form(const OneFormField& f, const std::vector<Eigen::VectorXd>& probes, double tol) {
  FormCheck c;
  c.probes = probes.size();
  for (const auto& p : probes) {
    if (f.d_lambda) c.max_d_error = std::max(c.max_d_error, (f.d_lambda(p) - f.d_numeric(p)).cwiseAbs().maxCoeff());
    if (f.vertical_vanishing) c.max_vertical = std::max(c.max_vertical, f.lambda(p).tail(f.fiber_dim).cwiseAbs().maxCoeff());
  }
  c.pass = c.max_d_error < tol && c.max_vertical < tol;
  return c;
}

OneFormField validated(OneFormField f, std::size_t probes, std::uint64_t seed) {
  const FormCheck c = check_one_form(f, probe_points(f.base_dim, f.fiber_dim, probes, seed));
  if (!c.pass)
    throw FormCheckFailed("one-form spot check failed: derivative error " + std::to_string(c.max_d_error) +
                          ", vertical value " + std::to_string(c.max_vertical));
  return f;
}

Eigen::MatrixXd omega0_matrix(int fiber_dim) {
  if (fiber_dim < 2 || fiber_dim % 2 != 0) throw InvalidParams("fiber dimension must be even and positive");
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(fiber_dim, fiber_dim);
  for (int i = 0; i < fiber_dim; i += 2) {
    J(i, i + 1) = 1;
    J(i + 1, i) = -1;
  }
  return J;
}

Eigen::MatrixXd TwoFormField::matrix(const Eigen::VectorXd& p) const {
  Eigen::MatrixXd W = lambda.d(p);
  W.bottomRightCorner(fiber_dim(), fiber_dim()) += omega0;
  return W;
}

TwoFormField two_form(OneFormField lambda) {
  TwoFormField w;
  w.omega0 = omega0_matrix(lambda.fiber_dim);
  w.lambda = std::move(lambda);
  return w;
}

FiberCheck check_fiber_restriction(const TwoFormField& omega, const std::vector<Eigen::VectorXd>& probes, double tol) {
  FiberCheck c;
  c.min_abs_det = std::numeric_limits<double>::infinity();
  const int n = omega.fiber_dim();
  for (const auto& p : probes) {
    const Eigen::MatrixXd vv = omega.matrix(p).bottomRightCorner(n, n);
    c.max_deviation = std::max(c.max_deviation, (vv - omega.omega0).cwiseAbs().maxCoeff());
    c.min_abs_det = std::min(c.min_abs_det, std::abs(vv.determinant()));
  }
  c.pass = c.max_deviation < tol && c.min_abs_det > tol;
  return c;
}

OneFormField zero_form(int base_dim, int fiber_dim) {
  OneFormField f;
  f.base_dim = base_dim;
  f.fiber_dim = fiber_dim;
  const int D = base_dim + fiber_dim;
  f.lambda = [D](const Eigen::VectorXd&) { return Eigen::VectorXd::Zero(D).eval(); };
  f.d_lambda = [D](const Eigen::VectorXd&) { return Eigen::MatrixXd::Zero(D, D).eval(); };
  f.vertical_vanishing = true;
  return f;
}

OneFormField linear_g_dv1(const Eigen::VectorXd& grad, double g0, int fiber_dim) {
  OneFormField f;
  f.base_dim = static_cast<int>(grad.size());
  f.fiber_dim = fiber_dim;
  const int d = f.base_dim, D = f.dim();
  f.lambda = [grad, g0, d, D](const Eigen::VectorXd& p) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(D);
    out(d) = g0 + grad.dot(p.head(d));
    return out;
  };
  f.d_lambda = [grad, d, D](const Eigen::VectorXd&) {
    Eigen::MatrixXd W = Eigen::MatrixXd::Zero(D, D);
    for (int k = 0; k < d; ++k) {
      W(k, d) = grad(k);
      W(d, k) = -grad(k);
    }
    return W;
  };
  return f;
}

OneFormField base_area_form(int base_dim, int fiber_dim) {
  if (base_dim < 2) throw InvalidParams("base area form needs two base coordinates");
  OneFormField f;
  f.base_dim = base_dim;
  f.fiber_dim = fiber_dim;
  const int D = f.dim();
  f.lambda = [D](const Eigen::VectorXd& p) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(D);
    out(1) = p(0);
    return out;
  };
  f.d_lambda = [D](const Eigen::VectorXd&) {
    Eigen::MatrixXd W = Eigen::MatrixXd::Zero(D, D);
    W(0, 1) = 1;
    W(1, 0) = -1;
    return W;
  };
  f.vertical_vanishing = true;
  return f;
}

OneFormField closed_base_form(const Eigen::VectorXd& c, const Eigen::VectorXd& k, double a, int fiber_dim) {
  if (c.size() != k.size()) throw DimensionMismatch("coefficient and wave vectors differ in length");
  OneFormField f;
  f.base_dim = static_cast<int>(c.size());
  f.fiber_dim = fiber_dim;
  const int d = f.base_dim, D = f.dim();
  const double tau = 2 * std::numbers::pi;
  f.lambda = [c, k, a, d, D, tau](const Eigen::VectorXd& p) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(D);
    out.head(d) = c + a * tau * std::cos(tau * k.dot(p.head(d))) * k;
    return out;
  };
  f.d_lambda = [D](const Eigen::VectorXd&) { return Eigen::MatrixXd::Zero(D, D).eval(); };
  f.vertical_vanishing = true;
  return f;
}

namespace {

/// amp * sin(2 pi kx.x + kv.v + phase)
struct Wave {
  Eigen::VectorXd kx;
  Eigen::VectorXd kv;
  double amp = 0;
  double phase = 0;
};

struct FamilyData {
  int d = 0, n = 0;
  Eigen::MatrixXd bary;  // rows: barycentric coordinate c as an affine function (coeffs of v, then constant)
  std::vector<Eigen::VectorXd> vertices;
  std::vector<double> offset;               // by color
  std::vector<std::vector<Wave>> f_waves;   // by color, x only
  std::vector<std::vector<Wave>> a_waves;   // by base direction
  std::vector<Wave> g_waves;
};

template <class S>
S wave_phase(const Wave& w, const std::vector<S>& x, const std::vector<S>& v) {
  S arg = S(w.phase);
  for (std::size_t j = 0; j < x.size(); ++j) arg += 2 * std::numbers::pi * w.kx(static_cast<Eigen::Index>(j)) * x[j];
  for (std::size_t j = 0; j < v.size(); ++j) arg += w.kv(static_cast<Eigen::Index>(j)) * v[j];
  return arg;
}

template <class S>
std::vector<S> family_lambda(const FamilyData& F, const std::vector<S>& x, const std::vector<S>& v) {
  using std::cos;
  using std::sin;
  const auto d = static_cast<std::size_t>(F.d), n = static_cast<std::size_t>(F.n);
  std::vector<S> out(d + n, S(0.0));
  // psi = prod_c |v - p_c|^2
  S psi = S(1.0);
  for (const auto& p : F.vertices) {
    S sq = S(0.0);
    for (std::size_t j = 0; j < n; ++j) {
      S diff = v[j] - p(static_cast<Eigen::Index>(j));
      sq += diff * diff;
    }
    psi *= sq;
  }
  for (std::size_t k = 0; k < d; ++k)
    for (const auto& w : F.a_waves[k]) out[k] += psi * w.amp * sin(wave_phase(w, x, v));
  // d_v B with B = sum_c f_c(x) chi_c(l_c(v))
  for (std::size_t c = 0; c <= n; ++c) {
    S fc = S(F.offset[c]);
    for (const auto& w : F.f_waves[c]) fc += w.amp * sin(wave_phase(w, x, v));
    S l = S(F.bary(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(n)));
    for (std::size_t j = 0; j < n; ++j) l += F.bary(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(j)) * v[j];
    const S dchi = 6.0 * l - 6.0 * l * l;
    for (std::size_t j = 0; j < n; ++j)
      out[d + j] += fc * dchi * F.bary(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(j));
  }
  // dG
  for (const auto& w : F.g_waves) {
    const S c = w.amp * cos(wave_phase(w, x, v));
    for (std::size_t k = 0; k < d; ++k) out[k] += c * (2 * std::numbers::pi * w.kx(static_cast<Eigen::Index>(k)));
    for (std::size_t j = 0; j < n; ++j) out[d + j] += c * w.kv(static_cast<Eigen::Index>(j));
  }
  return out;
}

}  // namespace

RandomFamily random_family(int base_dim, const TargetSimplex& target, std::uint64_t seed,
                           const RandomFamilyOptions& opts) {
  const int n = static_cast<int>(target.vertices.size()) - 1;
  if (n < 2 || n % 2 != 0) throw InvalidParams("random family needs an even fiber dimension");
  auto F = std::make_shared<FamilyData>();
  F->d = base_dim;
  F->n = n;
  Eigen::MatrixXd M(n + 1, n + 1);
  for (int c = 0; c <= n; ++c) {
    F->vertices.push_back(to_eigen(target.vertices[static_cast<std::size_t>(c)]));
    M.col(c) << F->vertices.back(), 1.0;
  }
  F->bary = M.inverse();  // l = bary * (v; 1)
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_int_distribution<int> freq(-2, 2);
  auto wave = [&](bool with_v) {
    Wave w;
    w.kx = Eigen::VectorXd::Zero(base_dim);
    do {
      for (int j = 0; j < base_dim; ++j) w.kx(j) = opts.periodic ? freq(rng) : 1.5 * unit(rng);
    } while (w.kx.norm() < 0.5);
    w.kv = Eigen::VectorXd::Zero(n);
    if (with_v)
      for (int j = 0; j < n; ++j) w.kv(j) = unit(rng);
    w.amp = opts.amplitude * unit(rng);
    w.phase = std::numbers::pi * unit(rng);
    return w;
  };
  for (int c = 0; c <= n; ++c) {
    F->offset.push_back(opts.amplitude * unit(rng));
    F->f_waves.emplace_back();
    for (int m = 0; m < opts.modes; ++m) F->f_waves.back().push_back(wave(false));
  }
  for (int k = 0; k < base_dim; ++k) {
    F->a_waves.emplace_back();
    for (int m = 0; m < opts.modes; ++m) F->a_waves.back().push_back(wave(true));
  }
  for (int m = 0; m < opts.modes; ++m) F->g_waves.push_back(wave(true));

  RandomFamily out;
  OneFormField& f = out.form;
  f.base_dim = base_dim;
  f.fiber_dim = n;
  const int D = base_dim + n;
  f.lambda = [F, D](const Eigen::VectorXd& p) {
    std::vector<double> x(p.data(), p.data() + F->d), v(p.data() + F->d, p.data() + D);
    const auto l = family_lambda(*F, x, v);
    return Eigen::Map<const Eigen::VectorXd>(l.data(), D).eval();
  };
  f.d_lambda = [F, D](const Eigen::VectorXd& p) {
    using AD = Eigen::AutoDiffScalar<Eigen::VectorXd>;
    std::vector<AD> x, v;
    for (int j = 0; j < F->d; ++j) x.emplace_back(p(j), D, j);
    for (int j = 0; j < F->n; ++j) v.emplace_back(p(F->d + j), D, F->d + j);
    const auto l = family_lambda(*F, x, v);
    Eigen::MatrixXd J(D, D);  // J(a, b) = d_a lambda_b
    for (int b = 0; b < D; ++b) J.col(b) = l[static_cast<std::size_t>(b)].derivatives();
    return (J - J.transpose()).eval();
  };
  out.f = [F](int c, const Eigen::VectorXd& x) {
    std::vector<double> xs(x.data(), x.data() + F->d), vs;
    double fc = F->offset[static_cast<std::size_t>(c)];
    for (const auto& w : F->f_waves[static_cast<std::size_t>(c)]) fc += w.amp * std::sin(wave_phase(w, xs, vs));
    return fc;
  };
  return out;
}

}  // namespace thom
