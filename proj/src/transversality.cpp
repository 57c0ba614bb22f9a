#include <algorithm>
#include <cmath>
#include <sstream>

#include "thomjiggle/errors.hpp"
#include "thomjiggle/holonomy.hpp"
#include "thomjiggle/transversality.hpp"

namespace thom {

Eigen::MatrixXd PlaneField::basis(const Eigen::VectorXd& point) const {
  const Eigen::MatrixXd l = L(point);
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(ambient_dim(), plane_dim());
  b.topLeftCorner(base_dim, base_dim).setIdentity();
  b.block(base_dim, 0, fiber_dim, base_dim) = l;
  if (suspended) b(ambient_dim() - 1, base_dim) = 1.0;
  return b;
}

PlaneField graph_field(int base_dim, int fiber_dim, PlaneField::Evaluator L, FieldDomain domain) {
  if (base_dim < 1 || fiber_dim < 1) throw InvalidParams("plane field needs positive base and fiber dimensions");
  PlaneField f;
  f.base_dim = base_dim;
  f.fiber_dim = fiber_dim;
  f.domain = domain;
  f.L = std::move(L);
  return f;
}

PlaneField constant_field(const Eigen::MatrixXd& L, FieldDomain domain) {
  PlaneField f = graph_field(static_cast<int>(L.cols()), static_cast<int>(L.rows()),
                             [L](const Eigen::VectorXd&) { return L; }, domain);
  f.constant = true;
  return f;
}

PlaneField exp_field(int n) { return constant_field(-Eigen::MatrixXd::Identity(n, n)); }

PlaneField horizontal_field(int n) { return constant_field(Eigen::MatrixXd::Zero(n, n)); }

namespace {

void require_same_domain(const PlaneField& P, const PlaneField& Q) {
  if (P.base_dim != Q.base_dim || P.fiber_dim != Q.fiber_dim || P.timed != Q.timed ||
      P.suspended != Q.suspended || !(P.domain == Q.domain))
    throw DomainMismatch("plane fields live on different domains");
}

}  // namespace

PlaneField interpolate_fields(const PlaneField& P, const PlaneField& Q, double t) {
  require_same_domain(P, Q);
  if (!(t >= 0.0 && t <= 1.0)) throw InvalidParams("interpolation parameter must lie in [0,1]");
  if (t == 0.0) return P;
  if (t == 1.0) return Q;
  PlaneField f = P;
  f.constant = P.constant && Q.constant;
  f.L = [P, Q, t](const Eigen::VectorXd& x) -> Eigen::MatrixXd { return (1.0 - t) * P.L(x) + t * Q.L(x); };
  return f;
}

PlaneField schedule_field(const PlaneField& F, const PlaneField& Fexp, double eps) {
  require_same_domain(F, Fexp);
  if (F.timed) throw InvalidParams("schedule endpoints must be time independent");
  if (!(eps > 0.0 && eps < 1.0)) throw InvalidParams("schedule epsilon must lie in (0,1)");
  PlaneField f = F;
  f.timed = true;
  f.constant = false;
  f.domain.t_min = 0.0;
  f.domain.t_max = 3.0;
  const int space = F.base_dim + F.fiber_dim;
  f.L = [F, Fexp, eps, space](const Eigen::VectorXd& p) -> Eigen::MatrixXd {
    const double t = p(p.size() - 1);
    const Eigen::VectorXd x = p.head(space);
    if (t <= 1.0 + eps) return F.L(x);
    if (t >= 2.0) return Fexp.L(x);
    const double w = (t - 1.0 - eps) / (1.0 - eps);
    return (1.0 - w) * F.L(x) + w * Fexp.L(x);
  };
  return f;
}

PlaneField freeze_time(const PlaneField& timed_field, double t) {
  if (!timed_field.timed) throw InvalidParams("field is not time dependent");
  if (t < timed_field.domain.t_min || t > timed_field.domain.t_max) throw InvalidTime("time outside the field's interval");
  PlaneField f = timed_field;
  f.timed = false;
  f.suspended = false;
  f.domain.t_min = -std::numeric_limits<double>::infinity();
  f.domain.t_max = std::numeric_limits<double>::infinity();
  const PlaneField::Evaluator inner = timed_field.L;
  f.L = [inner, t](const Eigen::VectorXd& x) -> Eigen::MatrixXd {
    Eigen::VectorXd p(x.size() + 1);
    p << x, t;
    return inner(p);
  };
  return f;
}

std::vector<PlaneField> schedule_family(const PlaneField& F, const PlaneField& Fexp, double eps,
                                        const std::vector<double>& grid) {
  const PlaneField s = schedule_field(F, Fexp, eps);
  std::vector<PlaneField> out;
  for (double t : grid) out.push_back(freeze_time(s, t));
  return out;
}

PlaneField suspend_field(const PlaneField& P) {
  if (P.suspended) throw InvalidParams("field is already suspended");
  PlaneField f = P;
  f.suspended = true;
  if (!P.timed) {
    f.timed = true;
    const int space = P.base_dim + P.fiber_dim;
    const PlaneField::Evaluator inner = P.L;
    f.L = [inner, space](const Eigen::VectorXd& p) -> Eigen::MatrixXd { return inner(p.head(space)); };
  }
  return f;
}

std::vector<std::vector<double>> barycentric_lattice(int k, int N) {
  std::vector<std::vector<double>> out;
  std::vector<int> a(static_cast<std::size_t>(k + 1), 0);
  // Enumerate compositions of N into k+1 parts in lexicographic order.
  std::function<void(int, int)> rec = [&](int pos, int left) {
    if (pos == k) {
      a[static_cast<std::size_t>(pos)] = left;
      std::vector<double> b(a.size());
      for (std::size_t i = 0; i < a.size(); ++i) b[i] = static_cast<double>(a[i]) / N;
      out.push_back(std::move(b));
      return;
    }
    for (int v = 0; v <= left; ++v) {
      a[static_cast<std::size_t>(pos)] = v;
      rec(pos + 1, left - v);
    }
  };
  if (N <= 0) {
    out.emplace_back(static_cast<std::size_t>(k + 1), 1.0 / (k + 1));
    return out;
  }
  rec(0, N);
  return out;
}

namespace {

Eigen::MatrixXd normalized_columns(Eigen::MatrixXd m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    const double nrm = m.col(j).norm();
    if (nrm > 0) m.col(j) /= nrm;
  }
  return m;
}

}  // namespace

double frame_margin(const Eigen::MatrixXd& tangent, const Eigen::MatrixXd& plane) {
  if (tangent.rows() != plane.rows()) throw DimensionMismatch("tangent frame and plane have different ambient dimensions");
  const Eigen::Index D = tangent.rows(), k = tangent.cols(), p = plane.cols();
  const Eigen::MatrixXd Tn = normalized_columns(tangent);
  const Eigen::MatrixXd Pn = normalized_columns(plane);
  double margin = 0;
  if (k + p >= D) {
    Eigen::MatrixXd M(D, k + p);
    M << Tn, Pn;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
    margin = svd.singularValues()(D - 1);
  } else {
    const Eigen::VectorXd tsv = Eigen::JacobiSVD<Eigen::MatrixXd>(Tn).singularValues();
    if (tsv(k - 1) <= 1e-13) return 0.0;
    const Eigen::MatrixXd QT = Eigen::HouseholderQR<Eigen::MatrixXd>(Tn).householderQ() * Eigen::MatrixXd::Identity(D, k);
    const Eigen::MatrixXd QP = Eigen::HouseholderQR<Eigen::MatrixXd>(Pn).householderQ() * Eigen::MatrixXd::Identity(D, p);
    const Eigen::MatrixXd R = QT - QP * (QP.transpose() * QT);
    const double s = Eigen::JacobiSVD<Eigen::MatrixXd>(R).singularValues()(k - 1);
    margin = std::asin(std::clamp(s, 0.0, 1.0));
  }
  return std::isfinite(margin) ? margin : -1.0;
}

double simplex_margin(const std::vector<Eigen::VectorXd>& pts, const PlaneField& field,
                      const std::vector<std::vector<double>>& lattice) {
  const Eigen::Index D = pts.at(0).size();
  const auto k = static_cast<Eigen::Index>(pts.size()) - 1;
  Eigen::MatrixXd tangent(D, k);
  for (Eigen::Index j = 1; j <= k; ++j) tangent.col(j - 1) = pts[static_cast<std::size_t>(j)] - pts[0];
  double m = std::numeric_limits<double>::infinity();
  for (const auto& b : lattice) {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(D);
    for (std::size_t j = 0; j < b.size(); ++j) x += b[j] * pts[j];
    m = std::min(m, frame_margin(tangent, field.basis(x)));
  }
  return m;
}

TransversalityReport certify_transversality(const SimplicialComplex& c, const PlaneField& field,
                                            const CertifyOptions& opts, ExecPolicy policy) {
  if (c.ambient_dim() != field.ambient_dim())
    throw DimensionMismatch("complex lives in R^" + std::to_string(c.ambient_dim()) + " but the field expects R^" +
                            std::to_string(field.ambient_dim()));
  TransversalityReport rep;
  rep.threshold = opts.threshold;
  const int dim = c.dimension();
  for (int k = 1; k <= dim; ++k)
    for (std::size_t i = 0; i < c.num_simplices(k); ++i) rep.margins.push_back({k, i, 0.0});

  std::vector<std::vector<std::vector<double>>> lattice(static_cast<std::size_t>(dim + 1));
  for (int k = 1; k <= dim; ++k) lattice[static_cast<std::size_t>(k)] = barycentric_lattice(k, field.constant ? 0 : opts.samples_per_dim);

  parallel_for(
      rep.margins.size(),
      [&](std::size_t idx) {
        SimplexMargin& sm = rep.margins[idx];
        std::vector<Eigen::VectorXd> pts;
        for (const auto& g : c.realize(c.simplex(sm.dim, sm.index))) pts.push_back(to_eigen(g));
        sm.margin = simplex_margin(pts, field, lattice[static_cast<std::size_t>(sm.dim)]);
      },
      policy);

  rep.min_by_dim.assign(static_cast<std::size_t>(dim + 1), std::numeric_limits<double>::infinity());
  for (const auto& sm : rep.margins) {
    rep.sample_count += lattice[static_cast<std::size_t>(sm.dim)].size();
    rep.min_margin = std::min(rep.min_margin, sm.margin);
    auto& slot = rep.min_by_dim[static_cast<std::size_t>(sm.dim)];
    slot = std::min(slot, sm.margin);
    if (!(sm.margin > opts.threshold)) ++rep.failing;
  }
  rep.pass = rep.failing == 0;
  return rep;
}

TransversalityReport certify_transversality(const PLSection& section, const PlaneField& field,
                                            const CertifyOptions& opts, ExecPolicy policy) {
  return certify_transversality(*section.graph(), field, opts, policy);
}

ScanResult scan_transversal_order(const ComplexPtr& T, const ThomPattern& p, const FlatModel& model,
                                  const std::vector<PlaneField>& fields, int r_max, int r_min,
                                  const CertifyOptions& opts, ExecPolicy policy) {
  if (fields.empty()) throw InvalidParams("field family is empty");
  if (r_min < 0 || r_max < r_min) throw InvalidParams("need 0 <= r_min <= r_max");
  ScanResult out;
  FoldingTower tower = iterate_fold(T, p, r_min, policy);
  for (int r = r_min;; ++r) {
    const ComplexPtr graph = jiggle_exp(tower, model).graph();
    double best = std::numeric_limits<double>::infinity();
    bool ok = true;
    for (const auto& f : fields) {
      const auto rep = certify_transversality(*graph, f, opts, policy);
      best = std::min(best, rep.min_margin);
      ok = ok && rep.pass;
    }
    out.orders.push_back(r);
    out.best_margin.push_back(best);
    out.passed.push_back(ok);
    if (ok) {
      out.order = r;
      return out;
    }
    if (r == r_max) return out;
    extend_fold(tower, policy);
  }
}

int min_transversal_order(const ComplexPtr& T, const ThomPattern& p, const FlatModel& model,
                          const std::vector<PlaneField>& fields, int r_max, int r_min, const CertifyOptions& opts,
                          ExecPolicy policy) {
  const ScanResult s = scan_transversal_order(T, p, model, fields, r_max, r_min, opts, policy);
  if (s.order >= 0) return s.order;
  std::ostringstream msg;
  msg << "no order up to " << r_max << " is transverse; best margins:";
  for (std::size_t i = 0; i < s.orders.size(); ++i) msg << " r=" << s.orders[i] << ":" << s.best_margin[i];
  throw OrderExhausted(msg.str());
}

}  // namespace thom
