#pragma once

#include <Eigen/Dense>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "thomjiggle/jiggling.hpp"

namespace thom {

struct FieldDomain {
  double disk_radius = std::numeric_limits<double>::infinity();
  double t_min = -std::numeric_limits<double>::infinity();
  double t_max = std::numeric_limits<double>::infinity();
  bool operator==(const FieldDomain&) const = default;
};

/// n-plane field {(u, L(p) u)} graphed over the horizontal factor of
/// base x fiber (x time when `timed`). A suspended field also contains d/dt.
struct PlaneField {
  using Evaluator = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;

  int base_dim = 0;
  int fiber_dim = 0;
  bool timed = false;
  bool suspended = false;
  bool constant = false;  ///< evaluator ignores the point
  FieldDomain domain;
  Evaluator L;  ///< fiber_dim x base_dim

  int ambient_dim() const { return base_dim + fiber_dim + (timed ? 1 : 0); }
  int plane_dim() const { return base_dim + (suspended ? 1 : 0); }
  /// ambient_dim x plane_dim spanning matrix at `point`.
  Eigen::MatrixXd basis(const Eigen::VectorXd& point) const;
};

PlaneField graph_field(int base_dim, int fiber_dim, PlaneField::Evaluator L, FieldDomain domain = {});
PlaneField constant_field(const Eigen::MatrixXd& L, FieldDomain domain = {});
/// Leaves {x + v = const}: L = -I.
PlaneField exp_field(int n);
PlaneField horizontal_field(int n);

/// (1-t) L_P + t L_Q pointwise.
PlaneField interpolate_fields(const PlaneField& P, const PlaneField& Q, double t);

/// Time-dependent family: F for t <= 1 + eps, F_exp for t >= 2, affine in
/// between. The result is timed; the last coordinate of a point is t.
PlaneField schedule_field(const PlaneField& F, const PlaneField& Fexp, double eps);
/// Untimed field equal to `timed_field` at time t.
PlaneField freeze_time(const PlaneField& timed_field, double t);
/// The schedule frozen at every grid time.
std::vector<PlaneField> schedule_family(const PlaneField& F, const PlaneField& Fexp, double eps,
                                        const std::vector<double>& grid);
/// P ⊕ R d/dt on base x fiber x time.
PlaneField suspend_field(const PlaneField& P);

struct CertifyOptions {
  int samples_per_dim = 4;
  double threshold = 1e-6;
};

struct SimplexMargin {
  int dim = 0;
  std::size_t index = 0;
  double margin = 0;
};

struct TransversalityReport {
  std::vector<SimplexMargin> margins;  ///< dimension >= 1, (dim, index) order
  std::vector<double> min_by_dim;      ///< index k; NaN-free, +inf when no simplex
  double min_margin = std::numeric_limits<double>::infinity();
  std::size_t sample_count = 0;
  std::size_t failing = 0;
  double threshold = 1e-6;
  bool pass = false;
};

/// Margin of a single tangent frame against a plane (columns need not be normalized).
/// k + p == D: smallest singular value; k + p < D: smallest principal angle;
/// k + p > D: D-th singular value.
double frame_margin(const Eigen::MatrixXd& tangent, const Eigen::MatrixXd& plane);

/// Minimum frame margin of the simplex spanned by `pts` over the barycentric `lattice`.
double simplex_margin(const std::vector<Eigen::VectorXd>& pts, const PlaneField& field,
                      const std::vector<std::vector<double>>& lattice);

TransversalityReport certify_transversality(const SimplicialComplex& embedded, const PlaneField& field,
                                            const CertifyOptions& opts = {},
                                            ExecPolicy policy = ExecPolicy::Parallel);
TransversalityReport certify_transversality(const PLSection& section, const PlaneField& field,
                                            const CertifyOptions& opts = {},
                                            ExecPolicy policy = ExecPolicy::Parallel);

struct ScanResult {
  int order = -1;                    ///< -1 when exhausted
  std::vector<int> orders;           ///< scanned r values
  std::vector<double> best_margin;   ///< min over the family at each scanned r
  std::vector<bool> passed;
};

/// Least r in [r_min, r_max] whose jiggle_exp section passes against every field.
ScanResult scan_transversal_order(const ComplexPtr& T, const ThomPattern& p, const FlatModel& model,
                                  const std::vector<PlaneField>& fields, int r_max, int r_min = 1,
                                  const CertifyOptions& opts = {}, ExecPolicy policy = ExecPolicy::Parallel);
/// Same, throwing OrderExhausted (with the per-r margins) on failure.
int min_transversal_order(const ComplexPtr& T, const ThomPattern& p, const FlatModel& model,
                          const std::vector<PlaneField>& fields, int r_max, int r_min = 1,
                          const CertifyOptions& opts = {}, ExecPolicy policy = ExecPolicy::Parallel);

/// Points of the barycentric lattice with denominator N on a k-simplex.
std::vector<std::vector<double>> barycentric_lattice(int k, int N);

}  // namespace thom
