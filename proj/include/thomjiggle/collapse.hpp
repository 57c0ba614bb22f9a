#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "thomjiggle/transversality.hpp"

namespace thom {

/// T x [t_0, t_N] stacked from staircase slabs. Vertex (v, slice k) has id
/// k * V + index(v); coordinates are (x, t).
struct PrismComplex {
  ComplexPtr complex;
  ComplexPtr source;
  std::vector<Rational> times;
  std::vector<VertexId> order;  ///< vertex order of the staircase subdivision
  /// Provenance of each top simplex (by index in the top dimension).
  std::vector<std::size_t> slab_of_top;
  std::vector<std::size_t> base_of_top;  ///< index of the base maximal simplex (dimension of T)

  std::size_t slices() const { return times.size(); }
  VertexId vertex(std::size_t slice, VertexId base_vertex) const;
  std::size_t slice_of(VertexId v) const;
  VertexId base_vertex(VertexId v) const;
};

/// Grid must be strictly increasing; `order` defaults to ascending vertex id.
PrismComplex prism_complex(const ComplexPtr& T, const std::vector<Rational>& times,
                           std::vector<VertexId> order = {});

/// Simplices lying in slice k.
Subcomplex prism_slice(const PrismComplex& pc, std::size_t k);
/// The slice equals T under (v, k) -> v.
bool slice_matches_source(const PrismComplex& pc, std::size_t k);

struct CollapseStep {
  Simplex face;
  Simplex coface;
};

struct CollapseOptions {
  std::uint64_t seed = 1;
  int restarts = 16;
  /// Larger values are collapsed first (ties broken by dimension, then lexicographically;
  /// restarts break ties randomly).
  std::function<double(const Simplex&)> priority;
};

struct CollapseResult {
  bool success = false;
  std::vector<CollapseStep> steps;
  std::vector<Simplex> remaining;  ///< final (or stuck) complex, (dim, lex) order
  int attempts = 0;
};

/// Greedy elementary collapses of c onto `target` (a subcomplex of c).
CollapseResult collapse_sequence(const ComplexPtr& c, const Subcomplex& target, const CollapseOptions& opts = {});

/// Priority favoring late slabs: the largest time coordinate of the simplex.
std::function<double(const Simplex&)> latest_time_priority(const PrismComplex& pc);

struct CollapseVerification {
  bool valid = false;
  bool acyclic = false;
  std::size_t failed_step = 0;
  std::string reason;
};

/// Replays the sequence by brute force (cofaces recomputed from scratch each
/// step) and checks that the induced matching has no cycles.
CollapseVerification verify_collapse(const ComplexPtr& c, const Subcomplex& target,
                                     const std::vector<CollapseStep>& steps);

/// Prism with fibre coordinates: vertex (v, k) sits at (x, lift_k(v), t_k).
struct EmbeddedPrism {
  PrismComplex prism;
  ComplexPtr embedded;
  int fiber_dim = 0;
};

/// `lift(k, base vertex index)` gives the fibre coordinates on slice k.
EmbeddedPrism embed_prism(const PrismComplex& pc, const std::function<RVec(std::size_t, std::size_t)>& lift);
/// Same section on every slice.
EmbeddedPrism embed_prism(const PrismComplex& pc, const PLSection& section);

struct TimeJiggleOptions {
  double bound = 1.0 / 16;     ///< largest fibre displacement
  int radius_levels = 6;       ///< radii bound * 2^-k, k < radius_levels
  int attempts_per_level = 24;  ///< the best passing sample of a level is kept
  CertifyOptions certify;
};

struct VertexMove {
  VertexId vertex = 0;
  std::vector<double> displacement;  ///< fibre components of X
  int level = -1;                    ///< -1 when X = 0
  int rejected = 0;
};

struct TimeJiggleResult {
  EmbeddedPrism prism;
  TransversalityReport before;
  TransversalityReport after;
  std::vector<VertexMove> moves;
};

/// Moves mid-slab vertices (odd slices) in the fibre direction, in
/// (slice, base vertex id) order. Each simplex is certified when its last
/// movable vertex is placed, so later moves never undo earlier acceptances.
/// Throws RejectionExhausted when a vertex admits no X.
TimeJiggleResult time_jiggle(const EmbeddedPrism& ep, const PlaneField& field, std::uint64_t seed,
                             const TimeJiggleOptions& opts = {});

/// Splits slabs until the plane angle of the timed field changes by less than
/// `max_degrees` across each slab at every probe point (points are (x, v)).
std::vector<Rational> refine_time_grid(const PlaneField& timed_field, const std::vector<Eigen::VectorXd>& probes,
                                       std::vector<Rational> grid, double max_degrees = 5.0, int max_slabs = 4096);

/// Largest principal angle (radians) between two planes given by spanning columns.
double plane_angle(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

}  // namespace thom
