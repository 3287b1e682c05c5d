#pragma once

#include <cstdint>
#include <vector>

#include "copulim/checkerboard.hpp"
#include "copulim/marginal.hpp"
#include "copulim/projective.hpp"
#include "copulim/sklar.hpp"
#include "copulim/tensor_measure.hpp"
#include "copulim/transport.hpp"

namespace copulim {

/// Order-preserving homeomorphism of the extended line onto [0,1]:
/// 1/2 + atan(x)/pi, with the infinite points sent to 0 and 1.
double compactify(ExtReal x);

struct TransportSolution {
  double distance = 0.0;
  std::vector<std::vector<ExtReal>> source_points;
  std::vector<std::vector<ExtReal>> target_points;
  Eigen::VectorXd supply;
  Eigen::VectorXd demand;
  RowMajorMatrix cost;
  TransportPlan plan;
  TransportCertificate certificate;
};

/// Wasserstein-1 distance under d(x, y) = max_j |phi(x_j) - phi(y_j)|,
/// solved exactly over the positive-mass nodes of both measures.
TransportSolution transport_solution(const TensorMeasure& a, const TensorMeasure& b);

/// transport_solution(a, b).distance; throws InternalError if the LP
/// certificate fails.
double transport_distance(const TensorMeasure& a, const TensorMeasure& b);

/// Closed-form 1-d distance: integral over t in [0,1] of
/// |F_a(phi^{-1}(t)) - F_b(phi^{-1}(t))|.
double w1_one_dim(const Marginal& a, const Marginal& b);

struct FddMetricConfig {
  std::size_t depth = 7;
};

struct FddTerm {
  IndexSubset subset;
  double weight = 0.0;    // 2^{-k}
  double distance = 0.0;  // uncapped transport distance
  double contribution = 0.0;
};

/// Member as a discrete measure: tensor measures as they are, checkerboard
/// copulas atomized at their cell centers.
TensorMeasure member_measure(const ProjectiveFamily::Member& m);

std::vector<FddTerm> fdd_terms(const ProjectiveFamily& f, const ProjectiveFamily& g, const FddMetricConfig& cfg = {});

/// sum_k 2^{-k} min(1, W(f(J_k), g(J_k))) over the first K subsets of the
/// canonical enumeration.
double fdd_distance(const ProjectiveFamily& f, const ProjectiveFamily& g, const FddMetricConfig& cfg = {});

struct CompactnessResult {
  std::vector<std::size_t> indices;  // strictly increasing
  std::size_t representative_index = 0;
  CheckerboardCopula representative;
  std::size_t clusters = 0;
};

/// Greedy eps-clustering in max-norm: the first unassigned element anchors
/// a cluster that takes every later unassigned element within eps of it.
/// Returns the largest cluster (earliest on ties) and its anchor.
CompactnessResult compactness_probe(const std::vector<CheckerboardCopula>& seq, double eps);

struct ContinuityConfig {
  std::vector<double> schedule;  // shrinking perturbation sizes
  FddMetricConfig fdd;
  bool perturb_copula = true;
  bool perturb_marginals = true;
  std::uint64_t seed = 0;
  GridMap grids;  // for continuous marginals
};

struct ContinuityStep {
  double epsilon = 0.0;
  double input_distance = 0.0;
  double output_distance = 0.0;
  std::vector<FddTerm> terms;
};

struct ContinuityReport {
  std::vector<ContinuityStep> steps;
  /// True if output distances never increase from step `from` (0-based) on.
  bool nonincreasing_from(std::size_t from) const;
};

/// Perturbs (C, marginals) along fixed random directions scaled by each
/// epsilon, composes both pairs and measures the fdd distance between the
/// discretized joints. Copula perturbation: C + eps * D with D uniform in
/// [-1,1] / n^d, refitted to uniform margins (ConfigurationError if any
/// entry turns nonpositive). Atomic marginal weights are scaled by
/// (1 + eps * delta_k), delta_k uniform in [-1,1], and renormalized.
ContinuityReport continuity_probe(const CheckerboardCopula& target, const std::map<Label, Marginal>& marginals,
                                  const ContinuityConfig& cfg);

}  // namespace copulim
