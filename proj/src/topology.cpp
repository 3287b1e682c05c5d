#include "copulim/topology.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "copulim/errors.hpp"
#include "copulim/random_copula.hpp"

namespace copulim {

double compactify(ExtReal x) {
  if (x.is_neg_inf()) return 0.0;
  if (x.is_pos_inf()) return 1.0;
  return 0.5 + std::atan(x.value()) / std::numbers::pi;
}

namespace {

struct Support {
  std::vector<std::vector<ExtReal>> points;
  std::vector<std::vector<double>> image;  // compactified coordinates
  std::vector<double> mass;
};

Support positive_support(const TensorMeasure& t) {
  Support s;
  for_each_index(t.shape().extents(), [&](const std::vector<std::size_t>& idx) {
    const double m = t.at(idx);
    if (m <= 0.0) return;
    std::vector<ExtReal> p(idx.size());
    std::vector<double> q(idx.size());
    for (std::size_t a = 0; a < idx.size(); ++a) {
      p[a] = t.axis(a)[idx[a]];
      q[a] = compactify(p[a]);
    }
    s.points.push_back(std::move(p));
    s.image.push_back(std::move(q));
    s.mass.push_back(m);
  });
  return s;
}

}  // namespace

TransportSolution transport_solution(const TensorMeasure& a, const TensorMeasure& b) {
  if (a.index_subset() != b.index_subset())
    throw IndexError("transport_distance: measures over " + to_string(a.index_subset()) + " and " +
                     to_string(b.index_subset()));
  const Support sa = positive_support(a);
  const Support sb = positive_support(b);
  TransportSolution sol;
  sol.supply = Eigen::Map<const Eigen::VectorXd>(sa.mass.data(), static_cast<Eigen::Index>(sa.mass.size()));
  sol.demand = Eigen::Map<const Eigen::VectorXd>(sb.mass.data(), static_cast<Eigen::Index>(sb.mass.size()));
  sol.cost.resize(sol.supply.size(), sol.demand.size());
  for (std::size_t i = 0; i < sa.image.size(); ++i) {
    for (std::size_t j = 0; j < sb.image.size(); ++j) {
      double c = 0.0;
      for (std::size_t k = 0; k < sa.image[i].size(); ++k) c = std::max(c, std::abs(sa.image[i][k] - sb.image[j][k]));
      sol.cost(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = c;
    }
  }
  sol.plan = solve_transport(sol.supply, sol.demand, sol.cost);
  sol.certificate = certify_transport(sol.plan, sol.supply, sol.demand, sol.cost);
  sol.distance = std::max(0.0, sol.plan.cost);
  sol.source_points = sa.points;
  sol.target_points = sb.points;
  return sol;
}

double transport_distance(const TensorMeasure& a, const TensorMeasure& b) {
  // Solve in a fixed argument order so that d(a, b) and d(b, a) agree bit for bit.
  const bool swap = b.grid() < a.grid() ||
                    (b.grid() == a.grid() && std::lexicographical_compare(b.mass().begin(), b.mass().end(),
                                                                          a.mass().begin(), a.mass().end()));
  const TransportSolution sol = swap ? transport_solution(b, a) : transport_solution(a, b);
  if (!sol.certificate.ok())
    throw InternalError("transport_distance: optimality certificate failed (feasibility " +
                        std::to_string(sol.certificate.max_feasibility_error) + ", slackness " +
                        std::to_string(sol.certificate.max_slackness_error) + ")");
  return sol.distance;
}

namespace {

// On an interval where both CDFs are affine in x, F_a - F_b = alpha + beta x.
struct AffinePiece {
  double alpha;
  double beta;
};

AffinePiece affine_cdf(const Marginal& m, ExtReal lo, ExtReal hi) {
  if (m.is_atomic() || !lo.is_finite() || !hi.is_finite()) {
    // Constant on the open interval: evaluate just above lo.
    if (m.is_atomic()) return {cdf_eval(m, lo), 0.0};
    if (hi <= ExtReal(m.knots().front().x)) return {0.0, 0.0};
    return {1.0, 0.0};
  }
  const double x0 = lo.value(), x1 = hi.value();
  const double f0 = cdf_eval(m, lo), f1 = cdf_eval(m, hi);
  const double beta = (f1 - f0) / (x1 - x0);
  return {f0 - beta * x0, beta};
}

// Integral of (alpha + beta x) / (pi (1 + x^2)) on [x0, x1], finite ends.
double signed_piece(double alpha, double beta, double x0, double x1) {
  const double atan_part = alpha * (std::atan(x1) - std::atan(x0));
  const double log_part = 0.5 * beta * (std::log1p(x1 * x1) - std::log1p(x0 * x0));
  return (atan_part + log_part) / std::numbers::pi;
}

}  // namespace

double w1_one_dim(const Marginal& a, const Marginal& b) {
  std::vector<ExtReal> cuts{ExtReal::neg_inf(), ExtReal::pos_inf()};
  for (const Marginal* m : {&a, &b}) {
    for (const Atom& at : m->atoms()) cuts.push_back(at.x);
    for (const Knot& k : m->knots()) cuts.emplace_back(k.x);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  double total = 0.0;
  for (std::size_t k = 1; k < cuts.size(); ++k) {
    const ExtReal lo = cuts[k - 1], hi = cuts[k];
    const AffinePiece pa = affine_cdf(a, lo, hi);
    const AffinePiece pb = affine_cdf(b, lo, hi);
    const double alpha = pa.alpha - pb.alpha;
    const double beta = pa.beta - pb.beta;
    if (beta == 0.0) {
      total += std::abs(alpha) * (compactify(hi) - compactify(lo));
      continue;
    }
    const double x0 = lo.value(), x1 = hi.value();
    const double root = -alpha / beta;
    if (root > x0 && root < x1)
      total += std::abs(signed_piece(alpha, beta, x0, root)) + std::abs(signed_piece(alpha, beta, root, x1));
    else
      total += std::abs(signed_piece(alpha, beta, x0, x1));
  }
  return total;
}

TensorMeasure member_measure(const ProjectiveFamily::Member& m) {
  if (const auto* t = std::get_if<TensorMeasure>(&m)) return *t;
  return cell_center_measure(std::get<CheckerboardCopula>(m));
}

std::vector<FddTerm> fdd_terms(const ProjectiveFamily& f, const ProjectiveFamily& g, const FddMetricConfig& cfg) {
  if (cfg.depth < 1) throw DomainError("fdd_distance: depth must be at least 1");
  if (!(f.universe() == g.universe())) throw IndexError("fdd_distance: families live on different universes");
  std::vector<FddTerm> terms;
  double weight = 0.5;
  for (const IndexSubset& J : f.universe().canonical_subsets(cfg.depth)) {
    FddTerm term;
    term.subset = J;
    term.weight = weight;
    term.distance = transport_distance(member_measure(f.member(J)), member_measure(g.member(J)));
    term.contribution = weight * std::min(1.0, term.distance);
    terms.push_back(std::move(term));
    weight *= 0.5;
  }
  return terms;
}

double fdd_distance(const ProjectiveFamily& f, const ProjectiveFamily& g, const FddMetricConfig& cfg) {
  double total = 0.0;
  for (const FddTerm& t : fdd_terms(f, g, cfg)) total += t.contribution;
  return total;
}

CompactnessResult compactness_probe(const std::vector<CheckerboardCopula>& seq, double eps) {
  if (seq.empty()) throw ConfigurationError("compactness_probe: empty sequence");
  if (!(eps >= 0.0)) throw DomainError("compactness_probe: eps must be nonnegative");
  for (const auto& c : seq)
    if (c.index_subset() != seq.front().index_subset() || c.order() != seq.front().order())
      throw DimensionError("compactness_probe: sequence elements differ in shape");

  std::vector<bool> assigned(seq.size(), false);
  std::vector<std::vector<std::size_t>> clusters;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (assigned[i]) continue;
    std::vector<std::size_t> members;
    for (std::size_t j = i; j < seq.size(); ++j) {
      if (assigned[j]) continue;
      if (max_abs_difference(seq[i], seq[j]) <= eps) {
        assigned[j] = true;
        members.push_back(j);
      }
    }
    clusters.push_back(std::move(members));
  }
  std::size_t best = 0;
  for (std::size_t k = 1; k < clusters.size(); ++k)
    if (clusters[k].size() > clusters[best].size()) best = k;
  const std::size_t anchor = clusters[best].front();
  return CompactnessResult{clusters[best], anchor, seq[anchor], clusters.size()};
}

bool ContinuityReport::nonincreasing_from(std::size_t from) const {
  for (std::size_t k = from + 1; k < steps.size(); ++k)
    if (steps[k].output_distance > steps[k - 1].output_distance) return false;
  return true;
}

namespace {

Marginal perturb_marginal(const Marginal& m, const std::vector<double>& delta, double eps) {
  if (!m.is_atomic() || eps == 0.0) return m;
  std::vector<Atom> atoms(m.atoms().begin(), m.atoms().end());
  double total = 0.0;
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    atoms[k].w *= 1.0 + eps * delta[k];
    if (atoms[k].w < 0.0) throw ConfigurationError("continuity_probe: marginal perturbation produced a negative weight");
    total += atoms[k].w;
  }
  for (Atom& a : atoms) a.w /= total;
  return Marginal::atomic(std::move(atoms));
}

CheckerboardCopula perturb_copula(const CheckerboardCopula& c, const Eigen::VectorXd& direction, double eps) {
  if (eps == 0.0 || direction.isZero(0.0)) return c;
  Eigen::VectorXd m = c.mass() + eps * direction;
  if ((m.array() <= 0.0).any())
    throw ConfigurationError("continuity_probe: copula perturbation leaves the positive cone; cannot refit margins");
  return fit_uniform_margins(c.index_subset(), c.order(), std::move(m));
}

}  // namespace

ContinuityReport continuity_probe(const CheckerboardCopula& target, const std::map<Label, Marginal>& marginals,
                                  const ContinuityConfig& cfg) {
  if (const CopulaReport r = validate_copula(target); !r.ok)
    throw ValidationError("continuity_probe: target is not a copula: " + r.describe());
  Rng rng(cfg.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const double cell = 1.0 / static_cast<double>(target.mass().size());
  Eigen::VectorXd direction(target.mass().size());
  for (Eigen::Index k = 0; k < direction.size(); ++k) direction[k] = cfg.perturb_copula ? unit(rng) * cell : 0.0;
  std::map<Label, std::vector<double>> deltas;
  for (const auto& [label, m] : marginals) {
    auto& d = deltas[label];
    for (std::size_t k = 0; k < m.atoms().size(); ++k) d.push_back(cfg.perturb_marginals ? unit(rng) : 0.0);
  }

  const JointMeasure base = compose(family_from_copula(target), marginals);
  const ProjectiveFamily base_family = joint_family(base, cfg.grids);

  ContinuityReport report;
  for (double eps : cfg.schedule) {
    const CheckerboardCopula c = perturb_copula(target, direction, eps);
    std::map<Label, Marginal> ms;
    double input = max_abs_difference(c, target);
    for (const auto& [label, m] : marginals) {
      Marginal p = perturb_marginal(m, deltas[label], eps);
      input = std::max(input, w1_one_dim(p, m));
      ms.emplace(label, std::move(p));
    }
    const JointMeasure jm = compose(family_from_copula(c), std::move(ms));
    ContinuityStep step;
    step.epsilon = eps;
    step.input_distance = input;
    step.terms = fdd_terms(joint_family(jm, cfg.grids), base_family, cfg.fdd);
    for (const FddTerm& t : step.terms) step.output_distance += t.contribution;
    report.steps.push_back(std::move(step));
  }
  return report;
}

}  // namespace copulim
