#include <gtest/gtest.h>

#include "copulim/errors.hpp"
#include "copulim/random_copula.hpp"
#include "copulim/transport.hpp"
#include "generators.hpp"
#include "oracles/oracles.hpp"

using namespace copulim;

namespace {

Eigen::VectorXd random_weights(Rng& rng, std::size_t k) {
  const auto w = gen::weights(rng, k);
  return Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(k));
}

}  // namespace

TEST(SolveTransport, SingleFeasiblePlan) {
  Eigen::VectorXd s(1), d(3);
  s << 1.0;
  d << 0.2, 0.3, 0.5;
  RowMajorMatrix c(1, 3);
  c << 1.0, 2.0, 4.0;
  const auto plan = solve_transport(s, d, c);
  EXPECT_NEAR(plan.cost, 0.2 + 0.6 + 2.0, 1e-15);
  EXPECT_TRUE(certify_transport(plan, s, d, c).ok());
}

TEST(SolveTransport, RejectsUnbalancedInput) {
  Eigen::VectorXd s(2), d(2);
  s << 0.5, 0.5;
  d << 0.5, 0.6;
  EXPECT_THROW(solve_transport(s, d, RowMajorMatrix::Zero(2, 2)), DomainError);
  EXPECT_THROW(solve_transport(s, d.head(1), RowMajorMatrix::Zero(2, 2)), IndexError);
}

TEST(SolveTransport, UniformMassesReduceToTheAssignmentProblem) {
  Rng rng(113);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = gen::integer(rng, 1, 9);
    RowMajorMatrix c(n, n);
    std::vector<std::vector<double>> neg(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n)));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        c(i, j) = trial % 3 ? gen::uniform(rng, 0.0, 1.0) : gen::integer(rng, 0, 3);
        neg[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = -c(i, j);
      }
    const auto assignment = oracle::hungarian_max(neg);
    double best = 0.0;
    for (int i = 0; i < n; ++i) best += c(i, assignment[static_cast<std::size_t>(i)]) / n;
    const Eigen::VectorXd u = Eigen::VectorXd::Constant(n, 1.0 / n);
    const auto plan = solve_transport(u, u, c);
    EXPECT_NEAR(plan.cost, best, 1e-12);
    EXPECT_TRUE(certify_transport(plan, u, u, c).ok());
  }
}

TEST(SolveTransport, CertificatesHoldOnRandomAndDegenerateInstances) {
  Rng rng(127);
  for (int trial = 0; trial < 300; ++trial) {
    const auto m = static_cast<std::size_t>(gen::integer(rng, 1, 30));
    const auto n = static_cast<std::size_t>(gen::integer(rng, 1, 30));
    const Eigen::VectorXd s = random_weights(rng, m);
    Eigen::VectorXd d = trial % 4 == 0 ? s : random_weights(rng, n);
    RowMajorMatrix c(static_cast<Eigen::Index>(m), d.size());
    for (Eigen::Index i = 0; i < c.rows(); ++i)
      for (Eigen::Index j = 0; j < c.cols(); ++j)
        c(i, j) = trial % 2 ? gen::uniform(rng, 0.0, 1.0) : static_cast<double>(gen::integer(rng, 0, 2));
    const auto plan = solve_transport(s, d, c);
    const auto cert = certify_transport(plan, s, d, c);
    EXPECT_TRUE(cert.ok()) << cert.max_feasibility_error << " " << cert.max_slackness_error << " "
                           << cert.max_dual_violation;
    EXPECT_NEAR(plan.cost, (plan.flow.array() * c.array()).sum(), 1e-12);
  }
}

TEST(CertifyTransport, RejectsSuboptimalPlans) {
  Eigen::VectorXd u(2);
  u << 0.5, 0.5;
  RowMajorMatrix c(2, 2);
  c << 0.0, 1.0, 1.0, 0.0;
  auto plan = solve_transport(u, u, c);
  EXPECT_EQ(plan.cost, 0.0);
  plan.flow << 0.0, 0.5, 0.5, 0.0;
  EXPECT_FALSE(certify_transport(plan, u, u, c).ok());
  plan.flow << 0.5, 0.0, 0.0, 0.4;
  EXPECT_FALSE(certify_transport(plan, u, u, c).feasible);
}
