#include "copulim/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "copulim/errors.hpp"

namespace copulim {

namespace {

struct Cell {
  int row;
  int col;
};

class TransportSimplex {
 public:
  TransportSimplex(const Eigen::Ref<const Eigen::VectorXd>& supply, const Eigen::Ref<const Eigen::VectorXd>& demand,
                   const Eigen::Ref<const RowMajorMatrix>& cost)
      : m_(static_cast<int>(supply.size())), n_(static_cast<int>(demand.size())), cost_(cost) {
    flow_ = RowMajorMatrix::Zero(m_, n_);
    basic_ = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>::Constant(m_, n_, false);
    northwest_corner(supply, demand);
  }

  TransportPlan run() {
    const double tol = 1e-12;
    const long max_pivots = 200L * (m_ + n_) * std::max(m_, n_) + 1000;
    long pivots = 0;
    long degenerate_run = 0;
    bool bland = false;
    while (true) {
      compute_potentials();
      int er = -1, ec = -1;
      double best = -tol;
      for (int i = 0; i < m_ && !(bland && er >= 0); ++i) {
        for (int j = 0; j < n_; ++j) {
          if (basic_(i, j)) continue;
          const double r = cost_(i, j) - u_[i] - v_[j];
          if (r < best) {
            best = r;
            er = i;
            ec = j;
            if (bland) break;
          }
        }
      }
      if (er < 0) break;
      if (++pivots > max_pivots) throw InternalError("transport simplex exceeded its pivot budget");
      const double theta = pivot(er, ec);
      degenerate_run = theta == 0.0 ? degenerate_run + 1 : 0;
      if (degenerate_run > 20L * (m_ + n_)) bland = true;
    }
    TransportPlan plan;
    plan.flow = flow_;
    plan.row_potential = Eigen::Map<Eigen::VectorXd>(u_.data(), m_);
    plan.col_potential = Eigen::Map<Eigen::VectorXd>(v_.data(), n_);
    plan.cost = (flow_.array() * cost_.array()).sum();
    plan.pivots = pivots;
    return plan;
  }

 private:
  void add_basic(int i, int j, double x) {
    basis_.push_back({i, j});
    basic_(i, j) = true;
    flow_(i, j) = x;
  }

  void northwest_corner(const Eigen::VectorXd& supply, const Eigen::VectorXd& demand) {
    std::vector<double> s(supply.data(), supply.data() + m_);
    std::vector<double> d(demand.data(), demand.data() + n_);
    int i = 0, j = 0;
    while (true) {
      double x = std::max(0.0, std::min(s[static_cast<std::size_t>(i)], d[static_cast<std::size_t>(j)]));
      if (i == m_ - 1 && j == n_ - 1) x = std::max(0.0, std::max(s[static_cast<std::size_t>(i)], d[static_cast<std::size_t>(j)]));
      add_basic(i, j, x);
      if (i == m_ - 1 && j == n_ - 1) break;
      s[static_cast<std::size_t>(i)] -= x;
      d[static_cast<std::size_t>(j)] -= x;
      const bool row_done = s[static_cast<std::size_t>(i)] <= d[static_cast<std::size_t>(j)];
      if (j == n_ - 1 || (row_done && i < m_ - 1))
        ++i;
      else
        ++j;
    }
  }

  // Tree over nodes 0..m-1 (rows) and m..m+n-1 (columns); edges are the
  // basic cells.
  void build_adjacency() {
    adj_.assign(static_cast<std::size_t>(m_ + n_), {});
    for (std::size_t e = 0; e < basis_.size(); ++e) {
      adj_[static_cast<std::size_t>(basis_[e].row)].push_back(static_cast<int>(e));
      adj_[static_cast<std::size_t>(m_ + basis_[e].col)].push_back(static_cast<int>(e));
    }
  }

  int other_end(int node, int edge) const {
    const Cell& c = basis_[static_cast<std::size_t>(edge)];
    return node < m_ ? m_ + c.col : c.row;
  }

  void compute_potentials() {
    build_adjacency();
    u_.assign(static_cast<std::size_t>(m_), 0.0);
    v_.assign(static_cast<std::size_t>(n_), 0.0);
    std::vector<bool> seen(static_cast<std::size_t>(m_ + n_), false);
    std::vector<int> stack{0};
    seen[0] = true;
    std::size_t reached = 1;
    while (!stack.empty()) {
      const int node = stack.back();
      stack.pop_back();
      for (int e : adj_[static_cast<std::size_t>(node)]) {
        const int next = other_end(node, e);
        if (seen[static_cast<std::size_t>(next)]) continue;
        seen[static_cast<std::size_t>(next)] = true;
        ++reached;
        const Cell& c = basis_[static_cast<std::size_t>(e)];
        if (next >= m_)
          v_[static_cast<std::size_t>(c.col)] = cost_(c.row, c.col) - u_[static_cast<std::size_t>(c.row)];
        else
          u_[static_cast<std::size_t>(c.row)] = cost_(c.row, c.col) - v_[static_cast<std::size_t>(c.col)];
        stack.push_back(next);
      }
    }
    if (reached != static_cast<std::size_t>(m_ + n_)) throw InternalError("transport simplex basis is not a spanning tree");
  }

  // Pivots cell (er, ec) into the basis; returns the step length.
  double pivot(int er, int ec) {
    // Path in the tree from column node ec back to row node er.
    const int start = m_ + ec, goal = er;
    std::vector<int> parent_edge(static_cast<std::size_t>(m_ + n_), -1);
    std::vector<bool> seen(static_cast<std::size_t>(m_ + n_), false);
    std::vector<int> queue{start};
    seen[static_cast<std::size_t>(start)] = true;
    for (std::size_t q = 0; q < queue.size(); ++q) {
      const int node = queue[q];
      if (node == goal) break;
      for (int e : adj_[static_cast<std::size_t>(node)]) {
        const int next = other_end(node, e);
        if (seen[static_cast<std::size_t>(next)]) continue;
        seen[static_cast<std::size_t>(next)] = true;
        parent_edge[static_cast<std::size_t>(next)] = e;
        queue.push_back(next);
      }
    }
    // Walk back from the row node to the column node; edges adjacent to the
    // row end of the entering cell alternate starting with "minus".
    std::vector<int> path;
    for (int node = goal; node != start;) {
      const int e = parent_edge[static_cast<std::size_t>(node)];
      path.push_back(e);
      node = other_end(node, e);
    }
    double theta = std::numeric_limits<double>::infinity();
    int leave = -1;
    for (std::size_t k = 0; k < path.size(); k += 2) {
      const Cell& c = basis_[static_cast<std::size_t>(path[k])];
      const double x = flow_(c.row, c.col);
      const bool better = x < theta || (x == theta && flat(c) < flat(basis_[static_cast<std::size_t>(leave)]));
      if (better) {
        theta = x;
        leave = path[k];
      }
    }
    for (std::size_t k = 0; k < path.size(); ++k) {
      const Cell& c = basis_[static_cast<std::size_t>(path[k])];
      flow_(c.row, c.col) += (k % 2 == 0) ? -theta : theta;
    }
    const Cell out = basis_[static_cast<std::size_t>(leave)];
    flow_(out.row, out.col) = 0.0;
    basic_(out.row, out.col) = false;
    basis_[static_cast<std::size_t>(leave)] = {er, ec};
    basic_(er, ec) = true;
    flow_(er, ec) = theta;
    return theta;
  }

  long flat(const Cell& c) const { return static_cast<long>(c.row) * n_ + c.col; }

  int m_, n_;
  Eigen::Ref<const RowMajorMatrix> cost_;
  RowMajorMatrix flow_;
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> basic_;
  std::vector<Cell> basis_;
  std::vector<std::vector<int>> adj_;
  std::vector<double> u_, v_;
};

}  // namespace

TransportPlan solve_transport(const Eigen::Ref<const Eigen::VectorXd>& supply,
                              const Eigen::Ref<const Eigen::VectorXd>& demand,
                              const Eigen::Ref<const RowMajorMatrix>& cost) {
  if (supply.size() == 0 || demand.size() == 0) throw DomainError("transport: empty supply or demand");
  if (cost.rows() != supply.size() || cost.cols() != demand.size())
    throw IndexError("transport: cost matrix shape does not match supply/demand");
  if ((supply.array() < 0.0).any() || (demand.array() < 0.0).any())
    throw DomainError("transport: negative supply or demand");
  if (std::abs(supply.sum() - demand.sum()) > 1e-9) throw DomainError("transport: unbalanced problem");
  if (!cost.allFinite()) throw DomainError("transport: non-finite cost");
  return TransportSimplex(supply, demand, cost).run();
}

TransportCertificate certify_transport(const TransportPlan& plan, const Eigen::Ref<const Eigen::VectorXd>& supply,
                                       const Eigen::Ref<const Eigen::VectorXd>& demand,
                                       const Eigen::Ref<const RowMajorMatrix>& cost, double feasibility_tol,
                                       double slackness_tol) {
  TransportCertificate cert;
  const RowMajorMatrix& x = plan.flow;
  cert.max_feasibility_error = std::max({(x.rowwise().sum() - supply).cwiseAbs().maxCoeff(),
                                         (x.colwise().sum().transpose() - demand).cwiseAbs().maxCoeff(),
                                         std::max(0.0, -x.minCoeff())});
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      const double reduced = cost(i, j) - plan.row_potential[i] - plan.col_potential[j];
      cert.max_dual_violation = std::max(cert.max_dual_violation, -reduced);
      if (x(i, j) > 0.0) cert.max_slackness_error = std::max(cert.max_slackness_error, std::abs(reduced));
    }
  }
  cert.feasible = cert.max_feasibility_error <= feasibility_tol;
  cert.optimal = cert.max_slackness_error <= slackness_tol && cert.max_dual_violation <= slackness_tol;
  return cert;
}

}  // namespace copulim
