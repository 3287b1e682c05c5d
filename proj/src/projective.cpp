#include "copulim/projective.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <mutex>
#include <optional>

#include "copulim/errors.hpp"

namespace copulim {

IndexUniverse IndexUniverse::finite(std::vector<Label> labels) {
  IndexUniverse u;
  u.finite_ = true;
  u.labels_ = IndexSubset(std::move(labels));
  if (u.labels_.empty()) throw IndexError("finite universe needs at least one label");
  return u;
}

bool IndexUniverse::contains(Label l) const { return finite_ ? labels_.contains(l) : l >= 0; }

bool IndexUniverse::contains(const IndexSubset& J) const {
  return std::all_of(J.begin(), J.end(), [this](Label l) { return contains(l); });
}

Label IndexUniverse::nth_label(std::size_t k) const { return finite_ ? labels_[k] : static_cast<Label>(k); }

std::vector<IndexSubset> IndexUniverse::canonical_subsets(std::size_t count) const {
  std::vector<IndexSubset> out;
  const std::size_t available = finite_ ? labels_.size() : 62;
  for (std::size_t top = 0; top < available && out.size() < count; ++top) {
    // Subsets whose largest label is the top-th one: {top} plus any subset
    // of the labels below it.
    std::vector<IndexSubset> group;
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << top); ++bits) {
      std::vector<Label> ls;
      for (std::size_t k = 0; k < top; ++k)
        if (bits >> k & 1U) ls.push_back(nth_label(k));
      ls.push_back(nth_label(top));
      group.emplace_back(std::move(ls));
    }
    std::sort(group.begin(), group.end(), canonical_less);
    for (auto& J : group) {
      if (out.size() == count) break;
      out.push_back(std::move(J));
    }
  }
  return out;
}

std::vector<IndexSubset> IndexUniverse::prefix_subsets(std::size_t m) const {
  if (finite_) m = std::min(m, labels_.size());
  return canonical_subsets((std::size_t{1} << m) - 1);
}

struct ProjectiveFamily::State {
  struct Slot {
    std::mutex mu;
    std::optional<Member> value;
  };
  State(IndexUniverse u, Kind k, Rule r) : universe(std::move(u)), kind(k), rule(std::move(r)) {}
  IndexUniverse universe;
  Kind kind;
  Rule rule;
  mutable std::mutex mu;
  std::map<IndexSubset, std::shared_ptr<Slot>> cache;
  std::atomic<std::size_t> evaluations{0};

  Member evaluate(const IndexSubset& J) const {
    Member m = rule(J);
    const IndexSubset& got = std::visit([](const auto& x) -> const IndexSubset& { return x.index_subset(); }, m);
    if (got != J)
      throw ConfigurationError("family rule returned a member over " + to_string(got) + " for " + to_string(J));
    if (kind == Kind::Copula) {
      const auto* c = std::get_if<CheckerboardCopula>(&m);
      if (!c) throw ConfigurationError("copula family rule returned a non-copula member");
      const CopulaReport r = validate_copula(*c);
      if (!r.ok) throw ValidationError("copula family member " + to_string(J) + " is not a copula: " + r.describe());
    } else if (!std::holds_alternative<TensorMeasure>(m)) {
      throw ConfigurationError("general family rule returned a copula member");
    }
    return m;
  }
};

ProjectiveFamily::ProjectiveFamily(IndexUniverse universe, Kind kind, Rule rule)
    : state_(std::make_shared<State>(std::move(universe), kind, std::move(rule))) {}

const IndexUniverse& ProjectiveFamily::universe() const { return state_->universe; }
ProjectiveFamily::Kind ProjectiveFamily::kind() const { return state_->kind; }
std::size_t ProjectiveFamily::evaluations() const { return state_->evaluations.load(); }

const ProjectiveFamily::Member& ProjectiveFamily::member(const IndexSubset& J) const {
  if (J.empty()) throw IndexError("family member requested for the empty subset");
  if (!state_->universe.contains(J)) throw IndexError("subset " + to_string(J) + " is not contained in the universe");
  std::shared_ptr<State::Slot> slot;
  {
    std::lock_guard lock(state_->mu);
    auto& entry = state_->cache[J];
    if (!entry) entry = std::make_shared<State::Slot>();
    slot = entry;
  }
  std::lock_guard lock(slot->mu);
  if (!slot->value) {
    state_->evaluations.fetch_add(1);
    slot->value.emplace(state_->evaluate(J));
  }
  return *slot->value;
}

const CheckerboardCopula& ProjectiveFamily::copula(const IndexSubset& J) const {
  const auto* c = std::get_if<CheckerboardCopula>(&member(J));
  if (!c) throw ConfigurationError("family member is not a copula");
  return *c;
}

const TensorMeasure& ProjectiveFamily::measure(const IndexSubset& J) const {
  const auto* t = std::get_if<TensorMeasure>(&member(J));
  if (!t) throw ConfigurationError("family member is not a tensor measure");
  return *t;
}

void ProjectiveFamily::audit_determinism() const {
  std::vector<std::pair<IndexSubset, std::shared_ptr<State::Slot>>> entries;
  {
    std::lock_guard lock(state_->mu);
    for (const auto& [J, slot] : state_->cache) entries.emplace_back(J, slot);
  }
  for (const auto& [J, slot] : entries) {
    std::lock_guard lock(slot->mu);
    if (!slot->value) continue;
    if (!(state_->evaluate(J) == *slot->value))
      throw ConsistencyError("family rule is not deterministic on " + to_string(J));
  }
}

ProjectiveFamily::Member project(const ProjectiveFamily::Member& m, const IndexSubset& J1) {
  return std::visit(
      [&](const auto& x) -> ProjectiveFamily::Member {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, TensorMeasure>)
          return marginalize_tensor(x, J1);
        else
          return marginalize_copula(x, J1);
      },
      m);
}

namespace {

double copula_cdf_distance(const CheckerboardCopula& a, const CheckerboardCopula& b) {
  std::vector<double> nodes;
  for (int k = 0; k <= a.order(); ++k) nodes.push_back(static_cast<double>(k) / a.order());
  for (int k = 0; k <= b.order(); ++k) nodes.push_back(static_cast<double>(k) / b.order());
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  double worst = 0.0;
  std::vector<double> u(a.rank());
  for_each_index(std::vector<std::size_t>(a.rank(), nodes.size()), [&](const std::vector<std::size_t>& idx) {
    for (std::size_t k = 0; k < idx.size(); ++k) u[k] = nodes[idx[k]];
    worst = std::max(worst, std::abs(cdf_eval_copula(a, u) - cdf_eval_copula(b, u)));
  });
  return worst;
}

}  // namespace

double member_deviation(const ProjectiveFamily::Member& a, const ProjectiveFamily::Member& b) {
  if (a.index() != b.index()) throw ConfigurationError("members of different kinds cannot be compared");
  if (const auto* ca = std::get_if<CheckerboardCopula>(&a)) {
    const auto& cb = std::get<CheckerboardCopula>(b);
    if (ca->index_subset() != cb.index_subset()) throw IndexError("members over different subsets");
    if (ca->order() == cb.order()) return max_abs_difference(*ca, cb);
    return copula_cdf_distance(*ca, cb);
  }
  const auto& ta = std::get<TensorMeasure>(a);
  const auto& tb = std::get<TensorMeasure>(b);
  if (ta.index_subset() == tb.index_subset() && ta.grid() == tb.grid()) return max_mass_difference(ta, tb);
  return cdf_sup_distance(ta, tb);
}

ConsistencyReport check_consistency(const ProjectiveFamily& f, const std::vector<IndexSubset>& subsets, double tol) {
  ConsistencyReport report;
  for (const IndexSubset& big : subsets) {
    for (const IndexSubset& small : subsets) {
      if (!small.is_subset_of(big)) continue;
      const double dev = member_deviation(project(f.member(big), small), f.member(small));
      ++report.pairs_checked;
      report.max_deviation = std::max(report.max_deviation, dev);
      if (!(dev <= tol)) report.violations.push_back({small, big, dev});
    }
  }
  report.consistent = report.violations.empty();
  return report;
}

ProjectiveFamily family_from_joint(const TensorMeasure& t) {
  return ProjectiveFamily(IndexUniverse::finite(t.index_subset().labels()), ProjectiveFamily::Kind::General,
                          [t](const IndexSubset& J) -> ProjectiveFamily::Member { return marginalize_tensor(t, J); });
}

ProjectiveFamily family_from_copula(const CheckerboardCopula& c) {
  return ProjectiveFamily(IndexUniverse::finite(c.index_subset().labels()), ProjectiveFamily::Kind::Copula,
                          [c](const IndexSubset& J) -> ProjectiveFamily::Member { return marginalize_copula(c, J); });
}

ProjectiveFamily independence_family(IndexUniverse universe, int n) {
  return ProjectiveFamily(std::move(universe), ProjectiveFamily::Kind::Copula,
                          [n](const IndexSubset& J) -> ProjectiveFamily::Member { return make_independence(J, n); });
}

ProjectiveFamily comonotone_family(IndexUniverse universe, int n) {
  return ProjectiveFamily(std::move(universe), ProjectiveFamily::Kind::Copula,
                          [n](const IndexSubset& J) -> ProjectiveFamily::Member { return make_comonotone(J, n); });
}

}  // namespace copulim
