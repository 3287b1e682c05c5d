// Command-line front end: validate, compose, decompose, distance,
// compact-demo, extremal. Reports go to stdout, diagnostics to stderr.
//
// Exit codes: 0 pass, 1 parse/usage, 2 validation, 3 compatibility,
// 4 unsupported theory case, 5 internal.

#include <cstdio>
#include <iostream>
#include <random>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "copulim/checkerboard.hpp"
#include "copulim/errors.hpp"
#include "copulim/extremal.hpp"
#include "copulim/io.hpp"
#include "copulim/random_copula.hpp"
#include "copulim/sklar.hpp"
#include "copulim/topology.hpp"

namespace {

using namespace copulim;
using Json = nlohmann::ordered_json;

enum Exit { kPass = 0, kParse = 1, kInvalid = 2, kIncompatible = 3, kUnsupported = 4, kInternal = 5 };

class CompatibilityError : public Error {
 public:
  using Error::Error;
};

std::string num(double x) { return io::format_number(x); }

Json labels_json(const IndexSubset& J) {
  Json a = Json::array();
  for (Label l : J) a.push_back(l);
  return a;
}

void emit(const Json& report) { std::cout << report.dump(2) << "\n"; }

template <typename T>
const T& expect(const io::Document&&, const std::string&) = delete;

template <typename T>
const T& expect(const io::Document& doc, const std::string& what) {
  const T* p = std::get_if<T>(&doc);
  if (!p) throw CompatibilityError("expected " + what);
  return *p;
}

int cmd_validate(const std::string& path) {
  const io::Document doc = io::read_document(path);
  Json report;
  report["command"] = "validate";
  report["path"] = path;
  bool ok = true;
  if (const auto* c = std::get_if<CheckerboardCopula>(&doc)) {
    const CopulaReport r = validate_copula(*c);
    ok = r.ok;
    report["kind"] = "checkerboard_copula";
    report["max_margin_deviation"] = num(r.max_margin_deviation);
    Json issues = Json::array();
    for (const auto& v : r.violations) {
      Json i;
      switch (v.kind) {
        case CopulaViolation::Kind::NegativeMass: i["issue"] = "negative_mass"; break;
        case CopulaViolation::Kind::TotalMass: i["issue"] = "total_mass"; break;
        case CopulaViolation::Kind::Margin:
          i["issue"] = "margin";
          i["axis"] = v.axis + 1;
          i["label"] = c->index_subset()[static_cast<std::size_t>(v.axis)];
          break;
      }
      if (!v.cell.empty()) {
        Json cell = Json::array();
        for (std::size_t k : v.cell) cell.push_back(k + 1);
        i["cell"] = cell;
      }
      i["value"] = num(v.value);
      i["expected"] = num(v.expected);
      issues.push_back(i);
    }
    report["violations"] = issues;
    if (!ok) std::cerr << r.describe();
  } else if (const auto* f = std::get_if<io::FamilySpec>(&doc)) {
    const ProjectiveFamily fam = io::build_family(*f);
    const auto subsets = io::spot_check_subsets(*f);
    const ConsistencyReport r = check_consistency(fam, subsets);
    ok = r.consistent;
    report["kind"] = "family_spec";
    report["subsets_checked"] = subsets.size();
    report["pairs_checked"] = r.pairs_checked;
    report["max_deviation"] = num(r.max_deviation);
    Json bad = Json::array();
    for (const auto& v : r.violations)
      bad.push_back(Json{{"smaller", labels_json(v.smaller)}, {"larger", labels_json(v.larger)}, {"deviation", num(v.deviation)}});
    report["violations"] = bad;
  } else if (std::holds_alternative<TensorMeasure>(doc)) {
    report["kind"] = "tensor_measure";  // invariants were checked while parsing
  } else {
    report["kind"] = "marginal";
  }
  report["valid"] = ok;
  emit(report);
  return ok ? kPass : kInvalid;
}

ProjectiveFamily copula_family_from(const io::Document& doc, IndexSubset* default_subset) {
  if (const auto* c = std::get_if<CheckerboardCopula>(&doc)) {
    const CopulaReport r = validate_copula(*c);
    if (!r.ok) throw ValidationError("copula file is not a valid copula: " + r.describe());
    *default_subset = c->index_subset();
    return family_from_copula(*c);
  }
  if (const auto* f = std::get_if<io::FamilySpec>(&doc)) {
    ProjectiveFamily fam = io::build_family(*f);
    if (fam.kind() != ProjectiveFamily::Kind::Copula) throw CompatibilityError("family spec does not describe copulas");
    if (f->universe.is_finite()) *default_subset = f->universe.labels();
    return fam;
  }
  throw CompatibilityError("copula file must be a checkerboard_copula or family_spec document");
}

int cmd_compose(const std::string& copula_path, const std::string& marginals_path, const std::vector<Label>& subset,
                const std::string& out) {
  IndexSubset J;
  ProjectiveFamily fam = copula_family_from(io::read_document(copula_path), &J);
  const io::Document ms_doc = io::read_document(marginals_path);
  const auto& ms = expect<io::MarginalSet>(ms_doc, "a marginal document");
  if (!subset.empty()) J = IndexSubset(subset);
  if (J.empty()) throw CompatibilityError("no index subset given for a countable family (use --subset)");
  if (!fam.universe().contains(J)) throw CompatibilityError("subset " + to_string(J) + " is outside the copula's labels");
  const auto marginals = ms.by_label();
  for (Label l : J)
    if (!marginals.count(l)) throw CompatibilityError("no marginal for label " + std::to_string(l));
  if (fam.universe().is_finite())
    for (Label l : fam.universe().labels())
      if (!marginals.count(l)) throw CompatibilityError("no marginal for label " + std::to_string(l));

  const JointMeasure jm = compose(fam, marginals);
  const GridMap grids = ms.grids();
  const TensorMeasure t = discretize_joint(jm, J, grids);
  const SklarReport sr = verify_sklar(jm, J, grids);

  Json report;
  report["command"] = "compose";
  report["subset"] = labels_json(J);
  report["sklar_max_deviation"] = num(sr.max_deviation);
  report["probes"] = sr.probes;
  if (!out.empty()) {
    io::write_document(out, t);
    report["out"] = out;
  } else {
    report["result"] = Json::parse(io::serialize(t));
  }
  emit(report);
  return kPass;
}

int cmd_decompose(const std::string& joint_path, const std::string& marginals_path, int order, const std::string& out) {
  const io::Document t_doc = io::read_document(joint_path);
  const io::Document ms_doc = io::read_document(marginals_path);
  const auto& t = expect<TensorMeasure>(t_doc, "a tensor_measure joint");
  const auto& ms = expect<io::MarginalSet>(ms_doc, "a marginal document");
  const auto by_label = ms.by_label();
  std::vector<Marginal> marginals;
  for (Label l : t.index_subset()) {
    auto it = by_label.find(l);
    if (it == by_label.end()) throw CompatibilityError("no marginal for label " + std::to_string(l));
    marginals.push_back(it->second);
  }
  const CheckerboardCopula c = decompose(t, marginals, order);

  GridMap grids;
  for (std::size_t a = 0; a < t.rank(); ++a) grids[t.index_subset()[a]] = t.axis(a);
  const JointMeasure jm = compose(family_from_copula(c), by_label);
  const double round_trip = cdf_sup_distance(discretize_joint(jm, t.index_subset(), grids), t);

  Json report;
  report["command"] = "decompose";
  report["order"] = order;
  report["copula_valid"] = validate_copula(c).ok;
  report["round_trip_deviation"] = num(round_trip);
  if (!out.empty()) {
    io::write_document(out, c);
    report["out"] = out;
  } else {
    report["result"] = Json::parse(io::serialize(c));
  }
  emit(report);
  return kPass;
}

int cmd_distance(const std::string& a_path, const std::string& b_path, bool fdd, std::size_t depth) {
  const io::Document a = io::read_document(a_path);
  const io::Document b = io::read_document(b_path);
  double d = 0.0;
  if (fdd) {
    const auto& fa = expect<io::FamilySpec>(a, "family_spec documents with --fdd");
    const auto& fb = expect<io::FamilySpec>(b, "family_spec documents with --fdd");
    if (!(fa.universe == fb.universe)) throw CompatibilityError("families live on different universes");
    d = fdd_distance(io::build_family(fa), io::build_family(fb), FddMetricConfig{depth});
  } else if (a.index() != b.index()) {
    throw CompatibilityError("documents are of different kinds");
  } else if (const auto* ta = std::get_if<TensorMeasure>(&a)) {
    const auto& tb = std::get<TensorMeasure>(b);
    if (ta->index_subset() != tb.index_subset()) throw CompatibilityError("measures live on different index subsets");
    d = transport_distance(*ta, tb);
  } else if (const auto* ca = std::get_if<CheckerboardCopula>(&a)) {
    const auto& cb = std::get<CheckerboardCopula>(b);
    if (ca->index_subset() != cb.index_subset()) throw CompatibilityError("copulas live on different index subsets");
    d = transport_distance(cell_center_measure(*ca), cell_center_measure(cb));
  } else if (const auto* ma = std::get_if<io::MarginalSet>(&a)) {
    const auto& mb = std::get<io::MarginalSet>(b);
    if (ma->items.size() != 1 || mb.items.size() != 1)
      throw CompatibilityError("marginal distance needs exactly one marginal per file");
    const Marginal& x = ma->items[0].marginal;
    const Marginal& y = mb.items[0].marginal;
    if (x.is_atomic() && y.is_atomic())
      d = transport_distance(TensorMeasure::from_marginal(0, x), TensorMeasure::from_marginal(0, y));
    else
      d = w1_one_dim(x, y);
  } else {
    throw CompatibilityError("family specs need --fdd");
  }
  std::printf("%.12g\n", d);
  return kPass;
}

CheckerboardCopula mix(const CheckerboardCopula& a, const CheckerboardCopula& b, double t) {
  return CheckerboardCopula(a.index_subset(), a.order(), (1.0 - t) * a.mass() + t * b.mass());
}

int cmd_compact_demo(std::size_t count, int order, double eps, std::uint64_t seed, const std::string& pattern) {
  const IndexSubset J{0, 1};
  Rng rng(seed);
  std::vector<CheckerboardCopula> seq;
  if (pattern == "constant") {
    const CheckerboardCopula c = random_copula(J, order, rng);
    seq.assign(count, c);
  } else if (pattern == "alternating") {
    for (std::size_t k = 0; k < count; ++k) seq.push_back(k % 2 == 0 ? make_independence(J, order) : make_comonotone(J, order));
  } else {
    std::vector<CheckerboardCopula> anchors;
    for (int k = 0; k < 3; ++k) anchors.push_back(random_copula(J, order, rng));
    std::uniform_int_distribution<int> pick(0, 2);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t k = 0; k < count; ++k) {
      const CheckerboardCopula& a = anchors[static_cast<std::size_t>(pick(rng))];
      const CheckerboardCopula r = random_copula(J, order, rng);
      const double spread = max_abs_difference(a, r);
      const double t = spread > 0.0 ? unit(rng) * 0.49 * eps / spread : 0.0;
      seq.push_back(mix(a, r, std::min(t, 1.0)));
    }
  }
  const CompactnessResult res = compactness_probe(seq, eps);

  Json report;
  report["command"] = "compact_demo";
  report["pattern"] = pattern;
  report["count"] = count;
  report["order"] = order;
  report["eps"] = num(eps);
  report["seed"] = seed;
  report["clusters"] = res.clusters;
  report["length"] = res.indices.size();
  report["subsequence"] = res.indices;
  report["representative_index"] = res.representative_index;
  report["representative_valid"] = validate_copula(res.representative).ok;
  report["representative"] = Json::parse(io::serialize(res.representative));
  emit(report);
  return kPass;
}

int cmd_extremal(int order, const std::string& functional, std::uint64_t seed, std::size_t samples) {
  ConvexFunctional g;
  Json report;
  if (functional == "linear") {
    Rng rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    RowMajorMatrix w(order, order);
    for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = unit(rng);
    g = linear_functional(w);
    Json rows = Json::array();
    for (int i = 0; i < order; ++i) {
      Json row = Json::array();
      for (int j = 0; j < order; ++j) row.push_back(num(w(i, j)));
      rows.push_back(row);
    }
    report["weights"] = rows;
  } else if (functional == "max_cell") {
    g = max_cell_functional();
  } else if (functional == "constant") {
    g = constant_functional(1.0);
  } else {
    throw ConfigurationError("unknown functional '" + functional + "' (linear, max_cell, constant)");
  }
  ExtremalConfig cfg;
  cfg.samples = samples;
  cfg.seed = seed + 1;
  const ExtremalResult r = maximize_convex(g, order, cfg);

  Json out;
  out["command"] = "extremal";
  out["order"] = order;
  out["functional"] = functional;
  out["seed"] = seed;
  out["extremal_best"] = num(r.extremal_best);
  out["best_permutation"] = r.best_permutation;
  out["interior_best"] = num(r.interior_best);
  out["interior_samples"] = r.interior_evaluated;
  out["interior_within_extremal"] = r.interior_best <= r.extremal_best + 1e-9;
  out["convexity_violations"] = r.convexity_violations;
  for (auto& [k, v] : report.items()) out[k] = v;
  emit(out);
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"copulim: copulas, projective families and the Sklar composition"};
  app.require_subcommand(1);

  std::string path, path_b, out;
  std::vector<Label> subset;
  int order = 4;
  bool fdd = false;
  std::size_t depth = 7, count = 300, samples = 1000;
  double eps = 0.05;
  std::uint64_t seed = 0;
  std::string functional = "linear", pattern = "clusters";

  auto* validate = app.add_subcommand("validate", "Validate a copula, measure, marginal or family spec file");
  validate->add_option("path", path, "Document to validate")->required();

  auto* composecmd = app.add_subcommand("compose", "Push a copula through marginal quantiles");
  composecmd->add_option("copula", path, "checkerboard_copula or family_spec file")->required();
  composecmd->add_option("marginals", path_b, "marginal file")->required();
  composecmd->add_option("--subset", subset, "Index labels of the requested finite-dimensional law");
  composecmd->add_option("--out", out, "Write the discretized joint here");

  auto* decomposecmd = app.add_subcommand("decompose", "Recover the checkerboard copula of a joint");
  decomposecmd->add_option("joint", path, "tensor_measure file")->required();
  decomposecmd->add_option("marginals", path_b, "continuous marginal file")->required();
  decomposecmd->add_option("--order", order, "Checkerboard order n")->required()->check(CLI::PositiveNumber);
  decomposecmd->add_option("--out", out, "Write the copula here");

  auto* distance = app.add_subcommand("distance", "Transport or finite-dimensional-distribution distance");
  distance->add_option("a", path, "tensor_measure, checkerboard_copula or family_spec file")->required();
  distance->add_option("b", path_b, "Document of the same kind")->required();
  distance->add_flag("--fdd", fdd, "Compare family specs with the fdd metric");
  distance->add_option("--depth", depth, "Number of canonical subsets in the fdd metric")->capture_default_str()->check(CLI::PositiveNumber);

  auto* compact = app.add_subcommand("compact-demo", "Greedy eps-cluster subsequence of a copula sequence");
  compact->add_option("--count", count, "Sequence length")->capture_default_str()->check(CLI::PositiveNumber);
  compact->add_option("--order", order, "Checkerboard order n")->capture_default_str()->check(CLI::Range(1, 64));
  compact->add_option("--eps", eps, "Cluster radius in max-norm")->capture_default_str()->check(CLI::NonNegativeNumber);
  compact->add_option("--seed", seed, "Random seed")->capture_default_str();
  compact->add_option("--pattern", pattern, "Sequence generator")->capture_default_str()->check(CLI::IsMember({"clusters", "constant", "alternating"}));

  auto* extremal = app.add_subcommand("extremal", "Maximize a convex functional over permutation copulas");
  extremal->add_option("--order", order, "Checkerboard order n (exhaustive over n! permutations)")->capture_default_str()->check(CLI::Range(1, 8));
  extremal->add_option("--functional", functional, "Built-in convex functional")->capture_default_str()->check(CLI::IsMember({"linear", "max_cell", "constant"}));
  extremal->add_option("--seed", seed, "Random seed for weights and interior samples")->capture_default_str();
  extremal->add_option("--samples", samples, "Random interior copulas to compare against")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kParse;
  }

  try {
    if (*validate) return cmd_validate(path);
    if (*composecmd) return cmd_compose(path, path_b, subset, out);
    if (*decomposecmd) return cmd_decompose(path, path_b, order, out);
    if (*distance) return cmd_distance(path, path_b, fdd, depth);
    if (*compact) return cmd_compact_demo(count, order, eps, seed, pattern);
    if (*extremal) return cmd_extremal(order, functional, seed, samples);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const ValidationError& e) {
    std::cerr << "validation failed: " << e.what() << "\n";
    return kInvalid;
  } catch (const UnsupportedError& e) {
    std::cerr << "unsupported: " << e.what() << "\n";
    return kUnsupported;
  } catch (const CompatibilityError& e) {
    std::cerr << "incompatible inputs: " << e.what() << "\n";
    return kIncompatible;
  } catch (const IndexError& e) {
    std::cerr << "incompatible inputs: " << e.what() << "\n";
    return kIncompatible;
  } catch (const ConfigurationError& e) {
    std::cerr << "incompatible inputs: " << e.what() << "\n";
    return kIncompatible;
  } catch (const ConsistencyError& e) {
    std::cerr << "incompatible inputs: " << e.what() << "\n";
    return kIncompatible;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kParse;
}
