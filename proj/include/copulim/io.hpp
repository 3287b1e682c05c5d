#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "copulim/checkerboard.hpp"
#include "copulim/marginal.hpp"
#include "copulim/projective.hpp"
#include "copulim/sklar.hpp"
#include "copulim/tensor_measure.hpp"

namespace copulim::io {

struct LabeledMarginal {
  Label label = 0;
  Marginal marginal;
  std::optional<Axis> grid;  // discretization grid for continuous marginals
  friend bool operator==(const LabeledMarginal&, const LabeledMarginal&) = default;
};

/// A "marginal" document: one or more labeled marginals.
struct MarginalSet {
  std::vector<LabeledMarginal> items;
  friend bool operator==(const MarginalSet&, const MarginalSet&) = default;

  std::map<Label, Marginal> by_label() const;
  GridMap grids() const;
};

/// Spot checks cover 3^depth - 2^depth subset pairs.
inline constexpr int kMaxSpotCheckDepth = 12;

/// A "family_spec" document naming a built-in rule.
struct FamilySpec {
  std::string rule;  // "independence", "comonotone" or "from_joint"
  IndexUniverse universe = IndexUniverse::countable();
  int order = 1;                       // copula rules
  std::optional<TensorMeasure> joint;  // from_joint
  std::size_t depth = 4;               // spot-check all subsets of the first `depth` labels
  friend bool operator==(const FamilySpec&, const FamilySpec&) = default;
};

using Document = std::variant<MarginalSet, TensorMeasure, CheckerboardCopula, FamilySpec>;

/// Shortest decimal string that reads back to the same double.
std::string format_number(double x);

/// ParseError (with 1-based line/column for JSON syntax errors) on
/// malformed input; ValidationError if a value breaks a type invariant.
Document parse_document(const std::string& text);
Document read_document(const std::filesystem::path& path);

std::string serialize(const Document& doc);
void write_document(const std::filesystem::path& path, const Document& doc);

ProjectiveFamily build_family(const FamilySpec& spec);
std::vector<IndexSubset> spot_check_subsets(const FamilySpec& spec);

}  // namespace copulim::io
