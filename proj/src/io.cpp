#include "copulim/io.hpp"

#include <cstdint>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "copulim/errors.hpp"

namespace copulim::io {

using Json = nlohmann::ordered_json;

std::string format_number(double x) { return to_string(ExtReal(x)); }

namespace {

double read_number(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const ExtReal v = parse_ext_real(j.get<std::string>());
    if (!v.is_finite()) throw ParseError("expected a finite number, got '" + j.get<std::string>() + "'");
    return v.value();
  }
  throw ParseError("expected a number or decimal string");
}

ExtReal read_ext(const Json& j) {
  if (j.is_number()) return ExtReal(j.get<double>());
  if (j.is_string()) return parse_ext_real(j.get<std::string>());
  throw ParseError("expected an extended real (number or string)");
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
  return j.at(key);
}

IndexSubset read_subset(const Json& j) {
  if (!j.is_array()) throw ParseError("index_subset must be an array of integer labels");
  std::vector<Label> ls;
  for (const Json& x : j) {
    if (!x.is_number_integer()) throw ParseError("labels must be integers");
    ls.push_back(x.get<Label>());
  }
  return IndexSubset(std::move(ls));
}

Json write_subset(const IndexSubset& J) {
  Json a = Json::array();
  for (Label l : J) a.push_back(l);
  return a;
}

Json write_masses(const Eigen::VectorXd& m) {
  Json a = Json::array();
  for (Eigen::Index k = 0; k < m.size(); ++k) a.push_back(format_number(m[k]));
  return a;
}

Eigen::VectorXd read_masses(const Json& j) {
  if (!j.is_array()) throw ParseError("mass must be an array");
  Eigen::VectorXd m(static_cast<Eigen::Index>(j.size()));
  for (std::size_t k = 0; k < j.size(); ++k) m[static_cast<Eigen::Index>(k)] = read_number(j[k]);
  return m;
}

Json write_axis(const Axis& ax) {
  Json a = Json::array();
  for (ExtReal x : ax) a.push_back(to_string(x));
  return a;
}

Axis read_axis(const Json& j) {
  if (!j.is_array()) throw ParseError("grid axis must be an array");
  Axis ax;
  for (const Json& x : j) ax.push_back(read_ext(x));
  return ax;
}

Json write_tensor(const TensorMeasure& t) {
  Json j;
  j["kind"] = "tensor_measure";
  j["index_subset"] = write_subset(t.index_subset());
  Json g = Json::array();
  for (const Axis& ax : t.grid()) g.push_back(write_axis(ax));
  j["grid"] = g;
  j["mass"] = write_masses(t.mass());
  return j;
}

TensorMeasure read_tensor(const Json& j) {
  Grid grid;
  const Json& g = field(j, "grid");
  if (!g.is_array()) throw ParseError("grid must be an array of axes");
  for (const Json& ax : g) grid.push_back(read_axis(ax));
  return TensorMeasure(read_subset(field(j, "index_subset")), std::move(grid), read_masses(field(j, "mass")));
}

Json write_copula(const CheckerboardCopula& c) {
  Json j;
  j["kind"] = "checkerboard_copula";
  j["index_subset"] = write_subset(c.index_subset());
  j["order"] = c.order();
  j["mass"] = write_masses(c.mass());
  return j;
}

CheckerboardCopula read_copula(const Json& j) {
  const Json& order = field(j, "order");
  if (!order.is_number_integer()) throw ParseError("order must be an integer");
  return CheckerboardCopula(read_subset(field(j, "index_subset")), order.get<int>(), read_masses(field(j, "mass")));
}

Json write_marginals(const MarginalSet& s) {
  Json j;
  j["kind"] = "marginal";
  Json items = Json::array();
  for (const auto& item : s.items) {
    Json m;
    m["label"] = item.label;
    if (item.marginal.is_atomic()) {
      m["type"] = "atomic";
      Json atoms = Json::array();
      for (const Atom& a : item.marginal.atoms()) atoms.push_back(Json{{"x", to_string(a.x)}, {"w", format_number(a.w)}});
      m["atoms"] = atoms;
    } else {
      m["type"] = "continuous";
      Json knots = Json::array();
      for (const Knot& k : item.marginal.knots())
        knots.push_back(Json{{"x", format_number(k.x)}, {"F", format_number(k.F)}});
      m["knots"] = knots;
    }
    if (item.grid) m["grid"] = write_axis(*item.grid);
    items.push_back(m);
  }
  j["marginals"] = items;
  return j;
}

MarginalSet read_marginals(const Json& j) {
  MarginalSet s;
  const Json& items = field(j, "marginals");
  if (!items.is_array()) throw ParseError("marginals must be an array");
  for (const Json& m : items) {
    const Json& label = field(m, "label");
    if (!label.is_number_integer()) throw ParseError("marginal label must be an integer");
    const std::string type = field(m, "type").get<std::string>();
    std::optional<Axis> grid;
    if (m.contains("grid")) grid = read_axis(m.at("grid"));
    if (type == "atomic") {
      std::vector<Atom> atoms;
      for (const Json& a : field(m, "atoms")) atoms.push_back({read_ext(field(a, "x")), read_number(field(a, "w"))});
      s.items.push_back({label.get<Label>(), Marginal::atomic(std::move(atoms)), std::move(grid)});
    } else if (type == "continuous") {
      std::vector<Knot> knots;
      for (const Json& k : field(m, "knots")) knots.push_back({read_number(field(k, "x")), read_number(field(k, "F"))});
      s.items.push_back({label.get<Label>(), Marginal::continuous(std::move(knots)), std::move(grid)});
    } else {
      throw ParseError("unknown marginal type '" + type + "'");
    }
  }
  return s;
}

Json write_family(const FamilySpec& f) {
  Json j;
  j["kind"] = "family_spec";
  j["rule"] = f.rule;
  if (f.universe.is_finite())
    j["universe"] = Json{{"type", "finite"}, {"labels", write_subset(f.universe.labels())}};
  else
    j["universe"] = Json{{"type", "countable"}};
  j["order"] = f.order;
  j["depth"] = f.depth;
  if (f.joint) j["joint"] = write_tensor(*f.joint);
  return j;
}

FamilySpec read_family(const Json& j) {
  FamilySpec f;
  f.rule = field(j, "rule").get<std::string>();
  if (f.rule != "independence" && f.rule != "comonotone" && f.rule != "from_joint")
    throw ParseError("unknown family rule '" + f.rule + "'");
  if (j.contains("universe")) {
    const Json& u = j.at("universe");
    const std::string type = field(u, "type").get<std::string>();
    if (type == "finite")
      f.universe = IndexUniverse::finite(read_subset(field(u, "labels")).labels());
    else if (type != "countable")
      throw ParseError("universe type must be 'finite' or 'countable'");
  }
  if (j.contains("order")) f.order = j.at("order").get<int>();
  if (j.contains("depth")) {
    const auto depth = j.at("depth").get<std::int64_t>();
    if (depth < 1 || depth > kMaxSpotCheckDepth)
      throw ParseError("depth must lie in [1, " + std::to_string(kMaxSpotCheckDepth) + "]");
    f.depth = static_cast<std::size_t>(depth);
  }
  if (j.contains("joint")) f.joint = read_tensor(j.at("joint"));
  if (f.rule == "from_joint") {
    if (!f.joint) throw ParseError("rule 'from_joint' needs a 'joint' tensor measure");
    f.universe = IndexUniverse::finite(f.joint->index_subset().labels());
  }
  if (f.order < 1) throw ParseError("order must be at least 1");
  return f;
}

void locate(const std::string& text, std::size_t byte, int* line, int* column) {
  *line = 1;
  *column = 1;
  for (std::size_t k = 0; k + 1 < byte && k < text.size(); ++k) {
    if (text[k] == '\n') {
      ++*line;
      *column = 1;
    } else {
      ++*column;
    }
  }
}

}  // namespace

std::map<Label, Marginal> MarginalSet::by_label() const {
  std::map<Label, Marginal> out;
  for (const auto& item : items)
    if (!out.emplace(item.label, item.marginal).second)
      throw ConfigurationError("duplicate marginal for label " + std::to_string(item.label));
  return out;
}

GridMap MarginalSet::grids() const {
  GridMap out;
  for (const auto& item : items)
    if (item.grid) out[item.label] = *item.grid;
  return out;
}

Document parse_document(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    int line = 0, column = 0;
    locate(text, e.byte, &line, &column);
    throw ParseError("JSON syntax error at line " + std::to_string(line) + ", column " + std::to_string(column), line,
                     column);
  }
  try {
    const std::string kind = field(j, "kind").get<std::string>();
    if (kind == "marginal") return read_marginals(j);
    if (kind == "tensor_measure") return read_tensor(j);
    if (kind == "checkerboard_copula") return read_copula(j);
    if (kind == "family_spec") return read_family(j);
    throw ParseError("unknown document kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed document: ") + e.what());
  }
}

Document read_document(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_document(buf.str());
}

std::string serialize(const Document& doc) {
  const Json j = std::visit(
      [](const auto& x) -> Json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, MarginalSet>) return write_marginals(x);
        else if constexpr (std::is_same_v<T, TensorMeasure>) return write_tensor(x);
        else if constexpr (std::is_same_v<T, CheckerboardCopula>) return write_copula(x);
        else return write_family(x);
      },
      doc);
  return j.dump(2) + "\n";
}

void write_document(const std::filesystem::path& path, const Document& doc) {
  std::ofstream out(path);
  if (!out) throw ConfigurationError("cannot write " + path.string());
  out << serialize(doc);
}

ProjectiveFamily build_family(const FamilySpec& spec) {
  if (spec.rule == "independence") return independence_family(spec.universe, spec.order);
  if (spec.rule == "comonotone") return comonotone_family(spec.universe, spec.order);
  if (spec.rule == "from_joint") {
    if (!spec.joint) throw ConfigurationError("family rule 'from_joint' needs a 'joint' tensor measure");
    return family_from_joint(*spec.joint);
  }
  throw ConfigurationError("unknown family rule '" + spec.rule + "'");
}

std::vector<IndexSubset> spot_check_subsets(const FamilySpec& spec) { return spec.universe.prefix_subsets(spec.depth); }

}  // namespace copulim::io
