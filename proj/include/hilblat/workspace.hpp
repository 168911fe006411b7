#pragma once

#include <cstddef>
#include <fstream>
#include <map>
#include <optional>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "hilblat/arith.hpp"
#include "hilblat/group_action.hpp"
#include "hilblat/k3_douady.hpp"
#include "hilblat/lattice.hpp"

namespace hilblat {

/// A lattice together with what the commands need to know about it.
struct NamedLattice {
  Lattice lattice;
  std::optional<int> douady_n;               // set for DOUADY(n)
  std::optional<LatticeVector> exceptional;  // e, for index/naturality

  std::optional<MarkedLattice> marked() const {
    if (!exceptional) return std::nullopt;
    return MarkedLattice(lattice, *exceptional);
  }
};

struct NamedVector {
  std::string lattice;
  LatticeVector coords;
};

struct NamedSublattice {
  std::string lattice;
  Sublattice sublattice;
};

struct NamedIsometry {
  std::string lattice;
  IntMatrix matrix;  // not validated; isometry-check reports on it
};

struct NamedGroup {
  std::string lattice;
  std::vector<IntMatrix> generators;
  std::size_t cap = kDefaultGroupCap;
  std::optional<std::string> ns;  // sublattice name for the transcendental lemma report
};

/// Resolves "U", "E8", "E8_MINUS", "K3", "DOUADY(n)".
inline std::optional<NamedLattice> builtin_lattice(const std::string& name) {
  if (name == "U") return NamedLattice{hyperbolic_plane(), {}, {}};
  if (name == "E8") return NamedLattice{e8_lattice(), {}, {}};
  if (name == "E8_MINUS") return NamedLattice{e8_minus_lattice(), {}, {}};
  if (name == "K3") return NamedLattice{k3_lattice(), {}, {}};
  static const std::regex douady(R"(DOUADY\((-?[0-9]{1,6})\))");
  std::smatch m;
  if (std::regex_match(name, m, douady)) {
    const int n = std::stoi(m[1].str());
    const DouadyLattice d(n);
    return NamedLattice{d.full(), n, d.e_class()};
  }
  return std::nullopt;
}

namespace detail {

inline Integer parse_integer(const nlohmann::json& j, const std::string& where) {
  if (j.is_number_integer()) {
    if (j.is_number_unsigned()) return Integer(j.get<std::uint64_t>());
    return Integer(j.get<std::int64_t>());
  }
  if (j.is_string()) {
    static const std::regex decimal(R"(-?[0-9]+)");
    const std::string s = j.get<std::string>();
    if (std::regex_match(s, decimal)) return Integer(s);
  }
  throw InputError(where + ": expected an integer, got " + j.dump());
}

inline LatticeVector parse_vector(const nlohmann::json& j, const std::string& where) {
  if (!j.is_array()) throw InputError(where + ": expected an array of integers");
  LatticeVector v;
  for (std::size_t i = 0; i < j.size(); ++i)
    v.push_back(parse_integer(j[i], where + "[" + std::to_string(i) + "]"));
  return v;
}

inline IntMatrix parse_matrix(const nlohmann::json& j, const std::string& where) {
  if (!j.is_array()) throw InputError(where + ": expected an array of rows");
  std::vector<LatticeVector> rows;
  for (std::size_t i = 0; i < j.size(); ++i)
    rows.push_back(parse_vector(j[i], where + "[" + std::to_string(i) + "]"));
  for (const auto& r : rows)
    if (r.size() != rows.front().size()) throw InputError(where + ": matrix is not rectangular");
  return IntMatrix::from_rows(rows);
}

inline const nlohmann::json& require(const nlohmann::json& obj, const char* key,
                                     const std::string& where) {
  if (!obj.is_object() || !obj.contains(key))
    throw InputError(where + ": missing key \"" + key + "\"");
  return obj.at(key);
}

inline std::string require_string(const nlohmann::json& obj, const char* key,
                                  const std::string& where) {
  const auto& v = require(obj, key, where);
  if (!v.is_string()) throw InputError(where + "." + key + ": expected a string");
  return v.get<std::string>();
}

}  // namespace detail

/// Named lattices, vectors, sublattices, isometries and groups read from a
/// JSON document with top-level keys "lattices", "vectors", "sublattices",
/// "isometries" and "groups". Builtin lattice names resolve without being
/// declared.
class Workspace {
 public:
  Workspace() = default;

  static Workspace from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw InputError("workspace: top level must be an object");
    static const std::set<std::string> known{"lattices", "vectors", "sublattices",
                                             "isometries", "groups"};
    for (const auto& [key, _] : doc.items())
      if (!known.count(key)) throw InputError("workspace: unknown top-level key \"" + key + "\"");

    Workspace ws;
    ws.doc_ = doc;
    std::set<std::string> names;
    for (const char* section : {"lattices", "vectors", "sublattices", "isometries", "groups"}) {
      if (!doc.contains(section)) continue;
      if (!doc[section].is_object())
        throw InputError(std::string("workspace: \"") + section + "\" must be an object");
      for (const auto& [name, _] : doc[section].items()) {
        if (!names.insert(name).second)
          throw InputError("workspace: name \"" + name + "\" is defined more than once");
        if (builtin_lattice_name(name))
          throw InputError("workspace: \"" + name + "\" shadows a builtin lattice");
      }
    }
    ws.load_lattices();
    ws.load_vectors();
    ws.load_sublattices();
    for (const auto& [name, _] : section(doc, "isometries").items()) ws.resolve_isometry(name, {});
    ws.load_groups();
    return ws;
  }

  static Workspace from_string(const std::string& text) {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw InputError(std::string("workspace: invalid JSON: ") + e.what());
    }
    return from_json(doc);
  }

  static Workspace from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open workspace file " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return from_string(buffer.str());
  }

  NamedLattice lattice(const std::string& name) const {
    if (auto it = lattices_.find(name); it != lattices_.end()) return it->second;
    if (auto b = builtin_lattice(name)) return *b;
    throw InputError("unknown lattice \"" + name + "\"");
  }

  const NamedSublattice& sublattice(const std::string& name) const {
    return find(sublattices_, name, "sublattice");
  }
  const NamedIsometry& isometry(const std::string& name) const {
    return find(isometries_, name, "isometry");
  }
  const NamedGroup& group(const std::string& name) const { return find(groups_, name, "group"); }
  const NamedVector& vector(const std::string& name) const { return find(vectors_, name, "vector"); }

  const std::map<std::string, NamedLattice>& lattices() const { return lattices_; }
  const std::map<std::string, NamedSublattice>& sublattices() const { return sublattices_; }
  const std::map<std::string, NamedIsometry>& isometries() const { return isometries_; }
  const std::map<std::string, NamedGroup>& groups() const { return groups_; }

 private:
  static bool builtin_lattice_name(const std::string& name) {
    return name == "U" || name == "E8" || name == "E8_MINUS" || name == "K3" ||
           name.rfind("DOUADY(", 0) == 0;
  }

  static const nlohmann::json& section(const nlohmann::json& doc, const char* key) {
    static const nlohmann::json empty = nlohmann::json::object();
    return doc.contains(key) ? doc.at(key) : empty;
  }

  template <typename Map>
  static const typename Map::mapped_type& find(const Map& map, const std::string& name,
                                               const char* what) {
    auto it = map.find(name);
    if (it == map.end()) throw InputError(std::string("unknown ") + what + " \"" + name + "\"");
    return it->second;
  }

  void load_lattices() {
    for (const auto& [name, spec] : section(doc_, "lattices").items()) {
      const std::string where = "lattices." + name;
      NamedLattice nl;
      if (spec.is_string()) {
        auto b = builtin_lattice(spec.get<std::string>());
        if (!b) throw InputError(where + ": unknown builtin \"" + spec.get<std::string>() + "\"");
        nl = *b;
      } else if (spec.is_object() && spec.contains("builtin")) {
        const std::string b = detail::require_string(spec, "builtin", where);
        auto found = builtin_lattice(b);
        if (!found) throw InputError(where + ": unknown builtin \"" + b + "\"");
        nl = *found;
      } else if (spec.is_object() && spec.contains("gram")) {
        nl.lattice = Lattice(detail::parse_matrix(spec["gram"], where + ".gram"));
      } else if (spec.is_object() && spec.contains("diagonal")) {
        nl.lattice = diagonal_lattice(detail::parse_vector(spec["diagonal"], where + ".diagonal"));
      } else {
        throw InputError(where + ": expected a builtin name or an object with \"gram\", "
                                 "\"diagonal\" or \"builtin\"");
      }
      nl.lattice = Lattice(nl.lattice.gram(), name);
      if (spec.is_object() && spec.contains("exceptional")) {
        if (nl.douady_n) throw InputError(where + ": DOUADY lattices fix their own exceptional class");
        nl.exceptional = detail::parse_vector(spec["exceptional"], where + ".exceptional");
        (void)MarkedLattice(nl.lattice, *nl.exceptional);  // validates
      }
      lattices_.emplace(name, std::move(nl));
    }
  }

  void load_vectors() {
    for (const auto& [name, spec] : section(doc_, "vectors").items()) {
      const std::string where = "vectors." + name;
      NamedVector v{detail::require_string(spec, "lattice", where),
                    detail::parse_vector(detail::require(spec, "coords", where), where + ".coords")};
      if (v.coords.size() != lattice(v.lattice).lattice.rank())
        throw InputError(where + ": coordinate count does not match lattice rank");
      vectors_.emplace(name, std::move(v));
    }
  }

  // A vector given inline as an array or by name (checked against `lat`).
  LatticeVector vector_ref(const nlohmann::json& j, const std::string& lat,
                           const std::string& where) const {
    if (j.is_string()) {
      const NamedVector& v = vector(j.get<std::string>());
      if (!(lattice(v.lattice).lattice == lattice(lat).lattice))
        throw InputError(where + ": vector \"" + j.get<std::string>() + "\" lives in another lattice");
      return v.coords;
    }
    return detail::parse_vector(j, where);
  }

  void load_sublattices() {
    for (const auto& [name, spec] : section(doc_, "sublattices").items()) {
      const std::string where = "sublattices." + name;
      const std::string lat = detail::require_string(spec, "lattice", where);
      const Lattice ambient = lattice(lat).lattice;
      const auto& cols = detail::require(spec, "columns", where);
      if (!cols.is_array()) throw InputError(where + ".columns: expected an array");
      std::vector<LatticeVector> columns;
      for (std::size_t i = 0; i < cols.size(); ++i) {
        columns.push_back(vector_ref(cols[i], lat, where + ".columns[" + std::to_string(i) + "]"));
        if (columns.back().size() != ambient.rank())
          throw InputError(where + ": column length does not match lattice rank");
      }
      IntMatrix basis = columns.empty() ? IntMatrix(ambient.rank(), 0)
                                        : IntMatrix::from_columns(columns);
      sublattices_.emplace(name, NamedSublattice{lat, Sublattice(ambient, basis)});
    }
  }

  const NamedIsometry& resolve_isometry(const std::string& name, std::set<std::string> stack) {
    if (auto it = isometries_.find(name); it != isometries_.end()) return it->second;
    const nlohmann::json& all = section(doc_, "isometries");
    if (!all.contains(name)) throw InputError("unknown isometry \"" + name + "\"");
    if (!stack.insert(name).second) throw InputError("isometry \"" + name + "\" refers to itself");
    const nlohmann::json& spec = all.at(name);
    const std::string where = "isometries." + name;
    const std::string lat = detail::require_string(spec, "lattice", where);
    const NamedLattice nl = lattice(lat);
    const std::size_t n = nl.lattice.rank();

    IntMatrix m;
    if (spec.contains("matrix")) {
      m = detail::parse_matrix(spec["matrix"], where + ".matrix");
      if (m.rows() != n || m.cols() != n)
        throw InputError(where + ": matrix must be " + std::to_string(n) + "x" + std::to_string(n));
    } else if (spec.contains("identity")) {
      m = IntMatrix::identity(n);
    } else if (spec.contains("reflection")) {
      const LatticeVector v = vector_ref(spec["reflection"], lat, where + ".reflection");
      if (v.size() != n) throw InputError(where + ": reflection vector has wrong length");
      m = reflection_isometry(nl.lattice, v).matrix();
    } else if (spec.contains("lift")) {
      if (!nl.douady_n) throw InputError(where + ": \"lift\" needs a DOUADY(n) lattice");
      if (!spec["lift"].is_string()) throw InputError(where + ".lift: expected an isometry name");
      const NamedIsometry& base = resolve_isometry(spec["lift"].get<std::string>(), stack);
      const DouadyLattice dl(*nl.douady_n);
      if (!(lattice(base.lattice).lattice.gram() == dl.k3().gram()))
        throw InputError(where + ": lifted isometry must act on the K3 lattice");
      m = natural_lift(dl, Isometry(dl.k3(), base.matrix)).matrix();
    } else if (spec.contains("product")) {
      const auto& factors = spec["product"];
      if (!factors.is_array()) throw InputError(where + ".product: expected an array of names");
      m = IntMatrix::identity(n);
      for (const auto& f : factors) {
        if (!f.is_string()) throw InputError(where + ".product: expected isometry names");
        const NamedIsometry& factor = resolve_isometry(f.get<std::string>(), stack);
        if (!(lattice(factor.lattice).lattice == nl.lattice))
          throw InputError(where + ": factor \"" + f.get<std::string>() + "\" acts on another lattice");
        m = m * factor.matrix;
      }
    } else {
      throw InputError(where + ": expected one of \"matrix\", \"identity\", \"reflection\", "
                               "\"lift\", \"product\"");
    }
    return isometries_.emplace(name, NamedIsometry{lat, std::move(m)}).first->second;
  }

  void load_groups() {
    for (const auto& [name, spec] : section(doc_, "groups").items()) {
      const std::string where = "groups." + name;
      NamedGroup g;
      g.lattice = detail::require_string(spec, "lattice", where);
      const Lattice ambient = lattice(g.lattice).lattice;
      const auto& gens = detail::require(spec, "generators", where);
      if (!gens.is_array()) throw InputError(where + ".generators: expected an array");
      for (std::size_t i = 0; i < gens.size(); ++i) {
        const std::string w = where + ".generators[" + std::to_string(i) + "]";
        if (gens[i].is_string()) {
          const NamedIsometry& iso = isometry(gens[i].get<std::string>());
          if (!(lattice(iso.lattice).lattice == ambient))
            throw InputError(w + ": isometry acts on another lattice");
          g.generators.push_back(iso.matrix);
        } else {
          IntMatrix m = detail::parse_matrix(gens[i], w);
          if (m.rows() != ambient.rank() || m.cols() != ambient.rank())
            throw InputError(w + ": generator has wrong size");
          g.generators.push_back(std::move(m));
        }
      }
      if (spec.contains("cap")) {
        const Integer cap = detail::parse_integer(spec["cap"], where + ".cap");
        if (cap < 1 || cap > 1000000) throw InputError(where + ".cap: out of range");
        g.cap = static_cast<std::size_t>(cap);
      }
      if (spec.contains("ns")) {
        if (!spec["ns"].is_string()) throw InputError(where + ".ns: expected a sublattice name");
        const std::string ns = spec["ns"].get<std::string>();
        if (!(lattice(sublattice(ns).lattice).lattice == ambient))
          throw InputError(where + ".ns: sublattice lives in another lattice");
        g.ns = ns;
      }
      groups_.emplace(name, std::move(g));
    }
  }

  nlohmann::json doc_;
  std::map<std::string, NamedLattice> lattices_;
  std::map<std::string, NamedVector> vectors_;
  std::map<std::string, NamedSublattice> sublattices_;
  std::map<std::string, NamedIsometry> isometries_;
  std::map<std::string, NamedGroup> groups_;
};

}  // namespace hilblat
