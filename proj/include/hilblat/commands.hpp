#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "hilblat/arith.hpp"
#include "hilblat/group_action.hpp"
#include "hilblat/k3_douady.hpp"
#include "hilblat/lattice.hpp"
#include "hilblat/workspace.hpp"

namespace hilblat {

using ordered_json = nlohmann::ordered_json;

/// Output of one command: plain text and the same content as JSON.
struct Report {
  std::string text;
  ordered_json json = ordered_json::object();
};

namespace detail {

inline ordered_json to_json(const Integer& x) {
  if (x >= std::numeric_limits<std::int64_t>::min() &&
      x <= std::numeric_limits<std::int64_t>::max())
    return static_cast<std::int64_t>(x);
  return x.str();
}

template <typename T>
ordered_json to_json(const std::vector<T>& v) {
  ordered_json out = ordered_json::array();
  for (const auto& x : v) {
    if constexpr (std::is_same_v<T, Rational>)
      out.push_back(to_string(x));
    else
      out.push_back(to_json(x));
  }
  return out;
}

inline ordered_json to_json(const IntMatrix& m) {
  ordered_json out = ordered_json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) out.push_back(to_json(m.row(i)));
  return out;
}

inline ordered_json to_json(const SignatureTriple& s) { return ordered_json::array({s.pos, s.zero, s.neg}); }

inline ordered_json columns_json(const IntMatrix& basis) {
  ordered_json out = ordered_json::array();
  for (std::size_t j = 0; j < basis.cols(); ++j) out.push_back(to_json(basis.column(j)));
  return out;
}

inline void write_columns(std::ostream& os, const IntMatrix& basis) {
  if (basis.cols() == 0) os << "  (none)\n";
  for (std::size_t j = 0; j < basis.cols(); ++j) os << "  " << to_string(basis.column(j)) << "\n";
}

inline void write_rows(std::ostream& os, const IntMatrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i) os << "  " << to_string(m.row(i)) << "\n";
}

inline const char* yes_no(bool b) { return b ? "yes" : "no"; }

inline Isometry checked_isometry(const Workspace& ws, const std::string& lattice_name,
                                 const std::string& iso_name, NamedLattice& nl) {
  nl = ws.lattice(lattice_name);
  const NamedIsometry& iso = ws.isometry(iso_name);
  if (!(ws.lattice(iso.lattice).lattice == nl.lattice))
    throw InputError("isometry \"" + iso_name + "\" acts on \"" + iso.lattice + "\", not \"" +
                     lattice_name + "\"");
  return Isometry(nl.lattice, iso.matrix);  // throws with the first violated relation
}

// Appends a sublattice description under `prefix`.
inline void describe_sublattice(std::ostream& os, ordered_json& j, const std::string& prefix,
                                const Sublattice& s) {
  const Integer det = determinant(s.gram());
  const SignatureTriple sig = signature(s.gram());
  os << prefix << " rank: " << s.rank() << "\n";
  os << prefix << " basis:\n";
  write_columns(os, s.basis());
  os << prefix << " gram determinant: " << det << "\n";
  os << prefix << " signature: " << to_string(sig) << "\n";
  os << prefix << " negative definite: " << yes_no(is_negative_definite(s)) << "\n";
  j[prefix] = {{"rank", s.rank()},
               {"basis", columns_json(s.basis())},
               {"gram_determinant", to_json(det)},
               {"signature", to_json(sig)},
               {"negative_definite", is_negative_definite(s)}};
}

}  // namespace detail

inline Report cmd_signature(const Workspace& ws, const std::string& name) {
  const NamedLattice nl = ws.lattice(name);
  const SignatureTriple sig = signature(nl.lattice);
  const Integer disc = discriminant(nl.lattice);
  Report r;
  std::ostringstream os;
  os << "lattice: " << name << "\n"
     << "rank: " << nl.lattice.rank() << "\n"
     << "signature: " << to_string(sig) << "\n"
     << "discriminant: " << disc << "\n";
  r.text = os.str();
  r.json = {{"command", "signature"},
            {"lattice", name},
            {"rank", nl.lattice.rank()},
            {"signature", detail::to_json(sig)},
            {"discriminant", detail::to_json(disc)}};
  return r;
}

inline Report cmd_complement(const Workspace& ws, const std::string& lattice_name,
                             const std::string& sub_name) {
  const NamedLattice nl = ws.lattice(lattice_name);
  const NamedSublattice& ns = ws.sublattice(sub_name);
  if (!(ws.lattice(ns.lattice).lattice == nl.lattice))
    throw InputError("sublattice \"" + sub_name + "\" lives in \"" + ns.lattice + "\"");
  const Sublattice s(nl.lattice, ns.sublattice.basis());
  const Sublattice perp = orthogonal_complement(nl.lattice, s);
  Report r;
  std::ostringstream os;
  r.json = {{"command", "complement"}, {"lattice", lattice_name}, {"sublattice", sub_name},
            {"saturated", s.saturated()}};
  os << "lattice: " << lattice_name << "\n"
     << "sublattice: " << sub_name << "\n"
     << "saturated: " << detail::yes_no(s.saturated()) << "\n";
  detail::describe_sublattice(os, r.json, "complement", perp);
  r.text = os.str();
  return r;
}

inline Report cmd_isometry_check(const Workspace& ws, const std::string& iso_name) {
  const NamedIsometry& iso = ws.isometry(iso_name);
  const NamedLattice nl = ws.lattice(iso.lattice);
  const auto why = isometry_violation(nl.lattice, iso.matrix);
  const Integer det = determinant(iso.matrix);
  Report r;
  std::ostringstream os;
  os << "isometry: " << iso_name << "\n"
     << "lattice: " << iso.lattice << "\n"
     << "is_isometry: " << (why ? "false" : "true") << "\n"
     << "det: " << det << "\n";
  if (why) os << "violation: " << *why << "\n";
  r.text = os.str();
  r.json = {{"command", "isometry-check"},
            {"isometry", iso_name},
            {"lattice", iso.lattice},
            {"is_isometry", !why},
            {"det", detail::to_json(det)}};
  if (why) r.json["violation"] = *why;
  return r;
}

inline Report cmd_index(const Workspace& ws, const std::string& lattice_name,
                        const std::string& iso_name) {
  NamedLattice nl;
  const Isometry f = detail::checked_isometry(ws, lattice_name, iso_name, nl);
  if (!nl.exceptional)
    throw InputError("lattice \"" + lattice_name + "\" has no exceptional class");
  Report r;
  std::ostringstream os;
  os << "lattice: " << lattice_name << "\n" << "isometry: " << iso_name << "\n";
  r.json = {{"command", "index"}, {"lattice", lattice_name}, {"isometry", iso_name}};
  if (nl.douady_n) {
    const DouadyLattice dl(*nl.douady_n);
    const Isometry g(dl.full(), f.matrix());
    const PullbackDecomposition p = pullback_decomposition(dl, g);
    os << "lambda = " << to_string(p.lambda) << "\n"
       << "lambda integral: " << detail::yes_no(p.lambda.is_integral()) << "\n"
       << "f(e) = lambda*e + iota(d)\n"
       << "d = " << to_string(p.d) << "\n";
    r.json["lambda"] = to_string(p.lambda);
    r.json["lambda_integral"] = p.lambda.is_integral();
    r.json["d"] = detail::to_json(p.d);
  } else {
    const MarkedDecomposition p = pullback_decomposition(*nl.marked(), f);
    os << "lambda = " << to_string(p.lambda) << "\n"
       << "lambda integral: " << detail::yes_no(p.lambda.is_integral()) << "\n"
       << "f(e) = lambda*e + d\n"
       << "d = " << to_string(p.d) << "\n";
    r.json["lambda"] = to_string(p.lambda);
    r.json["lambda_integral"] = p.lambda.is_integral();
    r.json["d"] = detail::to_json(p.d);
  }
  r.text = os.str();
  return r;
}

inline Report cmd_natural_check(const Workspace& ws, const std::string& lattice_name,
                                const std::string& iso_name) {
  NamedLattice nl;
  const Isometry f = detail::checked_isometry(ws, lattice_name, iso_name, nl);
  if (!nl.exceptional)
    throw InputError("lattice \"" + lattice_name + "\" has no exceptional class");
  Report r;
  std::ostringstream os;
  os << "lattice: " << lattice_name << "\n" << "isometry: " << iso_name << "\n";
  r.json = {{"command", "natural-check"}, {"lattice", lattice_name}, {"isometry", iso_name}};
  if (nl.douady_n) {
    const DouadyLattice dl(*nl.douady_n);
    const Isometry g(dl.full(), f.matrix());
    const bool natural = is_natural_on_lattice(dl, g);
    r.json["natural"] = natural;
    if (natural) {
      const IntMatrix block = extract_surface_isometry(dl, g).matrix();
      os << "NATURAL\n" << "f(delta) = delta\n" << "surface isometry:\n";
      detail::write_rows(os, block);
      r.json["surface_isometry"] = detail::to_json(block);
    } else {
      const LatticeVector image = g(dl.delta());
      os << "NOT-NATURAL\n" << "f(delta) = " << to_string(image) << "\n";
      r.json["f_delta"] = detail::to_json(image);
    }
  } else {
    const MarkedLattice m = *nl.marked();
    const bool natural = is_natural_on_lattice(m, f);
    r.json["natural"] = natural;
    if (natural) {
      const Sublattice perp =
          orthogonal_complement(m.lattice, Sublattice(m.lattice, IntMatrix::from_columns({m.e})));
      const IntMatrix block = restrict_to_complement(m, f);
      os << "NATURAL\n" << "f(e) = e\n" << "e-perp basis:\n";
      detail::write_columns(os, perp.basis());
      os << "restriction to e-perp:\n";
      detail::write_rows(os, block);
      r.json["e_perp_basis"] = detail::columns_json(perp.basis());
      r.json["restriction"] = detail::to_json(block);
    } else {
      const LatticeVector image = f(m.e);
      os << "NOT-NATURAL\n" << "f(e) = " << to_string(image) << "\n";
      r.json["f_e"] = detail::to_json(image);
    }
  }
  r.text = os.str();
  return r;
}

inline Report cmd_invariant(const Workspace& ws, const std::string& group_name) {
  const NamedGroup& ng = ws.group(group_name);
  const NamedLattice nl = ws.lattice(ng.lattice);
  const IsometryGroup g = closure(nl.lattice, ng.generators, ng.cap);
  const Sublattice tr = invariant_sublattice(g);
  const Sublattice ss = orthogonal_complement(nl.lattice, tr);
  Report r;
  std::ostringstream os;
  r.json = {{"command", "invariant"}, {"group", group_name}, {"lattice", ng.lattice},
            {"order", g.order()}};
  os << "group: " << group_name << "\n"
     << "lattice: " << ng.lattice << "\n"
     << "order: " << g.order() << "\n";
  detail::describe_sublattice(os, r.json, "Tr_G", tr);
  detail::describe_sublattice(os, r.json, "Ss_G", ss);
  os << "checks:\n";
  if (discriminant(nl.lattice) == 0) {
    os << "  skipped: ambient lattice is degenerate\n";
    r.json["checks"] = nullptr;
  } else {
    const PairReport p = verify_pair_properties(g);
    os << "  Tr_G meet Ss_G = 0: " << to_string(verdict(p.trivial_intersection)) << "\n"
       << "  Tr_G nondegenerate: " << to_string(verdict(p.invariant_nondegenerate)) << "\n"
       << "  Ss_G nondegenerate: " << to_string(verdict(p.coinvariant_nondegenerate)) << "\n";
    r.json["checks"] = {{"trivial_intersection", p.trivial_intersection},
                        {"invariant_nondegenerate", p.invariant_nondegenerate},
                        {"coinvariant_nondegenerate", p.coinvariant_nondegenerate}};
  }
  if (ng.ns && nl.douady_n) {
    const DouadyLattice dl(*nl.douady_n);
    const Sublattice ns(dl.full(), ws.sublattice(*ng.ns).sublattice.basis());
    const IsometryGroup gd = closure(dl.full(), ng.generators, ng.cap);
    const TranscendentalReport t = lemma_transcendant_report(dl, gd, ns);
    os << "transcendental lemma (NS = " << *ng.ns << ", type "
       << to_string(t.classification.type) << "):\n"
       << "  G trivial on Tr: " << to_string(t.acts_trivially_on_tr) << "\n"
       << "  Tr in Tr_G: " << to_string(t.tr_in_invariant) << "\n"
       << "  Ss_G in NS: " << to_string(t.coinvariant_in_ns) << "\n"
       << "  Ss_G negative definite: " << to_string(t.coinvariant_negative_definite) << "\n"
       << "  Ss_G signature: " << to_string(t.coinvariant_signature) << "\n";
    r.json["lemma"] = {{"ns", *ng.ns},
                       {"type", to_string(t.classification.type)},
                       {"trivial_on_tr", to_string(t.acts_trivially_on_tr)},
                       {"tr_in_invariant", to_string(t.tr_in_invariant)},
                       {"coinvariant_in_ns", to_string(t.coinvariant_in_ns)},
                       {"coinvariant_negative_definite", to_string(t.coinvariant_negative_definite)},
                       {"coinvariant_signature", detail::to_json(t.coinvariant_signature)}};
  }
  r.text = os.str();
  return r;
}

inline Report cmd_classify(const Workspace& ws, const std::string& lattice_name,
                           const std::string& sub_name) {
  const NamedLattice nl = ws.lattice(lattice_name);
  const NamedSublattice& ns = ws.sublattice(sub_name);
  if (!(ws.lattice(ns.lattice).lattice == nl.lattice))
    throw InputError("sublattice \"" + sub_name + "\" lives in \"" + ns.lattice + "\"");
  const Classification c = classify_ns_type(nl.lattice, Sublattice(nl.lattice, ns.sublattice.basis()));
  Report r;
  std::ostringstream os;
  os << "lattice: " << lattice_name << "\n"
     << "NS: " << sub_name << "\n"
     << "type: " << to_string(c.type) << "\n"
     << "NS signature: " << to_string(c.ns_signature) << "\n"
     << "Tr signature: " << to_string(c.tr_signature) << "\n"
     << "Tr pattern: " << to_string(c.companion);
  if (c.companion != CompanionCheck::NotApplicable)
    os << " (expected " << to_string(c.expected_tr_signature) << ")";
  os << "\n";
  r.text = os.str();
  r.json = {{"command", "classify"},
            {"lattice", lattice_name},
            {"ns", sub_name},
            {"type", to_string(c.type)},
            {"ns_signature", detail::to_json(c.ns_signature)},
            {"tr_signature", detail::to_json(c.tr_signature)},
            {"tr_pattern", to_string(c.companion)}};
  if (c.companion != CompanionCheck::NotApplicable)
    r.json["expected_tr_signature"] = detail::to_json(c.expected_tr_signature);
  return r;
}

inline Report cmd_solve_index(int n, const Integer& d2, const Integer& bound) {
  const auto solutions = index_norm_solutions(n, d2, bound);
  const Integer qe = Integer(-8) * (n - 1);
  Report r;
  std::ostringstream os;
  os << "n = " << n << ", d2 = " << d2 << ", bound = " << bound << "\n"
     << "equation: " << qe << " = " << qe << "*lambda^2 + " << d2 << "*mu^2\n"
     << "solutions: " << solutions.size() << "\n";
  ordered_json list = ordered_json::array();
  for (const auto& [lambda, mu] : solutions) {
    os << "  (" << lambda << ", " << mu << ")\n";
    list.push_back({detail::to_json(lambda), detail::to_json(mu)});
  }
  r.text = os.str();
  r.json = {{"command", "solve-index"},
            {"n", n},
            {"d2", detail::to_json(d2)},
            {"bound", detail::to_json(bound)},
            {"solutions", list}};
  return r;
}

/// Every applicable check over the workspace. Failures of individual items
/// are reported inline and do not abort the report.
inline Report cmd_report(const Workspace& ws) {
  Report r;
  std::ostringstream os;
  ordered_json items = ordered_json::array();
  auto run = [&](const std::string& title, const std::function<Report()>& body) {
    os << "== " << title << " ==\n";
    try {
      Report item = body();
      os << item.text;
      items.push_back(std::move(item.json));
    } catch (const std::exception& e) {
      os << "error: " << e.what() << "\n";
      items.push_back({{"item", title}, {"error", e.what()}});
    }
    os << "\n";
  };
  for (const auto& [name, _] : ws.lattices())
    run("signature " + name, [&] { return cmd_signature(ws, name); });
  for (const auto& [name, s] : ws.sublattices()) {
    run("complement " + s.lattice + " " + name, [&] { return cmd_complement(ws, s.lattice, name); });
    run("classify " + s.lattice + " " + name, [&] { return cmd_classify(ws, s.lattice, name); });
  }
  for (const auto& [name, iso] : ws.isometries()) {
    run("isometry-check " + name, [&] { return cmd_isometry_check(ws, name); });
    const NamedLattice nl = ws.lattice(iso.lattice);
    if (nl.exceptional && is_isometry(nl.lattice, iso.matrix)) {
      run("index " + iso.lattice + " " + name, [&] { return cmd_index(ws, iso.lattice, name); });
      run("natural-check " + iso.lattice + " " + name,
          [&] { return cmd_natural_check(ws, iso.lattice, name); });
    }
  }
  for (const auto& [name, _] : ws.groups())
    run("invariant " + name, [&] { return cmd_invariant(ws, name); });
  r.text = os.str();
  r.json = {{"command", "report"}, {"items", std::move(items)}};
  return r;
}

}  // namespace hilblat
