#pragma once

#include <functional>
#include <ostream>
#include <regex>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hilblat/commands.hpp"
#include "hilblat/workspace.hpp"

namespace hilblat {

enum ExitCode : int { kExitOk = 0, kExitInput = 2, kExitPrecondition = 3 };

/// Runs `hilblat <command> [--workspace FILE] [--json] args...`.
/// Reports go to `out`, diagnostics to `err`.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact lattice computations for K3 surfaces and their Douady spaces", "hilblat"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string workspace_path;
  bool as_json = false;
  app.add_option("--workspace,-w", workspace_path, "Workspace JSON file");
  app.add_flag("--json", as_json, "Emit JSON instead of text");

  std::function<Report(const Workspace&)> action;
  std::string a1, a2, a3;

  auto* sig = app.add_subcommand("signature", "Signature and discriminant of a lattice");
  sig->add_option("lattice", a1)->required();
  sig->callback([&] { action = [&](const Workspace& ws) { return cmd_signature(ws, a1); }; });

  auto* comp = app.add_subcommand("complement", "Orthogonal complement of a sublattice");
  comp->add_option("lattice", a1)->required();
  comp->add_option("sublattice", a2)->required();
  comp->callback([&] { action = [&](const Workspace& ws) { return cmd_complement(ws, a1, a2); }; });

  auto* iso = app.add_subcommand("isometry-check", "Check the isometry conditions of a matrix");
  iso->add_option("isometry", a1)->required();
  iso->callback([&] { action = [&](const Workspace& ws) { return cmd_isometry_check(ws, a1); }; });

  auto* idx = app.add_subcommand("index", "Index lambda(f) and the decomposition of f(e)");
  idx->add_option("lattice", a1)->required();
  idx->add_option("isometry", a2)->required();
  idx->callback([&] { action = [&](const Workspace& ws) { return cmd_index(ws, a1, a2); }; });

  auto* nat = app.add_subcommand("natural-check", "Whether f fixes the exceptional class");
  nat->add_option("lattice", a1)->required();
  nat->add_option("isometry", a2)->required();
  nat->callback([&] { action = [&](const Workspace& ws) { return cmd_natural_check(ws, a1, a2); }; });

  auto* inv = app.add_subcommand("invariant", "Invariant and coinvariant lattices of a group");
  inv->add_option("group", a1)->required();
  inv->callback([&] { action = [&](const Workspace& ws) { return cmd_invariant(ws, a1); }; });

  auto* cls = app.add_subcommand("classify", "Hyperbolic/parabolic/elliptic type of NS");
  cls->add_option("lattice", a1)->required();
  cls->add_option("sublattice", a2)->required();
  cls->callback([&] { action = [&](const Workspace& ws) { return cmd_classify(ws, a1, a2); }; });

  auto* solve = app.add_subcommand("solve-index", "Integer solutions of the rank-one norm equation");
  solve->add_option("n", a1)->required();
  solve->add_option("d2", a2)->required();
  solve->add_option("bound", a3)->required();
  solve->callback([&] {
    action = [&](const Workspace&) {
      static const std::regex decimal(R"(-?[0-9]+)");
      for (const std::string* s : {&a1, &a2, &a3})
        if (!std::regex_match(*s, decimal)) throw InputError("solve-index: \"" + *s + "\" is not an integer");
      const Integer n(a1), d2(a2), bound(a3);
      if (n < 2 || n > 1000000) throw InputError("solve-index: n must be in [2, 1000000]");
      if (d2 == 0) throw InputError("solve-index: d2 must be nonzero");
      if (bound < 1) throw InputError("solve-index: bound must be at least 1");
      return cmd_solve_index(static_cast<int>(n), d2, bound);
    };
  });

  auto* rep = app.add_subcommand("report", "Run every applicable check in the workspace");
  rep->callback([&] { action = [&](const Workspace& ws) { return cmd_report(ws); }; });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitInput;
  }

  try {
    const Workspace ws = workspace_path.empty() ? Workspace() : Workspace::from_file(workspace_path);
    const Report report = action(ws);
    if (as_json)
      out << report.json.dump(2) << "\n";
    else
      out << report.text;
    return kExitOk;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << "\n";
    return kExitPrecondition;
  }
}

}  // namespace hilblat
