#include "command.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <json.hpp>

#include "flatrat/commensurator.hpp"
#include "flatrat/dichotomy.hpp"
#include "flatrat/flat.hpp"
#include "flatrat/oracle.hpp"
#include "flatrat/singular.hpp"
#include "flatrat/syntax.hpp"

namespace flatrat::cli {

namespace {

using json = nlohmann::ordered_json;

std::string str(const Mat2& m) { return to_string(m); }

Monoid parse_monoid(const std::string& s) {
  if (s == "GL2Z") return Monoid::GL2Z;
  if (s == "P2Q") return Monoid::P2Q;
  if (s == "P") return Monoid::P;
  if (s == "Pprime") return Monoid::Pprime;
  throw Error(ErrorKind::InvalidInput, "unknown monoid '" + s + "'");
}

void check_factors(const FlatExpr& e, Monoid m) {
  for (const auto& b : e.branches)
    for (const auto& f : b.factors)
      f.for_each_atom([m](const Mat2& h) {
        if (!in_monoid(m, h))
          throw Error(ErrorKind::InvalidInput, "label " + to_string(h) + " (" +
                                                   std::string(to_string(classify_label(h))) + ") is not in " +
                                                   std::string(to_string(m)));
      });
}

bool all_connectors_invertible(const FlatExpr& e) {
  for (const auto& b : e.branches)
    for (const auto& c : b.connectors)
      if (c.det() == 0) return false;
  return true;
}

// Drops singular atoms and branches with singular connectors: neither can
// contribute to an invertible product.
FlatExpr invertible_part(const FlatExpr& e) {
  FlatExpr out;
  for (const auto& b : e.branches) {
    if (!std::all_of(b.connectors.begin(), b.connectors.end(), [](const Mat2& c) { return c.det() != 0; }))
      continue;
    FlatBranch nb = b;
    for (auto& f : nb.factors)
      f = f.substitute([](const Mat2& h) {
        return h.det() == 0 ? RatExpr<Mat2>::empty() : RatExpr<Mat2>::atom(h);
      });
    out.branches.push_back(std::move(nb));
  }
  return out;
}

json member(const Mat2& g, const FlatExpr& e, Monoid monoid, const Limits& limits) {
  check_factors(e, monoid);
  json r;
  if (g.det() == 0) {
    if ((monoid == Monoid::GL2Z || monoid == Monoid::P2Q) && all_connectors_invertible(e)) {
      r["verdict"] = false;
      r["stats"] = {{"procedure", "invertibility"}};
    } else if (g.is_zero()) {
      r["verdict"] = zero_member(e, limits);
      r["stats"] = {{"procedure", "zero"}};
    } else {
      if (monoid == Monoid::P2Q || monoid == Monoid::P) check_factors(e, Monoid::Pprime);
      r["verdict"] = singular_member(g, e, limits);
      r["stats"] = {{"procedure", "singular"}};
    }
    return r;
  }
  FlatExpr inv = invertible_part(e);
  if (monoid == Monoid::GL2Z) {
    NormalFlat v = normalize_flat(inv, limits);
    r["verdict"] = flat_member(g, v, limits);
    r["stats"] = {{"procedure", "normal-form"}, {"parts", v.parts.size()}};
    return r;
  }
  // Invertible labels of P' are GL(2,Z) elements and natural scalars, all in
  // P(2,Q); P additionally allows rational scalars, which are not.
  check_factors(inv, Monoid::P2Q);
  FloResult res = flo_decide(g, inv, limits);
  r["verdict"] = res.member;
  r["stats"] = {{"procedure", "counter"}, {"counter_bound", res.counter_bound}};
  if (res.member) {
    r["stats"]["branch"] = res.branch;
    r["stats"]["level"] = res.level;
  }
  return r;
}

std::string render_human(const json& j, int indent = 0) {
  std::string pad(static_cast<std::size_t>(indent), ' ');
  std::string out;
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (it->is_object()) {
      out += pad + it.key() + ":\n" + render_human(*it, indent + 2);
    } else if (it->is_array()) {
      out += pad + it.key() + ":\n";
      for (const auto& v : *it) out += pad + "  - " + (v.is_string() ? v.get<std::string>() : v.dump()) + "\n";
    } else {
      out += pad + it.key() + ": " + (it->is_string() ? it->get<std::string>() : it->dump()) + "\n";
    }
  }
  return out;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Decision procedures for rational subsets of 2x2 rational matrices", "flatrat"};
  app.require_subcommand(1);
  app.fallthrough();
  bool human = false;
  Limits limits;
  std::vector<std::string> defs;
  app.add_flag("--human", human, "Render the result as plain text instead of JSON");
  app.add_option("--max-states", limits.max_states, "Automaton state budget per construction")
      ->capture_default_str();
  app.add_option("--max-coset-reps", limits.max_coset_reps,
                 "Coset enumeration budget (0 derives it from the index bound)")
      ->capture_default_str();
  app.add_option("--max-oracle-products", limits.max_oracle_products, "Oracle frontier budget")
      ->capture_default_str();
  app.add_option("--def", defs, "Bind NAME=EXPR for use inside expressions (repeatable)")->allow_extra_args(false);

  std::string matrix_text, expr_text, monoid_text = "P2Q";
  std::vector<std::string> generator_texts;
  std::size_t bound = 6;

  auto* snf = app.add_subcommand("snf", "Smith normal form g = r e diag(1,q) f");
  snf->add_option("matrix", matrix_text, "Matrix literal [[a,b],[c,d]]")->required();

  auto* mem = app.add_subcommand("member", "Decide membership of a matrix in a flat expression");
  mem->add_option("matrix", matrix_text)->required();
  mem->add_option("expr", expr_text, "Flat expression")->required();
  mem->add_option("--monoid", monoid_text, "Label monoid: GL2Z, P2Q, P or Pprime")->capture_default_str();

  auto* emp = app.add_subcommand("empty", "Decide emptiness of a Boolean combination of flat sets over GL(2,Z)");
  emp->add_option("expr", expr_text, "Boolean combination")->required();

  auto* cls = app.add_subcommand("classify", "Classify the group generated by GL(2,Z) and the given matrices");
  // Matrix literals look like bracket lists to the option parser, so the
  // generators are taken from the leftover arguments verbatim.
  cls->footer("Generators are matrix literals, one per argument.");

  auto* cos = app.add_subcommand("cosets", "Coset representatives of H_g in GL(2,Z)");
  cos->add_option("matrix", matrix_text)->required();

  auto* orc = app.add_subcommand("oracle", "Search label products up to a length bound");
  orc->add_option("matrix", matrix_text)->required();
  orc->add_option("expr", expr_text, "Rational expression")->required();
  orc->add_option("--bound", bound, "Maximal product length")->capture_default_str();

  // The option parser would split a literal like [[1,0],[0,2]] as a bracket
  // list, so classify's generators are taken out verbatim first.
  std::vector<std::string> rest;
  bool in_classify = false;
  for (const auto& a : args) {
    if (a == "classify") in_classify = true;
    if (in_classify && !a.empty() && a.front() == '[')
      generator_texts.push_back(a);
    else
      rest.push_back(a);
  }

  json record;
  try {
    std::vector<std::string> rev(rest.rbegin(), rest.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "flatrat: " << e.what() << "\n";
    record["error"] = {{"kind", "UsageError"}, {"message", e.what()}};
    out << record.dump() << "\n";
    return kInputError;
  }

  std::string command = app.get_subcommands().front()->get_name();
  record["command"] = command;
  int code = kOk;
  try {
    Bindings names;
    for (const auto& d : defs) {
      auto eq = d.find('=');
      if (eq == std::string::npos || eq == 0)
        throw Error(ErrorKind::InvalidInput, "--def expects NAME=EXPR, got '" + d + "'");
      names[d.substr(0, eq)] = parse_expr(d.substr(eq + 1), names);
    }
    if (command == "snf") {
      SmithForm s = smith_normal_form(parse_matrix(matrix_text));
      record["r"] = to_string(s.r);
      record["q"] = s.q.get_str();
      record["e"] = str(s.e);
      record["f"] = str(s.f);
    } else if (command == "member") {
      Mat2 g = parse_matrix(matrix_text);
      FlatExpr e = lower(parse_flat(expr_text, names));
      json r = member(g, e, parse_monoid(monoid_text), limits);
      record["verdict"] = r["verdict"];
      record["stats"] = r["stats"];
    } else if (command == "empty") {
      BoolComb c = lower(parse_bool(expr_text, names));
      NormalFlat v = bool_comb_eval(c, limits);
      record["verdict"] = flat_is_empty(v);
      record["stats"] = {{"parts", v.parts.size()}};
    } else if (command == "classify") {
      std::vector<Mat2> gens;
      for (const auto& t : generator_texts) gens.push_back(parse_matrix(t));
      if (gens.empty()) throw Error(ErrorKind::InvalidInput, "classify needs at least one generator");
      DichotomyResult d = classify_extension(gens);
      if (d.kind == DichotomyResult::Case::DirectProduct) {
        record["case"] = "DirectProduct";
        record["k"] = d.k;
      } else {
        record["case"] = "ContainsBS";
        record["q"] = d.q.get_str();
        record["b"] = str(d.b);
        record["t"] = str(d.t);
      }
    } else if (command == "cosets") {
      Mat2 g = parse_matrix(matrix_text);
      CosetTable tab = hg_coset_reps(g, limits);
      record["index"] = tab.size();
      json reps = json::array();
      for (std::size_t i = 0; i < tab.size(); ++i) reps.push_back(str(tab.rep(i)));
      record["reps"] = reps;
    } else if (command == "oracle") {
      Mat2 g = parse_matrix(matrix_text);
      Nfa<Mat2> a = expr_to_nfa(lower(parse_expr(expr_text, names)));
      OracleAnswer ans = oracle_member(g, a, bound, limits);
      if (ans.member) {
        record["verdict"] = "Member";
        json w = json::array();
        for (const auto& m : ans.witness) w.push_back(str(m));
        record["witness"] = w;
      } else {
        record["verdict"] = "NotFoundUpTo";
        record["bound"] = ans.bound;
      }
    }
  } catch (const ResourceLimit& e) {
    record["error"] = {{"kind", "ResourceLimit"}, {"message", e.what()}};
    err << "flatrat: " << e.what() << "\n";
    code = kResourceLimit;
  } catch (const Error& e) {
    record["error"] = {{"kind", std::string(to_string(e.kind()))}, {"message", e.what()}};
    err << "flatrat: " << e.what() << "\n";
    code = e.kind() == ErrorKind::ResourceLimit ? kResourceLimit : kInputError;
  }
  out << (human ? render_human(record) : record.dump() + "\n");
  return code;
}

}  // namespace flatrat::cli
