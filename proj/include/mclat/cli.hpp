#ifndef MCLAT_CLI_HPP
#define MCLAT_CLI_HPP

#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "checks.hpp"
#include "transforms.hpp"

namespace mclat::cli {

enum ExitCode : int { ok = 0, counterexample = 1, usage = 2, fragment = 3 };

namespace detail {

struct Output {
  std::string command;
  std::vector<std::string> lines;
  nlohmann::json result;
  nlohmann::json failures = nlohmann::json::array();
};

inline Sig sig_of(const std::string& s) { return s == "w" ? Sig::W : Sig::L; }

// A parse error with the offending text and a caret under its position.
inline void report_parse(std::ostream& err, const std::string& label, const std::string& text, const ParseError& e) {
  err << "error: " << label << ": " << e.what() << "\n  " << text << "\n  " << std::string(e.position(), ' ')
      << "^\n";
}

inline Formula parse_or_throw(const std::string& text, Sig sig, std::ostream& err) {
  try {
    return parse(text, sig);
  } catch (const ParseError& e) {
    report_parse(err, "formula", text, e);
    throw;
  }
}

struct Binding {
  std::string name;
  std::string value;
};

inline Binding split_let(const std::string& s) {
  const auto eq = s.find('=');
  if (eq == std::string::npos || eq == 0) throw ParseError("expected NAME=VALUE in --let", eq == 0 ? 0 : s.size());
  return {s.substr(0, eq), s.substr(eq + 1)};
}

template <class Elem>
Assignment<Elem> bindings(const std::vector<std::string>& lets, const std::function<Elem(std::string_view)>& read,
                          std::ostream& err) {
  Assignment<Elem> a;
  for (const auto& s : lets) {
    Binding b;
    try {
      b = split_let(s);
    } catch (const ParseError& e) {
      report_parse(err, "--let", s, e);
      throw;
    }
    try {
      a[b.name] = read(b.value);
    } catch (const ParseError& e) {
      report_parse(err, "--let " + b.name, b.value, e);
      throw;
    }
  }
  return a;
}

inline void report(const EquivReport& rep, Output& out) {
  for (const auto& n : rep.notes) out.lines.push_back("note: " + n);
  for (const auto& f : rep.failures) {
    out.lines.push_back("counterexample: " + f.assignment + " (expected " + (f.lhs ? "true" : "false") + ", got " +
                        (f.rhs ? "true" : "false") + ")");
    out.failures.push_back({{"assignment", f.assignment}, {"lhs", f.lhs}, {"rhs", f.rhs}});
  }
  if (rep.seed) out.lines.push_back("seed=" + std::to_string(*rep.seed));
  out.lines.push_back(rep.summary());
  out.result = rep.summary();
}

inline EquivReport run_suite(const std::string& suite, std::optional<std::size_t> n, std::uint64_t seed) {
  if (suite == "notbot") return checks::notbot(n.value_or(5));
  if (suite == "ipschar") return checks::ipschar(n.value_or(4));
  if (suite == "endpoints") return checks::endpoints(n.value_or(5));
  if (suite == "member") return checks::member(n.value_or(5));
  if (suite == "subset") return checks::subset(n.value_or(5));
  if (suite == "w2l") return checks::w2l(n.value_or(4));
  if (suite == "l2w") return checks::l2w(n.value_or(4));
  return checks::pipeline(seed, n.value_or(200));
}

} // namespace detail

/// Runs one command line (without the program name). Results go to `out`,
/// diagnostics to `err`.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Formula tools for finite sets and finite unions of closed intervals over the nonnegative rationals",
               "mclat"};
  app.require_subcommand(1);
  bool json = false;
  app.add_flag("--json", json, "Print a JSON envelope {command, result, failures}");

  std::string sig = "l", dir, formula, suite, pool_text;
  std::vector<std::string> lets;
  std::optional<std::size_t> pool_size;
  std::uint64_t seed = 1;
  const auto sigs = CLI::IsMember({"w", "l"});

  auto* p = app.add_subcommand("parse", "Parse and print a formula with its class");
  p->add_option("--sig", sig, "Signature")->required()->check(sigs);
  p->add_option("formula", formula)->required();

  auto* e = app.add_subcommand("eval", "Evaluate a formula under an assignment");
  e->add_option("--sig", sig, "Signature")->required()->check(sigs);
  e->add_option("--let", lets, "Bind a variable: X=<set>");
  e->add_option("--pool", pool_text, "Witness points for quantifiers, e.g. {0,1,2}");
  e->add_option("formula", formula)->required();

  auto* t = app.add_subcommand("translate", "Translate between the two signatures");
  t->add_option("--dir", dir, "Direction")->required()->check(CLI::IsMember({"w2l", "l2w"}));
  t->add_option("formula", formula)->required();

  auto* x = app.add_subcommand("posex", "Rewrite a W-formula as a positive existential one");
  x->add_option("formula", formula)->required();

  auto* pl = app.add_subcommand("pipeline", "Existential equivalent of an L-formula");
  pl->add_option("formula", formula)->required();

  auto* c = app.add_subcommand("check", "Run a property suite");
  c->add_option("--suite", suite, "Suite")
      ->required()
      ->check(CLI::IsMember({"notbot", "ipschar", "endpoints", "member", "subset", "w2l", "l2w", "pipeline"}));
  c->add_option("--pool-size", pool_size, "Pool size (samples per formula for pipeline)");
  c->add_option("--seed", seed, "Random seed");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return ok;
  } catch (const CLI::ParseError& ex) {
    err << "error: " << ex.what() << "\n";
    return usage;
  }

  detail::Output o;
  int code = ok;
  try {
    if (*p) {
      o.command = "parse";
      const Formula f = detail::parse_or_throw(formula, detail::sig_of(sig), err);
      o.lines = {print(f), "class: " + std::string(class_name(classify(f)))};
      o.result = print(f);
    } else if (*e) {
      o.command = "eval";
      const Formula f = detail::parse_or_throw(formula, detail::sig_of(sig), err);
      std::optional<FinSet> pool_pts;
      if (!pool_text.empty()) try {
          pool_pts = parse_finset(pool_text);
        } catch (const ParseError& pe) {
          detail::report_parse(err, "--pool", pool_text, pe);
          throw;
        }
      auto pool_for = [&](const auto& a) {
        if (!pool_pts) return default_pool(a);
        return WitnessPool{*pool_pts, pool_pts->size(), true};
      };
      bool v = false;
      if (sig == "w") {
        const auto a = detail::bindings<FinSet>(lets, parse_finset, err);
        v = eval_bounded(f, a, pool_for(a));
      } else {
        const auto a = detail::bindings<FciSet>(lets, parse_fci, err);
        v = eval_bounded(f, a, pool_for(a));
      }
      o.lines = {v ? "true" : "false"};
      o.result = v;
    } else if (*t) {
      o.command = "translate";
      const Formula f = detail::parse_or_throw(formula, dir == "w2l" ? Sig::W : Sig::L, err);
      const Formula g = dir == "w2l" ? translate_W_to_L(f) : translate_L_to_W(f);
      o.lines = {print(g)};
      o.result = print(g);
    } else if (*x) {
      o.command = "posex";
      const Formula g = to_positive_existential(detail::parse_or_throw(formula, Sig::W, err));
      o.lines = {print(g)};
      o.result = print(g);
    } else if (*pl) {
      o.command = "pipeline";
      const Formula g = pipeline(detail::parse_or_throw(formula, Sig::L, err));
      o.lines = {print(g)};
      o.result = print(g);
    } else if (*c) {
      o.command = "check";
      const EquivReport rep = detail::run_suite(suite, pool_size, seed);
      detail::report(rep, o);
      if (!rep.ok()) code = counterexample;
    }
  } catch (const ParseError& pe) {
    if (o.command == "check" || o.command.empty()) err << "error: " << pe.what() << "\n";
    return usage;
  } catch (const FragmentError& fe) {
    err << "fragment error: " << fe.what() << "\n";
    return fragment;
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << "\n";
    return usage;
  }

  if (json) {
    out << nlohmann::json{{"command", o.command}, {"result", o.result}, {"failures", o.failures}}.dump() << "\n";
  } else {
    for (const auto& l : o.lines) out << l << "\n";
  }
  return code;
}

} // namespace mclat::cli

#endif // MCLAT_CLI_HPP
