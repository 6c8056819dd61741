#ifndef TAMEPI_CLI_HPP_
#define TAMEPI_CLI_HPP_

// Command-line front end. run() never exits the process: it returns 0 on
// success, 1 on a domain error and 2 on a usage error.

#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "action.hpp"
#include "error.hpp"
#include "moduli.hpp"
#include "perm_group.hpp"
#include "serialize.hpp"
#include "synthesis.hpp"
#include "tree.hpp"

namespace tamepi::cli {

  inline constexpr char const* cap_variable = "TAMEPI_ENUM_CAP";

  inline std::vector<PPoint> parse_points(std::string const& s) {
    std::vector<PPoint> out;
    for (auto const& part : split_top_level(s, ',')) {
      out.push_back(PPoint::parse(part));
    }
    return out;
  }

  inline std::set<Prime> parse_primes(std::string const& s) {
    std::set<Prime> out;
    for (auto const& part : split_top_level(s, ',')) {
      long long p = 0;
      try {
        std::size_t used = 0;
        p                = std::stoll(part, &used);
        if (used != part.size()) {
          throw std::invalid_argument(part);
        }
      } catch (std::exception const&) {
        throw Error("malformed prime \"" + part + "\"");
      }
      if (!out.insert(Prime(p)).second) {
        throw Error("prime " + part + " listed twice");
      }
    }
    return out;
  }

  namespace detail {
    struct UsageError : std::runtime_error {
      using std::runtime_error::runtime_error;
    };

    inline std::size_t enumeration_cap() {
      char const* env = std::getenv(cap_variable);
      if (env == nullptr || *env == '\0') {
        return default_enumeration_cap;
      }
      try {
        std::size_t used = 0;
        unsigned long long v = std::stoull(env, &used);
        if (used == std::string(env).size() && v > 0) {
          return static_cast<std::size_t>(v);
        }
      } catch (std::exception const&) {
      }
      throw UsageError(std::string(cap_variable) + " must be a positive integer, got \"" + env
                       + "\"");
    }

    inline std::string tree_text(MarkedTree const& t) {
      std::ostringstream os;
      os << "marks " << t.rank() << ", order";
      for (auto k : t.order) {
        os << " " << k;
      }
      os << "\n";
      auto const& m = t.normalization;
      if (m.is_identity()) {
        os << "normalization identity\n";
      } else {
        os << "normalization z -> (" << m.a << " z + " << m.b << ") / (" << m.c << " z + "
           << m.d << ")\n";
      }
      TreeView view(t);
      for (std::size_t v : view.preorder()) {
        os << "vertex " << view.id(v);
        if (view.is_root(v)) {
          os << " (root)";
        } else {
          os << " (parent " << view.id(view.parent(v)) << ", thickness " << view.thickness(v)
             << ")";
        }
        os << ": marks";
        for (auto k : view.marks_at(v)) {
          os << " " << k;
        }
        os << "\n";
      }
      return os.str();
    }

    inline std::string action_text(ConjugatorAction const& a) {
      std::string s;
      for (std::size_t i = 1; i <= a.rank(); ++i) {
        std::string ai = "a" + std::to_string(i);
        Word const& q  = a.conjugator(i);
        s += ai + " -> " + (q.empty() ? ai : "^{" + q.to_compact_string() + "} " + ai) + "\n";
      }
      return s;
    }

    inline std::string report_text(RamificationReport const& r) {
      std::string s = "p = " + std::to_string(r.prime.value()) + ": N = "
                      + std::to_string(r.index) + ", exp(Inn(G)) = " + std::to_string(r.bound)
                      + (r.non_coalescing ? ", non-coalescing" : "") + "\n";
      if (r.p_divides_order) {
        s += "  warning: p divides |G|; the tame theory does not apply\n";
      }
      return s;
    }

    inline std::string points_text(std::vector<Rational> const& pts) {
      std::string s;
      for (std::size_t i = 0; i < pts.size(); ++i) {
        s += (i ? ", " : "") + pts[i].to_string();
      }
      return s + "\n";
    }
  }  // namespace detail

  inline int run(std::vector<std::string> const& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Tame Galois action on prime-to-p fundamental groups of the punctured line",
                 "tamepi"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string format = "json";
    app.add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"json", "text"}))
        ->capture_default_str();

    long long   prime = 0;
    long        scale = 1;
    std::size_t r     = 0;
    std::string points, group, tuple, primes, spec;

    auto with_points = [&](CLI::App* sub) {
      sub->add_option("--prime", prime, "Residue characteristic")->required();
      sub->add_option("--points", points, "Comma-separated rationals, \"n/d\" or \"inf\"")
          ->required();
    };
    auto with_tuple = [&](CLI::App* sub) {
      sub->add_option("--group", group, "Generators in cycle notation, separated by ';'")
          ->required();
      sub->add_option("--tuple", tuple, "Branch cycle description, comma-separated")
          ->required();
    };

    auto* tree_cmd = app.add_subcommand("tree", "Stable marked reduction tree");
    with_points(tree_cmd);
    auto* action_cmd = app.add_subcommand("action", "Action of d on a1..ar");
    with_points(action_cmd);
    action_cmd->add_option("--scale", scale, "Multiply every thickness by N")
        ->check(CLI::PositiveNumber);
    auto* pres_cmd = app.add_subcommand("presentation", "Presentation of the fundamental group");
    with_points(pres_cmd);
    auto* ram_cmd = app.add_subcommand("ramification", "Ramification index of the field of moduli");
    with_points(ram_cmd);
    with_tuple(ram_cmd);
    auto* inertia_cmd = app.add_subcommand("inertia", "Vertical inertia coset");
    with_points(inertia_cmd);
    with_tuple(inertia_cmd);
    auto* report_cmd = app.add_subcommand("report", "Ramification reports at several primes");
    report_cmd->add_option("--primes", primes, "Comma-separated primes")->required();
    report_cmd->add_option("--points", points, "Comma-separated rationals")->required();
    with_tuple(report_cmd);
    auto* synth_cmd = app.add_subcommand("synthesize", "Points realizing local data");
    synth_cmd->add_option("--spec", spec, "JSON file {\"primes\": {\"p\": tree}}")->required();
    auto* unram_cmd
        = app.add_subcommand("synthesize-unramified", "Points with unramified field of moduli");
    unram_cmd->add_option("--group", group, "Generators in cycle notation")->required();
    unram_cmd->add_option("--r", r, "Number of branch points")->required();
    unram_cmd->add_option("--primes", primes, "Comma-separated primes")->required();

    try {
      std::vector<std::string> reversed(args.rbegin(), args.rend());
      app.parse(reversed);
    } catch (CLI::CallForHelp const&) {
      out << app.help();
      return 0;
    } catch (CLI::CallForAllHelp const&) {
      out << app.help("", CLI::AppFormatMode::All);
      return 0;
    } catch (CLI::ParseError const& e) {
      err << "tamepi: " << e.what() << "\n";
      return 2;
    }

    bool json = format == "json";
    auto emit = [&](Json const& j, std::string const& text) {
      if (json) {
        out << j.dump(2) << "\n";
      } else {
        out << text;
      }
    };

    try {
      std::size_t cap = detail::enumeration_cap();
      auto        load_tuple = [&] {
        return parse_tuple(parse_group(group, cap), tuple);
      };

      if (tree_cmd->parsed()) {
        auto t = build_tree(parse_points(points), Prime(prime));
        emit(to_json(t), detail::tree_text(t));
      } else if (action_cmd->parsed()) {
        auto         t = build_tree(parse_points(points), Prime(prime));
        ActionRecord rec{prime, t.order, scale, scaled_action(t, scale)};
        emit(to_json(rec), detail::action_text(rec.action));
      } else if (pres_cmd->parsed()) {
        Prime p(prime);
        auto  pr = presentation(build_tree(parse_points(points), p), p);
        emit(to_json(pr), pr.to_text());
      } else if (ram_cmd->parsed()) {
        Prime p(prime);
        auto  tup = load_tuple();
        auto  rep = ramification_report(build_tree(parse_points(points), p), tup, p);
        emit(to_json(rep), detail::report_text(rep));
      } else if (inertia_cmd->parsed()) {
        Prime p(prime);
        auto  tup = load_tuple();
        auto  t   = build_tree(parse_points(points), p);
        auto  h   = vertical_inertia(t, tup);
        Json  j{{"prime", prime},
               {"representative", h.front().to_string()},
               {"representative_order", h.front().order()},
               {"coset", permutations_to_json(h)},
               {"tree", to_json(t)}};
        std::string text = "representative " + h.front().to_string() + " of order "
                           + std::to_string(h.front().order()) + "\ncoset";
        for (auto const& x : h) {
          text += " " + x.to_string();
        }
        emit(j, text + "\n");
      } else if (report_cmd->parsed()) {
        auto reps = global_report(parse_points(points), load_tuple(), parse_primes(primes));
        std::string text;
        for (auto const& [p, rep] : reps) {
          text += detail::report_text(rep);
        }
        emit(to_json(reps), text);
      } else if (synth_cmd->parsed()) {
        std::ifstream in(spec);
        if (!in) {
          throw Error("cannot read spec file " + spec);
        }
        Json j;
        try {
          j = Json::parse(in);
        } catch (nlohmann::json::exception const& e) {
          throw Error("spec file " + spec + " is not valid JSON: " + e.what());
        }
        auto pts = synthesize_multi(spec_from_json(j));
        emit(points_to_json(pts, true), detail::points_text(pts));
      } else if (unram_cmd->parsed()) {
        auto pts = synthesize_unramified(parse_group(group, cap), r, parse_primes(primes));
        emit(points_to_json(pts, true), detail::points_text(pts));
      }
    } catch (detail::UsageError const& e) {
      err << "tamepi: " << e.what() << "\n";
      return 2;
    } catch (std::exception const& e) {
      err << "tamepi: " << e.what() << "\n";
      if (json) {
        out << Json{{"error", e.what()}}.dump() << "\n";
      }
      return 1;
    }
    return 0;
  }

}  // namespace tamepi::cli

#endif  // TAMEPI_CLI_HPP_
