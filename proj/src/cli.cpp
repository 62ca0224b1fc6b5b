#include "topprod/cli.hpp"

#include <algorithm>
#include <functional>
#include <optional>

#include "CLI11.hpp"
#include "topprod/error.hpp"
#include "topprod/json_io.hpp"

namespace topprod {

namespace {

using io::json;

struct InvalidModel : Error {
  std::vector<Violation> violations;
  explicit InvalidModel(std::vector<Violation> v) : Error("model fails validation"), violations(std::move(v)) {}
};

SpaceModel load_model(const std::string& source) {
  const std::string prefix = "builtin:";
  SpaceModel m = source.rfind(prefix, 0) == 0 ? builtin_model(source.substr(prefix.size()))
                                              : io::model_from_json(io::read_json_file(source));
  if (auto v = validate(m); !v.empty())
    throw InvalidModel(std::move(v));
  return m;
}

TopWord load_word(const std::string& path) {
  return io::word_from_json(io::read_json_file(path), std::filesystem::path(path).parent_path());
}

CardSeq load_seq(const std::string& path) { return io::cardseq_from_json(io::read_json_file(path)); }

// The finite word as an element of the free product over its own levels.
ProductNormalForm finite_element(const TopWord& w) {
  if (!w.is_finite())
    throw PreconditionError("this operation needs a word made of finite blocks only");
  std::uint64_t top = 0;
  for (const Block& b : w.blocks())
    for (const Letter& l : b.letters)
      top = std::max(top, l.level);
  return project(w, top);
}

json word_result(const TopWord& w) {
  json out = {{"word", io::to_json(w)}};
  if (w.is_finite())
    out["normalForm"] = io::to_json(finite_element(w));
  return out;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Computations in topologist products of free groups and their cardinal invariants"};
  app.name("topprod");
  app.fallthrough();
  app.require_subcommand(1);
  std::uint64_t nmax = 32;
  app.add_option("--nmax", nmax, "projection bound for eq/neq (default 32)");
  app.add_flag("--json", "emit JSON reports (always on)");

  std::string command;
  json result;
  std::function<json()> action;
  bool raw_output = false;

  auto* classify_cmd = app.add_subcommand("classify", "horseshoe / tpd classification of a model");
  std::string model_a;
  std::string model_b;
  classify_cmd->add_option("model", model_a, "model file or builtin:NAME")->required();
  classify_cmd->callback([&] {
    command = "classify";
    action = [&] { return io::to_json(classify(load_model(model_a))); };
  });

  auto* iso_cmd = app.add_subcommand("iso", "isomorphism test of two tpd models");
  iso_cmd->add_option("a", model_a)->required();
  iso_cmd->add_option("b", model_b)->required();
  iso_cmd->callback([&] {
    command = "iso";
    action = [&] { return io::to_json(iso_test(load_model(model_a), load_model(model_b))); };
  });

  auto* word_cmd = app.add_subcommand("word", "word operations");
  word_cmd->require_subcommand(1);
  std::string w1;
  std::string w2;
  std::uint64_t n = 0;
  std::optional<std::uint64_t> n_opt;

  auto* project_cmd = word_cmd->add_subcommand("project", "normal form of the projection to levels <= N");
  project_cmd->add_option("N", n)->required();
  project_cmd->add_option("word", w1)->required();
  project_cmd->callback([&] {
    command = "word project";
    action = [&] { return json{{"N", n}, {"normalForm", io::to_json(project(load_word(w1), n))}}; };
  });

  auto* eq_cmd = word_cmd->add_subcommand("eq", "compare projections at level N (default --nmax)");
  eq_cmd->add_option("u", w1)->required();
  eq_cmd->add_option("v", w2)->required();
  eq_cmd->add_option("N", n_opt);
  eq_cmd->callback([&] {
    command = "word eq";
    action = [&] {
      const std::uint64_t N = n_opt.value_or(nmax);
      return json{{"N", N}, {"equalUpTo", eq_up_to(load_word(w1), load_word(w2), N)}};
    };
  });

  auto* neq_cmd = word_cmd->add_subcommand("neq", "least level whose projections differ, up to Nmax");
  neq_cmd->add_option("u", w1)->required();
  neq_cmd->add_option("v", w2)->required();
  neq_cmd->add_option("Nmax", n_opt);
  neq_cmd->callback([&] {
    command = "word neq";
    action = [&] {
      const std::uint64_t N = n_opt.value_or(nmax);
      const auto d = semidecide_neq(load_word(w1), load_word(w2), N);
      return json{{"Nmax", N}, {"distinguishedAt", d ? json(*d) : json(nullptr)}};
    };
  });

  auto* concat_cmd = word_cmd->add_subcommand("concat", "concatenate two words");
  concat_cmd->add_option("u", w1)->required();
  concat_cmd->add_option("v", w2)->required();
  concat_cmd->callback([&] {
    command = "word concat";
    action = [&] { return word_result(concat(load_word(w1), load_word(w2))); };
  });

  auto* invert_cmd = word_cmd->add_subcommand("invert", "inverse word");
  invert_cmd->add_option("word", w1)->required();
  invert_cmd->callback([&] {
    command = "word invert";
    action = [&] { return word_result(invert_word(load_word(w1))); };
  });

  auto* phi_cmd = word_cmd->add_subcommand("phi", "apply a_n -> a_{2n} a_{2n+1}^-1");
  phi_cmd->add_option("word", w1)->required();
  phi_cmd->callback([&] {
    command = "word phi";
    action = [&] { return word_result(phi_endo(load_word(w1))); };
  });

  auto* root_cmd = word_cmd->add_subcommand("root", "k-th root of a finite word");
  root_cmd->add_option("k", n)->required()->check(CLI::PositiveNumber);
  root_cmd->add_option("word", w1)->required();
  root_cmd->callback([&] {
    command = "word root";
    action = [&] {
      const ProductNormalForm u = finite_element(load_word(w1));
      if (u.is_identity())
        throw PreconditionError("the identity has roots of every order");
      const auto r = kth_root(u, n);
      return json{{"k", n},
                  {"input", io::to_json(u)},
                  {"exists", r.has_value()},
                  {"root", r ? io::to_json(*r) : json(nullptr)}};
    };
  });

  auto* spectrum_cmd = word_cmd->add_subcommand("spectrum", "all k <= kMax with a k-th root");
  spectrum_cmd->add_option("kMax", n)->required();
  spectrum_cmd->add_option("word", w1)->required();
  spectrum_cmd->callback([&] {
    command = "word spectrum";
    action = [&] {
      const ProductNormalForm u = finite_element(load_word(w1));
      return json{{"kMax", n}, {"input", io::to_json(u)}, {"spectrum", divisibility_spectrum(u, n)}};
    };
  });

  auto* reindex_cmd = word_cmd->add_subcommand("reindex", "map a word over the all-Z profile onto F(r_n)");
  reindex_cmd->add_option("word", w1)->required();
  reindex_cmd->add_option("ranks", w2)->required();
  reindex_cmd->callback([&] {
    command = "word reindex";
    action = [&] { return word_result(reindex_iso(load_word(w1), load_seq(w2))); };
  });

  auto* loop_cmd = word_cmd->add_subcommand("reduce-loop", "reduce a combinatorial loop over a model");
  loop_cmd->add_option("loop", w1)->required();
  loop_cmd->add_option("model", model_a)->required();
  loop_cmd->callback([&] {
    command = "word reduce-loop";
    action = [&] {
      const SpaceModel m = load_model(model_a);
      return word_result(reduce_loop(io::loop_from_json(io::read_json_file(w1)), point_table(m), m.annuli));
    };
  });

  auto* seq_cmd = app.add_subcommand("seq", "cardinal sequence operations");
  seq_cmd->require_subcommand(1);
  auto* equiv_cmd = seq_cmd->add_subcommand("equiv", "decide the equivalence of two sequences");
  equiv_cmd->add_option("s", w1)->required();
  equiv_cmd->add_option("t", w2)->required();
  equiv_cmd->callback([&] {
    command = "seq equiv";
    action = [&] { return io::to_json(seq_equiv(load_seq(w1), load_seq(w2))); };
  });

  auto* regroup_cmd = seq_cmd->add_subcommand("regroup", "sum consecutive blocks of a sequence");
  regroup_cmd->add_option("s", w1)->required();
  regroup_cmd->add_option("grouping", w2)->required();
  regroup_cmd->callback([&] {
    command = "seq regroup";
    action = [&] {
      const CardSeq r = regroup(load_seq(w1), io::grouping_from_json(io::read_json_file(w2)));
      return json{{"sequence", io::to_json(r)}, {"text", r.to_string()}};
    };
  });

  auto* sum_cmd = seq_cmd->add_subcommand("sum", "partial sum of entries 0..M");
  sum_cmd->add_option("M", n)->required();
  sum_cmd->add_option("s", w1)->required();
  sum_cmd->callback([&] {
    command = "seq sum";
    action = [&] {
      const Cardinal c = load_seq(w1).partial_sum(n);
      return json{{"M", n}, {"sum", io::to_json(c)}, {"text", c.to_string()}};
    };
  });

  auto* examples_cmd = app.add_subcommand("examples", "print a builtin model as JSON");
  examples_cmd->add_option("name", model_a)->required();
  examples_cmd->callback([&] {
    command = "examples";
    raw_output = true;
    action = [&] { return io::to_json(builtin_model(model_a)); };
  });

  auto* show_cmd = app.add_subcommand("show", "parse a model and print it in canonical form");
  show_cmd->add_option("model", model_a)->required();
  show_cmd->callback([&] {
    command = "show";
    raw_output = true;
    action = [&] { return io::to_json(load_model(model_a)); };
  });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  json diagnostics = json::array();
  int code = kExitOk;
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kExitOk;
    }
    err << e.what() << "\n";
    diagnostics.push_back(e.what());
    out << json{{"command", nullptr}, {"args", args}, {"result", nullptr}, {"diagnostics", diagnostics}}.dump(2)
        << "\n";
    return kExitInputError;
  }

  try {
    result = action();
  } catch (const InvalidModel& e) {
    json vs = json::array();
    for (const Violation& v : e.violations) {
      vs.push_back(io::to_json(v));
      diagnostics.push_back(v.field + ": " + v.rule + ": " + v.message);
    }
    result = json{{"violations", vs}};
    code = kExitInputError;
  } catch (const NotApplicable& e) {
    diagnostics.push_back(std::string("not applicable: ") + e.what());
    code = kExitNotApplicable;
  } catch (const Error& e) {
    diagnostics.push_back(e.what());
    code = kExitInputError;
  } catch (const std::overflow_error& e) {
    diagnostics.push_back(e.what());
    code = kExitInputError;
  }
  for (const auto& d : diagnostics)
    err << d.get<std::string>() << "\n";

  if (raw_output && code == kExitOk) {
    out << result.dump(2) << "\n";
    return code;
  }
  json report = {{"command", command}, {"args", args}, {"result", result}, {"diagnostics", diagnostics}};
  report["exitCode"] = code;
  out << report.dump(2) << "\n";
  return code;
}

} // namespace topprod
