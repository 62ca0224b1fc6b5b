#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "json.hpp"
#include "topprod/cli.hpp"
#include "topprod/error.hpp"
#include "topprod/json_io.hpp"
#include "topprod/spacemodel.hpp"

namespace py = pybind11;
using namespace topprod;
using nlohmann::json;

namespace {

SpaceModel model_arg(const std::string& text) {
  const std::string prefix = "builtin:";
  if (text.rfind(prefix, 0) == 0)
    return builtin_model(text.substr(prefix.size()));
  return io::model_from_json(json::parse(text));
}

TopWord word_arg(const std::string& text) { return io::word_from_json(json::parse(text)); }
CardSeq seq_arg(const std::string& text) { return io::cardseq_from_json(json::parse(text)); }

ProductNormalForm finite_element(const TopWord& w) {
  if (!w.is_finite())
    throw PreconditionError("this operation needs a word made of finite blocks only");
  std::uint64_t top = 0;
  for (const Block& b : w.blocks())
    for (const Letter& l : b.letters)
      top = std::max(top, l.level);
  return project(w, top);
}

} // namespace

PYBIND11_MODULE(_topprod, m) {
  m.doc() = "JSON-in, JSON-out bindings of the topprod library";

  static py::exception<Error> base(m, "TopprodError", PyExc_ValueError);
  static py::exception<NotApplicable> not_applicable(m, "NotApplicableError", base.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p)
        std::rethrow_exception(p);
    } catch (const NotApplicable& e) {
      py::set_error(not_applicable, e.what());
    } catch (const Error& e) {
      py::set_error(base, e.what());
    } catch (const json::exception& e) {
      py::set_error(base, e.what());
    }
  });

  m.def("validate", [](const std::string& model) {
    json out = json::array();
    for (const Violation& v : validate(model_arg(model)))
      out.push_back(io::to_json(v));
    return out.dump();
  });
  m.def("classify", [](const std::string& model) {
    const SpaceModel sm = model_arg(model);
    if (const auto v = validate(sm); !v.empty())
      throw InvalidSchema(v.front().field + ": " + v.front().message);
    return io::to_json(classify(sm)).dump();
  });
  m.def("iso", [](const std::string& a, const std::string& b) {
    return io::to_json(iso_test(model_arg(a), model_arg(b))).dump();
  });
  m.def("builtin_model", [](const std::string& name) { return io::to_json(builtin_model(name)).dump(); });
  m.def("builtin_names", &builtin_names);

  m.def("seq_equiv", [](const std::string& s, const std::string& t) {
    return io::to_json(seq_equiv(seq_arg(s), seq_arg(t))).dump();
  });
  m.def("seq_sum", [](const std::string& s, std::uint64_t M) { return io::to_json(seq_arg(s).partial_sum(M)).dump(); });
  m.def("seq_text", [](const std::string& s) { return seq_arg(s).to_string(); });
  m.def("regroup", [](const std::string& s, const std::string& g) {
    return io::to_json(regroup(seq_arg(s), io::grouping_from_json(json::parse(g)))).dump();
  });

  m.def("project", [](const std::string& w, std::uint64_t N) { return io::to_json(project(word_arg(w), N)).dump(); });
  m.def("eq_up_to", [](const std::string& u, const std::string& v, std::uint64_t N) {
    return eq_up_to(word_arg(u), word_arg(v), N);
  });
  m.def("semidecide_neq", [](const std::string& u, const std::string& v, std::uint64_t Nmax) {
    return semidecide_neq(word_arg(u), word_arg(v), Nmax);
  });
  m.def("concat", [](const std::string& u, const std::string& v) {
    return io::to_json(concat(word_arg(u), word_arg(v))).dump();
  });
  m.def("invert_word", [](const std::string& w) { return io::to_json(invert_word(word_arg(w))).dump(); });
  m.def("phi", [](const std::string& w) { return io::to_json(phi_endo(word_arg(w))).dump(); });
  m.def("kth_root", [](const std::string& w, std::uint64_t k) -> std::optional<std::string> {
    const auto r = kth_root(finite_element(word_arg(w)), k);
    if (!r)
      return std::nullopt;
    return io::to_json(*r).dump();
  });
  m.def("divisibility_spectrum", [](const std::string& w, std::uint64_t kMax) {
    return divisibility_spectrum(finite_element(word_arg(w)), kMax);
  });

  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_cli(args, out, err);
    return py::make_tuple(code, out.str(), err.str());
  });
}
