#include "topprod/json_io.hpp"

#include <fstream>

#include "topprod/error.hpp"

namespace topprod::io {

namespace {

[[noreturn]] void bad(const std::string& what, const json& j) {
  throw ParseError(what + " (got " + j.dump() + ")");
}

const json& field(const json& j, const char* key, const std::string& ctx) {
  if (!j.is_object())
    bad(ctx + ": expected an object", j);
  auto it = j.find(key);
  if (it == j.end())
    bad(ctx + ": missing \"" + key + "\"", j);
  return *it;
}

std::uint64_t nat(const json& j, const std::string& ctx) {
  if (!j.is_number_integer() || (j.is_number_integer() && !j.is_number_unsigned() && j.get<std::int64_t>() < 0))
    bad(ctx + ": expected a natural number", j);
  return j.get<std::uint64_t>();
}

std::int64_t integer(const json& j, const std::string& ctx) {
  if (!j.is_number_integer())
    bad(ctx + ": expected an integer", j);
  if (j.is_number_unsigned() && j.get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX))
    bad(ctx + ": integer out of range", j);
  return j.get<std::int64_t>();
}

bool boolean(const json& j, const std::string& ctx) {
  if (!j.is_boolean())
    bad(ctx + ": expected true or false", j);
  return j.get<bool>();
}

const std::string& str(const json& j, const std::string& ctx) {
  if (!j.is_string())
    bad(ctx + ": expected a string", j);
  return j.get_ref<const std::string&>();
}

const json& arr(const json& j, const std::string& ctx) {
  if (!j.is_array())
    bad(ctx + ": expected an array", j);
  return j;
}

json affine_json(const AffineRule& r) { return {{"a", r.a}, {"b", r.b}}; }

AffineRule affine_from(const json& j, const std::string& ctx) {
  return {nat(field(j, "a", ctx), ctx + ".a"), nat(field(j, "b", ctx), ctx + ".b")};
}

json exp_json(const ExpRule& r) { return {{"a", r.a}, {"b", r.b}}; }

ExpRule exp_from(const json& j, const std::string& ctx) {
  return {integer(field(j, "a", ctx), ctx + ".a"), integer(field(j, "b", ctx), ctx + ".b")};
}

json letter_json(const Letter& l) { return json::array({l.level, l.gen, l.exp}); }

Letter letter_from(const json& j, const std::string& ctx) {
  if (!j.is_array() || j.size() != 3)
    bad(ctx + ": a letter is [level, gen, exp]", j);
  return {nat(j[0], ctx + "[0]"), nat(j[1], ctx + "[1]"), integer(j[2], ctx + "[2]")};
}

json rule_json(const LetterRule& r) {
  return {{"level", affine_json(r.level)}, {"gen", affine_json(r.gen)}, {"exp", exp_json(r.exp)}};
}

LetterRule rule_from(const json& j, const std::string& ctx) {
  LetterRule r;
  r.level = affine_from(field(j, "level", ctx), ctx + ".level");
  if (j.contains("gen"))
    r.gen = affine_from(j["gen"], ctx + ".gen");
  if (j.contains("exp"))
    r.exp = exp_from(j["exp"], ctx + ".exp");
  return r;
}

std::string kind_name(BlockKind k) {
  switch (k) {
    case BlockKind::Finite: return "finite";
    case BlockKind::Omega: return "omega";
    case BlockKind::OmegaStar: return "omegaStar";
  }
  return "";
}

BlockKind kind_from(const json& j, const std::string& ctx) {
  const std::string& s = str(j, ctx);
  if (s == "finite")
    return BlockKind::Finite;
  if (s == "omega")
    return BlockKind::Omega;
  if (s == "omegaStar")
    return BlockKind::OmegaStar;
  bad(ctx + ": kind must be finite, omega or omegaStar", j);
}

template <class F>
auto guarded(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw ParseError(e.what());
  }
}

} // namespace

json to_json(const Cardinal& c) {
  switch (c.kind()) {
    case Cardinal::Kind::Finite: return {{"fin", c.finite_value()}};
    case Cardinal::Kind::Aleph: return {{"aleph", c.aleph_index()}};
    case Cardinal::Kind::AlephOmega: return "alephOmega";
  }
  return nullptr;
}

Cardinal cardinal_from_json(const json& j) {
  if (j.is_number_integer())
    return Cardinal::fin(nat(j, "cardinal"));
  if (j.is_string()) {
    if (j.get_ref<const std::string&>() == "alephOmega")
      return Cardinal::aleph_omega();
    bad("cardinal: the only string form is \"alephOmega\"", j);
  }
  if (j.is_object() && j.size() == 1) {
    if (j.contains("fin"))
      return Cardinal::fin(nat(j["fin"], "cardinal.fin"));
    if (j.contains("aleph"))
      return Cardinal::aleph(nat(j["aleph"], "cardinal.aleph"));
  }
  bad("cardinal: expected {\"fin\":k}, {\"aleph\":i} or \"alephOmega\"", j);
}

json to_json(const CardSeq& s) {
  json prefix = json::array();
  for (const Cardinal& c : s.prefix())
    prefix.push_back(to_json(c));
  json tail = std::visit(
      [](const auto& t) -> json {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, TailZero>) {
          return {{"kind", "zero"}};
        } else if constexpr (std::is_same_v<T, TailConstant>) {
          return {{"kind", "constant"}, {"value", to_json(t.value)}};
        } else if constexpr (std::is_same_v<T, TailPeriodic>) {
          json vals = json::array();
          for (const Cardinal& c : t.values)
            vals.push_back(to_json(c));
          return {{"kind", "periodic"}, {"values", vals}};
        } else {
          return {{"kind", "increasingAlephs"}, {"a", t.a}, {"b", t.b}};
        }
      },
      s.tail());
  return {{"prefix", prefix}, {"tail", tail}};
}

CardSeq cardseq_from_json(const json& j) {
  return guarded([&] {
    std::vector<Cardinal> prefix;
    if (j.contains("prefix"))
      for (const json& c : arr(j["prefix"], "sequence.prefix"))
        prefix.push_back(cardinal_from_json(c));
    Tail tail = TailZero{};
    if (j.is_object() && j.contains("tail")) {
      const json& t = j["tail"];
      const std::string& kind = str(field(t, "kind", "sequence.tail"), "sequence.tail.kind");
      if (kind == "zero") {
        tail = TailZero{};
      } else if (kind == "constant") {
        tail = TailConstant{cardinal_from_json(field(t, "value", "sequence.tail"))};
      } else if (kind == "periodic") {
        TailPeriodic p;
        for (const json& c : arr(field(t, "values", "sequence.tail"), "sequence.tail.values"))
          p.values.push_back(cardinal_from_json(c));
        tail = p;
      } else if (kind == "increasingAlephs") {
        tail = TailIncreasingAlephs{nat(field(t, "a", "sequence.tail"), "sequence.tail.a"),
                                    nat(field(t, "b", "sequence.tail"), "sequence.tail.b")};
      } else {
        bad("sequence.tail.kind must be zero, constant, periodic or increasingAlephs", t);
      }
    } else if (!j.is_object()) {
      bad("sequence: expected an object", j);
    }
    return CardSeq(std::move(prefix), std::move(tail));
  });
}

json to_json(const GroupingSchema& g) {
  json out = {{"head", g.head}, {"repeat", g.repeat}};
  if (g.has_infinite_block)
    out["infiniteBlock"] = true;
  return out;
}

GroupingSchema grouping_from_json(const json& j) {
  return guarded([&] {
    GroupingSchema g;
    if (!j.is_object())
      bad("grouping: expected an object", j);
    if (j.contains("head"))
      for (const json& n : arr(j["head"], "grouping.head"))
        g.head.push_back(nat(n, "grouping.head"));
    if (j.contains("repeat"))
      for (const json& n : arr(j["repeat"], "grouping.repeat"))
        g.repeat.push_back(nat(n, "grouping.repeat"));
    if (j.contains("infiniteBlock"))
      g.has_infinite_block = boolean(j["infiniteBlock"], "grouping.infiniteBlock");
    return g;
  });
}

json to_json(const TopWord& w) {
  json blocks = json::array();
  for (const Block& b : w.blocks()) {
    json jb = {{"kind", kind_name(b.kind)}};
    if (b.kind == BlockKind::Finite) {
      json letters = json::array();
      for (const Letter& l : b.letters)
        letters.push_back(letter_json(l));
      jb["letters"] = letters;
    } else if (b.tracks.size() == 1) {
      jb.update(rule_json(b.tracks.front()));
    } else {
      json tracks = json::array();
      for (const LetterRule& r : b.tracks)
        tracks.push_back(rule_json(r));
      jb["tracks"] = tracks;
    }
    blocks.push_back(jb);
  }
  return {{"profile", to_json(w.profile())}, {"blocks", blocks}};
}

TopWord word_from_json(const json& j, const std::filesystem::path& base_dir) {
  return guarded([&] {
    const json& p = field(j, "profile", "word");
    CardSeq profile = p.is_string() ? cardseq_from_json(read_json_file(base_dir / p.get<std::string>()))
                                    : cardseq_from_json(p);
    std::vector<Block> blocks;
    std::size_t i = 0;
    for (const json& jb : arr(field(j, "blocks", "word"), "word.blocks")) {
      const std::string ctx = "word.blocks[" + std::to_string(i++) + "]";
      Block b;
      b.kind = kind_from(field(jb, "kind", ctx), ctx + ".kind");
      if (b.kind == BlockKind::Finite) {
        std::size_t n = 0;
        for (const json& l : arr(field(jb, "letters", ctx), ctx + ".letters"))
          b.letters.push_back(letter_from(l, ctx + ".letters[" + std::to_string(n++) + "]"));
      } else if (jb.contains("tracks")) {
        std::size_t n = 0;
        for (const json& r : arr(jb["tracks"], ctx + ".tracks"))
          b.tracks.push_back(rule_from(r, ctx + ".tracks[" + std::to_string(n++) + "]"));
        if (b.tracks.empty())
          bad(ctx + ": an infinite block needs at least one track", jb);
      } else {
        b.tracks.push_back(rule_from(jb, ctx));
      }
      blocks.push_back(std::move(b));
    }
    return TopWord(std::move(profile), std::move(blocks));
  });
}

json to_json(const ProductNormalForm& u) {
  json syllables = json::array();
  for (const FreeWord& s : u.syllables()) {
    json letters = json::array();
    for (const Letter& l : s.letters)
      letters.push_back(letter_json(l));
    syllables.push_back({{"level", s.level}, {"letters", letters}});
  }
  return {{"text", u.to_string()}, {"levelBound", u.level_bound()}, {"syllables", syllables}};
}

json to_json(const SpaceModel& m) {
  json points = json::array();
  for (const ModelPoint& p : m.points)
    points.push_back({{"id", p.id}, {"level", p.level}});
  json comps = json::array();
  for (const Component& c : m.components)
    comps.push_back({{"id", c.id},
                     {"members", c.members},
                     {"maxLevel", c.max_level ? json(*c.max_level) : json("approachesBase")}});
  json fams = json::array();
  for (const PairFamily& f : m.pair_families) {
    json jf = {{"xLevel", affine_json(f.x_level)},
               {"yLevel", affine_json(f.y_level)},
               {"sameComponent", f.same_component},
               {"h", f.h ? json{{"kind", "constant"}, {"k", *f.h}} : json{{"kind", "unbounded"}}}};
    if (f.component)
      jf["component"] = *f.component;
    fams.push_back(jf);
  }
  return {{"annuli", to_json(m.annuli)}, {"points", points}, {"components", comps}, {"pairFamilies", fams}};
}

SpaceModel model_from_json(const json& j) {
  return guarded([&] {
    SpaceModel m;
    m.annuli = cardseq_from_json(field(j, "annuli", "model"));
    if (j.contains("points"))
      for (const json& p : arr(j["points"], "model.points"))
        m.points.push_back({str(field(p, "id", "model.points[]"), "point.id"),
                            nat(field(p, "level", "model.points[]"), "point.level")});
    if (j.contains("components")) {
      for (const json& c : arr(j["components"], "model.components")) {
        Component comp;
        comp.id = str(field(c, "id", "model.components[]"), "component.id");
        for (const json& mem : arr(field(c, "members", "component " + comp.id), "component.members"))
          comp.members.push_back(str(mem, "component.members[]"));
        const json& ml = field(c, "maxLevel", "component " + comp.id);
        if (ml.is_string()) {
          if (ml.get_ref<const std::string&>() != "approachesBase")
            bad("component.maxLevel must be a natural number or \"approachesBase\"", ml);
        } else {
          comp.max_level = nat(ml, "component.maxLevel");
        }
        m.components.push_back(std::move(comp));
      }
    }
    if (j.contains("pairFamilies")) {
      for (const json& f : arr(j["pairFamilies"], "model.pairFamilies")) {
        PairFamily pf;
        pf.x_level = affine_from(field(f, "xLevel", "pairFamily"), "pairFamily.xLevel");
        pf.y_level = affine_from(field(f, "yLevel", "pairFamily"), "pairFamily.yLevel");
        pf.same_component = boolean(field(f, "sameComponent", "pairFamily"), "pairFamily.sameComponent");
        const json& h = field(f, "h", "pairFamily");
        const std::string& kind = str(field(h, "kind", "pairFamily.h"), "pairFamily.h.kind");
        if (kind == "constant")
          pf.h = nat(field(h, "k", "pairFamily.h"), "pairFamily.h.k");
        else if (kind != "unbounded")
          bad("pairFamily.h.kind must be constant or unbounded", h);
        if (f.contains("component"))
          pf.component = str(f["component"], "pairFamily.component");
        m.pair_families.push_back(std::move(pf));
      }
    }
    return m;
  });
}

json to_json(const CombinatorialLoop& loop) {
  json blocks = json::array();
  for (const LoopBlock& b : loop.blocks) {
    json jb = {{"kind", kind_name(b.kind)}};
    if (b.kind == BlockKind::Finite) {
      json ex = json::array();
      for (const Excursion& e : b.excursions)
        ex.push_back({{"point", e.point}, {"crosses", e.crosses}, {"sign", e.sign}});
      jb["excursions"] = ex;
    } else {
      json tracks = json::array();
      for (const ExcursionTrack& t : b.tracks)
        tracks.push_back({{"level", affine_json(t.level)},
                          {"gen", affine_json(t.gen)},
                          {"crosses", t.crosses},
                          {"sign", t.sign}});
      jb["tracks"] = tracks;
    }
    blocks.push_back(jb);
  }
  return {{"blocks", blocks}};
}

CombinatorialLoop loop_from_json(const json& j) {
  return guarded([&] {
    CombinatorialLoop loop;
    for (const json& jb : arr(field(j, "blocks", "loop"), "loop.blocks")) {
      LoopBlock b;
      b.kind = kind_from(field(jb, "kind", "loop block"), "loop block kind");
      if (b.kind == BlockKind::Finite) {
        for (const json& e : arr(field(jb, "excursions", "loop block"), "loop.excursions")) {
          Excursion ex;
          ex.point = str(field(e, "point", "excursion"), "excursion.point");
          if (e.contains("crosses"))
            ex.crosses = boolean(e["crosses"], "excursion.crosses");
          if (e.contains("sign"))
            ex.sign = static_cast<int>(integer(e["sign"], "excursion.sign"));
          b.excursions.push_back(std::move(ex));
        }
      } else {
        for (const json& t : arr(field(jb, "tracks", "loop block"), "loop.tracks")) {
          ExcursionTrack tr;
          tr.level = affine_from(field(t, "level", "excursion track"), "track.level");
          if (t.contains("gen"))
            tr.gen = affine_from(t["gen"], "track.gen");
          if (t.contains("crosses"))
            tr.crosses = boolean(t["crosses"], "track.crosses");
          if (t.contains("sign"))
            tr.sign = static_cast<int>(integer(t["sign"], "track.sign"));
          b.tracks.push_back(tr);
        }
      }
      loop.blocks.push_back(std::move(b));
    }
    return loop;
  });
}

json to_json(const Violation& v) { return {{"field", v.field}, {"rule", v.rule}, {"message", v.message}}; }

json to_json(const PlanPiece& p) {
  return {{"source", {p.source.first, p.source.last}},
          {"target", {p.target.first, p.target.last}},
          {"card", to_json(p.card)},
          {"kind", std::string(to_string(p.kind))}};
}

json to_json(const BijectionPlan& plan, std::uint64_t depth) {
  json pieces = json::array();
  for (const PlanPiece& p : plan.pieces(depth, depth))
    pieces.push_back(to_json(p));
  json fwd = json::array();
  json bwd = json::array();
  for (std::uint64_t M = 0; M <= depth; ++M) {
    fwd.push_back(plan.forward_certificate(M));
    bwd.push_back(plan.backward_certificate(M));
  }
  return {{"case", std::string(to_string(plan.plan_case()))},
          {"head", plan.head() ? to_json(*plan.head()) : json(nullptr)},
          {"throughLevel", depth},
          {"pieces", pieces},
          {"forwardCertificates", fwd},
          {"backwardCertificates", bwd}};
}

json to_json(const SeqVerdict& v) {
  json out = {{"equivalent", v.equivalent}, {"reason", v.reason}};
  if (v.equivalent) {
    out["plan"] = to_json(*v.plan);
    return out;
  }
  out["failingCondition"] = v.failing_condition;
  out["witnessSide"] = v.witness_side == 0 ? "first" : "second";
  if (v.kappa)
    out["kappa"] = to_json(*v.kappa);
  if (v.M)
    out["M"] = *v.M;
  return out;
}

json to_json(const HorseshoeWitness& w) {
  json sample = json::array();
  for (const auto& [x, y] : w.sample)
    sample.push_back({{"xLevel", x}, {"yLevel", y}});
  json out = {{"family", w.family},
              {"neighborhood", w.neighborhood},
              {"firstIndex", w.first_index},
              {"sample", sample},
              {"tag", std::string(to_string(w.tag))}};
  if (w.component)
    out["component"] = *w.component;
  return out;
}

json to_json(const Classification& c) {
  if (c.horseshoe)
    return {{"type", "horseshoe"}, {"witness", to_json(*c.witness)}, {"groupNote", c.group_note}};
  json section = json::array();
  for (const SectionEntry& e : c.section->section)
    section.push_back({{"component", e.component}, {"level", e.level}});
  return {{"type", "tpd"},
          {"invariant", to_json(c.section->invariant)},
          {"invariantText", c.section->invariant.to_string()},
          {"section", section},
          {"groupNote", c.group_note}};
}

json to_json(const IsoVerdict& v) {
  json out = {{"isomorphic", v.verdict.equivalent},
              {"invariants", {to_json(v.invariant_a), to_json(v.invariant_b)}},
              {"evidence", to_json(v.verdict)}};
  if (!v.verdict.equivalent)
    out["failingCondition"] = v.verdict.failing_condition;
  return out;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw ParseError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

} // namespace topprod::io
