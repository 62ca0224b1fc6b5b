#include "topprod/spacemodel.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "topprod/error.hpp"

namespace topprod {

namespace {

std::uint64_t first_index_at_least(const AffineRule& r, std::uint64_t k) {
  if (r.b >= k)
    return 0;
  return (k - r.b + r.a - 1) / r.a;
}

const Component* basepoint_component(const SpaceModel& m) {
  for (const Component& c : m.components)
    if (std::find(c.members.begin(), c.members.end(), kBasepoint) != c.members.end())
      return &c;
  return nullptr;
}

void require_valid(const SpaceModel& m) {
  const auto violations = validate(m);
  if (violations.empty())
    return;
  std::string msg = "invalid model:";
  for (const Violation& v : violations)
    msg += " [" + v.field + ": " + v.rule + "] " + v.message + ";";
  throw InvalidSchema(msg);
}

} // namespace

std::vector<Violation> validate(const SpaceModel& m) {
  std::vector<Violation> out;
  auto add = [&](std::string field, std::string rule, std::string msg) {
    out.push_back({std::move(field), std::move(rule), std::move(msg)});
  };

  std::map<std::string, std::uint64_t> level_of;
  std::map<std::uint64_t, std::uint64_t> named_at;
  for (const ModelPoint& p : m.points) {
    if (p.id.empty())
      add("points", "id", "point with an empty id");
    else if (p.id == kBasepoint)
      add("points", "reserved", "'basepoint' is reserved and cannot be listed as a point");
    else if (!level_of.emplace(p.id, p.level).second)
      add("points", "unique", "duplicate point id '" + p.id + "'");
    ++named_at[p.level];
  }
  for (const auto& [level, count] : named_at) {
    const Cardinal a = m.annuli.at(level);
    if (a.is_finite() && a.finite_value() < count)
      add("annuli", "census",
          "annuli(" + std::to_string(level) + ") = " + a.to_string() + " but " + std::to_string(count) +
              " named point(s) lie at that level");
  }

  std::set<std::string> comp_ids;
  std::map<std::string, std::string> comp_of;
  for (const Component& c : m.components) {
    if (!comp_ids.insert(c.id).second)
      add("components", "unique", "duplicate component id '" + c.id + "'");
    const bool has_base = std::find(c.members.begin(), c.members.end(), kBasepoint) != c.members.end();
    if (c.members.empty())
      add("components", "partition", "component '" + c.id + "' has no members");
    for (const std::string& mem : c.members) {
      if (mem != kBasepoint && !level_of.count(mem))
        add("components", "member", "component '" + c.id + "' lists unknown point '" + mem + "'");
      if (auto [it, inserted] = comp_of.emplace(mem, c.id); !inserted)
        add("components", "partition", "point '" + mem + "' is in components '" + it->second + "' and '" + c.id + "'");
    }
    if (has_base) {
      if (c.max_level)
        add("components", "maxLevel", "the basepoint's component '" + c.id + "' meets every U_n (approachesBase)");
      continue;
    }
    if (c.max_level) {
      for (const std::string& mem : c.members)
        if (auto it = level_of.find(mem); it != level_of.end() && it->second > *c.max_level)
          add("components", "maxLevel",
              "component '" + c.id + "' has maxLevel " + std::to_string(*c.max_level) + " below member '" + mem +
                  "' at level " + std::to_string(it->second));
      continue;
    }
    const bool witnessed = std::any_of(m.pair_families.begin(), m.pair_families.end(), [&](const PairFamily& f) {
      return f.same_component && f.h && f.component == c.id;
    });
    if (!witnessed)
      add("components", "approachesBase",
          "component '" + c.id +
              "' approaches the basepoint without a same-component family of bounded connectivity");
  }
  for (const auto& [id, level] : level_of)
    if (!comp_of.count(id))
      add("components", "partition", "point '" + id + "' is in no component");

  const Component* base = basepoint_component(m);
  for (std::size_t i = 0; i < m.pair_families.size(); ++i) {
    const PairFamily& f = m.pair_families[i];
    const std::string field = "pairFamilies[" + std::to_string(i) + "]";
    if (f.x_level.a == 0 || f.y_level.a == 0)
      add(field, "increasing", "level schemas must be strictly increasing (a >= 1)");
    if (!f.component)
      continue;
    if (!f.same_component) {
      add(field, "component", "a component is named but sameComponent is false");
      continue;
    }
    auto it = std::find_if(m.components.begin(), m.components.end(),
                           [&](const Component& c) { return c.id == *f.component; });
    if (it == m.components.end()) {
      add(field, "component", "unknown component '" + *f.component + "'");
      continue;
    }
    const bool in_base = base && base->id == it->id;
    if (it->max_level)
      add(field, "converges",
          "points converging to the basepoint cannot lie in component '" + it->id + "' with finite maxLevel");
    else if (!f.h && !in_base)
      add(field, "contradiction",
          "unbounded connectivity inside component '" + it->id + "' would join it to the basepoint");
  }
  return out;
}

std::string_view to_string(WitnessTag t) {
  return t == WitnessTag::SingleComponent ? "singleComponent" : "distinctComponents";
}

HorseshoeVerdict detect_horseshoe(const SpaceModel& m) {
  require_valid(m);
  for (std::size_t i = 0; i < m.pair_families.size(); ++i) {
    const PairFamily& f = m.pair_families[i];
    if (!f.same_component || !f.h)
      continue;
    HorseshoeWitness w;
    w.family = i;
    w.neighborhood = *f.h + 1;
    w.first_index = std::max(first_index_at_least(f.x_level, w.neighborhood),
                             first_index_at_least(f.y_level, w.neighborhood));
    for (std::uint64_t n = w.first_index; n < w.first_index + 3; ++n)
      w.sample.emplace_back(f.x_level.at(n), f.y_level.at(n));
    w.tag = f.component ? WitnessTag::SingleComponent : WitnessTag::DistinctComponents;
    w.component = f.component;
    return {true, w};
  }
  return {false, std::nullopt};
}

TightSection tight_section(const SpaceModel& m) {
  if (detect_horseshoe(m).is_horseshoe)
    throw NotApplicable("a horseshoe model has no tight section");

  std::map<std::uint64_t, std::uint64_t> named_at;
  std::map<std::uint64_t, std::uint64_t> comps_at;
  std::uint64_t L = m.annuli.prefix().size();
  for (const ModelPoint& p : m.points) {
    ++named_at[p.level];
    L = std::max(L, p.level + 1);
  }
  TightSection ts;
  const Component* base = basepoint_component(m);
  for (const Component& c : m.components) {
    if (base && base->id == c.id)
      continue;
    if (!c.max_level)
      throw std::logic_error("non-horseshoe model with a component approaching the basepoint");
    ts.section.push_back({c.id, *c.max_level});
    ++comps_at[*c.max_level];
    L = std::max(L, *c.max_level + 1);
  }
  std::vector<Cardinal> prefix;
  for (std::uint64_t n = 0; n < L; ++n) {
    const Cardinal anonymous = card_minus(m.annuli.at(n), Cardinal::fin(named_at[n]));
    prefix.push_back(anonymous + Cardinal::fin(comps_at[n]));
  }
  ts.invariant = CardSeq(std::move(prefix), m.annuli.tail_from_offset(L - m.annuli.prefix().size()));
  return ts;
}

Classification classify(const SpaceModel& m) {
  Classification c;
  HorseshoeVerdict hv = detect_horseshoe(m);
  if (hv.is_horseshoe) {
    c.horseshoe = true;
    c.witness = std::move(hv.witness);
    c.group_note = "the harmonic archipelago group embeds in pi_1; pi_1 has infinitely divisible elements";
    return c;
  }
  c.section = tight_section(m);
  c.group_note = "pi_1 is the topologist product of F(lambda_n) over the invariant; no infinitely divisible elements";
  return c;
}

IsoVerdict iso_test(const SpaceModel& a, const SpaceModel& b) {
  const Classification ca = classify(a);
  const Classification cb = classify(b);
  if (ca.horseshoe || cb.horseshoe)
    throw NotApplicable(std::string("isomorphism test needs totally path disconnected type; ") +
                        (ca.horseshoe ? "first" : "second") + " model is a horseshoe");
  IsoVerdict v{seq_equiv(ca.section->invariant, cb.section->invariant), ca.section->invariant, cb.section->invariant};
  return v;
}

SpaceModel bouquet_seed(const CardSeq& seq) { return SpaceModel{seq, {}, {}, {}}; }

SpaceModel builtin_model(const std::string& name) {
  if (name == "omegaPlusOne")
    return bouquet_seed(CardSeq::constant(Cardinal::fin(1)));
  if (name == "doubledOmega")
    return bouquet_seed(CardSeq::constant(Cardinal::fin(2)));
  if (name == "sineCurve") {
    SpaceModel m;
    m.annuli = CardSeq::constant(Cardinal::aleph(1));
    m.components = {{"limitArc", {kBasepoint}, std::nullopt}, {"sineArc", {}, std::nullopt}};
    m.pair_families = {{{1, 0}, {1, 0}, true, 0, std::string("sineArc")}};
    // A component needs members; the graph arc's named point sits at level 0.
    m.points = {{"sinePeak", 0}};
    m.components[1].members = {"sinePeak"};
    return m;
  }
  if (name == "bouquetSeed")
    return bouquet_seed(CardSeq({Cardinal::aleph(0)}, TailConstant{Cardinal::fin(1)}));
  const std::string prefix = "discrete(";
  if (name.rfind(prefix, 0) == 0 && name.size() > prefix.size() + 1 && name.back() == ')') {
    const std::string digits = name.substr(prefix.size(), name.size() - prefix.size() - 1);
    if (!digits.empty() && std::all_of(digits.begin(), digits.end(), [](char ch) { return ch >= '0' && ch <= '9'; })) {
      const std::uint64_t k = std::stoull(digits);
      if (k == 0)
        throw InvalidSchema("discrete(k) needs k >= 1 (the basepoint is one of the points)");
      return bouquet_seed(CardSeq::finite({Cardinal::fin(k - 1)}));
    }
  }
  throw InvalidSchema("unknown builtin model '" + name + "'");
}

std::vector<std::string> builtin_names() {
  return {"omegaPlusOne", "sineCurve", "doubledOmega", "discrete(4)", "bouquetSeed"};
}

PointTable point_table(const SpaceModel& m) {
  PointTable t;
  std::map<std::uint64_t, std::uint64_t> next_gen;
  for (const ModelPoint& p : m.points)
    t.emplace(p.id, std::make_pair(p.level, next_gen[p.level]++));
  return t;
}

} // namespace topprod
