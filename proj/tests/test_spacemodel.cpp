#include <algorithm>
#include <random>

#include "doctest.h"
#include "generators.hpp"
#include "oracles.hpp"
#include "topprod/error.hpp"
#include "topprod/spacemodel.hpp"

using namespace topprod;

namespace {

Cardinal F(std::uint64_t k) { return Cardinal::fin(k); }

bool has_rule(const std::vector<Violation>& vs, const std::string& rule) {
  return std::any_of(vs.begin(), vs.end(), [&](const Violation& v) { return v.rule == rule; });
}

// Moves every level n to the index of the group containing it.
SpaceModel regroup_levels(const SpaceModel& m, const GroupingSchema& g) {
  auto group_of = [&](std::uint64_t n) {
    std::uint64_t start = 0;
    for (std::uint64_t b = 0;; ++b) {
      const std::uint64_t len = b < g.head.size() ? g.head[b] : g.repeat[(b - g.head.size()) % g.repeat.size()];
      if (n < start + len)
        return b;
      start += len;
    }
  };
  SpaceModel out = m;
  out.annuli = regroup(m.annuli, g);
  for (auto& p : out.points)
    p.level = group_of(p.level);
  for (auto& c : out.components)
    if (c.max_level)
      c.max_level = group_of(*c.max_level);
  return out;
}

} // namespace

TEST_SUITE("spacemodel") {
  TEST_CASE("builtin models are valid") {
    for (const auto& name : builtin_names()) {
      CAPTURE(name);
      CHECK(validate(builtin_model(name)).empty());
    }
    CHECK_THROWS_AS(builtin_model("nope"), InvalidSchema);
    CHECK_THROWS_AS(builtin_model("discrete(0)"), InvalidSchema);
    const SpaceModel sine = builtin_model("sineCurve");
    CHECK(sine.components.size() == 2);
    REQUIRE(sine.pair_families.size() == 1);
    CHECK(sine.pair_families[0].same_component);
    CHECK(sine.pair_families[0].h == 0u);
    const SpaceModel om = builtin_model("omegaPlusOne");
    CHECK(om.pair_families.empty());
    CHECK(tight_section(builtin_model("discrete(4)")).invariant == CardSeq::finite({F(3)}));
  }

  TEST_CASE("validate examples") {
    CHECK(validate(builtin_model("omegaPlusOne")).empty());

    SpaceModel census{CardSeq::finite({F(1), F(1), F(1)}), {{"q", 3}}, {{"c", {"q"}, 3}}, {}};
    CHECK(has_rule(validate(census), "census"));

    SpaceModel contra{CardSeq::constant(F(1)), {{"q", 1}}, {{"c", {"q"}, std::nullopt}}, {}};
    contra.pair_families.push_back({{1, 0}, {1, 0}, true, std::nullopt, std::string("c")});
    CHECK(has_rule(validate(contra), "contradiction"));

    SpaceModel dup{CardSeq::constant(F(2)), {{"q", 1}, {"q", 1}}, {{"c", {"q"}, 1}}, {}};
    CHECK(has_rule(validate(dup), "unique"));

    SpaceModel orphan{CardSeq::constant(F(2)), {{"q", 1}}, {}, {}};
    CHECK(has_rule(validate(orphan), "partition"));

    SpaceModel low{CardSeq::constant(F(2)), {{"q", 4}}, {{"c", {"q"}, 2}}, {}};
    CHECK(has_rule(validate(low), "maxLevel"));

    SpaceModel loose{CardSeq::constant(F(2)), {{"q", 1}}, {{"c", {"q"}, std::nullopt}}, {}};
    CHECK(has_rule(validate(loose), "approachesBase"));
    CHECK_THROWS_AS(detect_horseshoe(loose), InvalidSchema);
  }

  TEST_CASE("detect_horseshoe examples") {
    const auto sine = detect_horseshoe(builtin_model("sineCurve"));
    REQUIRE(sine.is_horseshoe);
    CHECK(sine.witness->neighborhood == 1);
    CHECK(sine.witness->tag == WitnessTag::SingleComponent);
    for (const auto& [x, y] : sine.witness->sample)
      CHECK((x >= 1 && y >= 1));
    CHECK_FALSE(detect_horseshoe(builtin_model("omegaPlusOne")).is_horseshoe);

    SpaceModel apart = builtin_model("omegaPlusOne");
    apart.pair_families.push_back({{1, 0}, {1, 1}, false, 0, std::nullopt});
    CHECK_FALSE(detect_horseshoe(apart).is_horseshoe);

    SpaceModel joined = builtin_model("omegaPlusOne");
    joined.pair_families.push_back({{2, 3}, {1, 0}, true, 4, std::nullopt});
    const auto w = detect_horseshoe(joined);
    REQUIRE(w.is_horseshoe);
    CHECK(w.witness->tag == WitnessTag::DistinctComponents);
    CHECK(w.witness->first_index == 5);
  }

  TEST_CASE("horseshoe verdict is monotone under adding bounded families") {
    std::mt19937_64 rng(15);
    for (int i = 0; i < 100; ++i) {
      SpaceModel m = rng() % 2 ? builtin_model("sineCurve") : gen::random_tpd_model(rng);
      const bool before = detect_horseshoe(m).is_horseshoe;
      m.pair_families.push_back({{1 + rng() % 2, rng() % 3}, {1, rng() % 3}, true, rng() % 4, std::nullopt});
      CHECK((!before || detect_horseshoe(m).is_horseshoe));
      CHECK(detect_horseshoe(m).is_horseshoe);
    }
  }

  TEST_CASE("tight_section examples") {
    CHECK(tight_section(builtin_model("omegaPlusOne")).invariant == CardSeq::constant(F(1)));
    SpaceModel three{CardSeq::finite({F(0), F(0), F(2), F(0), F(0), F(1)}),
                     {{"x", 2}, {"y", 2}, {"z", 5}},
                     {{"cx", {"x"}, 2}, {"cy", {"y"}, 2}, {"cz", {"z"}, 5}},
                     {}};
    const TightSection ts = tight_section(three);
    CHECK(ts.invariant == CardSeq::finite({F(0), F(0), F(2), F(0), F(0), F(1)}));
    CHECK(ts.section == std::vector<SectionEntry>{{"cx", 2}, {"cy", 2}, {"cz", 5}});
    CHECK_THROWS_AS(tight_section(builtin_model("sineCurve")), NotApplicable);
  }

  TEST_CASE("a component spread over levels counts once at its maxLevel") {
    SpaceModel m{CardSeq::finite({F(2), F(1), F(1)}), {{"u", 0}, {"v", 1}, {"w", 2}}, {{"c", {"u", "v", "w"}, 4}}, {}};
    CHECK(tight_section(m).invariant == CardSeq::finite({F(1), F(0), F(0), F(0), F(1)}));
  }

  TEST_CASE("tight-section invariant equals the component census") {
    std::mt19937_64 rng(16);
    for (int i = 0; i < 100; ++i) {
      const SpaceModel m = gen::random_tpd_model(rng);
      REQUIRE(validate(m).empty());
      const CardSeq inv = tight_section(m).invariant;
      const auto census = oracle::component_census(m, 20);
      for (std::uint64_t n = 0; n < 20; ++n) {
        const auto it = census.find(n);
        REQUIRE(inv.at(n) == F(it == census.end() ? 0 : it->second));
      }
    }
  }

  TEST_CASE("redundant points leave the invariant unchanged") {
    std::mt19937_64 rng(17);
    int done = 0;
    while (done < 100) {
      SpaceModel m = gen::random_tpd_model(rng);
      std::vector<std::size_t> targets;
      for (std::size_t c = 0; c < m.components.size(); ++c)
        if (m.components[c].max_level)
          targets.push_back(c);
      if (targets.empty())
        continue;
      ++done;
      const CardSeq before = tight_section(m).invariant;
      Component& c = m.components[targets[rng() % targets.size()]];
      const std::uint64_t level = rng() % (*c.max_level + 1);
      m.annuli = m.annuli.with_value(level, m.annuli.at(level) + F(1));
      m.points.push_back({"extra", level});
      c.members.push_back("extra");
      REQUIRE(validate(m).empty());
      REQUIRE(tight_section(m).invariant == before);
    }
  }

  TEST_CASE("classify examples") {
    const Classification sine = classify(builtin_model("sineCurve"));
    CHECK(sine.horseshoe);
    CHECK_FALSE(sine.section.has_value());
    const Classification om = classify(builtin_model("omegaPlusOne"));
    CHECK_FALSE(om.horseshoe);
    CHECK(om.section->invariant == CardSeq::constant(F(1)));
    CHECK(classify(builtin_model("doubledOmega")).section->invariant == CardSeq::constant(F(2)));
  }

  TEST_CASE("iso_test examples") {
    const auto a = iso_test(builtin_model("omegaPlusOne"), builtin_model("doubledOmega"));
    CHECK(a.verdict.equivalent);
    const auto b = iso_test(builtin_model("omegaPlusOne"), builtin_model("discrete(4)"));
    CHECK_FALSE(b.verdict.equivalent);
    CHECK(b.verdict.failing_condition == 1);
    const auto c = iso_test(builtin_model("bouquetSeed"), builtin_model("omegaPlusOne"));
    CHECK_FALSE(c.verdict.equivalent);
    CHECK(c.verdict.failing_condition == 3);
    CHECK_FALSE(oracle::scan_reaching(CardSeq::constant(F(1)), Cardinal::aleph(0), 1000).has_value());
    CHECK_THROWS_AS(iso_test(builtin_model("sineCurve"), builtin_model("omegaPlusOne")), NotApplicable);
  }

  TEST_CASE("iso_test is an equivalence relation on a sample") {
    std::mt19937_64 rng(18);
    std::vector<SpaceModel> ms;
    for (int i = 0; i < 25; ++i)
      ms.push_back(gen::random_tpd_model(rng));
    for (const auto& name : {"omegaPlusOne", "doubledOmega", "discrete(4)", "bouquetSeed"})
      ms.push_back(builtin_model(name));
    const std::size_t n = ms.size();
    std::vector<std::vector<bool>> r(n, std::vector<bool>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        r[i][j] = iso_test(ms[i], ms[j]).verdict.equivalent;
    for (std::size_t i = 0; i < n; ++i) {
      REQUIRE(r[i][i]);
      for (std::size_t j = 0; j < n; ++j) {
        REQUIRE(r[i][j] == r[j][i]);
        for (std::size_t k = 0; k < n; ++k)
          REQUIRE((!(r[i][j] && r[j][k]) || r[i][k]));
      }
    }
  }

  TEST_CASE("collapsing levels keeps the isomorphism type") {
    std::mt19937_64 rng(19);
    for (int i = 0; i < 100; ++i) {
      const SpaceModel m = gen::random_tpd_model(rng);
      GroupingSchema g;
      g.head.resize(rng() % 3);
      for (auto& h : g.head)
        h = 1 + rng() % 3;
      g.repeat = {1 + rng() % 3};
      const SpaceModel r = regroup_levels(m, g);
      REQUIRE(validate(r).empty());
      CHECK(tight_section(r).invariant == regroup(tight_section(m).invariant, g));
      CHECK(iso_test(m, r).verdict.equivalent);
    }
  }

  TEST_CASE("point_table numbers points per level") {
    SpaceModel m{CardSeq::constant(F(3)), {{"a", 0}, {"b", 0}, {"c", 1}}, {{"k", {"a", "b", "c"}, 1}}, {}};
    const PointTable t = point_table(m);
    CHECK(t.at("a") == std::make_pair<std::uint64_t, std::uint64_t>(0, 0));
    CHECK(t.at("b") == std::make_pair<std::uint64_t, std::uint64_t>(0, 1));
    CHECK(t.at("c") == std::make_pair<std::uint64_t, std::uint64_t>(1, 0));
  }
}
