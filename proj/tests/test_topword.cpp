#include <random>

#include "doctest.h"
#include "generators.hpp"
#include "oracles.hpp"
#include "topprod/error.hpp"
#include "topprod/topword.hpp"

using namespace topprod;

namespace {

using PNF = ProductNormalForm;

Letter L(std::uint64_t level, std::int64_t exp = 1) { return {level, 0, exp}; }
LetterRule track(std::uint64_t a, std::uint64_t b, std::int64_t e = 1) { return {{a, b}, {0, 0}, {0, e}}; }

TopWord zw(std::vector<Block> blocks) { return TopWord(integer_profile(), std::move(blocks)); }

// a_0 a_1 a_2 ...
TopWord omega_word() { return zw({Block::omega({track(1, 0)})}); }

std::vector<oracle::Unit> units(const PNF& u) { return oracle::expand(u.letters()); }

// a_n^±1 ↦ (a_{2n} a_{2n+1}^-1)^±1 on units.
std::vector<oracle::Unit> phi_units(const std::vector<oracle::Unit>& w) {
  std::vector<oracle::Unit> out;
  for (const auto& u : w) {
    if (u.sign > 0) {
      out.push_back({2 * u.level, 0, 1});
      out.push_back({2 * u.level + 1, 0, -1});
    } else {
      out.push_back({2 * u.level + 1, 0, 1});
      out.push_back({2 * u.level, 0, -1});
    }
  }
  return oracle::naive_reduce(out);
}

CardSeq random_ranks(std::mt19937_64& rng) {
  std::vector<Cardinal> prefix(rng() % 3);
  for (auto& c : prefix)
    c = Cardinal::fin(rng() % 3);
  TailPeriodic p;
  p.values.resize(1 + rng() % 2);
  for (auto& c : p.values)
    c = Cardinal::fin(rng() % 3);
  p.values[rng() % p.values.size()] = Cardinal::fin(1 + rng() % 2);
  return CardSeq(prefix, p);
}

} // namespace

TEST_SUITE("topword") {
  TEST_CASE("project examples") {
    CHECK(project(omega_word(), 1).to_string() == "[a_0][a_1]");
    const TopWord cancel = zw({Block::finite({L(0), L(0, -1)})});
    for (std::uint64_t N = 0; N < 5; ++N)
      CHECK(project(cancel, N).is_identity());
  }

  TEST_CASE("interleaved word projects like a direct scan") {
    // a_0 (a_1 a_0) (a_2 a_3) (a_3 a_6) ...: level 0 appears twice, later
    // levels escape linearly.
    const TopWord w = zw({Block::finite({L(0)}), Block::omega({track(1, 1), track(3, 0)})});
    CHECK(project(w, 2) == PNF::from_letters(std::vector<Letter>{L(0), L(1), L(0), L(2)}));
    for (std::uint64_t N = 0; N <= 16; ++N)
      REQUIRE(units(project(w, N)) == oracle::project_scan(w, N));
  }

  TEST_CASE("random projections match a direct scan") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 300; ++i) {
      const TopWord w = gen::random_word(rng);
      for (std::uint64_t N = 0; N <= 16; ++N)
        REQUIRE(units(project(w, N)) == oracle::project_scan(w, N));
    }
  }

  TEST_CASE("projection is a homomorphism and compatible across levels") {
    std::mt19937_64 rng(8);
    for (int i = 0; i < 500; ++i) {
      const TopWord u = gen::random_word(rng);
      const TopWord v = gen::random_word(rng);
      const TopWord uv = concat(u, v);
      for (std::uint64_t N = 0; N <= 16; ++N) {
        const PNF pN = project(uv, N);
        REQUIRE(pN == multiply(project(u, N), project(v, N)));
        for (std::uint64_t n = 0; n <= N; ++n)
          REQUIRE(retract(pN, n) == project(uv, n));
      }
    }
  }

  TEST_CASE("tail_retract examples") {
    const TopWord t = tail_retract(omega_word(), 1);
    for (std::uint64_t N = 0; N < 10; ++N) {
      std::vector<Letter> expect;
      for (std::uint64_t l = 2; l <= N; ++l)
        expect.push_back(L(l));
      REQUIRE(project(t, N) == PNF::from_letters(expect));
    }
    const TopWord low = tail_retract(zw({Block::finite({L(0), L(0, 3)})}), 0);
    CHECK(low.blocks().empty());
  }

  TEST_CASE("tail_retract deletes exactly the low letters") {
    std::mt19937_64 rng(9);
    for (int i = 0; i < 500; ++i) {
      const TopWord w = gen::random_word(rng);
      const std::uint64_t N = rng() % 8;
      const TopWord t = tail_retract(w, N);
      REQUIRE(tail_retract(t, N) == t);
      for (std::uint64_t M = 0; M <= 16; ++M) {
        std::vector<Letter> high;
        for (const Letter& l : oracle::raw_scan(w, M))
          if (l.level > N)
            high.push_back(l);
        REQUIRE(units(project(t, M)) == oracle::naive_reduce(oracle::expand(high)));
      }
    }
  }

  TEST_CASE("concat and invert") {
    const TopWord a0 = zw({Block::finite({L(0)})});
    CHECK(concat(TopWord(integer_profile(), {}), a0) == a0);
    const TopWord c = concat(a0, zw({Block::finite({L(0, -1)})}));
    for (std::uint64_t N = 0; N < 5; ++N)
      CHECK(project(c, N).is_identity());
    const TopWord other(CardSeq::constant(Cardinal::fin(2)), {Block::finite({L(0)})});
    CHECK_THROWS_AS(concat(a0, other), ProfileMismatch);

    const TopWord inv = invert_word(omega_word());
    REQUIRE(inv.blocks().size() == 1);
    CHECK(inv.blocks()[0].kind == BlockKind::OmegaStar);
    CHECK(inv.blocks()[0].tracks[0].exp == ExpRule{0, -1});

    std::mt19937_64 rng(10);
    for (int i = 0; i < 200; ++i) {
      const TopWord w = gen::random_word(rng);
      for (std::uint64_t N = 0; N <= 10; ++N)
        REQUIRE(project(invert_word(w), N) == invert(project(w, N)));
    }
  }

  TEST_CASE("eq_up_to and semidecide_neq examples") {
    const TopWord u = omega_word();
    CHECK(eq_up_to(u, u, 32));
    const TopWord split = zw({Block::finite({L(0)}), Block::omega({track(1, 1)})});
    for (std::uint64_t N = 0; N <= 32; ++N)
      CHECK(eq_up_to(u, split, N));
    const TopWord swapped = zw({Block::finite({L(1), L(0)}), Block::omega({track(1, 2)})});
    CHECK(eq_up_to(u, swapped, 0));
    CHECK_FALSE(eq_up_to(u, swapped, 1));
    CHECK(semidecide_neq(u, swapped, 32) == 1u);
    CHECK_FALSE(semidecide_neq(u, split, 32).has_value());
    CHECK(semidecide_neq(zw({Block::finite({L(0)})}), TopWord(integer_profile(), {}), 32) == 0u);
  }

  TEST_CASE("a deleted letter is found at its level") {
    const TopWord u = omega_word();
    for (std::uint64_t k = 0; k <= 20; ++k) {
      std::vector<Letter> head;
      for (std::uint64_t l = 0; l < k; ++l)
        head.push_back(L(l));
      const TopWord v = zw({Block::finite(head), Block::omega({track(1, k + 1)})});
      CHECK(semidecide_neq(u, v, 32) == k);
    }
  }

  TEST_CASE("invalid schemas are rejected") {
    CHECK_THROWS_AS(zw({Block::omega({track(0, 1)})}), InvalidSchema);
    CHECK_THROWS_AS(zw({Block::omega({{{1, 0}, {0, 0}, {-1, 2}}})}), InvalidSchema);
    CHECK_THROWS_AS(zw({Block::finite({{0, 1, 1}})}), InvalidLetter);
    CHECK_THROWS_AS(zw({Block::finite({L(0, 0)})}), InvalidLetter);
    CHECK_THROWS_AS(zw({Block::omega({{{1, 0}, {1, 0}, {0, 1}}})}), InvalidLetter);
    CHECK_NOTHROW(TopWord(CardSeq::constant(Cardinal::aleph(0)), {Block::omega({{{1, 0}, {1, 0}, {0, 1}}})}));
  }

  TEST_CASE("escape bounds are tight") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 300; ++i) {
      const Block b = gen::random_block(rng, false);
      if (b.kind == BlockKind::Finite)
        continue;
      const std::uint64_t N = rng() % 33;
      const std::uint64_t K = b.escape_bound(N);
      for (std::uint64_t k = K; k <= K + 100; ++k)
        for (const auto& t : b.tracks)
          REQUIRE(t.level.at(k) > N);
      if (K > 0) {
        bool some_low = false;
        for (const auto& t : b.tracks)
          some_low = some_low || t.level.at(K - 1) <= N;
        REQUIRE(some_low);
      }
    }
  }

  TEST_CASE("reindex examples and errors") {
    const TopWord w = zw({Block::finite({L(3), L(1, -2)}), Block::omega({track(2, 1)})});
    const TopWord same = reindex_iso(w, integer_profile());
    for (std::uint64_t N = 0; N <= 16; ++N)
      CHECK(project(same, N) == project(w, N));
    CHECK_THROWS_AS(reindex_iso(w, CardSeq::constant(Cardinal::aleph(0))), InvalidReindexing);
    CHECK_THROWS_AS(reindex_iso(w, CardSeq::finite({Cardinal::fin(3)})), InvalidReindexing);
    const TopWord two(CardSeq::constant(Cardinal::fin(2)), {Block::finite({L(0)})});
    CHECK_THROWS_AS(reindex_iso(two, CardSeq::constant(Cardinal::fin(2))), ProfileMismatch);

    // r = (2, 2, ...): a_0 a_1 a_2 a_3 ... becomes a_0 a_0.1 a_1 a_1.1 ...
    const TopWord r = reindex_iso(omega_word(), CardSeq::constant(Cardinal::fin(2)));
    CHECK(project(r, 1).to_string() == "[a_0 a_0.1][a_1 a_1.1]");
  }

  TEST_CASE("enumerate_units matches a level by level scan") {
    std::mt19937_64 rng(12);
    for (int i = 0; i < 100; ++i) {
      const CardSeq ranks = random_ranks(rng);
      for (std::uint64_t m = 0; m < 60; ++m)
        REQUIRE(enumerate_units(ranks, m) == oracle::unit_scan(ranks, m));
    }
  }

  TEST_CASE("reindexing relabels letters and respects products") {
    std::mt19937_64 rng(13);
    for (int i = 0; i < 200; ++i) {
      const CardSeq ranks = random_ranks(rng);
      const TopWord u = gen::random_word(rng);
      const TopWord v = gen::random_word(rng);
      const TopWord ru = reindex_iso(u, ranks);
      CHECK(ru.profile() == ranks);
      for (std::uint64_t N = 0; N <= 8; ++N) {
        const Cardinal units_below = ranks.partial_sum(N);
        std::vector<Letter> expect;
        if (units_below.finite_value() > 0)
          for (const Letter& l : oracle::raw_scan(u, units_below.finite_value() - 1)) {
            const auto [level, gen] = oracle::unit_scan(ranks, l.level);
            expect.push_back({level, gen, l.exp});
          }
        REQUIRE(units(project(ru, N)) == oracle::naive_reduce(oracle::expand(expect)));
        REQUIRE(eq_up_to(reindex_iso(concat(u, v), ranks), concat(ru, reindex_iso(v, ranks)), N));
      }
    }
  }

  TEST_CASE("phi examples and errors") {
    const TopWord a0 = zw({Block::finite({L(0)})});
    CHECK(project(phi_endo(a0), 8).to_string() == "[a_0][a_1^-1]");
    const TopWord a0a1 = zw({Block::finite({L(0), L(1)})});
    CHECK(project(phi_endo(a0a1), 8) ==
          PNF::from_letters(std::vector<Letter>{L(0), L(1, -1), L(2), L(3, -1)}));
    const TopWord two(CardSeq::constant(Cardinal::fin(2)), {Block::finite({L(0)})});
    CHECK_THROWS_AS(phi_endo(two), ProfileMismatch);
    CHECK_THROWS_AS(phi_endo(zw({Block::omega({{{1, 0}, {0, 0}, {1, 1}}})})), InvalidSchema);
  }

  TEST_CASE("phi commutes with projection") {
    std::mt19937_64 rng(14);
    for (int i = 0; i < 300; ++i) {
      const TopWord w = gen::random_word(rng, true);
      const TopWord p = phi_endo(w);
      for (std::uint64_t N = 0; N <= 8; ++N)
        REQUIRE(units(project(p, 2 * N + 1)) == phi_units(units(project(w, N))));
    }
  }

  TEST_CASE("reduce_loop examples") {
    const PointTable pts{{"z", {0, 0}}, {"y", {1, 0}}};
    CombinatorialLoop quiet;
    quiet.blocks.push_back({BlockKind::Finite, {{"z", false, 1}, {"y", false, -1}}, {}});
    CHECK(reduce_loop(quiet, pts, integer_profile()).blocks().empty());

    CombinatorialLoop one;
    one.blocks.push_back({BlockKind::Finite, {{"z", true, 1}}, {}});
    CHECK(reduce_loop(one, pts, integer_profile()) == zw({Block::finite({L(0)})}));

    CombinatorialLoop unknown;
    unknown.blocks.push_back({BlockKind::Finite, {{"w", true, 1}}, {}});
    CHECK_THROWS_AS(reduce_loop(unknown, pts, integer_profile()), InvalidLetter);
  }

  TEST_CASE("reduce_loop keeps exactly the crossing excursions") {
    // Excursion 2k crosses at level 2k, excursion 2k+1 stays on one side at
    // level 2k+1.
    CombinatorialLoop loop;
    LoopBlock b{BlockKind::Omega, {}, {}};
    b.tracks.push_back({{2, 0}, {0, 0}, true, 1});
    b.tracks.push_back({{2, 1}, {0, 0}, false, 1});
    loop.blocks.push_back(b);
    const TopWord w = reduce_loop(loop, {}, integer_profile());
    for (std::uint64_t N = 0; N < 100; ++N) {
      std::vector<Letter> kept;
      for (std::uint64_t pos = 0; pos < 100; ++pos) {
        const std::uint64_t k = pos / 2;
        const bool crosses = pos % 2 == 0;
        const std::uint64_t level = 2 * k + pos % 2;
        if (crosses && level <= N)
          kept.push_back(L(level));
      }
      REQUIRE(project(w, N) == PNF::from_letters(kept));
    }
  }
}
