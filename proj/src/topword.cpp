#include "topprod/topword.hpp"

#include <algorithm>

#include "topprod/error.hpp"

namespace topprod {

namespace {

std::uint64_t mul_add(std::uint64_t a, std::uint64_t k, std::uint64_t b) {
  std::uint64_t ak = 0;
  std::uint64_t out = 0;
  if (__builtin_mul_overflow(a, k, &ak) || __builtin_add_overflow(ak, b, &out))
    throw std::overflow_error("affine rule overflows 64 bits");
  return out;
}

std::int64_t mul_add(std::int64_t a, std::int64_t k, std::int64_t b) {
  std::int64_t ak = 0;
  std::int64_t out = 0;
  if (__builtin_mul_overflow(a, k, &ak) || __builtin_add_overflow(ak, b, &out))
    throw std::overflow_error("exponent rule overflows 64 bits");
  return out;
}

void check_letter(const CardSeq& profile, const Letter& l) {
  if (l.exp == 0)
    throw InvalidLetter("letter " + to_string(l) + " has exponent 0");
  const Cardinal rank = profile.at(l.level);
  if (rank.is_finite() && l.gen >= rank.finite_value())
    throw InvalidLetter("letter " + to_string(l) + " is outside F(" + rank.to_string() + ") at level " +
                        std::to_string(l.level));
}

std::uint64_t tail_period(const CardSeq& s) {
  if (const auto* per = std::get_if<TailPeriodic>(&s.tail()))
    return per->values.size();
  return 1;
}

void check_rule(const CardSeq& profile, const LetterRule& r) {
  if (r.level.a == 0)
    throw InvalidSchema("level rule of an infinite block needs a >= 1");
  if (!r.exp.never_zero())
    throw InvalidSchema("exponent rule " + std::to_string(r.exp.a) + "k+" + std::to_string(r.exp.b) +
                        " vanishes for some index");
  // Levels reached from k_start on lie in the tail; one period of k covers
  // every tail residue the rule visits.
  const std::uint64_t p = profile.prefix().size();
  const std::uint64_t k_start = p == 0 ? 0 : r.escape_bound(p - 1);
  const std::uint64_t k_end = k_start + tail_period(profile);
  for (std::uint64_t k = 0; k < k_end; ++k) {
    const Letter l = r.at(k);
    check_letter(profile, l);
    if (l.level >= p && r.gen.a > 0 && profile.at(l.level).is_finite())
      throw InvalidLetter("generator rule grows without bound across levels of finite rank");
  }
}

Letter map_unit(const CardSeq& ranks, const Letter& l) {
  const auto [level, gen] = enumerate_units(ranks, l.level);
  return {level, gen, l.exp};
}

} // namespace

std::uint64_t AffineRule::at(std::uint64_t k) const { return mul_add(a, k, b); }

std::int64_t ExpRule::at(std::uint64_t k) const {
  if (k > static_cast<std::uint64_t>(INT64_MAX))
    throw std::overflow_error("index too large for exponent rule");
  return mul_add(a, static_cast<std::int64_t>(k), b);
}

bool ExpRule::never_zero() const {
  if (a == 0)
    return b != 0;
  return !(b % a == 0 && -b / a >= 0);
}

Letter LetterRule::at(std::uint64_t k) const { return {level.at(k), gen.at(k), exp.at(k)}; }

std::uint64_t LetterRule::escape_bound(std::uint64_t N) const {
  if (N < level.b)
    return 0;
  return (N - level.b) / level.a + 1;
}

LetterRule LetterRule::shifted(std::uint64_t shift) const {
  if (shift > static_cast<std::uint64_t>(INT64_MAX))
    throw std::overflow_error("shift too large");
  return {{level.a, level.at(shift)}, {gen.a, gen.at(shift)}, {exp.a, exp.at(shift)}};
}

LetterRule LetterRule::inverse() const { return {level, gen, {-exp.a, -exp.b}}; }

std::uint64_t Block::escape_bound(std::uint64_t N) const {
  std::uint64_t K = 0;
  for (const LetterRule& r : tracks)
    K = std::max(K, r.escape_bound(N));
  return K;
}

std::vector<Letter> Block::letters_up_to(std::uint64_t N) const {
  std::vector<Letter> out;
  if (kind == BlockKind::Finite) {
    for (const Letter& l : letters)
      if (l.level <= N)
        out.push_back(l);
    return out;
  }
  const std::uint64_t K = escape_bound(N);
  auto emit = [&](std::uint64_t k) {
    for (const LetterRule& r : tracks)
      if (r.level.at(k) <= N)
        out.push_back(r.at(k));
  };
  if (kind == BlockKind::Omega)
    for (std::uint64_t k = 0; k < K; ++k)
      emit(k);
  else
    for (std::uint64_t k = K; k-- > 0;)
      emit(k);
  return out;
}

TopWord::TopWord(CardSeq profile, std::vector<Block> blocks) : profile_(std::move(profile)) {
  for (Block& b : blocks) {
    if (b.kind == BlockKind::Finite) {
      if (!b.tracks.empty())
        throw InvalidSchema("finite block with letter rules");
      for (const Letter& l : b.letters)
        check_letter(profile_, l);
    } else {
      if (!b.letters.empty())
        throw InvalidSchema("infinite block with explicit letters");
      for (const LetterRule& r : b.tracks)
        check_rule(profile_, r);
    }
    if (!b.empty())
      blocks_.push_back(std::move(b));
  }
}

bool TopWord::is_finite() const {
  return std::all_of(blocks_.begin(), blocks_.end(), [](const Block& b) { return b.kind == BlockKind::Finite; });
}

CardSeq integer_profile() { return CardSeq::constant(Cardinal::fin(1)); }

ProductNormalForm project(const TopWord& w, std::uint64_t N) {
  std::vector<Letter> all;
  for (const Block& b : w.blocks()) {
    std::vector<Letter> part = b.letters_up_to(N);
    all.insert(all.end(), part.begin(), part.end());
  }
  std::map<std::uint64_t, Cardinal> ranks;
  for (std::uint64_t n = 0; n <= N && n <= 64; ++n)
    ranks.emplace(n, w.profile().at(n));
  return ProductNormalForm::from_letters(all).with_level_bound(N).with_ranks(std::move(ranks));
}

TopWord tail_retract(const TopWord& w, std::uint64_t N) {
  std::vector<Block> out;
  for (const Block& b : w.blocks()) {
    if (b.kind == BlockKind::Finite) {
      std::vector<Letter> kept;
      for (const Letter& l : b.letters)
        if (l.level > N)
          kept.push_back(l);
      out.push_back(Block::finite(std::move(kept)));
      continue;
    }
    const std::uint64_t K = b.escape_bound(N);
    std::vector<Letter> head;
    auto emit = [&](std::uint64_t k) {
      for (const LetterRule& r : b.tracks)
        if (r.level.at(k) > N)
          head.push_back(r.at(k));
    };
    std::vector<LetterRule> rest;
    for (const LetterRule& r : b.tracks)
      rest.push_back(r.shifted(K));
    if (b.kind == BlockKind::Omega) {
      for (std::uint64_t k = 0; k < K; ++k)
        emit(k);
      out.push_back(Block::finite(std::move(head)));
      out.push_back(Block::omega(std::move(rest)));
    } else {
      for (std::uint64_t k = K; k-- > 0;)
        emit(k);
      out.push_back(Block::omega_star(std::move(rest)));
      out.push_back(Block::finite(std::move(head)));
    }
  }
  return TopWord(w.profile(), std::move(out));
}

TopWord concat(const TopWord& u, const TopWord& v) {
  if (u.profile() != v.profile())
    throw ProfileMismatch("cannot concatenate words over " + u.profile().to_string() + " and " +
                          v.profile().to_string());
  std::vector<Block> blocks = u.blocks();
  blocks.insert(blocks.end(), v.blocks().begin(), v.blocks().end());
  return TopWord(u.profile(), std::move(blocks));
}

TopWord invert_word(const TopWord& w) {
  std::vector<Block> out;
  for (auto it = w.blocks().rbegin(); it != w.blocks().rend(); ++it) {
    const Block& b = *it;
    if (b.kind == BlockKind::Finite) {
      std::vector<Letter> inv;
      for (auto l = b.letters.rbegin(); l != b.letters.rend(); ++l)
        inv.push_back(l->inverse());
      out.push_back(Block::finite(std::move(inv)));
      continue;
    }
    std::vector<LetterRule> inv;
    for (auto r = b.tracks.rbegin(); r != b.tracks.rend(); ++r)
      inv.push_back(r->inverse());
    out.push_back(b.kind == BlockKind::Omega ? Block::omega_star(std::move(inv)) : Block::omega(std::move(inv)));
  }
  return TopWord(w.profile(), std::move(out));
}

bool eq_up_to(const TopWord& u, const TopWord& v, std::uint64_t N) {
  if (u.profile() != v.profile())
    throw ProfileMismatch("cannot compare words over different profiles");
  return project(u, N) == project(v, N);
}

std::optional<std::uint64_t> semidecide_neq(const TopWord& u, const TopWord& v, std::uint64_t Nmax) {
  if (u.profile() != v.profile())
    throw ProfileMismatch("cannot compare words over different profiles");
  for (std::uint64_t N = 0; N <= Nmax; ++N)
    if (project(u, N) != project(v, N))
      return N;
  return std::nullopt;
}

namespace {

struct UnitLayout {
  std::uint64_t prefix_units = 0; // units inside the prefix
  std::uint64_t prefix_levels = 0;
  std::vector<std::uint64_t> period; // ranks of one tail period
  std::uint64_t period_units = 0;
};

UnitLayout unit_layout(const CardSeq& ranks) {
  if (!ranks.all_finite())
    throw InvalidReindexing("reindexing needs finite ranks, got " + ranks.to_string());
  if (eventually_zero(ranks))
    throw InvalidReindexing("reindexing needs ranks that are not eventually zero, got " + ranks.to_string());
  UnitLayout u;
  for (const Cardinal& c : ranks.prefix())
    u.prefix_units += c.finite_value();
  u.prefix_levels = ranks.prefix().size();
  if (const auto* c = std::get_if<TailConstant>(&ranks.tail()))
    u.period = {c->value.finite_value()};
  else
    for (const Cardinal& v : std::get<TailPeriodic>(ranks.tail()).values)
      u.period.push_back(v.finite_value());
  for (std::uint64_t v : u.period)
    u.period_units += v;
  return u;
}

// (level offset within a period, generator) of the rho-th unit of a period.
std::pair<std::uint64_t, std::uint64_t> locate_in_period(const UnitLayout& u, std::uint64_t rho) {
  for (std::uint64_t off = 0; off < u.period.size(); ++off) {
    if (rho < u.period[off])
      return {off, rho};
    rho -= u.period[off];
  }
  throw std::logic_error("unit index beyond period");
}

} // namespace

std::pair<std::uint64_t, std::uint64_t> enumerate_units(const CardSeq& ranks, std::uint64_t m) {
  const UnitLayout u = unit_layout(ranks);
  if (m < u.prefix_units) {
    for (std::uint64_t n = 0;; ++n) {
      const std::uint64_t r = ranks.prefix()[n].finite_value();
      if (m < r)
        return {n, m};
      m -= r;
    }
  }
  const std::uint64_t d = m - u.prefix_units;
  const auto [off, gen] = locate_in_period(u, d % u.period_units);
  return {mul_add(d / u.period_units, u.period.size(), u.prefix_levels + off), gen};
}

TopWord reindex_iso(const TopWord& w, const CardSeq& ranks) {
  if (w.profile() != integer_profile())
    throw ProfileMismatch("reindexing starts from the all-Z profile, got " + w.profile().to_string());
  const UnitLayout u = unit_layout(ranks);
  const std::uint64_t T = u.period_units;
  const std::uint64_t P = u.period.size();

  std::vector<Block> out;
  for (const Block& b : w.blocks()) {
    if (b.kind == BlockKind::Finite) {
      std::vector<Letter> mapped;
      for (const Letter& l : b.letters)
        mapped.push_back(map_unit(ranks, l));
      out.push_back(Block::finite(std::move(mapped)));
      continue;
    }
    // Peel the indices whose letters still land in the prefix of the ranks.
    std::uint64_t K0 = 0;
    for (const LetterRule& r : b.tracks)
      if (r.level.b < u.prefix_units)
        K0 = std::max(K0, (u.prefix_units - r.level.b + r.level.a - 1) / r.level.a);
    std::vector<Letter> head;
    auto emit = [&](std::uint64_t k) {
      for (const LetterRule& r : b.tracks)
        head.push_back(map_unit(ranks, r.at(k)));
    };

    // Index k = K0 + T*k' + res: the unit index advances by a*T per step of
    // k', i.e. by a whole number of periods.
    auto split = [&](std::uint64_t res, const LetterRule& r0) {
      const LetterRule r = r0.shifted(K0);
      const std::uint64_t c = r.level.at(res) - u.prefix_units;
      const auto [off, gen] = locate_in_period(u, c % T);
      LetterRule nr;
      nr.level = {mul_add(r.level.a, P, 0), mul_add(c / T, P, u.prefix_levels + off)};
      nr.gen = {0, gen};
      nr.exp = {mul_add(r.exp.a, static_cast<std::int64_t>(T), 0), r.exp.at(res)};
      return nr;
    };
    std::vector<LetterRule> tracks;
    if (b.kind == BlockKind::Omega) {
      for (std::uint64_t res = 0; res < T; ++res)
        for (const LetterRule& r : b.tracks)
          tracks.push_back(split(res, r));
      for (std::uint64_t k = 0; k < K0; ++k)
        emit(k);
      out.push_back(Block::finite(std::move(head)));
      out.push_back(Block::omega(std::move(tracks)));
    } else {
      for (std::uint64_t res = T; res-- > 0;)
        for (const LetterRule& r : b.tracks)
          tracks.push_back(split(res, r));
      for (std::uint64_t k = K0; k-- > 0;)
        emit(k);
      out.push_back(Block::omega_star(std::move(tracks)));
      out.push_back(Block::finite(std::move(head)));
    }
  }
  return TopWord(ranks, std::move(out));
}

TopWord phi_endo(const TopWord& w) {
  if (w.profile() != integer_profile())
    throw ProfileMismatch("phi is defined on the all-Z profile, got " + w.profile().to_string());
  std::vector<Block> out;
  for (const Block& b : w.blocks()) {
    if (b.kind == BlockKind::Finite) {
      std::vector<Letter> img;
      for (const Letter& l : b.letters) {
        const Letter even{2 * l.level, 0, 1};
        const Letter odd{2 * l.level + 1, 0, 1};
        const std::uint64_t reps = static_cast<std::uint64_t>(l.exp < 0 ? -l.exp : l.exp);
        for (std::uint64_t i = 0; i < reps; ++i) {
          if (l.exp > 0) {
            img.push_back(even);
            img.push_back(odd.inverse());
          } else {
            img.push_back(odd);
            img.push_back(even.inverse());
          }
        }
      }
      out.push_back(Block::finite(std::move(img)));
      continue;
    }
    std::vector<LetterRule> img;
    for (const LetterRule& r : b.tracks) {
      if (r.exp.a != 0)
        throw InvalidSchema("phi on an infinite block needs a constant exponent per track");
      const LetterRule even{{2 * r.level.a, 2 * r.level.b}, {0, 0}, {0, 1}};
      const LetterRule odd{{2 * r.level.a, 2 * r.level.b + 1}, {0, 0}, {0, 1}};
      const std::int64_t e = r.exp.b;
      const std::uint64_t reps = static_cast<std::uint64_t>(e < 0 ? -e : e);
      for (std::uint64_t i = 0; i < reps; ++i) {
        if (e > 0) {
          img.push_back(even);
          img.push_back(odd.inverse());
        } else {
          img.push_back(odd);
          img.push_back(even.inverse());
        }
      }
    }
    out.push_back(Block{b.kind, {}, std::move(img)});
  }
  return TopWord(w.profile(), std::move(out));
}

TopWord reduce_loop(const CombinatorialLoop& loop, const PointTable& points, const CardSeq& profile) {
  auto check_sign = [](int sign) {
    if (sign != 1 && sign != -1)
      throw InvalidLetter("traversal sign must be +1 or -1, got " + std::to_string(sign));
  };
  std::vector<Block> out;
  for (const LoopBlock& lb : loop.blocks) {
    if (lb.kind == BlockKind::Finite) {
      std::vector<Letter> letters;
      for (const Excursion& e : lb.excursions) {
        auto it = points.find(e.point);
        if (it == points.end())
          throw InvalidLetter("excursion references unknown point '" + e.point + "'");
        check_sign(e.sign);
        if (e.crosses)
          letters.push_back({it->second.first, it->second.second, e.sign});
      }
      out.push_back(Block::finite(std::move(letters)));
      continue;
    }
    std::vector<LetterRule> tracks;
    for (const ExcursionTrack& t : lb.tracks) {
      check_sign(t.sign);
      if (t.crosses)
        tracks.push_back({t.level, t.gen, {0, t.sign}});
    }
    out.push_back(Block{lb.kind, {}, std::move(tracks)});
  }
  return TopWord(profile, std::move(out));
}

} // namespace topprod
