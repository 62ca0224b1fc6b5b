#include "topprod/equivalence.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include "topprod/error.hpp"

namespace topprod {

namespace {

constexpr std::size_t kStaircaseStepCap = std::size_t{1} << 26;

// Least infinite cardinal that s is eventually below, if representable.
std::optional<Cardinal> eventual_threshold(const CardSeq& s) {
  if (std::holds_alternative<TailIncreasingAlephs>(s.tail()))
    return Cardinal::aleph_omega();
  const Cardinal tau = s.tail_sup();
  if (tau.is_finite())
    return Cardinal::aleph(0);
  return tau.next_infinite();
}

std::optional<Cardinal> successor(Cardinal c) {
  if (c.is_finite())
    return Cardinal::fin(c.finite_value() + 1);
  return c.next_infinite();
}

// Every partial sum of s is bounded by some partial sum of t.
bool dominated(const CardSeq::Total& s, const CardSeq::Total& t) {
  if (t.value != s.value)
    return t.value > s.value;
  return t.attained || !s.attained;
}

std::uint64_t next_nonzero(const CardSeq& s, std::uint64_t from) {
  std::uint64_t guard = std::max<std::uint64_t>(from, s.prefix().size()) + 1;
  if (const auto* per = std::get_if<TailPeriodic>(&s.tail()))
    guard += per->values.size();
  for (std::uint64_t n = from; n <= guard; ++n)
    if (!s.at(n).is_zero())
      return n;
  throw std::logic_error("staircase ran out of nonzero levels on " + s.to_string());
}

std::optional<std::uint64_t> last_index_at_least(const CardSeq& s, Cardinal theta) {
  const auto& pre = s.prefix();
  for (std::uint64_t n = pre.size(); n-- > 0;)
    if (pre[n] >= theta)
      return n;
  return std::nullopt;
}

bool touches_source(const PlanPiece& p, std::uint64_t M) { return p.source.first <= M; }
bool touches_target(const PlanPiece& p, std::uint64_t M) { return p.target.first <= M; }

} // namespace

std::string_view to_string(PlanCase c) {
  switch (c) {
    case PlanCase::EventuallyZero: return "eventuallyZero";
    case PlanCase::EventuallyFiniteAllFinite: return "eventuallyFiniteAllFinite";
    case PlanCase::EventuallyFiniteInfinitePrefix: return "eventuallyFiniteInfinitePrefix";
    case PlanCase::SuccessorStable: return "successorStable";
    case PlanCase::LimitBackAndForth: return "limitBackAndForth";
  }
  return "";
}

std::string_view to_string(PieceKind k) {
  switch (k) {
    case PieceKind::Match: return "match";
    case PieceKind::Forward: return "forward";
    case PieceKind::Backward: return "backward";
  }
  return "";
}

BijectionPlan::BijectionPlan(CardSeq source, CardSeq target, PlanCase c, std::optional<PlanPiece> head,
                             bool has_staircase)
    : s_(std::move(source)), t_(std::move(target)), case_(c), head_(std::move(head)), has_staircase_(has_staircase) {}

std::vector<PlanPiece> BijectionPlan::pieces(std::uint64_t src_bound, std::uint64_t tgt_bound) const {
  std::vector<PlanPiece> out;
  if (head_)
    out.push_back(*head_);
  if (!has_staircase_)
    return out;

  std::uint64_t i = next_nonzero(s_, head_ ? head_->source.last + 1 : 0);
  std::uint64_t j = next_nonzero(t_, head_ ? head_->target.last + 1 : 0);
  Cardinal rs = s_.at(i);
  Cardinal rt = t_.at(j);
  std::size_t steps = 0;
  while (i <= src_bound || j <= tgt_bound) {
    if (++steps > kStaircaseStepCap)
      throw std::logic_error("staircase did not close the requested levels");
    if (rs == rt) {
      out.push_back({{i, i}, {j, j}, rs, PieceKind::Match});
      i = next_nonzero(s_, i + 1);
      j = next_nonzero(t_, j + 1);
      rs = s_.at(i);
      rt = t_.at(j);
    } else if (rs < rt) {
      out.push_back({{i, i}, {j, j}, rs, PieceKind::Forward});
      rt = card_minus(rt, rs);
      i = next_nonzero(s_, i + 1);
      rs = s_.at(i);
    } else {
      out.push_back({{i, i}, {j, j}, rt, PieceKind::Backward});
      rs = card_minus(rs, rt);
      j = next_nonzero(t_, j + 1);
      rt = t_.at(j);
    }
  }
  return out;
}

std::uint64_t BijectionPlan::forward_certificate(std::uint64_t M) const {
  std::uint64_t cert = 0;
  for (const PlanPiece& p : pieces(M, 0))
    if (touches_source(p, M))
      cert = std::max(cert, p.target.last);
  return cert;
}

std::uint64_t BijectionPlan::backward_certificate(std::uint64_t M) const {
  std::uint64_t cert = 0;
  for (const PlanPiece& p : pieces(0, M))
    if (touches_target(p, M))
      cert = std::max(cert, p.source.last);
  return cert;
}

std::vector<Cardinal> kappa_test_set(const CardSeq& s, const CardSeq& t) {
  std::set<Cardinal> out{Cardinal::aleph(0), Cardinal::aleph_omega()};
  auto add = [&](Cardinal c) {
    if (c.is_finite())
      return;
    out.insert(c);
    if (auto next = c.next_infinite())
      out.insert(*next);
  };
  for (const CardSeq* seq : {&s, &t}) {
    for (const Cardinal& c : seq->prefix())
      add(c);
    std::visit(
        [&](const auto& tail) {
          using T = std::decay_t<decltype(tail)>;
          if constexpr (std::is_same_v<T, TailConstant>)
            add(tail.value);
          else if constexpr (std::is_same_v<T, TailPeriodic>)
            for (const Cardinal& c : tail.values)
              add(c);
          else if constexpr (std::is_same_v<T, TailIncreasingAlephs>)
            add(Cardinal::aleph(tail.b));
        },
        seq->tail());
  }
  return {out.begin(), out.end()};
}

SeqVerdict seq_equiv(const CardSeq& s, const CardSeq& t) {
  SeqVerdict v;
  const bool ez_s = eventually_zero(s);
  const bool ez_t = eventually_zero(t);
  if (ez_s != ez_t) {
    v.failing_condition = 1;
    v.witness_side = ez_s ? 0 : 1;
    v.reason = std::string(ez_s ? "first" : "second") + " sequence is eventually zero, the other is not";
    return v;
  }

  for (const Cardinal& kappa : kappa_test_set(s, t)) {
    const bool below_s = eventually_below(s, kappa);
    if (below_s != eventually_below(t, kappa)) {
      v.failing_condition = 2;
      v.kappa = kappa;
      v.witness_side = below_s ? 0 : 1;
      v.reason = std::string(below_s ? "first" : "second") + " sequence is eventually below " + kappa.to_string() +
                 ", the other is not";
      return v;
    }
  }

  const CardSeq::Total tot_s = s.total();
  const CardSeq::Total tot_t = t.total();
  for (int side = 0; side < 2; ++side) {
    const CardSeq& a = side == 0 ? s : t;
    const CardSeq::Total& ta = side == 0 ? tot_s : tot_t;
    const CardSeq::Total& tb = side == 0 ? tot_t : tot_s;
    if (dominated(ta, tb))
      continue;
    std::optional<Cardinal> target = tb.attained ? successor(tb.value) : std::optional<Cardinal>(tb.value);
    const auto M = target ? first_index_reaching(a, *target) : std::nullopt;
    if (!M)
      throw std::logic_error("condition 3 failed without a witness index");
    v.failing_condition = 3;
    v.M = M;
    v.witness_side = side;
    v.reason = "partial sum up to index " + std::to_string(*M) + " of the " + (side == 0 ? "first" : "second") +
               " sequence (" + a.partial_sum(*M).to_string() + ") exceeds every partial sum of the other";
    return v;
  }

  PlanCase pc;
  std::optional<Cardinal> theta;
  if (ez_s) {
    pc = PlanCase::EventuallyZero;
    theta = Cardinal::fin(1);
  } else {
    theta = eventual_threshold(s);
    if (theta == Cardinal::aleph(0))
      pc = s.all_finite() ? PlanCase::EventuallyFiniteAllFinite : PlanCase::EventuallyFiniteInfinitePrefix;
    else if (std::holds_alternative<TailIncreasingAlephs>(s.tail()))
      pc = PlanCase::LimitBackAndForth;
    else
      pc = PlanCase::SuccessorStable;
  }

  std::optional<PlanPiece> head;
  if (theta) {
    const auto hs = last_index_at_least(s, *theta);
    const auto ht = last_index_at_least(t, *theta);
    if (hs.has_value() != ht.has_value())
      throw std::logic_error("head pieces exist on one side only");
    if (hs)
      head = PlanPiece{{0, *hs}, {0, *ht}, s.partial_sum(*hs), PieceKind::Match};
  }
  v.equivalent = true;
  v.reason = "conditions 1-3 hold";
  v.plan = BijectionPlan(s, t, pc, head, !ez_s);
  return v;
}

AuditResult audit_plan(const BijectionPlan& plan, std::uint64_t H) {
  AuditResult res;
  auto fail = [&](std::string msg) {
    res.ok = false;
    res.problems.push_back(std::move(msg));
  };
  const CardSeq& s = plan.source();
  const CardSeq& t = plan.target();

  std::vector<PlanPiece> ps;
  try {
    ps = plan.pieces(H, H);
  } catch (const std::exception& e) {
    fail(std::string("piece generation failed: ") + e.what());
    return res;
  }

  std::map<std::uint64_t, Cardinal> rem_s;
  std::map<std::uint64_t, Cardinal> rem_t;
  auto rem = [](std::map<std::uint64_t, Cardinal>& m, const CardSeq& seq, std::uint64_t n) -> Cardinal& {
    return m.try_emplace(n, seq.at(n)).first->second;
  };

  for (std::size_t k = 0; k < ps.size(); ++k) {
    const PlanPiece& p = ps[k];
    const std::string tag = "piece " + std::to_string(k);
    const bool multi = p.source.first != p.source.last || p.target.first != p.target.last;
    if (multi || (k == 0 && plan.head())) {
      if (p.kind != PieceKind::Match) {
        fail(tag + ": multi-level piece is not a match");
        continue;
      }
      Cardinal sum_s;
      Cardinal sum_t;
      for (std::uint64_t n = p.source.first; n <= p.source.last; ++n) {
        Cardinal& r = rem(rem_s, s, n);
        if (r != s.at(n))
          fail(tag + ": source level " + std::to_string(n) + " already partly used");
        sum_s += r;
        r = Cardinal::fin(0);
      }
      for (std::uint64_t n = p.target.first; n <= p.target.last; ++n) {
        Cardinal& r = rem(rem_t, t, n);
        if (r != t.at(n))
          fail(tag + ": target level " + std::to_string(n) + " already partly used");
        sum_t += r;
        r = Cardinal::fin(0);
      }
      if (sum_s != p.card || sum_t != p.card)
        fail(tag + ": block sums " + sum_s.to_string() + " / " + sum_t.to_string() + " differ from " +
             p.card.to_string());
      continue;
    }

    Cardinal& rs = rem(rem_s, s, p.source.first);
    Cardinal& rt = rem(rem_t, t, p.target.first);
    if (rs.is_zero() || rt.is_zero()) {
      fail(tag + ": uses an exhausted level");
      continue;
    }
    switch (p.kind) {
      case PieceKind::Match:
        if (rs != p.card || rt != p.card)
          fail(tag + ": match of unequal remainders " + rs.to_string() + " / " + rt.to_string());
        rs = rt = Cardinal::fin(0);
        break;
      case PieceKind::Forward:
        if (rs != p.card || !(rs < rt))
          fail(tag + ": forward piece does not fit " + rs.to_string() + " into " + rt.to_string());
        else
          rt = card_minus(rt, rs);
        rs = Cardinal::fin(0);
        break;
      case PieceKind::Backward:
        if (rt != p.card || !(rt < rs))
          fail(tag + ": backward piece does not fit " + rt.to_string() + " into " + rs.to_string());
        else
          rs = card_minus(rs, rt);
        rt = Cardinal::fin(0);
        break;
    }
  }

  for (std::uint64_t n = 0; n <= H; ++n) {
    if (!rem(rem_s, s, n).is_zero())
      fail("source level " + std::to_string(n) + " not used up (" + rem_s.at(n).to_string() + " left)");
    if (!rem(rem_t, t, n).is_zero())
      fail("target level " + std::to_string(n) + " not used up (" + rem_t.at(n).to_string() + " left)");
  }

  for (std::uint64_t M = 0; M <= H; ++M) {
    const std::uint64_t fwd = plan.forward_certificate(M);
    const std::uint64_t bwd = plan.backward_certificate(M);
    for (const PlanPiece& p : ps) {
      if (touches_source(p, M) && p.target.last > fwd)
        fail("forward certificate " + std::to_string(fwd) + " for M=" + std::to_string(M) + " is too small");
      if (touches_target(p, M) && p.source.last > bwd)
        fail("backward certificate " + std::to_string(bwd) + " for M=" + std::to_string(M) + " is too small");
    }
  }
  return res;
}

Realization realize_bijection(const BijectionPlan& plan, std::uint64_t M) {
  Realization out;
  if (M == 0)
    return out;
  if (AuditResult a = audit_plan(plan, M - 1); !a.ok)
    throw PreconditionError("plan does not fit its sequences: " + a.problems.front());

  const CardSeq& s = plan.source();
  const CardSeq& t = plan.target();
  std::map<std::uint64_t, std::uint64_t> used_s;
  std::map<std::uint64_t, std::uint64_t> used_t;

  for (const PlanPiece& p : plan.pieces(M - 1, 0)) {
    if (p.source.first >= M)
      break;
    const bool single = p.source.first == p.source.last && p.target.first == p.target.last;
    if (p.card.is_infinite()) {
      out.symbolic.push_back({p, single ? used_s[p.source.first] : 0, single ? used_t[p.target.first] : 0});
      continue;
    }
    if (single) {
      const std::uint64_t c = p.card.finite_value();
      std::uint64_t& us = used_s[p.source.first];
      std::uint64_t& ut = used_t[p.target.first];
      for (std::uint64_t u = 0; u < c; ++u)
        out.explicit_pairs.push_back({p.source.first, us + u, p.target.first, ut + u});
      us += c;
      ut += c;
      continue;
    }
    // Finite multi-level match: pair units in lexicographic order.
    std::uint64_t tl = p.target.first;
    std::uint64_t tu = 0;
    for (std::uint64_t sl = p.source.first; sl <= p.source.last; ++sl) {
      const std::uint64_t cnt = s.at(sl).finite_value();
      for (std::uint64_t su = 0; su < cnt; ++su) {
        while (tu >= t.at(tl).finite_value()) {
          ++tl;
          tu = 0;
        }
        if (sl < M)
          out.explicit_pairs.push_back({sl, su, tl, tu});
        ++tu;
      }
    }
  }
  return out;
}

} // namespace topprod
