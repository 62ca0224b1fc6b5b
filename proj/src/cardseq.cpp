#include "topprod/cardseq.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

#include "topprod/error.hpp"

namespace topprod {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

std::uint64_t checked_affine(std::uint64_t a, std::uint64_t k, std::uint64_t b) {
  std::uint64_t ak = 0;
  std::uint64_t out = 0;
  if (__builtin_mul_overflow(a, k, &ak) || __builtin_add_overflow(ak, b, &out))
    throw std::overflow_error("aleph index overflows 64 bits");
  return out;
}

// Smallest period of v (v nonempty).
std::vector<Cardinal> minimal_period(const std::vector<Cardinal>& v) {
  const std::size_t n = v.size();
  for (std::size_t p = 1; p < n; ++p) {
    if (n % p != 0)
      continue;
    bool ok = true;
    for (std::size_t i = p; i < n && ok; ++i)
      ok = v[i] == v[i - p];
    if (ok)
      return {v.begin(), v.begin() + static_cast<std::ptrdiff_t>(p)};
  }
  return v;
}

// Sum of tail entries with tail offsets j0..j1 inclusive.
Cardinal tail_range_sum(const Tail& tail, std::uint64_t j0, std::uint64_t j1) {
  const std::uint64_t count = j1 - j0 + 1;
  return std::visit(
      overloaded{
          [](const TailZero&) { return Cardinal::fin(0); },
          [&](const TailConstant& t) { return card_times(t.value, count); },
          [&](const TailPeriodic& t) {
            const std::uint64_t n = t.values.size();
            const Cardinal period = card_sum(t.values);
            Cardinal out = card_times(period, count / n);
            const std::uint64_t start = j0 % n;
            for (std::uint64_t r = 0; r < count % n; ++r)
              out += t.values[(start + r) % n];
            return out;
          },
          [&](const TailIncreasingAlephs& t) { return Cardinal::aleph(checked_affine(t.a, j1, t.b)); },
      },
      tail);
}

Cardinal range_sum(const CardSeq& s, std::uint64_t lo, std::uint64_t hi) {
  Cardinal out;
  const std::uint64_t p = s.prefix().size();
  for (std::uint64_t n = lo; n <= hi && n < p; ++n)
    out += s.prefix()[n];
  if (hi >= p)
    out += tail_range_sum(s.tail(), std::max(lo, p) - p, hi - p);
  return out;
}

} // namespace

CardSeq::CardSeq(std::vector<Cardinal> prefix, Tail tail) : prefix_(std::move(prefix)), tail_(std::move(tail)) {
  normalize();
}

void CardSeq::normalize() {
  if (auto* per = std::get_if<TailPeriodic>(&tail_)) {
    if (per->values.empty())
      throw InvalidSchema("periodic tail needs at least one entry");
    per->values = minimal_period(per->values);
    if (per->values.size() == 1)
      tail_ = TailConstant{per->values.front()};
  }
  if (auto* inc = std::get_if<TailIncreasingAlephs>(&tail_)) {
    if (inc->a == 0)
      throw InvalidSchema("increasing aleph tail needs slope a >= 1");
  }
  if (auto* c = std::get_if<TailConstant>(&tail_); c && c->value.is_zero())
    tail_ = TailZero{};

  // Absorb trailing prefix entries that the tail rule already predicts.
  while (!prefix_.empty()) {
    const Cardinal last = prefix_.back();
    bool absorbed = std::visit(
        overloaded{
            [&](TailZero&) { return last.is_zero(); },
            [&](TailConstant& t) { return last == t.value; },
            [&](TailPeriodic& t) {
              if (last != t.values.back())
                return false;
              std::rotate(t.values.rbegin(), t.values.rbegin() + 1, t.values.rend());
              return true;
            },
            [&](TailIncreasingAlephs& t) {
              if (t.b < t.a || last != Cardinal::aleph(t.b - t.a))
                return false;
              t.b -= t.a;
              return true;
            },
        },
        tail_);
    if (!absorbed)
      break;
    prefix_.pop_back();
  }
}

Cardinal CardSeq::at(std::uint64_t n) const {
  if (n < prefix_.size())
    return prefix_[n];
  const std::uint64_t j = n - prefix_.size();
  return std::visit(
      overloaded{
          [](const TailZero&) { return Cardinal::fin(0); },
          [](const TailConstant& t) { return t.value; },
          [&](const TailPeriodic& t) { return t.values[j % t.values.size()]; },
          [&](const TailIncreasingAlephs& t) { return Cardinal::aleph(checked_affine(t.a, j, t.b)); },
      },
      tail_);
}

Cardinal CardSeq::partial_sum(std::uint64_t M) const { return range_sum(*this, 0, M); }

Tail CardSeq::tail_from_offset(std::uint64_t offset) const {
  return std::visit(
      overloaded{
          [](const TailZero& t) -> Tail { return t; },
          [](const TailConstant& t) -> Tail { return t; },
          [&](const TailPeriodic& t) -> Tail {
            TailPeriodic out = t;
            std::rotate(out.values.begin(),
                        out.values.begin() + static_cast<std::ptrdiff_t>(offset % out.values.size()),
                        out.values.end());
            return out;
          },
          [&](const TailIncreasingAlephs& t) -> Tail {
            return TailIncreasingAlephs{t.a, checked_affine(t.a, offset, t.b)};
          },
      },
      tail_);
}

CardSeq CardSeq::with_value(std::uint64_t n, Cardinal c) const {
  const std::uint64_t len = std::max<std::uint64_t>(prefix_.size(), n + 1);
  std::vector<Cardinal> pre;
  pre.reserve(len);
  for (std::uint64_t i = 0; i < len; ++i)
    pre.push_back(i == n ? c : at(i));
  return CardSeq(std::move(pre), tail_from_offset(len - prefix_.size()));
}

Cardinal CardSeq::tail_sup() const {
  return std::visit(
      overloaded{
          [](const TailZero&) { return Cardinal::fin(0); },
          [](const TailConstant& t) { return t.value; },
          [](const TailPeriodic& t) { return *std::max_element(t.values.begin(), t.values.end()); },
          [](const TailIncreasingAlephs&) { return Cardinal::aleph_omega(); },
      },
      tail_);
}

CardSeq::Total CardSeq::total() const {
  if (eventually_zero(*this))
    return {prefix_.empty() ? Cardinal::fin(0) : partial_sum(prefix_.size() - 1), true};
  Cardinal sup = tail_sup();
  for (const Cardinal& c : prefix_)
    sup = std::max(sup, c);
  const Cardinal value = std::max(Cardinal::aleph(0), sup);
  bool attained = std::find(prefix_.begin(), prefix_.end(), value) != prefix_.end();
  if (!std::holds_alternative<TailIncreasingAlephs>(tail_) && tail_sup() == value)
    attained = true;
  return {value, attained};
}

bool CardSeq::all_finite() const {
  if (std::holds_alternative<TailIncreasingAlephs>(tail_) || tail_sup().is_infinite())
    return false;
  return std::all_of(prefix_.begin(), prefix_.end(), [](const Cardinal& c) { return c.is_finite(); });
}

std::string CardSeq::to_string() const {
  std::ostringstream os;
  os << "(";
  for (const Cardinal& c : prefix_)
    os << c.to_string() << ", ";
  std::visit(overloaded{
                 [&](const TailZero&) { os << "0, 0, ..."; },
                 [&](const TailConstant& t) { os << t.value.to_string() << ", " << t.value.to_string() << ", ..."; },
                 [&](const TailPeriodic& t) {
                   os << "[";
                   for (std::size_t i = 0; i < t.values.size(); ++i)
                     os << (i ? ", " : "") << t.values[i].to_string();
                   os << "]*";
                 },
                 [&](const TailIncreasingAlephs& t) {
                   os << "aleph_{" << t.a << "k+" << t.b << "}, k = 0, 1, ...";
                 },
             },
             tail_);
  os << ")";
  return os.str();
}

bool eventually_zero(const CardSeq& s) { return std::holds_alternative<TailZero>(s.tail()); }

bool eventually_below(const CardSeq& s, Cardinal kappa) {
  if (kappa.is_finite())
    throw PreconditionError("eventually_below needs an infinite cardinal, got " + kappa.to_string());
  if (std::holds_alternative<TailIncreasingAlephs>(s.tail()))
    return kappa == Cardinal::aleph_omega();
  return s.tail_sup() < kappa;
}

std::optional<std::uint64_t> first_index_reaching(const CardSeq& s, Cardinal x) {
  if (x.is_zero())
    return 0;
  const std::uint64_t p = s.prefix().size();
  Cardinal running;
  for (std::uint64_t n = 0; n < p; ++n) {
    running += s.prefix()[n];
    if (running >= x)
      return n;
  }
  const Cardinal base = running; // < x
  return std::visit(
      overloaded{
          [&](const TailZero&) -> std::optional<std::uint64_t> { return std::nullopt; },
          [&](const TailConstant& t) -> std::optional<std::uint64_t> {
            if (t.value.is_infinite())
              return t.value >= x ? std::optional<std::uint64_t>(p) : std::nullopt;
            if (x.is_infinite())
              return std::nullopt;
            const std::uint64_t deficit = x.finite_value() - base.finite_value();
            const std::uint64_t v = t.value.finite_value();
            return p + (deficit + v - 1) / v - 1;
          },
          [&](const TailPeriodic& t) -> std::optional<std::uint64_t> {
            const std::uint64_t n = t.values.size();
            Cardinal acc = base;
            for (std::uint64_t r = 0; r < n; ++r) {
              acc += t.values[r];
              if (acc >= x)
                return p + r;
            }
            const Cardinal period = card_sum(t.values);
            if (period.is_infinite() || x.is_infinite() || period.is_zero())
              return std::nullopt;
            const std::uint64_t deficit = x.finite_value() - base.finite_value();
            const std::uint64_t q = (deficit - 1) / period.finite_value();
            std::uint64_t sum = base.finite_value() + q * period.finite_value();
            for (std::uint64_t r = 0; r < n; ++r) {
              sum += t.values[r].finite_value();
              if (sum >= x.finite_value())
                return p + q * n + r;
            }
            return std::nullopt; // unreachable: (q+1) periods cover the deficit
          },
          [&](const TailIncreasingAlephs& t) -> std::optional<std::uint64_t> {
            if (x.is_finite())
              return p;
            if (x == Cardinal::aleph_omega())
              return std::nullopt;
            const std::uint64_t i = x.aleph_index();
            if (i <= t.b)
              return p;
            return p + (i - t.b + t.a - 1) / t.a;
          },
      },
      s.tail());
}

std::optional<std::uint64_t> sums_dominated(const CardSeq& s, const CardSeq& t, std::uint64_t M) {
  return first_index_reaching(t, s.partial_sum(M));
}

CardSeq regroup(const CardSeq& s, const GroupingSchema& g) {
  if (g.has_infinite_block)
    throw InvalidSchema("grouping has an infinite fiber");
  auto zero_len = [](std::uint64_t len) { return len == 0; };
  if (std::any_of(g.head.begin(), g.head.end(), zero_len) || std::any_of(g.repeat.begin(), g.repeat.end(), zero_len))
    throw InvalidSchema("grouping has an empty block (not surjective)");
  if (g.repeat.empty())
    throw InvalidSchema("grouping leaves all indices past its head in one infinite fiber");

  const auto* inc = std::get_if<TailIncreasingAlephs>(&s.tail());
  if (inc && std::adjacent_find(g.repeat.begin(), g.repeat.end(), std::not_equal_to<>()) != g.repeat.end())
    throw InvalidSchema("regrouping an increasing aleph tail needs equal repeating block lengths");

  const std::uint64_t p = s.prefix().size();
  const std::uint64_t head_n = g.head.size();
  const std::uint64_t rep_n = g.repeat.size();
  const std::uint64_t period_n = std::holds_alternative<TailPeriodic>(s.tail())
                                     ? std::get<TailPeriodic>(s.tail()).values.size()
                                     : 1;

  std::vector<Cardinal> out;
  std::map<std::uint64_t, std::size_t> seen_phase; // tail phase at cycle start -> index in out
  std::uint64_t start = 0;
  for (std::uint64_t i = 0;; ++i) {
    const bool cycle_start = i >= head_n && (i - head_n) % rep_n == 0;
    if (cycle_start && start >= p) {
      const std::uint64_t off = start - p;
      if (std::holds_alternative<TailZero>(s.tail()))
        return CardSeq(std::move(out), TailZero{});
      if (const auto* c = std::get_if<TailConstant>(&s.tail())) {
        TailPeriodic sums;
        for (std::uint64_t len : g.repeat)
          sums.values.push_back(card_times(c->value, len));
        return CardSeq(std::move(out), std::move(sums));
      }
      if (inc) {
        const std::uint64_t len = g.repeat.front();
        return CardSeq(std::move(out),
                       TailIncreasingAlephs{inc->a * len, checked_affine(inc->a, off + len - 1, inc->b)});
      }
      const std::uint64_t phase = off % period_n;
      if (auto it = seen_phase.find(phase); it != seen_phase.end()) {
        TailPeriodic cyc{{out.begin() + static_cast<std::ptrdiff_t>(it->second), out.end()}};
        out.resize(it->second);
        return CardSeq(std::move(out), std::move(cyc));
      }
      seen_phase.emplace(phase, out.size());
    }
    const std::uint64_t len = i < head_n ? g.head[i] : g.repeat[(i - head_n) % rep_n];
    out.push_back(range_sum(s, start, start + len - 1));
    start += len;
  }
}

} // namespace topprod
