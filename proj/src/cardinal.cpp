#include "topprod/cardinal.hpp"

#include <algorithm>

#include "topprod/error.hpp"

namespace topprod {

std::uint64_t Cardinal::finite_value() const {
  if (!is_finite())
    throw PreconditionError("finite_value() on infinite cardinal " + to_string());
  return value_;
}

std::uint64_t Cardinal::aleph_index() const {
  if (kind_ != Kind::Aleph)
    throw PreconditionError("aleph_index() on " + to_string());
  return value_;
}

std::optional<Cardinal> Cardinal::next_infinite() const {
  switch (kind_) {
    case Kind::Finite: return aleph(0);
    case Kind::Aleph: return aleph(value_ + 1);
    case Kind::AlephOmega: return std::nullopt;
  }
  return std::nullopt;
}

std::string Cardinal::to_string() const {
  switch (kind_) {
    case Kind::Finite: return std::to_string(value_);
    case Kind::Aleph: return "aleph_" + std::to_string(value_);
    case Kind::AlephOmega: return "aleph_omega";
  }
  return {};
}

Cardinal operator+(Cardinal a, Cardinal b) {
  if (a.is_finite() && b.is_finite()) {
    std::uint64_t out = 0;
    if (__builtin_add_overflow(a.finite_value(), b.finite_value(), &out))
      throw std::overflow_error("finite cardinal sum overflows 64 bits");
    return Cardinal::fin(out);
  }
  return std::max(a, b);
}

Cardinal& operator+=(Cardinal& a, Cardinal b) { return a = a + b; }

Cardinal card_sum(std::span<const Cardinal> values) {
  Cardinal total;
  for (const Cardinal& c : values)
    total += c;
  return total;
}

Cardinal card_times(Cardinal a, std::uint64_t n) {
  if (n == 0)
    return Cardinal::fin(0);
  if (a.is_infinite())
    return a;
  std::uint64_t out = 0;
  if (__builtin_mul_overflow(a.finite_value(), n, &out))
    throw std::overflow_error("finite cardinal product overflows 64 bits");
  return Cardinal::fin(out);
}

Cardinal card_minus(Cardinal a, Cardinal b) {
  if (b > a)
    throw PreconditionError("card_minus: " + b.to_string() + " exceeds " + a.to_string());
  if (a.is_finite())
    return Cardinal::fin(a.finite_value() - b.finite_value());
  if (a == b)
    throw PreconditionError("card_minus: difference of equal infinite cardinals is undetermined");
  return a;
}

} // namespace topprod
