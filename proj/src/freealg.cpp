#include "topprod/freealg.hpp"

#include <algorithm>
#include <sstream>

#include "topprod/error.hpp"

namespace topprod {

namespace {

std::int64_t add_exp(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_add_overflow(a, b, &out))
    throw std::overflow_error("exponent overflows 64 bits");
  return out;
}

void check_letter(const Letter& l) {
  if (l.exp == 0)
    throw InvalidLetter("letter " + to_string(l) + " has exponent 0");
}

// Push l onto a reduced stack, merging and cancelling with the top.
void push_reduced(std::vector<Letter>& stack, const Letter& l) {
  if (!stack.empty() && stack.back().same_generator(l)) {
    const std::int64_t e = add_exp(stack.back().exp, l.exp);
    if (e == 0)
      stack.pop_back();
    else
      stack.back().exp = e;
    return;
  }
  stack.push_back(l);
}

std::vector<Letter> reduce_letters(std::span<const Letter> letters) {
  std::vector<Letter> out;
  out.reserve(letters.size());
  for (const Letter& l : letters) {
    check_letter(l);
    push_reduced(out, l);
  }
  return out;
}

void check_ranks(std::span<const Letter> letters, const std::map<std::uint64_t, Cardinal>& ranks) {
  for (const Letter& l : letters) {
    auto it = ranks.find(l.level);
    if (it == ranks.end() || it->second.is_infinite())
      continue;
    if (l.gen >= it->second.finite_value())
      throw InvalidLetter("letter " + to_string(l) + " exceeds declared rank " + it->second.to_string() +
                          " at level " + std::to_string(l.level));
  }
}

std::uint64_t max_level(std::span<const Letter> letters) {
  std::uint64_t m = 0;
  for (const Letter& l : letters)
    m = std::max(m, l.level);
  return m;
}

} // namespace

std::string to_string(const Letter& l) {
  std::string s = "a_" + std::to_string(l.level);
  if (l.gen != 0)
    s += "." + std::to_string(l.gen);
  if (l.exp != 1)
    s += "^" + std::to_string(l.exp);
  return s;
}

FreeWord reduce_free(std::span<const Letter> letters) {
  FreeWord w;
  if (!letters.empty())
    w.level = letters.front().level;
  for (const Letter& l : letters)
    if (l.level != w.level)
      throw LevelMismatch("free reduction needs a single level, got levels " + std::to_string(w.level) + " and " +
                          std::to_string(l.level));
  w.letters = reduce_letters(letters);
  return w;
}

ProductNormalForm ProductNormalForm::from_letters(std::span<const Letter> letters) {
  ProductNormalForm u;
  u.letters_ = reduce_letters(letters);
  u.level_bound_ = max_level(u.letters_);
  return u;
}

std::vector<FreeWord> ProductNormalForm::syllables() const {
  std::vector<FreeWord> out;
  for (const Letter& l : letters_) {
    if (out.empty() || out.back().level != l.level)
      out.push_back({l.level, {}});
    out.back().letters.push_back(l);
  }
  return out;
}

ProductNormalForm ProductNormalForm::with_level_bound(std::uint64_t n) const {
  if (!letters_.empty() && max_level(letters_) > n)
    throw PreconditionError("level bound " + std::to_string(n) + " is below a letter of " + to_string());
  ProductNormalForm u = *this;
  u.level_bound_ = n;
  return u;
}

ProductNormalForm ProductNormalForm::with_ranks(std::map<std::uint64_t, Cardinal> ranks) const {
  check_ranks(letters_, ranks);
  ProductNormalForm u = *this;
  u.ranks_ = std::move(ranks);
  return u;
}

std::uint64_t ProductNormalForm::expanded_length() const {
  std::uint64_t n = 0;
  for (const Letter& l : letters_)
    n += static_cast<std::uint64_t>(l.exp < 0 ? -l.exp : l.exp);
  return n;
}

std::string ProductNormalForm::to_string() const {
  if (letters_.empty())
    return "1";
  std::ostringstream os;
  for (const FreeWord& syl : syllables()) {
    os << "[";
    for (std::size_t i = 0; i < syl.letters.size(); ++i)
      os << (i ? " " : "") << topprod::to_string(syl.letters[i]);
    os << "]";
  }
  return os.str();
}

ProductNormalForm normal_form(std::span<const RawSyllable> syllables) {
  std::vector<Letter> all;
  for (const RawSyllable& syl : syllables) {
    for (const Letter& l : syl.letters) {
      if (l.level != syl.level)
        throw LevelMismatch("letter " + to_string(l) + " inside a level-" + std::to_string(syl.level) + " syllable");
      all.push_back(l);
    }
  }
  ProductNormalForm u = ProductNormalForm::from_letters(all);
  std::uint64_t bound = u.level_bound();
  for (const RawSyllable& syl : syllables)
    bound = std::max(bound, syl.level);
  return u.with_level_bound(bound);
}

ProductNormalForm multiply(const ProductNormalForm& u, const ProductNormalForm& v) {
  std::map<std::uint64_t, Cardinal> ranks = u.ranks();
  for (const auto& [level, rank] : v.ranks()) {
    auto [it, inserted] = ranks.emplace(level, rank);
    if (!inserted && it->second != rank)
      throw DeclarationMismatch("level " + std::to_string(level) + " declared with rank " + it->second.to_string() +
                                " and " + rank.to_string());
  }
  std::vector<Letter> all = u.letters();
  for (const Letter& l : v.letters())
    push_reduced(all, l);
  return ProductNormalForm::from_letters(all)
      .with_level_bound(std::max(u.level_bound(), v.level_bound()))
      .with_ranks(std::move(ranks));
}

ProductNormalForm invert(const ProductNormalForm& u) {
  std::vector<Letter> out;
  out.reserve(u.letters().size());
  for (auto it = u.letters().rbegin(); it != u.letters().rend(); ++it)
    out.push_back(it->inverse());
  return ProductNormalForm::from_letters(out).with_level_bound(u.level_bound()).with_ranks(u.ranks());
}

ProductNormalForm power(const ProductNormalForm& u, std::int64_t n) {
  ProductNormalForm base = n < 0 ? invert(u) : u;
  std::uint64_t e = n < 0 ? static_cast<std::uint64_t>(-(n + 1)) + 1 : static_cast<std::uint64_t>(n);
  ProductNormalForm acc = ProductNormalForm().with_level_bound(u.level_bound()).with_ranks(u.ranks());
  while (e > 0) {
    if (e & 1)
      acc = multiply(acc, base);
    e >>= 1;
    if (e > 0)
      base = multiply(base, base);
  }
  return acc;
}

ProductNormalForm retract(const ProductNormalForm& u, std::uint64_t N) {
  std::vector<Letter> kept;
  for (const Letter& l : u.letters())
    if (l.level <= N)
      kept.push_back(l);
  return ProductNormalForm::from_letters(kept).with_level_bound(std::min(u.level_bound(), N)).with_ranks(u.ranks());
}

CyclicDecomposition cyclic_reduce(const ProductNormalForm& u) {
  const std::vector<Letter>& w = u.letters();
  std::size_t lo = 0;
  std::size_t hi = w.size(); // core candidate is w[lo, hi)
  std::vector<Letter> conj;
  std::optional<Letter> merged_front;
  while (hi - lo >= 2 && w[lo].same_generator(w[hi - 1])) {
    if (w[lo].exp == -w[hi - 1].exp) {
      conj.push_back(w[lo]);
      ++lo;
      --hi;
      continue;
    }
    // x^e1 W x^e2 = x^-e2 (x^(e1+e2) W) x^e2
    conj.push_back(w[hi - 1].inverse());
    merged_front = Letter{w[lo].level, w[lo].gen, add_exp(w[lo].exp, w[hi - 1].exp)};
    ++lo;
    --hi;
    break;
  }
  std::vector<Letter> core;
  if (merged_front)
    core.push_back(*merged_front);
  core.insert(core.end(), w.begin() + static_cast<std::ptrdiff_t>(lo), w.begin() + static_cast<std::ptrdiff_t>(hi));
  auto finish = [&](std::vector<Letter> letters) {
    return ProductNormalForm::from_letters(letters).with_level_bound(u.level_bound()).with_ranks(u.ranks());
  };
  return {finish(std::move(core)), finish(std::move(conj))};
}

std::optional<ProductNormalForm> kth_root(const ProductNormalForm& u, std::uint64_t k) {
  if (k == 0)
    throw PreconditionError("kth_root needs k >= 1");
  if (k == 1 || u.is_identity())
    return u;
  const auto [core, conj] = cyclic_reduce(u);
  const std::vector<Letter>& c = core.letters();
  std::vector<Letter> root;
  if (c.size() == 1) {
    const auto e = c.front().exp;
    const auto sk = static_cast<std::int64_t>(std::min<std::uint64_t>(k, INT64_MAX));
    if (e % sk != 0)
      return std::nullopt;
    root.push_back({c.front().level, c.front().gen, e / sk});
  } else {
    // A cyclically reduced core with distinct end generators is r^k only as
    // the k-fold concatenation of r.
    if (c.size() % k != 0)
      return std::nullopt;
    const std::size_t p = c.size() / k;
    for (std::size_t i = p; i < c.size(); ++i)
      if (c[i] != c[i - p])
        return std::nullopt;
    root.assign(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(p));
  }
  const ProductNormalForm r = ProductNormalForm::from_letters(root).with_level_bound(u.level_bound()).with_ranks(u.ranks());
  return multiply(multiply(conj, r), invert(conj));
}

std::vector<std::uint64_t> divisibility_spectrum(const ProductNormalForm& u, std::uint64_t kMax) {
  if (u.is_identity())
    throw PreconditionError("the identity has roots of every order");
  std::vector<std::uint64_t> out;
  for (std::uint64_t k = 1; k <= kMax; ++k)
    if (kth_root(u, k))
      out.push_back(k);
  return out;
}

} // namespace topprod
