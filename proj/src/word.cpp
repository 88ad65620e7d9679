#include "testel/word.hpp"

#include <algorithm>
#include <cctype>
#include <limits>

namespace testel {

namespace {

// Appends a syllable to a reduced prefix, merging and cancelling as needed.
void push_reduced(std::vector<Syllable>& out, int gen, const Int& exp) {
  if (exp == 0) return;
  if (!out.empty() && out.back().gen == gen) {
    out.back().exp += exp;
    if (out.back().exp == 0) out.pop_back();
    return;
  }
  out.push_back(Syllable{gen, exp});
}

void push_reduced(std::vector<Syllable>& out, const Syllable& s) {
  push_reduced(out, s.gen, s.exp);
}

// Multi-syllable powers are materialized; cap the expansion size so a huge
// exponent refuses instead of exhausting memory. Single-syllable powers stay
// symbolic and are unaffected.
constexpr long long kMaxExpandedSyllables = 8'000'000;

}  // namespace

Word Word::generator(int rank, int gen, Int exp) {
  Word w(rank);
  if (gen < 0 || gen >= rank) throw DomainError("generator index out of range");
  if (exp != 0) w.syllables_.push_back(Syllable{gen, std::move(exp)});
  return w;
}

Word Word::from_syllables(int rank, std::vector<Syllable> syllables) {
  Word w(rank);
  for (auto& s : syllables) {
    if (s.gen < 0 || s.gen >= rank)
      throw DomainError("generator index out of range");
    push_reduced(w.syllables_, s);
  }
  return w;
}

Int Word::length() const {
  Int n = 0;
  for (const auto& s : syllables_) n += abs(s.exp);
  return n;
}

Word concat(const Word& u, const Word& v) {
  if (u.rank() != v.rank())
    throw DomainError("concat: operands over different generator sets");
  std::vector<Syllable> out = u.syllables();
  for (const auto& s : v.syllables()) push_reduced(out, s);
  return Word::from_syllables(u.rank(), std::move(out));
}

Word invert(const Word& u) {
  std::vector<Syllable> out;
  out.reserve(u.syllable_count());
  for (auto it = u.syllables().rbegin(); it != u.syllables().rend(); ++it)
    out.push_back(Syllable{it->gen, -it->exp});
  return Word::from_syllables(u.rank(), std::move(out));
}

CyclicDecomposition cyclic_reduce(const Word& u) {
  std::vector<Syllable> core = u.syllables();
  std::vector<Syllable> conj;
  while (core.size() >= 2 && core.front().gen == core.back().gen) {
    Int merged = core.front().exp + core.back().exp;
    if (merged == 0) {
      conj.push_back(core.front());
      core.erase(core.begin());
      core.pop_back();
    } else {
      // u = g^a m g^b with a+b != 0: u = g^a (m g^(a+b)) g^-a, and the new
      // core is strictly cyclically reduced because m avoids g at both ends.
      Syllable head = core.front();
      conj.push_back(head);
      core.erase(core.begin());
      core.pop_back();
      push_reduced(core, head.gen, merged);
      break;
    }
  }
  Word conjugator = Word::from_syllables(u.rank(), std::move(conj));
  Word core_word = Word::from_syllables(u.rank(), std::move(core));
  return CyclicDecomposition{std::move(core_word), std::move(conjugator)};
}

RootDecomposition max_root(const Word& u) {
  if (u.is_identity()) throw DomainError("max_root: identity has no root");
  auto [core, conj] = cyclic_reduce(u);
  const auto& syl = core.syllables();

  if (syl.size() == 1) {
    Int e = syl[0].exp;
    Int mult = abs(e);
    Word root = Word::generator(u.rank(), syl[0].gen, e > 0 ? 1 : -1);
    return RootDecomposition{std::move(root), std::move(mult), std::move(conj)};
  }

  // The core is strictly cyclically reduced (first and last generators
  // differ), so core = r^k forces r to be a literal syllable-level period.
  std::size_t n = syl.size();
  for (std::size_t period = 1; period <= n / 2; ++period) {
    if (n % period != 0) continue;
    bool ok = true;
    for (std::size_t i = period; i < n && ok; ++i)
      ok = (syl[i] == syl[i % period]);
    if (ok) {
      std::vector<Syllable> rs(syl.begin(), syl.begin() + period);
      Word root = Word::from_syllables(u.rank(), std::move(rs));
      return RootDecomposition{std::move(root), Int(n / period),
                               std::move(conj)};
    }
  }
  return RootDecomposition{core, Int(1), std::move(conj)};
}

Word power(const Word& u, const Int& k) {
  if (k == 0 || u.is_identity()) return Word::identity(u.rank());
  auto [core, conj] = cyclic_reduce(u);
  const auto& syl = core.syllables();

  std::vector<Syllable> body;
  if (syl.size() == 1) {
    body.push_back(Syllable{syl[0].gen, syl[0].exp * k});
  } else {
    Int reps = abs(k);
    if (reps * syl.size() > kMaxExpandedSyllables)
      throw BudgetError("power: expansion would exceed the syllable cap");
    long long n = static_cast<long long>(reps);
    const Word repeated = k > 0 ? core : invert(core);
    body.reserve(repeated.syllable_count() * static_cast<std::size_t>(n));
    for (long long i = 0; i < n; ++i)
      for (const auto& s : repeated.syllables()) push_reduced(body, s);
  }

  std::vector<Syllable> out = conj.syllables();
  for (const auto& s : body) push_reduced(out, s);
  const Word conj_inv = invert(conj);
  for (const auto& s : conj_inv.syllables()) push_reduced(out, s);
  return Word::from_syllables(u.rank(), std::move(out));
}

Word commutator(const Word& u, const Word& v) {
  return concat(concat(u, v), concat(invert(u), invert(v)));
}

Int sigma(const Word& u, int gen) {
  if (gen < 0 || gen >= u.rank())
    throw DomainError("sigma: generator index out of range");
  Int sum = 0;
  for (const auto& s : u.syllables())
    if (s.gen == gen) sum += s.exp;
  return sum;
}

Word substitute(const Word& u, std::span<const Word> images) {
  if (static_cast<int>(images.size()) != u.rank())
    throw DomainError("substitute: arity mismatch");
  int target_rank = images.empty() ? 1 : images[0].rank();
  for (const auto& im : images)
    if (im.rank() != target_rank)
      throw DomainError("substitute: images over different generator sets");
  Word out = Word::identity(target_rank);
  for (const auto& s : u.syllables())
    out = concat(out, power(images[static_cast<std::size_t>(s.gen)], s.exp));
  return out;
}

Word substitute(const Word& u, const std::vector<Word>& images) {
  return substitute(u, std::span<const Word>(images));
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

class WordParser {
public:
  WordParser(std::string_view text, int rank) : text_(text), rank_(rank) {}

  Word parse() {
    skip_ws();
    Word w = parse_word();
    skip_ws();
    if (pos_ != text_.size()) fail("trailing input");
    return w;
  }

private:
  std::string_view text_;
  int rank_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, pos_); }

  void skip_ws() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool peek_is(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  void expect(char c) {
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != c)
      fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  Int parse_int() {
    skip_ws();
    bool neg = false;
    if (pos_ < text_.size() && text_[pos_] == '-') {
      neg = true;
      ++pos_;
    }
    if (pos_ >= text_.size() ||
        !std::isdigit(static_cast<unsigned char>(text_[pos_])))
      fail("expected integer");
    Int value = 0;
    while (pos_ < text_.size() &&
           std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      value = value * 10 + (text_[pos_] - '0');
      ++pos_;
    }
    return neg ? -value : value;
  }

  Word parse_word() {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == '1') {
      ++pos_;
      return Word::identity(rank_);
    }
    Word w = parse_term();
    while (peek_is('*')) {
      ++pos_;
      w = concat(w, parse_term());
    }
    return w;
  }

  Word parse_term() {
    Word atom = parse_atom();
    if (peek_is('^')) {
      ++pos_;
      Int e = parse_int();
      return power(atom, e);
    }
    return atom;
  }

  Word parse_atom() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    char c = text_[pos_];
    if (c == '[') {
      ++pos_;
      Word u = parse_word();
      expect(',');
      Word v = parse_word();
      expect(']');
      return commutator(u, v);
    }
    if (c == '(') {
      ++pos_;
      Word w = parse_word();
      expect(')');
      return w;
    }
    if (c == 'x') {
      ++pos_;
      skip_ws();
      std::size_t at = pos_;
      if (pos_ >= text_.size() ||
          !std::isdigit(static_cast<unsigned char>(text_[pos_])))
        fail("expected generator index after 'x'");
      Int idx = parse_int();
      if (idx < 1 || idx > rank_)
        throw ParseError("generator index out of range", at);
      return Word::generator(rank_, static_cast<int>(idx) - 1);
    }
    fail("expected generator, '[' or '('");
  }
};

}  // namespace

Word parse_word(std::string_view text, const GeneratorSet& gens) {
  return parse_word(text, gens.rank);
}

Word parse_word(std::string_view text, int rank) {
  if (rank < 1) throw DomainError("generator set rank must be >= 1");
  return WordParser(text, rank).parse();
}

std::string to_string(const Word& u) {
  if (u.is_identity()) return "1";
  std::string out;
  bool first = true;
  for (const auto& s : u.syllables()) {
    if (!first) out += '*';
    first = false;
    out += 'x';
    out += std::to_string(s.gen + 1);
    if (s.exp != 1) {
      out += '^';
      out += s.exp.str();
    }
  }
  return out;
}

}  // namespace testel
