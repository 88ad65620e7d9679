#include "testel/arrangement.hpp"

#include <algorithm>
#include <cctype>

#include "testel/cert_engine.hpp"
#include "testel/frattini.hpp"

namespace testel {

namespace {

std::string params_to_string(const std::string& id,
                             const std::vector<Int>& params) {
  std::string out = id + "(";
  for (std::size_t i = 0; i < params.size(); ++i)
    out += (i ? "," : "") + params[i].str();
  return out + ")";
}

bool all_nonzero(const std::vector<Int>& v) {
  return std::all_of(v.begin(), v.end(), [](const Int& x) { return x != 0; });
}

CatalogEntry make_gen_entry() {
  CatalogEntry e;
  e.id = "gen";
  e.citation =
      "every nontrivial element of the rank-one free pro-p group is a test "
      "element; powers of test elements are test elements";
  e.validate_params = [](const std::vector<Int>& ps, std::string* why) {
    if (ps.size() != 1) {
      *why = "gen takes exactly one parameter";
      return false;
    }
    if (ps[0] == 0) {
      *why = "gen exponent must be nonzero";
      return false;
    }
    return true;
  };
  e.arity = [](const std::vector<Int>&) { return 1; };
  e.make_template = [](const std::vector<Int>& ps) {
    return Word::generator(1, 0, ps[0]);
  };
  e.admissible = [](const std::vector<Int>& ps, int, std::string* why) {
    if (ps[0] == 0) {
      *why = "exponent must be nonzero";
      return false;
    }
    return true;
  };
  return e;
}

CatalogEntry make_comm_entry() {
  CatalogEntry e;
  e.id = "comm";
  e.citation = "Nielsen: the commutator of a basis pair is a test element";
  e.validate_params = [](const std::vector<Int>& ps, std::string* why) {
    if (!ps.empty()) {
      *why = "comm takes no parameters";
      return false;
    }
    return true;
  };
  e.arity = [](const std::vector<Int>&) { return 2; };
  e.make_template = [](const std::vector<Int>&) {
    return commutator(Word::generator(2, 0), Word::generator(2, 1));
  };
  e.admissible = [](const std::vector<Int>&, int, std::string*) {
    return true;
  };
  return e;
}

CatalogEntry make_pp_entry() {
  CatalogEntry e;
  e.id = "pp";
  e.citation =
      "rank-two exponent-sum criterion: x1^a1 x2^a2 with nonzero a_i "
      "divisible by p is a test element";
  e.validate_params = [](const std::vector<Int>& ps, std::string* why) {
    if (ps.size() != 2) {
      *why = "pp takes exactly two parameters";
      return false;
    }
    if (!all_nonzero(ps)) {
      *why = "pp exponents must be nonzero";
      return false;
    }
    return true;
  };
  e.arity = [](const std::vector<Int>&) { return 2; };
  e.make_template = [](const std::vector<Int>& ps) {
    return concat(Word::generator(2, 0, ps[0]), Word::generator(2, 1, ps[1]));
  };
  e.admissible = [](const std::vector<Int>& ps, int p, std::string* why) {
    for (const auto& a : ps) {
      if (a == 0 || a % p != 0) {
        *why = "exponent " + a.str() + " is not a nonzero multiple of " +
               std::to_string(p);
        return false;
      }
    }
    return true;
  };
  return e;
}

bool apfam_shape_ok(const std::vector<Int>& ps, std::string* why) {
  if (ps.size() < 2) {
    *why = "apfam takes n, k, then n+2k exponents";
    return false;
  }
  if (ps[0] < 0 || ps[1] < 0 || ps[0] + ps[1] == 0) {
    *why = "apfam needs n, k >= 0 with n + k > 0";
    return false;
  }
  Int expected = 2 + ps[0] + 2 * ps[1];
  if (Int(ps.size()) != expected) {
    *why = "apfam parameter count must be 2 + n + 2k";
    return false;
  }
  for (std::size_t i = 2; i < ps.size(); ++i)
    if (ps[i] == 0) {
      *why = "apfam exponents must be nonzero";
      return false;
    }
  return true;
}

CatalogEntry make_apfam_entry() {
  CatalogEntry e;
  e.id = "apfam";
  e.leaf_only = true;
  e.citation =
      "power-product with commutator blocks: x1^a1..xn^an "
      "[x_{n+1}^b1,x_{n+2}^b2].. with nonzero a_i divisible by p and "
      "nonzero b_j is a test element";
  e.validate_params = apfam_shape_ok;
  e.arity = [](const std::vector<Int>& ps) {
    return static_cast<int>(ps[0] + 2 * ps[1]);
  };
  e.make_template = [](const std::vector<Int>& ps) {
    int n = static_cast<int>(ps[0]);
    int k = static_cast<int>(ps[1]);
    int rank = n + 2 * k;
    Word w = Word::identity(rank);
    for (int i = 0; i < n; ++i)
      w = concat(w, Word::generator(rank, i, ps[static_cast<std::size_t>(2 + i)]));
    for (int j = 0; j < k; ++j) {
      const Int& b1 = ps[static_cast<std::size_t>(2 + n + 2 * j)];
      const Int& b2 = ps[static_cast<std::size_t>(2 + n + 2 * j + 1)];
      w = concat(w, commutator(Word::generator(rank, n + 2 * j, b1),
                               Word::generator(rank, n + 2 * j + 1, b2)));
    }
    return w;
  };
  e.admissible = [](const std::vector<Int>& ps, int p, std::string* why) {
    int n = static_cast<int>(ps[0]);
    for (int i = 0; i < n; ++i) {
      const Int& a = ps[static_cast<std::size_t>(2 + i)];
      if (a == 0 || a % p != 0) {
        *why = "power exponent " + a.str() +
               " is not a nonzero multiple of " + std::to_string(p);
        return false;
      }
    }
    return true;
  };
  return e;
}

void validate_node(const Arrangement& a, const Catalog& cat) {
  const CatalogEntry& e = cat.require(a.id);
  std::string why;
  if (!e.validate_params(a.params, &why))
    throw DomainError("arrangement node " + params_to_string(a.id, a.params) +
                      ": " + why);
  if (!a.children.empty()) {
    if (e.leaf_only)
      throw DomainError(a.id + " is a leaf family and cannot compose");
    int ar = e.arity(a.params);
    if (static_cast<int>(a.children.size()) != ar)
      throw DomainError("arity mismatch: " + a.id + " composes " +
                        std::to_string(ar) + " children, got " +
                        std::to_string(a.children.size()));
    for (const auto& c : a.children) validate_node(c, cat);
  }
}

Word shift_into(const Word& w, int offset, int total_rank) {
  std::vector<Syllable> syl;
  syl.reserve(w.syllable_count());
  for (const auto& s : w.syllables())
    syl.push_back(Syllable{s.gen + offset, s.exp});
  return Word::from_syllables(total_rank, std::move(syl));
}

}  // namespace

const Catalog& Catalog::builtin() {
  static const Catalog cat = [] {
    Catalog c;
    c.entries_.push_back(make_gen_entry());
    c.entries_.push_back(make_comm_entry());
    c.entries_.push_back(make_pp_entry());
    c.entries_.push_back(make_apfam_entry());
    return c;
  }();
  return cat;
}

const CatalogEntry* Catalog::find(const std::string& id) const {
  for (const auto& e : entries_)
    if (e.id == id) return &e;
  return nullptr;
}

const CatalogEntry& Catalog::require(const std::string& id) const {
  const CatalogEntry* e = find(id);
  if (!e) throw DomainError("unknown catalog id: " + id);
  return *e;
}

void Catalog::register_entry(CatalogEntry entry,
                             const std::vector<Int>& sample_params,
                             const std::vector<int>& sample_primes) {
  if (find(entry.id)) throw DomainError("catalog id already taken: " + entry.id);
  std::string why;
  if (!entry.validate_params(sample_params, &why))
    throw DomainError("catalog registration: bad sample parameters: " + why);
  Word sample = entry.make_template(sample_params);
  for (int p : sample_primes) {
    if (!entry.admissible(sample_params, p, &why))
      throw DomainError("catalog registration: sample inadmissible for p=" +
                        std::to_string(p) + ": " + why);
    Certificate c = certify_free_pro_p(
        sample, GroupContext::free_pro_p(sample.rank(), p));
    if (c.verdict != Verdict::Test)
      throw DomainError("catalog registration rejected: template " +
                        to_string(sample) + " does not certify TEST for p=" +
                        std::to_string(p));
  }
  entries_.push_back(std::move(entry));
}

// ---------------------------------------------------------------------------
// Parsing and printing

namespace {

class ArrangementParser {
public:
  ArrangementParser(std::string_view text, const Catalog& cat)
      : text_(text), cat_(cat) {}

  Arrangement parse() {
    Arrangement a = parse_arr();
    skip_ws();
    if (pos_ != text_.size()) fail("trailing input");
    validate_node(a, cat_);
    return a;
  }

private:
  std::string_view text_;
  const Catalog& cat_;
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
    std::size_t start = pos_;
    bool neg = false;
    if (pos_ < text_.size() && text_[pos_] == '-') {
      neg = true;
      ++pos_;
    }
    if (pos_ >= text_.size() ||
        !std::isdigit(static_cast<unsigned char>(text_[pos_])))
      throw ParseError("expected integer", start);
    Int value = 0;
    while (pos_ < text_.size() &&
           std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      value = value * 10 + (text_[pos_] - '0');
      ++pos_;
    }
    return neg ? -value : value;
  }

  std::string parse_ident() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
            text_[pos_] == '_'))
      ++pos_;
    if (pos_ == start) fail("expected catalog id");
    return std::string(text_.substr(start, pos_ - start));
  }

  Arrangement parse_arr() {
    std::size_t at = pos_;
    Arrangement a;
    a.id = parse_ident();
    if (!cat_.find(a.id)) throw ParseError("unknown catalog id: " + a.id, at);
    expect('(');
    if (!peek_is(')')) {
      bool seen_child = false;
      while (true) {
        skip_ws();
        if (pos_ < text_.size() &&
            (std::isdigit(static_cast<unsigned char>(text_[pos_])) ||
             text_[pos_] == '-')) {
          if (seen_child) fail("parameters must precede child arrangements");
          a.params.push_back(parse_int());
        } else {
          seen_child = true;
          a.children.push_back(parse_arr());
        }
        if (peek_is(',')) {
          ++pos_;
          continue;
        }
        break;
      }
    }
    expect(')');
    return a;
  }
};

}  // namespace

Arrangement parse_arrangement(std::string_view text, const Catalog& cat) {
  return ArrangementParser(text, cat).parse();
}

std::string to_string(const Arrangement& a) {
  std::string out = a.id + "(";
  bool first = true;
  for (const auto& p : a.params) {
    if (!first) out += ",";
    first = false;
    out += p.str();
  }
  for (const auto& c : a.children) {
    if (!first) out += ",";
    first = false;
    out += to_string(c);
  }
  return out + ")";
}

int weight(const Arrangement& a, const Catalog& cat) {
  validate_node(a, cat);
  const CatalogEntry& e = cat.require(a.id);
  if (a.is_leaf()) return e.arity(a.params);
  int sum = 0;
  for (const auto& c : a.children) sum += weight(c, cat);
  return sum;
}

namespace {

Word expand_impl(const Arrangement& a, const Catalog& cat) {
  const CatalogEntry& e = cat.require(a.id);
  Word tmpl = e.make_template(a.params);
  if (a.is_leaf()) return tmpl;
  std::vector<int> weights;
  int total = 0;
  for (const auto& c : a.children) {
    weights.push_back(weight(c, cat));
    total += weights.back();
  }
  std::vector<Word> images;
  int offset = 0;
  for (std::size_t i = 0; i < a.children.size(); ++i) {
    images.push_back(shift_into(expand_impl(a.children[i], cat), offset, total));
    offset += weights[static_cast<std::size_t>(i)];
  }
  return substitute(tmpl, images);
}

}  // namespace

Word expand(const Arrangement& a, const Catalog& cat) {
  validate_node(a, cat);
  return expand_impl(a, cat);
}

namespace {

void certify_walk(const Arrangement& a, int p, const Catalog& cat,
                  const std::string& path, Certificate& cert) {
  const CatalogEntry& e = cat.require(a.id);
  std::string why;
  if (!e.admissible(a.params, p, &why))
    throw DomainError("inadmissible parameters at node " + path + " = " +
                      params_to_string(a.id, a.params) + ": " + why);
  cert.add_reason("arrangement-node", e.citation,
                  {{"path", path},
                   {"node", params_to_string(a.id, a.params)},
                   {"weight", std::to_string(weight(a, cat))}});
  for (std::size_t i = 0; i < a.children.size(); ++i)
    certify_walk(a.children[i], p, cat, path + "." + std::to_string(i), cert);
}

}  // namespace

Certificate certify_arrangement(const Arrangement& a, int p,
                                const Catalog& cat) {
  require_prime(p);
  validate_node(a, cat);
  Word w = expand(a, cat);
  Certificate cert(w, GroupContext::free_pro_p(weight(a, cat), p));
  cert.entry = "certify_arrangement";
  cert.add_reason("test-arrangement",
                  "composition of test elements over free factors yields a "
                  "test element of the coproduct",
                  {{"arrangement", to_string(a)}});
  certify_walk(a, p, cat, "0", cert);
  cert.verdict = Verdict::Test;
  return cert;
}

// ---------------------------------------------------------------------------
// Structural matcher

namespace {

// Generators appearing in the syllable range.
bool covers_exactly(const Word& w, int lo, int hi) {
  std::vector<bool> seen(static_cast<std::size_t>(hi - lo + 1), false);
  for (const auto& s : w.syllables()) {
    if (s.gen < lo || s.gen > hi) return false;
    seen[static_cast<std::size_t>(s.gen - lo)] = true;
  }
  return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
}

// Literal concatenation period of the syllable sequence: maximal e with
// w = r^e written without merges. Only meaningful when the first and last
// generators differ (guaranteed for multi-generator expansions).
std::pair<Word, int> plain_root(const Word& w) {
  const auto& syl = w.syllables();
  std::size_t n = syl.size();
  if (n == 0 || syl.front().gen == syl.back().gen) return {w, 1};
  for (std::size_t d = 1; d <= n / 2; ++d) {
    if (n % d != 0) continue;
    bool ok = true;
    for (std::size_t i = d; i < n && ok; ++i) ok = (syl[i] == syl[i % d]);
    if (ok) {
      std::vector<Syllable> rs(syl.begin(), syl.begin() + d);
      return {Word::from_syllables(w.rank(), std::move(rs)),
              static_cast<int>(n / d)};
    }
  }
  return {w, 1};
}

class Matcher {
public:
  Matcher(const Catalog& cat, int p) : cat_(cat), p_(p) {}

  std::optional<Arrangement> match(const Word& w, int lo, int hi) {
    if (w.is_identity() || !covers_exactly(w, lo, hi)) return std::nullopt;
    if (lo == hi) {
      const auto& syl = w.syllables();
      if (syl.size() != 1) return std::nullopt;
      return Arrangement{"gen", {syl[0].exp}, {}};
    }
    if (auto a = match_apfam(w, lo, hi)) return a;
    if (auto a = match_comm(w, lo, hi)) return a;
    if (auto a = match_pp(w, lo, hi)) return a;
    if (auto a = match_gen_power(w, lo, hi)) return a;
    return std::nullopt;
  }

private:
  const Catalog& cat_;
  int p_;

  Word slice(const Word& w, std::size_t from, std::size_t to) const {
    std::vector<Syllable> syl(w.syllables().begin() + static_cast<long>(from),
                              w.syllables().begin() + static_cast<long>(to));
    return Word::from_syllables(w.rank(), std::move(syl));
  }

  std::optional<Arrangement> match_apfam(const Word& w, int lo, int hi) {
    const auto& syl = w.syllables();
    std::vector<Int> alphas, betas;
    std::size_t i = 0;
    int g = lo;
    // Leading powers: single syllables of consecutive generators that do not
    // recur later in the word.
    while (i < syl.size() && syl[i].gen == g) {
      bool recurs = false;
      for (std::size_t j = i + 1; j < syl.size() && !recurs; ++j)
        recurs = (syl[j].gen == g);
      if (recurs) break;
      if (syl[i].exp % p_ != 0) break;  // inadmissible as a power slot
      alphas.push_back(syl[i].exp);
      ++i;
      ++g;
    }
    // Commutator chunks [x_g^b, x_{g+1}^b'].
    while (i + 4 <= syl.size() && syl[i].gen == g) {
      const Syllable& s0 = syl[i];
      const Syllable& s1 = syl[i + 1];
      const Syllable& s2 = syl[i + 2];
      const Syllable& s3 = syl[i + 3];
      if (s1.gen != g + 1 || s2.gen != g || s3.gen != g + 1) return std::nullopt;
      if (s2.exp != -s0.exp || s3.exp != -s1.exp) return std::nullopt;
      betas.push_back(s0.exp);
      betas.push_back(s1.exp);
      i += 4;
      g += 2;
    }
    if (i != syl.size() || g != hi + 1) return std::nullopt;
    std::vector<Int> params;
    params.push_back(Int(alphas.size()));
    params.push_back(Int(betas.size() / 2));
    params.insert(params.end(), alphas.begin(), alphas.end());
    params.insert(params.end(), betas.begin(), betas.end());
    Arrangement a{"apfam", std::move(params), {}};
    std::string why;
    if (!cat_.require("apfam").validate_params(a.params, &why))
      return std::nullopt;
    return a;
  }

  std::optional<Arrangement> match_comm(const Word& w, int lo, int hi) {
    const auto& syl = w.syllables();
    for (int m = lo; m < hi; ++m) {
      std::size_t a_end = 0;
      while (a_end < syl.size() && syl[a_end].gen <= m) ++a_end;
      if (a_end == 0 || a_end == syl.size()) continue;
      std::size_t b_end = a_end;
      while (b_end < syl.size() && syl[b_end].gen > m) ++b_end;
      if (b_end == a_end || b_end == syl.size()) continue;
      Word A = slice(w, 0, a_end);
      Word B = slice(w, a_end, b_end);
      if (!covers_exactly(A, lo, m) || !covers_exactly(B, m + 1, hi)) continue;
      if (commutator(A, B) != w) continue;
      auto ca = match(A, lo, m);
      if (!ca) continue;
      auto cb = match(B, m + 1, hi);
      if (!cb) continue;
      return Arrangement{"comm", {}, {std::move(*ca), std::move(*cb)}};
    }
    return std::nullopt;
  }

  // Factorizations P = A^alpha with p | alpha, alpha != 0, A matchable.
  std::optional<std::pair<Int, Arrangement>> match_power_block(const Word& P,
                                                               int lo,
                                                               int hi) {
    if (lo == hi) {
      // Single generator: P = x^E, take alpha = E, child = x.
      const auto& syl = P.syllables();
      if (syl.size() != 1) return std::nullopt;
      const Int& E = syl[0].exp;
      if (E == 0 || E % p_ != 0) return std::nullopt;
      return std::make_pair(E, Arrangement{"gen", {Int(1)}, {}});
    }
    auto [root, e] = plain_root(P);
    for (int q = e; q >= 2; --q) {
      if (e % q != 0 || q % p_ != 0) continue;
      Word child_pos = q == e ? root : power(root, e / q);
      if (auto ca = match(child_pos, lo, hi))
        return std::make_pair(Int(q), std::move(*ca));
      Word child_neg = invert(child_pos);
      if (auto ca = match(child_neg, lo, hi))
        return std::make_pair(Int(-q), std::move(*ca));
    }
    return std::nullopt;
  }

  std::optional<Arrangement> match_pp(const Word& w, int lo, int hi) {
    const auto& syl = w.syllables();
    for (int m = lo; m < hi; ++m) {
      std::size_t split = 0;
      while (split < syl.size() && syl[split].gen <= m) ++split;
      if (split == 0 || split == syl.size()) continue;
      bool clean = true;
      for (std::size_t j = split; j < syl.size() && clean; ++j)
        clean = (syl[j].gen > m);
      if (!clean) continue;
      Word P = slice(w, 0, split);
      Word Q = slice(w, split, syl.size());
      if (!covers_exactly(P, lo, m) || !covers_exactly(Q, m + 1, hi)) continue;
      auto left = match_power_block(P, lo, m);
      if (!left) continue;
      auto right = match_power_block(Q, m + 1, hi);
      if (!right) continue;
      return Arrangement{"pp",
                         {left->first, right->first},
                         {std::move(left->second), std::move(right->second)}};
    }
    return std::nullopt;
  }

  std::optional<Arrangement> match_gen_power(const Word& w, int lo, int hi) {
    auto [root, e] = plain_root(w);
    if (e < 2) return std::nullopt;
    for (int q = e; q >= 2; --q) {
      if (e % q != 0) continue;
      Word child_pos = q == e ? root : power(root, e / q);
      if (auto ca = match(child_pos, lo, hi))
        return Arrangement{"gen", {Int(q)}, {std::move(*ca)}};
      Word child_neg = invert(child_pos);
      if (auto ca = match(child_neg, lo, hi))
        return Arrangement{"gen", {Int(-q)}, {std::move(*ca)}};
    }
    return std::nullopt;
  }
};

}  // namespace

std::optional<Arrangement> match_arrangement(const Word& w, int p,
                                             const Catalog& cat) {
  require_prime(p);
  Matcher matcher(cat, p);
  auto a = matcher.match(w, 0, w.rank() - 1);
  if (!a) return std::nullopt;
  // A match must re-expand to the word and be admissible; drop it otherwise.
  try {
    if (expand(*a, cat) != w) return std::nullopt;
    certify_arrangement(*a, p, cat);
  } catch (const DomainError&) {
    return std::nullopt;
  }
  return a;
}

}  // namespace testel
