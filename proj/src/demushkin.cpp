#include "testel/demushkin.hpp"

#include <algorithm>
#include <set>

#include "testel/cert_engine.hpp"
#include "testel/frattini.hpp"

namespace testel {

std::string to_string(DemushkinCase c) {
  switch (c) {
    case DemushkinCase::I: return "I";
    case DemushkinCase::II: return "II";
    case DemushkinCase::IIIa: return "III-a";
    case DemushkinCase::IIIb: return "III-b";
  }
  return "I";
}

DemushkinCase demushkin_case_from_string(const std::string& s) {
  if (s == "I" || s == "i") return DemushkinCase::I;
  if (s == "II" || s == "ii") return DemushkinCase::II;
  if (s == "III-a" || s == "IIIa" || s == "iii-a") return DemushkinCase::IIIa;
  if (s == "III-b" || s == "IIIb" || s == "iii-b") return DemushkinCase::IIIb;
  throw DomainError("unknown case tag: " + s);
}

Int FExponent::two_to_f() const {
  if (infinite) return 0;
  Int v = 1;
  for (int i = 0; i < value; ++i) v *= 2;
  return v;
}

std::string FExponent::to_string() const {
  return infinite ? "inf" : std::to_string(value);
}

namespace {

bool is_power_of(const Int& q, int p) {
  if (q < p) return false;
  Int n = q;
  while (n % p == 0) n /= p;
  return n == 1;
}

void require_f(const std::optional<FExponent>& f, const char* tag) {
  if (!f)
    throw DomainError(std::string("case ") + tag + " requires the exponent f");
  if (!f->infinite && f->value < 2)
    throw DomainError(std::string("case ") + tag +
                      " requires f in {2, 3, .., inf}");
}

Word comm_chain(int rank, int first, int last) {
  Word w = Word::identity(rank);
  for (int i = first; i + 1 <= last; i += 2)
    w = concat(w, commutator(Word::generator(rank, i - 1),
                             Word::generator(rank, i)));
  return w;
}

}  // namespace

void DemushkinInvariants::validate() const {
  require_prime(p);
  if (d < 2) throw DomainError("generator count d must be >= 2");
  switch (tag) {
    case DemushkinCase::I:
      if (q == 2) throw DomainError("case I requires q != 2");
      if (q != 0 && !is_power_of(q, p))
        throw DomainError("case I requires q = 0 or q a power of p");
      if (d % 2 != 0) throw DomainError("case I requires d even");
      break;
    case DemushkinCase::II:
      if (q != 2 || p != 2) throw DomainError("case II requires p = q = 2");
      if (d % 2 == 0) throw DomainError("case II requires d odd");
      require_f(f, "II");
      break;
    case DemushkinCase::IIIa:
      if (q != 2 || p != 2) throw DomainError("case III-a requires p = q = 2");
      if (d % 2 != 0) throw DomainError("case III-a requires d even");
      require_f(f, "III-a");
      break;
    case DemushkinCase::IIIb:
      if (q != 2 || p != 2) throw DomainError("case III-b requires p = q = 2");
      if (d % 2 != 0) throw DomainError("case III-b requires d even");
      if (d < 4) throw DomainError("case III-b requires d >= 4");
      require_f(f, "III-b");
      break;
  }
}

Word build_relator(const DemushkinInvariants& inv) {
  inv.validate();
  const int d = inv.d;
  switch (inv.tag) {
    case DemushkinCase::I:
      // x1^q [x1,x2][x3,x4]..[x_{d-1},x_d]
      return concat(Word::generator(d, 0, inv.q), comm_chain(d, 1, d));
    case DemushkinCase::II:
      // x1^2 x2^(2^f) [x2,x3][x4,x5]..[x_{d-1},x_d]
      return concat(concat(Word::generator(d, 0, 2),
                           Word::generator(d, 1, inv.f->two_to_f())),
                    comm_chain(d, 2, d));
    case DemushkinCase::IIIa:
      // x1^(2^f + 2) [x1,x2][x3,x4]..[x_{d-1},x_d]
      return concat(Word::generator(d, 0, inv.f->two_to_f() + 2),
                    comm_chain(d, 1, d));
    case DemushkinCase::IIIb:
      // x1^2 [x1,x2] x3^(2^f) [x3,x4][x5,x6]..[x_{d-1},x_d]
      return concat(
          concat(concat(Word::generator(d, 0, 2), comm_chain(d, 1, 2)),
                 Word::generator(d, 2, inv.f->two_to_f())),
          comm_chain(d, 3, d));
  }
  throw DomainError("unreachable case tag");
}

std::string presentation_text(const DemushkinInvariants& inv) {
  std::string gens;
  for (int i = 1; i <= inv.d; ++i)
    gens += (i > 1 ? "," : "") + std::string("x") + std::to_string(i);
  return "<" + gens + " | " + to_string(build_relator(inv)) + ">";
}

SurfaceContext make_surface_context(bool orientable, int genus, int p) {
  require_prime(p);
  if (genus < 1) throw DomainError("genus must be >= 1");
  if (orientable) {
    int rank = 2 * genus;
    return SurfaceContext{true, genus, p, comm_chain(rank, 1, rank)};
  }
  Word rel = Word::identity(genus);
  for (int i = 0; i < genus; ++i)
    rel = concat(rel, Word::generator(genus, i, 2));
  return SurfaceContext{false, genus, p, rel};
}

nlohmann::json to_json(const CheckResult& r) {
  nlohmann::json j;
  j["decision"] = to_string(r.decision);
  auto reasons = nlohmann::json::array();
  for (const auto& reason : r.reasons) {
    nlohmann::json jr;
    jr["rule"] = reason.rule;
    jr["paper_ref"] = reason.citation;
    jr["details"] = reason.details;
    reasons.push_back(jr);
  }
  j["reasons"] = reasons;
  if (r.conclusion) j["conclusion"] = to_string(*r.conclusion);
  return j;
}

namespace {

std::string join_ints(const std::vector<Int>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + v[i].str();
  return out;
}

Word substituted_conclusion(const Word& w, const std::vector<Int>& alphas,
                            int ambient_rank) {
  std::vector<Word> images;
  for (std::size_t i = 0; i < alphas.size(); ++i)
    images.push_back(
        Word::generator(ambient_rank, static_cast<int>(i), alphas[i]));
  return substitute(w, images);
}

}  // namespace

CheckResult check_demushkin_test(int n, int p, int k,
                                 const std::vector<Int>& alphas,
                                 const std::optional<Word>& w,
                                 const Config&) {
  require_prime(p);
  if (n <= 2) throw DomainError("d(G) = n > 2 required");
  int half = n / 2;
  if (k < half + 1 || k > n)
    throw DomainError("k out of range: floor(n/2)+1 <= k <= n required");
  if (static_cast<int>(alphas.size()) != k)
    throw DomainError("expected k exponents");
  for (const auto& a : alphas)
    if (a == 0) throw DomainError("zero exponent");
  if (w && w->rank() != k)
    throw DomainError("test word must live in the free group of rank k");

  CheckResult result;
  int divisible = 0;
  for (const auto& a : alphas)
    if (a % p == 0) ++divisible;
  int threshold = k - half + 1;
  bool count_ok = divisible >= threshold;
  bool p2_clause_ok = !(p == 2 && n <= 4 && k >= n);

  result.reasons.push_back(Reason{
      "demushkin-power-substitution",
      "substituting generator powers into a test word of the rank-k free "
      "pro-p group yields a test element when enough exponents are "
      "divisible by p: proper retracts have rank at most floor(n/2)",
      {{"n", std::to_string(n)},
       {"p", std::to_string(p)},
       {"k", std::to_string(k)},
       {"alphas", join_ints(alphas)},
       {"divisible", std::to_string(divisible)},
       {"threshold", std::to_string(threshold)},
       {"retract_rank_bound", std::to_string(half)},
       {"generating_set", "presentation basis x1..xn (minimality assumed)"}}});

  if (!count_ok) {
    result.decision = Verdict::Reject;
    result.reasons.push_back(
        Reason{"violated-clause",
               "fewer than k - floor(n/2) + 1 exponents divisible by p",
               {}});
    return result;
  }
  if (!p2_clause_ok) {
    result.decision = Verdict::Reject;
    result.reasons.push_back(Reason{
        "violated-clause", "p = 2 with n <= 4 requires k < n", {}});
    return result;
  }
  result.decision = Verdict::Accept;
  if (w) result.conclusion = substituted_conclusion(*w, alphas, n);
  return result;
}

CheckResult check_demushkin_test_2(int n, const std::vector<Int>& alphas,
                                   const std::optional<Word>& w,
                                   const Config&) {
  if (n < 3 || n > 4) throw DomainError("3 <= d(G) = n <= 4 required");
  if (static_cast<int>(alphas.size()) != n)
    throw DomainError("expected n exponents");
  if (w && w->rank() != n)
    throw DomainError("test word must live in the free group of rank n");

  CheckResult result;
  result.reasons.push_back(Reason{
      "demushkin-even-power-substitution",
      "for pro-2 Demushkin groups with 3 <= d(G) <= 4, substituting nonzero "
      "even powers of a minimal generating set into a test word yields a "
      "test element",
      {{"n", std::to_string(n)}, {"alphas", join_ints(alphas)}}});
  for (const auto& a : alphas) {
    if (a == 0 || a % 2 != 0) {
      result.decision = Verdict::Reject;
      result.reasons.push_back(Reason{
          "violated-clause",
          "exponent " + a.str() + " is not a nonzero even integer", {}});
      return result;
    }
  }
  result.decision = Verdict::Accept;
  if (w) result.conclusion = substituted_conclusion(*w, alphas, n);
  return result;
}

Certificate certify_surface(int genus, int p, int k, const std::vector<Int>& s,
                            const Word& w, const Config& cfg) {
  require_prime(p);
  if (genus < 2) throw DomainError("genus must be >= 2");
  if (k < genus + 1 || k > 2 * genus)
    throw DomainError("k out of range: n+1 <= k <= 2n required");
  if (static_cast<int>(s.size()) != k) throw DomainError("expected k exponents");
  for (const auto& si : s)
    if (si == 0) throw DomainError("zero exponent");
  if (w.rank() != k)
    throw DomainError("witness word must live in the free group of rank k");

  const int d = 2 * genus;
  Word conclusion = substituted_conclusion(w, s, d);
  Certificate cert(conclusion, GroupContext::free_discrete(d, p));
  cert.entry = "certify_surface";
  cert.add_reason(
      "surface-context",
      "orientable surface groups are residually-p Turner groups; their "
      "pro-p completions are Demushkin with d = 2n, q = 0",
      {{"genus", std::to_string(genus)},
       {"p", std::to_string(p)},
       {"k", std::to_string(k)},
       {"exponents", join_ints(s)},
       {"witness_word", to_string(w)},
       {"witness_rank", std::to_string(k)},
       {"relator", to_string(make_surface_context(true, genus, p).relator)}});

  Certificate w_cert =
      certify_free_pro_p(w, GroupContext::free_pro_p(k, p), cfg);
  bool w_is_test = w_cert.verdict == Verdict::Test;

  int divisible = 0;
  for (const auto& si : s)
    if (si % p == 0) ++divisible;
  int threshold = k - genus + 1;
  bool count_ok = divisible >= threshold;
  // d(G) = 2n <= 4 happens exactly at genus 2: the p = 2 clause of the
  // power-substitution theorem then demands k < 2n.
  bool p2_clause_ok = !(p == 2 && genus == 2 && k >= d);

  if (w_is_test && count_ok && p2_clause_ok) {
    cert.add_reason("surface-power-substitution",
                    "power substitution into a test word transfers through "
                    "the Demushkin completion to the surface group",
                    {{"divisible", std::to_string(divisible)},
                     {"threshold", std::to_string(threshold)}});
    for (const auto& r : w_cert.reasons) cert.reasons.push_back(r);
    cert.verdict = Verdict::Test;
    return cert;
  }

  // Genus-2 pro-2 route: all-even exponents over the full generating set.
  if (genus == 2 && p == 2 && k == d && w_is_test) {
    bool all_even = std::all_of(s.begin(), s.end(), [](const Int& si) {
      return si != 0 && si % 2 == 0;
    });
    if (all_even) {
      cert.add_reason("surface-even-power-substitution",
                      "genus-2 pro-2 route: nonzero even powers over the "
                      "whole generating set substitute into any test word "
                      "(d(G) = 4 case of the even-power theorem)",
                      {{"exponents", join_ints(s)}});
      for (const auto& r : w_cert.reasons) cert.reasons.push_back(r);
      cert.verdict = Verdict::Test;
      return cert;
    }
  }

  // Cited literature family: the substituted free word is y1^c..y_{2n}^c
  // with a single c >= 2.
  if (k == d) {
    Word t_free = substituted_conclusion(w, s, k);
    bool family = static_cast<int>(t_free.syllable_count()) == k;
    Int c = 0;
    if (family) {
      for (int i = 0; i < k && family; ++i) {
        const Syllable& syl = t_free.syllables()[static_cast<std::size_t>(i)];
        family = (syl.gen == i);
        if (i == 0)
          c = syl.exp;
        else
          family = family && (syl.exp == c);
      }
      family = family && c >= 2;
    }
    if (family) {
      cert.add_reason("surface-uniform-power-family",
                      "Konieczny-Rosenberger-Wolny / O'Neill-Turner: "
                      "x1^c x2^c .. x_{2n}^c is a test element of the "
                      "orientable surface group for every c >= 2",
                      {{"c", c.str()}});
      cert.verdict = Verdict::Test;
      return cert;
    }
  }

  cert.verdict = Verdict::Reject;
  if (!count_ok) {
    cert.add_reason("violated-clause",
                    "fewer than k - n + 1 exponents divisible by p",
                    {{"divisible", std::to_string(divisible)},
                     {"threshold", std::to_string(threshold)}});
  } else if (!p2_clause_ok) {
    cert.add_reason("violated-clause",
                    "p = 2 with genus 2 requires k < 2n", {});
  } else {
    cert.add_reason("violated-clause",
                    "witness word did not certify TEST in the rank-k free "
                    "pro-p group",
                    {{"witness_verdict", to_string(w_cert.verdict)}});
  }
  return cert;
}

Certificate certify_nonorientable(int genus, int p,
                                  const std::vector<int>& letters,
                                  const Word& w, const Config& cfg) {
  require_prime(p);
  if (p == 2) throw DomainError("p >= 3 required");
  if (genus < 3) throw DomainError("genus must be >= 3");
  if (static_cast<int>(letters.size()) != genus - 1)
    throw DomainError("expected n-1 letters");
  std::set<int> distinct(letters.begin(), letters.end());
  if (distinct.size() != letters.size())
    throw DomainError("letters must be distinct");
  for (int l : letters)
    if (l < 1 || l > genus) throw DomainError("letter index out of range");
  if (w.rank() != genus - 1)
    throw DomainError("word must live in the free group of rank n-1");

  SurfaceContext ctx = make_surface_context(false, genus, p);
  std::string letters_str;
  for (std::size_t i = 0; i < letters.size(); ++i)
    letters_str += (i ? "," : "") + std::to_string(letters[i]);

  std::vector<Word> images;
  for (int l : letters) images.push_back(Word::generator(genus, l - 1));
  Word conclusion = substitute(w, images);

  Certificate cert(conclusion, GroupContext::free_discrete(genus, p));
  cert.entry = "certify_nonorientable";
  cert.add_reason("nonorientable-context",
                  "non-orientable surface groups of genus >= 3 are "
                  "residually-p Turner groups",
                  {{"genus", std::to_string(genus)},
                   {"p", std::to_string(p)},
                   {"letters", letters_str},
                   {"witness_word", to_string(w)},
                   {"witness_rank", std::to_string(genus - 1)},
                   {"relator", to_string(ctx.relator)}});

  // Enabling fact: every exponent sum of the relator is 2, a unit mod p, so
  // the relator is primitive and the completion is free of rank n-1.
  bool relator_primitive = is_primitive(ctx.relator, p);
  cert.add_reason("relator-primitive",
                  "sigma_i(x1^2..xn^2) = 2 is a unit mod p for p >= 3, so "
                  "the pro-p completion is a free pro-p group of rank n-1",
                  {{"relator_primitive", relator_primitive ? "yes" : "no"}});
  if (!relator_primitive)
    throw DomainError("relator unexpectedly imprimitive");

  Certificate w_cert =
      certify_free_pro_p(w, GroupContext::free_pro_p(genus - 1, p), cfg);
  if (w_cert.verdict != Verdict::Test) {
    cert.verdict = Verdict::Reject;
    cert.add_reason("violated-clause",
                    "witness word did not certify TEST in the rank n-1 free "
                    "pro-p group",
                    {{"witness_verdict", to_string(w_cert.verdict)}});
    return cert;
  }
  cert.add_reason("distinct-generator-substitution",
                  "substituting distinct generators embeds the rank n-1 free "
                  "group; test elements transfer through the free pro-p "
                  "completion",
                  {});
  for (const auto& r : w_cert.reasons) cert.reasons.push_back(r);
  cert.verdict = Verdict::Test;
  return cert;
}

Int subgroup_rank_formula(int n, const Int& index) {
  if (n < 2) throw DomainError("d(G) >= 2 required");
  if (index < 1) throw DomainError("index must be >= 1");
  return 2 + index * (n - 2);
}

}  // namespace testel
