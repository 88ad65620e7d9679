// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Each criterion is exhaustive or seeded-deterministic and is timed
// against its stated budget.
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "testel/arrangement.hpp"
#include "testel/cert_engine.hpp"
#include "testel/demushkin.hpp"
#include "testel/finite_group.hpp"
#include "testel/frattini.hpp"

using namespace testel;

namespace {

int failures = 0;

void criterion(int number, const std::string& label, double budget_seconds,
               const std::function<bool(std::string&)>& body) {
  std::string detail;
  auto start = std::chrono::steady_clock::now();
  bool ok = false;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    ok = false;
    detail = std::string("exception: ") + e.what();
  }
  double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  if (elapsed > budget_seconds) {
    ok = false;
    detail += (detail.empty() ? "" : "; ") + std::string("over time budget");
  }
  if (!ok) ++failures;
  std::printf("[%s] criterion %2d: %-38s (%.2fs / %.0fs)%s%s\n",
              ok ? "PASS" : "FAIL", number, label.c_str(), elapsed,
              budget_seconds, detail.empty() ? "" : " -- ",
              detail.c_str());
}

const std::vector<std::string>& catalog_specs() {
  static const std::vector<std::string> specs = {
      "ea:2,2", "ea:2,3", "ea:3,2", "cp:2,2.1", "cp:3,2", "heis:3"};
  return specs;
}

// Independent letter-level implementation of the rank-two criterion: cyclic
// reduction and root extraction on plain letter vectors, exponent sums by
// counting.
bool rank2_oracle_is_test(const Word& w, int p) {
  std::vector<int> letters;
  for (const auto& s : w.syllables()) {
    long long e = static_cast<long long>(s.exp);
    for (long long i = 0; i < std::abs(e); ++i)
      letters.push_back(e > 0 ? s.gen + 1 : -(s.gen + 1));
  }
  while (letters.size() >= 2 && letters.front() == -letters.back()) {
    letters.erase(letters.begin());
    letters.pop_back();
  }
  std::size_t n = letters.size();
  std::size_t period = n;
  for (std::size_t d = 1; d <= n; ++d) {
    if (n % d != 0) continue;
    bool periodic = true;
    for (std::size_t i = d; i < n && periodic; ++i)
      periodic = (letters[i] == letters[i - d]);
    if (periodic) {
      period = d;
      break;
    }
  }
  long long s1 = 0, s2 = 0;
  for (std::size_t i = 0; i < period; ++i) {
    if (letters[i] == 1) ++s1;
    if (letters[i] == -1) --s1;
    if (letters[i] == 2) ++s2;
    if (letters[i] == -2) --s2;
  }
  auto mod = [&](long long v) { return ((v % p) + p) % p; };
  return mod(s1) == 0 && mod(s2) == 0;
}

Word uniform_power_word(int k, int c) {
  Word w = Word::identity(k);
  for (int i = 0; i < k; ++i) w = concat(w, Word::generator(k, i, c));
  return w;
}

// Random admissible arrangement generator (seeded), depth <= 3, weight <= 8.
Arrangement random_arrangement(std::mt19937& rng, int p, int depth,
                               int weight_budget) {
  std::uniform_int_distribution<int> coin(0, 99);
  auto rand_nonzero = [&](bool multiple_of_p) {
    std::uniform_int_distribution<int> d(1, 3);
    int v = d(rng) * (multiple_of_p ? p : 1);
    return Int(coin(rng) % 2 ? v : -v);
  };
  bool compose = depth > 0 && weight_budget >= 2 && coin(rng) < 55;
  if (!compose || weight_budget < 2) {
    if (weight_budget < 2) return Arrangement{"gen", {rand_nonzero(false)}, {}};
    int pick = coin(rng) % 3;
    if (pick == 0) return Arrangement{"comm", {}, {}};
    if (pick == 1)
      return Arrangement{"pp", {rand_nonzero(true), rand_nonzero(true)}, {}};
    int n = 1 + coin(rng) % 2;
    int k = weight_budget - n >= 2 && coin(rng) % 2 ? 1 : 0;
    if (n + 2 * k > weight_budget) k = 0;
    std::vector<Int> params{Int(n), Int(k)};
    for (int i = 0; i < n; ++i) params.push_back(rand_nonzero(true));
    for (int i = 0; i < 2 * k; ++i) params.push_back(rand_nonzero(false));
    return Arrangement{"apfam", std::move(params), {}};
  }
  int pick = coin(rng) % 3;
  if (pick == 0) {
    Arrangement child = random_arrangement(rng, p, depth - 1, weight_budget);
    Int e = rand_nonzero(false);
    if (e == 1 || e == -1) e *= 2;
    return Arrangement{"gen", {e}, {child}};
  }
  std::uniform_int_distribution<int> split(1, weight_budget - 1);
  int left = split(rng);
  Arrangement a = random_arrangement(rng, p, depth - 1, left);
  Arrangement b = random_arrangement(rng, p, depth - 1, weight_budget - left);
  if (pick == 1) return Arrangement{"comm", {}, {a, b}};
  return Arrangement{"pp", {rand_nonzero(true), rand_nonzero(true)}, {a, b}};
}

}  // namespace

int main() {
  criterion(1, "retract theorem equivalence", 60, [](std::string& detail) {
    for (const auto& spec : catalog_specs()) {
      Oracle oracle(build_group_from_spec(spec));
      for (int g = 0; g < oracle.group().order; ++g) {
        auto d = oracle.test_element_decide(g);
        if (d.by_endos != d.by_retracts) {
          detail = spec + " element " + std::to_string(g);
          return false;
        }
      }
    }
    return true;
  });

  criterion(2, "stable image is a bijective retract", 120,
            [](std::string& detail) {
    for (const auto& spec : catalog_specs()) {
      Oracle oracle(build_group_from_spec(spec));
      for (const auto& e : oracle.endomorphisms()) {
        auto stable = oracle.stable_image(e);
        bool is_retract_image = false;
        for (const auto& r : oracle.retracts())
          is_retract_image = is_retract_image || r.image == stable;
        std::set<int> mapped;
        bool closed = true;
        for (int x : stable) {
          int fx = e(x);
          closed = closed &&
                   std::binary_search(stable.begin(), stable.end(), fx);
          mapped.insert(fx);
        }
        bool bijective_on_stable = closed && mapped.size() == stable.size();
        if (!is_retract_image || !bijective_on_stable) {
          detail = spec;
          return false;
        }
      }
    }
    return true;
  });

  criterion(3, "orbit theorem on applicable groups", 120,
            [](std::string& detail) {
    int applicable_groups = 0;
    for (const auto& spec : catalog_specs()) {
      Oracle oracle(build_group_from_spec(spec));
      bool group_applicable = true;
      for (int u = 0; u < oracle.group().order; ++u) {
        if (u == oracle.group().identity) continue;
        auto r = oracle.orbit_check(u);
        if (!r.applicable) {
          group_applicable = false;
          break;
        }
        if (r.violations != 0) {
          detail = spec + " element " + std::to_string(u);
          return false;
        }
      }
      if (group_applicable) ++applicable_groups;
    }
    if (applicable_groups == 0) {
      detail = "hypothesis held nowhere";
      return false;
    }
    return true;
  });

  criterion(4, "almost-primitivity scanner families", 30,
            [](std::string& detail) {
    auto expect = [&](const Word& w, int rank, int p, Verdict want) {
      auto cert = is_almost_primitive(w, rank, p);
      if (cert.verdict != want) {
        detail = to_string(w) + " p=" + std::to_string(p) + " got " +
                 to_string(cert.verdict);
        return false;
      }
      return true;
    };
    for (int p : {2, 3, 5})
      if (!expect(parse_word("[x1,x2]", 2), 2, p, Verdict::AlmostPrimitive))
        return false;
    for (int p : {2, 3}) {
      Word w = concat(Word::generator(2, 0, p), Word::generator(2, 1, p));
      if (!expect(w, 2, p, Verdict::AlmostPrimitive)) return false;
    }
    if (!expect(parse_word("x1^3*[x2,x3]", 3), 3, 3,
                Verdict::AlmostPrimitive))
      return false;
    for (int p : {2, 3, 5}) {
      if (!expect(Word::generator(2, 0, p), 2, p,
                  Verdict::NotAlmostPrimitive))
        return false;
      if (!expect(Word::generator(1, 0, p * p), 1, p,
                  Verdict::NotAlmostPrimitive))
        return false;
    }
    return true;
  });

  criterion(5, "rank-2 criterion complete vs oracle", 60,
            [](std::string& detail) {
    // All words of <= 4 syllables over {x1,x2}, exponents in [-3,3] \ {0},
    // deduplicated after free reduction.
    std::set<std::string> seen;
    std::vector<Word> words;
    std::vector<Syllable> atoms;
    for (int g = 0; g < 2; ++g)
      for (int e = -3; e <= 3; ++e)
        if (e != 0) atoms.push_back(Syllable{g, e});
    std::function<void(std::vector<Syllable>&, int)> enumerate =
        [&](std::vector<Syllable>& prefix, int remaining) {
          if (!prefix.empty()) {
            Word w = Word::from_syllables(2, prefix);
            if (!w.is_identity() && seen.insert(to_string(w)).second)
              words.push_back(w);
          }
          if (remaining == 0) return;
          for (const auto& a : atoms) {
            prefix.push_back(a);
            enumerate(prefix, remaining - 1);
            prefix.pop_back();
          }
        };
    std::vector<Syllable> prefix;
    enumerate(prefix, 4);

    for (const Word& w : words) {
      for (int p : {2, 3, 5}) {
        auto cert = certify_rank2(w, p);
        if (cert.verdict != Verdict::Test && cert.verdict != Verdict::NotTest) {
          detail = "UNKNOWN on " + to_string(w);
          return false;
        }
        bool oracle_verdict = rank2_oracle_is_test(w, p);
        if ((cert.verdict == Verdict::Test) != oracle_verdict) {
          detail = "disagreement on " + to_string(w) + " p=" +
                   std::to_string(p);
          return false;
        }
      }
    }
    detail = std::to_string(words.size()) + " words x 3 primes";
    return true;
  });

  criterion(6, "discrete gcd criterion with witnesses", 10,
            [](std::string& detail) {
    for (int s1 = -6; s1 <= 6; ++s1) {
      for (int s2 = -6; s2 <= 6; ++s2) {
        Word w = concat(Word::generator(2, 0, s1), Word::generator(2, 1, s2));
        auto cert = certify_discrete(w, 2);
        bool expected_test = s1 != 0 && s2 != 0 &&
                             gcd_int(Int(s1), Int(s2)) != 1;
        if ((cert.verdict == Verdict::Test) != expected_test) {
          detail = "s=(" + std::to_string(s1) + "," + std::to_string(s2) + ")";
          return false;
        }
        if (cert.verdict == Verdict::NotTest) {
          std::string why;
          if (!verify_witness(cert, &why)) {
            detail = "witness failed at s=(" + std::to_string(s1) + "," +
                     std::to_string(s2) + "): " + why;
            return false;
          }
        }
      }
    }
    return true;
  });

  criterion(7, "arrangement soundness, 200 seeded cases", 60,
            [](std::string& detail) {
    std::mt19937 rng(20260809);
    for (int trial = 0; trial < 200; ++trial) {
      int p = trial % 3 == 0 ? 3 : 2;
      Arrangement a = random_arrangement(rng, p, 3, 8);
      int wt = weight(a);
      Word w = expand(a);
      if (wt > 8 || w.rank() != wt) {
        detail = "weight bookkeeping at trial " + std::to_string(trial);
        return false;
      }
      auto cert = certify_arrangement(a, p);
      if (cert.verdict != Verdict::Test) {
        detail = "certify_arrangement failed: " + to_string(a);
        return false;
      }
      auto full = certify_free_pro_p(w, GroupContext::free_pro_p(wt, p));
      if (full.verdict != Verdict::Test) {
        detail = "dispatcher disagreed on " + to_string(a);
        return false;
      }
      // Block-substitution identity at the top node.
      if (!a.is_leaf()) {
        const auto& entry = Catalog::builtin().require(a.id);
        std::vector<Word> images;
        int offset = 0;
        for (const auto& child : a.children) {
          Word ew = expand(child);
          std::vector<Syllable> syl;
          for (const auto& s : ew.syllables())
            syl.push_back(Syllable{s.gen + offset, s.exp});
          images.push_back(Word::from_syllables(wt, std::move(syl)));
          offset += weight(child);
        }
        if (substitute(entry.make_template(a.params), images) != w) {
          detail = "block substitution identity failed: " + to_string(a);
          return false;
        }
      }
    }
    return true;
  });

  criterion(8, "demushkin checkers and relators", 5, [](std::string& detail) {
    // Threshold boundary at (n=4, p=3, k=3): exactly 2 divisible exponents.
    if (check_demushkin_test(4, 3, 3, {Int(3), Int(3), Int(1)}).decision !=
        Verdict::Accept) {
      detail = "(3,3,1) should be accepted";
      return false;
    }
    if (check_demushkin_test(4, 3, 3, {Int(3), Int(1), Int(1)}).decision !=
        Verdict::Reject) {
      detail = "(3,1,1) should be rejected";
      return false;
    }
    // p=2, n=4, k=4: rejected by the counting checker, accepted by the
    // even-power checker.
    std::vector<Int> evens{Int(2), Int(2), Int(2), Int(2)};
    if (check_demushkin_test(4, 2, 4, evens).decision != Verdict::Reject) {
      detail = "p=2 n=4 k=4 must be rejected by the counting checker";
      return false;
    }
    if (check_demushkin_test_2(4, evens).decision != Verdict::Accept) {
      detail = "p=2 n=4 all-even must be accepted by the even-power checker";
      return false;
    }
    // Relator shapes, byte for byte.
    DemushkinInvariants case_i{3, 4, Int(9), DemushkinCase::I, {}};
    if (to_string(build_relator(case_i)) !=
        "x1^10*x2*x1^-1*x2^-1*x3*x4*x3^-1*x4^-1") {
      detail = "case I relator";
      return false;
    }
    DemushkinInvariants case_ii{2, 3, Int(2), DemushkinCase::II,
                                FExponent::of(2)};
    if (to_string(build_relator(case_ii)) != "x1^2*x2^5*x3*x2^-1*x3^-1") {
      detail = "case II relator";
      return false;
    }
    DemushkinInvariants case_iiia{2, 2, Int(2), DemushkinCase::IIIa,
                                  FExponent::inf()};
    if (to_string(build_relator(case_iiia)) != "x1^3*x2*x1^-1*x2^-1") {
      detail = "case III-a relator";
      return false;
    }
    return true;
  });

  criterion(9, "densification fixed vector", 30, [](std::string& detail) {
    struct DiscreteCase {
      std::string w;
      int m;
    };
    const std::vector<DiscreteCase> discrete = {
        {"x1", 2}, {"x1", 3}, {"x1", 4},      {"x1", 6},
        {"[x1,x2]", 2},       {"[x1,x2]", 5}, {"x1*x2", 4}};
    for (const auto& c : discrete) {
      Word w = parse_word(c.w, 2);
      auto res = densify_discrete(w, 2, c.m);
      if (res.outcome != Verdict::Test) {
        detail = "discrete failure at " + c.w + " m=" + std::to_string(c.m);
        return false;
      }
      for (int g = 0; g < 2; ++g)
        if ((sigma(*res.t, g) - sigma(w, g)) % c.m != 0) {
          detail = "congruence violated at " + c.w;
          return false;
        }
      auto rep = replay(to_json(*res.certificate));
      if (!rep.matches) {
        detail = "certificate replay failed at " + c.w + ": " + rep.mismatch;
        return false;
      }
    }
    struct ProPCase {
      std::string w;
      int p;
      int s;
    };
    const std::vector<ProPCase> pro_p = {
        {"[x1,x2]", 2, 1}, {"x1^4", 2, 2}, {"x1^2*x2^-2", 2, 1}};
    for (const auto& c : pro_p) {
      Word w = parse_word(c.w, 2);
      auto res = densify_pro_p(w, 2, c.p, c.s);
      if (res.outcome != Verdict::Test) {
        detail = "pro-p failure at " + c.w;
        return false;
      }
      Int modulus = 1;
      for (int i = 0; i < c.s; ++i) modulus *= c.p;
      for (int g = 0; g < 2; ++g)
        if ((sigma(*res.t, g) - sigma(w, g)) % modulus != 0) {
          detail = "pro-p congruence violated at " + c.w;
          return false;
        }
      auto rep = replay(to_json(*res.certificate));
      if (!rep.matches) {
        detail = "pro-p replay failed at " + c.w;
        return false;
      }
    }
    return true;
  });

  criterion(10, "surface-group families", 5, [](std::string& detail) {
    for (auto [genus, p] :
         std::vector<std::pair<int, int>>{{2, 3}, {3, 2}, {3, 3}}) {
      int k = 2 * genus;
      Word product = uniform_power_word(k, 1);
      std::vector<Int> s(static_cast<std::size_t>(k), Int(p));
      auto cert = certify_surface(genus, p, k, s, product);
      if (cert.verdict != Verdict::Test) {
        detail = "uniform power family failed at genus " +
                 std::to_string(genus) + " p=" + std::to_string(p);
        return false;
      }
      if (cert.input != uniform_power_word(k, p)) {
        detail = "wrong conclusion word at genus " + std::to_string(genus);
        return false;
      }
    }
    // Genus-2 all-even pro-2 route must go through the even-power theorem.
    Word zieschang = parse_word("[x1,x2]*[x3,x4]", 4);
    auto cert = certify_surface(2, 2, 4, {Int(2), Int(-4), Int(2), Int(6)},
                                zieschang);
    if (cert.verdict != Verdict::Test) {
      detail = "genus-2 all-even case failed";
      return false;
    }
    bool via_even = false;
    for (const auto& r : cert.reasons)
      via_even = via_even || r.rule == "surface-even-power-substitution";
    if (!via_even) {
      detail = "genus-2 all-even case did not use the even-power route";
      return false;
    }
    return true;
  });

  if (failures == 0)
    std::printf("acceptance: all criteria passed\n");
  else
    std::printf("acceptance: %d criteria FAILED\n", failures);
  return failures == 0 ? 0 : 1;
}
