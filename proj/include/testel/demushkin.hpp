#pragma once

#include <optional>
#include <string>
#include <vector>

#include "testel/certificate.hpp"
#include "testel/config.hpp"
#include "testel/word.hpp"

namespace testel {

enum class DemushkinCase { I, II, IIIa, IIIb };

std::string to_string(DemushkinCase c);
DemushkinCase demushkin_case_from_string(const std::string& s);

// Exponent parameter of the p=2 presentation cases; 2^f reads as 0 when
// f is infinite.
struct FExponent {
  bool infinite = false;
  int value = 0;

  static FExponent inf() { return FExponent{true, 0}; }
  static FExponent of(int v) { return FExponent{false, v}; }

  Int two_to_f() const;
  std::string to_string() const;
};

// Classification data (p, d, q, case, f) of a one-relator pro-p presentation.
struct DemushkinInvariants {
  int p = 2;
  int d = 2;
  Int q = 0;  // 0 or a power of p
  DemushkinCase tag = DemushkinCase::I;
  std::optional<FExponent> f;  // cases II / III only

  // Throws DomainError naming the violated clause.
  void validate() const;
};

// The classified relator word over x1..xd.
Word build_relator(const DemushkinInvariants& inv);

std::string presentation_text(const DemushkinInvariants& inv);

struct SurfaceContext {
  bool orientable;
  int genus;
  int p;
  Word relator;
};

SurfaceContext make_surface_context(bool orientable, int genus, int p);

// Hypothesis checkers. ACCEPT/REJECT decisions with recorded hypothesis
// arithmetic; when a test word w of the free group F(y1..yk) is supplied and
// the decision is ACCEPT, `conclusion` is the substituted word
// w(x1^a1,..,xk^ak) over the presentation basis x1..xn.
struct CheckResult {
  Verdict decision = Verdict::Reject;
  std::vector<Reason> reasons;
  std::optional<Word> conclusion;
};

nlohmann::json to_json(const CheckResult& r);

CheckResult check_demushkin_test(int n, int p, int k,
                                 const std::vector<Int>& alphas,
                                 const std::optional<Word>& w = {},
                                 const Config& cfg = {});

CheckResult check_demushkin_test_2(int n, const std::vector<Int>& alphas,
                                   const std::optional<Word>& w = {},
                                   const Config& cfg = {});

// Test-element certification in the orientable surface group of genus n
// through its Demushkin pro-p completion (d = 2n, q = 0), plus the
// literature family x1^c..x_{2n}^c (c >= 2) cited directly.
Certificate certify_surface(int genus, int p, int k, const std::vector<Int>& s,
                            const Word& w, const Config& cfg = {});

// Non-orientable genus-n surface group, p >= 3: the completion is free
// pro-p of rank n-1, so any TEST word substituted over distinct generators
// transfers. `letters` are 1-based generator indices, n-1 of them, distinct.
Certificate certify_nonorientable(int genus, int p,
                                  const std::vector<int>& letters,
                                  const Word& w, const Config& cfg = {});

// d(H) = 2 + [G:H](d(G) - 2) for finite-index subgroups of Demushkin groups.
Int subgroup_rank_formula(int n, const Int& index);

}  // namespace testel
