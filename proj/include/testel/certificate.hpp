#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "testel/word.hpp"

#include "json.hpp"

namespace testel {

enum class Verdict {
  Test,
  NotTest,
  AlmostPrimitive,
  NotAlmostPrimitive,
  Unknown,
  Accept,
  Reject,
  Failure,
};

std::string to_string(Verdict v);
Verdict verdict_from_string(const std::string& s);

// Exit-code convention shared with the CLI: 0 positive, 1 negative,
// 2 inconclusive.
int exit_code(Verdict v);

struct GroupContext {
  enum class Kind { FreeProP, FreeDiscrete };
  Kind kind;
  int rank;
  std::optional<int> p;  // required for FreeProP

  static GroupContext free_pro_p(int rank, int p) {
    return GroupContext{Kind::FreeProP, rank, p};
  }
  static GroupContext free_discrete(int rank,
                                    std::optional<int> p_hint = {}) {
    return GroupContext{Kind::FreeDiscrete, rank, p_hint};
  }
};

std::string to_string(GroupContext::Kind k);

// One applied rule. `citation` names the classical result or engine rule the
// step leans on; `details` holds the concrete recorded inputs/outputs so the
// step can be re-executed.
struct Reason {
  std::string rule;
  std::string citation;
  std::map<std::string, std::string> details;
};

// Machine-checkable evidence attached to negative (and some positive)
// verdicts. `kind` selects which fields are meaningful:
//   bezout_retraction : target + exponents (+ images, one per generator)
//   free_factor       : images (identity on kept generators, trivial on the
//                       omitted ones), description names the omitted ones
//   primitive_root    : target = the root, exponents = {multiplicity},
//                       lambda-free; unit_index in description details
//   maximal_subgroup  : lambda = the functional of the witnessing subgroup
//   trivial_retract   : identity element case
struct RetractWitness {
  std::string kind;
  std::string description;
  std::vector<Word> images;
  std::optional<Word> target;
  std::vector<Int> exponents;
  std::vector<int> lambda;
};

struct Certificate {
  Word input;
  GroupContext context;
  Verdict verdict = Verdict::Unknown;
  std::vector<Reason> reasons;
  std::optional<RetractWitness> witness;
  // Operation that produced the certificate; replay re-dispatches on it.
  std::string entry;

  Certificate(Word w, GroupContext ctx) : input(std::move(w)), context(ctx) {}

  void add_reason(std::string rule, std::string citation,
                  std::map<std::string, std::string> details = {}) {
    reasons.push_back(
        Reason{std::move(rule), std::move(citation), std::move(details)});
  }
};

nlohmann::json to_json(const RetractWitness& w);
nlohmann::json to_json(const Certificate& c);

}  // namespace testel
