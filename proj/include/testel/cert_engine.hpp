#pragma once

#include <optional>
#include <string>
#include <vector>

#include "testel/certificate.hpp"
#include "testel/config.hpp"
#include "testel/word.hpp"

namespace testel {

// Bracket-derivation tree of a higher commutator: a leaf is a generator, a
// node is the commutator of its two children over disjoint letter sets.
struct HigherCommutator {
  int letter = -1;
  std::vector<HigherCommutator> children;

  bool is_leaf() const { return children.empty(); }
};

std::string to_string(const HigherCommutator& hc);

// Matches words that are a commutator bracketing over distinct letters, each
// used exactly once, covering all `rank` generators (in any letter order).
std::optional<HigherCommutator> higher_commutator(const Word& w, int rank);

// Rank-two decision procedure: reduce to the maximal root, then the word is
// a test element iff both exponent sums of the root are divisible by p.
// Complete on its domain; never returns UNKNOWN.
Certificate certify_rank2(const Word& w, int p, const Config& cfg = {});

// Rule pipeline for free pro-p groups. Fixed rule order, first conclusive
// verdict wins; UNKNOWN certificates list every attempted rule.
Certificate certify_free_pro_p(const Word& w, const GroupContext& ctx,
                               const Config& cfg = {});

// Free discrete groups: gcd-form criterion with constructive retraction
// witnesses, then transfer from pro-p completions.
Certificate certify_discrete(const Word& w, int rank, const Config& cfg = {});

// Constructive densification. `outcome` is Test with the produced word and
// its certificate, or Failure when the bounded search is exhausted (never a
// fabricated verdict). `log` records the candidate trace.
struct DensifyResult {
  Verdict outcome = Verdict::Failure;
  std::optional<Word> t;
  std::optional<Certificate> certificate;
  std::vector<Reason> log;
};

// Finds t with sigma_i(t) == sigma_i(w) mod modulus for all i and a TEST
// certificate in the free discrete group of the given rank.
DensifyResult densify_discrete(const Word& w, int rank, const Int& modulus,
                               const Config& cfg = {});

// Finds t with sigma_i(t) == sigma_i(w) mod p^level and a TEST certificate
// in the free pro-p group; requires w in the Frattini subgroup.
DensifyResult densify_pro_p(const Word& w, int rank, int p, int level,
                            const Config& cfg = {});

// Machine-checks the witness attached to a certificate (retraction fixes the
// input and has a proper image; primitive-root witnesses recompose).
bool verify_witness(const Certificate& cert, std::string* why = nullptr);

// Re-executes the operation recorded in a certificate JSON and compares the
// verdict, the reason sequence and the witness byte for byte.
struct ReplayResult {
  bool matches = false;
  std::string mismatch;
  std::optional<Certificate> recomputed;
};

ReplayResult replay(const nlohmann::json& cert_json, const Config& cfg = {});

}  // namespace testel
