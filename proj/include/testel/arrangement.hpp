#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "testel/certificate.hpp"
#include "testel/config.hpp"
#include "testel/word.hpp"

namespace testel {

// AST of a composition arrangement: a catalog entry applied to integer
// parameters, either standing alone (leaf) or composed over child
// arrangements that fill its slots left-to-right in consecutive generator
// blocks.
struct Arrangement {
  std::string id;
  std::vector<Int> params;
  std::vector<Arrangement> children;

  bool is_leaf() const { return children.empty(); }
};

// One registered template family. `arity` and the template word may depend on
// the parameters (apfam does); `admissible` guards the parameters for a given
// prime and explains rejections.
struct CatalogEntry {
  std::string id;
  std::string citation;
  // Leaf-only entries cannot take child arrangements (their slots are fully
  // described by parameters).
  bool leaf_only = false;
  std::function<bool(const std::vector<Int>&, std::string*)> validate_params;
  std::function<int(const std::vector<Int>&)> arity;
  std::function<Word(const std::vector<Int>&)> make_template;
  std::function<bool(const std::vector<Int>&, int p, std::string*)> admissible;
};

class Catalog {
public:
  // gen(a)        x1^a                      (a != 0)
  // comm          [x1,x2]
  // pp(a1,a2)     x1^a1 x2^a2               (v_p(ai) >= 1)
  // apfam(n,k,a1..an,b1..b2k)
  //               x1^a1..xn^an [x_{n+1}^b1, x_{n+2}^b2] ..
  //                                         (v_p(ai) >= 1, bj != 0)
  static const Catalog& builtin();

  const CatalogEntry* find(const std::string& id) const;
  const CatalogEntry& require(const std::string& id) const;

  // Extension gate: the entry's sample instantiation must already certify
  // TEST for every prime in `sample_primes` before it is accepted.
  void register_entry(CatalogEntry entry,
                      const std::vector<Int>& sample_params,
                      const std::vector<int>& sample_primes);

  const std::vector<CatalogEntry>& entries() const { return entries_; }

private:
  std::vector<CatalogEntry> entries_;
};

// Surface grammar:  arr = id , "(" , [ args ] , ")" ;
//                   args = (arr | int) , { "," , (arr | int) } ;
// Integer arguments are the entry's parameters and must come first; the
// remaining arguments are child arrangements (none for a leaf, else exactly
// the entry's arity).
Arrangement parse_arrangement(std::string_view text,
                              const Catalog& cat = Catalog::builtin());

std::string to_string(const Arrangement& a);

int weight(const Arrangement& a, const Catalog& cat = Catalog::builtin());

// The word of the arrangement over x1..x_weight: children expand into
// consecutive disjoint generator blocks, then substitute into the template.
Word expand(const Arrangement& a, const Catalog& cat = Catalog::builtin());

// TEST certificate for expand(a) in the free pro-p group of rank weight(a);
// the reason list is the derivation tree. Throws DomainError when some node's
// parameters are inadmissible for p.
Certificate certify_arrangement(const Arrangement& a, int p,
                                const Catalog& cat = Catalog::builtin());

// Structural matcher: tries to recognize w as the expansion of a builtin
// arrangement admissible for p. Purely syntactic over consecutive generator
// blocks; a returned arrangement always re-expands to w exactly.
std::optional<Arrangement> match_arrangement(
    const Word& w, int p, const Catalog& cat = Catalog::builtin());

}  // namespace testel
