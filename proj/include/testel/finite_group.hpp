#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "testel/config.hpp"
#include "testel/word.hpp"

#include "json.hpp"

namespace testel {

// Explicit finite p-group: full multiplication table, generator list, and a
// breadth-first expression of every element as a product of generators (used
// to extend candidate homomorphisms from generator images).
struct FiniteGroup {
  int order = 1;
  std::vector<std::vector<int>> table;
  int identity = 0;
  std::vector<int> generators;
  int p = 2;
  std::string label;
  std::vector<int> inverse;
  std::vector<int> expr_parent;  // -1 at the identity
  std::vector<int> expr_gen;     // index into `generators`

  int mul(int a, int b) const { return table[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]; }
  int inv(int a) const { return inverse[static_cast<std::size_t>(a)]; }
  int pow(int a, const Int& e) const;
  int element_order(int a) const;
  int commutator_of(int a, int b) const;
};

// (Z/p)^n under addition.
FiniteGroup build_elementary_abelian(int p, int n);
// Z/p^k1 x Z/p^k2 x ...
FiniteGroup build_cyclic_product(int p, const std::vector<int>& ks);
// Triples over F_p with (a1,b1,c1)(a2,b2,c2) = (a1+a2, b1+b2, c1+c2+b1*a2);
// rejected for p = 2.
FiniteGroup build_heisenberg(int p);
// Catalog spec strings: "ea:p,n", "cp:p,k1.k2...", "heis:p".
FiniteGroup build_group_from_spec(std::string_view spec);

// Table evaluation of a word at the given generator images.
int eval_word(const FiniteGroup& g, const Word& w,
              const std::vector<int>& images);

struct Endomorphism {
  std::vector<int> map;
  bool bijective = false;

  int operator()(int x) const { return map[static_cast<std::size_t>(x)]; }
};

std::vector<int> subgroup_closure(const FiniteGroup& g, std::vector<int> seed);
bool is_subgroup(const FiniteGroup& g, const std::vector<int>& sorted_elems);

// Exhaustive isomorphism test between induced subgroup tables (intended for
// the catalog's small orders).
bool subgroups_isomorphic(const FiniteGroup& g, const std::vector<int>& a,
                          const std::vector<int>& b);

// Caches the exhaustive enumerations for one group.
class Oracle {
public:
  explicit Oracle(FiniteGroup g, Config cfg = {});

  const FiniteGroup& group() const { return group_; }

  // All endomorphisms, enumerated by generator-image tuples in lexicographic
  // order. Throws BudgetError if order^generators exceeds the budget.
  const std::vector<Endomorphism>& endomorphisms();

  // Indices of the bijective endomorphisms.
  const std::vector<int>& automorphisms();

  struct Retract {
    std::vector<int> image;              // sorted element set
    std::vector<int> retraction_indices; // indices into endomorphisms()
  };
  const std::vector<Retract>& retracts();

  std::vector<int> stable_image(const Endomorphism& phi) const;

  struct TestDecision {
    bool by_endos;
    bool by_retracts;
  };
  TestDecision test_element_decide(int g);

  std::vector<std::vector<int>> minimal_retracts_over(const std::vector<int>& h);

  struct OrbitReport {
    bool applicable = false;
    int orbit_size = 0;
    int preserving_endos = 0;
    int violations = 0;
  };
  OrbitReport orbit_check(int u);

  // Phi(G) = closure of p-th powers and commutators.
  const std::vector<int>& frattini();
  // Independent cross-check: intersection of the kernels of all nontrivial
  // homomorphisms onto Z/p.
  std::vector<int> frattini_via_maximal();

private:
  FiniteGroup group_;
  Config cfg_;
  std::optional<std::vector<Endomorphism>> endos_;
  std::optional<std::vector<int>> autos_;
  std::optional<std::vector<Retract>> retracts_;
  std::optional<std::vector<int>> frattini_;
};

// Report for the CLI: {"group": label, "checks": [{name, status, counts}]}.
nlohmann::json oracle_report(Oracle& oracle,
                             const std::vector<std::string>& checks);

}  // namespace testel
