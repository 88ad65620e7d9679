#pragma once

#include <vector>

#include "testel/certificate.hpp"
#include "testel/config.hpp"
#include "testel/word.hpp"

namespace testel {

// Image of a word in F/Phi(F) = F_p^n: exponent sums mod p per generator.
// The word lies in the Frattini subgroup exactly when the vector vanishes.
struct FrattiniVector {
  int p;
  std::vector<int> residues;

  bool is_zero() const {
    for (int r : residues)
      if (r != 0) return false;
    return true;
  }
};

FrattiniVector frattini_vector(const Word& w, int p);

// Primitive = outside the Frattini subgroup.
bool is_primitive(const Word& w, int p);

// An index-p subgroup of the free pro-p group of rank n, named by its
// functional on F/Phi(F): a nonzero vector over F_p normalized so the first
// nonzero entry is 1. `pivot` is the index of that entry.
struct MaximalSubgroup {
  int p;
  std::vector<int> lambda;
  int pivot;

  int value_of(const Word& w) const;  // coset of w, in 0..p-1
};

// All (p^n - 1)/(p - 1) normalized functionals in lexicographic order.
std::vector<MaximalSubgroup> enumerate_maximal(int rank, int p);

// Free basis of ker(lambda) produced by Reidemeister-Schreier rewriting with
// the transversal {pivot^0, .., pivot^(p-1)} (scaled so rep(j) lands in
// coset j). Generators s_{i,j} = rep(j) x_i rep(j + lambda_i)^-1 are listed
// generator-major with the p-1 trivial pivot ones dropped, giving exactly
// p(n-1)+1 basis elements.
struct SchreierBasis {
  int parent_rank;
  int p;
  MaximalSubgroup subgroup;
  std::vector<Word> generators;   // as words in the parent group
  std::vector<Word> transversal;  // rep(0..p-1)
  std::vector<std::vector<int>> index_of;  // [gen][coset] -> basis index, -1 = trivial

  int rank() const { return static_cast<int>(generators.size()); }
};

SchreierBasis schreier_basis(const MaximalSubgroup& m, int rank);

// Rewrites a member of the subgroup as a word in the Schreier generators.
// Throws MembershipError when the coset scan does not return to 0.
Word rewrite_in_maximal(const Word& w, const SchreierBasis& basis);

// Exact decision of almost primitivity in the free pro-p group of rank n:
// ALMOST_PRIMITIVE iff w is in Phi(F) and, for every maximal subgroup M, the
// rewrite of w in M has some exponent sum not divisible by p. The certificate
// records every maximal-subgroup check; a NOT_ALMOST_PRIMITIVE verdict for a
// Frattini element carries the first witnessing M.
Certificate is_almost_primitive(const Word& w, int rank, int p,
                                const Config& cfg = {});

}  // namespace testel
