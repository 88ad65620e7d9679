#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "testel/errors.hpp"

namespace testel {

// Exponents are arbitrary-precision integers. All divisibility criteria used
// by the certifiers reduce to p-adic valuations of integers, so integer
// exponents carry the full content.
using Int = boost::multiprecision::cpp_int;

struct GeneratorSet {
  int rank;  // generators are named x1..x<rank>
};

// One maximal run x_g^e of a reduced word. Generator indices are 0-based
// internally; parsing and printing use the 1-based surface names.
struct Syllable {
  int gen;
  Int exp;

  bool operator==(const Syllable& o) const = default;
};

// A freely reduced word over a fixed generator set. Immutable value type:
// adjacent syllables always have distinct generators and nonzero exponents,
// and the empty syllable list is the identity.
class Word {
public:
  explicit Word(int rank) : rank_(rank) {
    if (rank < 1) throw DomainError("word rank must be >= 1");
  }

  static Word identity(int rank) { return Word(rank); }

  static Word generator(int rank, int gen, Int exp = 1);

  // Reduces an arbitrary syllable sequence.
  static Word from_syllables(int rank, std::vector<Syllable> syllables);

  int rank() const { return rank_; }
  bool is_identity() const { return syllables_.empty(); }
  const std::vector<Syllable>& syllables() const { return syllables_; }
  std::size_t syllable_count() const { return syllables_.size(); }

  // Total letter length, i.e. the sum of |exponent| over syllables.
  Int length() const;

  bool operator==(const Word& o) const = default;

private:
  int rank_;
  std::vector<Syllable> syllables_;
};

// Reduced product uv. Both words must share a generator set.
Word concat(const Word& u, const Word& v);

Word invert(const Word& u);

// u^k, with power(u, 0) the identity. Computed through the cyclic
// decomposition of u so conjugated powers stay short.
Word power(const Word& u, const Int& k);

// [u, v] = u v u^-1 v^-1.
Word commutator(const Word& u, const Word& v);

// Writes u = conjugator * core * conjugator^-1 with core cyclically reduced.
struct CyclicDecomposition {
  Word core;
  Word conjugator;
};
CyclicDecomposition cyclic_reduce(const Word& u);

// Maximal-root decomposition of a nontrivial word:
//   u = conjugator * root^multiplicity * conjugator^-1
// with multiplicity maximal (so root is not a proper power).
struct RootDecomposition {
  Word root;
  Int multiplicity;
  Word conjugator;
};
RootDecomposition max_root(const Word& u);

// Exponent-sum homomorphism for one generator (0-based index).
Int sigma(const Word& u, int gen);

// Homomorphic image: syllable (i, e) maps to images[i]^e, then reduce.
// images.size() must equal u.rank(); the images share a common rank.
Word substitute(const Word& u, std::span<const Word> images);
Word substitute(const Word& u, const std::vector<Word>& images);

// Surface grammar (whitespace ignored):
//   word = "1" | term , { "*" , term } ;
//   term = atom , [ "^" , int ] ;
//   atom = gen | "[" , word , "," , word , "]" | "(" , word , ")" ;
//   gen  = "x" , nat ;
Word parse_word(std::string_view text, const GeneratorSet& gens);
Word parse_word(std::string_view text, int rank);

// Canonical printing: syllables joined with "*", exponent omitted when +1,
// identity printed as "1".
std::string to_string(const Word& u);

}  // namespace testel
