#include "testel/frattini.hpp"

#include <algorithm>

namespace testel {

bool is_prime(int p) {
  if (p < 2) return false;
  for (int d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

void require_prime(int p) {
  if (!is_prime(p)) throw DomainError("p = " + std::to_string(p) + " is not prime");
}

int p_valuation(const Int& k, int p) {
  if (k == 0) throw DomainError("p_valuation: zero has infinite valuation");
  Int n = abs(k);
  int v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

Int gcd_int(const Int& a, const Int& b) { return gcd(a, b); }

namespace {

int mod_residue(const Int& k, int p) {
  Int r = k % p;
  if (r < 0) r += p;
  return static_cast<int>(r);
}

}  // namespace

FrattiniVector frattini_vector(const Word& w, int p) {
  require_prime(p);
  FrattiniVector fv;
  fv.p = p;
  fv.residues.resize(static_cast<std::size_t>(w.rank()), 0);
  for (const auto& s : w.syllables())
    fv.residues[static_cast<std::size_t>(s.gen)] =
        mod_residue(fv.residues[static_cast<std::size_t>(s.gen)] + s.exp, p);
  return fv;
}

bool is_primitive(const Word& w, int p) {
  return !frattini_vector(w, p).is_zero();
}

int MaximalSubgroup::value_of(const Word& w) const {
  Int acc = 0;
  for (const auto& s : w.syllables())
    acc += Int(lambda[static_cast<std::size_t>(s.gen)]) * s.exp;
  return mod_residue(acc, p);
}

std::vector<MaximalSubgroup> enumerate_maximal(int rank, int p) {
  require_prime(p);
  if (rank < 1) throw DomainError("enumerate_maximal: rank must be >= 1");
  std::vector<MaximalSubgroup> out;
  std::vector<int> lam(static_cast<std::size_t>(rank), 0);
  // Odometer over F_p^rank in lexicographic order; keep normalized vectors.
  while (true) {
    std::size_t i = lam.size();
    while (i > 0 && lam[i - 1] == p - 1) lam[--i] = 0;
    if (i == 0) break;
    ++lam[i - 1];
    int pivot = -1;
    for (std::size_t j = 0; j < lam.size(); ++j)
      if (lam[j] != 0) {
        pivot = static_cast<int>(j);
        break;
      }
    if (pivot >= 0 && lam[static_cast<std::size_t>(pivot)] == 1)
      out.push_back(MaximalSubgroup{p, lam, pivot});
  }
  return out;
}

SchreierBasis schreier_basis(const MaximalSubgroup& m, int rank) {
  const int p = m.p;
  if (static_cast<int>(m.lambda.size()) != rank)
    throw DomainError("schreier_basis: functional length differs from rank");

  SchreierBasis basis;
  basis.parent_rank = rank;
  basis.p = p;
  basis.subgroup = m;

  // rep(j) = pivot^(j * c^-1 mod p) where c = lambda(pivot); normalization
  // makes c = 1, so rep(j) = pivot^j.
  int c = m.lambda[static_cast<std::size_t>(m.pivot)];
  int c_inv = 1;
  for (int t = 1; t < p; ++t)
    if ((c * t) % p == 1) c_inv = t;
  std::vector<int> rep_exp(static_cast<std::size_t>(p));
  for (int j = 0; j < p; ++j) {
    rep_exp[static_cast<std::size_t>(j)] = (j * c_inv) % p;
    basis.transversal.push_back(
        Word::generator(rank, m.pivot, rep_exp[static_cast<std::size_t>(j)]));
  }

  basis.index_of.assign(static_cast<std::size_t>(rank),
                        std::vector<int>(static_cast<std::size_t>(p), -1));
  for (int i = 0; i < rank; ++i) {
    int li = m.lambda[static_cast<std::size_t>(i)];
    for (int j = 0; j < p; ++j) {
      int target = (j + li) % p;
      Word s = concat(
          concat(basis.transversal[static_cast<std::size_t>(j)],
                 Word::generator(rank, i)),
          invert(basis.transversal[static_cast<std::size_t>(target)]));
      if (s.is_identity()) continue;  // the p-1 trivial pivot generators
      basis.index_of[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          basis.rank();
      basis.generators.push_back(std::move(s));
    }
  }
  return basis;
}

Word rewrite_in_maximal(const Word& w, const SchreierBasis& basis) {
  const int p = basis.p;
  const auto& lambda = basis.subgroup.lambda;
  std::vector<Syllable> out;
  int coset = 0;

  auto emit = [&](int gen, int coset_at, int sign) {
    int idx = basis.index_of[static_cast<std::size_t>(gen)]
                            [static_cast<std::size_t>(coset_at)];
    if (idx < 0) return;  // trivial Schreier generator
    if (!out.empty() && out.back().gen == idx) {
      out.back().exp += sign;
      if (out.back().exp == 0) out.pop_back();
    } else {
      out.push_back(Syllable{idx, sign});
    }
  };

  for (const auto& s : w.syllables()) {
    int li = lambda[static_cast<std::size_t>(s.gen)];
    if (li == 0) {
      // Coset unchanged across the whole run: one Schreier generator with
      // the full exponent.
      int idx = basis.index_of[static_cast<std::size_t>(s.gen)]
                              [static_cast<std::size_t>(coset)];
      if (idx >= 0) {
        if (!out.empty() && out.back().gen == idx) {
          out.back().exp += s.exp;
          if (out.back().exp == 0) out.pop_back();
        } else {
          out.push_back(Syllable{idx, s.exp});
        }
      }
      continue;
    }
    Int reps = abs(s.exp);
    if (reps > 1'000'000)
      throw BudgetError("rewrite_in_maximal: exponent too large to expand");
    long long n = static_cast<long long>(reps);
    bool positive = s.exp > 0;
    for (long long t = 0; t < n; ++t) {
      if (positive) {
        emit(s.gen, coset, +1);
        coset = (coset + li) % p;
      } else {
        coset = ((coset - li) % p + p) % p;
        emit(s.gen, coset, -1);
      }
    }
  }

  if (coset != 0)
    throw MembershipError("word is not a member of the maximal subgroup");
  return Word::from_syllables(basis.rank() == 0 ? 1 : basis.rank(),
                              std::move(out));
}

Certificate is_almost_primitive(const Word& w, int rank, int p,
                                const Config& cfg) {
  require_prime(p);
  if (w.rank() != rank)
    throw DomainError("is_almost_primitive: word rank differs from context");
  if (rank > cfg.ap_rank_bound || p > cfg.ap_prime_bound)
    throw BudgetError(
        "is_almost_primitive: refusing scan beyond configured bounds (rank <= " +
        std::to_string(cfg.ap_rank_bound) + ", p <= " +
        std::to_string(cfg.ap_prime_bound) + ")");

  Certificate cert(w, GroupContext::free_pro_p(rank, p));
  cert.entry = "is_almost_primitive";

  FrattiniVector fv = frattini_vector(w, p);
  std::string fv_str;
  for (std::size_t i = 0; i < fv.residues.size(); ++i)
    fv_str += (i ? "," : "") + std::to_string(fv.residues[i]);
  cert.add_reason("frattini-membership",
                  "Frattini quotient criterion: exponent sums mod p",
                  {{"residues", fv_str}});

  if (!fv.is_zero()) {
    cert.verdict = Verdict::NotAlmostPrimitive;
    cert.reasons.back().details["conclusion"] = "outside Frattini subgroup";
    return cert;
  }

  auto maximal = enumerate_maximal(rank, p);
  for (std::size_t mi = 0; mi < maximal.size(); ++mi) {
    const auto& m = maximal[mi];
    SchreierBasis basis = schreier_basis(m, rank);
    Word rewritten = rewrite_in_maximal(w, basis);
    int unit_gen = -1;
    for (int g = 0; g < basis.rank(); ++g) {
      Int sg = sigma(rewritten, g);
      if (mod_residue(sg, p) != 0) {
        unit_gen = g;
        break;
      }
    }
    std::string lam_str;
    for (std::size_t i = 0; i < m.lambda.size(); ++i)
      lam_str += (i ? "," : "") + std::to_string(m.lambda[i]);
    cert.add_reason(
        "maximal-subgroup-check",
        "primitivity in an index-p subgroup via Schreier rewriting",
        {{"index", std::to_string(mi)},
         {"lambda", lam_str},
         {"in_frattini_of_M", unit_gen < 0 ? "yes" : "no"}});
    if (unit_gen < 0) {
      cert.verdict = Verdict::NotAlmostPrimitive;
      RetractWitness witness;
      witness.kind = "maximal_subgroup";
      witness.lambda = m.lambda;
      witness.description =
          "word lies in the Frattini subgroup of this maximal subgroup";
      cert.witness = witness;
      return cert;
    }
    cert.reasons.back().details["nonzero_sigma_generator"] =
        std::to_string(unit_gen);
  }

  cert.verdict = Verdict::AlmostPrimitive;
  return cert;
}

}  // namespace testel
