#include "testel/finite_group.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "testel/frattini.hpp"

namespace testel {

int FiniteGroup::pow(int a, const Int& e) const {
  int ord = element_order(a);
  Int r = e % ord;
  if (r < 0) r += ord;
  int out = identity;
  for (int i = 0; i < static_cast<int>(r); ++i) out = mul(out, a);
  return out;
}

int FiniteGroup::element_order(int a) const {
  int ord = 1;
  int x = a;
  while (x != identity) {
    x = mul(x, a);
    ++ord;
  }
  return ord;
}

int FiniteGroup::commutator_of(int a, int b) const {
  return mul(mul(a, b), mul(inv(a), inv(b)));
}

namespace {

// Shared finalization: checks the table axioms, computes inverses and the
// breadth-first generator expressions.
void finalize(FiniteGroup& g) {
  const int n = g.order;
  if (n < 1 || static_cast<int>(g.table.size()) != n)
    throw DomainError("group table size mismatch");

  // Latin square check.
  for (int a = 0; a < n; ++a) {
    std::vector<bool> row(static_cast<std::size_t>(n), false);
    std::vector<bool> col(static_cast<std::size_t>(n), false);
    for (int b = 0; b < n; ++b) {
      int ab = g.table[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
      int ba = g.table[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)];
      if (ab < 0 || ab >= n || ba < 0 || ba >= n)
        throw DomainError("table entry out of range");
      if (row[static_cast<std::size_t>(ab)] || col[static_cast<std::size_t>(ba)])
        throw DomainError("table is not a latin square");
      row[static_cast<std::size_t>(ab)] = true;
      col[static_cast<std::size_t>(ba)] = true;
    }
  }
  for (int a = 0; a < n; ++a)
    if (g.mul(g.identity, a) != a || g.mul(a, g.identity) != a)
      throw DomainError("identity element misbehaves");

  // Associativity: exhaustive for small tables, Light's test (generators
  // suffice once they generate) beyond that.
  if (n <= 128) {
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          if (g.mul(g.mul(a, b), c) != g.mul(a, g.mul(b, c)))
            throw DomainError("table is not associative");
  } else {
    for (int gen : g.generators)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          if (g.mul(g.mul(a, gen), b) != g.mul(a, g.mul(gen, b)))
            throw DomainError("table fails the generator associativity test");
  }

  g.inverse.assign(static_cast<std::size_t>(n), -1);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (g.mul(a, b) == g.identity) g.inverse[static_cast<std::size_t>(a)] = b;
  for (int a = 0; a < n; ++a)
    if (g.inverse[static_cast<std::size_t>(a)] < 0)
      throw DomainError("missing inverse");

  // Breadth-first expressions from the identity.
  g.expr_parent.assign(static_cast<std::size_t>(n), -2);
  g.expr_gen.assign(static_cast<std::size_t>(n), -1);
  g.expr_parent[static_cast<std::size_t>(g.identity)] = -1;
  std::vector<int> queue{g.identity};
  for (std::size_t head = 0; head < queue.size(); ++head) {
    int cur = queue[head];
    for (std::size_t gi = 0; gi < g.generators.size(); ++gi) {
      int next = g.mul(cur, g.generators[gi]);
      if (g.expr_parent[static_cast<std::size_t>(next)] != -2) continue;
      g.expr_parent[static_cast<std::size_t>(next)] = cur;
      g.expr_gen[static_cast<std::size_t>(next)] = static_cast<int>(gi);
      queue.push_back(next);
    }
  }
  if (static_cast<int>(queue.size()) != n)
    throw DomainError("generators do not generate the group");

  // p-group check.
  int m = n;
  while (m % g.p == 0) m /= g.p;
  if (m != 1) throw DomainError("order is not a power of p");
}

}  // namespace

FiniteGroup build_cyclic_product(int p, const std::vector<int>& ks) {
  require_prime(p);
  if (ks.empty()) throw DomainError("cyclic product needs at least one factor");
  std::vector<int> moduli;
  long long order = 1;
  for (int k : ks) {
    if (k < 1) throw DomainError("exponents must be >= 1");
    long long m = 1;
    for (int i = 0; i < k; ++i) m *= p;
    moduli.push_back(static_cast<int>(m));
    order *= m;
    if (order > 100000) throw BudgetError("group too large");
  }

  FiniteGroup g;
  g.p = p;
  g.order = static_cast<int>(order);
  {
    std::string parts;
    for (std::size_t i = 0; i < ks.size(); ++i)
      parts += (i ? "." : "") + std::to_string(ks[i]);
    g.label = "cp:" + std::to_string(p) + "," + parts;
  }

  auto decode = [&](int idx) {
    std::vector<int> v(moduli.size());
    for (std::size_t i = 0; i < moduli.size(); ++i) {
      v[i] = idx % moduli[i];
      idx /= moduli[i];
    }
    return v;
  };
  auto encode = [&](const std::vector<int>& v) {
    int idx = 0;
    for (std::size_t i = moduli.size(); i-- > 0;)
      idx = idx * moduli[i] + v[i];
    return idx;
  };

  g.table.assign(static_cast<std::size_t>(g.order),
                 std::vector<int>(static_cast<std::size_t>(g.order)));
  for (int a = 0; a < g.order; ++a) {
    auto va = decode(a);
    for (int b = 0; b < g.order; ++b) {
      auto vb = decode(b);
      std::vector<int> vc(moduli.size());
      for (std::size_t i = 0; i < moduli.size(); ++i)
        vc[i] = (va[i] + vb[i]) % moduli[i];
      g.table[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] =
          encode(vc);
    }
  }
  for (std::size_t i = 0; i < moduli.size(); ++i) {
    std::vector<int> unit(moduli.size(), 0);
    unit[i] = 1;
    g.generators.push_back(encode(unit));
  }
  finalize(g);
  return g;
}

FiniteGroup build_elementary_abelian(int p, int n) {
  if (n < 1) throw DomainError("rank must be >= 1");
  FiniteGroup g = build_cyclic_product(p, std::vector<int>(static_cast<std::size_t>(n), 1));
  g.label = "ea:" + std::to_string(p) + "," + std::to_string(n);
  return g;
}

FiniteGroup build_heisenberg(int p) {
  require_prime(p);
  if (p == 2) throw DomainError("heisenberg(2) is rejected (degenerate)");
  FiniteGroup g;
  g.p = p;
  g.order = p * p * p;
  g.label = "heis:" + std::to_string(p);

  auto encode = [&](int a, int b, int c) { return (a * p + b) * p + c; };
  g.table.assign(static_cast<std::size_t>(g.order),
                 std::vector<int>(static_cast<std::size_t>(g.order)));
  for (int a1 = 0; a1 < p; ++a1)
    for (int b1 = 0; b1 < p; ++b1)
      for (int c1 = 0; c1 < p; ++c1)
        for (int a2 = 0; a2 < p; ++a2)
          for (int b2 = 0; b2 < p; ++b2)
            for (int c2 = 0; c2 < p; ++c2)
              g.table[static_cast<std::size_t>(encode(a1, b1, c1))]
                     [static_cast<std::size_t>(encode(a2, b2, c2))] =
                  encode((a1 + a2) % p, (b1 + b2) % p,
                         (c1 + c2 + b1 * a2) % p);
  g.generators = {encode(1, 0, 0), encode(0, 1, 0)};
  finalize(g);
  return g;
}

FiniteGroup build_group_from_spec(std::string_view spec) {
  auto colon = spec.find(':');
  if (colon == std::string_view::npos)
    throw DomainError("catalog spec must look like ea:p,n / cp:p,k1.k2 / heis:p");
  std::string kind(spec.substr(0, colon));
  std::string rest(spec.substr(colon + 1));
  auto to_int = [](const std::string& s) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
      throw DomainError("bad number in catalog spec: '" + s + "'");
    return std::stoi(s);
  };
  if (kind == "heis") return build_heisenberg(to_int(rest));
  auto comma = rest.find(',');
  if (comma == std::string::npos)
    throw DomainError("catalog spec missing ',' after the prime");
  int p = to_int(rest.substr(0, comma));
  std::string tail = rest.substr(comma + 1);
  if (kind == "ea") return build_elementary_abelian(p, to_int(tail));
  if (kind == "cp") {
    std::vector<int> ks;
    std::string cur;
    for (char c : tail + ".") {
      if (c == '.') {
        ks.push_back(to_int(cur));
        cur.clear();
      } else {
        cur += c;
      }
    }
    return build_cyclic_product(p, ks);
  }
  throw DomainError("unknown catalog kind: " + kind);
}

int eval_word(const FiniteGroup& g, const Word& w,
              const std::vector<int>& images) {
  if (static_cast<int>(images.size()) != w.rank())
    throw DomainError("eval_word: arity mismatch");
  int out = g.identity;
  for (const auto& s : w.syllables())
    out = g.mul(out, g.pow(images[static_cast<std::size_t>(s.gen)], s.exp));
  return out;
}

std::vector<int> subgroup_closure(const FiniteGroup& g, std::vector<int> seed) {
  std::set<int> elems(seed.begin(), seed.end());
  elems.insert(g.identity);
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<int> cur(elems.begin(), elems.end());
    for (int a : cur)
      for (int b : cur) {
        if (elems.insert(g.mul(a, b)).second) grew = true;
        if (elems.insert(g.inv(a)).second) grew = true;
      }
  }
  return std::vector<int>(elems.begin(), elems.end());
}

bool is_subgroup(const FiniteGroup& g, const std::vector<int>& sorted_elems) {
  if (!std::binary_search(sorted_elems.begin(), sorted_elems.end(), g.identity))
    return false;
  for (int a : sorted_elems) {
    if (!std::binary_search(sorted_elems.begin(), sorted_elems.end(), g.inv(a)))
      return false;
    for (int b : sorted_elems)
      if (!std::binary_search(sorted_elems.begin(), sorted_elems.end(),
                              g.mul(a, b)))
        return false;
  }
  return true;
}

namespace {

// Minimal generating sequence of a subgroup by greedy closure growth.
std::vector<int> greedy_generators(const FiniteGroup& g,
                                   const std::vector<int>& elems) {
  std::vector<int> gens;
  std::vector<int> closed = subgroup_closure(g, {});
  while (closed.size() < elems.size()) {
    for (int e : elems) {
      if (!std::binary_search(closed.begin(), closed.end(), e)) {
        gens.push_back(e);
        std::vector<int> seed = gens;
        closed = subgroup_closure(g, seed);
        break;
      }
    }
  }
  return gens;
}

bool extend_isomorphism(const FiniteGroup& g, const std::vector<int>& a,
                        const std::vector<int>& b,
                        const std::vector<int>& gens, std::size_t next,
                        std::vector<int>& gen_images) {
  if (next == gens.size()) {
    // Build the map by closure and verify it is a bijective homomorphism.
    std::map<int, int> phi;
    phi[g.identity] = g.identity;
    std::vector<int> frontier{g.identity};
    // Extend over products of the chosen generator images.
    std::vector<std::pair<int, int>> pairs;
    for (std::size_t i = 0; i < gens.size(); ++i)
      pairs.emplace_back(gens[i], gen_images[i]);
    bool grew = true;
    while (grew) {
      grew = false;
      for (auto [x, fx] : std::map<int, int>(phi))
        for (auto [gen, img] : pairs) {
          int nx = g.mul(x, gen);
          int nfx = g.mul(fx, img);
          auto it = phi.find(nx);
          if (it == phi.end()) {
            phi[nx] = nfx;
            grew = true;
          } else if (it->second != nfx) {
            return false;
          }
        }
    }
    if (phi.size() != a.size()) return false;
    std::set<int> image;
    for (auto [x, fx] : phi) {
      if (!std::binary_search(b.begin(), b.end(), fx)) return false;
      image.insert(fx);
    }
    if (image.size() != b.size()) return false;
    for (auto [x, fx] : phi)
      for (auto [y, fy] : phi)
        if (phi[g.mul(x, y)] != g.mul(fx, fy)) return false;
    return true;
  }
  int source = gens[next];
  int src_order = g.element_order(source);
  for (int candidate : b) {
    if (g.element_order(candidate) != src_order) continue;
    gen_images.push_back(candidate);
    if (extend_isomorphism(g, a, b, gens, next + 1, gen_images)) return true;
    gen_images.pop_back();
  }
  return false;
}

}  // namespace

bool subgroups_isomorphic(const FiniteGroup& g, const std::vector<int>& a,
                          const std::vector<int>& b) {
  if (a.size() != b.size()) return false;
  // Order profiles must agree.
  std::multiset<int> pa, pb;
  for (int x : a) pa.insert(g.element_order(x));
  for (int x : b) pb.insert(g.element_order(x));
  if (pa != pb) return false;
  std::vector<int> gens = greedy_generators(g, a);
  std::vector<int> images;
  return extend_isomorphism(g, a, b, gens, 0, images);
}

// ---------------------------------------------------------------------------
// Oracle

Oracle::Oracle(FiniteGroup g, Config cfg)
    : group_(std::move(g)), cfg_(std::move(cfg)) {}

const std::vector<Endomorphism>& Oracle::endomorphisms() {
  if (endos_) return *endos_;
  const FiniteGroup& g = group_;
  const int n = g.order;
  const std::size_t d = g.generators.size();

  double candidates = 1;
  for (std::size_t i = 0; i < d; ++i) candidates *= n;
  if (candidates > static_cast<double>(cfg_.endo_budget))
    throw BudgetError("endomorphism enumeration over budget: |G|^d = " +
                      std::to_string(static_cast<long long>(candidates)));

  std::vector<Endomorphism> out;
  std::vector<int> assign(d, 0);
  while (true) {
    // Extend along the breadth-first expressions.
    std::vector<int> img(static_cast<std::size_t>(n), -1);
    img[static_cast<std::size_t>(g.identity)] = g.identity;
    bool ok = true;
    // expr_parent is breadth-first, so parents are resolved before children
    // when scanning elements in BFS discovery order; rebuild that order here.
    std::vector<int> order_queue{g.identity};
    for (std::size_t head = 0; head < order_queue.size(); ++head) {
      int cur = order_queue[head];
      for (std::size_t gi = 0; gi < d; ++gi) {
        int next = g.mul(cur, g.generators[gi]);
        if (img[static_cast<std::size_t>(next)] != -1) continue;
        img[static_cast<std::size_t>(next)] =
            g.mul(img[static_cast<std::size_t>(cur)], assign[gi]);
        order_queue.push_back(next);
      }
    }
    for (int a = 0; a < n && ok; ++a)
      for (int b = 0; b < n && ok; ++b)
        ok = img[static_cast<std::size_t>(g.mul(a, b))] ==
             g.mul(img[static_cast<std::size_t>(a)],
                   img[static_cast<std::size_t>(b)]);
    if (ok) {
      Endomorphism e;
      e.map = std::move(img);
      std::vector<bool> seen(static_cast<std::size_t>(n), false);
      e.bijective = true;
      for (int x : e.map) {
        if (seen[static_cast<std::size_t>(x)]) {
          e.bijective = false;
          break;
        }
        seen[static_cast<std::size_t>(x)] = true;
      }
      out.push_back(std::move(e));
    }
    // Odometer over generator images, last coordinate fastest.
    std::size_t i = d;
    while (i > 0 && assign[i - 1] == n - 1) assign[--i] = 0;
    if (i == 0) break;
    ++assign[i - 1];
  }
  endos_ = std::move(out);
  return *endos_;
}

const std::vector<int>& Oracle::automorphisms() {
  if (autos_) return *autos_;
  std::vector<int> out;
  const auto& endos = endomorphisms();
  for (std::size_t i = 0; i < endos.size(); ++i)
    if (endos[i].bijective) out.push_back(static_cast<int>(i));
  autos_ = std::move(out);
  return *autos_;
}

const std::vector<Oracle::Retract>& Oracle::retracts() {
  if (retracts_) return *retracts_;
  std::map<std::vector<int>, std::vector<int>> by_image;
  const auto& endos = endomorphisms();
  for (std::size_t i = 0; i < endos.size(); ++i) {
    const auto& e = endos[i];
    bool idempotent = true;
    for (int x = 0; x < group_.order && idempotent; ++x)
      idempotent = e(e(x)) == e(x);
    if (!idempotent) continue;
    std::set<int> image(e.map.begin(), e.map.end());
    by_image[std::vector<int>(image.begin(), image.end())].push_back(
        static_cast<int>(i));
  }
  std::vector<Retract> out;
  for (auto& [image, indices] : by_image)
    out.push_back(Retract{image, indices});
  retracts_ = std::move(out);
  return *retracts_;
}

std::vector<int> Oracle::stable_image(const Endomorphism& phi) const {
  std::set<int> current;
  for (int x = 0; x < group_.order; ++x) current.insert(x);
  while (true) {
    std::set<int> next;
    for (int x : current) next.insert(phi(x));
    if (next == current) break;
    current = std::move(next);
  }
  return std::vector<int>(current.begin(), current.end());
}

Oracle::TestDecision Oracle::test_element_decide(int g) {
  TestDecision d{true, true};
  for (const auto& e : endomorphisms())
    if (e(g) == g && !e.bijective) {
      d.by_endos = false;
      break;
    }
  for (const auto& r : retracts()) {
    if (static_cast<int>(r.image.size()) == group_.order) continue;
    if (std::binary_search(r.image.begin(), r.image.end(), g)) {
      d.by_retracts = false;
      break;
    }
  }
  return d;
}

std::vector<std::vector<int>> Oracle::minimal_retracts_over(
    const std::vector<int>& h) {
  std::vector<std::vector<int>> containing;
  for (const auto& r : retracts()) {
    bool contains = std::all_of(h.begin(), h.end(), [&](int x) {
      return std::binary_search(r.image.begin(), r.image.end(), x);
    });
    if (contains) containing.push_back(r.image);
  }
  std::vector<std::vector<int>> minimal;
  for (const auto& candidate : containing) {
    bool is_minimal = true;
    for (const auto& other : containing) {
      if (other.size() >= candidate.size() || other == candidate) continue;
      if (std::includes(candidate.begin(), candidate.end(), other.begin(),
                        other.end()))
        is_minimal = false;
    }
    if (is_minimal) minimal.push_back(candidate);
  }
  for (std::size_t i = 1; i < minimal.size(); ++i)
    if (!subgroups_isomorphic(group_, minimal[0], minimal[i]))
      throw DomainError("minimal retracts over a subgroup are not isomorphic");
  return minimal;
}

const std::vector<int>& Oracle::frattini() {
  if (frattini_) return *frattini_;
  std::vector<int> seed;
  for (int a = 0; a < group_.order; ++a) {
    seed.push_back(group_.pow(a, group_.p));
    for (int b = 0; b < group_.order; ++b)
      seed.push_back(group_.commutator_of(a, b));
  }
  frattini_ = subgroup_closure(group_, seed);
  return *frattini_;
}

std::vector<int> Oracle::frattini_via_maximal() {
  const FiniteGroup& g = group_;
  const std::size_t d = g.generators.size();
  std::vector<int> intersection;
  for (int x = 0; x < g.order; ++x) intersection.push_back(x);

  std::vector<int> assign(d, 0);
  while (true) {
    bool nonzero =
        std::any_of(assign.begin(), assign.end(), [](int v) { return v != 0; });
    if (nonzero) {
      // chi(generator[i]) = assign[i] in Z/p, extended multiplicatively.
      std::vector<int> chi(static_cast<std::size_t>(g.order), -1);
      chi[static_cast<std::size_t>(g.identity)] = 0;
      std::vector<int> queue{g.identity};
      for (std::size_t head = 0; head < queue.size(); ++head) {
        int cur = queue[head];
        for (std::size_t gi = 0; gi < d; ++gi) {
          int next = g.mul(cur, g.generators[gi]);
          if (chi[static_cast<std::size_t>(next)] != -1) continue;
          chi[static_cast<std::size_t>(next)] =
              (chi[static_cast<std::size_t>(cur)] + assign[gi]) % g.p;
          queue.push_back(next);
        }
      }
      bool additive = true;
      for (int a = 0; a < g.order && additive; ++a)
        for (int b = 0; b < g.order && additive; ++b)
          additive = chi[static_cast<std::size_t>(g.mul(a, b))] ==
                     (chi[static_cast<std::size_t>(a)] +
                      chi[static_cast<std::size_t>(b)]) %
                         g.p;
      if (additive) {
        std::vector<int> kernel;
        for (int x = 0; x < g.order; ++x)
          if (chi[static_cast<std::size_t>(x)] == 0) kernel.push_back(x);
        std::vector<int> merged;
        std::set_intersection(intersection.begin(), intersection.end(),
                              kernel.begin(), kernel.end(),
                              std::back_inserter(merged));
        intersection = std::move(merged);
      }
    }
    std::size_t i = d;
    while (i > 0 && assign[i - 1] == g.p - 1) assign[--i] = 0;
    if (i == 0) break;
    ++assign[i - 1];
  }
  return intersection;
}

Oracle::OrbitReport Oracle::orbit_check(int u) {
  OrbitReport report;
  const FiniteGroup& g = group_;
  const auto& phi = frattini();

  // Coset of x modulo Phi, labelled by its least element.
  auto coset_label = [&](int x) {
    int least = g.order;
    for (int f : phi) least = std::min(least, g.mul(x, f));
    return least;
  };
  std::set<int> nonidentity_cosets;
  for (int x = 0; x < g.order; ++x) {
    int label = coset_label(x);
    if (label != coset_label(g.identity)) nonidentity_cosets.insert(label);
  }
  // Transitivity of the automorphism action on the nonidentity cosets.
  if (!nonidentity_cosets.empty()) {
    int seed = *nonidentity_cosets.begin();
    std::set<int> orbit;
    const auto& endos = endomorphisms();
    for (int ai : automorphisms()) orbit.insert(coset_label(endos[ai](seed)));
    report.applicable = orbit == nonidentity_cosets;
  }
  if (!report.applicable) return report;
  if (u == g.identity)
    throw DomainError("orbit_check: u must be nontrivial");

  std::set<int> orbit;
  const auto& endos = endomorphisms();
  for (int ai : automorphisms()) orbit.insert(endos[ai](u));
  report.orbit_size = static_cast<int>(orbit.size());
  for (const auto& e : endos) {
    bool preserves = std::all_of(orbit.begin(), orbit.end(), [&](int x) {
      return orbit.count(e(x)) > 0;
    });
    if (!preserves) continue;
    ++report.preserving_endos;
    if (!e.bijective) ++report.violations;
  }
  return report;
}

nlohmann::json oracle_report(Oracle& oracle,
                             const std::vector<std::string>& checks) {
  const FiniteGroup& g = oracle.group();
  nlohmann::json out;
  out["group"] = g.label;
  out["order"] = g.order;
  auto arr = nlohmann::json::array();

  auto want = [&](const std::string& name) {
    return std::find(checks.begin(), checks.end(), name) != checks.end() ||
           std::find(checks.begin(), checks.end(), "all") != checks.end();
  };

  if (want("test-retract")) {
    int agree = 0, tests = 0;
    for (int x = 0; x < g.order; ++x) {
      auto d = oracle.test_element_decide(x);
      if (d.by_endos == d.by_retracts) ++agree;
      if (d.by_endos && d.by_retracts) ++tests;
    }
    arr.push_back({{"name", "test-retract"},
                   {"status", agree == g.order ? "pass" : "fail"},
                   {"counts",
                    {{"elements", g.order},
                     {"agreements", agree},
                     {"test_elements", tests}}}});
  }
  if (want("stable-image")) {
    int checked = 0, failures = 0;
    for (const auto& e : oracle.endomorphisms()) {
      auto stable = oracle.stable_image(e);
      bool found = false;
      for (const auto& r : oracle.retracts())
        found = found || r.image == stable;
      bool onto = true;
      std::set<int> mapped;
      for (int x : stable) mapped.insert(e(x));
      onto = mapped.size() == stable.size() &&
             std::all_of(stable.begin(), stable.end(),
                         [&](int x) { return mapped.count(e(x)); });
      ++checked;
      if (!found || !onto) ++failures;
    }
    arr.push_back({{"name", "stable-image"},
                   {"status", failures == 0 ? "pass" : "fail"},
                   {"counts",
                    {{"endomorphisms", checked}, {"failures", failures}}}});
  }
  if (want("orbit")) {
    bool applicable = true;
    int violations = 0, checked = 0;
    for (int u = 0; u < g.order; ++u) {
      if (u == g.identity) continue;
      auto r = oracle.orbit_check(u);
      if (!r.applicable) {
        applicable = false;
        break;
      }
      ++checked;
      violations += r.violations;
    }
    arr.push_back(
        {{"name", "orbit"},
         {"status", !applicable       ? "not-applicable"
                    : violations == 0 ? "pass"
                                      : "fail"},
         {"counts", {{"elements_checked", checked},
                     {"violations", violations}}}});
  }
  if (want("frattini")) {
    auto direct = oracle.frattini();
    auto via_max = oracle.frattini_via_maximal();
    arr.push_back({{"name", "frattini"},
                   {"status", direct == via_max ? "pass" : "fail"},
                   {"counts", {{"size", direct.size()}}}});
  }
  out["checks"] = arr;
  return out;
}

}  // namespace testel
