#pragma once

// Diagram symmetries of d-permutations: the group of signed permutation
// matrices (axis relabellings combined with per-axis reflections), its
// action on diagrams, and empirical detection of trivial Wilf equivalence,
// i.e. pattern sets whose avoidance classes are a single symmetry's image of
// each other for every tested size.

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dperm/dpermutation.hpp"
#include "dperm/enumeration.hpp"

namespace dperm {

// Input axis j maps to axis axis_perm(j); when bit j-1 of flip_mask is set,
// the coordinate on input axis j reflects as v -> n+1-v.
struct SignedSymmetry {
  Permutation axis_perm;
  unsigned flip_mask = 0;

  int dimension() const noexcept { return axis_perm.size(); }
  bool flips(int axis) const { return (flip_mask >> (axis - 1)) & 1u; }
  bool is_identity() const {
    return flip_mask == 0 && axis_perm == Permutation::identity(dimension());
  }

  auto operator<=>(const SignedSymmetry&) const = default;
};

// Signed axis word: token j is the image of axis j, its sign marking a
// reflection on axis j. The identity of dimension 3 prints as "+1 +2 +3".
inline std::string to_axis_word(const SignedSymmetry& s) {
  std::string out;
  for (int j = 1; j <= s.dimension(); ++j) {
    if (j > 1) out += ' ';
    out += s.flips(j) ? '-' : '+';
    out += std::to_string(s.axis_perm(j));
  }
  return out;
}

// All 2^d * d! symmetries; the identity comes first and the order is
// deterministic (axis permutations in lexicographic order, flip masks
// ascending within each).
inline std::vector<SignedSymmetry> all_symmetries(int d) {
  if (d < 2) throw std::invalid_argument("dimension must be at least 2");
  if (d > 6) throw resource_limit_error("symmetry groups above dimension 6 are not materialized");
  std::vector<int> axes(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) axes[static_cast<std::size_t>(j)] = j + 1;
  std::vector<SignedSymmetry> out;
  out.reserve((1u << d) * 24u);
  do {
    for (unsigned mask = 0; mask < (1u << d); ++mask)
      out.push_back(SignedSymmetry{Permutation(axes), mask});
  } while (std::next_permutation(axes.begin(), axes.end()));
  return out;
}

// Transforms the diagram pointwise and reads the image back off as a
// d-permutation (points resorted by their new first coordinate).
inline DPermutation apply(const SignedSymmetry& s, const DPermutation& dp) {
  const int d = dp.dimension();
  const int n = dp.size();
  if (s.dimension() != d)
    throw std::invalid_argument("symmetry and d-permutation dimensions differ");
  std::vector<Point> pts(static_cast<std::size_t>(n), Point(static_cast<std::size_t>(d)));
  for (int i = 1; i <= n; ++i) {
    for (int axis = 1; axis <= d; ++axis) {
      int v = axis == 1 ? i : dp.part(axis - 1)(i);
      if (s.flips(axis)) v = n + 1 - v;
      pts[static_cast<std::size_t>(i) - 1][static_cast<std::size_t>(s.axis_perm(axis)) - 1] = v;
    }
  }
  std::sort(pts.begin(), pts.end(),
            [](const Point& a, const Point& b) { return a[0] < b[0]; });
  std::vector<Permutation> parts;
  parts.reserve(static_cast<std::size_t>(d) - 1);
  for (int j = 1; j < d; ++j) {
    std::vector<int> word(static_cast<std::size_t>(n));
    for (int r = 0; r < n; ++r)
      word[static_cast<std::size_t>(r)] =
          pts[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)];
    parts.emplace_back(std::move(word));
  }
  return DPermutation(std::move(parts));
}

// apply(compose(outer, inner), x) == apply(outer, apply(inner, x)).
inline SignedSymmetry compose(const SignedSymmetry& outer, const SignedSymmetry& inner) {
  if (outer.dimension() != inner.dimension())
    throw std::invalid_argument("compose: dimensions differ");
  const int d = outer.dimension();
  unsigned mask = 0;
  for (int j = 1; j <= d; ++j)
    if (inner.flips(j) != outer.flips(inner.axis_perm(j))) mask |= 1u << (j - 1);
  return SignedSymmetry{compose(outer.axis_perm, inner.axis_perm), mask};
}

inline SignedSymmetry inverse(const SignedSymmetry& s) {
  const int d = s.dimension();
  unsigned mask = 0;
  for (int j = 1; j <= d; ++j)
    if (s.flips(j)) mask |= 1u << (s.axis_perm(j) - 1);
  return SignedSymmetry{inverse(s.axis_perm), mask};
}

// Image of a set of d-permutations under one symmetry, sorted. The action is
// injective, so the image has the same cardinality.
inline std::vector<DPermutation> class_image(const SignedSymmetry& s,
                                             const std::vector<DPermutation>& cls) {
  for (const auto& dp : cls)
    if (dp.dimension() != s.dimension() || dp.size() != cls.front().size())
      throw std::invalid_argument("class_image: class is not uniform");
  std::vector<DPermutation> out;
  out.reserve(cls.size());
  for (const auto& dp : cls) out.push_back(apply(s, dp));
  std::sort(out.begin(), out.end());
  if (std::adjacent_find(out.begin(), out.end()) != out.end())
    throw std::logic_error("class_image: symmetry action produced duplicates");
  return out;
}

namespace detail {

// All d-permutations of a given dimension and size, lexicographic.
inline std::vector<Pattern> all_dpermutations(int dim, int k) {
  std::vector<std::vector<int>> words(static_cast<std::size_t>(dim) - 1,
                                      Permutation::identity(k).values());
  std::vector<Pattern> out;
  while (true) {
    std::vector<Permutation> parts;
    parts.reserve(words.size());
    for (const auto& w : words) parts.emplace_back(w);
    out.emplace_back(std::move(parts));
    int axis = dim - 2;
    while (axis >= 0 &&
           !std::next_permutation(words[static_cast<std::size_t>(axis)].begin(),
                                  words[static_cast<std::size_t>(axis)].end()))
      --axis;
    if (axis < 0) break;
  }
  std::sort(out.begin(), out.end(), pattern_less);
  return out;
}

// All pattern sets of distinct patterns whose multiset of (dimension, size)
// shapes equals `signature`. Each produced set is in canonical order.
inline std::vector<std::vector<Pattern>> pattern_sets_with_signature(
    const std::vector<std::pair<int, int>>& signature) {
  std::vector<std::pair<std::pair<int, int>, int>> groups;  // shape -> multiplicity
  for (const auto& shape : signature) {
    if (!groups.empty() && groups.back().first == shape)
      ++groups.back().second;
    else
      groups.emplace_back(shape, 1);
  }
  std::vector<std::vector<std::vector<Pattern>>> per_group;
  for (const auto& [shape, count] : groups) {
    const std::vector<Pattern> universe = all_dpermutations(shape.first, shape.second);
    std::vector<std::vector<Pattern>> combos;
    std::vector<int> idx;
    auto rec = [&](auto&& self, int next) -> void {
      if (static_cast<int>(idx.size()) == count) {
        std::vector<Pattern> set;
        for (int i : idx) set.push_back(universe[static_cast<std::size_t>(i)]);
        combos.push_back(std::move(set));
        return;
      }
      for (int i = next; i < static_cast<int>(universe.size()); ++i) {
        idx.push_back(i);
        self(self, i + 1);
        idx.pop_back();
      }
    };
    rec(rec, 0);
    per_group.push_back(std::move(combos));
  }
  std::vector<std::vector<Pattern>> out;
  std::vector<Pattern> current;
  auto cross = [&](auto&& self, std::size_t g) -> void {
    if (g == per_group.size()) {
      out.push_back(current);
      return;
    }
    for (const auto& combo : per_group[g]) {
      const auto mark = static_cast<std::ptrdiff_t>(current.size());
      current.insert(current.end(), combo.begin(), combo.end());
      self(self, g + 1);
      current.erase(current.begin() + mark, current.end());
    }
  };
  cross(cross, 0);
  return out;
}

inline bool pattern_set_less(const std::vector<Pattern>& a, const std::vector<Pattern>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), pattern_less);
}

inline std::string class_family_key(const std::vector<std::vector<DPermutation>>& classes) {
  std::string key;
  for (const auto& cls : classes) {
    for (const auto& dp : cls) {
      key += to_string(dp);
      key += ',';
    }
    key += '\n';
  }
  return key;
}

}  // namespace detail

struct OrbitMember {
  std::vector<Pattern> patterns;
  SignedSymmetry witness;  // maps the query's avoidance class onto this member's
};

struct TweOrbit {
  std::vector<Pattern> patterns;  // canonicalized query
  int n_test = 4;
  std::vector<OrbitMember> members;
  // Symmetries whose class image is not the avoidance class of any candidate
  // pattern set. Informational, not an error.
  std::vector<SignedSymmetry> unmatched;
};

// Pattern sets trivially Wilf-equivalent to `patterns`, detected empirically:
// a candidate (any set with the same multiset of pattern shapes) joins the
// orbit when one symmetry maps the query's avoidance class exactly onto the
// candidate's class for every n in 1..n_test. The query itself is always a
// member via the identity.
inline TweOrbit twe_orbit(const std::vector<Pattern>& patterns, int d, int n_test = 4,
                          int workers = 0) {
  if (n_test < 3) throw std::invalid_argument("n_test must be at least 3");
  std::vector<Pattern> pats = canonical_patterns(patterns);
  if (pats.empty()) throw std::invalid_argument("pattern set must be non-empty");
  for (const auto& p : pats) {
    if (p.dimension() > d) throw std::invalid_argument("pattern dimension exceeds d");
    if (p.size() == 0) throw std::invalid_argument("patterns must be non-empty");
  }

  const int w = resolve_workers(workers);
  auto avoidance_classes = [&](const std::vector<Pattern>& ps) {
    std::vector<std::vector<DPermutation>> classes;
    classes.reserve(static_cast<std::size_t>(n_test));
    for (int n = 1; n <= n_test; ++n)
      classes.push_back(collect_avoiders({n, d, ps, QueryMode::enumerate}, 1));
    return classes;
  };

  const std::vector<std::vector<DPermutation>> base = avoidance_classes(pats);

  std::vector<std::pair<int, int>> signature;
  for (const auto& p : pats) signature.emplace_back(p.dimension(), p.size());
  const std::vector<std::vector<Pattern>> candidates =
      detail::pattern_sets_with_signature(signature);

  std::vector<std::string> candidate_keys(candidates.size());
  detail::parallel_branches(
      static_cast<std::int64_t>(candidates.size()), w, [] { return 0; },
      [&](int&, std::int64_t ci) {
        candidate_keys[static_cast<std::size_t>(ci)] =
            detail::class_family_key(avoidance_classes(candidates[static_cast<std::size_t>(ci)]));
      });
  std::unordered_map<std::string, std::vector<int>> by_key;
  for (std::size_t ci = 0; ci < candidates.size(); ++ci)
    by_key[candidate_keys[ci]].push_back(static_cast<int>(ci));

  const std::vector<SignedSymmetry> syms = all_symmetries(d);
  std::vector<std::vector<int>> hits(syms.size());
  detail::parallel_branches(
      static_cast<std::int64_t>(syms.size()), w, [] { return 0; },
      [&](int&, std::int64_t si) {
        std::vector<std::vector<DPermutation>> images;
        images.reserve(static_cast<std::size_t>(n_test));
        for (const auto& cls : base)
          images.push_back(class_image(syms[static_cast<std::size_t>(si)], cls));
        const auto it = by_key.find(detail::class_family_key(images));
        if (it != by_key.end()) hits[static_cast<std::size_t>(si)] = it->second;
      });

  TweOrbit orbit;
  orbit.patterns = pats;
  orbit.n_test = n_test;
  std::vector<char> member_seen(candidates.size(), 0);
  for (std::size_t si = 0; si < syms.size(); ++si) {
    if (hits[si].empty()) {
      orbit.unmatched.push_back(syms[si]);
      continue;
    }
    for (int ci : hits[si]) {
      if (member_seen[static_cast<std::size_t>(ci)]) continue;
      member_seen[static_cast<std::size_t>(ci)] = 1;
      orbit.members.push_back(OrbitMember{candidates[static_cast<std::size_t>(ci)], syms[si]});
    }
  }
  std::sort(orbit.members.begin(), orbit.members.end(),
            [](const OrbitMember& a, const OrbitMember& b) {
              return detail::pattern_set_less(a.patterns, b.patterns);
            });
  return orbit;
}

}  // namespace dperm
