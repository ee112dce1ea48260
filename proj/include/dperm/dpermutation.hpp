#pragma once

// d-permutations: (d-1)-tuples of equal-size permutations. A d-permutation
// has the diagram {(i, sigma_1(i), ..., sigma_{d-1}(i)) : 1 <= i <= n} in
// [n]^d, one point per value on every axis. Direct projections restrict the
// diagram to a subset of axes; pattern containment asks for an
// order-isomorphic copy of a (possibly lower-dimensional) pattern diagram.

#include <array>
#include <cstddef>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dperm/permutation.hpp"

namespace dperm {

class DPermutation {
 public:
  explicit DPermutation(std::vector<Permutation> parts) : parts_(std::move(parts)) {
    if (parts_.empty())
      throw std::invalid_argument("d-permutation needs at least one component");
    for (const auto& p : parts_)
      if (p.size() != parts_.front().size())
        throw std::invalid_argument("d-permutation components must share one size");
  }

  DPermutation(std::initializer_list<Permutation> parts)
      : DPermutation(std::vector<Permutation>(parts)) {}

  explicit DPermutation(Permutation p)
      : DPermutation(std::vector<Permutation>{std::move(p)}) {}

  // A d-permutation stores d-1 components; the first diagram axis is the
  // implicit position coordinate.
  int dimension() const noexcept { return static_cast<int>(parts_.size()) + 1; }
  int size() const noexcept { return parts_.front().size(); }

  const std::vector<Permutation>& parts() const noexcept { return parts_; }

  // 1-based component index: part(1) = sigma_1.
  const Permutation& part(int j) const { return parts_[static_cast<std::size_t>(j) - 1]; }

  // Word along a diagram axis in [1, d]: axis 1 is the identity, axis j >= 2
  // is component j-1.
  Permutation axis_word(int axis) const {
    if (axis < 1 || axis > dimension()) throw std::invalid_argument("axis out of range");
    return axis == 1 ? Permutation::identity(size()) : parts_[static_cast<std::size_t>(axis) - 2];
  }

  auto operator<=>(const DPermutation&) const = default;

 private:
  std::vector<Permutation> parts_;
};

// Patterns are just (usually small) d-permutations.
using Pattern = DPermutation;

// One diagram point; entry a (0-based) is the coordinate on axis a+1.
using Point = std::vector<int>;

// Strictly increasing axis indices i_1 < ... < i_k, 1-based.
struct IndexTuple {
  std::vector<int> axes;

  explicit IndexTuple(std::vector<int> a) : axes(std::move(a)) {
    for (std::size_t t = 0; t < axes.size(); ++t)
      if (axes[t] < 1 || (t > 0 && axes[t] <= axes[t - 1]))
        throw std::invalid_argument("projection axes must be strictly increasing and >= 1");
  }

  IndexTuple(std::initializer_list<int> a) : IndexTuple(std::vector<int>(a)) {}

  int length() const noexcept { return static_cast<int>(axes.size()); }

  auto operator<=>(const IndexTuple&) const = default;
};

inline std::vector<Point> diagram(const DPermutation& dp) {
  const int n = dp.size();
  const int d = dp.dimension();
  std::vector<Point> pts(static_cast<std::size_t>(n), Point(static_cast<std::size_t>(d)));
  for (int i = 1; i <= n; ++i) {
    pts[static_cast<std::size_t>(i) - 1][0] = i;
    for (int j = 1; j < d; ++j)
      pts[static_cast<std::size_t>(i) - 1][static_cast<std::size_t>(j)] = dp.part(j)(i);
  }
  return pts;
}

// Direct projection onto axes i_1 < ... < i_k: component words become
// word(i_{j+1}) composed with the inverse of word(i_1). Equivalently, the
// projection's diagram is the original diagram with only the tuple's
// coordinates kept.
inline DPermutation project(const DPermutation& dp, const IndexTuple& axes) {
  if (axes.length() < 2)
    throw std::invalid_argument("projection needs at least two axes");
  if (axes.axes.back() > dp.dimension())
    throw std::invalid_argument("projection axis out of range");
  const Permutation inv_first = inverse(dp.axis_word(axes.axes.front()));
  std::vector<Permutation> parts;
  parts.reserve(static_cast<std::size_t>(axes.length()) - 1);
  for (int t = 1; t < axes.length(); ++t)
    parts.push_back(compose(dp.axis_word(axes.axes[static_cast<std::size_t>(t)]), inv_first));
  return DPermutation(std::move(parts));
}

namespace detail {

// All strictly increasing r-tuples from {0, ..., d-1}, lexicographic.
inline std::vector<std::vector<int>> increasing_tuples(int d, int r) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  auto rec = [&](auto&& self, int next) -> void {
    if (static_cast<int>(cur.size()) == r) {
      out.push_back(cur);
      return;
    }
    for (int a = next; a < d; ++a) {
      cur.push_back(a);
      self(self, a + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

// Order-isomorphic embedding search shared by full-diagram and
// partial-diagram containment. `coord(q, a)` is point q's coordinate on
// 0-based axis a; `ord` lists the m point ids sorted by coordinate on
// tuple[0]. pat_parts[a-1] holds the k pattern values matched against tuple
// axis a (0-based value arrays). When `anchor` >= 0, only embeddings using
// that point id are accepted.
template <typename CoordFn>
bool embeds_along(const CoordFn& coord, const int* ord, int m, const int* tuple,
                  int d_prime, const std::vector<int>* const* pat_parts, int k,
                  int anchor) {
  if (k == 0) return true;
  if (k > m) return false;
  int anchor_pos = -1;
  if (anchor >= 0) {
    for (int p = 0; p < m; ++p)
      if (ord[p] == anchor) {
        anchor_pos = p;
        break;
      }
  }
  std::vector<int> chosen(static_cast<std::size_t>(k));
  auto rec = [&](auto&& self, int slot, int from, bool used_anchor) -> bool {
    if (slot == k) return anchor_pos < 0 || used_anchor;
    // The anchor can no longer be picked once the scan has passed it.
    if (anchor_pos >= 0 && !used_anchor && anchor_pos < from) return false;
    for (int p = from; p + (k - slot) <= m; ++p) {
      const int q = ord[p];
      bool ok = true;
      for (int a = 1; a < d_prime && ok; ++a) {
        const std::vector<int>& part = *pat_parts[a - 1];
        const int qa = coord(q, tuple[a]);
        for (int t = 0; t < slot && ok; ++t)
          ok = (qa > coord(chosen[static_cast<std::size_t>(t)], tuple[a])) ==
               (part[static_cast<std::size_t>(slot)] > part[static_cast<std::size_t>(t)]);
      }
      if (!ok) continue;
      chosen[static_cast<std::size_t>(slot)] = q;
      if (self(self, slot + 1, p + 1, used_anchor || p == anchor_pos)) return true;
    }
    return false;
  };
  return rec(rec, 0, 0, false);
}

// Containment of a pattern in an equal-dimensional d-permutation via a
// common index sequence c_1 < ... < c_k with every component word
// order-isomorphic to the matching pattern component.
inline bool embeds_directly(const DPermutation& host, const Pattern& pattern) {
  const int d = host.dimension();
  const int n = host.size();
  const int k = pattern.size();
  if (k == 0) return true;
  if (k > n) return false;
  std::vector<int> ord(static_cast<std::size_t>(n));
  std::vector<int> tuple(static_cast<std::size_t>(d));
  for (int i = 0; i < n; ++i) ord[static_cast<std::size_t>(i)] = i;
  for (int a = 0; a < d; ++a) tuple[static_cast<std::size_t>(a)] = a;
  std::vector<const std::vector<int>*> parts;
  parts.reserve(static_cast<std::size_t>(d) - 1);
  for (int j = 1; j < d; ++j) parts.push_back(&pattern.part(j).values());
  auto coord = [&](int q, int a) {
    return a == 0 ? q + 1 : host.part(a)(q + 1);
  };
  return embeds_along(coord, ord.data(), n, tuple.data(), d, parts.data(), k, -1);
}

}  // namespace detail

// All direct projections of dimension d_prime, in lexicographic tuple order.
inline std::vector<std::pair<IndexTuple, DPermutation>> direct_projections(
    const DPermutation& dp, int d_prime) {
  if (d_prime < 2 || d_prime > dp.dimension())
    throw std::invalid_argument("projection dimension out of range");
  std::vector<std::pair<IndexTuple, DPermutation>> out;
  for (const auto& t : detail::increasing_tuples(dp.dimension(), d_prime)) {
    std::vector<int> axes;
    axes.reserve(t.size());
    for (int a : t) axes.push_back(a + 1);
    IndexTuple tuple(std::move(axes));
    DPermutation pr = project(dp, tuple);
    out.emplace_back(std::move(tuple), std::move(pr));
  }
  return out;
}

// `host` contains `pattern` iff some direct projection of the pattern's
// dimension contains it on a common index sequence. Projections are tried in
// lexicographic tuple order, short-circuiting on the first witness.
inline bool contains(const DPermutation& host, const Pattern& pattern) {
  if (pattern.dimension() > host.dimension())
    throw std::invalid_argument("pattern dimension exceeds host dimension");
  if (pattern.size() == 0) return true;
  if (pattern.size() > host.size()) return false;
  for (const auto& [axes, pr] : direct_projections(host, pattern.dimension()))
    if (detail::embeds_directly(pr, pattern)) return true;
  return false;
}

// True iff `host` contains none of `patterns`. Patterns are grouped by
// dimension so each direct projection is built once per query.
inline bool avoids_all(const DPermutation& host, const std::vector<Pattern>& patterns) {
  const int d = host.dimension();
  for (const auto& p : patterns)
    if (p.dimension() > d)
      throw std::invalid_argument("pattern dimension exceeds host dimension");
  for (int dim = 2; dim <= d; ++dim) {
    std::vector<const Pattern*> group;
    for (const auto& p : patterns)
      if (p.dimension() == dim && p.size() <= host.size()) group.push_back(&p);
    bool vacuous = false;
    for (const auto& p : patterns)
      if (p.dimension() == dim && p.size() == 0) vacuous = true;
    if (vacuous) return false;
    if (group.empty()) continue;
    for (const auto& [axes, pr] : direct_projections(host, dim))
      for (const Pattern* p : group)
        if (detail::embeds_directly(pr, *p)) return false;
  }
  return true;
}

// Containment test on a bare point set (a partial diagram): the points need
// not form a full d-permutation, only pairwise-distinct coordinates per axis
// are required. Used by the enumeration engine on prefixes of a diagram.
inline bool contains_partial(const std::vector<Point>& points, const Pattern& pattern) {
  const int k = pattern.size();
  if (k == 0) return true;
  if (points.empty()) return false;
  const int d = static_cast<int>(points.front().size());
  const int m = static_cast<int>(points.size());
  for (const auto& p : points)
    if (static_cast<int>(p.size()) != d)
      throw std::invalid_argument("points must share one dimension");
  for (int a = 0; a < d; ++a)
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j)
        if (points[static_cast<std::size_t>(i)][static_cast<std::size_t>(a)] ==
            points[static_cast<std::size_t>(j)][static_cast<std::size_t>(a)])
          throw std::invalid_argument("points must have distinct coordinates on every axis");
  if (pattern.dimension() > d)
    throw std::invalid_argument("pattern dimension exceeds point dimension");
  if (k > m) return false;
  std::vector<const std::vector<int>*> parts;
  parts.reserve(static_cast<std::size_t>(pattern.dimension()) - 1);
  for (int j = 1; j < pattern.dimension(); ++j) parts.push_back(&pattern.part(j).values());
  auto coord = [&](int q, int a) {
    return points[static_cast<std::size_t>(q)][static_cast<std::size_t>(a)];
  };
  std::vector<int> ord(static_cast<std::size_t>(m));
  for (const auto& tuple : detail::increasing_tuples(d, pattern.dimension())) {
    for (int i = 0; i < m; ++i) ord[static_cast<std::size_t>(i)] = i;
    std::sort(ord.begin(), ord.end(),
              [&](int x, int y) { return coord(x, tuple[0]) < coord(y, tuple[0]); });
    if (detail::embeds_along(coord, ord.data(), m, tuple.data(), pattern.dimension(),
                             parts.data(), k, -1))
      return true;
  }
  return false;
}

// Text forms. Dimension 2 uses the bare permutation word ("132"); higher
// dimensions wrap the component words in parentheses ("(12,21)"). Components
// are comma-separated while every word is compact, semicolon-separated
// otherwise (comma would be ambiguous once words themselves contain commas).
inline std::string to_string(const DPermutation& dp) {
  if (dp.dimension() == 2) return to_string(dp.part(1));
  const char sep = dp.size() <= 9 ? ',' : ';';
  std::string out = "(";
  for (int j = 1; j < dp.dimension(); ++j) {
    if (j > 1) out += sep;
    out += to_string(dp.part(j));
  }
  out += ')';
  return out;
}

inline std::ostream& operator<<(std::ostream& os, const DPermutation& dp) {
  return os << to_string(dp);
}

namespace detail {

inline std::string_view trim_slice(std::string_view text, std::size_t& base) {
  while (!text.empty() && text.front() == ' ') {
    text.remove_prefix(1);
    ++base;
  }
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  return text;
}

inline DPermutation parse_dpermutation_at(std::string_view text, std::size_t base) {
  text = trim_slice(text, base);
  if (text.empty()) throw parse_error("empty d-permutation text", base);
  if (text.front() != '(')
    return DPermutation(parse_permutation_at(text, base));
  if (text.back() != ')')
    throw parse_error("missing closing parenthesis", base + text.size());
  std::string_view inner = text.substr(1, text.size() - 2);
  if (inner.empty()) throw parse_error("empty component list", base + 1);
  const char sep = inner.find(';') != std::string_view::npos ? ';' : ',';
  std::vector<Permutation> parts;
  std::vector<std::size_t> part_pos;
  std::size_t start = 0;
  while (start <= inner.size()) {
    std::size_t end = inner.find(sep, start);
    if (end == std::string_view::npos) end = inner.size();
    std::size_t slice_base = base + 1 + start;
    std::string_view slice = trim_slice(inner.substr(start, end - start), slice_base);
    if (slice.empty()) throw parse_error("empty component", slice_base);
    parts.push_back(parse_permutation_at(slice, slice_base));
    part_pos.push_back(slice_base);
    if (end == inner.size()) break;
    start = end + 1;
  }
  if (parts.size() < 2)
    throw parse_error("parenthesized form needs at least two components", base);
  for (std::size_t j = 1; j < parts.size(); ++j)
    if (parts[j].size() != parts.front().size())
      throw parse_error("components must share one size", part_pos[j]);
  return DPermutation(std::move(parts));
}

}  // namespace detail

inline DPermutation parse_dpermutation(std::string_view text) {
  return detail::parse_dpermutation_at(text, 0);
}

// Canonical order for pattern sets: by dimension, then size, then text form.
inline bool pattern_less(const Pattern& a, const Pattern& b) {
  if (a.dimension() != b.dimension()) return a.dimension() < b.dimension();
  if (a.size() != b.size()) return a.size() < b.size();
  return to_string(a) < to_string(b);
}

inline std::vector<Pattern> canonical_patterns(std::vector<Pattern> patterns) {
  std::sort(patterns.begin(), patterns.end(), pattern_less);
  patterns.erase(std::unique(patterns.begin(), patterns.end()), patterns.end());
  return patterns;
}

inline std::string to_string(const std::vector<Pattern>& patterns) {
  std::string out;
  for (std::size_t i = 0; i < patterns.size(); ++i) {
    if (i) out += ';';
    out += to_string(patterns[i]);
  }
  return out;
}

inline std::string pattern_set_text(const std::vector<Pattern>& patterns) {
  return to_string(canonical_patterns(patterns));
}

// Pattern sets are semicolon-joined d-permutations; semicolons inside
// parentheses belong to a component list. The result is canonicalized
// (sorted, duplicates dropped).
inline std::vector<Pattern> parse_pattern_set(std::string_view text) {
  std::vector<Pattern> out;
  std::size_t start = 0;
  int depth = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    const bool at_end = i == text.size();
    if (!at_end && text[i] == '(') ++depth;
    if (!at_end && text[i] == ')') --depth;
    if (at_end || (text[i] == ';' && depth == 0)) {
      out.push_back(detail::parse_dpermutation_at(text.substr(start, i - start), start));
      start = i + 1;
    }
  }
  return canonical_patterns(std::move(out));
}

}  // namespace dperm
