#pragma once

// Classical one-line permutations on [n] = {1, ..., n}: construction,
// composition, inversion, reversal, standardization and pattern containment.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dperm {

// Error raised by the text-form parsers. `position` is a 0-based byte offset
// into the parsed string.
class parse_error : public std::runtime_error {
 public:
  parse_error(const std::string& message, std::size_t position)
      : std::runtime_error(message + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

// A permutation of [n] in one-line notation. Values are 1-based. The empty
// permutation (n = 0) is valid and acts as the identity of size 0.
class Permutation {
 public:
  Permutation() = default;

  explicit Permutation(std::vector<int> one_line) : values_(std::move(one_line)) {
    std::vector<char> seen(values_.size(), 0);
    for (int v : values_) {
      if (v < 1 || v > static_cast<int>(values_.size()) || seen[v - 1])
        throw std::invalid_argument("one-line values must be a bijection on 1..n");
      seen[v - 1] = 1;
    }
  }

  static Permutation identity(int n) {
    if (n < 0) throw std::invalid_argument("identity: size must be non-negative");
    std::vector<int> v(static_cast<std::size_t>(n));
    std::iota(v.begin(), v.end(), 1);
    return Permutation(std::move(v));
  }

  int size() const noexcept { return static_cast<int>(values_.size()); }
  bool empty() const noexcept { return values_.empty(); }

  // sigma(i), 1-based.
  int operator()(int i) const { return values_[static_cast<std::size_t>(i) - 1]; }

  const std::vector<int>& values() const noexcept { return values_; }

  auto operator<=>(const Permutation&) const = default;

 private:
  std::vector<int> values_;
};

inline Permutation reverse(const Permutation& p) {
  std::vector<int> v(p.values().rbegin(), p.values().rend());
  return Permutation(std::move(v));
}

inline Permutation inverse(const Permutation& p) {
  std::vector<int> v(static_cast<std::size_t>(p.size()));
  for (int i = 1; i <= p.size(); ++i) v[static_cast<std::size_t>(p(i)) - 1] = i;
  return Permutation(std::move(v));
}

// (outer . inner)(i) = outer(inner(i)).
inline Permutation compose(const Permutation& outer, const Permutation& inner) {
  if (outer.size() != inner.size())
    throw std::invalid_argument("compose: sizes differ");
  std::vector<int> v(static_cast<std::size_t>(outer.size()));
  for (int i = 1; i <= outer.size(); ++i) v[static_cast<std::size_t>(i) - 1] = outer(inner(i));
  return Permutation(std::move(v));
}

// The unique permutation with the same relative order as `seq`. Ties are an
// error, never broken silently.
template <typename T>
Permutation standardize(const std::vector<T>& seq) {
  const int n = static_cast<int>(seq.size());
  std::vector<int> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) { return seq[a] < seq[b]; });
  for (int r = 1; r < n; ++r)
    if (!(seq[idx[r - 1]] < seq[idx[r]]))
      throw std::invalid_argument("standardize: entries must be distinct");
  std::vector<int> out(static_cast<std::size_t>(n));
  for (int r = 0; r < n; ++r) out[static_cast<std::size_t>(idx[r])] = r + 1;
  return Permutation(std::move(out));
}

inline Permutation standardize(const Permutation& p) { return standardize(p.values()); }

// True iff some subsequence of `host` standardizes to `pattern`. Backtracking
// over index embeddings; a partial embedding is kept only while it stays
// order-isomorphic to the pattern prefix.
inline bool contains_classical(const Permutation& host, const Permutation& pattern) {
  const int n = host.size();
  const int k = pattern.size();
  if (k == 0) return true;
  if (k > n) return false;
  std::vector<int> chosen(static_cast<std::size_t>(k));
  auto extend = [&](auto&& self, int slot, int from) -> bool {
    if (slot == k) return true;
    for (int c = from; c <= n - (k - slot) + 1; ++c) {
      bool ok = true;
      for (int t = 0; t < slot && ok; ++t)
        ok = (host(c) > host(chosen[t])) == (pattern(slot + 1) > pattern(t + 1));
      if (!ok) continue;
      chosen[slot] = c;
      if (self(self, slot + 1, c + 1)) return true;
    }
    return false;
  };
  return extend(extend, 0, 1);
}

inline bool is_involution(const Permutation& p) {
  for (int i = 1; i <= p.size(); ++i)
    if (p(p(i)) != i) return false;
  return true;
}

// Text form: compact digit word when n <= 9 ("132"), comma-separated values
// otherwise ("10,3,2,..."). Parsers accept both forms.
inline std::string to_string(const Permutation& p) {
  std::string out;
  if (p.size() <= 9) {
    for (int v : p.values()) out += static_cast<char>('0' + v);
  } else {
    for (int i = 0; i < p.size(); ++i) {
      if (i) out += ',';
      out += std::to_string(p.values()[static_cast<std::size_t>(i)]);
    }
  }
  return out;
}

inline std::ostream& operator<<(std::ostream& os, const Permutation& p) {
  return os << to_string(p);
}

namespace detail {

// `base` offsets reported error positions when the text is a slice of a
// larger input.
inline Permutation parse_permutation_at(std::string_view text, std::size_t base) {
  if (text.empty()) throw parse_error("empty permutation text", base);
  std::vector<int> values;
  std::vector<std::size_t> value_pos;
  if (text.find(',') != std::string_view::npos) {
    std::size_t start = 0;
    while (start <= text.size()) {
      std::size_t end = text.find(',', start);
      if (end == std::string_view::npos) end = text.size();
      std::string_view token = text.substr(start, end - start);
      if (token.empty()) throw parse_error("empty value", base + start);
      long long v = 0;
      for (std::size_t i = 0; i < token.size(); ++i) {
        if (token[i] < '0' || token[i] > '9')
          throw parse_error("invalid character in permutation value", base + start + i);
        v = v * 10 + (token[i] - '0');
        if (v > 1'000'000) throw parse_error("permutation value out of range", base + start);
      }
      values.push_back(static_cast<int>(v));
      value_pos.push_back(base + start);
      if (end == text.size()) break;
      start = end + 1;
    }
  } else {
    for (std::size_t i = 0; i < text.size(); ++i) {
      if (text[i] < '1' || text[i] > '9')
        throw parse_error("invalid character in permutation word", base + i);
      values.push_back(text[i] - '0');
      value_pos.push_back(base + i);
    }
  }
  const int n = static_cast<int>(values.size());
  std::vector<char> seen(values.size(), 0);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const int v = values[i];
    if (v < 1 || v > n) throw parse_error("value outside 1..n", value_pos[i]);
    if (seen[static_cast<std::size_t>(v) - 1]) throw parse_error("repeated value", value_pos[i]);
    seen[static_cast<std::size_t>(v) - 1] = 1;
  }
  return Permutation(std::move(values));
}

}  // namespace detail

inline Permutation parse_permutation(std::string_view text) {
  return detail::parse_permutation_at(text, 0);
}

}  // namespace dperm
