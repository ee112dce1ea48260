#pragma once

// Exhaustive generation of pattern-avoiding d-permutations. The pruned
// search builds the diagram point by point in increasing first coordinate
// and tests, after each placement, for a pattern occurrence that uses the
// newest point; containment is monotone under point insertion, so a clean
// prefix plus a clean new point means the whole prefix is clean. A naive
// generator over all (n!)^(d-1) tuples serves as an independent oracle.

#include <algorithm>
#include <array>
#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "dperm/dpermutation.hpp"

namespace dperm {

// Raised when a request exceeds a configured resource bound instead of
// silently running forever.
class resource_limit_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class QueryMode { count, enumerate };

struct AvoidanceQuery {
  int n = 0;
  int d = 3;
  std::vector<Pattern> patterns;
  QueryMode mode = QueryMode::count;
};

// terms[i] = number of avoiders of size i+1 (indexed from n = 1).
struct CountingSequence {
  std::vector<Pattern> patterns;
  int d = 3;
  std::vector<std::int64_t> terms;

  std::int64_t term(int n) const { return terms.at(static_cast<std::size_t>(n) - 1); }
};

inline constexpr std::int64_t kNaiveSafetyBound = 10'000'000;

// requested > 0 is taken literally; 0 means one worker per hardware thread.
inline int resolve_workers(int requested) {
  if (requested < 0) throw std::invalid_argument("worker count must be >= 0");
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

namespace detail {

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r = 0;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("count overflow");
  return r;
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r = 0;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("count overflow");
  return r;
}

inline std::int64_t checked_pow(std::int64_t base, int exp) {
  std::int64_t r = 1;
  for (int i = 0; i < exp; ++i) r = checked_mul(r, base);
  return r;
}

inline void validate_query(const AvoidanceQuery& q, QueryMode expected, const char* op) {
  if (q.mode != expected)
    throw std::invalid_argument(std::string(op) + ": query has the wrong mode");
  if (q.n < 0) throw std::invalid_argument("size must be non-negative");
  if (q.d < 2) throw std::invalid_argument("dimension must be at least 2");
  if (q.d > 16) throw resource_limit_error("dimensions above 16 are not supported");
  if (q.n > 64) throw resource_limit_error("sizes above 64 are not supported");
  for (const auto& p : q.patterns)
    if (p.dimension() > q.d)
      throw std::invalid_argument("pattern dimension exceeds query dimension");
}

inline bool has_empty_pattern(const std::vector<Pattern>& patterns) {
  for (const auto& p : patterns)
    if (p.size() == 0) return true;
  return false;
}

// Claims branch indices from a shared counter; `make_state()` runs once per
// worker, fn(state, branch) for every branch. The first exception wins and
// stops the remaining work.
template <typename StateFactory, typename Fn>
void parallel_branches(std::int64_t branches, int workers, StateFactory&& make_state,
                       Fn&& fn) {
  if (branches <= 0) return;
  const int w = static_cast<int>(
      std::min<std::int64_t>(std::max(1, workers), branches));
  if (w == 1) {
    auto state = make_state();
    for (std::int64_t b = 0; b < branches; ++b) fn(state, b);
    return;
  }
  std::atomic<std::int64_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(w));
  for (int t = 0; t < w; ++t) {
    pool.emplace_back([&] {
      auto state = make_state();
      try {
        while (true) {
          const std::int64_t b = next.fetch_add(1, std::memory_order_relaxed);
          if (b >= branches) break;
          fn(state, b);
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(branches, std::memory_order_relaxed);
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

// Depth-first construction of avoider diagrams. One instance per worker;
// copying duplicates the scratch state.
class AvoidanceSearch {
 public:
  explicit AvoidanceSearch(const AvoidanceQuery& q) : n_(q.n), d_(q.d) {
    for (const auto& p : q.patterns) {
      if (p.size() < 1 || p.size() > n_) continue;  // cannot occur, no pruning power
      ActivePattern ap;
      ap.dim = p.dimension();
      ap.k = p.size();
      for (int j = 1; j < p.dimension(); ++j) ap.parts.push_back(p.part(j).values());
      active_.push_back(std::move(ap));
    }
    tuples_by_dim_.resize(static_cast<std::size_t>(d_) + 1);
    for (const auto& ap : active_)
      if (tuples_by_dim_[static_cast<std::size_t>(ap.dim)].empty())
        tuples_by_dim_[static_cast<std::size_t>(ap.dim)] = increasing_tuples(d_, ap.dim);
    vals_.assign(static_cast<std::size_t>(d_) * static_cast<std::size_t>(n_), 0);
    for (int pos = 0; pos < n_; ++pos) vals_[static_cast<std::size_t>(pos)] = pos + 1;
    used_.assign(static_cast<std::size_t>(d_), 0);
  }

  // Branches split the search on the first point's free coordinates; branch
  // index digits are the axis values in axis order, so ascending branch index
  // is lexicographic in (sigma_1(1), ..., sigma_{d-1}(1)).
  std::int64_t branch_count() const {
    return n_ == 0 ? 1 : checked_pow(n_, d_ - 1);
  }

  template <typename Sink>
  void run_branch(std::int64_t branch, Sink&& sink) {
    if (n_ == 0) {
      sink(*this);
      return;
    }
    std::int64_t rest = branch;
    for (int axis = d_ - 1; axis >= 1; --axis) {
      const int v = static_cast<int>(rest % n_) + 1;
      rest /= n_;
      vals_[static_cast<std::size_t>(axis) * static_cast<std::size_t>(n_)] = v;
      used_[static_cast<std::size_t>(axis)] = 1ULL << (v - 1);
    }
    if (point_ok(0)) {
      if (n_ == 1)
        sink(*this);
      else
        extend(1, 1, sink);
    }
    for (int axis = 1; axis < d_; ++axis) used_[static_cast<std::size_t>(axis)] = 0;
  }

  DPermutation current() const {
    std::vector<Permutation> parts;
    parts.reserve(static_cast<std::size_t>(d_) - 1);
    for (int axis = 1; axis < d_; ++axis) {
      const std::size_t off = static_cast<std::size_t>(axis) * static_cast<std::size_t>(n_);
      parts.emplace_back(
          std::vector<int>(vals_.begin() + static_cast<std::ptrdiff_t>(off),
                           vals_.begin() + static_cast<std::ptrdiff_t>(off + static_cast<std::size_t>(n_))));
    }
    return DPermutation(std::move(parts));
  }

 private:
  struct ActivePattern {
    int dim = 0;
    int k = 0;
    std::vector<std::vector<int>> parts;  // 0-based value arrays
  };

  template <typename Sink>
  void extend(int pos, int axis, Sink&& sink) {
    if (axis == d_) {
      if (!point_ok(pos)) return;
      if (pos + 1 == n_) {
        sink(*this);
        return;
      }
      extend(pos + 1, 1, sink);
      return;
    }
    for (int v = 1; v <= n_; ++v) {
      const std::uint64_t bit = 1ULL << (v - 1);
      if (used_[static_cast<std::size_t>(axis)] & bit) continue;
      vals_[static_cast<std::size_t>(axis) * static_cast<std::size_t>(n_) +
            static_cast<std::size_t>(pos)] = v;
      used_[static_cast<std::size_t>(axis)] |= bit;
      extend(pos, axis + 1, sink);
      used_[static_cast<std::size_t>(axis)] &= ~bit;
    }
  }

  // True when no pattern occurrence uses the point at `pos` within the
  // prefix 0..pos.
  bool point_ok(int pos) {
    const int m = pos + 1;
    auto coord = [this](int q, int a) {
      return vals_[static_cast<std::size_t>(a) * static_cast<std::size_t>(n_) +
                   static_cast<std::size_t>(q)];
    };
    std::array<int, 64> ord{};
    std::array<const std::vector<int>*, 15> parts_ptrs{};
    for (const auto& ap : active_) {
      if (ap.k > m) continue;
      for (int j = 0; j < ap.dim - 1; ++j)
        parts_ptrs[static_cast<std::size_t>(j)] = &ap.parts[static_cast<std::size_t>(j)];
      for (const auto& tuple : tuples_by_dim_[static_cast<std::size_t>(ap.dim)]) {
        for (int i = 0; i < m; ++i) ord[static_cast<std::size_t>(i)] = i;
        if (tuple[0] != 0)
          std::sort(ord.begin(), ord.begin() + m,
                    [&](int x, int y) { return coord(x, tuple[0]) < coord(y, tuple[0]); });
        if (embeds_along(coord, ord.data(), m, tuple.data(), ap.dim, parts_ptrs.data(),
                         ap.k, pos))
          return false;
      }
    }
    return true;
  }

  int n_;
  int d_;
  std::vector<ActivePattern> active_;
  std::vector<std::vector<std::vector<int>>> tuples_by_dim_;
  std::vector<int> vals_;           // vals_[axis * n + pos]; axis 0 holds 1..n
  std::vector<std::uint64_t> used_;  // per-axis bitmask of taken values
};

}  // namespace detail

inline std::int64_t count_avoiders(const AvoidanceQuery& query, int workers = 0) {
  detail::validate_query(query, QueryMode::count, "count_avoiders");
  if (detail::has_empty_pattern(query.patterns)) return 0;
  detail::AvoidanceSearch prototype(query);
  const std::int64_t branches = prototype.branch_count();
  std::vector<std::int64_t> per_branch(static_cast<std::size_t>(branches), 0);
  detail::parallel_branches(
      branches, resolve_workers(workers), [&] { return prototype; },
      [&](detail::AvoidanceSearch& search, std::int64_t b) {
        std::int64_t local = 0;
        search.run_branch(b, [&](const detail::AvoidanceSearch&) { ++local; });
        per_branch[static_cast<std::size_t>(b)] = local;
      });
  std::int64_t total = 0;
  for (std::int64_t c : per_branch) total = detail::checked_add(total, c);
  return total;
}

// Avoiders in lexicographic order of their component-word tuple. The search
// emits in diagram-prefix order, which differs, so results are buffered and
// sorted before being handed to `emit`.
inline std::vector<DPermutation> collect_avoiders(const AvoidanceQuery& query,
                                                  int workers = 0) {
  detail::validate_query(query, QueryMode::enumerate, "collect_avoiders");
  if (detail::has_empty_pattern(query.patterns)) return {};
  detail::AvoidanceSearch prototype(query);
  const std::int64_t branches = prototype.branch_count();
  std::vector<std::vector<DPermutation>> per_branch(static_cast<std::size_t>(branches));
  detail::parallel_branches(
      branches, resolve_workers(workers), [&] { return prototype; },
      [&](detail::AvoidanceSearch& search, std::int64_t b) {
        search.run_branch(b, [&](const detail::AvoidanceSearch& s) {
          per_branch[static_cast<std::size_t>(b)].push_back(s.current());
        });
      });
  std::vector<DPermutation> out;
  for (auto& bucket : per_branch) {
    out.insert(out.end(), std::make_move_iterator(bucket.begin()),
               std::make_move_iterator(bucket.end()));
    bucket.clear();
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline void enumerate_avoiders(const AvoidanceQuery& query,
                               const std::function<void(const DPermutation&)>& emit,
                               int workers = 0) {
  for (const DPermutation& dp : collect_avoiders(query, workers)) emit(dp);
}

inline CountingSequence counting_sequence(const std::vector<Pattern>& patterns, int d,
                                          int n_max, int workers = 0) {
  if (n_max < 1) throw std::invalid_argument("n_max must be at least 1");
  CountingSequence seq;
  seq.patterns = patterns;
  seq.d = d;
  seq.terms.reserve(static_cast<std::size_t>(n_max));
  for (int n = 1; n <= n_max; ++n) {
    AvoidanceQuery q{n, d, patterns, QueryMode::count};
    seq.terms.push_back(count_avoiders(q, workers));
  }
  return seq;
}

// Reference oracle: walks all (n!)^(d-1) component-word tuples and filters
// with avoids_all. Refuses instead of attempting more than `safety_bound`
// tuples.
inline std::int64_t count_avoiders_naive(const AvoidanceQuery& query,
                                         std::int64_t safety_bound = kNaiveSafetyBound) {
  detail::validate_query(query, QueryMode::count, "count_avoiders_naive");
  std::int64_t factorial = 1;
  for (int i = 2; i <= query.n; ++i) factorial = detail::checked_mul(factorial, i);
  std::int64_t total = 1;
  bool overflow = false;
  try {
    total = detail::checked_pow(factorial, query.d - 1);
  } catch (const std::overflow_error&) {
    overflow = true;
  }
  if (overflow || total > safety_bound)
    throw resource_limit_error(
        "naive enumeration refused: (n!)^(d-1) exceeds the safety bound of " +
        std::to_string(safety_bound) + " tuples");
  std::vector<std::vector<int>> words(
      static_cast<std::size_t>(query.d) - 1,
      Permutation::identity(query.n).values());
  std::int64_t count = 0;
  while (true) {
    std::vector<Permutation> parts;
    parts.reserve(words.size());
    for (const auto& w : words) parts.emplace_back(w);
    if (avoids_all(DPermutation(std::move(parts)), query.patterns)) ++count;
    int axis = query.d - 2;
    while (axis >= 0 &&
           !std::next_permutation(words[static_cast<std::size_t>(axis)].begin(),
                                  words[static_cast<std::size_t>(axis)].end()))
      --axis;  // wrapped around to the identity, carry on
    if (axis < 0) break;
  }
  return count;
}

}  // namespace dperm
