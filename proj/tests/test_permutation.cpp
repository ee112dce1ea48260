#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <vector>

#include "dperm/permutation.hpp"

using dperm::Permutation;

namespace {

std::vector<Permutation> all_perms(int n) {
  std::vector<int> word(static_cast<std::size_t>(n));
  std::iota(word.begin(), word.end(), 1);
  std::vector<Permutation> out;
  do {
    out.emplace_back(word);
  } while (std::next_permutation(word.begin(), word.end()));
  return out;
}

// Independent standardization: rank every entry by counting smaller ones.
template <typename T>
std::vector<int> rank_by_counting(const std::vector<T>& seq) {
  std::vector<int> out(seq.size());
  for (std::size_t i = 0; i < seq.size(); ++i) {
    int rank = 1;
    for (std::size_t j = 0; j < seq.size(); ++j)
      if (seq[j] < seq[i]) ++rank;
    out[i] = rank;
  }
  return out;
}

// Independent containment: enumerate all k-subsequences and compare ranks.
bool contains_by_subsets(const Permutation& host, const Permutation& pattern) {
  const int n = host.size();
  const int k = pattern.size();
  if (k == 0) return true;
  if (k > n) return false;
  std::vector<int> idx;
  auto rec = [&](auto&& self, int from) -> bool {
    if (static_cast<int>(idx.size()) == k) {
      std::vector<int> word;
      for (int i : idx) word.push_back(host(i));
      return rank_by_counting(word) == pattern.values();
    }
    for (int i = from; i <= n; ++i) {
      idx.push_back(i);
      if (self(self, i + 1)) return true;
      idx.pop_back();
    }
    return false;
  };
  return rec(rec, 1);
}

}  // namespace

TEST_CASE("construction validates one-line words") {
  REQUIRE_NOTHROW(Permutation({2, 1, 3}));
  REQUIRE_NOTHROW(Permutation(std::vector<int>{}));
  REQUIRE_THROWS_AS(Permutation({1, 1}), std::invalid_argument);
  REQUIRE_THROWS_AS(Permutation({0, 1}), std::invalid_argument);
  REQUIRE_THROWS_AS(Permutation({1, 3}), std::invalid_argument);
  REQUIRE_THROWS_AS(Permutation({-1, 2, 1}), std::invalid_argument);
}

TEST_CASE("identity, reverse, inverse") {
  REQUIRE(Permutation::identity(3) == Permutation({1, 2, 3}));
  REQUIRE(Permutation::identity(0).empty());
  REQUIRE_THROWS_AS(Permutation::identity(-1), std::invalid_argument);

  REQUIRE(reverse(Permutation({1, 2, 3})) == Permutation({3, 2, 1}));
  REQUIRE(reverse(Permutation({1, 3, 2})) == Permutation({2, 3, 1}));

  REQUIRE(inverse(Permutation({2, 3, 1})) == Permutation({3, 1, 2}));
  REQUIRE(inverse(Permutation({4, 2, 3, 1})) == Permutation({4, 2, 3, 1}));
  REQUIRE(inverse(Permutation({1, 4, 3, 2})) == Permutation({1, 4, 3, 2}));

  for (int n = 0; n <= 5; ++n)
    for (const auto& p : all_perms(n)) {
      REQUIRE(reverse(reverse(p)) == p);
      REQUIRE(inverse(inverse(p)) == p);
      const Permutation q = inverse(p);
      for (int i = 1; i <= n; ++i) REQUIRE(q(p(i)) == i);
    }
}

TEST_CASE("compose") {
  // 2413 . 4231^-1 = 3412: the (2,3)-projection word of a worked example
  REQUIRE(compose(Permutation({2, 4, 1, 3}), inverse(Permutation({4, 2, 3, 1}))) ==
          Permutation({3, 4, 1, 2}));
  // 3124 . 1432^-1 = 3421
  REQUIRE(compose(Permutation({3, 1, 2, 4}), inverse(Permutation({1, 4, 3, 2}))) ==
          Permutation({3, 4, 2, 1}));
  REQUIRE_THROWS_AS(compose(Permutation({1, 2}), Permutation({1})),
                    std::invalid_argument);

  for (const auto& p : all_perms(4)) {
    REQUIRE(compose(Permutation::identity(4), p) == p);
    REQUIRE(compose(p, Permutation::identity(4)) == p);
    REQUIRE(compose(p, inverse(p)) == Permutation::identity(4));
    REQUIRE(compose(inverse(p), p) == Permutation::identity(4));
  }
}

TEST_CASE("standardize") {
  REQUIRE(dperm::standardize(std::vector<int>{5, 2, 9}) == Permutation({2, 1, 3}));
  REQUIRE(dperm::standardize(std::vector<double>{0.5, 1.5, 2.5}) ==
          Permutation({1, 2, 3}));
  REQUIRE(dperm::standardize(std::vector<int>{}) == Permutation());
  REQUIRE(dperm::standardize(std::vector<int>{7}) == Permutation({1}));
  REQUIRE_THROWS_AS(dperm::standardize(std::vector<int>{3, 3}), std::invalid_argument);
  REQUIRE_THROWS_AS(dperm::standardize(std::vector<double>{1.0, 2.0, 1.0}),
                    std::invalid_argument);

  SECTION("agrees with the counting oracle and is idempotent") {
    std::mt19937 rng(20240817);
    std::uniform_int_distribution<int> value(-50, 50);
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<int> seq(static_cast<std::size_t>(trial % 8));
      bool distinct = true;
      for (auto& v : seq) v = value(rng);
      std::vector<int> sorted = seq;
      std::sort(sorted.begin(), sorted.end());
      distinct = std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
      if (!distinct) continue;
      const Permutation st = dperm::standardize(seq);
      REQUIRE(st.values() == rank_by_counting(seq));
      REQUIRE(standardize(st) == st);
    }
    for (const auto& p : all_perms(4)) REQUIRE(standardize(p) == p);
  }
}

TEST_CASE("classical containment") {
  REQUIRE(contains_classical(Permutation({3, 4, 2, 1}), Permutation({2, 3, 1})));
  REQUIRE_FALSE(contains_classical(Permutation({3, 4, 1, 2}), Permutation({1, 2, 3})));
  REQUIRE(contains_classical(Permutation({3, 4, 1, 2}), Permutation({1, 2})));
  REQUIRE(contains_classical(Permutation({1}), Permutation()));
  REQUIRE(contains_classical(Permutation(), Permutation()));
  REQUIRE_FALSE(contains_classical(Permutation({1, 2}), Permutation({1, 2, 3})));

  SECTION("agrees with subsequence enumeration for n <= 5, k <= 3") {
    std::vector<Permutation> patterns;
    for (int k = 1; k <= 3; ++k)
      for (const auto& p : all_perms(k)) patterns.push_back(p);
    for (int n = 1; n <= 5; ++n)
      for (const auto& host : all_perms(n))
        for (const auto& pat : patterns)
          REQUIRE(contains_classical(host, pat) == contains_by_subsets(host, pat));
  }

  SECTION("inserting the maximum preserves containment") {
    for (int n = 2; n <= 4; ++n)
      for (const auto& host : all_perms(n))
        for (const auto& pat : all_perms(3)) {
          if (!contains_classical(host, pat)) continue;
          for (int pos = 0; pos <= n; ++pos) {
            std::vector<int> extended = host.values();
            extended.insert(extended.begin() + pos, n + 1);
            REQUIRE(contains_classical(Permutation(extended), pat));
          }
        }
  }

  SECTION("containment transfers to inverses of both words") {
    for (int n = 1; n <= 5; ++n)
      for (const auto& host : all_perms(n))
        for (int k = 2; k <= 3; ++k)
          for (const auto& pat : all_perms(k))
            REQUIRE(contains_classical(host, pat) ==
                    contains_classical(inverse(host), inverse(pat)));
  }
}

TEST_CASE("involutions") {
  REQUIRE(is_involution(Permutation({1, 3, 2})));
  REQUIRE(is_involution(Permutation({2, 1, 3})));
  REQUIRE(is_involution(Permutation({3, 2, 1})));
  REQUIRE_FALSE(is_involution(Permutation({2, 3, 1})));
  REQUIRE(is_involution(Permutation()));
  for (int n = 0; n <= 5; ++n)
    for (const auto& p : all_perms(n))
      REQUIRE(is_involution(p) == (inverse(p) == p));
}

TEST_CASE("text form") {
  REQUIRE(to_string(Permutation({1, 3, 2})) == "132");
  REQUIRE(dperm::parse_permutation("132") == Permutation({1, 3, 2}));
  REQUIRE(dperm::parse_permutation("1,3,2") == Permutation({1, 3, 2}));

  SECTION("round trip, compact for n <= 9") {
    for (int n = 1; n <= 4; ++n)
      for (const auto& p : all_perms(n)) {
        const std::string text = to_string(p);
        REQUIRE(text.find(',') == std::string::npos);
        REQUIRE(dperm::parse_permutation(text) == p);
      }
  }

  SECTION("round trip, comma form for n >= 10") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<int> word(12);
      std::iota(word.begin(), word.end(), 1);
      std::shuffle(word.begin(), word.end(), rng);
      const Permutation p{word};
      const std::string text = to_string(p);
      REQUIRE(text.find(',') != std::string::npos);
      REQUIRE(dperm::parse_permutation(text) == p);
    }
  }

  SECTION("errors carry byte positions") {
    using dperm::parse_error;
    auto position_of = [](auto&& fn) -> std::size_t {
      try {
        fn();
      } catch (const parse_error& e) {
        return e.position();
      }
      FAIL("expected parse_error");
      return static_cast<std::size_t>(-1);
    };
    REQUIRE(position_of([] { dperm::parse_permutation(""); }) == 0);
    REQUIRE(position_of([] { dperm::parse_permutation("13x2"); }) == 2);
    REQUIRE(position_of([] { dperm::parse_permutation("122"); }) == 2);
    REQUIRE(position_of([] { dperm::parse_permutation("13"); }) == 1);
    REQUIRE(position_of([] { dperm::parse_permutation("1,2,,3"); }) == 4);
    REQUIRE(position_of([] { dperm::parse_permutation("1,2,9"); }) == 4);
    REQUIRE(position_of([] { dperm::parse_permutation("102"); }) == 1);
  }
}
