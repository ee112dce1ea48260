#pragma once

// Reference counting sequences for 3-permutation avoidance classes, the
// recurrences they satisfy, and verification of both against fresh
// enumeration. Also: OEIS b-file loading and prefix comparison. Registry
// terms are frozen reference data; verify_* recomputes everything it checks.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dperm/dpermutation.hpp"
#include "dperm/enumeration.hpp"
#include "dperm/symmetry.hpp"

namespace dperm {

struct ExpTerm {
  std::int64_t coeff = 0;
  std::int64_t base = 1;
  int shift = 0;
};

// One linear step: a_{n+1} = prev1*a_n + prev2*a_{n-1}
//                          + c0 + c1*n + c2*n^2 + coeff*base^(n+shift).
struct RecurrenceStep {
  std::int64_t prev1 = 0;
  std::int64_t prev2 = 0;
  std::int64_t c0 = 0;
  std::int64_t c1 = 0;
  std::int64_t c2 = 0;
  ExpTerm exp;
};

struct RecurrenceSpec {
  std::string id;  // canonical pattern-set text of the avoidance class
  std::vector<std::int64_t> initial;
  RecurrenceStep step;
  std::int64_t (*closed_form)(int) = nullptr;
  std::string note;
};

namespace detail {

inline std::int64_t pow_i64(std::int64_t base, int exp) {
  if (exp < 0) throw std::invalid_argument("negative exponent");
  return checked_pow(base, exp);
}

}  // namespace detail

inline std::vector<std::int64_t> eval_recurrence(const RecurrenceSpec& spec, int n_max) {
  if (n_max < 1) throw std::invalid_argument("n_max must be at least 1");
  const std::size_t required = spec.step.prev2 != 0 ? 2 : 1;
  if (spec.initial.size() < required)
    throw std::invalid_argument("recurrence '" + spec.id + "' needs " +
                                std::to_string(required) + " initial terms");
  std::vector<std::int64_t> terms(
      spec.initial.begin(),
      spec.initial.begin() +
          static_cast<std::ptrdiff_t>(std::min<std::size_t>(
              spec.initial.size(), static_cast<std::size_t>(n_max))));
  while (static_cast<int>(terms.size()) < n_max) {
    const int n = static_cast<int>(terms.size());  // next term is a_{n+1}
    std::int64_t next = 0;
    next = detail::checked_add(next, detail::checked_mul(spec.step.prev1, terms.back()));
    if (spec.step.prev2 != 0)
      next = detail::checked_add(
          next, detail::checked_mul(spec.step.prev2, terms[terms.size() - 2]));
    next = detail::checked_add(next, spec.step.c0);
    next = detail::checked_add(next, detail::checked_mul(spec.step.c1, n));
    next = detail::checked_add(
        next, detail::checked_mul(spec.step.c2, detail::checked_mul(n, n)));
    if (spec.step.exp.coeff != 0)
      next = detail::checked_add(
          next, detail::checked_mul(spec.step.exp.coeff,
                                    detail::pow_i64(spec.step.exp.base,
                                                    n + spec.step.exp.shift)));
    terms.push_back(next);
  }
  return terms;
}

// One frozen reference row: printed terms, the trivial-Wilf-equivalence
// class count, and the OEIS link when one is known. `table` 1..3 matches the
// published tables; 0 marks supplementary rows. `oeis_index_of_a1` is the
// b-file index aligned with a_1; comparison starts at n = oeis_match_from
// (some sequences agree only from n = 2 on).
struct ReferenceSequence {
  int table = 0;
  std::string pattern_set;
  std::optional<int> twe_count;
  std::vector<std::int64_t> terms;
  std::optional<std::string> oeis_id;
  bool oeis_conjectured = false;
  long long oeis_index_of_a1 = 1;
  int oeis_match_from = 1;
  std::string comment;
};

class SequenceRegistry {
 public:
  static const SequenceRegistry& instance() {
    static const SequenceRegistry reg;
    return reg;
  }

  const std::vector<RecurrenceSpec>& recurrences() const { return recurrences_; }
  const std::vector<ReferenceSequence>& rows() const { return rows_; }

  const RecurrenceSpec* find_recurrence(std::string_view pattern_set) const {
    for (const auto& r : recurrences_)
      if (r.id == pattern_set) return &r;
    return nullptr;
  }

  const ReferenceSequence* find_row(std::string_view pattern_set) const {
    for (const auto& r : rows_)
      if (r.pattern_set == pattern_set) return &r;
    return nullptr;
  }

  const ReferenceSequence* find_row_by_oeis(std::string_view oeis_id) const {
    for (const auto& r : rows_)
      if (r.oeis_id && *r.oeis_id == oeis_id) return &r;
    return nullptr;
  }

  std::vector<const ReferenceSequence*> table_rows(int table) const {
    std::vector<const ReferenceSequence*> out;
    for (const auto& r : rows_)
      if (r.table == table) out.push_back(&r);
    return out;
  }

 private:
  SequenceRegistry() {
    using I = std::vector<std::int64_t>;

    recurrences_ = {
        {"132;213", I{1},
         {.prev1 = 1, .c0 = -2, .c1 = 2, .exp = {3, 2, -1}},
         +[](int n) -> std::int64_t {
           return 3 * detail::pow_i64(2, n - 1) +
                  static_cast<std::int64_t>(n - 1) * (n - 2) - 2;
         },
         ""},
        {"132;231", I{1},
         {.prev1 = 2, .exp = {1, 2, 0}},
         +[](int n) -> std::int64_t { return n * detail::pow_i64(2, n - 1); }, ""},
        {"132;321", I{1},
         {.prev1 = 1, .c1 = 2, .c2 = 1},
         +[](int n) -> std::int64_t {
           const std::int64_t nn = n;
           return (2 * nn * nn * nn + 3 * nn * nn - 5 * nn + 6) / 6;
         },
         ""},
        {"231;312", I{1, 4}, {.prev1 = 2, .prev2 = 2}, nullptr, ""},
        {"231;321", I{1},
         {.exp = {4, 3, -1}},
         +[](int n) -> std::int64_t {
           return n == 1 ? 1 : 4 * detail::pow_i64(3, n - 2);
         },
         "closed form applies from n = 2; a_1 = 1"},
        {"132;213;312", I{1},
         {.c0 = 2, .c1 = 2},
         +[](int n) -> std::int64_t { return n == 1 ? 1 : 2 * std::int64_t{n}; },
         "closed form applies from n = 2; a_1 = 1"},
        {"132;213;321", I{1},
         {.c0 = 1, .c1 = 2, .c2 = 1},
         +[](int n) -> std::int64_t { return std::int64_t{n} * n; }, ""},
        {"132;231;312", I{1},
         {.prev1 = 1, .c0 = 3},
         +[](int n) -> std::int64_t { return 3 * std::int64_t{n} - 2; }, ""},
        {"213;231;321", I{1},
         {.c0 = 2, .c1 = 2},
         +[](int n) -> std::int64_t { return n == 1 ? 1 : 2 * std::int64_t{n}; },
         "closed form applies from n = 2; a_1 = 1"},
        {"231;312;321", I{1, 4}, {.prev1 = 1, .prev2 = 3}, nullptr, ""},
    };

    rows_ = {
        // avoidance classes of one or two patterns
        {1, "12", 1, I{1, 0, 0, 0, 0}, {}, false, 1, 1, ""},
        {1, "21", 1, I{1, 1, 1, 1, 1}, {}, false, 1, 1, ""},
        {1, "123", 1, I{1, 4, 20, 100, 410, 1224, 2232}, {}, false, 1, 1, "not in OEIS"},
        {1, "132", 2, I{1, 4, 21, 116, 646, 3596, 19981}, {}, false, 1, 1, "not in OEIS"},
        {1, "231", 2, I{1, 4, 21, 123, 767, 4994, 33584}, {}, false, 1, 1, "not in OEIS"},
        {1, "321", 1, I{1, 4, 21, 128, 850, 5956, 43235}, {}, false, 1, 1, "not in OEIS"},
        {1, "123;132", 2, I{1, 4, 8, 8, 0, 0, 0}, {}, false, 1, 1, "terminates after n = 4"},
        {1, "123;231", 2, I{1, 4, 9, 6, 0, 0, 0}, {}, false, 1, 1, "terminates after n = 4"},
        {1, "123;321", 1, I{1, 4, 8, 0, 0, 0, 0}, {}, false, 1, 1, "terminates after n = 3"},
        {1, "132;213", 1, I{1, 4, 12, 28, 58, 114, 220}, "A356728", false, 1, 1,
         "proved recurrence"},
        {1, "132;231", 4, I{1, 4, 12, 32, 80, 192, 448}, "A001787", false, 1, 1,
         "proved recurrence"},
        {1, "132;321", 2, I{1, 4, 12, 27, 51, 86, 134}, "A047732", false, 1, 1,
         "proved recurrence"},
        {1, "231;312", 1, I{1, 4, 10, 28, 76, 208, 568}, "A026150", false, 1, 1,
         "proved recurrence"},
        {1, "231;321", 2, I{1, 4, 12, 36, 108, 324, 972}, "A003946", false, 0, 1,
         "proved recurrence"},
        // avoidance classes of three patterns
        {2, "123;132;213", 3, I{1, 4, 2, 0, 0}, {}, false, 1, 1, "terminates after n = 3"},
        {2, "123;132;231", 4, I{1, 4, 3, 0, 0}, {}, false, 1, 1, "terminates after n = 3"},
        {2, "123;231;312", 1, I{1, 4, 0, 0, 0}, {}, false, 1, 1, "terminates after n = 2"},
        {2, "123;231;321", 2, I{1, 4, 3, 0, 0}, {}, false, 1, 1, "terminates after n = 3"},
        {2, "132;213;312", 2, I{1, 4, 6, 8, 10}, "A005843", false, 1, 2,
         "proved recurrence; matches from n = 2"},
        {2, "132;213;321", 1, I{1, 4, 9, 16, 25}, "A000290", false, 1, 1,
         "proved recurrence"},
        {2, "132;231;312", 2, I{1, 4, 7, 10, 13}, "A016777", false, 0, 1,
         "proved recurrence"},
        {2, "213;231;321", 4, I{1, 4, 6, 8, 10}, "A005843", false, 1, 2,
         "proved recurrence; matches from n = 2"},
        {2, "231;312;321", 1, I{1, 4, 7, 19, 40}, "A006130", false, 1, 1,
         "proved recurrence"},
        // mixed-dimension classes: one size-3 pattern and one 3-dimensional
        // size-2 pattern
        {3, "123;(12,12)", 1, I{1, 3, 14, 70, 288, 822, 1260}, {}, false, 1, 1,
         "not in OEIS"},
        {3, "123;(12,21)", 3, I{1, 3, 6, 6, 0, 0, 0}, {}, false, 1, 1,
         "terminates after n = 4"},
        {3, "132;(12,12)", 2, I{1, 3, 11, 41, 153, 573, 2157}, "A281593", true, 1, 1,
         "OEIS match conjectured"},
        {3, "132;(12,21)", 6, I{1, 3, 11, 43, 173, 707, 2917}, "A026671", true, 0, 1,
         "OEIS match conjectured"},
        {3, "231;(12,12)", 2, I{1, 3, 9, 26, 72, 192, 496}, "A072863", true, 1, 1,
         "OEIS match conjectured"},
        {3, "231;(12,21)", 4, I{1, 3, 11, 44, 186, 818, 3706}, {}, false, 1, 1,
         "not in OEIS"},
        {3, "231;(21,12)", 2, I{1, 3, 12, 55, 273, 1428, 7752}, "A001764", true, 1, 1,
         "OEIS match conjectured"},
        {3, "321;(12,12)", 1, I{1, 3, 2, 0, 0, 0, 0}, {}, false, 1, 1,
         "terminates after n = 3"},
        {3, "321;(12,21)", 3, I{1, 3, 11, 47, 221, 1113, 5903}, "A217216", true, 1, 1,
         "OEIS match conjectured"},
        // supplementary: class of a 3-dimensional size-2 and size-3 pattern,
        // conjectured to match A295928; terms computed by this library
        {0, "(12,12);(231,312)", {},
         I{1, 3, 16, 122, 1188, 13844, 185448, 2781348}, "A295928", true, 1, 1,
         "OEIS match conjectured; terms computed by exhaustive search"},
    };
  }

  std::vector<RecurrenceSpec> recurrences_;
  std::vector<ReferenceSequence> rows_;
};

struct RecurrencePoint {
  int n = 0;
  std::int64_t enumerated = 0;
  std::int64_t predicted = 0;
};

struct RecurrenceReport {
  std::string id;
  std::vector<RecurrencePoint> points;
  bool pass = false;
};

// Enumerates the avoidance class afresh and checks it against the recurrence
// term by term.
inline RecurrenceReport verify_recurrence(const RecurrenceSpec& spec,
                                          const std::vector<Pattern>& patterns,
                                          int n_max, int d = 3, int workers = 0) {
  RecurrenceReport report;
  report.id = spec.id;
  const std::vector<std::int64_t> predicted = eval_recurrence(spec, n_max);
  const CountingSequence enumerated = counting_sequence(patterns, d, n_max, workers);
  report.pass = true;
  for (int n = 1; n <= n_max; ++n) {
    RecurrencePoint pt{n, enumerated.term(n),
                       predicted[static_cast<std::size_t>(n) - 1]};
    if (pt.enumerated != pt.predicted) report.pass = false;
    report.points.push_back(pt);
  }
  return report;
}

class cache_miss_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BFile {
  std::string source;
  std::map<long long, std::int64_t> entries;
};

namespace detail {

inline std::string oeis_digits(std::string_view oeis_id) {
  if (oeis_id.size() != 7 || oeis_id.front() != 'A')
    throw std::invalid_argument("OEIS id must look like A000000");
  for (char c : oeis_id.substr(1))
    if (c < '0' || c > '9')
      throw std::invalid_argument("OEIS id must look like A000000");
  return std::string(oeis_id.substr(1));
}

}  // namespace detail

inline std::string bfile_name(std::string_view oeis_id) {
  return "b" + detail::oeis_digits(oeis_id) + ".txt";
}

// Two whitespace-separated columns (index, value); '#' lines and blank lines
// are comments.
inline BFile load_bfile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open b-file: " + path.string());
  BFile bf;
  bf.source = path.string();
  std::string line;
  long long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    long long index = 0;
    std::int64_t value = 0;
    if (!(ls >> index >> value))
      throw std::runtime_error("malformed b-file line " + std::to_string(line_no) +
                               " in " + path.string());
    if (!bf.entries.emplace(index, value).second)
      throw std::runtime_error("duplicate b-file index " + std::to_string(index) +
                               " in " + path.string());
  }
  return bf;
}

struct OeisMismatch {
  int n = 0;
  std::int64_t ours = 0;
  std::int64_t oeis = 0;
};

struct OeisReport {
  std::string oeis_id;
  bool conjectured = false;
  int n_first = 0;  // first and last compared n (term indices, 1-based)
  int n_last = 0;
  std::vector<OeisMismatch> mismatches;
  bool match = false;
  std::string verdict;  // "match", "consistent so far" or "mismatch"
};

// Compares terms a_1.. against the b-file on the overlap of indices.
// b-file index of a_n is index_of_a1 + (n - 1); comparison starts at
// n = match_from. An empty overlap is an error, not a pass.
inline OeisReport compare_oeis(const std::vector<std::int64_t>& terms,
                               std::string_view oeis_id, const BFile& bfile,
                               long long index_of_a1, int match_from = 1,
                               bool conjectured = false) {
  detail::oeis_digits(oeis_id);  // validates the id shape
  if (match_from < 1) throw std::invalid_argument("match_from must be at least 1");
  OeisReport report;
  report.oeis_id = std::string(oeis_id);
  report.conjectured = conjectured;
  for (int n = match_from; n <= static_cast<int>(terms.size()); ++n) {
    const auto it = bfile.entries.find(index_of_a1 + (n - 1));
    if (it == bfile.entries.end()) continue;
    if (report.n_first == 0) report.n_first = n;
    report.n_last = n;
    const std::int64_t ours = terms[static_cast<std::size_t>(n) - 1];
    if (ours != it->second) report.mismatches.push_back({n, ours, it->second});
  }
  if (report.n_first == 0)
    throw std::invalid_argument("no overlap between computed terms and b-file for " +
                                report.oeis_id);
  report.match = report.mismatches.empty();
  report.verdict =
      !report.match ? "mismatch" : (conjectured ? "consistent so far" : "match");
  return report;
}

using BFileFetcher =
    std::function<bool(const std::string& oeis_id, const std::filesystem::path& dest)>;

// Resolution order: explicit path, then cache directory, then (only when
// allowed) a network fetch into the cache. A missing cache entry with the
// network disabled raises cache_miss_error, distinct from parse failures.
inline std::filesystem::path resolve_bfile(
    std::string_view oeis_id, const std::optional<std::filesystem::path>& explicit_path,
    const std::optional<std::filesystem::path>& cache_dir, bool allow_network,
    const BFileFetcher& fetch = {}) {
  if (explicit_path) {
    if (!std::filesystem::exists(*explicit_path))
      throw std::runtime_error("b-file not found: " + explicit_path->string());
    return *explicit_path;
  }
  const std::string name = bfile_name(oeis_id);
  if (cache_dir) {
    const std::filesystem::path cached = *cache_dir / name;
    if (std::filesystem::exists(cached)) return cached;
  }
  if (allow_network) {
    if (!fetch || !cache_dir)
      throw std::runtime_error("network fetch not available for " + std::string(oeis_id));
    std::filesystem::create_directories(*cache_dir);
    const std::filesystem::path dest = *cache_dir / name;
    if (!fetch(std::string(oeis_id), dest))
      throw std::runtime_error("failed to fetch b-file for " + std::string(oeis_id));
    return dest;
  }
  throw cache_miss_error("no cached b-file for " + std::string(oeis_id) +
                         "; provide an explicit file or enable network fetch");
}

struct TableRowReport {
  int row = 0;
  std::string pattern_set;
  std::vector<std::int64_t> expected;
  std::vector<std::int64_t> actual;
  std::optional<int> twe_expected;
  int twe_actual = 0;
  std::string oeis_note;  // empty when no OEIS link or no fixture directory
  std::string comment;
  bool pass = false;
};

struct TableReport {
  int table = 0;
  int n_max = 0;
  int n_test = 4;
  std::vector<TableRowReport> rows;
  bool pass = false;
};

// Re-enumerates every row of one reference table: printed terms up to n_max
// (clipped to the printed prefix), the trivial-Wilf-equivalence class count,
// and, when a fixture directory is supplied, the OEIS link.
inline TableReport verify_table(int table, int n_max,
                                const std::optional<std::filesystem::path>& oeis_dir = {},
                                int workers = 0, int n_test = 4) {
  if (table < 1 || table > 3) throw std::invalid_argument("table must be 1, 2 or 3");
  if (n_max < 1) throw std::invalid_argument("n_max must be at least 1");
  TableReport report;
  report.table = table;
  report.n_max = n_max;
  report.n_test = n_test;
  report.pass = true;
  int row_no = 0;
  for (const ReferenceSequence* row : SequenceRegistry::instance().table_rows(table)) {
    TableRowReport rr;
    rr.row = ++row_no;
    rr.pattern_set = row->pattern_set;
    rr.comment = row->comment;
    const std::vector<Pattern> patterns = parse_pattern_set(row->pattern_set);
    const int n_check = std::min<int>(n_max, static_cast<int>(row->terms.size()));
    rr.expected.assign(row->terms.begin(), row->terms.begin() + n_check);
    rr.actual = counting_sequence(patterns, 3, n_check, workers).terms;
    rr.twe_expected = row->twe_count;
    rr.twe_actual = static_cast<int>(twe_orbit(patterns, 3, n_test, workers).members.size());
    rr.pass = rr.expected == rr.actual &&
              (!rr.twe_expected || *rr.twe_expected == rr.twe_actual);
    if (row->oeis_id && oeis_dir) {
      const std::filesystem::path path = *oeis_dir / bfile_name(*row->oeis_id);
      if (!std::filesystem::exists(path)) {
        rr.oeis_note = "fixture unavailable";
      } else {
        const OeisReport oeis =
            compare_oeis(row->terms, *row->oeis_id, load_bfile(path),
                         row->oeis_index_of_a1, row->oeis_match_from,
                         row->oeis_conjectured);
        rr.oeis_note = oeis.verdict;
        if (!oeis.match) rr.pass = false;
      }
    }
    if (!rr.pass) report.pass = false;
    report.rows.push_back(std::move(rr));
  }
  return report;
}

}  // namespace dperm
