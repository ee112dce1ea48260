// Command-line front end: counting, enumeration, symmetry orbits and
// verification for pattern-avoiding d-permutations.
//
// Exit codes: 0 success (and verification passes), 1 verification failure,
// 2 usage or input errors, 3 refused resource bounds.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dperm/dperm.hpp"
#include "dperm/report_io.hpp"

#define CPPHTTPLIB_NO_EXCEPTIONS
#include <httplib.h>

namespace {

constexpr int kExitPass = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitResource = 3;

struct Options {
  std::string format = "text";
  int workers = 0;
  int dim = 3;
  int n = 0;
  int n_max = 6;
  int n_test = 4;
  int table = 1;
  int match_from = 0;  // 0: take the registry default
  bool naive = false;
  bool allow_network = false;
  std::int64_t naive_bound = dperm::kNaiveSafetyBound;
  std::string avoid;
  std::string theorem;
  std::string oeis_id;
  std::optional<long long> offset;
  std::optional<std::string> bfile;
  std::optional<std::string> cache_dir;
};

void print_parse_error(const std::string& input, const dperm::parse_error& e) {
  std::cerr << "error: " << e.what() << "\n";
  if (e.position() <= input.size()) {
    std::cerr << "  " << input << "\n  " << std::string(e.position(), ' ') << "^\n";
  }
}

std::vector<dperm::Pattern> parse_patterns_cli(const std::string& text) {
  try {
    return dperm::parse_pattern_set(text);
  } catch (const dperm::parse_error& e) {
    print_parse_error(text, e);
    std::exit(kExitUsage);
  }
}

std::optional<std::filesystem::path> cache_dir_of(const Options& opt) {
  if (opt.cache_dir) return std::filesystem::path(*opt.cache_dir);
  if (const char* env = std::getenv("DPERM_OEIS_CACHE_DIR"))
    return std::filesystem::path(env);
  return std::nullopt;
}

bool fetch_bfile(const std::string& oeis_id, const std::filesystem::path& dest) {
  httplib::Client client("http://oeis.org");
  client.set_follow_location(true);
  const std::string target = "/" + oeis_id + "/" + dperm::bfile_name(oeis_id);
  auto res = client.Get(target);
  if (!res || res->status != 200) return false;
  std::ofstream out(dest, std::ios::binary);
  out << res->body;
  return static_cast<bool>(out);
}

int run_count(const Options& opt) {
  dperm::AvoidanceQuery q{opt.n, opt.dim, parse_patterns_cli(opt.avoid),
                          dperm::QueryMode::count};
  const std::int64_t total = opt.naive
                                 ? dperm::count_avoiders_naive(q, opt.naive_bound)
                                 : dperm::count_avoiders(q, opt.workers);
  if (opt.format == "json") {
    dperm::ordered_json j;
    j["pattern_set"] = dperm::pattern_set_text(q.patterns);
    j["d"] = q.d;
    j["n"] = q.n;
    j["count"] = total;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << total << "\n";
  }
  return kExitPass;
}

int run_sequence(const Options& opt) {
  const std::vector<dperm::Pattern> patterns = parse_patterns_cli(opt.avoid);
  dperm::CountingSequence seq;
  if (opt.naive) {
    seq.patterns = patterns;
    seq.d = opt.dim;
    for (int n = 1; n <= opt.n_max; ++n)
      seq.terms.push_back(dperm::count_avoiders_naive(
          {n, opt.dim, patterns, dperm::QueryMode::count}, opt.naive_bound));
  } else {
    seq = dperm::counting_sequence(patterns, opt.dim, opt.n_max, opt.workers);
  }
  if (opt.format == "json") {
    std::cout << dperm::to_json(seq).dump(2) << "\n";
  } else if (opt.format == "csv") {
    std::cout << dperm::to_csv(seq);
  } else {
    for (std::size_t i = 0; i < seq.terms.size(); ++i)
      std::cout << (i ? "," : "") << seq.terms[i];
    std::cout << "\n";
  }
  return kExitPass;
}

int run_enumerate(const Options& opt) {
  dperm::AvoidanceQuery q{opt.n, opt.dim, parse_patterns_cli(opt.avoid),
                          dperm::QueryMode::enumerate};
  const std::vector<dperm::DPermutation> avoiders =
      dperm::collect_avoiders(q, opt.workers);
  if (opt.format == "json") {
    dperm::ordered_json j;
    j["pattern_set"] = dperm::pattern_set_text(q.patterns);
    j["d"] = q.d;
    j["n"] = q.n;
    j["count"] = avoiders.size();
    dperm::ordered_json arr = dperm::ordered_json::array();
    for (const auto& dp : avoiders) arr.push_back(dperm::to_string(dp));
    j["avoiders"] = std::move(arr);
    std::cout << j.dump(2) << "\n";
  } else {
    for (const auto& dp : avoiders) std::cout << dperm::to_string(dp) << "\n";
  }
  return kExitPass;
}

int run_orbit(const Options& opt) {
  const dperm::TweOrbit orbit = dperm::twe_orbit(parse_patterns_cli(opt.avoid),
                                                 opt.dim, opt.n_test, opt.workers);
  if (opt.format == "json") {
    std::cout << dperm::to_json(orbit).dump(2) << "\n";
    return kExitPass;
  }
  std::cout << "pattern set: " << dperm::to_string(orbit.patterns) << "\n";
  std::cout << "n_test: " << orbit.n_test << "\n";
  std::cout << "orbit size: " << orbit.members.size() << "\n";
  for (const auto& m : orbit.members)
    std::cout << dperm::to_string(m.patterns) << "  witness "
              << dperm::to_axis_word(m.witness) << "\n";
  std::cout << "unmatched symmetries: " << orbit.unmatched.size() << "\n";
  return kExitPass;
}

int run_verify_recurrence(const Options& opt) {
  const std::vector<dperm::Pattern> patterns = parse_patterns_cli(opt.theorem);
  const std::string key = dperm::pattern_set_text(patterns);
  const dperm::RecurrenceSpec* spec =
      dperm::SequenceRegistry::instance().find_recurrence(key);
  if (!spec) {
    std::cerr << "error: no registered recurrence for pattern set '" << key
              << "'; known sets:";
    for (const auto& r : dperm::SequenceRegistry::instance().recurrences())
      std::cerr << " " << r.id;
    std::cerr << "\n";
    return kExitUsage;
  }
  const dperm::RecurrenceReport report =
      dperm::verify_recurrence(*spec, patterns, opt.n_max, 3, opt.workers);
  if (opt.format == "json") {
    std::cout << dperm::to_json(report).dump(2) << "\n";
  } else {
    std::cout << "pattern set: " << report.id << "\n";
    std::cout << "n enumerated predicted\n";
    for (const auto& p : report.points)
      std::cout << p.n << " " << p.enumerated << " " << p.predicted << "\n";
    std::cout << "verdict: " << (report.pass ? "pass" : "fail") << "\n";
  }
  return report.pass ? kExitPass : kExitVerifyFail;
}

int run_verify_table(const Options& opt) {
  const dperm::TableReport report = dperm::verify_table(
      opt.table, opt.n_max, cache_dir_of(opt), opt.workers, opt.n_test);
  if (opt.format == "json") {
    std::cout << dperm::to_json(report).dump(2) << "\n";
  } else {
    std::cout << "table " << report.table << ", terms to n = " << report.n_max
              << ", orbit n_test = " << report.n_test << "\n";
    for (const auto& r : report.rows) {
      std::cout << "row " << r.row << "  " << r.pattern_set << "  ";
      for (std::size_t i = 0; i < r.actual.size(); ++i)
        std::cout << (i ? "," : "") << r.actual[i];
      std::cout << "  twe " << r.twe_actual;
      if (r.twe_expected) std::cout << "/" << *r.twe_expected;
      if (!r.oeis_note.empty()) std::cout << "  oeis: " << r.oeis_note;
      std::cout << "  " << (r.pass ? "pass" : "FAIL") << "\n";
    }
    std::cout << "verdict: " << (report.pass ? "pass" : "fail") << "\n";
  }
  return report.pass ? kExitPass : kExitVerifyFail;
}

int run_compare_oeis(const Options& opt) {
  const std::vector<dperm::Pattern> patterns = parse_patterns_cli(opt.avoid);
  const std::string key = dperm::pattern_set_text(patterns);
  const dperm::ReferenceSequence* row =
      dperm::SequenceRegistry::instance().find_row(key);
  if (row && (!row->oeis_id || *row->oeis_id != opt.oeis_id)) row = nullptr;

  long long index_of_a1 = 1;
  int match_from = 1;
  bool conjectured = false;
  if (row) {
    index_of_a1 = row->oeis_index_of_a1;
    match_from = row->oeis_match_from;
    conjectured = row->oeis_conjectured;
  } else if (!opt.offset) {
    std::cerr << "error: pattern set '" << key << "' has no registered link to "
              << opt.oeis_id << "; pass --offset to set the b-file index of a_1\n";
    return kExitUsage;
  }
  if (opt.offset) index_of_a1 = *opt.offset;
  if (opt.match_from > 0) match_from = opt.match_from;

  int n_max = opt.n_max;
  if (n_max <= 0) n_max = row ? static_cast<int>(row->terms.size()) : 6;

  const std::optional<std::filesystem::path> explicit_path =
      opt.bfile ? std::optional<std::filesystem::path>(*opt.bfile) : std::nullopt;
  const std::filesystem::path path =
      dperm::resolve_bfile(opt.oeis_id, explicit_path, cache_dir_of(opt),
                           opt.allow_network, fetch_bfile);

  const dperm::CountingSequence seq =
      dperm::counting_sequence(patterns, opt.dim, n_max, opt.workers);
  const dperm::OeisReport report =
      dperm::compare_oeis(seq.terms, opt.oeis_id, dperm::load_bfile(path),
                          index_of_a1, match_from, conjectured);
  if (opt.format == "json") {
    dperm::ordered_json j = dperm::to_json(report);
    j["pattern_set"] = key;
    j["terms"] = seq.terms;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << report.oeis_id << " vs " << key << ": " << report.verdict
              << " (n = " << report.n_first << ".." << report.n_last;
    if (report.conjectured) std::cout << "; conjectured link";
    std::cout << ")\n";
    for (const auto& m : report.mismatches)
      std::cout << "  n = " << m.n << ": computed " << m.ours << ", b-file "
                << m.oeis << "\n";
  }
  return report.match ? kExitPass : kExitVerifyFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pattern-avoiding d-permutations: counting, enumeration, symmetry orbits"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* cmd, bool with_workers = true) {
    cmd->add_option("--format", opt.format, "output format")
        ->check(CLI::IsMember({"text", "json", "csv"}));
    if (with_workers)
      cmd->add_option("--workers", opt.workers, "worker threads (0 = auto)")
          ->check(CLI::NonNegativeNumber);
  };

  CLI::App* count = app.add_subcommand("count", "count avoiders of size n");
  count->add_option("--n", opt.n, "permutation size")->required()->check(CLI::NonNegativeNumber);
  count->add_option("--dim", opt.dim, "dimension d (default 3)");
  count->add_option("--avoid", opt.avoid, "pattern set, e.g. \"231;312\"")->required();
  count->add_flag("--naive", opt.naive, "use the unpruned reference search");
  count->add_option("--naive-bound", opt.naive_bound, "tuple budget for --naive");
  add_common(count);

  CLI::App* sequence = app.add_subcommand("sequence", "counting sequence for n = 1..n-max");
  sequence->add_option("--n-max", opt.n_max, "largest size")->required()->check(CLI::PositiveNumber);
  sequence->add_option("--dim", opt.dim, "dimension d (default 3)");
  sequence->add_option("--avoid", opt.avoid, "pattern set")->required();
  sequence->add_flag("--naive", opt.naive, "use the unpruned reference search");
  sequence->add_option("--naive-bound", opt.naive_bound, "tuple budget for --naive");
  add_common(sequence);

  CLI::App* enumerate = app.add_subcommand("enumerate", "list avoiders of size n");
  enumerate->add_option("--n", opt.n, "permutation size")->required()->check(CLI::NonNegativeNumber);
  enumerate->add_option("--dim", opt.dim, "dimension d (default 3)");
  enumerate->add_option("--avoid", opt.avoid, "pattern set")->required();
  add_common(enumerate);

  CLI::App* orbit = app.add_subcommand(
      "orbit", "trivial Wilf-equivalence orbit of a pattern set");
  orbit->add_option("--avoid", opt.avoid, "pattern set")->required();
  orbit->add_option("--dim", opt.dim, "dimension d (default 3)");
  orbit->add_option("--n-test", opt.n_test, "orbit test depth (default 4)");
  add_common(orbit);

  CLI::App* vrec = app.add_subcommand("verify-recurrence",
                                      "check a registered recurrence against enumeration");
  vrec->add_option("--theorem", opt.theorem, "pattern set key, e.g. \"132;231\"")->required();
  vrec->add_option("--n-max", opt.n_max, "largest size (default 6)")->check(CLI::PositiveNumber);
  add_common(vrec);

  CLI::App* vtab = app.add_subcommand("verify-table",
                                      "re-enumerate one reference table");
  vtab->add_option("--table", opt.table, "table number 1..3")->required();
  vtab->add_option("--n-max", opt.n_max, "largest size (default 6)")->check(CLI::PositiveNumber);
  vtab->add_option("--n-test", opt.n_test, "orbit test depth (default 4)");
  vtab->add_option("--oeis-cache-dir", opt.cache_dir,
                   "b-file directory (default: DPERM_OEIS_CACHE_DIR)");
  add_common(vtab);

  CLI::App* coeis = app.add_subcommand("compare-oeis",
                                       "compare enumerated terms with an OEIS b-file");
  coeis->add_option("--avoid", opt.avoid, "pattern set")->required();
  coeis->add_option("--id", opt.oeis_id, "OEIS id, e.g. A001787")->required();
  coeis->add_option("--n-max", opt.n_max, "terms to enumerate (default: printed prefix)")
      ->expected(1);
  coeis->add_option("--dim", opt.dim, "dimension d (default 3)");
  coeis->add_option("--bfile", opt.bfile, "explicit b-file path");
  coeis->add_option("--oeis-cache-dir", opt.cache_dir,
                    "b-file directory (default: DPERM_OEIS_CACHE_DIR)");
  coeis->add_flag("--allow-network", opt.allow_network,
                  "fetch missing b-files from oeis.org into the cache");
  coeis->add_option("--offset", opt.offset, "b-file index of a_1");
  coeis->add_option("--match-from", opt.match_from, "first n compared");
  add_common(coeis);
  opt.n_max = 6;  // count/verify default; compare-oeis treats 0 as "printed prefix"
  coeis->parse_complete_callback([&] {
    if (coeis->count("--n-max") == 0) opt.n_max = 0;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (app.got_subcommand(count)) return run_count(opt);
    if (app.got_subcommand(sequence)) return run_sequence(opt);
    if (app.got_subcommand(enumerate)) return run_enumerate(opt);
    if (app.got_subcommand(orbit)) return run_orbit(opt);
    if (app.got_subcommand(vrec)) return run_verify_recurrence(opt);
    if (app.got_subcommand(vtab)) return run_verify_table(opt);
    if (app.got_subcommand(coeis)) return run_compare_oeis(opt);
  } catch (const dperm::parse_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const dperm::resource_limit_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitResource;
  } catch (const dperm::cache_miss_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
