#pragma once

// JSON and CSV renderings of query results and verification reports, used by
// the command-line tool. JSON object keys are emitted in a fixed order
// (nlohmann::ordered_json) so identical runs produce identical bytes.

#include <string>

#include <json.hpp>

#include "dperm/enumeration.hpp"
#include "dperm/sequences.hpp"
#include "dperm/symmetry.hpp"

namespace dperm {

using ordered_json = nlohmann::ordered_json;

inline ordered_json to_json(const CountingSequence& seq) {
  ordered_json j;
  j["pattern_set"] = pattern_set_text(seq.patterns);
  j["d"] = seq.d;
  j["n_first"] = 1;
  j["terms"] = seq.terms;
  return j;
}

inline std::string to_csv(const CountingSequence& seq) {
  std::string out = "n,count\n";
  for (std::size_t i = 0; i < seq.terms.size(); ++i)
    out += std::to_string(i + 1) + "," + std::to_string(seq.terms[i]) + "\n";
  return out;
}

inline ordered_json to_json(const TweOrbit& orbit) {
  ordered_json j;
  j["pattern_set"] = to_string(orbit.patterns);
  j["n_test"] = orbit.n_test;
  j["orbit_size"] = orbit.members.size();
  ordered_json members = ordered_json::array();
  for (const auto& m : orbit.members) {
    ordered_json mj;
    mj["pattern_set"] = to_string(m.patterns);
    mj["witness"] = to_axis_word(m.witness);
    members.push_back(std::move(mj));
  }
  j["members"] = std::move(members);
  ordered_json unmatched = ordered_json::array();
  for (const auto& s : orbit.unmatched) unmatched.push_back(to_axis_word(s));
  j["unmatched_symmetries"] = std::move(unmatched);
  return j;
}

inline ordered_json to_json(const RecurrenceReport& report) {
  ordered_json j;
  j["pattern_set"] = report.id;
  ordered_json points = ordered_json::array();
  for (const auto& p : report.points) {
    ordered_json pj;
    pj["n"] = p.n;
    pj["enumerated"] = p.enumerated;
    pj["predicted"] = p.predicted;
    points.push_back(std::move(pj));
  }
  j["points"] = std::move(points);
  j["verdict"] = report.pass ? "pass" : "fail";
  return j;
}

inline ordered_json to_json(const TableRowReport& row) {
  ordered_json j;
  j["row"] = row.row;
  j["pattern_set"] = row.pattern_set;
  j["expected"] = row.expected;
  j["actual"] = row.actual;
  if (row.twe_expected)
    j["twe_expected"] = *row.twe_expected;
  else
    j["twe_expected"] = nullptr;
  j["twe_actual"] = row.twe_actual;
  if (!row.oeis_note.empty()) j["oeis"] = row.oeis_note;
  if (!row.comment.empty()) j["comment"] = row.comment;
  j["verdict"] = row.pass ? "pass" : "fail";
  return j;
}

inline ordered_json to_json(const TableReport& report) {
  ordered_json j;
  j["table"] = report.table;
  j["n_max"] = report.n_max;
  j["n_test"] = report.n_test;
  ordered_json rows = ordered_json::array();
  for (const auto& r : report.rows) rows.push_back(to_json(r));
  j["rows"] = std::move(rows);
  j["verdict"] = report.pass ? "pass" : "fail";
  return j;
}

inline ordered_json to_json(const OeisReport& report) {
  ordered_json j;
  j["oeis_id"] = report.oeis_id;
  j["conjectured"] = report.conjectured;
  j["n_first"] = report.n_first;
  j["n_last"] = report.n_last;
  ordered_json mismatches = ordered_json::array();
  for (const auto& m : report.mismatches) {
    ordered_json mj;
    mj["n"] = m.n;
    mj["ours"] = m.ours;
    mj["oeis"] = m.oeis;
    mismatches.push_back(std::move(mj));
  }
  j["mismatches"] = std::move(mismatches);
  j["verdict"] = report.verdict;
  return j;
}

}  // namespace dperm
