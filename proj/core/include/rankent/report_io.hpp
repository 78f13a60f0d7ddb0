#pragma once

#include <iosfwd>

#include "rankent/harness.hpp"

namespace rankent {

// Line-oriented JSON export of a run report: a header record, one record per
// node / independence pair / block / bound in order, and a summary record
// last. Timing is deliberately not exported, so rewriting a parsed report
// reproduces the original bytes.
void write_report_jsonl(const RunReport& rep, std::ostream& out);

// Strict inverse of write_report_jsonl: the schema tag must match, every
// record must carry exactly the keys its type defines (unknown or missing
// keys are errors), and header/summary must be the first and last lines.
RunReport read_report_jsonl(std::istream& in);

// Flat numeric table: one row per node for replay runs, one row per block
// for pipeline runs. Bounds and summary values are only in the jsonl form.
void write_report_csv(const RunReport& rep, std::ostream& out);

}  // namespace rankent
