#pragma once

#include "slstail/cnf.hpp"

#include <cstdint>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace slstail {

/// Parses DIMACS CNF. Accepts `c` comment lines anywhere, `\n` or `\r\n` line
/// endings, and clauses spanning several lines. A clause-count mismatch with
/// the header is reported through `warnings` (if given), never thrown.
/// Throws DataError on a missing or malformed header, an out-of-range literal,
/// a tautological clause, or a final clause without terminating 0.
CnfFormula parse_dimacs(std::string_view text, std::vector<std::string>* warnings = nullptr);
CnfFormula parse_dimacs(std::istream& in, std::vector<std::string>* warnings = nullptr);
CnfFormula read_dimacs_file(const std::string& path, std::vector<std::string>* warnings = nullptr);

/// `p cnf <vars> <clauses>` followed by one zero-terminated clause per line.
/// Each entry of `comments` becomes a leading `c ` line.
std::string emit_dimacs(const CnfFormula& f, const std::vector<std::string>& comments = {});

/// FNV-1a of the comment-free DIMACS text.
std::uint64_t formula_digest(const CnfFormula& f);

}  // namespace slstail
