#include "slstail/dimacs.hpp"

#include "slstail/error.hpp"
#include "slstail/rng.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace slstail {

namespace {

bool is_space(char c)
{
    return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' || c == '\f';
}

std::vector<std::string_view> split_tokens(std::string_view line)
{
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && is_space(line[i])) {
            ++i;
        }
        std::size_t j = i;
        while (j < line.size() && !is_space(line[j])) {
            ++j;
        }
        if (j > i) {
            tokens.push_back(line.substr(i, j - i));
        }
        i = j;
    }
    return tokens;
}

template <typename T>
bool parse_int(std::string_view token, T& out)
{
    const char* begin = token.data();
    const char* end = token.data() + token.size();
    if (begin != end && *begin == '+') {
        ++begin;
    }
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end;
}

std::string where(std::size_t line_no)
{
    return "line " + std::to_string(line_no) + ": ";
}

}  // namespace

CnfFormula parse_dimacs(std::string_view text, std::vector<std::string>* warnings)
{
    bool have_header = false;
    std::uint32_t num_vars = 0;
    std::uint64_t declared_clauses = 0;
    std::vector<Clause> clauses;
    std::vector<Literal> pending;
    bool clause_open = false;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) {
            nl = text.size();
        }
        std::string_view line = text.substr(pos, nl - pos);
        pos = nl + 1;
        ++line_no;

        const auto tokens = split_tokens(line);
        if (tokens.empty()) {
            continue;
        }
        if (tokens.front().front() == 'c') {
            continue;
        }
        if (tokens.front() == "%") {
            break;  // SATLIB end marker
        }
        if (tokens.front() == "p") {
            if (have_header) {
                throw DataError(where(line_no) + "duplicate problem line");
            }
            if (tokens.size() != 4 || tokens[1] != "cnf" || !parse_int(tokens[2], num_vars) ||
                !parse_int(tokens[3], declared_clauses)) {
                throw DataError(where(line_no) + "malformed header, expected 'p cnf <vars> <clauses>'");
            }
            have_header = true;
            continue;
        }
        if (!have_header) {
            throw DataError(where(line_no) + "clause data before 'p cnf' header");
        }
        for (std::string_view token : tokens) {
            std::int64_t code = 0;
            if (!parse_int(token, code)) {
                throw DataError(where(line_no) + "invalid literal '" + std::string(token) + "'");
            }
            if (code == 0) {
                try {
                    clauses.emplace_back(std::move(pending));
                } catch (const DataError& e) {
                    throw DataError(where(line_no) + e.what());
                }
                pending = {};
                clause_open = false;
                continue;
            }
            const std::int64_t magnitude = code < 0 ? -code : code;
            if (magnitude > static_cast<std::int64_t>(num_vars)) {
                throw DataError(where(line_no) + "literal " + std::to_string(code) + " out of range (num_vars " +
                                std::to_string(num_vars) + ")");
            }
            pending.push_back(Literal::from_dimacs(static_cast<std::int32_t>(code)));
            clause_open = true;
        }
    }
    if (!have_header) {
        throw DataError("missing 'p cnf' header");
    }
    if (clause_open) {
        throw DataError("last clause is not terminated by 0");
    }
    if (clauses.size() != declared_clauses && warnings != nullptr) {
        warnings->push_back("header declares " + std::to_string(declared_clauses) + " clauses, found " +
                            std::to_string(clauses.size()));
    }
    return CnfFormula(num_vars, std::move(clauses));
}

CnfFormula parse_dimacs(std::istream& in, std::vector<std::string>* warnings)
{
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_dimacs(buffer.str(), warnings);
}

CnfFormula read_dimacs_file(const std::string& path, std::vector<std::string>* warnings)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open " + path);
    }
    return parse_dimacs(in, warnings);
}

std::string emit_dimacs(const CnfFormula& f, const std::vector<std::string>& comments)
{
    std::string out;
    for (const auto& c : comments) {
        out += "c ";
        out += c;
        out += '\n';
    }
    out += "p cnf " + std::to_string(f.num_vars()) + ' ' + std::to_string(f.num_clauses()) + '\n';
    for (const Clause& c : f.clauses()) {
        for (Literal l : c.literals()) {
            out += std::to_string(l.dimacs());
            out += ' ';
        }
        out += "0\n";
    }
    return out;
}

std::uint64_t formula_digest(const CnfFormula& f)
{
    return fnv1a64(emit_dimacs(f));
}

}  // namespace slstail
