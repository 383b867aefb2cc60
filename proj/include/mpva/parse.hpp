#ifndef MPVA_PARSE_HPP
#define MPVA_PARSE_HPP

#include <stdexcept>
#include <string>

#include "mpva/expr.hpp"

namespace mpva {

struct ParseError : std::runtime_error {
    size_t pos;
    ParseError(const std::string& msg, size_t position)
        : std::runtime_error(msg + " at position " + std::to_string(position)),
          pos(position) {}
};

// Grammar (ASCII):
//   expr   := ['+'|'-'] term (('+'|'-') term)*
//   term   := atom ('*' atom)*
//   atom   := rational | NAME '[' INT ']' ('^' INT)? | NAME ('^' INT)?
//           | '(' expr ')' ('^' INT)?
// A bare NAME is a free parameter ("eps" is the adjoined root of unity);
// NAME '[' k ']' is a declared function symbol at lattice site k.
DiffExpr parse_expr(const std::string& text, const SymbolTablePtr& table);

// Coefficient sub-language: same grammar with symbol factors rejected.
Coefficient parse_coefficient(const std::string& text, EpsSpec spec = EpsSpec::None);

// Deterministic text form; parse_expr(format_expr(e)) == e.
std::string format_expr(const DiffExpr& e);

// One `symbol NAME KIND [template];` declaration. Defined templates may
// reference symbols declared later, so callers pre-declare in a first pass;
// this helper handles a single self-contained statement.
void parse_symbol_declaration(const std::string& stmt, const SymbolTablePtr& table);

// Multi-line declaration header (each statement terminated by ';').
void parse_declarations(const std::string& text, const SymbolTablePtr& table);

}  // namespace mpva

#endif
