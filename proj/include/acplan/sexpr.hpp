#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "acplan/error.hpp"

namespace acplan {

/// A node of an s-expression tree. Symbols are lower-cased by the reader;
/// string literals keep their case.
struct SExpr {
    enum class Kind { Symbol, String, List };

    Kind kind = Kind::List;
    std::string text;
    std::vector<SExpr> items;
    SourcePos pos;

    bool is_symbol() const { return kind == Kind::Symbol; }
    bool is_symbol(std::string_view s) const { return kind == Kind::Symbol && text == s; }
    bool is_list() const { return kind == Kind::List; }
    bool is_string() const { return kind == Kind::String; }
};

/// Reads every top-level expression in `text`. `;` starts a line comment.
/// Throws ParseError on unbalanced parentheses, unterminated strings and
/// characters outside printable ASCII.
std::vector<SExpr> read_sexprs(std::string_view text);

/// Reads exactly one top-level expression.
SExpr read_single_sexpr(std::string_view text, std::string_view what);

/// Short rendering used in error messages.
std::string describe(const SExpr& e);

}  // namespace acplan
