#include "acplan/sexpr.hpp"

#include <cctype>

namespace acplan {

namespace {

class Reader {
public:
    explicit Reader(std::string_view text) : text_(text) {}

    std::vector<SExpr> read_all() {
        std::vector<SExpr> out;
        skip_blank();
        while (!eof()) {
            if (peek() == ')')
                throw ParseError(pos_, "unexpected ')'");
            out.push_back(read_expr());
            skip_blank();
        }
        return out;
    }

private:
    bool eof() const { return offset_ >= text_.size(); }
    char peek() const { return text_[offset_]; }

    void advance() {
        if (text_[offset_] == '\n') {
            ++pos_.line;
            pos_.column = 1;
        } else {
            ++pos_.column;
        }
        ++offset_;
    }

    void skip_blank() {
        while (!eof()) {
            char c = peek();
            if (c == ';') {
                while (!eof() && peek() != '\n')
                    advance();
            } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
                advance();
            } else {
                return;
            }
        }
    }

    static bool is_delimiter(char c) {
        return c == '(' || c == ')' || c == ';' || c == '"' || c == ' ' || c == '\t' ||
               c == '\n' || c == '\r' || c == '\f' || c == '\v';
    }

    SExpr read_expr() {
        SourcePos start = pos_;
        char c = peek();
        if (c == '(') {
            advance();
            SExpr list;
            list.kind = SExpr::Kind::List;
            list.pos = start;
            for (;;) {
                skip_blank();
                if (eof())
                    throw ParseError(start, "unterminated list: missing ')'");
                if (peek() == ')') {
                    advance();
                    return list;
                }
                list.items.push_back(read_expr());
            }
        }
        if (c == '"')
            return read_string();
        return read_symbol();
    }

    SExpr read_string() {
        SourcePos start = pos_;
        advance();
        std::string value;
        for (;;) {
            if (eof())
                throw ParseError(start, "unterminated string literal");
            char c = peek();
            if (c == '"') {
                advance();
                break;
            }
            if (c == '\\') {
                advance();
                if (eof())
                    throw ParseError(start, "unterminated string literal");
                c = peek();
                if (c != '"' && c != '\\')
                    throw ParseError(pos_, std::string("invalid escape '\\") + c + "'");
            } else if (c == '\n') {
                throw ParseError(pos_, "newline inside string literal");
            }
            value.push_back(c);
            advance();
        }
        SExpr s;
        s.kind = SExpr::Kind::String;
        s.text = std::move(value);
        s.pos = start;
        return s;
    }

    SExpr read_symbol() {
        SourcePos start = pos_;
        std::string value;
        while (!eof() && !is_delimiter(peek())) {
            auto c = static_cast<unsigned char>(peek());
            if (c < 0x21 || c > 0x7e)
                throw ParseError(pos_, "invalid character (code " + std::to_string(c) + ")");
            value.push_back(static_cast<char>(std::tolower(c)));
            advance();
        }
        SExpr s;
        s.kind = SExpr::Kind::Symbol;
        s.text = std::move(value);
        s.pos = start;
        return s;
    }

    std::string_view text_;
    std::size_t offset_ = 0;
    SourcePos pos_;
};

}  // namespace

std::vector<SExpr> read_sexprs(std::string_view text) {
    return Reader(text).read_all();
}

SExpr read_single_sexpr(std::string_view text, std::string_view what) {
    auto all = read_sexprs(text);
    if (all.empty())
        throw ParseError(SourcePos{}, "expected a " + std::string(what) + " definition, found empty input");
    if (all.size() > 1)
        throw ParseError(all[1].pos, "unexpected trailing expression after " + std::string(what));
    return std::move(all.front());
}

std::string describe(const SExpr& e) {
    switch (e.kind) {
    case SExpr::Kind::Symbol: return "'" + e.text + "'";
    case SExpr::Kind::String: return "string \"" + e.text + "\"";
    case SExpr::Kind::List:
        if (!e.items.empty() && e.items.front().is_symbol())
            return "list (" + e.items.front().text + " ...)";
        return "list";
    }
    return "expression";
}

}  // namespace acplan
