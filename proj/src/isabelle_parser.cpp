#include <sstream>

#include "autoform/isabelle.hpp"

namespace autoform::isabelle {

namespace {

// Cursor over the non-whitespace tokens of a statement.
class TokenCursor {
public:
    TokenCursor(std::string_view text, std::vector<Token> tokens)
        : text_(text), tokens_(std::move(tokens)) {
        for (std::size_t i = 0; i < tokens_.size(); ++i) {
            if (tokens_[i].kind != TokenKind::whitespace) {
                index_.push_back(i);
            }
        }
    }

    bool at_end() const { return pos_ >= index_.size(); }

    const Token& peek(std::size_t ahead = 0) const {
        static const Token sentinel{TokenKind::punct, "", 0, false};
        return pos_ + ahead < index_.size() ? tokens_[index_[pos_ + ahead]] : sentinel;
    }

    const Token& advance() { return tokens_[index_[pos_++]]; }

    bool match_keyword(std::string_view kw) {
        if (!at_end() && peek().kind == TokenKind::keyword && peek().text == kw) {
            advance();
            return true;
        }
        return false;
    }

    bool at_keyword(std::string_view kw) const {
        return !at_end() && peek().kind == TokenKind::keyword && peek().text == kw;
    }

    std::size_t offset() const {
        return at_end() ? text_.size() : peek().offset;
    }

    // Consumes string_open + inner tokens + string_close, returning the raw
    // inner text and the offset just past the opening quote.
    std::pair<std::string, std::size_t> quoted_string() {
        const Token& open = advance();
        std::size_t start = open.offset + 1;
        std::size_t end = start;
        // Walk raw tokens (including whitespace) until the closing quote.
        std::size_t raw = index_[pos_ - 1] + 1;
        while (raw < tokens_.size() && tokens_[raw].kind != TokenKind::string_close) {
            end = tokens_[raw].offset + tokens_[raw].text.size();
            ++raw;
        }
        // Skip the cursor past every consumed token.
        while (!at_end() && index_[pos_] < raw) {
            ++pos_;
        }
        if (at_end() || tokens_[index_[pos_]].kind != TokenKind::string_close) {
            throw ParseError("unterminated quoted string", open.offset);
        }
        advance();
        return {std::string(text_.substr(start, end - start)), start};
    }

    bool at_quote() const { return !at_end() && peek().kind == TokenKind::string_open; }

private:
    std::string_view text_;
    std::vector<Token> tokens_;
    std::vector<std::size_t> index_;
    std::size_t pos_ = 0;
};

void check_inner_parens(const std::string& inner, std::size_t base_offset) {
    long depth = 0;
    for (std::size_t i = 0; i < inner.size(); ++i) {
        if (inner[i] == '(') {
            ++depth;
        } else if (inner[i] == ')') {
            if (--depth < 0) {
                throw ParseError("unbalanced parentheses in inner syntax", base_offset + i);
            }
        }
    }
    if (depth != 0) {
        throw ParseError("unbalanced parentheses in inner syntax", base_offset);
    }
}

bool is_name_token(const Token& t) {
    return t.kind == TokenKind::identifier || t.kind == TokenKind::symbol_escape;
}

bool is_statement_keyword(std::string_view kw) {
    return kw == "theorem" || kw == "lemma" || kw == "proposition" || kw == "corollary";
}

}  // namespace

std::string TheoremStatement::shows() const {
    std::string joined;
    for (std::size_t i = 0; i < shows_list.size(); ++i) {
        if (i > 0) {
            joined += ' ';
        }
        joined += shows_list[i];
    }
    return joined;
}

bool structurally_equal(const TheoremStatement& a, const TheoremStatement& b) {
    if (a.keyword != b.keyword || a.name != b.name || a.shows_list != b.shows_list) {
        return false;
    }
    if (a.fixes.size() != b.fixes.size() || a.assumes.size() != b.assumes.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.fixes.size(); ++i) {
        if (a.fixes[i].variables != b.fixes[i].variables ||
            a.fixes[i].type_text != b.fixes[i].type_text) {
            return false;
        }
    }
    for (std::size_t i = 0; i < a.assumes.size(); ++i) {
        if (a.assumes[i].label != b.assumes[i].label ||
            a.assumes[i].prop_text != b.assumes[i].prop_text) {
            return false;
        }
    }
    return true;
}

TheoremStatement parse_statement(std::string_view text) {
    TokenCursor cur(text, tokenize(text));
    TheoremStatement stmt;
    stmt.raw_text = std::string(text);

    if (cur.at_end() || cur.peek().kind != TokenKind::keyword ||
        !is_statement_keyword(cur.peek().text)) {
        throw ParseError("expected theorem/lemma/proposition/corollary", cur.offset());
    }
    stmt.keyword = cur.advance().text;

    // Optional name, possibly with an [attributes] group, terminated by ':'.
    if (is_name_token(cur.peek())) {
        std::size_t look = 1;
        if (cur.peek(look).kind == TokenKind::punct && cur.peek(look).text == "[") {
            while (!(cur.peek(look).kind == TokenKind::punct && cur.peek(look).text == "]")) {
                if (cur.peek(look).text.empty()) {
                    throw ParseError("unterminated attribute group", cur.offset());
                }
                ++look;
            }
            ++look;
        }
        if (cur.peek(look).kind == TokenKind::punct && cur.peek(look).text == ":") {
            stmt.name = cur.advance().text;
            while (!(cur.peek().kind == TokenKind::punct && cur.peek().text == ":")) {
                cur.advance();  // attribute tokens
            }
            cur.advance();  // ':'
        } else {
            throw ParseError("expected ':' after statement name", cur.peek().offset);
        }
    }

    // Short form: bare quoted goal(s), no fixes/assumes/shows keywords.
    if (cur.at_quote()) {
        while (cur.at_quote()) {
            auto [inner, off] = cur.quoted_string();
            check_inner_parens(inner, off);
            if (stmt.shows_list.empty()) {
                stmt.shows_offset = off;
            }
            stmt.shows_list.push_back(inner);
        }
        if (!cur.at_end()) {
            throw ParseError("unexpected token '" + cur.peek().text + "' after goal",
                             cur.peek().offset);
        }
        return stmt;
    }

    // fixes clause
    if (cur.match_keyword("fixes")) {
        while (true) {
            FixGroup group;
            while (is_name_token(cur.peek())) {
                group.variables.push_back(cur.advance().text);
            }
            if (group.variables.empty()) {
                throw ParseError("expected variable name in fixes", cur.offset());
            }
            if (cur.peek().kind == TokenKind::punct && cur.peek().text == "::") {
                cur.advance();
                if (cur.at_quote()) {
                    auto [inner, off] = cur.quoted_string();
                    check_inner_parens(inner, off);
                    group.type_text = inner;
                    group.type_offset = off;
                } else if (is_name_token(cur.peek())) {
                    const Token& t = cur.advance();
                    group.type_text = t.text;
                    group.type_offset = t.offset;
                } else {
                    throw ParseError("expected type after '::'", cur.offset());
                }
            }
            stmt.fixes.push_back(std::move(group));
            if (!cur.match_keyword("and")) {
                break;
            }
        }
    }

    // assumes clauses
    while (cur.match_keyword("assumes")) {
        bool first_group = true;
        while (true) {
            std::optional<std::string> label;
            if (is_name_token(cur.peek()) && cur.peek(1).kind == TokenKind::punct &&
                cur.peek(1).text == ":") {
                label = cur.advance().text;
                cur.advance();  // ':'
            }
            if (!cur.at_quote()) {
                if (first_group) {
                    throw ParseError("expected assumption after 'assumes'", cur.offset());
                }
                throw ParseError("expected assumption after 'and'", cur.offset());
            }
            bool first_prop = true;
            while (cur.at_quote()) {
                auto [inner, off] = cur.quoted_string();
                check_inner_parens(inner, off);
                Assumption a;
                a.label = first_prop ? label : std::nullopt;
                a.prop_text = inner;
                a.prop_offset = off;
                stmt.assumes.push_back(std::move(a));
                first_prop = false;
            }
            first_group = false;
            if (!cur.match_keyword("and")) {
                break;
            }
        }
    }

    if (cur.at_keyword("fixes")) {
        throw ParseError("'fixes' must precede 'assumes' and 'shows'", cur.peek().offset);
    }

    if (!cur.match_keyword("shows")) {
        if (cur.at_end()) {
            throw ParseError("missing 'shows' clause", cur.offset());
        }
        throw ParseError("expected 'shows', got '" + cur.peek().text + "'", cur.peek().offset);
    }

    if (cur.at_quote()) {
        while (cur.at_quote()) {
            auto [inner, off] = cur.quoted_string();
            check_inner_parens(inner, off);
            if (stmt.shows_list.empty()) {
                stmt.shows_offset = off;
            }
            stmt.shows_list.push_back(inner);
        }
    } else if (is_name_token(cur.peek())) {
        // Unquoted atomic goal, e.g. `shows False`.
        const Token& t = cur.advance();
        stmt.shows_offset = t.offset;
        stmt.shows_list.push_back(t.text);
    } else {
        throw ParseError("expected goal after 'shows'", cur.offset());
    }

    if (!cur.at_end()) {
        throw ParseError("unexpected token '" + cur.peek().text + "' after shows",
                         cur.peek().offset);
    }
    if (stmt.shows().empty()) {
        throw ParseError("empty goal", stmt.shows_offset);
    }
    return stmt;
}

namespace {

std::string collapse_ws(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    bool in_space = false;
    for (unsigned char c : s) {
        if (std::isspace(c) != 0) {
            in_space = true;
            continue;
        }
        if (in_space && !out.empty()) {
            out.push_back(' ');
        }
        in_space = false;
        out.push_back(static_cast<char>(c));
    }
    return out;
}

void render_body(std::ostream& os, const TheoremStatement& stmt, bool keep_labels) {
    for (std::size_t i = 0; i < stmt.fixes.size(); ++i) {
        os << (i == 0 ? " fixes " : " and ");
        const auto& g = stmt.fixes[i];
        for (std::size_t v = 0; v < g.variables.size(); ++v) {
            if (v > 0) {
                os << ' ';
            }
            os << g.variables[v];
        }
        if (!g.type_text.empty()) {
            os << " :: \"" << collapse_ws(g.type_text) << '"';
        }
    }
    for (std::size_t i = 0; i < stmt.assumes.size(); ++i) {
        os << (i == 0 ? " assumes " : " and ");
        const auto& a = stmt.assumes[i];
        if (keep_labels && a.label) {
            os << *a.label << ": ";
        }
        os << '"' << collapse_ws(a.prop_text) << '"';
    }
    os << " shows";
    for (const auto& goal : stmt.shows_list) {
        os << " \"" << collapse_ws(goal) << '"';
    }
}

}  // namespace

std::string print_statement(const TheoremStatement& stmt) {
    std::ostringstream os;
    os << stmt.keyword;
    if (stmt.name) {
        os << ' ' << *stmt.name << ':';
    }
    render_body(os, stmt, /*keep_labels=*/true);
    return os.str();
}

std::string normalize_statement(const TheoremStatement& stmt) {
    std::ostringstream os;
    os << "theorem";
    render_body(os, stmt, /*keep_labels=*/false);
    return os.str();
}

}  // namespace autoform::isabelle
