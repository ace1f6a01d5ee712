#include <cctype>

#include "autoform/isabelle.hpp"

namespace autoform::isabelle {

namespace {

bool is_ident_start(unsigned char c) { return std::isalpha(c) != 0; }
bool is_ident_char(unsigned char c) {
    return std::isalnum(c) != 0 || c == '_' || c == '\'';
}
bool is_escape_name_char(unsigned char c) {
    return std::isalnum(c) != 0 || c == '_' || c == '^';
}

const char* kKeywords[] = {"theorem",     "lemma", "proposition", "corollary",
                           "fixes",       "assumes", "shows",     "and",
                           "is"};

bool is_keyword(std::string_view word) {
    for (const char* k : kKeywords) {
        if (word == k) {
            return true;
        }
    }
    return false;
}

// Two-character operators kept as one token so the validator can see them.
bool is_paired_punct(char a, char b) {
    return (a == ':' && b == ':') || (a == '-' && b == '>') || (a == '=' && b == '>');
}

}  // namespace

std::vector<Token> tokenize(std::string_view text) {
    std::vector<Token> tokens;
    bool in_quotes = false;
    std::size_t quote_open_offset = 0;
    std::size_t i = 0;
    const std::size_t n = text.size();

    auto push = [&](TokenKind kind, std::size_t start, std::size_t len) {
        tokens.push_back(Token{kind, std::string(text.substr(start, len)), start, in_quotes});
    };

    while (i < n) {
        const unsigned char c = static_cast<unsigned char>(text[i]);

        if (c == '"') {
            if (!in_quotes) {
                push(TokenKind::string_open, i, 1);
                in_quotes = true;
                quote_open_offset = i;
            } else {
                // close token belongs to the quoted region it terminates
                push(TokenKind::string_close, i, 1);
                tokens.back().inside_quotes = true;
                in_quotes = false;
            }
            ++i;
            continue;
        }

        if (std::isspace(c) != 0) {
            std::size_t start = i;
            while (i < n && std::isspace(static_cast<unsigned char>(text[i])) != 0) {
                ++i;
            }
            push(TokenKind::whitespace, start, i - start);
            continue;
        }

        if (c == '\\' && i + 1 < n && text[i + 1] == '<') {
            std::size_t start = i;
            std::size_t j = i + 2;
            while (j < n && is_escape_name_char(static_cast<unsigned char>(text[j]))) {
                ++j;
            }
            if (j >= n || text[j] != '>' || j == i + 2) {
                throw LexError("unterminated symbol escape", start);
            }
            push(TokenKind::symbol_escape, start, j + 1 - start);
            i = j + 1;
            continue;
        }

        if (is_ident_start(c)) {
            std::size_t start = i;
            while (i < n && is_ident_char(static_cast<unsigned char>(text[i]))) {
                ++i;
            }
            std::string_view word = text.substr(start, i - start);
            TokenKind kind = in_quotes          ? TokenKind::inner_text
                             : is_keyword(word) ? TokenKind::keyword
                                                : TokenKind::identifier;
            push(kind, start, i - start);
            continue;
        }

        if (std::isdigit(c) != 0) {
            std::size_t start = i;
            while (i < n && std::isdigit(static_cast<unsigned char>(text[i])) != 0) {
                ++i;
            }
            push(in_quotes ? TokenKind::inner_text : TokenKind::number, start, i - start);
            continue;
        }

        // Multi-byte UTF-8 sequences stay one token.
        if (c >= 0x80) {
            std::size_t start = i;
            ++i;
            while (i < n && (static_cast<unsigned char>(text[i]) & 0xc0) == 0x80) {
                ++i;
            }
            push(in_quotes ? TokenKind::inner_text : TokenKind::punct, start, i - start);
            continue;
        }

        std::size_t len = 1;
        if (i + 1 < n && is_paired_punct(text[i], text[i + 1])) {
            len = 2;
        }
        push(in_quotes ? TokenKind::inner_text : TokenKind::punct, i, len);
        i += len;
    }

    if (in_quotes) {
        throw LexError("unbalanced quote", quote_open_offset);
    }
    return tokens;
}

bool try_tokenize(std::string_view text, std::vector<Token>& out, std::string& error) {
    try {
        out = tokenize(text);
        return true;
    } catch (const LexError& ex) {
        error = ex.what();
        return false;
    }
}

std::vector<std::string> content_tokens(const std::vector<Token>& tokens) {
    std::vector<std::string> out;
    out.reserve(tokens.size());
    for (const auto& t : tokens) {
        if (t.kind != TokenKind::whitespace) {
            out.push_back(t.text);
        }
    }
    return out;
}

}  // namespace autoform::isabelle
