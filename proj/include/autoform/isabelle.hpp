#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "autoform/errors.hpp"
#include "autoform/lexicon.hpp"

// Lexing, parsing, validation and normalization for the theorem-statement
// subset of Isabelle outer syntax:
//
//   theorem [name[attrs]:] [fixes <vars> [:: <type>] (and ...)*]
//           [assumes [label:] "<prop>"+ (and ...)*]*
//           shows "<goal>"+
//
// plus the short form  theorem [name:] "<goal>"  and the lemma/proposition/
// corollary spellings. Inner syntax (the text between double quotes) is kept
// opaque; only lexical checks apply to it.
namespace autoform::isabelle {

enum class TokenKind {
    keyword,
    identifier,
    symbol_escape,
    number,
    punct,
    string_open,
    string_close,
    inner_text,
    whitespace,
};

struct Token {
    TokenKind kind;
    std::string text;
    std::size_t offset = 0;      // byte index into the input
    bool inside_quotes = false;  // set for tokens between string_open/close
};

struct LexError : Error {
    LexError(const std::string& msg, std::size_t off)
        : Error(msg + " at offset " + std::to_string(off)), offset(off) {}
    std::size_t offset;
};

struct ParseError : Error {
    ParseError(const std::string& msg, std::size_t off)
        : Error(msg + " at offset " + std::to_string(off)), offset(off) {}
    std::size_t offset;
};

// Lossless: concatenating token texts reproduces the input byte-for-byte.
// Throws LexError on an unterminated \<...> escape or an unbalanced quote.
std::vector<Token> tokenize(std::string_view text);

// Non-throwing variant; returns false and fills `error` on lexical failure.
bool try_tokenize(std::string_view text, std::vector<Token>& out, std::string& error);

// Token texts with whitespace elided; quotes and escapes stay single tokens.
// This is the token stream the BLEU evaluation scores.
std::vector<std::string> content_tokens(const std::vector<Token>& tokens);

struct FixGroup {
    std::vector<std::string> variables;
    std::string type_text;        // empty when no :: annotation was given
    std::size_t type_offset = 0;  // into raw_text; 0 for synthetic statements
};

struct Assumption {
    std::optional<std::string> label;
    std::string prop_text;
    std::size_t prop_offset = 0;
};

struct TheoremStatement {
    std::string keyword = "theorem";  // theorem | lemma | proposition | corollary
    std::optional<std::string> name;
    std::vector<FixGroup> fixes;
    std::vector<Assumption> assumes;
    std::vector<std::string> shows_list;  // one entry per quoted goal
    std::size_t shows_offset = 0;
    std::string raw_text;

    // The goal text; multiple quoted goals joined with a single space.
    std::string shows() const;
};

bool structurally_equal(const TheoremStatement& a, const TheoremStatement& b);

// Throws ParseError (missing shows, keyword out of order, unexpected tokens,
// unbalanced inner parentheses) or LexError via tokenize.
TheoremStatement parse_statement(std::string_view text);

// Stable re-rendering; parse_statement(print_statement(s)) is structurally
// equal to s.
std::string print_statement(const TheoremStatement& stmt);

// Canonical dedup key: theorem name and assumption labels stripped, keyword
// normalized, every whitespace run collapsed to one space.
std::string normalize_statement(const TheoremStatement& stmt);

enum class Severity { error, warning };

struct Diagnostic {
    Severity severity;
    std::string message;
    std::size_t offset = 0;
};

struct ValidationReport {
    bool wellformed = true;  // true iff no error-severity diagnostic
    std::vector<Diagnostic> diagnostics;

    void add(Severity sev, std::string msg, std::size_t offset);
    std::size_t error_count() const;
};

// Heuristic lexical screening of a parsed statement. All findings are
// diagnostics; the authoritative verdict belongs to a prover backend.
ValidationReport validate(const TheoremStatement& stmt, const Lexicon& lexicon);

// Full pipeline: tokenize + parse + validate. Lex/parse failures come back
// as error diagnostics instead of exceptions.
ValidationReport validate_text(std::string_view text, const Lexicon& lexicon);

}  // namespace autoform::isabelle
