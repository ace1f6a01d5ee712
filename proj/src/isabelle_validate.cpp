#include <cctype>

#include "autoform/isabelle.hpp"

namespace autoform::isabelle {

void ValidationReport::add(Severity sev, std::string msg, std::size_t offset) {
    if (sev == Severity::error) {
        wellformed = false;
    }
    diagnostics.push_back(Diagnostic{sev, std::move(msg), offset});
}

std::size_t ValidationReport::error_count() const {
    std::size_t n = 0;
    for (const auto& d : diagnostics) {
        if (d.severity == Severity::error) {
            ++n;
        }
    }
    return n;
}

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b])) != 0) {
        ++b;
    }
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1])) != 0) {
        --e;
    }
    return s.substr(b, e - b);
}

bool all_alpha(const std::string& s) {
    for (unsigned char c : s) {
        if (std::isalpha(c) == 0) {
            return false;
        }
    }
    return !s.empty();
}

std::string escape_name(const std::string& token_text) {
    // token text is \<name>
    return token_text.substr(2, token_text.size() - 3);
}

// Shared scan over an opaque inner string (prop or type).
void check_inner(ValidationReport& report, const Lexicon& lexicon, const std::string& inner,
                 std::size_t base_offset, bool type_position) {
    std::vector<Token> toks;
    std::string lex_error;
    if (!try_tokenize(inner, toks, lex_error)) {
        report.add(Severity::error, "inner syntax does not lex: " + lex_error, base_offset);
        return;
    }
    for (const auto& t : toks) {
        const std::size_t off = base_offset + t.offset;
        if (t.kind == TokenKind::symbol_escape) {
            const std::string name = escape_name(t.text);
            if (!lexicon.known_escape(name)) {
                report.add(Severity::error, "unknown symbol escape " + t.text, off);
            }
            continue;
        }
        if (t.kind == TokenKind::whitespace) {
            continue;
        }
        if (type_position && (t.text == "->" || t.text == "=>")) {
            report.add(Severity::error,
                       "ASCII arrow '" + t.text + "' in type, expected \\<Rightarrow>", off);
            continue;
        }
        if (t.text == "forall" || t.text == "exists") {
            report.add(Severity::error,
                       "ASCII binder '" + t.text + "', expected the \\<" + t.text + "> symbol",
                       off);
            continue;
        }
        if (!type_position && (t.text == "false" || t.text == "true")) {
            if (trim(inner) == t.text) {
                report.add(Severity::error,
                           "lowercase '" + t.text + "' is not a proposition, expected '" +
                               std::string(1, static_cast<char>(std::toupper(t.text[0]))) +
                               t.text.substr(1) + "'",
                           off);
            } else {
                report.add(Severity::warning, "suspicious lowercase '" + t.text + "'", off);
            }
        }
    }
}

}  // namespace

ValidationReport validate(const TheoremStatement& stmt, const Lexicon& lexicon) {
    ValidationReport report;

    for (const auto& group : stmt.fixes) {
        for (const auto& var : group.variables) {
            if (var.size() >= 2 && var[0] != '\\' && all_alpha(var) && !lexicon.known_word(var)) {
                // Weak models copy prose words into binders; statement
                // variables in this corpus are single letters or symbols.
                report.add(Severity::error,
                           "variable name '" + var + "' looks like prose, not a variable",
                           stmt.fixes.empty() ? 0 : group.type_offset);
            }
            if (var[0] == '\\') {
                const std::string name = escape_name(var);
                if (!lexicon.known_escape(name)) {
                    report.add(Severity::error, "unknown symbol escape " + var, group.type_offset);
                }
            }
        }
        if (!group.type_text.empty()) {
            check_inner(report, lexicon, group.type_text, group.type_offset,
                        /*type_position=*/true);
        }
    }
    for (const auto& a : stmt.assumes) {
        check_inner(report, lexicon, a.prop_text, a.prop_offset, /*type_position=*/false);
    }
    for (const auto& goal : stmt.shows_list) {
        check_inner(report, lexicon, goal, stmt.shows_offset, /*type_position=*/false);
    }
    return report;
}

ValidationReport validate_text(std::string_view text, const Lexicon& lexicon) {
    TheoremStatement stmt;
    try {
        stmt = parse_statement(text);
    } catch (const LexError& ex) {
        ValidationReport report;
        report.add(Severity::error, ex.what(), ex.offset);
        return report;
    } catch (const ParseError& ex) {
        ValidationReport report;
        report.add(Severity::error, ex.what(), ex.offset);
        return report;
    }
    return validate(stmt, lexicon);
}

}  // namespace autoform::isabelle
