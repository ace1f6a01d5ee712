#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_set>

namespace autoform::isabelle {

// Symbol lexicon backing the heuristic validator: the set of legal
// \<...> escape names plus a whitelist of identifiers that are allowed as
// multi-letter bound variable names.
//
// File format: one entry per line, `#` starts a comment. Lines written as
// \<name> extend the escape set, anything else the identifier whitelist.
class Lexicon {
public:
    // Escape names and keywords seen in standard Isabelle statements.
    static const Lexicon& builtin();

    // Builtin entries plus the extensions from `path`.
    static Lexicon load(const std::filesystem::path& path);

    void add_escape(std::string name);
    void add_word(std::string word);

    bool known_escape(std::string_view name) const;
    bool known_word(std::string_view word) const;

    std::size_t size() const { return escapes_.size() + words_.size(); }

private:
    std::unordered_set<std::string> escapes_;
    std::unordered_set<std::string> words_;
};

}  // namespace autoform::isabelle
