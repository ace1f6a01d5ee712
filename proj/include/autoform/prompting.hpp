#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "autoform/corpus.hpp"

namespace autoform::prompting {

enum class Direction { formalize, informalize };

struct Exemplar {
    std::string natural_text;
    std::string formal_text;
};

// Ordered few-shot pairs for one subject. Order is significant: completions
// depend on it, and prompts are frozen byte-exactly in golden files.
struct ExemplarBank {
    corpus::Subject subject = corpus::Subject::other;
    std::vector<Exemplar> pairs;
};

// JSONL with keys nl/formal/subject. Every formal side must parse as a
// theorem statement.
ExemplarBank load_bank(const std::filesystem::path& path);

// intermediate_algebra has no bank of its own and borrows algebra's.
corpus::Subject bank_subject_for(corpus::Subject subject);

struct PromptSpec {
    Direction direction = Direction::formalize;
    ExemplarBank bank;
    std::string query;
    std::vector<std::string> stop_sequences;
};

// The next few-shot header is where a completion naturally ends.
std::vector<std::string> default_stop_sequences();

struct InformalizationPrompt {
    std::string text;
    std::vector<std::string> warnings;
};

// Layout, frozen by the golden files: one block per exemplar
//   Natural language version: "<nl>". Translate the natural language version to an Isabelle version:
//   <formal>
//   <blank line>
// followed by the same header for the query and a trailing newline.
std::string build_formalization_prompt(const PromptSpec& spec);

// Mirror image: Isabelle block first, instruction line after, the natural
// language text quoted. A query that does not parse as a statement is kept
// verbatim and reported as a warning.
InformalizationPrompt build_informalization_prompt(const PromptSpec& spec);

// Truncates at the earliest stop sequence, then strips leading and trailing
// blank lines. An empty result is legal.
std::string extract_completion(const std::string& raw,
                               const std::vector<std::string>& stop_sequences);

}  // namespace autoform::prompting
