#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "autoform/errors.hpp"

namespace autoform::corpus {

enum class Subject { algebra, number_theory, intermediate_algebra, other };
enum class Split { train, valid, test };

std::string to_string(Subject s);
std::string to_string(Split s);
Subject subject_from_string(std::string_view s);  // unknown names map to other
std::optional<Split> split_from_string(std::string_view s);

struct Problem {
    std::string id;
    Subject subject = Subject::other;
    std::string statement_latex;
    std::optional<std::string> answer;
    Split split = Split::train;
};

struct GroundTruthFormalization {
    std::string problem_id;
    std::string isabelle_text;
};

// JSONL with keys id/subject/statement/answer/split, one object per line.
// Rejects malformed lines (with line number), empty ids or statements, and
// duplicate ids (naming the id). Order is preserved.
std::vector<Problem> load_problems(const std::filesystem::path& path);

// Canonical serialization (compact JSON, sorted keys, LF). Loading a file
// written by this function and writing it again is byte-identical.
void write_problems(const std::filesystem::path& path, const std::vector<Problem>& problems);

// Question-style problems become propositions by appending the answer
// sentence; prove-style problems (no answer) pass through unchanged.
std::string append_answer(const Problem& p);

struct ExemplarSplit {
    std::vector<Problem> exemplars;
    std::vector<Problem> evaluation;
};

// Draws k problems without replacement using the seeded splitmix64-v1
// generator; the remainder keeps its original order.
ExemplarSplit split_exemplars(const std::vector<Problem>& problems, std::size_t k,
                              std::uint64_t seed);

// JSONL with keys problem_id/isabelle. Every formalization must parse as a
// theorem statement; the error names the offending problem_id.
std::vector<GroundTruthFormalization> load_ground_truth(const std::filesystem::path& path);

}  // namespace autoform::corpus
