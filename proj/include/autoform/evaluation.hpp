#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include "autoform/corpus.hpp"
#include "autoform/metrics.hpp"

namespace autoform::evaluation {

// The eight failure categories used when manually grading formalizations.
// Serialization names are stable; annotation stores depend on them.
enum class FailureLabel {
    perfect_translation,
    incomplete_ill_formed_unclear_prompt,
    fail_to_align_definitions,
    inconsistent_missing_assumption,
    syntactic_type_error,
    missing_definition_in_isabelle,
    wrong_application_of_functions,
    other,
};

inline constexpr int kFailureLabelCount = 8;

std::string to_string(FailureLabel label);
std::optional<FailureLabel> label_from_string(std::string_view name);
// Accepts 1-8, the serialization names, and short aliases (perfect,
// incomplete, align, assumption, syntax, missing, application, other).
std::optional<FailureLabel> label_from_key(std::string_view key);

struct Annotation {
    std::string problem_id;
    std::set<FailureLabel> labels;
    std::string annotator;
    std::optional<std::string> note;
    std::string ts;
};

// Throws when labels are empty or perfect_translation is combined with
// another label (it asserts there is nothing wrong to categorize).
void check_annotation(const Annotation& annotation);

// Append-only JSONL store; every append is flushed, so a crash leaves a
// readable prefix.
class AnnotationStore {
public:
    explicit AnnotationStore(std::filesystem::path path);

    std::vector<Annotation> load() const;
    std::unordered_set<std::string> annotated_ids() const;
    void append(const Annotation& annotation);

    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

struct LabelSessionInput {
    std::vector<corpus::Problem> problems;
    std::map<std::string, std::string> formalizations;  // problem id -> Isabelle text
    std::string annotator;
};

// Interactive annotation loop over `in`/`out`. Problems already present in
// the store are skipped, so an interrupted session resumes where it
// stopped. Returns the number of annotations persisted this session.
// Typing `q` ends the session early.
std::size_t label_session(const LabelSessionInput& input, AnnotationStore& store,
                          std::istream& in, std::ostream& out);

struct AggregateTable {
    // counts[label][subject]; multi-label annotations increment several rows.
    std::map<FailureLabel, std::map<corpus::Subject, std::size_t>> counts;
    std::size_t annotated_problems = 0;
    std::size_t perfect = 0;

    Rate perfect_rate() const { return Rate{perfect, annotated_problems}; }
};

AggregateTable aggregate_annotations(const std::vector<Annotation>& annotations,
                                     const std::map<std::string, corpus::Subject>& subject_by_id);

}  // namespace autoform::evaluation
