#include "autoform/evaluation.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <istream>
#include <ostream>
#include <sstream>

#include "autoform/jsonl.hpp"

namespace autoform::evaluation {

namespace {

struct LabelName {
    FailureLabel label;
    const char* name;
    const char* alias;
};

constexpr LabelName kLabelNames[] = {
    {FailureLabel::perfect_translation, "perfect_translation", "perfect"},
    {FailureLabel::incomplete_ill_formed_unclear_prompt, "incomplete_ill_formed_unclear_prompt",
     "incomplete"},
    {FailureLabel::fail_to_align_definitions, "fail_to_align_definitions", "align"},
    {FailureLabel::inconsistent_missing_assumption, "inconsistent_missing_assumption",
     "assumption"},
    {FailureLabel::syntactic_type_error, "syntactic_type_error", "syntax"},
    {FailureLabel::missing_definition_in_isabelle, "missing_definition_in_isabelle", "missing"},
    {FailureLabel::wrong_application_of_functions, "wrong_application_of_functions",
     "application"},
    {FailureLabel::other, "other", "other"},
};

std::string utc_now() {
    const std::time_t tt = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

std::string to_string(FailureLabel label) {
    for (const auto& entry : kLabelNames) {
        if (entry.label == label) {
            return entry.name;
        }
    }
    return "other";
}

std::optional<FailureLabel> label_from_string(std::string_view name) {
    for (const auto& entry : kLabelNames) {
        if (name == entry.name) {
            return entry.label;
        }
    }
    return std::nullopt;
}

std::optional<FailureLabel> label_from_key(std::string_view key) {
    if (key.size() == 1 && key[0] >= '1' && key[0] <= '8') {
        return kLabelNames[key[0] - '1'].label;
    }
    for (const auto& entry : kLabelNames) {
        if (key == entry.name || key == entry.alias) {
            return entry.label;
        }
    }
    return std::nullopt;
}

void check_annotation(const Annotation& annotation) {
    if (annotation.labels.empty()) {
        throw Error("annotation for '" + annotation.problem_id + "' has no labels");
    }
    if (annotation.labels.count(FailureLabel::perfect_translation) > 0 &&
        annotation.labels.size() > 1) {
        throw Error("perfect_translation must be the sole label ('" + annotation.problem_id +
                    "')");
    }
}

AnnotationStore::AnnotationStore(std::filesystem::path path) : path_(std::move(path)) {}

std::vector<Annotation> AnnotationStore::load() const {
    std::vector<Annotation> annotations;
    if (!std::filesystem::exists(path_)) {
        return annotations;
    }
    jsonl::for_each_record(path_, [&](const jsonl::json& record, std::size_t line) {
        Annotation a;
        if (!record.contains("problem_id") || !record.contains("labels")) {
            throw RecordError("annotation needs 'problem_id' and 'labels'", line);
        }
        a.problem_id = record["problem_id"].get<std::string>();
        for (const auto& l : record["labels"]) {
            auto label = label_from_string(l.get<std::string>());
            if (!label) {
                throw RecordError("unknown label '" + l.get<std::string>() + "'", line);
            }
            a.labels.insert(*label);
        }
        a.annotator = record.value("annotator", "");
        if (record.contains("note") && record["note"].is_string()) {
            a.note = record["note"].get<std::string>();
        }
        a.ts = record.value("ts", "");
        check_annotation(a);
        annotations.push_back(std::move(a));
    });
    return annotations;
}

std::unordered_set<std::string> AnnotationStore::annotated_ids() const {
    std::unordered_set<std::string> ids;
    for (const auto& a : load()) {
        ids.insert(a.problem_id);
    }
    return ids;
}

void AnnotationStore::append(const Annotation& annotation) {
    check_annotation(annotation);
    jsonl::json record;
    record["problem_id"] = annotation.problem_id;
    auto labels = jsonl::json::array();
    for (const auto& l : annotation.labels) {
        labels.push_back(to_string(l));
    }
    record["labels"] = labels;
    record["annotator"] = annotation.annotator;
    if (annotation.note) {
        record["note"] = *annotation.note;
    }
    record["ts"] = annotation.ts.empty() ? utc_now() : annotation.ts;
    jsonl::append_record(path_, record);
}

namespace {

std::optional<std::set<FailureLabel>> parse_label_line(const std::string& line,
                                                       std::string& error) {
    std::set<FailureLabel> labels;
    std::istringstream in(line);
    std::string key;
    while (in >> key) {
        // allow comma-separated input
        while (!key.empty() && key.back() == ',') {
            key.pop_back();
        }
        if (key.empty()) {
            continue;
        }
        auto label = label_from_key(key);
        if (!label) {
            error = "unknown category '" + key + "'";
            return std::nullopt;
        }
        labels.insert(*label);
    }
    if (labels.empty()) {
        error = "enter at least one category";
        return std::nullopt;
    }
    if (labels.count(FailureLabel::perfect_translation) > 0 && labels.size() > 1) {
        error = "perfect is exclusive; drop the other categories";
        return std::nullopt;
    }
    return labels;
}

void print_menu(std::ostream& out) {
    out << "categories:\n";
    int idx = 1;
    for (const auto& entry : kLabelNames) {
        out << "  " << idx++ << ") " << entry.name << "\n";
    }
    out << "enter one or more (number or name), or q to stop:\n";
}

}  // namespace

std::size_t label_session(const LabelSessionInput& input, AnnotationStore& store,
                          std::istream& in, std::ostream& out) {
    for (const auto& p : input.problems) {
        if (input.formalizations.find(p.id) == input.formalizations.end()) {
            throw Error("no formalization for problem '" + p.id + "'");
        }
    }
    auto done = store.annotated_ids();
    std::size_t annotated = 0;
    for (const auto& p : input.problems) {
        if (done.count(p.id) > 0) {
            continue;
        }
        out << "== " << p.id << " [" << corpus::to_string(p.subject) << "] ==\n";
        out << p.statement_latex << "\n";
        out << "-- candidate --\n";
        out << input.formalizations.at(p.id) << "\n";
        print_menu(out);

        std::string line;
        std::set<FailureLabel> labels;
        bool quit = false;
        while (true) {
            if (!std::getline(in, line)) {
                quit = true;
                break;
            }
            if (line == "q" || line == "quit") {
                quit = true;
                break;
            }
            std::string error;
            auto parsed = parse_label_line(line, error);
            if (parsed) {
                labels = std::move(*parsed);
                break;
            }
            out << error << "\n";
        }
        if (quit) {
            break;
        }
        Annotation a;
        a.problem_id = p.id;
        a.labels = labels;
        a.annotator = input.annotator;
        store.append(a);
        ++annotated;
    }
    out << "annotated " << annotated << " problem(s)\n";
    return annotated;
}

AggregateTable aggregate_annotations(const std::vector<Annotation>& annotations,
                                     const std::map<std::string, corpus::Subject>& subject_by_id) {
    AggregateTable table;
    std::unordered_set<std::string> seen;
    for (const auto& a : annotations) {
        auto subject_it = subject_by_id.find(a.problem_id);
        const corpus::Subject subject =
            subject_it == subject_by_id.end() ? corpus::Subject::other : subject_it->second;
        if (seen.insert(a.problem_id).second) {
            ++table.annotated_problems;
        }
        for (const auto& label : a.labels) {
            ++table.counts[label][subject];
            if (label == FailureLabel::perfect_translation) {
                ++table.perfect;
            }
        }
    }
    return table;
}

}  // namespace autoform::evaluation
