#include "autoform/corpus.hpp"

#include <unordered_set>

#include "autoform/isabelle.hpp"
#include "autoform/jsonl.hpp"
#include "autoform/rng.hpp"

namespace autoform::corpus {

std::string to_string(Subject s) {
    switch (s) {
        case Subject::algebra: return "algebra";
        case Subject::number_theory: return "number_theory";
        case Subject::intermediate_algebra: return "intermediate_algebra";
        case Subject::other: return "other";
    }
    return "other";
}

std::string to_string(Split s) {
    switch (s) {
        case Split::train: return "train";
        case Split::valid: return "valid";
        case Split::test: return "test";
    }
    return "train";
}

Subject subject_from_string(std::string_view s) {
    if (s == "algebra") return Subject::algebra;
    if (s == "number_theory") return Subject::number_theory;
    if (s == "intermediate_algebra") return Subject::intermediate_algebra;
    return Subject::other;
}

std::optional<Split> split_from_string(std::string_view s) {
    if (s == "train") return Split::train;
    if (s == "valid") return Split::valid;
    if (s == "test") return Split::test;
    return std::nullopt;
}

namespace {

std::string require_string(const jsonl::json& record, const char* key, std::size_t line) {
    auto it = record.find(key);
    if (it == record.end() || !it->is_string()) {
        throw RecordError(std::string("missing or non-string field '") + key + "'", line);
    }
    return it->get<std::string>();
}

}  // namespace

std::vector<Problem> load_problems(const std::filesystem::path& path) {
    std::vector<Problem> problems;
    std::unordered_set<std::string> seen;
    jsonl::for_each_record(path, [&](const jsonl::json& record, std::size_t line) {
        Problem p;
        p.id = require_string(record, "id", line);
        if (p.id.empty()) {
            throw RecordError("empty id", line);
        }
        p.subject = subject_from_string(require_string(record, "subject", line));
        p.statement_latex = require_string(record, "statement", line);
        if (p.statement_latex.empty()) {
            throw RecordError("empty statement", line);
        }
        auto ans = record.find("answer");
        if (ans == record.end() || (!ans->is_null() && !ans->is_string())) {
            throw RecordError("missing or malformed field 'answer'", line);
        }
        if (ans->is_string()) {
            p.answer = ans->get<std::string>();
        }
        auto split = split_from_string(require_string(record, "split", line));
        if (!split) {
            throw RecordError("unknown split '" + require_string(record, "split", line) + "'",
                              line);
        }
        p.split = *split;
        if (!seen.insert(p.id).second) {
            throw Error("duplicate problem id '" + p.id + "'");
        }
        problems.push_back(std::move(p));
    });
    return problems;
}

void write_problems(const std::filesystem::path& path, const std::vector<Problem>& problems) {
    std::vector<jsonl::json> records;
    records.reserve(problems.size());
    for (const auto& p : problems) {
        jsonl::json r;
        r["id"] = p.id;
        r["subject"] = to_string(p.subject);
        r["statement"] = p.statement_latex;
        r["answer"] = p.answer ? jsonl::json(*p.answer) : jsonl::json(nullptr);
        r["split"] = to_string(p.split);
        records.push_back(std::move(r));
    }
    jsonl::write_file(path, records);
}

std::string append_answer(const Problem& p) {
    if (p.statement_latex.empty()) {
        throw Error("cannot append answer to an empty statement (id '" + p.id + "')");
    }
    if (!p.answer) {
        return p.statement_latex;
    }
    std::string stem = p.statement_latex;
    while (!stem.empty() && (stem.back() == ' ' || stem.back() == '\t' || stem.back() == '\n' ||
                             stem.back() == '\r')) {
        stem.pop_back();
    }
    return stem + " The final answer is " + *p.answer + ".";
}

ExemplarSplit split_exemplars(const std::vector<Problem>& problems, std::size_t k,
                              std::uint64_t seed) {
    if (k > problems.size()) {
        throw Error("cannot sample " + std::to_string(k) + " exemplars from " +
                    std::to_string(problems.size()) + " problems");
    }
    const auto chosen = sample_indices(problems.size(), k, seed);
    std::vector<bool> taken(problems.size(), false);
    ExemplarSplit out;
    out.exemplars.reserve(k);
    for (std::size_t idx : chosen) {
        taken[idx] = true;
        out.exemplars.push_back(problems[idx]);
    }
    out.evaluation.reserve(problems.size() - k);
    for (std::size_t i = 0; i < problems.size(); ++i) {
        if (!taken[i]) {
            out.evaluation.push_back(problems[i]);
        }
    }
    return out;
}

std::vector<GroundTruthFormalization> load_ground_truth(const std::filesystem::path& path) {
    std::vector<GroundTruthFormalization> out;
    jsonl::for_each_record(path, [&](const jsonl::json& record, std::size_t line) {
        GroundTruthFormalization gt;
        gt.problem_id = require_string(record, "problem_id", line);
        gt.isabelle_text = require_string(record, "isabelle", line);
        try {
            isabelle::parse_statement(gt.isabelle_text);
        } catch (const Error& ex) {
            throw Error("ground truth for '" + gt.problem_id + "' does not parse: " + ex.what());
        }
        out.push_back(std::move(gt));
    });
    return out;
}

}  // namespace autoform::corpus
