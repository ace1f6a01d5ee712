#include "autoform/reports.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace autoform::reports {

namespace {

std::string pad(const std::string& s, std::size_t width) {
    std::string out = s;
    while (out.size() < width) {
        out.push_back(' ');
    }
    return out;
}

std::string rule(const std::vector<std::size_t>& widths) {
    std::size_t total = 0;
    for (std::size_t w : widths) {
        total += w + 2;
    }
    return std::string(total, '-') + "\n";
}

const corpus::Subject kSubjectOrder[] = {
    corpus::Subject::algebra,
    corpus::Subject::number_theory,
    corpus::Subject::intermediate_algebra,
    corpus::Subject::other,
};

}  // namespace

std::string render_bleu_table(const BleuMatrix& matrix, const std::string& config_line) {
    std::set<corpus::Subject> used;
    for (const auto& [model, cells] : matrix) {
        for (const auto& [subject, cell] : cells) {
            used.insert(subject);
        }
    }
    std::vector<corpus::Subject> columns;
    for (auto s : kSubjectOrder) {
        if (used.count(s)) {
            columns.push_back(s);
        }
    }

    std::vector<std::size_t> widths;
    widths.push_back(std::string("model").size());
    for (const auto& [model, cells] : matrix) {
        widths[0] = std::max(widths[0], model.size());
    }
    for (auto s : columns) {
        widths.push_back(std::max<std::size_t>(corpus::to_string(s).size(), 6));
    }

    std::ostringstream out;
    out << pad("model", widths[0] + 2);
    for (std::size_t c = 0; c < columns.size(); ++c) {
        out << pad(corpus::to_string(columns[c]), widths[c + 1] + 2);
    }
    out << "\n" << rule(widths);
    for (const auto& [model, cells] : matrix) {
        out << pad(model, widths[0] + 2);
        for (std::size_t c = 0; c < columns.size(); ++c) {
            auto it = cells.find(columns[c]);
            out << pad(it == cells.end() ? "-" : bleu::format_score(it->second.value),
                       widths[c + 1] + 2);
        }
        out << "\n";
    }
    out << config_line << "\n";
    return out.str();
}

namespace {

const evaluation::FailureLabel kLabelOrder[] = {
    evaluation::FailureLabel::perfect_translation,
    evaluation::FailureLabel::incomplete_ill_formed_unclear_prompt,
    evaluation::FailureLabel::fail_to_align_definitions,
    evaluation::FailureLabel::inconsistent_missing_assumption,
    evaluation::FailureLabel::syntactic_type_error,
    evaluation::FailureLabel::missing_definition_in_isabelle,
    evaluation::FailureLabel::wrong_application_of_functions,
    evaluation::FailureLabel::other,
};

std::vector<corpus::Subject> failure_columns(const evaluation::AggregateTable& table) {
    std::set<corpus::Subject> used;
    for (const auto& [label, by_subject] : table.counts) {
        for (const auto& [subject, count] : by_subject) {
            used.insert(subject);
        }
    }
    std::vector<corpus::Subject> columns;
    for (auto s : kSubjectOrder) {
        if (used.count(s)) {
            columns.push_back(s);
        }
    }
    return columns;
}

std::size_t cell(const evaluation::AggregateTable& table, evaluation::FailureLabel label,
                 corpus::Subject subject) {
    auto row = table.counts.find(label);
    if (row == table.counts.end()) {
        return 0;
    }
    auto it = row->second.find(subject);
    return it == row->second.end() ? 0 : it->second;
}

}  // namespace

std::string render_failure_table(const evaluation::AggregateTable& table) {
    const auto columns = failure_columns(table);
    std::size_t label_width = std::string("category").size();
    for (auto label : kLabelOrder) {
        label_width = std::max(label_width, evaluation::to_string(label).size());
    }

    std::ostringstream out;
    out << pad("category", label_width + 2);
    for (auto s : columns) {
        out << pad(corpus::to_string(s), corpus::to_string(s).size() + 2);
    }
    out << "\n";
    for (auto label : kLabelOrder) {
        out << pad(evaluation::to_string(label), label_width + 2);
        for (auto s : columns) {
            out << pad(std::to_string(cell(table, label, s)), corpus::to_string(s).size() + 2);
        }
        out << "\n";
    }
    if (table.annotated_problems > 0) {
        out << "perfect rate: " << table.perfect << "/" << table.annotated_problems << " = "
            << table.perfect_rate().percent() << "\n";
    }
    return out.str();
}

std::string failure_table_csv(const evaluation::AggregateTable& table) {
    const auto columns = failure_columns(table);
    std::ostringstream out;
    out << "category";
    for (auto s : columns) {
        out << "," << corpus::to_string(s);
    }
    out << "\n";
    for (auto label : kLabelOrder) {
        out << evaluation::to_string(label);
        for (auto s : columns) {
            out << "," << cell(table, label, s);
        }
        out << "\n";
    }
    return out.str();
}

std::string render_iteration_table(const expert_iteration::IterationState& state) {
    std::ostringstream out;
    out << "candidates: " << state.filter.total << ", syntactically accepted: "
        << state.filter.accepted << ", rejected: " << state.filter.rejected;
    if (state.filter.errored > 0) {
        out << ", errored: " << state.filter.errored;
    }
    out << "\n\n";

    const std::vector<std::string> headers = {"model",   "proved", "attempted",
                                              "success", "cumulative", "training set"};
    std::vector<std::size_t> widths;
    for (const auto& h : headers) {
        widths.push_back(h.size());
    }
    std::vector<std::vector<std::string>> rows;
    if (state.model_checkpoints.count(0)) {
        rows.push_back({state.model_checkpoints.at(0), "-", "-", "-", "-", "-"});
    }
    for (const auto& m : state.metrics) {
        rows.push_back({m.checkpoint, std::to_string(m.proved), std::to_string(m.attempted),
                        m.success_rate, std::to_string(m.cumulative_proved),
                        std::to_string(m.training_set_size)});
    }
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            widths[i] = std::max(widths[i], row[i].size());
        }
    }
    for (std::size_t i = 0; i < headers.size(); ++i) {
        out << pad(headers[i], widths[i] + 2);
    }
    out << "\n" << rule(widths);
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out << pad(row[i], widths[i] + 2);
        }
        out << "\n";
    }
    return out.str();
}

}  // namespace autoform::reports
