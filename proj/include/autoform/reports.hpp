#pragma once

#include <map>
#include <string>
#include <vector>

#include "autoform/bleu.hpp"
#include "autoform/corpus.hpp"
#include "autoform/evaluation.hpp"
#include "autoform/expert_iteration.hpp"

// Aligned-text and CSV renderings of the three report shapes the pipeline
// produces: translation quality per subject, failure-category counts per
// subject, and per-iteration proof success rates.
namespace autoform::reports {

struct BleuCell {
    double value = 0.0;
    std::size_t n_pairs = 0;
};

// rows: model id -> subject -> score
using BleuMatrix = std::map<std::string, std::map<corpus::Subject, BleuCell>>;

std::string render_bleu_table(const BleuMatrix& matrix, const std::string& config_line);

std::string render_failure_table(const evaluation::AggregateTable& table);
std::string failure_table_csv(const evaluation::AggregateTable& table);

std::string render_iteration_table(const expert_iteration::IterationState& state);

}  // namespace autoform::reports
