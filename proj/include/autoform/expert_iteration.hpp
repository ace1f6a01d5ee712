#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "autoform/clock.hpp"
#include "autoform/jsonl.hpp"
#include "autoform/metrics.hpp"
#include "autoform/prover.hpp"
#include "autoform/subprocess.hpp"

namespace autoform::expert_iteration {

struct ProofRecord {
    std::string statement_text;  // canonical form inside a TrainingSet
    std::vector<std::string> proof_steps;
    std::string provenance;  // "iteration_<j>" or "base"
};

struct TrainingSet {
    std::vector<ProofRecord> records;
};

// Dedup key: the canonical statement (name and labels stripped, whitespace
// collapsed); statements that do not parse fall back to a whitespace-
// collapsed raw key so base-corpus rows never get dropped silently.
std::string canonical_statement_key(const std::string& statement_text);

// First occurrence in source order wins, so an earlier iteration's proof
// survives a later re-proof. Output sorted by canonical key.
TrainingSet dedup_union(const std::vector<std::vector<ProofRecord>>& sources);

struct CandidateStatement {
    std::string problem_id;
    std::string statement_text;
};

struct IterationMetrics {
    int iteration = 0;           // 1-based: metrics of producing M_<iteration>
    std::size_t attempted = 0;   // statements searched
    std::size_t proved = 0;      // |S_iteration|
    std::string success_rate;    // "23.3%"
    std::size_t cumulative_proved = 0;  // |union of S_j, j <= iteration|
    std::size_t training_set_size = 0;
    std::string checkpoint;      // M_<iteration>
};

struct FilterStats {
    std::size_t total = 0;
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    std::size_t errored = 0;
};

struct IterationState {
    int iteration = 0;
    std::vector<CandidateStatement> corpus_A;  // accepted autoformalized statements
    std::vector<ProofRecord> base_B;
    std::map<int, std::vector<prover::ProofResult>> proved_by_iter;  // S_i, i >= 1
    std::map<int, std::string> model_checkpoints;                    // M_i
    std::vector<IterationMetrics> metrics;
    FilterStats filter;
};

// Exact rational; attempted == 0 throws. Rendered via Rate::percent().
Rate success_rate(std::size_t proved, std::size_t attempted);

class Trainer {
public:
    virtual ~Trainer() = default;
    // Returns the new checkpoint id. Hyperparameters the orchestrator does
    // not interpret travel in `passthrough`.
    virtual std::string fine_tune(const std::string& base_checkpoint,
                                  const TrainingSet& data, int epochs,
                                  const jsonl::json& passthrough) = 0;
};

class MockTrainer final : public Trainer {
public:
    struct Call {
        std::string base_checkpoint;
        std::size_t dataset_size = 0;
        int epochs = 0;
    };

    explicit MockTrainer(std::string checkpoint_prefix = "M") : prefix_(std::move(checkpoint_prefix)) {}

    std::string fine_tune(const std::string& base_checkpoint, const TrainingSet& data,
                          int epochs, const jsonl::json& passthrough) override;

    void fail_next(bool fail) { fail_next_ = fail; }
    const std::vector<Call>& calls() const { return calls_; }

private:
    std::string prefix_;
    int counter_ = 0;
    bool fail_next_ = false;
    std::vector<Call> calls_;
};

// Trainer wire protocol, one JSON object per line over the child's stdio:
//   -> {"op":"fine_tune","base_checkpoint":B,"dataset_path":P,"epochs":E,
//       "config":{...}}
//   <- {"ok":true,"checkpoint":ID} | {"ok":false,"error":E}
//   -> {"op":"close"}   <- {"ok":true}
class SubprocessTrainer final : public Trainer {
public:
    SubprocessTrainer(std::vector<std::string> argv, std::filesystem::path dataset_dir);
    ~SubprocessTrainer() override;
    std::string fine_tune(const std::string& base_checkpoint, const TrainingSet& data,
                          int epochs, const jsonl::json& passthrough) override;

private:
    LineSubprocess proc_;
    std::filesystem::path dataset_dir_;
    int counter_ = 0;
};

using BackendFactory =
    std::function<std::unique_ptr<prover::ProverBackend>(std::shared_ptr<Clock>)>;
using PolicyFactory =
    std::function<std::unique_ptr<prover::ProofPolicy>(const std::string& checkpoint)>;
using ClockFactory = std::function<std::shared_ptr<Clock>()>;

struct RunOptions {
    prover::ProofSearchConfig search;
    int workers = 1;
    // Empty disables the resume journal.
    std::filesystem::path journal_dir;
    jsonl::json trainer_passthrough = jsonl::json::object();
    // One clock per search job; defaults to a fresh steady clock.
    ClockFactory clock_factory;
};

// Searches every statement with the policy for `checkpoint`. Jobs are
// statically partitioned over workers by sorted problem id and merged back
// in sorted order, so the outcome does not depend on the worker count.
// Completed searches persist in `journal_path` (when non-empty) and are
// skipped on rerun.
std::vector<prover::ProofResult> search_statements(
    const std::vector<CandidateStatement>& statements, const BackendFactory& backend_factory,
    const PolicyFactory& policy_factory, const std::string& checkpoint,
    const RunOptions& options, const std::filesystem::path& journal_path);

// One loop turn: searches every corpus_A statement with the policy for the
// current checkpoint M_i, collects S_{i+1}, rebuilds the deduplicated
// training set from all S_j and the base corpus, and fine-tunes from M_0
// (never from M_i) for exactly one epoch. Trainer failure propagates,
// leaving the caller's state untouched; finished searches are resumable
// through the journal.
IterationState run_iteration(IterationState state, const BackendFactory& backend_factory,
                             const PolicyFactory& policy_factory, Trainer& trainer,
                             const RunOptions& options);

struct FilterOutcome {
    std::vector<CandidateStatement> accepted;
    std::vector<CandidateStatement> rejected;
    std::vector<CandidateStatement> errored;  // session errors after one retry
};

using StatementChecker = std::function<prover::CheckResult(const CandidateStatement&)>;

// Partitions candidates by backend verdict. A checker session error is
// retried once; still-failing candidates are reported separately, never
// counted as rejected.
FilterOutcome filter_syntactic(const std::vector<CandidateStatement>& candidates,
                               const StatementChecker& checker);

TrainingSet build_training_set(const IterationState& state, int upto_iteration);

// JSONL rows {statement, proof_steps, provenance}.
void write_training_set(const std::filesystem::path& path, const TrainingSet& set);
std::vector<ProofRecord> load_proof_corpus(const std::filesystem::path& path,
                                           const std::string& provenance);

jsonl::json manifest_json(const IterationState& state);

jsonl::json proof_result_to_json(const prover::ProofResult& result);
prover::ProofResult proof_result_from_json(const jsonl::json& j);

}  // namespace autoform::expert_iteration
