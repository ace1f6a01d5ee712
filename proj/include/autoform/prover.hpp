#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "autoform/clock.hpp"
#include "autoform/errors.hpp"

namespace autoform::prover {

// Reserved policy output: substitute the backend's hammer call for the step.
inline constexpr const char* kHammerToken = "<hammer>";

struct ProofState {
    std::int64_t state_id = 0;
    std::string goal_text;
    int depth = 0;
    double cumulative_score = 0.0;  // log-probability-like, <= 0
};

struct ProofSearchConfig {
    std::size_t queue_limit = 10000;
    std::size_t expansions_per_state = 4;
    std::size_t max_expansions = 128;
    double step_timeout_s = 10.0;
    double hammer_timeout_s = 30.0;
    double total_timeout_s = 300.0;
};

void check_config(const ProofSearchConfig& config);  // all fields positive

enum class ProofStatus { proved, failed, timeout, statement_rejected };

std::string to_string(ProofStatus status);

struct ProofResult {
    std::string problem_id;
    ProofStatus status = ProofStatus::failed;
    std::vector<std::string> proof_steps;
    std::size_t expansions_used = 0;
    double wall_time_s = 0.0;
};

// Session-level backend failure (crash, lost pipe); distinct from a
// statement being rejected or a step failing to apply.
struct BackendError : Error {
    using Error::Error;
};

struct CheckResult {
    bool accepted = false;
    std::vector<std::string> diagnostics;
    std::int64_t root_state_id = 0;
    std::string root_goal;
};

struct StepResult {
    bool ok = false;
    std::int64_t new_state_id = 0;
    std::string goal;
    bool closed = false;
    std::string error;      // set when !ok (bad step, step timeout, hammer miss)
    std::string step_used;  // hammer replacement text when the op was a hammer
};

// One prover session; strict request/response, single-threaded by contract.
// Parallelism happens across sessions.
class ProverBackend {
public:
    virtual ~ProverBackend() = default;
    virtual CheckResult check_statement(const std::string& statement_text) = 0;
    virtual StepResult apply_step(std::int64_t state_id, const std::string& step,
                                  double timeout_s) = 0;
    virtual StepResult hammer(std::int64_t state_id, double timeout_s) = 0;
    virtual void close() {}
};

struct ScoredStep {
    std::string step;
    double score = 0.0;  // log-probability-like, <= 0
};

// Step generator: scripted, LLM-backed, anything. The search only relies on
// determinism of (goal, last_step, k) -> steps for reproducible runs.
class ProofPolicy {
public:
    virtual ~ProofPolicy() = default;
    virtual std::vector<ScoredStep> propose(const std::string& goal, const std::string& last_step,
                                            std::size_t k) = 0;
};

class ScriptedPolicy final : public ProofPolicy {
public:
    using Table = std::map<std::string, std::vector<ScoredStep>>;
    explicit ScriptedPolicy(Table table) : table_(std::move(table)) {}
    std::vector<ScoredStep> propose(const std::string& goal, const std::string& last_step,
                                    std::size_t k) override;

private:
    Table table_;
};

struct PoppedState {
    std::int64_t state_id = 0;
    double cumulative_score = 0.0;
};

struct SearchOutcome {
    ProofResult result;
    std::vector<PoppedState> trace;  // pop order, for invariant checks
};

// Best-first search over backend states. The queue is ordered by cumulative
// score, ties broken by lower state id; a policy step equal to kHammerToken
// is replaced by the backend's hammer call bounded by hammer_timeout_s.
// Deterministic given a deterministic backend and policy.
SearchOutcome best_first_search(ProverBackend& backend, ProofPolicy& policy,
                                const std::string& problem_id,
                                const std::string& statement_text,
                                const ProofSearchConfig& config, Clock& clock);

// True iff applying the steps in order closes the goal. Throws Error when
// the statement is rejected; BackendError propagates.
bool replay_proof(ProverBackend& backend, const std::string& statement_text,
                  const std::vector<std::string>& steps);

}  // namespace autoform::prover
