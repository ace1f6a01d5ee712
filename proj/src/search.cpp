#include <algorithm>
#include <set>

#include "autoform/prover.hpp"

namespace autoform::prover {

void check_config(const ProofSearchConfig& config) {
    if (config.queue_limit == 0 || config.expansions_per_state == 0 ||
        config.max_expansions == 0) {
        throw Error("search limits must be positive");
    }
    if (config.step_timeout_s <= 0 || config.hammer_timeout_s <= 0 ||
        config.total_timeout_s <= 0) {
        throw Error("search timeouts must be positive");
    }
}

std::string to_string(ProofStatus status) {
    switch (status) {
        case ProofStatus::proved: return "proved";
        case ProofStatus::failed: return "failed";
        case ProofStatus::timeout: return "timeout";
        case ProofStatus::statement_rejected: return "statement_rejected";
    }
    return "failed";
}

std::vector<ScoredStep> ScriptedPolicy::propose(const std::string& goal,
                                                const std::string& /*last_step*/,
                                                std::size_t k) {
    auto it = table_.find(goal);
    if (it == table_.end()) {
        return {};
    }
    std::vector<ScoredStep> steps = it->second;
    if (steps.size() > k) {
        steps.resize(k);
    }
    return steps;
}

namespace {

struct Node {
    std::int64_t state_id = 0;
    std::string goal;
    int depth = 0;
    double score = 0.0;
    std::ptrdiff_t parent = -1;
    std::string step_from_parent;
};

// Orders the open set best-first: higher score wins, then lower state id.
struct QueueKey {
    double score;
    std::int64_t state_id;
    std::size_t node_index;

    bool operator<(const QueueKey& other) const {
        if (score != other.score) {
            return score > other.score;
        }
        return state_id < other.state_id;
    }
};

std::vector<std::string> path_steps(const std::vector<Node>& nodes, std::ptrdiff_t leaf) {
    std::vector<std::string> steps;
    for (std::ptrdiff_t i = leaf; i > 0; i = nodes[i].parent) {  // nodes[0] is the root
        steps.push_back(nodes[i].step_from_parent);
    }
    std::reverse(steps.begin(), steps.end());
    return steps;
}

}  // namespace

SearchOutcome best_first_search(ProverBackend& backend, ProofPolicy& policy,
                                const std::string& problem_id,
                                const std::string& statement_text,
                                const ProofSearchConfig& config, Clock& clock) {
    check_config(config);
    SearchOutcome outcome;
    outcome.result.problem_id = problem_id;
    const std::int64_t t0 = clock.now_ms();
    auto elapsed_s = [&] { return static_cast<double>(clock.now_ms() - t0) / 1000.0; };
    auto finish = [&](ProofStatus status) {
        outcome.result.status = status;
        outcome.result.wall_time_s = elapsed_s();
        return outcome;
    };

    const CheckResult check = backend.check_statement(statement_text);
    if (!check.accepted) {
        return finish(ProofStatus::statement_rejected);
    }

    std::vector<Node> nodes;
    nodes.push_back(Node{check.root_state_id, check.root_goal, 0, 0.0, -1, ""});
    std::set<QueueKey> open;
    open.insert(QueueKey{0.0, check.root_state_id, 0});

    while (!open.empty()) {
        if (outcome.result.expansions_used >= config.max_expansions) {
            return finish(ProofStatus::failed);
        }
        if (elapsed_s() > config.total_timeout_s) {
            return finish(ProofStatus::timeout);
        }

        const QueueKey best = *open.begin();
        open.erase(open.begin());
        const Node popped = nodes[best.node_index];
        outcome.trace.push_back(PoppedState{popped.state_id, popped.score});
        ++outcome.result.expansions_used;

        auto steps = policy.propose(popped.goal, popped.step_from_parent,
                                    config.expansions_per_state);
        if (steps.size() > config.expansions_per_state) {
            steps.resize(config.expansions_per_state);
        }
        for (const auto& scored : steps) {
            StepResult res;
            std::string recorded_step = scored.step;
            if (scored.step == kHammerToken) {
                res = backend.hammer(popped.state_id, config.hammer_timeout_s);
                if (!res.step_used.empty()) {
                    recorded_step = res.step_used;
                }
            } else {
                res = backend.apply_step(popped.state_id, scored.step, config.step_timeout_s);
            }
            if (!res.ok) {
                continue;  // malformed step or per-step timeout: child discarded
            }
            nodes.push_back(Node{res.new_state_id, res.goal, popped.depth + 1,
                                 popped.score + scored.score,
                                 static_cast<std::ptrdiff_t>(best.node_index), recorded_step});
            if (res.closed) {
                outcome.result.proof_steps =
                    path_steps(nodes, static_cast<std::ptrdiff_t>(nodes.size() - 1));
                return finish(ProofStatus::proved);
            }
            open.insert(QueueKey{nodes.back().score, res.new_state_id, nodes.size() - 1});
            if (open.size() > config.queue_limit) {
                open.erase(std::prev(open.end()));  // drop the worst entry
            }
        }
    }
    return finish(ProofStatus::failed);
}

bool replay_proof(ProverBackend& backend, const std::string& statement_text,
                  const std::vector<std::string>& steps) {
    if (steps.empty()) {
        throw Error("cannot replay an empty proof");
    }
    const CheckResult check = backend.check_statement(statement_text);
    if (!check.accepted) {
        throw Error("statement rejected by backend during replay");
    }
    std::int64_t state = check.root_state_id;
    for (std::size_t i = 0; i < steps.size(); ++i) {
        // Generous per-step bound: replay verifies logic, not latency.
        const StepResult res = backend.apply_step(state, steps[i], 3600.0);
        if (!res.ok) {
            return false;
        }
        if (res.closed) {
            return i + 1 == steps.size();
        }
        state = res.new_state_id;
    }
    return false;
}

}  // namespace autoform::prover
