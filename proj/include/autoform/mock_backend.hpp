#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>

#include "autoform/clock.hpp"
#include "autoform/jsonl.hpp"
#include "autoform/prover.hpp"

namespace autoform::prover {

// Scripted prover used as the test oracle for the backend protocol and the
// search. The script is a JSON object:
//
//   {
//     "default_accept": false,
//     "statements": {
//       "<statement text>": {"accept": true, "goal": "<root goal>",
//                             "crash": false, "diagnostics": ["..."]}
//     },
//     "transitions": {
//       "<goal>": {
//         "<step>": {"goal": "<new goal>", "closed": false,
//                     "duration_ms": 0, "error": "", "crash": false}
//       }
//     },
//     "hammer": {
//       "<goal>": {"step": "<replacement step>", "duration_ms": 0}
//     }
//   }
//
// A missing "goal" in a statement entry defaults to the statement text. A
// hammer entry applies the transition its replacement step names. Scripted
// durations advance the injected clock and trip the per-op timeout when
// they exceed it. State ids are assigned sequentially from 0 per session.
class MockBackend final : public ProverBackend {
public:
    MockBackend(jsonl::json script, std::shared_ptr<Clock> clock);
    static MockBackend from_file(const std::filesystem::path& path,
                                 std::shared_ptr<Clock> clock);

    CheckResult check_statement(const std::string& statement_text) override;
    StepResult apply_step(std::int64_t state_id, const std::string& step,
                          double timeout_s) override;
    StepResult hammer(std::int64_t state_id, double timeout_s) override;

    // (op, duration_ms) log for budget assertions and conformance tests.
    struct OpRecord {
        std::string op;
        std::int64_t duration_ms = 0;
    };
    const std::vector<OpRecord>& op_log() const { return op_log_; }

private:
    StepResult apply_transition(std::int64_t state_id, const std::string& step, double timeout_s,
                                const char* op_name, const std::string& step_used);
    const std::string& goal_of(std::int64_t state_id) const;

    jsonl::json script_;
    std::shared_ptr<Clock> clock_;
    std::map<std::int64_t, std::string> goals_;
    std::int64_t next_state_id_ = 0;
    std::vector<OpRecord> op_log_;
};

}  // namespace autoform::prover
