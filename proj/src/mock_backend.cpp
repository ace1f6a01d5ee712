#include "autoform/mock_backend.hpp"

namespace autoform::prover {

MockBackend::MockBackend(jsonl::json script, std::shared_ptr<Clock> clock)
    : script_(std::move(script)), clock_(std::move(clock)) {
    if (!script_.is_object()) {
        throw Error("mock backend script must be a JSON object");
    }
}

MockBackend MockBackend::from_file(const std::filesystem::path& path,
                                   std::shared_ptr<Clock> clock) {
    return MockBackend(jsonl::json::parse(jsonl::read_text_file(path)), std::move(clock));
}

const std::string& MockBackend::goal_of(std::int64_t state_id) const {
    auto it = goals_.find(state_id);
    if (it == goals_.end()) {
        throw BackendError("unknown state id " + std::to_string(state_id));
    }
    return it->second;
}

CheckResult MockBackend::check_statement(const std::string& statement_text) {
    op_log_.push_back({"check_statement", 0});
    CheckResult result;
    const auto& statements = script_.value("statements", jsonl::json::object());
    jsonl::json entry;
    if (statements.contains(statement_text)) {
        entry = statements.at(statement_text);
    } else {
        entry["accept"] = script_.value("default_accept", false);
        if (!entry["accept"].get<bool>()) {
            result.diagnostics.push_back("statement not in script");
        }
    }
    if (entry.value("crash", false)) {
        throw BackendError("scripted crash in check_statement");
    }
    result.accepted = entry.value("accept", false);
    for (const auto& d : entry.value("diagnostics", jsonl::json::array())) {
        result.diagnostics.push_back(d.get<std::string>());
    }
    if (result.accepted) {
        goals_.clear();
        next_state_id_ = 0;
        result.root_state_id = next_state_id_++;
        result.root_goal = entry.value("goal", statement_text);
        goals_[result.root_state_id] = result.root_goal;
    }
    return result;
}

StepResult MockBackend::apply_transition(std::int64_t state_id, const std::string& step,
                                         double timeout_s, const char* op_name,
                                         const std::string& step_used) {
    const std::string& goal = goal_of(state_id);
    StepResult result;
    result.step_used = step_used;

    const auto& transitions = script_.value("transitions", jsonl::json::object());
    if (!transitions.contains(goal) || !transitions.at(goal).contains(step)) {
        op_log_.push_back({op_name, 0});
        result.error = "no transition for step";
        return result;
    }
    const auto& entry = transitions.at(goal).at(step);
    if (entry.value("crash", false)) {
        throw BackendError("scripted crash in " + std::string(op_name));
    }
    const std::int64_t duration_ms = entry.value("duration_ms", 0);
    if (auto* manual = dynamic_cast<ManualClock*>(clock_.get())) {
        manual->advance_ms(duration_ms);
    }
    if (static_cast<double>(duration_ms) > timeout_s * 1000.0) {
        op_log_.push_back({op_name, static_cast<std::int64_t>(timeout_s * 1000.0)});
        result.error = "step timeout";
        return result;
    }
    op_log_.push_back({op_name, duration_ms});
    const std::string scripted_error = entry.value("error", "");
    if (!scripted_error.empty()) {
        result.error = scripted_error;
        return result;
    }
    result.ok = true;
    result.closed = entry.value("closed", false);
    result.goal = entry.value("goal", "");
    if (!result.closed) {
        result.new_state_id = next_state_id_++;
        goals_[result.new_state_id] = result.goal;
    }
    return result;
}

StepResult MockBackend::apply_step(std::int64_t state_id, const std::string& step,
                                   double timeout_s) {
    return apply_transition(state_id, step, timeout_s, "apply_step", "");
}

StepResult MockBackend::hammer(std::int64_t state_id, double timeout_s) {
    const std::string& goal = goal_of(state_id);
    const auto& hammers = script_.value("hammer", jsonl::json::object());
    if (!hammers.contains(goal)) {
        op_log_.push_back({"hammer", 0});
        StepResult result;
        result.error = "hammer found nothing";
        return result;
    }
    const auto& entry = hammers.at(goal);
    const std::int64_t duration_ms = entry.value("duration_ms", 0);
    if (auto* manual = dynamic_cast<ManualClock*>(clock_.get())) {
        manual->advance_ms(duration_ms);
    }
    if (static_cast<double>(duration_ms) > timeout_s * 1000.0) {
        op_log_.push_back({"hammer", static_cast<std::int64_t>(timeout_s * 1000.0)});
        StepResult result;
        result.error = "hammer timeout";
        return result;
    }
    const std::string replacement = entry.value("step", "");
    if (replacement.empty()) {
        throw Error("hammer script entry lacks a replacement step");
    }
    // The replacement step must itself be a scripted transition so that a
    // recorded proof replays through apply_step.
    StepResult result = apply_transition(state_id, replacement, timeout_s, "hammer", replacement);
    // transition duration recorded above; hammer duration logged separately
    op_log_.back().duration_ms += duration_ms;
    return result;
}

}  // namespace autoform::prover
