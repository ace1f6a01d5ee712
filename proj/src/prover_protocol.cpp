#include "autoform/prover_protocol.hpp"

#include <istream>
#include <ostream>

namespace autoform::prover {

SubprocessProverBackend::SubprocessProverBackend(std::vector<std::string> argv)
    : proc_(std::move(argv)) {
    jsonl::json init;
    init["op"] = "init";
    const auto reply = roundtrip(init);
    if (reply.value("protocol", 0) != kProtocolVersion) {
        throw BackendError("backend speaks protocol " +
                           std::to_string(reply.value("protocol", 0)) + ", expected " +
                           std::to_string(kProtocolVersion));
    }
}

SubprocessProverBackend::~SubprocessProverBackend() {
    try {
        close();
    } catch (...) {
        // the destructor must not throw; wait() reaps regardless
    }
}

jsonl::json SubprocessProverBackend::roundtrip(const jsonl::json& request) {
    try {
        proc_.write_line(jsonl::dump_record(request));
    } catch (const IoError& ex) {
        throw BackendError(std::string("backend pipe failed: ") + ex.what());
    }
    std::string line;
    if (!proc_.read_line(line)) {
        throw BackendError("backend closed its stream mid-session");
    }
    jsonl::json reply;
    try {
        reply = jsonl::json::parse(line);
    } catch (const jsonl::json::parse_error& ex) {
        throw BackendError(std::string("unparseable backend reply: ") + ex.what());
    }
    if (reply.value("session_error", false)) {
        throw BackendError("backend session error: " + reply.value("error", "unknown"));
    }
    return reply;
}

CheckResult SubprocessProverBackend::check_statement(const std::string& statement_text) {
    jsonl::json req;
    req["op"] = "check_statement";
    req["statement"] = statement_text;
    const auto reply = roundtrip(req);
    CheckResult result;
    result.accepted = reply.value("accepted", false);
    for (const auto& d : reply.value("diagnostics", jsonl::json::array())) {
        result.diagnostics.push_back(d.get<std::string>());
    }
    result.root_state_id = reply.value("state_id", 0);
    result.root_goal = reply.value("goal", "");
    return result;
}

StepResult SubprocessProverBackend::apply_step(std::int64_t state_id, const std::string& step,
                                               double timeout_s) {
    jsonl::json req;
    req["op"] = "apply_step";
    req["state_id"] = state_id;
    req["step"] = step;
    req["timeout_s"] = timeout_s;
    const auto reply = roundtrip(req);
    StepResult result;
    result.ok = reply.value("ok", false);
    result.new_state_id = reply.value("new_state_id", 0);
    result.goal = reply.value("goal", "");
    result.closed = reply.value("closed", false);
    result.error = reply.value("error", "");
    return result;
}

StepResult SubprocessProverBackend::hammer(std::int64_t state_id, double timeout_s) {
    jsonl::json req;
    req["op"] = "hammer";
    req["state_id"] = state_id;
    req["timeout_s"] = timeout_s;
    const auto reply = roundtrip(req);
    StepResult result;
    result.ok = reply.value("ok", false);
    result.new_state_id = reply.value("new_state_id", 0);
    result.goal = reply.value("goal", "");
    result.closed = reply.value("closed", false);
    result.error = reply.value("error", "");
    result.step_used = reply.value("step", "");
    return result;
}

void SubprocessProverBackend::close() {
    if (closed_) {
        return;
    }
    closed_ = true;
    jsonl::json req;
    req["op"] = "close";
    try {
        proc_.write_line(jsonl::dump_record(req));
        std::string line;
        proc_.read_line(line);
    } catch (const IoError&) {
        // already gone; wait() below still reaps
    }
    proc_.wait();
}

void serve_backend(ProverBackend& backend, std::istream& in, std::ostream& out) {
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        jsonl::json reply;
        try {
            const auto req = jsonl::json::parse(line);
            const std::string op = req.value("op", "");
            if (op == "init") {
                reply["ok"] = true;
                reply["protocol"] = kProtocolVersion;
            } else if (op == "check_statement") {
                const auto res = backend.check_statement(req.at("statement").get<std::string>());
                reply["ok"] = true;
                reply["accepted"] = res.accepted;
                reply["diagnostics"] = res.diagnostics;
                reply["state_id"] = res.root_state_id;
                reply["goal"] = res.root_goal;
            } else if (op == "apply_step") {
                const auto res = backend.apply_step(req.at("state_id").get<std::int64_t>(),
                                                    req.at("step").get<std::string>(),
                                                    req.value("timeout_s", 3600.0));
                reply["ok"] = res.ok;
                if (res.ok) {
                    reply["new_state_id"] = res.new_state_id;
                    reply["goal"] = res.goal;
                    reply["closed"] = res.closed;
                } else {
                    reply["error"] = res.error;
                }
            } else if (op == "hammer") {
                const auto res = backend.hammer(req.at("state_id").get<std::int64_t>(),
                                                req.value("timeout_s", 30.0));
                reply["ok"] = res.ok;
                if (res.ok) {
                    reply["new_state_id"] = res.new_state_id;
                    reply["goal"] = res.goal;
                    reply["closed"] = res.closed;
                    reply["step"] = res.step_used;
                } else {
                    reply["error"] = res.error;
                }
            } else if (op == "close") {
                reply["ok"] = true;
                out << jsonl::dump_record(reply) << "\n" << std::flush;
                return;
            } else {
                reply["ok"] = false;
                reply["error"] = "unknown op '" + op + "'";
            }
        } catch (const BackendError& ex) {
            reply = jsonl::json::object();
            reply["ok"] = false;
            reply["error"] = ex.what();
            reply["session_error"] = true;
        } catch (const std::exception& ex) {
            reply = jsonl::json::object();
            reply["ok"] = false;
            reply["error"] = ex.what();
        }
        out << jsonl::dump_record(reply) << "\n" << std::flush;
    }
}

}  // namespace autoform::prover
