#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "autoform/jsonl.hpp"
#include "autoform/prover.hpp"
#include "autoform/subprocess.hpp"

namespace autoform::prover {

// Wire protocol between the orchestrator and an external prover: one JSON
// object per line over the backend process's standard streams.
//
//   -> {"op":"init"}
//   <- {"ok":true,"protocol":1}
//   -> {"op":"check_statement","statement":S}
//   <- {"ok":true,"accepted":B,"diagnostics":[..],"state_id":I,"goal":G}
//   -> {"op":"apply_step","state_id":I,"step":T,"timeout_s":X}
//   <- {"ok":true,"new_state_id":J,"goal":G,"closed":B}
//      {"ok":false,"error":E}
//   -> {"op":"hammer","state_id":I,"timeout_s":X}
//   <- {"ok":true,"new_state_id":J,"goal":G,"closed":B,"step":T'}
//      {"ok":false,"error":E}
//   -> {"op":"close"}
//   <- {"ok":true}
//
// A reply with "session_error" set, an unparseable reply, or EOF is a
// session failure (BackendError), distinct from a rejected statement or a
// failed step. The schema is frozen by the conformance tests, which run the
// same script through the in-process mock and a subprocess serving it.
inline constexpr int kProtocolVersion = 1;

// Client side: drives an external prover process.
class SubprocessProverBackend final : public ProverBackend {
public:
    explicit SubprocessProverBackend(std::vector<std::string> argv);
    ~SubprocessProverBackend() override;

    CheckResult check_statement(const std::string& statement_text) override;
    StepResult apply_step(std::int64_t state_id, const std::string& step,
                          double timeout_s) override;
    StepResult hammer(std::int64_t state_id, double timeout_s) override;
    void close() override;

private:
    jsonl::json roundtrip(const jsonl::json& request);
    LineSubprocess proc_;
    bool closed_ = false;
};

// Server side: serves any ProverBackend over the protocol; returns on
// "close" or EOF. Scripted crashes surface as session_error replies.
void serve_backend(ProverBackend& backend, std::istream& in, std::ostream& out);

}  // namespace autoform::prover
