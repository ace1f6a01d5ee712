#pragma once

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "autoform/clock.hpp"
#include "autoform/errors.hpp"
#include "autoform/jsonl.hpp"

namespace autoform::llm {

struct CompletionRequest {
    std::string model_id;
    std::string prompt;
    int max_tokens = 512;
    double temperature = 0.0;  // greedy by default
    double top_p = 1.0;
    std::vector<std::string> stop;
};

// Throws on violated invariants (max_tokens > 0, temperature >= 0,
// 0 < top_p <= 1).
void check_request(const CompletionRequest& req);

// Canonical JSON serialization of the request; stop order is semantic.
std::string canonical_request(const CompletionRequest& req);

// SHA-256 of canonical_request: stable across runs and platforms and
// sensitive to every field.
std::string cache_key(const CompletionRequest& req);

struct CompletionRecord {
    std::string request_digest;
    std::string completion_text;
    jsonl::json backend_metadata;  // opaque
    std::string created_at;        // ISO-8601 UTC
};

// Retried with exponential backoff.
struct TransportError : Error {
    using Error::Error;
};
// Backend rejected the request; never retried.
struct PermanentError : Error {
    using Error::Error;
};
// Replay-only (or backend-less) run hit an uncached request.
struct OfflineMissError : Error {
    using Error::Error;
};

struct BackendResult {
    std::string completion_text;
    jsonl::json metadata = jsonl::json::object();
};

class CompletionBackend {
public:
    virtual ~CompletionBackend() = default;
    virtual BackendResult complete(const CompletionRequest& req) = 0;
    virtual std::string name() const = 0;
};

// Deterministic stand-in for a real model: ordered substring rules matched
// against the prompt, first hit wins.
class ScriptedBackend final : public CompletionBackend {
public:
    struct Rule {
        std::string match;  // substring of the prompt
        std::string completion;
    };

    explicit ScriptedBackend(std::vector<Rule> rules);
    // JSONL records {"match": ..., "completion": ...}.
    static ScriptedBackend from_file(const std::filesystem::path& path);

    BackendResult complete(const CompletionRequest& req) override;
    std::string name() const override { return "scripted"; }

    int calls() const { return calls_; }

private:
    std::vector<Rule> rules_;
    std::atomic<int> calls_{0};
};

// HTTP adapter: POST {model, prompt, max_tokens, temperature, top_p, stop}
// to `endpoint`, expecting {"completion": ...}. 4xx is permanent, 5xx and
// connection failures are transient. The auth token is read from the
// environment variable named in `auth_env` (never from config files).
class HttpBackend final : public CompletionBackend {
public:
    HttpBackend(std::string endpoint_url, std::string model_hint, std::string auth_env);
    BackendResult complete(const CompletionRequest& req) override;
    std::string name() const override { return "http"; }

private:
    std::string endpoint_url_;
    std::string model_hint_;
    std::string auth_env_;
};

struct RateLimit {
    double requests_per_second = 0.0;  // 0 disables limiting
    double burst = 1.0;
};

// Token bucket over an injectable clock; acquire() blocks via the sleep
// hook until a token is available.
class TokenBucket {
public:
    TokenBucket(RateLimit limit, std::shared_ptr<Clock> clock,
                std::function<void(std::int64_t)> sleep_ms);
    void acquire();

private:
    RateLimit limit_;
    std::shared_ptr<Clock> clock_;
    std::function<void(std::int64_t)> sleep_ms_;
    std::mutex mu_;
    double tokens_;
    std::int64_t last_refill_ms_;
};

struct ClientConfig {
    std::filesystem::path cache_dir;
    bool replay_only = false;
    int max_retries = 3;
    std::int64_t backoff_base_ms = 100;
    int max_inflight = 4;
    RateLimit rate_limit;
};

// Deterministic caching front end. Hits are served from disk without
// touching the backend, so any run can be replayed bit-identically offline.
class CompletionClient {
public:
    CompletionClient(ClientConfig config, std::shared_ptr<CompletionBackend> backend,
                     std::shared_ptr<Clock> clock = std::make_shared<SteadyClock>(),
                     std::function<void(std::int64_t)> sleep_ms = {});

    CompletionRecord complete(const CompletionRequest& req);

    bool cached(const CompletionRequest& req) const;
    int backend_calls() const { return backend_calls_; }
    int max_observed_inflight() const { return max_observed_inflight_; }

private:
    std::filesystem::path record_path(const std::string& digest) const;
    CompletionRecord call_backend(const CompletionRequest& req, const std::string& digest);

    ClientConfig config_;
    std::shared_ptr<CompletionBackend> backend_;
    std::shared_ptr<Clock> clock_;
    std::function<void(std::int64_t)> sleep_ms_;
    TokenBucket bucket_;

    std::mutex key_mu_;
    std::map<std::string, std::shared_ptr<std::mutex>> key_locks_;

    std::mutex inflight_mu_;
    std::condition_variable inflight_cv_;
    int inflight_ = 0;
    int max_observed_inflight_ = 0;
    std::atomic<int> backend_calls_{0};
};

}  // namespace autoform::llm
