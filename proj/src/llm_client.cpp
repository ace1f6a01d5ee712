#include "autoform/llm_client.hpp"

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdlib>
#include <ctime>
#include <thread>

#include "httplib.h"

#include "autoform/digest.hpp"

namespace autoform::llm {

void check_request(const CompletionRequest& req) {
    if (req.max_tokens <= 0) {
        throw Error("max_tokens must be positive");
    }
    if (req.temperature < 0.0) {
        throw Error("temperature must be non-negative");
    }
    if (!(req.top_p > 0.0 && req.top_p <= 1.0)) {
        throw Error("top_p must be in (0, 1]");
    }
}

std::string canonical_request(const CompletionRequest& req) {
    jsonl::json j;
    j["model_id"] = req.model_id;
    j["prompt"] = req.prompt;
    j["max_tokens"] = req.max_tokens;
    j["temperature"] = req.temperature;
    j["top_p"] = req.top_p;
    j["stop"] = req.stop;  // order preserved; it is semantic
    return jsonl::dump_record(j);
}

std::string cache_key(const CompletionRequest& req) {
    check_request(req);
    return sha256_hex(canonical_request(req));
}

namespace {

std::string utc_now_iso8601() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

ScriptedBackend::ScriptedBackend(std::vector<Rule> rules) : rules_(std::move(rules)) {}

ScriptedBackend ScriptedBackend::from_file(const std::filesystem::path& path) {
    std::vector<Rule> rules;
    jsonl::for_each_record(path, [&](const jsonl::json& record, std::size_t line) {
        if (!record.contains("match") || !record.contains("completion")) {
            throw RecordError("scripted backend rule needs 'match' and 'completion'", line);
        }
        rules.push_back(Rule{record["match"].get<std::string>(),
                             record["completion"].get<std::string>()});
    });
    return ScriptedBackend(std::move(rules));
}

BackendResult ScriptedBackend::complete(const CompletionRequest& req) {
    ++calls_;
    for (const auto& rule : rules_) {
        if (req.prompt.find(rule.match) != std::string::npos) {
            BackendResult result;
            result.completion_text = rule.completion;
            result.metadata["backend"] = "scripted";
            result.metadata["matched"] = rule.match;
            return result;
        }
    }
    throw PermanentError("no scripted completion matches the prompt");
}

HttpBackend::HttpBackend(std::string endpoint_url, std::string model_hint, std::string auth_env)
    : endpoint_url_(std::move(endpoint_url)),
      model_hint_(std::move(model_hint)),
      auth_env_(std::move(auth_env)) {}

BackendResult HttpBackend::complete(const CompletionRequest& req) {
    // Split http://host:port/path into client target and request path.
    auto scheme_end = endpoint_url_.find("://");
    if (scheme_end == std::string::npos) {
        throw PermanentError("endpoint URL must include a scheme: " + endpoint_url_);
    }
    auto path_start = endpoint_url_.find('/', scheme_end + 3);
    std::string base = path_start == std::string::npos ? endpoint_url_
                                                       : endpoint_url_.substr(0, path_start);
    std::string path = path_start == std::string::npos ? "/" : endpoint_url_.substr(path_start);

    httplib::Client client(base);
    client.set_connection_timeout(10, 0);
    client.set_read_timeout(120, 0);

    httplib::Headers headers;
    if (!auth_env_.empty()) {
        if (const char* token = std::getenv(auth_env_.c_str())) {
            headers.emplace("Authorization", std::string("Bearer ") + token);
        }
    }

    jsonl::json body;
    body["model"] = req.model_id.empty() ? model_hint_ : req.model_id;
    body["prompt"] = req.prompt;
    body["max_tokens"] = req.max_tokens;
    body["temperature"] = req.temperature;
    body["top_p"] = req.top_p;
    body["stop"] = req.stop;

    auto res = client.Post(path, headers, body.dump(), "application/json");
    if (!res) {
        throw TransportError("connection to " + base + " failed");
    }
    if (res->status >= 500) {
        throw TransportError("backend returned status " + std::to_string(res->status));
    }
    if (res->status != 200) {
        throw PermanentError("backend rejected request with status " +
                             std::to_string(res->status) + ": " + res->body);
    }
    jsonl::json parsed;
    try {
        parsed = jsonl::json::parse(res->body);
    } catch (const jsonl::json::parse_error& ex) {
        throw TransportError(std::string("unparseable backend response: ") + ex.what());
    }
    if (!parsed.contains("completion") || !parsed["completion"].is_string()) {
        throw PermanentError("backend response lacks a 'completion' string");
    }
    BackendResult result;
    result.completion_text = parsed["completion"].get<std::string>();
    result.metadata = parsed.contains("metadata") ? parsed["metadata"] : jsonl::json::object();
    result.metadata["backend"] = "http";
    return result;
}

TokenBucket::TokenBucket(RateLimit limit, std::shared_ptr<Clock> clock,
                         std::function<void(std::int64_t)> sleep_ms)
    : limit_(limit),
      clock_(std::move(clock)),
      sleep_ms_(std::move(sleep_ms)),
      tokens_(limit.burst),
      last_refill_ms_(clock_->now_ms()) {}

void TokenBucket::acquire() {
    if (limit_.requests_per_second <= 0.0) {
        return;
    }
    while (true) {
        {
            std::lock_guard<std::mutex> lock(mu_);
            const std::int64_t now = clock_->now_ms();
            const double elapsed_s = static_cast<double>(now - last_refill_ms_) / 1000.0;
            tokens_ = std::min(limit_.burst, tokens_ + elapsed_s * limit_.requests_per_second);
            last_refill_ms_ = now;
            if (tokens_ >= 1.0) {
                tokens_ -= 1.0;
                return;
            }
        }
        const auto wait_ms =
            static_cast<std::int64_t>(1000.0 / limit_.requests_per_second / 4.0) + 1;
        sleep_ms_(wait_ms);
    }
}

CompletionClient::CompletionClient(ClientConfig config,
                                   std::shared_ptr<CompletionBackend> backend,
                                   std::shared_ptr<Clock> clock,
                                   std::function<void(std::int64_t)> sleep_ms)
    : config_(std::move(config)),
      backend_(std::move(backend)),
      clock_(std::move(clock)),
      sleep_ms_(sleep_ms ? std::move(sleep_ms)
                         : [](std::int64_t ms) {
                               std::this_thread::sleep_for(std::chrono::milliseconds(ms));
                           }),
      bucket_(config_.rate_limit, clock_, sleep_ms_) {
    if (config_.cache_dir.empty()) {
        throw Error("completion cache directory not configured");
    }
    std::filesystem::create_directories(config_.cache_dir);
}

std::filesystem::path CompletionClient::record_path(const std::string& digest) const {
    return config_.cache_dir / (digest + ".json");
}

bool CompletionClient::cached(const CompletionRequest& req) const {
    return std::filesystem::exists(record_path(cache_key(req)));
}

CompletionRecord CompletionClient::complete(const CompletionRequest& req) {
    const std::string digest = cache_key(req);

    // One writer per key; concurrent requests for the same key wait and then
    // see the cached record.
    std::shared_ptr<std::mutex> key_lock;
    {
        std::lock_guard<std::mutex> lock(key_mu_);
        auto& slot = key_locks_[digest];
        if (!slot) {
            slot = std::make_shared<std::mutex>();
        }
        key_lock = slot;
    }
    std::lock_guard<std::mutex> record_guard(*key_lock);

    const auto path = record_path(digest);
    if (std::filesystem::exists(path)) {
        const auto stored = jsonl::json::parse(jsonl::read_text_file(path));
        CompletionRecord record;
        record.request_digest = stored.at("request_digest").get<std::string>();
        record.completion_text = stored.at("completion").get<std::string>();
        record.backend_metadata = stored.value("metadata", jsonl::json::object());
        record.created_at = stored.value("created_at", "");
        return record;
    }

    if (config_.replay_only || !backend_) {
        throw OfflineMissError("uncached completion request " + digest +
                               (config_.replay_only ? " in replay-only mode" : " with no backend"));
    }
    return call_backend(req, digest);
}

CompletionRecord CompletionClient::call_backend(const CompletionRequest& req,
                                                const std::string& digest) {
    {
        std::unique_lock<std::mutex> lock(inflight_mu_);
        inflight_cv_.wait(lock, [&] { return inflight_ < config_.max_inflight; });
        ++inflight_;
        max_observed_inflight_ = std::max(max_observed_inflight_, inflight_);
    }
    struct InflightRelease {
        CompletionClient* self;
        ~InflightRelease() {
            {
                std::lock_guard<std::mutex> lock(self->inflight_mu_);
                --self->inflight_;
            }
            self->inflight_cv_.notify_one();
        }
    } release{this};

    BackendResult result;
    std::int64_t backoff = config_.backoff_base_ms;
    for (int attempt = 0;; ++attempt) {
        try {
            bucket_.acquire();
            ++backend_calls_;
            result = backend_->complete(req);
            break;
        } catch (const TransportError&) {
            if (attempt >= config_.max_retries) {
                throw;
            }
            sleep_ms_(backoff);
            backoff *= 2;
        }
    }

    CompletionRecord record;
    record.request_digest = digest;
    record.completion_text = result.completion_text;
    record.backend_metadata = result.metadata;
    record.created_at = utc_now_iso8601();

    jsonl::json stored;
    stored["request_digest"] = digest;
    stored["request"] = jsonl::json::parse(canonical_request(req));
    stored["completion"] = record.completion_text;
    stored["metadata"] = record.backend_metadata;
    stored["created_at"] = record.created_at;
    jsonl::write_file_atomic(record_path(digest), stored.dump(2) + "\n");
    return record;
}

}  // namespace autoform::llm
