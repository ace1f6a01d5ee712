#include "autoform/expert_iteration.hpp"

#include <algorithm>
#include <cctype>
#include <mutex>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "autoform/isabelle.hpp"

namespace autoform::expert_iteration {

std::string canonical_statement_key(const std::string& statement_text) {
    try {
        return isabelle::normalize_statement(isabelle::parse_statement(statement_text));
    } catch (const Error&) {
        std::string out;
        bool in_space = false;
        for (unsigned char c : statement_text) {
            if (std::isspace(c) != 0) {
                in_space = true;
                continue;
            }
            if (in_space && !out.empty()) {
                out.push_back(' ');
            }
            in_space = false;
            out.push_back(static_cast<char>(c));
        }
        return out;
    }
}

TrainingSet dedup_union(const std::vector<std::vector<ProofRecord>>& sources) {
    std::unordered_set<std::string> seen;
    std::vector<std::pair<std::string, ProofRecord>> keyed;
    for (const auto& source : sources) {
        for (const auto& record : source) {
            std::string key = canonical_statement_key(record.statement_text);
            if (!seen.insert(key).second) {
                continue;
            }
            ProofRecord canonical = record;
            canonical.statement_text = key;
            keyed.emplace_back(std::move(key), std::move(canonical));
        }
    }
    std::sort(keyed.begin(), keyed.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    TrainingSet set;
    set.records.reserve(keyed.size());
    for (auto& [key, record] : keyed) {
        set.records.push_back(std::move(record));
    }
    return set;
}

Rate success_rate(std::size_t proved, std::size_t attempted) {
    if (attempted == 0) {
        throw Error("success rate over zero attempts");
    }
    return Rate{proved, attempted};
}

std::string MockTrainer::fine_tune(const std::string& base_checkpoint, const TrainingSet& data,
                                   int epochs, const jsonl::json& /*passthrough*/) {
    if (fail_next_) {
        fail_next_ = false;
        throw Error("scripted trainer failure");
    }
    calls_.push_back(Call{base_checkpoint, data.records.size(), epochs});
    ++counter_;
    return prefix_ + std::to_string(counter_);
}

SubprocessTrainer::SubprocessTrainer(std::vector<std::string> argv,
                                     std::filesystem::path dataset_dir)
    : proc_(std::move(argv)), dataset_dir_(std::move(dataset_dir)) {
    std::filesystem::create_directories(dataset_dir_);
}

SubprocessTrainer::~SubprocessTrainer() {
    try {
        jsonl::json req;
        req["op"] = "close";
        proc_.write_line(jsonl::dump_record(req));
        std::string line;
        proc_.read_line(line);
    } catch (...) {
    }
    proc_.wait();
}

std::string SubprocessTrainer::fine_tune(const std::string& base_checkpoint,
                                         const TrainingSet& data, int epochs,
                                         const jsonl::json& passthrough) {
    ++counter_;
    const auto dataset_path =
        dataset_dir_ / ("training_set_" + std::to_string(counter_) + ".jsonl");
    write_training_set(dataset_path, data);

    jsonl::json req;
    req["op"] = "fine_tune";
    req["base_checkpoint"] = base_checkpoint;
    req["dataset_path"] = dataset_path.string();
    req["epochs"] = epochs;
    req["config"] = passthrough;
    try {
        proc_.write_line(jsonl::dump_record(req));
    } catch (const IoError& ex) {
        throw Error(std::string("trainer pipe failed: ") + ex.what());
    }
    std::string line;
    if (!proc_.read_line(line)) {
        throw Error("trainer closed its stream");
    }
    const auto reply = jsonl::json::parse(line);
    if (!reply.value("ok", false)) {
        throw Error("trainer failed: " + reply.value("error", "unknown"));
    }
    return reply.at("checkpoint").get<std::string>();
}

jsonl::json proof_result_to_json(const prover::ProofResult& result) {
    jsonl::json j;
    j["problem_id"] = result.problem_id;
    j["status"] = prover::to_string(result.status);
    j["proof_steps"] = result.proof_steps;
    j["expansions_used"] = result.expansions_used;
    j["wall_time_s"] = result.wall_time_s;
    return j;
}

prover::ProofResult proof_result_from_json(const jsonl::json& j) {
    prover::ProofResult result;
    result.problem_id = j.at("problem_id").get<std::string>();
    const std::string status = j.at("status").get<std::string>();
    if (status == "proved") {
        result.status = prover::ProofStatus::proved;
    } else if (status == "timeout") {
        result.status = prover::ProofStatus::timeout;
    } else if (status == "statement_rejected") {
        result.status = prover::ProofStatus::statement_rejected;
    } else {
        result.status = prover::ProofStatus::failed;
    }
    result.proof_steps = j.at("proof_steps").get<std::vector<std::string>>();
    result.expansions_used = j.at("expansions_used").get<std::size_t>();
    result.wall_time_s = j.at("wall_time_s").get<double>();
    return result;
}

std::vector<prover::ProofResult> search_statements(const std::vector<CandidateStatement>& jobs,
                                                   const BackendFactory& backend_factory,
                                                   const PolicyFactory& policy_factory,
                                                   const std::string& checkpoint,
                                                   const RunOptions& options,
                                                   const std::filesystem::path& journal_path) {
    // Sorted job order fixes the partition; the merge is by sorted id too,
    // so the worker count never shows in the result.
    std::vector<CandidateStatement> sorted_jobs = jobs;
    std::sort(sorted_jobs.begin(), sorted_jobs.end(),
              [](const auto& a, const auto& b) { return a.problem_id < b.problem_id; });

    std::unordered_map<std::string, prover::ProofResult> done;
    if (!journal_path.empty() && std::filesystem::exists(journal_path)) {
        jsonl::for_each_record(journal_path, [&](const jsonl::json& record, std::size_t) {
            auto result = proof_result_from_json(record);
            done[result.problem_id] = std::move(result);
        });
    }

    std::vector<prover::ProofResult> results(sorted_jobs.size());
    std::vector<char> pending(sorted_jobs.size(), 0);
    for (std::size_t i = 0; i < sorted_jobs.size(); ++i) {
        auto it = done.find(sorted_jobs[i].problem_id);
        if (it != done.end()) {
            results[i] = it->second;
        } else {
            pending[i] = 1;
        }
    }

    std::mutex journal_mu;
    auto run_job = [&](std::size_t index) {
        const auto& job = sorted_jobs[index];
        std::shared_ptr<Clock> clock =
            options.clock_factory ? options.clock_factory() : std::make_shared<SteadyClock>();
        auto backend = backend_factory(clock);
        auto policy = policy_factory(checkpoint);
        auto outcome = prover::best_first_search(*backend, *policy, job.problem_id,
                                                 job.statement_text, options.search, *clock);
        results[index] = outcome.result;
        if (!journal_path.empty()) {
            std::lock_guard<std::mutex> lock(journal_mu);
            jsonl::append_record(journal_path, proof_result_to_json(outcome.result));
        }
    };

    const int workers = std::max(1, options.workers);
    if (workers == 1) {
        for (std::size_t i = 0; i < sorted_jobs.size(); ++i) {
            if (pending[i]) {
                run_job(i);
            }
        }
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t i = static_cast<std::size_t>(w); i < sorted_jobs.size();
                     i += static_cast<std::size_t>(workers)) {
                    if (pending[i]) {
                        run_job(i);
                    }
                }
            });
        }
        for (auto& t : pool) {
            t.join();
        }
    }
    return results;
}

TrainingSet build_training_set(const IterationState& state, int upto_iteration) {
    std::unordered_map<std::string, const CandidateStatement*> by_id;
    for (const auto& c : state.corpus_A) {
        by_id[c.problem_id] = &c;
    }
    std::vector<std::vector<ProofRecord>> sources;
    for (int j = 1; j <= upto_iteration; ++j) {
        auto it = state.proved_by_iter.find(j);
        if (it == state.proved_by_iter.end()) {
            continue;
        }
        std::vector<ProofRecord> source;
        source.reserve(it->second.size());
        for (const auto& result : it->second) {
            auto stmt = by_id.find(result.problem_id);
            if (stmt == by_id.end()) {
                throw Error("proved problem '" + result.problem_id + "' is not in the corpus");
            }
            source.push_back(ProofRecord{stmt->second->statement_text, result.proof_steps,
                                         "iteration_" + std::to_string(j)});
        }
        sources.push_back(std::move(source));
    }
    sources.push_back(state.base_B);
    return dedup_union(sources);
}

IterationState run_iteration(IterationState state, const BackendFactory& backend_factory,
                             const PolicyFactory& policy_factory, Trainer& trainer,
                             const RunOptions& options) {
    if (state.corpus_A.empty()) {
        throw Error("expert iteration needs a non-empty statement corpus");
    }
    const int current = state.iteration;
    auto checkpoint_it = state.model_checkpoints.find(current);
    if (checkpoint_it == state.model_checkpoints.end()) {
        throw Error("no checkpoint registered for iteration " + std::to_string(current));
    }
    const int next = current + 1;

    std::filesystem::path journal;
    if (!options.journal_dir.empty()) {
        std::filesystem::create_directories(options.journal_dir);
        journal = options.journal_dir / ("iteration_" + std::to_string(next) + ".jsonl");
    }

    const auto results = search_statements(state.corpus_A, backend_factory, policy_factory,
                                           checkpoint_it->second, options, journal);

    std::vector<prover::ProofResult> proved;
    for (const auto& r : results) {
        if (r.status == prover::ProofStatus::proved) {
            proved.push_back(r);
        }
    }
    state.proved_by_iter[next] = proved;

    const TrainingSet training = build_training_set(state, next);

    // Count distinct proved statements across iterations (dedup by key).
    std::unordered_set<std::string> cumulative;
    std::unordered_map<std::string, const CandidateStatement*> by_id;
    for (const auto& c : state.corpus_A) {
        by_id[c.problem_id] = &c;
    }
    for (const auto& [iter, proofs] : state.proved_by_iter) {
        for (const auto& p : proofs) {
            cumulative.insert(canonical_statement_key(by_id.at(p.problem_id)->statement_text));
        }
    }

    // Fine-tuning always restarts from M_0; iterating from M_i instead
    // compounds the one-epoch schedule.
    const std::string new_checkpoint =
        trainer.fine_tune(state.model_checkpoints.at(0), training, 1,
                          options.trainer_passthrough);

    IterationMetrics metrics;
    metrics.iteration = next;
    metrics.attempted = state.corpus_A.size();
    metrics.proved = proved.size();
    metrics.success_rate = success_rate(proved.size(), state.corpus_A.size()).percent();
    metrics.cumulative_proved = cumulative.size();
    metrics.training_set_size = training.records.size();
    metrics.checkpoint = new_checkpoint;

    state.iteration = next;
    state.model_checkpoints[next] = new_checkpoint;
    state.metrics.push_back(metrics);
    return state;
}

FilterOutcome filter_syntactic(const std::vector<CandidateStatement>& candidates,
                               const StatementChecker& checker) {
    FilterOutcome outcome;
    for (const auto& candidate : candidates) {
        bool handled = false;
        for (int attempt = 0; attempt < 2 && !handled; ++attempt) {
            try {
                const auto res = checker(candidate);
                (res.accepted ? outcome.accepted : outcome.rejected).push_back(candidate);
                handled = true;
            } catch (const prover::BackendError&) {
                if (attempt == 1) {
                    outcome.errored.push_back(candidate);
                }
            }
        }
    }
    return outcome;
}

void write_training_set(const std::filesystem::path& path, const TrainingSet& set) {
    std::vector<jsonl::json> records;
    records.reserve(set.records.size());
    for (const auto& r : set.records) {
        jsonl::json j;
        j["statement"] = r.statement_text;
        j["proof_steps"] = r.proof_steps;
        j["provenance"] = r.provenance;
        records.push_back(std::move(j));
    }
    jsonl::write_file(path, records);
}

std::vector<ProofRecord> load_proof_corpus(const std::filesystem::path& path,
                                           const std::string& provenance) {
    std::vector<ProofRecord> records;
    jsonl::for_each_record(path, [&](const jsonl::json& j, std::size_t line) {
        if (!j.contains("statement")) {
            throw RecordError("proof corpus row needs 'statement'", line);
        }
        ProofRecord r;
        r.statement_text = j.at("statement").get<std::string>();
        if (j.contains("proof_steps")) {
            r.proof_steps = j.at("proof_steps").get<std::vector<std::string>>();
        }
        r.provenance = j.value("provenance", provenance);
        records.push_back(std::move(r));
    });
    return records;
}

jsonl::json manifest_json(const IterationState& state) {
    jsonl::json j;
    j["iteration"] = state.iteration;
    j["base_checkpoint"] = state.model_checkpoints.count(0) ? state.model_checkpoints.at(0) : "";
    j["corpus_size"] = state.corpus_A.size();
    j["base_corpus_size"] = state.base_B.size();
    jsonl::json filter;
    filter["total"] = state.filter.total;
    filter["accepted"] = state.filter.accepted;
    filter["rejected"] = state.filter.rejected;
    filter["errored"] = state.filter.errored;
    j["filter"] = filter;
    auto rows = jsonl::json::array();
    for (const auto& m : state.metrics) {
        jsonl::json row;
        row["iteration"] = m.iteration;
        row["attempted"] = m.attempted;
        row["proved"] = m.proved;
        row["success_rate"] = m.success_rate;
        row["cumulative_proved"] = m.cumulative_proved;
        row["training_set_size"] = m.training_set_size;
        row["checkpoint"] = m.checkpoint;
        rows.push_back(std::move(row));
    }
    j["iterations"] = rows;
    auto checkpoints = jsonl::json::object();
    for (const auto& [i, id] : state.model_checkpoints) {
        checkpoints[std::to_string(i)] = id;
    }
    j["checkpoints"] = checkpoints;
    return j;
}

}  // namespace autoform::expert_iteration
