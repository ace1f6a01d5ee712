// Pipeline driver: ingest, formalize, informalize, validate, bleu, label,
// search, iterate, report. Exit codes: 0 success, 1 per-item failures,
// 2 configuration or backend failure.

#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "autoform/bleu.hpp"
#include "autoform/corpus.hpp"
#include "autoform/digest.hpp"
#include "autoform/evaluation.hpp"
#include "autoform/expert_iteration.hpp"
#include "autoform/isabelle.hpp"
#include "autoform/jsonl.hpp"
#include "autoform/llm_client.hpp"
#include "autoform/metrics.hpp"
#include "autoform/mock_backend.hpp"
#include "autoform/prompting.hpp"
#include "autoform/prover.hpp"
#include "autoform/prover_protocol.hpp"
#include "autoform/reports.hpp"

namespace {

using namespace autoform;
using jsonl::json;

constexpr int kOk = 0;
constexpr int kPartial = 1;
constexpr int kConfigError = 2;

isabelle::Lexicon load_lexicon(const std::string& path) {
    return path.empty() ? isabelle::Lexicon::builtin() : isabelle::Lexicon::load(path);
}

struct CompletionOptions {
    std::string backend = "none";  // none | scripted | http
    std::string script;
    std::string endpoint;
    std::string auth_env;
    std::string model_id = "mock-translator";
    std::string cache_dir;
    bool replay_only = false;
    int max_tokens = 512;

    void attach(CLI::App* cmd) {
        cmd->add_option("--backend", backend, "completion backend: none|scripted|http")
            ->check(CLI::IsMember({"none", "scripted", "http"}));
        cmd->add_option("--backend-script", script, "rule file for the scripted backend");
        cmd->add_option("--endpoint", endpoint, "HTTP backend endpoint URL");
        cmd->add_option("--auth-env", auth_env, "env var holding the HTTP bearer token");
        cmd->add_option("--model-id", model_id, "model identifier recorded in requests");
        cmd->add_option("--cache-dir", cache_dir, "completion cache directory")->required();
        cmd->add_flag("--replay-only", replay_only, "serve from cache only, no backend calls");
        cmd->add_option("--max-tokens", max_tokens, "completion token budget");
    }

    llm::CompletionClient make_client() const {
        std::shared_ptr<llm::CompletionBackend> be;
        if (!replay_only) {
            if (backend == "scripted") {
                if (script.empty()) {
                    throw Error("--backend scripted needs --backend-script");
                }
                be = std::make_shared<llm::ScriptedBackend>(llm::ScriptedBackend::from_file(script));
            } else if (backend == "http") {
                if (endpoint.empty()) {
                    throw Error("--backend http needs --endpoint");
                }
                be = std::make_shared<llm::HttpBackend>(endpoint, model_id, auth_env);
            }
        }
        llm::ClientConfig config;
        config.cache_dir = cache_dir;
        config.replay_only = replay_only;
        return llm::CompletionClient(config, be);
    }
};

struct ProverOptions {
    std::string type = "mock";  // mock | subprocess
    std::string script;
    std::vector<std::string> command;

    void attach(CLI::App* cmd) {
        cmd->add_option("--prover", type, "prover backend: mock|subprocess")
            ->check(CLI::IsMember({"mock", "subprocess"}));
        cmd->add_option("--prover-script", script, "mock prover script (JSON)");
        cmd->add_option("--prover-cmd", command, "subprocess prover command line");
    }

    expert_iteration::BackendFactory make_factory() const {
        if (type == "mock") {
            if (script.empty()) {
                throw Error("--prover mock needs --prover-script");
            }
            const auto script_json = json::parse(jsonl::read_text_file(script));
            return [script_json](std::shared_ptr<Clock> clock) {
                return std::unique_ptr<prover::ProverBackend>(
                    new prover::MockBackend(script_json, std::move(clock)));
            };
        }
        if (command.empty()) {
            throw Error("--prover subprocess needs --prover-cmd");
        }
        auto argv = command;
        return [argv](std::shared_ptr<Clock>) {
            return std::unique_ptr<prover::ProverBackend>(
                new prover::SubprocessProverBackend(argv));
        };
    }
};

// Policy script: {"checkpoints": {"M0": {"<goal>": [{"step":..,"score":..}]}}}
expert_iteration::PolicyFactory make_policy_factory(const std::string& path) {
    if (path.empty()) {
        throw Error("a policy script is required (--policy-script)");
    }
    const auto script = json::parse(jsonl::read_text_file(path));
    const auto checkpoints = script.value("checkpoints", json::object());
    return [checkpoints](const std::string& checkpoint) {
        prover::ScriptedPolicy::Table table;
        if (checkpoints.contains(checkpoint)) {
            for (const auto& [goal, steps] : checkpoints.at(checkpoint).items()) {
                std::vector<prover::ScoredStep> scored;
                for (const auto& s : steps) {
                    scored.push_back(
                        prover::ScoredStep{s.at("step").get<std::string>(),
                                           s.value("score", -1.0)});
                }
                table[goal] = std::move(scored);
            }
        }
        return std::unique_ptr<prover::ProofPolicy>(new prover::ScriptedPolicy(std::move(table)));
    };
}

struct SearchBudget {
    std::size_t queue_limit = 10000;
    std::size_t expansions_per_state = 4;
    std::size_t max_expansions = 128;
    double step_timeout = 10.0;
    double hammer_timeout = 30.0;
    double total_timeout = 300.0;

    void attach(CLI::App* cmd) {
        cmd->add_option("--queue-limit", queue_limit);
        cmd->add_option("--expansions-per-state", expansions_per_state);
        cmd->add_option("--max-expansions", max_expansions);
        cmd->add_option("--step-timeout", step_timeout);
        cmd->add_option("--hammer-timeout", hammer_timeout);
        cmd->add_option("--total-timeout", total_timeout);
    }

    prover::ProofSearchConfig to_config() const {
        prover::ProofSearchConfig config;
        config.queue_limit = queue_limit;
        config.expansions_per_state = expansions_per_state;
        config.max_expansions = max_expansions;
        config.step_timeout_s = step_timeout;
        config.hammer_timeout_s = hammer_timeout;
        config.total_timeout_s = total_timeout;
        return config;
    }
};

std::vector<expert_iteration::CandidateStatement> load_statements(const std::string& path) {
    std::vector<expert_iteration::CandidateStatement> out;
    jsonl::for_each_record(path, [&](const json& record, std::size_t line) {
        if (!record.contains("id") || !record.contains("isabelle")) {
            throw RecordError("statement row needs 'id' and 'isabelle'", line);
        }
        out.push_back(expert_iteration::CandidateStatement{
            record.at("id").get<std::string>(), record.at("isabelle").get<std::string>()});
    });
    return out;
}

json diagnostics_json(const isabelle::ValidationReport& report) {
    auto arr = json::array();
    for (const auto& d : report.diagnostics) {
        json j;
        j["severity"] = d.severity == isabelle::Severity::error ? "error" : "warning";
        j["message"] = d.message;
        j["offset"] = d.offset;
        arr.push_back(std::move(j));
    }
    return arr;
}

// ---------------------------------------------------------------- ingest

int cmd_ingest(const std::string& problems_path, const std::string& out_path,
               const std::string& ground_truth_path) {
    const auto problems = corpus::load_problems(problems_path);
    corpus::write_problems(out_path, problems);
    std::cout << "ingested " << problems.size() << " problem(s) -> " << out_path << "\n";
    if (!ground_truth_path.empty()) {
        const auto gt = corpus::load_ground_truth(ground_truth_path);
        std::cout << "ground truth: " << gt.size() << " formalization(s), all parse\n";
    }
    return kOk;
}

// ------------------------------------------------------------- formalize

struct BankSet {
    std::string single_bank;
    std::string banks_dir;

    void attach(CLI::App* cmd) {
        cmd->add_option("--bank", single_bank, "exemplar bank used for every problem");
        cmd->add_option("--banks-dir", banks_dir,
                        "directory of per-subject banks (<subject>.jsonl)");
    }

    prompting::ExemplarBank bank_for(corpus::Subject subject,
                                     std::map<corpus::Subject, prompting::ExemplarBank>& cache) const {
        if (!single_bank.empty()) {
            auto it = cache.find(corpus::Subject::other);
            if (it == cache.end()) {
                it = cache.emplace(corpus::Subject::other, prompting::load_bank(single_bank)).first;
            }
            return it->second;
        }
        const auto effective = prompting::bank_subject_for(subject);
        auto it = cache.find(effective);
        if (it == cache.end()) {
            const auto path = std::filesystem::path(banks_dir) /
                              (corpus::to_string(effective) + ".jsonl");
            it = cache.emplace(effective, prompting::load_bank(path)).first;
        }
        return it->second;
    }
};

int cmd_formalize(const std::string& problems_path, const BankSet& banks,
                  const CompletionOptions& completion, const std::string& subject_filter,
                  const std::string& lexicon_path, const std::string& out_path) {
    if (banks.single_bank.empty() && banks.banks_dir.empty()) {
        throw Error("formalize needs --bank or --banks-dir");
    }
    const auto lexicon = load_lexicon(lexicon_path);
    auto problems = corpus::load_problems(problems_path);
    if (!subject_filter.empty()) {
        const auto want = corpus::subject_from_string(subject_filter);
        std::erase_if(problems, [&](const corpus::Problem& p) { return p.subject != want; });
    }

    auto client = completion.make_client();
    const auto stops = prompting::default_stop_sequences();
    std::map<corpus::Subject, prompting::ExemplarBank> bank_cache;

    std::vector<json> records;
    bool partial = false;
    for (const auto& problem : problems) {
        json record;
        record["id"] = problem.id;
        record["subject"] = corpus::to_string(problem.subject);
        record["model_id"] = completion.model_id;
        try {
            prompting::PromptSpec spec;
            spec.direction = prompting::Direction::formalize;
            spec.bank = banks.bank_for(problem.subject, bank_cache);
            spec.query = corpus::append_answer(problem);
            spec.stop_sequences = stops;
            const std::string prompt = prompting::build_formalization_prompt(spec);
            record["prompt_sha256"] = sha256_hex(prompt);

            llm::CompletionRequest req;
            req.model_id = completion.model_id;
            req.prompt = prompt;
            req.max_tokens = completion.max_tokens;
            req.stop = stops;
            const auto completion_record = client.complete(req);
            const std::string extracted =
                prompting::extract_completion(completion_record.completion_text, stops);
            record["isabelle"] = extracted;

            bool parse_ok = true;
            try {
                isabelle::parse_statement(extracted);
            } catch (const Error&) {
                parse_ok = false;
            }
            const auto report = isabelle::validate_text(extracted, lexicon);
            record["parse_ok"] = parse_ok;
            record["wellformed"] = report.wellformed;
            record["diagnostics"] = diagnostics_json(report);
        } catch (const llm::OfflineMissError& ex) {
            std::cerr << "offline miss: " << ex.what() << "\n";
            return kConfigError;
        } catch (const Error& ex) {
            record["error"] = ex.what();
            partial = true;
        }
        records.push_back(std::move(record));
    }
    jsonl::write_file(out_path, records);

    std::size_t wellformed = 0;
    for (const auto& r : records) {
        if (r.value("wellformed", false)) {
            ++wellformed;
        }
    }
    std::cout << "formalized " << records.size() << " problem(s), " << wellformed
              << " wellformed -> " << out_path << "\n";
    return partial ? kPartial : kOk;
}

// ----------------------------------------------------------- informalize

int cmd_informalize(const std::string& statements_path, const std::string& bank_path,
                    const CompletionOptions& completion, const std::string& out_path) {
    const auto bank = prompting::load_bank(bank_path);
    const auto statements = load_statements(statements_path);
    auto client = completion.make_client();
    const auto stops = prompting::default_stop_sequences();

    std::vector<json> records;
    bool partial = false;
    for (const auto& stmt : statements) {
        json record;
        record["id"] = stmt.problem_id;
        record["isabelle"] = stmt.statement_text;
        try {
            prompting::PromptSpec spec;
            spec.direction = prompting::Direction::informalize;
            spec.bank = bank;
            spec.query = stmt.statement_text;
            spec.stop_sequences = stops;
            const auto prompt = prompting::build_informalization_prompt(spec);
            record["prompt_sha256"] = sha256_hex(prompt.text);
            record["warnings"] = prompt.warnings;

            llm::CompletionRequest req;
            req.model_id = completion.model_id;
            req.prompt = prompt.text;
            req.max_tokens = completion.max_tokens;
            req.stop = stops;
            const auto completion_record = client.complete(req);
            record["natural"] =
                prompting::extract_completion(completion_record.completion_text, stops);
        } catch (const llm::OfflineMissError& ex) {
            std::cerr << "offline miss: " << ex.what() << "\n";
            return kConfigError;
        } catch (const Error& ex) {
            record["error"] = ex.what();
            partial = true;
        }
        records.push_back(std::move(record));
    }
    jsonl::write_file(out_path, records);
    std::cout << "informalized " << records.size() << " statement(s) -> " << out_path << "\n";
    return partial ? kPartial : kOk;
}

// -------------------------------------------------------------- validate

int cmd_validate(const std::string& formalizations_path, const std::string& lexicon_path,
                 const ProverOptions& prover_opts, bool tier2, const std::string& out_path) {
    const auto lexicon = load_lexicon(lexicon_path);
    const auto rows = jsonl::read_file(formalizations_path);

    std::unique_ptr<prover::ProverBackend> backend;
    if (tier2) {
        backend = prover_opts.make_factory()(std::make_shared<SteadyClock>());
    }

    std::vector<json> records;
    std::size_t tier1_ok = 0;
    std::size_t tier2_ok = 0;
    for (const auto& row : rows) {
        const std::string id = row.value("id", "");
        const std::string text = row.value("isabelle", "");
        json record;
        record["id"] = id;
        const auto report = isabelle::validate_text(text, lexicon);
        record["wellformed"] = report.wellformed;
        record["diagnostics"] = diagnostics_json(report);
        if (report.wellformed) {
            ++tier1_ok;
        }
        if (backend) {
            const auto check = backend->check_statement(text);
            record["prover_accepted"] = check.accepted;
            if (check.accepted) {
                ++tier2_ok;
            }
        }
        records.push_back(std::move(record));
    }
    jsonl::write_file(out_path, records);
    std::cout << "tier-1 wellformed: " << tier1_ok << "/" << records.size() << "\n";
    if (backend) {
        std::cout << "tier-2 accepted:  " << tier2_ok << "/" << records.size() << "\n";
    }
    return kOk;
}

// ------------------------------------------------------------------ bleu

int cmd_bleu(const std::string& formalizations_path, const std::string& ground_truth_path,
             const std::string& out_dir, int max_n, const std::string& variant) {
    const auto rows = jsonl::read_file(formalizations_path);
    const auto ground_truth = corpus::load_ground_truth(ground_truth_path);
    std::map<std::string, std::string> reference_by_id;
    for (const auto& gt : ground_truth) {
        reference_by_id[gt.problem_id] = gt.isabelle_text;
    }

    bleu::Config config;
    config.max_n = max_n;
    config.variant =
        variant == "sentence" ? bleu::Variant::sentence_average : bleu::Variant::corpus_level;

    std::map<corpus::Subject, std::vector<bleu::PairInput>> by_subject;
    std::string model_id = "unknown";
    std::size_t overlap = 0;
    for (const auto& row : rows) {
        const std::string id = row.value("id", "");
        auto ref = reference_by_id.find(id);
        if (ref == reference_by_id.end()) {
            std::cerr << "warning: no ground truth for '" << id << "', excluded\n";
            continue;
        }
        ++overlap;
        model_id = row.value("model_id", model_id);
        const auto subject = corpus::subject_from_string(row.value("subject", "other"));
        by_subject[subject].push_back(
            bleu::PairInput{id, row.value("isabelle", ""), ref->second});
    }
    if (overlap == 0) {
        throw Error("no overlapping ids between formalizations and ground truth");
    }

    std::filesystem::create_directories(out_dir);
    reports::BleuMatrix matrix;
    auto summary_rows = json::array();
    std::vector<json> pair_rows;
    for (const auto& [subject, inputs] : by_subject) {
        const auto score = bleu::score_corpus(inputs, config);
        matrix[model_id][subject] = reports::BleuCell{score.value, score.n_pairs};
        json row;
        row["subject"] = corpus::to_string(subject);
        row["model_id"] = model_id;
        row["corpus_bleu"] = bleu::format_score(score.value);
        row["n_pairs"] = score.n_pairs;
        row["config"] = score.config.describe();
        summary_rows.push_back(std::move(row));
        for (const auto& pair : score.pairs) {
            json p;
            p["problem_id"] = pair.problem_id;
            p["subject"] = corpus::to_string(subject);
            p["sentence_bleu"] = pair.sentence_bleu;
            p["diagnostics"] = pair.diagnostics;
            pair_rows.push_back(std::move(p));
        }
    }
    json summary;
    summary["rows"] = summary_rows;
    summary["config"] = config.describe();
    jsonl::write_text_file(std::filesystem::path(out_dir) / "bleu_summary.json",
                           summary.dump(2) + "\n");
    jsonl::write_file(std::filesystem::path(out_dir) / "bleu_pairs.jsonl", pair_rows);
    const std::string table = reports::render_bleu_table(matrix, config.describe());
    jsonl::write_text_file(std::filesystem::path(out_dir) / "bleu_table.txt", table);
    std::cout << table;
    return kOk;
}

// ----------------------------------------------------------------- label

int cmd_label(const std::string& problems_path, const std::string& formalizations_path,
              const std::string& store_path, const std::string& annotator) {
    const auto problems = corpus::load_problems(problems_path);
    std::map<std::string, std::string> formalizations;
    for (const auto& row : jsonl::read_file(formalizations_path)) {
        formalizations[row.value("id", "")] = row.value("isabelle", "");
    }
    evaluation::LabelSessionInput input;
    input.problems = problems;
    input.formalizations = std::move(formalizations);
    input.annotator = annotator;
    evaluation::AnnotationStore store{store_path};
    evaluation::label_session(input, store, std::cin, std::cout);
    return kOk;
}

// ---------------------------------------------------------------- search

int cmd_search(const std::string& statements_path, const ProverOptions& prover_opts,
               const std::string& policy_script, const std::string& checkpoint,
               const SearchBudget& budget, int workers, bool deterministic,
               const std::string& out_path) {
    const auto statements = load_statements(statements_path);
    expert_iteration::RunOptions options;
    options.search = budget.to_config();
    options.workers = workers;
    if (deterministic) {
        options.clock_factory = [] { return std::make_shared<ManualClock>(); };
    }
    const auto results = expert_iteration::search_statements(
        statements, prover_opts.make_factory(), make_policy_factory(policy_script), checkpoint,
        options, {});

    std::vector<json> records;
    std::size_t proved = 0;
    for (const auto& r : results) {
        if (r.status == prover::ProofStatus::proved) {
            ++proved;
        }
        records.push_back(expert_iteration::proof_result_to_json(r));
    }
    jsonl::write_file(out_path, records);
    std::cout << "proved " << proved << "/" << results.size() << " -> " << out_path << "\n";
    return kOk;
}

// --------------------------------------------------------------- iterate

int cmd_iterate(const std::string& statements_path, const std::string& base_corpus_path,
                const ProverOptions& prover_opts, const std::string& policy_script,
                const std::string& trainer_type, const std::vector<std::string>& trainer_cmd,
                int iterations, const SearchBudget& budget, int workers, bool deterministic,
                const std::string& base_checkpoint, const std::string& out_dir) {
    const auto candidates = load_statements(statements_path);
    const auto backend_factory = prover_opts.make_factory();
    const auto policy_factory = make_policy_factory(policy_script);

    expert_iteration::IterationState state;
    state.model_checkpoints[0] = base_checkpoint;
    if (!base_corpus_path.empty()) {
        state.base_B = expert_iteration::load_proof_corpus(base_corpus_path, "base");
    }

    // Candidate statements pass the authoritative syntactic filter first.
    auto filter_backend = backend_factory(std::make_shared<SteadyClock>());
    const auto filtered = expert_iteration::filter_syntactic(
        candidates, [&](const expert_iteration::CandidateStatement& c) {
            return filter_backend->check_statement(c.statement_text);
        });
    state.corpus_A = filtered.accepted;
    state.filter.total = candidates.size();
    state.filter.accepted = filtered.accepted.size();
    state.filter.rejected = filtered.rejected.size();
    state.filter.errored = filtered.errored.size();

    expert_iteration::RunOptions options;
    options.search = budget.to_config();
    options.workers = workers;
    options.journal_dir = std::filesystem::path(out_dir) / "journal";
    if (deterministic) {
        options.clock_factory = [] { return std::make_shared<ManualClock>(); };
    }

    std::unique_ptr<expert_iteration::Trainer> trainer;
    if (trainer_type == "mock") {
        trainer = std::make_unique<expert_iteration::MockTrainer>();
    } else {
        if (trainer_cmd.empty()) {
            throw Error("--trainer subprocess needs --trainer-cmd");
        }
        trainer = std::make_unique<expert_iteration::SubprocessTrainer>(
            trainer_cmd, std::filesystem::path(out_dir) / "datasets");
    }

    for (int i = 0; i < iterations; ++i) {
        state = expert_iteration::run_iteration(state, backend_factory, policy_factory, *trainer,
                                                options);
        const auto training = expert_iteration::build_training_set(state, state.iteration);
        expert_iteration::write_training_set(
            std::filesystem::path(out_dir) /
                ("training_set_" + std::to_string(state.iteration) + ".jsonl"),
            training);
    }

    jsonl::write_text_file(std::filesystem::path(out_dir) / "manifest.json",
                           expert_iteration::manifest_json(state).dump(2) + "\n");
    const std::string report = reports::render_iteration_table(state);
    jsonl::write_text_file(std::filesystem::path(out_dir) / "report.txt", report);
    std::cout << report;
    return kOk;
}

// ---------------------------------------------------------------- report

int cmd_report(const std::string& manifest_path, const std::string& annotations_path,
               const std::string& problems_path, const std::string& bleu_summary_path,
               const std::string& out_path) {
    std::string rendered;
    if (!manifest_path.empty()) {
        const auto manifest = json::parse(jsonl::read_text_file(manifest_path));
        expert_iteration::IterationState state;
        state.iteration = manifest.value("iteration", 0);
        state.filter.total = manifest["filter"].value("total", 0);
        state.filter.accepted = manifest["filter"].value("accepted", 0);
        state.filter.rejected = manifest["filter"].value("rejected", 0);
        state.filter.errored = manifest["filter"].value("errored", 0);
        for (const auto& [key, value] : manifest.value("checkpoints", json::object()).items()) {
            state.model_checkpoints[std::stoi(key)] = value.get<std::string>();
        }
        for (const auto& row : manifest.value("iterations", json::array())) {
            expert_iteration::IterationMetrics m;
            m.iteration = row.value("iteration", 0);
            m.attempted = row.value("attempted", 0);
            m.proved = row.value("proved", 0);
            m.success_rate = row.value("success_rate", "");
            m.cumulative_proved = row.value("cumulative_proved", 0);
            m.training_set_size = row.value("training_set_size", 0);
            m.checkpoint = row.value("checkpoint", "");
            state.metrics.push_back(std::move(m));
        }
        rendered += reports::render_iteration_table(state);
    }
    if (!annotations_path.empty()) {
        evaluation::AnnotationStore store{annotations_path};
        std::map<std::string, corpus::Subject> subjects;
        if (!problems_path.empty()) {
            for (const auto& p : corpus::load_problems(problems_path)) {
                subjects[p.id] = p.subject;
            }
        }
        const auto table = evaluation::aggregate_annotations(store.load(), subjects);
        rendered += reports::render_failure_table(table);
        if (!out_path.empty()) {
            jsonl::write_text_file(std::filesystem::path(out_path).parent_path() /
                                       "failure_table.csv",
                                   reports::failure_table_csv(table));
        }
    }
    if (!bleu_summary_path.empty()) {
        const auto summary = json::parse(jsonl::read_text_file(bleu_summary_path));
        reports::BleuMatrix matrix;
        for (const auto& row : summary.value("rows", json::array())) {
            double value = 0.0;
            try {
                value = std::stod(row.value("corpus_bleu", "0")) / 100.0;
            } catch (const std::exception&) {
            }
            matrix[row.value("model_id", "?")]
                  [corpus::subject_from_string(row.value("subject", "other"))] =
                      reports::BleuCell{value, row.value("n_pairs", std::size_t{0})};
        }
        rendered += reports::render_bleu_table(matrix, summary.value("config", ""));
    }
    if (rendered.empty()) {
        throw Error("report needs --manifest, --annotations, or --bleu-summary");
    }
    if (!out_path.empty()) {
        jsonl::write_text_file(out_path, rendered);
    }
    std::cout << rendered;
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"autoformalization and expert-iteration pipeline"};
    app.require_subcommand(1);
    std::function<int()> run;

    // ingest
    {
        auto* cmd = app.add_subcommand("ingest", "load, check, and canonicalize problem files");
        auto problems = std::make_shared<std::string>();
        auto out = std::make_shared<std::string>();
        auto gt = std::make_shared<std::string>();
        cmd->add_option("--problems", *problems)->required();
        cmd->add_option("--out", *out)->required();
        cmd->add_option("--ground-truth", *gt);
        cmd->callback([=, &run] { run = [=] { return cmd_ingest(*problems, *out, *gt); }; });
    }
    // formalize
    {
        auto* cmd = app.add_subcommand("formalize", "translate problems into theorem statements");
        auto problems = std::make_shared<std::string>();
        auto banks = std::make_shared<BankSet>();
        auto completion = std::make_shared<CompletionOptions>();
        auto subject = std::make_shared<std::string>();
        auto lexicon = std::make_shared<std::string>();
        auto out = std::make_shared<std::string>();
        cmd->add_option("--problems", *problems)->required();
        banks->attach(cmd);
        completion->attach(cmd);
        cmd->add_option("--subject", *subject, "only process this subject");
        cmd->add_option("--lexicon", *lexicon, "extra lexicon file");
        cmd->add_option("--out", *out)->required();
        cmd->callback([=, &run] {
            run = [=] {
                return cmd_formalize(*problems, *banks, *completion, *subject, *lexicon, *out);
            };
        });
    }
    // informalize
    {
        auto* cmd = app.add_subcommand("informalize", "translate theorem statements back to prose");
        auto statements = std::make_shared<std::string>();
        auto bank = std::make_shared<std::string>();
        auto completion = std::make_shared<CompletionOptions>();
        auto out = std::make_shared<std::string>();
        cmd->add_option("--statements", *statements)->required();
        cmd->add_option("--bank", *bank)->required();
        completion->attach(cmd);
        cmd->add_option("--out", *out)->required();
        cmd->callback([=, &run] {
            run = [=] { return cmd_informalize(*statements, *bank, *completion, *out); };
        });
    }
    // validate
    {
        auto* cmd = app.add_subcommand("validate", "screen formalizations");
        auto formalizations = std::make_shared<std::string>();
        auto lexicon = std::make_shared<std::string>();
        auto prover_opts = std::make_shared<ProverOptions>();
        auto tier2 = std::make_shared<bool>(false);
        auto out = std::make_shared<std::string>();
        cmd->add_option("--formalizations", *formalizations)->required();
        cmd->add_option("--lexicon", *lexicon);
        prover_opts->attach(cmd);
        cmd->add_flag("--tier2", *tier2, "also ask the prover backend");
        cmd->add_option("--out", *out)->required();
        cmd->callback([=, &run] {
            run = [=] { return cmd_validate(*formalizations, *lexicon, *prover_opts, *tier2, *out); };
        });
    }
    // bleu
    {
        auto* cmd = app.add_subcommand("bleu", "score formalizations against ground truth");
        auto formalizations = std::make_shared<std::string>();
        auto ground_truth = std::make_shared<std::string>();
        auto out_dir = std::make_shared<std::string>();
        auto max_n = std::make_shared<int>(4);
        auto variant = std::make_shared<std::string>("corpus");
        cmd->add_option("--formalizations", *formalizations)->required();
        cmd->add_option("--ground-truth", *ground_truth)->required();
        cmd->add_option("--out-dir", *out_dir)->required();
        cmd->add_option("--max-n", *max_n);
        cmd->add_option("--variant", *variant)->check(CLI::IsMember({"corpus", "sentence"}));
        cmd->callback([=, &run] {
            run = [=] { return cmd_bleu(*formalizations, *ground_truth, *out_dir, *max_n, *variant); };
        });
    }
    // label
    {
        auto* cmd = app.add_subcommand("label", "interactive failure-category annotation");
        auto problems = std::make_shared<std::string>();
        auto formalizations = std::make_shared<std::string>();
        auto store = std::make_shared<std::string>();
        auto annotator = std::make_shared<std::string>("anonymous");
        cmd->add_option("--problems", *problems)->required();
        cmd->add_option("--formalizations", *formalizations)->required();
        cmd->add_option("--store", *store)->required();
        cmd->add_option("--annotator", *annotator);
        cmd->callback([=, &run] {
            run = [=] { return cmd_label(*problems, *formalizations, *store, *annotator); };
        });
    }
    // search
    {
        auto* cmd = app.add_subcommand("search", "best-first proof search over statements");
        auto statements = std::make_shared<std::string>();
        auto prover_opts = std::make_shared<ProverOptions>();
        auto policy = std::make_shared<std::string>();
        auto checkpoint = std::make_shared<std::string>("M0");
        auto budget = std::make_shared<SearchBudget>();
        auto workers = std::make_shared<int>(1);
        auto deterministic = std::make_shared<bool>(false);
        auto out = std::make_shared<std::string>();
        cmd->add_option("--statements", *statements)->required();
        prover_opts->attach(cmd);
        cmd->add_option("--policy-script", *policy)->required();
        cmd->add_option("--checkpoint", *checkpoint);
        budget->attach(cmd);
        cmd->add_option("--workers", *workers);
        cmd->add_flag("--deterministic", *deterministic, "scripted clocks, reproducible output");
        cmd->add_option("--out", *out)->required();
        cmd->callback([=, &run] {
            run = [=] {
                return cmd_search(*statements, *prover_opts, *policy, *checkpoint, *budget,
                                  *workers, *deterministic, *out);
            };
        });
    }
    // iterate
    {
        auto* cmd = app.add_subcommand("iterate", "run the expert-iteration loop");
        auto statements = std::make_shared<std::string>();
        auto base_corpus = std::make_shared<std::string>();
        auto prover_opts = std::make_shared<ProverOptions>();
        auto policy = std::make_shared<std::string>();
        auto trainer = std::make_shared<std::string>("mock");
        auto trainer_cmd = std::make_shared<std::vector<std::string>>();
        auto iterations = std::make_shared<int>(2);
        auto budget = std::make_shared<SearchBudget>();
        auto workers = std::make_shared<int>(1);
        auto deterministic = std::make_shared<bool>(false);
        auto base_checkpoint = std::make_shared<std::string>("M0");
        auto out_dir = std::make_shared<std::string>();
        cmd->add_option("--statements", *statements)->required();
        cmd->add_option("--base-corpus", *base_corpus);
        prover_opts->attach(cmd);
        cmd->add_option("--policy-script", *policy)->required();
        cmd->add_option("--trainer", *trainer)->check(CLI::IsMember({"mock", "subprocess"}));
        cmd->add_option("--trainer-cmd", *trainer_cmd);
        cmd->add_option("--iterations", *iterations);
        budget->attach(cmd);
        cmd->add_option("--workers", *workers);
        cmd->add_flag("--deterministic", *deterministic);
        cmd->add_option("--base-checkpoint", *base_checkpoint);
        cmd->add_option("--out-dir", *out_dir)->required();
        cmd->callback([=, &run] {
            run = [=] {
                return cmd_iterate(*statements, *base_corpus, *prover_opts, *policy, *trainer,
                                   *trainer_cmd, *iterations, *budget, *workers, *deterministic,
                                   *base_checkpoint, *out_dir);
            };
        });
    }
    // report
    {
        auto* cmd = app.add_subcommand("report", "render stored results as tables");
        auto manifest = std::make_shared<std::string>();
        auto annotations = std::make_shared<std::string>();
        auto problems = std::make_shared<std::string>();
        auto bleu_summary = std::make_shared<std::string>();
        auto out = std::make_shared<std::string>();
        cmd->add_option("--manifest", *manifest);
        cmd->add_option("--annotations", *annotations);
        cmd->add_option("--problems", *problems);
        cmd->add_option("--bleu-summary", *bleu_summary);
        cmd->add_option("--out", *out);
        cmd->callback([=, &run] {
            run = [=] { return cmd_report(*manifest, *annotations, *problems, *bleu_summary, *out); };
        });
    }

    CLI11_PARSE(app, argc, argv);
    try {
        return run ? run() : kConfigError;
    } catch (const autoform::Error& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kConfigError;
    } catch (const std::exception& ex) {
        std::cerr << "unexpected error: " << ex.what() << "\n";
        return kConfigError;
    }
}
