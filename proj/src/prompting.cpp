#include "autoform/prompting.hpp"

#include <sstream>

#include "autoform/isabelle.hpp"
#include "autoform/jsonl.hpp"

namespace autoform::prompting {

namespace {

constexpr const char* kNlHeader = "Natural language version: ";
constexpr const char* kNlInstruction =
    "Translate the natural language version to an Isabelle version:";
constexpr const char* kIsaHeader = "Isabelle version:";
constexpr const char* kIsaInstruction =
    "Translate the Isabelle version to a natural language version:";

}  // namespace

ExemplarBank load_bank(const std::filesystem::path& path) {
    ExemplarBank bank;
    bool first = true;
    jsonl::for_each_record(path, [&](const jsonl::json& record, std::size_t line) {
        for (const char* key : {"nl", "formal", "subject"}) {
            if (!record.contains(key) || !record[key].is_string()) {
                throw RecordError(std::string("missing or non-string field '") + key + "'", line);
            }
        }
        if (first) {
            bank.subject = corpus::subject_from_string(record["subject"].get<std::string>());
            first = false;
        }
        Exemplar ex;
        ex.natural_text = record["nl"].get<std::string>();
        ex.formal_text = record["formal"].get<std::string>();
        try {
            isabelle::parse_statement(ex.formal_text);
        } catch (const Error& e) {
            throw RecordError(std::string("formal side does not parse: ") + e.what(), line);
        }
        bank.pairs.push_back(std::move(ex));
    });
    return bank;
}

corpus::Subject bank_subject_for(corpus::Subject subject) {
    if (subject == corpus::Subject::intermediate_algebra) {
        return corpus::Subject::algebra;
    }
    return subject;
}

std::vector<std::string> default_stop_sequences() {
    return {"Natural language version:", "Isabelle version:"};
}

std::string build_formalization_prompt(const PromptSpec& spec) {
    if (spec.direction != Direction::formalize) {
        throw Error("prompt spec direction is not 'formalize'");
    }
    if (spec.query.empty()) {
        throw Error("empty prompt query");
    }
    std::ostringstream out;
    for (const auto& ex : spec.bank.pairs) {
        out << kNlHeader << '"' << ex.natural_text << "\". " << kNlInstruction << '\n'
            << ex.formal_text << "\n\n";
    }
    out << kNlHeader << '"' << spec.query << "\". " << kNlInstruction << '\n';
    return out.str();
}

InformalizationPrompt build_informalization_prompt(const PromptSpec& spec) {
    if (spec.direction != Direction::informalize) {
        throw Error("prompt spec direction is not 'informalize'");
    }
    if (spec.query.empty()) {
        throw Error("empty prompt query");
    }
    InformalizationPrompt result;
    try {
        isabelle::parse_statement(spec.query);
    } catch (const Error& ex) {
        result.warnings.push_back(std::string("query kept verbatim, does not parse: ") +
                                  ex.what());
    }
    std::ostringstream out;
    for (const auto& ex : spec.bank.pairs) {
        out << kIsaHeader << '\n'
            << ex.formal_text << '\n'
            << kIsaInstruction << '\n'
            << '"' << ex.natural_text << "\"\n\n";
    }
    out << kIsaHeader << '\n' << spec.query << '\n' << kIsaInstruction << '\n';
    result.text = out.str();
    return result;
}

std::string extract_completion(const std::string& raw,
                               const std::vector<std::string>& stop_sequences) {
    std::size_t cut = raw.size();
    for (const auto& stop : stop_sequences) {
        if (stop.empty()) {
            continue;
        }
        std::size_t pos = raw.find(stop);
        if (pos != std::string::npos && pos < cut) {
            cut = pos;
        }
    }
    std::string text = raw.substr(0, cut);

    // Drop leading blank lines, keeping the first content line's indentation.
    std::size_t begin = 0;
    while (begin < text.size()) {
        std::size_t eol = text.find('\n', begin);
        std::size_t line_end = eol == std::string::npos ? text.size() : eol;
        bool blank = true;
        for (std::size_t i = begin; i < line_end; ++i) {
            if (text[i] != ' ' && text[i] != '\t' && text[i] != '\r') {
                blank = false;
                break;
            }
        }
        if (!blank || eol == std::string::npos) {
            if (blank) {
                begin = text.size();
            }
            break;
        }
        begin = eol + 1;
    }
    std::size_t end = text.size();
    while (end > begin && (text[end - 1] == ' ' || text[end - 1] == '\t' ||
                           text[end - 1] == '\n' || text[end - 1] == '\r')) {
        --end;
    }
    return text.substr(begin, end - begin);
}

}  // namespace autoform::prompting
