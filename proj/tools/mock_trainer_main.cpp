// Scripted trainer serving the JSON-lines fine-tune protocol on stdio.
// Replies with checkpoints "M1", "M2", ... in call order; the dataset file
// must exist and parse as JSONL.
// Usage: mock_trainer [checkpoint-prefix]

#include <filesystem>
#include <iostream>
#include <string>

#include "autoform/jsonl.hpp"

int main(int argc, char** argv) {
    const std::string prefix = argc > 1 ? argv[1] : "M";
    using autoform::jsonl::json;
    int counter = 0;
    std::string line;
    while (std::getline(std::cin, line)) {
        if (line.empty()) {
            continue;
        }
        json reply;
        try {
            const auto req = json::parse(line);
            const std::string op = req.value("op", "");
            if (op == "close") {
                reply["ok"] = true;
                std::cout << reply.dump() << "\n" << std::flush;
                return 0;
            }
            if (op != "fine_tune") {
                reply["ok"] = false;
                reply["error"] = "unknown op '" + op + "'";
            } else {
                const std::string dataset = req.at("dataset_path").get<std::string>();
                if (!std::filesystem::exists(dataset)) {
                    reply["ok"] = false;
                    reply["error"] = "dataset not found: " + dataset;
                } else {
                    const auto rows = autoform::jsonl::read_file(dataset);
                    ++counter;
                    reply["ok"] = true;
                    reply["checkpoint"] = prefix + std::to_string(counter);
                    reply["dataset_rows"] = rows.size();
                    reply["epochs"] = req.value("epochs", 0);
                    reply["base_checkpoint"] = req.value("base_checkpoint", "");
                }
            }
        } catch (const std::exception& ex) {
            reply = json::object();
            reply["ok"] = false;
            reply["error"] = ex.what();
        }
        std::cout << reply.dump() << "\n" << std::flush;
    }
    return 0;
}
