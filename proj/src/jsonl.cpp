#include "autoform/jsonl.hpp"

#include <fstream>
#include <sstream>

#include "autoform/errors.hpp"

namespace autoform::jsonl {

void for_each_record(const std::filesystem::path& path,
                     const std::function<void(const json&, std::size_t)>& fn) {
    std::ifstream in(path, std::ios::binary);
    if (!in.is_open()) {
        throw IoError("cannot open " + path.string());
    }
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        json record;
        try {
            record = json::parse(line);
        } catch (const json::parse_error& ex) {
            throw RecordError(std::string("malformed JSON: ") + ex.what(), line_no);
        }
        if (!record.is_object()) {
            throw RecordError("expected a JSON object", line_no);
        }
        fn(record, line_no);
    }
}

std::vector<json> read_file(const std::filesystem::path& path) {
    std::vector<json> records;
    for_each_record(path, [&](const json& r, std::size_t) { records.push_back(r); });
    return records;
}

std::string dump_record(const json& record) {
    return record.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

void write_file(const std::filesystem::path& path, const std::vector<json>& records) {
    std::ostringstream out;
    for (const auto& r : records) {
        out << dump_record(r) << '\n';
    }
    write_text_file(path, out.str());
}

void append_record(const std::filesystem::path& path, const json& record) {
    std::ofstream out(path, std::ios::binary | std::ios::app);
    if (!out.is_open()) {
        throw IoError("cannot open for append: " + path.string());
    }
    out << dump_record(record) << '\n';
    out.flush();
    if (!out) {
        throw IoError("write failed: " + path.string());
    }
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in.is_open()) {
        throw IoError("cannot open " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out.is_open()) {
        throw IoError("cannot open for write: " + path.string());
    }
    out << content;
    out.flush();
    if (!out) {
        throw IoError("write failed: " + path.string());
    }
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    auto tmp = path;
    tmp += ".tmp";
    write_text_file(tmp, content);
    std::filesystem::rename(tmp, path);
}

}  // namespace autoform::jsonl
