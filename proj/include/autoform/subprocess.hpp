#pragma once

#include <string>
#include <vector>

#include <sys/types.h>

namespace autoform {

// Child process with line-oriented stdin/stdout, the transport for the
// prover and trainer wire protocols.
class LineSubprocess {
public:
    explicit LineSubprocess(std::vector<std::string> argv);
    ~LineSubprocess();

    LineSubprocess(const LineSubprocess&) = delete;
    LineSubprocess& operator=(const LineSubprocess&) = delete;

    void write_line(const std::string& line);  // throws IoError on broken pipe
    // Returns false on EOF.
    bool read_line(std::string& line);
    void close_stdin();
    int wait();  // closes stdin, reaps the child, returns exit status

private:
    pid_t pid_ = -1;
    int stdin_fd_ = -1;
    int stdout_fd_ = -1;
    std::string buffer_;
    bool waited_ = false;
};

}  // namespace autoform
