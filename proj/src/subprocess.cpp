#include "autoform/subprocess.hpp"

#include <csignal>
#include <cstring>

#include <fcntl.h>
#include <sys/wait.h>
#include <unistd.h>

#include "autoform/errors.hpp"

namespace autoform {

LineSubprocess::LineSubprocess(std::vector<std::string> argv) {
    if (argv.empty()) {
        throw Error("subprocess needs a command");
    }
    int in_pipe[2];   // parent -> child
    int out_pipe[2];  // child -> parent
    if (pipe(in_pipe) != 0 || pipe(out_pipe) != 0) {
        throw IoError("pipe() failed");
    }
    pid_ = fork();
    if (pid_ < 0) {
        throw IoError("fork() failed");
    }
    if (pid_ == 0) {
        dup2(in_pipe[0], STDIN_FILENO);
        dup2(out_pipe[1], STDOUT_FILENO);
        ::close(in_pipe[0]);
        ::close(in_pipe[1]);
        ::close(out_pipe[0]);
        ::close(out_pipe[1]);
        std::vector<char*> args;
        args.reserve(argv.size() + 1);
        for (auto& a : argv) {
            args.push_back(a.data());
        }
        args.push_back(nullptr);
        execvp(args[0], args.data());
        _exit(127);
    }
    ::close(in_pipe[0]);
    ::close(out_pipe[1]);
    stdin_fd_ = in_pipe[1];
    stdout_fd_ = out_pipe[0];
    signal(SIGPIPE, SIG_IGN);
}

LineSubprocess::~LineSubprocess() {
    if (!waited_) {
        close_stdin();
        if (stdout_fd_ >= 0) {
            ::close(stdout_fd_);
            stdout_fd_ = -1;
        }
        if (pid_ > 0) {
            int status = 0;
            waitpid(pid_, &status, 0);
        }
    }
}

void LineSubprocess::write_line(const std::string& line) {
    if (stdin_fd_ < 0) {
        throw IoError("subprocess stdin closed");
    }
    std::string payload = line;
    payload.push_back('\n');
    std::size_t written = 0;
    while (written < payload.size()) {
        ssize_t n = ::write(stdin_fd_, payload.data() + written, payload.size() - written);
        if (n < 0) {
            throw IoError(std::string("write to subprocess failed: ") + std::strerror(errno));
        }
        written += static_cast<std::size_t>(n);
    }
}

bool LineSubprocess::read_line(std::string& line) {
    while (true) {
        auto nl = buffer_.find('\n');
        if (nl != std::string::npos) {
            line = buffer_.substr(0, nl);
            buffer_.erase(0, nl + 1);
            return true;
        }
        char chunk[4096];
        ssize_t n = ::read(stdout_fd_, chunk, sizeof(chunk));
        if (n < 0) {
            throw IoError(std::string("read from subprocess failed: ") + std::strerror(errno));
        }
        if (n == 0) {
            if (buffer_.empty()) {
                return false;
            }
            line = std::move(buffer_);
            buffer_.clear();
            return true;
        }
        buffer_.append(chunk, static_cast<std::size_t>(n));
    }
}

void LineSubprocess::close_stdin() {
    if (stdin_fd_ >= 0) {
        ::close(stdin_fd_);
        stdin_fd_ = -1;
    }
}

int LineSubprocess::wait() {
    close_stdin();
    int status = 0;
    if (pid_ > 0 && !waited_) {
        waitpid(pid_, &status, 0);
        waited_ = true;
    }
    if (stdout_fd_ >= 0) {
        ::close(stdout_fd_);
        stdout_fd_ = -1;
    }
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace autoform
