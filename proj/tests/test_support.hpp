#pragma once

#include <cstdlib>
#include <filesystem>
#include <random>
#include <string>

namespace test_support {

// Repository root (fixtures live under it); set by ctest, defaults to cwd.
inline std::filesystem::path repo_root() {
    if (const char* env = std::getenv("AUTOFORM_ROOT")) {
        return env;
    }
    return std::filesystem::current_path();
}

inline std::filesystem::path fixtures_dir() { return repo_root() / "fixtures"; }

inline std::filesystem::path bin_dir() {
    if (const char* env = std::getenv("AUTOFORM_BIN_DIR")) {
        return env;
    }
    return std::filesystem::current_path();
}

// Unique scratch directory, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() /
                (tag + "-" + std::to_string(rd()) + "-" + std::to_string(::getpid()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

}  // namespace test_support
