// Scripted prover serving the JSON-lines backend protocol on stdio.
// Usage: mock_prover <script.json>

#include <iostream>
#include <memory>

#include "autoform/clock.hpp"
#include "autoform/mock_backend.hpp"
#include "autoform/prover_protocol.hpp"

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: mock_prover <script.json>\n";
        return 2;
    }
    try {
        auto clock = std::make_shared<autoform::ManualClock>();
        auto backend = autoform::prover::MockBackend::from_file(argv[1], clock);
        autoform::prover::serve_backend(backend, std::cin, std::cout);
    } catch (const std::exception& ex) {
        std::cerr << "mock_prover: " << ex.what() << "\n";
        return 1;
    }
    return 0;
}
