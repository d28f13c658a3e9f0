// Acceptance suite: one PASS/FAIL line per criterion.
//   acceptance_tests          run every criterion
//   acceptance_tests 3 5      run criteria 3 and 5
// Exit status is 0 only if every selected criterion passed.

#include <cstdlib>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "optomech/selftest/acceptance.hpp"

int main(int argc, char** argv) {
    std::vector<int> ids;
    for (int i = 1; i < argc; ++i) {
        char* end = nullptr;
        const long id = std::strtol(argv[i], &end, 10);
        if (*end != '\0') {
            std::cerr << "usage: acceptance_tests [criterion-id ...]\n";
            return 2;
        }
        ids.push_back(static_cast<int>(id));
    }
    try {
        return optomech::selftest::print_results(std::cout, optomech::selftest::run_acceptance(ids)) ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "acceptance run aborted: " << e.what() << '\n';
        return 3;
    }
}
