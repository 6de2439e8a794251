// Acceptance suite runner: one pass/fail line per criterion, nonzero exit on
// any failure. The same engine backs the CLI's `selftest` subcommand.

#include <cstdio>
#include <cstdlib>
#include <cstring>

#include "fcone/selftest.hpp"

int main(int argc, char** argv) {
    fcone::selftest::Options opt;
    for (int i = 1; i < argc; ++i) {
        if (!std::strcmp(argv[i], "--seed") && i + 1 < argc)
            opt.seed = std::strtoull(argv[++i], nullptr, 10);
        else if (!std::strcmp(argv[i], "--n") && i + 1 < argc)
            opt.instances = std::atoi(argv[++i]);
        else if (!std::strcmp(argv[i], "--filter") && i + 1 < argc)
            opt.filter = argv[++i];
    }
    if (const char* env = std::getenv("FCL_SEED")) opt.seed = std::strtoull(env, nullptr, 10);

    auto results = fcone::selftest::run_acceptance(opt);
    bool all = true;
    for (const auto& r : results) {
        std::printf("%s  %d. %-26s (%.2f s)%s%s\n", r.pass ? "PASS" : "FAIL", r.id,
                    r.name.c_str(), r.seconds, r.pass ? "" : "  ", r.pass ? "" : r.detail.c_str());
        all = all && r.pass;
    }
    return all ? 0 : 1;
}
