#include "acceptance/common.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <exception>

int main(int argc, char** argv) {
    CLI::App app{"Acceptance criteria"};
    int only = 0;
    app.add_option("--criterion", only, "Run a single criterion")->check(CLI::Range(1, 10));
    CLI11_PARSE(app, argc, argv);

    using Fn = acceptance::Result (*)();
    const Fn all[] = {acceptance::criterion1, acceptance::criterion2, acceptance::criterion3, acceptance::criterion4,
                      acceptance::criterion5, acceptance::criterion6, acceptance::criterion7, acceptance::criterion8,
                      acceptance::criterion9, acceptance::criterion10};
    bool ok = true;
    for (int n = 1; n <= 10; ++n) {
        if (only && n != only) continue;
        acceptance::Stopwatch clock;
        acceptance::Result r;
        try {
            r = all[n - 1]();
        } catch (const std::exception& e) {
            r = {false, std::string("exception: ") + e.what()};
        }
        std::printf("criterion %d: %s (%.2fs) %s\n", n, r.pass ? "PASS" : "FAIL", clock.seconds(), r.detail.c_str());
        std::fflush(stdout);
        ok = ok && r.pass;
    }
    return ok ? 0 : 1;
}
