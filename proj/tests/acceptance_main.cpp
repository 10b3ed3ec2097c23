// Runs every acceptance criterion and prints one line per criterion.
#include "heatrange/acceptance.hpp"

#include <cstdio>

int main()
{
    int failed = 0;
    for (const auto& c : heatrange::run_suite("all")) {
        std::printf("criterion %2d %s  %s  (%s) [%.2f s]\n", c.number, c.pass ? "PASS" : "FAIL", c.name.c_str(),
                    c.detail.c_str(), c.seconds);
        std::fflush(stdout);
        failed += !c.pass;
    }
    std::printf("%d of 15 criteria failed\n", failed);
    return failed == 0 ? 0 : 1;
}
