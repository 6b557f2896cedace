#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "velavg/parallel.hpp"

using namespace velavg;

TEST_CASE("every index is visited once") {
    std::vector<std::atomic<int>> hits(1000);
    parallel_for(hits.size(), [&](std::size_t i) { hits[i]++; });
    for (auto& h : hits) CHECK(h.load() == 1);
    parallel_for(0, [](std::size_t) { FAIL("no work expected"); });
}

TEST_CASE("thread count honours the environment") {
    setenv("VELAVG_THREADS", "3", 1);
    CHECK(thread_count() == 3);
    setenv("VELAVG_THREADS", "junk", 1);
    CHECK(thread_count() >= 1);
    unsetenv("VELAVG_THREADS");
    CHECK(thread_count() >= 1);
}

TEST_CASE("results do not depend on the thread count") {
    std::vector<double> a(517), b(517);
    setenv("VELAVG_THREADS", "1", 1);
    parallel_for(a.size(), [&](std::size_t i) { a[i] = 1.0 / double(i + 1); });
    setenv("VELAVG_THREADS", "4", 1);
    parallel_for(b.size(), [&](std::size_t i) { b[i] = 1.0 / double(i + 1); });
    unsetenv("VELAVG_THREADS");
    CHECK(a == b);
}

TEST_CASE("exceptions propagate") {
    setenv("VELAVG_THREADS", "4", 1);
    CHECK_THROWS_AS(parallel_for(100, [](std::size_t i) {
                        if (i == 57) throw std::runtime_error("boom");
                    }),
                    std::runtime_error);
    unsetenv("VELAVG_THREADS");
}
