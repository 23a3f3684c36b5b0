#include "ojt/rng.hpp"

#include <doctest.h>

#include <vector>

using namespace ojt;

TEST_CASE("generator stability") {
    // Frozen streams: per-run seeds, query orders and availability draws all
    // hang off these; any change silently breaks reproducibility.
    Rng r0(0);
    CHECK(r0.next() == 5987356902031041503ull);
    CHECK(r0.next() == 7051070477665621255ull);
    CHECK(r0.next() == 6633766593972829180ull);

    Rng r42(42);
    CHECK(r42.next() == 15021278609987233951ull);
    CHECK(r42.next() == 5881210131331364753ull);

    std::uint64_t s = 123;
    CHECK(splitmix64(s) == 13032462758197477675ull);
    CHECK(splitmix64(s) == 18015028434894305148ull);
}

TEST_CASE("derive_seed is stable and spreads runs") {
    CHECK(derive_seed(1, 0) == 5206558337466748783ull);
    CHECK(derive_seed(1, 1) == 694183512642609129ull);
    CHECK(derive_seed(1, 0) != derive_seed(1, 1));
    CHECK(derive_seed(1, 5) == derive_seed(1, 5));
    CHECK(derive_seed(1, 5) != derive_seed(2, 5));
}

TEST_CASE("uniform01 range and stability") {
    Rng rng(7);
    CHECK(rng.uniform01() == doctest::Approx(0.055360436478333108).epsilon(1e-15));
    CHECK(rng.uniform01() == doctest::Approx(0.17211585444811772).epsilon(1e-15));
    for (int i = 0; i < 1000; ++i) {
        const double u = rng.uniform01();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("bounded stays in range") {
    Rng rng(3);
    for (int i = 0; i < 1000; ++i) CHECK(rng.bounded(7) < 7);
}

TEST_CASE("shuffle is deterministic") {
    Rng rng(7);
    std::vector<int> v{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
    rng.shuffle(v);
    CHECK(v == std::vector<int>{7, 9, 3, 6, 0, 4, 5, 2, 8, 1});

    Rng again(7);
    std::vector<int> w{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
    again.shuffle(w);
    CHECK(v == w);
}

TEST_CASE("normal draws are reproducible") {
    Rng a(99), b(99);
    for (int i = 0; i < 100; ++i) CHECK(a.normal() == b.normal());
}
