#include "ojt/classifier.hpp"

#include "test_oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace ojt;
using namespace ojt::testing;

TEST_CASE("posterior basics") {
    SUBCASE("empty store is uniform") {
        LabeledStore store(2, 1);
        const auto p = store.posterior(make_point(0, {0.3}));
        CHECK(p[0] == 0.5);
        CHECK(p[1] == 0.5);
    }
    SUBCASE("single labeled point is unanimous") {
        LabeledStore store(2, 1);
        const auto x0 = make_point(0, {0.4});
        store.commit(x0, 0);
        const auto p = store.posterior(x0);
        CHECK(p[0] == 1.0);
        CHECK(p[1] == 0.0);
    }
    SUBCASE("symmetric pair splits evenly") {
        LabeledStore store(2, 1, 2);
        store.commit(make_point(0, {-1.0}), 0);
        store.commit(make_point(1, {+1.0}), 1);
        const auto p = store.posterior(make_point(2, {0.0}));
        CHECK(p[0] == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(p[1] == doctest::Approx(0.5).epsilon(1e-15));
    }
    SUBCASE("dimension mismatch") {
        LabeledStore store(2, 3);
        CHECK_THROWS_AS(store.posterior(make_point(0, {1.0})), InputError);
    }
}

TEST_CASE("guess and tie-breaking") {
    SUBCASE("unanimous single neighbor") {
        LabeledStore store(2, 1);
        const auto x0 = make_point(0, {0.4});
        store.commit(x0, 0);
        CHECK(store.guess(x0) == 0);
    }
    SUBCASE("empty store falls to smallest index") {
        LabeledStore store(2, 1);
        CHECK(store.guess(make_point(0, {0.0})) == 0);
    }
    SUBCASE("nearest neighbor wins with k=1") {
        LabeledStore store(2, 1, 1);
        store.commit(make_point(0, {-1.0}), 0);
        store.commit(make_point(1, {+1.0}), 1);
        CHECK(store.guess(make_point(2, {-0.9})) == 0);
    }
}

TEST_CASE("uncertainty is one minus max posterior") {
    SUBCASE("certain") {
        LabeledStore store(2, 1);
        const auto x0 = make_point(0, {0.4});
        store.commit(x0, 0);
        CHECK(store.uncertainty(x0) == 0.0);
    }
    SUBCASE("split") {
        LabeledStore store(2, 1, 2);
        store.commit(make_point(0, {-1.0}), 0);
        store.commit(make_point(1, {+1.0}), 1);
        CHECK(store.uncertainty(make_point(2, {0.0})) == doctest::Approx(0.5).epsilon(1e-15));
    }
    SUBCASE("empty store, three categories") {
        LabeledStore store(3, 1);
        CHECK(store.uncertainty(make_point(0, {0.0})) ==
              doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    }
}

TEST_CASE("assume dominates its own point") {
    LabeledStore store(2, 2, 5, 1e-9);
    store.commit(make_point(10, {0.2, 0.3}), 1);
    const auto p = make_point(0, {0.8, 0.7});
    store.assume(p, 0);
    CHECK(store.uncertainty(p) < 1e-6);
    store.retract(p);
}

TEST_CASE("assume/retract restores outputs bit-exactly") {
    Rng rng(17);
    const auto labeled = random_points(rng, 8, 3, 100);
    const auto probes = random_points(rng, 6, 3, 200);
    LabeledStore store(3, 3);
    for (std::size_t i = 0; i < labeled.size(); ++i)
        store.commit(labeled[i], static_cast<Label>(i % 3));

    std::vector<std::vector<double>> before;
    for (const auto& probe : probes) before.push_back(store.posterior(probe));

    const auto h1 = make_point(300, {0.5, 0.5, 0.5});
    const auto h2 = make_point(301, {0.1, 0.9, 0.2});
    store.assume(h1, 2);
    store.assume(h2, 0);
    store.retract(h2);
    store.retract(h1);

    for (std::size_t i = 0; i < probes.size(); ++i) {
        const auto after = store.posterior(probes[i]);
        CHECK(after == before[i]); // bit-exact
    }
}

TEST_CASE("multiple assumptions are all visible; retract pops the latest") {
    LabeledStore store(2, 1, 5);
    const auto a = make_point(0, {0.1});
    const auto b = make_point(1, {0.9});
    store.assume(a, 0);
    store.assume(b, 1);
    CHECK(store.size() == 2);
    CHECK(store.guess(a) == 0);
    CHECK(store.guess(b) == 1);

    store.retract(a);
    CHECK(store.size() == 1);
    CHECK(store.guess(make_point(2, {0.0})) == 1); // only b remains assumed

    CHECK_THROWS_AS(store.retract(a), ProtocolError);
    store.retract(b);
    CHECK_THROWS_AS(store.retract(b), ProtocolError);
}

TEST_CASE("posterior matches the brute-force oracle") {
    Rng rng(23);
    for (int trial = 0; trial < 50; ++trial) {
        const int L = 2 + static_cast<int>(rng.bounded(3));
        const int k = 1 + static_cast<int>(rng.bounded(6));
        const std::size_t n = rng.bounded(10);
        const auto labeled = random_points(rng, n, 3, 0);
        std::vector<std::pair<FeaturePoint, Label>> pairs;
        LabeledStore store(L, 3, k);
        for (std::size_t i = 0; i < labeled.size(); ++i) {
            const auto label = static_cast<Label>(rng.bounded(static_cast<std::uint64_t>(L)));
            pairs.emplace_back(labeled[i], label);
            store.commit(labeled[i], label);
        }
        const auto probe = random_points(rng, 1, 3, 900)[0];
        const auto expected = brute_posterior(pairs, L, k, store.epsilon(), probe);
        const auto actual = store.posterior(probe);
        for (int c = 0; c < L; ++c)
            CHECK(actual[c] == doctest::Approx(expected[c]).epsilon(1e-14));
    }
}

TEST_CASE("lookahead uncertainty") {
    SUBCASE("candidate equals target collapses uncertainty") {
        LabeledStore store(2, 2, 5, 1e-9);
        store.commit(make_point(5, {0.3, 0.3}), 0);
        store.commit(make_point(6, {0.7, 0.7}), 1);
        const auto t = make_point(0, {0.5, 0.52});
        CHECK(store.lookahead_uncertainty(t, t) < 1e-6);
        CHECK(store.assumed_size() == 0);
    }
    SUBCASE("empty store matches the two-branch expansion") {
        LabeledStore store(2, 1);
        const auto target = make_point(0, {0.3});
        const auto candidate = make_point(1, {0.6});
        const double expected = brute_lookahead({}, 2, 5, store.epsilon(), target, candidate);
        CHECK(store.lookahead_uncertainty(target, candidate) ==
              doctest::Approx(expected).epsilon(1e-14));
    }
    SUBCASE("candidate outside a k=1 neighborhood changes nothing") {
        LabeledStore store(2, 1, 1);
        store.commit(make_point(0, {0.0}), 0);   // nearest to target
        store.commit(make_point(1, {1.0}), 1);
        const auto target = make_point(2, {0.1});
        const auto candidate = make_point(1, {1.0});
        const double looked = store.lookahead_uncertainty(target, candidate);
        CHECK(looked == doctest::Approx(store.uncertainty(target)).epsilon(1e-12));
    }
}

TEST_CASE("randomized lookahead equals the explicit expansion") {
    Rng rng(31);
    for (int trial = 0; trial < 200; ++trial) {
        const int L = 2 + static_cast<int>(rng.bounded(2));
        const std::size_t n = rng.bounded(8);
        LabeledStore store(L, 2, 5);
        std::vector<std::pair<FeaturePoint, Label>> pairs;
        const auto labeled = random_points(rng, n, 2, 0);
        for (std::size_t i = 0; i < labeled.size(); ++i) {
            const auto label = static_cast<Label>(rng.bounded(static_cast<std::uint64_t>(L)));
            pairs.emplace_back(labeled[i], label);
            store.commit(labeled[i], label);
        }
        const auto target = random_points(rng, 1, 2, 500)[0];
        const auto candidate = random_points(rng, 1, 2, 600)[0];
        const double expected =
            brute_lookahead(pairs, L, 5, store.epsilon(), target, candidate);
        CHECK(store.lookahead_uncertainty(target, candidate) ==
              doctest::Approx(expected).epsilon(1e-12));
        CHECK(store.assumed_size() == 0);
    }
}

TEST_CASE("posterior stays normalized over random stores") {
    Rng rng(41);
    for (int trial = 0; trial < 100; ++trial) {
        const int L = 2 + static_cast<int>(rng.bounded(4));
        LabeledStore store(L, 3);
        const auto labeled = random_points(rng, 1 + rng.bounded(12), 3, 0);
        for (const auto& p : labeled)
            store.commit(p, static_cast<Label>(rng.bounded(static_cast<std::uint64_t>(L))));
        const auto probe = random_points(rng, 1, 3, 700)[0];
        const auto post = store.posterior(probe);
        double sum = 0.0;
        for (const auto v : post) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
            sum += v;
        }
        CHECK(std::abs(sum - 1.0) <= 1e-12);
        CHECK(store.uncertainty(probe) ==
              1.0 - *std::max_element(post.begin(), post.end()));
    }
}

TEST_CASE("duplicate points with conflicting labels split the weight") {
    LabeledStore store(2, 1, 5, 1e-9);
    store.commit(make_point(0, {0.5}), 0);
    store.commit(make_point(1, {0.5}), 1);
    const auto p = store.posterior(make_point(2, {0.5}));
    CHECK(p[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(p[1] == doctest::Approx(0.5).epsilon(1e-12));
}
