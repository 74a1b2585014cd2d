/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#include <ri/ordering.hh>

#include "fixtures.hh"
#include "oracles.hh"

#include <doctest.h>

#include <random>
#include <sstream>

using namespace ri;

namespace
{
    auto prefix_flags(std::size_t n, std::initializer_list<NodeId> members) -> std::vector<bool>
    {
        std::vector<bool> result(n, false);
        for (auto m : members)
            result[m] = true;
        return result;
    }
}

TEST_CASE("weight_m")
{
    auto labels = std::make_shared<LabelRegistry>();
    auto triangle = fixtures::uniform(labels, 3, { { 0, 1 }, { 1, 2 }, { 2, 0 } });

    CHECK(weight_m(prefix_flags(3, {}), 1, triangle) == 0);
    CHECK(weight_m(prefix_flags(3, { 0 }), 1, triangle) == 1);
    CHECK(weight_m(prefix_flags(3, { 0, 2 }), 1, triangle) == 2);
}

TEST_CASE("weight_n")
{
    auto labels = std::make_shared<LabelRegistry>();

    SUBCASE("empty prefix")
    {
        auto triangle = fixtures::uniform(labels, 3, { { 0, 1 }, { 1, 2 }, { 2, 0 } });
        CHECK(weight_n(prefix_flags(3, {}), 0, triangle) == 0);
    }

    SUBCASE("path a->b->c, prefix {a}, v = c, witness b")
    {
        auto path = fixtures::uniform(labels, 3, { { 0, 1 }, { 1, 2 } });
        CHECK(weight_n(prefix_flags(3, { 0 }), 2, path) == 1);
        CHECK(oracle::weight_n({ 0 }, 2, path) == 1);
    }

    SUBCASE("triangle, prefix {a}, v = b, witness c")
    {
        auto triangle = fixtures::uniform(labels, 3, { { 0, 1 }, { 1, 2 }, { 2, 0 } });
        CHECK(weight_n(prefix_flags(3, { 0 }), 1, triangle) == 1);
        CHECK(oracle::weight_n({ 0 }, 1, triangle) == 1);
    }
}

TEST_CASE("weights agree with set oracles on random graphs")
{
    std::mt19937_64 rng(99);
    for (int i = 0 ; i < 60 ; ++i) {
        auto labels = std::make_shared<LabelRegistry>();
        auto n = 2 + rng() % 10;
        auto g = oracle::random_graph(rng, n, 0.25, 1, labels);
        std::set<NodeId> prefix;
        std::vector<bool> flags(n, false);
        for (NodeId v = 0 ; v < n ; ++v)
            if (rng() % 3 == 0) {
                prefix.insert(v);
                flags[v] = true;
            }
        for (NodeId v = 0 ; v < n ; ++v) {
            if (flags[v])
                continue;
            CHECK(weight_m(flags, v, g) == oracle::weight_m(prefix, v, g));
            CHECK(weight_n(flags, v, g) == oracle::weight_n(prefix, v, g));
        }
    }
}

TEST_CASE("build_ordering")
{
    auto labels = std::make_shared<LabelRegistry>();

    SUBCASE("star starts at its centre")
    {
        auto star = fixtures::uniform(labels, 4, { { 3, 0 }, { 3, 1 }, { 3, 2 } });
        auto o = build_ordering(star);
        CHECK(o.order.front() == 3);
        CHECK(! o.parents.front());
    }

    SUBCASE("path a->b->c")
    {
        auto path = fixtures::uniform(labels, 3, { { 0, 1 }, { 1, 2 } });
        auto o = build_ordering(path);
        CHECK(o.order == std::vector<NodeId>{ 1, 0, 2 });
        CHECK(o.parents == std::vector<std::optional<NodeId>>{ std::nullopt, 1, 1 });
    }

    SUBCASE("smaller domain breaks a full tie")
    {
        // centre 0 with symmetric leaves 1 and 2
        auto cherry = fixtures::uniform(labels, 3, { { 0, 1 }, { 0, 2 } });
        OrderingOptions opts;
        opts.domain_tiebreak = true;
        opts.domain_sizes = std::vector<std::size_t>{ 9, 5, 2 };
        auto o = build_ordering(cherry, opts);
        CHECK(o.order == std::vector<NodeId>{ 0, 2, 1 });

        opts.domain_sizes = std::vector<std::size_t>{ 9, 2, 5 };
        CHECK(build_ordering(cherry, opts).order == std::vector<NodeId>{ 0, 1, 2 });

        CHECK(build_ordering(cherry).order == std::vector<NodeId>{ 0, 1, 2 });
    }

    SUBCASE("singletons move to the front in greedy order")
    {
        auto path = fixtures::uniform(labels, 4, { { 0, 1 }, { 1, 2 }, { 2, 3 } });
        auto base = build_ordering(path);
        CHECK(base.order == std::vector<NodeId>{ 1, 2, 0, 3 });

        OrderingOptions opts;
        opts.singleton_first = true;
        opts.domain_sizes = std::vector<std::size_t>{ 3, 3, 1, 1 };
        auto o = build_ordering(path, opts);
        CHECK(o.order == std::vector<NodeId>{ 2, 3, 1, 0 });
        CHECK(o.parents == std::vector<std::optional<NodeId>>{ std::nullopt, 2, 2, 1 });
    }

    SUBCASE("disconnected pattern leaves later components parentless")
    {
        auto g = fixtures::uniform(labels, 4, { { 0, 1 }, { 2, 3 } });
        auto o = build_ordering(g);
        CHECK(o.order == std::vector<NodeId>{ 0, 1, 2, 3 });
        CHECK(o.parents == std::vector<std::optional<NodeId>>{ std::nullopt, 0, std::nullopt, 2 });
    }

    SUBCASE("empty pattern")
    {
        auto g = fixtures::uniform(labels, 0, {});
        CHECK_THROWS_AS(build_ordering(g), EmptyPattern);
    }

    SUBCASE("domain options need sizes")
    {
        auto g = fixtures::uniform(labels, 2, { { 0, 1 } });
        OrderingOptions opts;
        opts.singleton_first = true;
        CHECK_THROWS_AS(build_ordering(g, opts), std::invalid_argument);
    }

    SUBCASE("dump format")
    {
        auto path = fixtures::uniform(labels, 3, { { 0, 1 }, { 1, 2 } });
        std::ostringstream s;
        dump_ordering(s, build_ordering(path));
        CHECK(s.str() == "0 1 -\n1 0 1\n2 2 1\n");
    }
}

TEST_CASE("ordering invariants on random patterns")
{
    std::mt19937_64 rng(2024);
    for (int i = 0 ; i < 100 ; ++i) {
        auto labels = std::make_shared<LabelRegistry>();
        auto n = 1 + rng() % 12;
        auto g = oracle::random_graph(rng, n, 0.2, 2, labels);
        std::vector<std::size_t> sizes(n);
        for (auto & s : sizes)
            s = 1 + rng() % 4;

        for (int variant = 0 ; variant < 3 ; ++variant) {
            OrderingOptions opts;
            if (variant >= 1) {
                opts.singleton_first = true;
                opts.domain_sizes = sizes;
            }
            if (variant == 2)
                opts.domain_tiebreak = true;

            auto o = build_ordering(g, opts);
            CHECK(o == build_ordering(g, opts));

            auto sorted = o.order;
            std::sort(sorted.begin(), sorted.end());
            for (NodeId v = 0 ; v < n ; ++v)
                CHECK(sorted[v] == v);

            CHECK(! o.parents[0]);
            for (std::size_t pos = 1 ; pos < n ; ++pos) {
                std::optional<std::size_t> earliest;
                for (std::size_t j = 0 ; j < pos && ! earliest ; ++j)
                    if (oracle::adjacent(g, o.order[j], o.order[pos]))
                        earliest = j;
                if (earliest)
                    CHECK(o.parents[pos] == o.order[*earliest]);
                else
                    CHECK(! o.parents[pos]);
            }
        }
    }
}
