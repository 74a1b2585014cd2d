/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#include <ri/domains.hh>
#include <ri/generator.hh>
#include <ri/search.hh>

#include "fixtures.hh"
#include "oracles.hh"

#include <doctest.h>

#include <random>
#include <sstream>

using namespace ri;

using Lists = std::vector<std::vector<NodeId>>;

TEST_CASE("initial domains")
{
    auto labels = std::make_shared<LabelRegistry>();

    SUBCASE("missing label gives an empty domain")
    {
        auto p = fixtures::graph(labels, { "X" }, {});
        auto t = fixtures::graph(labels, { "A", "B" }, { { 0, 1 } });
        auto d = initial_domains(p, t);
        CHECK(d.size_of(0) == 0);
        CHECK(any_empty(d));
    }

    SUBCASE("degree filter")
    {
        auto p = fixtures::uniform(labels, 2, { { 0, 1 } });
        auto t = fixtures::uniform(labels, 3, { { 0, 1 }, { 1, 2 } });
        CHECK(initial_domains(p, t).as_lists() == Lists{ { 0, 1 }, { 1, 2 } });
    }

    SUBCASE("identical graphs contain the identity")
    {
        std::mt19937_64 rng(3);
        for (int i = 0 ; i < 20 ; ++i) {
            auto g = oracle::random_graph(rng, 1 + rng() % 15, 0.2, 3, labels, rng() % 2);
            auto d = refine_arc_consistency(initial_domains(g, g), g, g);
            for (NodeId v = 0 ; v < g.node_count() ; ++v)
                CHECK(d.contains(v, v));
        }
    }

    SUBCASE("agrees with a pairwise filter on random graphs")
    {
        std::mt19937_64 rng(4);
        for (int i = 0 ; i < 50 ; ++i) {
            auto p = oracle::random_graph(rng, 1 + rng() % 6, 0.3, 3, labels);
            auto t = oracle::random_graph(rng, 1 + rng() % 20, 0.2, 3, labels);
            auto d = initial_domains(p, t);
            CHECK(d.as_lists() == oracle::initial_domains(p, t));
            for (NodeId v = 0 ; v < p.node_count() ; ++v)
                CHECK(d.size_of(v) == d.row(v).count());
        }
    }
}

TEST_CASE("arc consistency")
{
    auto labels = std::make_shared<LabelRegistry>();

    SUBCASE("unsupported arc empties the tail's domain")
    {
        auto p = fixtures::uniform(labels, 2, { { 0, 1 } });
        auto d = DomainTable::from_lists({ { 0, 1, 2 }, {} }, 3);
        auto t = fixtures::uniform(labels, 3, { { 0, 1 }, { 1, 2 } });
        auto r = refine_arc_consistency(d, p, t);
        CHECK(r.size_of(0) == 0);
        CHECK(any_empty(r));
    }

    SUBCASE("arc labels must match")
    {
        auto p = parse_graph("#p\n2\nA\nA\n1\n0 1 red\n", labels);
        auto t = parse_graph("#t\n3\nA\nA\nA\n2\n0 1 blue\n1 2 red\n", labels);
        auto r = refine_arc_consistency(initial_domains(p, t), p, t);
        CHECK(r.as_lists() == Lists{ { 1 }, { 2 } });
    }

    SUBCASE("fixpoint needs more than one pass on a chain")
    {
        // pattern path 0->1->2->3 against target path of length 3 plus a dangling arc
        auto p = fixtures::uniform(labels, 4, { { 0, 1 }, { 1, 2 }, { 2, 3 } });
        auto t = fixtures::uniform(labels, 6, { { 0, 1 }, { 1, 2 }, { 2, 3 }, { 4, 5 } });
        auto single = refine_arc_consistency(initial_domains(p, t), p, t, AcPasses::single);
        auto fix = refine_arc_consistency(initial_domains(p, t), p, t, AcPasses::fixpoint);
        CHECK(fix.as_lists() == Lists{ { 0 }, { 1 }, { 2 }, { 3 } });
        CHECK(fix.as_lists() == oracle::arc_consistency(initial_domains(p, t).as_lists(), p, t));
        CHECK(fix.total_size() <= single.total_size());
        for (NodeId v = 0 ; v < 4 ; ++v)
            CHECK(fix.row(v).is_subset_of(single.row(v)));
    }

    SUBCASE("agrees with repeated full rescans on random instances")
    {
        std::mt19937_64 rng(8);
        for (int i = 0 ; i < 80 ; ++i) {
            auto p = oracle::random_graph(rng, 1 + rng() % 6, 0.35, 2, labels, rng() % 2);
            auto t = oracle::random_graph(rng, 1 + rng() % 14, 0.25, 2, labels, rng() % 2);
            auto init = initial_domains(p, t);
            auto r = refine_arc_consistency(init, p, t);
            auto expected = oracle::arc_consistency(init.as_lists(), p, t);
            CHECK(r.as_lists() == expected);
            CHECK(refine_arc_consistency(r, p, t) == r);
        }
    }
}

TEST_CASE("forward checking")
{
    SUBCASE("worked example")
    {
        auto d = DomainTable::from_lists({ { 0 }, { 4 }, { 0, 3, 7 }, { 2, 8, 9 }, { 0, 4, 7 } }, 10);
        auto r = forward_check_singletons(d);
        CHECK(r.as_lists() == Lists{ { 0 }, { 4 }, { 3 }, { 2, 8, 9 }, { 7 } });
        CHECK(r.sizes() == std::vector<std::size_t>{ 1, 1, 1, 3, 1 });
        CHECK(forward_check_singletons(r) == r);
    }

    SUBCASE("no singletons, no change")
    {
        auto d = DomainTable::from_lists({ { 0, 1 }, { 1, 2 }, { 0, 2, 3 } }, 4);
        CHECK(forward_check_singletons(d) == d);
    }

    SUBCASE("conflicting singletons")
    {
        auto d = DomainTable::from_lists({ { 5 }, { 5 } }, 6);
        CHECK_THROWS_AS(forward_check_singletons(d), ConflictingSingletons);
    }

    SUBCASE("conflict discovered by propagation")
    {
        auto d = DomainTable::from_lists({ { 1 }, { 1, 2 }, { 1, 2 } }, 3);
        CHECK_THROWS_AS(forward_check_singletons(d), ConflictingSingletons);
    }

    SUBCASE("never grows any domain")
    {
        std::mt19937_64 rng(12);
        for (int i = 0 ; i < 200 ; ++i) {
            Lists lists(1 + rng() % 6);
            for (auto & l : lists) {
                for (NodeId t = 0 ; t < 8 ; ++t)
                    if (rng() % 3 == 0)
                        l.push_back(t);
                if (l.empty())
                    l.push_back(static_cast<NodeId>(rng() % 8));
            }
            auto d = DomainTable::from_lists(lists, 8);
            try {
                auto r = forward_check_singletons(d);
                for (NodeId p = 0 ; p < d.pattern_size() ; ++p) {
                    CHECK(r.row(p).is_subset_of(d.row(p)));
                    CHECK(r.size_of(p) == r.row(p).count());
                }
                CHECK(r.total_size() <= d.total_size());
                CHECK(forward_check_singletons(r) == r);

                std::set<NodeId> pinned;
                for (NodeId p = 0 ; p < r.pattern_size() ; ++p)
                    if (r.size_of(p) == 1)
                        CHECK(pinned.insert(static_cast<NodeId>(r.row(p).find_first())).second);
            }
            catch (const ConflictingSingletons &) {
            }
        }
    }
}

TEST_CASE("any_empty")
{
    CHECK(any_empty(DomainTable::from_lists({ { 1 }, {} }, 3)));
    CHECK(! any_empty(DomainTable::from_lists({ { 0, 1, 2 }, { 0, 1, 2 } }, 3)));

    std::mt19937_64 rng(6);
    for (int i = 0 ; i < 100 ; ++i) {
        Lists lists(1 + rng() % 5);
        for (auto & l : lists)
            for (NodeId t = 0 ; t < 5 ; ++t)
                if (rng() % 4 == 0)
                    l.push_back(t);
        bool expected = false;
        for (auto & l : lists)
            expected = expected || l.empty();
        CHECK(any_empty(DomainTable::from_lists(lists, 5)) == expected);
    }
}

TEST_CASE("dump format")
{
    std::ostringstream s;
    dump_domains(s, DomainTable::from_lists({ { 2, 0 }, {} }, 3));
    CHECK(s.str() == "0: 0 2\n1:\n");
}

TEST_CASE("each stage keeps domains nested and the match set intact")
{
    for (std::uint64_t seed = 0 ; seed < 60 ; ++seed) {
        auto labels = std::make_shared<LabelRegistry>();
        auto inst = generate_small_instance(seed + 500, 6, 10, 3, labels);
        auto truth = enumerate_bruteforce(inst.pattern, inst.target);

        auto d0 = initial_domains(inst.pattern, inst.target);
        auto d1 = refine_arc_consistency(d0, inst.pattern, inst.target);
        std::optional<DomainTable> d2;
        try {
            d2 = forward_check_singletons(d1);
        }
        catch (const ConflictingSingletons &) {
            CHECK(truth.count == 0);
        }

        for (NodeId p = 0 ; p < inst.pattern.node_count() ; ++p) {
            CHECK(d1.row(p).is_subset_of(d0.row(p)));
            if (d2)
                CHECK(d2->row(p).is_subset_of(d1.row(p)));
        }

        for (auto & m : truth.matches)
            for (NodeId p = 0 ; p < m.size() ; ++p) {
                CHECK(d0.contains(p, m[p]));
                CHECK(d1.contains(p, m[p]));
                if (d2)
                    CHECK(d2->contains(p, m[p]));
            }
    }
}
