/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#include <ri/generator.hh>
#include <ri/search.hh>

#include "fixtures.hh"
#include "oracles.hh"

#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

using namespace ri;

namespace
{
    struct Instance
    {
        std::shared_ptr<LabelRegistry> labels = std::make_shared<LabelRegistry>();
    };

    /// Asserts every reported mapping is a valid non-induced match.
    class CheckingSink : public MatchSink
    {
        public:
            const LabeledDigraph & pattern;
            const LabeledDigraph & target;
            std::vector<std::vector<NodeId>> seen;

            CheckingSink(const LabeledDigraph & p, const LabeledDigraph & t) :
                pattern(p),
                target(t)
            {
            }

            auto on_match(std::span<const NodeId> m) -> void override
            {
                std::set<NodeId> distinct(m.begin(), m.end());
                CHECK(distinct.size() == m.size());
                for (NodeId v = 0 ; v < m.size() ; ++v)
                    CHECK(pattern.node_label(v) == target.node_label(m[v]));
                for (auto & a : pattern.arcs())
                    CHECK(target.find_arc(m[a.from], m[a.to]) == a.label);
                seen.emplace_back(m.begin(), m.end());
            }
    };

    auto config_for(Algorithm a) -> EngineConfig
    {
        EngineConfig c;
        c.algorithm = a;
        return c;
    }
}

TEST_CASE("candidate targets")
{
    auto labels = std::make_shared<LabelRegistry>();
    auto p = fixtures::uniform(labels, 2, { { 0, 1 } });
    auto t = fixtures::uniform(labels, 8, { { 0, 1 }, { 2, 7 }, { 3, 2 }, { 2, 5 } });

    VariableOrdering o{ { 0, 1 }, { std::nullopt, 0 } };
    SearchState state{ 2, 8 };

    SUBCASE("root without domains is every target node")
    {
        SearchContext ctx{ p, t, o, nullptr };
        auto c = ctx.candidate_targets(state, 0);
        CHECK(std::vector<NodeId>(c.begin(), c.end()) == std::vector<NodeId>{ 0, 1, 2, 3, 4, 5, 6, 7 });
    }

    SUBCASE("root with domains is the domain")
    {
        auto d = DomainTable::from_lists({ { 2, 7 }, { 5 } }, 8);
        SearchContext ctx{ p, t, o, &d };
        auto c = ctx.candidate_targets(state, 0);
        CHECK(std::vector<NodeId>(c.begin(), c.end()) == std::vector<NodeId>{ 2, 7 });
    }

    SUBCASE("with a parent, the target neighbourhood of its image")
    {
        SearchContext ctx{ p, t, o, nullptr };
        state.push(2);
        auto c = ctx.candidate_targets(state, 1);
        auto expected = oracle::neighbourhood(t, 2);
        CHECK(std::set<NodeId>(c.begin(), c.end()) == expected);
        CHECK(std::vector<NodeId>(c.begin(), c.end()) == std::vector<NodeId>{ 3, 5, 7 });
    }
}

TEST_CASE("pruning rules")
{
    auto labels = std::make_shared<LabelRegistry>();
    auto p = fixtures::graph(labels, { "A", "A", "B" }, { { 0, 1 } });
    auto t = fixtures::graph(labels, { "A", "A", "B", "A" }, { { 0, 1 }, { 3, 0 }, { 1, 3 } });
    VariableOrdering o{ { 0, 1, 2 }, { std::nullopt, 0, std::nullopt } };
    SearchContext ctx{ p, t, o, nullptr };
    SearchState state{ 3, 4 };

    CHECK(ctx.check_candidate(state, 0, 0));
    state.push(0);

    SUBCASE("used target")
    {
        CHECK(! ctx.check_candidate(state, 1, 0));
    }

    SUBCASE("label mismatch")
    {
        CHECK(! ctx.check_candidate(state, 1, 2));
    }

    SUBCASE("degree")
    {
        auto d = fixtures::graph(labels, { "A", "A" }, { { 0, 1 } });
        auto pd = fixtures::graph(labels, { "A", "A", "A" }, { { 0, 1 }, { 0, 2 } });
        SearchContext ctx2{ pd, d, VariableOrdering{ { 0, 1, 2 }, { std::nullopt, 0, 0 } }, nullptr };
        SearchState s2{ 3, 2 };
        CHECK(! ctx2.check_candidate(s2, 0, 0));
    }

    SUBCASE("pattern arc without a target arc in the same direction")
    {
        // 0->1 in the pattern; target has 3->0 but not 0->3
        CHECK(! ctx.check_candidate(state, 1, 3));
        CHECK(ctx.check_candidate(state, 1, 1));
    }

    SUBCASE("domain membership comes first")
    {
        auto d = DomainTable::from_lists({ { 0 }, { 3 }, { 2 } }, 4);
        SearchContext dctx{ p, t, o, &d };
        CHECK(! dctx.check_candidate(state, 1, 1));
    }

    SUBCASE("each check is one search space step")
    {
        auto before = state.search_space_size;
        ctx.check_candidate(state, 1, 0);
        ctx.check_candidate(state, 1, 1);
        CHECK(state.search_space_size == before + 2);
    }
}

TEST_CASE("small enumerations")
{
    auto labels = std::make_shared<LabelRegistry>();

    SUBCASE("single labelled node")
    {
        auto p = fixtures::graph(labels, { "A" }, {});
        auto t = fixtures::graph(labels, { "A", "A", "B" }, {});
        for (auto a : all_algorithms)
            CHECK(enumerate_sequential(p, t, config_for(a)).match_count == 2);
    }

    SUBCASE("directed triangle into itself")
    {
        auto c3 = fixtures::uniform(labels, 3, { { 0, 1 }, { 1, 2 }, { 2, 0 } });
        CHECK(enumerate_bruteforce(c3, c3).count == 3);
        for (auto a : all_algorithms)
            CHECK(enumerate_sequential(c3, c3, config_for(a)).match_count == 3);
    }

    SUBCASE("non-induced: a single arc into a 2-cycle")
    {
        auto p = fixtures::uniform(labels, 2, { { 0, 1 } });
        auto t = fixtures::uniform(labels, 2, { { 0, 1 }, { 1, 0 } });
        CHECK(enumerate_bruteforce(p, t).count == 2);
        for (auto a : all_algorithms) {
            CollectingSink sink;
            enumerate_sequential(p, t, config_for(a), &sink);
            CHECK(sink.sorted_matches() == std::vector<std::vector<NodeId>>{ { 0, 1 }, { 1, 0 } });
        }
    }

    SUBCASE("pattern larger than target")
    {
        auto p = fixtures::uniform(labels, 3, {});
        auto t = fixtures::uniform(labels, 2, {});
        for (auto a : all_algorithms)
            CHECK(enumerate_sequential(p, t, config_for(a)).match_count == 0);
    }

    SUBCASE("empty pattern")
    {
        auto p = fixtures::uniform(labels, 0, {});
        auto t = fixtures::uniform(labels, 2, {});
        CHECK_THROWS_AS(enumerate_sequential(p, t, config_for(Algorithm::ri)), EmptyPattern);
    }

    SUBCASE("graphs from different registries")
    {
        auto p = fixtures::uniform(labels, 1, {});
        auto t = fixtures::uniform(std::make_shared<LabelRegistry>(), 1, {});
        CHECK_THROWS_AS(enumerate_sequential(p, t, config_for(Algorithm::ri)), std::invalid_argument);
    }
}

TEST_CASE("brute force")
{
    auto labels = std::make_shared<LabelRegistry>();

    SUBCASE("arc-free pattern counts injections")
    {
        for (std::size_t k = 1 ; k <= 4 ; ++k)
            for (std::size_t n = 1 ; n <= 7 ; ++n) {
                auto p = fixtures::graph(labels, std::vector<std::string>(k, "A"), {});
                auto t = fixtures::graph(labels, std::vector<std::string>(n, "A"), {});
                std::uint64_t expected = 1;
                for (std::size_t i = 0 ; i < k ; ++i)
                    expected *= (n >= i ? n - i : 0);
                CHECK(enumerate_bruteforce(p, t).count == expected);
                CHECK(enumerate_sequential(p, t, config_for(Algorithm::ri)).match_count == expected);
            }
    }

    SUBCASE("unique label")
    {
        auto p = fixtures::graph(labels, { "Z" }, {});
        auto t = fixtures::graph(labels, { "A", "Z", "A" }, {});
        CHECK(enumerate_bruteforce(p, t).count == 1);
    }

    SUBCASE("size guard")
    {
        auto p = fixtures::uniform(labels, 9, {});
        auto t = fixtures::uniform(labels, 9, {});
        CHECK_THROWS_AS(enumerate_bruteforce(p, t), InstanceTooLarge);
        auto big = fixtures::uniform(labels, 13, {});
        auto small = fixtures::uniform(labels, 2, {});
        CHECK_THROWS_AS(enumerate_bruteforce(small, big), InstanceTooLarge);
    }
}

TEST_CASE("every variant matches brute force on random instances")
{
    for (std::uint64_t seed = 0 ; seed < 200 ; ++seed) {
        auto labels = std::make_shared<LabelRegistry>();
        auto inst = generate_small_instance(seed, 6, 10, 4, labels);
        auto truth = enumerate_bruteforce(inst.pattern, inst.target);

        for (auto a : all_algorithms) {
            CheckingSink sink{ inst.pattern, inst.target };
            auto stats = enumerate_sequential(inst.pattern, inst.target, config_for(a), &sink);
            std::sort(sink.seen.begin(), sink.seen.end());
            CHECK(sink.seen == truth.matches);
            CHECK(stats.match_count == truth.count);
            CHECK(stats.total_time >= stats.preprocessing_time);
        }
    }
}

TEST_CASE("domain check never grows the search space under a fixed ordering")
{
    for (std::uint64_t seed = 0 ; seed < 100 ; ++seed) {
        auto labels = std::make_shared<LabelRegistry>();
        auto inst = generate_small_instance(seed + 7000, 6, 10, 3, labels);
        auto ordering = build_ordering(inst.pattern);
        auto domains = refine_arc_consistency(initial_domains(inst.pattern, inst.target), inst.pattern, inst.target);

        SearchPlan without{ ordering, std::nullopt, false, 0.0 };
        SearchPlan with{ ordering, domains, false, 0.0 };
        auto plain = enumerate_sequential(inst.pattern, inst.target, config_for(Algorithm::ri), without);
        auto pruned = enumerate_sequential(inst.pattern, inst.target, config_for(Algorithm::ri), with);
        CHECK(pruned.match_count == plain.match_count);
        CHECK(pruned.search_space_size <= plain.search_space_size);
    }
}

TEST_CASE("sequential runs are deterministic")
{
    GeneratorSpec spec;
    spec.nodes = 300;
    spec.density = 0.02;
    spec.label_count = 3;
    spec.pattern_arcs = 6;
    spec.seed = 41;
    auto inst = generate_instance(spec, std::make_shared<LabelRegistry>());

    for (auto a : all_algorithms) {
        CollectingSink first, second;
        auto s1 = enumerate_sequential(inst.pattern, inst.target, config_for(a), &first);
        auto s2 = enumerate_sequential(inst.pattern, inst.target, config_for(a), &second);
        CHECK(s1.search_space_size == s2.search_space_size);
        CHECK(first.matches() == second.matches());
        CHECK(s1.match_count >= 1);
    }
}

TEST_CASE("timeout returns partial statistics")
{
    auto labels = std::make_shared<LabelRegistry>();
    // arc-free 5-node pattern into 60 uniform nodes: 60*59*58*57*56 mappings
    auto p = fixtures::uniform(labels, 5, {});
    std::vector<std::string> many(60, "A");
    auto t = fixtures::graph(labels, many, {});
    auto config = config_for(Algorithm::ri);
    config.count_only = true;
    config.time_limit = std::chrono::milliseconds{ 50 };
    auto stats = enumerate_sequential(p, t, config);
    CHECK(stats.timed_out);
    CHECK(stats.match_count > 0);
    CHECK(stats.match_count < 60ull * 59 * 58 * 57 * 56);
}

TEST_CASE("algorithm names")
{
    for (auto a : all_algorithms)
        CHECK(parse_algorithm(algorithm_name(a)) == a);
    CHECK_THROWS_AS(parse_algorithm("vf2"), std::invalid_argument);
}
