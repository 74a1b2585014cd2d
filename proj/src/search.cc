/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#include <ri/search.hh>

#include <algorithm>
#include <numeric>
#include <utility>

using std::optional;
using std::size_t;
using std::span;
using std::string_view;
using std::uint64_t;
using std::vector;

using std::chrono::duration;
using std::chrono::steady_clock;

using namespace ri;

auto ri::algorithm_name(Algorithm a) -> string_view
{
    switch (a) {
        case Algorithm::ri:          return "ri";
        case Algorithm::ri_ds:       return "ri-ds";
        case Algorithm::ri_ds_si:    return "ri-ds-si";
        case Algorithm::ri_ds_si_fc: return "ri-ds-si-fc";
    }
    return "?";
}

auto ri::parse_algorithm(string_view name) -> Algorithm
{
    for (auto a : all_algorithms)
        if (algorithm_name(a) == name)
            return a;
    throw std::invalid_argument("unknown algorithm '" + std::string{ name } + "'");
}

auto ri::uses_domains(Algorithm a) -> bool
{
    return a != Algorithm::ri;
}

auto CollectingSink::on_match(span<const NodeId> mapping) -> void
{
    std::lock_guard<std::mutex> guard{ _mutex };
    _matches.emplace_back(mapping.begin(), mapping.end());
}

auto CollectingSink::sorted_matches() const -> vector<vector<NodeId>>
{
    auto result = _matches;
    std::sort(result.begin(), result.end());
    return result;
}

auto ri::prepare_search(const LabeledDigraph & pattern, const LabeledDigraph & target, const EngineConfig & config) -> SearchPlan
{
    if (pattern.labels() != target.labels())
        throw std::invalid_argument("pattern and target must share a label registry");
    if (0 == pattern.node_count())
        throw EmptyPattern{};

    auto start = steady_clock::now();
    SearchPlan plan;

    if (! uses_domains(config.algorithm)) {
        plan.ordering = build_ordering(pattern);
    }
    else {
        auto domains = refine_arc_consistency(initial_domains(pattern, target), pattern, target, config.ac_passes);
        if (config.algorithm == Algorithm::ri_ds_si_fc && ! any_empty(domains)) {
            try {
                domains = forward_check_singletons(domains);
            }
            catch (const ConflictingSingletons &) {
                plan.provably_empty = true;
            }
        }
        if (any_empty(domains))
            plan.provably_empty = true;

        OrderingOptions options;
        options.singleton_first = true;
        options.domain_tiebreak = config.algorithm == Algorithm::ri_ds_si || config.algorithm == Algorithm::ri_ds_si_fc;
        options.domain_sizes = domains.sizes();
        plan.ordering = build_ordering(pattern, options);
        plan.domains = std::move(domains);
    }

    plan.preprocessing_time = duration<double>(steady_clock::now() - start).count();
    return plan;
}

SearchContext::SearchContext(const LabeledDigraph & pattern, const LabeledDigraph & target,
        const VariableOrdering & ordering, const DomainTable * domains, bool skip_structure_check) :
    _pattern(pattern),
    _target(target),
    _domains(domains),
    _skip_structure_check(skip_structure_check)
{
    auto n = ordering.order.size();
    vector<size_t> position_of(pattern.node_count());
    for (size_t i = 0 ; i < n ; ++i)
        position_of[ordering.order[i]] = i;

    _positions.resize(n);
    for (size_t i = 0 ; i < n ; ++i) {
        auto & pos = _positions[i];
        auto v = ordering.order[i];
        pos.pattern_node = v;
        pos.label = pattern.node_label(v);
        pos.in_degree = pattern.in_degree(v);
        pos.out_degree = pattern.out_degree(v);
        if (ordering.parents[i])
            pos.parent_position = position_of[*ordering.parents[i]];

        auto outs = pattern.out_neighbours(v);
        auto out_labels = pattern.out_arc_labels(v);
        for (size_t k = 0 ; k < outs.size() ; ++k)
            if (position_of[outs[k]] < i)
                pos.constraints.push_back({ position_of[outs[k]], true, out_labels[k] });

        auto ins = pattern.in_neighbours(v);
        auto in_labels = pattern.in_arc_labels(v);
        for (size_t k = 0 ; k < ins.size() ; ++k)
            if (position_of[ins[k]] < i)
                pos.constraints.push_back({ position_of[ins[k]], false, in_labels[k] });

        if (_domains && ! pos.parent_position)
            pos.root_candidates = _domains->row(v).to_vector();
    }

    if (! _domains) {
        _all_targets.resize(target.node_count());
        std::iota(_all_targets.begin(), _all_targets.end(), NodeId{ 0 });
    }
}

auto SearchContext::candidate_targets(const SearchState & state, size_t position) const -> span<const NodeId>
{
    auto & pos = _positions[position];
    if (pos.parent_position)
        return _target.neighbourhood(state.image_at(*pos.parent_position));
    else if (_domains)
        return pos.root_candidates;
    else
        return _all_targets;
}

auto SearchContext::check_candidate(SearchState & state, size_t position, NodeId t) const -> bool
{
    ++state.search_space_size;
    auto & pos = _positions[position];

    if (_domains && ! _domains->contains(pos.pattern_node, t))
        return false;

    if (state.is_used(t))
        return false;

    if (pos.label != _target.node_label(t))
        return false;

    if (pos.in_degree > _target.in_degree(t) || pos.out_degree > _target.out_degree(t))
        return false;

    if (_skip_structure_check)
        return true;

    for (auto & c : pos.constraints) {
        auto other = state.image_at(c.earlier_position);
        auto label = c.outgoing ? _target.find_arc(t, other) : _target.find_arc(other, t);
        if (! label || *label != c.label)
            return false;
    }

    return true;
}

auto SearchContext::write_mapping(const SearchState & state, vector<NodeId> & by_pattern_node) const -> void
{
    by_pattern_node.resize(_positions.size());
    for (size_t i = 0 ; i < _positions.size() ; ++i)
        by_pattern_node[_positions[i].pattern_node] = state.image_at(i);
}

namespace
{
    struct SequentialSearch
    {
        const SearchContext & context;
        MatchSink * sink;
        bool count_only;
        steady_clock::time_point deadline;

        SearchState state;
        vector<NodeId> scratch;
        uint64_t matches = 0;
        uint64_t next_clock_check = deadline_check_interval;
        bool timed_out = false;

        auto report() -> void
        {
            ++matches;
            if (sink && ! count_only) {
                context.write_mapping(state, scratch);
                sink->on_match(scratch);
            }
        }

        auto descend(size_t position) -> void
        {
            auto last = position + 1 == context.pattern_size();
            for (auto t : context.candidate_targets(state, position)) {
                bool accepted = context.check_candidate(state, position, t);

                if (state.search_space_size >= next_clock_check) {
                    next_clock_check += deadline_check_interval;
                    if (steady_clock::now() >= deadline)
                        timed_out = true;
                }
                if (timed_out)
                    return;

                if (! accepted)
                    continue;

                state.push(t);
                if (last)
                    report();
                else
                    descend(position + 1);
                state.pop();

                if (timed_out)
                    return;
            }
        }
    };
}

auto ri::enumerate_sequential(const LabeledDigraph & pattern, const LabeledDigraph & target,
        const EngineConfig & config, MatchSink * sink) -> SearchStats
{
    auto plan = prepare_search(pattern, target, config);
    return enumerate_sequential(pattern, target, config, plan, sink);
}

auto ri::enumerate_sequential(const LabeledDigraph & pattern, const LabeledDigraph & target,
        const EngineConfig & config, const SearchPlan & plan, MatchSink * sink) -> SearchStats
{
    SearchStats stats;
    stats.preprocessing_time = plan.preprocessing_time;

    auto start = steady_clock::now();
    if (! plan.provably_empty) {
        SearchContext context{ pattern, target, plan.ordering, plan.domains ? &*plan.domains : nullptr,
            config.testing_skip_structure_check };
        SequentialSearch search{ context, sink, config.count_only,
            start + std::chrono::duration_cast<steady_clock::duration>(config.time_limit),
            SearchState{ pattern.node_count(), target.node_count() }, {} };
        search.descend(0);

        stats.search_space_size = search.state.search_space_size;
        stats.match_count = search.matches;
        stats.timed_out = search.timed_out;
    }
    stats.matching_time = duration<double>(steady_clock::now() - start).count();
    stats.total_time = stats.preprocessing_time + stats.matching_time;
    return stats;
}

namespace
{
    struct BruteForce
    {
        const LabeledDigraph & pattern;
        const LabeledDigraph & target;
        vector<NodeId> mapping;
        vector<bool> used;
        BruteForceResult result;

        auto target_arc_label(NodeId u, NodeId v) const -> optional<LabelId>
        {
            for (auto & a : target.arcs())
                if (a.from == u && a.to == v)
                    return a.label;
            return std::nullopt;
        }

        auto is_match() const -> bool
        {
            for (NodeId v = 0 ; v < pattern.node_count() ; ++v)
                if (pattern.node_label(v) != target.node_label(mapping[v]))
                    return false;
            for (auto & a : pattern.arcs()) {
                auto l = target_arc_label(mapping[a.from], mapping[a.to]);
                if (! l || *l != a.label)
                    return false;
            }
            return true;
        }

        auto extend(size_t v) -> void
        {
            if (v == pattern.node_count()) {
                if (is_match()) {
                    ++result.count;
                    result.matches.push_back(mapping);
                }
                return;
            }
            for (NodeId t = 0 ; t < target.node_count() ; ++t) {
                if (used[t])
                    continue;
                used[t] = true;
                mapping[v] = t;
                extend(v + 1);
                used[t] = false;
            }
        }
    };
}

auto ri::enumerate_bruteforce(const LabeledDigraph & pattern, const LabeledDigraph & target) -> BruteForceResult
{
    if (pattern.node_count() > 8 || target.node_count() > 12)
        throw InstanceTooLarge{};

    BruteForce search{ pattern, target, vector<NodeId>(pattern.node_count()), vector<bool>(target.node_count(), false), {} };
    search.extend(0);
    std::sort(search.result.matches.begin(), search.result.matches.end());
    return std::move(search.result);
}
