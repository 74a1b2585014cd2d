/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#include <ri/generator.hh>

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_set>
#include <vector>

using std::mt19937_64;
using std::shared_ptr;
using std::size_t;
using std::string;
using std::string_view;
using std::to_string;
using std::uint64_t;
using std::vector;

using namespace ri;

auto ri::parse_label_distribution(string_view name) -> LabelDistribution
{
    if (name == "uniform")
        return LabelDistribution::uniform;
    if (name == "normal" || name == "normal-approx")
        return LabelDistribution::normal;
    throw std::invalid_argument("unknown label distribution '" + string{ name } + "'");
}

auto ri::parse_extraction_mode(string_view name) -> ExtractionMode
{
    if (name == "dense")
        return ExtractionMode::dense;
    if (name == "semi-dense")
        return ExtractionMode::semi_dense;
    if (name == "sparse")
        return ExtractionMode::sparse;
    throw std::invalid_argument("unknown extraction mode '" + string{ name } + "'");
}

namespace
{
    auto pick(mt19937_64 & rng, size_t n) -> size_t
    {
        return std::uniform_int_distribution<size_t>(0, n - 1)(rng);
    }

    auto draw_labels(const GeneratorSpec & spec, LabelRegistry & labels, mt19937_64 & rng) -> vector<LabelId>
    {
        vector<LabelId> ids;
        for (size_t i = 0 ; i < spec.label_count ; ++i)
            ids.push_back(labels.intern_node_label("l" + to_string(i)));

        vector<LabelId> result(spec.nodes);
        if (spec.distribution == LabelDistribution::uniform) {
            for (auto & l : result)
                l = ids[pick(rng, ids.size())];
        }
        else {
            double mean = spec.label_mean.value_or(spec.label_count / 2.0);
            double sigma = spec.label_sigma.value_or(spec.label_count / 6.0);
            std::normal_distribution<double> normal(mean, sigma > 0 ? sigma : 1e-9);
            for (auto & l : result) {
                auto x = std::lround(normal(rng));
                x = std::clamp<long>(x, 0, static_cast<long>(spec.label_count) - 1);
                l = ids[x];
            }
        }
        return result;
    }
}

auto ri::generate_target(const GeneratorSpec & spec, shared_ptr<LabelRegistry> labels, mt19937_64 & rng) -> LabeledDigraph
{
    if (0 == spec.nodes)
        throw InfeasibleSpec("target needs at least one node");
    if (0 == spec.label_count)
        throw InfeasibleSpec("need at least one node label");
    if (! (spec.density >= 0.0 && spec.density <= 1.0))
        throw InfeasibleSpec("density must lie in [0, 1]");

    auto node_labels = draw_labels(spec, *labels, rng);

    uint64_t n = spec.nodes;
    uint64_t possible = n * (n - 1);
    auto wanted = static_cast<uint64_t>(std::llround(spec.density * static_cast<double>(possible)));

    vector<Arc> arcs;
    arcs.reserve(wanted);
    auto arc_of = [&] (uint64_t code) {
        // code enumerates ordered pairs without the diagonal
        auto from = code / (n - 1), to = code % (n - 1);
        if (to >= from)
            ++to;
        return Arc{ static_cast<NodeId>(from), static_cast<NodeId>(to), no_arc_label };
    };

    if (possible <= 4'000'000 || wanted * 2 > possible) {
        vector<uint64_t> codes(possible);
        for (uint64_t i = 0 ; i < possible ; ++i)
            codes[i] = i;
        for (uint64_t i = 0 ; i < wanted ; ++i)
            std::swap(codes[i], codes[i + std::uniform_int_distribution<uint64_t>(0, possible - i - 1)(rng)]);
        for (uint64_t i = 0 ; i < wanted ; ++i)
            arcs.push_back(arc_of(codes[i]));
    }
    else {
        std::unordered_set<uint64_t> seen;
        seen.reserve(wanted * 2);
        while (arcs.size() < wanted) {
            auto code = std::uniform_int_distribution<uint64_t>(0, possible - 1)(rng);
            if (seen.insert(code).second)
                arcs.push_back(arc_of(code));
        }
    }

    if (spec.arc_label_count > 0) {
        vector<LabelId> ids;
        for (size_t i = 0 ; i < spec.arc_label_count ; ++i)
            ids.push_back(labels->intern_arc_label("e" + to_string(i)));
        for (auto & a : arcs)
            a.label = ids[pick(rng, ids.size())];
    }

    return LabeledDigraph{ "target-" + to_string(spec.seed), std::move(labels), std::move(node_labels), std::move(arcs) };
}

auto ri::extract_pattern(const LabeledDigraph & target, size_t arc_count, ExtractionMode mode,
        mt19937_64 & rng, const string & name) -> LabeledDigraph
{
    if (0 == arc_count)
        throw InfeasibleSpec("pattern needs at least one arc");
    if (arc_count > target.arc_count())
        throw InfeasibleSpec("pattern arcs (" + to_string(arc_count) + ") exceed target arcs ("
                + to_string(target.arc_count()) + ")");

    auto arcs = target.arcs();
    vector<size_t> out_start(target.node_count() + 1, 0);
    for (auto & a : arcs)
        ++out_start[a.from + 1];
    for (size_t i = 0 ; i < target.node_count() ; ++i)
        out_start[i + 1] += out_start[i];

    auto arc_index = [&] (NodeId from, NodeId to) -> size_t {
        auto outs = target.out_neighbours(from);
        return out_start[from] + (std::lower_bound(outs.begin(), outs.end(), to) - outs.begin());
    };

    vector<NodeId> starts;
    for (NodeId v = 0 ; v < target.node_count() ; ++v)
        if (target.total_degree(v) > 0)
            starts.push_back(v);
    std::shuffle(starts.begin(), starts.end(), rng);

    for (size_t attempt = 0 ; attempt < std::min<size_t>(starts.size(), 64) ; ++attempt) {
        vector<std::int64_t> local(target.node_count(), -1);
        vector<NodeId> nodes;
        vector<bool> taken(arcs.size(), false);
        vector<size_t> frontier, chosen;

        auto add_node = [&] (NodeId v) {
            local[v] = static_cast<std::int64_t>(nodes.size());
            nodes.push_back(v);
            for (auto w : target.out_neighbours(v))
                frontier.push_back(arc_index(v, w));
            for (auto u : target.in_neighbours(v))
                frontier.push_back(arc_index(u, v));
        };

        add_node(starts[attempt]);
        while (chosen.size() < arc_count) {
            // discard arcs already used
            frontier.erase(std::remove_if(frontier.begin(), frontier.end(), [&] (size_t i) { return taken[i]; }),
                    frontier.end());
            if (frontier.empty())
                break;

            bool want_internal = mode == ExtractionMode::dense
                || (mode == ExtractionMode::semi_dense && 0 == (rng() & 1));
            size_t choice = pick(rng, frontier.size());
            for (size_t tries = 0 ; tries < 32 ; ++tries) {
                auto & a = arcs[frontier[choice]];
                bool internal = local[a.from] >= 0 && local[a.to] >= 0;
                if (internal == want_internal)
                    break;
                choice = pick(rng, frontier.size());
            }

            auto i = frontier[choice];
            taken[i] = true;
            chosen.push_back(i);
            if (local[arcs[i].from] < 0)
                add_node(arcs[i].from);
            if (local[arcs[i].to] < 0)
                add_node(arcs[i].to);
        }

        if (chosen.size() < arc_count)
            continue;

        vector<LabelId> node_labels;
        for (auto v : nodes)
            node_labels.push_back(target.node_label(v));
        vector<Arc> pattern_arcs;
        for (auto i : chosen)
            pattern_arcs.push_back(Arc{ static_cast<NodeId>(local[arcs[i].from]), static_cast<NodeId>(local[arcs[i].to]), arcs[i].label });
        return LabeledDigraph{ name, target.labels(), std::move(node_labels), std::move(pattern_arcs) };
    }

    throw InfeasibleSpec("no connected component of the target holds " + to_string(arc_count) + " arcs");
}

auto ri::generate_instance(const GeneratorSpec & spec, shared_ptr<LabelRegistry> labels) -> GeneratedInstance
{
    mt19937_64 rng(spec.seed);
    auto target = generate_target(spec, std::move(labels), rng);
    auto pattern = extract_pattern(target, spec.pattern_arcs, spec.mode, rng, "pattern-" + to_string(spec.seed));
    return GeneratedInstance{ std::move(target), std::move(pattern) };
}

auto ri::generate_small_instance(uint64_t seed, size_t max_pattern_nodes, size_t max_target_nodes,
        size_t max_labels, shared_ptr<LabelRegistry> labels) -> GeneratedInstance
{
    mt19937_64 rng(seed);
    auto between = [&] (size_t lo, size_t hi) { return std::uniform_int_distribution<size_t>(lo, hi)(rng); };

    GeneratorSpec spec;
    spec.nodes = between(1, max_target_nodes);
    spec.density = std::uniform_real_distribution<double>(0.1, 0.6)(rng);
    spec.label_count = between(1, max_labels);
    spec.arc_label_count = 0 == (rng() % 4) ? between(1, 2) : 0;
    spec.seed = seed;
    auto target = generate_target(spec, labels, rng);

    auto random_pattern = [&] {
        GeneratorSpec p = spec;
        p.nodes = between(1, std::min(max_pattern_nodes, spec.nodes + 1));
        p.density = std::uniform_real_distribution<double>(0.0, 0.5)(rng);
        auto g = generate_target(p, labels, rng);
        return LabeledDigraph{ "pattern-" + to_string(seed), labels,
            vector<LabelId>(g.node_labels().begin(), g.node_labels().end()),
            vector<Arc>(g.arcs().begin(), g.arcs().end()) };
    };

    if (0 == rng() % 3 || target.arc_count() == 0 || max_pattern_nodes < 2)
        return GeneratedInstance{ std::move(target), random_pattern() };

    auto mode = static_cast<ExtractionMode>(rng() % 3);
    // extraction adds at most one node per arc, so this keeps the node bound
    auto arc_count = between(1, std::min(target.arc_count(), max_pattern_nodes - 1));
    try {
        auto pattern = extract_pattern(target, arc_count, mode, rng, "pattern-" + to_string(seed));
        if (pattern.node_count() <= max_pattern_nodes)
            return GeneratedInstance{ std::move(target), std::move(pattern) };
    }
    catch (const InfeasibleSpec &) {
    }
    return GeneratedInstance{ std::move(target), random_pattern() };
}
