/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#include <ri/domains.hh>

#include <deque>
#include <optional>
#include <ostream>
#include <string>

using std::size_t;
using std::to_string;
using std::vector;

using namespace ri;

ConflictingSingletons::ConflictingSingletons(NodeId first, NodeId second, NodeId target) :
    std::runtime_error("pattern nodes " + to_string(first) + " and " + to_string(second)
            + " both have singleton domain {" + to_string(target) + "}")
{
}

DomainTable::DomainTable(size_t pattern_size, size_t target_size) :
    _rows(pattern_size, NodeBitset(target_size)),
    _sizes(pattern_size, 0)
{
}

auto DomainTable::from_lists(const vector<vector<NodeId>> & lists, size_t target_size) -> DomainTable
{
    DomainTable result(lists.size(), target_size);
    for (NodeId p = 0 ; p < lists.size() ; ++p)
        for (auto t : lists[p])
            result.add(p, t);
    return result;
}

auto DomainTable::add(NodeId p, NodeId t) -> void
{
    if (! _rows[p].test(t)) {
        _rows[p].set(t);
        ++_sizes[p];
    }
}

auto DomainTable::remove(NodeId p, NodeId t) -> void
{
    if (_rows[p].test(t)) {
        _rows[p].reset(t);
        --_sizes[p];
    }
}

auto DomainTable::total_size() const -> size_t
{
    size_t result = 0;
    for (auto s : _sizes)
        result += s;
    return result;
}

auto DomainTable::as_lists() const -> vector<vector<NodeId>>
{
    vector<vector<NodeId>> result;
    result.reserve(_rows.size());
    for (auto & r : _rows)
        result.push_back(r.to_vector());
    return result;
}

auto ri::initial_domains(const LabeledDigraph & pattern, const LabeledDigraph & target) -> DomainTable
{
    DomainTable result(pattern.node_count(), target.node_count());
    for (NodeId p = 0 ; p < pattern.node_count() ; ++p)
        for (NodeId t = 0 ; t < target.node_count() ; ++t)
            if (pattern.node_label(p) == target.node_label(t)
                    && target.in_degree(t) >= pattern.in_degree(p)
                    && target.out_degree(t) >= pattern.out_degree(p))
                result.add(p, t);
    return result;
}

namespace
{
    auto has_support(const DomainTable & domains, const LabeledDigraph & pattern, const LabeledDigraph & target,
            NodeId p, NodeId t) -> bool
    {
        auto p_outs = pattern.out_neighbours(p);
        auto p_out_labels = pattern.out_arc_labels(p);
        auto t_outs = target.out_neighbours(t);
        auto t_out_labels = target.out_arc_labels(t);
        for (size_t i = 0 ; i < p_outs.size() ; ++i) {
            bool found = false;
            for (size_t j = 0 ; j < t_outs.size() && ! found ; ++j)
                found = t_out_labels[j] == p_out_labels[i] && domains.contains(p_outs[i], t_outs[j]);
            if (! found)
                return false;
        }

        auto p_ins = pattern.in_neighbours(p);
        auto p_in_labels = pattern.in_arc_labels(p);
        auto t_ins = target.in_neighbours(t);
        auto t_in_labels = target.in_arc_labels(t);
        for (size_t i = 0 ; i < p_ins.size() ; ++i) {
            bool found = false;
            for (size_t j = 0 ; j < t_ins.size() && ! found ; ++j)
                found = t_in_labels[j] == p_in_labels[i] && domains.contains(p_ins[i], t_ins[j]);
            if (! found)
                return false;
        }

        return true;
    }

    /// Returns true if anything was removed from D(p).
    auto revise(DomainTable & domains, const LabeledDigraph & pattern, const LabeledDigraph & target, NodeId p) -> bool
    {
        vector<NodeId> doomed;
        domains.row(p).for_each([&] (size_t t) {
                if (! has_support(domains, pattern, target, p, static_cast<NodeId>(t)))
                    doomed.push_back(static_cast<NodeId>(t));
                });
        for (auto t : doomed)
            domains.remove(p, t);
        return ! doomed.empty();
    }
}

auto ri::refine_arc_consistency(DomainTable domains, const LabeledDigraph & pattern, const LabeledDigraph & target,
        AcPasses passes) -> DomainTable
{
    auto n = pattern.node_count();

    if (passes == AcPasses::single) {
        for (NodeId p = 0 ; p < n ; ++p)
            revise(domains, pattern, target, p);
        return domains;
    }

    std::deque<NodeId> queue;
    vector<bool> queued(n, true);
    for (NodeId p = 0 ; p < n ; ++p)
        queue.push_back(p);

    while (! queue.empty()) {
        auto p = queue.front();
        queue.pop_front();
        queued[p] = false;

        if (revise(domains, pattern, target, p)) {
            for (auto w : pattern.neighbourhood(p))
                if (! queued[w]) {
                    queued[w] = true;
                    queue.push_back(w);
                }
        }
    }

    return domains;
}

auto ri::forward_check_singletons(DomainTable domains) -> DomainTable
{
    auto n = domains.pattern_size();

    // singleton pattern node pinned to each target, once propagated
    vector<std::optional<NodeId>> owner(domains.target_size());
    vector<bool> propagated(n, false);

    std::deque<NodeId> queue;
    for (NodeId p = 0 ; p < n ; ++p)
        if (1 == domains.size_of(p))
            queue.push_back(p);

    while (! queue.empty()) {
        auto p = queue.front();
        queue.pop_front();
        if (propagated[p])
            continue;
        propagated[p] = true;

        auto t = static_cast<NodeId>(domains.row(p).find_first());
        if (owner[t])
            throw ConflictingSingletons(*owner[t], p, t);
        owner[t] = p;

        for (NodeId q = 0 ; q < n ; ++q) {
            if (q == p || ! domains.contains(q, t))
                continue;
            if (1 == domains.size_of(q))
                throw ConflictingSingletons(p, q, t);
            domains.remove(q, t);
            if (1 == domains.size_of(q))
                queue.push_back(q);
        }
    }

    return domains;
}

auto ri::any_empty(const DomainTable & domains) -> bool
{
    for (NodeId p = 0 ; p < domains.pattern_size() ; ++p)
        if (0 == domains.size_of(p))
            return true;
    return false;
}

auto ri::dump_domains(std::ostream & out, const DomainTable & domains) -> void
{
    for (NodeId p = 0 ; p < domains.pattern_size() ; ++p) {
        out << p << ':';
        domains.row(p).for_each([&] (size_t t) { out << ' ' << t; });
        out << '\n';
    }
}
