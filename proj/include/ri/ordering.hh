/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#ifndef RI_GUARD_RI_ORDERING_HH
#define RI_GUARD_RI_ORDERING_HH 1

#include <ri/graph.hh>

#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace ri
{
    class EmptyPattern : public std::invalid_argument
    {
        public:
            EmptyPattern() :
                std::invalid_argument("pattern graph has no nodes")
            {
            }
    };

    /**
     * Static visitation order of pattern nodes. parents[i] is the earliest
     * node in order adjacent (either direction) to order[i], if any; its
     * image in the target seeds the candidates for position i.
     */
    struct VariableOrdering
    {
        std::vector<NodeId> order;
        std::vector<std::optional<NodeId>> parents;

        auto operator== (const VariableOrdering &) const -> bool = default;
    };

    struct OrderingOptions
    {
        bool singleton_first = false;
        bool domain_tiebreak = false;
        std::optional<std::vector<std::size_t>> domain_sizes;
    };

    /// Number of neighbours of v already in the prefix. in_prefix is indexed by pattern node.
    auto weight_m(const std::vector<bool> & in_prefix, NodeId v, const LabeledDigraph & pattern) -> std::size_t;

    /// Number of prefix nodes w sharing a neighbour x outside the prefix with v.
    auto weight_n(const std::vector<bool> & in_prefix, NodeId v, const LabeledDigraph & pattern) -> std::size_t;

    /**
     * Greedy constraint-first ordering: repeatedly pick the node maximising
     * (w_m, w_n, total degree), then optionally smaller domain, then smaller
     * id. With singleton_first, nodes whose domain has one element are moved
     * to the front, keeping their relative order.
     */
    auto build_ordering(const LabeledDigraph & pattern, const OrderingOptions & options = {}) -> VariableOrdering;

    /// Lines "pos node parent", parent written as '-' when absent.
    auto dump_ordering(std::ostream & out, const VariableOrdering & ordering) -> void;
}

#endif
