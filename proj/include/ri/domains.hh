/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#ifndef RI_GUARD_RI_DOMAINS_HH
#define RI_GUARD_RI_DOMAINS_HH 1

#include <ri/bitset.hh>
#include <ri/graph.hh>

#include <iosfwd>
#include <stdexcept>
#include <vector>

namespace ri
{
    /// Two pattern nodes were pinned to the same target node, so there are no matches.
    class ConflictingSingletons : public std::runtime_error
    {
        public:
            ConflictingSingletons(NodeId first, NodeId second, NodeId target);
    };

    enum class AcPasses
    {
        single,
        fixpoint
    };

    /**
     * One bitset over target nodes per pattern node, with cached
     * cardinalities. All mutation goes through remove() so the cache stays
     * exact.
     */
    class DomainTable
    {
        private:
            std::vector<NodeBitset> _rows;
            std::vector<std::size_t> _sizes;

        public:
            DomainTable() = default;
            DomainTable(std::size_t pattern_size, std::size_t target_size);

            /// From explicit member lists, mostly for tests.
            static auto from_lists(const std::vector<std::vector<NodeId>> & lists, std::size_t target_size) -> DomainTable;

            auto pattern_size() const -> std::size_t
            {
                return _rows.size();
            }

            auto target_size() const -> std::size_t
            {
                return _rows.empty() ? 0 : _rows.front().size();
            }

            auto row(NodeId p) const -> const NodeBitset &
            {
                return _rows[p];
            }

            auto contains(NodeId p, NodeId t) const -> bool
            {
                return _rows[p].test(t);
            }

            auto size_of(NodeId p) const -> std::size_t
            {
                return _sizes[p];
            }

            auto sizes() const -> const std::vector<std::size_t> &
            {
                return _sizes;
            }

            auto add(NodeId p, NodeId t) -> void;
            auto remove(NodeId p, NodeId t) -> void;

            auto total_size() const -> std::size_t;

            auto as_lists() const -> std::vector<std::vector<NodeId>>;

            auto operator== (const DomainTable &) const -> bool = default;
    };

    /// Same label, and in- and out-degree at least those of the pattern node.
    auto initial_domains(const LabeledDigraph & pattern, const LabeledDigraph & target) -> DomainTable;

    /**
     * Remove every target node lacking, for some pattern arc at p, a
     * compatible target arc to a node in the neighbour's domain.
     */
    auto refine_arc_consistency(DomainTable domains, const LabeledDigraph & pattern, const LabeledDigraph & target,
            AcPasses passes = AcPasses::fixpoint) -> DomainTable;

    /// Throws ConflictingSingletons when injectivity among singletons fails.
    auto forward_check_singletons(DomainTable domains) -> DomainTable;

    auto any_empty(const DomainTable & domains) -> bool;

    /// One line per pattern node: "node: t0 t1 ...".
    auto dump_domains(std::ostream & out, const DomainTable & domains) -> void;
}

#endif
