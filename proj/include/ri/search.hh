/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#ifndef RI_GUARD_RI_SEARCH_HH
#define RI_GUARD_RI_SEARCH_HH 1

#include <ri/bitset.hh>
#include <ri/domains.hh>
#include <ri/graph.hh>
#include <ri/ordering.hh>

#include <atomic>
#include <chrono>
#include <cstdint>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ri
{
    enum class Algorithm
    {
        ri,
        ri_ds,
        ri_ds_si,
        ri_ds_si_fc
    };

    auto algorithm_name(Algorithm a) -> std::string_view;

    /// Throws std::invalid_argument for an unknown name.
    auto parse_algorithm(std::string_view name) -> Algorithm;

    inline constexpr Algorithm all_algorithms[] = { Algorithm::ri, Algorithm::ri_ds, Algorithm::ri_ds_si, Algorithm::ri_ds_si_fc };

    auto uses_domains(Algorithm a) -> bool;

    struct EngineConfig
    {
        Algorithm algorithm = Algorithm::ri;
        AcPasses ac_passes = AcPasses::fixpoint;
        std::chrono::duration<double> time_limit = std::chrono::seconds{ 180 };
        bool count_only = false;

        /// Fault injection for oracle tests: accepts candidates without checking pattern arcs.
        bool testing_skip_structure_check = false;
    };

    struct SearchStats
    {
        double preprocessing_time = 0.0;
        double matching_time = 0.0;
        double total_time = 0.0;
        std::uint64_t search_space_size = 0;
        std::uint64_t match_count = 0;
        std::uint64_t steals_ok = 0;
        std::uint64_t steals_failed = 0;
        bool timed_out = false;
    };

    /**
     * Receives complete matches as a target node per pattern node. Sinks
     * used with the parallel scheduler must tolerate concurrent calls.
     */
    class MatchSink
    {
        public:
            virtual ~MatchSink() = default;

            virtual auto on_match(std::span<const NodeId> mapping) -> void = 0;
    };

    class CountingSink : public MatchSink
    {
        private:
            std::atomic<std::uint64_t> _count{ 0 };

        public:
            auto on_match(std::span<const NodeId>) -> void override
            {
                _count.fetch_add(1, std::memory_order_relaxed);
            }

            auto count() const -> std::uint64_t
            {
                return _count.load();
            }
    };

    /// Stores every match, in arrival order.
    class CollectingSink : public MatchSink
    {
        private:
            std::mutex _mutex;
            std::vector<std::vector<NodeId>> _matches;

        public:
            auto on_match(std::span<const NodeId> mapping) -> void override;

            auto matches() const -> const std::vector<std::vector<NodeId>> &
            {
                return _matches;
            }

            /// Lexicographically sorted copy.
            auto sorted_matches() const -> std::vector<std::vector<NodeId>>;
    };

    /// Ordering and domains for one (pattern, target, algorithm) instance.
    struct SearchPlan
    {
        VariableOrdering ordering;
        std::optional<DomainTable> domains;

        /// Some domain emptied or singletons conflicted: no search needed.
        bool provably_empty = false;
        double preprocessing_time = 0.0;
    };

    /// Throws std::invalid_argument if the graphs use different label registries, EmptyPattern for an empty pattern.
    auto prepare_search(const LabeledDigraph & pattern, const LabeledDigraph & target, const EngineConfig & config) -> SearchPlan;

    /**
     * Partial mapping as a stack: entry i is the image of the i-th node in
     * the ordering. used_targets mirrors the stack contents.
     */
    class SearchState
    {
        private:
            std::vector<NodeId> _mapping;
            NodeBitset _used;

        public:
            std::uint64_t search_space_size = 0;

            SearchState(std::size_t pattern_size, std::size_t target_size) :
                _used(target_size)
            {
                _mapping.reserve(pattern_size);
            }

            auto depth() const -> std::size_t
            {
                return _mapping.size();
            }

            auto mapping() const -> std::span<const NodeId>
            {
                return _mapping;
            }

            auto image_at(std::size_t position) const -> NodeId
            {
                return _mapping[position];
            }

            auto is_used(NodeId t) const -> bool
            {
                return _used.test(t);
            }

            auto push(NodeId t) -> void
            {
                _mapping.push_back(t);
                _used.set(t);
            }

            auto pop() -> void
            {
                _used.reset(_mapping.back());
                _mapping.pop_back();
            }

            auto truncate(std::size_t depth) -> void
            {
                while (_mapping.size() > depth)
                    pop();
            }

            auto assign_prefix(std::span<const NodeId> prefix) -> void
            {
                truncate(0);
                for (auto t : prefix)
                    push(t);
            }
    };

    /**
     * Everything the search needs per ordering position, precomputed from
     * the immutable pattern, target, ordering and domains. Shared read-only
     * between workers.
     */
    class SearchContext
    {
        private:
            struct ArcConstraint
            {
                std::size_t earlier_position;
                bool outgoing;
                LabelId label;
            };

            struct Position
            {
                NodeId pattern_node;
                LabelId label;
                std::size_t in_degree, out_degree;
                std::optional<std::size_t> parent_position;
                std::vector<ArcConstraint> constraints;
                std::vector<NodeId> root_candidates;
            };

            const LabeledDigraph & _pattern;
            const LabeledDigraph & _target;
            const DomainTable * _domains;
            bool _skip_structure_check;
            std::vector<Position> _positions;
            std::vector<NodeId> _all_targets;

        public:
            SearchContext(const LabeledDigraph & pattern, const LabeledDigraph & target,
                    const VariableOrdering & ordering, const DomainTable * domains,
                    bool skip_structure_check = false);

            auto pattern() const -> const LabeledDigraph &
            {
                return _pattern;
            }

            auto target() const -> const LabeledDigraph &
            {
                return _target;
            }

            auto pattern_size() const -> std::size_t
            {
                return _positions.size();
            }

            auto pattern_node_at(std::size_t position) const -> NodeId
            {
                return _positions[position].pattern_node;
            }

            /**
             * Target neighbourhood of the parent's image, or, without a
             * parent, every target node (no domains) or the domain.
             */
            auto candidate_targets(const SearchState & state, std::size_t position) const -> std::span<const NodeId>;

            /// Pruning rules in order, cheapest first. Counts one search space step.
            auto check_candidate(SearchState & state, std::size_t position, NodeId t) const -> bool;

            /// Mapping indexed by pattern node, from a complete state.
            auto write_mapping(const SearchState & state, std::vector<NodeId> & by_pattern_node) const -> void;
    };

    class Timeout : public std::runtime_error
    {
        public:
            Timeout() :
                std::runtime_error("time limit exceeded")
            {
            }
    };

    /// Candidate checks between clock reads.
    inline constexpr std::uint64_t deadline_check_interval = 4096;

    /**
     * Depth-first enumeration on the calling thread. Matches arrive in a
     * deterministic order. On timeout the partial statistics are returned
     * with timed_out set. sink may be null; it is not called when
     * count_only is set.
     */
    auto enumerate_sequential(const LabeledDigraph & pattern, const LabeledDigraph & target,
            const EngineConfig & config, MatchSink * sink = nullptr) -> SearchStats;

    /// As above, reusing a prepared plan. Preprocessing time is taken from the plan.
    auto enumerate_sequential(const LabeledDigraph & pattern, const LabeledDigraph & target,
            const EngineConfig & config, const SearchPlan & plan, MatchSink * sink = nullptr) -> SearchStats;

    class InstanceTooLarge : public std::invalid_argument
    {
        public:
            InstanceTooLarge() :
                std::invalid_argument("brute force limited to 8 pattern and 12 target nodes")
            {
            }
    };

    struct BruteForceResult
    {
        std::uint64_t count = 0;
        std::vector<std::vector<NodeId>> matches;
    };

    /**
     * Tries every injective mapping and keeps those preserving pattern arcs
     * in direction with equal arc labels and equal node labels. Matches are
     * sorted lexicographically.
     */
    auto enumerate_bruteforce(const LabeledDigraph & pattern, const LabeledDigraph & target) -> BruteForceResult;
}

#endif
