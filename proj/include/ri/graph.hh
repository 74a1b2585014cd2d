/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#ifndef RI_GUARD_RI_GRAPH_HH
#define RI_GUARD_RI_GRAPH_HH 1

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ri
{
    using NodeId = std::uint32_t;
    using LabelId = std::uint32_t;

    /// Arc label id carried by arcs written without a label.
    inline constexpr LabelId no_arc_label = std::numeric_limits<LabelId>::max();

    /**
     * Interns label strings to dense ids. Node and arc labels live in
     * separate id spaces. A pattern and a target must share one registry
     * for their label ids to be comparable.
     */
    class LabelRegistry
    {
        private:
            std::unordered_map<std::string, LabelId> _node_ids, _arc_ids;
            std::vector<std::string> _node_names, _arc_names;

        public:
            auto intern_node_label(std::string_view name) -> LabelId;
            auto intern_arc_label(std::string_view name) -> LabelId;

            auto node_label_name(LabelId id) const -> const std::string &;
            auto arc_label_name(LabelId id) const -> const std::string &;

            auto node_label_count() const -> std::size_t
            {
                return _node_names.size();
            }

            auto arc_label_count() const -> std::size_t
            {
                return _arc_names.size();
            }
    };

    struct Arc
    {
        NodeId from;
        NodeId to;
        LabelId label = no_arc_label;

        auto operator== (const Arc &) const -> bool = default;
    };

    enum class GraphErrorKind
    {
        malformed_header,
        malformed_line,
        node_index_out_of_range,
        duplicate_arc,
        self_loop
    };

    class GraphParseError : public std::runtime_error
    {
        private:
            GraphErrorKind _kind;
            std::size_t _line;
            std::string _detail;

        public:
            GraphParseError(GraphErrorKind kind, std::size_t line, const std::string & detail,
                    const std::string & source = "");

            auto detail() const -> const std::string &
            {
                return _detail;
            }

            auto kind() const -> GraphErrorKind
            {
                return _kind;
            }

            auto line() const -> std::size_t
            {
                return _line;
            }
    };

    /**
     * Immutable directed graph with node labels and optional arc labels.
     * Out, in, and undirected neighbourhoods are stored as flat sorted
     * arrays with offset tables.
     */
    class LabeledDigraph
    {
        private:
            std::string _name;
            std::shared_ptr<LabelRegistry> _labels;
            std::vector<LabelId> _node_labels;
            std::vector<Arc> _arcs;

            std::vector<std::size_t> _out_offsets, _in_offsets, _nbr_offsets;
            std::vector<NodeId> _out_adj, _in_adj, _nbr_adj;
            std::vector<LabelId> _out_arc_labels, _in_arc_labels;

        public:
            /// Throws std::invalid_argument on self-loops, duplicates, or out of range ids.
            LabeledDigraph(std::string name, std::shared_ptr<LabelRegistry> labels,
                    std::vector<LabelId> node_labels, std::vector<Arc> arcs);

            auto name() const -> const std::string &
            {
                return _name;
            }

            auto labels() const -> const std::shared_ptr<LabelRegistry> &
            {
                return _labels;
            }

            auto node_count() const -> std::size_t
            {
                return _node_labels.size();
            }

            auto arc_count() const -> std::size_t
            {
                return _arcs.size();
            }

            auto node_label(NodeId v) const -> LabelId
            {
                return _node_labels[v];
            }

            auto node_labels() const -> std::span<const LabelId>
            {
                return _node_labels;
            }

            /// Arcs sorted by (from, to).
            auto arcs() const -> std::span<const Arc>
            {
                return _arcs;
            }

            auto out_neighbours(NodeId v) const -> std::span<const NodeId>
            {
                return { _out_adj.data() + _out_offsets[v], _out_adj.data() + _out_offsets[v + 1] };
            }

            auto in_neighbours(NodeId v) const -> std::span<const NodeId>
            {
                return { _in_adj.data() + _in_offsets[v], _in_adj.data() + _in_offsets[v + 1] };
            }

            /// Labels of v's out-arcs, aligned with out_neighbours(v).
            auto out_arc_labels(NodeId v) const -> std::span<const LabelId>
            {
                return { _out_arc_labels.data() + _out_offsets[v], _out_arc_labels.data() + _out_offsets[v + 1] };
            }

            /// Labels of v's in-arcs, aligned with in_neighbours(v).
            auto in_arc_labels(NodeId v) const -> std::span<const LabelId>
            {
                return { _in_arc_labels.data() + _in_offsets[v], _in_arc_labels.data() + _in_offsets[v + 1] };
            }

            /// Nodes joined to v by an arc in either direction, sorted, no duplicates.
            auto neighbourhood(NodeId v) const -> std::span<const NodeId>
            {
                return { _nbr_adj.data() + _nbr_offsets[v], _nbr_adj.data() + _nbr_offsets[v + 1] };
            }

            auto out_degree(NodeId v) const -> std::size_t
            {
                return _out_offsets[v + 1] - _out_offsets[v];
            }

            auto in_degree(NodeId v) const -> std::size_t
            {
                return _in_offsets[v + 1] - _in_offsets[v];
            }

            auto total_degree(NodeId v) const -> std::size_t
            {
                return out_degree(v) + in_degree(v);
            }

            /// Label of arc (from, to) if it exists; no_arc_label for an unlabelled arc.
            auto find_arc(NodeId from, NodeId to) const -> std::optional<LabelId>;

            auto has_arc(NodeId from, NodeId to) const -> bool
            {
                return find_arc(from, to).has_value();
            }
    };

    auto parse_graph(std::istream & input, std::shared_ptr<LabelRegistry> labels) -> LabeledDigraph;

    auto parse_graph(std::string_view text, std::shared_ptr<LabelRegistry> labels) -> LabeledDigraph;

    auto read_graph_file(const std::string & path, std::shared_ptr<LabelRegistry> labels) -> LabeledDigraph;

    /// Canonical text form: arcs sorted by (from, to).
    auto serialise_graph(const LabeledDigraph & graph) -> std::string;

    auto write_graph_file(const std::string & path, const LabeledDigraph & graph) -> void;
}

#endif
