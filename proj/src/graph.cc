/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#include <ri/graph.hh>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>

using std::optional;
using std::shared_ptr;
using std::size_t;
using std::string;
using std::string_view;
using std::to_string;
using std::vector;

using namespace ri;

auto LabelRegistry::intern_node_label(string_view name) -> LabelId
{
    auto [it, inserted] = _node_ids.try_emplace(string{ name }, static_cast<LabelId>(_node_names.size()));
    if (inserted)
        _node_names.emplace_back(name);
    return it->second;
}

auto LabelRegistry::intern_arc_label(string_view name) -> LabelId
{
    auto [it, inserted] = _arc_ids.try_emplace(string{ name }, static_cast<LabelId>(_arc_names.size()));
    if (inserted)
        _arc_names.emplace_back(name);
    return it->second;
}

auto LabelRegistry::node_label_name(LabelId id) const -> const string &
{
    return _node_names.at(id);
}

auto LabelRegistry::arc_label_name(LabelId id) const -> const string &
{
    return _arc_names.at(id);
}

GraphParseError::GraphParseError(GraphErrorKind kind, size_t line, const string & detail, const string & source) :
    std::runtime_error((source.empty() ? "" : source + ": ") + "line " + to_string(line) + ": " + detail),
    _kind(kind),
    _line(line),
    _detail(detail)
{
}

namespace
{
    auto build_csr(size_t n, const vector<Arc> & arcs, bool outgoing, vector<size_t> & offsets, vector<NodeId> & adj) -> void
    {
        offsets.assign(n + 1, 0);
        for (auto & a : arcs)
            ++offsets[(outgoing ? a.from : a.to) + 1];
        for (size_t i = 0 ; i < n ; ++i)
            offsets[i + 1] += offsets[i];

        adj.resize(arcs.size());
        auto fill = offsets;
        for (auto & a : arcs) {
            auto src = outgoing ? a.from : a.to;
            adj[fill[src]++] = outgoing ? a.to : a.from;
        }
        for (size_t i = 0 ; i < n ; ++i)
            std::sort(adj.begin() + offsets[i], adj.begin() + offsets[i + 1]);
    }
}

LabeledDigraph::LabeledDigraph(string name, shared_ptr<LabelRegistry> labels,
        vector<LabelId> node_labels, vector<Arc> arcs) :
    _name(std::move(name)),
    _labels(std::move(labels)),
    _node_labels(std::move(node_labels)),
    _arcs(std::move(arcs))
{
    auto n = _node_labels.size();
    for (auto & a : _arcs) {
        if (a.from >= n || a.to >= n)
            throw std::invalid_argument("arc " + to_string(a.from) + " " + to_string(a.to) + " out of range");
        if (a.from == a.to)
            throw std::invalid_argument("self-loop on node " + to_string(a.from));
    }

    std::sort(_arcs.begin(), _arcs.end(), [] (const Arc & a, const Arc & b) {
            return std::tie(a.from, a.to) < std::tie(b.from, b.to);
            });
    auto dup = std::adjacent_find(_arcs.begin(), _arcs.end(), [] (const Arc & a, const Arc & b) {
            return a.from == b.from && a.to == b.to;
            });
    if (dup != _arcs.end())
        throw std::invalid_argument("duplicate arc " + to_string(dup->from) + " " + to_string(dup->to));

    build_csr(n, _arcs, true, _out_offsets, _out_adj);
    build_csr(n, _arcs, false, _in_offsets, _in_adj);

    // arcs are sorted by (from, to), so out-adjacency order matches arc order
    _out_arc_labels.reserve(_arcs.size());
    for (auto & a : _arcs)
        _out_arc_labels.push_back(a.label);

    _in_arc_labels.reserve(_arcs.size());
    for (NodeId v = 0 ; v < n ; ++v)
        for (auto u : in_neighbours(v))
            _in_arc_labels.push_back(*find_arc(u, v));

    _nbr_offsets.assign(n + 1, 0);
    _nbr_adj.reserve(2 * _arcs.size());
    for (NodeId v = 0 ; v < n ; ++v) {
        auto outs = out_neighbours(v), ins = in_neighbours(v);
        std::set_union(outs.begin(), outs.end(), ins.begin(), ins.end(), std::back_inserter(_nbr_adj));
        _nbr_offsets[v + 1] = _nbr_adj.size();
    }
}

auto LabeledDigraph::find_arc(NodeId from, NodeId to) const -> optional<LabelId>
{
    auto begin = _out_adj.begin() + _out_offsets[from], end = _out_adj.begin() + _out_offsets[from + 1];
    auto it = std::lower_bound(begin, end, to);
    if (it == end || *it != to)
        return std::nullopt;
    return _out_arc_labels[it - _out_adj.begin()];
}

namespace
{
    struct LineReader
    {
        std::istream & in;
        size_t line_number = 0;

        auto next(string & line) -> bool
        {
            if (! std::getline(in, line))
                return false;
            ++line_number;
            if (! line.empty() && line.back() == '\r')
                line.pop_back();
            return true;
        }
    };

    auto parse_count(string_view text, size_t & result) -> bool
    {
        if (text.empty())
            return false;
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), result);
        return ec == std::errc{} && ptr == text.data() + text.size();
    }

    auto split_fields(string_view line) -> vector<string_view>
    {
        vector<string_view> result;
        size_t pos = 0;
        while (pos < line.size()) {
            while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t'))
                ++pos;
            if (pos == line.size())
                break;
            auto end = pos;
            while (end < line.size() && line[end] != ' ' && line[end] != '\t')
                ++end;
            result.push_back(line.substr(pos, end - pos));
            pos = end;
        }
        return result;
    }
}

auto ri::parse_graph(std::istream & input, shared_ptr<LabelRegistry> labels) -> LabeledDigraph
{
    LineReader reader{ input };
    string line;

    if (! reader.next(line) || line.empty() || line[0] != '#')
        throw GraphParseError(GraphErrorKind::malformed_header, reader.line_number + (line.empty() ? 1 : 0),
                "expected '#<name>' header");
    string name = line.substr(1);

    size_t node_count = 0;
    if (! reader.next(line) || ! parse_count(line, node_count))
        throw GraphParseError(GraphErrorKind::malformed_header, reader.line_number, "expected node count");

    vector<LabelId> node_labels;
    node_labels.reserve(node_count);
    for (size_t i = 0 ; i < node_count ; ++i) {
        if (! reader.next(line))
            throw GraphParseError(GraphErrorKind::malformed_line, reader.line_number + 1,
                    "expected label for node " + to_string(i));
        if (line.empty())
            throw GraphParseError(GraphErrorKind::malformed_line, reader.line_number, "empty node label");
        node_labels.push_back(labels->intern_node_label(line));
    }

    size_t arc_count = 0;
    if (! reader.next(line) || ! parse_count(line, arc_count))
        throw GraphParseError(GraphErrorKind::malformed_header, reader.line_number, "expected arc count");

    vector<Arc> arcs;
    arcs.reserve(arc_count);
    vector<std::pair<NodeId, NodeId>> seen;
    seen.reserve(arc_count);
    vector<size_t> arc_lines;
    arc_lines.reserve(arc_count);
    for (size_t i = 0 ; i < arc_count ; ++i) {
        if (! reader.next(line))
            throw GraphParseError(GraphErrorKind::malformed_line, reader.line_number + 1,
                    "expected arc " + to_string(i) + " of " + to_string(arc_count));
        auto fields = split_fields(line);
        size_t from = 0, to = 0;
        if ((fields.size() != 2 && fields.size() != 3) || ! parse_count(fields[0], from) || ! parse_count(fields[1], to))
            throw GraphParseError(GraphErrorKind::malformed_line, reader.line_number, "expected 'u v' or 'u v label'");
        if (from >= node_count || to >= node_count)
            throw GraphParseError(GraphErrorKind::node_index_out_of_range, reader.line_number,
                    "node index out of range (node count " + to_string(node_count) + ")");
        if (from == to)
            throw GraphParseError(GraphErrorKind::self_loop, reader.line_number, "self-loop on node " + to_string(from));
        Arc arc{ static_cast<NodeId>(from), static_cast<NodeId>(to), no_arc_label };
        if (fields.size() == 3)
            arc.label = labels->intern_arc_label(fields[2]);
        arcs.push_back(arc);
        seen.emplace_back(arc.from, arc.to);
        arc_lines.push_back(reader.line_number);
    }

    vector<size_t> order(seen.size());
    for (size_t i = 0 ; i < order.size() ; ++i)
        order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&] (size_t a, size_t b) { return seen[a] < seen[b]; });
    for (size_t i = 1 ; i < order.size() ; ++i)
        if (seen[order[i]] == seen[order[i - 1]])
            throw GraphParseError(GraphErrorKind::duplicate_arc, arc_lines[order[i]],
                    "duplicate arc " + to_string(seen[order[i]].first) + " " + to_string(seen[order[i]].second));

    while (reader.next(line))
        if (line.find_first_not_of(" \t") != string::npos)
            throw GraphParseError(GraphErrorKind::malformed_line, reader.line_number, "trailing content after arcs");

    return LabeledDigraph{ std::move(name), std::move(labels), std::move(node_labels), std::move(arcs) };
}

auto ri::parse_graph(string_view text, shared_ptr<LabelRegistry> labels) -> LabeledDigraph
{
    std::istringstream in{ string{ text } };
    return parse_graph(in, std::move(labels));
}

auto ri::read_graph_file(const string & path, shared_ptr<LabelRegistry> labels) -> LabeledDigraph
{
    std::ifstream in{ path };
    if (! in)
        throw std::runtime_error("cannot open graph file '" + path + "'");
    try {
        return parse_graph(in, std::move(labels));
    }
    catch (const GraphParseError & e) {
        throw GraphParseError(e.kind(), e.line(), e.detail(), path);
    }
}

auto ri::serialise_graph(const LabeledDigraph & graph) -> string
{
    string result;
    result += '#';
    result += graph.name();
    result += '\n';
    result += to_string(graph.node_count());
    result += '\n';
    for (auto l : graph.node_labels()) {
        result += graph.labels()->node_label_name(l);
        result += '\n';
    }
    result += to_string(graph.arc_count());
    result += '\n';
    for (auto & a : graph.arcs()) {
        result += to_string(a.from);
        result += ' ';
        result += to_string(a.to);
        if (a.label != no_arc_label) {
            result += ' ';
            result += graph.labels()->arc_label_name(a.label);
        }
        result += '\n';
    }
    return result;
}

auto ri::write_graph_file(const string & path, const LabeledDigraph & graph) -> void
{
    std::ofstream out{ path, std::ios::binary };
    if (! out)
        throw std::runtime_error("cannot write graph file '" + path + "'");
    out << serialise_graph(graph);
    if (! out)
        throw std::runtime_error("error writing graph file '" + path + "'");
}
