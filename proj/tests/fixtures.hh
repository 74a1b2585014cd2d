/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#ifndef RI_GUARD_TESTS_FIXTURES_HH
#define RI_GUARD_TESTS_FIXTURES_HH 1

#include <ri/graph.hh>

#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace ri::fixtures
{
    /// Graph with the given node labels and unlabelled arcs.
    inline auto graph(const std::shared_ptr<LabelRegistry> & labels, std::vector<std::string> node_labels,
            const std::vector<std::pair<NodeId, NodeId>> & arcs, const std::string & name = "g") -> LabeledDigraph
    {
        std::vector<LabelId> ids;
        for (auto & l : node_labels)
            ids.push_back(labels->intern_node_label(l));
        std::vector<Arc> as;
        for (auto & [u, v] : arcs)
            as.push_back(Arc{ u, v, no_arc_label });
        return LabeledDigraph{ name, labels, std::move(ids), std::move(as) };
    }

    inline auto uniform(const std::shared_ptr<LabelRegistry> & labels, std::size_t n,
            const std::vector<std::pair<NodeId, NodeId>> & arcs) -> LabeledDigraph
    {
        return graph(labels, std::vector<std::string>(n, "A"), arcs);
    }
}

#endif
