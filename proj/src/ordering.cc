/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#include <ri/ordering.hh>

#include <algorithm>
#include <ostream>
#include <tuple>

using std::size_t;
using std::vector;

using namespace ri;

auto ri::weight_m(const vector<bool> & in_prefix, NodeId v, const LabeledDigraph & pattern) -> size_t
{
    size_t result = 0;
    for (auto u : pattern.neighbourhood(v))
        if (in_prefix[u])
            ++result;
    return result;
}

auto ri::weight_n(const vector<bool> & in_prefix, NodeId v, const LabeledDigraph & pattern) -> size_t
{
    vector<bool> reached(pattern.node_count(), false);
    size_t result = 0;
    for (auto x : pattern.neighbourhood(v)) {
        if (in_prefix[x])
            continue;
        for (auto w : pattern.neighbourhood(x))
            if (in_prefix[w] && ! reached[w]) {
                reached[w] = true;
                ++result;
            }
    }
    return result;
}

auto ri::build_ordering(const LabeledDigraph & pattern, const OrderingOptions & options) -> VariableOrdering
{
    auto n = pattern.node_count();
    if (0 == n)
        throw EmptyPattern{};

    bool use_domains = options.singleton_first || options.domain_tiebreak;
    if (use_domains && (! options.domain_sizes || options.domain_sizes->size() != n))
        throw std::invalid_argument("domain-aware ordering needs one domain size per pattern node");

    vector<bool> in_prefix(n, false);
    VariableOrdering result;
    result.order.reserve(n);

    // larger key wins; domain size and id are negated so smaller wins
    using Key = std::tuple<size_t, size_t, size_t, long long, long long>;
    auto key_of = [&] (NodeId v) -> Key {
        long long domain = options.domain_tiebreak ? -static_cast<long long>((*options.domain_sizes)[v]) : 0;
        return { weight_m(in_prefix, v, pattern), weight_n(in_prefix, v, pattern), pattern.total_degree(v),
            domain, -static_cast<long long>(v) };
    };

    for (size_t step = 0 ; step < n ; ++step) {
        std::optional<NodeId> best;
        Key best_key{};
        for (NodeId v = 0 ; v < n ; ++v) {
            if (in_prefix[v])
                continue;
            auto k = key_of(v);
            if (! best || k > best_key) {
                best = v;
                best_key = k;
            }
        }
        in_prefix[*best] = true;
        result.order.push_back(*best);
    }

    if (options.singleton_first)
        std::stable_partition(result.order.begin(), result.order.end(), [&] (NodeId v) {
                return (*options.domain_sizes)[v] == 1;
                });

    vector<size_t> position(n);
    for (size_t i = 0 ; i < n ; ++i)
        position[result.order[i]] = i;

    result.parents.reserve(n);
    for (size_t i = 0 ; i < n ; ++i) {
        std::optional<NodeId> parent;
        for (auto u : pattern.neighbourhood(result.order[i]))
            if (position[u] < i && (! parent || position[u] < position[*parent]))
                parent = u;
        result.parents.push_back(parent);
    }

    return result;
}

auto ri::dump_ordering(std::ostream & out, const VariableOrdering & ordering) -> void
{
    for (size_t i = 0 ; i < ordering.order.size() ; ++i) {
        out << i << ' ' << ordering.order[i] << ' ';
        if (ordering.parents[i])
            out << *ordering.parents[i];
        else
            out << '-';
        out << '\n';
    }
}
