/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#ifndef RI_GUARD_RI_GENERATOR_HH
#define RI_GUARD_RI_GENERATOR_HH 1

#include <ri/graph.hh>

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <stdexcept>
#include <string_view>

namespace ri
{
    enum class LabelDistribution
    {
        uniform,
        normal
    };

    enum class ExtractionMode
    {
        dense,
        semi_dense,
        sparse
    };

    auto parse_label_distribution(std::string_view name) -> LabelDistribution;
    auto parse_extraction_mode(std::string_view name) -> ExtractionMode;

    class InfeasibleSpec : public std::invalid_argument
    {
        public:
            using std::invalid_argument::invalid_argument;
    };

    struct GeneratorSpec
    {
        std::size_t nodes = 1000;

        /// Fraction of the n(n-1) possible arcs present in the target.
        double density = 0.01;

        std::size_t label_count = 4;
        LabelDistribution distribution = LabelDistribution::uniform;

        /// Defaults to label_count / 2 and label_count / 6.
        std::optional<double> label_mean, label_sigma;

        /// Zero gives unlabelled arcs.
        std::size_t arc_label_count = 0;

        std::size_t pattern_arcs = 8;
        ExtractionMode mode = ExtractionMode::sparse;
        std::uint64_t seed = 1;
    };

    struct GeneratedInstance
    {
        LabeledDigraph target;
        LabeledDigraph pattern;
    };

    /// Random directed graph with exactly round(density * n * (n-1)) arcs.
    auto generate_target(const GeneratorSpec & spec, std::shared_ptr<LabelRegistry> labels,
            std::mt19937_64 & rng) -> LabeledDigraph;

    /**
     * Grow a connected set of target arcs from a random start node until it
     * holds arc_count arcs. Dense mode prefers arcs closing on chosen nodes,
     * sparse mode prefers arcs reaching new nodes. The identity on the
     * chosen nodes is always a match. Throws InfeasibleSpec.
     */
    auto extract_pattern(const LabeledDigraph & target, std::size_t arc_count, ExtractionMode mode,
            std::mt19937_64 & rng, const std::string & name) -> LabeledDigraph;

    /// Target and embedded pattern, deterministic for a fixed spec.
    auto generate_instance(const GeneratorSpec & spec, std::shared_ptr<LabelRegistry> labels) -> GeneratedInstance;

    /**
     * Small instance for oracle checks: a random target with at most
     * max_target_nodes nodes, and a pattern with at most max_pattern_nodes
     * nodes that is either extracted from the target or independently random.
     */
    auto generate_small_instance(std::uint64_t seed, std::size_t max_pattern_nodes, std::size_t max_target_nodes,
            std::size_t max_labels, std::shared_ptr<LabelRegistry> labels) -> GeneratedInstance;
}

#endif
