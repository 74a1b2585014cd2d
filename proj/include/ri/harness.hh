/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#ifndef RI_GUARD_RI_HARNESS_HH
#define RI_GUARD_RI_HARNESS_HH 1

#include <ri/scheduler.hh>
#include <ri/search.hh>

#include <chrono>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace ri
{
    inline constexpr std::string_view bench_csv_schema = "ri-bench-v1";

    struct BenchRecord
    {
        std::string pattern;
        std::string target;
        std::string algorithm;
        std::size_t workers = 1;
        std::size_t group_size = 4;
        double preprocessing_time = 0.0;
        double matching_time = 0.0;
        double total_time = 0.0;
        std::uint64_t search_space_size = 0;
        std::uint64_t match_count = 0;
        std::uint64_t steals_ok = 0;
        std::uint64_t steals_failed = 0;
        bool timed_out = false;

        /// "ok", "timeout", or "error: <message>".
        std::string status = "ok";

        auto operator== (const BenchRecord &) const -> bool = default;
    };

    auto make_record(const std::string & pattern, const std::string & target, Algorithm algorithm,
            std::size_t workers, std::size_t group_size, const SearchStats & stats) -> BenchRecord;

    auto write_csv_header(std::ostream & out) -> void;
    auto write_csv_row(std::ostream & out, const BenchRecord & record) -> void;

    /// Parses a header line then rows. Throws std::runtime_error on a malformed stream.
    auto read_csv(std::istream & in) -> std::vector<BenchRecord>;

    /**
     * Sequential engine for one worker, the work-stealing scheduler
     * otherwise.
     */
    auto run_configuration(const LabeledDigraph & pattern, const LabeledDigraph & target,
            const EngineConfig & config, std::size_t workers, std::size_t group_size,
            std::uint64_t seed, MatchSink * sink) -> SearchStats;

    struct BenchOptions
    {
        std::string pattern_dir;
        std::string target_path;
        std::vector<Algorithm> algorithms{ Algorithm::ri };
        std::vector<std::size_t> workers{ 1 };
        std::vector<std::size_t> group_sizes{ 4 };
        std::chrono::duration<double> time_limit = std::chrono::seconds{ 180 };
        AcPasses ac_passes = AcPasses::fixpoint;
        std::size_t repetitions = 1;
        std::uint64_t seed = 0;
    };

    /**
     * Every pattern file (sorted by name) against the target, for every
     * algorithm, worker count, group size and repetition, in that nesting
     * order. Failures become rows; the sweep always completes. Returns
     * the number of rows written.
     */
    auto run_bench(const BenchOptions & options, std::ostream & csv) -> std::size_t;

    struct VerifyOptions
    {
        std::size_t instances = 200;
        std::uint64_t seed = 1;
        std::size_t max_pattern_nodes = 6;
        std::size_t max_target_nodes = 10;
        std::size_t max_labels = 4;
        std::vector<std::size_t> workers{ 1, 2, 4 };
        std::size_t group_size = 4;
        bool corrupt_structure_check = false;
    };

    struct VerifyReport
    {
        std::size_t instances = 0;
        std::size_t runs = 0;
        std::size_t failures = 0;
        std::string first_divergence;

        auto passed() const -> bool
        {
            return 0 == failures;
        }
    };

    /// Every algorithm at every worker count against brute force on random small instances.
    auto verify(const VerifyOptions & options) -> VerifyReport;
}

#endif
