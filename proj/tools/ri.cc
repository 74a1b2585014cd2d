/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#include <ri/generator.hh>
#include <ri/harness.hh>
#include <ri/scheduler.hh>
#include <ri/search.hh>

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <mutex>

using std::cerr;
using std::cout;
using std::size_t;
using std::string;
using std::uint64_t;
using std::vector;

using namespace ri;

namespace
{
    constexpr int exit_ok = 0;
    constexpr int exit_input_error = 1;
    constexpr int exit_timeout = 2;

    /// Streams matches as they arrive; safe for concurrent reports.
    class PrintingSink : public MatchSink
    {
        private:
            std::mutex _mutex;
            std::ostream & _out;

        public:
            explicit PrintingSink(std::ostream & out) :
                _out(out)
            {
            }

            auto on_match(std::span<const NodeId> mapping) -> void override
            {
                std::lock_guard<std::mutex> guard{ _mutex };
                _out << "match";
                for (size_t i = 0 ; i < mapping.size() ; ++i)
                    _out << ' ' << i << "->" << mapping[i];
                _out << '\n';
            }
    };

    auto parse_ac_passes(const string & s) -> AcPasses
    {
        return s == "1" ? AcPasses::single : AcPasses::fixpoint;
    }

    auto stats_json(const BenchRecord & r) -> nlohmann::json
    {
        return {
            { "pattern", r.pattern }, { "target", r.target }, { "algorithm", r.algorithm },
            { "workers", r.workers }, { "group_size", r.group_size },
            { "preprocessing_time", r.preprocessing_time }, { "matching_time", r.matching_time },
            { "total_time", r.total_time }, { "search_space_size", r.search_space_size },
            { "match_count", r.match_count }, { "steals_ok", r.steals_ok },
            { "steals_failed", r.steals_failed }, { "timed_out", r.timed_out }
        };
    }

    struct EnumerateArgs
    {
        string pattern, target, algorithm = "ri", output = "text", ac_passes = "fixpoint";
        size_t workers = 1, group_size = 4;
        double time_limit = 180;
        bool count_only = false, dump_ordering = false, dump_domains = false;
        uint64_t seed = 0;
    };

    auto cmd_enumerate(const EnumerateArgs & args) -> int
    {
        auto labels = std::make_shared<LabelRegistry>();
        auto target = read_graph_file(args.target, labels);
        auto pattern = read_graph_file(args.pattern, labels);

        EngineConfig config;
        config.algorithm = parse_algorithm(args.algorithm);
        config.ac_passes = parse_ac_passes(args.ac_passes);
        config.time_limit = std::chrono::duration<double>(args.time_limit);
        config.count_only = args.count_only;

        auto plan = prepare_search(pattern, target, config);
        if (args.dump_ordering)
            dump_ordering(cout, plan.ordering);
        if (args.dump_domains) {
            if (plan.domains)
                dump_domains(cout, *plan.domains);
            else
                cerr << "note: algorithm " << args.algorithm << " computes no domains\n";
        }

        PrintingSink printer{ cout };
        CollectingSink collector;
        MatchSink * sink = nullptr;
        if (! args.count_only)
            sink = args.output == "json" ? static_cast<MatchSink *>(&collector)
                : args.output == "text" ? static_cast<MatchSink *>(&printer) : nullptr;

        SearchStats stats;
        if (1 == args.workers)
            stats = enumerate_sequential(pattern, target, config, plan, sink);
        else {
            ParallelConfig parallel;
            parallel.workers = args.workers;
            parallel.task_group_size = args.group_size;
            parallel.seed = args.seed;
            stats = run_parallel(pattern, target, config, plan, parallel, sink);
        }

        auto record = make_record(pattern.name(), target.name(), config.algorithm, args.workers, args.group_size, stats);
        if (args.output == "csv") {
            write_csv_header(cout);
            write_csv_row(cout, record);
        }
        else if (args.output == "json") {
            auto j = stats_json(record);
            if (! args.count_only)
                j["matches"] = collector.matches();
            cout << j.dump(2) << '\n';
        }
        else {
            cout << "pattern=" << record.pattern << " target=" << record.target
                << " algorithm=" << record.algorithm << " workers=" << record.workers
                << " group_size=" << record.group_size << " matches=" << record.match_count
                << " search_space=" << record.search_space_size
                << " preprocessing=" << record.preprocessing_time << "s"
                << " matching=" << record.matching_time << "s"
                << " total=" << record.total_time << "s"
                << " steals_ok=" << record.steals_ok << " steals_failed=" << record.steals_failed
                << " timed_out=" << (record.timed_out ? "true" : "false") << '\n';
        }

        return stats.timed_out ? exit_timeout : exit_ok;
    }
}

auto main(int argc, char * argv[]) -> int
{
    CLI::App app{ "Parallel labelled subgraph enumeration (RI, RI-DS, RI-DS-SI, RI-DS-SI-FC)" };
    app.require_subcommand(1);

    const vector<string> algorithm_names{ "ri", "ri-ds", "ri-ds-si", "ri-ds-si-fc" };

    EnumerateArgs en;
    auto enumerate = app.add_subcommand("enumerate", "List all non-induced occurrences of a pattern in a target");
    enumerate->add_option("-p,--pattern", en.pattern, "Pattern graph file")->required();
    enumerate->add_option("-t,--target", en.target, "Target graph file")->required();
    enumerate->add_option("--algorithm", en.algorithm, "Search variant")->check(CLI::IsMember(algorithm_names));
    enumerate->add_option("--workers", en.workers, "Worker threads")->check(CLI::Range(1, 256));
    enumerate->add_option("--task-group-size", en.group_size, "Tasks per stealable group")->check(CLI::Range(1, 64));
    enumerate->add_option("--time-limit", en.time_limit, "Seconds before giving up")->check(CLI::PositiveNumber);
    enumerate->add_flag("--count-only", en.count_only, "Count matches without materialising them");
    enumerate->add_option("--output", en.output, "Report format")->check(CLI::IsMember({ "text", "csv", "json" }));
    enumerate->add_option("--seed", en.seed, "Victim selection seed");
    enumerate->add_option("--ac-passes", en.ac_passes, "Arc consistency passes")->check(CLI::IsMember({ "1", "fixpoint" }));
    enumerate->add_flag("--dump-ordering", en.dump_ordering, "Print 'pos node parent' lines");
    enumerate->add_flag("--dump-domains", en.dump_domains, "Print each pattern node's domain");

    BenchOptions bo;
    vector<string> bench_algorithms{ "ri" };
    string bench_output, bench_ac = "fixpoint";
    double bench_limit = 180;
    auto bench = app.add_subcommand("bench", "Run a configuration matrix over a directory of patterns, as CSV");
    bench->add_option("--patterns", bo.pattern_dir, "Directory of pattern files")->required()->check(CLI::ExistingDirectory);
    bench->add_option("-t,--target", bo.target_path, "Target graph file")->required();
    bench->add_option("--algorithms", bench_algorithms, "Search variants")->check(CLI::IsMember(algorithm_names))->delimiter(',');
    bench->add_option("--workers", bo.workers, "Worker counts")->delimiter(',')->check(CLI::Range(1, 256));
    bench->add_option("--task-group-size", bo.group_sizes, "Task group sizes")->delimiter(',')->check(CLI::Range(1, 64));
    bench->add_option("--time-limit", bench_limit, "Seconds per run")->check(CLI::PositiveNumber);
    bench->add_option("--repetitions", bo.repetitions, "Runs per configuration")->check(CLI::Range(1, 1000));
    bench->add_option("--seed", bo.seed, "Base victim selection seed");
    bench->add_option("--ac-passes", bench_ac, "Arc consistency passes")->check(CLI::IsMember({ "1", "fixpoint" }));
    bench->add_option("-o,--output", bench_output, "CSV file (default: standard output)");

    GeneratorSpec gs;
    string distribution = "uniform", mode = "sparse", target_out, pattern_out;
    double label_mean = -1, label_sigma = -1;
    auto generate = app.add_subcommand("generate", "Write a random target and a pattern extracted from it");
    generate->add_option("--nodes", gs.nodes, "Target node count")->check(CLI::Range(size_t{ 1 }, size_t{ 10'000'000 }));
    generate->add_option("--density", gs.density, "Fraction of possible arcs present")->check(CLI::Range(0.0, 1.0));
    generate->add_option("--labels", gs.label_count, "Node label alphabet size")->check(CLI::Range(1, 1'000'000));
    generate->add_option("--label-distribution", distribution, "uniform or normal")->check(CLI::IsMember({ "uniform", "normal", "normal-approx" }));
    generate->add_option("--label-mean", label_mean, "Mean label id for the normal distribution");
    generate->add_option("--label-sigma", label_sigma, "Label id deviation for the normal distribution");
    generate->add_option("--arc-labels", gs.arc_label_count, "Arc label alphabet size, 0 for none");
    generate->add_option("--pattern-arcs", gs.pattern_arcs, "Arcs in the extracted pattern")->check(CLI::Range(4, 256));
    generate->add_option("--mode", mode, "Extraction mode")->check(CLI::IsMember({ "dense", "semi-dense", "sparse" }));
    generate->add_option("--seed", gs.seed, "Random seed");
    generate->add_option("--target-out", target_out, "Target file")->required();
    generate->add_option("--pattern-out", pattern_out, "Pattern file")->required();

    VerifyOptions vo;
    auto verify_cmd = app.add_subcommand("verify", "Check every variant against brute force on random small instances");
    verify_cmd->add_option("--count", vo.instances, "Instances")->check(CLI::Range(1, 1'000'000));
    verify_cmd->add_option("--seed", vo.seed, "Random seed");
    verify_cmd->add_option("--max-pattern-nodes", vo.max_pattern_nodes, "Largest pattern")->check(CLI::Range(1, 8));
    verify_cmd->add_option("--max-target-nodes", vo.max_target_nodes, "Largest target")->check(CLI::Range(1, 12));
    verify_cmd->add_option("--labels", vo.max_labels, "Largest label alphabet")->check(CLI::Range(1, 64));
    verify_cmd->add_flag("--corrupt-structure-check", vo.corrupt_structure_check,
            "Fault injection: skip the pattern arc check")->group("");

    CLI11_PARSE(app, argc, argv);

    try {
        if (enumerate->parsed())
            return cmd_enumerate(en);

        if (bench->parsed()) {
            bo.algorithms.clear();
            for (auto & a : bench_algorithms)
                bo.algorithms.push_back(parse_algorithm(a));
            bo.time_limit = std::chrono::duration<double>(bench_limit);
            bo.ac_passes = parse_ac_passes(bench_ac);
            if (bench_output.empty())
                run_bench(bo, cout);
            else {
                std::ofstream out{ bench_output };
                if (! out) {
                    cerr << "error: cannot write '" << bench_output << "'\n";
                    return exit_input_error;
                }
                run_bench(bo, out);
            }
            return exit_ok;
        }

        if (generate->parsed()) {
            gs.distribution = parse_label_distribution(distribution);
            gs.mode = parse_extraction_mode(mode);
            if (label_mean >= 0)
                gs.label_mean = label_mean;
            if (label_sigma >= 0)
                gs.label_sigma = label_sigma;
            auto instance = generate_instance(gs, std::make_shared<LabelRegistry>());
            write_graph_file(target_out, instance.target);
            write_graph_file(pattern_out, instance.pattern);
            cout << "target " << target_out << ": " << instance.target.node_count() << " nodes, "
                << instance.target.arc_count() << " arcs\n"
                << "pattern " << pattern_out << ": " << instance.pattern.node_count() << " nodes, "
                << instance.pattern.arc_count() << " arcs\n";
            return exit_ok;
        }

        if (verify_cmd->parsed()) {
            auto report = verify(vo);
            cout << "instances=" << report.instances << " runs=" << report.runs << " failures=" << report.failures
                << (report.passed() ? " PASS" : " FAIL") << '\n';
            if (! report.passed())
                cout << "first divergence: " << report.first_divergence;
            return report.passed() ? exit_ok : exit_input_error;
        }
    }
    catch (const std::exception & e) {
        cerr << "error: " << e.what() << '\n';
        return exit_input_error;
    }

    return exit_ok;
}
