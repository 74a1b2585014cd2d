/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#include <ri/generator.hh>
#include <ri/harness.hh>

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

using std::size_t;
using std::string;
using std::string_view;
using std::to_string;
using std::uint64_t;
using std::vector;

using namespace ri;

namespace
{
    const vector<string> csv_columns = {
        "schema", "pattern", "target", "algorithm", "workers", "group_size",
        "preprocessing_time", "matching_time", "total_time", "search_space_size",
        "match_count", "steals_ok", "steals_failed", "timed_out", "status"
    };

    auto csv_field(std::ostream & out, string_view s) -> void
    {
        if (s.find_first_of(",\"\n\r") == string_view::npos) {
            out << s;
            return;
        }
        out << '"';
        for (auto c : s) {
            if (c == '"')
                out << '"';
            out << c;
        }
        out << '"';
    }

    auto format_double(double d) -> string
    {
        char buf[64];
        auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), d);
        return string(buf, ptr);
    }

    auto split_csv_line(std::istream & in, vector<string> & fields) -> bool
    {
        fields.clear();
        string field;
        bool quoted = false, any = false;
        char c;
        while (in.get(c)) {
            any = true;
            if (quoted) {
                if (c == '"') {
                    if (in.peek() == '"') {
                        in.get(c);
                        field += '"';
                    }
                    else
                        quoted = false;
                }
                else
                    field += c;
            }
            else if (c == '"')
                quoted = true;
            else if (c == ',') {
                fields.push_back(std::move(field));
                field.clear();
            }
            else if (c == '\n') {
                fields.push_back(std::move(field));
                return true;
            }
            else
                field += c;
        }
        if (quoted)
            throw std::runtime_error("unterminated quoted CSV field");
        if (any)
            fields.push_back(std::move(field));
        return any;
    }

    template <typename T_>
    auto parse_number(const string & s, const char * what) -> T_
    {
        T_ result{};
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), result);
        if (ec != std::errc{} || ptr != s.data() + s.size())
            throw std::runtime_error(string("bad ") + what + " '" + s + "' in CSV");
        return result;
    }
}

auto ri::make_record(const string & pattern, const string & target, Algorithm algorithm,
        size_t workers, size_t group_size, const SearchStats & stats) -> BenchRecord
{
    BenchRecord r;
    r.pattern = pattern;
    r.target = target;
    r.algorithm = string{ algorithm_name(algorithm) };
    r.workers = workers;
    r.group_size = group_size;
    r.preprocessing_time = stats.preprocessing_time;
    r.matching_time = stats.matching_time;
    r.total_time = stats.total_time;
    r.search_space_size = stats.search_space_size;
    r.match_count = stats.match_count;
    r.steals_ok = stats.steals_ok;
    r.steals_failed = stats.steals_failed;
    r.timed_out = stats.timed_out;
    r.status = stats.timed_out ? "timeout" : "ok";
    return r;
}

auto ri::write_csv_header(std::ostream & out) -> void
{
    for (size_t i = 0 ; i < csv_columns.size() ; ++i)
        out << (i ? "," : "") << csv_columns[i];
    out << '\n';
}

auto ri::write_csv_row(std::ostream & out, const BenchRecord & r) -> void
{
    out << bench_csv_schema << ',';
    csv_field(out, r.pattern);
    out << ',';
    csv_field(out, r.target);
    out << ',';
    csv_field(out, r.algorithm);
    out << ',' << r.workers << ',' << r.group_size
        << ',' << format_double(r.preprocessing_time)
        << ',' << format_double(r.matching_time)
        << ',' << format_double(r.total_time)
        << ',' << r.search_space_size << ',' << r.match_count
        << ',' << r.steals_ok << ',' << r.steals_failed
        << ',' << (r.timed_out ? "true" : "false") << ',';
    csv_field(out, r.status);
    out << '\n';
}

auto ri::read_csv(std::istream & in) -> vector<BenchRecord>
{
    vector<string> fields;
    if (! split_csv_line(in, fields) || fields != csv_columns)
        throw std::runtime_error("CSV header does not match the " + string{ bench_csv_schema } + " schema");

    vector<BenchRecord> result;
    while (split_csv_line(in, fields)) {
        if (fields.size() != csv_columns.size())
            throw std::runtime_error("CSV row has " + to_string(fields.size()) + " fields, expected "
                    + to_string(csv_columns.size()));
        if (fields[0] != bench_csv_schema)
            throw std::runtime_error("unknown CSV schema '" + fields[0] + "'");
        BenchRecord r;
        r.pattern = fields[1];
        r.target = fields[2];
        r.algorithm = fields[3];
        r.workers = parse_number<size_t>(fields[4], "workers");
        r.group_size = parse_number<size_t>(fields[5], "group_size");
        r.preprocessing_time = parse_number<double>(fields[6], "preprocessing_time");
        r.matching_time = parse_number<double>(fields[7], "matching_time");
        r.total_time = parse_number<double>(fields[8], "total_time");
        r.search_space_size = parse_number<uint64_t>(fields[9], "search_space_size");
        r.match_count = parse_number<uint64_t>(fields[10], "match_count");
        r.steals_ok = parse_number<uint64_t>(fields[11], "steals_ok");
        r.steals_failed = parse_number<uint64_t>(fields[12], "steals_failed");
        if (fields[13] != "true" && fields[13] != "false")
            throw std::runtime_error("bad timed_out '" + fields[13] + "' in CSV");
        r.timed_out = fields[13] == "true";
        r.status = fields[14];
        result.push_back(std::move(r));
    }
    return result;
}

auto ri::run_configuration(const LabeledDigraph & pattern, const LabeledDigraph & target,
        const EngineConfig & config, size_t workers, size_t group_size, uint64_t seed, MatchSink * sink) -> SearchStats
{
    if (1 == workers)
        return enumerate_sequential(pattern, target, config, sink);

    ParallelConfig parallel;
    parallel.workers = workers;
    parallel.task_group_size = group_size;
    parallel.seed = seed;
    return run_parallel(pattern, target, config, parallel, sink);
}

auto ri::run_bench(const BenchOptions & options, std::ostream & csv) -> size_t
{
    namespace fs = std::filesystem;

    auto labels = std::make_shared<LabelRegistry>();
    auto target = read_graph_file(options.target_path, labels);

    vector<fs::path> pattern_files;
    for (auto & entry : fs::directory_iterator(options.pattern_dir))
        if (entry.is_regular_file())
            pattern_files.push_back(entry.path());
    std::sort(pattern_files.begin(), pattern_files.end());

    write_csv_header(csv);
    size_t rows = 0;
    for (auto & path : pattern_files) {
        std::optional<LabeledDigraph> pattern;
        string load_error;
        try {
            pattern = read_graph_file(path.string(), labels);
        }
        catch (const std::exception & e) {
            load_error = e.what();
        }
        auto pattern_name = path.filename().string();

        for (auto algorithm : options.algorithms)
            for (auto workers : options.workers)
                for (auto group_size : options.group_sizes)
                    for (size_t rep = 0 ; rep < options.repetitions ; ++rep) {
                        BenchRecord record;
                        auto error = load_error;
                        if (pattern) {
                            try {
                                EngineConfig config;
                                config.algorithm = algorithm;
                                config.ac_passes = options.ac_passes;
                                config.time_limit = options.time_limit;
                                config.count_only = true;
                                auto stats = run_configuration(*pattern, target, config, workers, group_size,
                                        options.seed + rep, nullptr);
                                record = make_record(pattern_name, target.name(), algorithm, workers, group_size, stats);
                            }
                            catch (const std::exception & e) {
                                error = e.what();
                            }
                        }
                        if (! error.empty()) {
                            record = BenchRecord{};
                            record.pattern = pattern_name;
                            record.target = target.name();
                            record.algorithm = string{ algorithm_name(algorithm) };
                            record.workers = workers;
                            record.group_size = group_size;
                            record.status = "error: " + error;
                        }
                        write_csv_row(csv, record);
                        csv.flush();
                        ++rows;
                    }
    }
    return rows;
}

namespace
{
    auto describe_mapping(const vector<NodeId> & m) -> string
    {
        string result = "[";
        for (size_t i = 0 ; i < m.size() ; ++i)
            result += (i ? " " : "") + to_string(i) + "->" + to_string(m[i]);
        return result + "]";
    }

    auto first_difference(const vector<vector<NodeId>> & expected, const vector<vector<NodeId>> & actual) -> string
    {
        vector<vector<NodeId>> missing, extra;
        std::set_difference(expected.begin(), expected.end(), actual.begin(), actual.end(), std::back_inserter(missing));
        std::set_difference(actual.begin(), actual.end(), expected.begin(), expected.end(), std::back_inserter(extra));
        if (! missing.empty())
            return "missing " + describe_mapping(missing.front());
        if (! extra.empty())
            return "spurious " + describe_mapping(extra.front());
        return "duplicate matches reported";
    }
}

auto ri::verify(const VerifyOptions & options) -> VerifyReport
{
    VerifyReport report;
    for (size_t i = 0 ; i < options.instances ; ++i) {
        auto instance_seed = options.seed * 1'000'003 + i;
        auto labels = std::make_shared<LabelRegistry>();
        auto instance = generate_small_instance(instance_seed, options.max_pattern_nodes, options.max_target_nodes,
                options.max_labels, labels);
        auto truth = enumerate_bruteforce(instance.pattern, instance.target);
        ++report.instances;

        for (auto algorithm : all_algorithms) {
            EngineConfig config;
            config.algorithm = algorithm;
            config.testing_skip_structure_check = options.corrupt_structure_check;

            auto check = [&] (const string & how, const CollectingSink & sink, const SearchStats & stats) {
                ++report.runs;
                auto got = sink.sorted_matches();
                if (got == truth.matches && stats.match_count == truth.count)
                    return;
                ++report.failures;
                if (report.first_divergence.empty()) {
                    std::ostringstream s;
                    s << "instance " << i << " (seed " << instance_seed << "), " << algorithm_name(algorithm)
                        << ", " << how << ": expected " << truth.count << " matches, got " << stats.match_count
                        << "; " << first_difference(truth.matches, got) << "\n"
                        << "pattern:\n" << serialise_graph(instance.pattern)
                        << "target:\n" << serialise_graph(instance.target);
                    report.first_divergence = s.str();
                }
            };

            {
                CollectingSink sink;
                auto stats = enumerate_sequential(instance.pattern, instance.target, config, &sink);
                check("sequential", sink, stats);
            }
            for (auto workers : options.workers) {
                ParallelConfig parallel;
                parallel.workers = workers;
                parallel.task_group_size = options.group_size;
                parallel.seed = instance_seed;
                CollectingSink sink;
                auto stats = run_parallel(instance.pattern, instance.target, config, parallel, &sink);
                check(to_string(workers) + " workers", sink, stats);
            }
        }
    }
    return report;
}
