/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#include <ri/scheduler.hh>

#include <algorithm>
#include <random>
#include <stdexcept>
#include <thread>

using std::optional;
using std::size_t;
using std::span;
using std::uint32_t;
using std::uint64_t;
using std::vector;

using std::chrono::duration;
using std::chrono::steady_clock;

using std::memory_order_acquire;
using std::memory_order_relaxed;
using std::memory_order_release;

using namespace ri;
using namespace ri::scheduler_detail;

TaskGroup::TaskGroup(uint32_t depth, span<const NodeId> targets) :
    _depth(depth),
    _size(static_cast<uint32_t>(targets.size()))
{
    if (targets.empty() || targets.size() > max_task_group_size)
        throw std::invalid_argument("task group size must be between 1 and " + std::to_string(max_task_group_size));
    std::copy(targets.begin(), targets.end(), _targets.begin());
}

auto ri::initial_distribution(span<const NodeId> root_candidates, size_t workers, size_t group_size) -> vector<PrivateDeque>
{
    if (0 == workers || 0 == group_size || group_size > max_task_group_size)
        throw std::invalid_argument("need at least one worker and a group size between 1 and 64");

    vector<vector<NodeId>> shares(workers);
    for (size_t i = 0 ; i < root_candidates.size() ; ++i)
        shares[i % workers].push_back(root_candidates[i]);

    vector<PrivateDeque> result(workers);
    for (size_t w = 0 ; w < workers ; ++w)
        for (size_t i = 0 ; i < shares[w].size() ; i += group_size) {
            auto len = std::min(group_size, shares[w].size() - i);
            result[w].push_back(TaskGroup{ 0, span<const NodeId>{ shares[w] }.subspan(i, len) });
        }
    return result;
}

WorkerCells::WorkerCells(size_t workers) :
    work_available(workers),
    requests(workers),
    transfers(workers)
{
    for (auto & r : requests)
        r.value.store(empty_request);
}

Scheduler::Worker::Worker(size_t pattern_size, size_t target_size, uint64_t seed) :
    state(pattern_size, target_size),
    rng(seed)
{
    accepted.reserve(64);
}

Scheduler::Scheduler(const SearchContext & context, const ParallelConfig & config, MatchSink * sink,
        bool count_only, steady_clock::time_point deadline) :
    _context(context),
    _config(config),
    _sink(sink),
    _count_only(count_only),
    _deadline(deadline),
    _cells(config.workers)
{
    if (0 == config.workers)
        throw std::invalid_argument("need at least one worker");
    if (0 == config.task_group_size || config.task_group_size > max_task_group_size)
        throw std::invalid_argument("task group size must be between 1 and 64");

    std::seed_seq base{ config.seed };
    vector<uint64_t> seeds(config.workers);
    base.generate(seeds.begin(), seeds.end());

    _workers.reserve(config.workers);
    for (size_t w = 0 ; w < config.workers ; ++w)
        _workers.emplace_back(context.pattern_size(), context.target().node_count(), seeds[w]);
}

auto Scheduler::distribute(span<const NodeId> accepted_roots) -> void
{
    auto deques = initial_distribution(accepted_roots, _workers.size(), _config.task_group_size);
    for (size_t w = 0 ; w < _workers.size() ; ++w) {
        _workers[w].deque = std::move(deques[w]);
        _cells.work_available[w].value.store(! _workers[w].deque.empty(), memory_order_relaxed);
    }
    if (_config.audit)
        _tasks_created.fetch_add(accepted_roots.size(), memory_order_relaxed);
}

auto Scheduler::chaos(Worker & w) -> void
{
    if (_config.chaos && 0 == (w.rng() & 7))
        std::this_thread::yield();
}

auto Scheduler::backoff(size_t attempt) -> void
{
    if (attempt < 32)
        std::this_thread::yield();
    else
        std::this_thread::sleep_for(std::chrono::microseconds(std::min<size_t>(attempt - 31, 50)));
}

auto Scheduler::note_clock(Worker & w) -> void
{
    if (w.state.search_space_size >= w.next_clock_check) {
        w.next_clock_check = w.state.search_space_size + deadline_check_interval;
        if (steady_clock::now() >= _deadline) {
            _timed_out.store(true, memory_order_relaxed);
            _stop.store(true, memory_order_release);
        }
    }
}

auto Scheduler::execute_task(size_t w_id, const Task & task) -> void
{
    auto & w = _workers[w_id];
    w.state.truncate(task.depth);
    w.state.push(task.target);
    if (_config.audit)
        _tasks_executed.fetch_add(1, memory_order_relaxed);

    auto next = static_cast<size_t>(task.depth) + 1;
    if (next == _context.pattern_size()) {
        ++w.matches;
        if (_sink && ! _count_only) {
            _context.write_mapping(w.state, w.scratch);
            _sink->on_match(w.scratch);
        }
        return;
    }

    // children at the last position would only report a match, so do that here
    if (next + 1 == _context.pattern_size()) {
        for (auto t : _context.candidate_targets(w.state, next))
            if (_context.check_candidate(w.state, next, t)) {
                ++w.matches;
                if (_sink && ! _count_only) {
                    w.state.push(t);
                    _context.write_mapping(w.state, w.scratch);
                    _sink->on_match(w.scratch);
                    w.state.pop();
                }
            }
        note_clock(w);
        return;
    }

    w.accepted.clear();
    for (auto t : _context.candidate_targets(w.state, next))
        if (_context.check_candidate(w.state, next, t))
            w.accepted.push_back(t);
    note_clock(w);

    if (w.accepted.empty())
        return;

    if (_config.audit)
        _tasks_created.fetch_add(w.accepted.size(), memory_order_relaxed);

    // last chunk pushed first, so the smallest targets end up at the front
    auto g = _config.task_group_size;
    auto chunks = (w.accepted.size() + g - 1) / g;
    for (size_t c = chunks ; c-- > 0 ; ) {
        auto begin = c * g;
        auto len = std::min(g, w.accepted.size() - begin);
        w.deque.push_front(TaskGroup{ static_cast<uint32_t>(next), span<const NodeId>{ w.accepted }.subspan(begin, len) });
    }
}

auto Scheduler::process_task_requests(size_t w_id) -> void
{
    auto requester = _cells.requests[w_id].value.load(memory_order_acquire);
    if (empty_request == requester)
        return;

    auto & w = _workers[w_id];
    auto & transfer = _cells.transfers[requester].value;
    if (w.deque.empty()) {
        transfer.state.store(no_work, memory_order_release);
    }
    else {
        transfer.group = w.deque.pop_back();
        auto prefix = w.state.mapping().first(transfer.group.depth());
        transfer.prefix.assign(prefix.begin(), prefix.end());
        w.black = true;
        transfer.state.store(payload, memory_order_release);
        _cells.work_available[w_id].value.store(! w.deque.empty(), memory_order_relaxed);
    }
    if (_config.audit)
        _handshakes.fetch_add(1, memory_order_relaxed);
    _cells.requests[w_id].value.store(empty_request, memory_order_release);
}

auto Scheduler::answer_idle_request(size_t w_id) -> void
{
    // an idle worker has an empty deque, so this only ever answers no-work
    process_task_requests(w_id);
}

auto Scheduler::pick_victim(size_t w_id) -> optional<size_t>
{
    // reservoir sample over peers advertising work
    optional<size_t> result;
    size_t seen = 0;
    for (size_t v = 0 ; v < _workers.size() ; ++v) {
        if (v == w_id || ! _cells.work_available[v].value.load(memory_order_relaxed))
            continue;
        if (0 == std::uniform_int_distribution<size_t>(0, seen++)(_workers[w_id].rng))
            result = v;
    }
    return result;
}

auto Scheduler::audit_prefix(span<const NodeId> prefix, const TaskGroup & group) -> void
{
    SearchState probe{ _context.pattern_size(), _context.target().node_count() };
    bool ok = prefix.size() == group.depth();
    for (size_t i = 0 ; ok && i < prefix.size() ; ++i) {
        ok = _context.check_candidate(probe, i, prefix[i]);
        probe.push(prefix[i]);
    }
    for (auto t : group.pending())
        if (ok)
            ok = _context.check_candidate(probe, group.depth(), t);
    if (! ok)
        _invalid_prefixes.fetch_add(1, memory_order_relaxed);
}

auto Scheduler::request_from(size_t w_id, size_t victim) -> bool
{
    auto & w = _workers[w_id];
    int expected = empty_request;
    if (! _cells.requests[victim].value.compare_exchange_strong(expected, static_cast<int>(w_id),
                std::memory_order_acq_rel, memory_order_relaxed))
        return false;

    auto & transfer = _cells.transfers[w_id].value;
    int state;
    size_t spins = 0;
    while (nothing == (state = transfer.state.load(memory_order_acquire))) {
        if (_stop.load(memory_order_relaxed))
            return false;
        answer_idle_request(w_id);
        chaos(w);
        backoff(spins++ / 4);
    }

    transfer.state.store(nothing, memory_order_relaxed);
    if (no_work == state) {
        ++w.steals_failed;
        return false;
    }

    ++w.steals_ok;
    w.black = true;
    if (_config.audit) {
        _groups_transferred.fetch_add(1, memory_order_relaxed);
        audit_prefix(transfer.prefix, transfer.group);
    }
    w.state.assign_prefix(transfer.prefix);
    w.deque.push_front(transfer.group);
    return true;
}

auto Scheduler::termination_round(size_t w_id) -> TokenDecision
{
    auto & w = _workers[w_id];
    auto n = _workers.size();

    if (0 == w_id) {
        if (w.round_in_progress && ! _token_black.load(memory_order_relaxed) && ! w.black)
            return TokenDecision::terminate;
        w.round_in_progress = true;
        w.black = false;
        _token_black.store(false, memory_order_relaxed);
    }
    else if (w.black) {
        _token_black.store(true, memory_order_relaxed);
        w.black = false;
    }

    _token_holder.store((w_id + 1) % n, memory_order_release);
    return TokenDecision::keep_going;
}

auto Scheduler::acquire_task(size_t w_id) -> bool
{
    auto & w = _workers[w_id];
    _cells.work_available[w_id].value.store(false, memory_order_relaxed);

    for (size_t attempt = 0 ; ; ++attempt) {
        if (_stop.load(memory_order_acquire))
            return false;

        answer_idle_request(w_id);

        if (_token_holder.load(memory_order_acquire) == w_id
                && TokenDecision::terminate == termination_round(w_id)) {
            _terminated.store(true, memory_order_relaxed);
            _stop.store(true, memory_order_release);
            return false;
        }

        if (_config.stealing && _workers.size() > 1) {
            chaos(w);
            if (auto victim = pick_victim(w_id)) {
                if (request_from(w_id, *victim))
                    return true;
                continue;
            }
        }

        backoff(attempt);
    }
}

auto Scheduler::run_worker(size_t w_id) -> void
{
    auto & w = _workers[w_id];
    while (true) {
        if (w.deque.empty() && ! acquire_task(w_id))
            break;

        w.black = true;
        auto task = w.deque.pop_task();
        _cells.work_available[w_id].value.store(! w.deque.empty(), memory_order_relaxed);
        process_task_requests(w_id);
        chaos(w);
        execute_task(w_id, task);

        if (_stop.load(memory_order_relaxed))
            break;
    }
}

auto Scheduler::run() -> void
{
    vector<std::jthread> threads;
    threads.reserve(_workers.size());
    for (size_t w = 0 ; w < _workers.size() ; ++w)
        threads.emplace_back([this, w] { run_worker(w); });
}

auto Scheduler::collect_stats(SearchStats & stats) const -> void
{
    for (auto & w : _workers) {
        stats.search_space_size += w.state.search_space_size;
        stats.match_count += w.matches;
        stats.steals_ok += w.steals_ok;
        stats.steals_failed += w.steals_failed;
    }
    stats.timed_out = stats.timed_out || _timed_out.load();
}

auto Scheduler::collect_audit() const -> SchedulerAudit
{
    SchedulerAudit result;
    result.tasks_created = _tasks_created.load();
    result.tasks_executed = _tasks_executed.load();
    result.groups_transferred = _groups_transferred.load();
    result.invalid_prefixes = _invalid_prefixes.load();
    result.handshakes_completed = _handshakes.load();
    result.terminated_by_token = _terminated.load();
    for (auto & w : _workers)
        result.tasks_left_in_deques += w.deque.task_count();
    for (auto & t : _cells.transfers)
        if (nothing != t.value.state.load())
            ++result.transfers_left_pending;
    for (auto & r : _cells.requests)
        if (empty_request != r.value.load())
            ++result.requests_left_pending;
    return result;
}

auto ri::run_parallel(const LabeledDigraph & pattern, const LabeledDigraph & target,
        const EngineConfig & config, const ParallelConfig & parallel, MatchSink * sink,
        SchedulerAudit * audit) -> SearchStats
{
    auto plan = prepare_search(pattern, target, config);
    return run_parallel(pattern, target, config, plan, parallel, sink, audit);
}

auto ri::run_parallel(const LabeledDigraph & pattern, const LabeledDigraph & target,
        const EngineConfig & config, const SearchPlan & plan, const ParallelConfig & parallel,
        MatchSink * sink, SchedulerAudit * audit) -> SearchStats
{
    if (0 == parallel.workers)
        throw std::invalid_argument("need at least one worker");
    if (0 == parallel.task_group_size || parallel.task_group_size > max_task_group_size)
        throw std::invalid_argument("task group size must be between 1 and 64");

    SearchStats stats;
    stats.preprocessing_time = plan.preprocessing_time;
    auto start = steady_clock::now();

    SearchContext context{ pattern, target, plan.ordering, plan.domains ? &*plan.domains : nullptr,
        config.testing_skip_structure_check };
    Scheduler scheduler{ context, parallel, sink, config.count_only,
        start + std::chrono::duration_cast<steady_clock::duration>(config.time_limit) };

    if (! plan.provably_empty) {
        // root tasks are checked before they are handed out, like every other task
        SearchState root{ pattern.node_count(), target.node_count() };
        vector<NodeId> accepted;
        for (auto t : context.candidate_targets(root, 0))
            if (context.check_candidate(root, 0, t))
                accepted.push_back(t);
        stats.search_space_size += root.search_space_size;
        scheduler.distribute(accepted);
    }

    scheduler.run();
    scheduler.collect_stats(stats);
    if (audit)
        *audit = scheduler.collect_audit();

    stats.matching_time = duration<double>(steady_clock::now() - start).count();
    stats.total_time = stats.preprocessing_time + stats.matching_time;
    return stats;
}
