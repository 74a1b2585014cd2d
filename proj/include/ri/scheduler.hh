/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#ifndef RI_GUARD_RI_SCHEDULER_HH
#define RI_GUARD_RI_SCHEDULER_HH 1

#include <ri/search.hh>

#include <array>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <deque>
#include <optional>
#include <random>
#include <span>
#include <vector>

namespace ri
{
    inline constexpr std::size_t max_task_group_size = 64;

    /// Map the pattern node at ordering position depth onto target.
    struct Task
    {
        std::uint32_t depth;
        NodeId target;

        auto operator== (const Task &) const -> bool = default;
    };

    /**
     * Sibling tasks sharing one depth and one mapping prefix. The group is
     * the unit of stealing; its owner consumes it one task at a time.
     */
    class TaskGroup
    {
        private:
            std::uint32_t _depth = 0;
            std::uint32_t _size = 0;
            std::uint32_t _next = 0;
            std::array<NodeId, max_task_group_size> _targets{};

        public:
            TaskGroup() = default;

            /// Throws std::invalid_argument if targets is empty or too large.
            TaskGroup(std::uint32_t depth, std::span<const NodeId> targets);

            auto depth() const -> std::uint32_t
            {
                return _depth;
            }

            /// Tasks not yet taken.
            auto remaining() const -> std::size_t
            {
                return _size - _next;
            }

            auto exhausted() const -> bool
            {
                return _next == _size;
            }

            auto take() -> Task
            {
                return Task{ _depth, _targets[_next++] };
            }

            auto pending() const -> std::span<const NodeId>
            {
                return { _targets.data() + _next, _targets.data() + _size };
            }
    };

    /**
     * Owner-only double-ended queue of task groups. Front is deepest and
     * is where the owner pushes and pops; thieves are served from the back.
     */
    class PrivateDeque
    {
        private:
            std::deque<TaskGroup> _groups;

        public:
            auto empty() const -> bool
            {
                return _groups.empty();
            }

            auto size() const -> std::size_t
            {
                return _groups.size();
            }

            auto push_front(const TaskGroup & g) -> void
            {
                _groups.push_front(g);
            }

            auto push_back(const TaskGroup & g) -> void
            {
                _groups.push_back(g);
            }

            auto front() -> TaskGroup &
            {
                return _groups.front();
            }

            auto back() const -> const TaskGroup &
            {
                return _groups.back();
            }

            auto pop_front() -> void
            {
                _groups.pop_front();
            }

            auto pop_back() -> TaskGroup
            {
                auto g = _groups.back();
                _groups.pop_back();
                return g;
            }

            /// Take one task from the front group, dropping it once exhausted.
            auto pop_task() -> Task
            {
                auto t = _groups.front().take();
                if (_groups.front().exhausted())
                    _groups.pop_front();
                return t;
            }

            auto task_count() const -> std::size_t
            {
                std::size_t result = 0;
                for (auto & g : _groups)
                    result += g.remaining();
                return result;
            }

            auto groups() const -> const std::deque<TaskGroup> &
            {
                return _groups;
            }
    };

    /// Round-robin depth-0 tasks over workers, coalesced into groups of at most group_size.
    auto initial_distribution(std::span<const NodeId> root_candidates, std::size_t workers,
            std::size_t group_size) -> std::vector<PrivateDeque>;

    struct ParallelConfig
    {
        std::size_t workers = 1;
        std::size_t task_group_size = 4;
        std::uint64_t seed = 0;

        /// Off freezes acquire_task: idle workers only wait for termination.
        bool stealing = true;

        /// Inject random yields into worker loops to perturb schedules.
        bool chaos = false;

        /// Count created and executed tasks and validate stolen prefixes.
        bool audit = false;
    };

    struct SchedulerAudit
    {
        std::uint64_t tasks_created = 0;
        std::uint64_t tasks_executed = 0;
        std::uint64_t groups_transferred = 0;
        std::uint64_t tasks_left_in_deques = 0;
        std::uint64_t transfers_left_pending = 0;
        std::uint64_t invalid_prefixes = 0;
        std::uint64_t handshakes_completed = 0;
        std::uint64_t requests_left_pending = 0;
        bool terminated_by_token = false;
    };

    namespace scheduler_detail
    {
        inline constexpr int empty_request = -1;

        enum TransferState : int
        {
            nothing = 0,
            no_work = 1,
            payload = 2
        };

        template <typename T_>
        struct alignas(64) Padded
        {
            T_ value{};
        };

        struct Transfer
        {
            std::atomic<int> state{ nothing };
            TaskGroup group;
            std::vector<NodeId> prefix;
        };

        enum class TokenDecision
        {
            keep_going,
            terminate
        };
    }

    /**
     * The three shared arrays: work_available flags (owner writes, anyone
     * reads), requests (requester id placed by compare-exchange from
     * empty), and transfers (written by the victim, read by the requester).
     */
    struct WorkerCells
    {
        std::vector<scheduler_detail::Padded<std::atomic<bool>>> work_available;
        std::vector<scheduler_detail::Padded<std::atomic<int>>> requests;
        std::vector<scheduler_detail::Padded<scheduler_detail::Transfer>> transfers;

        explicit WorkerCells(std::size_t workers);
    };

    /**
     * Receiver-initiated work stealing over private deques, with a token
     * ring for termination. Each worker's state is touched only by the
     * thread running that worker; the step functions are public so tests
     * can drive them deterministically on one thread.
     */
    class Scheduler
    {
        public:
            struct alignas(64) Worker
            {
                PrivateDeque deque;
                SearchState state;
                std::mt19937_64 rng;
                std::vector<NodeId> accepted, scratch;

                std::uint64_t matches = 0;
                std::uint64_t steals_ok = 0;
                std::uint64_t steals_failed = 0;
                std::uint64_t next_clock_check = deadline_check_interval;

                /// Busy or sent work since last forwarding the token.
                bool black = true;
                bool round_in_progress = false;

                Worker(std::size_t pattern_size, std::size_t target_size, std::uint64_t seed);
            };

        private:
            const SearchContext & _context;
            ParallelConfig _config;
            MatchSink * _sink;
            bool _count_only;
            std::chrono::steady_clock::time_point _deadline;

            std::vector<Worker> _workers;
            WorkerCells _cells;

            alignas(64) std::atomic<std::size_t> _token_holder{ 0 };
            std::atomic<bool> _token_black{ false };
            alignas(64) std::atomic<bool> _stop{ false };
            std::atomic<bool> _terminated{ false };
            std::atomic<bool> _timed_out{ false };

            alignas(64) std::atomic<std::uint64_t> _tasks_created{ 0 };
            std::atomic<std::uint64_t> _tasks_executed{ 0 };
            std::atomic<std::uint64_t> _groups_transferred{ 0 };
            std::atomic<std::uint64_t> _invalid_prefixes{ 0 };
            std::atomic<std::uint64_t> _handshakes{ 0 };

            auto chaos(Worker & w) -> void;
            auto backoff(std::size_t attempt) -> void;
            auto answer_idle_request(std::size_t w) -> void;
            auto pick_victim(std::size_t w) -> std::optional<std::size_t>;
            auto audit_prefix(std::span<const NodeId> prefix, const TaskGroup & group) -> void;
            auto note_clock(Worker & w) -> void;

        public:
            Scheduler(const SearchContext & context, const ParallelConfig & config, MatchSink * sink,
                    bool count_only, std::chrono::steady_clock::time_point deadline);

            Scheduler(const Scheduler &) = delete;
            auto operator= (const Scheduler &) -> Scheduler & = delete;

            auto worker(std::size_t w) -> Worker &
            {
                return _workers[w];
            }

            auto cells() -> WorkerCells &
            {
                return _cells;
            }

            auto worker_count() const -> std::size_t
            {
                return _workers.size();
            }

            auto token_holder() const -> std::size_t
            {
                return _token_holder.load();
            }

            auto terminated() const -> bool
            {
                return _terminated.load();
            }

            auto timed_out() const -> bool
            {
                return _timed_out.load();
            }

            /// Install the per-worker initial deques from initial_distribution.
            auto distribute(std::span<const NodeId> accepted_roots) -> void;

            /**
             * Apply one task: truncate the mapping to its depth and extend
             * it. At full depth report a match. If the next position is the
             * last, every accepted candidate there is reported directly.
             * Otherwise the accepted candidates are pushed, coalesced into
             * groups, to the front of the deque.
             */
            auto execute_task(std::size_t w, const Task & task) -> void;

            /// Serve a pending request from the back of w's deque, or answer no-work.
            auto process_task_requests(std::size_t w) -> void;

            /// Place one request at victim and wait for its answer. True if work arrived.
            auto request_from(std::size_t w, std::size_t victim) -> bool;

            /// Idle loop: steal until work arrives (true) or the run ends (false).
            auto acquire_task(std::size_t w) -> bool;

            /// Called by an idle worker holding the token.
            auto termination_round(std::size_t w) -> scheduler_detail::TokenDecision;

            auto run_worker(std::size_t w) -> void;

            /// Run all workers on their own threads until termination or timeout.
            auto run() -> void;

            auto collect_stats(SearchStats & stats) const -> void;
            auto collect_audit() const -> SchedulerAudit;
    };

    /**
     * Parallel enumeration. Matches reach the sink concurrently and in no
     * particular order; the match set equals the sequential one.
     */
    auto run_parallel(const LabeledDigraph & pattern, const LabeledDigraph & target,
            const EngineConfig & config, const ParallelConfig & parallel, MatchSink * sink = nullptr,
            SchedulerAudit * audit = nullptr) -> SearchStats;

    auto run_parallel(const LabeledDigraph & pattern, const LabeledDigraph & target,
            const EngineConfig & config, const SearchPlan & plan, const ParallelConfig & parallel,
            MatchSink * sink = nullptr, SchedulerAudit * audit = nullptr) -> SearchStats;
}

#endif
