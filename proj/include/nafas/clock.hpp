#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <mutex>
#include <optional>
#include <vector>

namespace nafas {

enum class Command { TogglePause, Abort };

// Session time source plus command delivery. The engine only ever sleeps in
// wait_until, so a command interrupts it immediately; wait_command is the
// no-deadline wait used while paused. now_ms must be non-decreasing.
class Clock {
public:
    virtual ~Clock() = default;

    virtual std::int64_t now_ms() = 0;

    // Blocks until the deadline passes or a command arrives, whichever comes
    // first. Returns the command when one arrived before the deadline.
    virtual std::optional<Command> wait_until(std::int64_t deadline_ms) = 0;

    // Blocks until a command arrives.
    virtual Command wait_command() = 0;
};

// Thread-safe command channel. Producers (keyboard listener, signal watcher)
// push from their own threads; the session clock pops.
class CommandQueue {
public:
    void push(Command command);

    // Waits until a command is available or the deadline passes.
    std::optional<Command> pop_until(std::chrono::steady_clock::time_point deadline);

    Command pop_blocking();

private:
    std::mutex mutex_;
    std::condition_variable available_;
    std::deque<Command> commands_;
};

// Wall-time clock over std::chrono::steady_clock; t = 0 at construction.
class SteadyClock final : public Clock {
public:
    explicit SteadyClock(CommandQueue& commands);

    std::int64_t now_ms() override;
    std::optional<Command> wait_until(std::int64_t deadline_ms) override;
    Command wait_command() override;

private:
    std::chrono::steady_clock::time_point time_point_of(std::int64_t ms) const;

    CommandQueue& commands_;
    std::chrono::steady_clock::time_point origin_;
};

// Deterministic clock for tests and trace reproduction: time jumps straight
// to the next deadline or scripted command, so a full session runs in
// microseconds of real time and every run is bit-identical.
class VirtualClock final : public Clock {
public:
    struct ScriptedCommand {
        std::int64_t at_ms;
        Command command;
    };

    // Script must be ordered by at_ms.
    explicit VirtualClock(std::vector<ScriptedCommand> script = {}, std::int64_t start_ms = 0);

    std::int64_t now_ms() override;
    std::optional<Command> wait_until(std::int64_t deadline_ms) override;
    Command wait_command() override;

    std::size_t pending_commands() const { return script_.size() - next_; }

private:
    std::vector<ScriptedCommand> script_;
    std::size_t next_ = 0;
    std::int64_t now_;
};

}  // namespace nafas
