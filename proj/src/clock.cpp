#include "nafas/clock.hpp"

#include "nafas/errors.hpp"

namespace nafas {

void CommandQueue::push(Command command) {
    {
        std::lock_guard<std::mutex> lock(mutex_);
        commands_.push_back(command);
    }
    available_.notify_one();
}

std::optional<Command> CommandQueue::pop_until(std::chrono::steady_clock::time_point deadline) {
    std::unique_lock<std::mutex> lock(mutex_);
    if (!available_.wait_until(lock, deadline, [&] { return !commands_.empty(); })) {
        return std::nullopt;
    }
    Command command = commands_.front();
    commands_.pop_front();
    return command;
}

Command CommandQueue::pop_blocking() {
    std::unique_lock<std::mutex> lock(mutex_);
    available_.wait(lock, [&] { return !commands_.empty(); });
    Command command = commands_.front();
    commands_.pop_front();
    return command;
}

SteadyClock::SteadyClock(CommandQueue& commands)
    : commands_(commands), origin_(std::chrono::steady_clock::now()) {}

std::int64_t SteadyClock::now_ms() {
    auto elapsed = std::chrono::steady_clock::now() - origin_;
    return std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count();
}

std::chrono::steady_clock::time_point SteadyClock::time_point_of(std::int64_t ms) const {
    return origin_ + std::chrono::milliseconds(ms);
}

std::optional<Command> SteadyClock::wait_until(std::int64_t deadline_ms) {
    return commands_.pop_until(time_point_of(deadline_ms));
}

Command SteadyClock::wait_command() { return commands_.pop_blocking(); }

VirtualClock::VirtualClock(std::vector<ScriptedCommand> script, std::int64_t start_ms)
    : script_(std::move(script)), now_(start_ms) {}

std::int64_t VirtualClock::now_ms() { return now_; }

std::optional<Command> VirtualClock::wait_until(std::int64_t deadline_ms) {
    if (next_ < script_.size() && script_[next_].at_ms <= deadline_ms) {
        const auto& scripted = script_[next_++];
        now_ = std::max(now_, scripted.at_ms);
        return scripted.command;
    }
    now_ = std::max(now_, deadline_ms);
    return std::nullopt;
}

Command VirtualClock::wait_command() {
    if (next_ >= script_.size()) {
        throw ClockFailure("virtual clock: waiting for a command but the script is exhausted");
    }
    const auto& scripted = script_[next_++];
    now_ = std::max(now_, scripted.at_ms);
    return scripted.command;
}

}  // namespace nafas
