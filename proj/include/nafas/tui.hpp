#pragma once

#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>

#include "nafas/catalog.hpp"
#include "nafas/clock.hpp"
#include "nafas/events.hpp"
#include "nafas/level.hpp"

namespace nafas {

enum class Key { Up, Down, Enter, Escape, Space, CtrlC, Char, Eof };

struct KeyEvent {
    Key key = Key::Eof;
    char ch = 0;  // for Key::Char

    static KeyEvent of(Key k) { return {k, 0}; }
    static KeyEvent chr(char c) { return {Key::Char, c}; }
};

// Blocking key stream; Eof ends it. Tests script it, production decodes raw
// terminal bytes.
class KeySource {
public:
    virtual ~KeySource() = default;
    virtual KeyEvent next() = 0;
};

class ScriptedKeys final : public KeySource {
public:
    explicit ScriptedKeys(std::vector<KeyEvent> keys) : keys_(std::move(keys)) {}
    KeyEvent next() override {
        if (next_ >= keys_.size()) return KeyEvent::of(Key::Eof);
        return keys_[next_++];
    }

private:
    std::vector<KeyEvent> keys_;
    std::size_t next_ = 0;
};

struct MenuStyle {
    bool color = true;  // reverse-video highlight; falls back to a "> " marker
};

struct Selection {
    std::string program_id;
    Level level = Level::Beginner;
};

// Two-stage picker: program list (description + per-level durations shown),
// then level. Up/Down and k/j move, Enter confirms, q/Esc cancels. Returns
// nullopt on cancel or key-stream end. Purely stream-driven; the caller is
// responsible for raw mode and TTY checks.
std::optional<Selection> select_program(const Catalog& catalog, KeySource& keys,
                                        std::ostream& out, const MenuStyle& style);

// Hand-off queue between the engine thread and the view loop.
class SessionEventQueue {
public:
    void push(const SessionEvent& event);
    // Waits up to timeout_ms; nullopt on timeout.
    std::optional<SessionEvent> pop_wait(std::int64_t timeout_ms);

private:
    std::mutex mutex_;
    std::condition_variable available_;
    std::deque<SessionEvent> events_;
};

struct ViewOptions {
    bool bell = true;    // BEL once per StepStarted
    bool ascii = false;
    int width = 80;
    std::int64_t session_total_ms = 0;
    std::int64_t session_cycles = 0;
    std::int64_t refresh_ms = 100;  // ~10 Hz
};

// Consumes engine events and repaints one status line until the terminal
// event arrives. Between events the bar advances from interpolated clock
// time. now_ms must be the same time base the engine's clock uses.
void session_view_loop(SessionEventQueue& events, const std::function<std::int64_t()>& now_ms,
                       std::ostream& out, const ViewOptions& options);

// Puts the controlling terminal into raw mode for the object's lifetime.
// Restores the saved settings on destruction and on abnormal exit.
class RawTerminalMode {
public:
    RawTerminalMode();   // no-op when stdin is not a TTY
    ~RawTerminalMode();

    RawTerminalMode(const RawTerminalMode&) = delete;
    RawTerminalMode& operator=(const RawTerminalMode&) = delete;

    bool active() const { return active_; }

private:
    bool active_ = false;
};

// Decodes one key from raw stdin (arrow escape sequences, Enter, Space, ^C,
// plain characters). Returns Eof on read failure or closed input.
KeyEvent read_key_blocking();

// In-session keyboard contract: space toggles pause, q or Ctrl-C aborts,
// every other byte is inert.
std::optional<Command> session_command_for_byte(char byte);

int terminal_width(int fallback = 80);

}  // namespace nafas
