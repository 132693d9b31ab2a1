#include "nafas/tui.hpp"

#include <poll.h>
#include <sys/ioctl.h>
#include <termios.h>
#include <unistd.h>

#include <algorithm>
#include <cstdio>

#include "nafas/plan.hpp"
#include "nafas/render.hpp"

namespace nafas {

namespace {

// Active total (prep excluded) for the duration hints in the menu.
std::int64_t level_total_ms(const LevelSpec& spec) {
    return spec.cycles * (ratio_sum_centi(spec) * spec.unit_centi) / 10;
}

std::string pad_right(std::string text, std::size_t columns) {
    if (text.size() > columns) text.resize(columns);
    text.resize(columns, ' ');
    return text;
}

// One selection pass over `lines`; `detail` renders an extra line under the
// list for the highlighted entry. Returns nullopt on cancel.
std::optional<std::size_t> pick(const std::vector<std::string>& lines,
                                const std::function<std::string(std::size_t)>& detail,
                                KeySource& keys, std::ostream& out, const MenuStyle& style) {
    std::size_t selected = 0;
    bool first = true;

    auto draw = [&] {
        if (!first) {
            // Move back over the block (list + detail line) and repaint.
            out << "\033[" << lines.size() + 1 << "A";
        }
        first = false;
        for (std::size_t i = 0; i < lines.size(); ++i) {
            out << "\033[2K";
            if (i == selected && style.color) {
                out << "\033[7m  " << lines[i] << "\033[0m";
            } else if (i == selected) {
                out << "> " << lines[i];
            } else {
                out << "  " << lines[i];
            }
            out << "\n";
        }
        out << "\033[2K  " << detail(selected) << "\n";
        out.flush();
    };

    for (;;) {
        draw();
        KeyEvent key = keys.next();
        switch (key.key) {
            case Key::Up:
                if (selected > 0) --selected;
                break;
            case Key::Down:
                if (selected + 1 < lines.size()) ++selected;
                break;
            case Key::Enter:
                return selected;
            case Key::Escape:
            case Key::CtrlC:
            case Key::Eof:
                return std::nullopt;
            case Key::Char:
                if (key.ch == 'k' && selected > 0) --selected;
                if (key.ch == 'j' && selected + 1 < lines.size()) ++selected;
                if (key.ch == 'q') return std::nullopt;
                break;
            default:
                break;
        }
    }
}

}  // namespace

std::optional<Selection> select_program(const Catalog& catalog, KeySource& keys, std::ostream& out,
                                        const MenuStyle& style) {
    const auto& programs = catalog.programs();

    std::vector<std::string> lines;
    lines.reserve(programs.size());
    for (const auto& program : programs) {
        std::string durations;
        for (Level level : kAllLevels) {
            if (!durations.empty()) durations += " / ";
            durations += format_mm_ss(level_total_ms(program.spec(level)));
        }
        lines.push_back(pad_right(program.id, 18) + pad_right(program.name, 19) + durations);
    }

    out << "Choose a program (arrows or j/k, Enter to confirm, q to cancel)\n";
    auto program_index = pick(
        lines, [&](std::size_t i) { return programs[i].description; }, keys, out, style);
    if (!program_index) return std::nullopt;
    const Program& program = programs[*program_index];

    std::vector<std::string> level_lines;
    for (Level level : kAllLevels) {
        const LevelSpec& spec = program.spec(level);
        level_lines.push_back(pad_right(std::string(level_name(level)), 10) +
                              pad_right(format_ratios(spec), 18) + "unit " +
                              format_centi(spec.unit_centi) + "s  x" +
                              std::to_string(spec.cycles));
    }

    out << "Level for " << program.name << ":\n";
    auto level_index = pick(
        level_lines,
        [&](std::size_t i) {
            return format_mm_ss(level_total_ms(program.specs[i])) + " of breathing";
        },
        keys, out, style);
    if (!level_index) return std::nullopt;

    return Selection{program.id, kAllLevels[*level_index]};
}

void SessionEventQueue::push(const SessionEvent& event) {
    {
        std::lock_guard<std::mutex> lock(mutex_);
        events_.push_back(event);
    }
    available_.notify_one();
}

std::optional<SessionEvent> SessionEventQueue::pop_wait(std::int64_t timeout_ms) {
    std::unique_lock<std::mutex> lock(mutex_);
    if (!available_.wait_for(lock, std::chrono::milliseconds(timeout_ms),
                             [&] { return !events_.empty(); })) {
        return std::nullopt;
    }
    SessionEvent event = events_.front();
    events_.pop_front();
    return event;
}

void session_view_loop(SessionEventQueue& events, const std::function<std::int64_t()>& now_ms,
                       std::ostream& out, const ViewOptions& options) {
    ViewState view;
    view.ascii = options.ascii;

    bool have_step = false;
    std::int64_t step_origin = 0;    // instant elapsed is measured from
    std::int64_t step_duration = 1;
    std::int64_t frozen_elapsed = 0;
    std::int64_t done_before_step = 0;  // durations of all completed steps

    auto repaint = [&](std::int64_t elapsed) {
        if (!have_step) return;
        view.step_elapsed_ms = elapsed;
        view.session_remaining_ms =
            std::max<std::int64_t>(0, options.session_total_ms - done_before_step - elapsed);
        out << render_frame(view, options.width);
        out.flush();
    };

    for (;;) {
        auto event = events.pop_wait(options.refresh_ms);
        if (!event) {
            // No news; advance the bar from the clock. A paused frame simply
            // repaints the frozen elapsed value.
            std::int64_t elapsed = view.paused
                                       ? frozen_elapsed
                                       : std::clamp<std::int64_t>(now_ms() - step_origin, 0,
                                                                  step_duration);
            repaint(elapsed);
            continue;
        }

        switch (event->kind) {
            case EventKind::StepStarted: {
                have_step = true;
                step_origin = event->at_ms;
                step_duration = std::max<std::int64_t>(1, event->deadline_ms - event->at_ms);
                view.phase_label = std::string(phase_label(event->step_kind));
                view.step_total_ms = step_duration;
                view.cycle_display =
                    event->cycle == kPrepCycle
                        ? "prep"
                        : "cycle " + std::to_string(event->cycle + 1) + "/" +
                              std::to_string(options.session_cycles);
                if (options.bell) out << '\a';
                repaint(0);
                break;
            }
            case EventKind::StepCompleted:
                done_before_step += step_duration;
                repaint(step_duration);
                break;
            case EventKind::Paused:
                view.paused = true;
                frozen_elapsed = std::clamp<std::int64_t>(event->at_ms - step_origin, 0,
                                                          step_duration);
                repaint(frozen_elapsed);
                break;
            case EventKind::Resumed:
                view.paused = false;
                step_origin += event->pause_duration_ms;
                repaint(std::clamp<std::int64_t>(event->at_ms - step_origin, 0, step_duration));
                break;
            case EventKind::CycleCompleted:
                break;
            case EventKind::Finished:
            case EventKind::Aborted:
                out << "\n";
                out.flush();
                return;
        }
    }
}

namespace {
termios g_saved_termios;
bool g_termios_saved = false;

void restore_terminal() {
    if (g_termios_saved) {
        tcsetattr(STDIN_FILENO, TCSANOW, &g_saved_termios);
        g_termios_saved = false;
    }
}
}  // namespace

RawTerminalMode::RawTerminalMode() {
    if (!isatty(STDIN_FILENO)) return;
    termios raw{};
    if (tcgetattr(STDIN_FILENO, &raw) != 0) return;
    if (!g_termios_saved) {
        g_saved_termios = raw;
        g_termios_saved = true;
        std::atexit(restore_terminal);
    }
    raw.c_lflag &= ~static_cast<tcflag_t>(ICANON | ECHO | ISIG);
    raw.c_cc[VMIN] = 1;
    raw.c_cc[VTIME] = 0;
    if (tcsetattr(STDIN_FILENO, TCSANOW, &raw) == 0) active_ = true;
}

RawTerminalMode::~RawTerminalMode() {
    if (active_) restore_terminal();
}

KeyEvent read_key_blocking() {
    char c = 0;
    if (read(STDIN_FILENO, &c, 1) != 1) return KeyEvent::of(Key::Eof);

    if (c == '\x1b') {
        // Escape alone, or the start of an arrow sequence.
        pollfd p{STDIN_FILENO, POLLIN, 0};
        if (poll(&p, 1, 50) <= 0) return KeyEvent::of(Key::Escape);
        char seq[2] = {0, 0};
        if (read(STDIN_FILENO, &seq[0], 1) != 1) return KeyEvent::of(Key::Escape);
        if (seq[0] != '[') return KeyEvent::of(Key::Escape);
        if (read(STDIN_FILENO, &seq[1], 1) != 1) return KeyEvent::of(Key::Escape);
        if (seq[1] == 'A') return KeyEvent::of(Key::Up);
        if (seq[1] == 'B') return KeyEvent::of(Key::Down);
        return KeyEvent::of(Key::Escape);
    }
    if (c == '\r' || c == '\n') return KeyEvent::of(Key::Enter);
    if (c == ' ') return KeyEvent::of(Key::Space);
    if (c == 3) return KeyEvent::of(Key::CtrlC);
    return KeyEvent::chr(c);
}

std::optional<Command> session_command_for_byte(char byte) {
    if (byte == ' ') return Command::TogglePause;
    if (byte == 'q' || byte == 3) return Command::Abort;
    return std::nullopt;
}

int terminal_width(int fallback) {
    winsize size{};
    if (ioctl(STDOUT_FILENO, TIOCGWINSZ, &size) == 0 && size.ws_col >= 40) {
        return size.ws_col;
    }
    return fallback;
}

}  // namespace nafas
