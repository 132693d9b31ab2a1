#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>

#include "nafas/level.hpp"

namespace nafas {

// Environment lookup, injectable for tests.
struct Env {
    std::function<std::optional<std::string>(const std::string&)> get;

    static Env from_process();
    static Env from_map(std::map<std::string, std::string> values);
};

// $XDG_CONFIG_HOME/nafas, falling back to ~/.config/nafas.
std::filesystem::path config_dir(const Env& env);

// $XDG_DATA_HOME/nafas, falling back to ~/.local/share/nafas.
std::filesystem::path data_dir(const Env& env);

// Optional <config-dir>/config.json; keys default_level, prep_seconds,
// silent, ascii. A missing file yields all-empty fields; a malformed file is
// an IoError (bad config should be loud, not silently ignored).
struct FileConfig {
    std::optional<Level> default_level;
    std::optional<std::int64_t> prep_seconds;
    std::optional<bool> silent;
    std::optional<bool> ascii;
};

FileConfig load_config_file(const std::filesystem::path& path);

}  // namespace nafas
