#include "nafas/config.hpp"

#include <cstdlib>
#include <fstream>

#include <nlohmann/json.hpp>

#include "nafas/errors.hpp"

namespace nafas {

Env Env::from_process() {
    Env env;
    env.get = [](const std::string& name) -> std::optional<std::string> {
        const char* value = std::getenv(name.c_str());
        if (!value) return std::nullopt;
        return std::string(value);
    };
    return env;
}

Env Env::from_map(std::map<std::string, std::string> values) {
    Env env;
    env.get = [values = std::move(values)](const std::string& name) -> std::optional<std::string> {
        auto it = values.find(name);
        if (it == values.end()) return std::nullopt;
        return it->second;
    };
    return env;
}

namespace {

std::filesystem::path base_dir(const Env& env, const char* xdg_var, const char* home_suffix) {
    if (auto xdg = env.get(xdg_var); xdg && !xdg->empty()) {
        return std::filesystem::path(*xdg) / "nafas";
    }
    std::string home = env.get("HOME").value_or(".");
    return std::filesystem::path(home) / home_suffix / "nafas";
}

}  // namespace

std::filesystem::path config_dir(const Env& env) {
    return base_dir(env, "XDG_CONFIG_HOME", ".config");
}

std::filesystem::path data_dir(const Env& env) {
    return base_dir(env, "XDG_DATA_HOME", ".local/share");
}

FileConfig load_config_file(const std::filesystem::path& path) {
    FileConfig config;
    std::ifstream in(path, std::ios::binary);
    if (!in) return config;

    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw IoError("malformed config file " + path.string() + ": " + e.what());
    }
    if (!doc.is_object()) throw IoError("malformed config file " + path.string() +
                                        ": top-level value must be an object");

    if (doc.contains("default_level")) {
        if (!doc["default_level"].is_string()) {
            throw IoError("config key \"default_level\" must be a string");
        }
        config.default_level = parse_level(doc["default_level"].get<std::string>());
    }
    if (doc.contains("prep_seconds")) {
        if (!doc["prep_seconds"].is_number_integer() || doc["prep_seconds"].get<std::int64_t>() < 0) {
            throw IoError("config key \"prep_seconds\" must be a non-negative integer");
        }
        config.prep_seconds = doc["prep_seconds"].get<std::int64_t>();
    }
    if (doc.contains("silent")) {
        if (!doc["silent"].is_boolean()) throw IoError("config key \"silent\" must be a boolean");
        config.silent = doc["silent"].get<bool>();
    }
    if (doc.contains("ascii")) {
        if (!doc["ascii"].is_boolean()) throw IoError("config key \"ascii\" must be a boolean");
        config.ascii = doc["ascii"].get<bool>();
    }
    return config;
}

}  // namespace nafas
