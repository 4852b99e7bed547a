#ifndef HIDS_TOOLS_RUN_CONFIG_HPP
#define HIDS_TOOLS_RUN_CONFIG_HPP

#include <CLI11.hpp>

#include <cstdio>
#include <map>
#include <string>

#include "hids/errors.hpp"

namespace hids::cli {

// Flat `key = value` configuration file with '#' comments. Keys are the long
// option names without the leading dashes; command-line flags override file
// values.
std::map<std::string, std::string> parse_kv_file(const std::string& path);

// Effective-value resolution (CLI > file > default) plus an echo of every
// value actually used, for artifact provenance.
class Settings {
public:
    void load_file(const std::string& path) { file_ = parse_kv_file(path); }
    const std::map<std::string, std::string>& file_values() const { return file_; }

    template <typename T>
    T get(const CLI::App& cmd, const std::string& key, T def) {
        const CLI::Option* opt = cmd.get_option("--" + key);
        T value = def;
        if (opt->count() > 0) {
            value = opt->as<T>();
        } else if (auto it = file_.find(key); it != file_.end()) {
            if (!CLI::detail::lexical_cast(it->second, value))
                throw UsageError("config: cannot parse " + key + " = '" + it->second + "'");
        }
        echo_[key] = format(value);
        return value;
    }

    bool flag(const CLI::App& cmd, const std::string& key) {
        const CLI::Option* opt = cmd.get_option("--" + key);
        bool value = false;
        if (opt->count() > 0) {
            value = true;
        } else if (auto it = file_.find(key); it != file_.end()) {
            if (!CLI::detail::lexical_cast(it->second, value))
                throw UsageError("config: cannot parse " + key + " = '" + it->second + "'");
        }
        echo_[key] = value ? "true" : "false";
        return value;
    }

    const std::map<std::string, std::string>& echo() const { return echo_; }

    // Canonical one-line rendering of the echo, digestible for provenance.
    std::string echo_string() const;

private:
    static std::string format(const std::string& v) { return v; }
    static std::string format(bool v) { return v ? "true" : "false"; }
    static std::string format(double v) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return buf;
    }
    template <typename T>
    static std::string format(T v) {
        return std::to_string(v);
    }

    std::map<std::string, std::string> file_;
    std::map<std::string, std::string> echo_;
};

}  // namespace hids::cli

#endif
