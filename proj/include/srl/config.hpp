#pragma once

#include <map>
#include <string>

namespace srl {

// Flat key = value configuration with '#' comments. Dotted keys group related
// settings (train.lr_ini, grid.n_b, ...). Later assignments win.
class Config {
public:
    static Config parse_file(const std::string& path);
    static Config parse_text(const std::string& text);

    // "key=value" override, as supplied on the command line
    void set_override(const std::string& assignment);

    bool has(const std::string& key) const { return kv_.count(key) > 0; }
    std::string get_str(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key, int fallback) const;
    long long get_i64(const std::string& key, long long fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;

    const std::map<std::string, std::string>& entries() const { return kv_; }

private:
    std::map<std::string, std::string> kv_;
};

}  // namespace srl
