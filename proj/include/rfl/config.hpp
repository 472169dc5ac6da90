#pragma once

#include <map>
#include <string>
#include <vector>

#include "rfl/vec3.hpp"

namespace rfl {

// Flat key-value scenario config. Lines are `key = value`, `#` starts a
// comment, keys use dotted paths (e.g. vehicle.mass). Unknown keys are kept
// verbatim so one file can configure every module.
class Config {
  public:
    Config() = default;

    static Config load(const std::string& path);
    static Config parse(const std::string& text);

    bool has(const std::string& key) const;
    void set(const std::string& key, const std::string& value);

    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key, int fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    Vec3 get_vec3(const std::string& key, const Vec3& fallback) const;
    std::vector<double> get_list(const std::string& key) const;

    const std::map<std::string, std::string>& entries() const { return entries_; }

  private:
    std::map<std::string, std::string> entries_;
};

} // namespace rfl
