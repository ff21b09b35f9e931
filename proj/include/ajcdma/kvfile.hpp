// SPDX-License-Identifier: Apache-2.0
//
// Flat key = value configuration files. Lines are `key = value`, `#` starts
// a comment, lists are comma separated. Used for experiment configs and
// custom channel profiles.
#pragma once

#include <map>
#include <string>
#include <vector>

namespace ajcdma {

class KvFile {
public:
    /// Parse a file from disk. Throws IoError if unreadable, ParameterError
    /// on a malformed line.
    static KvFile load(const std::string& path);

    /// Parse from an in-memory string (tests, defaults).
    static KvFile parse(const std::string& text, const std::string& origin = "<string>");

    bool has(const std::string& key) const;

    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    long get_int(const std::string& key) const;
    long get_int(const std::string& key, long fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<double> get_double_list(const std::string& key) const;
    std::vector<long> get_int_list(const std::string& key) const;
    std::vector<std::string> get_string_list(const std::string& key) const;

    /// Keys present in the file, in no particular order.
    std::vector<std::string> keys() const;

private:
    std::string origin_;
    std::map<std::string, std::string> values_;

    const std::string& require(const std::string& key) const;
};

} // namespace ajcdma
