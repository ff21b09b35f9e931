// SPDX-License-Identifier: Apache-2.0

#include "ajcdma/kvfile.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>

#include "ajcdma/error.hpp"

namespace ajcdma {

namespace {

std::string trim(const std::string& s) {
    auto begin = s.begin();
    auto end = s.end();
    while (begin != end && std::isspace(static_cast<unsigned char>(*begin))) ++begin;
    while (end != begin && std::isspace(static_cast<unsigned char>(*(end - 1)))) --end;
    return {begin, end};
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

} // namespace

KvFile KvFile::load(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), path);
}

KvFile KvFile::parse(const std::string& text, const std::string& origin) {
    KvFile kv;
    kv.origin_ = origin;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParameterError(origin + ":" + std::to_string(lineno) +
                                 ": expected `key = value`, got: " + line);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ParameterError(origin + ":" + std::to_string(lineno) + ": empty key");
        kv.values_[key] = value;
    }
    return kv;
}

bool KvFile::has(const std::string& key) const { return values_.count(key) > 0; }

const std::string& KvFile::require(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end())
        throw ParameterError(origin_ + ": missing required key `" + key + "`");
    return it->second;
}

std::string KvFile::get_string(const std::string& key) const { return require(key); }

std::string KvFile::get_string(const std::string& key, const std::string& fallback) const {
    return has(key) ? values_.at(key) : fallback;
}

double KvFile::get_double(const std::string& key) const {
    const std::string& v = require(key);
    try {
        if (v == "inf" || v == "+inf") return std::numeric_limits<double>::infinity();
        std::size_t used = 0;
        const double d = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ParameterError(origin_ + ": key `" + key + "` is not a number: " + v);
    }
}

double KvFile::get_double(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
}

long KvFile::get_int(const std::string& key) const {
    const std::string& v = require(key);
    long out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size())
        throw ParameterError(origin_ + ": key `" + key + "` is not an integer: " + v);
    return out;
}

long KvFile::get_int(const std::string& key, long fallback) const {
    return has(key) ? get_int(key) : fallback;
}

bool KvFile::get_bool(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    std::string v = values_.at(key);
    std::transform(v.begin(), v.end(), v.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (v == "true" || v == "on" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "off" || v == "no" || v == "0") return false;
    throw ParameterError(origin_ + ": key `" + key + "` is not a boolean: " + values_.at(key));
}

std::vector<double> KvFile::get_double_list(const std::string& key) const {
    std::vector<double> out;
    for (const auto& item : split_list(require(key))) {
        try {
            if (item == "inf" || item == "+inf") {
                out.push_back(std::numeric_limits<double>::infinity());
                continue;
            }
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ParameterError(origin_ + ": key `" + key + "` has a non-numeric item: " + item);
        }
    }
    return out;
}

std::vector<long> KvFile::get_int_list(const std::string& key) const {
    std::vector<long> out;
    for (const auto& item : split_list(require(key))) {
        long v = 0;
        const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
        if (ec != std::errc{} || ptr != item.data() + item.size())
            throw ParameterError(origin_ + ": key `" + key + "` has a non-integer item: " + item);
        out.push_back(v);
    }
    return out;
}

std::vector<std::string> KvFile::get_string_list(const std::string& key) const {
    return split_list(require(key));
}

std::vector<std::string> KvFile::keys() const {
    std::vector<std::string> out;
    out.reserve(values_.size());
    for (const auto& [k, v] : values_) out.push_back(k);
    return out;
}

} // namespace ajcdma
