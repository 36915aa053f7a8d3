// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace starfd {

// Flat "key = value" text. One entry per line, '#' starts a comment, blank
// lines are ignored. Keys are unique.
class KeyValues {
public:
    static KeyValues parse(std::string_view text, std::string_view origin = "<input>");
    static KeyValues load(const std::filesystem::path& path);

    void set(const std::string& key, std::string value) { entries_[key] = std::move(value); }
    void erase(const std::string& key) { entries_.erase(key); }
    bool contains(const std::string& key) const { return entries_.contains(key); }
    std::optional<std::string> get(const std::string& key) const;
    const std::map<std::string, std::string>& entries() const { return entries_; }

    // Entries from `over` replace ours.
    void merge(const KeyValues& over);
    // Sorted by key, one "key = value" line each.
    std::string serialize() const;

private:
    std::map<std::string, std::string> entries_;
};

}  // namespace starfd
