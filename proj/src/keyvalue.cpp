// SPDX-License-Identifier: Apache-2.0
#include "starfd/keyvalue.hpp"

#include <fstream>
#include <sstream>
#include <vector>

#include "starfd/errors.hpp"

namespace starfd {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

}  // namespace

KeyValues KeyValues::parse(std::string_view text, std::string_view origin) {
    KeyValues out;
    std::vector<std::string> problems;
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto end = text.find('\n');
        std::string_view line = text.substr(0, end);
        text = end == std::string_view::npos ? std::string_view{} : text.substr(end + 1);
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::string where = std::string(origin) + ":" + std::to_string(line_no) + ": ";
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            problems.push_back(where + "expected key = value");
            continue;
        }
        const std::string key(trim(line.substr(0, eq)));
        if (key.empty()) {
            problems.push_back(where + "empty key");
            continue;
        }
        if (out.contains(key)) {
            problems.push_back(where + "duplicate key '" + key + "'");
            continue;
        }
        out.set(key, std::string(trim(line.substr(eq + 1))));
    }
    if (!problems.empty()) throw ValidationError(std::move(problems));
    return out;
}

KeyValues KeyValues::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError({"cannot read " + path.string()});
    std::ostringstream text;
    text << in.rdbuf();
    return parse(text.str(), path.string());
}

std::optional<std::string> KeyValues::get(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

void KeyValues::merge(const KeyValues& over) {
    for (const auto& [k, v] : over.entries_) entries_[k] = v;
}

std::string KeyValues::serialize() const {
    std::string out;
    for (const auto& [k, v] : entries_) out += k + " = " + v + "\n";
    return out;
}

}  // namespace starfd
