// SPDX-License-Identifier: Apache-2.0
#include "starfd/errors.hpp"

namespace starfd {
namespace {

std::string join(const std::vector<std::string>& problems) {
    std::string out;
    for (const auto& p : problems) {
        if (!out.empty()) out += "; ";
        out += p;
    }
    return out;
}

}  // namespace

ValidationError::ValidationError(std::vector<std::string> problems)
    : std::invalid_argument(join(problems)), problems_(std::move(problems)) {}

}  // namespace starfd
