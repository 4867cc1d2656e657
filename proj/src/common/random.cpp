// SPDX-License-Identifier: Apache-2.0
#include "intent/common/random.hpp"

namespace intent {

std::uint64_t hashTag(std::string_view text) {
    // FNV-1a
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : text) {
        h ^= static_cast<std::uint8_t>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace intent
