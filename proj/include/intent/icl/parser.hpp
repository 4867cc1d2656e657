// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string_view>

#include "intent/icl/ast.hpp"

namespace intent::icl {

/// Parses a whole program (one or more `;`-terminated statements).
/// Throws LexError or ParseError.
IclProgram parse(std::string_view source);

/// Parses a standalone condition, as found after `trigger` or `checking`.
ConditionPtr parseCondition(std::string_view source);

/// Seconds since the Unix epoch for a `YYYY-MM-DDTHH:MM:SS` literal read
/// as UTC. Throws std::invalid_argument on an impossible calendar date.
std::int64_t parseTimeLiteral(std::string_view text);

}  // namespace intent::icl
