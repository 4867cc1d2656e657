// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include <json.hpp>

#include "intent/icl/ast.hpp"

namespace intent::icl {

// Normal form: single spaces, lowercase keys, minimal parentheses for
// arithmetic, one statement per line. The output re-parses to an equal AST.
std::string print(const IclProgram& program);
std::string print(const TriggerStatement& stmt);
std::string print(const Statement& stmt);
std::string print(const Condition& cond);
std::string print(const Expr& expr);
std::string print(const AmountExpr& amount);

// Canonical JSON dump with stable field order. Spans are omitted so two
// dumps are equal exactly when the trees are structurally equal.
nlohmann::ordered_json toJson(const IclProgram& program);
nlohmann::ordered_json toJson(const TriggerStatement& stmt);
nlohmann::ordered_json toJson(const Condition& cond);
nlohmann::ordered_json toJson(const Expr& expr);

bool structurallyEqual(const IclProgram& a, const IclProgram& b);
bool structurallyEqual(const Condition& a, const Condition& b);

}  // namespace intent::icl
