#pragma once

#include <string>

#include "sigms/assembly.hpp"

namespace sigms {

/// Compile a scalar expression in x and y into a callable. Supports
/// numbers, x, y, pi, + - * / ^, parentheses, unary minus, and the
/// functions sin cos tan exp log sqrt abs. Throws ConfigError on parse
/// failure. "0" (or an all-whitespace string) yields an empty field.
ScalarField compile_expression(const std::string& text);

/// The built-in source terms of the experiment suite.
ScalarField builtin_source_f1();
ScalarField builtin_source_f2();

/// Resolve a source selector: "f1", "f2", or an expression.
ScalarField resolve_source(const std::string& selector);

} // namespace sigms
