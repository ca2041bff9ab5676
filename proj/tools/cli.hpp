#pragma once

#include "reflect/serialize.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace reflect::cli {

enum class Status { Ok, Error };

struct CommandResult {
  Status status = Status::Ok;
  Json payload;
  int exit_code = 0;  // 0 ok, 1 computational error, 2 usage error
};

/// Runs one invocation; args excludes the program name. Human-readable or
/// JSON output goes to `out`, diagnostics to `err`.
CommandResult run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Parses "1,0,-2" (commas or whitespace). Throws ParseError.
Vector parse_vector(const std::string& text);
/// Reads one value per line; commas and whitespace also separate values.
Vector read_vector_file(const std::string& path);

}  // namespace reflect::cli
