#include "semmap/errors.hpp"

#include <utility>

namespace semmap {

namespace {

std::string format_parse_message(const std::string& source, std::size_t line, const std::string& what) {
  if (line == 0) return source + ": " + what;
  return source + ":" + std::to_string(line) + ": " + what;
}

}  // namespace

ParseError::ParseError(const std::string& source, std::size_t line, const std::string& what)
    : Error(format_parse_message(source, line, what)), line_(line) {}

StageError::StageError(std::string stage, const std::string& what)
    : Error("stage '" + stage + "': " + what), stage_(std::move(stage)) {}

}  // namespace semmap
