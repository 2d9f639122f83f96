#pragma once

#include <string>

#include "sysgame/io.hpp"
#include "sysgame/syntax.hpp"

namespace sysgame::test {

inline std::string fixture_path(const std::string& name) { return std::string(SYSGAME_FIXTURES) + "/" + name; }

inline std::string fixture_text(const std::string& name) { return read_file(fixture_path(name)); }

inline ResolvedModule fixture_module(const std::string& name) {
  return resolve_and_desugar(parse_module(fixture_text(name)));
}

inline ResolvedModule module_of(const std::string& text) { return resolve_and_desugar(parse_module(text)); }

}  // namespace sysgame::test
