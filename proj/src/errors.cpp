#include "hexdg/errors.hpp"

namespace hexdg {

void throw_config(const std::string& what) { throw ConfigError(what); }

void throw_invariant(const std::string& what) { throw InvariantError(what); }

} // namespace hexdg
