#include "cdrlab/errors.hpp"

namespace cdrlab {

void throw_usage(const std::string& what) { throw UsageError(what); }
void throw_config(const std::string& what) { throw ConfigError(what); }

}  // namespace cdrlab
