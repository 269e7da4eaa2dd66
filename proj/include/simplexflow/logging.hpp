#pragma once

#include <string_view>

namespace simplexflow {

// Warnings go to stderr unless silenced. Thread safe.
void log_warning(std::string_view message);
void set_warnings_enabled(bool enabled);

}  // namespace simplexflow
