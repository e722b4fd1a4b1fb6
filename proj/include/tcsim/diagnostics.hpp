#pragma once

#include <functional>
#include <string>

namespace tcsim {

using WarningHandler = std::function<void(const std::string&)>;

// Replaces the process-wide warning sink; the default prints to stderr.
// Pass an empty handler to restore the default. Returns the previous handler.
WarningHandler set_warning_handler(WarningHandler handler);

void emit_warning(const std::string& message);

}
