#include "tcsim/diagnostics.hpp"

#include <iostream>
#include <utility>

namespace tcsim {

namespace {
WarningHandler& handler_slot() {
    static WarningHandler handler;
    return handler;
}
}

WarningHandler set_warning_handler(WarningHandler handler) {
    WarningHandler previous = std::move(handler_slot());
    handler_slot() = std::move(handler);
    return previous;
}

void emit_warning(const std::string& message) {
    if (handler_slot()) {
        handler_slot()(message);
    } else {
        std::cerr << "warning: " << message << "\n";
    }
}

}
