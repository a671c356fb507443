#include "expcircle/diagnostics.hpp"

#include <iostream>
#include <mutex>

namespace expcircle::diagnostics {

namespace {

std::mutex g_mutex;
WarningSink g_sink = [](const std::string& m) { std::cerr << "expcircle: warning: " << m << '\n'; };

}  // namespace

void set_warning_sink(WarningSink sink) {
    std::lock_guard lock(g_mutex);
    g_sink = std::move(sink);
}

void warn(const std::string& message) {
    std::lock_guard lock(g_mutex);
    if (g_sink) g_sink(message);
}

}  // namespace expcircle::diagnostics
