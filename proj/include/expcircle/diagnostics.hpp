#pragma once

#include <functional>
#include <string>

namespace expcircle::diagnostics {

using WarningSink = std::function<void(const std::string&)>;

/// Replaces the warning sink (stderr by default). Passing an empty function
/// silences warnings.
void set_warning_sink(WarningSink sink);
void warn(const std::string& message);

}  // namespace expcircle::diagnostics
