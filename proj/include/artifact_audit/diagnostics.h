#pragma once

#include <functional>
#include <string>

namespace artifact_audit {

using WarningSink = std::function<void(const std::string&)>;

// Writes "warning: <msg>" to stderr.
void warnToStderr(const std::string& msg);

// Thread count for the OpenMP kernels: ARTIFACT_AUDIT_THREADS when set to a
// positive integer, otherwise the OpenMP default.
int configuredThreads();
void applyThreadLimit();

}  // namespace artifact_audit
