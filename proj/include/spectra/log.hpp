// Copyright (C) 2026 The Spectra Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <string>

namespace spectra {

/// Configures the stderr logger from SPECTRA_LOG_LEVEL (trace, debug,
/// info, warn, error, off). Defaults to info.
void init_logging();

void log_debug(const std::string& msg);
void log_info(const std::string& msg);
void log_warn(const std::string& msg);
void log_error(const std::string& msg);

}  // namespace spectra
