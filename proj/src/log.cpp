// Copyright (C) 2026 The Spectra Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "spectra/log.hpp"

#include <cstdlib>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

namespace spectra {

namespace {

spdlog::logger& logger() {
    static auto instance = [] {
        auto l = spdlog::stderr_color_mt("spectra");
        l->set_pattern("[%l] %v");
        l->set_level(spdlog::level::info);
        return l;
    }();
    return *instance;
}

}  // namespace

void init_logging() {
    auto& l = logger();
    if (const char* env = std::getenv("SPECTRA_LOG_LEVEL")) {
        const auto level = spdlog::level::from_str(env);
        // from_str maps unknown names to off; only honour exact matches.
        if (level != spdlog::level::off || std::string(env) == "off") {
            l.set_level(level);
        } else {
            l.warn("unknown SPECTRA_LOG_LEVEL '{}', keeping info", env);
        }
    }
}

void log_debug(const std::string& msg) { logger().debug(msg); }
void log_info(const std::string& msg) { logger().info(msg); }
void log_warn(const std::string& msg) { logger().warn(msg); }
void log_error(const std::string& msg) { logger().error(msg); }

}  // namespace spectra
