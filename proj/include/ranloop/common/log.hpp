#pragma once

#include <cstdio>
#include <cstdlib>
#include <cstring>

// Minimal stderr logger. Verbosity comes from the RANLOOP_LOG environment
// variable (error|warn|info|debug), default warn.

namespace ranloop::log {

enum Level { kError = 0, kWarn = 1, kInfo = 2, kDebug = 3 };

inline Level threshold() {
    static Level lvl = [] {
        const char* env = std::getenv("RANLOOP_LOG");
        if (!env) return kWarn;
        if (!std::strcmp(env, "error")) return kError;
        if (!std::strcmp(env, "info")) return kInfo;
        if (!std::strcmp(env, "debug")) return kDebug;
        return kWarn;
    }();
    return lvl;
}

template <typename... Args>
void emit(Level lvl, const char* tag, const char* fmt, Args... args) {
    if (lvl > threshold()) return;
    std::fprintf(stderr, "[%s] ", tag);
    std::fprintf(stderr, fmt, args...);
    std::fputc('\n', stderr);
}

#define RANLOOP_LOG_ERROR(...) ::ranloop::log::emit(::ranloop::log::kError, "error", __VA_ARGS__)
#define RANLOOP_LOG_WARN(...) ::ranloop::log::emit(::ranloop::log::kWarn, "warn", __VA_ARGS__)
#define RANLOOP_LOG_INFO(...) ::ranloop::log::emit(::ranloop::log::kInfo, "info", __VA_ARGS__)
#define RANLOOP_LOG_DEBUG(...) ::ranloop::log::emit(::ranloop::log::kDebug, "debug", __VA_ARGS__)

}  // namespace ranloop::log
