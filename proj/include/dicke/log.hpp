#pragma once

#include <string>

// Minimal stderr logger; level from the DICKE_LOG environment variable
// (error|warn|info|debug, default warn).

namespace dicke::log {

enum class Level { Error = 0, Warn = 1, Info = 2, Debug = 3 };

Level threshold();
void message(Level level, const std::string& text);

inline void error(const std::string& t) { message(Level::Error, t); }
inline void warn(const std::string& t) { message(Level::Warn, t); }
inline void info(const std::string& t) { message(Level::Info, t); }
inline void debug(const std::string& t) { message(Level::Debug, t); }

}  // namespace dicke::log
