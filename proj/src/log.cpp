#include "dicke/log.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace dicke::log {

namespace {

Level parse_env() {
  const char* env = std::getenv("DICKE_LOG");
  if (env == nullptr) return Level::Warn;
  if (std::strcmp(env, "error") == 0) return Level::Error;
  if (std::strcmp(env, "warn") == 0) return Level::Warn;
  if (std::strcmp(env, "info") == 0) return Level::Info;
  if (std::strcmp(env, "debug") == 0) return Level::Debug;
  return Level::Warn;
}

const char* tag(Level level) {
  switch (level) {
    case Level::Error: return "error";
    case Level::Warn: return "warn";
    case Level::Info: return "info";
    case Level::Debug: return "debug";
  }
  return "?";
}

}  // namespace

Level threshold() {
  static const Level cached = parse_env();
  return cached;
}

void message(Level level, const std::string& text) {
  if (static_cast<int>(level) > static_cast<int>(threshold())) return;
  std::fprintf(stderr, "[dicke %s] %s\n", tag(level), text.c_str());
}

}  // namespace dicke::log
