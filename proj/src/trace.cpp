#include "semihoch/trace.hpp"

#include <mutex>

namespace semihoch {

namespace {

std::mutex& trace_mutex() {
  static std::mutex m;
  return m;
}

std::set<std::string, std::less<>>& trace_set() {
  static std::set<std::string, std::less<>> s;
  return s;
}

}  // namespace

void note_op(std::string_view name) {
  std::lock_guard lock(trace_mutex());
  auto& s = trace_set();
  if (s.find(name) == s.end()) s.emplace(name);
}

std::set<std::string> covered_ops() {
  std::lock_guard lock(trace_mutex());
  return {trace_set().begin(), trace_set().end()};
}

void reset_covered_ops() {
  std::lock_guard lock(trace_mutex());
  trace_set().clear();
}

}  // namespace semihoch
