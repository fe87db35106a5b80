#pragma once

// Records which public operations ran, so a test can check that the
// verification suites touch every one of them.

#include <set>
#include <string>
#include <string_view>

namespace semihoch {

void note_op(std::string_view name);
std::set<std::string> covered_ops();
void reset_covered_ops();

}  // namespace semihoch
