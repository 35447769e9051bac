#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace psg::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitRuntime = 3;

// Entry point shared by the psg binary and in-process tests. args[0] is the
// program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace psg::cli
