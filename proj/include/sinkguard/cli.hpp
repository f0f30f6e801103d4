#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sinkguard {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitRuntime = 2;

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name.
///
///   run    --scenario <file|preset> [--seed N] [--set key=value]... [--trace] [--out DIR]
///   sweep  --scenario <file|preset> --axis NAME --values a,b,c --seeds s1,s2
///          [--compare-detection] [--jobs N] [--set key=value]... [--out DIR]
///   report --in DIR [--out FILE]
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sinkguard
