#pragma once

#include <ostream>

namespace mam::cli {

enum ExitCode : int {
    ok = 0,
    usage = 2,
    io = 3,
    invalid_input = 4,
    analysis = 5,
    service = 6,
};

/// Environment variable naming the map file used when --map is absent.
inline constexpr const char* map_env = "MAM_MAP";

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace mam::cli
