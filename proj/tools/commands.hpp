#pragma once

namespace normwave::cli {

/// Entry point of the normwave tool. Returns 0 on success, 2 when a check of
/// the command fails or a solver gives up, and 1 on usage errors.
int run(int argc, char** argv);

}  // namespace normwave::cli
