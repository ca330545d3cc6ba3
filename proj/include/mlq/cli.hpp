#pragma once

// Command-line entry point.
//
//   mlq validate <file> [--data-dir D]
//   mlq simulate <file> --config C --ticks N [--trace OUT] [--data-dir D] [--save-dir S]
//   mlq generate <file> --config C --out DIR [--backend B] [--data-dir D]
//   mlq serve [--port P] [--host H] [--examples DIR] [--static DIR]
//   mlq fmt <file> [--check]
//
// Exit codes: 0 success, 1 invalid model or runtime fault, 2 usage error
// (bad arguments, unknown configuration or backend), 3 I/O error.

#include <ostream>

namespace mlq::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIO = 3;

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int cli_main(int argc, const char* const* argv);

}  // namespace mlq::cli
