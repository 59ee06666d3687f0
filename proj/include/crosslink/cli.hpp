#pragma once

namespace crosslink::cli {

/// Entry point of the command-line tool. Returns 0 on success, 1 on a usage
/// error, 2 on a data error.
int run(int argc, const char* const* argv);

}  // namespace crosslink::cli
