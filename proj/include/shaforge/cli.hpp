#pragma once

namespace shaforge::cli {

// Exit codes: 0 success/accept, 1 verification failure, 2 usage or parse
// error, 3 a search bound was exhausted (the message names the bound).
int run(int argc, const char* const* argv);

}  // namespace shaforge::cli
