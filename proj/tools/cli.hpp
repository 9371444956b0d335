#pragma once

#include <iosfwd>

namespace ck::cli {

// Exit codes: 0 success, 1 verification or stability failure, 2 usage, parse
// or input errors.
int main(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace ck::cli
