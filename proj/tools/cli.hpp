#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace htjack::cli
{

// Exit codes: 0 success, 1 invalid input, 2 computation failed a check.
int dispatch(int argc, char **argv);
int dispatch(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace htjack::cli
