#pragma once

#include <string>

#include "mci/types.hpp"

namespace mci {

// shortest round-trip decimal form, deterministic across runs
std::string fmt_double(double v);
// "re im" pair
std::string fmt_complex(Complex v);

} // namespace mci
