#pragma once

#include "nptest/decision_rules.hpp"
#include "nptest/duality.hpp"
#include "nptest/error.hpp"
#include "nptest/monte_carlo.hpp"
#include "nptest/normal_kernel.hpp"
#include "nptest/philox.hpp"

namespace nptest {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace nptest
