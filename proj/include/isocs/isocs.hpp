#pragma once

#include "isocs/errors.hpp"
#include "isocs/families.hpp"
#include "isocs/isotonic.hpp"
#include "isocs/quadrature.hpp"
#include "isocs/specfun.hpp"
#include "isocs/summation.hpp"
#include "isocs/verify.hpp"

namespace isocs {

inline constexpr const char* version = "1.0.0";

}  // namespace isocs
