#pragma once

#include <cstdint>
#include <vector>

namespace lamg {

using Index = std::int32_t;
using EntryCount = std::int64_t;
using Real = double;
using Vector = std::vector<Real>;

} // namespace lamg
