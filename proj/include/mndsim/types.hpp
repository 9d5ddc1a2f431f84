#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace mndsim {

using PersonId = std::uint32_t;
using DeviceId = std::uint32_t;
using TileId = std::int64_t;

/// Network technology of an operator. Fixed per MNO for a whole run.
enum class Tech { t3g, t4g };

inline const char* tech_name(Tech t)
{
    return t == Tech::t3g ? "3G" : "4G";
}

inline Tech tech_from_name(const std::string& s)
{
    if (s == "3G") return Tech::t3g;
    if (s == "4G") return Tech::t4g;
    throw std::invalid_argument("unknown technology: " + s);
}

} // namespace mndsim
