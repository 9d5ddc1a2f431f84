#pragma once

// Device-antenna attachment per tick and the resulting network event
// records with Timing Advance and ground-truth position.

#include "mndsim/config.hpp"
#include "mndsim/geometry.hpp"
#include "mndsim/radio.hpp"
#include "mndsim/types.hpp"

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mndsim::events {

enum class EventCode { attach = 0, update = 1, detach = 2, handover = 3 };

inline int event_code_value(EventCode c)
{
    return static_cast<int>(c);
}

EventCode event_code_from_value(int v);

/// Timing Advance quantization unit in meters.
double ta_unit_m(Tech tech);

/// floor(distance / unit); throws on negative distance.
int timing_advance(double distance_m, Tech tech);

struct EventRecord {
    long long t = 0;
    DeviceId device_id = 0;
    std::string antenna_id; // on detach: the antenna being left
    EventCode code = EventCode::attach;
    Tech tech = Tech::t4g;
    int ta = 0;
    double x = 0.0; // true device position
    double y = 0.0;
    TileId tile_id = 0;
};

struct AttachmentState {
    std::map<std::string, int> connection_count; // per antenna
    std::map<DeviceId, std::string> device_antenna;

    int count(const std::string& antenna_id) const
    {
        auto it = connection_count.find(antenna_id);
        return it == connection_count.end() ? 0 : it->second;
    }
};

struct DevicePosition {
    DeviceId device_id = 0;
    geom::Point pos;
};

/// Feasible = both thresholds met at the position and spare capacity (the
/// device's current antenna, if given, always has a slot for it). Picks the
/// maximal dominance; ties go to the lower antenna_id. Null when nothing is
/// feasible.
const config::AntennaConfig* best_antenna(geom::Point device_pos,
                                          std::span<const config::AntennaConfig> antennas,
                                          const AttachmentState& state,
                                          const std::string* current_antenna = nullptr);

/// Processes devices in ascending device_id and emits one event per device
/// state change plus an update heartbeat for every device that stays
/// attached. Mutates the attachment state.
std::vector<EventRecord> tick_events(std::vector<DevicePosition> devices,
                                     std::span<const config::AntennaConfig> antennas,
                                     AttachmentState& state, long long t, Tech tech,
                                     const geom::Grid& grid);

} // namespace mndsim::events
