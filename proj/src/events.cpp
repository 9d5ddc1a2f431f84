#include "mndsim/events.hpp"

#include <algorithm>
#include <cmath>

namespace mndsim::events {

EventCode event_code_from_value(int v)
{
    if (v < 0 || v > 3)
        throw std::invalid_argument("unknown event code " + std::to_string(v));
    return static_cast<EventCode>(v);
}

double ta_unit_m(Tech tech)
{
    return tech == Tech::t4g ? 78.12 : 554.0;
}

int timing_advance(double distance_m, Tech tech)
{
    if (distance_m < 0.0)
        throw std::invalid_argument("negative distance");
    return static_cast<int>(std::floor(distance_m / ta_unit_m(tech)));
}

const config::AntennaConfig* best_antenna(geom::Point device_pos,
                                          std::span<const config::AntennaConfig> antennas,
                                          const AttachmentState& state,
                                          const std::string* current_antenna)
{
    const config::AntennaConfig* best = nullptr;
    double best_dominance = 0.0;
    for (const config::AntennaConfig& antenna : antennas) {
        const bool keeps_slot = current_antenna && *current_antenna == antenna.antenna_id;
        if (!keeps_slot && state.count(antenna.antenna_id) >= antenna.max_connections)
            continue;
        if (!radio::meets_thresholds(antenna, device_pos))
            continue;
        const double dominance = radio::signal_dominance(antenna, device_pos);
        if (!best || dominance > best_dominance ||
            (dominance == best_dominance && antenna.antenna_id < best->antenna_id)) {
            best = &antenna;
            best_dominance = dominance;
        }
    }
    return best;
}

namespace {

EventRecord make_event(long long t, DeviceId device, const config::AntennaConfig& antenna,
                       EventCode code, Tech tech, geom::Point pos, const geom::Grid& grid)
{
    EventRecord e;
    e.t = t;
    e.device_id = device;
    e.antenna_id = antenna.antenna_id;
    e.code = code;
    e.tech = tech;
    const double d = std::hypot(pos.x - antenna.position.x, pos.y - antenna.position.y);
    e.ta = timing_advance(d, tech);
    e.x = pos.x;
    e.y = pos.y;
    const auto tile = geom::tile_of(grid, pos);
    e.tile_id = tile ? *tile : -1;
    return e;
}

} // namespace

std::vector<EventRecord> tick_events(std::vector<DevicePosition> devices,
                                     std::span<const config::AntennaConfig> antennas,
                                     AttachmentState& state, long long t, Tech tech,
                                     const geom::Grid& grid)
{
    // ascending device id makes capacity contention deterministic
    std::sort(devices.begin(), devices.end(),
              [](const DevicePosition& a, const DevicePosition& b) {
                  return a.device_id < b.device_id;
              });
    auto antenna_by_id = [&](const std::string& id) -> const config::AntennaConfig* {
        for (const config::AntennaConfig& a : antennas)
            if (a.antenna_id == id)
                return &a;
        return nullptr;
    };

    std::vector<EventRecord> out;
    for (const DevicePosition& device : devices) {
        auto attached = state.device_antenna.find(device.device_id);
        const bool was_attached = attached != state.device_antenna.end();
        const std::string previous = was_attached ? attached->second : std::string();

        const config::AntennaConfig* next =
            best_antenna(device.pos, antennas, state, was_attached ? &previous : nullptr);

        if (!next) {
            if (was_attached) {
                // detach reports the antenna being left
                const config::AntennaConfig* old = antenna_by_id(previous);
                out.push_back(make_event(t, device.device_id, *old, EventCode::detach, tech,
                                         device.pos, grid));
                --state.connection_count[previous];
                state.device_antenna.erase(attached);
            }
            continue;
        }
        if (!was_attached) {
            out.push_back(make_event(t, device.device_id, *next, EventCode::attach, tech,
                                     device.pos, grid));
            ++state.connection_count[next->antenna_id];
            state.device_antenna[device.device_id] = next->antenna_id;
        }
        else if (previous == next->antenna_id) {
            out.push_back(make_event(t, device.device_id, *next, EventCode::update, tech,
                                     device.pos, grid));
        }
        else {
            out.push_back(make_event(t, device.device_id, *next, EventCode::handover, tech,
                                     device.pos, grid));
            --state.connection_count[previous];
            ++state.connection_count[next->antenna_id];
            attached->second = next->antenna_id;
        }
    }
    return out;
}

} // namespace mndsim::events
