#pragma once

// Synthetic population and per-tick movement under the configured pattern.

#include "mndsim/config.hpp"
#include "mndsim/geometry.hpp"
#include "mndsim/types.hpp"

#include <random>
#include <vector>

namespace mndsim::mobility {

enum class Phase { at_home, to_work, at_work, to_home };

struct Person {
    PersonId person_id = 0;
    geom::Point home;
    geom::Point work;
    geom::Point pos;
    double speed = 0.0;                // m/s, fixed for the whole run
    std::vector<DeviceId> device_ids;  // 0, 1 or 2 entries
    Phase phase = Phase::at_home;
    double dwell_remaining = 0.0;      // seconds left at the current endpoint

    // movement bookkeeping
    std::vector<geom::Point> route;    // waypoints of the current leg
    std::size_t route_next = 0;
    std::mt19937_64 rng;               // per-person substream
};

/// Uniform point inside the territory by rejection sampling from the
/// bounding box.
geom::Point sample_point(const geom::Territory& territory, std::mt19937_64& rng);

/// num_persons persons with uniform home/work locations, device counts
/// drawn from prob_devices, speed_car with probability prob_car. Device ids
/// are sequential starting at 1. Each person receives an RNG substream
/// seeded from the master stream, so later per-person draws are independent
/// of iteration order.
std::vector<Person> synthesize_population(const config::PersonsConfig& persons_cfg,
                                          const config::SimulationConfig& sim_cfg,
                                          const geom::Territory& territory,
                                          std::mt19937_64& rng);

/// Advances one person by dt seconds. The position stays inside the
/// territory under all three patterns.
void step(Person& person, const config::MovementPattern& pattern,
          const config::PersonsConfig& persons_cfg, const geom::Territory& territory, double dt);

} // namespace mndsim::mobility
