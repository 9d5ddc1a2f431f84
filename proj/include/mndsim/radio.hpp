#pragma once

// Radio propagation: log-distance signal strength, logistic signal
// dominance, per-tile signal measures and antenna coverage cells.

#include "mndsim/config.hpp"
#include "mndsim/geometry.hpp"

#include <span>
#include <vector>

namespace mndsim::radio {

/// Signal strength never drops below this value.
inline constexpr double strength_floor_dbm = -300.0;

/// Reference distance of the log-distance model.
inline constexpr double reference_distance_m = 1.0;

/// Transmit power in dBm: 10*log10(1000 * power_w).
double tx_power_dbm(double power_w);

/// Bearing from the antenna to the point, degrees clockwise from +y
/// (compass convention), in [0, 360).
double bearing_deg(geom::Point antenna_pos, geom::Point p);

/// 0 dB for omnidirectional cells; for 120-degree sectors the standard
/// parabolic horizontal pattern 12*(delta/70)^2 dB capped at 30 dB, with
/// delta the smallest angular distance between bearing and azimuth.
double directional_attenuation_db(const config::AntennaConfig& antenna, double bearing);

/// Log-distance path loss over the 2-D distance, floored at -300 dBm.
double signal_strength_dbm(const config::AntennaConfig& antenna, geom::Point p);

/// Logistic transform 1 / (1 + exp(-steepness * (S - midpoint))).
double signal_dominance(const config::AntennaConfig& antenna, geom::Point p);

/// Connection condition: strength and dominance both meet the antenna's
/// minima at the point.
bool meets_thresholds(const config::AntennaConfig& antenna, geom::Point p);

struct SignalMeasure {
    std::string antenna_id;
    TileId tile_id = 0;
    double strength_dbm = 0.0;
    double dominance = 0.0;
};

struct CoverageCell {
    std::string antenna_id;
    std::vector<TileId> covered_tiles; // ascending
};

/// One row per antenna x tile, evaluated at tile centers; rows ordered by
/// antenna_id then tile_id.
std::vector<SignalMeasure> compute_signal_measures(std::span<const config::AntennaConfig> antennas,
                                                   const geom::Grid& grid);

/// Tiles whose center satisfies both connection thresholds, per antenna;
/// ordered by antenna_id.
std::vector<CoverageCell> compute_coverage(std::span<const config::AntennaConfig> antennas,
                                           const geom::Grid& grid);

} // namespace mndsim::radio
