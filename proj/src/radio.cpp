#include "mndsim/radio.hpp"

#include <algorithm>
#include <cmath>

namespace mndsim::radio {

double tx_power_dbm(double power_w)
{
    return 10.0 * std::log10(1000.0 * power_w);
}

double bearing_deg(geom::Point antenna_pos, geom::Point p)
{
    const double dx = p.x - antenna_pos.x;
    const double dy = p.y - antenna_pos.y;
    double deg = std::atan2(dx, dy) * 180.0 / M_PI;
    if (deg < 0.0)
        deg += 360.0;
    return deg;
}

double directional_attenuation_db(const config::AntennaConfig& antenna, double bearing)
{
    if (antenna.cell_type == config::CellType::omnidirectional)
        return 0.0;
    double delta = std::fmod(std::abs(bearing - antenna.azimuth_deg), 360.0);
    if (delta > 180.0)
        delta = 360.0 - delta;
    const double half_power_width = 70.0;
    return std::min(12.0 * (delta / half_power_width) * (delta / half_power_width), 30.0);
}

double signal_strength_dbm(const config::AntennaConfig& antenna, geom::Point p)
{
    const double dx = p.x - antenna.position.x;
    const double dy = p.y - antenna.position.y;
    const double d = std::max(std::sqrt(dx * dx + dy * dy), reference_distance_m);
    double s = tx_power_dbm(antenna.power_w) -
               10.0 * antenna.path_loss_exponent * std::log10(d / reference_distance_m);
    if (antenna.cell_type == config::CellType::directional_120)
        s -= directional_attenuation_db(antenna, bearing_deg(antenna.position, p));
    return std::max(s, strength_floor_dbm);
}

double signal_dominance(const config::AntennaConfig& antenna, geom::Point p)
{
    const double s = signal_strength_dbm(antenna, p);
    return 1.0 / (1.0 + std::exp(-antenna.dominance_steepness *
                                 (s - antenna.dominance_midpoint_dbm)));
}

bool meets_thresholds(const config::AntennaConfig& antenna, geom::Point p)
{
    return signal_strength_dbm(antenna, p) >= antenna.min_strength_dbm &&
           signal_dominance(antenna, p) >= antenna.min_dominance;
}

namespace {

std::vector<const config::AntennaConfig*>
by_antenna_id(std::span<const config::AntennaConfig> antennas)
{
    std::vector<const config::AntennaConfig*> sorted;
    sorted.reserve(antennas.size());
    for (const config::AntennaConfig& a : antennas)
        sorted.push_back(&a);
    std::sort(sorted.begin(), sorted.end(),
              [](const auto* a, const auto* b) { return a->antenna_id < b->antenna_id; });
    return sorted;
}

} // namespace

std::vector<SignalMeasure> compute_signal_measures(std::span<const config::AntennaConfig> antennas,
                                                   const geom::Grid& grid)
{
    std::vector<SignalMeasure> measures;
    measures.reserve(antennas.size() * static_cast<std::size_t>(grid.tile_count()));
    for (const config::AntennaConfig* antenna : by_antenna_id(antennas)) {
        for (TileId tile = 0; tile < grid.tile_count(); ++tile) {
            const geom::Point center = geom::tile_center(grid, tile);
            measures.push_back({antenna->antenna_id, tile, signal_strength_dbm(*antenna, center),
                                signal_dominance(*antenna, center)});
        }
    }
    return measures;
}

std::vector<CoverageCell> compute_coverage(std::span<const config::AntennaConfig> antennas,
                                           const geom::Grid& grid)
{
    std::vector<CoverageCell> cells;
    cells.reserve(antennas.size());
    for (const config::AntennaConfig* antenna : by_antenna_id(antennas)) {
        CoverageCell cell;
        cell.antenna_id = antenna->antenna_id;
        for (TileId tile = 0; tile < grid.tile_count(); ++tile)
            if (meets_thresholds(*antenna, geom::tile_center(grid, tile)))
                cell.covered_tiles.push_back(tile);
        cells.push_back(std::move(cell));
    }
    return cells;
}

} // namespace mndsim::radio
