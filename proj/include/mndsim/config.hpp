#pragma once

// Parsing, validation and programmatic update of the four simulator input
// documents: simulation.xml, persons.xml, antennas.xml and the map pair
// (map.wkt boundary + map.xml subdivisions).

#include "mndsim/geometry.hpp"
#include "mndsim/schema.hpp"
#include "mndsim/types.hpp"
#include "mndsim/xml.hpp"

#include <map>
#include <string>
#include <variant>
#include <vector>

namespace mndsim::config {

/// Schema violations turned into an error (parse of an invalid document,
/// update producing an invalid document).
struct ValidationError : std::runtime_error {
    ValidationError(std::string context, schema::ValidationReport r)
        : std::runtime_error(context + ":\n" + r.summary()), report(std::move(r))
    {
    }
    schema::ValidationReport report;
};

struct MnoEntry {
    std::string mno_id;
    std::string mno_name;
    Tech tech = Tech::t4g;
};

struct ManhattanGrid {
    double x_step = 0.0;
    double y_step = 0.0;
    double x_origin = 0.0;
    double y_origin = 0.0;
};

struct MovementPattern {
    enum class Kind { random_walk_closed_map, home_work, home_work_manhattan };
    Kind kind = Kind::random_walk_closed_map;
    ManhattanGrid grid; // meaningful only for home_work_manhattan
};

const char* movement_pattern_name(MovementPattern::Kind kind);

struct SimulationConfig {
    long long start_time = 0;
    long long end_time = 0;
    long long time_increment = 1;
    std::uint64_t random_seed = 0;
    MovementPattern movement;
    double prob_devices[3] = {0.0, 1.0, 0.0}; // P(own 0/1/2 devices)
    std::vector<MnoEntry> mnos;
};

struct PersonsConfig {
    std::uint64_t num_persons = 0;
    double speed_walk = 0.0;
    double speed_car = 0.0;
    double prob_car = 0.0;
    long long time_at_home = 0;
    long long time_at_work = 0;
};

enum class CellType { omnidirectional, directional_120 };

const char* cell_type_name(CellType t);
CellType cell_type_from_name(const std::string& s);

/// The 19-field radio-cell parameterization. tilt/elevation/beam/height are
/// carried through to the outputs but do not enter the propagation model.
struct AntennaConfig {
    std::string antenna_id;
    std::string mno_id;
    std::string mno_name;
    int max_connections = 1;
    double power_w = 0.0;
    double path_loss_exponent = 2.0;
    CellType cell_type = CellType::omnidirectional;
    double min_strength_dbm = -300.0;
    double min_dominance = 0.0;
    double dominance_midpoint_dbm = -92.5;
    double dominance_steepness = 0.2;
    double azimuth_deg = 0.0;
    double tilt_deg = 0.0;
    double elevation_m = 0.0;
    double beam_h_deg = 120.0;
    double beam_v_deg = 0.0;
    double height_m = 0.0;
    geom::Point position;
    TileId tile_id = -1; // derived from the analysis grid
};

struct SubregionSpec {
    std::string id;
    std::string long_name;
    std::string polygon_wkt;
};

struct MapSpec {
    std::string boundary_wkt;
    std::vector<SubregionSpec> subregions;
    double tile_dim_x = 0.0;
    double tile_dim_y = 0.0;
    int crs_code = 0;
};

using schema::validate_config; // re-exported: the config-level entry point

SimulationConfig parse_simulation_config(const std::string& document_path,
                                         const std::string& schema_path);
PersonsConfig parse_persons_config(const std::string& document_path,
                                   const std::string& schema_path);
std::vector<AntennaConfig> parse_antennas_config(const std::string& document_path,
                                                 const std::string& schema_path);
MapSpec parse_map(const std::string& wkt_path, const std::string& subdivisions_path,
                  const std::string& schema_path);

/// Builds the planar territory and enforces its invariants (simple boundary,
/// nonzero-area subregions within the boundary envelope, unique long names).
geom::Territory build_territory(const MapSpec& spec);

/// An override is either a scalar text value or a replacement subtree.
/// Keys are slash-separated paths below the root element ("end_time",
/// "movement_pattern"); subtree roots must be named like the last segment.
using OverrideValue = std::variant<std::string, xml::Node>;
using Overrides = std::map<std::string, OverrideValue>;

/// Applies overrides, re-validates and writes the canonical serialization to
/// output_path. The input file is never touched; nothing is written when the
/// result is schema-invalid (throws ValidationError).
schema::ValidationReport update_config(const std::string& document_path,
                                       const Overrides& overrides,
                                       const std::string& schema_path,
                                       const std::string& output_path);

} // namespace mndsim::config
