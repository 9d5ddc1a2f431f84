#pragma once

// Full simulation run: validate and load the inputs, build grid and
// population, loop over ticks, and write every output file plus a run
// manifest. Identical inputs and seed give byte-identical outputs.

#include "mndsim/config.hpp"
#include "mndsim/events.hpp"
#include "mndsim/geometry.hpp"
#include "mndsim/mobility.hpp"
#include "mndsim/radio.hpp"

#include <optional>
#include <string>
#include <vector>

namespace mndsim::engine {

struct RunPaths {
    std::string simulation;
    std::string persons;
    std::string antennas;
    std::string map_wkt;
    std::string map_xml;
    // empty: "<name>_rules" file next to the document
    std::string simulation_schema;
    std::string persons_schema;
    std::string antennas_schema;
    std::string map_schema;
    std::string priors; // optional, copied through untouched
};

/// Resolves the default "<stem>_rules" sibling for a document path.
std::string default_schema_path(const std::string& document_path, const std::string& stem);

struct RunOptions {
    std::string output_dir;
    std::optional<std::uint64_t> seed_override;
};

struct SimulationOutput {
    std::string output_dir;
    std::vector<std::string> files; // file names relative to output_dir
    std::string manifest_path;
    std::uint64_t seed = 0;
    std::size_t tick_count = 0;
    std::size_t event_count = 0;
};

/// Tick sequence [start, end] in steps of increment; a non-dividing span
/// gets a final truncated step landing exactly on end.
std::vector<long long> tick_times(long long start, long long end, long long increment);

SimulationOutput run_simulation(const RunPaths& paths, const RunOptions& options);

// Output writers (formats are part of the external interface).
void write_grid_csv(const geom::Grid& grid, const std::string& path);
void write_antennas_csv(const std::vector<config::AntennaConfig>& antennas,
                        const std::string& path);
void write_signal_csv(const std::vector<radio::SignalMeasure>& measures, const std::string& path);
void write_coverage_csv(const std::vector<radio::CoverageCell>& cells, const std::string& path);
void write_events_csv(const std::vector<events::EventRecord>& rows, const std::string& path);

/// Column dictionaries describing each CSV, written beside the outputs.
void write_dictionaries(const std::string& output_dir);

/// Readers used by the analysis side (and as round-trip oracles in tests).
geom::Grid read_grid_csv(const std::string& path);

} // namespace mndsim::engine
