#include "mndsim/engine.hpp"

#include "mndsim/csv.hpp"
#include "mndsim/digest.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>

namespace fs = std::filesystem;

namespace mndsim::engine {

namespace {

constexpr const char* artifact_version = "0.1.0";

double round_mm(double v)
{
    return std::round(v * 1000.0) / 1000.0;
}

std::ofstream open_output(const std::string& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw xml::IoError("cannot open output file: " + path);
    return out;
}

double parse_double_field(const std::string& s, const std::string& where)
{
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw std::runtime_error(where + ": bad number '" + s + "'");
    return v;
}

long long parse_int_field(const std::string& s, const std::string& where)
{
    long long v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw std::runtime_error(where + ": bad integer '" + s + "'");
    return v;
}

xml::Node dictionary_node(const std::string& file, const std::string& description,
                          const std::vector<std::array<std::string, 3>>& columns)
{
    xml::Node dict;
    dict.name = "dictionary";
    dict.set_attribute("file", file);
    xml::Node desc;
    desc.name = "description";
    desc.text = description;
    dict.children.push_back(desc);
    for (const auto& [name, type, nullable] : columns) {
        xml::Node col;
        col.name = "column";
        col.set_attribute("name", name);
        col.set_attribute("type", type);
        if (nullable == "true")
            col.set_attribute("nullable", "true");
        dict.children.push_back(col);
    }
    return dict;
}

} // namespace

std::string default_schema_path(const std::string& document_path, const std::string& stem)
{
    return (fs::path(document_path).parent_path() / (stem + "_rules")).string();
}

std::vector<long long> tick_times(long long start, long long end, long long increment)
{
    if (increment < 1)
        throw std::invalid_argument("time_increment must be >= 1");
    if (start >= end)
        throw std::invalid_argument("start_time must be < end_time");
    std::vector<long long> ticks;
    for (long long t = start; t <= end; t += increment)
        ticks.push_back(t);
    if (ticks.back() != end)
        ticks.push_back(end); // truncated final step
    return ticks;
}

void write_grid_csv(const geom::Grid& grid, const std::string& path)
{
    auto out = open_output(path);
    csvio::write_row(out, {"x_origin", "y_origin", "tile_dim_x", "tile_dim_y", "n_cols",
                           "n_rows"});
    csvio::write_row(out, {csvio::format_double(grid.x_origin, 3),
                           csvio::format_double(grid.y_origin, 3),
                           csvio::format_double(grid.tile_dim_x, 3),
                           csvio::format_double(grid.tile_dim_y, 3),
                           std::to_string(grid.n_cols), std::to_string(grid.n_rows)});
}

geom::Grid read_grid_csv(const std::string& path)
{
    const csvio::Table table = csvio::read_csv(path);
    if (table.rows.size() != 1 || table.header.size() != 6)
        throw std::runtime_error(path + ": expected a single grid row with 6 columns");
    const auto& r = table.rows[0];
    geom::Grid grid;
    grid.x_origin = parse_double_field(r[0], path);
    grid.y_origin = parse_double_field(r[1], path);
    grid.tile_dim_x = parse_double_field(r[2], path);
    grid.tile_dim_y = parse_double_field(r[3], path);
    grid.n_cols = parse_int_field(r[4], path);
    grid.n_rows = parse_int_field(r[5], path);
    return grid;
}

void write_antennas_csv(const std::vector<config::AntennaConfig>& antennas,
                        const std::string& path)
{
    auto out = open_output(path);
    csvio::write_row(out, {"antenna_id", "mno_id", "mno_name", "max_connections", "power_w",
                           "path_loss_exponent", "cell_type", "min_strength_dbm", "min_dominance",
                           "dominance_midpoint_dbm", "dominance_steepness", "azimuth_deg",
                           "tilt_deg", "elevation_m", "beam_h_deg", "beam_v_deg", "height_m", "x",
                           "y", "tile_id"});
    for (const config::AntennaConfig& a : antennas) {
        csvio::write_row(
            out, {a.antenna_id, a.mno_id, a.mno_name, std::to_string(a.max_connections),
                  csvio::format_double(a.power_w, 4), csvio::format_double(a.path_loss_exponent, 4),
                  config::cell_type_name(a.cell_type), csvio::format_double(a.min_strength_dbm, 4),
                  csvio::format_double(a.min_dominance, 6),
                  csvio::format_double(a.dominance_midpoint_dbm, 4),
                  csvio::format_double(a.dominance_steepness, 6),
                  csvio::format_double(a.azimuth_deg, 3), csvio::format_double(a.tilt_deg, 3),
                  csvio::format_double(a.elevation_m, 3), csvio::format_double(a.beam_h_deg, 3),
                  csvio::format_double(a.beam_v_deg, 3), csvio::format_double(a.height_m, 3),
                  csvio::format_double(a.position.x, 3), csvio::format_double(a.position.y, 3),
                  std::to_string(a.tile_id)});
    }
}

void write_signal_csv(const std::vector<radio::SignalMeasure>& measures, const std::string& path)
{
    auto out = open_output(path);
    csvio::write_row(out, {"antenna_id", "tile_id", "strength_dbm", "dominance"});
    for (const radio::SignalMeasure& m : measures)
        csvio::write_row(out, {m.antenna_id, std::to_string(m.tile_id),
                               csvio::format_double(m.strength_dbm, 4),
                               csvio::format_double(m.dominance, 6)});
}

void write_coverage_csv(const std::vector<radio::CoverageCell>& cells, const std::string& path)
{
    auto out = open_output(path);
    csvio::write_row(out, {"antenna_id", "tile_list"});
    for (const radio::CoverageCell& cell : cells) {
        std::string joined;
        for (std::size_t i = 0; i < cell.covered_tiles.size(); ++i) {
            if (i)
                joined += ',';
            joined += std::to_string(cell.covered_tiles[i]);
        }
        csvio::write_row(out, {cell.antenna_id, joined});
    }
}

void write_events_csv(const std::vector<events::EventRecord>& rows, const std::string& path)
{
    auto out = open_output(path);
    csvio::write_row(out, {"t", "antenna_id", "event_code", "device_id", "x", "y", "tile_id",
                           "tech", "TA"});
    for (const events::EventRecord& e : rows)
        csvio::write_row(out, {std::to_string(e.t), e.antenna_id,
                               std::to_string(events::event_code_value(e.code)),
                               std::to_string(e.device_id), csvio::format_double(e.x, 3),
                               csvio::format_double(e.y, 3), std::to_string(e.tile_id),
                               tech_name(e.tech), std::to_string(e.ta)});
}

void write_dictionaries(const std::string& output_dir)
{
    const auto write = [&](const std::string& name, const xml::Node& node) {
        xml::write_file_bytes((fs::path(output_dir) / name).string(), xml::serialize(node));
    };
    write("grid_dict.xml",
          dictionary_node("grid.csv",
                          "analysis grid; tile ids are row-major from the lower-left origin "
                          "corner (id = row * n_cols + col), tiles are half-open with the "
                          "envelope's top/right boundary closed",
                          {{{"x_origin", "double", ""},
                            {"y_origin", "double", ""},
                            {"tile_dim_x", "double", ""},
                            {"tile_dim_y", "double", ""},
                            {"n_cols", "int", ""},
                            {"n_rows", "int", ""}}}));
    write("persons_dict.xml",
          dictionary_node("persons.csv",
                          "ground truth: one row per person and tick; device columns are empty "
                          "when the person carries fewer devices",
                          {{{"t", "int", ""},
                            {"person_id", "uint", ""},
                            {"x", "double", ""},
                            {"y", "double", ""},
                            {"tile_id", "int", ""},
                            {"device_id_1", "uint", "true"},
                            {"device_id_2", "uint", "true"}}}));
    write("antennas_dict.xml",
          dictionary_node("antennas.csv",
                          "radio cell configuration echo plus the derived grid tile of the "
                          "antenna position (-1 when outside the grid)",
                          {{{"antenna_id", "string", ""},
                            {"mno_id", "string", ""},
                            {"mno_name", "string", ""},
                            {"max_connections", "int", ""},
                            {"power_w", "double", ""},
                            {"path_loss_exponent", "double", ""},
                            {"cell_type", "string", ""},
                            {"min_strength_dbm", "double", ""},
                            {"min_dominance", "double", ""},
                            {"dominance_midpoint_dbm", "double", ""},
                            {"dominance_steepness", "double", ""},
                            {"azimuth_deg", "double", ""},
                            {"tilt_deg", "double", ""},
                            {"elevation_m", "double", ""},
                            {"beam_h_deg", "double", ""},
                            {"beam_v_deg", "double", ""},
                            {"height_m", "double", ""},
                            {"x", "double", ""},
                            {"y", "double", ""},
                            {"tile_id", "int", ""}}}));
    write("events_dict.xml",
          dictionary_node("AntennaInfo_MNO_<name>.csv",
                          "network events; event_code 0=attach 1=update 2=detach 3=handover; "
                          "detach rows carry the antenna being left; TA = floor(distance / "
                          "unit), unit 78.12 m for 4G and 554 m for 3G",
                          {{{"t", "int", ""},
                            {"antenna_id", "string", ""},
                            {"event_code", "int", ""},
                            {"device_id", "uint", ""},
                            {"x", "double", ""},
                            {"y", "double", ""},
                            {"tile_id", "int", ""},
                            {"tech", "string", ""},
                            {"TA", "int", ""}}}));
    write("SignalMeasure_dict.xml",
          dictionary_node("SignalMeasure_<name>.csv",
                          "signal strength and dominance of each antenna at each tile center",
                          {{{"antenna_id", "string", ""},
                            {"tile_id", "int", ""},
                            {"strength_dbm", "double", ""},
                            {"dominance", "double", ""}}}));
    write("AntennaCells_dict.xml",
          dictionary_node("AntennaCells_<name>.csv",
                          "coverage cell per antenna: tiles whose center meets both connection "
                          "thresholds (strength >= min_strength_dbm and dominance >= "
                          "min_dominance); tile_list is a comma-joined id list",
                          {{{"antenna_id", "string", ""}, {"tile_list", "string", ""}}}));
}

SimulationOutput run_simulation(const RunPaths& paths, const RunOptions& options)
{
    RunPaths p = paths;
    if (p.simulation_schema.empty())
        p.simulation_schema = default_schema_path(p.simulation, "simulation");
    if (p.persons_schema.empty())
        p.persons_schema = default_schema_path(p.persons, "persons");
    if (p.antennas_schema.empty())
        p.antennas_schema = default_schema_path(p.antennas, "antennas");
    if (p.map_schema.empty())
        p.map_schema = default_schema_path(p.map_xml, "map");

    // load (parsers re-validate and throw ValidationError with the report)
    const config::SimulationConfig sim = config::parse_simulation_config(p.simulation,
                                                                         p.simulation_schema);
    const config::PersonsConfig persons_cfg = config::parse_persons_config(p.persons,
                                                                           p.persons_schema);
    std::vector<config::AntennaConfig> antennas =
        config::parse_antennas_config(p.antennas, p.antennas_schema);
    const config::MapSpec map_spec = config::parse_map(p.map_wkt, p.map_xml, p.map_schema);

    const geom::Territory territory = config::build_territory(map_spec);
    const geom::Grid grid = geom::build_grid(territory, map_spec.tile_dim_x, map_spec.tile_dim_y);

    std::map<std::string, const config::MnoEntry*> mno_by_id;
    std::set<std::string> mno_names;
    for (const config::MnoEntry& mno : sim.mnos) {
        if (!mno_by_id.emplace(mno.mno_id, &mno).second)
            throw std::runtime_error("duplicate mno_id '" + mno.mno_id + "'");
        if (!mno_names.insert(mno.mno_name).second)
            throw std::runtime_error("duplicate mno_name '" + mno.mno_name + "'");
    }
    for (config::AntennaConfig& a : antennas) {
        if (!mno_by_id.count(a.mno_id))
            throw std::runtime_error("antenna '" + a.antenna_id + "' references unknown mno_id '" +
                                     a.mno_id + "'");
        a.position.x = round_mm(a.position.x);
        a.position.y = round_mm(a.position.y);
        const auto tile = geom::tile_of(grid, a.position);
        a.tile_id = tile ? *tile : -1;
    }

    fs::create_directories(options.output_dir);
    const auto out_path = [&](const std::string& name) {
        return (fs::path(options.output_dir) / name).string();
    };

    SimulationOutput result;
    result.output_dir = options.output_dir;
    result.seed = options.seed_override.value_or(sim.random_seed);

    // static network outputs
    write_grid_csv(grid, out_path("grid.csv"));
    write_antennas_csv(antennas, out_path("antennas.csv"));
    result.files = {"grid.csv", "antennas.csv"};
    for (const config::MnoEntry& mno : sim.mnos) {
        std::vector<config::AntennaConfig> own;
        for (const config::AntennaConfig& a : antennas)
            if (a.mno_id == mno.mno_id)
                own.push_back(a);
        const std::string signal_name = "SignalMeasure_" + mno.mno_name + ".csv";
        const std::string cells_name = "AntennaCells_" + mno.mno_name + ".csv";
        write_signal_csv(radio::compute_signal_measures(own, grid), out_path(signal_name));
        write_coverage_csv(radio::compute_coverage(own, grid), out_path(cells_name));
        result.files.push_back(signal_name);
        result.files.push_back(cells_name);
    }
    write_dictionaries(options.output_dir);

    // input copies keep the output directory self-contained for analysis
    xml::write_file_bytes(out_path("map.wkt"), xml::read_file_bytes(p.map_wkt));
    xml::write_file_bytes(out_path("map.xml"), xml::read_file_bytes(p.map_xml));
    result.files.push_back("map.wkt");
    result.files.push_back("map.xml");
    if (!p.priors.empty()) {
        const std::string priors_name = fs::path(p.priors).filename().string();
        xml::write_file_bytes(out_path(priors_name), xml::read_file_bytes(p.priors));
        result.files.push_back(priors_name);
    }

    // population
    std::mt19937_64 master(result.seed);
    std::vector<mobility::Person> population =
        mobility::synthesize_population(persons_cfg, sim, territory, master);
    for (mobility::Person& person : population) {
        person.pos.x = round_mm(person.pos.x);
        person.pos.y = round_mm(person.pos.y);
    }

    // device -> operator assignment, uniform over the configured MNOs
    std::map<DeviceId, const config::MnoEntry*> device_mno;
    {
        std::uniform_int_distribution<std::size_t> pick(0, sim.mnos.size() - 1);
        for (const mobility::Person& person : population)
            for (DeviceId device : person.device_ids)
                device_mno[device] = &sim.mnos[pick(master)];
    }

    const std::vector<long long> ticks = tick_times(sim.start_time, sim.end_time,
                                                    sim.time_increment);
    result.tick_count = ticks.size();

    auto persons_out = open_output(out_path("persons.csv"));
    csvio::write_row(persons_out,
                     {"t", "person_id", "x", "y", "tile_id", "device_id_1", "device_id_2"});

    std::map<std::string, std::vector<config::AntennaConfig>> antennas_of_mno;
    for (const config::AntennaConfig& a : antennas)
        antennas_of_mno[a.mno_id].push_back(a);
    std::map<std::string, events::AttachmentState> state_of_mno;
    std::map<std::string, std::vector<events::EventRecord>> events_of_mno;

    for (std::size_t i = 0; i < ticks.size(); ++i) {
        const long long t = ticks[i];
        if (i > 0) {
            const double dt = static_cast<double>(t - ticks[i - 1]);
            for (mobility::Person& person : population) {
                mobility::step(person, sim.movement, persons_cfg, territory, dt);
                person.pos.x = round_mm(person.pos.x);
                person.pos.y = round_mm(person.pos.y);
            }
        }
        for (const mobility::Person& person : population) {
            const auto tile = geom::tile_of(grid, person.pos);
            csvio::write_row(
                persons_out,
                {std::to_string(t), std::to_string(person.person_id),
                 csvio::format_double(person.pos.x, 3), csvio::format_double(person.pos.y, 3),
                 std::to_string(tile ? *tile : -1),
                 person.device_ids.size() > 0 ? std::to_string(person.device_ids[0]) : "",
                 person.device_ids.size() > 1 ? std::to_string(person.device_ids[1]) : ""});
        }
        for (const config::MnoEntry& mno : sim.mnos) {
            std::vector<events::DevicePosition> devices;
            for (const mobility::Person& person : population)
                for (DeviceId device : person.device_ids)
                    if (device_mno[device] == &mno)
                        devices.push_back({device, person.pos});
            std::vector<events::EventRecord> tick_rows =
                events::tick_events(std::move(devices), antennas_of_mno[mno.mno_id],
                                    state_of_mno[mno.mno_id], t, mno.tech, grid);
            auto& sink = events_of_mno[mno.mno_id];
            sink.insert(sink.end(), tick_rows.begin(), tick_rows.end());
        }
    }
    persons_out.close();
    result.files.push_back("persons.csv");

    for (const config::MnoEntry& mno : sim.mnos) {
        const std::string name = "AntennaInfo_MNO_" + mno.mno_name + ".csv";
        write_events_csv(events_of_mno[mno.mno_id], out_path(name));
        result.files.push_back(name);
        result.event_count += events_of_mno[mno.mno_id].size();
    }

    // manifest: seed and input digests for provenance
    nlohmann::json manifest;
    manifest["artifact_version"] = artifact_version;
    manifest["seed"] = result.seed;
    manifest["tick_count"] = result.tick_count;
    manifest["num_persons"] = population.size();
    manifest["event_count"] = result.event_count;
    nlohmann::json inputs;
    const auto record_input = [&](const char* name, const std::string& path) {
        if (path.empty())
            return;
        inputs[name] = {{"path", path}, {"sha256", digest::sha256_file_hex(path)}};
    };
    record_input("simulation", p.simulation);
    record_input("persons", p.persons);
    record_input("antennas", p.antennas);
    record_input("map_wkt", p.map_wkt);
    record_input("map_xml", p.map_xml);
    record_input("priors", p.priors);
    manifest["inputs"] = inputs;
    std::vector<std::string> mno_names_sorted(mno_names.begin(), mno_names.end());
    manifest["mno_names"] = mno_names_sorted;
    std::sort(result.files.begin(), result.files.end());
    manifest["outputs"] = result.files;
    result.manifest_path = out_path("manifest.json");
    xml::write_file_bytes(result.manifest_path, manifest.dump(2) + "\n");

    return result;
}

} // namespace mndsim::engine
