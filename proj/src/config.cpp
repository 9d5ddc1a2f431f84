#include "mndsim/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>

namespace mndsim::config {

namespace {

// Field accessors for a document that already passed schema validation.
// Absent optional elements fall back to the documented defaults.

long long get_int(const xml::Node& parent, const char* name, long long fallback)
{
    const xml::Node* node = parent.child(name);
    if (!node)
        return fallback;
    long long v = 0;
    auto [ptr, ec] = std::from_chars(node->text.data(), node->text.data() + node->text.size(), v);
    if (ec != std::errc() || ptr != node->text.data() + node->text.size())
        throw std::runtime_error(std::string(name) + ": bad integer '" + node->text + "'");
    return v;
}

std::uint64_t get_uint(const xml::Node& parent, const char* name, std::uint64_t fallback)
{
    const xml::Node* node = parent.child(name);
    if (!node)
        return fallback;
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(node->text.data(), node->text.data() + node->text.size(), v);
    if (ec != std::errc() || ptr != node->text.data() + node->text.size())
        throw std::runtime_error(std::string(name) + ": bad unsigned integer '" + node->text + "'");
    return v;
}

double get_double(const xml::Node& parent, const char* name, double fallback)
{
    const xml::Node* node = parent.child(name);
    if (!node)
        return fallback;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(node->text.data(), node->text.data() + node->text.size(), v);
    if (ec != std::errc() || ptr != node->text.data() + node->text.size())
        throw std::runtime_error(std::string(name) + ": bad number '" + node->text + "'");
    return v;
}

std::string get_string(const xml::Node& parent, const char* name, const std::string& fallback)
{
    const xml::Node* node = parent.child(name);
    return node ? node->text : fallback;
}

xml::Node load_validated(const std::string& document_path, const std::string& schema_path)
{
    const schema::RuleSet rules = schema::parse_rules_file(schema_path);
    xml::Node doc = xml::parse_file(document_path);
    schema::ValidationReport report = schema::validate(doc, rules);
    if (!report.is_valid)
        throw ValidationError(document_path + " failed schema validation", std::move(report));
    return doc;
}

std::vector<std::string> split_path(const std::string& path)
{
    std::vector<std::string> out;
    std::size_t begin = 0;
    for (std::size_t i = 0; i <= path.size(); ++i) {
        if (i == path.size() || path[i] == '/') {
            if (i > begin)
                out.push_back(path.substr(begin, i - begin));
            begin = i + 1;
        }
    }
    return out;
}

} // namespace

const char* movement_pattern_name(MovementPattern::Kind kind)
{
    switch (kind) {
    case MovementPattern::Kind::random_walk_closed_map: return "random_walk_closed_map";
    case MovementPattern::Kind::home_work: return "home_work";
    case MovementPattern::Kind::home_work_manhattan: return "home_work_manhattan";
    }
    return "?";
}

const char* cell_type_name(CellType t)
{
    return t == CellType::omnidirectional ? "omnidirectional" : "directional_120";
}

CellType cell_type_from_name(const std::string& s)
{
    if (s == "omnidirectional")
        return CellType::omnidirectional;
    if (s == "directional_120")
        return CellType::directional_120;
    throw std::invalid_argument("unknown cell type: " + s);
}

SimulationConfig parse_simulation_config(const std::string& document_path,
                                         const std::string& schema_path)
{
    const xml::Node doc = load_validated(document_path, schema_path);
    SimulationConfig cfg;
    cfg.start_time = get_int(doc, "start_time", 0);
    cfg.end_time = get_int(doc, "end_time", 0);
    cfg.time_increment = get_int(doc, "time_increment", 1);
    cfg.random_seed = get_uint(doc, "random_seed", 0);
    if (cfg.start_time >= cfg.end_time)
        throw std::runtime_error(document_path + ": start_time must be < end_time");

    const xml::Node* movement = doc.child("movement_pattern");
    const std::string* kind = movement->attribute("type");
    if (*kind == "random_walk_closed_map") {
        cfg.movement.kind = MovementPattern::Kind::random_walk_closed_map;
    }
    else if (*kind == "home_work") {
        cfg.movement.kind = MovementPattern::Kind::home_work;
    }
    else {
        cfg.movement.kind = MovementPattern::Kind::home_work_manhattan;
        const xml::Node* lattice = movement->child("manhattan_grid");
        cfg.movement.grid.x_step = get_double(*lattice, "x_step", 0.0);
        cfg.movement.grid.y_step = get_double(*lattice, "y_step", 0.0);
        cfg.movement.grid.x_origin = get_double(*lattice, "x_origin", 0.0);
        cfg.movement.grid.y_origin = get_double(*lattice, "y_origin", 0.0);
    }

    const xml::Node* probs = doc.child("prob_devices");
    cfg.prob_devices[0] = get_double(*probs, "p0", 0.0);
    cfg.prob_devices[1] = get_double(*probs, "p1", 0.0);
    cfg.prob_devices[2] = get_double(*probs, "p2", 0.0);

    for (const xml::Node* mno : doc.child("mno_list")->children_named("mno")) {
        MnoEntry entry;
        entry.mno_id = get_string(*mno, "mno_id", "");
        entry.mno_name = get_string(*mno, "mno_name", "");
        entry.tech = tech_from_name(get_string(*mno, "tech", "4G"));
        cfg.mnos.push_back(std::move(entry));
    }
    return cfg;
}

PersonsConfig parse_persons_config(const std::string& document_path,
                                   const std::string& schema_path)
{
    const xml::Node doc = load_validated(document_path, schema_path);
    PersonsConfig cfg;
    cfg.num_persons = get_uint(doc, "num_persons", 0);
    cfg.speed_walk = get_double(doc, "speed_walk", 0.0);
    cfg.speed_car = get_double(doc, "speed_car", 0.0);
    cfg.prob_car = get_double(doc, "prob_car", 0.0);
    cfg.time_at_home = get_int(doc, "time_at_home", 0);
    cfg.time_at_work = get_int(doc, "time_at_work", 0);
    return cfg;
}

std::vector<AntennaConfig> parse_antennas_config(const std::string& document_path,
                                                 const std::string& schema_path)
{
    const xml::Node doc = load_validated(document_path, schema_path);
    std::vector<AntennaConfig> antennas;
    for (const xml::Node* node : doc.children_named("antenna")) {
        AntennaConfig a;
        a.antenna_id = get_string(*node, "antenna_id", "");
        a.mno_id = get_string(*node, "mno_id", "");
        a.mno_name = get_string(*node, "mno_name", "");
        a.max_connections = static_cast<int>(get_int(*node, "max_connections", 1));
        a.power_w = get_double(*node, "power_w", 0.0);
        a.path_loss_exponent = get_double(*node, "path_loss_exponent", 2.0);
        a.cell_type = cell_type_from_name(get_string(*node, "cell_type", "omnidirectional"));
        a.min_strength_dbm = get_double(*node, "min_strength_dbm", -300.0);
        a.min_dominance = get_double(*node, "min_dominance", 0.0);
        a.dominance_midpoint_dbm = get_double(*node, "dominance_midpoint_dbm", -92.5);
        a.dominance_steepness = get_double(*node, "dominance_steepness", 0.2);
        a.azimuth_deg = get_double(*node, "azimuth_deg", 0.0);
        a.tilt_deg = get_double(*node, "tilt_deg", 0.0);
        a.elevation_m = get_double(*node, "elevation_m", 0.0);
        a.beam_h_deg = get_double(*node, "beam_h_deg", 120.0);
        a.beam_v_deg = get_double(*node, "beam_v_deg", 0.0);
        a.height_m = get_double(*node, "height_m", 0.0);
        a.position.x = get_double(*node, "x", 0.0);
        a.position.y = get_double(*node, "y", 0.0);
        antennas.push_back(std::move(a));
    }
    std::set<std::string> ids;
    for (const AntennaConfig& a : antennas)
        if (!ids.insert(a.antenna_id).second)
            throw std::runtime_error(document_path + ": duplicate antenna_id '" + a.antenna_id +
                                     "'");
    return antennas;
}

MapSpec parse_map(const std::string& wkt_path, const std::string& subdivisions_path,
                  const std::string& schema_path)
{
    const xml::Node doc = load_validated(subdivisions_path, schema_path);
    MapSpec spec;
    spec.boundary_wkt = xml::read_file_bytes(wkt_path);
    spec.tile_dim_x = get_double(doc, "tile_dim_x", 0.0);
    spec.tile_dim_y = get_double(doc, "tile_dim_y", 0.0);
    if (const std::string* crs = doc.attribute("crs")) {
        int v = 0;
        auto [ptr, ec] = std::from_chars(crs->data(), crs->data() + crs->size(), v);
        if (ec == std::errc() && ptr == crs->data() + crs->size())
            spec.crs_code = v;
    }
    for (const xml::Node* node : doc.child("subregions")->children_named("subregion")) {
        SubregionSpec sub;
        sub.id = get_string(*node, "subregion_id", "");
        sub.long_name = get_string(*node, "subregion_long_name", "");
        sub.polygon_wkt = get_string(*node, "polygon", "");
        spec.subregions.push_back(std::move(sub));
    }
    build_territory(spec); // enforce the geometric invariants up front
    return spec;
}

geom::Territory build_territory(const MapSpec& spec)
{
    geom::Territory territory;
    territory.boundary = geom::parse_wkt(spec.boundary_wkt);
    territory.crs_code = spec.crs_code;
    for (const geom::Polygon& poly : territory.boundary.polygons)
        for (const geom::Ring& ring : poly.rings)
            if (geom::ring_self_intersects(ring))
                throw std::runtime_error("map boundary is not a simple polygon");
    territory.bbox = geom::bounding_box(territory.boundary);

    std::set<std::string> names;
    for (const SubregionSpec& sub : spec.subregions) {
        geom::Subregion parsed;
        parsed.id = sub.id;
        parsed.long_name = sub.long_name;
        parsed.shape = geom::parse_wkt(sub.polygon_wkt);
        if (!names.insert(sub.long_name).second)
            throw std::runtime_error("duplicate subregion long name '" + sub.long_name + "'");
        if (geom::area(parsed.shape) <= 0.0)
            throw std::runtime_error("subregion '" + sub.long_name + "' has zero area");
        const geom::Bbox sub_box = geom::bounding_box(parsed.shape);
        const double eps = 1e-9;
        if (sub_box.xmin < territory.bbox.xmin - eps || sub_box.xmax > territory.bbox.xmax + eps ||
            sub_box.ymin < territory.bbox.ymin - eps || sub_box.ymax > territory.bbox.ymax + eps)
            throw std::runtime_error("subregion '" + sub.long_name +
                                     "' extends beyond the boundary envelope");
        territory.subregions.push_back(std::move(parsed));
    }
    return territory;
}

schema::ValidationReport update_config(const std::string& document_path,
                                       const Overrides& overrides,
                                       const std::string& schema_path,
                                       const std::string& output_path)
{
    const schema::RuleSet rules = schema::parse_rules_file(schema_path);
    xml::Node doc = xml::parse_file(document_path);

    for (const auto& [path, value] : overrides) {
        const std::vector<std::string> segments = split_path(path);
        if (segments.empty())
            throw std::invalid_argument("empty override path");
        xml::Node* node = &doc;
        for (std::size_t i = 0; i + 1 < segments.size(); ++i) {
            xml::Node* next = node->child(segments[i]);
            if (!next) {
                node->children.push_back(xml::Node{segments[i], {}, {}, ""});
                next = &node->children.back();
            }
            node = next;
        }
        const std::string& leaf = segments.back();
        xml::Node* target = node->child(leaf);
        if (const std::string* scalar = std::get_if<std::string>(&value)) {
            if (!target) {
                node->children.push_back(xml::Node{leaf, {}, {}, ""});
                target = &node->children.back();
            }
            target->children.clear();
            target->text = *scalar;
        }
        else {
            const xml::Node& subtree = std::get<xml::Node>(value);
            if (subtree.name != leaf)
                throw std::invalid_argument("override subtree root '" + subtree.name +
                                            "' does not match path leaf '" + leaf + "'");
            if (target)
                *target = subtree;
            else
                node->children.push_back(subtree);
        }
    }

    schema::ValidationReport report = schema::validate(doc, rules);
    if (!report.is_valid)
        throw ValidationError("update of " + document_path + " produced an invalid document",
                              std::move(report));
    xml::write_file_bytes(output_path, xml::serialize(doc));
    return report;
}

} // namespace mndsim::config
