#include "mndsim/mobility.hpp"

#include <cmath>

namespace mndsim::mobility {

namespace {

constexpr double tiny = 1e-12;

double dist(geom::Point a, geom::Point b)
{
    return std::hypot(b.x - a.x, b.y - a.y);
}

/// Largest point along [from, to] still inside the territory; returns the
/// fraction moved. Full moves return 1.
double clamped_move(const geom::Territory& territory, geom::Point from, geom::Point to,
                    geom::Point& out)
{
    if (geom::contains(territory.boundary, to)) {
        out = to;
        return 1.0;
    }
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 40; ++i) {
        const double mid = 0.5 * (lo + hi);
        const geom::Point p{from.x + mid * (to.x - from.x), from.y + mid * (to.y - from.y)};
        if (geom::contains(territory.boundary, p))
            lo = mid;
        else
            hi = mid;
    }
    out = {from.x + lo * (to.x - from.x), from.y + lo * (to.y - from.y)};
    return lo;
}

struct Crossing {
    double t = 0.0;
    geom::Point edge_a, edge_b;
};

/// Earliest proper crossing of segment [p, q] with the boundary edges.
bool first_boundary_crossing(const geom::Territory& territory, geom::Point p, geom::Point q,
                             Crossing& hit)
{
    const double dx = q.x - p.x;
    const double dy = q.y - p.y;
    bool found = false;
    for (const geom::Polygon& poly : territory.boundary.polygons) {
        for (const geom::Ring& ring : poly.rings) {
            for (std::size_t i = 0; i < ring.size(); ++i) {
                const geom::Point a = ring[i];
                const geom::Point b = ring[(i + 1) % ring.size()];
                const double ex = b.x - a.x;
                const double ey = b.y - a.y;
                const double denom = dx * ey - dy * ex;
                if (std::abs(denom) < tiny)
                    continue; // parallel
                const double t = ((a.x - p.x) * ey - (a.y - p.y) * ex) / denom;
                const double s = ((a.x - p.x) * dy - (a.y - p.y) * dx) / denom;
                if (t > 1e-9 && t <= 1.0 && s >= 0.0 && s <= 1.0) {
                    if (!found || t < hit.t) {
                        hit = {t, a, b};
                        found = true;
                    }
                }
            }
        }
    }
    return found;
}

void random_walk_step(Person& person, const geom::Territory& territory, double dt)
{
    std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
    const double heading = angle(person.rng);
    const double len = person.speed * dt;
    geom::Point target{person.pos.x + len * std::cos(heading),
                       person.pos.y + len * std::sin(heading)};
    if (geom::contains(territory.boundary, target)) {
        person.pos = target;
        return;
    }
    // one reflection off the crossed edge; corner cases stop at the wall
    Crossing hit;
    if (!first_boundary_crossing(territory, person.pos, target, hit)) {
        geom::Point clamped;
        clamped_move(territory, person.pos, target, clamped);
        person.pos = clamped;
        return;
    }
    const geom::Point x{person.pos.x + hit.t * (target.x - person.pos.x),
                        person.pos.y + hit.t * (target.y - person.pos.y)};
    const double elen = dist(hit.edge_a, hit.edge_b);
    const double ux = (hit.edge_b.x - hit.edge_a.x) / elen;
    const double uy = (hit.edge_b.y - hit.edge_a.y) / elen;
    const double rx = target.x - x.x;
    const double ry = target.y - x.y;
    const double along = rx * ux + ry * uy;
    const geom::Point reflected{x.x + 2.0 * along * ux - rx, x.y + 2.0 * along * uy - ry};
    if (geom::contains(territory.boundary, reflected)) {
        person.pos = reflected;
        return;
    }
    geom::Point clamped;
    clamped_move(territory, person.pos, x, clamped);
    person.pos = clamped;
}

/// Nearest lattice coordinate that stays inside [lo, hi].
double snap_to_lattice(double v, double origin, double step, double lo, double hi)
{
    if (step <= 0.0)
        return v;
    const double k = std::round((v - origin) / step);
    for (double candidate : {origin + k * step, origin + (k - 1.0) * step,
                             origin + (k + 1.0) * step}) {
        if (candidate >= lo && candidate <= hi)
            return candidate;
    }
    return v;
}

std::vector<geom::Point> plan_route(const Person& person, const config::MovementPattern& pattern,
                                    const geom::Territory& territory, geom::Point target)
{
    std::vector<geom::Point> route;
    if (pattern.kind == config::MovementPattern::Kind::home_work_manhattan) {
        const config::ManhattanGrid& lattice = pattern.grid;
        const geom::Bbox& box = territory.bbox;
        const double lane_y = snap_to_lattice(person.pos.y, lattice.y_origin, lattice.y_step,
                                              box.ymin, box.ymax);
        const double lane_x =
            snap_to_lattice(target.x, lattice.x_origin, lattice.x_step, box.xmin, box.xmax);
        route.push_back({person.pos.x, lane_y}); // reach the horizontal lane
        route.push_back({lane_x, lane_y});       // traverse x
        route.push_back({lane_x, target.y});     // traverse y
    }
    route.push_back(target);
    // drop degenerate segments
    std::vector<geom::Point> cleaned;
    geom::Point prev = person.pos;
    for (const geom::Point& p : route) {
        if (dist(prev, p) > tiny) {
            cleaned.push_back(p);
            prev = p;
        }
    }
    if (cleaned.empty())
        cleaned.push_back(target);
    return cleaned;
}

void arrive(Person& person, const config::PersonsConfig& persons_cfg, double dt)
{
    const bool at_work = person.phase == Phase::to_work;
    person.phase = at_work ? Phase::at_work : Phase::at_home;
    const double budget =
        static_cast<double>(at_work ? persons_cfg.time_at_work : persons_cfg.time_at_home);
    // the arrival tick itself already counts towards the stay
    person.dwell_remaining = std::max(0.0, budget - dt);
    person.route.clear();
    person.route_next = 0;
}

void depart(Person& person, const config::MovementPattern& pattern,
            const geom::Territory& territory)
{
    const bool leaving_home = person.phase == Phase::at_home;
    person.phase = leaving_home ? Phase::to_work : Phase::to_home;
    person.route = plan_route(person, pattern, territory,
                              leaving_home ? person.work : person.home);
    person.route_next = 0;
}

void travel_step(Person& person, const config::MovementPattern& pattern,
                 const config::PersonsConfig& persons_cfg, const geom::Territory& territory,
                 double dt)
{
    double budget = person.speed * dt;
    while (budget > tiny && person.route_next < person.route.size()) {
        const geom::Point target = person.route[person.route_next];
        const double d = dist(person.pos, target);
        if (d <= budget + tiny) {
            geom::Point landed;
            const double moved = clamped_move(territory, person.pos, target, landed);
            person.pos = landed;
            if (moved < 1.0) {
                // blocked by the boundary: fall back to a direct leg
                person.route = {person.route.back()};
                person.route_next = 0;
                return;
            }
            budget -= d;
            ++person.route_next;
            if (person.route_next == person.route.size()) {
                arrive(person, persons_cfg, dt); // arrival consumes the tick
                return;
            }
        }
        else {
            const double f = budget / d;
            geom::Point proposal{person.pos.x + f * (target.x - person.pos.x),
                                 person.pos.y + f * (target.y - person.pos.y)};
            geom::Point landed;
            const double moved = clamped_move(territory, person.pos, proposal, landed);
            person.pos = landed;
            if (moved < 1.0) {
                person.route = {person.route.back()};
                person.route_next = 0;
            }
            return;
        }
    }
}

} // namespace

geom::Point sample_point(const geom::Territory& territory, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> ux(territory.bbox.xmin, territory.bbox.xmax);
    std::uniform_real_distribution<double> uy(territory.bbox.ymin, territory.bbox.ymax);
    for (int tries = 0; tries < 100000; ++tries) {
        const geom::Point p{ux(rng), uy(rng)};
        if (geom::contains(territory.boundary, p))
            return p;
    }
    throw std::runtime_error("territory interior too small for rejection sampling");
}

std::vector<Person> synthesize_population(const config::PersonsConfig& persons_cfg,
                                          const config::SimulationConfig& sim_cfg,
                                          const geom::Territory& territory,
                                          std::mt19937_64& rng)
{
    if (geom::area(territory.boundary) <= 0.0)
        throw std::runtime_error("cannot place persons on a zero-area territory");
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Person> persons;
    persons.reserve(persons_cfg.num_persons);
    DeviceId next_device = 1;
    for (std::uint64_t i = 0; i < persons_cfg.num_persons; ++i) {
        Person p;
        p.person_id = static_cast<PersonId>(i);
        p.home = sample_point(territory, rng);
        p.work = sample_point(territory, rng);
        p.pos = p.home;
        p.speed = unit(rng) < persons_cfg.prob_car ? persons_cfg.speed_car
                                                   : persons_cfg.speed_walk;
        const double u = unit(rng);
        int devices = 0;
        if (u < sim_cfg.prob_devices[0])
            devices = 0;
        else if (u < sim_cfg.prob_devices[0] + sim_cfg.prob_devices[1])
            devices = 1;
        else
            devices = 2;
        for (int d = 0; d < devices; ++d)
            p.device_ids.push_back(next_device++);
        p.phase = Phase::at_home;
        p.dwell_remaining = static_cast<double>(persons_cfg.time_at_home);
        p.rng.seed(rng());
        persons.push_back(std::move(p));
    }
    return persons;
}

void step(Person& person, const config::MovementPattern& pattern,
          const config::PersonsConfig& persons_cfg, const geom::Territory& territory, double dt)
{
    if (dt <= 0.0)
        throw std::invalid_argument("step requires dt > 0");
    if (pattern.kind == config::MovementPattern::Kind::random_walk_closed_map) {
        random_walk_step(person, territory, dt);
        return;
    }
    switch (person.phase) {
    case Phase::at_home:
    case Phase::at_work:
        if (person.dwell_remaining > 0.0) {
            person.dwell_remaining = std::max(0.0, person.dwell_remaining - dt);
            return;
        }
        depart(person, pattern, territory);
        travel_step(person, pattern, persons_cfg, territory, dt);
        return;
    case Phase::to_work:
    case Phase::to_home:
        travel_step(person, pattern, persons_cfg, territory, dt);
        return;
    }
}

} // namespace mndsim::mobility
