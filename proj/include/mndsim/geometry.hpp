#pragma once

// Planar territory, analysis grid and point-location queries.
// All computation is in planar meters; the CRS code is metadata only.

#include "mndsim/types.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mndsim::geom {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

/// A ring is stored without the repeated closing vertex.
using Ring = std::vector<Point>;

/// rings[0] is the outer boundary, the rest are holes (even-odd semantics).
struct Polygon {
    std::vector<Ring> rings;
};

struct MultiPolygon {
    std::vector<Polygon> polygons;
};

struct Bbox {
    double xmin = 0.0, ymin = 0.0, xmax = 0.0, ymax = 0.0;
    double width() const { return xmax - xmin; }
    double height() const { return ymax - ymin; }
};

struct WktError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Reads POLYGON and MULTIPOLYGON literals.
MultiPolygon parse_wkt(std::string_view wkt);

/// Even-odd ray casting over all rings of all polygons.
bool contains(const MultiPolygon& shape, Point p);
bool contains(const Ring& ring, Point p);

/// Winding-number membership for a single ring (used as a cross-check).
bool contains_winding(const Ring& ring, Point p);

double area(const MultiPolygon& shape);
Bbox bounding_box(const MultiPolygon& shape);

/// True if any two non-adjacent edges of the ring properly cross.
bool ring_self_intersects(const Ring& ring);

struct Subregion {
    std::string id;
    std::string long_name;
    MultiPolygon shape;
};

struct Territory {
    MultiPolygon boundary;
    std::vector<Subregion> subregions;
    int crs_code = 0;
    Bbox bbox;
};

struct Grid {
    double x_origin = 0.0;
    double y_origin = 0.0;
    double tile_dim_x = 0.0;
    double tile_dim_y = 0.0;
    std::int64_t n_cols = 0;
    std::int64_t n_rows = 0;

    std::int64_t tile_count() const { return n_cols * n_rows; }
};

/// Smallest grid anchored at the bounding-box lower-left corner whose
/// envelope covers the territory's bounding box. Tile ids are row-major
/// from that corner. Throws on degenerate (zero-area) territory.
Grid build_grid(const Territory& territory, double tile_dim_x, double tile_dim_y);

/// Half-open tiles [x0,x1) x [y0,y1); the grid's top/right boundary is
/// closed so every point of the envelope maps to a tile.
std::optional<TileId> tile_of(const Grid& grid, Point p);

Point tile_center(const Grid& grid, TileId tile);

/// First-listed subregion containing the point, or nullptr.
const Subregion* subregion_of(const Territory& territory, Point p);

} // namespace mndsim::geom
