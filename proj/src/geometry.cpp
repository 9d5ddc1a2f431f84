#include "mndsim/geometry.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>

namespace mndsim::geom {

namespace {

class WktScanner {
public:
    explicit WktScanner(std::string_view src) : src_(src) {}

    void skip_ws()
    {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_])))
            ++pos_;
    }

    bool consume(char c)
    {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c)
    {
        if (!consume(c))
            throw WktError(std::string("WKT: expected '") + c + "' at offset " +
                           std::to_string(pos_));
    }

    std::string keyword()
    {
        skip_ws();
        std::size_t begin = pos_;
        while (pos_ < src_.size() && std::isalpha(static_cast<unsigned char>(src_[pos_])))
            ++pos_;
        std::string word(src_.substr(begin, pos_ - begin));
        for (char& c : word)
            c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        return word;
    }

    double number()
    {
        skip_ws();
        double value = 0.0;
        const char* begin = src_.data() + pos_;
        const char* end = src_.data() + src_.size();
        auto [ptr, ec] = std::from_chars(begin, end, value);
        if (ec != std::errc())
            throw WktError("WKT: expected a number at offset " + std::to_string(pos_));
        pos_ = static_cast<std::size_t>(ptr - src_.data());
        return value;
    }

    bool at_end()
    {
        skip_ws();
        return pos_ >= src_.size();
    }

private:
    std::string_view src_;
    std::size_t pos_ = 0;
};

Ring parse_ring(WktScanner& scan)
{
    scan.expect('(');
    Ring ring;
    do {
        Point p;
        p.x = scan.number();
        p.y = scan.number();
        ring.push_back(p);
    } while (scan.consume(','));
    scan.expect(')');
    if (ring.size() >= 2 && ring.front().x == ring.back().x && ring.front().y == ring.back().y)
        ring.pop_back(); // drop the WKT closing vertex
    if (ring.size() < 3)
        throw WktError("WKT: ring has fewer than 3 distinct vertices");
    return ring;
}

Polygon parse_polygon_body(WktScanner& scan)
{
    scan.expect('(');
    Polygon poly;
    do {
        poly.rings.push_back(parse_ring(scan));
    } while (scan.consume(','));
    scan.expect(')');
    return poly;
}

double ring_area_signed(const Ring& ring)
{
    double acc = 0.0;
    for (std::size_t i = 0; i < ring.size(); ++i) {
        const Point& a = ring[i];
        const Point& b = ring[(i + 1) % ring.size()];
        acc += a.x * b.y - b.x * a.y;
    }
    return acc / 2.0;
}

// Proper crossing of two segments: endpoints strictly on opposite sides.
bool segments_cross(Point a, Point b, Point c, Point d)
{
    auto orient = [](Point p, Point q, Point r) {
        const double v = (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x);
        return (v > 0.0) - (v < 0.0);
    };
    const int o1 = orient(a, b, c);
    const int o2 = orient(a, b, d);
    const int o3 = orient(c, d, a);
    const int o4 = orient(c, d, b);
    return o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0 && o1 != o2 && o3 != o4;
}

} // namespace

MultiPolygon parse_wkt(std::string_view wkt)
{
    WktScanner scan(wkt);
    const std::string kind = scan.keyword();
    MultiPolygon shape;
    if (kind == "POLYGON") {
        shape.polygons.push_back(parse_polygon_body(scan));
    }
    else if (kind == "MULTIPOLYGON") {
        scan.expect('(');
        do {
            shape.polygons.push_back(parse_polygon_body(scan));
        } while (scan.consume(','));
        scan.expect(')');
    }
    else {
        throw WktError("WKT: unsupported geometry '" + kind + "' (POLYGON or MULTIPOLYGON)");
    }
    if (!scan.at_end())
        throw WktError("WKT: trailing content after geometry");
    return shape;
}

bool contains(const Ring& ring, Point p)
{
    // even-odd ray casting, ray towards +x
    bool inside = false;
    for (std::size_t i = 0, j = ring.size() - 1; i < ring.size(); j = i++) {
        const Point& a = ring[i];
        const Point& b = ring[j];
        if ((a.y > p.y) != (b.y > p.y)) {
            const double x_cross = (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x;
            if (p.x < x_cross)
                inside = !inside;
        }
    }
    return inside;
}

bool contains(const MultiPolygon& shape, Point p)
{
    for (const Polygon& poly : shape.polygons) {
        bool inside = false;
        for (const Ring& ring : poly.rings)
            if (contains(ring, p))
                inside = !inside; // holes toggle membership
        if (inside)
            return true;
    }
    return false;
}

bool contains_winding(const Ring& ring, Point p)
{
    int winding = 0;
    for (std::size_t i = 0; i < ring.size(); ++i) {
        const Point& a = ring[i];
        const Point& b = ring[(i + 1) % ring.size()];
        const double cross = (b.x - a.x) * (p.y - a.y) - (p.x - a.x) * (b.y - a.y);
        if (a.y <= p.y) {
            if (b.y > p.y && cross > 0)
                ++winding;
        }
        else if (b.y <= p.y && cross < 0) {
            --winding;
        }
    }
    return winding != 0;
}

double area(const MultiPolygon& shape)
{
    double total = 0.0;
    for (const Polygon& poly : shape.polygons) {
        for (std::size_t i = 0; i < poly.rings.size(); ++i) {
            const double a = std::abs(ring_area_signed(poly.rings[i]));
            total += i == 0 ? a : -a;
        }
    }
    return total;
}

Bbox bounding_box(const MultiPolygon& shape)
{
    Bbox box{std::numeric_limits<double>::max(), std::numeric_limits<double>::max(),
             std::numeric_limits<double>::lowest(), std::numeric_limits<double>::lowest()};
    bool any = false;
    for (const Polygon& poly : shape.polygons) {
        for (const Ring& ring : poly.rings) {
            for (const Point& p : ring) {
                any = true;
                box.xmin = std::min(box.xmin, p.x);
                box.ymin = std::min(box.ymin, p.y);
                box.xmax = std::max(box.xmax, p.x);
                box.ymax = std::max(box.ymax, p.y);
            }
        }
    }
    if (!any)
        throw WktError("bounding box of empty geometry");
    return box;
}

bool ring_self_intersects(const Ring& ring)
{
    const std::size_t n = ring.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            // skip adjacent edges (share a vertex)
            if (j == i + 1 || (i == 0 && j == n - 1))
                continue;
            if (segments_cross(ring[i], ring[(i + 1) % n], ring[j], ring[(j + 1) % n]))
                return true;
        }
    }
    return false;
}

Grid build_grid(const Territory& territory, double tile_dim_x, double tile_dim_y)
{
    if (tile_dim_x <= 0.0 || tile_dim_y <= 0.0)
        throw std::invalid_argument("tile dimensions must be positive");
    if (area(territory.boundary) <= 0.0)
        throw std::invalid_argument("territory has zero area");
    const Bbox box = territory.bbox;
    Grid grid;
    grid.x_origin = box.xmin;
    grid.y_origin = box.ymin;
    grid.tile_dim_x = tile_dim_x;
    grid.tile_dim_y = tile_dim_y;
    // the 1e-9 slack keeps exact divisions from gaining a ghost column
    grid.n_cols = std::max<std::int64_t>(
        1, static_cast<std::int64_t>(std::ceil(box.width() / tile_dim_x - 1e-9)));
    grid.n_rows = std::max<std::int64_t>(
        1, static_cast<std::int64_t>(std::ceil(box.height() / tile_dim_y - 1e-9)));
    return grid;
}

std::optional<TileId> tile_of(const Grid& grid, Point p)
{
    const double fx = (p.x - grid.x_origin) / grid.tile_dim_x;
    const double fy = (p.y - grid.y_origin) / grid.tile_dim_y;
    std::int64_t col = static_cast<std::int64_t>(std::floor(fx));
    std::int64_t row = static_cast<std::int64_t>(std::floor(fy));
    // the envelope's top/right boundary belongs to the last tile
    if (col == grid.n_cols && fx <= static_cast<double>(grid.n_cols))
        col = grid.n_cols - 1;
    if (row == grid.n_rows && fy <= static_cast<double>(grid.n_rows))
        row = grid.n_rows - 1;
    if (col < 0 || col >= grid.n_cols || row < 0 || row >= grid.n_rows)
        return std::nullopt;
    return row * grid.n_cols + col;
}

Point tile_center(const Grid& grid, TileId tile)
{
    if (tile < 0 || tile >= grid.tile_count())
        throw std::out_of_range("tile id " + std::to_string(tile) + " outside grid of " +
                                std::to_string(grid.tile_count()) + " tiles");
    const std::int64_t row = tile / grid.n_cols;
    const std::int64_t col = tile % grid.n_cols;
    return {grid.x_origin + (static_cast<double>(col) + 0.5) * grid.tile_dim_x,
            grid.y_origin + (static_cast<double>(row) + 0.5) * grid.tile_dim_y};
}

const Subregion* subregion_of(const Territory& territory, Point p)
{
    for (const Subregion& sub : territory.subregions)
        if (contains(sub.shape, p))
            return &sub;
    return nullptr;
}

} // namespace mndsim::geom
