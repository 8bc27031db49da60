#include "pairpot/pattern_io.hpp"

#include <charconv>
#include <sstream>
#include <vector>

#include "pairpot/csv.hpp"
#include "pairpot/errors.hpp"

namespace pairpot {

std::string pattern_to_csv(const PointPattern& pattern) {
    std::string out = "# dim=" + std::to_string(pattern.dim()) +
                      " side=" + format_double_full(pattern.window().side()) + "\n";
    for (const Point& p : pattern.points()) {
        for (int i = 0; i < pattern.dim(); ++i) {
            if (i) out.push_back(',');
            out += format_double_full(p[i]);
        }
        out.push_back('\n');
    }
    return out;
}

void write_pattern(const std::string& path, const PointPattern& pattern) {
    write_text_file(path, pattern_to_csv(pattern));
}

PointPattern pattern_from_csv(const std::string& text, double grid_range) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("pattern file: empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();

    int dim = 0;
    double side = 0.0;
    {
        std::istringstream header(line);
        std::string hash, dim_kv, side_kv;
        header >> hash >> dim_kv >> side_kv;
        if (hash != "#" || dim_kv.rfind("dim=", 0) != 0 || side_kv.rfind("side=", 0) != 0) {
            throw ConfigError("pattern file: header must be '# dim=<d> side=<L>'");
        }
        try {
            dim = static_cast<int>(parse_double(dim_kv.substr(4)));
            side = parse_double(side_kv.substr(5));
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("pattern file: bad header: ") + e.what());
        }
    }

    std::vector<Point> points;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        Point p;
        std::size_t start = 0;
        for (int i = 0; i < dim; ++i) {
            std::size_t end = (i + 1 < dim) ? line.find(',', start) : line.size();
            if (end == std::string::npos) {
                throw ConfigError("pattern file line " + std::to_string(line_no) + ": expected " +
                                  std::to_string(dim) + " coordinates");
            }
            try {
                p[i] = parse_double(std::string_view(line).substr(start, end - start));
            } catch (const std::invalid_argument& e) {
                throw ConfigError("pattern file line " + std::to_string(line_no) + ": " + e.what());
            }
            start = end + 1;
        }
        points.push_back(p);
    }

    try {
        return PointPattern(Window(dim, side), std::move(points), grid_range);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("pattern file: ") + e.what());
    }
}

PointPattern read_pattern(const std::string& path, double grid_range) {
    return pattern_from_csv(read_text_file(path), grid_range);
}

} // namespace pairpot
