#pragma once

// CloudFile text format, exact round trip for 64-bit floats:
//
//   reachkit/1 <D> <d> <frames 0|1>
//   #spec <single-line JSON>            (optional)
//   <D coords> [<d*D frame entries row-major>]   one point per line
//
// All values printed with 17 significant digits.

#include <cstdio>
#include <cstdlib>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include "errors.hpp"
#include "reach.hpp"

namespace reachkit {

inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline void write_cloud(std::ostream& os, const TangentCloud& cloud,
                        const std::optional<std::string>& spec_json = std::nullopt) {
    os << "reachkit/1 " << cloud.D << ' ' << cloud.d << ' '
       << (cloud.has_frames() ? 1 : 0) << '\n';
    if (spec_json) os << "#spec " << *spec_json << '\n';
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const auto& p = cloud.points[i];
        for (int k = 0; k < cloud.D; ++k) {
            if (k) os << ' ';
            os << format_double(p[k]);
        }
        if (cloud.has_frames()) {
            const Frame& f = (*cloud.frames)[i];
            for (int r = 0; r < f.d; ++r)
                for (int k = 0; k < f.D; ++k) os << ' ' << format_double(f.row(r)[k]);
        }
        os << '\n';
    }
}

struct CloudFile {
    TangentCloud cloud;
    std::optional<std::string> spec_json;
};

inline CloudFile read_cloud(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw Error("read_cloud: empty file");
    std::istringstream header(line);
    std::string magic;
    int D = 0, d = 0, frames_flag = 0;
    header >> magic >> D >> d >> frames_flag;
    if (magic != "reachkit/1" || header.fail() || D < 1 || d < 1 || d >= D)
        throw Error("read_cloud: bad header");

    CloudFile out;
    std::vector<Vector> points;
    std::vector<Frame> frames;
    const int row_width = D + (frames_flag ? d * D : 0);
    bool first_row = true;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (first_row && line.rfind("#spec ", 0) == 0) {
            out.spec_json = line.substr(6);
            first_row = false;
            continue;
        }
        first_row = false;
        std::vector<double> vals;
        vals.reserve(row_width);
        const char* s = line.c_str();
        char* end = nullptr;
        for (;;) {
            const double v = std::strtod(s, &end);
            if (end == s) break;
            vals.push_back(v);
            s = end;
        }
        if (static_cast<int>(vals.size()) != row_width)
            throw Error("read_cloud: row width mismatch");
        points.emplace_back(vals.begin(), vals.begin() + D);
        if (frames_flag) {
            Frame f;
            f.d = d;
            f.D = D;
            f.data.assign(vals.begin() + D, vals.end());
            frames.push_back(std::move(f));
        }
    }
    out.cloud = TangentCloud::make(
        std::move(points),
        frames_flag ? std::optional(std::move(frames)) : std::nullopt, d);
    return out;
}

} // namespace reachkit
