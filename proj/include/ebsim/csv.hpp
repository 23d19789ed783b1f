#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

#include "ebsim/experiment.hpp"

namespace ebsim {

// Locale-independent fixed-point formatting; CSV output must be byte-stable
// for equal inputs.
inline std::string format_fixed(double value, int precision) {
    char buf[64];
    const int written = std::snprintf(buf, sizeof(buf), "%.*f", precision, value);
    if (written < 0 || written >= static_cast<int>(sizeof(buf)))
        throw std::runtime_error("format_fixed: value does not fit");
    return std::string(buf);
}

inline std::string curve_csv(const Curve& curve, int precision = 9) {
    if (curve.points.empty()) throw std::invalid_argument("curve_csv: empty curve");
    std::string out = "angle_rad,concurrence,negativity,is_eb\n";
    for (const CurvePoint& p : curve.points) {
        out += format_fixed(p.angle, precision);
        out += ',';
        out += format_fixed(p.concurrence, precision);
        out += ',';
        out += format_fixed(p.negativity, precision);
        out += ',';
        out += p.eb ? '1' : '0';
        out += '\n';
    }
    return out;
}

inline std::string band_csv(const Band& band, int precision = 9) {
    if (band.points.empty()) throw std::invalid_argument("band_csv: empty band");
    std::string out = "angle_rad,c_min,c_max\n";
    for (const BandPoint& p : band.points) {
        out += format_fixed(p.angle, precision);
        out += ',';
        out += format_fixed(p.c_min, precision);
        out += ',';
        out += format_fixed(p.c_max, precision);
        out += '\n';
    }
    return out;
}

// Write via a sibling temp file and rename, so readers never observe a
// half-written file.
inline void write_text_atomic(const std::string& path, const std::string& text) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out << text;
        out.flush();
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw std::runtime_error("cannot move output into place: " + ec.message());
    }
}

}  // namespace ebsim
