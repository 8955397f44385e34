#pragma once

#include <bit>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "lpch/field.hpp"
#include "lpch/grid.hpp"

namespace lpch {

// Snapshot format: <base>.bin holds raw little-endian doubles, each
// coefficient as (re, im), components back to back in row-major lattice
// order; <base>.json is the sidecar with grid metadata and component count.

static_assert(std::endian::native == std::endian::little,
              "field snapshots are defined as little-endian dumps");

inline void save_field(const SpectralField& f, const std::string& base_path) {
    nlohmann::json side;
    side["format"] = "lpch-field-v1";
    side["dimension"] = f.grid.dim();
    side["period"] = f.grid.period();
    side["extent"] = f.grid.extent();
    side["components"] = f.components();
    side["layout"] = "row-major lattice, complex interleaved (re, im), components sequential";
    side["byte_order"] = "little-endian";
    side["scalar"] = "float64";
    std::ofstream js(base_path + ".json");
    if (!js) throw std::runtime_error("save_field: cannot open sidecar for writing");
    js << side.dump(2) << "\n";

    std::ofstream bin(base_path + ".bin", std::ios::binary);
    if (!bin) throw std::runtime_error("save_field: cannot open data file for writing");
    for (int c = 0; c < f.components(); ++c) {
        const auto& comp = f[c];
        bin.write(reinterpret_cast<const char*>(comp.data()),
                  static_cast<std::streamsize>(comp.size() * sizeof(Complex)));
    }
    if (!bin) throw std::runtime_error("save_field: write failed");
}

inline SpectralField load_field(const std::string& base_path) {
    std::ifstream js(base_path + ".json");
    if (!js) throw std::runtime_error("load_field: missing sidecar " + base_path + ".json");
    nlohmann::json side = nlohmann::json::parse(js);
    if (side.value("format", "") != "lpch-field-v1")
        throw std::runtime_error("load_field: unrecognized snapshot format");

    TorusGrid grid(side.at("period").get<double>(), side.at("extent").get<std::vector<int>>());
    const int ncomp = side.at("components").get<int>();
    SpectralField out(grid, ncomp);

    std::ifstream bin(base_path + ".bin", std::ios::binary);
    if (!bin) throw std::runtime_error("load_field: missing data file " + base_path + ".bin");
    const auto expected = static_cast<std::uintmax_t>(grid.points()) * ncomp * sizeof(Complex);
    if (std::filesystem::file_size(base_path + ".bin") != expected)
        throw std::runtime_error("load_field: data size does not match sidecar metadata");
    for (int c = 0; c < ncomp; ++c) {
        auto& comp = out[c];
        bin.read(reinterpret_cast<char*>(comp.data()),
                 static_cast<std::streamsize>(comp.size() * sizeof(Complex)));
        if (!bin) throw std::runtime_error("load_field: truncated data file");
    }
    return out;
}

} // namespace lpch
