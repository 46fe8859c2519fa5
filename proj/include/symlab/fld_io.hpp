#pragma once

#include <optional>
#include <string>

#include "symlab/grid.hpp"

namespace symlab {

// FLD1: text header (FLD1 / dim / shape / origin / spacing / optional tail /
// optional excluded_radius), a blank line, then row-major little-endian
// float64 samples. Readers reject payload length mismatches.
struct FldExtra {
    std::optional<double> excluded_radius;  // written for Kelvin-image fields
};

void write_fld(const std::string& path, const GridField& field, const FldExtra& extra = {});

GridField read_fld(const std::string& path, FldExtra* extra = nullptr);

}  // namespace symlab
