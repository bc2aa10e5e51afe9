#pragma once

#include <string>

#include "geometry.h"
#include "grid.h"

namespace sharplab {

// Flat binary field container: "SLBF" magic, format version, scalar width,
// the grid spec and its hash, then the samples as f64 row-major (first grid
// index slowest).  Disk fields store (nr, nt) in the shape slots and R in the
// first length slot.  A CSV twin of the same samples is written for
// inspection; only the binary form is read back.
struct FieldFile {
    Shape shape = Shape::rectangle;
    Grid grid;                // rectangle payload
    double R = 0.0;           // disk payload
    int nr = 0, nt = 0;
    Eigen::ArrayXd values;    // flattened samples, container order
};

void write_field(const std::string& path, const Grid& g, const Array2& u);
void write_field(const std::string& path, const DiskGrid& dg, const Eigen::ArrayXd& u);
FieldFile read_field(const std::string& path);

Array2 rectangle_samples(const FieldFile& f);

void write_field_csv(const std::string& path, const Grid& g, const Array2& u);
void write_field_csv(const std::string& path, const DiskGrid& dg, const Eigen::ArrayXd& u);

void write_text(const std::string& path, const std::string& body);
std::string read_text(const std::string& path);

} // namespace sharplab
