#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lattice_chamfer/dt_engine.hpp"

namespace lc {

enum class Encoding { Ascii, Binary };

struct ImageHeader {
    Lattice lattice;
    std::vector<Int> dims;
    Encoding encoding = Encoding::Ascii;
    std::optional<double> scale;
};

// Values per grid slot; non-member slots hold kOutside.
struct LdtContent {
    ImageHeader header;
    std::vector<std::uint32_t> values;
};

// LDT1 container. Header lines: `LDT1`, `lattice <id>` (Z1..Z4, BCC, FCC, or `custom` followed by
// n `generator ...` lines), `dims ...`, `spacing ...`, optional `scale <e>`, `data ascii|binary`.
// Ascii payload: one `x y [z] value` line per lattice member in raster order (x fastest).
// Binary payload: little-endian uint32 per member, same order.
LdtContent read_ldt(std::istream& in);
void write_ldt(std::ostream& out, const ImageHeader& header, const std::vector<std::uint32_t>& values);

GridImage read_image(std::istream& in);
GridImage read_image(const std::string& path);
DistanceMap read_map(std::istream& in);
DistanceMap read_map(const std::string& path);

void write_image(std::ostream& out, const GridImage& image, Encoding enc = Encoding::Ascii);
void write_image(const std::string& path, const GridImage& image, Encoding enc = Encoding::Ascii);
void write_map(std::ostream& out, const DistanceMap& map, Encoding enc = Encoding::Ascii);
void write_map(const std::string& path, const DistanceMap& map, Encoding enc = Encoding::Ascii);

// `x,y[,z],value` per support point; void slots are skipped, infinity is written as `inf`.
void write_csv(std::ostream& out, const DistanceMap& map);
// `x,y[,z],value` per ball point, coordinates relative to the center.
void write_ball_csv(std::ostream& out, const Ball& ball);

// Points within `border_width` of a box face.
bool on_border(const Grid& grid, const IVec& p, Int border_width);

struct SynthOptions {
    bool border_background = false;
    Int border_width = 1;
};

// One background point at the member nearest to dims/2, foreground elsewhere.
GridImage synth_single_point(const Lattice& lattice, const std::vector<Int>& dims, const SynthOptions& opt = {});
// Background with probability p, drawn from mt19937_64(seed) per member in raster order.
GridImage synth_random(const Lattice& lattice, const std::vector<Int>& dims, double p, std::uint64_t seed,
                       const SynthOptions& opt = {});
// Foreground box [dims/4, dims-1-dims/4] per axis, background outside.
GridImage synth_box_phantom(const Lattice& lattice, const std::vector<Int>& dims, const SynthOptions& opt = {});

}  // namespace lc
