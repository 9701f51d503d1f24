#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lattice_chamfer/chamfer_mask.hpp"

namespace lc {

enum Cell : std::uint8_t { kBackground = 0, kForeground = 1, kVoid = 2 };

constexpr std::uint32_t kInfinity = 0xFFFFFFFFu;
constexpr std::uint32_t kOutside = 0xFFFFFFFEu;

// Dense box [0, dims) of canonical coordinates; slots that are not lattice points are never used.
class Grid {
public:
    Grid(Lattice lattice, std::vector<Int> dims);

    const Lattice& lattice() const { return lattice_; }
    const std::vector<Int>& dims() const { return dims_; }
    int dim() const { return lattice_.dim(); }
    std::size_t slots() const { return slots_; }
    bool in_box(const IVec& p) const;
    std::size_t index(const IVec& p) const;
    IVec coords(std::size_t idx) const;
    void coords(std::size_t idx, Int* out) const;
    bool member(std::size_t idx) const { return member_[idx] != 0; }
    std::size_t member_count() const { return members_; }

private:
    Lattice lattice_;
    std::vector<Int> dims_;
    std::vector<std::size_t> strides_;
    std::size_t slots_ = 0;
    std::size_t members_ = 0;
    std::vector<std::uint8_t> member_;
};

// Binary image on a lattice: X (foreground), its complement (background), and optional void
// points outside the image support S.
class GridImage {
public:
    GridImage(Lattice lattice, std::vector<Int> dims, std::uint8_t fill = kForeground);

    const Grid& grid() const { return grid_; }
    const Lattice& lattice() const { return grid_.lattice(); }
    const std::vector<Int>& dims() const { return grid_.dims(); }
    std::uint8_t at(std::size_t idx) const { return cells_[idx]; }
    std::uint8_t at(const IVec& p) const { return cells_[grid_.index(p)]; }
    void set(std::size_t idx, std::uint8_t v);
    void set(const IVec& p, std::uint8_t v) { set(grid_.index(p), v); }
    bool in_support(std::size_t idx) const { return cells_[idx] != kVoid; }
    std::size_t count(std::uint8_t v) const;
    const std::vector<std::uint8_t>& cells() const { return cells_; }

private:
    Grid grid_;
    std::vector<std::uint8_t> cells_;
};

struct DistanceMap {
    Grid grid;
    std::vector<std::uint32_t> values;  // kInfinity: unreachable, kOutside: void or non-member slot
    double scale = 0;                   // 0: unset

    std::uint32_t at(const IVec& p) const { return values[grid.index(p)]; }
    bool operator==(const DistanceMap& o) const { return values == o.values && grid.dims() == o.grid.dims(); }
};

// a = (N^{n-1}, ..., N, 1) with the smallest N >= 1 such that a.v != 0 for every vector.
IVec choose_hyperplane(const std::vector<IVec>& vectors);

struct HalfMasks {
    std::vector<std::size_t> first;   // a.v < 0, used in the forward scan
    std::vector<std::size_t> second;  // a.v > 0, used in the backward scan
};

HalfMasks split_mask(const ChamferMask& mask, const IVec& a);

// Support points by ascending a.p, ties in raster order (x fastest). Linear time.
std::vector<std::size_t> generate_scan_order(const GridImage& image, const IVec& a);

// Every neighbor p+v (v in `vectors`) in the support is visited before p (after p when reversed).
bool supports_order(const GridImage& image, const std::vector<IVec>& vectors, const std::vector<std::size_t>& order,
                    bool reversed);

struct ScanPlan {
    IVec a;
    HalfMasks halves;
    std::vector<std::size_t> order;
};

ScanPlan make_scan_plan(const ChamferMask& mask, const GridImage& image);

enum class Verdict { BorderOk, WedgePreserving, Invalid };
const char* to_string(Verdict v);

struct ValidationVerdict {
    Verdict kind;
    std::string reason;
    std::vector<IVec> foreground_border;  // first few offending border points
    std::vector<IVec> leaking_steps;      // first few p+v escaping every wedge-preserving half-space
};

ValidationVerdict validate_image(const ChamferMask& mask, const WedgeDecomposition& dec, const GridImage& image);

// True iff a.v has a consistent (weak) sign across every wedge.
bool is_wedge_preserving_normal(const ChamferMask& mask, const WedgeDecomposition& dec, const IVec& a);

struct ScanStats {
    std::size_t visits = 0;
    std::size_t neighbor_evaluations = 0;
};

// Initial map: 0 on background, infinity on foreground, kOutside off the support.
DistanceMap initial_map(const GridImage& image);

// Forward scan with the first half-mask, backward scan with the second. No validation.
DistanceMap chamfer_two_scan(const GridImage& image, const ChamferMask& mask, const ScanPlan& plan,
                             ScanStats* stats = nullptr);

// Validates first; throws InvalidImage unless `unsafe`.
DistanceMap compute_distance_map(const GridImage& image, const ChamferMask& mask, const WedgeDecomposition& dec,
                                 bool unsafe = false, ValidationVerdict* verdict = nullptr);

// Bucket (wavefront) propagation restricted to paths inside the support.
DistanceMap dijkstra_oracle(const GridImage& image, const ChamferMask& mask);

// Synchronous min-update sweeps until a fixpoint; bit-identical for any thread count.
DistanceMap parallel_iterative_oracle(const GridImage& image, const ChamferMask& mask, int threads = 0,
                                      int* sweeps = nullptr);

struct Ball {
    IVec center;
    DistanceMap map;
    std::vector<IVec> points;  // relative to the center, raster order
};

Ball generate_ball(const ChamferMask& mask, Int radius);

}  // namespace lc
