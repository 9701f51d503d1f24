#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lattice_chamfer/lattice.hpp"

namespace lc {

struct WeightedVector {
    IVec v;
    Int w;
};

// Symmetric set of weighted lattice vectors. Vectors are grouped in weight classes;
// a vector and its negation always share a class.
class ChamferMask {
public:
    ChamferMask(Lattice lattice, std::vector<IVec> vectors, std::vector<int> classes, std::vector<Int> class_weights);

    const Lattice& lattice() const { return lattice_; }
    int dim() const { return lattice_.dim(); }
    std::size_t size() const { return vectors_.size(); }
    const std::vector<IVec>& vectors() const { return vectors_; }
    const IVec& vector(std::size_t i) const { return vectors_[i]; }
    int cls(std::size_t i) const { return classes_[i]; }
    const std::vector<int>& classes() const { return classes_; }
    int num_classes() const { return static_cast<int>(class_weights_.size()); }
    const std::vector<Int>& class_weights() const { return class_weights_; }
    Int weight(std::size_t i) const { return class_weights_[classes_[i]]; }
    Int max_weight() const;
    std::vector<WeightedVector> entries() const;
    std::size_t negation_of(std::size_t i) const { return negation_[i]; }

    // Same geometry, different class weights.
    ChamferMask with_weights(std::vector<Int> class_weights) const;

private:
    Lattice lattice_;
    std::vector<IVec> vectors_;
    std::vector<int> classes_;
    std::vector<Int> class_weights_;
    std::vector<std::size_t> negation_;
};

// Each entry becomes its own class; (-v, w) is appended right after (v, w).
// Explicitly given negations are merged when their weights agree.
ChamferMask symmetric_closure(const Lattice& lattice, const std::vector<WeightedVector>& entries);

// Each representative expands to its signed-permutation orbit (restricted to the lattice).
ChamferMask mask_from_classes(const Lattice& lattice, const std::vector<IVec>& representatives,
                              std::vector<Int> class_weights);

// Mask file: one `vx vy [vz] : w` line per generator entry; '#' starts a comment.
ChamferMask read_mask(const Lattice& lattice, std::istream& in);
ChamferMask read_mask_file(const Lattice& lattice, const std::string& path);

struct Wedge {
    std::vector<std::size_t> idx;  // indices into the mask's vectors
    Int delta0;
    std::vector<IVec> cofactors;   // Delta^k(x) = cofactors[k] . x

    Int delta(int k, const IVec& x) const { return dot(cofactors[k], x); }
};

Wedge make_wedge(const ChamferMask& mask, std::vector<std::size_t> idx);

struct WedgeDecomposition {
    std::vector<Wedge> wedges;
};

std::vector<IVec> wedge_family(const ChamferMask& mask, const Wedge& w);
std::vector<Int> wedge_weights(const ChamferMask& mask, const Wedge& w);

WedgeDecomposition build_wedges(const ChamferMask& mask);

// Farey split of the cone edge (i, j): children replace v_i (resp. v_j) by v_i + v_j.
std::pair<std::vector<IVec>, std::vector<IVec>> farey_split(const Lattice& lattice, const std::vector<IVec>& family,
                                                           int i, int j);

struct Rational {
    Int num;
    Int den;
    bool operator==(const Rational&) const = default;
};
Rational make_rational(Int num, Int den);

struct NormalizedPolytope {
    std::vector<std::vector<Rational>> vertices;  // one per mask vector
    std::vector<std::vector<std::size_t>> faces;  // one per wedge
};

NormalizedPolytope normalized_polytope(const ChamferMask& mask, const WedgeDecomposition& dec);

struct ConvexityReport {
    bool convex = true;
    std::vector<std::size_t> offenders;           // vertices strictly inside the hull of the others
    std::vector<std::size_t> redundant;           // vertices on the hull but not extreme
    std::vector<std::size_t> nonconvex_wedges;    // wedges whose face cuts off another vertex
};

// Exact integer test: for every wedge W and mask vector v, L_W(v) <= w(v).
bool is_polytope_convex(const ChamferMask& mask, const WedgeDecomposition& dec);
ConvexityReport check_convexity(const ChamferMask& mask, const WedgeDecomposition& dec);

struct WedgeLocation {
    std::size_t wedge;
    IVec alpha;  // Cramer coefficients, all >= 0
};

WedgeLocation locate_wedge(const ChamferMask& mask, const WedgeDecomposition& dec, const IVec& p);

// Linear form of the containing wedge, d(p) = (1/Delta0) sum_k Delta^k(p) w_k.
Int closed_form_distance(const ChamferMask& mask, const WedgeDecomposition& dec, const IVec& p);

// Bulk evaluator: checks convexity once.
class ClosedFormDistance {
public:
    ClosedFormDistance(const ChamferMask& mask, const WedgeDecomposition& dec);
    // Keeps references; temporaries would dangle.
    ClosedFormDistance(const ChamferMask&&, const WedgeDecomposition&) = delete;
    ClosedFormDistance(const ChamferMask&, const WedgeDecomposition&&) = delete;
    Int operator()(const IVec& p) const;
    // Value of the linear form of wedge `w` at p (no containment check).
    Int in_wedge(std::size_t w, const IVec& p) const;

private:
    const ChamferMask* mask_;
    const WedgeDecomposition* dec_;
};

}  // namespace lc
