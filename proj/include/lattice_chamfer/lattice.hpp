#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "lattice_chamfer/error.hpp"

namespace lc {

using Int = std::int64_t;
using IVec = std::vector<Int>;

// Integer point lattice embedded in Z^n (canonical coordinates) with per-axis spacings.
class Lattice {
public:
    enum class Kind { Z, BCC, FCC, Custom };

    static Lattice Zn(int n, std::vector<double> spacing = {});
    static Lattice bcc(std::vector<double> spacing = {});
    static Lattice fcc(std::vector<double> spacing = {});
    static Lattice custom(std::vector<IVec> generators, std::vector<double> spacing = {},
                          std::string name = "custom");
    // Z1..Z4, BCC, FCC (case-insensitive).
    static Lattice by_name(const std::string& name, std::vector<double> spacing = {});

    int dim() const { return static_cast<int>(generators_.size()); }
    Kind kind() const { return kind_; }
    const std::string& name() const { return name_; }
    const std::vector<IVec>& generators() const { return generators_; }
    const std::vector<double>& spacing() const { return spacing_; }
    Int covolume() const { return covolume_; }

    // Throws DimensionMismatch if p has the wrong size.
    bool contains(const IVec& p) const;

    Lattice with_spacing(std::vector<double> spacing) const;

private:
    Lattice(Kind kind, std::string name, std::vector<IVec> gens, std::vector<double> spacing);

    Kind kind_;
    std::string name_;
    std::vector<IVec> generators_;
    std::vector<double> spacing_;
    Int covolume_;
};

bool is_lattice_point(const Lattice& lattice, const IVec& p);
Int covolume(const Lattice& lattice);

// Exact determinant of the square matrix whose rows are `rows`.
Int det(const std::vector<IVec>& rows);

// Delta^k_F(x): det of the family with member k (0-based) replaced by x.
Int delta(const std::vector<IVec>& family, int k, const IVec& x);

bool is_basis(const Lattice& lattice, const std::vector<IVec>& family);

// Cramer coefficients alpha_k = Delta^k/Delta^0; integral since family is a basis.
IVec decompose_in_basis(const Lattice& lattice, const std::vector<IVec>& family, const IVec& x);

// Lattice file: dimension, then n generator rows, then n spacings; '#' starts a comment.
Lattice read_lattice(std::istream& in);
Lattice read_lattice_file(const std::string& path);

Int dot(const IVec& a, const IVec& b);
IVec add(const IVec& a, const IVec& b);
IVec neg(const IVec& a);
IVec scale(const IVec& a, Int s);
double euclidean_norm(const IVec& v, const std::vector<double>& spacing);
std::string to_string(const IVec& v);

}  // namespace lc
