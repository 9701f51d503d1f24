#include "lattice_chamfer/lattice.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace lc {

const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
        case ErrorCode::NotALatticePoint: return "NotALatticePoint";
        case ErrorCode::NotABasis: return "NotABasis";
        case ErrorCode::ZeroVector: return "ZeroVector";
        case ErrorCode::NonPositiveWeight: return "NonPositiveWeight";
        case ErrorCode::CollinearDuplicates: return "CollinearDuplicates";
        case ErrorCode::AsymmetricWeights: return "AsymmetricWeights";
        case ErrorCode::NotGBasisWedge: return "NotGBasisWedge";
        case ErrorCode::NoWedgeFound: return "NoWedgeFound";
        case ErrorCode::NotConvex: return "NotConvex";
        case ErrorCode::InvalidImage: return "InvalidImage";
        case ErrorCode::Parse: return "Parse";
        case ErrorCode::NegativeRadius: return "NegativeRadius";
        case ErrorCode::Overflow: return "Overflow";
    }
    return "Unknown";
}

namespace {

std::vector<double> default_spacing(int n, std::vector<double> s) {
    if (s.empty()) return std::vector<double>(n, 1.0);
    if (static_cast<int>(s.size()) != n)
        throw Error(ErrorCode::DimensionMismatch, "spacing has " + std::to_string(s.size()) +
                                                      " entries, lattice dimension is " + std::to_string(n));
    for (double x : s)
        if (!(x > 0)) throw Error(ErrorCode::Parse, "spacings must be positive");
    return s;
}

std::vector<IVec> identity(int n) {
    std::vector<IVec> g(n, IVec(n, 0));
    for (int i = 0; i < n; ++i) g[i][i] = 1;
    return g;
}

}  // namespace

Lattice::Lattice(Kind kind, std::string name, std::vector<IVec> gens, std::vector<double> spacing)
    : kind_(kind), name_(std::move(name)), generators_(std::move(gens)) {
    const int n = dim();
    if (n < 1 || n > 4) throw Error(ErrorCode::DimensionMismatch, "lattice dimension must be 1..4");
    for (const auto& g : generators_)
        if (static_cast<int>(g.size()) != n)
            throw Error(ErrorCode::DimensionMismatch, "generator matrix must be square");
    covolume_ = std::abs(det(generators_));
    if (covolume_ == 0) throw Error(ErrorCode::NotABasis, "generators are linearly dependent");
    spacing_ = default_spacing(n, std::move(spacing));
}

Lattice Lattice::Zn(int n, std::vector<double> spacing) {
    return Lattice(Kind::Z, "Z" + std::to_string(n), identity(n), std::move(spacing));
}

Lattice Lattice::bcc(std::vector<double> spacing) {
    return Lattice(Kind::BCC, "BCC", {{2, 0, 0}, {0, 2, 0}, {1, 1, 1}}, std::move(spacing));
}

Lattice Lattice::fcc(std::vector<double> spacing) {
    return Lattice(Kind::FCC, "FCC", {{1, 1, 0}, {1, 0, 1}, {0, 1, 1}}, std::move(spacing));
}

Lattice Lattice::custom(std::vector<IVec> generators, std::vector<double> spacing, std::string name) {
    return Lattice(Kind::Custom, std::move(name), std::move(generators), std::move(spacing));
}

Lattice Lattice::by_name(const std::string& name, std::vector<double> spacing) {
    std::string u = name;
    std::transform(u.begin(), u.end(), u.begin(), [](unsigned char c) { return std::toupper(c); });
    if (u == "BCC") return bcc(std::move(spacing));
    if (u == "FCC") return fcc(std::move(spacing));
    if (u.size() == 2 && u[0] == 'Z' && u[1] >= '1' && u[1] <= '4') return Zn(u[1] - '0', std::move(spacing));
    throw Error(ErrorCode::Parse, "unknown lattice '" + name + "' (expected Z2, Z3, BCC, FCC)");
}

Lattice Lattice::with_spacing(std::vector<double> spacing) const {
    Lattice l = *this;
    l.spacing_ = default_spacing(dim(), std::move(spacing));
    return l;
}

bool Lattice::contains(const IVec& p) const {
    const int n = dim();
    if (static_cast<int>(p.size()) != n)
        throw Error(ErrorCode::DimensionMismatch,
                    "point has " + std::to_string(p.size()) + " coordinates, expected " + std::to_string(n));
    switch (kind_) {
        case Kind::Z: return true;
        case Kind::BCC: {
            const Int r = p[0] & 1;
            return (p[1] & 1) == r && (p[2] & 1) == r;
        }
        case Kind::FCC: return ((p[0] + p[1] + p[2]) & 1) == 0;
        case Kind::Custom: {
            // p = sum c_k g_k has an integer solution iff every Cramer numerator is divisible by det.
            const Int d0 = det(generators_);
            for (int k = 0; k < n; ++k)
                if (delta(generators_, k, p) % d0 != 0) return false;
            return true;
        }
    }
    return false;
}

bool is_lattice_point(const Lattice& lattice, const IVec& p) { return lattice.contains(p); }

Int covolume(const Lattice& lattice) { return lattice.covolume(); }

Int det(const std::vector<IVec>& rows) {
    const std::size_t n = rows.size();
    for (const auto& r : rows)
        if (r.size() != n) throw Error(ErrorCode::DimensionMismatch, "determinant of non-square matrix");
    if (n == 0) return 1;
    // Fraction-free Bareiss elimination; every intermediate is a minor, so division is exact.
    std::vector<std::vector<__int128>> m(n, std::vector<__int128>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m[i][j] = rows[i][j];
    __int128 prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            std::size_t p = k + 1;
            while (p < n && m[p][k] == 0) ++p;
            if (p == n) return 0;
            std::swap(m[k], m[p]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
        prev = m[k][k];
    }
    const __int128 r = sign * m[n - 1][n - 1];
    if (r > std::numeric_limits<Int>::max() || r < std::numeric_limits<Int>::min())
        throw Error(ErrorCode::Overflow, "determinant exceeds 64 bits");
    return static_cast<Int>(r);
}

Int delta(const std::vector<IVec>& family, int k, const IVec& x) {
    if (k < 0 || k >= static_cast<int>(family.size()))
        throw Error(ErrorCode::IndexOutOfRange, "delta index " + std::to_string(k));
    std::vector<IVec> f = family;
    f[k] = x;
    return det(f);
}

bool is_basis(const Lattice& lattice, const std::vector<IVec>& family) {
    if (static_cast<int>(family.size()) != lattice.dim())
        throw Error(ErrorCode::DimensionMismatch, "family must contain n vectors");
    for (const auto& v : family)
        if (!lattice.contains(v)) throw Error(ErrorCode::NotALatticePoint, to_string(v));
    return std::abs(det(family)) == lattice.covolume();
}

IVec decompose_in_basis(const Lattice& lattice, const std::vector<IVec>& family, const IVec& x) {
    if (!is_basis(lattice, family)) throw Error(ErrorCode::NotABasis, "family is not a lattice basis");
    const Int d0 = det(family);
    IVec a(family.size());
    for (std::size_t k = 0; k < family.size(); ++k) {
        const Int dk = delta(family, static_cast<int>(k), x);
        if (dk % d0 != 0) throw Error(ErrorCode::NotALatticePoint, to_string(x));
        a[k] = dk / d0;
    }
    return a;
}

Lattice read_lattice(std::istream& in) {
    std::stringstream clean;
    for (std::string line; std::getline(in, line);) {
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        clean << line << '\n';
    }
    int n = 0;
    if (!(clean >> n) || n < 1 || n > 4) throw Error(ErrorCode::Parse, "lattice file: bad dimension");
    std::vector<IVec> gens(n, IVec(n));
    for (auto& g : gens)
        for (auto& x : g)
            if (!(clean >> x)) throw Error(ErrorCode::Parse, "lattice file: truncated generator rows");
    std::vector<double> s(n);
    for (auto& x : s)
        if (!(clean >> x)) throw Error(ErrorCode::Parse, "lattice file: missing spacings");
    return Lattice::custom(std::move(gens), std::move(s));
}

Lattice read_lattice_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error(ErrorCode::Parse, "cannot open " + path);
    return read_lattice(f);
}

Int dot(const IVec& a, const IVec& b) {
    Int s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

IVec add(const IVec& a, const IVec& b) {
    IVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

IVec neg(const IVec& a) { return scale(a, -1); }

IVec scale(const IVec& a, Int s) {
    IVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] * s;
    return r;
}

double euclidean_norm(const IVec& v, const std::vector<double>& spacing) {
    double s = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double x = spacing.empty() ? double(v[i]) : spacing[i] * double(v[i]);
        s += x * x;
    }
    return std::sqrt(s);
}

std::string to_string(const IVec& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(v[i]);
    }
    return s + ")";
}

}  // namespace lc
