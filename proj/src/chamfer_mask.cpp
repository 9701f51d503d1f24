#include "lattice_chamfer/chamfer_mask.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace lc {

namespace {

bool parallel(const IVec& a, const IVec& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = i + 1; j < a.size(); ++j)
            if (a[i] * b[j] - a[j] * b[i] != 0) return false;
    return true;
}

bool is_zero(const IVec& v) {
    return std::all_of(v.begin(), v.end(), [](Int x) { return x == 0; });
}

Int sgn(Int x) { return (x > 0) - (x < 0); }

// Calls fn(indices) for every k-combination of [0, m) in lexicographic order; stops when fn returns true.
bool for_each_combination(std::size_t m, std::size_t k, const std::function<bool(const std::vector<std::size_t>&)>& fn) {
    if (k > m) return false;
    std::vector<std::size_t> c(k);
    std::iota(c.begin(), c.end(), 0);
    while (true) {
        if (fn(c)) return true;
        std::size_t i = k;
        while (i > 0 && c[i - 1] == m - k + i - 1) --i;
        if (i == 0) return false;
        ++c[i - 1];
        for (std::size_t j = i; j < k; ++j) c[j] = c[j - 1] + 1;
    }
}

std::vector<IVec> signed_permutations(const IVec& rep) {
    const std::size_t n = rep.size();
    std::set<IVec, std::greater<IVec>> out;
    IVec p = rep;
    std::sort(p.begin(), p.end());
    do {
        for (unsigned s = 0; s < (1u << n); ++s) {
            IVec v = p;
            for (std::size_t k = 0; k < n; ++k)
                if (s & (1u << k)) v[k] = -v[k];
            if (!is_zero(v)) out.insert(v);
        }
    } while (std::next_permutation(p.begin(), p.end()));
    return {out.begin(), out.end()};
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

ChamferMask::ChamferMask(Lattice lattice, std::vector<IVec> vectors, std::vector<int> classes,
                         std::vector<Int> class_weights)
    : lattice_(std::move(lattice)),
      vectors_(std::move(vectors)),
      classes_(std::move(classes)),
      class_weights_(std::move(class_weights)) {
    if (vectors_.size() != classes_.size())
        throw Error(ErrorCode::DimensionMismatch, "one class id per vector required");
    for (Int w : class_weights_)
        if (w <= 0) throw Error(ErrorCode::NonPositiveWeight, std::to_string(w));
    std::map<IVec, std::size_t> index;
    for (std::size_t i = 0; i < vectors_.size(); ++i) {
        const auto& v = vectors_[i];
        if (static_cast<int>(v.size()) != lattice_.dim())
            throw Error(ErrorCode::DimensionMismatch, to_string(v));
        if (is_zero(v)) throw Error(ErrorCode::ZeroVector, "mask vector");
        if (!lattice_.contains(v)) throw Error(ErrorCode::NotALatticePoint, to_string(v));
        if (classes_[i] < 0 || classes_[i] >= num_classes())
            throw Error(ErrorCode::IndexOutOfRange, "class id " + std::to_string(classes_[i]));
        index[v] = i;
    }
    negation_.resize(vectors_.size());
    for (std::size_t i = 0; i < vectors_.size(); ++i) {
        auto it = index.find(neg(vectors_[i]));
        if (it == index.end()) throw Error(ErrorCode::AsymmetricWeights, "missing negation of " + to_string(vectors_[i]));
        if (classes_[it->second] != classes_[i] && class_weights_[classes_[it->second]] != weight(i))
            throw Error(ErrorCode::AsymmetricWeights, to_string(vectors_[i]));
        negation_[i] = it->second;
        for (std::size_t j = 0; j < i; ++j)
            if (j != negation_[i] && parallel(vectors_[i], vectors_[j]))
                throw Error(ErrorCode::CollinearDuplicates, to_string(vectors_[j]) + " and " + to_string(vectors_[i]));
    }
}

Int ChamferMask::max_weight() const {
    return class_weights_.empty() ? 0 : *std::max_element(class_weights_.begin(), class_weights_.end());
}

std::vector<WeightedVector> ChamferMask::entries() const {
    std::vector<WeightedVector> e;
    for (std::size_t i = 0; i < size(); ++i) e.push_back({vectors_[i], weight(i)});
    return e;
}

ChamferMask ChamferMask::with_weights(std::vector<Int> class_weights) const {
    if (class_weights.size() != class_weights_.size())
        throw Error(ErrorCode::DimensionMismatch, "expected " + std::to_string(class_weights_.size()) + " weights");
    return ChamferMask(lattice_, vectors_, classes_, std::move(class_weights));
}

ChamferMask symmetric_closure(const Lattice& lattice, const std::vector<WeightedVector>& entries) {
    std::vector<IVec> vecs;
    std::vector<int> cls;
    std::vector<Int> weights;
    for (const auto& e : entries) {
        if (static_cast<int>(e.v.size()) != lattice.dim()) throw Error(ErrorCode::DimensionMismatch, to_string(e.v));
        if (is_zero(e.v)) throw Error(ErrorCode::ZeroVector, "mask entry");
        if (e.w <= 0) throw Error(ErrorCode::NonPositiveWeight, to_string(e.v));
        bool merged = false;
        for (std::size_t j = 0; j < vecs.size(); ++j) {
            if (!parallel(vecs[j], e.v)) continue;
            if (vecs[j] == e.v || vecs[j] == neg(e.v)) {
                if (weights[cls[j]] != e.w)
                    throw Error(vecs[j] == e.v ? ErrorCode::CollinearDuplicates : ErrorCode::AsymmetricWeights,
                                to_string(e.v));
                merged = true;
                break;
            }
            throw Error(ErrorCode::CollinearDuplicates, to_string(vecs[j]) + " and " + to_string(e.v));
        }
        if (merged) continue;
        const int c = static_cast<int>(weights.size());
        weights.push_back(e.w);
        vecs.push_back(e.v);
        cls.push_back(c);
        vecs.push_back(neg(e.v));
        cls.push_back(c);
    }
    return ChamferMask(lattice, std::move(vecs), std::move(cls), std::move(weights));
}

ChamferMask mask_from_classes(const Lattice& lattice, const std::vector<IVec>& representatives,
                              std::vector<Int> class_weights) {
    if (representatives.size() != class_weights.size())
        throw Error(ErrorCode::DimensionMismatch, "one weight per class required");
    std::vector<IVec> vecs;
    std::vector<int> cls;
    for (std::size_t c = 0; c < representatives.size(); ++c)
        for (auto& v : signed_permutations(representatives[c]))
            if (lattice.contains(v)) {
                vecs.push_back(v);
                cls.push_back(static_cast<int>(c));
            }
    return ChamferMask(lattice, std::move(vecs), std::move(cls), std::move(class_weights));
}

ChamferMask read_mask(const Lattice& lattice, std::istream& in) {
    std::vector<WeightedVector> entries;
    int lineno = 0;
    for (std::string line; std::getline(in, line);) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        line = trim(line);
        if (line.empty()) continue;
        auto colon = line.find(':');
        if (colon == std::string::npos)
            throw Error(ErrorCode::Parse, "mask line " + std::to_string(lineno) + ": expected 'v... : w'");
        std::istringstream lhs(line.substr(0, colon)), rhs(line.substr(colon + 1));
        WeightedVector e;
        for (Int x; lhs >> x;) e.v.push_back(x);
        if (!lhs.eof() || !(rhs >> e.w) || !(rhs >> std::ws).eof())
            throw Error(ErrorCode::Parse, "mask line " + std::to_string(lineno) + ": malformed");
        entries.push_back(e);
    }
    if (entries.empty()) throw Error(ErrorCode::Parse, "mask file has no entries");
    return symmetric_closure(lattice, entries);
}

ChamferMask read_mask_file(const Lattice& lattice, const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error(ErrorCode::Parse, "cannot open " + path);
    return read_mask(lattice, f);
}

Wedge make_wedge(const ChamferMask& mask, std::vector<std::size_t> idx) {
    const int n = mask.dim();
    Wedge w;
    w.idx = std::move(idx);
    std::vector<IVec> fam;
    for (auto i : w.idx) fam.push_back(mask.vector(i));
    w.delta0 = det(fam);
    w.cofactors.assign(n, IVec(n));
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i) {
            IVec e(n, 0);
            e[i] = 1;
            w.cofactors[k][i] = delta(fam, k, e);
        }
    return w;
}

std::vector<IVec> wedge_family(const ChamferMask& mask, const Wedge& w) {
    std::vector<IVec> f;
    for (auto i : w.idx) f.push_back(mask.vector(i));
    return f;
}

std::vector<Int> wedge_weights(const ChamferMask& mask, const Wedge& w) {
    std::vector<Int> ws;
    for (auto i : w.idx) ws.push_back(mask.weight(i));
    return ws;
}

namespace {

WedgeDecomposition finalize(const ChamferMask& mask, const std::vector<std::vector<std::size_t>>& raw) {
    WedgeDecomposition dec;
    const Int cov = mask.lattice().covolume();
    for (const auto& idx : raw) {
        Wedge w = make_wedge(mask, idx);
        if (std::abs(w.delta0) != cov) {
            std::string fam;
            for (auto i : idx) fam += to_string(mask.vector(i));
            throw Error(ErrorCode::NotGBasisWedge,
                        "wedge " + fam + " has |Delta0| = " + std::to_string(std::abs(w.delta0)) +
                            ", covolume is " + std::to_string(cov));
        }
        dec.wedges.push_back(std::move(w));
    }
    return dec;
}

WedgeDecomposition build_1d(const ChamferMask& mask) {
    if (mask.size() != 2) throw Error(ErrorCode::CollinearDuplicates, "1D mask must be a single symmetric pair");
    return finalize(mask, {{0}, {1}});
}

WedgeDecomposition build_2d(const ChamferMask& mask) {
    std::vector<std::size_t> order(mask.size());
    std::iota(order.begin(), order.end(), 0);
    auto half = [](const IVec& v) { return (v[1] < 0 || (v[1] == 0 && v[0] < 0)) ? 1 : 0; };
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const IVec& u = mask.vector(a);
        const IVec& v = mask.vector(b);
        if (half(u) != half(v)) return half(u) < half(v);
        return u[0] * v[1] - u[1] * v[0] > 0;
    });
    std::vector<std::vector<std::size_t>> raw;
    for (std::size_t i = 0; i < order.size(); ++i) raw.push_back({order[i], order[(i + 1) % order.size()]});
    return finalize(mask, raw);
}

// Wedges are cones over index triples/quadruples; containment tested with exact cofactors.
struct Cone {
    std::vector<std::size_t> idx;
};

IVec cone_coefficients(const ChamferMask& mask, const std::vector<std::size_t>& idx, const IVec& x, Int& d0) {
    std::vector<IVec> fam;
    for (auto i : idx) fam.push_back(mask.vector(i));
    d0 = det(fam);
    IVec c(idx.size());
    const Int s = sgn(d0);
    for (std::size_t k = 0; k < idx.size(); ++k) c[k] = s * delta(fam, static_cast<int>(k), x);
    return c;
}

void lawson_flips(const ChamferMask& mask, std::vector<std::vector<std::size_t>>& W) {
    const Int cov = mask.lattice().covolume();
    std::vector<std::array<double, 3>> P;
    for (const auto& v : mask.vectors()) {
        const double r = euclidean_norm(v, {});
        P.push_back({v[0] / r, v[1] / r, v[2] / r});
    }
    auto sub = [](const std::array<double, 3>& a, const std::array<double, 3>& b) {
        return std::array<double, 3>{a[0] - b[0], a[1] - b[1], a[2] - b[2]};
    };
    auto dotd = [](const std::array<double, 3>& a, const std::array<double, 3>& b) {
        return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    };
    auto absdet = [&](std::size_t a, std::size_t b, std::size_t c) {
        return std::abs(det({mask.vector(a), mask.vector(b), mask.vector(c)}));
    };
    for (int iter = 0; iter < 100000; ++iter) {
        std::vector<std::pair<std::size_t, std::size_t>> order;
        std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> edges;
        for (std::size_t wi = 0; wi < W.size(); ++wi)
            for (int p = 0; p < 3; ++p)
                for (int q = p + 1; q < 3; ++q) {
                    auto e = std::minmax(W[wi][p], W[wi][q]);
                    auto& lst = edges[e];
                    if (lst.empty()) order.push_back(e);
                    lst.push_back(wi);
                }
        bool flipped = false;
        for (const auto& e : order) {
            const auto& ws = edges[e];
            if (ws.size() != 2) throw Error(ErrorCode::NotGBasisWedge, "non-manifold wedge complex");
            const auto [a, b] = e;
            auto other = [&](const std::vector<std::size_t>& w) {
                for (auto x : w)
                    if (x != a && x != b) return x;
                return w[0];
            };
            const std::size_t c = other(W[ws[0]]), d = other(W[ws[1]]);
            const auto u = sub(P[b], P[a]), v = sub(P[c], P[a]);
            std::array<double, 3> nrm{u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]};
            if (dotd(nrm, P[a]) < 0) nrm = {-nrm[0], -nrm[1], -nrm[2]};
            const double h = dotd(nrm, sub(P[d], P[a]));
            if (h > 1e-9 && absdet(c, d, a) == cov && absdet(c, d, b) == cov) {
                W[ws[0]] = {c, d, a};
                W[ws[1]] = {c, d, b};
                flipped = true;
                break;
            }
        }
        if (!flipped) return;
    }
    throw Error(ErrorCode::NotGBasisWedge, "edge flipping did not terminate");
}

WedgeDecomposition build_nd(const ChamferMask& mask) {
    const std::size_t n = static_cast<std::size_t>(mask.dim());
    const Int cov = mask.lattice().covolume();
    std::vector<std::size_t> seed;
    for_each_combination(mask.size(), n, [&](const std::vector<std::size_t>& c) {
        std::vector<IVec> fam;
        for (auto i : c) fam.push_back(mask.vector(i));
        if (std::abs(det(fam)) == cov) {
            seed = c;
            return true;
        }
        return false;
    });
    if (seed.empty()) throw Error(ErrorCode::NotGBasisWedge, "mask contains no lattice basis");

    std::vector<std::vector<std::size_t>> W;
    std::vector<bool> inserted(mask.size(), false);
    for (unsigned bits = 0; bits < (1u << n); ++bits) {
        std::vector<std::size_t> w(n);
        for (std::size_t k = 0; k < n; ++k) {
            const bool flip = (bits >> (n - 1 - k)) & 1u;
            w[k] = flip ? mask.negation_of(seed[k]) : seed[k];
            inserted[w[k]] = true;
        }
        W.push_back(w);
    }

    for (std::size_t i = 0; i < mask.size(); ++i) {
        if (inserted[i]) continue;
        const IVec& x = mask.vector(i);
        std::vector<std::vector<std::size_t>> keep, fresh;
        bool first = true;
        for (const auto& w : W) {
            Int d0 = 0;
            const IVec c = cone_coefficients(mask, w, x, d0);
            if (!std::all_of(c.begin(), c.end(), [](Int a) { return a >= 0; })) {
                keep.push_back(w);
                continue;
            }
            if (first && std::count_if(c.begin(), c.end(), [](Int a) { return a > 0; }) < 2)
                throw Error(ErrorCode::CollinearDuplicates, to_string(x));
            first = false;
            for (std::size_t k = 0; k < n; ++k)
                if (c[k] > 0) {
                    auto nw = w;
                    nw[k] = i;
                    fresh.push_back(nw);
                }
        }
        if (first) throw Error(ErrorCode::NoWedgeFound, "no cone contains " + to_string(x));
        W = std::move(keep);
        W.insert(W.end(), fresh.begin(), fresh.end());
        inserted[i] = true;
    }
    if (n == 3) lawson_flips(mask, W);
    return finalize(mask, W);
}

}  // namespace

WedgeDecomposition build_wedges(const ChamferMask& mask) {
    switch (mask.dim()) {
        case 1: return build_1d(mask);
        case 2: return build_2d(mask);
        default: return build_nd(mask);
    }
}

std::pair<std::vector<IVec>, std::vector<IVec>> farey_split(const Lattice& lattice, const std::vector<IVec>& family,
                                                           int i, int j) {
    const int n = static_cast<int>(family.size());
    if (i < 0 || j < 0 || i >= n || j >= n || i == j)
        throw Error(ErrorCode::IndexOutOfRange, "farey_split edge (" + std::to_string(i) + "," + std::to_string(j) + ")");
    if (!is_basis(lattice, family)) throw Error(ErrorCode::NotABasis, "farey_split parent");
    const IVec v = add(family[i], family[j]);
    auto a = family, b = family;
    a[i] = v;
    b[j] = v;
    return {a, b};
}

Rational make_rational(Int num, Int den) {
    if (den == 0) throw Error(ErrorCode::NonPositiveWeight, "zero denominator");
    if (den < 0) num = -num, den = -den;
    const Int g = std::gcd(num < 0 ? -num : num, den);
    return {num / (g ? g : 1), den / (g ? g : 1)};
}

NormalizedPolytope normalized_polytope(const ChamferMask& mask, const WedgeDecomposition& dec) {
    NormalizedPolytope p;
    for (std::size_t i = 0; i < mask.size(); ++i) {
        std::vector<Rational> v;
        for (Int x : mask.vector(i)) v.push_back(make_rational(x, mask.weight(i)));
        p.vertices.push_back(std::move(v));
    }
    for (const auto& w : dec.wedges) p.faces.push_back(w.idx);
    return p;
}

namespace {

// s * sum_k Delta^k(v) w_k, compared against |Delta0| * w(v): the face of W evaluated at v.
__int128 face_value(const ChamferMask& mask, const Wedge& w, const IVec& v) {
    __int128 L = 0;
    for (std::size_t k = 0; k < w.idx.size(); ++k)
        L += static_cast<__int128>(w.delta(static_cast<int>(k), v)) * mask.weight(w.idx[k]);
    return sgn(w.delta0) * L;
}

}  // namespace

bool is_polytope_convex(const ChamferMask& mask, const WedgeDecomposition& dec) {
    for (const auto& w : dec.wedges) {
        const __int128 d = std::abs(w.delta0);
        for (std::size_t j = 0; j < mask.size(); ++j)
            if (face_value(mask, w, mask.vector(j)) > d * mask.weight(j)) return false;
    }
    return true;
}

ConvexityReport check_convexity(const ChamferMask& mask, const WedgeDecomposition& dec) {
    ConvexityReport r;
    for (std::size_t wi = 0; wi < dec.wedges.size(); ++wi) {
        const auto& w = dec.wedges[wi];
        const __int128 d = std::abs(w.delta0);
        for (std::size_t j = 0; j < mask.size(); ++j)
            if (face_value(mask, w, mask.vector(j)) > d * mask.weight(j)) {
                r.nonconvex_wedges.push_back(wi);
                break;
            }
    }
    r.convex = r.nonconvex_wedges.empty();

    // Gauge of each vertex over the remaining vectors: cheapest non-negative combination
    // of n independent mask vectors.
    const std::size_t n = static_cast<std::size_t>(mask.dim());
    for (std::size_t j = 0; j < mask.size(); ++j) {
        const IVec& x = mask.vector(j);
        bool inside = false, on = false;
        std::vector<std::size_t> others;
        for (std::size_t i = 0; i < mask.size(); ++i)
            if (i != j) others.push_back(i);
        for_each_combination(others.size(), n, [&](const std::vector<std::size_t>& c) {
            std::vector<IVec> fam;
            for (auto k : c) fam.push_back(mask.vector(others[k]));
            const Int d0 = det(fam);
            if (d0 == 0) return false;
            __int128 cost = 0;
            for (std::size_t k = 0; k < n; ++k) {
                const Int a = sgn(d0) * delta(fam, static_cast<int>(k), x);
                if (a < 0) return false;
                cost += static_cast<__int128>(a) * mask.weight(others[c[k]]);
            }
            const __int128 ref = static_cast<__int128>(std::abs(d0)) * mask.weight(j);
            if (cost < ref) inside = true;
            if (cost == ref) on = true;
            return inside;
        });
        if (inside)
            r.offenders.push_back(j);
        else if (on)
            r.redundant.push_back(j);
    }
    if (!r.offenders.empty()) r.convex = false;
    return r;
}

WedgeLocation locate_wedge(const ChamferMask& mask, const WedgeDecomposition& dec, const IVec& p) {
    if (!mask.lattice().contains(p)) throw Error(ErrorCode::NotALatticePoint, to_string(p));
    for (std::size_t wi = 0; wi < dec.wedges.size(); ++wi) {
        const auto& w = dec.wedges[wi];
        const Int s = sgn(w.delta0);
        IVec a(w.idx.size());
        bool ok = true;
        for (std::size_t k = 0; k < w.idx.size() && ok; ++k) {
            a[k] = s * w.delta(static_cast<int>(k), p);
            ok = a[k] >= 0;
        }
        if (!ok) continue;
        for (auto& x : a) x /= std::abs(w.delta0);
        return {wi, a};
    }
    throw Error(ErrorCode::NoWedgeFound, to_string(p));
}

Int closed_form_distance(const ChamferMask& mask, const WedgeDecomposition& dec, const IVec& p) {
    return ClosedFormDistance(mask, dec)(p);
}

ClosedFormDistance::ClosedFormDistance(const ChamferMask& mask, const WedgeDecomposition& dec)
    : mask_(&mask), dec_(&dec) {
    if (!is_polytope_convex(mask, dec))
        throw Error(ErrorCode::NotConvex, "closed form requires a convex normalized polytope");
}

Int ClosedFormDistance::operator()(const IVec& p) const {
    const auto loc = locate_wedge(*mask_, *dec_, p);
    const auto& w = dec_->wedges[loc.wedge];
    Int d = 0;
    for (std::size_t k = 0; k < w.idx.size(); ++k) d += loc.alpha[k] * mask_->weight(w.idx[k]);
    return d;
}

Int ClosedFormDistance::in_wedge(std::size_t wi, const IVec& p) const {
    const auto& w = dec_->wedges.at(wi);
    Int L = 0;
    for (std::size_t k = 0; k < w.idx.size(); ++k) L += w.delta(static_cast<int>(k), p) * mask_->weight(w.idx[k]);
    return L / w.delta0;
}

}  // namespace lc
