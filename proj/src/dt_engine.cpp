#include "lattice_chamfer/dt_engine.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <set>

#include <omp.h>

#include "lattice_chamfer/parallel.hpp"

namespace lc {

Grid::Grid(Lattice lattice, std::vector<Int> dims) : lattice_(std::move(lattice)), dims_(std::move(dims)) {
    if (static_cast<int>(dims_.size()) != lattice_.dim())
        throw Error(ErrorCode::DimensionMismatch, "dims must have one entry per axis");
    slots_ = 1;
    for (Int d : dims_) {
        if (d <= 0) throw Error(ErrorCode::Parse, "dims must be positive");
        strides_.push_back(slots_);
        slots_ *= static_cast<std::size_t>(d);
    }
    member_.resize(slots_);
    IVec p(dims_.size());
    for (std::size_t i = 0; i < slots_; ++i) {
        coords(i, p.data());
        member_[i] = lattice_.contains(p) ? 1 : 0;
        members_ += member_[i];
    }
}

bool Grid::in_box(const IVec& p) const {
    for (std::size_t i = 0; i < dims_.size(); ++i)
        if (p[i] < 0 || p[i] >= dims_[i]) return false;
    return true;
}

std::size_t Grid::index(const IVec& p) const {
    if (p.size() != dims_.size()) throw Error(ErrorCode::DimensionMismatch, to_string(p));
    if (!in_box(p)) throw Error(ErrorCode::IndexOutOfRange, to_string(p) + " outside the image box");
    std::size_t idx = 0;
    for (std::size_t i = 0; i < dims_.size(); ++i) idx += static_cast<std::size_t>(p[i]) * strides_[i];
    return idx;
}

void Grid::coords(std::size_t idx, Int* out) const {
    for (std::size_t i = 0; i < dims_.size(); ++i) {
        out[i] = static_cast<Int>(idx % static_cast<std::size_t>(dims_[i]));
        idx /= static_cast<std::size_t>(dims_[i]);
    }
}

IVec Grid::coords(std::size_t idx) const {
    IVec p(dims_.size());
    coords(idx, p.data());
    return p;
}

GridImage::GridImage(Lattice lattice, std::vector<Int> dims, std::uint8_t fill)
    : grid_(std::move(lattice), std::move(dims)), cells_(grid_.slots(), kVoid) {
    for (std::size_t i = 0; i < cells_.size(); ++i)
        if (grid_.member(i)) cells_[i] = fill;
}

void GridImage::set(std::size_t idx, std::uint8_t v) {
    if (v > kVoid) throw Error(ErrorCode::Parse, "cell value must be 0, 1 or 2");
    if (!grid_.member(idx)) throw Error(ErrorCode::NotALatticePoint, to_string(grid_.coords(idx)));
    cells_[idx] = v;
}

std::size_t GridImage::count(std::uint8_t v) const {
    std::size_t c = 0;
    for (std::size_t i = 0; i < cells_.size(); ++i) c += grid_.member(i) && cells_[i] == v;
    return c;
}

IVec choose_hyperplane(const std::vector<IVec>& vectors) {
    if (vectors.empty()) throw Error(ErrorCode::DimensionMismatch, "empty mask");
    const std::size_t n = vectors.front().size();
    Int bound = 1;
    for (const auto& v : vectors)
        for (Int x : v) bound = std::max(bound, 2 * std::abs(x) + 1);
    for (Int N = 1;; ++N) {
        IVec a(n);
        Int p = 1;
        for (std::size_t i = n; i-- > 0;) {
            a[i] = p;
            p *= N;
        }
        if (std::all_of(vectors.begin(), vectors.end(), [&](const IVec& v) { return dot(a, v) != 0; })) return a;
        if (N > bound) throw Error(ErrorCode::ZeroVector, "mask contains the zero vector");
    }
}

HalfMasks split_mask(const ChamferMask& mask, const IVec& a) {
    HalfMasks h;
    for (std::size_t i = 0; i < mask.size(); ++i) {
        const Int s = dot(a, mask.vector(i));
        if (s == 0) throw Error(ErrorCode::DimensionMismatch, "mask vector " + to_string(mask.vector(i)) + " lies on the hyperplane");
        (s < 0 ? h.first : h.second).push_back(i);
    }
    return h;
}

std::vector<std::size_t> generate_scan_order(const GridImage& image, const IVec& a) {
    const Grid& g = image.grid();
    const std::size_t n = g.dims().size();
    Int smin = 0, smax = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const Int lo = 0, hi = a[i] * (g.dims()[i] - 1);
        smin += std::min(lo, hi);
        smax += std::max(lo, hi);
    }
    std::vector<std::size_t> order;
    order.reserve(g.member_count());
    IVec p(n);
    const auto range = static_cast<std::size_t>(smax - smin + 1);
    if (range <= 4 * g.slots() + 16) {
        // Counting sort by sigma; filling in raster order keeps ties lexicographic.
        std::vector<std::size_t> count(range + 1, 0);
        std::vector<Int> sigma(g.slots());
        for (std::size_t i = 0; i < g.slots(); ++i) {
            if (!image.in_support(i)) continue;
            g.coords(i, p.data());
            sigma[i] = dot(a, p) - smin;
            ++count[static_cast<std::size_t>(sigma[i]) + 1];
        }
        for (std::size_t s = 1; s <= range; ++s) count[s] += count[s - 1];
        order.resize(count[range]);
        for (std::size_t i = 0; i < g.slots(); ++i)
            if (image.in_support(i)) order[count[static_cast<std::size_t>(sigma[i])]++] = i;
    } else {
        std::vector<std::pair<Int, std::size_t>> keyed;
        for (std::size_t i = 0; i < g.slots(); ++i) {
            if (!image.in_support(i)) continue;
            g.coords(i, p.data());
            keyed.emplace_back(dot(a, p), i);
        }
        std::sort(keyed.begin(), keyed.end());
        for (auto& k : keyed) order.push_back(k.second);
    }
    return order;
}

bool supports_order(const GridImage& image, const std::vector<IVec>& vectors, const std::vector<std::size_t>& order,
                    bool reversed) {
    const Grid& g = image.grid();
    std::vector<std::size_t> rank(g.slots(), 0);
    for (std::size_t r = 0; r < order.size(); ++r) rank[order[r]] = r;
    for (std::size_t r = 0; r < order.size(); ++r) {
        const IVec p = g.coords(order[r]);
        for (const auto& v : vectors) {
            const IVec q = add(p, v);
            if (!g.in_box(q)) continue;
            const std::size_t qi = g.index(q);
            if (!image.in_support(qi)) continue;
            if (reversed ? rank[qi] <= r : rank[qi] >= r) return false;
        }
    }
    return true;
}

ScanPlan make_scan_plan(const ChamferMask& mask, const GridImage& image) {
    ScanPlan plan;
    plan.a = choose_hyperplane(mask.vectors());
    plan.halves = split_mask(mask, plan.a);
    plan.order = generate_scan_order(image, plan.a);
    return plan;
}

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::BorderOk: return "BorderOk";
        case Verdict::WedgePreserving: return "WedgePreserving";
        case Verdict::Invalid: return "Invalid";
    }
    return "?";
}

bool is_wedge_preserving_normal(const ChamferMask& mask, const WedgeDecomposition& dec, const IVec& a) {
    for (const auto& w : dec.wedges) {
        bool pos = false, negs = false;
        for (auto i : w.idx) {
            const Int s = dot(a, mask.vector(i));
            pos = pos || s > 0;
            negs = negs || s < 0;
        }
        if (pos && negs) return false;
    }
    return true;
}

namespace {

constexpr std::size_t kReportCap = 8;

IVec primitive(IVec a) {
    Int g = 0;
    for (Int x : a) g = std::gcd(g, std::abs(x));
    if (g > 1)
        for (auto& x : a) x /= g;
    return a;
}

// Normals orthogonal to (n-1)-subsets of mask vectors, plus the axis normals.
std::vector<IVec> candidate_normals(const ChamferMask& mask) {
    const int n = mask.dim();
    std::set<IVec> out;
    for (int i = 0; i < n; ++i) {
        IVec e(n, 0);
        e[i] = 1;
        out.insert(e);
        out.insert(neg(e));
    }
    std::vector<std::size_t> c(static_cast<std::size_t>(n - 1));
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t start, std::size_t depth) {
        if (depth == c.size()) {
            std::vector<IVec> rows;
            for (auto i : c) rows.push_back(mask.vector(i));
            rows.push_back(IVec(n, 0));
            IVec a(n);
            for (int k = 0; k < n; ++k) {
                rows.back().assign(n, 0);
                rows.back()[k] = 1;
                a[k] = det(rows);
            }
            if (std::any_of(a.begin(), a.end(), [](Int x) { return x != 0; })) {
                a = primitive(a);
                out.insert(a);
                out.insert(neg(a));
            }
            return;
        }
        for (std::size_t i = start; i < mask.size(); ++i) {
            c[depth] = i;
            rec(i + 1, depth + 1);
        }
    };
    if (n >= 2) rec(0, 0);
    return {out.begin(), out.end()};
}

}  // namespace

ValidationVerdict validate_image(const ChamferMask& mask, const WedgeDecomposition& dec, const GridImage& image) {
    const Grid& g = image.grid();
    ValidationVerdict v{Verdict::BorderOk, "", {}, {}};
    std::size_t bad = 0;
    for (std::size_t i = 0; i < g.slots(); ++i) {
        if (!image.in_support(i) || image.at(i) != kForeground) continue;
        const IVec p = g.coords(i);
        for (const auto& d : mask.vectors()) {
            const IVec q = add(p, d);
            if (!g.in_box(q) || !image.in_support(g.index(q))) {
                if (v.foreground_border.size() < kReportCap) v.foreground_border.push_back(p);
                ++bad;
                break;
            }
        }
    }
    if (bad == 0) return v;

    // Wedge-preserving: S is cut out by tight wedge-preserving half-spaces a.x <= sigma_a.
    std::vector<std::pair<IVec, Int>> halfspaces;
    for (const auto& a : candidate_normals(mask)) {
        if (!is_wedge_preserving_normal(mask, dec, a)) continue;
        Int sigma = std::numeric_limits<Int>::min();
        for (std::size_t i = 0; i < g.slots(); ++i)
            if (image.in_support(i)) sigma = std::max(sigma, dot(a, g.coords(i)));
        halfspaces.emplace_back(a, sigma);
    }
    auto cut = [&](const IVec& p) {
        return std::any_of(halfspaces.begin(), halfspaces.end(),
                           [&](const auto& h) { return dot(h.first, p) > h.second; });
    };
    std::size_t leaks = 0;
    for (std::size_t i = 0; i < g.slots(); ++i) {
        if (!g.member(i)) continue;
        const IVec p = g.coords(i);
        if (!image.in_support(i)) {
            if (!cut(p)) {
                if (v.leaking_steps.size() < kReportCap) v.leaking_steps.push_back(p);
                ++leaks;
            }
            continue;
        }
        for (const auto& d : mask.vectors()) {
            const IVec q = add(p, d);
            if (!g.in_box(q) && !cut(q)) {
                if (v.leaking_steps.size() < kReportCap &&
                    std::find(v.leaking_steps.begin(), v.leaking_steps.end(), q) == v.leaking_steps.end())
                    v.leaking_steps.push_back(q);
                ++leaks;
            }
        }
    }
    if (leaks == 0) {
        v.kind = Verdict::WedgePreserving;
        return v;
    }
    v.kind = Verdict::Invalid;
    v.reason = std::to_string(bad) + " foreground border point(s) and the support is not an intersection of "
               "wedge-preserving half-spaces (" + std::to_string(leaks) + " uncovered point(s))";
    return v;
}

DistanceMap initial_map(const GridImage& image) {
    DistanceMap m{image.grid(), std::vector<std::uint32_t>(image.grid().slots(), kOutside), 0};
    for (std::size_t i = 0; i < m.values.size(); ++i)
        if (image.in_support(i)) m.values[i] = image.at(i) == kBackground ? 0u : kInfinity;
    return m;
}

namespace {

struct Step {
    IVec v;
    std::int64_t offset;
    std::uint32_t w;
};

std::vector<Step> steps(const Grid& g, const ChamferMask& mask, const std::vector<std::size_t>& which) {
    std::vector<Step> s;
    for (auto i : which) {
        const IVec& v = mask.vector(i);
        std::int64_t off = 0, stride = 1;
        for (std::size_t k = 0; k < v.size(); ++k) {
            off += v[k] * stride;
            stride *= g.dims()[k];
        }
        s.push_back({v, off, static_cast<std::uint32_t>(mask.weight(i))});
    }
    return s;
}

std::vector<std::size_t> all_indices(const ChamferMask& mask) {
    std::vector<std::size_t> a(mask.size());
    std::iota(a.begin(), a.end(), 0);
    return a;
}

void check_range(const GridImage& image, const ChamferMask& mask) {
    // Any finite distance is at most max weight times the number of support points.
    const long double bound = static_cast<long double>(mask.max_weight()) * image.grid().member_count();
    if (bound >= kOutside) throw Error(ErrorCode::Overflow, "distances may exceed the 32-bit range");
    if (image.lattice().dim() != mask.dim()) throw Error(ErrorCode::DimensionMismatch, "image and mask dimensions differ");
}

inline bool neighbor(const Grid& g, const Int* p, const Step& s, std::size_t idx, std::size_t& q) {
    const auto& d = g.dims();
    for (std::size_t k = 0; k < s.v.size(); ++k) {
        const Int c = p[k] + s.v[k];
        if (c < 0 || c >= d[k]) return false;
    }
    q = static_cast<std::size_t>(static_cast<std::int64_t>(idx) + s.offset);
    return true;
}

void scan(const Grid& g, std::vector<std::uint32_t>& f, const std::vector<Step>& half,
          const std::vector<std::size_t>& order, bool reversed) {
    Int p[4];
    const std::size_t n = order.size();
    for (std::size_t t = 0; t < n; ++t) {
        const std::size_t idx = order[reversed ? n - 1 - t : t];
        g.coords(idx, p);
        std::uint32_t best = f[idx];
        for (const auto& s : half) {
            std::size_t q;
            if (!neighbor(g, p, s, idx, q)) continue;
            const std::uint32_t fq = f[q];
            if (fq >= kOutside) continue;
            best = std::min(best, fq + s.w);
        }
        f[idx] = best;
    }
}

}  // namespace

DistanceMap chamfer_two_scan(const GridImage& image, const ChamferMask& mask, const ScanPlan& plan, ScanStats* stats) {
    check_range(image, mask);
    const Grid& g = image.grid();
    DistanceMap m = initial_map(image);
    const auto c1 = steps(g, mask, plan.halves.first);
    const auto c2 = steps(g, mask, plan.halves.second);
    scan(g, m.values, c1, plan.order, false);
    scan(g, m.values, c2, plan.order, true);
    if (stats) {
        stats->visits = 2 * plan.order.size();
        stats->neighbor_evaluations = plan.order.size() * (c1.size() + c2.size());
    }
    return m;
}

DistanceMap compute_distance_map(const GridImage& image, const ChamferMask& mask, const WedgeDecomposition& dec,
                                 bool unsafe, ValidationVerdict* verdict) {
    const auto v = validate_image(mask, dec, image);
    if (verdict) *verdict = v;
    if (v.kind == Verdict::Invalid && !unsafe) throw Error(ErrorCode::InvalidImage, v.reason);
    return chamfer_two_scan(image, mask, make_scan_plan(mask, image));
}

DistanceMap dijkstra_oracle(const GridImage& image, const ChamferMask& mask) {
    check_range(image, mask);
    const Grid& g = image.grid();
    DistanceMap m = initial_map(image);
    const auto all = steps(g, mask, all_indices(mask));
    const std::size_t W = static_cast<std::size_t>(mask.max_weight()) + 1;
    std::vector<std::vector<std::size_t>> buckets(W);
    std::size_t pending = 0;
    for (std::size_t i = 0; i < m.values.size(); ++i)
        if (m.values[i] == 0) {
            buckets[0].push_back(i);
            ++pending;
        }
    Int p[4];
    for (std::uint64_t cur = 0; pending > 0; ++cur) {
        auto& b = buckets[cur % W];
        while (!b.empty()) {
            const std::size_t idx = b.back();
            b.pop_back();
            --pending;
            if (m.values[idx] != cur) continue;
            g.coords(idx, p);
            for (const auto& s : all) {
                std::size_t q;
                if (!neighbor(g, p, s, idx, q)) continue;
                if (m.values[q] == kOutside) continue;
                const std::uint64_t nd = cur + s.w;
                if (nd < m.values[q]) {
                    m.values[q] = static_cast<std::uint32_t>(nd);
                    buckets[nd % W].push_back(q);
                    ++pending;
                }
            }
        }
    }
    return m;
}

DistanceMap parallel_iterative_oracle(const GridImage& image, const ChamferMask& mask, int threads, int* sweeps) {
    check_range(image, mask);
    const Grid& g = image.grid();
    DistanceMap m = initial_map(image);
    const auto all = steps(g, mask, all_indices(mask));
    std::vector<std::size_t> support;
    for (std::size_t i = 0; i < m.values.size(); ++i)
        if (m.values[i] != kOutside) support.push_back(i);
    std::vector<std::uint32_t> next = m.values;
    const int nt = resolve_threads(threads);
    const std::ptrdiff_t count = static_cast<std::ptrdiff_t>(support.size());
    int n = 0;
    bool changed = true;
    while (changed) {
        changed = false;
        ++n;
        const auto& cur = m.values;
#pragma omp parallel for schedule(static) num_threads(nt) reduction(|| : changed)
        for (std::ptrdiff_t t = 0; t < count; ++t) {
            const std::size_t idx = support[static_cast<std::size_t>(t)];
            Int p[4];
            g.coords(idx, p);
            std::uint32_t best = cur[idx];
            for (const auto& s : all) {
                std::size_t q;
                if (!neighbor(g, p, s, idx, q)) continue;
                const std::uint32_t fq = cur[q];
                if (fq >= kOutside) continue;
                best = std::min(best, fq + s.w);
            }
            next[idx] = best;
            if (best != cur[idx]) changed = true;
        }
        std::swap(m.values, next);
    }
    if (sweeps) *sweeps = n;
    return m;
}

Ball generate_ball(const ChamferMask& mask, Int radius) {
    if (radius < 0) throw Error(ErrorCode::NegativeRadius, std::to_string(radius));
    const int n = mask.dim();
    // Every prefix of a shortest path to a ball point stays within this Chebyshev radius.
    double reach = 0;
    Int vmax = 0;
    for (std::size_t i = 0; i < mask.size(); ++i) {
        Int linf = 0;
        for (Int x : mask.vector(i)) linf = std::max(linf, std::abs(x));
        vmax = std::max(vmax, linf);
        reach = std::max(reach, double(linf) / double(mask.weight(i)));
    }
    Int H = static_cast<Int>(std::ceil(double(radius) * reach)) + vmax;
    while (!mask.lattice().contains(IVec(n, H))) ++H;
    const IVec center(n, H);
    GridImage img(mask.lattice(), std::vector<Int>(n, 2 * H + 1), kForeground);
    img.set(center, kBackground);
    Ball b{center, chamfer_two_scan(img, mask, make_scan_plan(mask, img)), {}};
    const Grid& g = b.map.grid;
    for (std::size_t i = 0; i < g.slots(); ++i)
        if (b.map.values[i] <= static_cast<std::uint64_t>(radius)) {
            IVec p = g.coords(i);
            for (int k = 0; k < n; ++k) p[k] -= H;
            b.points.push_back(std::move(p));
        }
    return b;
}

}  // namespace lc
