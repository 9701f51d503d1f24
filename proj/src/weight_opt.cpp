#include "lattice_chamfer/weight_opt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include <Eigen/Dense>
#include <omp.h>

#include "lattice_chamfer/parallel.hpp"

namespace lc {

namespace {

using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 4, 4>;
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 4, 1>;

constexpr double kConeTol = 1e-12;

struct Face {
    Mat A;  // unit rays (columns) of the face
    Mat P;  // (A^T A)^-1 A^T
};

struct WedgeData {
    std::vector<std::size_t> idx;
    Mat Minv;  // c = Minv * w solves c . v_k = w_k
    Vec inv_spacing;
    std::vector<Face> faces;
};

WedgeData make_wedge_data(const std::vector<IVec>& family, const std::vector<double>& spacing) {
    const int n = static_cast<int>(family.size());
    WedgeData wd;
    Mat M(n, n), U(n, n);
    wd.inv_spacing.resize(n);
    for (int i = 0; i < n; ++i) wd.inv_spacing(i) = 1.0 / spacing[i];
    for (int k = 0; k < n; ++k) {
        const double r = euclidean_norm(family[k], spacing);
        for (int i = 0; i < n; ++i) {
            M(k, i) = double(family[k][i]);
            U(i, k) = spacing[i] * double(family[k][i]) / r;
        }
    }
    if (std::abs(M.determinant()) < 1e-12) throw Error(ErrorCode::NotABasis, "degenerate wedge");
    wd.Minv = M.inverse();
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        std::vector<int> cols;
        for (int k = 0; k < n; ++k)
            if (mask & (1u << k)) cols.push_back(k);
        Face f;
        f.A.resize(n, static_cast<int>(cols.size()));
        for (std::size_t j = 0; j < cols.size(); ++j) f.A.col(static_cast<int>(j)) = U.col(cols[j]);
        const Mat G = f.A.transpose() * f.A;
        f.P = G.inverse() * f.A.transpose();
        wd.faces.push_back(std::move(f));
    }
    return wd;
}

// max over unit u in cone of g.u: the largest projection of g onto a face span that lands inside the face.
double cone_max(const WedgeData& wd, const Vec& g, Vec* direction) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& f : wd.faces) {
        const Vec c = f.P * g;
        if ((c.array() < -kConeTol).any()) continue;
        const Vec p = f.A * c;
        const double v = p.norm();
        if (v > best) {
            best = v;
            if (direction) *direction = p / v;
        }
    }
    return best;
}

Vec gradient(const WedgeData& wd, const Vec& w) { return (wd.Minv * w).cwiseProduct(wd.inv_spacing); }

}  // namespace

double vertex_error(double w, const IVec& v, const std::vector<double>& spacing, const ErrorModel& model) {
    const double r = euclidean_norm(v, spacing);
    if (model.kind == ErrorKind::Relative) return w / r - 1.0;
    if (model.T <= 0) return w - r;
    double t = 0;
    if (model.surface == ErrorSurface::Sphere) {
        t = model.T / r;
    } else {
        if (model.axis < 0 || model.axis >= static_cast<int>(v.size()))
            throw Error(ErrorCode::IndexOutOfRange, "hyperplane axis");
        const double s = (spacing.empty() ? 1.0 : spacing[model.axis]) * double(v[model.axis]);
        if (s <= 0) throw Error(ErrorCode::NoWedgeFound, "direction does not reach the hyperplane");
        t = model.T / s;
    }
    return t * (w - r);
}

InteriorMax wedge_interior_max(const std::vector<IVec>& family, const std::vector<double>& weights,
                               const std::vector<double>& spacing) {
    const int n = static_cast<int>(family.size());
    if (static_cast<int>(weights.size()) != n) throw Error(ErrorCode::DimensionMismatch, "one weight per ray");
    const std::vector<double> s = spacing.empty() ? std::vector<double>(n, 1.0) : spacing;
    const WedgeData wd = make_wedge_data(family, s);
    Vec w(n);
    for (int k = 0; k < n; ++k) w(k) = weights[k];
    Vec dir;
    const double r = cone_max(wd, gradient(wd, w), &dir);
    return {std::vector<double>(dir.data(), dir.data() + dir.size()), r};
}

double optimal_scale_factor(double rho_min, double rho_max) {
    if (!(rho_min > 0) || rho_max < rho_min) throw Error(ErrorCode::NonPositiveWeight, "need 0 < rho_min <= rho_max");
    return 2.0 / (rho_max + rho_min);
}

struct ErrorFunctional::Impl {
    const ChamferMask* geometry;
    std::vector<WedgeData> wedges;
    std::vector<double> norms;
    std::vector<double> cmin, cmax;
    std::vector<std::vector<Int>> rows;  // convex iff rows . W <= 0 for every row
    std::vector<const Wedge*> raw;
};

ErrorFunctional::ErrorFunctional(const ChamferMask& geometry, const WedgeDecomposition& dec)
    : impl_(std::make_unique<Impl>()) {
    auto& I = *impl_;
    I.geometry = &geometry;
    const auto& sp = geometry.lattice().spacing();
    const int k = geometry.num_classes();
    I.cmin.assign(k, std::numeric_limits<double>::infinity());
    I.cmax.assign(k, 0.0);
    for (std::size_t i = 0; i < geometry.size(); ++i) {
        const double r = euclidean_norm(geometry.vector(i), sp);
        I.norms.push_back(r);
        const int c = geometry.cls(i);
        I.cmin[c] = std::min(I.cmin[c], r);
        I.cmax[c] = std::max(I.cmax[c], r);
    }
    std::set<std::vector<Int>> rows;
    for (const auto& w : dec.wedges) {
        auto wd = make_wedge_data(wedge_family(geometry, w), sp);
        wd.idx = w.idx;
        I.wedges.push_back(std::move(wd));
        I.raw.push_back(&w);
        const Int s = w.delta0 > 0 ? 1 : -1;
        for (std::size_t j = 0; j < geometry.size(); ++j) {
            if (std::find(w.idx.begin(), w.idx.end(), j) != w.idx.end()) continue;
            std::vector<Int> row(k, 0);
            for (std::size_t m = 0; m < w.idx.size(); ++m)
                row[geometry.cls(w.idx[m])] += s * w.delta(static_cast<int>(m), geometry.vector(j));
            row[geometry.cls(j)] -= std::abs(w.delta0);
            if (std::any_of(row.begin(), row.end(), [](Int a) { return a > 0; })) rows.insert(row);
        }
    }
    I.rows.assign(rows.begin(), rows.end());
}

ErrorFunctional::~ErrorFunctional() = default;
ErrorFunctional::ErrorFunctional(ErrorFunctional&&) noexcept = default;

int ErrorFunctional::num_classes() const { return impl_->geometry->num_classes(); }
double ErrorFunctional::min_norm(int c) const { return impl_->cmin.at(c); }
double ErrorFunctional::max_norm(int c) const { return impl_->cmax.at(c); }
const ChamferMask& ErrorFunctional::geometry() const { return *impl_->geometry; }

ErrorExtrema ErrorFunctional::evaluate_vectors(const std::vector<double>& vw) const {
    const auto& I = *impl_;
    if (vw.size() != I.norms.size()) throw Error(ErrorCode::DimensionMismatch, "one weight per mask vector");
    double rmin = std::numeric_limits<double>::infinity(), rmax = 0;
    for (std::size_t i = 0; i < vw.size(); ++i) {
        if (!(vw[i] > 0)) throw Error(ErrorCode::NonPositiveWeight, "weights must be positive");
        rmin = std::min(rmin, vw[i] / I.norms[i]);
    }
    for (const auto& wd : I.wedges) {
        const int n = static_cast<int>(wd.idx.size());
        Vec w(n);
        for (int m = 0; m < n; ++m) w(m) = vw[wd.idx[m]];
        rmax = std::max(rmax, cone_max(wd, gradient(wd, w), nullptr));
    }
    return {rmin, rmax, (rmax - rmin) / (rmax + rmin)};
}

ErrorExtrema ErrorFunctional::evaluate(const std::vector<double>& cw) const {
    const auto& g = *impl_->geometry;
    if (static_cast<int>(cw.size()) != g.num_classes())
        throw Error(ErrorCode::DimensionMismatch, "expected " + std::to_string(g.num_classes()) + " class weights");
    std::vector<double> vw(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) vw[i] = cw[g.cls(i)];
    return evaluate_vectors(vw);
}

bool ErrorFunctional::convex(const std::vector<Int>& cw) const {
    for (const auto& row : impl_->rows) {
        Int s = 0;
        for (std::size_t c = 0; c < row.size(); ++c) s += row[c] * cw[c];
        if (s > 0) return false;
    }
    return true;
}

ErrorExtrema max_relative_error(const ChamferMask& mask, const WedgeDecomposition& dec,
                                const std::vector<double>& class_weights, bool require_convex) {
    ErrorFunctional f(mask, dec);
    if (require_convex) {
        // Convexity on real weights: L_W(v) <= w(v) up to rounding.
        for (const auto& w : dec.wedges) {
            const double d = std::abs(double(w.delta0));
            const double s = w.delta0 > 0 ? 1.0 : -1.0;
            for (std::size_t j = 0; j < mask.size(); ++j) {
                double L = 0;
                for (std::size_t k = 0; k < w.idx.size(); ++k)
                    L += double(w.delta(static_cast<int>(k), mask.vector(j))) * class_weights.at(mask.cls(w.idx[k]));
                const double wj = class_weights.at(mask.cls(j));
                if (s * L > d * wj * (1 + 1e-12))
                    throw Error(ErrorCode::NotConvex, "normalized polytope is not convex for these weights");
            }
        }
    }
    return f.evaluate(class_weights);
}

WeightReport optimize_real_weights(const ChamferMask& geometry, const WedgeDecomposition& dec) {
    ErrorFunctional f(geometry, dec);
    const auto& sp = geometry.lattice().spacing();
    std::vector<double> norms;
    for (const auto& v : geometry.vectors()) norms.push_back(euclidean_norm(v, sp));
    const double R = f.evaluate_vectors(norms).rho_max;
    const double E = (R - 1) / (R + 1);

    WeightReport rep;
    for (double r : norms) rep.vector_weights.push_back((1 - E) * r);
    const auto ex = f.evaluate_vectors(rep.vector_weights);
    rep.rho_min = ex.rho_min;
    rep.rho_max = ex.rho_max;
    rep.error = ex.error;
    rep.scale = optimal_scale_factor(ex.rho_min, ex.rho_max);
    const double emax = ex.rho_max - 1;
    for (std::size_t i = 0; i < norms.size(); ++i)
        rep.residual = std::max(rep.residual, std::abs(emax + (rep.vector_weights[i] / norms[i] - 1)));

    bool uniform = true;
    for (int c = 0; c < geometry.num_classes(); ++c)
        uniform = uniform && f.max_norm(c) - f.min_norm(c) < 1e-12 * f.max_norm(c);
    if (uniform)
        for (int c = 0; c < geometry.num_classes(); ++c) rep.weights.push_back((1 - E) * f.max_norm(c));

    rep.convex = true;
    for (const auto& w : dec.wedges) {
        const double d = std::abs(double(w.delta0));
        const double s = w.delta0 > 0 ? 1.0 : -1.0;
        for (std::size_t j = 0; j < geometry.size() && rep.convex; ++j) {
            double L = 0;
            for (std::size_t k = 0; k < w.idx.size(); ++k)
                L += double(w.delta(static_cast<int>(k), geometry.vector(j))) * rep.vector_weights[w.idx[k]];
            rep.convex = s * L <= d * rep.vector_weights[j] * (1 + 1e-12);
        }
    }
    return rep;
}

namespace {

struct Candidate {
    std::vector<Int> w;
    ErrorExtrema ex;
};

struct SearchState {
    const ErrorFunctional& f;
    Int m;
    double bound;   // must beat this error strictly
    double cutoff;
    std::vector<Candidate>& out;
};

constexpr double kTie = 1e-12;

void dfs(SearchState& st, std::vector<Int>& w, std::size_t c, double lo, double hi, bool has_max) {
    const std::size_t k = w.size();
    if (c == k) {
        if (!st.f.convex(w)) return;
        const auto ex = st.f.evaluate(std::vector<double>(w.begin(), w.end()));
        if (ex.error < st.bound - kTie && ex.error <= st.cutoff + kTie) st.out.push_back({w, ex});
        return;
    }
    const bool last = c + 1 == k;
    const int ci = static_cast<int>(c);
    for (Int x = 1; x <= st.m; ++x) {
        if (last && !has_max && x != st.m) continue;
        const double l = std::min(lo, double(x) / st.f.max_norm(ci));
        const double h = std::max(hi, double(x) / st.f.min_norm(ci));
        // Vertex ratios alone already bound the error from below.
        const double lb = (h - l) / (h + l);
        if (lb >= st.bound - kTie || lb > st.cutoff + kTie) continue;
        w[c] = x;
        dfs(st, w, c + 1, l, h, has_max || x == st.m);
    }
}

}  // namespace

std::vector<WeightReport> search_integer_weights(const ChamferMask& geometry, const WedgeDecomposition& dec,
                                                 const SearchConfig& config) {
    if (config.max_weight < 1) throw Error(ErrorCode::NonPositiveWeight, "max weight must be >= 1");
    const ErrorFunctional f(geometry, dec);
    const int k = geometry.num_classes();
    const int threads = resolve_threads(config.threads);
    std::vector<WeightReport> out;
    double best = std::numeric_limits<double>::infinity();

    for (Int m = 1; m <= config.max_weight; ++m) {
        std::vector<std::vector<Candidate>> found(static_cast<std::size_t>(m));
#pragma omp parallel for schedule(dynamic) num_threads(threads)
        for (Int x0 = 1; x0 <= m; ++x0) {
            if (k == 1 && x0 != m) continue;
            auto& local = found[static_cast<std::size_t>(x0 - 1)];
            SearchState st{f, m, best, config.error_cutoff, local};
            std::vector<Int> w(k, 0);
            w[0] = x0;
            const double l = double(x0) / f.max_norm(0), h = double(x0) / f.min_norm(0);
            if ((h - l) / (h + l) >= best - kTie) continue;
            dfs(st, w, 1, l, h, x0 == m);
        }
        std::vector<Candidate> all;
        for (auto& v : found) all.insert(all.end(), v.begin(), v.end());
        if (all.empty()) continue;
        double emin = std::numeric_limits<double>::infinity();
        for (const auto& c : all) emin = std::min(emin, c.ex.error);
        std::vector<Candidate> front;
        for (auto& c : all)
            if (c.ex.error <= emin + kTie) front.push_back(std::move(c));
        std::sort(front.begin(), front.end(), [](const Candidate& a, const Candidate& b) {
            if (a.ex.error != b.ex.error) return a.ex.error < b.ex.error;
            return a.w < b.w;
        });
        for (const auto& c : front) {
            WeightReport r;
            r.weights.assign(c.w.begin(), c.w.end());
            for (std::size_t i = 0; i < geometry.size(); ++i) r.vector_weights.push_back(double(c.w[geometry.cls(i)]));
            r.rho_min = c.ex.rho_min;
            r.rho_max = c.ex.rho_max;
            r.error = c.ex.error;
            r.scale = optimal_scale_factor(c.ex.rho_min, c.ex.rho_max);
            out.push_back(std::move(r));
        }
        best = emin;
    }
    return out;
}

}  // namespace lc
