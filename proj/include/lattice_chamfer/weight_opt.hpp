#pragma once

#include <memory>
#include <vector>

#include "lattice_chamfer/chamfer_mask.hpp"

namespace lc {

enum class ErrorKind { Absolute, Relative };
enum class ErrorSurface { Sphere, Hyperplane };

struct ErrorModel {
    ErrorKind kind = ErrorKind::Relative;
    ErrorSurface surface = ErrorSurface::Sphere;
    int axis = 0;    // hyperplane x_axis = T
    double T = 0.0;  // sphere radius / plane offset; 0 evaluates at the vector itself
};

// Signed error of the weighted vector at its own direction (relative: w/|v| - 1; absolute: w - |v|).
double vertex_error(double w, const IVec& v, const std::vector<double>& spacing, const ErrorModel& model = {});

struct InteriorMax {
    std::vector<double> direction;  // unit vector in world (spacing-scaled) coordinates
    double ratio;                   // max of d_C / d_E over the cone
};

// Maximum of the wedge's linear form over unit world directions inside the cone.
InteriorMax wedge_interior_max(const std::vector<IVec>& family, const std::vector<double>& weights,
                               const std::vector<double>& spacing);

struct ErrorExtrema {
    double rho_min;
    double rho_max;
    double error;  // (rho_max - rho_min) / (rho_max + rho_min)
};

double optimal_scale_factor(double rho_min, double rho_max);

// Precomputed error functional for one mask geometry; weights are given per class or per vector.
class ErrorFunctional {
public:
    ErrorFunctional(const ChamferMask& geometry, const WedgeDecomposition& dec);
    ~ErrorFunctional();
    ErrorFunctional(ErrorFunctional&&) noexcept;

    ErrorExtrema evaluate_vectors(const std::vector<double>& vector_weights) const;
    ErrorExtrema evaluate(const std::vector<double>& class_weights) const;
    // Exact integer convexity test on class weights.
    bool convex(const std::vector<Int>& class_weights) const;

    int num_classes() const;
    // Range of |S v| over the members of class c.
    double min_norm(int c) const;
    double max_norm(int c) const;
    const ChamferMask& geometry() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

ErrorExtrema max_relative_error(const ChamferMask& mask, const WedgeDecomposition& dec,
                                const std::vector<double>& class_weights, bool require_convex = true);

struct WeightReport {
    std::vector<double> weights;         // per class (empty when classes are not norm-uniform)
    std::vector<double> vector_weights;  // per mask vector
    double scale = 0;
    double error = 0;
    double rho_min = 0;
    double rho_max = 0;
    bool convex = true;
    double residual = 0;  // max_l |E_max + E_l|, real optimum only
};

// Minimax real weights: all vertex errors equal -E and the largest interior error equals +E.
WeightReport optimize_real_weights(const ChamferMask& geometry, const WedgeDecomposition& dec);

struct SearchConfig {
    Int max_weight = 20;
    double error_cutoff = 1.0;  // tuples with larger error are never reported
    int threads = 0;            // 0: default (LATTICE_CHAMFER_THREADS or OpenMP default)
};

// Pareto front over (max weight, error) of convex integer class-weight tuples,
// sorted by max weight then error; deterministic for any thread count.
std::vector<WeightReport> search_integer_weights(const ChamferMask& geometry, const WedgeDecomposition& dec,
                                                 const SearchConfig& config);

}  // namespace lc
