#pragma once

#include "heatflow/polyheat.hpp"

#include <vector>

namespace heatflow {

struct RootCluster {
    std::vector<int> members;
    cplx center;
    double radius = 0;
};

// Zeros of a polynomial with per-root certificates. Each zero has weight 1/N.
struct EmpiricalMeasure {
    std::vector<cplx> zeros;
    std::vector<double> log_residuals;    // log|p(z_k)|
    std::vector<double> backward_errors;  // |p(z_k)| / sum |c_i| |z_k|^i
    std::vector<RootCluster> clusters;    // groups of two or more near-coincident zeros
    int iterations = 0;
    int precision = 0;
    double accept_threshold = 0;

    int size() const { return static_cast<int>(zeros.size()); }
    double weight() const { return zeros.empty() ? 0.0 : 1.0 / zeros.size(); }
};

struct RootConfig {
    double tol = 1e-12;  // clusters are zeros closer than sqrt(tol) * (1 + |z|)
    int max_iter = 600;
    std::vector<cplx> initial;  // optional warm start
    unsigned seed = 0;
    bool parallel = true;
};

EmpiricalMeasure find_all_roots(const ScaledCoeffPoly& p, const RootConfig& cfg = {});

// Roots of a small polynomial in double precision (ascending coefficients).
std::vector<cplx> roots_double(const std::vector<cplx>& coeffs, int max_iter = 500);

struct SupportBoundReport {
    double radius = 0;                 // 2 sqrt|t| sqrt(1 + 1/(2 n alpha))
    std::vector<int> outside;          // indices of zeros outside every disk
    double max_excess = 0;             // worst distance beyond the nearest disk
    bool disks_disjoint = false;
    std::vector<int> disk_counts;      // zeros per disk when disjoint
    std::vector<int> expected_counts;  // alpha_j n
    bool pass = false;
};

SupportBoundReport support_bound_check(const EmpiricalMeasure& m, const PolySpec& spec, cplx t);

// Zeros of P_t^n for a spec, using the default precision unless bits > 0.
EmpiricalMeasure zeros_at(const PolySpec& spec, cplx t, int bits = 0, const RootConfig& cfg = {});

}  // namespace heatflow
