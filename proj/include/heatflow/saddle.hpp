#pragma once

#include "heatflow/polyheat.hpp"

#include <optional>
#include <vector>

namespace heatflow {

// The d+1 solutions of u + (t/alpha) sum_j alpha_j/(u - lambda_j) = z.
struct SaddleFan {
    cplx z;
    cplx t;
    std::vector<cplx> saddles;
    std::vector<double> heights;
    std::vector<double> log_residuals;  // log|Q(u_j)|
    double min_gap = 0;                 // smallest pairwise saddle distance
    bool degenerate = false;

    int size() const { return static_cast<int>(saddles.size()); }
};

struct BranchPoint {
    cplx z;
    int order = 2;  // number of coalescing saddles
    cplx coalesced_u;
};

struct BranchLocus {
    std::vector<BranchPoint> points;
    std::vector<cplx> resultant;  // ascending coefficients in z
    double consistency_error = 0;  // interpolant vs direct determinant at the check node
    bool unstable = false;
};

// Sheet followed by nearest continuation along a polyline of z-samples.
struct BranchTrack {
    cplx t;
    std::vector<cplx> path;
    std::vector<cplx> u;
};

// Coefficients of Q_{z,t}(u), ascending in u, length d+2, monic.
std::vector<cplx> q_coeffs(const PolySpec& spec, cplx z, cplx t);

double branch_tolerance(const PolySpec& spec, cplx z, cplx t);

SaddleFan solve_saddles(const PolySpec& spec, cplx z, cplx t);

double height_G(const PolySpec& spec, cplx z, cplx t, cplx u);

// Zeros of sum_j alpha_j prod_{k != j}(u - lambda_k).
std::vector<cplx> log_critical_points(const PolySpec& spec);

// Resultant of Q and dQ/du at one z, from the Sylvester determinant.
cplx sylvester_resultant(const PolySpec& spec, cplx z, cplx t);

BranchLocus branch_locus(const PolySpec& spec, cplx t);

// Nearest-root continuation of u_prev to the fan at a new point; nullopt when
// the nearest root is not clearly separated from the second nearest.
std::optional<int> continue_root(const std::vector<cplx>& roots, cplx u_prev);

// Matches every sheet of `from` to a sheet of `to`; nullopt on ambiguity or
// when two sheets land on the same root.
std::optional<std::vector<int>> match_sheets(const std::vector<cplx>& from, const std::vector<cplx>& to);

enum class StepStatus { accepted, needs_subdivision };

StepStatus continue_branch(const PolySpec& spec, BranchTrack& track, cplx next_z);

// Continues the track to `target`, bisecting steps that are ambiguous.
void continue_along(const PolySpec& spec, BranchTrack& track, cplx target, int max_depth = 24);

}  // namespace heatflow
