#pragma once

#include "heatflow/polyheat.hpp"

#include <iosfwd>
#include <vector>

namespace heatflow {

// dz_j/dt = (1/N) sum_{k != j} 1/(z_j - z_k). Throws CollisionError when two
// positions are closer than `guard`.
std::vector<cplx> ode_rhs(const std::vector<cplx>& z, double N, double guard = 0, bool parallel = true);

double min_gap(const std::vector<cplx>& z, int* i = nullptr, int* j = nullptr);

struct TrajectoryConfig {
    double t0 = 0;          // 0: 1e-3 min(delta^2, 1)
    double rtol = 1e-11;
    double atol = 1e-13;
    double guard_factor = 1e-4;
    int max_steps = 1000000;
    double record_dt = 0;   // 0: every accepted step
    bool parallel = true;
};

struct TrajectoryBundle {
    std::vector<double> times;
    std::vector<std::vector<cplx>> positions;
    std::vector<double> min_gaps;
    double guard = 0;
    int accepted = 0;
    int rejected = 0;

    const std::vector<cplx>& final() const { return positions.back(); }
};

TrajectoryBundle integrate_from(std::vector<cplx> z0, double N, double t0, double t_end,
                                const TrajectoryConfig& cfg = {});

// Starts from the exact zeros at t0 so the multiple roots at t = 0 are already split.
TrajectoryBundle integrate(const PolySpec& spec, double t_end, const TrajectoryConfig& cfg = {});

// Minimum-cost assignment (Hungarian) on pairwise distances; perm[i] is the
// index in b matched to a[i].
std::vector<int> optimal_matching(const std::vector<cplx>& a, const std::vector<cplx>& b);

double matched_max_distance(const std::vector<cplx>& a, const std::vector<cplx>& b);

// rows (t, j, re, im)
void write_trajectory_csv(std::ostream& os, const TrajectoryBundle& b);

}  // namespace heatflow
