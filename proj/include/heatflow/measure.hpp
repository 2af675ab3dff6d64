#pragma once

#include "heatflow/relevance.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace heatflow {

struct StieltjesValue {
    cplx m;
    double residual = 0;  // |m - (1/alpha) sum alpha_j / (z - t m - lambda_j)|
    RelevanceCertificate cert;
};

StieltjesValue stieltjes(const PolySpec& spec, cplx z, cplx t, const RelevanceConfig& cfg = {});

double log_potential(const PolySpec& spec, cplx z, cplx t, const RelevanceConfig& cfg = {});

struct Disk {
    cplx c;
    double r;
};

// Disks around each centre when they are disjoint, otherwise one disk about
// the centre of mass.
std::vector<Disk> default_region(const PolySpec& spec, cplx t);

struct ArcSample {
    cplx z;
    cplx ui, uj;
    double rho = 0;
};

enum class ArcEnd { branch_point, junction, region_exit, stall, closed };

std::string to_string(ArcEnd e);

struct SupportArc {
    std::vector<ArcSample> samples;
    std::pair<int, int> pair{-1, -1};  // sheet indices in the fan at the middle sample
    ArcEnd ends[2] = {ArcEnd::stall, ArcEnd::stall};
    double mass = 0;             // Richardson-extrapolated trapezoid
    double mass_trapezoid = 0;
    double mass_primitive = 0;   // |Im of the primitive of (u_j - u_i)/t| / 2 pi
    double length() const;
};

struct LimitMeasure {
    cplx t;
    std::vector<SupportArc> arcs;
    std::vector<BranchPoint> branch_points;
    std::vector<Disk> region;
    double total_mass = 0;
    double total_trapezoid = 0;
    double total_primitive = 0;
    std::vector<std::string> warnings;
};

struct TraceConfig {
    std::vector<Disk> region;  // empty: default_region
    int resolution = 36;       // relevance cells per disk diameter
    double step = 0.05;        // largest arclength step in units of sqrt|t|
    int max_samples = 4000;
    RelevanceConfig relevance;
    unsigned seed = 1;
};

LimitMeasure trace_support(const PolySpec& spec, cplx t, const TraceConfig& cfg = {});

// Newton from z onto the nodal curve of the sheet pair carried by the nearest sample.
std::optional<ArcSample> project_to_arc(const PolySpec& spec, cplx t, const SupportArc& arc, cplx z);

// Is the selected sheet different on the two sides of the nodal curve of
// (ui, uj) at z? +1 yes, 0 no, -1 undecided.
int switching_at(const PolySpec& spec, cplx t, cplx z, cplx ui, cplx uj, double nu, const RelevanceConfig& cfg);

// u+ and u- of u^2 - z u + t; sqrt(z^2 - 4t) taken as i sqrt(4t - z^2).
std::pair<cplx, cplx> joukowski_pm(cplx z, cplx t);

namespace semicircle {
double density(double x, double t);
double cdf(double x);  // of sc_1
// log potential of sc_1: log|u| + Re(z - u)^2 / 2 with u the root of u^2 - z u + 1 with |u| >= 1
double psi(cplx z);
double H(cplx z);
}  // namespace semicircle

enum class AsymptoticMode { small, large };

struct ClusterReport {
    int centre = 0;
    double hausdorff = 0;       // rescaled arc vs [-2, 2]
    double density_error = 0;   // sup |rho~ - (alpha_j/alpha) sc_1|
    double mass = 0;
};

struct AsymptoticReport {
    AsymptoticMode mode = AsymptoticMode::small;
    cplx t;
    std::vector<ClusterReport> clusters;
    double max_im_deviation = 0;  // large: max |Im z - Im c| on the arcs inside the disk
    double disk_radius = 3;
    double ks = -1;               // large: KS distance of rescaled zeros to sc_1 (when zeros were computed)
    LimitMeasure measure;
};

struct AsymptoticConfig {
    double disk_radius = 3;
    bool with_zeros = false;
    TraceConfig trace;
};

AsymptoticReport asymptotic_checks(const PolySpec& spec, cplx t, AsymptoticMode mode, const AsymptoticConfig& cfg = {});

// KS distance between the real parts of the points and sc_1.
double ks_semicircle(std::vector<double> x);

struct RayReport {
    bool valid = false;
    std::string note;
    double radius = 0;
    std::vector<double> angles;      // nodal ray directions in [0, 2 pi)
    std::vector<double> gaps;        // consecutive angular gaps
    std::vector<int> carries_support;  // per ray: 1, 0 or -1 undecided
};

RayReport equiangular_ray_check(const PolySpec& spec, cplx t, const BranchPoint& bp, const RelevanceConfig& cfg = {});

}  // namespace heatflow
