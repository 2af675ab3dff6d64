#pragma once

#include "heatflow/measure.hpp"

#include <string>
#include <vector>

namespace heatflow {

struct ResidualReport {
    std::string name;
    std::vector<cplx> samples;
    std::vector<double> residuals;     // per sample, at the finest refinement
    double max_residual = 0;
    double threshold = 0;
    std::vector<double> ratios;        // residual(h) / residual(h/2) per sample, when refined
    double ratio_lo = 0, ratio_hi = 0;
    int skipped = 0;
    std::vector<std::string> notes;
    bool pass = false;
};

// m, U, support endpoints and density from the pipeline against the
// one-centre closed forms; the density is compared at interior trace samples.
struct OracleConfig {
    int points = 100;
    double radius = 3;          // sample circle radius in units of sqrt t
    bool with_support = true;
    double threshold = 1e-10;
    TraceConfig trace;
};

ResidualReport hermite_oracle(const PolySpec& spec, double t, const OracleConfig& cfg = {});

enum class PdeKind { hamilton_jacobi, burgers, burgers_conjugate };

std::string to_string(PdeKind k);

struct PdeConfig {
    std::vector<double> h{1e-3, 5e-4};
    double threshold = 1e-5;    // at the finest h
    double ratio_lo = 3.5, ratio_hi = 4.5;
    int min_samples = 3;
    RelevanceConfig relevance;
};

// Central differences of U and m in z and t around samples (z, t); the branch
// selected at the sample is continued to the stencil points.
ResidualReport pde_residuals(const PolySpec& spec, const std::vector<cplx>& ts, const std::vector<cplx>& zs, PdeKind kind,
                             const PdeConfig& cfg = {});

struct RotationConfig {
    int bits = 256;
    double threshold = 1e-12;
};

// P_t^n against w^N (exp(-|t|/(2N) d^2) P~^n)(z / w), w = e^{i arg t / 2}, P~(z) = P(w z)/w^N,
// coefficientwise and at the sample points.
ResidualReport rotation_identity(const PolySpec& spec, cplx t, const std::vector<cplx>& zs,
                                 const RotationConfig& cfg = {});

enum class ConvergenceMetric { ks_semicircle, arc_distance, disk_mass };

std::string to_string(ConvergenceMetric m);

struct ConvergenceConfig {
    double slack = 0.10;        // allowed relative increase between consecutive n
    double final_threshold = 0; // 0: no bound on the last value
    TraceConfig trace;
};

// One value per n: KS of rescaled real parts vs sc_1 (d = 1), mean zero-to-arc
// distance, or max |disk count / N - alpha_j / alpha|.
ResidualReport convergence_report(const PolySpec& spec, double t, const std::vector<int>& ns, ConvergenceMetric metric,
                                  const ConvergenceConfig& cfg = {});

// Distance from z to the nearest segment of any traced arc.
double distance_to_support(const LimitMeasure& L, cplx z);

}  // namespace heatflow
