#pragma once

#include "heatflow/saddle.hpp"

#include <functional>
#include <vector>

namespace heatflow {

// Tensor grid in the u-plane over [-2R,2R] x [-R,R] with a uniform core and
// local refinement near saddles and centres. Rows y = ys.front() and
// y = ys.back() are the anchors for -i infinity and +i infinity.
struct ConnectivityGrid {
    std::vector<double> xs, ys;
    std::vector<double> field;  // G at the nodes, row-major in y
    double R = 0;
    int core_cells = 0;

    int nx() const { return static_cast<int>(xs.size()); }
    int ny() const { return static_cast<int>(ys.size()); }
};

struct RelevanceConfig {
    int core_cells = 128;  // uniform cells across the core at level 0
    int max_level = 3;     // refinement cap
    double tie_tol = 1e-8;  // relative height tolerance for ties with the chosen saddle
    bool parallel = true;
};

// Points that must be resolved, with the finest spacing wanted around each.
struct GridFocus {
    cplx p;
    double spacing;
};

// Grid for G(z, .) at real positive t.
ConnectivityGrid make_grid(const PolySpec& spec, cplx z, double t, const std::vector<GridFocus>& focus, int core_cells,
                           bool parallel = true);

// Does {G <= h} join the top anchor row to the bottom one (8-connectivity)?
bool grid_connected(const ConnectivityGrid& g, double h);

// Same question with refinement until two consecutive levels agree.
// Complex t is handled in the rotated frame.
bool sublevel_connected(const PolySpec& spec, cplx z, cplx t, double h, const RelevanceConfig& cfg = {});

struct RelevanceCertificate {
    cplx z;
    cplx t;
    SaddleFan fan;
    int chosen = -1;
    cplx u;
    double height = 0;
    double h_low = 0, h_high = 0;
    double eps = 0;
    std::vector<int> resolutions;  // core cells per level used
    std::vector<int> irrelevant;   // saddles above the chosen one
};

RelevanceCertificate select_max_relevant(const PolySpec& spec, cplx z, cplx t, const RelevanceConfig& cfg = {});

struct FieldRegion {
    cplx lo, hi;
    int nx = 32, ny = 32;
    std::function<bool(cplx)> mask;  // optional; cells with mask false are skipped

    cplx cell(int i, int j) const;
};

enum class CellState { skipped, propagated, selected, undefined };

struct RelevanceField {
    FieldRegion region;
    cplx t;
    std::vector<CellState> state;
    std::vector<cplx> u;             // chosen saddle per cell
    std::vector<int> branch;         // component label of the chosen sheet, -1 when undefined
    std::vector<SaddleFan> fans;
    std::vector<int> chosen;         // index into fans[k].saddles
    int selections = 0;
    int spot_checks = 0;
    int inconsistencies = 0;
    int branch_count = 0;

    int index(int i, int j) const { return j * region.nx + i; }
};

struct FieldConfig {
    RelevanceConfig relevance;
    double spot_rate = 0.05;     // fraction of propagated cells re-checked by full selection
    double height_tol = 1e-3;    // relative height gap that triggers re-selection
    unsigned seed = 1;
};

// Anchor: certificate at a large |z|; the chosen sheet is carried into the
// region by continuation and propagated cell to cell.
RelevanceField relevance_field(const PolySpec& spec, cplx t, const FieldRegion& region,
                               const RelevanceCertificate& seed, const FieldConfig& cfg = {});

// Certificate at z0 = anchor radius along the positive real axis.
RelevanceCertificate anchor_certificate(const PolySpec& spec, cplx t, const RelevanceConfig& cfg = {});

}  // namespace heatflow
