#pragma once

#include "heatflow/dynamics.hpp"
#include "heatflow/roots.hpp"
#include "heatflow/verify.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace heatflow::io {

using json = nlohmann::ordered_json;

// {"lambdas":[[re,im],...],"alphas":[...],"n":N}; throws ConfigError.
PolySpec spec_from_json(const json& j);
PolySpec read_spec(const std::string& path);
json to_json(const PolySpec& s);

// "a,b" or "m@deg"
cplx parse_complex(const std::string& s);

json to_json(cplx z);
json to_json(const EmpiricalMeasure& m);
json to_json(const SupportBoundReport& r);
json to_json(const SaddleFan& f);
json to_json(const BranchLocus& b);
json to_json(const RelevanceCertificate& c);
json to_json(const LimitMeasure& L);
json to_json(const AsymptoticReport& r);
json to_json(const RayReport& r);
json to_json(const ResidualReport& r);
json to_json(const TrajectoryBundle& b);

// rows k, log_modulus, phase_re, phase_im
void write_coefficients_csv(std::ostream& os, const ScaledCoeffPoly& p);
// rows re, im, log_residual
void write_zeros_csv(std::ostream& os, const EmpiricalMeasure& m);
// rows arc, k, re, im, rho
void write_density_csv(std::ostream& os, const LimitMeasure& L);

class Svg {
public:
    void polyline(const std::vector<cplx>& pts, const std::string& colour, double width = 1.5);
    void dots(const std::vector<cplx>& pts, const std::string& colour, double radius = 2);
    void circle(cplx c, double r, const std::string& colour);
    // viewBox from the data extents plus a 10% margin; y points up
    void write(std::ostream& os, int pixels = 800) const;

private:
    struct Item {
        enum Kind { line, dot, ring } kind;
        std::vector<cplx> pts;
        std::string colour;
        double size;
    };
    std::vector<Item> items_;
};

// arcs blue, branch points red, zeros black, region disks grey
Svg support_figure(const LimitMeasure& L, const std::vector<cplx>& zeros = {});
Svg trajectory_figure(const TrajectoryBundle& b);

}  // namespace heatflow::io
