#pragma once

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <optional>
#include <vector>

#include "noma/polyblock.hpp"

namespace noma::detail {

struct RegionProjection {
    double lambda_lower = 0.0;  // lambda_lower * z is attained by the candidate
    double lambda_upper = 0.0;  // no feasible point lies strictly above lambda_upper * z
    std::optional<Allocation> candidate;
};

// A normal set in [1, inf)^D with objective sum mu_d log2 x_d.
class MonotoneRegion {
public:
    virtual ~MonotoneRegion() = default;
    virtual std::vector<double> weights() const = 0;
    virtual VertexVector initial_vertex() const = 0;
    virtual RegionProjection project(const VertexVector& z) = 0;
    // Shrinks z so that [1, z] still holds every feasible point of [1, z] with
    // objective >= gamma. False when there is no such point.
    virtual bool reduce(VertexVector& /*z*/, double /*gamma*/) const { return true; }
    // Upper bound of the objective over the feasible points of [1, z]; corner is
    // sum mu_d log2 z_d, which is always valid.
    virtual double bound(const VertexVector& /*z*/, double corner) const { return corner; }
};

struct OuterResult {
    Allocation incumbent;
    double upper_bound = 0.0;
    double tolerance = 0.0;
    bool closed = false;
    int iterations = 0;
    std::size_t peak_vertices = 0;
    std::vector<PolyblockIterate> trace;
};

OuterResult run_outer_polyblock(std::vector<std::unique_ptr<MonotoneRegion>>& regions, Allocation incumbent,
                                double epsilon, int max_iterations, std::ostream* trace);

}  // namespace noma::detail
