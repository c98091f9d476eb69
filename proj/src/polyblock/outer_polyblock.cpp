#include "outer_polyblock.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>
#include <queue>
#include <tuple>

namespace noma {

double epsilon_gap(const std::vector<double>& mu, double epsilon) {
    if (!(epsilon > 0.0) || !(epsilon < 1.0)) throw InvalidInput("epsilon must lie in (0, 1)");
    double s = 0.0;
    for (double m : mu) s += m;
    return -std::log2(1.0 - epsilon) * s;
}

namespace detail {

namespace {

struct Vertex {
    VertexVector z;
    double ub = 0.0;
};

struct Region {
    MonotoneRegion* program = nullptr;
    std::vector<double> mu;
    double tol = 0.0;
    std::map<long, Vertex> vertices;
};

struct HeapEntry {
    double ub;
    int region;
    long id;
    bool operator<(const HeapEntry& o) const {
        // Largest bound first; ties go to the lower region, then the older vertex.
        return std::tie(ub, o.region, o.id) < std::tie(o.ub, region, id);
    }
};

double bound(const std::vector<double>& mu, const VertexVector& z) {
    double s = 0.0;
    for (std::size_t d = 0; d < z.size(); ++d) s += mu[d] * std::log2(z[d]);
    return s;
}

}  // namespace

OuterResult run_outer_polyblock(std::vector<std::unique_ptr<MonotoneRegion>>& programs, Allocation incumbent,
                                double epsilon, int max_iterations, std::ostream* trace) {
    const double neg_inf = -std::numeric_limits<double>::infinity();
    OuterResult out;
    std::vector<Region> regions(programs.size());
    std::priority_queue<HeapEntry> heap;
    long next_id = 0;
    std::size_t live = 0;
    double resolved = neg_inf;  // largest bound of any box discarded so far

    auto add_vertex = [&](int r, VertexVector z, double parent_ub) {
        double gamma = incumbent.objective + regions[r].tol;
        if (!regions[r].program->reduce(z, gamma)) {
            resolved = std::max(resolved, std::min(gamma, parent_ub));
            return;
        }
        double ub = std::min(parent_ub, regions[r].program->bound(z, bound(regions[r].mu, z)));
        if (ub <= incumbent.objective + regions[r].tol) {
            resolved = std::max(resolved, ub);
            return;
        }
        long id = next_id++;
        regions[r].vertices.emplace(id, Vertex{std::move(z), ub});
        heap.push({ub, r, id});
        ++live;
    };
    auto prune = [&]() {
        for (Region& reg : regions)
            for (auto it = reg.vertices.begin(); it != reg.vertices.end();) {
                if (it->second.ub <= incumbent.objective + reg.tol) {
                    resolved = std::max(resolved, it->second.ub);
                    it = reg.vertices.erase(it);
                    --live;
                } else {
                    ++it;
                }
            }
    };
    auto clean_top = [&]() {
        while (!heap.empty()) {
            const HeapEntry& e = heap.top();
            if (regions[e.region].vertices.count(e.id)) break;
            heap.pop();
        }
    };
    auto global_ub = [&]() {
        clean_top();
        double ub = std::max(resolved, incumbent.objective);
        if (!heap.empty()) ub = std::max(ub, heap.top().ub);
        return ub;
    };

    for (std::size_t r = 0; r < programs.size(); ++r) {
        regions[r].program = programs[r].get();
        regions[r].mu = programs[r]->weights();
        regions[r].tol = epsilon_gap(regions[r].mu, epsilon);
        out.tolerance = std::max(out.tolerance, regions[r].tol);
    }
    for (std::size_t r = 0; r < programs.size(); ++r) add_vertex(static_cast<int>(r), programs[r]->initial_vertex(), std::numeric_limits<double>::infinity());
    out.peak_vertices = live;
    if (trace) *trace << "k,vertices,upper_bound,incumbent,selected_gap\n";

    while (true) {
        clean_top();
        if (heap.empty()) break;
        if (out.iterations >= max_iterations) break;
        HeapEntry top = heap.top();
        heap.pop();
        Region& reg = regions[top.region];
        auto vit = reg.vertices.find(top.id);
        if (top.ub <= incumbent.objective + reg.tol) {
            resolved = std::max(resolved, top.ub);
            reg.vertices.erase(vit);
            --live;
            continue;
        }
        ++out.iterations;
        const VertexVector z = vit->second.z;
        RegionProjection proj = reg.program->project(z);

        double attained = 0.0;
        for (std::size_t d = 0; d < z.size(); ++d)
            attained += reg.mu[d] * std::log2(std::max(1.0, proj.lambda_lower * z[d]));
        if (proj.candidate && proj.candidate->objective > incumbent.objective) {
            incumbent = std::move(*proj.candidate);
            prune();
        }

        if (reg.vertices.count(top.id)) {
            if (proj.lambda_upper >= 1.0 || top.ub <= incumbent.objective + reg.tol) {
                // Nothing above lambda_upper z can be cut away; the box is settled.
                resolved = std::max(resolved, top.ub);
                reg.vertices.erase(top.id);
                --live;
            } else {
                const std::size_t dim = z.size();
                std::vector<int> active;
                VertexVector phi(dim);
                for (std::size_t d = 0; d < dim; ++d) {
                    phi[d] = proj.lambda_upper * z[d];
                    if (phi[d] >= 1.0) active.push_back(static_cast<int>(d));
                }
                // Every vertex strictly above phi on the active coordinates loses the cone.
                std::vector<long> cut;
                for (const auto& [id, v] : reg.vertices) {
                    bool above = true;
                    for (int d : active)
                        if (!(v.z[d] > phi[d])) {
                            above = false;
                            break;
                        }
                    if (above) cut.push_back(id);
                }
                std::vector<std::pair<VertexVector, double>> children;
                for (std::size_t a = 0; a < cut.size(); ++a) {
                    const VertexVector& v = reg.vertices.at(cut[a]).z;
                    for (int j : active) {
                        bool proper = true;
                        for (std::size_t b = 0; b < cut.size() && proper; ++b) {
                            if (b == a) continue;
                            const VertexVector& w = reg.vertices.at(cut[b]).z;
                            bool dominates = true, equal = true;
                            for (std::size_t d = 0; d < dim; ++d) {
                                if (static_cast<int>(d) == j) continue;
                                if (w[d] < v[d]) {
                                    dominates = false;
                                    break;
                                }
                                if (w[d] != v[d]) equal = false;
                            }
                            if (dominates && (!equal || b < a)) proper = false;
                        }
                        if (!proper) continue;
                        VertexVector c = v;
                        c[j] = phi[j];
                        children.emplace_back(std::move(c), reg.vertices.at(cut[a]).ub);
                    }
                }
                for (long id : cut) {
                    reg.vertices.erase(id);
                    --live;
                }
                for (auto& [c, parent_ub] : children) add_vertex(top.region, std::move(c), parent_ub);
            }
        }
        out.peak_vertices = std::max(out.peak_vertices, live);

        PolyblockIterate it;
        it.k = out.iterations;
        it.vertices = live;
        it.upper_bound = global_ub();
        it.incumbent = incumbent.objective;
        it.selected_gap = top.ub - attained;
        out.trace.push_back(it);
        if (trace)
            *trace << it.k << ',' << it.vertices << ',' << it.upper_bound << ',' << it.incumbent << ','
                   << it.selected_gap << '\n';
    }

    out.upper_bound = global_ub();
    out.closed = heap.empty() && out.upper_bound <= incumbent.objective + out.tolerance;
    out.incumbent = std::move(incumbent);
    return out;
}

}  // namespace detail
}  // namespace noma
