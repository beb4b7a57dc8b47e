#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <vector>

namespace tscast {

struct NelderMeadOptions {
    std::size_t max_iterations = 0;  // 0 -> 500 * dimension
    double relative_tolerance = 1e-8;
    double initial_step = 0.25;
};

struct NelderMeadResult {
    std::vector<double> x;
    double fx = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
};

/// Deterministic Nelder-Mead simplex descent (alpha=1, gamma=2, rho=0.5,
/// sigma=0.5). The initial simplex is start plus one axis-aligned step per
/// dimension, so results are reproducible for a fixed start.
inline NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                    std::vector<double> start, NelderMeadOptions opts = {}) {
    const std::size_t dim = start.size();
    NelderMeadResult result;
    if (dim == 0) {
        result.x = std::move(start);
        result.fx = f(result.x);
        result.converged = true;
        return result;
    }
    const std::size_t max_iter = opts.max_iterations ? opts.max_iterations : 500 * dim;

    std::vector<std::vector<double>> verts(dim + 1, start);
    for (std::size_t i = 0; i < dim; ++i) verts[i + 1][i] += opts.initial_step;
    std::vector<double> fvals(dim + 1);
    for (std::size_t i = 0; i <= dim; ++i) fvals[i] = f(verts[i]);

    std::vector<std::size_t> order(dim + 1);
    auto sort_vertices = [&] {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return fvals[a] < fvals[b]; });
    };

    std::vector<double> centroid(dim), candidate(dim);
    for (std::size_t iter = 0; iter < max_iter; ++iter) {
        sort_vertices();
        const std::size_t best = order.front();
        const std::size_t worst = order.back();
        const std::size_t second_worst = order[dim - 1];

        const double spread = std::abs(fvals[worst] - fvals[best]);
        const double scale = std::abs(fvals[best]) + std::abs(fvals[worst]) + 1e-300;
        if (spread / scale < opts.relative_tolerance) {
            result.iterations = iter;
            result.converged = true;
            break;
        }

        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t i = 0; i <= dim; ++i) {
            if (i == worst) continue;
            for (std::size_t j = 0; j < dim; ++j) centroid[j] += verts[i][j];
        }
        for (double& c : centroid) c /= static_cast<double>(dim);

        auto blend = [&](double t) {
            for (std::size_t j = 0; j < dim; ++j)
                candidate[j] = centroid[j] + t * (centroid[j] - verts[worst][j]);
            return f(candidate);
        };

        const double f_reflect = blend(1.0);
        if (f_reflect < fvals[best]) {
            std::vector<double> reflected = candidate;
            const double f_expand = blend(2.0);
            if (f_expand < f_reflect) {
                verts[worst] = candidate;
                fvals[worst] = f_expand;
            } else {
                verts[worst] = std::move(reflected);
                fvals[worst] = f_reflect;
            }
        } else if (f_reflect < fvals[second_worst]) {
            verts[worst] = candidate;
            fvals[worst] = f_reflect;
        } else {
            const double f_contract = blend(-0.5);
            if (f_contract < fvals[worst]) {
                verts[worst] = candidate;
                fvals[worst] = f_contract;
            } else {
                // Shrink toward the best vertex.
                for (std::size_t i = 0; i <= dim; ++i) {
                    if (i == best) continue;
                    for (std::size_t j = 0; j < dim; ++j)
                        verts[i][j] = verts[best][j] + 0.5 * (verts[i][j] - verts[best][j]);
                    fvals[i] = f(verts[i]);
                }
            }
        }
        result.iterations = iter + 1;
    }

    sort_vertices();
    result.x = verts[order.front()];
    result.fx = fvals[order.front()];
    return result;
}

}  // namespace tscast
