#pragma once

#include <functional>
#include <vector>

namespace cswap {

struct SimplexResult {
    std::vector<double> x;
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
};

// Derivative-free Nelder–Mead minimization (GSL nmsimplex2).
SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x0,
                          std::vector<double> step, int max_evaluations, double size_tol = 1e-10);

} // namespace cswap
