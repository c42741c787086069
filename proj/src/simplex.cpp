#include "cswap/simplex.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

namespace cswap {

namespace {

struct Ctx {
    const std::function<double(const std::vector<double>&)>* f;
    std::vector<double> buf;
    int evals = 0;
};

double trampoline(const gsl_vector* v, void* p) {
    auto* c = static_cast<Ctx*>(p);
    for (std::size_t i = 0; i < c->buf.size(); ++i) c->buf[i] = gsl_vector_get(v, i);
    ++c->evals;
    double r = (*c->f)(c->buf);
    return std::isfinite(r) ? r : std::numeric_limits<double>::max();
}

} // namespace

SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x0,
                          std::vector<double> step, int max_evaluations, double size_tol) {
    const std::size_t n = x0.size();
    if (n == 0 || step.size() != n) throw std::invalid_argument("nelder_mead: bad dimensions");
    gsl_set_error_handler_off();
    Ctx ctx{&f, std::vector<double>(n), 0};
    gsl_multimin_function fn{&trampoline, n, &ctx};

    gsl_vector* x = gsl_vector_alloc(n);
    gsl_vector* s = gsl_vector_alloc(n);
    for (std::size_t i = 0; i < n; ++i) {
        gsl_vector_set(x, i, x0[i]);
        gsl_vector_set(s, i, step[i]);
    }
    gsl_multimin_fminimizer* m = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n);
    gsl_multimin_fminimizer_set(m, &fn, x, s);

    SimplexResult r;
    int it = 0;
    while (ctx.evals < max_evaluations) {
        ++it;
        if (gsl_multimin_fminimizer_iterate(m) != GSL_SUCCESS) break;
        if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(m), size_tol) == GSL_SUCCESS) {
            r.converged = true;
            break;
        }
    }
    r.x.resize(n);
    for (std::size_t i = 0; i < n; ++i) r.x[i] = gsl_vector_get(m->x, i);
    r.value = m->fval;
    r.iterations = it;
    gsl_multimin_fminimizer_free(m);
    gsl_vector_free(x);
    gsl_vector_free(s);
    return r;
}

} // namespace cswap
