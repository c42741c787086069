#include "cswap/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "cswap/metrics.hpp"
#include "cswap/simplex.hpp"

namespace cswap {

void CostSpec::validate() const {
    for (double w : {w_j1, w_branch, w_ratio, w_anharm, w_bounds})
        if (!(w >= 0.0) || !std::isfinite(w)) throw std::invalid_argument("cost weights must be finite and >= 0");
    if (!(w_j1 > 0.0) || !(w_branch > 0.0)) throw std::invalid_argument("J1 and branch weights must be positive");
    if (!(ratio_min >= 0.0) || !(anharm_floor >= 0.0)) throw std::invalid_argument("cost floors must be >= 0");
}

const char* cost_term_name(int term) {
    static const char* n[] = {"j1", "branch", "ratio", "anharm", "bounds"};
    if (term < 0 || term >= n_cost_terms) throw std::out_of_range("cost term");
    return n[term];
}

SearchBounds SearchBounds::table_ranges() {
    SearchBounds b;
    b.lower = {50, 50, 50, 50, 20, 20, 20, 25};
    b.upper = {700, 700, 700, 700, 1000, 1000, 1000, 100};
    return b;
}

SearchBounds SearchBounds::point(const CircuitParams& p) {
    SearchBounds b;
    b.lower = b.upper = p.as_array();
    return b;
}

void SearchBounds::validate() const {
    for (int i = 0; i < 8; ++i)
        if (!(lower[i] > 0.0) || !(upper[i] >= lower[i]))
            throw std::invalid_argument(std::string("bad search bounds for ") + CircuitParams::names()[i]);
}

bool SearchBounds::contains(const CircuitParams& p) const {
    auto a = p.as_array();
    for (int i = 0; i < 8; ++i)
        if (a[i] < lower[i] || a[i] > upper[i]) return false;
    return true;
}

bool is_accepted(const SearchResult& r, double tol) {
    return std::isfinite(r.cost) && std::abs(r.residuals[cost_j1]) <= tol && std::abs(r.residuals[cost_branch]) <= tol &&
           r.spin.j1x != 0.0;
}

SearchResult evaluate_cost(const CircuitParams& p, const CostSpec& cost, DeltaBranch branch,
                           const SearchBounds& bounds, const UnitCalibration& cal) {
    SearchResult r;
    r.circuit = p;
    const double inf = std::numeric_limits<double>::infinity();
    try {
        r.spin = circuit_to_spin(p, cal);
    } catch (const std::exception&) {
        r.cost = inf;
        r.residuals.fill(inf);
        return r;
    }
    const SpinMapResult& s = r.spin;
    auto rel = [](double a, double ref) { return ref != 0.0 ? a / std::abs(ref) : (a == 0.0 ? 0.0 : 1.0); };
    r.residuals[cost_j1] = rel(s.j1x - s.j1z, s.j1x);
    const double target = gate_detuning(s.j2x, s.j2z, branch);
    r.residuals[cost_branch] = rel(s.delta - target, target);
    const double ratio = s.j1x != 0.0 ? std::abs(s.j2z / s.j1x) : 0.0;
    r.residuals[cost_ratio] = cost.ratio_min > 0.0 ? std::max(0.0, cost.ratio_min - ratio) / cost.ratio_min : 0.0;
    double anh = 0.0;
    if (cost.anharm_floor > 0.0)
        for (double a : {s.anh_rel_1, s.anh_rel_2})
            anh += std::pow(std::max(0.0, cost.anharm_floor - std::abs(a)) / cost.anharm_floor, 2);
    r.residuals[cost_anharm] = std::sqrt(anh);
    double out = 0.0;
    auto a = p.as_array();
    for (int i = 0; i < 8; ++i) {
        if (a[i] < bounds.lower[i]) out += std::pow(std::log(bounds.lower[i] / a[i]), 2);
        if (a[i] > bounds.upper[i]) out += std::pow(std::log(a[i] / bounds.upper[i]), 2);
    }
    r.residuals[cost_bounds] = std::sqrt(out);

    const std::array<double, n_cost_terms> w = {cost.w_j1, cost.w_branch, cost.w_ratio, cost.w_anharm, cost.w_bounds};
    r.cost = 0.0;
    for (int k = 0; k < n_cost_terms; ++k) r.cost += w[k] * r.residuals[k] * r.residuals[k];
    if (!std::isfinite(r.cost)) r.cost = inf;
    return r;
}

namespace {

// Free coordinates are log-parameters; dimensions with zero width stay fixed.
struct Packing {
    std::array<double, 8> fixed{};
    std::vector<int> free;

    explicit Packing(const SearchBounds& b) {
        for (int i = 0; i < 8; ++i) {
            if (b.upper[i] > b.lower[i]) free.push_back(i);
            fixed[i] = b.lower[i];
        }
    }
    CircuitParams unpack(const std::vector<double>& x) const {
        std::array<double, 8> a = fixed;
        for (std::size_t k = 0; k < free.size(); ++k) a[free[k]] = std::exp(x[k]);
        return CircuitParams::from_array(a);
    }
    std::vector<double> pack(const CircuitParams& p) const {
        auto a = p.as_array();
        std::vector<double> x;
        for (int i : free) x.push_back(std::log(a[i]));
        return x;
    }
};

SearchResult descend(const CircuitParams& start, const CostSpec& cost, const SearchBounds& bounds, DeltaBranch branch,
                     int max_evaluations, const UnitCalibration& cal, bool* converged) {
    Packing pk(bounds);
    if (pk.free.empty() || max_evaluations <= 0) {
        if (converged) *converged = true;
        return evaluate_cost(start, cost, branch, bounds, cal);
    }
    auto f = [&](const std::vector<double>& x) { return evaluate_cost(pk.unpack(x), cost, branch, bounds, cal).cost; };
    SimplexResult sr = nelder_mead(f, pk.pack(start), std::vector<double>(pk.free.size(), 0.1), max_evaluations, 1e-9);
    if (converged) *converged = sr.converged;
    return evaluate_cost(pk.unpack(sr.x), cost, branch, bounds, cal);
}

bool duplicates(const CircuitParams& a, const CircuitParams& b) {
    auto x = a.as_array(), y = b.as_array();
    for (int i = 0; i < 8; ++i)
        if (std::abs(x[i] - y[i]) > 0.01 * std::max(std::abs(x[i]), std::abs(y[i]))) return false;
    return true;
}

bool ordered(const SearchResult& a, const SearchResult& b) {
    if (a.cost != b.cost) return a.cost < b.cost;
    return a.circuit.as_array() < b.circuit.as_array();
}

} // namespace

SearchResult refine(const CircuitParams& start, const CostSpec& cost, const SearchBounds& bounds, DeltaBranch branch,
                    int max_evaluations, const UnitCalibration& cal) {
    cost.validate();
    bounds.validate();
    return descend(start, cost, bounds, branch, max_evaluations, cal, nullptr);
}

SearchOutcome search(const CostSpec& cost, const SearchBounds& bounds, DeltaBranch branch, const SearchOptions& opts) {
    cost.validate();
    bounds.validate();
    if (opts.n_restarts < 1) throw std::invalid_argument("search needs at least one restart");

    // Starting points are drawn up front so the result does not depend on the thread count.
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<CircuitParams> starts;
    for (int k = 0; k < opts.n_restarts; ++k) {
        std::array<double, 8> a{};
        for (int i = 0; i < 8; ++i) {
            double lo = std::log(bounds.lower[i]), hi = std::log(bounds.upper[i]);
            a[i] = std::exp(lo + (hi - lo) * u(rng));
        }
        starts.push_back(CircuitParams::from_array(a));
    }

    std::vector<SearchResult> found(starts.size());
    std::vector<char> conv(starts.size(), 0);
    auto work = [&](std::size_t k) {
        bool c = false;
        found[k] = descend(starts[k], cost, bounds, branch, opts.max_evaluations, opts.calibration, &c);
        conv[k] = c;
    };
    const int nt = std::max(1, std::min<int>(opts.threads, static_cast<int>(starts.size())));
    if (nt == 1) {
        for (std::size_t k = 0; k < starts.size(); ++k) work(k);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < nt; ++t)
            pool.emplace_back([&, t] {
                for (std::size_t k = t; k < starts.size(); k += nt) work(k);
            });
        for (auto& th : pool) th.join();
    }

    SearchOutcome out;
    out.restarts = static_cast<int>(starts.size());
    out.best_cost = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < found.size(); ++k) {
        out.converged += conv[k];
        out.best_cost = std::min(out.best_cost, found[k].cost);
    }
    std::vector<SearchResult> ok;
    for (auto& r : found)
        if (is_accepted(r) && bounds.contains(r.circuit)) ok.push_back(r);
    std::sort(ok.begin(), ok.end(), ordered);
    for (auto& r : ok) {
        bool dup = false;
        for (auto& kept : out.results) dup = dup || duplicates(r.circuit, kept.circuit);
        if (!dup) out.results.push_back(r);
    }
    std::ostringstream d;
    d << out.restarts << " restarts, " << out.converged << " converged, " << ok.size() << " accepted, "
      << out.results.size() << " distinct; best cost " << out.best_cost;
    out.diagnostics = d.str();
    return out;
}

SpinModelParams solution_model(const SearchResult& r) {
    const SpinMapResult& s = r.spin;
    return gate_params(s.j1x, s.j1z, s.j2x, s.j2z, s.delta);
}

SolutionReport validate_solution(const SearchResult& r, double gamma, int n_samples, int threads) {
    // Checked on the spin values themselves, the stored residuals may be stale.
    const SpinMapResult& s = r.spin;
    const double dp = gate_detuning(s.j2x, s.j2z, DeltaBranch::plus), dm = gate_detuning(s.j2x, s.j2z, DeltaBranch::minus);
    const DeltaBranch br = std::abs(s.delta - dp) <= std::abs(s.delta - dm) ? DeltaBranch::plus : DeltaBranch::minus;
    const double target = br == DeltaBranch::plus ? dp : dm;
    if (!is_accepted(r) || !(std::abs(s.j1x - s.j1z) <= 1e-2 * std::abs(s.j1x)) ||
        !(std::abs(s.delta - target) <= 1e-2 * std::abs(target)))
        throw std::invalid_argument("validate_solution: result does not satisfy the gate identities");
    SpinModelParams m = solution_model(r);
    SolutionReport rep;
    rep.gate_time = analytic_gate_time(m);
    FidelityOptions fo;
    fo.threads = threads;
    NoiseModel noise = NoiseModel::uniform(gamma);

    FidelityTrace open = average_fidelity(m, {br, ControlState::open_0, {}}, noise,
                                          linspace(0.0, 1.2 * rep.gate_time, n_samples), fo);
    GateTime g = numerical_gate_time(open);
    rep.open_peak = open.peak_value;
    rep.open_peak_time = g.time;
    auto closed_min = [&](ControlState c) {
        FidelityTrace tr = average_fidelity(m, {br, c, {}}, noise, linspace(0.0, rep.gate_time, n_samples), fo);
        return *std::min_element(tr.fbar.begin(), tr.fbar.end());
    };
    rep.closed_min_plus = closed_min(ControlState::closed_1plus);
    rep.closed_min_minus = closed_min(ControlState::closed_1minus);
    return rep;
}

} // namespace cswap
