#pragma once

#include "hedgemap/model.hpp"
#include "hedgemap/point3.hpp"

namespace hedgemap {

struct SolverConfig {
    double membership_tol = 1e-9;  // slack accepted on defining inequalities
    double search_tol = 1e-7;      // w1 resolution of the golden-section minimizer
    double flat_tol = 1e-14;       // price slack defining the optimal face
    double face_tol = 1e-9;        // w1 resolution of the face endpoints
    double bracket_pad = 3.0;      // w1 bracket half-width beyond sqrt(3)*|x|_inf
    double w3_cap = 1e3;           // infeasibility cap for the general path
    int cd_restarts = 3;           // descent restarts in the membership program
    int cd_max_iter = 200;         // descent iteration cap per restart
};

struct Interval {
    double lo = 0.0, hi = 0.0;
    double width() const { return hi - lo; }
    double mid() const { return 0.5 * (lo + hi); }
};

struct RhoResult {
    double value = 0.0;
    bool band_path = true;  // minimizer evaluated by the in-band height formula
};

// The full solution set of the risk program at one position: a closed
// segment (possibly a point) in the payoff plane at the optimal price.
struct OptimalSet {
    double rho = 0.0;
    Interval w1;            // rotated first coordinate of the solutions
    double w3_star = 0.0;   // common rotated third coordinate, sqrt(3)*rho
    Point3 endpoint_lo;     // payoff at w1.lo (market coordinates)
    Point3 endpoint_hi;     // payoff at w1.hi
    bool singleton = false;
    bool band_path = true;
};

// Decides p in (boat + rotated positive orthant), p given in rotated
// coordinates, by driving the convex program min_{lambda >= 0} g(lambda) with
// projected coordinate descent (restarts, step halving).
bool acceptance_membership(const Point3& p, const AdmissibleTriple& triple,
                           const SolverConfig& cfg = {});

// Acceptance test in market coordinates: x in Phi(boat) + R^3_+.
bool acceptance_contains(const AdmissibleTriple& triple, const Point3& x,
                         const SolverConfig& cfg = {});

// Optimal value of the risk program. Throws SolverInfeasible when no payoff
// below the cap makes the position acceptable (broken custom model).
RhoResult rho_eval(const Point3& x, const AdmissibleTriple& triple,
                   const SolverConfig& cfg = {});

inline double rho(const Point3& x, const AdmissibleTriple& triple,
                  const SolverConfig& cfg = {}) {
    return rho_eval(x, triple, cfg).value;
}

OptimalSet optimal_set(const Point3& x, const AdmissibleTriple& triple,
                       const SolverConfig& cfg = {});

struct OracleResult {
    double rho = 0.0;
    Interval w1_range;
};

// Independent certification oracle: grid search over (w1, w3) driven by
// acceptance_membership alone. No in-band height formula and no convexity
// assumption; pruning uses only two structural facts, (0,0,1) lies in the
// rotated orthant (feasible w3 per column is an upper ray) and the
// translation bound |h(w1) - h(w1')| <= sqrt(3/2) |w1 - w1'|.
OracleResult brute_force_oracle(const Point3& x, const AdmissibleTriple& triple,
                                double grid_step, const SolverConfig& cfg = {});

}  // namespace hedgemap
