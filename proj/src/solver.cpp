#include "hedgemap/solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

namespace hedgemap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSqrt3 = 1.7320508075688772935274463415058724;
// Lipschitz bound of the column-minimum function h in w1: a unit w1 shift is
// a payoff of sup-norm 1/sqrt(2), and rho is 1-Lipschitz, so sqrt(3)/sqrt(2).
constexpr double kSlopeBound = 1.2247448713915890490986420373529457;

// Generators of the rotated positive orthant: columns of Phi^T.
const std::array<Point3, 3>& orthant_generators() {
    static const std::array<Point3, 3> g = {
        rotate_inv({1.0, 0.0, 0.0}),
        rotate_inv({0.0, 1.0, 0.0}),
        rotate_inv({0.0, 0.0, 1.0}),
    };
    return g;
}

// Extended column height: the boat height where the column is admissible and
// a steep finite wall outside, so the descent can slide along the domain
// boundary instead of stalling against an infinite step. The wall stays
// above 1, which keeps the membership decision exact (see g_value).
double wall_height(const BoatSet& boat, double x1, double x2, int iters) {
    const double h = boat.height(x1, x2, iters);
    if (std::isfinite(h)) return h;
    const double u = x1 / std::sqrt(1.0 + boat.r * boat.r);
    const double v = x2 / boat.r;
    const double outside = std::max(0.0, boat.profile.slack(u, v));
    return 1.0 + 16.0 * outside;
}

struct MembershipProgram {
    const BoatSet* boat;
    Point3 q;       // point tested, rotated coordinates
    int height_iters;

    // g(lambda) = max(fhat(y1,y2) - y3, fhat(y1,y2) - 1) with
    // y = q - sum lambda_i g_i. Nonpositive iff some positive-orthant shift
    // lands the point inside the boat.
    double operator()(const std::array<double, 3>& lam) const {
        const auto& g = orthant_generators();
        Point3 y = q;
        for (int i = 0; i < 3; ++i) y = y - lam[i] * g[i];
        const double fh = wall_height(*boat, y.x1, y.x2, height_iters);
        return std::max(fh - y.x3, fh - 1.0);
    }
};

struct DescentResult {
    double value = kInf;
    std::array<double, 3> lam{0.0, 0.0, 0.0};
};

// Projected coordinate descent with step halving. `stop_below`: a value known
// to settle the membership question; reaching it ends the search early. Once
// the incumbent sits far above `stop_below` relative to the remaining step,
// further halving cannot flip the verdict and the search ends. The cutoff
// factor is sized to the worst objective slopes and is cross-checked by the
// in-band identity tests.
DescentResult coordinate_descent(const MembershipProgram& prog,
                                 std::array<double, 3> lam, int max_iter,
                                 double stop_below, double step_floor) {
    constexpr double kStallSlope = 64.0;
    for (auto& v : lam) v = std::max(v, 0.0);
    double best = prog(lam);
    if (best <= stop_below) return {best, lam};

    double step = std::max(0.25, 0.125 * (lam[0] + lam[1] + lam[2]));
    static const std::array<std::array<double, 3>, 7> dirs = {{
        {1.0, 0.0, 0.0},
        {0.0, 1.0, 0.0},
        {0.0, 0.0, 1.0},
        {1.0, 1.0, 0.0},
        {1.0, 0.0, 1.0},
        {0.0, 1.0, 1.0},
        {1.0, 1.0, 1.0},
    }};

    for (int iter = 0; iter < max_iter; ++iter) {
        bool improved = false;
        // Axis moves first; the diagonal probes unstick creases of the
        // piecewise-smooth objective.
        for (std::size_t d = 0; d < dirs.size(); ++d) {
            if (d >= 3 && improved) break;
            for (double sign : {+1.0, -1.0}) {
                std::array<double, 3> cand = lam;
                bool moved = false;
                for (int i = 0; i < 3; ++i) {
                    if (dirs[d][i] == 0.0) continue;
                    const double next = std::max(0.0, cand[i] + sign * step);
                    if (next != cand[i]) moved = true;
                    cand[i] = next;
                }
                if (!moved) continue;
                const double val = prog(cand);
                if (val < best - 1e-15) {
                    best = val;
                    lam = cand;
                    improved = true;
                    if (best <= stop_below) return {best, lam};
                    break;
                }
            }
        }
        if (!improved) {
            step *= 0.5;
            if (step < step_floor * std::max(1.0, lam[0] + lam[1] + lam[2])) break;
            if (best - stop_below > kStallSlope * step) break;
        }
    }
    return {best, lam};
}

// Shared state for warm starts: consecutive membership queries along a grid
// column or scan move the optimum only slightly.
struct MembershipSolver {
    const AdmissibleTriple* triple;
    SolverConfig cfg;
    int height_iters = 34;
    double step_floor = 1e-10;  // descent resolution; deeper floors cut the
                                // wobble of the feasibility boundary
    std::array<double, 3> warm{0.0, 0.0, 0.0};

    double min_g(const Point3& q, double stop_below) {
        MembershipProgram prog{&triple->boat, q, height_iters};

        // Restart 1: warm start from the previous optimum.
        DescentResult best =
            coordinate_descent(prog, warm, cfg.cd_max_iter, stop_below, step_floor);
        if (best.value <= stop_below) {
            warm = best.lam;
            return best.value;
        }
        // Far above the decision scale a stuck descent cannot flip the
        // verdict; the extra restarts are reserved for the near-boundary band.
        if (best.value > stop_below + 0.05) {
            warm = best.lam;
            return best.value;
        }
        // Restart 2: the origin (skipped when the warm start already was it).
        const double warm_norm = warm[0] + warm[1] + warm[2];
        if (warm_norm > 1e-12 && cfg.cd_restarts > 1) {
            DescentResult r = coordinate_descent(prog, {0.0, 0.0, 0.0}, cfg.cd_max_iter,
                                                 stop_below, step_floor);
            if (r.value < best.value) best = r;
        }
        if (best.value > stop_below && cfg.cd_restarts > 2) {
            // Restart 3: shift heuristic, lambda ~ positive part of Phi(q - b)
            // for a crude clamp b of q into the boat.
            const Point3 b{std::clamp(q.x1, -1.0, 1.0), 0.0, std::clamp(q.x3, 0.0, 1.0)};
            const Point3 lam0 = rotate(q - b);
            std::array<double, 3> start{std::max(0.0, lam0.x1), std::max(0.0, lam0.x2),
                                        std::max(0.0, lam0.x3)};
            if (start[0] + start[1] + start[2] > 1e-12) {
                DescentResult r = coordinate_descent(prog, start, cfg.cd_max_iter,
                                                     stop_below, step_floor);
                if (r.value < best.value) best = r;
            }
        }
        warm = best.lam;
        return best.value;
    }

    bool contains(const Point3& q) {
        return min_g(q, cfg.membership_tol) <= cfg.membership_tol;
    }
};

// ---------------------------------------------------------------------------
// The risk program reduces to one dimension: in rotated coordinates the
// payoffs are (w1, 0, w3) and rho(x) = min_w1 h(w1) / sqrt(3), where h(w1) is
// the least w3 making p + (w1, 0, w3) acceptable. Whenever the shifted column
// meets the boat, the least w3 is the boat height minus p3 (the cone identity
// pins the acceptance set to the boat inside the height band); elsewhere h is
// found by bisection on w3 against the membership program.
// ---------------------------------------------------------------------------

struct ColumnEvaluator {
    const AdmissibleTriple* triple;
    SolverConfig cfg;
    Point3 p;  // rotated position
    mutable MembershipSolver membership;
    mutable bool last_band = true;

    explicit ColumnEvaluator(const AdmissibleTriple& t, const SolverConfig& c,
                             const Point3& rotated)
        : triple(&t), cfg(c), p(rotated), membership{&t, c, 44, 1e-13, {0, 0, 0}} {}

    double band(double w1) const {
        const double h = triple->boat.height(p.x1 + w1, p.x2);
        return std::isfinite(h) ? h - p.x3 : kInf;
    }

    double general(double w1) const {
        // Feasible w3 values form an upper ray; the acceptance set lies in
        // {x3 >= 0}, so the ray starts no lower than -p3.
        double lo = -p.x3 - 1e-9;
        double hi = std::max(1.0 - p.x3, lo + 1.0);
        const Point3 base{p.x1 + w1, p.x2, p.x3};
        while (!membership.contains({base.x1, base.x2, base.x3 + hi})) {
            hi = lo + 2.0 * (hi - lo);
            if (hi > cfg.w3_cap)
                throw SolverInfeasible("rho: no feasible payoff below the w3 cap");
        }
        for (int k = 0; k < 64 && hi - lo > 1e-12; ++k) {
            const double mid = 0.5 * (lo + hi);
            if (membership.contains({base.x1, base.x2, base.x3 + mid}))
                hi = mid;
            else
                lo = mid;
        }
        return hi;
    }

    double operator()(double w1) const {
        const double b = band(w1);
        if (std::isfinite(b)) {
            last_band = true;
            return b;
        }
        last_band = false;
        return general(w1);
    }
};

struct GoldenResult {
    double xmin = 0.0;
    double fmin = kInf;
};

GoldenResult golden_minimize(const ColumnEvaluator& h, double lo, double hi,
                             double tol) {
    constexpr double invphi = 0.6180339887498948482045868343656381;
    double a = lo, b = hi;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = h(c), fd = h(d);
    GoldenResult res;
    res.xmin = fc < fd ? c : d;
    res.fmin = std::min(fc, fd);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = h(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = h(d);
        }
        if (fc < res.fmin) {
            res.fmin = fc;
            res.xmin = c;
        }
        if (fd < res.fmin) {
            res.fmin = fd;
            res.xmin = d;
        }
    }
    return res;
}

struct MinimizeOutcome {
    GoldenResult g;
    double lo, hi;
};

MinimizeOutcome minimize_h(const ColumnEvaluator& h, const Point3& x,
                           const SolverConfig& cfg) {
    const double half = kSqrt3 * norm_inf(x) + cfg.bracket_pad;
    double lo = -h.p.x1 - half;
    double hi = -h.p.x1 + half;
    GoldenResult g = golden_minimize(h, lo, hi, cfg.search_tol);
    // Expand when the minimizer lands on an edge of the bracket.
    for (int grow = 0; grow < 40; ++grow) {
        const double width = hi - lo;
        if (g.xmin > lo + 2.0 * cfg.search_tol && g.xmin < hi - 2.0 * cfg.search_tol)
            break;
        if (g.xmin <= lo + 2.0 * cfg.search_tol)
            lo -= width;
        else
            hi += width;
        g = golden_minimize(h, lo, hi, cfg.search_tol);
    }
    return {g, lo, hi};
}

Point3 payoff_point(double w1, double w3) { return rotate({w1, 0.0, w3}); }

}  // namespace

bool acceptance_membership(const Point3& p, const AdmissibleTriple& triple,
                           const SolverConfig& cfg) {
    MembershipSolver s{&triple, cfg, 40, 1e-10, {0.0, 0.0, 0.0}};
    return s.contains(p);
}

bool acceptance_contains(const AdmissibleTriple& triple, const Point3& x,
                         const SolverConfig& cfg) {
    return acceptance_membership(triple.rotation().apply_inv(x), triple, cfg);
}

RhoResult rho_eval(const Point3& x, const AdmissibleTriple& triple,
                   const SolverConfig& cfg) {
    ColumnEvaluator h(triple, cfg, triple.rotation().apply_inv(x));
    const MinimizeOutcome out = minimize_h(h, x, cfg);
    h(out.g.xmin);  // classify the path at the reported minimizer
    return {out.g.fmin / kSqrt3, h.last_band};
}

OptimalSet optimal_set(const Point3& x, const AdmissibleTriple& triple,
                       const SolverConfig& cfg) {
    ColumnEvaluator h(triple, cfg, triple.rotation().apply_inv(x));
    const MinimizeOutcome out = minimize_h(h, x, cfg);
    double hstar = out.g.fmin;
    double center = out.g.xmin;
    h(center);
    const bool band = h.last_band;

    // Outward doubling then edge bisection of the sublevel {h <= cut}.
    auto sublevel_edge = [&](double from, double dir, double cut) {
        double inside = from;
        double step = std::max(4.0 * cfg.search_tol, cfg.face_tol);
        double probe = inside + dir * step;
        while (h(probe) <= cut) {
            inside = probe;
            step *= 2.0;
            probe = inside + dir * step;
            if (std::abs(probe) > std::abs(from) + 4.0 * (out.hi - out.lo)) break;
        }
        double outside = probe;
        while (std::abs(outside - inside) > cfg.face_tol) {
            const double mid = 0.5 * (inside + outside);
            if (h(mid) <= cut)
                inside = mid;
            else
                outside = mid;
        }
        return inside;
    };

    // General-path heights carry the wobble of the membership program; the
    // golden minimizer of a shallow minimum is then only localized to
    // sqrt(noise/curvature). Re-center on the midpoint of a sublevel interval
    // taken safely above that noise.
    if (!band) {
        const double loc = hstar + std::max(cfg.flat_tol * kSqrt3, 1e-7);
        const double lo = sublevel_edge(center, -1.0, loc);
        const double hi = sublevel_edge(center, +1.0, loc);
        const double mid = 0.5 * (lo + hi);
        const double hm = h(mid);
        if (hm <= hstar + 1e-9) {
            center = mid;
            hstar = std::min(hstar, hm);
        }
    }

    // The optimal face {w1 : h(w1) <= h* + flat_tol}, with the cut held above
    // the height noise of the evaluation path.
    const double noise = band ? 0.0 : 1e-11;
    const double cut = hstar + std::max(cfg.flat_tol * kSqrt3, noise);

    OptimalSet set;
    set.w1.lo = sublevel_edge(center, -1.0, cut);
    set.w1.hi = sublevel_edge(center, +1.0, cut);
    set.rho = hstar / kSqrt3;
    set.w3_star = hstar;
    set.endpoint_lo = payoff_point(set.w1.lo, set.w3_star);
    set.endpoint_hi = payoff_point(set.w1.hi, set.w3_star);
    set.singleton = set.w1.width() <= 2.0 * cfg.search_tol;
    set.band_path = band;
    return set;
}

// ---------------------------------------------------------------------------
// Independent oracle. Multi-resolution (w1, w3) grid sweep; every probe is an
// acceptance_membership call. Stages refine only columns whose value can
// still reach the incumbent under the slope bound — a certified
// branch-and-bound, not a convexity shortcut.
// ---------------------------------------------------------------------------

namespace {

struct OracleColumn {
    double w1;
    double h;  // grid-quantized column minimum, +inf if pruned/infeasible
};

class OracleSweep {
public:
    OracleSweep(const AdmissibleTriple& triple, const SolverConfig& cfg, const Point3& p)
        : p_(p), membership_{&triple, cfg, 20, 1e-8, {0.0, 0.0, 0.0}}, cfg_(cfg) {}

    // Least feasible w3 on the grid {w3lo + k res}, or +inf if none at or
    // below `cap`. Searching on the grid index is valid because feasible w3
    // per column is an upper ray; index -1 sits below {x3 >= 0} and is
    // infeasible without probing. Probe placement is guided by the program
    // value of failed probes: min g > tol at w3 certifies infeasibility of
    // every level below w3 + (min g - tol), since g falls at most 1:1 in w3.
    // Placement is a hint only; lo/hi move strictly on probe outcomes.
    // `hint` (the previous column's minimum) tightens the initial bracket.
    double column_min(double w1, double res, double cap, double hint = kInf) {
        const double w3lo = -p_.x3 - 2.0 * res;
        const long kcap = std::max<long>(0, std::lround(std::ceil((cap - w3lo) / res)));
        const double tol = cfg_.membership_tol;
        long lo = -1, hi = -2;  // hi = -2: feasibility not yet established
        bool jump_next = false;
        long jump_to = 0;

        if (std::isfinite(hint)) {
            const long kh = std::lround((hint - w3lo) / res);
            const long khi = std::min(kcap, kh + 4);
            const long klo = std::max<long>(-1, kh - 4);
            if (khi >= 0 && value(w1, w3lo + static_cast<double>(khi) * res) <= tol) {
                hi = khi;
                if (klo > lo) {
                    const double m = value(w1, w3lo + static_cast<double>(klo) * res);
                    if (m > tol) {
                        lo = klo;
                        jump_to = klo + static_cast<long>((m - tol) / res);
                        jump_next = jump_to > lo + 1;
                    }
                }
            }
        }
        if (hi < 0) {
            if (value(w1, w3lo + static_cast<double>(kcap) * res) > tol) return kInf;
            hi = kcap;
        }
        while (hi - lo > 1) {
            long k;
            if (jump_next && jump_to > lo && jump_to < hi) {
                k = jump_to;
                jump_next = false;
            } else {
                k = lo + (hi - lo) / 2;
            }
            const double m = value(w1, w3lo + static_cast<double>(k) * res);
            if (m <= tol) {
                hi = k;
            } else {
                lo = k;
                jump_to = k + static_cast<long>((m - tol) / res);
                jump_next = jump_to > lo + 1;
            }
        }
        return w3lo + static_cast<double>(hi) * res;
    }

    double value(double w1, double w3) {
        return membership_.min_g({p_.x1 + w1, p_.x2, p_.x3 + w3}, cfg_.membership_tol);
    }

private:
    Point3 p_;
    MembershipSolver membership_;
    SolverConfig cfg_;
};

}  // namespace

OracleResult brute_force_oracle(const Point3& x, const AdmissibleTriple& triple,
                                double grid_step, const SolverConfig& cfg) {
    if (grid_step <= 0.0) throw std::invalid_argument("oracle: grid_step must be > 0");
    const Point3 p = triple.rotation().apply_inv(x);
    OracleSweep sweep(triple, cfg, p);

    // Resolution ladder down to the requested step.
    std::vector<double> ladder{grid_step};
    while (ladder.back() < 1.5e-2) ladder.push_back(4.0 * ladder.back());
    std::reverse(ladder.begin(), ladder.end());

    const double half = kSqrt3 * norm_inf(x) + cfg.bracket_pad;
    double region_lo = -p.x1 - half;
    double region_hi = -p.x1 + half;

    std::vector<OracleColumn> cols;
    double best = kInf;

    for (std::size_t stage = 0; stage < ladder.size(); ++stage) {
        const double res = ladder[stage];
        // A column within res/2 of the true minimizer reads at most
        // (L/2) res above it plus one quantization step.
        const double margin = (1.0 + 0.5 * kSlopeBound) * res;

        std::vector<double> grid;
        if (stage == 0) {
            for (double w = region_lo; w <= region_hi + 0.5 * res; w += res)
                grid.push_back(w);
        } else {
            // Refine a neighborhood of every surviving candidate.
            const double prev = ladder[stage - 1];
            std::vector<std::pair<double, double>> spans;
            for (const auto& c : cols)
                if (c.h <= best + (1.0 + 0.5 * kSlopeBound) * prev)
                    spans.emplace_back(c.w1 - prev, c.w1 + prev);
            std::sort(spans.begin(), spans.end());
            double cur_lo = kInf, cur_hi = -kInf;
            auto flush = [&]() {
                if (cur_lo > cur_hi) return;
                for (double w = cur_lo; w <= cur_hi + 0.5 * res; w += res)
                    grid.push_back(w);
            };
            for (const auto& s : spans) {
                if (s.first > cur_hi + res) {
                    flush();
                    cur_lo = s.first;
                    cur_hi = s.second;
                } else {
                    cur_hi = std::max(cur_hi, s.second);
                }
            }
            flush();
        }

        // Seed the incumbent from the bracket center on the first stage.
        if (stage == 0 && !grid.empty()) {
            const double center = -p.x1;
            double cap0 = 1.0 - p.x3 + 1.0;
            double h0 = sweep.column_min(center, res, cap0);
            while (!std::isfinite(h0)) {
                cap0 = -p.x3 + 2.0 * (cap0 + p.x3);
                if (cap0 > cfg.w3_cap)
                    throw SolverInfeasible("oracle: no feasible payoff below the cap");
                h0 = sweep.column_min(center, res, cap0);
            }
            best = h0;
        }

        std::vector<OracleColumn> next;
        next.reserve(grid.size());
        double hint = kInf;
        for (double w1 : grid) {
            const double h = sweep.column_min(w1, res, best + margin, hint);
            if (std::isfinite(h)) hint = h;
            if (h < best) best = h;
            next.push_back({w1, h});
        }
        cols = std::move(next);
    }

    OracleResult result;
    result.rho = best / kSqrt3;
    const double res = grid_step;
    double lo = kInf, hi = -kInf;
    for (const auto& c : cols) {
        if (c.h <= best + 0.75 * res) {
            lo = std::min(lo, c.w1);
            hi = std::max(hi, c.w1);
        }
    }
    result.w1_range = {lo, hi};
    return result;
}

}  // namespace hedgemap
