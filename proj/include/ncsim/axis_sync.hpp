#pragma once

#include <cmath>
#include <stdexcept>

#include "ncsim/machine.hpp"
#include "ncsim/scurve.hpp"
#include "ncsim/vec3.hpp"

namespace ncsim {

/// Index of the axis that would take longest to traverse its own displacement
/// component standalone (entry/exit at rest scaled by its direction share,
/// cruise at its own speed cap). Zero-displacement axes are excluded.
inline int limiting_axis(const Vec3& displacement, const MachineLimits& lim) {
    double L = norm(displacement);
    if (L <= 0.0) throw std::invalid_argument("limiting_axis: zero displacement");
    int best = -1;
    double best_t = -1.0;
    for (int a = 0; a < 3; ++a) {
        double la = std::fabs(displacement[a]);
        if (la < 1e-12 * L) continue;
        ProfileRequest r{la, 0.0, 0.0, lim.v_max[a], lim.a_max[a], lim.j_max[a]};
        double t = solve_schedule(r).duration();
        if (t > best_t) {
            best_t = t;
            best = a;
        }
    }
    return best;
}

/// Linear block plan: a scalar seven-phase schedule over the path arc length,
/// mapped to axes through the fixed unit direction. Effective path caps are
/// the most restrictive axis caps scaled by direction components, so per-axis
/// kinematics never exceed machine limits.
struct SyncedLinearPlan {
    Vec3 start{};
    Vec3 dir{};        // unit direction
    double length = 0.0;
    PhaseSchedule schedule{};
    int limiting = -1;     // reported limiting axis
    double v_path_cap = 0.0;  // path speed ceiling from axis velocity caps

    double duration() const { return schedule.duration(); }
};

/// Most restrictive path-level cap given per-axis caps and a unit direction:
/// min over active axes of cap_i / |u_i|.
inline double path_cap(const Vec3& caps, const Vec3& u) {
    double c = INFINITY;
    for (int a = 0; a < 3; ++a) {
        double ua = std::fabs(u[a]);
        if (ua < 1e-12) continue;
        c = std::min(c, caps[a] / ua);
    }
    return c;
}

inline SyncedLinearPlan plan_linear_block(const Vec3& start, const Vec3& end, double v_f,
                                          double v_in, double v_out,
                                          const MachineLimits& lim) {
    Vec3 d = end - start;
    double L = norm(d);
    if (L <= 0.0) throw std::invalid_argument("plan_linear_block: zero-length block");
    SyncedLinearPlan plan;
    plan.start = start;
    plan.dir = d / L;
    plan.length = L;
    plan.v_path_cap = path_cap(lim.v_max, plan.dir);
    double a_cap = path_cap(lim.a_max, plan.dir);
    double j_cap = path_cap(lim.j_max, plan.dir);
    double vf_eff = std::min(v_f, plan.v_path_cap);
    ProfileRequest req{L, v_in, v_out, vf_eff, a_cap, j_cap};
    plan.schedule = solve_schedule(req);
    plan.limiting = limiting_axis(d, lim);
    return plan;
}

struct Sample3 {
    Vec3 pos{};
    Vec3 vel{};
    Vec3 acc{};
    Vec3 jerk{};
};

inline Sample3 evaluate_linear(const SyncedLinearPlan& p, double t) {
    KinematicSample s = evaluate(p.schedule, t);
    return {p.start + p.dir * s.pos, p.dir * s.vel, p.dir * s.acc, p.dir * s.jerk};
}

}  // namespace ncsim
