#pragma once

#include <cmath>
#include <stdexcept>

#include "ncsim/machine.hpp"
#include "ncsim/scurve.hpp"
#include "ncsim/vec3.hpp"

namespace ncsim {

/// Circular arc in an arbitrary plane. Points are parametrized by the swept
/// angle theta in [0, sweep]:
///   P(theta) = center + R (cos(theta) u + sin(theta) v)
/// with u the unit radial at the start point, w the plane normal oriented so
/// travel is counter-clockwise in the (u, v) frame, and v = w x u.
struct ArcGeometry {
    Vec3 center{};
    double radius = 0.0;
    Vec3 u{};
    Vec3 v{};
    Vec3 w{};
    double sweep = 0.0;  // (0, 2*pi]

    double length() const { return radius * sweep; }
};

inline Vec3 arc_point(const ArcGeometry& g, double theta) {
    return g.center + g.radius * (std::cos(theta) * g.u + std::sin(theta) * g.v);
}

/// Unit tangent in the direction of travel.
inline Vec3 arc_tangent(const ArcGeometry& g, double theta) {
    return -std::sin(theta) * g.u + std::cos(theta) * g.v;
}

inline Vec3 arc_radial(const ArcGeometry& g, double theta) {
    return std::cos(theta) * g.u + std::sin(theta) * g.v;
}

/// Build the arc frame from endpoints, center, handedness about a plane
/// normal, and an optional full-circle flag (start == end).
///
/// `ccw` is interpreted looking against `normal` (right-hand rule), matching
/// the usual G-code plane conventions when `normal` is the plane's +axis.
inline ArcGeometry arc_frames(const Vec3& start, const Vec3& end, const Vec3& center,
                              bool ccw, const Vec3& normal, bool full_circle = false) {
    Vec3 r1 = start - center;
    double R = norm(r1);
    if (R <= 0.0) throw std::invalid_argument("arc: zero radius");
    Vec3 r2 = end - center;
    double R2 = norm(r2);
    if (std::fabs(R2 - R) > 1e-6 * R)
        throw std::invalid_argument("arc: endpoint radii differ beyond 1e-6 relative");
    double nn = norm(normal);
    if (nn <= 0.0) throw std::invalid_argument("arc: zero plane normal");

    ArcGeometry g;
    g.center = center;
    g.radius = R;
    g.u = r1 / R;
    g.w = (ccw ? normal / nn : Vec3{} - normal / nn);
    if (std::fabs(dot(g.w, g.u)) > 1e-9)
        throw std::invalid_argument("arc: plane normal not perpendicular to radius");
    if (std::fabs(dot(r2, g.w)) > 1e-6 * R)
        throw std::invalid_argument("arc: endpoint out of arc plane");
    g.v = cross(g.w, g.u);

    if (norm(end - start) <= 1e-12 * std::max(1.0, R)) {
        if (!full_circle) throw std::invalid_argument("arc: degenerate (start == end)");
        g.sweep = 2.0 * M_PI;
        return g;
    }
    Vec3 e = r2 / R2;
    double a = std::atan2(dot(e, g.v), dot(e, g.u));
    if (a <= 0.0) a += 2.0 * M_PI;
    g.sweep = a;
    return g;
}

/// Angular jerk cap (rad/s^3) from per-axis jerk caps: six candidates, three
/// axes at the arc entry (entry angular speed) and three at the exit, each
///   J_i = j_max,i / (R |t_i|) + omega^3
/// with t_i the machine-axis component of the local tangent; axes with
/// |t_i| < 1e-9 are excluded. Additionally capped so R * J_c <= jc_max.
inline double curvilinear_jerk(const ArcGeometry& g, double omega_in, double omega_out,
                               const MachineLimits& lim) {
    double R = g.radius;
    double best = lim.jc_max / R;
    auto consider = [&](double theta, double omega) {
        Vec3 t = arc_tangent(g, theta);
        for (int a = 0; a < 3; ++a) {
            double ta = std::fabs(t[a]);
            if (ta < 1e-9) continue;
            double cand = lim.j_max[a] / (R * ta) + omega * omega * omega;
            best = std::min(best, cand);
        }
    };
    consider(0.0, omega_in);
    consider(g.sweep, omega_out);
    return best;
}

/// Angular acceleration candidates (rad/s^2) at one evaluation state
/// (theta, omega): per axis the largest A with
///   |R A t_i - R omega^2 r_i| <= a_max,i.
/// Axes with |t_i| < 1e-9 contribute only the centripetal feasibility check;
/// `feasible` turns false when centripetal demand alone exceeds an axis cap.
inline double curvilinear_acceleration(const ArcGeometry& g, double theta, double omega,
                                       const MachineLimits& lim, bool& feasible) {
    double R = g.radius;
    Vec3 t = arc_tangent(g, theta);
    Vec3 r = arc_radial(g, theta);
    double best = INFINITY;
    for (int a = 0; a < 3; ++a) {
        double centr = R * omega * omega * r[a];
        if (std::fabs(centr) > lim.a_max[a] * (1.0 + 1e-12)) feasible = false;
        double ta = t[a];
        if (std::fabs(ta) < 1e-9) continue;
        double sgn = ta > 0.0 ? 1.0 : -1.0;
        double cand = (lim.a_max[a] + sgn * centr) / (R * std::fabs(ta));
        best = std::min(best, std::max(cand, 0.0));
    }
    return best;
}

/// Planned arc traversal: a seven-phase schedule in the angular domain.
struct ArcPlan {
    ArcGeometry geom{};
    PhaseSchedule schedule{};  // position = swept angle [rad]
    double j_ang = 0.0;        // angular jerk cap used [rad/s^3]
    double a_ang = 0.0;        // angular acceleration cap used [rad/s^2]
    double v_cruise = 0.0;     // tangential cruise target actually used [m/s]
    bool clamped_vf = false;   // feed lowered by centripetal/velocity caps
    bool feasible = true;      // centripetal demand within axis caps

    double duration() const { return schedule.duration(); }
};

inline ArcPlan plan_arc_block(const ArcGeometry& g, double v_f, double v_in, double v_out,
                              const MachineLimits& lim) {
    if (!(g.sweep > 0.0) || !(g.radius > 0.0))
        throw std::invalid_argument("plan_arc_block: empty arc");
    ArcPlan plan;
    plan.geom = g;
    double R = g.radius;

    double v_ceiling = std::min(std::sqrt(lim.min_a_max() * R), lim.min_v_max());
    plan.v_cruise = std::min(v_f, v_ceiling);
    plan.clamped_vf = plan.v_cruise < v_f * (1.0 - 1e-12);

    double w_in = v_in / R, w_out = v_out / R, w_c = plan.v_cruise / R;
    plan.j_ang = curvilinear_jerk(g, w_in, w_out, lim);

    // First pass: approximate the end-of-first-jerk-phase states assuming
    // unsaturated ramps (angle from a pure jerk ramp, speed at mid-ramp).
    auto ramp_state = [&](double w0, double wc, double& theta1, double& w1) {
        double dv = std::max(wc - w0, 0.0);
        double tau = std::sqrt(dv / plan.j_ang);
        theta1 = w0 * tau + plan.j_ang * tau * tau * tau / 6.0;
        w1 = 0.5 * (w0 + wc);
    };
    double th_a, w_a, th_b, w_b;
    ramp_state(w_in, w_c, th_a, w_a);
    ramp_state(w_out, w_c, th_b, w_b);
    th_b = g.sweep - th_b;

    bool feasible = true;
    plan.a_ang = std::min(curvilinear_acceleration(g, th_a, w_a, lim, feasible),
                          curvilinear_acceleration(g, th_b, w_b, lim, feasible));
    ProfileRequest req{g.sweep, w_in, w_out, w_c, plan.a_ang, plan.j_ang};
    plan.schedule = solve_schedule(req);

    // One fixed-point refinement with the actual phase-boundary states:
    // entry ramp evaluated at the end of phase 1, exit ramp at the start of
    // the deceleration hold (end of phase 5).
    double th1 = plan.schedule.node[1].pos, om1 = plan.schedule.node[1].vel;
    double th5 = plan.schedule.node[5].pos, om5 = plan.schedule.node[5].vel;
    double a2 = std::min(curvilinear_acceleration(g, th1, om1, lim, feasible),
                         curvilinear_acceleration(g, th5, om5, lim, feasible));
    if (std::fabs(a2 - plan.a_ang) > 1e-9 * plan.a_ang) {
        plan.a_ang = a2;
        req.a_cap = a2;
        plan.schedule = solve_schedule(req);
    }
    plan.feasible = feasible;
    return plan;
}

/// World-frame kinematics on the arc:
///   velocity     = R w' e_theta
///   acceleration = R w'' e_theta - R w'^2 e_r
///   jerk         = R (w''' - w'^3) e_theta - 3 R w'' w' e_r
inline Sample3 evaluate_arc(const ArcPlan& p, double t) {
    KinematicSample s = evaluate(p.schedule, t);
    double R = p.geom.radius;
    Vec3 et = arc_tangent(p.geom, s.pos);
    Vec3 er = arc_radial(p.geom, s.pos);
    Sample3 out;
    out.pos = p.geom.center + R * er;
    out.vel = R * s.vel * et;
    out.acc = R * s.acc * et - R * s.vel * s.vel * er;
    out.jerk = R * (s.jerk - s.vel * s.vel * s.vel) * et - 3.0 * R * s.acc * s.vel * er;
    return out;
}

}  // namespace ncsim
