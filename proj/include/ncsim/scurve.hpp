#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ncsim/newton.hpp"
#include "ncsim/roots.hpp"

namespace ncsim {

/// One-dimensional motion request: cover `length` starting at speed v_in and
/// ending at v_out, cruising at most at v_f, under acceleration and jerk caps.
/// Speeds are magnitudes along the (curvilinear) path coordinate; the planner
/// guarantees v_f >= max(v_in, v_out).
struct ProfileRequest {
    double length = 0.0;
    double v_in = 0.0;
    double v_out = 0.0;
    double v_f = 0.0;
    double a_cap = 0.0;
    double j_cap = 0.0;
};

/// Resolution taken by the seven-phase solver.
///
/// case1/case2:  v_out unreachable within length; a single maximal ramp covers
///               the block and exits at an adjusted speed (with / without the
///               acceleration cap being reached).
/// case3..case6: v_out reachable but v_f not; the profile peaks at an adjusted
///               cruise speed v_peak < v_f with no cruise phase. The four cases
///               split by whether each ramp saturates the acceleration cap
///               (3: both, 4: entry only, 5: exit only, 6: neither).
/// case7..case10: v_f reached, cruise phase present (possibly zero-length at
///               the exact boundary). Same saturation split (7: both, 8: entry
///               only, 9: exit only, 10: neither).
/// degenerate_cruise: v_in = v_out = v_f; pure cruise.
enum class CaseId {
    case1, case2, case3, case4, case5, case6, case7, case8, case9, case10,
    degenerate_cruise
};

inline const char* to_string(CaseId c) {
    switch (c) {
        case CaseId::case1: return "1";
        case CaseId::case2: return "2";
        case CaseId::case3: return "3";
        case CaseId::case4: return "4";
        case CaseId::case5: return "5";
        case CaseId::case6: return "6";
        case CaseId::case7: return "7";
        case CaseId::case8: return "8";
        case CaseId::case9: return "9";
        case CaseId::case10: return "10";
        case CaseId::degenerate_cruise: return "degenerate-cruise";
    }
    return "?";
}

struct PhaseState {
    double pos = 0.0;
    double vel = 0.0;
    double acc = 0.0;
};

struct KinematicSample {
    double pos = 0.0;
    double vel = 0.0;
    double acc = 0.0;
    double jerk = 0.0;
};

/// Solved seven-phase schedule. Phase k (0-based) runs for tau[k] seconds at
/// constant jerk jerk[k]; node[k] is the state at the start of phase k, node[7]
/// the final state. Phases: jerk-up, hold accel, jerk-down, cruise, jerk-down,
/// hold decel, jerk-up. Acceleration is zero at entry, cruise, and exit.
struct PhaseSchedule {
    std::array<double, 7> tau{};
    std::array<double, 7> jerk{};
    std::array<PhaseState, 8> node{};
    CaseId case_id = CaseId::degenerate_cruise;
    double v_peak = 0.0;  // cruise speed actually reached (v_f or adjusted)
    double v_exit = 0.0;  // exit speed actually reached (v_out or adjusted)

    double duration() const {
        double s = 0.0;
        for (double t : tau) s += t;
        return s;
    }
};

namespace scurve_detail {

constexpr double kRelBand = 1e-12;

/// Distance covered by a maximal (jerk-limited, possibly accel-saturated) ramp
/// between speeds v1 and v2 with zero acceleration at both ends.
inline double ramp_distance(double v1, double v2, double A, double J) {
    double d = std::fabs(v2 - v1);
    if (d == 0.0) return 0.0;
    if (d >= A * A / J) return (v1 + v2) * (A * A + J * d) / (2.0 * A * J);
    return (v1 + v2) * std::sqrt(d / J);
}

/// Duration of the same maximal ramp.
inline double ramp_time(double v1, double v2, double A, double J) {
    double d = std::fabs(v2 - v1);
    if (d == 0.0) return 0.0;
    if (d >= A * A / J) return A / J + d / A;
    return 2.0 * std::sqrt(d / J);
}

}  // namespace scurve_detail

/// Highest speed reachable with a single maximal accelerating ramp that covers
/// exactly `length`, starting from v_from with zero end accelerations.
/// This is the reachability bound inverted by the planner's feasibility passes.
inline double max_reachable_speed(double v_from, double length, double A, double J) {
    using namespace scurve_detail;
    if (length <= 0.0) return v_from;
    double d_knee = (2.0 * v_from + A * A / J) * (A / J);  // just-saturating ramp
    if (length >= d_knee) {
        // saturated: J V^2 + A^2 V + (A^2 v - J v^2 - 2 A J L) = 0, positive root
        double c = A * A * v_from - J * v_from * v_from - 2.0 * A * J * length;
        double disc = A * A * A * A - 4.0 * J * c;
        return (-A * A + std::sqrt(disc)) / (2.0 * J);
    }
    // unsaturated: J tau^3 + 2 v tau - L = 0, unique positive root
    auto roots = solve_cubic_real(J, 0.0, 2.0 * v_from, -length);
    for (double t : roots)
        if (t > 0.0) return v_from + J * t * t;
    throw std::logic_error("max_reachable_speed: no positive cubic root");
}

namespace scurve_detail {

struct RampSplit {
    double t1 = 0.0;  // jerk phase length (each side)
    double t2 = 0.0;  // accel hold length
    bool saturated = false;
};

/// Split a ramp of speed change `dv` (>= 0) into jerk / hold legs.
inline RampSplit split_ramp(double dv, double A, double J) {
    RampSplit r;
    if (dv <= 0.0) return r;
    if (dv >= A * A / J * (1.0 - kRelBand)) {
        r.saturated = true;
        r.t1 = A / J;
        r.t2 = std::max(0.0, dv / A - A / J);
    } else {
        r.t1 = std::sqrt(dv / J);
        r.t2 = 0.0;
    }
    return r;
}

/// Exit speed of a maximal braking ramp covering exactly `length` from v_from.
/// Root selection: the least-aggressive consistent trajectory (smallest
/// positive jerk time for the unsaturated cubic; largest admissible speed for
/// the saturated quadratic).
inline double min_braked_speed(double v_from, double length, double A, double J,
                               bool& saturated) {
    // unsaturated candidate: 2 v tau - J tau^3 = L, smallest positive root
    auto roots = solve_cubic_real(-J, 0.0, 2.0 * v_from, -length);
    double tau_u = -1.0;
    for (double t : roots) {
        if (t > 0.0) {
            tau_u = t;
            break;
        }
    }
    if (tau_u > 0.0 && J * tau_u < A * (1.0 - kRelBand) &&
        v_from - J * tau_u * tau_u > -1e-12) {
        saturated = false;
        return std::max(0.0, v_from - J * tau_u * tau_u);
    }
    // saturated: J V^2 - A^2 V - (A^2 v + J v^2 - 2 A J L) = 0
    double c = A * A * v_from + J * v_from * v_from - 2.0 * A * J * length;
    double disc = A * A * A * A + 4.0 * J * c;
    if (disc < 0.0) throw std::logic_error("min_braked_speed: no saturated root");
    double sq = std::sqrt(disc);
    double knee = v_from - A * A / J;
    double vplus = (A * A + sq) / (2.0 * J);
    double vminus = (A * A - sq) / (2.0 * J);
    saturated = true;
    if (vplus <= knee * (1.0 + kRelBand) + 1e-15 && vplus >= -1e-12)
        return std::max(0.0, vplus);
    if (vminus >= -1e-12 && vminus <= knee * (1.0 + kRelBand) + 1e-15)
        return std::max(0.0, vminus);
    throw std::logic_error("min_braked_speed: no admissible root");
}

/// Peak speed of the cruise-less profile (cases 3-6): unique v in
/// [max(v_in,v_out), v_f] with ramp_distance(v_in,v) + ramp_distance(v,v_out)
/// equal to length. The sum is strictly increasing in v, so bisection is exact
/// enough for classification and for seeding the case systems.
inline double solve_peak_bisect(const ProfileRequest& r) {
    double lo = std::max(r.v_in, r.v_out);
    double hi = r.v_f;
    auto dist = [&](double v) {
        return ramp_distance(r.v_in, v, r.a_cap, r.j_cap) +
               ramp_distance(v, r.v_out, r.a_cap, r.j_cap) - r.length;
    };
    for (int it = 0; it < 200 && hi - lo > 1e-16 * std::max(1.0, hi); ++it) {
        double mid = 0.5 * (lo + hi);
        (dist(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

inline void validate(const ProfileRequest& r) {
    auto bad = [](double v) { return !std::isfinite(v); };
    if (bad(r.length) || bad(r.v_in) || bad(r.v_out) || bad(r.v_f) || bad(r.a_cap) ||
        bad(r.j_cap))
        throw std::invalid_argument("profile request: non-finite input");
    if (r.length < 0.0) throw std::invalid_argument("profile request: negative length");
    if (r.v_in < 0.0 || r.v_out < 0.0 || r.v_f < 0.0)
        throw std::invalid_argument("profile request: negative speed");
    if (r.a_cap <= 0.0 || r.j_cap <= 0.0)
        throw std::invalid_argument("profile request: caps must be positive");
    double vmax = std::max(r.v_in, r.v_out);
    if (r.v_f < vmax * (1.0 - 1e-9))
        throw std::invalid_argument("profile request: v_f below boundary speeds");
    if (r.length == 0.0 && std::fabs(r.v_in - r.v_out) > 1e-12 * std::max(1.0, vmax))
        throw std::invalid_argument("profile request: zero length with v_in != v_out");
    if (r.length > 0.0 && r.v_f <= 0.0)
        throw std::invalid_argument("profile request: zero cruise speed over positive length");
}

}  // namespace scurve_detail

/// Resolve which of the ten cases (or the degenerate cruise) applies.
inline CaseId classify_case(const ProfileRequest& r) {
    using namespace scurve_detail;
    validate(r);
    if (r.length == 0.0) return CaseId::degenerate_cruise;
    double band = kRelBand * std::max({1.0, r.length, r.v_f});
    if (std::fabs(r.v_in - r.v_f) <= band && std::fabs(r.v_out - r.v_f) <= band)
        return CaseId::degenerate_cruise;

    double A = r.a_cap, J = r.j_cap;
    double d_direct = ramp_distance(r.v_in, r.v_out, A, J);
    if (r.length < d_direct - band) {
        // exit speed unreachable: single maximal ramp
        if (r.v_out >= r.v_in) {
            double d_knee = (2.0 * r.v_in + A * A / J) * (A / J);
            return r.length >= d_knee ? CaseId::case1 : CaseId::case2;
        }
        bool sat = false;
        (void)min_braked_speed(r.v_in, r.length, A, J, sat);
        return sat ? CaseId::case1 : CaseId::case2;
    }
    double d_full = ramp_distance(r.v_in, r.v_f, A, J) + ramp_distance(r.v_f, r.v_out, A, J);
    double knee = A * A / J * (1.0 - kRelBand);
    if (r.length >= d_full - band) {
        bool s1 = (r.v_f - r.v_in) >= knee;
        bool s2 = (r.v_f - r.v_out) >= knee;
        if (s1 && s2) return CaseId::case7;
        if (s1) return CaseId::case8;
        if (s2) return CaseId::case9;
        return CaseId::case10;
    }
    double vp = solve_peak_bisect(r);
    bool s1 = (vp - r.v_in) >= knee;
    bool s2 = (vp - r.v_out) >= knee;
    if (s1 && s2) return CaseId::case3;
    if (s1) return CaseId::case4;
    if (s2) return CaseId::case5;
    return CaseId::case6;
}

namespace scurve_detail {

/// Assemble the schedule from ramp splits and cruise time, integrating exact
/// piecewise-cubic states across the seven phases.
inline PhaseSchedule assemble(const ProfileRequest& r, CaseId id, double v_peak,
                              double v_exit, const RampSplit& up, const RampSplit& dn,
                              double tau4) {
    PhaseSchedule s;
    s.case_id = id;
    s.v_peak = v_peak;
    s.v_exit = v_exit;
    double J = r.j_cap;
    double sgn1 = (v_peak > r.v_in) ? 1.0 : (v_peak < r.v_in ? -1.0 : 0.0);
    double sgn2 = (v_exit > v_peak) ? 1.0 : (v_exit < v_peak ? -1.0 : 0.0);
    s.tau = {up.t1, up.t2, up.t1, tau4, dn.t1, dn.t2, dn.t1};
    s.jerk = {sgn1 * J, 0.0, -sgn1 * J, 0.0, sgn2 * J, 0.0, -sgn2 * J};
    s.node[0] = {0.0, r.v_in, 0.0};
    for (int k = 0; k < 7; ++k) {
        const PhaseState& n = s.node[k];
        double t = s.tau[k], j = s.jerk[k];
        s.node[k + 1].pos = n.pos + n.vel * t + 0.5 * n.acc * t * t + j * t * t * t / 6.0;
        s.node[k + 1].vel = n.vel + n.acc * t + 0.5 * j * t * t;
        s.node[k + 1].acc = n.acc + j * t;
    }
    // clean up residual round-off at the structural zeros
    s.node[3].acc = 0.0;
    s.node[4].acc = 0.0;
    s.node[7].acc = 0.0;
    double scale = std::max(1.0, r.length);
    if (std::fabs(s.node[7].pos - r.length) > 1e-9 * scale)
        throw std::logic_error("solve_schedule: end position mismatch (" +
                               std::to_string(s.node[7].pos) + " vs " +
                               std::to_string(r.length) + ")");
    if (std::fabs(s.node[7].vel - v_exit) > 1e-9 * std::max(1.0, v_exit))
        throw std::logic_error("solve_schedule: end velocity mismatch");
    return s;
}

/// Newton solve of the case 3-6 systems. Unknowns are (entry knob, exit knob,
/// v_peak) where the knob is the hold time for a saturated ramp and the jerk
/// time for an unsaturated one. Equations: the two ramp speed-gain identities
/// and the length closure.
inline std::array<double, 3> solve_case_system(const ProfileRequest& r, bool sat_up,
                                               bool sat_dn, double seed_vp) {
    double A = r.a_cap, J = r.j_cap;
    double vin = r.v_in, vout = r.v_out, L = r.length;

    auto residual = [=](const std::array<double, 3>& x) -> std::array<double, 3> {
        double k1 = x[0], k2 = x[1], vp = x[2];
        double r1, d1, r2, d2;
        if (sat_up) {
            r1 = vp - vin - A * A / J - A * k1;
            d1 = 0.5 * (vin + vp) * (2.0 * A / J + k1);
        } else {
            r1 = vp - vin - J * k1 * k1;
            d1 = (vin + vp) * k1;
        }
        if (sat_dn) {
            r2 = vout - vp + A * A / J + A * k2;
            d2 = 0.5 * (vp + vout) * (2.0 * A / J + k2);
        } else {
            r2 = vout - vp + J * k2 * k2;
            d2 = (vp + vout) * k2;
        }
        return {r1, r2, d1 + d2 - L};
    };
    auto jacobian = [=](const std::array<double, 3>& x) {
        double k1 = x[0], k2 = x[1], vp = x[2];
        std::array<std::array<double, 3>, 3> m{};
        if (sat_up) {
            m[0] = {-A, 0.0, 1.0};
            m[2][0] = 0.5 * (vin + vp);
            m[2][2] = 0.5 * (2.0 * A / J + k1);
        } else {
            m[0] = {-2.0 * J * k1, 0.0, 1.0};
            m[2][0] = vin + vp;
            m[2][2] = k1;
        }
        if (sat_dn) {
            m[1] = {0.0, A, -1.0};
            m[2][1] += 0.5 * (vp + vout);
            m[2][2] += 0.5 * (2.0 * A / J + k2);
        } else {
            m[1] = {0.0, 2.0 * J * k2, -1.0};
            m[2][1] += vp + vout;
            m[2][2] += k2;
        }
        return m;
    };

    auto seed_from = [&](double vp) -> std::array<double, 3> {
        double k1 = sat_up ? std::max(0.0, (vp - vin) / A - A / J)
                           : std::sqrt(std::max(0.0, vp - vin) / J);
        double k2 = sat_dn ? std::max(0.0, (vp - vout) / A - A / J)
                           : std::sqrt(std::max(0.0, vp - vout) / J);
        return {k1, k2, vp};
    };

    double tol = 1e-12 * std::max({1.0, L, r.v_f});
    auto res = newton_raphson<3>(residual, jacobian, seed_from(seed_vp), tol, 100);
    if (!res.converged) {
        double vp_alt = solve_peak_bisect(r);
        res = newton_raphson<3>(residual, jacobian, seed_from(vp_alt), tol, 100);
    }
    if (!res.converged)
        throw std::runtime_error("solve_schedule: case system did not converge");
    for (double& v : res.x)
        if (v < 0.0) {
            if (v < -1e-9) throw std::logic_error("solve_schedule: negative root");
            v = 0.0;
        }
    return res.x;
}

}  // namespace scurve_detail

/// Solve the full seven-phase schedule for a request.
inline PhaseSchedule solve_schedule(const ProfileRequest& r) {
    using namespace scurve_detail;
    validate(r);
    CaseId id = classify_case(r);
    double A = r.a_cap, J = r.j_cap;

    if (id == CaseId::degenerate_cruise) {
        RampSplit none;
        double tau4 = r.length > 0.0 ? r.length / r.v_f : 0.0;
        return assemble(r, id, r.v_in, r.v_in, none, none, tau4);
    }

    if (id == CaseId::case1 || id == CaseId::case2) {
        double v_exit;
        if (r.v_out >= r.v_in) {
            v_exit = max_reachable_speed(r.v_in, r.length, A, J);
        } else {
            bool sat = false;
            v_exit = min_braked_speed(r.v_in, r.length, A, J, sat);
        }
        RampSplit up = split_ramp(std::fabs(v_exit - r.v_in), A, J);
        RampSplit none;
        // the single ramp occupies phases 1-3; v_peak equals the adjusted exit
        return assemble(r, id, v_exit, v_exit, up, none, 0.0);
    }

    if (id == CaseId::case7 || id == CaseId::case8 || id == CaseId::case9 ||
        id == CaseId::case10) {
        RampSplit up = split_ramp(r.v_f - r.v_in, A, J);
        RampSplit dn = split_ramp(r.v_f - r.v_out, A, J);
        double d_full = ramp_distance(r.v_in, r.v_f, A, J) + ramp_distance(r.v_f, r.v_out, A, J);
        double tau4 = std::max(0.0, (r.length - d_full) / r.v_f);
        return assemble(r, id, r.v_f, r.v_out, up, dn, tau4);
    }

    // cases 3-6: cruise speed adjusted below v_f
    bool sat_up = (id == CaseId::case3 || id == CaseId::case4);
    bool sat_dn = (id == CaseId::case3 || id == CaseId::case5);
    double seed_vp = 0.5 * (r.v_f + std::max(r.v_in, r.v_out));
    auto x = solve_case_system(r, sat_up, sat_dn, seed_vp);
    double vp = x[2];
    RampSplit up, dn;
    if (sat_up) {
        up.saturated = true;
        up.t1 = A / J;
        up.t2 = x[0];
    } else {
        up.t1 = x[0];
    }
    if (sat_dn) {
        dn.saturated = true;
        dn.t1 = A / J;
        dn.t2 = x[1];
    } else {
        dn.t1 = x[1];
    }
    return assemble(r, id, vp, r.v_out, up, dn, 0.0);
}

/// Exact state at time t within the schedule. Phase boundaries attribute to
/// the later phase, so reported jerk switches at the boundary instant.
inline KinematicSample evaluate(const PhaseSchedule& s, double t) {
    double total = s.duration();
    double slack = 1e-9 * std::max(1.0, total);
    if (t < -slack || t > total + slack)
        throw std::out_of_range("evaluate: time outside schedule");
    t = std::min(std::max(t, 0.0), total);

    double t0 = 0.0;
    int phase = -1;
    double local = 0.0;
    for (int k = 0; k < 7; ++k) {
        if (s.tau[k] <= 0.0) continue;
        if (t < t0 + s.tau[k]) {
            phase = k;
            local = t - t0;
            break;
        }
        t0 += s.tau[k];
    }
    if (phase < 0) {
        // t == total duration: attribute to the last non-empty phase
        for (int k = 6; k >= 0; --k) {
            if (s.tau[k] > 0.0) {
                phase = k;
                local = s.tau[k];
                break;
            }
        }
    }
    if (phase < 0) {  // empty schedule
        return {s.node[7].pos, s.node[7].vel, s.node[7].acc, 0.0};
    }

    const PhaseState& n = s.node[phase];
    double j = s.jerk[phase], dt = local;
    KinematicSample out;
    out.pos = n.pos + n.vel * dt + 0.5 * n.acc * dt * dt + j * dt * dt * dt / 6.0;
    out.vel = n.vel + n.acc * dt + 0.5 * j * dt * dt;
    out.acc = n.acc + j * dt;
    out.jerk = j;
    return out;
}

}  // namespace ncsim
