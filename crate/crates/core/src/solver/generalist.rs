//! The generalist's candidate list.

use super::specialist::{d_forms, winning_form, DForm};
use super::{beats, score, Candidate, CandidateLabel, CandidateSet, CandidateStatus, DResponse};
use crate::conic::{multiplier_free_conic, resultant_alpha, BiQuadratic};
use crate::poly::{real_roots, Polynomial};
use crate::tolerance::{CURVE, FEAS};
use crate::{GameParams, Regulation, Strategy};

/// Interval of `β0` on which the specialist's increment is `e − q·β0`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Strip {
    lo: f64,
    hi: Option<f64>,
    e: (f64, f64),
    q: (f64, f64),
}

impl Strip {
    fn from_form(form: &DForm, theta_d: f64, lo: f64, hi: Option<f64>) -> Self {
        // x = p + s·(θ_D − β0)
        Self {
            lo,
            hi,
            e: (form.p.0 + form.s.0 * theta_d, form.p.1 + form.s.1 * theta_d),
            q: form.s,
        }
    }

    fn constant(form: &DForm, lo: f64) -> Self {
        Self {
            lo,
            hi: None,
            e: form.p,
            q: (0.0, 0.0),
        }
    }

    fn is_constant(&self) -> bool {
        self.q == (0.0, 0.0)
    }

    fn contains(&self, beta: f64) -> bool {
        beta >= self.lo - FEAS && self.hi.map_or(true, |h| beta <= h + FEAS)
    }

    /// `U_G` and `U_D` as functions of `(α0, β0)` on this strip.
    fn objectives(&self, params: &GameParams) -> (BiQuadratic, BiQuadratic) {
        let d = params.delta;
        let k = 1.0 - d;
        let (r_a, r_b) = (params.r_a, params.r_b);
        let (c0, c1) = (&params.c0, &params.c1);
        let r_e = r_a * self.e.0 + r_b * self.e.1;
        let r_q = r_a * self.q.0 + r_b * self.q.1;
        let e_c1_q = c1.c_aa * self.e.0 * self.q.0
            + c1.c_ab * (self.e.0 * self.q.1 + self.e.1 * self.q.0)
            + c1.c_bb * self.e.1 * self.q.1;
        let u_g = BiQuadratic {
            aa: -c0.c_aa,
            ab: -2.0 * c0.c_ab,
            bb: -c0.c_bb,
            a: d * r_a,
            b: d * (r_b - r_q),
            c: d * r_e,
        };
        let u_d = BiQuadratic {
            aa: 0.0,
            ab: 0.0,
            bb: -c1.quad_form(self.q.0, self.q.1),
            a: k * r_a,
            b: k * (r_b - r_q) + 2.0 * e_c1_q,
            c: k * r_e - c1.quad_form(self.e.0, self.e.1),
        };
        (u_g, u_d)
    }
}

/// Pieces of `β0 ≥ max(θ_G, 0)` on which one specialist form wins.
fn strips(params: &GameParams, reg: &Regulation) -> Vec<Strip> {
    let forms = d_forms(params);
    let theta_g = reg.theta_g.max(0.0);
    let theta_d = reg.theta_d;
    let mut out = Vec::new();

    let m_max = theta_d - theta_g;
    if m_max > 0.0 {
        let mut cuts: Vec<f64> = Vec::new();
        for f in forms.iter().filter(|f| f.available) {
            // Validity thresholds.
            if f.s.0 != 0.0 {
                cuts.push(-f.p.0 / f.s.0);
            }
            if f.s.1 != 1.0 {
                cuts.push(f.p.1 / (1.0 - f.s.1));
            }
        }
        for (i, fi) in forms.iter().enumerate() {
            for fj in forms.iter().skip(i + 1) {
                if fi.available && fj.available {
                    let diff = &value_poly(params, fi) - &value_poly(params, fj);
                    if let Ok(roots) = real_roots(&diff) {
                        cuts.extend(roots.iter().map(|r| r.value));
                    }
                }
            }
        }
        let margin = 1e-12 * (1.0 + m_max);
        cuts.retain(|m| m.is_finite() && *m > margin && *m < m_max - margin);
        cuts.sort_by(f64::total_cmp);
        cuts.dedup_by(|b, a| *b - *a <= 1e-9);

        let mut knots = vec![0.0];
        knots.extend(cuts);
        knots.push(m_max);
        for w in knots.windows(2) {
            let (m0, m1) = (w[0], w[1]);
            let form = &forms[winning_form(params, &forms, 0.5 * (m0 + m1))];
            let lo = if m1 == m_max { theta_g } else { theta_d - m1 };
            let hi = if m0 == 0.0 { theta_d } else { theta_d - m0 };
            out.push(Strip::from_form(form, theta_d, lo, Some(hi)));
        }
    }
    let form = &forms[winning_form(params, &forms, 0.0)];
    out.push(Strip::constant(form, theta_g.max(theta_d)));
    out
}

/// `V(m)` of a form as a polynomial in `m`.
fn value_poly(params: &GameParams, f: &DForm) -> Polynomial {
    let k = 1.0 - params.delta;
    let c1 = &params.c1;
    let (p, s) = (f.p, f.s);
    let p_c_s = c1.c_aa * p.0 * s.0 + c1.c_ab * (p.0 * s.1 + p.1 * s.0) + c1.c_bb * p.1 * s.1;
    Polynomial::new(vec![
        k * (params.r_a * p.0 + params.r_b * p.1) - c1.quad_form(p.0, p.1),
        k * (params.r_a * s.0 + params.r_b * s.1) - 2.0 * p_c_s,
        -c1.quad_form(s.0, s.1),
    ])
}

fn roots_of(p: &Polynomial) -> Vec<f64> {
    real_roots(p)
        .map(|rs| rs.into_iter().map(|r| r.value).collect())
        .unwrap_or_default()
}

/// KKT points of `max U_G` on one strip subject to `U_D ≥ 0`.
fn strip_candidates(
    params: &GameParams,
    strip: &Strip,
    theta_g: f64,
    out: &mut Vec<(f64, f64, CandidateLabel)>,
) {
    use CandidateLabel::*;
    let (q, g) = strip.objectives(params);
    let constant = strip.is_constant();

    if let Some((a, b)) = q.stationary_point() {
        out.push((
            a,
            b,
            if constant {
                Unconstrained
            } else {
                ResponseInterior
            },
        ));
    }

    let mut edges = vec![strip.lo];
    edges.extend(strip.hi);
    for &beta in &edges {
        let pinned = beta == theta_g;
        let dq = q.d_alpha();
        if dq.a != 0.0 {
            let alpha = -(dq.b * beta + dq.c) / dq.a;
            out.push((
                alpha,
                beta,
                if pinned {
                    AlphaPinned
                } else {
                    ResponseBoundary
                },
            ));
        }
        out.push((
            0.0,
            beta,
            if pinned {
                OriginPinned
            } else {
                ResponseBoundary
            },
        ));
        for alpha in roots_of(&g.at_beta(beta)) {
            out.push((
                alpha,
                beta,
                if pinned {
                    CurveIntersectThetaG
                } else {
                    ResponseBoundary
                },
            ));
        }
    }

    // α0 = 0 edge.
    if q.bb != 0.0 {
        out.push((
            0.0,
            -q.b / (2.0 * q.bb),
            if constant {
                BetaPinned
            } else {
                ResponseBoundary
            },
        ));
    }
    for beta in roots_of(&g.at_alpha(0.0)) {
        out.push((0.0, beta, CurveIntersectAlpha0));
    }

    for (a, b) in curve_stationary_points(params, &q, &g, strip) {
        out.push((a, b, CurveInterior));
    }
}

/// Stationary points of `U_G` along `U_D = 0` inside the strip.
fn curve_stationary_points(
    params: &GameParams,
    q: &BiQuadratic,
    g: &BiQuadratic,
    strip: &Strip,
) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    if g.alpha_degree() == 0 {
        // The curve is a union of lines β0 = const.
        for beta in roots_of(&g.at_alpha(0.0)) {
            let dq = q.d_alpha();
            if dq.a != 0.0 {
                out.push((-(dq.b * beta + dq.c) / dq.a, beta));
            }
        }
        return out;
    }
    let conic = multiplier_free_conic(q, g);
    let res = resultant_alpha(&conic, g);
    let scale = coeff_norm(&conic).max(1.0) * coeff_norm(g).max(1.0);
    if res.max_abs_coeff() <= 1e-12 * scale.powi(2) {
        out.extend(sample_curve(params, q, g, strip));
        return out;
    }
    for beta in roots_of(&res) {
        if !strip.contains(beta) {
            continue;
        }
        for alpha in roots_of(&g.at_beta(beta)) {
            out.push((alpha, beta));
        }
    }
    out
}

fn coeff_norm(f: &BiQuadratic) -> f64 {
    [f.aa, f.ab, f.bb, f.a, f.b, f.c]
        .iter()
        .fold(0.0, |m, c| m.max(c.abs()))
}

const CURVE_SAMPLES: usize = 10_000;

/// Dense sampling of `U_D = 0` on the strip: for each `α0` on a grid solve for
/// `β0`, keep the best `U_G`, then refine by golden-section search along the
/// same branch.
fn sample_curve(
    params: &GameParams,
    q: &BiQuadratic,
    g: &BiQuadratic,
    strip: &Strip,
) -> Option<(f64, f64)> {
    let reach = 0.5 * params.delta * (params.r_a + params.r_b) / params.c0.c_aa.max(1e-3);
    let alpha_max = 4.0 * (1.0 + reach + strip.lo + strip.hi.unwrap_or(0.0));
    let h = alpha_max / (CURVE_SAMPLES - 1) as f64;

    let branch = |alpha: f64, near: Option<f64>| -> Option<f64> {
        let roots: Vec<f64> = roots_of(&g.at_alpha(alpha))
            .into_iter()
            .filter(|b| strip.contains(*b))
            .collect();
        match near {
            None => roots
                .into_iter()
                .max_by(|x, y| q.eval(alpha, *x).total_cmp(&q.eval(alpha, *y))),
            Some(b0) => roots
                .into_iter()
                .min_by(|x, y| (x - b0).abs().total_cmp(&(y - b0).abs())),
        }
    };

    let mut best: Option<(f64, f64, f64)> = None;
    for i in 0..CURVE_SAMPLES {
        let alpha = i as f64 * h;
        if let Some(beta) = branch(alpha, None) {
            let v = q.eval(alpha, beta);
            if best.map_or(true, |(_, _, bv)| v > bv) {
                best = Some((alpha, beta, v));
            }
        }
    }
    let (mut a0, mut b0, _) = best?;

    let (mut lo, mut hi) = ((a0 - h).max(0.0), a0 + h);
    let inv_phi = 0.5 * (5f64.sqrt() - 1.0);
    let f = |alpha: f64, near: f64| {
        branch(alpha, Some(near)).map_or(f64::NEG_INFINITY, |b| q.eval(alpha, b))
    };
    for _ in 0..100 {
        let x1 = hi - inv_phi * (hi - lo);
        let x2 = lo + inv_phi * (hi - lo);
        if f(x1, b0) >= f(x2, b0) {
            hi = x2;
        } else {
            lo = x1;
        }
    }
    let mid = 0.5 * (lo + hi);
    if let Some(b) = branch(mid, Some(b0)) {
        if q.eval(mid, b) > q.eval(a0, b0) {
            a0 = mid;
            b0 = b;
        }
    }
    Some((a0, b0))
}

/// Closed-form candidates for the generalist.
fn closed_form_candidates(params: &GameParams, theta_g: f64) -> Vec<Candidate> {
    use CandidateLabel::*;
    let d = params.delta;
    let c0 = &params.c0;
    let mut out = Vec::new();
    let mut push = |s: Option<Strategy>, label| {
        out.push(match s {
            Some(strategy) => Candidate {
                strategy,
                label,
                status: CandidateStatus::Feasible,
            },
            None => Candidate {
                strategy: Strategy::zero(),
                label,
                status: CandidateStatus::Unavailable,
            },
        })
    };
    let unconstrained = if c0.det() > 0.0 {
        c0.solve(0.5 * d * params.r_a, 0.5 * d * params.r_b)
            .map(|(a, b)| Strategy::new(a, b))
    } else {
        None
    };
    push(unconstrained, Unconstrained);
    push(
        (c0.c_bb > 0.0).then(|| Strategy::new(0.0, d * params.r_b / (2.0 * c0.c_bb))),
        BetaPinned,
    );
    push(
        (c0.c_aa > 0.0).then(|| {
            Strategy::new(
                d * params.r_a / (2.0 * c0.c_aa) - c0.c_ab / c0.c_aa * theta_g,
                theta_g,
            )
        }),
        AlphaPinned,
    );
    push(Some(Strategy::new(0.0, theta_g)), OriginPinned);
    out
}

fn mark(strategy: Strategy, label: CandidateLabel, theta_g: f64) -> Candidate {
    let feasible = strategy.alpha.is_finite()
        && strategy.beta.is_finite()
        && strategy.alpha >= -FEAS
        && strategy.beta >= theta_g - FEAS;
    if feasible {
        Candidate {
            strategy: Strategy::new(strategy.alpha.max(0.0), strategy.beta.max(theta_g)),
            label,
            status: CandidateStatus::Feasible,
        }
    } else {
        Candidate {
            strategy,
            label,
            status: CandidateStatus::Infeasible,
        }
    }
}

/// The generalist's candidates: the closed forms, the participation-curve
/// candidates, the KKT points of every response strip, and the abstain
/// marker last. Candidates outside `α0 ≥ 0`, `β0 ≥ θ_G` are flagged.
pub fn g_candidates(params: &GameParams, reg: &Regulation) -> CandidateSet {
    let theta_g = reg.theta_g.max(0.0);
    let mut candidates: Vec<Candidate> = closed_form_candidates(params, theta_g)
        .into_iter()
        .map(|c| {
            if c.status == CandidateStatus::Feasible {
                mark(c.strategy, c.label, theta_g)
            } else {
                c
            }
        })
        .collect();
    for (s, label) in ud_zero_curve_candidates(params, reg) {
        candidates.push(mark(s, label, theta_g));
    }
    let mut raw = Vec::new();
    for strip in strips(params, reg) {
        let start = raw.len();
        strip_candidates(params, &strip, theta_g, &mut raw);
        // Keep only points that belong to the strip that generated them.
        let kept: Vec<_> = raw
            .drain(start..)
            .filter(|(_, b, _)| strip.contains(*b))
            .collect();
        raw.extend(kept);
    }
    for (a, b, label) in raw {
        candidates.push(mark(Strategy::new(a, b), label, theta_g));
    }
    candidates.push(Candidate {
        strategy: Strategy::zero(),
        label: CandidateLabel::Abstain,
        status: CandidateStatus::Feasible,
    });
    CandidateSet { candidates }
}

/// Candidates on the specialist's participation curve `U_D(γ0) = 0`, with
/// `U_D` composed with minimal compliance over `θ_G ≤ β0 ≤ θ_D`: the curve's
/// intersection with `α0 = 0`, with `β0 = θ_G`, and the constrained maximum of
/// `U_G` along it. For each kind the best verified point is kept; points are
/// verified by re-solving the specialist's response and requiring
/// `|U_D| ≤ ε_curve`.
pub fn ud_zero_curve_candidates(
    params: &GameParams,
    reg: &Regulation,
) -> Vec<(Strategy, CandidateLabel)> {
    use CandidateLabel::*;
    let theta_g = reg.theta_g.max(0.0);
    let forms = d_forms(params);
    let minimal = &forms[2];
    if !minimal.available || reg.theta_d <= theta_g {
        return Vec::new();
    }
    let strip = Strip::from_form(minimal, reg.theta_d, theta_g, Some(reg.theta_d));
    let (q, g) = strip.objectives(params);

    let mut raw: Vec<(f64, f64, CandidateLabel)> = Vec::new();
    for beta in roots_of(&g.at_alpha(0.0)) {
        raw.push((0.0, beta, CurveIntersectAlpha0));
    }
    for alpha in roots_of(&g.at_beta(theta_g)) {
        raw.push((alpha, theta_g, CurveIntersectThetaG));
    }
    for (a, b) in curve_stationary_points(params, &q, &g, &strip) {
        raw.push((a, b, CurveInterior));
    }

    let mut best: Vec<(Strategy, CandidateLabel, f64)> = Vec::new();
    for (a, b, label) in raw {
        if !(a >= -FEAS && strip.contains(b)) {
            continue;
        }
        let s = Strategy::new(a.max(0.0), b.max(theta_g));
        let scored = score(params, s, label, reg.theta_d);
        let DResponse::Participate { u_d, .. } = scored.response else {
            continue;
        };
        if u_d.abs() > CURVE {
            continue;
        }
        match best.iter_mut().find(|(_, l, _)| *l == label) {
            Some(entry) => {
                if beats(scored.u_g, &s, label, entry.2, &entry.0, label) {
                    *entry = (s, label, scored.u_g);
                }
            }
            None => best.push((s, label, scored.u_g)),
        }
    }
    best.sort_by_key(|(_, l, _)| *l);
    best.into_iter().map(|(s, l, _)| (s, l)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::solve_spe;

    #[test]
    fn closed_forms_without_floor() {
        let set = g_candidates(&GameParams::canonical(), &Regulation::none());
        let u = set.find(CandidateLabel::Unconstrained).unwrap();
        assert_eq!(u.strategy, Strategy::new(0.25, 0.25));
        let a = set.find(CandidateLabel::AlphaPinned).unwrap();
        assert_eq!(a.strategy, Strategy::new(0.25, 0.0));
        assert_eq!(
            set.candidates.last().unwrap().label,
            CandidateLabel::Abstain
        );
    }

    #[test]
    fn pinned_candidate_follows_floor() {
        let set = g_candidates(&GameParams::canonical(), &Regulation::new(0.5, 0.0));
        let a = set.find(CandidateLabel::AlphaPinned).unwrap();
        assert_eq!(a.strategy, Strategy::new(0.25, 0.5));
        // The unconstrained point violates β0 ≥ 0.5.
        assert!(!set
            .find(CandidateLabel::Unconstrained)
            .unwrap()
            .is_feasible());
    }

    #[test]
    fn canonical_strips_split_at_response_switch() {
        let s = strips(&GameParams::canonical(), &Regulation::new(0.0, 0.45));
        // Minimal compliance below β0 = 0.2, unconstrained above. The switch
        // is a double root of the value difference, so it is only located to
        // about 1e-8.
        assert!(s
            .iter()
            .any(|st| st.hi.is_some_and(|h| (h - 0.2).abs() < 1e-7)));
        assert_eq!(s.len(), 3);
        assert_eq!(s[1].lo, 0.0);
        assert_eq!(s.last().unwrap().lo, 0.45);
    }

    #[test]
    fn curve_points_lie_on_the_curve() {
        let p = GameParams::canonical();
        for reg in [
            Regulation::new(0.0, 0.45),
            Regulation::new(0.0, 1.2),
            Regulation::new(0.3, 1.5),
        ] {
            let eq = solve_spe(&p, &reg);
            for (s, _) in ud_zero_curve_candidates(&p, &reg) {
                match crate::solver::d_best_response(&p, &s, reg.theta_d) {
                    DResponse::Participate { u_d, .. } => assert!(u_d.abs() <= CURVE),
                    DResponse::Abstain => panic!("verified curve point must see participation"),
                }
                let u_g = score(&p, s, CandidateLabel::CurveInterior, reg.theta_d).u_g;
                assert!(u_g <= eq.u_g + FEAS);
            }
        }
    }

    #[test]
    fn curve_is_empty_without_binding_floor() {
        assert!(
            ud_zero_curve_candidates(&GameParams::canonical(), &Regulation::new(0.3, 0.2))
                .is_empty()
        );
    }

    #[test]
    fn sampling_fallback_finds_constrained_maximum() {
        // max −α² − β² + α + β on α + β = 1 lies at (1/2, 1/2).
        let q = BiQuadratic {
            aa: -1.0,
            bb: -1.0,
            a: 1.0,
            b: 1.0,
            ..Default::default()
        };
        let g = BiQuadratic::linear(1.0, 1.0, -1.0);
        let strip = Strip {
            lo: 0.0,
            hi: Some(2.0),
            e: (0.0, 0.0),
            q: (0.0, 0.0),
        };
        let (a, b) = sample_curve(&GameParams::canonical(), &q, &g, &strip).unwrap();
        assert!((a - 0.5).abs() < 1e-6 && (b - 0.5).abs() < 1e-6);
    }
}
