//! Pareto hulls of attainable utilities and sweep summaries.

use std::collections::BTreeMap;

use crate::sweep::{Class, SweepRecord};
use crate::tolerance::FEAS;

/// A utility pair and the cell that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UtilityPoint {
    pub u_g: f64,
    pub u_d: f64,
    pub theta_g: f64,
    pub theta_d: f64,
    pub delta: f64,
}

impl UtilityPoint {
    pub fn new(u_g: f64, u_d: f64) -> Self {
        Self {
            u_g,
            u_d,
            theta_g: 0.0,
            theta_d: 0.0,
            delta: 0.0,
        }
    }

    pub fn from_record(r: &SweepRecord) -> Self {
        Self {
            u_g: r.outcome.u_g,
            u_d: r.outcome.u_d,
            theta_g: r.regulation.theta_g,
            theta_d: r.regulation.theta_d,
            delta: r.delta,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AnalysisError {
    #[error("no points")]
    Empty,
    #[error("non-finite utility in input")]
    NonFinite,
}

const COLLINEAR: f64 = 1e-12;

fn cross(o: &UtilityPoint, a: &UtilityPoint, b: &UtilityPoint) -> f64 {
    (a.u_g - o.u_g) * (b.u_d - o.u_d) - (a.u_d - o.u_d) * (b.u_g - o.u_g)
}

/// Vertices of the north-eastern faces of the convex hull, by `u_g`
/// descending: the counter-clockwise chain from the rightmost point (highest
/// `u_d` among ties) to the topmost point (highest `u_g` among ties).
/// Collinear points are dropped, so consecutive slopes strictly decrease.
pub fn pareto_hull(points: &[UtilityPoint]) -> Result<Vec<UtilityPoint>, AnalysisError> {
    if points.is_empty() {
        return Err(AnalysisError::Empty);
    }
    if points
        .iter()
        .any(|p| !(p.u_g.is_finite() && p.u_d.is_finite()))
    {
        return Err(AnalysisError::NonFinite);
    }
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.u_g.total_cmp(&b.u_g).then(a.u_d.total_cmp(&b.u_d)));
    pts.dedup_by(|b, a| a.u_g == b.u_g && a.u_d == b.u_d);
    if pts.len() == 1 {
        return Ok(pts);
    }

    // Andrew's monotone chain, counter-clockwise from the lowest-left point.
    let mut hull: Vec<UtilityPoint> = Vec::with_capacity(2 * pts.len());
    for p in pts.iter() {
        while hull.len() >= 2 && cross(&hull[hull.len() - 2], &hull[hull.len() - 1], p) <= COLLINEAR
        {
            hull.pop();
        }
        hull.push(*p);
    }
    let lower = hull.len() + 1;
    for p in pts.iter().rev().skip(1) {
        while hull.len() >= lower
            && cross(&hull[hull.len() - 2], &hull[hull.len() - 1], p) <= COLLINEAR
        {
            hull.pop();
        }
        hull.push(*p);
    }
    hull.pop();

    let argmax = |key: &dyn Fn(&UtilityPoint) -> (f64, f64)| {
        (0..hull.len())
            .max_by(|&i, &j| {
                let (a, b) = (key(&hull[i]), key(&hull[j]));
                a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1))
            })
            .expect("hull is nonempty")
    };
    let right = argmax(&|p| (p.u_g, p.u_d));
    let top = argmax(&|p| (p.u_d, p.u_g));

    let mut chain = vec![hull[right]];
    let mut i = right;
    while i != top {
        i = (i + 1) % hull.len();
        chain.push(hull[i]);
    }
    Ok(chain)
}

/// Which players the regulation targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Regime {
    /// `θ_G = θ_D = 0`.
    None,
    /// `θ_G > 0` and `θ_D ≤ θ_G`: the specialist's floor never binds.
    GeneralistOnly,
    /// `θ_G = 0`, `θ_D > 0`.
    SpecialistOnly,
    /// `θ_D > θ_G > 0`.
    Both,
}

impl Regime {
    pub const ALL: [Regime; 4] = [
        Regime::None,
        Regime::GeneralistOnly,
        Regime::SpecialistOnly,
        Regime::Both,
    ];

    pub fn of(theta_g: f64, theta_d: f64) -> Self {
        let g = theta_g > FEAS;
        let d = theta_d > FEAS;
        match (g, d) {
            (false, false) => Regime::None,
            (false, true) => Regime::SpecialistOnly,
            (true, _) if theta_d <= theta_g + FEAS => Regime::GeneralistOnly,
            (true, _) => Regime::Both,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::None => "none",
            Regime::GeneralistOnly => "g_only",
            Regime::SpecialistOnly => "d_only",
            Regime::Both => "both",
        }
    }
}

/// North-eastern hull per regime. A regime without points has an empty hull.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RegimeHulls {
    pub hull_none: Vec<UtilityPoint>,
    pub hull_g_only: Vec<UtilityPoint>,
    pub hull_d_only: Vec<UtilityPoint>,
    pub hull_both: Vec<UtilityPoint>,
}

impl RegimeHulls {
    pub fn get(&self, regime: Regime) -> &[UtilityPoint] {
        match regime {
            Regime::None => &self.hull_none,
            Regime::GeneralistOnly => &self.hull_g_only,
            Regime::SpecialistOnly => &self.hull_d_only,
            Regime::Both => &self.hull_both,
        }
    }

    /// Regimes that received no points.
    pub fn empty_regimes(&self) -> Vec<Regime> {
        Regime::ALL
            .into_iter()
            .filter(|r| self.get(*r).is_empty())
            .collect()
    }
}

pub fn regime_hulls(points: &[UtilityPoint]) -> RegimeHulls {
    let hull_of = |regime: Regime| {
        let pts: Vec<UtilityPoint> = points
            .iter()
            .filter(|p| Regime::of(p.theta_g, p.theta_d) == regime)
            .copied()
            .collect();
        pareto_hull(&pts).unwrap_or_default()
    };
    RegimeHulls {
        hull_none: hull_of(Regime::None),
        hull_g_only: hull_of(Regime::GeneralistOnly),
        hull_d_only: hull_of(Regime::SpecialistOnly),
        hull_both: hull_of(Regime::Both),
    }
}

/// Hulls of the records' outcomes, partitioned by regime.
pub fn regime_hulls_from_records(records: &[SweepRecord]) -> RegimeHulls {
    let pts: Vec<UtilityPoint> = records.iter().map(UtilityPoint::from_record).collect();
    regime_hulls(&pts)
}

/// Axis-aligned box of a set of floors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionBox {
    pub theta_g_min: f64,
    pub theta_g_max: f64,
    pub theta_d_min: f64,
    pub theta_d_max: f64,
}

impl RegionBox {
    fn of<'a>(records: impl Iterator<Item = &'a SweepRecord>) -> Option<Self> {
        records.fold(None, |acc, r| {
            let (g, d) = (r.regulation.theta_g, r.regulation.theta_d);
            Some(match acc {
                None => RegionBox {
                    theta_g_min: g,
                    theta_g_max: g,
                    theta_d_min: d,
                    theta_d_max: d,
                },
                Some(b) => RegionBox {
                    theta_g_min: b.theta_g_min.min(g),
                    theta_g_max: b.theta_g_max.max(g),
                    theta_d_min: b.theta_d_min.min(d),
                    theta_d_max: b.theta_d_max.max(d),
                },
            })
        })
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Summary {
    pub total: usize,
    pub class_counts: BTreeMap<Class, usize>,
    pub abstain_flags: usize,
    pub backfire_flags: usize,
    pub mutualism_flags: usize,
    pub safety_improving_flags: usize,
    pub backfire_region: Option<RegionBox>,
    pub mutualism_region: Option<RegionBox>,
    pub max_safety: Option<SweepRecord>,
    pub max_welfare: Option<SweepRecord>,
    pub min_safety: Option<SweepRecord>,
    /// Per `θ_G`: smallest backfiring `θ_D`, if any, and per `δ`.
    pub backfire_onsets: Vec<(f64, f64, Option<f64>)>,
}

fn first_max<'a>(
    records: &'a [SweepRecord],
    key: impl Fn(&SweepRecord) -> f64,
) -> Option<SweepRecord> {
    let mut best: Option<&'a SweepRecord> = None;
    for r in records {
        if best.map_or(true, |b| key(r) > key(b)) {
            best = Some(r);
        }
    }
    best.copied()
}

/// Counts, regions and extremes over a sweep, in input order.
pub fn summarize(records: &[SweepRecord]) -> Summary {
    let mut s = Summary {
        total: records.len(),
        class_counts: Class::ALL.into_iter().map(|c| (c, 0)).collect(),
        ..Summary::default()
    };
    for r in records {
        *s.class_counts.entry(r.classification).or_default() += 1;
        s.abstain_flags += r.flags.abstain as usize;
        s.backfire_flags += r.flags.backfire as usize;
        s.mutualism_flags += r.flags.mutualism as usize;
        s.safety_improving_flags += r.flags.safety_improving as usize;
    }
    s.backfire_region = RegionBox::of(records.iter().filter(|r| r.flags.backfire));
    s.mutualism_region = RegionBox::of(records.iter().filter(|r| r.flags.mutualism));
    let participating: Vec<SweepRecord> = records
        .iter()
        .filter(|r| !r.outcome.abstained)
        .copied()
        .collect();
    s.max_safety = first_max(&participating, |r| r.outcome.final_safety());
    s.min_safety = first_max(&participating, |r| -r.outcome.final_safety());
    s.max_welfare = first_max(records, |r| r.outcome.welfare());

    let mut onsets: Vec<(f64, f64, Option<f64>)> = Vec::new();
    for r in records {
        let key = (r.regulation.theta_g, r.delta);
        let entry = match onsets.iter_mut().find(|(g, d, _)| (*g, *d) == key) {
            Some(e) => e,
            None => {
                onsets.push((key.0, key.1, None));
                onsets.last_mut().expect("just pushed")
            }
        };
        if r.flags.backfire {
            let td = r.regulation.theta_d;
            entry.2 = Some(entry.2.map_or(td, |x: f64| x.min(td)));
        }
    }
    s.backfire_onsets = onsets;
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[(f64, f64)]) -> Vec<UtilityPoint> {
        v.iter().map(|&(a, b)| UtilityPoint::new(a, b)).collect()
    }

    fn coords(v: &[UtilityPoint]) -> Vec<(f64, f64)> {
        v.iter().map(|p| (p.u_g, p.u_d)).collect()
    }

    #[test]
    fn square_with_bulge() {
        let h = pareto_hull(&pts(&[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (0.7, 0.7)])).unwrap();
        assert_eq!(coords(&h), vec![(1.0, 0.0), (0.7, 0.7), (0.0, 1.0)]);
    }

    #[test]
    fn single_point_and_empty() {
        assert_eq!(
            coords(&pareto_hull(&pts(&[(0.3, 0.2)])).unwrap()),
            vec![(0.3, 0.2)]
        );
        assert_eq!(pareto_hull(&[]), Err(AnalysisError::Empty));
    }

    #[test]
    fn dominating_point_is_the_whole_frontier() {
        let h = pareto_hull(&pts(&[
            (0.0, 0.0),
            (1.0, 1.0),
            (0.5, 0.2),
            (1.0, 0.0),
            (0.0, 1.0),
        ]))
        .unwrap();
        assert_eq!(coords(&h), vec![(1.0, 1.0)]);
    }

    #[test]
    fn collinear_points_are_merged() {
        let h = pareto_hull(&pts(&[(0.0, 1.0), (0.5, 0.5), (1.0, 0.0)])).unwrap();
        assert_eq!(coords(&h), vec![(1.0, 0.0), (0.0, 1.0)]);
    }

    #[test]
    fn regimes() {
        assert_eq!(Regime::of(0.0, 0.0), Regime::None);
        assert_eq!(Regime::of(0.3, 0.3), Regime::GeneralistOnly);
        assert_eq!(Regime::of(0.3, 0.1), Regime::GeneralistOnly);
        assert_eq!(Regime::of(0.0, 0.3), Regime::SpecialistOnly);
        assert_eq!(Regime::of(0.2, 0.3), Regime::Both);
    }

    #[test]
    fn empty_summary() {
        let s = summarize(&[]);
        assert_eq!(s.total, 0);
        assert!(s.class_counts.values().all(|&c| c == 0));
        assert!(s.backfire_region.is_none());
    }
}
