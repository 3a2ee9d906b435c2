//! Game primitives and utility accounting.
//!
//! Everything here is generic over a [`Float`] scalar so the accounting can
//! be evaluated in `f32` or `f64`; the solvers instantiate it with `f64`.

use std::fmt;

use num_traits::Float;

/// The two players of the game.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Player {
    /// First mover, builds `γ0`, keeps share `δ`.
    Generalist,
    /// Second mover, builds `γ1 ≥ γ0`, keeps share `1 − δ`.
    Specialist,
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Player::Generalist => f.write_str("G"),
            Player::Specialist => f.write_str("D"),
        }
    }
}

/// Symmetric 2×2 cost matrix `[[c_aa, c_ab], [c_ab, c_bb]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostMatrix<T> {
    pub c_aa: T,
    pub c_bb: T,
    pub c_ab: T,
}

impl<T: Float> CostMatrix<T> {
    pub fn new(c_aa: T, c_bb: T, c_ab: T) -> Self {
        Self { c_aa, c_bb, c_ab }
    }

    pub fn identity() -> Self {
        Self::new(T::one(), T::one(), T::zero())
    }

    /// `vᵀ C v` for `v = (a, b)`.
    pub fn quad_form(&self, a: T, b: T) -> T {
        self.c_aa * a * a + (self.c_ab + self.c_ab) * a * b + self.c_bb * b * b
    }

    pub fn det(&self) -> T {
        self.c_aa * self.c_bb - self.c_ab * self.c_ab
    }

    pub fn trace(&self) -> T {
        self.c_aa + self.c_bb
    }

    /// `C⁻¹ (a, b)`, or `None` when the matrix is singular.
    pub fn solve(&self, a: T, b: T) -> Option<(T, T)> {
        let det = self.det();
        if det == T::zero() || !det.is_finite() {
            return None;
        }
        Some((
            (self.c_bb * a - self.c_ab * b) / det,
            (self.c_aa * b - self.c_ab * a) / det,
        ))
    }

    /// Largest absolute entry.
    pub fn max_abs_entry(&self) -> T {
        self.c_aa.abs().max(self.c_bb.abs()).max(self.c_ab.abs())
    }

    pub fn is_finite(&self) -> bool {
        self.c_aa.is_finite() && self.c_bb.is_finite() && self.c_ab.is_finite()
    }
}

/// A technology attribute pair: performance `alpha`, safety `beta`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Strategy<T> {
    pub alpha: T,
    pub beta: T,
}

impl<T: Float> Strategy<T> {
    pub fn new(alpha: T, beta: T) -> Self {
        Self { alpha, beta }
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero())
    }

    /// Euclidean distance to `other`.
    pub fn distance(&self, other: &Self) -> T {
        (self.alpha - other.alpha).hypot(self.beta - other.beta)
    }
}

/// Safety floors on `β0` (generalist) and `β1` (specialist).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Regulation<T> {
    pub theta_g: T,
    pub theta_d: T,
}

impl<T: Float> Regulation<T> {
    pub fn new(theta_g: T, theta_d: T) -> Self {
        Self { theta_g, theta_d }
    }

    /// No regulation: both floors at zero.
    pub fn none() -> Self {
        Self::new(T::zero(), T::zero())
    }
}

/// One instance of the game.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GameParams<T> {
    /// Generalist cost matrix `C0`.
    pub c0: CostMatrix<T>,
    /// Specialist cost matrix `C1`.
    pub c1: CostMatrix<T>,
    /// Revenue weight on performance.
    pub r_a: T,
    /// Revenue weight on safety.
    pub r_b: T,
    /// Generalist's revenue share.
    pub delta: T,
}

impl<T: Float> GameParams<T> {
    pub fn new(c0: CostMatrix<T>, c1: CostMatrix<T>, r_a: T, r_b: T, delta: T) -> Self {
        Self {
            c0,
            c1,
            r_a,
            r_b,
            delta,
        }
    }

    /// Separable game with identity costs, unit revenue weights and `δ = 1/2`.
    pub fn canonical() -> Self {
        let half = T::one() / (T::one() + T::one());
        Self::new(
            CostMatrix::identity(),
            CostMatrix::identity(),
            T::one(),
            T::one(),
            half,
        )
    }

    pub fn with_delta(mut self, delta: T) -> Self {
        self.delta = delta;
        self
    }

    pub fn cost_matrix(&self, player: Player) -> &CostMatrix<T> {
        match player {
            Player::Generalist => &self.c0,
            Player::Specialist => &self.c1,
        }
    }

    /// `rᵀγ`.
    pub fn revenue(&self, g: &Strategy<T>) -> T {
        self.r_a * g.alpha + self.r_b * g.beta
    }
}

/// A violated parameter invariant.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    NonFinite { field: &'static str },
    NegativeDiagonal { player: Player, entry: &'static str },
    CrossTermTooNegative { player: Player },
    NegativeRevenueWeight { field: &'static str },
    DeltaOutOfRange,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NonFinite { field } => write!(f, "{field} must be finite"),
            Violation::NegativeDiagonal { player, entry } => {
                write!(f, "{player}: {entry} ≥ 0")
            }
            Violation::CrossTermTooNegative { player } => {
                write!(f, "{player}: c_ab > −sqrt(c_aa·c_bb)")
            }
            Violation::NegativeRevenueWeight { field } => write!(f, "{field} ≥ 0"),
            Violation::DeltaOutOfRange => f.write_str("delta ∈ [0,1]"),
        }
    }
}

/// Admissible but suspicious parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum Warning {
    /// A zero revenue weight; ratio conditions fall back to their limits.
    ZeroRevenueWeight { field: &'static str },
    /// The cost matrix is not positive definite, so that player's problem is
    /// not strictly concave.
    NotPositiveDefinite { player: Player },
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::ZeroRevenueWeight { field } => {
                write!(f, "{field} = 0; interior conditions use limit semantics")
            }
            Warning::NotPositiveDefinite { player } => {
                write!(f, "{player}: cost matrix is not positive definite")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub warnings: Vec<Warning>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return f.write_str("ok");
        }
        let msgs: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        f.write_str(&msgs.join("; "))
    }
}

/// Reports every violated parameter invariant. Never fails.
pub fn validate<T: Float>(params: &GameParams<T>) -> ValidationReport {
    let mut report = ValidationReport::default();
    let scalars = [
        ("c0.c_aa", params.c0.c_aa),
        ("c0.c_bb", params.c0.c_bb),
        ("c0.c_ab", params.c0.c_ab),
        ("c1.c_aa", params.c1.c_aa),
        ("c1.c_bb", params.c1.c_bb),
        ("c1.c_ab", params.c1.c_ab),
        ("r_a", params.r_a),
        ("r_b", params.r_b),
        ("delta", params.delta),
    ];
    for (field, v) in scalars {
        if !v.is_finite() {
            report.violations.push(Violation::NonFinite { field });
        }
    }
    if !report.is_ok() {
        return report;
    }

    for player in [Player::Generalist, Player::Specialist] {
        let c = params.cost_matrix(player);
        if c.c_aa < T::zero() {
            report.violations.push(Violation::NegativeDiagonal {
                player,
                entry: "c_aa",
            });
        }
        if c.c_bb < T::zero() {
            report.violations.push(Violation::NegativeDiagonal {
                player,
                entry: "c_bb",
            });
        }
        let floor = -(c.c_aa.max(T::zero()) * c.c_bb.max(T::zero())).sqrt();
        if c.c_ab <= floor {
            report
                .violations
                .push(Violation::CrossTermTooNegative { player });
        }
        if !is_positive_definite(c) {
            report
                .warnings
                .push(Warning::NotPositiveDefinite { player });
        }
    }
    for (field, v) in [("r_a", params.r_a), ("r_b", params.r_b)] {
        if v < T::zero() {
            report
                .violations
                .push(Violation::NegativeRevenueWeight { field });
        } else if v == T::zero() {
            report.warnings.push(Warning::ZeroRevenueWeight { field });
        }
    }
    if params.delta < T::zero() || params.delta > T::one() {
        report.violations.push(Violation::DeltaOutOfRange);
    }
    report
}

/// Generalist cost `γ0ᵀ C0 γ0`.
pub fn cost_g<T: Float>(params: &GameParams<T>, g0: &Strategy<T>) -> T {
    params.c0.quad_form(g0.alpha, g0.beta)
}

/// Specialist cost `(γ1 − γ0)ᵀ C1 (γ1 − γ0)`.
pub fn cost_d<T: Float>(params: &GameParams<T>, g1: &Strategy<T>, g0: &Strategy<T>) -> T {
    params.c1.quad_form(g1.alpha - g0.alpha, g1.beta - g0.beta)
}

/// `(U_G, U_D)` for the strategy pair, ignoring abstention.
pub fn utilities<T: Float>(params: &GameParams<T>, g0: &Strategy<T>, g1: &Strategy<T>) -> (T, T) {
    let revenue = params.revenue(g1);
    let u_g = params.delta * revenue - cost_g(params, g0);
    let u_d = (T::one() - params.delta) * revenue - cost_d(params, g1, g0);
    (u_g, u_d)
}

/// 2×2 spectral criterion: positive trace and determinant.
pub fn is_positive_definite<T: Float>(c: &CostMatrix<T>) -> bool {
    c.trace() > T::zero() && c.det() > T::zero()
}

/// Hessian of a player's utility in their own decision variables, `−2·C_p`.
pub fn own_utility_hessian<T: Float>(params: &GameParams<T>, player: Player) -> [[T; 2]; 2] {
    let c = params.cost_matrix(player);
    let m2 = -(T::one() + T::one());
    [[m2 * c.c_aa, m2 * c.c_ab], [m2 * c.c_ab, m2 * c.c_bb]]
}

/// Negative definiteness of a symmetric 2×2 matrix via leading principal minors.
pub fn is_negative_definite<T: Float>(h: &[[T; 2]; 2]) -> bool {
    h[0][0] < T::zero() && h[0][0] * h[1][1] - h[0][1] * h[1][0] > T::zero()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum ConditionError {
    #[error("interior condition undefined: r_a = r_b = 0")]
    ZeroRevenue,
    #[error("interior condition requires delta in (0,1)")]
    DeltaOutOfRange,
}

/// `min(sqrt(c_aa·c_bb), c_aa·r_b/r_a, c_bb·r_a/r_b)` with `x/0 = +∞`.
fn cross_term_bound<T: Float>(
    params: &GameParams<T>,
    c: &CostMatrix<T>,
) -> Result<T, ConditionError> {
    if params.r_a == T::zero() && params.r_b == T::zero() {
        return Err(ConditionError::ZeroRevenue);
    }
    let ratio = |num: T, den: T| {
        if den == T::zero() {
            T::infinity()
        } else {
            num / den
        }
    };
    Ok((c.c_aa * c.c_bb)
        .sqrt()
        .min(ratio(c.c_aa * params.r_b, params.r_a))
        .min(ratio(c.c_bb * params.r_a, params.r_b)))
}

/// Cost-geometry condition under which the player's unregulated best response
/// invests in both attributes.
pub fn interior_condition<T: Float>(
    params: &GameParams<T>,
    player: Player,
) -> Result<bool, ConditionError> {
    if !(params.delta > T::zero() && params.delta < T::one()) {
        return Err(ConditionError::DeltaOutOfRange);
    }
    let c = params.cost_matrix(player);
    Ok(c.c_ab < cross_term_bound(params, c)?)
}

/// Two-sided bound `|c_ab| < min(…)` for both players.
pub fn two_sided_condition<T: Float>(params: &GameParams<T>) -> Result<bool, ConditionError> {
    if !(params.delta > T::zero() && params.delta < T::one()) {
        return Err(ConditionError::DeltaOutOfRange);
    }
    for player in [Player::Generalist, Player::Specialist] {
        let c = params.cost_matrix(player);
        if c.c_ab.abs() >= cross_term_bound(params, c)? {
            return Ok(false);
        }
    }
    Ok(true)
}
