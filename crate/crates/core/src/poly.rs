//! Low-degree real polynomials and their real roots.
//!
//! Roots are isolated on the monotone intervals between critical points (the
//! real roots of the derivative, found recursively) and refined by bisection,
//! so every sign change is bracketed and no root is missed. A critical point
//! where the polynomial vanishes is a multiple root.

use std::ops::{Add, Mul, Sub};

use crate::tolerance;

/// Polynomial with coefficients in ascending order: `c[0] + c[1]·x + …`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

/// A real root and its multiplicity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub value: f64,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PolyError {
    #[error("polynomial is identically zero")]
    IdenticallyZero,
    #[error("degree {0} exceeds the supported maximum of 4")]
    DegreeTooHigh(usize),
    #[error("polynomial has non-finite coefficients")]
    NonFinite,
}

pub const MAX_DEGREE: usize = 4;

impl Polynomial {
    /// Builds a polynomial, dropping exactly-zero leading coefficients.
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(vec![c])
    }

    /// `∏ (x − r)`.
    pub fn from_roots(roots: &[f64]) -> Self {
        roots.iter().fold(Self::constant(1.0), |acc, &r| {
            acc * Self::new(vec![-r, 1.0])
        })
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| c * i as f64)
                .collect(),
        )
    }

    pub fn scale(&self, k: f64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// Drops leading coefficients that are negligible relative to the largest.
    pub fn trimmed(&self) -> Self {
        let max = self.max_abs_coeff();
        let mut coeffs = self.coeffs.clone();
        while let Some(&c) = coeffs.last() {
            if c.abs() <= tolerance::COEFF * max || c == 0.0 {
                coeffs.pop();
            } else {
                break;
            }
        }
        Self { coeffs }
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&0.0) + rhs.coeffs.get(i).unwrap_or(&0.0))
                .collect(),
        )
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &rhs.scale(-1.0)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::default();
        }
        let mut out = vec![0.0; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

/// All real roots of a polynomial of degree at most four, sorted ascending.
///
/// Each reported root satisfies `|p(x)| ≤ ε_root · max(1, max |c_i|)`.
/// Multiple roots are reported once together with their multiplicity.
pub fn real_roots(p: &Polynomial) -> Result<Vec<Root>, PolyError> {
    if p.coeffs.iter().any(|c| !c.is_finite()) {
        return Err(PolyError::NonFinite);
    }
    let p = p.trimmed();
    let degree = p.degree().ok_or(PolyError::IdenticallyZero)?;
    if degree > MAX_DEGREE {
        return Err(PolyError::DegreeTooHigh(degree));
    }
    // Normalised so the residual bound is ε_root in absolute terms.
    let q = p.scale(1.0 / p.max_abs_coeff());
    Ok(isolate(&q))
}

fn isolate(p: &Polynomial) -> Vec<Root> {
    let tol = tolerance::ROOT * p.max_abs_coeff().max(1.0);
    match p.degree() {
        None | Some(0) => Vec::new(),
        Some(1) => vec![Root {
            value: -p.coeffs[0] / p.coeffs[1],
            multiplicity: 1,
        }],
        Some(n) => {
            let lead = p.coeffs[n];
            let bound = 1.0
                + p.coeffs[..n]
                    .iter()
                    .fold(0.0_f64, |m, c| m.max((c / lead).abs()));
            let critical = isolate(&p.derivative());

            let mut roots: Vec<Root> = Vec::new();
            let mut knots: Vec<(f64, bool)> = vec![(-bound, false)];
            for c in &critical {
                let on_root = p.eval(c.value).abs() <= tol;
                if on_root {
                    roots.push(Root {
                        value: c.value,
                        multiplicity: c.multiplicity + 1,
                    });
                }
                knots.push((c.value, on_root));
            }
            knots.push((bound, false));

            for w in knots.windows(2) {
                let ((a, a_root), (b, b_root)) = (w[0], w[1]);
                // A vanishing endpoint is already recorded; p is monotone on
                // (a, b), so no further root lies inside.
                if a_root || b_root || a >= b {
                    continue;
                }
                let (fa, fb) = (p.eval(a), p.eval(b));
                if fa == 0.0 {
                    roots.push(Root {
                        value: a,
                        multiplicity: 1,
                    });
                } else if fa.signum() != fb.signum() && fb != 0.0 {
                    roots.push(Root {
                        value: bisect(p, a, b, fa),
                        multiplicity: 1,
                    });
                } else if fb == 0.0 && b == bound {
                    roots.push(Root {
                        value: b,
                        multiplicity: 1,
                    });
                }
            }
            roots.sort_by(|x, y| x.value.total_cmp(&y.value));
            roots.dedup_by(|later, earlier| {
                let same =
                    (later.value - earlier.value).abs() <= 1e-12 * (1.0 + earlier.value.abs());
                if same {
                    earlier.multiplicity = earlier.multiplicity.max(later.multiplicity);
                }
                same
            });
            roots
        }
    }
}

fn bisect(p: &Polynomial, mut lo: f64, mut hi: f64, f_lo: f64) -> f64 {
    let s_lo = f_lo.signum();
    for _ in 0..256 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = p.eval(mid);
        if fm == 0.0 {
            return mid;
        }
        if fm.signum() == s_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if p.eval(lo).abs() <= p.eval(hi).abs() {
        lo
    } else {
        hi
    }
}
