//! Bivariate quadratics in `(α, β)` and elimination of `α` by resultants.

use crate::poly::Polynomial;

/// `aa·α² + ab·α·β + bb·β² + a·α + b·β + c`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BiQuadratic {
    pub aa: f64,
    pub ab: f64,
    pub bb: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl BiQuadratic {
    /// Affine function `a·α + b·β + c`.
    pub fn linear(a: f64, b: f64, c: f64) -> Self {
        Self {
            a,
            b,
            c,
            ..Self::default()
        }
    }

    pub fn eval(&self, alpha: f64, beta: f64) -> f64 {
        self.aa * alpha * alpha
            + self.ab * alpha * beta
            + self.bb * beta * beta
            + self.a * alpha
            + self.b * beta
            + self.c
    }

    pub fn d_alpha(&self) -> Self {
        Self::linear(2.0 * self.aa, self.ab, self.a)
    }

    pub fn d_beta(&self) -> Self {
        Self::linear(self.ab, 2.0 * self.bb, self.b)
    }

    pub fn is_linear(&self) -> bool {
        self.aa == 0.0 && self.ab == 0.0 && self.bb == 0.0
    }

    /// Product of two affine functions. Quadratic terms of the inputs are ignored.
    pub fn product_of_linear(p: &Self, q: &Self) -> Self {
        Self {
            aa: p.a * q.a,
            ab: p.a * q.b + p.b * q.a,
            bb: p.b * q.b,
            a: p.a * q.c + p.c * q.a,
            b: p.b * q.c + p.c * q.b,
            c: p.c * q.c,
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self {
            aa: self.aa - o.aa,
            ab: self.ab - o.ab,
            bb: self.bb - o.bb,
            a: self.a - o.a,
            b: self.b - o.b,
            c: self.c - o.c,
        }
    }

    /// Coefficients of `α⁰, α¹, α²` as polynomials in `β`.
    pub fn alpha_coeffs(&self) -> [Polynomial; 3] {
        [
            Polynomial::new(vec![self.c, self.b, self.bb]),
            Polynomial::new(vec![self.a, self.ab]),
            Polynomial::constant(self.aa),
        ]
    }

    pub fn alpha_degree(&self) -> usize {
        if self.aa != 0.0 {
            2
        } else if self.ab != 0.0 || self.a != 0.0 {
            1
        } else {
            0
        }
    }

    /// The polynomial in `β` obtained by fixing `α`.
    pub fn at_alpha(&self, alpha: f64) -> Polynomial {
        Polynomial::new(vec![
            self.aa * alpha * alpha + self.a * alpha + self.c,
            self.ab * alpha + self.b,
            self.bb,
        ])
    }

    /// The polynomial in `α` obtained by fixing `β`.
    pub fn at_beta(&self, beta: f64) -> Polynomial {
        Polynomial::new(vec![
            self.bb * beta * beta + self.b * beta + self.c,
            self.ab * beta + self.a,
            self.aa,
        ])
    }

    /// Stationary point `∇f = 0`, if the Hessian is nonsingular.
    pub fn stationary_point(&self) -> Option<(f64, f64)> {
        // [2aa ab; ab 2bb] (α, β) = −(a, b)
        let det = 4.0 * self.aa * self.bb - self.ab * self.ab;
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        let alpha = (-self.a * 2.0 * self.bb + self.ab * self.b) / det;
        let beta = (-self.b * 2.0 * self.aa + self.ab * self.a) / det;
        Some((alpha, beta))
    }
}

/// Lagrange condition for `max f s.t. g = 0` with the multiplier eliminated:
/// `f_α·g_β − f_β·g_α = 0`.
pub fn multiplier_free_conic(f: &BiQuadratic, g: &BiQuadratic) -> BiQuadratic {
    let lhs = BiQuadratic::product_of_linear(&f.d_alpha(), &g.d_beta());
    let rhs = BiQuadratic::product_of_linear(&f.d_beta(), &g.d_alpha());
    lhs.sub(&rhs)
}

/// Sylvester resultant of `f` and `g` with respect to `α`, a polynomial in `β`
/// of degree at most four whose roots are the `β` coordinates of the common
/// zeros.
pub fn resultant_alpha(f: &BiQuadratic, g: &BiQuadratic) -> Polynomial {
    let [f0, f1, f2] = f.alpha_coeffs();
    let [g0, g1, g2] = g.alpha_coeffs();
    match (f.alpha_degree(), g.alpha_degree()) {
        (0, 0) => &f0 * &g0,
        (0, 1) => f0,
        (1, 0) => g0,
        (0, 2) => &f0 * &f0,
        (2, 0) => &g0 * &g0,
        (1, 1) => &(&f1 * &g0) - &(&f0 * &g1),
        (2, 1) => {
            // f2·g0² − f1·g0·g1 + f0·g1²
            let t1 = &f2 * &(&g0 * &g0);
            let t2 = &f1 * &(&g0 * &g1);
            let t3 = &f0 * &(&g1 * &g1);
            &(&t1 - &t2) + &t3
        }
        (1, 2) => {
            let t1 = &g2 * &(&f0 * &f0);
            let t2 = &g1 * &(&f0 * &f1);
            let t3 = &g0 * &(&f1 * &f1);
            &(&t1 - &t2) + &t3
        }
        _ => {
            // (f2·g0 − f0·g2)² − (f2·g1 − f1·g2)(f1·g0 − f0·g1)
            let a = &(&f2 * &g0) - &(&f0 * &g2);
            let b = &(&f2 * &g1) - &(&f1 * &g2);
            let c = &(&f1 * &g0) - &(&f0 * &g1);
            &(&a * &a) - &(&b * &c)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::real_roots;

    #[test]
    fn resultant_of_circle_and_line() {
        // α² + β² − 1 = 0 and α − β = 0 meet at β = ±1/√2.
        let circle = BiQuadratic {
            aa: 1.0,
            bb: 1.0,
            c: -1.0,
            ..Default::default()
        };
        let line = BiQuadratic::linear(1.0, -1.0, 0.0);
        let res = resultant_alpha(&circle, &line);
        let roots = real_roots(&res).unwrap();
        assert_eq!(roots.len(), 2);
        let s = 0.5_f64.sqrt();
        assert!((roots[0].value + s).abs() < 1e-12);
        assert!((roots[1].value - s).abs() < 1e-12);
    }

    #[test]
    fn resultant_of_two_conics() {
        // α² + β² = 4 and α·β = 1: β⁴ − 4β² + 1 = 0, four real roots.
        let circle = BiQuadratic {
            aa: 1.0,
            bb: 1.0,
            c: -4.0,
            ..Default::default()
        };
        let hyperbola = BiQuadratic {
            ab: 1.0,
            c: -1.0,
            ..Default::default()
        };
        let roots = real_roots(&resultant_alpha(&circle, &hyperbola)).unwrap();
        assert_eq!(roots.len(), 4);
        for r in roots {
            let b2 = r.value * r.value;
            assert!((b2 * b2 - 4.0 * b2 + 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn lagrange_conic_recovers_constrained_maximum() {
        // max −α² − β² s.t. α + β − 1 = 0 → (1/2, 1/2).
        let f = BiQuadratic {
            aa: -1.0,
            bb: -1.0,
            ..Default::default()
        };
        let g = BiQuadratic::linear(1.0, 1.0, -1.0);
        let conic = multiplier_free_conic(&f, &g);
        let roots = real_roots(&resultant_alpha(&conic, &g)).unwrap();
        assert_eq!(roots.len(), 1);
        assert!((roots[0].value - 0.5).abs() < 1e-12);
    }

    #[test]
    fn stationary_point_of_concave_quadratic() {
        let f = BiQuadratic {
            aa: -1.0,
            bb: -1.0,
            a: 0.5,
            b: 1.0,
            ..Default::default()
        };
        let (a, b) = f.stationary_point().unwrap();
        assert!((a - 0.25).abs() < 1e-15 && (b - 0.5).abs() < 1e-15);
    }
}
