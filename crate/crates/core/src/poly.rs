//! Bivariate polynomials in a shifted monomial basis.
//!
//! A [`Poly2`] stores coefficients of `(x - cx)^i (y - cy)^j` for
//! `i + j <= degree`. Expanding about a point near the region of interest
//! keeps high-degree polynomials well conditioned; the manufactured
//! solution, for instance, loses four digits when expanded about the origin.

use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone, Debug, PartialEq)]
pub struct Poly2 {
    center: [f64; 2],
    degree: usize,
    // coefficient of X^i Y^j at tri_index(i, j)
    coef: Vec<f64>,
}

fn tri_index(i: usize, j: usize) -> usize {
    let d = i + j;
    d * (d + 1) / 2 + j
}

fn tri_len(degree: usize) -> usize {
    (degree + 1) * (degree + 2) / 2
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

impl Poly2 {
    pub fn zero() -> Self {
        Self::constant(0.0)
    }

    pub fn constant(c: f64) -> Self {
        Self {
            center: [0.0, 0.0],
            degree: 0,
            coef: vec![c],
        }
    }

    /// The coordinate function `x`, expanded about `center`.
    pub fn x_about(center: [f64; 2]) -> Self {
        let mut p = Self::from_coefficients(center, 1, vec![center[0], 1.0, 0.0]);
        p.trim();
        p
    }

    /// The coordinate function `y`, expanded about `center`.
    pub fn y_about(center: [f64; 2]) -> Self {
        let mut p = Self::from_coefficients(center, 1, vec![center[1], 0.0, 1.0]);
        p.trim();
        p
    }

    pub fn x() -> Self {
        Self::x_about([0.0, 0.0])
    }

    pub fn y() -> Self {
        Self::y_about([0.0, 0.0])
    }

    /// `a + b x + c y` about `center`.
    pub fn affine_about(center: [f64; 2], a: f64, b: f64, c: f64) -> Self {
        let mut p = Self::from_coefficients(
            center,
            1,
            vec![a + b * center[0] + c * center[1], b, c],
        );
        p.trim();
        p
    }

    /// Coefficients laid out by total degree, then by the power of y.
    pub fn from_coefficients(center: [f64; 2], degree: usize, coef: Vec<f64>) -> Self {
        assert_eq!(coef.len(), tri_len(degree), "coefficient count for degree {degree}");
        Self { center, degree, coef }
    }

    /// Single monomial `x^i y^j` about the origin.
    pub fn monomial(i: usize, j: usize) -> Self {
        let d = i + j;
        let mut coef = vec![0.0; tri_len(d)];
        coef[tri_index(i, j)] = 1.0;
        Self::from_coefficients([0.0, 0.0], d, coef)
    }

    pub fn center(&self) -> [f64; 2] {
        self.center
    }

    /// Tight total degree (0 for the zero polynomial).
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Coefficient of `(x - cx)^i (y - cy)^j`.
    pub fn coefficient(&self, i: usize, j: usize) -> f64 {
        if i + j > self.degree {
            0.0
        } else {
            self.coef[tri_index(i, j)]
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coef.iter().all(|&c| c == 0.0)
    }

    /// Largest coefficient magnitude.
    pub fn max_coefficient(&self) -> f64 {
        self.coef.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    fn trim(&mut self) {
        while self.degree > 0 {
            let d = self.degree;
            if (0..=d).all(|j| self.coef[tri_index(d - j, j)] == 0.0) {
                self.degree -= 1;
                self.coef.truncate(tri_len(self.degree));
            } else {
                break;
            }
        }
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let (dx, dy) = (x - self.center[0], y - self.center[1]);
        let d = self.degree;
        // Horner in X over columns of fixed j, then Horner in Y.
        let mut acc = 0.0;
        for j in (0..=d).rev() {
            let mut col = 0.0;
            for i in (0..=d - j).rev() {
                col = col * dx + self.coef[tri_index(i, j)];
            }
            acc = acc * dy + col;
        }
        acc
    }

    /// Re-expand about another center.
    pub fn recentered(&self, center: [f64; 2]) -> Self {
        if center == self.center {
            return self.clone();
        }
        // X_old = X_new + s
        let s = [center[0] - self.center[0], center[1] - self.center[1]];
        let d = self.degree;
        let mut coef = vec![0.0; tri_len(d)];
        let pow = |base: f64, e: usize| base.powi(e as i32);
        for i in 0..=d {
            for j in 0..=d - i {
                let c = self.coef[tri_index(i, j)];
                if c == 0.0 {
                    continue;
                }
                for a in 0..=i {
                    let ca = c * binomial(i, a) * pow(s[0], i - a);
                    for b in 0..=j {
                        coef[tri_index(a, b)] += ca * binomial(j, b) * pow(s[1], j - b);
                    }
                }
            }
        }
        let mut p = Self { center, degree: d, coef };
        p.trim();
        p
    }

    fn aligned(&self, other: &Poly2) -> Poly2 {
        // constants carry no information about the center
        if other.degree == 0 {
            Poly2 {
                center: self.center,
                degree: 0,
                coef: other.coef.clone(),
            }
        } else {
            other.recentered(self.center)
        }
    }

    fn combine(&self, other: &Poly2, sign: f64) -> Poly2 {
        let (lhs, rhs) = if self.degree == 0 && other.degree > 0 {
            (other.aligned(self), other.clone())
        } else {
            (self.clone(), self.aligned(other))
        };
        let d = lhs.degree.max(rhs.degree);
        let mut coef = vec![0.0; tri_len(d)];
        for (idx, c) in lhs.coef.iter().enumerate() {
            coef[idx] += c;
        }
        for (idx, c) in rhs.coef.iter().enumerate() {
            coef[idx] += sign * c;
        }
        let mut p = Poly2 {
            center: lhs.center,
            degree: d,
            coef,
        };
        p.trim();
        p
    }

    pub fn scale(&self, s: f64) -> Poly2 {
        let mut p = Poly2 {
            center: self.center,
            degree: self.degree,
            coef: self.coef.iter().map(|c| c * s).collect(),
        };
        p.trim();
        p
    }

    pub fn mul_poly(&self, other: &Poly2) -> Poly2 {
        let (lhs, rhs) = if self.degree == 0 && other.degree > 0 {
            (other.clone(), other.aligned(self))
        } else {
            (self.clone(), self.aligned(other))
        };
        let d = lhs.degree + rhs.degree;
        let mut coef = vec![0.0; tri_len(d)];
        for i1 in 0..=lhs.degree {
            for j1 in 0..=lhs.degree - i1 {
                let a = lhs.coef[tri_index(i1, j1)];
                if a == 0.0 {
                    continue;
                }
                for i2 in 0..=rhs.degree {
                    for j2 in 0..=rhs.degree - i2 {
                        coef[tri_index(i1 + i2, j1 + j2)] += a * rhs.coef[tri_index(i2, j2)];
                    }
                }
            }
        }
        let mut p = Poly2 {
            center: lhs.center,
            degree: d,
            coef,
        };
        p.trim();
        p
    }

    pub fn powi(&self, e: u32) -> Poly2 {
        let mut out = Poly2::constant(1.0);
        for _ in 0..e {
            out = out.mul_poly(self);
        }
        out
    }

    /// ∂/∂x
    pub fn dx(&self) -> Poly2 {
        self.partial(0)
    }

    /// ∂/∂y
    pub fn dy(&self) -> Poly2 {
        self.partial(1)
    }

    fn partial(&self, axis: usize) -> Poly2 {
        if self.degree == 0 {
            return Poly2 {
                center: self.center,
                degree: 0,
                coef: vec![0.0],
            };
        }
        let d = self.degree - 1;
        let mut coef = vec![0.0; tri_len(d)];
        for i in 0..=self.degree {
            for j in 0..=self.degree - i {
                let c = self.coef[tri_index(i, j)];
                match axis {
                    0 if i > 0 => coef[tri_index(i - 1, j)] += c * i as f64,
                    1 if j > 0 => coef[tri_index(i, j - 1)] += c * j as f64,
                    _ => {}
                }
            }
        }
        let mut p = Poly2 {
            center: self.center,
            degree: d,
            coef,
        };
        p.trim();
        p
    }
}

impl Add for &Poly2 {
    type Output = Poly2;
    fn add(self, rhs: &Poly2) -> Poly2 {
        self.combine(rhs, 1.0)
    }
}

impl Sub for &Poly2 {
    type Output = Poly2;
    fn sub(self, rhs: &Poly2) -> Poly2 {
        self.combine(rhs, -1.0)
    }
}

impl Mul for &Poly2 {
    type Output = Poly2;
    fn mul(self, rhs: &Poly2) -> Poly2 {
        self.mul_poly(rhs)
    }
}

impl Neg for &Poly2 {
    type Output = Poly2;
    fn neg(self) -> Poly2 {
        self.scale(-1.0)
    }
}

impl Add for Poly2 {
    type Output = Poly2;
    fn add(self, rhs: Poly2) -> Poly2 {
        &self + &rhs
    }
}

impl Sub for Poly2 {
    type Output = Poly2;
    fn sub(self, rhs: Poly2) -> Poly2 {
        &self - &rhs
    }
}

impl Mul for Poly2 {
    type Output = Poly2;
    fn mul(self, rhs: Poly2) -> Poly2 {
        &self * &rhs
    }
}

impl Neg for Poly2 {
    type Output = Poly2;
    fn neg(self) -> Poly2 {
        -&self
    }
}
