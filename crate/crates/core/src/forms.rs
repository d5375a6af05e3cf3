//! Smooth differential forms on ℝ² with polynomial coefficients, their
//! calculus, and the de Rham maps onto primal simplices and dual cells.
//!
//! Orientation is the standard one, `vol = dx∧dy`, which fixes the Hodge
//! star through `ω∧ρ = ⟪⋆ω, ρ⟫ vol`:
//! `⋆1 = vol`, `⋆dx = dy`, `⋆dy = -dx`, `⋆vol = 1`.

use crate::complex::SimplicialComplex;
use crate::dual::DualComplex;
use crate::error::{DecError, Result};
use crate::geometry::signed_area;
use crate::operators::Cochain;
use crate::poly::Poly2;
use crate::quadrature::QuadratureRule;

/// A `k`-form on ℝ²: one coefficient for `k = 0` and `k = 2`, `(P, Q)` for
/// `P dx + Q dy`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyForm {
    degree: usize,
    components: Vec<Poly2>,
}

impl PolyForm {
    pub fn zero_form(f: Poly2) -> Self {
        Self {
            degree: 0,
            components: vec![f],
        }
    }

    pub fn one_form(p: Poly2, q: Poly2) -> Self {
        Self {
            degree: 1,
            components: vec![p, q],
        }
    }

    /// `r dx∧dy`.
    pub fn two_form(r: Poly2) -> Self {
        Self {
            degree: 2,
            components: vec![r],
        }
    }

    /// The zero form of the given degree.
    pub fn zero(degree: usize) -> Self {
        match degree {
            1 => Self::one_form(Poly2::zero(), Poly2::zero()),
            _ => Self {
                degree,
                components: vec![Poly2::zero()],
            },
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn components(&self) -> &[Poly2] {
        &self.components
    }

    /// Largest polynomial degree among the coefficients.
    pub fn poly_degree(&self) -> usize {
        self.components.iter().map(Poly2::degree).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Poly2::is_zero)
    }

    /// Coefficient values at a point.
    pub fn eval(&self, x: f64, y: f64) -> Vec<f64> {
        self.components.iter().map(|c| c.eval(x, y)).collect()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            degree: self.degree,
            components: self.components.iter().map(|c| c.scale(s)).collect(),
        }
    }

    pub fn add(&self, other: &PolyForm) -> Result<Self> {
        if self.degree != other.degree {
            return Err(DecError::DegreeOutOfRange { k: other.degree, n: 2 });
        }
        Ok(Self {
            degree: self.degree,
            components: self.components.iter().zip(&other.components).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &PolyForm) -> Result<Self> {
        self.add(&other.scale(-1.0))
    }

    /// Pointwise inner product `⟪ω, ρ⟫` at `(x, y)`.
    pub fn pointwise_inner(&self, other: &PolyForm, x: f64, y: f64) -> f64 {
        self.eval(x, y).iter().zip(other.eval(x, y)).map(|(a, b)| a * b).sum()
    }
}

pub fn exterior_derivative(form: &PolyForm) -> Result<PolyForm> {
    let c = &form.components;
    match form.degree {
        0 => Ok(PolyForm::one_form(c[0].dx(), c[0].dy())),
        1 => Ok(PolyForm::two_form(&c[1].dx() - &c[0].dy())),
        k => Err(DecError::DegreeOutOfRange { k, n: 2 }),
    }
}

pub fn hodge_star(form: &PolyForm) -> PolyForm {
    let c = &form.components;
    match form.degree {
        0 => PolyForm::two_form(c[0].clone()),
        1 => PolyForm::one_form(-&c[1], c[0].clone()),
        _ => PolyForm::zero_form(c[0].clone()),
    }
}

/// `⋆⁻¹ = (-1)^{k(n-k)} ⋆` on `k`-forms.
pub fn hodge_star_inverse(form: &PolyForm) -> PolyForm {
    let k = form.degree;
    let star = hodge_star(form);
    if (k * (2 - k)) % 2 == 1 {
        star.scale(-1.0)
    } else {
        star
    }
}

/// `δ_k ω = (-1)^k ⋆⁻¹ d ⋆ ω`.
pub fn codifferential(form: &PolyForm) -> Result<PolyForm> {
    let k = form.degree;
    if k == 0 {
        return Err(DecError::DegreeOutOfRange { k, n: 2 });
    }
    let inner = hodge_star_inverse(&exterior_derivative(&hodge_star(form))?);
    Ok(if k % 2 == 1 { inner.scale(-1.0) } else { inner })
}

/// `Δ = δd + dδ`, dropping whichever term leaves the complex.
pub fn hodge_laplacian_smooth(form: &PolyForm) -> PolyForm {
    let k = form.degree;
    let mut out = PolyForm::zero(k);
    if k < 2 {
        let dd = codifferential(&exterior_derivative(form).expect("k < 2")).expect("degree ≥ 1");
        out = out.add(&dd).expect("same degree");
    }
    if k > 0 {
        let dd = exterior_derivative(&codifferential(form).expect("k > 0")).expect("degree ≤ 1");
        out = out.add(&dd).expect("same degree");
    }
    out
}

/// Vertices of the model domain, an equilateral triangle of unit side.
pub fn domain_vertices() -> [[f64; 2]; 3] {
    [[0.0, 0.0], [1.0, 0.0], [0.5, 3f64.sqrt() / 2.0]]
}

/// Centroid of the model domain; every manufactured polynomial is
/// expanded about it.
pub fn domain_center() -> [f64; 2] {
    [0.5, 3f64.sqrt() / 6.0]
}

/// Barycentric coordinates of the model domain as affine polynomials.
pub fn domain_barycentrics() -> [Poly2; 3] {
    let c = domain_center();
    let s3 = 3f64.sqrt();
    [
        Poly2::affine_about(c, 1.0, -1.0, -1.0 / s3),
        Poly2::affine_about(c, 0.0, 1.0, -1.0 / s3),
        Poly2::affine_about(c, 0.0, 0.0, 2.0 / s3),
    ]
}

/// The scalar bubble `10⁸ (λ₁λ₂λ₃)⁵` on the model domain.
pub fn manufactured_scalar() -> Poly2 {
    let [l1, l2, l3] = domain_barycentrics();
    (&(&l1 * &l2) * &l3).powi(5).scale(1e8)
}

/// Manufactured solution of degree `k`: `u`, `u dx + u dy`, or `u dx∧dy`.
pub fn manufactured_solution(k: usize) -> Result<PolyForm> {
    let u = manufactured_scalar();
    match k {
        0 => Ok(PolyForm::zero_form(u)),
        1 => Ok(PolyForm::one_form(u.clone(), u)),
        2 => Ok(PolyForm::two_form(u)),
        _ => Err(DecError::DegreeOutOfRange { k, n: 2 }),
    }
}

/// Polynomial degree a rule must integrate exactly for `form` over a
/// simplex of matching dimension.
pub fn integrand_degree(form: &PolyForm) -> usize {
    form.poly_degree()
}

/// Rule suitable for integrating `form` over `k`-simplices.
pub fn rule_for(form: &PolyForm) -> QuadratureRule {
    let d = integrand_degree(form);
    match form.degree {
        1 => QuadratureRule::interval(d),
        _ => QuadratureRule::triangle(d),
    }
}

/// ∫ of a 1-form along the oriented segment `a → b`.
fn segment_integral(form: &PolyForm, a: &[f64], b: &[f64], rule: &QuadratureRule) -> f64 {
    let (tx, ty) = (b[0] - a[0], b[1] - a[1]);
    let (p, q) = (&form.components[0], &form.components[1]);
    rule.iter()
        .map(|(s, w)| {
            let (x, y) = (a[0] + s[0] * tx, a[1] + s[0] * ty);
            w * (p.eval(x, y) * tx + q.eval(x, y) * ty)
        })
        .sum()
}

/// ∫ R dA over a triangle with the orientation of its vertex order.
fn triangle_integral(r: &Poly2, a: &[f64], b: &[f64], c: &[f64], rule: &QuadratureRule) -> f64 {
    let (e1, e2) = ([b[0] - a[0], b[1] - a[1]], [c[0] - a[0], c[1] - a[1]]);
    let jac = 2.0 * signed_area(a, b, c);
    jac * rule
        .iter()
        .map(|(p, w)| w * r.eval(a[0] + p[0] * e1[0] + p[1] * e2[0], a[1] + p[0] * e1[1] + p[1] * e2[1]))
        .sum::<f64>()
}

/// ∫_σ tr ω with a caller-supplied rule; `points` are the vertices of σ in
/// the orientation to use.
pub fn integrate_with_rule(form: &PolyForm, points: &[&[f64]], rule: &QuadratureRule) -> Result<f64> {
    if points.len() != form.degree + 1 {
        return Err(DecError::ShapeMismatch(format!(
            "{}-form integrated over a {}-simplex",
            form.degree,
            points.len() as isize - 1
        )));
    }
    match form.degree {
        0 => Ok(form.components[0].eval(points[0][0], points[0][1])),
        1 => {
            rule.require(integrand_degree(form))?;
            Ok(segment_integral(form, points[0], points[1], rule))
        }
        _ => {
            rule.require(integrand_degree(form))?;
            Ok(triangle_integral(&form.components[0], points[0], points[1], points[2], rule))
        }
    }
}

/// ∫_σ tr ω, choosing a rule exact for the integrand.
pub fn integrate_over_simplex(form: &PolyForm, points: &[&[f64]]) -> Result<f64> {
    integrate_with_rule(form, points, &rule_for(form))
}

/// Primal de Rham map: `(Rω)_σ = ∫_σ ω` over every `σ ∈ Δ_k` in ascending
/// orientation.
pub fn de_rham(complex: &SimplicialComplex, form: &PolyForm) -> Result<Cochain> {
    if complex.dim() != 2 {
        return Err(DecError::DegreeOutOfRange { k: form.degree, n: complex.dim() });
    }
    let k = form.degree;
    let rule = rule_for(form);
    let values = (0..complex.count(k))
        .map(|i| integrate_with_rule(form, &complex.points(k, i), &rule))
        .collect::<Result<Vec<_>>>()?;
    Ok(Cochain::new(k, values))
}

/// Dual de Rham map for a `(2-k)`-form: `∫_{*σ} ω` for every `σ ∈ Δ_k`.
///
/// Dual 2-cells carry the ambient orientation, a dual 1-cell is oriented by
/// the +90° rotation of its primal edge's tangent, and the dual point of a
/// triangle carries the triangle's orientation sign.
pub fn de_rham_dual(complex: &SimplicialComplex, dual: &DualComplex, form: &PolyForm) -> Result<Vec<f64>> {
    if complex.dim() != 2 {
        return Err(DecError::DegreeOutOfRange { k: form.degree, n: complex.dim() });
    }
    let k = 2 - form.degree;
    let rule = rule_for(form);
    let mut out = Vec::with_capacity(complex.count(k));
    for i in 0..complex.count(k) {
        let value = match k {
            0 => dual
                .dual_cell_pieces(0, i)
                .iter()
                .map(|flag| {
                    let p = dual.flag_points(0, flag);
                    let area = triangle_integral(&form.components[0], p[0], p[1], p[2], &rule);
                    // flag triangles may wind either way; the cell is positive
                    if signed_area(p[0], p[1], p[2]) < 0.0 {
                        -area
                    } else {
                        area
                    }
                })
                .sum(),
            1 => {
                let pts = complex.points(1, i);
                let normal = [-(pts[1][1] - pts[0][1]), pts[1][0] - pts[0][0]];
                dual.dual_cell_pieces(1, i)
                    .iter()
                    .map(|flag| {
                        let p = dual.flag_points(1, flag);
                        let dir = (p[1][0] - p[0][0]) * normal[0] + (p[1][1] - p[0][1]) * normal[1];
                        let seg = segment_integral(form, p[0], p[1], &rule);
                        if dir < 0.0 {
                            -seg
                        } else {
                            seg
                        }
                    })
                    .sum()
            }
            _ => {
                let c = dual.circumcenter(2, i);
                dual.top_orientation()[i] * form.components[0].eval(c[0], c[1])
            }
        };
        out.push(value);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::tests::arb_poly;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn arb_form(k: usize) -> impl Strategy<Value = PolyForm> {
        (arb_poly(6), arb_poly(6)).prop_map(move |(p, q)| match k {
            0 => PolyForm::zero_form(p),
            1 => PolyForm::one_form(p, q),
            _ => PolyForm::two_form(p),
        })
    }

    #[test]
    fn exterior_derivative_examples() {
        let x2 = PolyForm::zero_form(Poly2::monomial(2, 0));
        assert_eq!(
            exterior_derivative(&x2).unwrap(),
            PolyForm::one_form(Poly2::monomial(1, 0).scale(2.0), Poly2::zero())
        );
        let xdy = PolyForm::one_form(Poly2::zero(), Poly2::x());
        assert_eq!(exterior_derivative(&xdy).unwrap(), PolyForm::two_form(Poly2::constant(1.0)));
        assert!(exterior_derivative(&PolyForm::two_form(Poly2::x())).is_err());
    }

    #[test]
    fn hodge_star_basis() {
        let dx = PolyForm::one_form(Poly2::constant(1.0), Poly2::zero());
        let dy = PolyForm::one_form(Poly2::zero(), Poly2::constant(1.0));
        assert_eq!(hodge_star(&dx).eval(0.0, 0.0), vec![0.0, 1.0]);
        assert_eq!(hodge_star(&dy).eval(0.0, 0.0), vec![-1.0, 0.0]);
        assert_eq!(hodge_star(&PolyForm::zero_form(Poly2::constant(1.0))).degree(), 2);
        assert_eq!(hodge_star(&PolyForm::two_form(Poly2::constant(3.0))).eval(0.2, 0.1), vec![3.0]);
    }

    #[test]
    fn hodge_star_matches_wedge_relation() {
        // ω∧ρ = ⟪⋆ω, ρ⟫ vol for constant 1-forms
        for (a, b) in [(1.0, 0.0), (0.0, 1.0), (0.3, -2.0)] {
            for (c, d) in [(1.0, 0.0), (0.0, 1.0), (1.5, 0.25)] {
                let wedge = a * d - b * c;
                let omega = PolyForm::one_form(Poly2::constant(a), Poly2::constant(b));
                let rho = PolyForm::one_form(Poly2::constant(c), Poly2::constant(d));
                assert_relative_eq!(hodge_star(&omega).pointwise_inner(&rho, 0.0, 0.0), wedge);
            }
        }
    }

    #[test]
    fn codifferential_examples() {
        let x_dx = PolyForm::one_form(Poly2::x(), Poly2::zero());
        assert_eq!(codifferential(&x_dx).unwrap().eval(0.4, 0.7), vec![-1.0]);
        // δ(x vol) = (-1)² ⋆⁻¹ d x = -⋆dx = -dy
        let x_vol = PolyForm::two_form(Poly2::x());
        assert_eq!(codifferential(&x_vol).unwrap().eval(0.1, 0.2), vec![0.0, -1.0]);
        assert!(codifferential(&PolyForm::zero_form(Poly2::x())).is_err());
    }

    #[test]
    fn laplacian_examples() {
        let f = PolyForm::zero_form(&Poly2::monomial(2, 0) + &Poly2::monomial(0, 2));
        assert_eq!(hodge_laplacian_smooth(&f).eval(0.3, -0.2), vec![-4.0]);
        let affine = PolyForm::zero_form(Poly2::affine_about([0.0, 0.0], 1.0, 2.0, -3.0));
        assert!(hodge_laplacian_smooth(&affine).is_zero());
        let xdy = PolyForm::one_form(Poly2::zero(), Poly2::x());
        assert!(hodge_laplacian_smooth(&xdy).is_zero());
    }

    #[test]
    fn manufactured_solution_values() {
        let u = manufactured_scalar();
        assert_eq!(u.degree(), 15);
        let c = domain_center();
        assert_relative_eq!(u.eval(c[0], c[1]), 1e8 / 14_348_907.0, max_relative = 1e-13);
        let [a, b, v] = domain_vertices();
        let du = exterior_derivative(&PolyForm::zero_form(u.clone())).unwrap();
        for t in [0.1, 0.37, 0.8] {
            for (p, q) in [(a, b), (b, v), (v, a)] {
                let (x, y) = (p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1]));
                assert!(u.eval(x, y).abs() < 1e-9);
                assert!(du.eval(x, y).iter().all(|g| g.abs() < 1e-8));
            }
        }
        assert!(manufactured_solution(3).is_err());
        assert_eq!(manufactured_solution(1).unwrap().components()[1], u);
    }

    #[test]
    fn integration_examples() {
        let dx = PolyForm::one_form(Poly2::constant(1.0), Poly2::zero());
        assert_eq!(integrate_over_simplex(&dx, &[&[0.0, 0.0], &[1.0, 0.0]]).unwrap(), 1.0);
        let [a, b, c] = domain_vertices();
        let vol = PolyForm::two_form(Poly2::constant(1.0));
        assert_relative_eq!(
            integrate_over_simplex(&vol, &[&a, &b, &c]).unwrap(),
            3f64.sqrt() / 4.0,
            max_relative = 1e-15
        );
        // reversed orientation flips the sign
        assert_relative_eq!(
            integrate_over_simplex(&vol, &[&a, &c, &b]).unwrap(),
            -3f64.sqrt() / 4.0,
            max_relative = 1e-15
        );
        let x2y = PolyForm::two_form(Poly2::monomial(2, 1));
        assert_relative_eq!(
            integrate_over_simplex(&x2y, &[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]]).unwrap(),
            1.0 / 60.0,
            max_relative = 1e-14
        );
        let low = QuadratureRule::triangle(2);
        assert!(integrate_with_rule(&PolyForm::two_form(Poly2::monomial(5, 0)), &[&a, &b, &c], &low).is_err());
    }

    #[test]
    fn manufactured_source_has_zero_mean() {
        let f = hodge_laplacian_smooth(&manufactured_solution(0).unwrap());
        let [a, b, c] = domain_vertices();
        let mean = integrate_over_simplex(&hodge_star(&f), &[&a, &b, &c]).unwrap();
        assert!(mean.abs() < 1e-9, "{mean}");
    }

    proptest! {
        #[test]
        fn d_squared_vanishes(f in arb_form(0)) {
            let dd = exterior_derivative(&exterior_derivative(&f).unwrap()).unwrap();
            prop_assert!(dd.is_zero());
        }

        #[test]
        fn delta_squared_vanishes(w in arb_form(2)) {
            let dd = codifferential(&codifferential(&w).unwrap()).unwrap();
            prop_assert!(dd.is_zero());
        }

        #[test]
        fn double_star_sign(k in 0usize..3, w in arb_form(1)) {
            let w = match k { 1 => w, _ => PolyForm { degree: k, components: vec![w.components[0].clone()] } };
            let twice = hodge_star(&hodge_star(&w));
            let sign = if k * (2 - k) % 2 == 1 { -1.0 } else { 1.0 };
            prop_assert_eq!(twice, w.scale(sign));
        }

        #[test]
        fn star_is_pointwise_isometry(w in arb_form(1), x in -1.0f64..1.0, y in -1.0f64..1.0) {
            let s = hodge_star(&w);
            let lhs = w.pointwise_inner(&w, x, y);
            prop_assert!((lhs - s.pointwise_inner(&s, x, y)).abs() <= 1e-12 * (1.0 + lhs));
        }
    }
}
