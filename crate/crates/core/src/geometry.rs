//! Small geometric kernels on point sets in ℝⁿ.

use nalgebra::{DMatrix, DVector};

use crate::error::{DecError, Result};

pub fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

pub fn diameter(points: &[&[f64]]) -> f64 {
    let mut d: f64 = 0.0;
    for (i, p) in points.iter().enumerate() {
        for q in &points[i + 1..] {
            d = d.max(distance(p, q));
        }
    }
    d
}

fn gram(points: &[&[f64]]) -> DMatrix<f64> {
    let k = points.len() - 1;
    let p0 = points[0];
    let edges: Vec<Vec<f64>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(p0).map(|(a, b)| a - b).collect())
        .collect();
    DMatrix::from_fn(k, k, |i, j| edges[i].iter().zip(&edges[j]).map(|(a, b)| a * b).sum())
}

/// Unsigned `k`-volume of the simplex spanned by `k + 1` points:
/// `sqrt(det(GᵀG)) / k!`, and 1 for a single point.
pub fn simplex_volume(points: &[&[f64]]) -> f64 {
    let k = points.len() - 1;
    match k {
        0 => 1.0,
        1 => distance(points[0], points[1]),
        _ if points[0].len() == 2 && k == 2 => signed_area(points[0], points[1], points[2]).abs(),
        _ => {
            let det = gram(points).determinant().max(0.0);
            det.sqrt() / (1..=k).map(|i| i as f64).product::<f64>()
        }
    }
}

/// Signed area of a planar triangle (positive when counter-clockwise).
pub fn signed_area(a: &[f64], b: &[f64], c: &[f64]) -> f64 {
    0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))
}

/// Circumcenter and its barycentric coordinates with respect to the input
/// points.
pub fn circumcenter_barycentric(points: &[&[f64]]) -> Result<(Vec<f64>, Vec<f64>)> {
    let k = points.len() - 1;
    let p0 = points[0];
    if k == 0 {
        return Ok((p0.to_vec(), vec![1.0]));
    }
    let g = gram(points);
    let scale = g.diagonal().max();
    if scale <= 0.0 {
        return Err(DecError::DegeneratePoints);
    }
    let rhs = DVector::from_fn(k, |i, _| 0.5 * g[(i, i)]);
    let lu = g.clone().lu();
    // relative pivot test against the Gram scale
    let det = lu.determinant();
    if !(det.abs() > 1e-12 * scale.powi(k as i32)) {
        return Err(DecError::DegeneratePoints);
    }
    let alpha = lu.solve(&rhs).ok_or(DecError::DegeneratePoints)?;
    let mut center = p0.to_vec();
    for (i, p) in points[1..].iter().enumerate() {
        for (c, (a, b)) in center.iter_mut().zip(p.iter().zip(p0)) {
            *c += alpha[i] * (a - b);
        }
    }
    let mut bary = Vec::with_capacity(k + 1);
    bary.push(1.0 - alpha.sum());
    bary.extend(alpha.iter());
    Ok((center, bary))
}

pub fn circumcenter(points: &[&[f64]]) -> Result<Vec<f64>> {
    circumcenter_barycentric(points).map(|(c, _)| c)
}

/// Vertex average.
pub fn centroid(points: &[&[f64]]) -> Vec<f64> {
    let n = points[0].len();
    let mut c = vec![0.0; n];
    for p in points {
        for (ci, pi) in c.iter_mut().zip(p.iter()) {
            *ci += pi;
        }
    }
    let m = points.len() as f64;
    c.iter_mut().for_each(|x| *x /= m);
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn circumcenter_of_edge_is_midpoint() {
        let c = circumcenter(&[&[0.0, 0.0], &[1.0, 0.0]]).unwrap();
        assert_eq!(c, vec![0.5, 0.0]);
    }

    #[test]
    fn circumcenter_equilateral() {
        let s3 = 3f64.sqrt();
        let c = circumcenter(&[&[0.0, 0.0], &[1.0, 0.0], &[0.5, s3 / 2.0]]).unwrap();
        assert_relative_eq!(c[0], 0.5, epsilon = 1e-15);
        assert_relative_eq!(c[1], 0.288_675_134_594_812_9, epsilon = 1e-15);
    }

    #[test]
    fn circumcenter_right_triangle_on_hypotenuse() {
        let (c, bary) = circumcenter_barycentric(&[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]]).unwrap();
        assert_relative_eq!(c[0], 0.5, epsilon = 1e-15);
        assert_relative_eq!(c[1], 0.5, epsilon = 1e-15);
        assert!(bary[0].abs() < 1e-15);
    }

    #[test]
    fn circumcenter_in_3d_is_equidistant() {
        let pts: [&[f64]; 3] = [&[0.1, 0.2, 0.3], &[1.0, -0.4, 0.7], &[0.3, 0.9, -0.2]];
        let c = circumcenter(&pts).unwrap();
        let r0 = distance(&c, pts[0]);
        for p in &pts[1..] {
            assert_relative_eq!(distance(&c, p), r0, max_relative = 1e-12);
        }
    }

    #[test]
    fn degenerate_points_rejected() {
        assert!(circumcenter(&[&[0.0, 0.0], &[1.0, 0.0], &[2.0, 0.0]]).is_err());
        assert!(circumcenter(&[&[0.0, 0.0], &[0.0, 0.0]]).is_err());
    }

    #[test]
    fn volumes() {
        assert_eq!(simplex_volume(&[&[3.0, 4.0]]), 1.0);
        assert_eq!(simplex_volume(&[&[0.0, 0.0], &[1.0, 0.0]]), 1.0);
        assert_eq!(simplex_volume(&[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]]), 0.5);
        let l = 0.3;
        let s3 = 3f64.sqrt();
        assert_relative_eq!(
            simplex_volume(&[&[0.0, 0.0], &[l, 0.0], &[l / 2.0, l * s3 / 2.0]]),
            s3 / 4.0 * l * l,
            max_relative = 1e-14
        );
        // Gram route in 3-space
        assert_relative_eq!(
            simplex_volume(&[&[0.0, 0.0, 1.0], &[1.0, 0.0, 1.0], &[0.0, 1.0, 1.0]]),
            0.5,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            simplex_volume(&[&[0.0, 0.0, 0.0], &[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0]]),
            1.0 / 6.0,
            max_relative = 1e-14
        );
    }
}
