//! Minimum overlap of a unitary with known eigenphases: the squared distance
//! from the origin to the convex hull of `exp(i phi_j)`.

use std::f64::consts::{FRAC_1_SQRT_2, TAU};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{invalid, Result};

/// Points closer than this are merged before building the hull.
const MERGE_TOL: f64 = 1e-14;
const ORTHOGONALITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenPhasePolygon {
    phases: Vec<f64>,
}

impl EigenPhasePolygon {
    /// Phases are reduced into `[0, 2 pi)`.
    pub fn new(phases: Vec<f64>) -> Result<Self> {
        if phases.is_empty() {
            return Err(invalid("eigenphase list is empty"));
        }
        if let Some(p) = phases.iter().find(|p| !p.is_finite()) {
            return Err(invalid(format!("non-finite eigenphase {p}")));
        }
        Ok(EigenPhasePolygon {
            phases: phases.into_iter().map(|p| p.rem_euclid(TAU)).collect(),
        })
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    fn points(&self) -> Vec<(f64, f64)> {
        self.phases.iter().map(|p| (p.cos(), p.sin())).collect()
    }
}

/// Closest hull point to the origin, written as convex weights over the
/// polygon's phases.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HullDistance {
    pub distance_sq: f64,
    pub weights: Vec<f64>,
}

type P = (f64, f64);

fn cross(o: P, a: P, b: P) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Counter-clockwise hull (monotone chain) as indices into `pts`.
fn convex_hull(pts: &[P]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..pts.len()).collect();
    idx.sort_by(|&a, &b| pts[a].partial_cmp(&pts[b]).expect("finite points"));
    idx.dedup_by(|a, b| {
        let (p, q) = (pts[*a], pts[*b]);
        (p.0 - q.0).abs() < MERGE_TOL && (p.1 - q.1).abs() < MERGE_TOL
    });
    if idx.len() < 3 {
        return idx;
    }
    let mut hull: Vec<usize> = Vec::with_capacity(2 * idx.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &usize>> = if pass == 0 {
            Box::new(idx.iter())
        } else {
            Box::new(idx.iter().rev())
        };
        for &i in iter {
            while hull.len() >= start + 2
                && cross(pts[hull[hull.len() - 2]], pts[hull[hull.len() - 1]], pts[i]) <= 0.0
            {
                hull.pop();
            }
            hull.push(i);
        }
        hull.pop();
    }
    hull
}

/// Closest point to the origin on segment `a`-`b`: `(distance^2, t)` with the
/// point at `a + t (b - a)`.
fn segment_closest(a: P, b: P) -> (f64, f64) {
    let d = (b.0 - a.0, b.1 - a.1);
    let len_sq = d.0 * d.0 + d.1 * d.1;
    let t = if len_sq == 0.0 {
        0.0
    } else {
        (-(a.0 * d.0 + a.1 * d.1) / len_sq).clamp(0.0, 1.0)
    };
    let p = (a.0 + t * d.0, a.1 + t * d.1);
    (p.0 * p.0 + p.1 * p.1, t)
}

/// Barycentric coordinates of the origin in triangle `abc`, if inside.
fn origin_in_triangle(a: P, b: P, c: P) -> Option<[f64; 3]> {
    let area = cross(a, b, c);
    if area == 0.0 {
        return None;
    }
    let o = (0.0, 0.0);
    let wa = cross(o, b, c) / area;
    let wb = cross(a, o, c) / area;
    let wc = cross(a, b, o) / area;
    let eps = 1e-15;
    if wa >= -eps && wb >= -eps && wc >= -eps {
        let w = [wa.max(0.0), wb.max(0.0), wc.max(0.0)];
        let s: f64 = w.iter().sum();
        Some([w[0] / s, w[1] / s, w[2] / s])
    } else {
        None
    }
}

pub fn closest_hull_point(poly: &EigenPhasePolygon) -> HullDistance {
    let pts = poly.points();
    let hull = convex_hull(&pts);
    let mut weights = vec![0.0; pts.len()];
    if hull.len() == 1 {
        weights[hull[0]] = 1.0;
        return HullDistance {
            distance_sq: pts[hull[0]].0.powi(2) + pts[hull[0]].1.powi(2),
            weights,
        };
    }
    if hull.len() >= 3 {
        for k in 1..hull.len() - 1 {
            let (i, j, l) = (hull[0], hull[k], hull[k + 1]);
            if let Some(w) = origin_in_triangle(pts[i], pts[j], pts[l]) {
                weights[i] = w[0];
                weights[j] = w[1];
                weights[l] = w[2];
                return HullDistance {
                    distance_sq: 0.0,
                    weights,
                };
            }
        }
    }
    let edges = if hull.len() == 2 { 1 } else { hull.len() };
    let mut best = (f64::INFINITY, 0, 0, 0.0);
    for k in 0..edges {
        let (i, j) = (hull[k], hull[(k + 1) % hull.len()]);
        let (d, t) = segment_closest(pts[i], pts[j]);
        if d < best.0 {
            best = (d, i, j, t);
        }
    }
    let (d, i, j, t) = best;
    weights[i] += 1.0 - t;
    weights[j] += t;
    HullDistance {
        distance_sq: d,
        weights,
    }
}

/// Smallest `|<psi|U|psi>|^2` over probes for a unitary with these
/// eigenphases.
pub fn polygon_min_overlap(poly: &EigenPhasePolygon) -> f64 {
    closest_hull_point(poly).distance_sq
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimalProbe {
    pub state: Vec<Complex64>,
    /// `cos^2((phase_i - phase_j)/2)`.
    pub predicted_overlap: f64,
}

/// Equal superposition of two orthogonal eigenvectors.
pub fn optimal_probe_superposition(
    phase_i: f64,
    phase_j: f64,
    eigvec_i: &[Complex64],
    eigvec_j: &[Complex64],
) -> Result<OptimalProbe> {
    if !phase_i.is_finite() || !phase_j.is_finite() {
        return Err(invalid("non-finite eigenphase"));
    }
    if eigvec_i.len() != eigvec_j.len() {
        return Err(invalid("eigenvectors differ in length"));
    }
    let ni: f64 = eigvec_i.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let nj: f64 = eigvec_j.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if ni == 0.0 || nj == 0.0 {
        return Err(invalid("zero eigenvector"));
    }
    let ov: Complex64 = eigvec_i.iter().zip(eigvec_j).map(|(a, b)| a.conj() * b).sum();
    if ov.norm() / (ni * nj) > ORTHOGONALITY_TOL {
        return Err(invalid(format!(
            "eigenvectors are not orthogonal (normalized overlap {:e})",
            ov.norm() / (ni * nj)
        )));
    }
    let state = eigvec_i
        .iter()
        .zip(eigvec_j)
        .map(|(a, b)| (a / ni + b / nj) * FRAC_1_SQRT_2)
        .collect();
    Ok(OptimalProbe {
        state,
        predicted_overlap: (0.5 * (phase_i - phase_j)).cos().powi(2),
    })
}
