//! Least concave majorant of sampled points (upper hull, monotone chain).

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct UpperHull {
    vertices: Vec<(f64, f64)>,
}

fn cross(o: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

impl UpperHull {
    /// `points` must be sorted by abscissa, finite, and at least three long.
    pub fn new(points: &[(f64, f64)]) -> Result<Self> {
        if points.len() < 3 {
            return Err(Error::BadPointSet(format!("need at least 3 points, got {}", points.len())));
        }
        if points.iter().any(|p| !p.0.is_finite() || !p.1.is_finite()) {
            return Err(Error::BadPointSet("non-finite point".into()));
        }
        if points.windows(2).any(|w| w[1].0 < w[0].0) {
            return Err(Error::BadPointSet("points are not sorted by u".into()));
        }
        let mut vertices: Vec<(f64, f64)> = Vec::with_capacity(points.len());
        for &p in points {
            if let Some(last) = vertices.last_mut() {
                if last.0 == p.0 {
                    last.1 = last.1.max(p.1);
                    let p = *last;
                    vertices.pop();
                    Self::push(&mut vertices, p);
                    continue;
                }
            }
            Self::push(&mut vertices, p);
        }
        if vertices.len() < 2 {
            return Err(Error::BadPointSet("points span a single abscissa".into()));
        }
        Ok(Self { vertices })
    }

    fn push(hull: &mut Vec<(f64, f64)>, p: (f64, f64)) {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) >= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }

    pub fn vertices(&self) -> &[(f64, f64)] {
        &self.vertices
    }

    pub fn eval(&self, at: f64) -> Result<f64> {
        let v = &self.vertices;
        let (lo, hi) = (v[0].0, v[v.len() - 1].0);
        if !(at >= lo && at <= hi) {
            return Err(Error::OutOfRange { at, lo, hi });
        }
        let j = v.partition_point(|p| p.0 < at);
        if j == 0 {
            return Ok(v[0].1);
        }
        let (a, b) = (v[j - 1], v[j]);
        if b.0 == at {
            return Ok(b.1);
        }
        let t = (at - a.0) / (b.0 - a.0);
        Ok(a.1 + t * (b.1 - a.1))
    }
}

/// Value at `at` of the concave envelope of `points`.
pub fn concave_envelope(points: &[(f64, f64)], at: f64) -> Result<f64> {
    UpperHull::new(points)?.eval(at)
}
