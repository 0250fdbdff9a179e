//! Self-intersections of a sampled closed curve found geometrically.
//!
//! The curve lies in the open hemisphere `x > 0`, so the central (gnomonic)
//! projection `(y/x, z/x)` maps it to the plane and its chords to straight
//! segments. Segment crossings are found through a uniform grid hash, lifted
//! back to the sphere and clustered; the multiplicity of a cluster is the
//! number of distinct arcs of the curve passing through it.

use super::CurveSamples;
use crate::error::{Error, Result};
use nalgebra::{Vector2, Vector3};
use std::collections::{HashMap, HashSet};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepOptions {
    /// Crossings closer than this on the sphere belong to one point.
    pub cluster_tol: f64,
    /// Arc-length separation (in grid steps) below which two parameters
    /// in a cluster count as the same arc.
    pub branch_steps: f64,
    /// Crossing angle (radians, in the projection) below which a cluster is
    /// flagged as near-tangential.
    pub tangent_angle: f64,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions { cluster_tol: 1e-5, branch_steps: 4.0, tangent_angle: 0.05 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossing {
    pub point: Vector3<f64>,
    pub segments: (usize, usize),
    /// Arc-length parameters of the crossing on each segment.
    pub s: (f64, f64),
    /// Angle between the two projected segments, in `[0, π/2]`.
    pub angle: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntersectionCluster {
    pub point: Vector3<f64>,
    pub multiplicity: usize,
    pub crossings: Vec<Crossing>,
    pub min_angle: f64,
    pub near_tangential: bool,
}

fn segment_crossing(p: Vector2<f64>, p2: Vector2<f64>, q: Vector2<f64>, q2: Vector2<f64>) -> Option<(f64, f64, f64)> {
    let (r, d) = (p2 - p, q2 - q);
    let den = r.perp(&d);
    let scale = r.norm() * d.norm();
    if scale == 0.0 || den.abs() <= 1e-14 * scale {
        return None;
    }
    let w = q - p;
    let t = w.perp(&d) / den;
    let u = w.perp(&r) / den;
    const EPS: f64 = 1e-12;
    if !(-EPS..=1.0 + EPS).contains(&t) || !(-EPS..=1.0 + EPS).contains(&u) {
        return None;
    }
    let angle = den.abs().atan2(r.dot(&d).abs());
    Some((t.clamp(0.0, 1.0), u.clamp(0.0, 1.0), angle))
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// All crossings of the closed polyline through `curve.gamma` (the last
/// sample is taken to coincide with the first).
pub fn segment_crossings(curve: &CurveSamples) -> Result<Vec<Crossing>> {
    let g = &curve.gamma;
    if g.len() < 4 {
        return Err(Error::Domain("sweep needs at least four samples".into()));
    }
    let n = g.len() - 1;
    let mut pts = Vec::with_capacity(n);
    for (i, v) in g[..n].iter().enumerate() {
        if v.x <= 0.0 {
            return Err(Error::Numerical(format!("sample {i} leaves the hemisphere x > 0")));
        }
        pts.push(Vector2::new(v.y / v.x, v.z / v.x));
    }
    let seg = |i: usize| (pts[i], pts[(i + 1) % n]);
    let mean_len = (0..n).map(|i| (seg(i).1 - seg(i).0).norm()).sum::<f64>() / n as f64;
    let cell = 2.0 * mean_len.max(1e-12);
    let key = |v: Vector2<f64>| ((v.x / cell).floor() as i64, (v.y / cell).floor() as i64);

    let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for i in 0..n {
        let (a, b) = seg(i);
        let (ka, kb) = (key(a.inf(&b)), key(a.sup(&b)));
        for cx in ka.0..=kb.0 {
            for cy in ka.1..=kb.1 {
                grid.entry((cx, cy)).or_default().push(i);
            }
        }
    }

    let h = curve.step();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for bucket in grid.values() {
        for (x, &i) in bucket.iter().enumerate() {
            for &j in &bucket[x + 1..] {
                let (i, j) = (i.min(j), i.max(j));
                if j == i + 1 || (i == 0 && j == n - 1) || !seen.insert((i, j)) {
                    continue;
                }
                let ((p, p2), (q, q2)) = (seg(i), seg(j));
                if let Some((t, u, angle)) = segment_crossing(p, p2, q, q2) {
                    let c = p + (p2 - p) * t;
                    out.push(Crossing {
                        point: Vector3::new(1.0, c.x, c.y).normalize(),
                        segments: (i, j),
                        s: ((i as f64 + t) * h, (j as f64 + u) * h),
                        angle,
                    });
                }
            }
        }
    }
    out.sort_by_key(|c| c.segments);
    Ok(out)
}

/// Number of groups of cyclic parameters in `[0, period)` separated by more than `gap`.
fn distinct_arcs(mut s: Vec<f64>, period: f64, gap: f64) -> usize {
    s.sort_by(f64::total_cmp);
    s.dedup();
    if s.is_empty() {
        return 0;
    }
    let mut groups = 1 + s.windows(2).filter(|w| w[1] - w[0] > gap).count();
    if groups > 1 && s[0] + period - s[s.len() - 1] <= gap {
        groups -= 1;
    }
    groups
}

pub fn geometric_self_intersections(curve: &CurveSamples, opts: SweepOptions) -> Result<Vec<IntersectionCluster>> {
    let crossings = segment_crossings(curve)?;
    let k = crossings.len();
    let mut parent: Vec<usize> = (0..k).collect();
    let cell = opts.cluster_tol;
    let key =
        |v: &Vector3<f64>| ((v.x / cell).floor() as i64, (v.y / cell).floor() as i64, (v.z / cell).floor() as i64);
    let mut grid: HashMap<(i64, i64, i64), Vec<usize>> = HashMap::new();
    for (i, c) in crossings.iter().enumerate() {
        grid.entry(key(&c.point)).or_default().push(i);
    }
    for (i, c) in crossings.iter().enumerate() {
        let (x, y, z) = key(&c.point);
        for dx in -1..=1 {
            for dy in -1..=1 {
                for dz in -1..=1 {
                    if let Some(list) = grid.get(&(x + dx, y + dy, z + dz)) {
                        for &j in list {
                            if j > i && (crossings[j].point - c.point).norm() <= opts.cluster_tol {
                                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                                parent[a] = b;
                            }
                        }
                    }
                }
            }
        }
    }
    let mut groups: HashMap<usize, Vec<Crossing>> = HashMap::new();
    for (i, c) in crossings.iter().enumerate() {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(*c);
    }
    let period = curve.step() * (curve.gamma.len() - 1) as f64;
    let gap = opts.branch_steps * curve.step();
    let mut out: Vec<IntersectionCluster> = groups
        .into_values()
        .map(|cs| {
            let point = (cs.iter().map(|c| c.point).sum::<Vector3<f64>>() / cs.len() as f64).normalize();
            let params = cs.iter().flat_map(|c| [c.s.0, c.s.1]).collect();
            let min_angle = cs.iter().map(|c| c.angle).fold(f64::INFINITY, f64::min);
            IntersectionCluster {
                point,
                multiplicity: distinct_arcs(params, period, gap),
                crossings: cs,
                min_angle,
                near_tangential: min_angle < opts.tangent_angle,
            }
        })
        .collect();
    out.sort_by(|a, b| a.point.y.total_cmp(&b.point.y).then(a.point.z.total_cmp(&b.point.z)));
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SweepCounts {
    pub double_points: usize,
    pub near_tangential: usize,
    /// Largest multiplicity among points met by three or more arcs.
    pub max_multiplicity: usize,
    pub multiple_points: usize,
}

pub fn sweep_counts(clusters: &[IntersectionCluster]) -> SweepCounts {
    let mut c = SweepCounts::default();
    for k in clusters {
        if k.multiplicity <= 2 {
            c.double_points += 1;
            c.near_tangential += usize::from(k.near_tangential);
        } else {
            c.multiple_points += 1;
            c.max_multiplicity = c.max_multiplicity.max(k.multiplicity);
        }
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn crossing_of_diagonals() {
        let (t, u, a) = segment_crossing(
            Vector2::new(0.0, 0.0),
            Vector2::new(1.0, 1.0),
            Vector2::new(0.0, 1.0),
            Vector2::new(1.0, 0.0),
        )
        .unwrap();
        assert!((t - 0.5).abs() < 1e-15 && (u - 0.5).abs() < 1e-15);
        assert!((a - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn arcs_wrap_around() {
        assert_eq!(distinct_arcs(vec![0.1, 9.95, 5.0], 10.0, 0.5), 2);
        assert_eq!(distinct_arcs(vec![1.0, 1.1, 3.0, 7.0], 10.0, 0.5), 3);
    }
}
