//! The ladder family whose stretch factor approaches 2 from below.
//!
//! Sites `p_0..p_k` run up a steep segment on the left and `q_0..q_k` up a
//! parallel segment on the right, with `δ = 1/(k+2)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::geom::{orient, Point, INV_SQRT3, SQRT3};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LowerBoundFamily {
    pub k: usize,
    pub delta: f64,
    /// `p_0..p_k` followed by `q_0..q_k`.
    pub points: Vec<Point>,
}

impl LowerBoundFamily {
    pub fn p(&self, i: usize) -> usize {
        i
    }

    pub fn q(&self, i: usize) -> usize {
        self.k + 1 + i
    }

    /// The `2k` ladder triangles, counterclockwise with the smallest index
    /// first, sorted.
    pub fn ladder_triangles(&self) -> Vec<[usize; 3]> {
        let mut out = Vec::with_capacity(2 * self.k);
        for i in 1..=self.k {
            for tri in [
                [self.p(i - 1), self.p(i), self.q(i - 1)],
                [self.q(i - 1), self.q(i), self.p(i)],
            ] {
                let [a, b, c] = tri.map(|v| self.points[v]);
                let ccw = if orient(a, b, c) > 0.0 { tri } else { [tri[0], tri[2], tri[1]] };
                let m = (0..3).min_by_key(|&j| ccw[j]).unwrap_or(0);
                out.push([ccw[m], ccw[(m + 1) % 3], ccw[(m + 2) % 3]]);
            }
        }
        out.sort_unstable();
        out
    }
}

pub fn lower_bound_family(k: usize) -> LowerBoundFamily {
    assert!(k >= 1, "the family needs k >= 1");
    let delta = 1.0 / (k as f64 + 2.0);
    let p0 = Point::new(0.0, 0.0);
    let pk = Point::new(delta, 2.0 * INV_SQRT3 - SQRT3 * delta);
    let q0 = Point::new(1.0 - delta, -INV_SQRT3 + SQRT3 * delta);
    let qk = Point::new(1.0, INV_SQRT3);
    let along = |a: Point, b: Point, i: usize| {
        if i == 0 {
            a
        } else if i == k {
            b
        } else {
            a + (b - a) * (i as f64 / k as f64)
        }
    };
    let mut points: Vec<Point> = (0..=k).map(|i| along(p0, pk, i)).collect();
    points.extend((0..=k).map(|i| along(q0, qk, i)));
    LowerBoundFamily { k, delta, points }
}

/// The family with every coordinate moved by a seeded offset of at most
/// `magnitude` in each axis.
pub fn lower_bound_family_perturbed(k: usize, magnitude: f64, seed: u64) -> LowerBoundFamily {
    let mut fam = lower_bound_family(k);
    if magnitude > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for p in &mut fam.points {
            p.x += rng.gen_range(-magnitude..=magnitude);
            p.y += rng.gen_range(-magnitude..=magnitude);
        }
    }
    fam
}

/// `(|p_0 p_k| + |p_k q_k|) / (2/√3)`, the graph distance from `p_0` to `q_k`
/// over their Euclidean distance.
pub fn expected_lower_bound_stretch(k: usize) -> f64 {
    let d = 1.0 / (k as f64 + 2.0);
    let up = (d * d + (2.0 * INV_SQRT3 - SQRT3 * d).powi(2)).sqrt();
    let across = ((1.0 - d).powi(2) + (INV_SQRT3 - SQRT3 * d).powi(2)).sqrt();
    (up + across) / (2.0 * INV_SQRT3)
}
