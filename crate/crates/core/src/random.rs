//! Seeded random instances.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::geom::{general_position_rotation_for, GeomError, Point};
use crate::shape::ConvexShape;

/// `n` points uniform in the unit square.
pub fn uniform_points(n: usize, seed: u64) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| Point::new(rng.gen(), rng.gen())).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RandomInstance {
    pub seed: u64,
    pub points: Vec<Point>,
    /// Rotation applied to reach general position, 0 when none was needed.
    pub angle: f64,
}

/// Uniform points, rotated into general position for `shape` when needed.
pub fn random_instance(n: usize, seed: u64, shape: &ConvexShape) -> Result<RandomInstance, GeomError> {
    let raw = uniform_points(n, seed);
    let (points, angle) = general_position_rotation_for(&raw, seed, shape)?;
    Ok(RandomInstance { seed, points, angle })
}
