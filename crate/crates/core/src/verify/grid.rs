//! Sample grids over a coordinate box.
//!
//! Random grids draw coordinates with `rand::distributions::Uniform` from a
//! `ChaCha8Rng` seeded by `seed_from_u64`, in `x, y, z` order per point.
//! Points outside the structure domain are redrawn, up to a fixed number of
//! attempts.

use std::fmt;

use rand::distributions::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::chart::ChartPoint;
use crate::error::{Error, Result};
use crate::paracontact::ParacontactStructure;

/// Closed coordinate interval `[min, max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub min: f64,
    pub max: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum GridMode {
    Lattice { counts: [usize; 3] },
    Random { count: usize, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleGrid {
    pub bounds: [Bounds; 3],
    #[serde(flatten)]
    pub mode: GridMode,
}

/// Redraw budget per requested random point.
const REDRAW_FACTOR: usize = 100;

impl SampleGrid {
    pub fn new(bounds: [[f64; 2]; 3], mode: GridMode) -> Result<Self> {
        for b in bounds {
            if !(b[0].is_finite() && b[1].is_finite() && b[0] <= b[1]) {
                return Err(Error::DomainViolation(format!("invalid grid interval [{}, {}]", b[0], b[1])));
            }
        }
        match mode {
            GridMode::Lattice { counts } if counts.contains(&0) => {
                return Err(Error::DomainViolation("lattice counts must be positive".into()))
            }
            GridMode::Random { count: 0, .. } => {
                return Err(Error::DomainViolation("random point count must be positive".into()))
            }
            _ => {}
        }
        Ok(SampleGrid { bounds: bounds.map(|b| Bounds { min: b[0], max: b[1] }), mode })
    }

    pub fn lattice(bounds: [[f64; 2]; 3], counts: [usize; 3]) -> Result<Self> {
        Self::new(bounds, GridMode::Lattice { counts })
    }

    pub fn random(bounds: [[f64; 2]; 3], count: usize, seed: u64) -> Result<Self> {
        Self::new(bounds, GridMode::Random { count, seed })
    }

    pub fn seed(&self) -> Option<u64> {
        match self.mode {
            GridMode::Random { seed, .. } => Some(seed),
            GridMode::Lattice { .. } => None,
        }
    }

    /// In-domain points, in a fixed order.
    pub fn points(&self, s: &ParacontactStructure) -> Vec<ChartPoint> {
        match self.mode {
            GridMode::Lattice { counts } => {
                let axis = |a: usize, k: usize| {
                    let b = self.bounds[a];
                    if counts[a] == 1 {
                        (b.min + b.max) / 2.0
                    } else {
                        b.min + (b.max - b.min) * k as f64 / (counts[a] - 1) as f64
                    }
                };
                let mut out = Vec::with_capacity(counts.iter().product());
                for i in 0..counts[0] {
                    for j in 0..counts[1] {
                        for k in 0..counts[2] {
                            let p = ChartPoint::new(axis(0, i), axis(1, j), axis(2, k));
                            if s.contains(&p) {
                                out.push(p);
                            }
                        }
                    }
                }
                out
            }
            GridMode::Random { count, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let dists = self.bounds.map(|b| Uniform::new_inclusive(b.min, b.max));
                let mut out = Vec::with_capacity(count);
                let mut attempts = 0;
                while out.len() < count && attempts < count * REDRAW_FACTOR {
                    attempts += 1;
                    let p = ChartPoint::new(
                        dists[0].sample(&mut rng),
                        dists[1].sample(&mut rng),
                        dists[2].sample(&mut rng),
                    );
                    if s.contains(&p) {
                        out.push(p);
                    }
                }
                out
            }
        }
    }
}

impl fmt::Display for SampleGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.mode {
            GridMode::Lattice { counts } => write!(f, "lattice:{},{},{}", counts[0], counts[1], counts[2])?,
            GridMode::Random { count, seed } => write!(f, "random:{count} seed {seed}")?,
        }
        let b = self.bounds;
        write!(
            f,
            " on [{}, {}] x [{}, {}] x [{}, {}]",
            b[0].min, b[0].max, b[1].min, b[1].max, b[2].min, b[2].max
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::example_preset;

    const BOX: [[f64; 2]; 3] = [[-1.0, 1.0], [-1.0, 1.0], [1.0, 3.0]];

    #[test]
    fn lattice_counts_and_order() {
        let s = example_preset();
        let g = SampleGrid::lattice(BOX, [5, 5, 5]).unwrap();
        let pts = g.points(&s);
        assert_eq!(pts.len(), 125);
        assert_eq!(pts[0], ChartPoint::new(-1.0, -1.0, 1.0));
        assert_eq!(pts[124], ChartPoint::new(1.0, 1.0, 3.0));
    }

    #[test]
    fn lattice_drops_excluded_points() {
        let s = example_preset();
        let g = SampleGrid::lattice([[0.0, 0.0], [0.0, 0.0], [-1.0, 1.0]], [1, 1, 3]).unwrap();
        assert_eq!(g.points(&s).len(), 2);
    }

    #[test]
    fn random_grid_is_reproducible() {
        let s = example_preset();
        let g = SampleGrid::random(BOX, 50, 7).unwrap();
        let a = g.points(&s);
        assert_eq!(a.len(), 50);
        assert_eq!(a, g.points(&s));
        assert_ne!(a, SampleGrid::random(BOX, 50, 8).unwrap().points(&s));
        assert!(a.iter().all(|p| p.z >= 1.0 && p.z <= 3.0));
    }

    #[test]
    fn invalid_grids_rejected() {
        assert!(SampleGrid::lattice(BOX, [0, 1, 1]).is_err());
        assert!(SampleGrid::random([[1.0, 0.0], [0.0, 1.0], [0.0, 1.0]], 3, 1).is_err());
    }
}
