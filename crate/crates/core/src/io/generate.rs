//! Seeded synthetic road graphs.

use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{NodeId, RoadGraph, Weight};

use super::{load_dimacs, IoError};

const BASE_WEIGHT: Weight = 10;

/// Where a road graph comes from.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum GraphSource {
    Dimacs { graph: PathBuf, coordinates: Option<PathBuf> },
    Grid { width: usize, height: usize, seed: u64, perturb: Weight },
    Ring { width: usize, height: usize, seed: u64, perturb: Weight },
}

impl GraphSource {
    pub fn load(&self) -> Result<RoadGraph, IoError> {
        match self {
            GraphSource::Dimacs { graph, coordinates } => load_dimacs(graph, coordinates.as_deref()),
            GraphSource::Grid { width, height, seed, perturb } => generate_grid(*width, *height, *seed, *perturb),
            GraphSource::Ring { width, height, seed, perturb } => generate_ring(*width, *height, *seed, *perturb),
        }
    }
}

fn check(width: usize, height: usize, perturb: Weight) -> Result<(), IoError> {
    if width < 2 || height < 2 {
        return Err(IoError::InvalidParameter(format!("width and height must be at least 2, got {width}x{height}")));
    }
    if perturb >= BASE_WEIGHT {
        return Err(IoError::InvalidParameter(format!("perturbation must be below {BASE_WEIGHT}, got {perturb}")));
    }
    Ok(())
}

struct Builder {
    rng: ChaCha8Rng,
    perturb: Weight,
    edges: Vec<(NodeId, NodeId, Weight)>,
}

impl Builder {
    fn new(seed: u64, perturb: Weight) -> Self {
        Builder { rng: ChaCha8Rng::seed_from_u64(seed), perturb, edges: Vec::new() }
    }

    /// Both directions, each with its own weight.
    fn road(&mut self, u: NodeId, v: NodeId) {
        for (a, b) in [(u, v), (v, u)] {
            let w = self.rng.random_range(BASE_WEIGHT - self.perturb..=BASE_WEIGHT + self.perturb);
            self.edges.push((a, b, w));
        }
    }
}

/// Bidirected `width x height` grid; node `(x, y)` has id `y * width + x`.
pub fn generate_grid(width: usize, height: usize, seed: u64, perturb: Weight) -> Result<RoadGraph, IoError> {
    check(width, height, perturb)?;
    let mut b = Builder::new(seed, perturb);
    for y in 0..height {
        for x in 0..width {
            let v = y * width + x;
            if x + 1 < width {
                b.road(v, v + 1);
            }
            if y + 1 < height {
                b.road(v, v + width);
            }
        }
    }
    let coords = (0..height).flat_map(|y| (0..width).map(move |x| (x as f64, y as f64))).collect();
    Ok(RoadGraph::new(width * height, &b.edges)?.with_coordinates(coords)?)
}

/// `height` concentric rings of `width` nodes each, joined by radial roads;
/// node `i` of ring `r` has id `r * width + i`.
pub fn generate_ring(width: usize, height: usize, seed: u64, perturb: Weight) -> Result<RoadGraph, IoError> {
    check(width, height, perturb)?;
    let mut b = Builder::new(seed, perturb);
    for r in 0..height {
        for i in 0..width {
            let v = r * width + i;
            if width > 2 || i == 0 {
                b.road(v, r * width + (i + 1) % width);
            }
            if r + 1 < height {
                b.road(v, v + width);
            }
        }
    }
    let coords = (0..height)
        .flat_map(|r| {
            (0..width).map(move |i| {
                let angle = std::f64::consts::TAU * i as f64 / width as f64;
                let radius = (r + 1) as f64;
                (radius * angle.cos(), radius * angle.sin())
            })
        })
        .collect();
    Ok(RoadGraph::new(width * height, &b.edges)?.with_coordinates(coords)?)
}
