//! Seeded random instances.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Geometric};
use thiserror::Error;

use crate::instance::Instance;
use crate::Vertex;

/// Attempts per agent before giving up on a non-empty list.
pub const MAX_REROLLS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorParams {
    pub agents: usize,
    pub jobs: usize,
    /// Probability that a given agent–job pair is an edge, in `(0, 1]`.
    pub density: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenerateError {
    #[error("need at least one agent and one job, got {agents} and {jobs}")]
    Empty { agents: usize, jobs: usize },
    #[error("density must lie in (0, 1], got {0}")]
    Density(f64),
    #[error("agent a{agent} still had no neighbour after {MAX_REROLLS} draws")]
    Stuck { agent: usize },
}

/// Draws the jobs of one agent row, skipping geometrically so sparse rows cost `O(degree)`.
fn draw_row<R: Rng>(rng: &mut R, jobs: usize, gap: &Geometric) -> Vec<usize> {
    let mut row = Vec::new();
    let mut pos: u64 = 0;
    loop {
        pos = pos.saturating_add(gap.sample(rng));
        if pos >= jobs as u64 {
            return row;
        }
        row.push(pos as usize);
        pos += 1;
    }
}

/// Keeps each pair with probability `density`, redraws empty agent rows, then
/// shuffles every agent's list and every job's list. Vertices are named
/// `a0, a1, ...` and `b0, b1, ...`; the same parameters always give the same instance.
pub fn generate(params: &GeneratorParams) -> Result<Instance, GenerateError> {
    let GeneratorParams { agents, jobs, density, seed } = *params;
    if agents == 0 || jobs == 0 {
        return Err(GenerateError::Empty { agents, jobs });
    }
    if !(density > 0.0 && density <= 1.0) {
        return Err(GenerateError::Density(density));
    }
    let gap = Geometric::new(density).map_err(|_| GenerateError::Density(density))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut prefs: Vec<Vec<Vertex>> = vec![Vec::new(); agents + jobs];
    for a in 0..agents {
        let row = (0..MAX_REROLLS)
            .map(|_| draw_row(&mut rng, jobs, &gap))
            .find(|row| !row.is_empty())
            .ok_or(GenerateError::Stuck { agent: a })?;
        for j in row {
            prefs[a].push(agents + j);
            prefs[agents + j].push(a);
        }
    }
    for list in prefs.iter_mut() {
        list.shuffle(&mut rng);
    }
    let names = |prefix: char, count: usize| (0..count).map(|i| format!("{prefix}{i}")).collect();
    Ok(Instance::new(names('a', agents), names('b', jobs), prefs).expect("generated lists are symmetric"))
}
