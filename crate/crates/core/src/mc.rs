//! Monte Carlo estimate of loop densities on an L × H torus: every vertex
//! takes one of the two tiles with probability 1/2, loops are traced arc by
//! arc and classified by their winding.

use rand_chacha::rand_core::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Named deterministic generator.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RngKind {
    /// ChaCha8 keyed by the seed, one stream per replica; site s uses bit
    /// s mod 64 of word s / 64.
    #[default]
    Chacha8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MCConfig {
    pub l: usize,
    pub height: usize,
    pub seed: u64,
    pub replicas: usize,
    #[serde(default)]
    pub rng: RngKind,
}

impl MCConfig {
    pub fn new(l: usize, height: usize, seed: u64, replicas: usize) -> Self {
        MCConfig { l, height, seed, replicas, rng: RngKind::Chacha8 }
    }

    pub fn validate(&self) -> Result<()> {
        if self.l < 2 || self.l % 2 == 1 {
            return Err(Error::InvalidArgument(format!("circumference L = {} must be even and at least 2", self.l)));
        }
        if self.height < 10 * self.l {
            return Err(Error::InvalidArgument(format!(
                "height {} is below 10·L = {}",
                self.height,
                10 * self.l
            )));
        }
        if self.replicas == 0 {
            return Err(Error::InvalidArgument("at least one replica is required".into()));
        }
        Ok(())
    }

    pub fn sites(&self) -> usize {
        self.l * self.height
    }
}

/// Loops found in one lattice.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LoopCensus {
    pub contractible: u64,
    pub non_contractible: u64,
    /// Loops winding the periodic vertical direction; excluded from both
    /// densities.
    pub vertical: u64,
    pub edges_traced: u64,
}

impl LoopCensus {
    pub fn total(&self) -> u64 {
        self.contractible + self.non_contractible + self.vertical
    }
}

/// One tile bit per vertex, site order y·L + x.
fn tiles(cfg: &MCConfig, replica: u64) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(replica);
    (0..cfg.sites().div_ceil(64)).map(|_| rng.next_u64()).collect()
}

const LEFT: u8 = 0;
const DOWN: u8 = 1;
const RIGHT: u8 = 2;
const UP: u8 = 3;

/// Exit port for each entry port: tile 0 joins left–up and down–right,
/// tile 1 joins left–down and right–up.
const EXIT: [[u8; 4]; 2] = [[UP, RIGHT, DOWN, LEFT], [DOWN, LEFT, UP, RIGHT]];

/// Draws the lattice for `replica` and traces every loop once.
pub fn sample_lattice(cfg: &MCConfig, replica: u64) -> LoopCensus {
    let (l, h) = (cfg.l, cfg.height);
    let bits = tiles(cfg, replica);
    let tile = |x: usize, y: usize| {
        let s = y * l + x;
        (bits[s / 64] >> (s % 64) & 1) as usize
    };
    // edge 2s: horizontal, right of site s; edge 2s+1: vertical, above site s
    let mut visited = vec![false; 2 * l * h];
    let mut census = LoopCensus::default();
    for start in 0..visited.len() {
        if visited[start] {
            continue;
        }
        let s = start / 2;
        let (sx, sy) = (s % l, s / l);
        // enter the far end of the start edge
        let (mut x, mut y, mut port) =
            if start % 2 == 0 { ((sx + 1) % l, sy, LEFT) } else { (sx, (sy + 1) % h, DOWN) };
        let (mut dx, mut dy): (i64, i64) = if start % 2 == 0 { (1, 0) } else { (0, 1) };
        visited[start] = true;
        census.edges_traced += 1;
        loop {
            let out = EXIT[tile(x, y)][port as usize];
            let (edge, nx, ny, np) = match out {
                RIGHT => (2 * (y * l + x), (x + 1) % l, y, LEFT),
                LEFT => {
                    let px = (x + l - 1) % l;
                    (2 * (y * l + px), px, y, RIGHT)
                }
                UP => (2 * (y * l + x) + 1, x, (y + 1) % h, DOWN),
                _ => {
                    let py = (y + h - 1) % h;
                    (2 * (py * l + x) + 1, x, py, UP)
                }
            };
            if edge == start {
                break;
            }
            match out {
                RIGHT => dx += 1,
                LEFT => dx -= 1,
                UP => dy += 1,
                _ => dy -= 1,
            }
            visited[edge] = true;
            census.edges_traced += 1;
            (x, y, port) = (nx, ny, np);
        }
        debug_assert_eq!(dx.rem_euclid(l as i64), 0);
        if dy != 0 {
            census.vertical += 1;
        } else if dx != 0 {
            census.non_contractible += 1;
        } else {
            census.contractible += 1;
        }
    }
    census
}

/// Pooled estimates over replicas.
#[derive(Clone, Debug, Serialize)]
pub struct MCStats {
    pub l: usize,
    pub height: usize,
    pub seed: u64,
    pub replicas: usize,
    pub n_sites: usize,
    pub mean_nu_c: f64,
    pub mean_nu_nc: f64,
    /// Replica-to-replica standard error; NaN with a single replica.
    pub stderr_nu_c: f64,
    pub stderr_nu_nc: f64,
    pub n_vertical_winding: u64,
    pub total_loops: u64,
}

impl MCStats {
    /// (estimate − exact)/stderr for ν_c and ν_nc.
    pub fn z_scores(&self, nu_c: f64, nu_nc: f64) -> (f64, f64) {
        ((self.mean_nu_c - nu_c) / self.stderr_nu_c, (self.mean_nu_nc - nu_nc) / self.stderr_nu_nc)
    }
}

fn mean_and_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, f64::NAN);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Runs all replicas in parallel; results do not depend on the schedule.
pub fn run(cfg: &MCConfig) -> Result<MCStats> {
    cfg.validate()?;
    let censuses: Vec<LoopCensus> =
        (0..cfg.replicas as u64).into_par_iter().map(|r| sample_lattice(cfg, r)).collect();
    let sites = cfg.sites() as f64;
    let nu_c: Vec<f64> = censuses.iter().map(|c| c.contractible as f64 / sites).collect();
    let nu_nc: Vec<f64> = censuses.iter().map(|c| c.non_contractible as f64 / sites).collect();
    let (mean_nu_c, stderr_nu_c) = mean_and_stderr(&nu_c);
    let (mean_nu_nc, stderr_nu_nc) = mean_and_stderr(&nu_nc);
    Ok(MCStats {
        l: cfg.l,
        height: cfg.height,
        seed: cfg.seed,
        replicas: cfg.replicas,
        n_sites: cfg.sites(),
        mean_nu_c,
        mean_nu_nc,
        stderr_nu_c,
        stderr_nu_nc,
        n_vertical_winding: censuses.iter().map(|c| c.vertical).sum(),
        total_loops: censuses.iter().map(LoopCensus::total).sum(),
    })
}
