//! Global-best particle swarm maximizer over a box.
//!
//! Fitness is requested one swarm at a time through a batch callback, so the
//! caller may evaluate particles in parallel; all random draws happen here,
//! in a fixed order, from a generator owned by the optimizer.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::raman::{RamanPump, RamanPumpSet, PUMP_MAX_POWER_MW, PUMP_WINDOW_NM};

#[derive(Debug, Clone, PartialEq)]
pub struct SwarmConfig {
    pub particles: usize,
    pub iterations: usize,
    pub inertia: f64,
    pub cognitive: f64,
    pub social: f64,
    pub seed: u64,
    /// Largest velocity per dimension as a fraction of that dimension's range.
    pub max_velocity: f64,
    /// Stop early after this many iterations without improvement.
    pub stall_iterations: Option<usize>,
    pub bounds: Vec<(f64, f64)>,
}

impl SwarmConfig {
    pub fn new(bounds: Vec<(f64, f64)>) -> Self {
        Self {
            particles: 30,
            iterations: 150,
            inertia: 0.729,
            cognitive: 1.49445,
            social: 1.49445,
            seed: 0,
            max_velocity: 0.2,
            stall_iterations: None,
            bounds,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.particles < 2 {
            return Err(Error::param("optimizer.particles", "at least 2 required"));
        }
        if self.iterations == 0 {
            return Err(Error::param("optimizer.iterations", "at least 1 required"));
        }
        if !(self.inertia >= 0.0 && self.inertia < 1.0) {
            return Err(Error::param("optimizer.inertia", "must lie in [0, 1)"));
        }
        if !(self.cognitive > 0.0) || !(self.social > 0.0) {
            return Err(Error::param("optimizer.cognitive", "coefficients must be positive"));
        }
        if !(self.max_velocity > 0.0 && self.max_velocity <= 1.0) {
            return Err(Error::param("optimizer.max_velocity", "must lie in (0, 1]"));
        }
        if self.bounds.is_empty() {
            return Err(Error::param("optimizer.bounds", "no dimensions"));
        }
        for &(lo, hi) in &self.bounds {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::param("optimizer.bounds", "need finite lo < hi"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SwarmResult {
    pub best: Vec<f64>,
    pub best_fitness: f64,
    /// Best fitness after initialization and after every iteration.
    pub trace: Vec<f64>,
    /// Global-best position matching each `trace` entry.
    pub best_history: Vec<Vec<f64>>,
    pub evaluations: usize,
}

fn sanitize(f: f64) -> f64 {
    if f.is_nan() || f == f64::INFINITY {
        f64::NEG_INFINITY
    } else {
        f
    }
}

pub fn optimize<F>(config: &SwarmConfig, mut evaluate: F) -> Result<SwarmResult>
where
    F: FnMut(&[Vec<f64>]) -> Vec<f64>,
{
    config.validate()?;
    let dim = config.bounds.len();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let vmax: Vec<f64> = config
        .bounds
        .iter()
        .map(|(lo, hi)| config.max_velocity * (hi - lo))
        .collect();

    let mut positions: Vec<Vec<f64>> = (0..config.particles)
        .map(|_| {
            config
                .bounds
                .iter()
                .map(|&(lo, hi)| lo + rng.gen::<f64>() * (hi - lo))
                .collect()
        })
        .collect();
    let mut velocities: Vec<Vec<f64>> = (0..config.particles)
        .map(|_| vmax.iter().map(|v| v * (2.0 * rng.gen::<f64>() - 1.0)).collect())
        .collect();

    let mut batch = |xs: &[Vec<f64>]| -> Result<Vec<f64>> {
        let f = evaluate(xs);
        if f.len() != xs.len() {
            return Err(Error::param("fitness", "one value per particle required"));
        }
        Ok(f.into_iter().map(sanitize).collect())
    };

    let fitness = batch(&positions)?;
    let mut evaluations = positions.len();
    let mut personal = positions.clone();
    let mut personal_fit = fitness;
    let mut g = argmax(&personal_fit);
    let mut best = personal[g].clone();
    let mut best_fitness = personal_fit[g];
    let mut trace = vec![best_fitness];
    let mut best_history = vec![best.clone()];
    let mut stalled = 0;

    for _ in 0..config.iterations {
        for p in 0..config.particles {
            let (x, v) = (&mut positions[p], &mut velocities[p]);
            for d in 0..dim {
                let (r1, r2): (f64, f64) = (rng.gen(), rng.gen());
                let mut vel = config.inertia * v[d]
                    + config.cognitive * r1 * (personal[p][d] - x[d])
                    + config.social * r2 * (best[d] - x[d]);
                vel = vel.clamp(-vmax[d], vmax[d]);
                let (lo, hi) = config.bounds[d];
                let mut pos = x[d] + vel;
                if pos < lo {
                    pos = 2.0 * lo - pos;
                    vel = -vel;
                } else if pos > hi {
                    pos = 2.0 * hi - pos;
                    vel = -vel;
                }
                x[d] = pos.clamp(lo, hi);
                v[d] = vel;
            }
        }
        let fitness = batch(&positions)?;
        evaluations += positions.len();
        for (p, f) in fitness.into_iter().enumerate() {
            if f > personal_fit[p] {
                personal_fit[p] = f;
                personal[p].clone_from(&positions[p]);
            }
        }
        g = argmax(&personal_fit);
        if personal_fit[g] > best_fitness {
            best_fitness = personal_fit[g];
            best.clone_from(&personal[g]);
            stalled = 0;
        } else {
            stalled += 1;
        }
        trace.push(best_fitness);
        best_history.push(best.clone());
        if config.stall_iterations.is_some_and(|limit| stalled >= limit) {
            break;
        }
    }
    Ok(SwarmResult {
        best,
        best_fitness,
        trace,
        best_history,
        evaluations,
    })
}

fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v > values[best] {
            best = i;
        }
    }
    best
}

/// Search box for `n` pumps laid out as `[lambda_1, P_1, lambda_2, P_2, ...]`.
pub fn pump_bounds(n: usize) -> Vec<(f64, f64)> {
    (0..n)
        .flat_map(|_| [PUMP_WINDOW_NM, (0.0, PUMP_MAX_POWER_MW)])
        .collect()
}

pub fn encode_pumps(pumps: &RamanPumpSet) -> Vec<f64> {
    pumps
        .pumps()
        .iter()
        .flat_map(|p| [p.wavelength_nm, p.power_mw])
        .collect()
}

/// Pump set from a particle position, ordered by wavelength.
pub fn decode_pumps(x: &[f64]) -> Result<RamanPumpSet> {
    if !x.len().is_multiple_of(2) {
        return Err(Error::param("candidate", "needs wavelength/power pairs"));
    }
    let mut pumps: Vec<RamanPump> = x.chunks_exact(2).map(|c| RamanPump::new(c[0], c[1])).collect();
    pumps.sort_by(|a, b| a.wavelength_nm.total_cmp(&b.wavelength_nm));
    RamanPumpSet::new(pumps)
}
