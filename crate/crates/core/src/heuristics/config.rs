use crate::error::{Error, Result};

/// How the first restart is initialized; later restarts are always random.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InitMode {
    /// Dominant singular pair from power iteration.
    #[default]
    Svd,
    /// Random signs scaled by row and column norms.
    Random,
    /// Caller-supplied factors.
    Given,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Upper bound on sweeps (or power-iteration steps).
    pub max_sweeps: usize,
    /// Stop once a sweep improves the objective by no more than this.
    pub objective_tolerance: f64,
    pub restarts: usize,
    pub rng_seed: u64,
    pub init_mode: InitMode,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            max_sweeps: 1000,
            objective_tolerance: 1e-12,
            restarts: 1,
            rng_seed: 0,
            init_mode: InitMode::Svd,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_sweeps == 0 {
            return Err(Error::Config("max_sweeps must be at least 1".into()));
        }
        if self.restarts == 0 {
            return Err(Error::Config("restarts must be at least 1".into()));
        }
        if !(self.objective_tolerance >= 0.0 && self.objective_tolerance.is_finite()) {
            return Err(Error::Config(format!(
                "objective_tolerance must be a nonnegative finite number (got {})",
                self.objective_tolerance
            )));
        }
        Ok(())
    }

    pub fn with_seed(self, rng_seed: u64) -> Self {
        Self { rng_seed, ..self }
    }

    pub fn with_restarts(self, restarts: usize) -> Self {
        Self { restarts, ..self }
    }

    pub fn with_init(self, init_mode: InitMode) -> Self {
        Self { init_mode, ..self }
    }

    pub fn with_max_sweeps(self, max_sweeps: usize) -> Self {
        Self { max_sweeps, ..self }
    }
}
