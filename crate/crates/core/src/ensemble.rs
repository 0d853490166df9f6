//! Seeded random matrix families.
//!
//! The generator is xoshiro256++ seeded through SplitMix64 (`seed_from_u64`). Each uniform
//! draw takes the top 53 bits of one 64-bit output, `u = (x >> 11) * 2^-53`, and maps it to
//! `lo + (hi - lo) * u`. Matrices of one ensemble are drawn back to back from a single stream:
//! diagonal entries in order for `Diagonal`, strictly-upper entries in row-major order for
//! `Skew`, and all entries in row-major order for `Positive` and `General`. The same recipe
//! reproduces an ensemble in any language.

use std::fmt;
use std::str::FromStr;

use rand_xoshiro::rand_core::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::GameMatrix;

/// Lower clamp for entries of the `Positive` family.
pub const POSITIVE_FLOOR: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum EnsembleFamily {
    Diagonal,
    Skew,
    Positive,
    General,
}

impl EnsembleFamily {
    pub const ALL: [EnsembleFamily; 4] = [
        EnsembleFamily::Diagonal,
        EnsembleFamily::Skew,
        EnsembleFamily::Positive,
        EnsembleFamily::General,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EnsembleFamily::Diagonal => "Diagonal",
            EnsembleFamily::Skew => "Skew",
            EnsembleFamily::Positive => "Positive",
            EnsembleFamily::General => "General",
        }
    }
}

impl fmt::Display for EnsembleFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EnsembleFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        EnsembleFamily::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidEnsemble(format!("unknown family {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnsembleSpec {
    pub family: EnsembleFamily,
    pub rows: usize,
    pub cols: usize,
    pub trials: usize,
    pub seed: u64,
    pub lo: f64,
    pub hi: f64,
}

impl EnsembleSpec {
    /// Square `size x size` ensemble with entries in `[-1, 1]`.
    pub fn new(family: EnsembleFamily, size: usize, trials: usize, seed: u64) -> Self {
        Self {
            family,
            rows: size,
            cols: size,
            trials,
            seed,
            lo: -1.0,
            hi: 1.0,
        }
    }

    pub fn with_cols(mut self, cols: usize) -> Self {
        self.cols = cols;
        self
    }

    pub fn with_range(mut self, lo: f64, hi: f64) -> Self {
        self.lo = lo;
        self.hi = hi;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidEnsemble(msg));
        if self.rows == 0 || self.cols == 0 {
            return bad(format!("size must be positive, got {}x{}", self.rows, self.cols));
        }
        if self.trials == 0 {
            return bad("trials must be positive".into());
        }
        if !(self.lo.is_finite() && self.hi.is_finite() && self.lo < self.hi) {
            return bad(format!("entry range [{}, {}] is empty", self.lo, self.hi));
        }
        match self.family {
            EnsembleFamily::Diagonal | EnsembleFamily::Skew if self.rows != self.cols => bad(
                format!("{} matrices must be square, got {}x{}", self.family, self.rows, self.cols),
            ),
            EnsembleFamily::Positive if self.hi <= POSITIVE_FLOOR => bad(format!(
                "positive family needs hi > {POSITIVE_FLOOR}, got {}",
                self.hi
            )),
            _ => Ok(()),
        }
    }
}

/// Uniform reals from a xoshiro256++ stream.
#[derive(Debug, Clone)]
pub struct SeededUniform {
    rng: Xoshiro256PlusPlus,
}

impl SeededUniform {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: Xoshiro256PlusPlus::seed_from_u64(seed),
        }
    }

    /// A draw from `[0, 1)` with 53 random bits.
    pub fn unit(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.unit()
    }

    /// Integer in `lo..=hi`.
    pub fn int_in(&mut self, lo: usize, hi: usize) -> usize {
        lo + ((self.unit() * (hi - lo + 1) as f64) as usize).min(hi - lo)
    }
}

pub fn generate_ensemble(spec: &EnsembleSpec) -> Result<Vec<GameMatrix>> {
    spec.validate()?;
    let mut rng = SeededUniform::new(spec.seed);
    (0..spec.trials)
        .map(|_| draw_matrix(&mut rng, spec))
        .collect()
}

fn draw_matrix(rng: &mut SeededUniform, spec: &EnsembleSpec) -> Result<GameMatrix> {
    let (m, n) = (spec.rows, spec.cols);
    let (lo, hi) = (spec.lo, spec.hi);
    match spec.family {
        EnsembleFamily::Diagonal => {
            let d: Vec<f64> = (0..n).map(|_| rng.uniform(lo, hi)).collect();
            GameMatrix::diagonal(&d)
        }
        EnsembleFamily::Skew => {
            let mut e = vec![0.0; n * n];
            for i in 0..n {
                for j in i + 1..n {
                    let v = rng.uniform(lo, hi);
                    e[i * n + j] = v;
                    e[j * n + i] = -v;
                }
            }
            GameMatrix::new(n, n, e)
        }
        EnsembleFamily::Positive => {
            let lo = lo.max(POSITIVE_FLOOR);
            let e = (0..m * n).map(|_| rng.uniform(lo, hi)).collect();
            GameMatrix::new(m, n, e)
        }
        EnsembleFamily::General => {
            let e = (0..m * n).map(|_| rng.uniform(lo, hi)).collect();
            GameMatrix::new(m, n, e)
        }
    }
}
