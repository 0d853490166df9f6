//! Payoff matrices, mixed strategies and bilinear payoff evaluation.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Negative weights down to this value are treated as rounding noise and clamped to zero.
pub const STRATEGY_CLAMP_TOL: f64 = 1e-12;
/// Weight sums within this distance of one are renormalized instead of rejected.
pub const STRATEGY_SUM_TOL: f64 = 1e-9;

/// Dense payoff table of the row player, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct GameMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<f64>,
}

impl GameMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidMatrix(format!(
                "matrix must have at least one row and one column, got {rows}x{cols}"
            )));
        }
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                actual: entries.len(),
            });
        }
        if let Some(k) = entries.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidMatrix(format!(
                "entry ({},{}) is not finite",
                k / cols,
                k % cols
            )));
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, |r| r.as_ref().len());
        let mut entries = Vec::with_capacity(m * n);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != n {
                return Err(Error::InvalidMatrix(format!(
                    "ragged rows: row 0 has {n} entries, row {i} has {}",
                    row.len()
                )));
            }
            entries.extend_from_slice(row);
        }
        Self::new(m, n, entries)
    }

    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        Self::new(rows, cols, vec![0.0; rows * cols])
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::diagonal(&vec![1.0; n])
    }

    pub fn diagonal(d: &[f64]) -> Result<Self> {
        let n = d.len();
        let mut entries = vec![0.0; n * n];
        for (i, &v) in d.iter().enumerate() {
            entries[i * n + i] = v;
        }
        Self::new(n, n, entries)
    }

    /// Row player's pure strategy count.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Column player's pure strategy count.
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of range");
        self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.entries.chunks(self.cols).map(<[f64]>::to_vec).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    pub fn transpose(&self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j));
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|&v| f(v)).collect(),
        }
    }

    /// `-A`.
    pub fn negated(&self) -> Self {
        self.map(|v| -v)
    }

    /// `A + c J` with `J` the all-ones matrix.
    pub fn shifted(&self, c: f64) -> Self {
        self.map(|v| v + c)
    }

    pub fn scaled(&self, c: f64) -> Self {
        self.map(|v| v * c)
    }

    /// `A - lambda I`; requires a square matrix.
    pub fn minus_scaled_identity(&self, lambda: f64) -> Result<Self> {
        self.require_square()?;
        let mut out = self.clone();
        for i in 0..self.rows {
            out.entries[i * self.cols + i] -= lambda;
        }
        Ok(out)
    }

    pub fn min_entry(&self) -> f64 {
        self.entries.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.entries.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    /// Maximum absolute row sum.
    pub fn inf_norm(&self) -> f64 {
        self.entries
            .chunks(self.cols)
            .map(|r| r.iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn row_sums(&self) -> Vec<f64> {
        self.entries.chunks(self.cols).map(|r| r.iter().sum()).collect()
    }

    /// `A y` for a column vector of length `cols`.
    pub fn mul_vec(&self, y: &[f64]) -> Result<Vec<f64>> {
        if y.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                actual: y.len(),
            });
        }
        Ok(self
            .entries
            .chunks(self.cols)
            .map(|r| r.iter().zip(y).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// `x^T A` for a row vector of length `rows`.
    pub fn vec_mul(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                actual: x.len(),
            });
        }
        let mut out = vec![0.0; self.cols];
        for (row, &xi) in self.entries.chunks(self.cols).zip(x) {
            for (o, a) in out.iter_mut().zip(row) {
                *o += xi * a;
            }
        }
        Ok(out)
    }

    /// `max |a_ij + a_ji|`, or `None` when the matrix is not square.
    pub fn skew_defect(&self) -> Option<f64> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.get(i, j) + self.get(j, i)).abs());
            }
        }
        Some(worst)
    }
}

impl fmt::Display for GameMatrix {
    /// Canonical text rendering: rows separated by `;`, entries by `,`, shortest round-trip floats.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str(";")?;
            }
            for (j, v) in self.row(i).iter().enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{v:?}")?;
            }
        }
        f.write_str("]")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Player {
    Row,
    Col,
}

/// A probability vector over one player's pure strategies.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MixedStrategy {
    player: Player,
    weights: Vec<f64>,
}

impl MixedStrategy {
    /// Validates `weights`, clamping negatives above `-1e-12` to zero and renormalizing
    /// sums within `1e-9` of one. Anything further off is rejected.
    pub fn new(player: Player, weights: Vec<f64>) -> Result<Self> {
        validate_strategy(player, &weights)
    }

    /// The pure strategy `e_index` of dimension `len`.
    pub fn pure(player: Player, len: usize, index: usize) -> Result<Self> {
        if index >= len {
            return Err(Error::InvalidStrategy(format!(
                "pure strategy {index} out of range for {len} strategies"
            )));
        }
        let mut weights = vec![0.0; len];
        weights[index] = 1.0;
        Ok(Self { player, weights })
    }

    pub fn uniform(player: Player, len: usize) -> Result<Self> {
        if len == 0 {
            return Err(Error::InvalidStrategy("empty strategy".into()));
        }
        Ok(Self {
            player,
            weights: vec![1.0 / len as f64; len],
        })
    }

    pub fn player(&self) -> Player {
        self.player
    }

    /// The same weights attributed to `player`.
    pub fn with_player(mut self, player: Player) -> Self {
        self.player = player;
        self
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Indices carrying weight above `tol`.
    pub fn support(&self, tol: f64) -> Vec<usize> {
        self.weights
            .iter()
            .enumerate()
            .filter(|(_, &w)| w > tol)
            .map(|(i, _)| i)
            .collect()
    }

    pub(crate) fn check_against(&self, a: &GameMatrix) -> Result<()> {
        let expected = match self.player {
            Player::Row => a.rows(),
            Player::Col => a.cols(),
        };
        if self.weights.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                actual: self.weights.len(),
            });
        }
        Ok(())
    }
}

pub fn validate_strategy(player: Player, weights: &[f64]) -> Result<MixedStrategy> {
    if weights.is_empty() {
        return Err(Error::InvalidStrategy("empty strategy".into()));
    }
    if let Some(&bad) = weights
        .iter()
        .find(|w| !w.is_finite() || **w < -STRATEGY_CLAMP_TOL)
    {
        return Err(Error::InvalidStrategy(format!(
            "weight {bad} is negative beyond tolerance"
        )));
    }
    let clamped: Vec<f64> = weights.iter().map(|&w| w.max(0.0)).collect();
    let sum: f64 = clamped.iter().sum();
    if (sum - 1.0).abs() > STRATEGY_SUM_TOL {
        return Err(Error::InvalidStrategy(format!(
            "weights sum to {sum}, not 1"
        )));
    }
    Ok(MixedStrategy {
        player,
        weights: clamped.into_iter().map(|w| w / sum).collect(),
    })
}

/// Expected row-player payoff `x^T A y`.
pub fn payoff(a: &GameMatrix, x: &MixedStrategy, y: &MixedStrategy) -> Result<f64> {
    if x.player != Player::Row || y.player != Player::Col {
        return Err(Error::InvalidStrategy(
            "payoff expects (row strategy, column strategy)".into(),
        ));
    }
    x.check_against(a)?;
    y.check_against(a)?;
    let ay = a.mul_vec(&y.weights)?;
    Ok(x.weights.iter().zip(&ay).map(|(p, q)| p * q).sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rps() -> GameMatrix {
        GameMatrix::from_rows(&[[0.0, -1.0, 1.0], [1.0, 0.0, -1.0], [-1.0, 1.0, 0.0]]).unwrap()
    }

    #[test]
    fn rps_uniform_payoff_is_zero() {
        let a = rps();
        let x = MixedStrategy::uniform(Player::Row, 3).unwrap();
        let y = MixedStrategy::uniform(Player::Col, 3).unwrap();
        assert!(payoff(&a, &x, &y).unwrap().abs() < 1e-15);
    }

    #[test]
    fn pure_payoff_is_entry() {
        let a = GameMatrix::from_rows(&[[1.0, 2.0], [3.0, 4.0]]).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let x = MixedStrategy::pure(Player::Row, 2, i).unwrap();
                let y = MixedStrategy::pure(Player::Col, 2, j).unwrap();
                assert_eq!(payoff(&a, &x, &y).unwrap(), a.get(i, j));
            }
        }
        let x = MixedStrategy::new(Player::Row, vec![0.0, 1.0]).unwrap();
        let y = MixedStrategy::new(Player::Col, vec![1.0, 0.0]).unwrap();
        assert_eq!(payoff(&a, &x, &y).unwrap(), 3.0);
    }

    #[test]
    fn payoff_rejects_mismatch() {
        let a = GameMatrix::from_rows(&[[1.0, 2.0, 3.0]]).unwrap();
        let x = MixedStrategy::uniform(Player::Row, 2).unwrap();
        let y = MixedStrategy::uniform(Player::Col, 3).unwrap();
        assert!(matches!(
            payoff(&a, &x, &y),
            Err(Error::DimensionMismatch { .. })
        ));
        let x = MixedStrategy::uniform(Player::Row, 1).unwrap();
        assert!(payoff(&a, &x, &x).is_err());
    }

    #[test]
    fn strategy_validation() {
        assert!(validate_strategy(Player::Row, &[0.5, 0.5]).is_ok());
        assert!(validate_strategy(Player::Row, &[0.7, 0.4]).is_err());
        assert!(validate_strategy(Player::Row, &[-0.1, 1.1]).is_err());
        assert!(validate_strategy(Player::Row, &[]).is_err());
        assert!(validate_strategy(Player::Row, &[f64::NAN, 1.0]).is_err());

        let s = validate_strategy(Player::Col, &[-1e-13, 1.0 + 5e-10]).unwrap();
        assert_eq!(s.weights()[0], 0.0);
        assert!((s.weights().iter().sum::<f64>() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn matrix_validation() {
        assert!(GameMatrix::new(0, 1, vec![]).is_err());
        assert!(GameMatrix::new(1, 2, vec![1.0]).is_err());
        assert!(GameMatrix::new(1, 1, vec![f64::INFINITY]).is_err());
        assert!(GameMatrix::from_rows(&[vec![1.0, 2.0], vec![3.0]]).is_err());
    }

    #[test]
    fn matrix_helpers() {
        let a = GameMatrix::from_rows(&[[1.0, 2.0, 3.0], [4.0, 5.0, 6.0]]).unwrap();
        let t = a.transpose();
        assert_eq!((t.rows(), t.cols()), (3, 2));
        assert_eq!(t.get(2, 1), 6.0);
        assert_eq!(a.vec_mul(&[1.0, 1.0]).unwrap(), vec![5.0, 7.0, 9.0]);
        assert_eq!(a.mul_vec(&[1.0, 0.0, 1.0]).unwrap(), vec![4.0, 10.0]);
        assert_eq!(a.inf_norm(), 15.0);
        assert_eq!(a.skew_defect(), None);
        assert_eq!(rps().skew_defect(), Some(0.0));
        assert_eq!(a.to_string(), "[1.0,2.0,3.0;4.0,5.0,6.0]");
    }
}
