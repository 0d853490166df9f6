//! Eigen-structure that bears on matrix games: the Perron root and vector of a positive
//! matrix, kernels, stochastic vectors inside a given eigenspace, and Gordan's alternative.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{validate_strategy, GameMatrix, MixedStrategy, Player};
use crate::lp::{solve_lp, LinearProgram, LpStatus, DEFAULT_FEAS_TOL};

pub const PERRON_STEP_TOL: f64 = 1e-14;
pub const PERRON_MAX_ITERS: usize = 100_000;
pub const DEFAULT_PERRON_TOL: f64 = 1e-10;
pub const DEFAULT_RANK_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralCert {
    pub perron_root: f64,
    /// Positive, sums to one.
    pub perron_vector: Vec<f64>,
    /// `||A v - lambda v||_inf`.
    pub residual: f64,
    pub iterations: usize,
}

/// Power iteration from the uniform vector with L1 renormalization.
///
/// Stops once successive iterates agree to `1e-14` in the max norm. The root is the ratio
/// `sum(A v) / sum(v)`. Fails if the cap of `1e5` iterations is hit or the final residual
/// exceeds `tol`.
pub fn perron(a: &GameMatrix, tol: f64) -> Result<SpectralCert> {
    a.require_square()?;
    let n = a.rows();
    for i in 0..n {
        for j in 0..n {
            let value = a.get(i, j);
            if !(value > 0.0) {
                return Err(Error::NotPositive { row: i, col: j, value });
            }
        }
    }
    let mut v = vec![1.0 / n as f64; n];
    let mut converged = false;
    let mut iterations = 0;
    while iterations < PERRON_MAX_ITERS {
        iterations += 1;
        let w = a.mul_vec(&v)?;
        let s: f64 = w.iter().sum();
        let next: Vec<f64> = w.iter().map(|x| x / s).collect();
        let step = next
            .iter()
            .zip(&v)
            .fold(0.0f64, |acc, (p, q)| acc.max((p - q).abs()));
        v = next;
        if step < PERRON_STEP_TOL {
            converged = true;
            break;
        }
    }
    let av = a.mul_vec(&v)?;
    let root = av.iter().sum::<f64>() / v.iter().sum::<f64>();
    let residual = av
        .iter()
        .zip(&v)
        .fold(0.0f64, |acc, (p, q)| acc.max((p - root * q).abs()));
    if !converged || residual > tol {
        return Err(Error::NonConvergence {
            iterations,
            residual,
        });
    }
    Ok(SpectralCert {
        perron_root: root,
        perron_vector: v,
        residual,
        iterations,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KernelBasis {
    pub dimension: usize,
    /// Each vector has unit max norm.
    pub basis_vectors: Vec<Vec<f64>>,
}

/// Kernel of `a` from its reduced row echelon form.
///
/// Pivots no larger than `rank_tol * ||A||_inf` count as zero; each free column contributes
/// one basis vector.
pub fn null_space(a: &GameMatrix, rank_tol: f64) -> KernelBasis {
    let (m, n) = (a.rows(), a.cols());
    let threshold = rank_tol * a.inf_norm();
    let mut r = a.to_rows();
    let mut pivots: Vec<usize> = Vec::new();
    let mut free: Vec<usize> = Vec::new();
    let mut row = 0;
    for col in 0..n {
        if row == m {
            free.push(col);
            continue;
        }
        let p = (row..m)
            .max_by(|&i, &k| r[i][col].abs().total_cmp(&r[k][col].abs()))
            .expect("nonempty range");
        if r[p][col].abs() <= threshold || r[p][col] == 0.0 {
            free.push(col);
            continue;
        }
        r.swap(row, p);
        let pv = r[row][col];
        for v in r[row].iter_mut() {
            *v /= pv;
        }
        let pivot_row = r[row].clone();
        for (i, other) in r.iter_mut().enumerate() {
            if i != row {
                let f = other[col];
                if f != 0.0 {
                    for (v, q) in other.iter_mut().zip(&pivot_row) {
                        *v -= f * q;
                    }
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    let basis_vectors = free
        .iter()
        .map(|&f| {
            let mut b = vec![0.0; n];
            b[f] = 1.0;
            for (k, &pc) in pivots.iter().enumerate() {
                b[pc] = -r[k][f];
            }
            let norm = b.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
            b.iter().map(|v| v / norm).collect()
        })
        .collect();
    KernelBasis {
        dimension: free.len(),
        basis_vectors,
    }
}

/// Numerical rank by Gaussian elimination with complete pivoting; pivots no larger than
/// `rank_tol` times the max-abs-row-sum norm count as zero.
pub fn matrix_rank(rows: &[Vec<f64>], rank_tol: f64) -> usize {
    let m = rows.len();
    if m == 0 {
        return 0;
    }
    let n = rows[0].len();
    let norm = rows
        .iter()
        .map(|r| r.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max);
    let threshold = rank_tol * norm;
    let mut w: Vec<Vec<f64>> = rows.to_vec();
    let mut rank = 0;
    while rank < m.min(n) {
        let mut best = (rank, rank, 0.0f64);
        for (i, r) in w.iter().enumerate().skip(rank) {
            for (j, v) in r.iter().enumerate().skip(rank) {
                if v.abs() > best.2 {
                    best = (i, j, v.abs());
                }
            }
        }
        if best.2 <= threshold || best.2 == 0.0 {
            break;
        }
        w.swap(rank, best.0);
        for r in w.iter_mut() {
            r.swap(rank, best.1);
        }
        let pivot_row = w[rank].clone();
        for r in w.iter_mut().skip(rank + 1) {
            let f = r[rank] / pivot_row[rank];
            for (v, q) in r.iter_mut().zip(&pivot_row).skip(rank) {
                *v -= f * q;
            }
        }
        rank += 1;
    }
    rank
}

/// A stochastic `y` with `(A - lambda I) y = 0`, found by LP feasibility, or `None`.
pub fn stochastic_eigenvector(a: &GameMatrix, lambda: f64) -> Result<Option<MixedStrategy>> {
    stochastic_eigenvector_with(a, lambda, DEFAULT_FEAS_TOL)
}

pub fn stochastic_eigenvector_with(
    a: &GameMatrix,
    lambda: f64,
    feas_tol: f64,
) -> Result<Option<MixedStrategy>> {
    let shifted = a.minus_scaled_identity(lambda)?;
    let n = a.cols();
    let mut lp = LinearProgram::feasibility(n).eq(vec![1.0; n], 1.0);
    for i in 0..n {
        lp = lp.eq(shifted.row(i).to_vec(), 0.0);
    }
    let sol = solve_lp(&lp, feas_tol)?;
    match sol.status {
        LpStatus::Optimal => {
            let y = sol.point.expect("optimal has a point");
            Ok(Some(validate_strategy(Player::Col, &y)?))
        }
        LpStatus::Infeasible => Ok(None),
        LpStatus::Unbounded => Err(Error::UnexpectedLpStatus("unbounded")),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GordanBranch {
    /// `A x = 0` has a stochastic solution.
    NonnegativeKernel,
    /// `A^T y > 0` has a solution.
    PositiveImage,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GordanVerdict {
    pub branch: GordanBranch,
    pub witness: Vec<f64>,
}

/// Decides which side of Gordan's alternative holds.
///
/// The kernel side is `A x = 0, x >= 0, sum x = 1`; the image side is `A^T y >= 1` with `y`
/// free, which is feasible exactly when `A^T y > 0` is. Both or neither being feasible is
/// reported as an inconsistency.
pub fn gordan(a: &GameMatrix) -> Result<GordanVerdict> {
    gordan_with(a, DEFAULT_FEAS_TOL)
}

pub fn gordan_with(a: &GameMatrix, feas_tol: f64) -> Result<GordanVerdict> {
    let (m, n) = (a.rows(), a.cols());

    let mut kernel = LinearProgram::feasibility(n).eq(vec![1.0; n], 1.0);
    for i in 0..m {
        kernel = kernel.eq(a.row(i).to_vec(), 0.0);
    }
    let kernel = solve_lp(&kernel, feas_tol)?;

    let mut image = LinearProgram::feasibility(m);
    for i in 0..m {
        image = image.free(i);
    }
    for j in 0..n {
        let col = (0..m).map(|i| a.get(i, j)).collect();
        image = image.ge(col, 1.0);
    }
    let image = solve_lp(&image, feas_tol)?;

    match (kernel.point, image.point) {
        (Some(x), None) => Ok(GordanVerdict {
            branch: GordanBranch::NonnegativeKernel,
            witness: x.into_iter().map(|v| v.max(0.0)).collect(),
        }),
        (None, Some(y)) => Ok(GordanVerdict {
            branch: GordanBranch::PositiveImage,
            witness: y,
        }),
        (k, i) => Err(Error::GordanInconsistent {
            kernel: k.is_some(),
            image: i.is_some(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat<const N: usize>(rows: &[[f64; N]]) -> GameMatrix {
        GameMatrix::from_rows(rows).unwrap()
    }

    fn rps() -> GameMatrix {
        mat(&[[0.0, -1.0, 1.0], [1.0, 0.0, -1.0], [-1.0, 1.0, 0.0]])
    }

    #[test]
    fn perron_symmetric_two_by_two() {
        let c = perron(&mat(&[[2.0, 1.0], [1.0, 2.0]]), 1e-10).unwrap();
        assert!((c.perron_root - 3.0).abs() < 1e-12);
        assert!((c.perron_vector[0] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn perron_scalar() {
        let c = perron(&mat(&[[4.5]]), 1e-10).unwrap();
        assert_eq!(c.perron_root, 4.5);
        assert_eq!(c.perron_vector, vec![1.0]);
    }

    #[test]
    fn perron_nonsymmetric() {
        let root = (5.0 + 33f64.sqrt()) / 2.0;
        let c = perron(&mat(&[[1.0, 2.0], [3.0, 4.0]]), 1e-10).unwrap();
        assert!((c.perron_root - root).abs() < 1e-9);
        let expect = [2.0 / (1.0 + root), (root - 1.0) / (1.0 + root)];
        assert!((c.perron_vector[0] - expect[0]).abs() < 1e-9);
        assert!((c.perron_vector[1] - expect[1]).abs() < 1e-9);
    }

    #[test]
    fn perron_rejects_bad_input() {
        assert!(matches!(
            perron(&mat(&[[1.0, 0.0], [1.0, 1.0]]), 1e-10),
            Err(Error::NotPositive { row: 0, col: 1, .. })
        ));
        assert!(matches!(
            perron(&mat(&[[1.0, 2.0]]), 1e-10),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn kernels() {
        let k = null_space(&rps(), DEFAULT_RANK_TOL);
        assert_eq!(k.dimension, 1);
        let b = &k.basis_vectors[0];
        assert!(b.iter().all(|v| (v - b[0]).abs() < 1e-12));
        assert_eq!(null_space(&GameMatrix::identity(2).unwrap(), 1e-9).dimension, 0);
        let z = null_space(&GameMatrix::zeros(3, 3).unwrap(), 1e-9);
        assert_eq!(z.dimension, 3);
        assert_eq!(matrix_rank(&z.basis_vectors, 1e-9), 3);
    }

    #[test]
    fn rank_examples() {
        assert_eq!(matrix_rank(&rps().to_rows(), 1e-9), 2);
        assert_eq!(matrix_rank(&[vec![1.0, 2.0], vec![2.0, 4.0]], 1e-9), 1);
        assert_eq!(matrix_rank(&[vec![0.0, 0.0]], 1e-9), 0);
    }

    #[test]
    fn stochastic_eigenvectors() {
        let y = stochastic_eigenvector(&rps(), 0.0).unwrap().unwrap();
        assert!(y.weights().iter().all(|p| (p - 1.0 / 3.0).abs() < 1e-12));

        let y = stochastic_eigenvector(&GameMatrix::diagonal(&[1.0, 2.0]).unwrap(), 1.0)
            .unwrap()
            .unwrap();
        assert_eq!(y.weights(), &[1.0, 0.0]);

        let swap = mat(&[[0.0, 1.0], [1.0, 0.0]]);
        assert!(stochastic_eigenvector(&swap, -1.0).unwrap().is_none());
    }

    #[test]
    fn gordan_examples() {
        let g = gordan(&rps()).unwrap();
        assert_eq!(g.branch, GordanBranch::NonnegativeKernel);
        assert!(g.witness.iter().all(|p| (p - 1.0 / 3.0).abs() < 1e-12));

        let a = mat(&[[0.0, 1.0], [-1.0, 0.0]]);
        let g = gordan(&a).unwrap();
        assert_eq!(g.branch, GordanBranch::PositiveImage);
        let aty = a.vec_mul(&g.witness).unwrap();
        assert!(aty.iter().all(|&v| v >= 1.0 - 1e-9), "{aty:?}");

        let g = gordan(&GameMatrix::identity(2).unwrap()).unwrap();
        assert_eq!(g.branch, GordanBranch::PositiveImage);
    }
}
