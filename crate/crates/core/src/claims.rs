//! Per-instance audits of the eigen/game relations: each checker computes both sides of one
//! statement for a concrete matrix and reports whether it holds.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::ensemble::{generate_ensemble, EnsembleSpec};
use crate::error::{Error, Result};
use crate::game::{GameMatrix, MixedStrategy, Player};
use crate::lp::DEFAULT_FEAS_TOL;
use crate::solver::{is_optimal_dominated, row_optima_column_extremes_with, solve_game_with};
use crate::spectral::{gordan_with, perron, stochastic_eigenvector_with, GordanBranch, DEFAULT_PERRON_TOL};

pub const DEFAULT_CLAIM_TOL: f64 = 1e-7;
/// Diagonal entries within this of zero count as zero when classifying definiteness.
pub const DIAGONAL_SIGN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ClaimId {
    DiagonalTheorem1,
    SkewZeroCor3,
    SharedOptimaCor4,
    NegTransposeThm2,
    EigenspaceLemma5,
    GordanTheorem3,
    PositiveDominatedThm4,
    ShiftedEigenThm4General,
}

impl ClaimId {
    pub const ALL: [ClaimId; 8] = [
        ClaimId::DiagonalTheorem1,
        ClaimId::SkewZeroCor3,
        ClaimId::SharedOptimaCor4,
        ClaimId::NegTransposeThm2,
        ClaimId::EigenspaceLemma5,
        ClaimId::GordanTheorem3,
        ClaimId::PositiveDominatedThm4,
        ClaimId::ShiftedEigenThm4General,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ClaimId::DiagonalTheorem1 => "DiagonalTheorem1",
            ClaimId::SkewZeroCor3 => "SkewZeroCor3",
            ClaimId::SharedOptimaCor4 => "SharedOptimaCor4",
            ClaimId::NegTransposeThm2 => "NegTransposeThm2",
            ClaimId::EigenspaceLemma5 => "EigenspaceLemma5",
            ClaimId::GordanTheorem3 => "GordanTheorem3",
            ClaimId::PositiveDominatedThm4 => "PositiveDominatedThm4",
            ClaimId::ShiftedEigenThm4General => "ShiftedEigenThm4General",
        }
    }
}

impl fmt::Display for ClaimId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ClaimId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ClaimId::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown claim {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Verdict {
    Holds,
    Violated,
    NotApplicable,
}

impl Verdict {
    fn from_bool(holds: bool) -> Self {
        if holds {
            Verdict::Holds
        } else {
            Verdict::Violated
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Quantity {
    Flag(bool),
    Scalar(f64),
    Vector(Vec<f64>),
    Label(String),
}

impl From<bool> for Quantity {
    fn from(v: bool) -> Self {
        Quantity::Flag(v)
    }
}

impl From<f64> for Quantity {
    fn from(v: f64) -> Self {
        Quantity::Scalar(v)
    }
}

impl From<usize> for Quantity {
    fn from(v: usize) -> Self {
        Quantity::Scalar(v as f64)
    }
}

impl From<Vec<f64>> for Quantity {
    fn from(v: Vec<f64>) -> Self {
        Quantity::Vector(v)
    }
}

impl From<&[f64]> for Quantity {
    fn from(v: &[f64]) -> Self {
        Quantity::Vector(v.to_vec())
    }
}

impl From<&str> for Quantity {
    fn from(v: &str) -> Self {
        Quantity::Label(v.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClaimReport {
    pub claim_id: ClaimId,
    pub input_digest: String,
    pub computed: BTreeMap<String, Quantity>,
    pub verdict: Verdict,
    pub tolerance: f64,
}

impl ClaimReport {
    fn new(claim_id: ClaimId, a: &GameMatrix, tolerance: f64) -> Self {
        Self {
            claim_id,
            input_digest: a.to_string(),
            computed: BTreeMap::new(),
            verdict: Verdict::NotApplicable,
            tolerance,
        }
    }

    fn put(&mut self, key: impl Into<String>, value: impl Into<Quantity>) -> &mut Self {
        self.computed.insert(key.into(), value.into());
        self
    }

    fn not_applicable(mut self, reason: &str) -> Self {
        self.put("hypothesis_failed", reason);
        self.verdict = Verdict::NotApplicable;
        self
    }

    pub fn scalar(&self, key: &str) -> Option<f64> {
        match self.computed.get(key) {
            Some(Quantity::Scalar(v)) => Some(*v),
            _ => None,
        }
    }

    pub fn flag(&self, key: &str) -> Option<bool> {
        match self.computed.get(key) {
            Some(Quantity::Flag(v)) => Some(*v),
            _ => None,
        }
    }

    pub fn vector(&self, key: &str) -> Option<&[f64]> {
        match self.computed.get(key) {
            Some(Quantity::Vector(v)) => Some(v),
            _ => None,
        }
    }

    pub fn label(&self, key: &str) -> Option<&str> {
        match self.computed.get(key) {
            Some(Quantity::Label(v)) => Some(v),
            _ => None,
        }
    }
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0f64, |acc, (p, q)| acc.max((p - q).abs()))
}

fn max_of(v: &[f64]) -> f64 {
    v.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

fn min_of(v: &[f64]) -> f64 {
    v.iter().copied().fold(f64::INFINITY, f64::min)
}

/// Tolerances shared by every checker: `tol` decides verdicts, `feas_tol` is handed to the
/// underlying linear programs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Auditor {
    pub tol: f64,
    pub feas_tol: f64,
}

impl Default for Auditor {
    fn default() -> Self {
        Self::new(DEFAULT_CLAIM_TOL)
    }
}

impl Auditor {
    pub fn new(tol: f64) -> Self {
        Self {
            tol,
            feas_tol: DEFAULT_FEAS_TOL,
        }
    }

    pub fn with_feas_tol(mut self, feas_tol: f64) -> Self {
        self.feas_tol = feas_tol;
        self
    }

    /// Worst pure-deviation gain against `s` in a value-zero game, seen from both seats.
    fn zero_value_deviation(&self, a: &GameMatrix, s: &[f64]) -> Result<f64> {
        let as_col = max_of(&a.mul_vec(s)?);
        let as_row = min_of(&a.vec_mul(s)?);
        Ok(as_col.max(-as_row))
    }

    /// Diagonal games: value `1 / sum(1/d_i)` with strategy `v/d_i` when all `d_i` share a
    /// strict sign, otherwise value zero with no row weight on negative entries.
    pub fn check_diagonal(&self, d: &[f64]) -> Result<ClaimReport> {
        let a = GameMatrix::diagonal(d)?;
        let tol = self.tol;
        let mut r = ClaimReport::new(ClaimId::DiagonalTheorem1, &a, tol);
        let sol = solve_game_with(&a, tol, self.feas_tol)?;
        let x = sol.row_strategy.weights();
        r.put("diagonal", d)
            .put("observed_value", sol.value)
            .put("row_strategy", x)
            .put("col_strategy", sol.col_strategy.weights());

        let positive = d.iter().all(|&v| v > DIAGONAL_SIGN_TOL);
        let negative = d.iter().all(|&v| v < -DIAGONAL_SIGN_TOL);
        if positive || negative {
            let expected = 1.0 / d.iter().map(|v| 1.0 / v).sum::<f64>();
            let strategy: Vec<f64> = d.iter().map(|v| expected / v).collect();
            let row_dev = max_abs_diff(x, &strategy);
            let col_dev = max_abs_diff(sol.col_strategy.weights(), &strategy);
            r.put("case", if positive { "positive_definite" } else { "negative_definite" })
                .put("expected_value", expected)
                .put("expected_strategy", strategy)
                .put("row_strategy_deviation", row_dev)
                .put("col_strategy_deviation", col_dev);
            r.verdict = Verdict::from_bool(
                (sol.value - expected).abs() <= tol && row_dev <= tol && col_dev <= tol,
            );
        } else {
            let negative_weight: f64 = d
                .iter()
                .zip(x)
                .filter(|(&v, _)| v < -DIAGONAL_SIGN_TOL)
                .map(|(_, &p)| p)
                .sum();
            r.put("case", "indefinite")
                .put("expected_value", 0.0)
                .put("expected_negative_weight", 0.0)
                .put("observed_negative_weight", negative_weight);
            r.verdict = Verdict::from_bool(sol.value.abs() <= tol && negative_weight <= tol);
        }
        Ok(r)
    }

    fn skew_hypothesis(&self, claim: ClaimId, a: &GameMatrix) -> std::result::Result<ClaimReport, ClaimReport> {
        let mut r = ClaimReport::new(claim, a, self.tol);
        match a.skew_defect() {
            None => Err(r.not_applicable("matrix is not square")),
            Some(defect) => {
                r.put("skew_defect", defect);
                if defect > self.tol {
                    Err(r.not_applicable("matrix is not skew-symmetric"))
                } else {
                    Ok(r)
                }
            }
        }
    }

    /// Skew-symmetric games have value zero and each optimum serves both players.
    pub fn check_skew(&self, a: &GameMatrix) -> Result<ClaimReport> {
        self.skew_report(ClaimId::SkewZeroCor3, a)
    }

    /// Same computation as [`check_skew`](Self::check_skew), filed under the shared-optima claim.
    pub fn check_shared_optima(&self, a: &GameMatrix) -> Result<ClaimReport> {
        self.skew_report(ClaimId::SharedOptimaCor4, a)
    }

    fn skew_report(&self, claim: ClaimId, a: &GameMatrix) -> Result<ClaimReport> {
        let mut r = match self.skew_hypothesis(claim, a) {
            Ok(r) => r,
            Err(na) => return Ok(na),
        };
        let tol = self.tol;
        let sol = solve_game_with(a, tol, self.feas_tol)?;
        let x = sol.row_strategy.weights();
        let y = sol.col_strategy.weights();
        // x* used by the column player must cap the row payoff at zero, and vice versa.
        let row_as_col = max_of(&a.mul_vec(x)?);
        let col_as_row = min_of(&a.vec_mul(y)?);
        r.put("expected_value", 0.0)
            .put("observed_value", sol.value)
            .put("row_strategy", x)
            .put("col_strategy", y)
            .put("row_optimum_as_col_ceiling", row_as_col)
            .put("col_optimum_as_row_floor", col_as_row);
        r.verdict =
            Verdict::from_bool(sol.value.abs() <= tol && row_as_col <= tol && col_as_row >= -tol);
        Ok(r)
    }

    /// `v(A) = -v(-A^T)` for any shape.
    pub fn check_neg_transpose(&self, a: &GameMatrix) -> Result<ClaimReport> {
        let tol = self.tol;
        let mut r = ClaimReport::new(ClaimId::NegTransposeThm2, a, tol);
        let v = solve_game_with(a, tol, self.feas_tol)?.value;
        let w = solve_game_with(&a.transpose().negated(), tol, self.feas_tol)?.value;
        r.put("value", v)
            .put("value_neg_transpose", w)
            .put("expected_sum", 0.0)
            .put("observed_sum", v + w);
        r.verdict = Verdict::from_bool((v + w).abs() <= tol);
        Ok(r)
    }

    /// For skew `A`, no stochastic eigenvector of a nonzero eigenvalue is optimal.
    /// `lambdas` are probed in addition to zero.
    pub fn check_eigenspace_lemma5(&self, a: &GameMatrix, lambdas: &[f64]) -> Result<ClaimReport> {
        let mut r = match self.skew_hypothesis(ClaimId::EigenspaceLemma5, a) {
            Ok(r) => r,
            Err(na) => return Ok(na),
        };
        let tol = self.tol;
        let mut probes = vec![0.0];
        for &l in lambdas {
            if !probes.contains(&l) {
                probes.push(l);
            }
        }
        let mut violations = 0usize;
        for (k, &lambda) in probes.iter().enumerate() {
            r.put(format!("lambda_{k}"), lambda);
            match stochastic_eigenvector_with(a, lambda, self.feas_tol)? {
                Some(w) => {
                    let optimal = self.zero_value_deviation(a, w.weights())? <= tol;
                    r.put(format!("witness_{k}"), w.weights())
                        .put(format!("witness_optimal_{k}"), optimal);
                    if lambda.abs() > tol && optimal {
                        violations += 1;
                    }
                    if k == 0 {
                        r.put("zero_eigen_witness_optimal", optimal);
                    }
                }
                None => {
                    r.put(format!("witness_{k}"), "none");
                    if k == 0 {
                        r.put("zero_eigen_witness_optimal", false);
                    }
                }
            }
        }
        r.put("expected_nonzero_optimal_eigenvectors", 0usize)
            .put("observed_nonzero_optimal_eigenvectors", violations);
        r.verdict = Verdict::from_bool(violations == 0);
        Ok(r)
    }

    /// Optimal strategies in the kernel of skew `A` versus solvability of `A y > 0`.
    ///
    /// The verdict is that of the biconditional "optimal kernel strategy exists iff `A y > 0`
    /// is solvable". The opposite-polarity biconditional is evaluated too and stored under
    /// `verdict_reversed` so both readings are visible.
    pub fn check_gordan_theorem3(&self, a: &GameMatrix) -> Result<ClaimReport> {
        let mut r = match self.skew_hypothesis(ClaimId::GordanTheorem3, a) {
            Ok(r) => r,
            Err(na) => return Ok(na),
        };
        let branch = gordan_with(a, self.feas_tol)?;
        // Image side of the alternative for A^T is exactly `A y > 0`.
        let ay_positive = gordan_with(&a.transpose(), self.feas_tol)?.branch == GordanBranch::PositiveImage;
        let exists = match stochastic_eigenvector_with(a, 0.0, self.feas_tol)? {
            Some(w) => {
                r.put("kernel_witness", w.weights());
                self.zero_value_deviation(a, w.weights())? <= self.tol
            }
            None => false,
        };
        let stated = Verdict::from_bool(exists == ay_positive);
        let reversed = Verdict::from_bool(exists == !ay_positive);
        r.put(
            "gordan_branch",
            match branch.branch {
                GordanBranch::NonnegativeKernel => "NonnegativeKernel",
                GordanBranch::PositiveImage => "PositiveImage",
            },
        )
        .put("gordan_witness", branch.witness)
        .put("ay_positive_solvable", ay_positive)
        .put("expected_optimal_in_kernel", ay_positive)
        .put("observed_optimal_in_kernel", exists)
        .put("verdict_as_stated", verdict_name(stated))
        .put("verdict_reversed", verdict_name(reversed));
        r.verdict = stated;
        Ok(r)
    }

    /// Positive square `A` whose value lies in `[lambda* min y*, lambda* max y*]`: every
    /// optimal row strategy should be optimal-dominated.
    pub fn check_positive_dominated(&self, a: &GameMatrix) -> Result<ClaimReport> {
        let tol = self.tol;
        let mut r = ClaimReport::new(ClaimId::PositiveDominatedThm4, a, tol);
        if !a.is_square() {
            return Ok(r.not_applicable("matrix is not square"));
        }
        r.put("min_entry", a.min_entry());
        if !(a.min_entry() > 0.0) {
            return Ok(r.not_applicable("matrix is not strictly positive"));
        }
        let cert = perron(a, DEFAULT_PERRON_TOL)?;
        let v = solve_game_with(a, tol, self.feas_tol)?.value;
        let lo = cert.perron_root * min_of(&cert.perron_vector);
        let hi = cert.perron_root * max_of(&cert.perron_vector);
        r.put("perron_root", cert.perron_root)
            .put("perron_vector", cert.perron_vector.clone())
            .put("value", v)
            .put("bracket_lo", lo)
            .put("bracket_hi", hi);
        if v < lo - tol || v > hi + tol {
            return Ok(r.not_applicable("value outside the Perron bracket"));
        }
        let ext = row_optima_column_extremes_with(a, v, tol, self.feas_tol)?;
        let dev = ext.max_deviation(v);
        r.put("column_min", ext.min)
            .put("column_max", ext.max)
            .put("expected_max_deviation", 0.0)
            .put("observed_max_deviation", dev);
        r.verdict = Verdict::from_bool(dev <= tol);
        Ok(r)
    }

    /// With stochastic `y in E(A, lambda)` and `x in E(A^T, lambda)`, `v(A - lambda I) = 0`
    /// and both vectors are optimal-dominated there.
    pub fn check_shifted_eigen(&self, a: &GameMatrix, lambda: f64) -> Result<ClaimReport> {
        let tol = self.tol;
        let mut r = ClaimReport::new(ClaimId::ShiftedEigenThm4General, a, tol);
        if !a.is_square() {
            return Ok(r.not_applicable("matrix is not square"));
        }
        r.put("lambda", lambda);
        let y = stochastic_eigenvector_with(a, lambda, self.feas_tol)?;
        let x = stochastic_eigenvector_with(&a.transpose(), lambda, self.feas_tol)?;
        r.put("right_eigenvector_found", y.is_some())
            .put("left_eigenvector_found", x.is_some());
        let (Some(x), Some(y)) = (x, y) else {
            return Ok(r.not_applicable("no stochastic eigenvector pair for lambda"));
        };
        let x: MixedStrategy = x.with_player(Player::Row);
        let shifted = a.minus_scaled_identity(lambda)?;
        let v = solve_game_with(&shifted, tol, self.feas_tol)?.value;
        let x_dom = is_optimal_dominated(&shifted, &x, 0.0, tol)?;
        let y_dom = is_optimal_dominated(&shifted, &y, 0.0, tol)?;
        r.put("left_eigenvector", x.weights())
            .put("right_eigenvector", y.weights())
            .put("expected_value", 0.0)
            .put("observed_value", v)
            .put("left_dominated", x_dom)
            .put("right_dominated", y_dom);
        r.verdict = Verdict::from_bool(v.abs() <= tol && x_dom && y_dom);
        Ok(r)
    }

    /// Runs `claim` on one matrix. Claims parameterized by an eigenvalue take it from
    /// `lambdas` (one report per value for the shifted-eigen claim).
    pub fn check(&self, claim: ClaimId, a: &GameMatrix, lambdas: &[f64]) -> Result<Vec<ClaimReport>> {
        let one = |r: Result<ClaimReport>| r.map(|r| vec![r]);
        match claim {
            ClaimId::DiagonalTheorem1 => {
                let mut r = ClaimReport::new(claim, a, self.tol);
                if !a.is_square() {
                    return Ok(vec![r.not_applicable("matrix is not square")]);
                }
                let n = a.rows();
                let off = (0..n)
                    .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
                    .fold(0.0f64, |acc, (i, j)| acc.max(a.get(i, j).abs()));
                if off > 0.0 {
                    r.put("off_diagonal_max", off);
                    return Ok(vec![r.not_applicable("matrix is not diagonal")]);
                }
                let d: Vec<f64> = (0..n).map(|i| a.get(i, i)).collect();
                one(self.check_diagonal(&d))
            }
            ClaimId::SkewZeroCor3 => one(self.check_skew(a)),
            ClaimId::SharedOptimaCor4 => one(self.check_shared_optima(a)),
            ClaimId::NegTransposeThm2 => one(self.check_neg_transpose(a)),
            ClaimId::EigenspaceLemma5 => one(self.check_eigenspace_lemma5(a, lambdas)),
            ClaimId::GordanTheorem3 => one(self.check_gordan_theorem3(a)),
            ClaimId::PositiveDominatedThm4 => one(self.check_positive_dominated(a)),
            ClaimId::ShiftedEigenThm4General => {
                let probes: &[f64] = if lambdas.is_empty() { &[0.0] } else { lambdas };
                probes.iter().map(|&l| self.check_shifted_eigen(a, l)).collect()
            }
        }
    }

    /// Audits every matrix of a seeded ensemble, in parallel, returning reports in trial order.
    pub fn audit_ensemble(
        &self,
        claims: &[ClaimId],
        spec: &EnsembleSpec,
        lambdas: &[f64],
    ) -> Result<Vec<ClaimReport>> {
        let matrices = generate_ensemble(spec)?;
        self.audit_matrices(claims, &matrices, lambdas)
    }

    pub fn audit_matrices(
        &self,
        claims: &[ClaimId],
        matrices: &[GameMatrix],
        lambdas: &[f64],
    ) -> Result<Vec<ClaimReport>> {
        let per_matrix: Vec<Result<Vec<ClaimReport>>> = matrices
            .par_iter()
            .map(|a| {
                let mut out = Vec::new();
                for &c in claims {
                    out.extend(self.check(c, a, lambdas)?);
                }
                Ok(out)
            })
            .collect();
        let mut reports = Vec::new();
        for r in per_matrix {
            reports.extend(r?);
        }
        Ok(reports)
    }
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Holds => "Holds",
        Verdict::Violated => "Violated",
        Verdict::NotApplicable => "NotApplicable",
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct VerdictSummary {
    pub holds: usize,
    pub violated: usize,
    pub not_applicable: usize,
}

impl VerdictSummary {
    pub fn of(reports: &[ClaimReport]) -> Self {
        let mut s = Self::default();
        for r in reports {
            match r.verdict {
                Verdict::Holds => s.holds += 1,
                Verdict::Violated => s.violated += 1,
                Verdict::NotApplicable => s.not_applicable += 1,
            }
        }
        s
    }
}

pub fn check_diagonal(d: &[f64], tol: f64) -> Result<ClaimReport> {
    Auditor::new(tol).check_diagonal(d)
}

pub fn check_skew(a: &GameMatrix, tol: f64) -> Result<ClaimReport> {
    Auditor::new(tol).check_skew(a)
}

pub fn check_neg_transpose(a: &GameMatrix, tol: f64) -> Result<ClaimReport> {
    Auditor::new(tol).check_neg_transpose(a)
}

pub fn check_eigenspace_lemma5(a: &GameMatrix, lambdas: &[f64], tol: f64) -> Result<ClaimReport> {
    Auditor::new(tol).check_eigenspace_lemma5(a, lambdas)
}

pub fn check_gordan_theorem3(a: &GameMatrix) -> Result<ClaimReport> {
    Auditor::default().check_gordan_theorem3(a)
}

pub fn check_positive_dominated(a: &GameMatrix, tol: f64) -> Result<ClaimReport> {
    Auditor::new(tol).check_positive_dominated(a)
}

pub fn check_shifted_eigen(a: &GameMatrix, lambda: f64, tol: f64) -> Result<ClaimReport> {
    Auditor::new(tol).check_shifted_eigen(a, lambda)
}
