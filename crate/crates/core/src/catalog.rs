//! Example groups with closed-form data: Heisenberg, free step-two groups,
//! star-graph groups and the groups `G_A` built from a full-rank matrix.

use crate::algebra::{Covector, StepTwoAlgebra};
use crate::error::{Error, Result};
use crate::gamma::{ExponentReport, Provenance};
use crate::scalar::{from_usize, lit, Real};
use itertools::Itertools;
use nalgebra::DMatrix;
use std::fmt;

/// Below this radius `f1` and `f2` switch to their Taylor series.
const TAYLOR_RADIUS: f64 = 1e-2;

/// `[X1, X2] = Y`.
pub fn heisenberg<T: Real>() -> StepTwoAlgebra<T> {
    StepTwoAlgebra::from_brackets("heisenberg", 2, 1, &[(0, 1, vec![T::one()])]).expect("valid algebra")
}

/// Free step-two group on `k ≥ 2` generators: `[X_i, X_j] = Y_{i,j}`, with the
/// `Y_{i,j}` (`i < j`) in lexicographic order.
pub fn free<T: Real>(k: usize) -> Result<StepTwoAlgebra<T>> {
    if k < 2 {
        return Err(Error::Input(format!("free group needs k >= 2, got {k}")));
    }
    let q2 = k * (k - 1) / 2;
    let brackets: Vec<_> = (0..k)
        .tuple_combinations()
        .enumerate()
        .map(|(a, (i, j))| {
            let mut c = vec![T::zero(); q2];
            c[a] = T::one();
            (i, j, c)
        })
        .collect();
    StepTwoAlgebra::from_brackets(format!("free:{k}"), k, q2, &brackets)
}

/// Star-graph group `K_{1,k}`, `k ≥ 1`: basis `X_0, …, X_k`, `[X_0, X_j] = Y_j`.
pub fn star<T: Real>(k: usize) -> Result<StepTwoAlgebra<T>> {
    if k < 1 {
        return Err(Error::Input("star group needs k >= 1".into()));
    }
    let brackets: Vec<_> = (1..=k)
        .map(|j| {
            let mut c = vec![T::zero(); k];
            c[j - 1] = T::one();
            (0, j, c)
        })
        .collect();
    StepTwoAlgebra::from_brackets(format!("star:{k}"), k + 1, k, &brackets)
}

/// Full-rank `m × k` matrix defining `G_A`.
#[derive(Clone, Debug, PartialEq)]
pub struct GAMatrix<T: Real> {
    a: DMatrix<T>,
}

impl<T: Real> GAMatrix<T> {
    pub fn new(a: DMatrix<T>) -> Result<Self> {
        let (m, k) = a.shape();
        if m == 0 || m > k {
            return Err(Error::Input(format!("G_A needs 1 <= m <= k, got {m}x{k}")));
        }
        if a.iter().any(|v| !v.is_finite()) {
            return Err(Error::Input("G_A matrix has non-finite entries".into()));
        }
        let rank = crate::algebra::numerical_rank(&a, lit(1e-12));
        if rank < m {
            return Err(Error::Input(format!("G_A matrix has rank {rank} < m = {m}")));
        }
        Ok(Self { a })
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let m = rows.len();
        let k = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != k) {
            return Err(Error::Input("G_A rows have different lengths".into()));
        }
        Self::new(DMatrix::from_fn(m, k, |i, j| rows[i][j]))
    }

    pub fn m(&self) -> usize {
        self.a.nrows()
    }

    pub fn k(&self) -> usize {
        self.a.ncols()
    }

    pub fn matrix(&self) -> &DMatrix<T> {
        &self.a
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        self.a.row_iter().map(|r| r.iter().copied().collect()).collect()
    }
}

impl GAMatrix<f64> {
    /// Parses a JSON array of rows.
    pub fn from_json(text: &str) -> Result<Self> {
        let rows: Vec<Vec<f64>> =
            serde_json::from_str(text).map_err(|e| Error::Input(format!("G_A matrix file: {e}")))?;
        Self::from_rows(&rows)
    }
}

/// `G_A`: basis `X_1, …, X_{2k}, Y_1, …, Y_m`, `[X_{2j-1}, X_{2j}] = Σ_i A_ij Y_i`.
pub fn from_ga<T: Real>(a: &GAMatrix<T>) -> Result<StepTwoAlgebra<T>> {
    let (m, k) = (a.m(), a.k());
    let brackets: Vec<_> = (0..k)
        .map(|j| (2 * j, 2 * j + 1, a.a.column(j).iter().copied().collect()))
        .collect();
    StepTwoAlgebra::from_brackets(format!("ga:{m}x{k}"), 2 * k, m, &brackets)
}

/// `(sin s − s cos s) / s³`.
pub fn f1<T: Real>(s: T) -> T {
    if s.abs() < lit(TAYLOR_RADIUS) {
        let s2 = s * s;
        lit::<T>(1.0 / 3.0)
            + s2 * (lit::<T>(-1.0 / 30.0)
                + s2 * (lit::<T>(1.0 / 840.0) + s2 * (lit::<T>(-1.0 / 45360.0) + s2 * lit::<T>(1.0 / 3991680.0))))
    } else {
        (s.sin() - s * s.cos()) / (s * s * s)
    }
}

/// `sin s / s`.
pub fn f2<T: Real>(s: T) -> T {
    if s.abs() < lit(TAYLOR_RADIUS) {
        let s2 = s * s;
        T::one()
            + s2 * (lit::<T>(-1.0 / 6.0)
                + s2 * (lit::<T>(1.0 / 120.0) + s2 * (lit::<T>(-1.0 / 5040.0) + s2 * lit::<T>(1.0 / 362880.0))))
    } else {
        s.sin() / s
    }
}

/// `Σ_S f(S) · g(S)` over the `m`-subsets `S` of `0..k`, where `f(S)` is the
/// determinant of the columns of `a` indexed by `S`.
fn minor_sum<T: Real>(a: &DMatrix<T>, mut g: impl FnMut(&[usize], T) -> T) -> T {
    let (m, k) = a.shape();
    (0..k)
        .combinations(m)
        .map(|subset| {
            let minor = a.select_columns(&subset).determinant();
            g(&subset, minor)
        })
        .fold(T::zero(), |acc, v| acc + v)
}

/// `|det(AB) − Σ_S det(A_S) det(B_S)|` for `A` of size `m × k` and `B` of size `k × m`.
pub fn cauchy_binet_check<T: Real>(a: &DMatrix<T>, b: &DMatrix<T>) -> Result<T> {
    let (m, k) = a.shape();
    if b.shape() != (k, m) || m > k {
        return Err(Error::Input(format!(
            "Cauchy-Binet needs m x k and k x m with m <= k, got {:?} and {:?}",
            a.shape(),
            b.shape()
        )));
    }
    let lhs = (a * b).determinant();
    let rhs = minor_sum(a, |s, minor| minor * b.select_rows(s).determinant());
    Ok((lhs - rhs).abs())
}

/// Closed-form Jacobian of the exponential map on `G_A`.
pub fn ga_jacobian<T: Real>(a: &GAMatrix<T>, cov: &Covector<T>) -> Result<T> {
    let (m, k) = (a.m(), a.k());
    if cov.xi.len() != 2 * k || cov.mu.len() != m {
        return Err(Error::Input(format!(
            "covector for G_A must have dimensions ({}, {m}), got ({}, {})",
            2 * k,
            cov.xi.len(),
            cov.mu.len()
        )));
    }
    let half = lit::<T>(0.5);
    let args: Vec<T> = (0..k).map(|j| a.a.column(j).dot(&cov.mu) * half).collect();
    let off: Vec<T> = args.iter().map(|&s| f2(s) * f2(s)).collect();
    let on: Vec<T> = args
        .iter()
        .enumerate()
        .map(|(j, &s)| f1(s) * f2(s) * (cov.xi[2 * j].powi(2) + cov.xi[2 * j + 1].powi(2)))
        .collect();
    let sum = minor_sum(&a.a, |subset, minor| {
        let mut term = minor * minor;
        let mut next = subset.iter().peekable();
        for j in 0..k {
            if next.peek() == Some(&&j) {
                next.next();
                term *= on[j];
            } else {
                term *= off[j];
            }
        }
        term
    });
    Ok(sum / lit::<T>(4.0).powi(m as i32))
}

/// `|μ · A_j| < 2π` for every column `A_j`.
pub fn ga_in_box<T: Real>(a: &GAMatrix<T>, mu: &nalgebra::DVector<T>) -> bool {
    (0..a.k()).all(|j| a.a.column(j).dot(mu).abs() < T::two_pi())
}

/// Necessary condition for membership in the regular domain of `G_A`: the
/// box test, then a positive closed-form Jacobian at `(ξ, tμ)` for
/// `t = 1/grid, 2/grid, …, 1`. Rejection is conclusive, acceptance is not.
pub fn ga_in_domain<T: Real>(a: &GAMatrix<T>, cov: &Covector<T>, grid: usize) -> Result<bool> {
    if grid < 8 {
        return Err(Error::Input(format!("domain grid needs at least 8 points, got {grid}")));
    }
    if !ga_in_box(a, &cov.mu) {
        return Ok(false);
    }
    for i in 1..=grid {
        let t = from_usize::<T>(i) / from_usize::<T>(grid);
        let c = Covector::new(cov.xi.clone(), &cov.mu * t);
        if !(ga_jacobian(a, &c)? > T::zero()) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The catalog groups.
#[derive(Clone, Debug, PartialEq)]
pub enum Builtin {
    Heisenberg,
    Free(usize),
    Star(usize),
    Ga(GAMatrix<f64>),
}

impl Builtin {
    /// Parses `heisenberg`, `free:k` or `star:k`.
    pub fn parse(name: &str) -> Result<Self> {
        let param = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| Error::Input(format!("bad group parameter in '{name}'")))
        };
        match name.split_once(':') {
            None if name == "heisenberg" => Ok(Builtin::Heisenberg),
            Some(("free", k)) => {
                let k = param(k)?;
                if k < 2 {
                    return Err(Error::Input("free:k needs k >= 2".into()));
                }
                Ok(Builtin::Free(k))
            }
            Some(("star", k)) => {
                let k = param(k)?;
                if k < 1 {
                    return Err(Error::Input("star:k needs k >= 1".into()));
                }
                Ok(Builtin::Star(k))
            }
            _ => Err(Error::Input(format!("unknown builtin group '{name}'"))),
        }
    }

    pub fn algebra<T: Real>(&self) -> Result<StepTwoAlgebra<T>> {
        match self {
            Builtin::Heisenberg => Ok(heisenberg()),
            Builtin::Free(k) => free(*k),
            Builtin::Star(k) => star(*k),
            Builtin::Ga(a) => {
                let a = GAMatrix::new(a.matrix().map(lit::<T>))?;
                from_ga(&a)
            }
        }
    }

    /// Exact exponents from the closed forms for each family.
    pub fn known_exponents(&self) -> ExponentReport {
        let name = self.to_string();
        match self {
            Builtin::Heisenberg => {
                let mut r = ExponentReport::assemble(&name, 3, 4, 0, 0, Provenance::ClosedForm);
                r.n_ce_exact = true;
                r
            }
            Builtin::Free(k) => {
                let k = *k;
                let gamma = k * (k - 1) * (k - 2) / 3;
                let mut r = ExponentReport::assemble(
                    &name,
                    k + k * (k - 1) / 2,
                    k + k * (k - 1),
                    gamma,
                    gamma,
                    Provenance::ClosedForm,
                );
                r.n_ce_exact = k == 2;
                r
            }
            Builtin::Star(k) => {
                let k = *k;
                let mut r = ExponentReport::assemble(&name, 2 * k + 1, 3 * k + 1, 0, 2 * k - 2, Provenance::ClosedForm);
                r.n_ce_exact = k == 1;
                r
            }
            Builtin::Ga(a) => {
                let (m, k) = (a.m(), a.k());
                let mut r = ExponentReport::assemble(&name, 2 * k + m, 2 * k + 2 * m, 0, 0, Provenance::ClosedForm);
                r.n_ce_exact = true;
                r
            }
        }
    }

    /// All parameterless and small-parameter builtins used by default test sweeps.
    pub fn standard_set() -> Vec<Builtin> {
        vec![
            Builtin::Heisenberg,
            Builtin::Free(3),
            Builtin::Free(4),
            Builtin::Star(2),
            Builtin::Star(3),
            Builtin::Ga(GAMatrix::from_rows(&[vec![1.0, 0.5, -0.3], vec![0.2, 1.0, 0.7]]).expect("full rank")),
        ]
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Builtin::Heisenberg => write!(f, "heisenberg"),
            Builtin::Free(k) => write!(f, "free:{k}"),
            Builtin::Star(k) => write!(f, "star:{k}"),
            Builtin::Ga(a) => write!(f, "ga:{}x{}", a.m(), a.k()),
        }
    }
}
