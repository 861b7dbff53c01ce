//! The geodesic filtration at a covector and the exponents it determines.
//!
//! For `(ξ, μ)` let `U^ℓ = span{ξ, J_μ ξ, …, J_μ^{ℓ-1} ξ}` and
//! `U_ℓ = {ν ∈ V2 : J_ν(U^ℓ) = 0}`. Then `U_ℓ = U_{ℓ+1} ⊕ W_ℓ` orthogonally,
//! `W_∞ = ∩ U_ℓ`, and the order of vanishing of the Jacobian along `ζ_λ` is
//! `N_SExp = 2 Σ_ℓ ℓ dim W_ℓ` (infinite when `W_∞ ≠ 0`).

use crate::algebra::{Covector, StepTwoAlgebra};
use crate::error::{Error, Result};
use crate::sampling::{gaussian_covector, substream, StrataSpec, STRATA_STREAM_BASE};
use crate::scalar::{factorial, from_usize, lit, to_f64, Real};
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use std::fmt;

/// Default relative cutoff for rank decisions.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

/// Singular values within this factor above the cutoff are reported as marginal.
const MARGINAL_FACTOR: f64 = 1e3;

/// Extended nonnegative integer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Order {
    Finite(usize),
    Infinite,
}

impl Order {
    pub fn finite(self) -> Option<usize> {
        match self {
            Order::Finite(k) => Some(k),
            Order::Infinite => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Order::Finite(_))
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(k) => write!(f, "{k}"),
            Order::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for Order {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Order::Finite(k) => s.serialize_u64(*k as u64),
            Order::Infinite => s.serialize_str("inf"),
        }
    }
}

/// A rank decision whose singular value sat close to the cutoff.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MarginalRank {
    /// `"krylov"` or `"annihilator"`.
    pub stage: &'static str,
    pub level: usize,
    /// Singular value divided by its reference scale.
    pub ratio: f64,
}

/// Filtration data at one covector.
#[derive(Clone, Debug)]
pub struct Filtration<T: Real> {
    /// `dim U^0, dim U^1, …`, ending with the first repeated value.
    pub u_dims: Vec<usize>,
    /// `dim W_0, …, dim W_d` (empty when every finite `W_ℓ` is trivial).
    pub w_dims: Vec<usize>,
    pub w_inf_dim: usize,
    /// Largest `ℓ` with `W_ℓ ≠ 0`.
    pub d: Option<usize>,
    pub n_sexp: Order,
    /// Orthonormal basis of `U^∞` (columns), in order of the Krylov sequence.
    pub krylov_basis: DMatrix<T>,
    /// Orthonormal bases (columns, `V2` coordinates) of `W_0, …, W_d`.
    pub w_bases: Vec<DMatrix<T>>,
    pub w_inf_basis: DMatrix<T>,
    pub marginal: Vec<MarginalRank>,
}

impl<T: Real> Filtration<T> {
    /// `dim W_ℓ`, zero beyond `d`.
    pub fn w_dim(&self, level: usize) -> usize {
        self.w_dims.get(level).copied().unwrap_or(0)
    }
}

/// Null space and row space of `m` restricted to its columns.
///
/// Returns `(null, range)` as orthonormal bases of the coordinate space of the
/// columns: singular values `≤ cutoff` count as zero.
fn split_kernel<T: Real>(m: &DMatrix<T>, cutoff: T, marginal: &mut Vec<(T, T)>) -> (DMatrix<T>, DMatrix<T>) {
    let cols = m.ncols();
    if cols == 0 {
        return (DMatrix::zeros(0, 0), DMatrix::zeros(0, 0));
    }
    // Pad to at least `cols` rows so the thin SVD returns a full right basis.
    let rows = m.nrows().max(cols);
    let mut padded = DMatrix::zeros(rows, cols);
    padded.view_mut((0, 0), (m.nrows(), cols)).copy_from(m);
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let mut null = Vec::new();
    let mut range = Vec::new();
    for (idx, &s) in svd.singular_values.iter().enumerate() {
        let v = v_t.row(idx).transpose();
        if s <= cutoff {
            null.push(v);
        } else {
            if s <= cutoff * lit(MARGINAL_FACTOR) {
                marginal.push((s, cutoff));
            }
            range.push(v);
        }
    }
    let to_mat = |vs: Vec<DVector<T>>| {
        if vs.is_empty() {
            DMatrix::zeros(cols, 0)
        } else {
            DMatrix::from_columns(&vs)
        }
    };
    (to_mat(null), to_mat(range))
}

/// Builds the filtration at `cov`.
///
/// The Krylov basis comes from Arnoldi steps on `J_μ / ‖J_μ‖_F` started at
/// `ξ / ‖ξ‖`; a new direction is accepted when its residual after two rounds
/// of Gram–Schmidt exceeds `rank_tol` (the largest singular value of the
/// stacked orthonormal basis is one). Each `U_{ℓ+1}` is the null space of
/// `ν ↦ J_ν q_ℓ` on `U_ℓ`, with singular values below `rank_tol · C` treated
/// as zero (`C` the bracket norm bounds that map). Everything depends on `μ`
/// only through its line.
pub fn filtration<T: Real>(alg: &StepTwoAlgebra<T>, cov: &Covector<T>, rank_tol: T) -> Result<Filtration<T>> {
    alg.check_covector(cov)?;
    if !(rank_tol > T::zero()) {
        return Err(Error::Input("rank tolerance must be positive".into()));
    }
    let (q1, q2) = (alg.q1(), alg.q2());
    let mut marginal = Vec::new();

    // Krylov basis.
    let j = alg.j_matrix(&cov.mu);
    let j_norm = j.norm();
    let jn = if j_norm > T::zero() { &j / j_norm } else { j.clone() };
    let xi_norm = cov.xi.norm();
    let mut basis: Vec<DVector<T>> = Vec::new();
    if xi_norm > T::zero() {
        basis.push(&cov.xi / xi_norm);
        while basis.len() < q1 {
            let mut cand = &jn * basis.last().expect("nonempty");
            for _ in 0..2 {
                for q in &basis {
                    let c = q.dot(&cand);
                    cand -= q * c;
                }
            }
            let r = cand.norm();
            if r <= rank_tol {
                break;
            }
            if r <= rank_tol * lit(MARGINAL_FACTOR) {
                marginal.push(MarginalRank {
                    stage: "krylov",
                    level: basis.len(),
                    ratio: to_f64(r),
                });
            }
            basis.push(cand / r);
        }
    }
    let krylov_dim = basis.len();
    let mut u_dims: Vec<usize> = (0..=krylov_dim).collect();
    u_dims.push(krylov_dim);

    // Annihilator chain U_0 ⊃ U_1 ⊃ … inside V2.
    let cutoff = rank_tol * alg.bracket_norm();
    let mut current = DMatrix::<T>::identity(q2, q2);
    let mut w_bases = Vec::with_capacity(krylov_dim);
    for (level, q) in basis.iter().enumerate() {
        if current.ncols() == 0 {
            break;
        }
        // Column a of `k` is J_{Y_a} q = -C_a q.
        let mut k = DMatrix::zeros(q1, q2);
        for a in 0..q2 {
            k.set_column(a, &(-(alg.layer(a) * q)));
        }
        let restricted = &k * &current;
        let mut flags = Vec::new();
        let (null, range) = split_kernel(&restricted, cutoff, &mut flags);
        for (s, c) in flags {
            marginal.push(MarginalRank {
                stage: "annihilator",
                level,
                ratio: to_f64(s / c) * DEFAULT_RANK_TOL.max(to_f64(rank_tol)),
            });
        }
        w_bases.push(&current * range);
        current = &current * null;
    }
    let w_inf_basis = current;
    let w_inf_dim = w_inf_basis.ncols();

    while w_bases.last().is_some_and(|b| b.ncols() == 0) {
        w_bases.pop();
    }
    let w_dims: Vec<usize> = w_bases.iter().map(|b| b.ncols()).collect();
    let d = if w_dims.is_empty() { None } else { Some(w_dims.len() - 1) };
    let n_sexp = if w_inf_dim > 0 {
        Order::Infinite
    } else {
        Order::Finite(2 * w_dims.iter().enumerate().map(|(l, &dim)| l * dim).sum::<usize>())
    };

    let krylov_basis = if basis.is_empty() {
        DMatrix::zeros(q1, 0)
    } else {
        DMatrix::from_columns(&basis)
    };
    Ok(Filtration {
        u_dims,
        w_dims,
        w_inf_dim,
        d,
        n_sexp,
        krylov_basis,
        w_bases,
        w_inf_basis,
        marginal,
    })
}

/// `Γ(ξ, μ) = N_SExp(ξ, μ)`.
pub fn gamma_point<T: Real>(alg: &StepTwoAlgebra<T>, cov: &Covector<T>, rank_tol: T) -> Result<Order> {
    Ok(filtration(alg, cov, rank_tol)?.n_sexp)
}

fn require_finite<T: Real>(f: &Filtration<T>) -> Result<()> {
    if f.w_inf_dim > 0 {
        return Err(Error::DegenerateCovector { w_inf_dim: f.w_inf_dim });
    }
    Ok(())
}

/// Orthonormal change of basis `V1 ⊕ V2 → V1 ⊕ W_0 ⊕ … ⊕ W_d` (columns).
fn adapted_basis<T: Real>(q1: usize, f: &Filtration<T>) -> DMatrix<T> {
    let q2 = f.w_bases.first().map_or(0, |b| b.nrows());
    let n = q1 + q2;
    let mut out = DMatrix::zeros(n, n);
    out.view_mut((0, 0), (q1, q1)).fill_with_identity();
    let mut col = q1;
    for b in &f.w_bases {
        out.view_mut((q1, col), (q2, b.ncols())).copy_from(b);
        col += b.ncols();
    }
    out
}

/// `a(0)` in the adapted basis, with its determinant.
#[derive(Clone, Debug)]
pub struct AZero<T: Real> {
    pub matrix: DMatrix<T>,
    pub det: T,
    /// Columns: the adapted basis, in `(V1, V2)` coordinates.
    pub basis: DMatrix<T>,
    pub w_dims: Vec<usize>,
}

/// Assembles `a(0)` block by block:
///
/// ```text
/// V1 → V1   : Id
/// V1 → W_ℓ  : ℓ/(2(ℓ+2)!)  π_ℓ [ · , J_μ^ℓ ξ]
/// W_ℓ → V1  : 1/(ℓ+2)!     J_(·) J_μ^ℓ ξ
/// W_r → W_s : (s-r-1)/(2(r+s+3)(r+2)!(s+1)!)  π_s [J_(·) J_μ^r ξ, J_μ^s ξ]
/// ```
pub fn a_zero<T: Real>(alg: &StepTwoAlgebra<T>, cov: &Covector<T>, rank_tol: T) -> Result<AZero<T>> {
    let f = filtration(alg, cov, rank_tol)?;
    require_finite(&f)?;
    let q1 = alg.q1();
    let j = alg.j_matrix(&cov.mu);
    let levels = f.w_bases.len();
    let mut powers = vec![cov.xi.clone()];
    for l in 1..levels {
        let next = &j * &powers[l - 1];
        powers.push(next);
    }
    let offsets: Vec<usize> = f
        .w_bases
        .iter()
        .scan(q1, |acc, b| {
            let o = *acc;
            *acc += b.ncols();
            Some(o)
        })
        .collect();
    let n = alg.dim();
    let mut a = DMatrix::zeros(n, n);
    a.view_mut((0, 0), (q1, q1)).fill_with_identity();

    let unit = |i: usize| {
        let mut e = DVector::zeros(q1);
        e[i] = T::one();
        e
    };
    for (l, wl) in f.w_bases.iter().enumerate() {
        let lf = from_usize::<T>(l);
        // V1 → W_ℓ
        let c_down = lf / (lit::<T>(2.0) * factorial::<T>(l + 2));
        for i in 0..q1 {
            let br = alg.bracket_unchecked(&unit(i), &powers[l]);
            for (t, e) in wl.column_iter().enumerate() {
                a[(offsets[l] + t, i)] = c_down * e.dot(&br);
            }
        }
        // W_ℓ → V1
        let c_up = T::one() / factorial::<T>(l + 2);
        for (t, e) in wl.column_iter().enumerate() {
            let v = alg.j_matrix(&e.into_owned()) * &powers[l];
            a.view_mut((0, offsets[l] + t), (q1, 1)).copy_from(&(v * c_up));
        }
    }
    // W_r → W_s
    for (r, wr) in f.w_bases.iter().enumerate() {
        for (s, ws) in f.w_bases.iter().enumerate() {
            let num = from_usize::<T>(s) - from_usize::<T>(r) - T::one();
            let den = lit::<T>(2.0)
                * from_usize::<T>(r + s + 3)
                * factorial::<T>(r + 2)
                * factorial::<T>(s + 1);
            let c = num / den;
            for (tr, e) in wr.column_iter().enumerate() {
                let v = alg.j_matrix(&e.into_owned()) * &powers[r];
                let br = alg.bracket_unchecked(&v, &powers[s]);
                for (ts, e2) in ws.column_iter().enumerate() {
                    a[(offsets[s] + ts, offsets[r] + tr)] = c * e2.dot(&br);
                }
            }
        }
    }
    let det = a.clone().determinant();
    Ok(AZero {
        matrix: a,
        det,
        basis: adapted_basis(q1, &f),
        w_dims: f.w_dims,
    })
}

/// The Gram-type matrix `𝓜 = (M^r_s / (r+s+3))_{r,s}` on `V2`.
#[derive(Clone, Debug)]
pub struct HilbertGram<T: Real> {
    /// `𝓜` in the adapted basis `W_0 ⊕ … ⊕ W_d`.
    pub matrix: DMatrix<T>,
    pub min_eigenvalue: T,
    pub w_dims: Vec<usize>,
    /// Columns of the adapted basis in `V2` coordinates.
    pub basis: DMatrix<T>,
}

impl<T: Real> HilbertGram<T> {
    /// `𝓜` in the declared coordinates of `V2`.
    pub fn in_standard_basis(&self) -> DMatrix<T> {
        &self.basis * &self.matrix * self.basis.transpose()
    }

    /// `(Π_ℓ ((ℓ+1)/(ℓ+2)!)^{dim W_ℓ})² det 𝓜`, the closed form of `det a(0)`.
    pub fn product_formula(&self) -> T {
        let prefactor = self.w_dims.iter().enumerate().fold(T::one(), |acc, (l, &dim)| {
            acc * (from_usize::<T>(l + 1) / factorial::<T>(l + 2)).powi(dim as i32)
        });
        prefactor * prefactor * self.matrix.clone().determinant()
    }
}

/// Builds `𝓜` from the maps `M^ℓ(ν) = -J_ν J_μ^ℓ ξ` via `M^r_s = M_s ∘ M^r`,
/// `M_s = (M^s)^*`.
pub fn hilbert_gram<T: Real>(alg: &StepTwoAlgebra<T>, cov: &Covector<T>, rank_tol: T) -> Result<HilbertGram<T>> {
    let f = filtration(alg, cov, rank_tol)?;
    require_finite(&f)?;
    let (q1, q2) = (alg.q1(), alg.q2());
    let j = alg.j_matrix(&cov.mu);
    // up[ℓ]: matrix of M^ℓ : W_ℓ → V1.
    let mut p = cov.xi.clone();
    let mut up = Vec::with_capacity(f.w_bases.len());
    for wl in &f.w_bases {
        let mut k = DMatrix::zeros(q1, q2);
        for a in 0..q2 {
            // -J_{Y_a} p = C_a p
            k.set_column(a, &(alg.layer(a) * &p));
        }
        up.push(k * wl);
        p = &j * p;
    }
    let mut m = DMatrix::zeros(q2, q2);
    let mut row = 0;
    for (s, us) in up.iter().enumerate() {
        let mut col = 0;
        for (r, ur) in up.iter().enumerate() {
            let block = us.tr_mul(ur) / from_usize::<T>(r + s + 3);
            m.view_mut((row, col), (us.ncols(), ur.ncols())).copy_from(&block);
            col += ur.ncols();
        }
        row += us.ncols();
    }
    let basis = adapted_basis(0, &f);
    let sym = (&m + m.transpose()) * lit::<T>(0.5);
    let min_eigenvalue = SymmetricEigen::new(sym)
        .eigenvalues
        .iter()
        .fold(T::max_value().unwrap_or(T::one()), |acc, v| acc.min(*v));
    Ok(HilbertGram {
        matrix: m,
        min_eigenvalue,
        w_dims: f.w_dims,
        basis,
    })
}

/// How the numbers in an [`ExponentReport`] were obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// `Γ(G)` from generic Gaussian samples, `Γ̂` a certified lower bound.
    Sampled,
    /// Closed forms for a builtin family.
    ClosedForm,
}

/// Covectors attaining the reported exponents.
#[derive(Clone, Debug, PartialEq, Serialize, Default)]
pub struct Witnesses {
    pub gamma_group: Option<Covector<f64>>,
    pub gamma_hat: Option<Covector<f64>>,
}

/// Dimensions and exponents of a step-two group.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExponentReport {
    pub group: String,
    pub n: usize,
    #[serde(rename = "Q")]
    pub q: usize,
    /// `Γ(G)`.
    pub gamma_group: usize,
    /// Largest finite `Γ(ξ)` found; a lower bound for `Γ̂(G)`.
    pub gamma_hat_lower: usize,
    /// `2Q - n + Γ(G)`.
    pub n_geo: usize,
    /// `2Q - n + Γ̂`; a lower bound for the curvature exponent.
    pub n_ce_lower: usize,
    /// True when `n_ce_lower` is known to equal the curvature exponent.
    pub n_ce_exact: bool,
    pub provenance: Provenance,
    pub witnesses: Witnesses,
    pub sample_count: usize,
    pub seed: Option<u64>,
}

impl ExponentReport {
    pub(crate) fn assemble(
        group: &str,
        n: usize,
        q: usize,
        gamma_group: usize,
        gamma_hat_lower: usize,
        provenance: Provenance,
    ) -> Self {
        let base = 2 * q - n;
        Self {
            group: group.to_string(),
            n,
            q,
            gamma_group,
            gamma_hat_lower,
            n_geo: base + gamma_group,
            n_ce_lower: base + gamma_hat_lower,
            n_ce_exact: false,
            provenance,
            witnesses: Witnesses::default(),
            sample_count: 0,
            seed: None,
        }
    }

    /// `n ≤ Q ≤ N_GEO ≤ n_ce_lower`.
    pub fn chain_holds(&self) -> bool {
        self.n <= self.q && self.q <= self.n_geo && self.n_geo <= self.n_ce_lower
    }
}

/// Sampling plan for [`group_exponents`].
#[derive(Clone, Debug)]
pub struct ExponentConfig {
    pub n_samples: usize,
    pub strata: StrataSpec,
    /// Gaussian fills drawn per zero mask.
    pub per_stratum: usize,
    pub seed: u64,
    pub rank_tol: f64,
}

impl ExponentConfig {
    pub fn new(n_samples: usize, strata: StrataSpec, seed: u64) -> Self {
        Self {
            n_samples,
            strata,
            per_stratum: 8,
            seed,
            rank_tol: DEFAULT_RANK_TOL,
        }
    }
}

fn to_f64_covector<T: Real>(c: &Covector<T>) -> Covector<f64> {
    Covector::new(c.xi.map(to_f64), c.mu.map(to_f64))
}

/// `Γ(G)` from generic samples and a lower bound for `Γ̂(G)` from samples and strata.
pub fn group_exponents<T: Real>(alg: &StepTwoAlgebra<T>, cfg: &ExponentConfig) -> Result<ExponentReport> {
    let (q1, q2) = (alg.q1(), alg.q2());
    cfg.strata.check(q1, q2)?;
    if cfg.n_samples == 0 {
        return Err(Error::Input("at least one Gaussian sample is required".into()));
    }
    let tol = lit::<T>(cfg.rank_tol);

    let generic: Vec<(Covector<T>, Order)> = (0..cfg.n_samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = substream(cfg.seed, i as u64);
            let cov = gaussian_covector::<T, _>(&mut rng, q1, q2);
            let order = gamma_point(alg, &cov, tol)?;
            Ok((cov, order))
        })
        .collect::<Result<_>>()?;

    let per = cfg.per_stratum;
    let structured: Vec<(Covector<T>, Order)> = (0..cfg.strata.masks.len() * per)
        .into_par_iter()
        .map(|i| {
            let mask = &cfg.strata.masks[i / per];
            let mut rng = substream(cfg.seed, STRATA_STREAM_BASE + i as u64);
            let cov = mask.apply(&gaussian_covector::<T, _>(&mut rng, q1, q2));
            let order = gamma_point(alg, &cov, tol)?;
            Ok((cov, order))
        })
        .collect::<Result<_>>()?;
    let explicit: Vec<(Covector<T>, Order)> = cfg
        .strata
        .covectors
        .iter()
        .map(|c| {
            let cov = Covector::new(c.xi.map(lit::<T>), c.mu.map(lit::<T>));
            let order = gamma_point(alg, &cov, tol)?;
            Ok((cov, order))
        })
        .collect::<Result<_>>()?;

    let mut min: Option<(usize, &Covector<T>)> = None;
    for (cov, order) in &generic {
        if let Order::Finite(k) = order {
            if min.is_none_or(|(best, _)| *k < best) {
                min = Some((*k, cov));
            }
        }
    }
    let (gamma_group, min_cov) = min.ok_or(Error::PathologicalSampling { samples: cfg.n_samples })?;

    let mut max: Option<(usize, &Covector<T>)> = None;
    for (cov, order) in generic.iter().chain(&structured).chain(&explicit) {
        if let Order::Finite(k) = order {
            if max.is_none_or(|(best, _)| *k > best) {
                max = Some((*k, cov));
            }
        }
    }
    let (gamma_hat, max_cov) = max.expect("a finite generic sample exists");

    let mut report = ExponentReport::assemble(
        alg.name(),
        alg.dim(),
        alg.homogeneous_dim(),
        gamma_group,
        gamma_hat,
        Provenance::Sampled,
    );
    report.witnesses = Witnesses {
        gamma_group: Some(to_f64_covector(min_cov)),
        gamma_hat: Some(to_f64_covector(max_cov)),
    };
    report.sample_count = generic.len() + structured.len() + explicit.len();
    report.seed = Some(cfg.seed);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn heis() -> StepTwoAlgebra<f64> {
        StepTwoAlgebra::from_brackets("h", 2, 1, &[(0, 1, vec![1.0])]).unwrap()
    }

    fn star2() -> StepTwoAlgebra<f64> {
        StepTwoAlgebra::from_brackets("star:2", 3, 2, &[(0, 1, vec![1.0, 0.0]), (0, 2, vec![0.0, 1.0])]).unwrap()
    }

    const TOL: f64 = DEFAULT_RANK_TOL;

    #[test]
    fn heisenberg_table() {
        let h = heis();
        for (xi, mu) in [([1.0, 0.0], 1.0), ([0.3, -2.0], 0.0), ([0.0, 1.0], -4.0)] {
            let f = filtration(&h, &Covector::from_slices(&xi, &[mu]), TOL).unwrap();
            assert_eq!(f.w_dims, vec![1]);
            assert_eq!((f.w_inf_dim, f.d, f.n_sexp), (0, Some(0), Order::Finite(0)));
        }
        let f = filtration(&h, &Covector::from_slices(&[0.0, 0.0], &[1.0]), TOL).unwrap();
        assert_eq!((f.w_inf_dim, f.d, f.n_sexp), (1, None, Order::Infinite));
        assert_eq!(f.u_dims, vec![0, 0]);
    }

    #[test]
    fn heisenberg_u_dims_follow_table() {
        let h = heis();
        let f = filtration(&h, &Covector::from_slices(&[1.0, 0.0], &[0.0]), TOL).unwrap();
        assert_eq!(f.u_dims, vec![0, 1, 1]);
        let f = filtration(&h, &Covector::from_slices(&[1.0, 0.0], &[2.0]), TOL).unwrap();
        assert_eq!(f.u_dims, vec![0, 1, 2, 2]);
    }

    #[test]
    fn star_strata() {
        let s = star2();
        let g = |xi: [f64; 3], mu: [f64; 2]| gamma_point(&s, &Covector::from_slices(&xi, &mu), TOL).unwrap();
        assert_eq!(g([1.0, 0.2, -0.4], [0.3, 0.5]), Order::Finite(0));
        assert_eq!(g([0.0, 1.0, 0.5], [0.3, 0.5]), Order::Finite(2));
        assert_eq!(g([0.0, 1.0, 0.0], [0.0, 1.0]), Order::Infinite);
        let f = filtration(&s, &Covector::from_slices(&[0.0, 1.0, 0.5], &[0.3, 0.5]), TOL).unwrap();
        assert_eq!(f.w_dims, vec![1, 1]);
    }

    #[test]
    fn heisenberg_a_zero_and_gram() {
        let h = heis();
        let c = Covector::from_slices(&[1.0, 0.0], &[1.0]);
        let a = a_zero(&h, &c, TOL).unwrap();
        assert!((a.det - 1.0 / 12.0).abs() < 1e-15);
        let m = hilbert_gram(&h, &c, TOL).unwrap();
        assert!((m.matrix[(0, 0)] - 1.0 / 3.0).abs() < 1e-15);
        assert!((m.product_formula() - a.det).abs() < 1e-15);
    }

    #[test]
    fn degenerate_covector_is_rejected() {
        let h = heis();
        let c = Covector::from_slices(&[0.0, 0.0], &[1.0]);
        assert!(matches!(a_zero(&h, &c, TOL), Err(Error::DegenerateCovector { w_inf_dim: 1 })));
        assert!(matches!(hilbert_gram(&h, &c, TOL), Err(Error::DegenerateCovector { .. })));
    }

    #[test]
    fn exponents_for_star_with_default_strata() {
        let s = star2();
        let cfg = ExponentConfig::new(64, StrataSpec::auto(3, 2), 11);
        let r = group_exponents(&s, &cfg).unwrap();
        assert_eq!((r.gamma_group, r.gamma_hat_lower, r.n_geo, r.n_ce_lower), (0, 2, 9, 11));
        assert!(r.chain_holds());
        let again = group_exponents(&s, &cfg).unwrap();
        assert_eq!(r, again);
    }

    #[test]
    fn order_serializes_infinite_as_string() {
        assert_eq!(serde_json::to_string(&Order::Infinite).unwrap(), "\"inf\"");
        assert_eq!(serde_json::to_string(&Order::Finite(4)).unwrap(), "4");
    }
}
