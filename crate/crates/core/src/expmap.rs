//! The sub-Riemannian exponential map of a step-two group, its differential and
//! Jacobian, and the dilations it is equivariant under.
//!
//! With `J = J_μ` and Krylov vectors `P_m = J^m ξ`,
//!
//! ```text
//! x = Σ_{k≥0} J^k ξ / (k+1)!,      u = Σ_{k≥1} B_k(μ, ξ),
//! B_k = 1/(2(k+2)) Σ_{m=0}^{k} [P_m, P_{k-m}] / ((m+1)! (k-m)!).
//! ```
//!
//! Pairing the terms `m` and `k-m` of `B_k` gives `u = Σ_{m<n} w(m,n) [P_m, P_n]`
//! with `w(m,n) = (n-m) / (2(m+n+2)(m+1)!(n+1)!)`. The same weights appear in
//! every `u`-block of the differential: if `δP_m` denotes the derivative of `P_m`
//! in some direction, then `δu = Σ_{m,n} w(m,n) [δP_m, P_n]`.

use crate::algebra::{Covector, GroupPoint, StepTwoAlgebra};
use crate::error::{Error, Result};
use crate::extended::DoubleDouble;
use crate::scalar::{factorial, from_usize, lit, to_f64, CompensatedMat, CompensatedVec, Real};
use nalgebra::{DMatrix, DVector, SymmetricEigen};

/// Truncation controls for the exponential-map series.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesConfig<T: Real> {
    /// Absolute tolerance on the majorant of the discarded tail.
    pub tol: T,
    /// Largest admissible truncation degree.
    pub max_terms: usize,
}

impl<T: Real> Default for SeriesConfig<T> {
    fn default() -> Self {
        Self {
            tol: lit(1e-14),
            max_terms: 256,
        }
    }
}

impl<T: Real> SeriesConfig<T> {
    pub fn new(tol: T, max_terms: usize) -> Result<Self> {
        let cfg = Self { tol, max_terms };
        cfg.check()?;
        Ok(cfg)
    }

    fn check(&self) -> Result<()> {
        if !(self.tol > T::zero()) {
            return Err(Error::Input("series tolerance must be positive".into()));
        }
        if self.max_terms < 8 {
            return Err(Error::Input("max_terms must be at least 8".into()));
        }
        Ok(())
    }
}

/// How [`dsexp_with`] obtains the differential.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DiffMode<T: Real> {
    /// Term-by-term differentiated series.
    Series,
    /// Central differences of [`sexp`] with the given step.
    FiniteDifference { step: T },
}

/// Below this Frobenius norm of `J_μ`, `φ(J_μ) ξ` is summed as a Taylor series.
const PHI_TAYLOR_RADIUS: f64 = 0.5;

/// Smallest degree `K` such that the majorant of every term of degree `> K`
/// sums to less than `tol`. `bound(k)` must eventually decay at least geometrically.
///
/// Bounds are evaluated in `f64` whatever `T` is: they only steer the truncation.
fn truncation_degree<T: Real>(
    cfg: &SeriesConfig<T>,
    min_degree: usize,
    bound: impl Fn(usize) -> f64,
) -> Result<usize> {
    let (half, two, tol) = (0.5, 2.0, crate::scalar::to_f64(cfg.tol));
    let mut k = min_degree;
    loop {
        let next = bound(k + 1);
        let after = bound(k + 2);
        // Once the ratio of consecutive bounds is below one half it stays there
        // (factorial decay), so the tail is at most twice its first term.
        if (next == 0.0 || after <= next * half) && two * next < tol {
            return Ok(k);
        }
        if k >= cfg.max_terms {
            return Err(Error::Convergence {
                terms: k,
                residual_bound: two * next,
            });
        }
        k += 1;
    }
}

/// `x^k / f!` without intermediate overflow.
fn pow_over_factorial(x: f64, k: usize, f: usize) -> f64 {
    (1..=k.max(f)).fold(1.0, |acc, i| {
        let acc = if i <= k { acc * x } else { acc };
        if i <= f {
            acc / i as f64
        } else {
            acc
        }
    })
}

/// Spectral norm of a skew matrix, the largest `√σ` over the eigenvalues of `JᵀJ`.
fn operator_norm<T: Real>(j: &DMatrix<T>) -> T {
    if j.is_empty() {
        return T::zero();
    }
    SymmetricEigen::new(j.transpose() * j)
        .eigenvalues
        .iter()
        .fold(T::zero(), |acc, &v| acc.max(v))
        .sqrt()
}

/// Krylov vectors `P_0, …, P_K` with `P_m = J^m ξ`.
fn krylov<T: Real>(j: &DMatrix<T>, xi: &DVector<T>, k_max: usize) -> Vec<DVector<T>> {
    let mut out = Vec::with_capacity(k_max + 1);
    out.push(xi.clone());
    for m in 1..=k_max {
        let next = j * &out[m - 1];
        out.push(next);
    }
    out
}

/// Weight `w(m, n) = (n - m) / (2 (m+n+2) (m+1)! (n+1)!)`.
fn pair_weights<T: Real>(k_max: usize) -> DMatrix<T> {
    let inv_fact: Vec<T> = (0..=k_max + 2).map(|i| T::one() / factorial::<T>(i)).collect();
    DMatrix::from_fn(k_max + 1, k_max + 1, |m, n| {
        let diff = from_usize::<T>(n) - from_usize::<T>(m);
        diff * inv_fact[m + 1] * inv_fact[n + 1] / (lit::<T>(2.0) * from_usize::<T>(m + n + 2))
    })
}

/// `φ(J) ξ` with `φ(z) = (e^z - 1)/z`.
///
/// For `‖J‖_F ≤ 0.5` this is the Taylor series. Otherwise `φ(J) = g(S) + J h(S)`
/// with `S = JᵀJ = -J²`, `g(s) = sin√s/√s` and `h(s) = (1 - cos√s)/s`, applied
/// through the symmetric eigendecomposition of `S`; the even and odd parts of `φ`
/// are entire functions of `J²`, so no pairing of eigenvectors is needed.
pub fn phi_apply<T: Real>(j: &DMatrix<T>, xi: &DVector<T>, cfg: &SeriesConfig<T>) -> Result<DVector<T>> {
    let norm = j.norm();
    if norm <= lit(PHI_TAYLOR_RADIUS) {
        let (xi_norm, norm) = (to_f64(xi.norm()), to_f64(norm));
        let k = truncation_degree(cfg, 1, |k| xi_norm * pow_over_factorial(norm, k, k + 1))?;
        let mut acc = CompensatedVec::zeros(xi.len());
        let mut p = xi.clone();
        for m in 0..=k {
            acc.add(&(&p / factorial::<T>(m + 1)));
            p = j * p;
        }
        return Ok(acc.value());
    }
    let s = j.transpose() * j;
    let eig = SymmetricEigen::new(s);
    let coords = eig.eigenvectors.transpose() * xi;
    let g = DVector::from_iterator(
        coords.len(),
        eig.eigenvalues.iter().zip(coords.iter()).map(|(&s, &c)| sinc_sqrt(s) * c),
    );
    let h = DVector::from_iterator(
        coords.len(),
        eig.eigenvalues.iter().zip(coords.iter()).map(|(&s, &c)| versine_ratio(s) * c),
    );
    let even = &eig.eigenvectors * g;
    let odd = j * (&eig.eigenvectors * h);
    Ok(even + odd)
}

/// `sin(√s)/√s`, with `s` clamped to `[0, ∞)`.
fn sinc_sqrt<T: Real>(s: T) -> T {
    let s = s.max(T::zero());
    if s < lit(1e-3) {
        T::one() - s / lit(6.0) + s * s / lit(120.0) - s * s * s / lit(5040.0)
    } else {
        let r = s.sqrt();
        r.sin() / r
    }
}

/// `(1 - cos√s)/s`, with `s` clamped to `[0, ∞)`.
fn versine_ratio<T: Real>(s: T) -> T {
    let s = s.max(T::zero());
    if s < lit(1e-3) {
        lit::<T>(0.5) - s / lit(24.0) + s * s / lit(720.0) - s * s * s / lit(40320.0)
    } else {
        let half = s.sqrt() * lit(0.5);
        // 1 - cos θ = 2 sin²(θ/2) avoids cancellation.
        lit::<T>(2.0) * half.sin() * half.sin() / s
    }
}

/// `B_k(μ, ξ)` straight from its definition; `B_0 = 0`.
pub fn bk<T: Real>(alg: &StepTwoAlgebra<T>, mu: &DVector<T>, xi: &DVector<T>, k: usize) -> Result<DVector<T>> {
    alg.check_covector(&Covector::new(xi.clone(), mu.clone()))?;
    let j = alg.j_matrix(mu);
    let p = krylov(&j, xi, k);
    let mut acc = CompensatedVec::zeros(alg.q2());
    for m in 0..=k {
        let denom = lit::<T>(2.0) * factorial::<T>(m + 1) * factorial::<T>(k - m) * from_usize::<T>(k + 2);
        acc.add(&(alg.bracket_unchecked(&p[m], &p[k - m]) / denom));
    }
    Ok(acc.value())
}

/// Majorant of `‖B_k‖`: `C ‖J‖^k ‖ξ‖² (2^{k+1} - 1) / (2 (k+2)!)`.
fn bk_bound(c: f64, j_norm: f64, xi_norm: f64, k: usize) -> f64 {
    // (2^{k+1} - 1) J^k ≤ 2 (2J)^k
    c * xi_norm * xi_norm * pow_over_factorial(2.0 * j_norm, k, k + 2)
}

/// The exponential map `SExp(ξ, μ) = (x, u)`.
pub fn sexp<T: Real>(alg: &StepTwoAlgebra<T>, cov: &Covector<T>, cfg: &SeriesConfig<T>) -> Result<GroupPoint<T>> {
    cfg.check()?;
    alg.check_covector(cov)?;
    let j = alg.j_matrix(&cov.mu);
    let x = phi_apply(&j, &cov.xi, cfg)?;

    let (c, j_norm, xi_norm) = (to_f64(alg.bracket_norm()), to_f64(operator_norm(&j)), to_f64(cov.xi.norm()));
    let k_max = truncation_degree(cfg, 1, |k| bk_bound(c, j_norm, xi_norm, k))?;
    let p = krylov(&j, &cov.xi, k_max);
    let w = pair_weights::<T>(k_max);
    let mut u = CompensatedVec::zeros(alg.q2());
    for k in 1..=k_max {
        // B_k = Σ_{m < k-m} w(m, k-m) [P_m, P_{k-m}]
        let mut b = DVector::zeros(alg.q2());
        for m in 0..=k / 2 {
            let n = k - m;
            if m < n {
                b += alg.bracket_unchecked(&p[m], &p[n]) * w[(m, n)];
            }
        }
        u.add(&b);
    }
    Ok(GroupPoint::new(x, u.value()))
}

/// Majorant for the degree-`k` terms of the differentiated series.
fn dsexp_bound(c: f64, j_norm: f64, xi_norm: f64, k: usize) -> f64 {
    let amp = c.max(1.0) * c.max(1.0) * xi_norm.max(1.0) * xi_norm.max(1.0) * j_norm.max(1.0);
    let kk = (k + 1) as f64;
    // (2J)^{k-1}/(k+1)! = (2J)^k/(k+1)! / (2J), with k ≥ 2 here
    amp * kk * kk * pow_over_factorial(2.0 * j_norm, k - 1, k + 1)
}

/// The differential `D SExp(ξ, μ)` as an `n × n` matrix.
///
/// Columns are the directions `(X_1 … X_q1, Y_1 … Y_q2)`, rows the components
/// `(x, u)`. Uses the differentiated series.
pub fn dsexp<T: Real>(alg: &StepTwoAlgebra<T>, cov: &Covector<T>, cfg: &SeriesConfig<T>) -> Result<DMatrix<T>> {
    cfg.check()?;
    alg.check_covector(cov)?;
    let (q1, q2) = (alg.q1(), alg.q2());
    let j = alg.j_matrix(&cov.mu);
    let (c, j_norm, xi_norm) = (to_f64(alg.bracket_norm()), to_f64(operator_norm(&j)), to_f64(cov.xi.norm()));
    let k_max = truncation_degree(cfg, 2, |k| dsexp_bound(c, j_norm, xi_norm, k))?;

    let p = krylov(&j, &cov.xi, k_max);
    let w = pair_weights::<T>(k_max);

    // Derivatives of P_m: along V1 they are J^m (as a matrix), along Y_a they are
    // T^a_m = Σ_{i=1}^{m} J^{i-1} J_{Y_a} J^{m-i} ξ, i.e. T^a_m = J T^a_{m-1} + J_{Y_a} P_{m-1}.
    let mut jpow = Vec::with_capacity(k_max + 1);
    jpow.push(DMatrix::<T>::identity(q1, q1));
    for m in 1..=k_max {
        let next = &j * &jpow[m - 1];
        jpow.push(next);
    }
    // tmu[m] has columns T^a_m.
    let mut tmu = Vec::with_capacity(k_max + 1);
    tmu.push(DMatrix::<T>::zeros(q1, q2));
    for m in 1..=k_max {
        let mut t = &j * &tmu[m - 1];
        for a in 0..q2 {
            // J_{Y_a} = -C_a
            let col = -(alg.layer(a) * &p[m - 1]);
            let mut tc = t.column_mut(a);
            tc += col;
        }
        tmu.push(t);
    }

    let mut out = DMatrix::zeros(q1 + q2, q1 + q2);

    // x-blocks: Σ_k J^k/(k+1)! and Σ_k T_k/(k+1)!.
    let mut dx_dxi = CompensatedMat::zeros(q1, q1);
    let mut dx_dmu = CompensatedMat::zeros(q1, q2);
    let mut inv_fact = T::one();
    for k in 0..=k_max {
        inv_fact /= from_usize::<T>(k + 1);
        dx_dxi.add_scaled(&jpow[k], inv_fact);
        dx_dmu.add_scaled(&tmu[k], inv_fact);
    }
    out.view_mut((0, 0), (q1, q1)).copy_from(&dx_dxi.value());
    out.view_mut((0, q1), (q1, q2)).copy_from(&dx_dmu.value());

    // u-blocks: δu_b = Σ_{m,n} w(m,n) ⟨δP_m, C_b P_n⟩ = Σ_m ⟨δP_m, y_{b,m}⟩
    // with y_{b,m} = Σ_{n ≤ K-m} w(m,n) C_b P_n.
    // Since C_b is linear, y_{b,m} = C_b z_m with z_m = Σ_n w(m,n) P_n.
    let z: Vec<DVector<T>> = (0..=k_max)
        .map(|m| {
            let mut acc = CompensatedVec::zeros(q1);
            for n in 0..=(k_max - m) {
                if m != n {
                    acc.add_scaled(&p[n], w[(m, n)]);
                }
            }
            acc.value()
        })
        .collect();
    let mut du_dxi = DMatrix::zeros(q2, q1);
    let mut du_dmu = DMatrix::zeros(q2, q2);
    for b in 0..q2 {
        let cb = alg.layer(b);
        let mut row_xi = CompensatedVec::zeros(q1);
        let mut row_mu = CompensatedVec::zeros(q2);
        let mut y = DVector::zeros(q1);
        let mut t_xi = DVector::zeros(q1);
        let mut t_mu = DVector::zeros(q2);
        for m in 0..=k_max {
            y.gemv(T::one(), cb, &z[m], T::zero());
            // ⟨J^m e_i, y⟩ = ((J^m)ᵀ y)_i
            t_xi.gemv_tr(T::one(), &jpow[m], &y, T::zero());
            t_mu.gemv_tr(T::one(), &tmu[m], &y, T::zero());
            row_xi.add(&t_xi);
            row_mu.add(&t_mu);
        }
        du_dxi.row_mut(b).copy_from(&row_xi.value().transpose());
        du_dmu.row_mut(b).copy_from(&row_mu.value().transpose());
    }
    out.view_mut((q1, 0), (q2, q1)).copy_from(&du_dxi);
    out.view_mut((q1, q1), (q2, q2)).copy_from(&du_dmu);
    Ok(out)
}

/// Central-difference approximation of the differential.
pub fn dsexp_finite_difference<T: Real>(
    alg: &StepTwoAlgebra<T>,
    cov: &Covector<T>,
    cfg: &SeriesConfig<T>,
    step: T,
) -> Result<DMatrix<T>> {
    if !(step > T::zero()) {
        return Err(Error::Input("finite-difference step must be positive".into()));
    }
    let n = alg.dim();
    let base = cov.to_vector();
    let mut out = DMatrix::zeros(n, n);
    for col in 0..n {
        let mut plus = base.clone();
        let mut minus = base.clone();
        plus[col] += step;
        minus[col] -= step;
        let fp = sexp(alg, &Covector::from_vector(alg.q1(), &plus), cfg)?.to_vector();
        let fm = sexp(alg, &Covector::from_vector(alg.q1(), &minus), cfg)?.to_vector();
        out.set_column(col, &((fp - fm) / (lit::<T>(2.0) * step)));
    }
    Ok(out)
}

/// [`dsexp`] or its finite-difference oracle, per `mode`.
pub fn dsexp_with<T: Real>(
    alg: &StepTwoAlgebra<T>,
    cov: &Covector<T>,
    cfg: &SeriesConfig<T>,
    mode: DiffMode<T>,
) -> Result<DMatrix<T>> {
    match mode {
        DiffMode::Series => dsexp(alg, cov, cfg),
        DiffMode::FiniteDifference { step } => dsexp_finite_difference(alg, cov, cfg, step),
    }
}

/// `Jac(SExp)(ξ, μ) = det D SExp(ξ, μ)`.
pub fn jacobian<T: Real>(alg: &StepTwoAlgebra<T>, cov: &Covector<T>, cfg: &SeriesConfig<T>) -> Result<T> {
    Ok(dsexp(alg, cov, cfg)?.determinant())
}

/// [`jacobian`] evaluated in double-double arithmetic and rounded back.
///
/// The determinant of the differential loses roughly `log10(1/rcond)` digits in
/// `f64`; near-degenerate covectors of the larger groups can leave only a few
/// correct digits. Here the series, the product and the LU factorisation all
/// carry about 32 digits.
pub fn jacobian_extended(alg: &StepTwoAlgebra<f64>, cov: &Covector<f64>) -> Result<f64> {
    let ext: StepTwoAlgebra<DoubleDouble> = alg.cast();
    let cov = Covector::new(cov.xi.map(DoubleDouble::new), cov.mu.map(DoubleDouble::new));
    let cfg = SeriesConfig::new(lit(1e-30), 512)?;
    Ok(dsexp(&ext, &cov, &cfg)?.determinant().to_f64())
}

/// `ζ_λ(ξ, μ) = (ξ, λ μ)`.
pub fn zeta<T: Real>(lambda: T, cov: &Covector<T>) -> Covector<T> {
    Covector::new(cov.xi.clone(), &cov.mu * lambda)
}

/// `η_λ(ξ, μ) = (λ ξ, μ)`; `λ` must be nonzero.
pub fn eta<T: Real>(lambda: T, cov: &Covector<T>) -> Result<Covector<T>> {
    if lambda == T::zero() {
        return Err(Error::Input("eta requires a nonzero lambda".into()));
    }
    Ok(Covector::new(&cov.xi * lambda, cov.mu.clone()))
}

/// Group dilation `δ_λ(x, u) = (λ x, λ² u)`.
pub fn dilate<T: Real>(lambda: T, p: &GroupPoint<T>) -> GroupPoint<T> {
    GroupPoint::new(&p.x * lambda, &p.u * (lambda * lambda))
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::dvector;
    use std::f64::consts::PI;

    fn heis() -> StepTwoAlgebra<f64> {
        StepTwoAlgebra::from_brackets("h", 2, 1, &[(0, 1, vec![1.0])]).unwrap()
    }

    fn cov(xi: &[f64], mu: &[f64]) -> Covector<f64> {
        Covector::from_slices(xi, mu)
    }

    #[test]
    fn zero_mu_is_straight_line() {
        let h = heis();
        let g = sexp(&h, &cov(&[0.7, -1.2], &[0.0]), &SeriesConfig::default()).unwrap();
        assert_eq!(g.x, dvector![0.7, -1.2]);
        assert_eq!(g.u, dvector![0.0]);
    }

    #[test]
    fn heisenberg_closed_form_points() {
        let h = heis();
        let cfg = SeriesConfig::default();
        let g = sexp(&h, &cov(&[1.0, 0.0], &[PI]), &cfg).unwrap();
        assert!((g.x[0]).abs() < 1e-14);
        assert!((g.x[1] - 2.0 / PI).abs() < 1e-14);
        assert!((g.u[0] - 1.0 / (2.0 * PI)).abs() < 1e-13);

        let g = sexp(&h, &cov(&[1.0, 0.0], &[2.0 * PI]), &cfg).unwrap();
        assert!(g.x.norm() < 1e-14);
        assert!((g.u[0] - 1.0 / (4.0 * PI)).abs() < 1e-13);
    }

    #[test]
    fn bk_examples() {
        let h = heis();
        assert_eq!(bk(&h, &dvector![1.0], &dvector![1.0, 0.0], 0).unwrap(), dvector![0.0]);
        let b1 = bk(&h, &dvector![1.0], &dvector![1.0, 0.0], 1).unwrap();
        assert!((b1[0] - 1.0 / 12.0).abs() < 1e-16);
        for k in 1..6 {
            assert_eq!(bk(&h, &dvector![0.0], &dvector![0.3, 2.0], k).unwrap(), dvector![0.0]);
        }
    }

    #[test]
    fn sexp_u_equals_sum_of_bk() {
        let h = heis();
        let (xi, mu) = (dvector![0.4, -0.9], dvector![1.3]);
        let total: DVector<f64> = (1..60).map(|k| bk(&h, &mu, &xi, k).unwrap()).sum();
        let g = sexp(&h, &Covector::new(xi, mu), &SeriesConfig::default()).unwrap();
        assert!((g.u - total).norm() < 1e-15);
    }

    #[test]
    fn phi_branches_agree_at_switch() {
        let h = heis();
        let cfg = SeriesConfig::default();
        let xi = dvector![0.8, 0.3];
        // Just below and above the Taylor radius (‖J‖_F = √2 |μ|).
        for mu in [0.35, 0.3536, 0.3537, 0.36] {
            let j = h.j_matrix(&dvector![mu]);
            let s = phi_apply(&j, &xi, &cfg).unwrap();
            let (sn, cs) = (mu.sin() / mu, (1.0 - mu.cos()) / mu);
            let expect = dvector![sn * xi[0] - cs * xi[1], cs * xi[0] + sn * xi[1]];
            assert!((s - expect).norm() < 1e-15, "mu={mu}");
        }
    }

    #[test]
    fn dsexp_at_zero_mu_has_expected_blocks() {
        let h = heis();
        let d = dsexp(&h, &cov(&[1.0, 0.0], &[0.0]), &SeriesConfig::default()).unwrap();
        // V2 → V1 column is ½ J_Y ξ = (0, ½); V2 → V2 is (1/12)[ξ, J_Y ξ] = 1/12.
        let expect = DMatrix::from_row_slice(3, 3, &[1.0, 0.0, 0.0, 0.0, 1.0, 0.5, 0.0, 0.0, 1.0 / 12.0]);
        assert!((d - expect).norm() < 1e-16);
    }

    #[test]
    fn dsexp_matches_finite_differences() {
        let h = heis();
        let cfg = SeriesConfig::default();
        let c = cov(&[0.3, -1.1], &[1.7]);
        let a = dsexp(&h, &c, &cfg).unwrap();
        let b = dsexp_with(&h, &c, &cfg, DiffMode::FiniteDifference { step: 1e-5 }).unwrap();
        assert!((a - b).amax() < 1e-6);
    }

    #[test]
    fn xi_zero_kills_u_blocks() {
        let h = heis();
        let d = dsexp(&h, &cov(&[0.0, 0.0], &[2.3]), &SeriesConfig::default()).unwrap();
        assert_eq!(d.view((2, 0), (1, 3)).amax(), 0.0);
        assert_eq!(jacobian(&h, &cov(&[0.0, 0.0], &[2.3]), &SeriesConfig::default()).unwrap(), 0.0);
    }

    #[test]
    fn heisenberg_jacobian_values() {
        let h = heis();
        let cfg = SeriesConfig::default();
        let j0 = jacobian(&h, &cov(&[1.0, 0.0], &[0.0]), &cfg).unwrap();
        assert!((j0 - 1.0 / 12.0).abs() < 1e-16);
        let j2pi = jacobian(&h, &cov(&[1.0, 0.0], &[2.0 * PI]), &cfg).unwrap();
        assert!(j2pi.abs() < 1e-13);
    }

    #[test]
    fn dilation_maps() {
        let c = cov(&[1.0, 0.0], &[3.0]);
        assert_eq!(zeta(2.0, &c), cov(&[1.0, 0.0], &[6.0]));
        assert_eq!(zeta(1.0, &c), c);
        assert_eq!(eta(1.0, &c).unwrap(), c);
        assert!(matches!(eta(0.0, &c), Err(Error::Input(_))));
        let p = GroupPoint::new(dvector![1.0, 2.0], dvector![3.0]);
        assert_eq!(dilate(1.0, &p), p);
        assert_eq!(dilate(2.0, &p), GroupPoint::new(dvector![2.0, 4.0], dvector![12.0]));
    }

    #[test]
    fn convergence_error_when_cap_too_small() {
        let h = heis();
        let cfg = SeriesConfig { tol: 1e-14, max_terms: 8 };
        let err = sexp(&h, &cov(&[1.0, 0.0], &[40.0]), &cfg).unwrap_err();
        assert!(matches!(err, Error::Convergence { terms: 8, .. }));
        assert!(SeriesConfig::new(0.0, 100).is_err());
        assert!(SeriesConfig::new(1e-12, 4).is_err());
    }

    #[test]
    fn single_precision_sexp() {
        let h = StepTwoAlgebra::<f32>::from_brackets("h", 2, 1, &[(0, 1, vec![1.0])]).unwrap();
        let cfg = SeriesConfig { tol: 1e-7f32, max_terms: 64 };
        let g = sexp(&h, &Covector::from_slices(&[1.0f32, 0.0], &[std::f32::consts::PI]), &cfg).unwrap();
        assert!((g.u[0] - 1.0 / (2.0 * std::f32::consts::PI)).abs() < 1e-5);
    }
}
