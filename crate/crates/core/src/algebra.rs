//! Step-two stratified Lie algebras given by structure constants.
//!
//! The algebra is `g = V1 ⊕ V2` with declared orthonormal bases `{X_i}` of `V1`
//! and `{Y_a}` of `V2`, and brackets `[X_i, X_j] = Σ_a c[i][j][a] Y_a`. All other
//! brackets vanish. Covectors are identified with vectors through the declared
//! scalar product, so a covector is a pair `(ξ, μ) ∈ V1 ⊕ V2`.

use crate::error::{dim_check, Error, Result};
use crate::scalar::{lit, max_abs, Real};
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Relative tolerance for structural residual checks.
pub const STRUCTURE_TOL: f64 = 1e-12;

/// Raw structure tensor `c[i][j][a]`, possibly violating the step-two invariants.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureTensor<T: Real> {
    q1: usize,
    q2: usize,
    data: Vec<T>,
}

impl<T: Real> StructureTensor<T> {
    pub fn zeros(q1: usize, q2: usize) -> Self {
        Self {
            q1,
            q2,
            data: vec![T::zero(); q1 * q1 * q2],
        }
    }

    /// Builds the tensor from its `i < j` entries (0-based), completing it by antisymmetry.
    pub fn from_upper(q1: usize, q2: usize, brackets: &[(usize, usize, Vec<T>)]) -> Result<Self> {
        let mut t = Self::zeros(q1, q2);
        for (i, j, coeffs) in brackets {
            let (i, j) = (*i, *j);
            if i >= j || j >= q1 {
                return Err(Error::Input(format!(
                    "bracket indices must satisfy i < j < {q1} (0-based), got ({i}, {j})"
                )));
            }
            dim_check("bracket coefficients", q2, coeffs.len())?;
            for (a, &c) in coeffs.iter().enumerate() {
                if !c.is_finite() {
                    return Err(Error::Input(format!("non-finite coefficient at ({i}, {j}, {a})")));
                }
                t.set(i, j, a, c);
                t.set(j, i, a, -c);
            }
        }
        Ok(t)
    }

    #[inline]
    fn index(&self, i: usize, j: usize, a: usize) -> usize {
        (i * self.q1 + j) * self.q2 + a
    }

    pub fn get(&self, i: usize, j: usize, a: usize) -> T {
        self.data[self.index(i, j, a)]
    }

    pub fn set(&mut self, i: usize, j: usize, a: usize, value: T) {
        let idx = self.index(i, j, a);
        self.data[idx] = value;
    }

    pub fn q1(&self) -> usize {
        self.q1
    }

    pub fn q2(&self) -> usize {
        self.q2
    }

    /// Checks skew-symmetry and the bracket-generating condition.
    pub fn validate(&self) -> Diagnostics {
        let (q1, q2) = (self.q1, self.q2);
        let scale = self.data.iter().fold(T::zero(), |m, v| m.max(v.abs()));
        let tol = lit::<T>(STRUCTURE_TOL) * scale;

        let mut violations = Vec::new();
        let mut skew_residual = T::zero();
        let mut worst: Option<(usize, usize, usize)> = None;
        for i in 0..q1 {
            for j in i..q1 {
                for a in 0..q2 {
                    let r = (self.get(i, j, a) + self.get(j, i, a)).abs();
                    if r > skew_residual {
                        skew_residual = r;
                        worst = Some((i, j, a));
                    }
                }
            }
        }
        if skew_residual > tol {
            let (i, j, a) = worst.expect("residual positive implies witness");
            violations.push(Violation::NotSkewSymmetric {
                i: i + 1,
                j: j + 1,
                a: a + 1,
                residual: crate::scalar::to_f64(skew_residual),
            });
        }

        let bracket_rank = self.bracket_rank();
        if bracket_rank < q2 {
            violations.push(Violation::NotBracketGenerating { rank: bracket_rank, q2 });
        }
        if q1 == 0 || q2 == 0 {
            violations.push(Violation::EmptyLayer { q1, q2 });
        }

        Diagnostics {
            skew_residual: crate::scalar::to_f64(skew_residual),
            bracket_rank,
            n: q1 + q2,
            homogeneous_dim: q1 + 2 * q2,
            violations,
        }
    }

    /// Rank of the `q2 × q1(q1-1)/2` matrix with columns `c[i][j][·]`, `i < j`.
    fn bracket_rank(&self) -> usize {
        let pairs: Vec<(usize, usize)> = (0..self.q1)
            .flat_map(|i| ((i + 1)..self.q1).map(move |j| (i, j)))
            .collect();
        if pairs.is_empty() || self.q2 == 0 {
            return 0;
        }
        let m = DMatrix::from_fn(self.q2, pairs.len(), |a, p| {
            let (i, j) = pairs[p];
            self.get(i, j, a)
        });
        numerical_rank(&m, lit(STRUCTURE_TOL))
    }
}

/// Number of singular values above `rel_tol` times the largest one.
pub(crate) fn numerical_rank<T: Real>(m: &DMatrix<T>, rel_tol: T) -> usize {
    if m.is_empty() {
        return 0;
    }
    let sv = m.clone().singular_values();
    let top = sv.iter().fold(T::zero(), |acc, v| acc.max(*v));
    if top == T::zero() {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_tol * top).count()
}

/// A violated structural invariant, with 1-based witness indices.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    NotSkewSymmetric { i: usize, j: usize, a: usize, residual: f64 },
    NotBracketGenerating { rank: usize, q2: usize },
    EmptyLayer { q1: usize, q2: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotSkewSymmetric { i, j, a, residual } => write!(
                f,
                "skew-symmetry fails at ({i},{j},{a}): |c[i][j][a] + c[j][i][a]| = {residual:e}"
            ),
            Violation::NotBracketGenerating { rank, q2 } => {
                write!(f, "not bracket-generating: bracket rank {rank} < {q2}")
            }
            Violation::EmptyLayer { q1, q2 } => write!(f, "empty layer: q1={q1}, q2={q2}"),
        }
    }
}

/// Outcome of [`StructureTensor::validate`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Diagnostics {
    pub skew_residual: f64,
    pub bracket_rank: usize,
    pub n: usize,
    #[serde(rename = "Q")]
    pub homogeneous_dim: usize,
    pub violations: Vec<Violation>,
}

impl Diagnostics {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// A validated step-two stratified Lie algebra. Immutable after construction.
#[derive(Clone, Debug)]
pub struct StepTwoAlgebra<T: Real> {
    name: String,
    tensor: StructureTensor<T>,
    /// `layers[a]` is the antisymmetric matrix `(c[i][j][a])_{ij}`.
    layers: Vec<DMatrix<T>>,
    bracket_norm: T,
}

impl<T: Real> StepTwoAlgebra<T> {
    /// Validates `tensor` and wraps it.
    pub fn new(name: impl Into<String>, tensor: StructureTensor<T>) -> Result<Self> {
        let diag = tensor.validate();
        if let Some(v) = diag.violations.first() {
            return Err(Error::InvalidAlgebra(v.to_string()));
        }
        let (q1, q2) = (tensor.q1, tensor.q2);
        let layers: Vec<DMatrix<T>> = (0..q2)
            .map(|a| DMatrix::from_fn(q1, q1, |i, j| tensor.get(i, j, a)))
            .collect();
        let flat = DMatrix::from_fn(q2, q1 * q1, |a, ij| tensor.get(ij / q1, ij % q1, a));
        let bracket_norm = flat
            .singular_values()
            .iter()
            .fold(T::zero(), |acc, v| acc.max(*v));
        Ok(Self {
            name: name.into(),
            tensor,
            layers,
            bracket_norm,
        })
    }

    /// Convenience constructor from `i < j` brackets (0-based indices).
    pub fn from_brackets(
        name: impl Into<String>,
        q1: usize,
        q2: usize,
        brackets: &[(usize, usize, Vec<T>)],
    ) -> Result<Self> {
        Self::new(name, StructureTensor::from_upper(q1, q2, brackets)?)
    }

    /// The same algebra over another scalar type.
    pub fn cast<U: Real>(&self) -> StepTwoAlgebra<U> {
        let (q1, q2) = (self.q1(), self.q2());
        let mut t = StructureTensor::<U>::zeros(q1, q2);
        for i in 0..q1 {
            for j in 0..q1 {
                for a in 0..q2 {
                    t.set(i, j, a, crate::scalar::lit(crate::scalar::to_f64(self.tensor.get(i, j, a))));
                }
            }
        }
        StepTwoAlgebra::new(self.name.clone(), t).expect("a valid tensor stays valid under a cast")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn q1(&self) -> usize {
        self.tensor.q1
    }

    pub fn q2(&self) -> usize {
        self.tensor.q2
    }

    /// Topological dimension `n = q1 + q2`.
    pub fn dim(&self) -> usize {
        self.q1() + self.q2()
    }

    /// Homogeneous dimension `Q = q1 + 2 q2`.
    pub fn homogeneous_dim(&self) -> usize {
        self.q1() + 2 * self.q2()
    }

    pub fn tensor(&self) -> &StructureTensor<T> {
        &self.tensor
    }

    pub fn diagnostics(&self) -> Diagnostics {
        self.tensor.validate()
    }

    /// Constant `C` with `‖[x, y]‖ ≤ C ‖x‖ ‖y‖`.
    pub fn bracket_norm(&self) -> T {
        self.bracket_norm
    }

    /// The matrix `(c[i][j][a])_{ij}` of the `a`-th bracket component.
    pub fn layer(&self, a: usize) -> &DMatrix<T> {
        &self.layers[a]
    }

    /// `[v, w] = Σ_{i,j} v_i w_j c[i][j][·]`.
    pub fn bracket(&self, v: &DVector<T>, w: &DVector<T>) -> Result<DVector<T>> {
        dim_check("bracket lhs", self.q1(), v.len())?;
        dim_check("bracket rhs", self.q1(), w.len())?;
        Ok(self.bracket_unchecked(v, w))
    }

    pub(crate) fn bracket_unchecked(&self, v: &DVector<T>, w: &DVector<T>) -> DVector<T> {
        DVector::from_iterator(self.q2(), self.layers.iter().map(|c| v.dot(&(c * w))))
    }

    /// The skew map `J_μ` with `⟨J_μ v, w⟩ = ⟨μ, [v, w]⟩`.
    pub fn j_map(&self, mu: &DVector<T>) -> Result<SkewMap<T>> {
        dim_check("mu", self.q2(), mu.len())?;
        Ok(SkewMap(self.j_matrix(mu)))
    }

    /// `J_μ = -Σ_a μ_a C_a`, accumulated in increasing `a`.
    pub(crate) fn j_matrix(&self, mu: &DVector<T>) -> DMatrix<T> {
        let q1 = self.q1();
        let mut m = DMatrix::zeros(q1, q1);
        for (c, &w) in self.layers.iter().zip(mu.iter()) {
            if w != T::zero() {
                m -= c * w;
            }
        }
        m
    }

    /// `Ad_g(v1 + v2) = v1 + v2 + [x, v1]` for `g = (x, u)`.
    pub fn adjoint(&self, g: &GroupPoint<T>, v: &AlgebraElement<T>) -> Result<AlgebraElement<T>> {
        dim_check("group point x", self.q1(), g.x.len())?;
        dim_check("element v1", self.q1(), v.v1.len())?;
        dim_check("element v2", self.q2(), v.v2.len())?;
        Ok(AlgebraElement {
            v1: v.v1.clone(),
            v2: &v.v2 + self.bracket_unchecked(&g.x, &v.v1),
        })
    }

    /// Group law `a * b = a + b + ½[a, b]` in exponential coordinates.
    pub fn multiply(&self, a: &GroupPoint<T>, b: &GroupPoint<T>) -> GroupPoint<T> {
        let half = lit::<T>(0.5);
        GroupPoint {
            x: &a.x + &b.x,
            u: &a.u + &b.u + self.bracket_unchecked(&a.x, &b.x) * half,
        }
    }

    /// Gram matrix on `V2` of the Hilbert–Schmidt normalization.
    ///
    /// Computes `H*_{ab} = trace(J_{Y_a} J_{Y_b}ᵀ)` in the declared coordinates and
    /// returns its inverse. Never applied implicitly.
    pub fn hs_metric(&self) -> Result<DMatrix<T>> {
        let q2 = self.q2();
        let h = DMatrix::from_fn(q2, q2, |a, b| self.layers[a].dot(&self.layers[b]));
        h.try_inverse()
            .ok_or_else(|| Error::Internal("Hilbert–Schmidt Gram matrix is singular".into()))
    }

    pub fn zero_covector(&self) -> Covector<T> {
        Covector::new(DVector::zeros(self.q1()), DVector::zeros(self.q2()))
    }

    pub fn check_covector(&self, cov: &Covector<T>) -> Result<()> {
        dim_check("xi", self.q1(), cov.xi.len())?;
        dim_check("mu", self.q2(), cov.mu.len())?;
        if !cov.xi.iter().chain(cov.mu.iter()).all(|v| v.is_finite()) {
            return Err(Error::Input("covector has non-finite entries".into()));
        }
        Ok(())
    }
}

/// Skew-symmetric endomorphism of `V1`.
#[derive(Clone, Debug, PartialEq)]
pub struct SkewMap<T: Real>(DMatrix<T>);

impl<T: Real> SkewMap<T> {
    /// Wraps `m` after checking `mᵀ = -m` up to `1e-12 · max|entry|`.
    pub fn new(m: DMatrix<T>) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::Input("skew map must be square".into()));
        }
        let tol = lit::<T>(STRUCTURE_TOL) * max_abs(&m);
        let resid = max_abs(&(&m + m.transpose()));
        if resid > tol {
            return Err(Error::Input(format!("matrix is not skew-symmetric (residual {resid})")));
        }
        Ok(Self(m))
    }

    pub fn matrix(&self) -> &DMatrix<T> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<T> {
        self.0
    }

    pub fn apply(&self, v: &DVector<T>) -> DVector<T> {
        &self.0 * v
    }
}

/// Covector `(ξ, μ) ∈ V1 ⊕ V2`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: Deserialize<'de>"))]
pub struct Covector<T: Real> {
    #[serde(with = "dvec_serde")]
    pub xi: DVector<T>,
    #[serde(with = "dvec_serde")]
    pub mu: DVector<T>,
}

impl<T: Real> Covector<T> {
    pub fn new(xi: DVector<T>, mu: DVector<T>) -> Self {
        Self { xi, mu }
    }

    pub fn from_slices(xi: &[T], mu: &[T]) -> Self {
        Self::new(DVector::from_column_slice(xi), DVector::from_column_slice(mu))
    }

    /// The covector `s·(ξ, μ)`.
    pub fn scaled(&self, s: T) -> Self {
        Self::new(&self.xi * s, &self.mu * s)
    }

    /// Stacked coordinates `(ξ, μ)`.
    pub fn to_vector(&self) -> DVector<T> {
        let mut v = DVector::zeros(self.xi.len() + self.mu.len());
        v.rows_mut(0, self.xi.len()).copy_from(&self.xi);
        v.rows_mut(self.xi.len(), self.mu.len()).copy_from(&self.mu);
        v
    }

    pub fn from_vector(q1: usize, v: &DVector<T>) -> Self {
        let q2 = v.len() - q1;
        Self::new(v.rows(0, q1).into_owned(), v.rows(q1, q2).into_owned())
    }

    pub fn norm(&self) -> T {
        (self.xi.norm_squared() + self.mu.norm_squared()).sqrt()
    }
}

/// Group element in exponential coordinates `(x, u) ∈ V1 ⊕ V2`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: Deserialize<'de>"))]
pub struct GroupPoint<T: Real> {
    #[serde(with = "dvec_serde")]
    pub x: DVector<T>,
    #[serde(with = "dvec_serde")]
    pub u: DVector<T>,
}

impl<T: Real> GroupPoint<T> {
    pub fn new(x: DVector<T>, u: DVector<T>) -> Self {
        Self { x, u }
    }

    pub fn identity(q1: usize, q2: usize) -> Self {
        Self::new(DVector::zeros(q1), DVector::zeros(q2))
    }

    /// `g^{-1} = -g`.
    pub fn inverse(&self) -> Self {
        Self::new(-&self.x, -&self.u)
    }

    pub fn to_vector(&self) -> DVector<T> {
        let mut v = DVector::zeros(self.x.len() + self.u.len());
        v.rows_mut(0, self.x.len()).copy_from(&self.x);
        v.rows_mut(self.x.len(), self.u.len()).copy_from(&self.u);
        v
    }
}

/// Lie algebra element `v1 + v2`.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraElement<T: Real> {
    pub v1: DVector<T>,
    pub v2: DVector<T>,
}

impl<T: Real> AlgebraElement<T> {
    pub fn new(v1: DVector<T>, v2: DVector<T>) -> Self {
        Self { v1, v2 }
    }
}

pub(crate) mod dvec_serde {
    use nalgebra::DVector;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S, T>(v: &DVector<T>, s: S) -> Result<S::Ok, S::Error>
    where
        S: Serializer,
        T: Serialize + nalgebra::Scalar,
    {
        v.as_slice().serialize(s)
    }

    pub fn deserialize<'de, D, T>(d: D) -> Result<DVector<T>, D::Error>
    where
        D: Deserializer<'de>,
        T: Deserialize<'de> + nalgebra::Scalar,
    {
        let v = Vec::<T>::deserialize(d)?;
        Ok(DVector::from_vec(v))
    }
}

/// One bracket line of a group spec file (1-based indices, `i < j`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BracketEntry {
    pub i: usize,
    pub j: usize,
    pub coeffs: Vec<f64>,
}

/// On-disk JSON description of a step-two algebra.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupSpec {
    pub name: String,
    pub v1_dim: usize,
    pub v2_dim: usize,
    pub brackets: Vec<BracketEntry>,
}

impl GroupSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Input(format!("group spec: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("group spec serializes")
    }

    pub fn to_algebra<T: Real>(&self) -> Result<StepTwoAlgebra<T>> {
        let mut entries = Vec::with_capacity(self.brackets.len());
        let mut seen = std::collections::BTreeSet::new();
        for b in &self.brackets {
            if b.i == 0 || b.j == 0 {
                return Err(Error::Input("bracket indices are 1-based".into()));
            }
            if b.i >= b.j {
                return Err(Error::Input(format!("bracket ({}, {}) must have i < j", b.i, b.j)));
            }
            if !seen.insert((b.i, b.j)) {
                return Err(Error::Input(format!("bracket ({}, {}) listed twice", b.i, b.j)));
            }
            entries.push((b.i - 1, b.j - 1, b.coeffs.iter().map(|&c| lit::<T>(c)).collect()));
        }
        StepTwoAlgebra::from_brackets(self.name.clone(), self.v1_dim, self.v2_dim, &entries)
    }

    /// Lists every nonzero `i < j` bracket of `alg`.
    pub fn from_algebra<T: Real>(alg: &StepTwoAlgebra<T>) -> Self {
        let mut brackets = Vec::new();
        for i in 0..alg.q1() {
            for j in (i + 1)..alg.q1() {
                let coeffs: Vec<f64> = (0..alg.q2())
                    .map(|a| crate::scalar::to_f64(alg.tensor.get(i, j, a)))
                    .collect();
                if coeffs.iter().any(|&c| c != 0.0) {
                    brackets.push(BracketEntry {
                        i: i + 1,
                        j: j + 1,
                        coeffs,
                    });
                }
            }
        }
        Self {
            name: alg.name().to_string(),
            v1_dim: alg.q1(),
            v2_dim: alg.q2(),
            brackets,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::dvector;

    fn heisenberg() -> StepTwoAlgebra<f64> {
        StepTwoAlgebra::from_brackets("heisenberg", 2, 1, &[(0, 1, vec![1.0])]).unwrap()
    }

    #[test]
    fn heisenberg_bracket_and_j() {
        let h = heisenberg();
        let y = h.bracket(&dvector![1.0, 0.0], &dvector![0.0, 1.0]).unwrap();
        assert_eq!(y, dvector![1.0]);
        let j = h.j_map(&dvector![2.5]).unwrap();
        assert_eq!(j.matrix(), &DMatrix::from_row_slice(2, 2, &[0.0, -2.5, 2.5, 0.0]));
        let zero = h.j_map(&dvector![0.0]).unwrap();
        assert_eq!(zero.matrix(), &DMatrix::zeros(2, 2));
    }

    #[test]
    fn bracket_of_vector_with_itself_vanishes() {
        let h = heisenberg();
        let v = dvector![0.3, -1.7];
        assert_eq!(h.bracket(&v, &v).unwrap(), dvector![0.0]);
    }

    #[test]
    fn dimension_mismatch_is_input_error() {
        let h = heisenberg();
        assert!(matches!(
            h.bracket(&dvector![1.0], &dvector![0.0, 1.0]),
            Err(Error::Input(_))
        ));
        assert!(matches!(h.j_map(&dvector![1.0, 2.0]), Err(Error::Input(_))));
    }

    #[test]
    fn validate_reports_n_and_q() {
        let d = heisenberg().diagnostics();
        assert!(d.is_valid());
        assert_eq!((d.n, d.homogeneous_dim, d.bracket_rank), (3, 4, 1));
    }

    #[test]
    fn validate_detects_symmetric_entry() {
        let mut t = StructureTensor::<f64>::zeros(2, 1);
        t.set(0, 1, 0, 1.0);
        t.set(1, 0, 0, 1.0);
        let d = t.validate();
        assert_eq!(
            d.violations[0],
            Violation::NotSkewSymmetric { i: 1, j: 2, a: 1, residual: 2.0 }
        );
        assert!(StepTwoAlgebra::new("bad", t).is_err());
    }

    #[test]
    fn validate_detects_rank_deficiency() {
        let t = StructureTensor::from_upper(
            3,
            2,
            &[(0, 1, vec![1.0, 0.0]), (0, 2, vec![2.0, 0.0]), (1, 2, vec![-1.0, 0.0])],
        )
        .unwrap();
        let d = t.validate();
        assert_eq!(d.violations, vec![Violation::NotBracketGenerating { rank: 1, q2: 2 }]);
    }

    #[test]
    fn adjoint_examples() {
        let h = heisenberg();
        let v = AlgebraElement::new(dvector![0.0, 1.0], dvector![0.0]);
        let e = GroupPoint::identity(2, 1);
        assert_eq!(h.adjoint(&e, &v).unwrap(), v);
        let g = GroupPoint::new(dvector![1.0, 0.0], dvector![0.0]);
        let w = h.adjoint(&g, &v).unwrap();
        assert_eq!(w, AlgebraElement::new(dvector![0.0, 1.0], dvector![1.0]));
        let central = AlgebraElement::new(dvector![0.0, 0.0], dvector![3.0]);
        assert_eq!(h.adjoint(&g, &central).unwrap(), central);
    }

    #[test]
    fn hs_metric_heisenberg_and_fixed_point() {
        let h = heisenberg();
        let g = h.hs_metric().unwrap();
        assert!((g[(0, 0)] - 0.5).abs() < 1e-15);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let normalized = StepTwoAlgebra::from_brackets("hs", 2, 1, &[(0, 1, vec![s])]).unwrap();
        assert!((normalized.hs_metric().unwrap()[(0, 0)] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn group_spec_round_trip_and_errors() {
        let spec = GroupSpec::from_algebra(&heisenberg());
        assert_eq!(spec.brackets, vec![BracketEntry { i: 1, j: 2, coeffs: vec![1.0] }]);
        let back: StepTwoAlgebra<f64> = GroupSpec::from_json(&spec.to_json()).unwrap().to_algebra().unwrap();
        assert_eq!(back.tensor(), heisenberg().tensor());

        let bad = r#"{"name":"x","v1_dim":2,"v2_dim":1,"brackets":[{"i":2,"j":1,"coeffs":[1.0]}]}"#;
        assert!(GroupSpec::from_json(bad).unwrap().to_algebra::<f64>().is_err());
        let zero_based = r#"{"name":"x","v1_dim":2,"v2_dim":1,"brackets":[{"i":0,"j":1,"coeffs":[1.0]}]}"#;
        assert!(GroupSpec::from_json(zero_based).unwrap().to_algebra::<f64>().is_err());
    }

    #[test]
    fn skew_map_rejects_symmetric_matrix() {
        assert!(SkewMap::new(DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0])).is_err());
        assert!(SkewMap::new(DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0])).is_ok());
    }

    #[test]
    fn works_in_single_precision() {
        let h = StepTwoAlgebra::<f32>::from_brackets("h", 2, 1, &[(0, 1, vec![1.0])]).unwrap();
        let y = h.bracket(&dvector![1.0f32, 0.0], &dvector![0.0f32, 1.0]).unwrap();
        assert_eq!(y[0], 1.0f32);
    }
}
