//! Fixed-step RK4 integration of the normal geodesic equations in exponential
//! coordinates:
//!
//! ```text
//! x' = ξ,   u' = ½[x, ξ],   ξ' = J_μ ξ,   μ' = 0.
//! ```

use crate::algebra::{AlgebraElement, Covector, GroupPoint, StepTwoAlgebra};
use crate::error::{Error, Result};
use crate::scalar::{from_usize, lit, to_f64, Real};
use nalgebra::DVector;
use serde::Serialize;

/// One sample of a trajectory.
#[derive(Clone, Debug, PartialEq)]
pub struct FlowState<T: Real> {
    pub x: DVector<T>,
    pub u: DVector<T>,
    pub xi: DVector<T>,
    pub mu: DVector<T>,
}

impl<T: Real> FlowState<T> {
    pub fn point(&self) -> GroupPoint<T> {
        GroupPoint::new(self.x.clone(), self.u.clone())
    }

    pub fn covector(&self) -> Covector<T> {
        Covector::new(self.xi.clone(), self.mu.clone())
    }

    fn is_finite(&self) -> bool {
        [&self.x, &self.u, &self.xi, &self.mu]
            .iter()
            .all(|v| v.iter().all(|c| c.is_finite()))
    }
}

#[derive(Clone, Debug)]
pub struct Trajectory<T: Real> {
    pub times: Vec<T>,
    pub states: Vec<FlowState<T>>,
}

impl<T: Real> Trajectory<T> {
    pub fn endpoint(&self) -> &FlowState<T> {
        self.states.last().expect("trajectory has at least one state")
    }

    pub fn step(&self) -> T {
        self.times[1] - self.times[0]
    }
}

struct Deriv<T: Real> {
    x: DVector<T>,
    u: DVector<T>,
    xi: DVector<T>,
}

fn rhs<T: Real>(alg: &StepTwoAlgebra<T>, j: &nalgebra::DMatrix<T>, x: &DVector<T>, xi: &DVector<T>) -> Deriv<T> {
    Deriv {
        x: xi.clone(),
        u: alg.bracket_unchecked(x, xi) * lit::<T>(0.5),
        xi: j * xi,
    }
}

/// Integrates from the identity over `[0, t_end]`.
pub fn integrate<T: Real>(alg: &StepTwoAlgebra<T>, cov: &Covector<T>, t_end: T, h: T) -> Result<Trajectory<T>> {
    integrate_from(alg, &GroupPoint::identity(alg.q1(), alg.q2()), cov, t_end, h)
}

/// Integrates from `start` over `[0, t_end]` with `⌈t_end / h⌉` equal steps.
pub fn integrate_from<T: Real>(
    alg: &StepTwoAlgebra<T>,
    start: &GroupPoint<T>,
    cov: &Covector<T>,
    t_end: T,
    h: T,
) -> Result<Trajectory<T>> {
    alg.check_covector(cov)?;
    if start.x.len() != alg.q1() || start.u.len() != alg.q2() {
        return Err(Error::Input("initial point has the wrong dimensions".into()));
    }
    if !(h > T::zero()) || !(t_end > T::zero()) {
        return Err(Error::Input("step and end time must be positive".into()));
    }
    let steps = to_f64(t_end / h - lit(1e-9)).ceil().max(1.0) as usize;
    let dt = t_end / from_usize::<T>(steps);
    let j = alg.j_matrix(&cov.mu);
    let half = lit::<T>(0.5);
    let sixth = lit::<T>(1.0 / 6.0);
    let two = lit::<T>(2.0);

    let mut state = FlowState {
        x: start.x.clone(),
        u: start.u.clone(),
        xi: cov.xi.clone(),
        mu: cov.mu.clone(),
    };
    let mut times = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    times.push(T::zero());
    states.push(state.clone());
    for n in 1..=steps {
        let k1 = rhs(alg, &j, &state.x, &state.xi);
        let k2 = rhs(alg, &j, &(&state.x + &k1.x * (dt * half)), &(&state.xi + &k1.xi * (dt * half)));
        let k3 = rhs(alg, &j, &(&state.x + &k2.x * (dt * half)), &(&state.xi + &k2.xi * (dt * half)));
        let k4 = rhs(alg, &j, &(&state.x + &k3.x * dt), &(&state.xi + &k3.xi * dt));
        let w = dt * sixth;
        state.x += (k1.x + (k2.x + k3.x) * two + k4.x) * w;
        state.u += (k1.u + (k2.u + k3.u) * two + k4.u) * w;
        state.xi += (k1.xi + (k2.xi + k3.xi) * two + k4.xi) * w;
        let t = dt * from_usize::<T>(n);
        if !state.is_finite() {
            return Err(Error::Divergence { t: to_f64(t) });
        }
        times.push(t);
        states.push(state.clone());
    }
    Ok(Trajectory { times, states })
}

/// Maximum drifts of the conserved quantities along a trajectory.
#[derive(Clone, Debug, Serialize)]
pub struct ConservationReport {
    /// `max_t |‖ξ_t‖ − ‖ξ_0‖|`.
    pub speed_drift: f64,
    /// `max_t |½‖ξ_t‖² − ½‖ξ_0‖²|`.
    pub energy_drift: f64,
    pub mu_drift: f64,
    /// Drift of the right-trivialized covector `α(t) ∘ Ad_{g(t)^{-1}}`.
    pub momentum_drift: f64,
}

impl ConservationReport {
    pub fn max_drift(&self) -> f64 {
        self.speed_drift
            .max(self.energy_drift)
            .max(self.mu_drift)
            .max(self.momentum_drift)
    }
}

/// Right-trivialized covector at a state, componentwise in the basis `X_i, Y_a`.
///
/// Assumes the trajectory started at the identity.
pub fn right_momentum<T: Real>(alg: &StepTwoAlgebra<T>, state: &FlowState<T>) -> Result<DVector<T>> {
    let (q1, q2) = (alg.q1(), alg.q2());
    let g_inv = state.point().inverse();
    let alpha = state.covector();
    let mut out = DVector::zeros(q1 + q2);
    for i in 0..q1 + q2 {
        let mut v1 = DVector::zeros(q1);
        let mut v2 = DVector::zeros(q2);
        if i < q1 {
            v1[i] = T::one();
        } else {
            v2[i - q1] = T::one();
        }
        let ad = alg.adjoint(&g_inv, &AlgebraElement::new(v1, v2))?;
        out[i] = alpha.xi.dot(&ad.v1) + alpha.mu.dot(&ad.v2);
    }
    Ok(out)
}

pub fn check_conservation<T: Real>(alg: &StepTwoAlgebra<T>, traj: &Trajectory<T>) -> Result<ConservationReport> {
    let first = &traj.states[0];
    let speed0 = first.xi.norm();
    let energy0 = first.xi.norm_squared() * lit::<T>(0.5);
    let beta0 = right_momentum(alg, first)?;
    let mut report = ConservationReport {
        speed_drift: 0.0,
        energy_drift: 0.0,
        mu_drift: 0.0,
        momentum_drift: 0.0,
    };
    for s in &traj.states {
        let speed = s.xi.norm();
        report.speed_drift = report.speed_drift.max(to_f64((speed - speed0).abs()));
        let energy = s.xi.norm_squared() * lit::<T>(0.5);
        report.energy_drift = report.energy_drift.max(to_f64((energy - energy0).abs()));
        report.mu_drift = report.mu_drift.max(to_f64((&s.mu - &first.mu).amax()));
        let beta = right_momentum(alg, s)?;
        report.momentum_drift = report.momentum_drift.max(to_f64((beta - &beta0).amax()));
    }
    Ok(report)
}

/// Comparison of `g_{λ·cov}(1)` with `g_cov(λ)`.
#[derive(Clone, Debug, Serialize)]
pub struct SpeedSymmetryReport {
    pub lambda: f64,
    pub max_abs_diff: f64,
}

pub fn check_speed_symmetry<T: Real>(
    alg: &StepTwoAlgebra<T>,
    cov: &Covector<T>,
    lambda: T,
    h: T,
) -> Result<SpeedSymmetryReport> {
    if !(lambda > T::zero() && lambda <= T::one()) {
        return Err(Error::Input("speed symmetry needs lambda in (0, 1]".into()));
    }
    let scaled = integrate(alg, &cov.scaled(lambda), T::one(), h)?;
    let slow = integrate(alg, cov, lambda, h)?;
    let a = scaled.endpoint().point().to_vector();
    let b = slow.endpoint().point().to_vector();
    Ok(SpeedSymmetryReport {
        lambda: to_f64(lambda),
        max_abs_diff: to_f64((a - b).amax()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expmap::{sexp, SeriesConfig};
    use std::f64::consts::PI;

    fn heis() -> StepTwoAlgebra<f64> {
        StepTwoAlgebra::from_brackets("h", 2, 1, &[(0, 1, vec![1.0])]).unwrap()
    }

    #[test]
    fn straight_lines_are_exact() {
        let h = heis();
        let c = Covector::from_slices(&[0.3, -0.7], &[0.0]);
        let tr = integrate(&h, &c, 1.0, 0.1).unwrap();
        for (t, s) in tr.times.iter().zip(&tr.states) {
            assert!((&s.x - &c.xi * *t).amax() < 1e-15);
            assert!(s.u.amax() < 1e-16);
        }
        let r = check_conservation(&h, &tr).unwrap();
        assert!(r.max_drift() < 1e-15);
    }

    #[test]
    fn endpoint_matches_closed_form() {
        let h = heis();
        let c = Covector::from_slices(&[1.0, 0.0], &[1.0]);
        let tr = integrate(&h, &c, 1.0, 1e-3).unwrap();
        let p = sexp(&h, &c, &SeriesConfig::default()).unwrap();
        assert!((tr.endpoint().point().to_vector() - p.to_vector()).amax() < 1e-10);
        assert!((tr.endpoint().xi.norm() - 1.0).abs() < 1e-10);
        assert_eq!(tr.times.len(), 1001);
    }

    #[test]
    fn momentum_is_conserved_near_conjugate_time() {
        let h = heis();
        let c = Covector::from_slices(&[1.0, 0.0], &[PI]);
        let tr = integrate(&h, &c, 1.0, 1e-3).unwrap();
        assert!(check_conservation(&h, &tr).unwrap().momentum_drift < 1e-8);
    }

    #[test]
    fn speed_symmetry_half() {
        let h = heis();
        let c = Covector::from_slices(&[1.0, 0.0], &[1.0]);
        assert!(check_speed_symmetry(&h, &c, 0.5, 1e-3).unwrap().max_abs_diff < 1e-9);
        assert_eq!(check_speed_symmetry(&h, &c, 1.0, 1e-3).unwrap().max_abs_diff, 0.0);
    }

    #[test]
    fn left_translation() {
        let h = heis();
        let c = Covector::from_slices(&[0.4, 1.1], &[2.0]);
        let p = GroupPoint::new(DVector::from_vec(vec![0.5, -1.0]), DVector::from_vec(vec![0.3]));
        let base = integrate(&h, &c, 1.0, 1e-2).unwrap();
        let moved = integrate_from(&h, &p, &c, 1.0, 1e-2).unwrap();
        for (a, b) in base.states.iter().zip(&moved.states) {
            let expected = h.multiply(&p, &a.point());
            assert!((expected.to_vector() - b.point().to_vector()).amax() < 1e-9);
        }
    }

    #[test]
    fn bad_parameters() {
        let h = heis();
        let c = Covector::from_slices(&[1.0, 0.0], &[1.0]);
        assert!(integrate(&h, &c, 1.0, 0.0).is_err());
        assert!(integrate(&h, &c, -1.0, 0.1).is_err());
        assert!(check_speed_symmetry(&h, &c, 1.5, 0.1).is_err());
    }
}
