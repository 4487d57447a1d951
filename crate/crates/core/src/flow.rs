//! Projector dynamics `Ṗ = [H, P]` on the Grassmannian.
//!
//! The solution through `P₀` is `P(t) = e^{tH} P₀ e^{−tH}`. [`exact_flow`]
//! evaluates it by conjugation; [`integrate_rk4`] integrates the commutator
//! ODE directly and never touches the exponential, so the two can check each
//! other. Distances are Frobenius norms of projector differences.

use crate::error::{Error, Result};
use crate::linalg::{expm, hermitian_eig, DEFAULT_EIG_TOL};
use crate::matrix::{commutator, ComplexMatrix};
use crate::types::{Frame, OrthoProjector, ProjectorDefects, UnitaryMatrix};

/// Maximum closure residual for which the restriction of `exp(H)` to `V₀` is
/// considered well defined.
pub const CLOSURE_TOL: f64 = 1e-6;
/// Constraint drift accepted on integrated samples.
pub const DRIFT_TOL: f64 = 1e-6;
const EXACT_FLOW_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FlowConfig {
    /// RK4 steps over `[0, 1]`.
    pub steps: usize,
    /// A sample is recorded every `stride` steps.
    pub stride: usize,
    /// Snap each recorded sample back onto the Grassmannian.
    pub retraction: bool,
}

impl FlowConfig {
    pub fn new(steps: usize, stride: usize, retraction: bool) -> Result<Self> {
        let cfg = Self {
            steps,
            stride,
            retraction,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.steps == 0 {
            return Err(Error::InvalidConfig("steps must be positive".into()));
        }
        if self.stride == 0 || self.steps % self.stride != 0 {
            return Err(Error::InvalidConfig(format!(
                "stride {} does not divide steps {}",
                self.stride, self.steps
            )));
        }
        Ok(())
    }

    pub fn sample_count(&self) -> usize {
        self.steps / self.stride + 1
    }
}

impl Default for FlowConfig {
    fn default() -> Self {
        Self {
            steps: 100,
            stride: 1,
            retraction: false,
        }
    }
}

/// Projector samples along `t ∈ [0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    times: Vec<f64>,
    samples: Vec<ComplexMatrix>,
    distances: Vec<f64>,
    rank: usize,
}

impl Trajectory {
    fn new(times: Vec<f64>, samples: Vec<ComplexMatrix>, rank: usize) -> Result<Self> {
        if samples.len() < 2 || times.len() != samples.len() {
            return Err(Error::InvalidConfig(format!(
                "trajectory needs at least two samples, got {}",
                samples.len()
            )));
        }
        if times[0] != 0.0 || times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidConfig("sample times must start at 0 and increase".into()));
        }
        let distances = samples.iter().map(|p| p.distance(&samples[0])).collect();
        Ok(Self {
            times,
            samples,
            distances,
            rank,
        })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn samples(&self) -> &[ComplexMatrix] {
        &self.samples
    }

    /// `‖P(t_j) − P(0)‖_F` per sample.
    pub fn distances(&self) -> &[f64] {
        &self.distances
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn defects(&self, j: usize) -> ProjectorDefects {
        ProjectorDefects::of(&self.samples[j], self.rank)
    }

    /// Checks every sample against the projector identities at `tol`.
    pub fn check_projectors(&self, tol: f64) -> Result<()> {
        for p in &self.samples {
            OrthoProjector::with_tolerance(p.clone(), self.rank, tol, tol)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryStats {
    pub max_distance: f64,
    /// Distance of the final sample from the first.
    pub closure: f64,
    pub max_idempotency_drift: f64,
    pub max_hermiticity_drift: f64,
    pub max_trace_drift: f64,
}

fn check_shapes(h: &ComplexMatrix, p0: &ComplexMatrix) -> Result<()> {
    if !h.is_square() || h.rows() != p0.rows() {
        return Err(Error::Shape(format!(
            "generator {}x{} against projector {}x{}",
            h.rows(),
            h.cols(),
            p0.rows(),
            p0.cols()
        )));
    }
    Ok(())
}

/// `e^{tH} P₀ e^{−tH}`.
pub fn exact_flow(h: &ComplexMatrix, p0: &OrthoProjector, t: f64) -> Result<OrthoProjector> {
    check_shapes(h, p0)?;
    if t == 0.0 {
        return Ok(p0.clone());
    }
    let forward = expm(&h.scale_real(t))?;
    let backward = expm(&h.scale_real(-t))?;
    let p = forward.matmul(p0).matmul(&backward);
    OrthoProjector::with_tolerance(p, p0.rank(), EXACT_FLOW_TOL, EXACT_FLOW_TOL)
}

/// Exact flow sampled at `t_j = j / intervals`, `j = 0..=intervals`.
pub fn sample_exact_flow(h: &ComplexMatrix, p0: &OrthoProjector, intervals: usize) -> Result<Trajectory> {
    if intervals == 0 {
        return Err(Error::InvalidConfig("at least one interval required".into()));
    }
    let times: Vec<f64> = (0..=intervals).map(|j| j as f64 / intervals as f64).collect();
    let samples = times
        .iter()
        .map(|&t| exact_flow(h, p0, t).map(OrthoProjector::into_matrix))
        .collect::<Result<Vec<_>>>()?;
    Trajectory::new(times, samples, p0.rank())
}

/// Classical fourth-order Runge–Kutta on `Ṗ = [H, P]` over `[0, 1]`.
///
/// Constraint drift is reported through [`trajectory_stats`], not raised.
pub fn integrate_rk4(h: &ComplexMatrix, p0: &OrthoProjector, cfg: &FlowConfig) -> Result<Trajectory> {
    check_shapes(h, p0)?;
    cfg.validate()?;
    let dt = 1.0 / cfg.steps as f64;
    let rhs = |p: &ComplexMatrix| commutator(h, p);

    let mut p: ComplexMatrix = (**p0).clone();
    let mut times = vec![0.0];
    let mut samples = vec![p.clone()];
    for step in 1..=cfg.steps {
        let k1 = rhs(&p)?;
        let mut y = p.clone();
        y.axpy(0.5 * dt, &k1);
        let k2 = rhs(&y)?;
        let mut y = p.clone();
        y.axpy(0.5 * dt, &k2);
        let k3 = rhs(&y)?;
        let mut y = p.clone();
        y.axpy(dt, &k3);
        let k4 = rhs(&y)?;

        p.axpy(dt / 6.0, &k1);
        p.axpy(dt / 3.0, &k2);
        p.axpy(dt / 3.0, &k3);
        p.axpy(dt / 6.0, &k4);

        if step % cfg.stride == 0 {
            if cfg.retraction {
                p = retract(&p)?;
            }
            times.push(step as f64 * dt);
            samples.push(p.clone());
        }
    }
    Trajectory::new(times, samples, p0.rank())
}

/// Nearest orthogonal projector: eigenvalues of the Hermitian part are snapped
/// to 1 when at least 1/2 and to 0 otherwise.
pub fn retract(p: &ComplexMatrix) -> Result<ComplexMatrix> {
    let (values, vectors) = hermitian_eig(&p.hermitian_part(), DEFAULT_EIG_TOL)?;
    let n = p.rows();
    let kept: Vec<usize> = (0..n).filter(|&k| values[k] >= 0.5).collect();
    if kept.is_empty() {
        return Ok(ComplexMatrix::zeros(n, n));
    }
    let mut basis = ComplexMatrix::zeros(n, kept.len());
    for (dst, &src) in kept.iter().enumerate() {
        basis.set_column(dst, &vectors.column(src));
    }
    Ok(basis.matmul(&basis.adjoint()))
}

/// `‖e^{H} P₀ e^{−H} − P₀‖_F`.
pub fn closure_residual(h: &ComplexMatrix, p0: &OrthoProjector) -> Result<f64> {
    check_shapes(h, p0)?;
    let forward = expm(h)?;
    let backward = expm(&-h)?;
    Ok(forward.matmul(p0).matmul(&backward).distance(p0))
}

/// The unitary `F₀† e^{H} F₀` that a closed loop induces on `range(F₀)`.
pub fn loop_monodromy(h: &ComplexMatrix, frame: &Frame) -> Result<UnitaryMatrix> {
    let residual = closure_residual(h, &frame.projector())?;
    if residual > CLOSURE_TOL {
        return Err(Error::LoopNotClosed { residual });
    }
    let restricted = frame.adjoint().matmul(&expm(h)?).matmul(frame);
    UnitaryMatrix::with_tolerance(restricted, 1e-9)
}

pub fn trajectory_stats(traj: &Trajectory) -> TrajectoryStats {
    let mut stats = TrajectoryStats {
        max_distance: 0.0,
        closure: *traj.distances.last().expect("trajectory has samples"),
        max_idempotency_drift: 0.0,
        max_hermiticity_drift: 0.0,
        max_trace_drift: 0.0,
    };
    for (j, &d) in traj.distances.iter().enumerate() {
        let defects = traj.defects(j);
        stats.max_distance = stats.max_distance.max(d);
        stats.max_idempotency_drift = stats.max_idempotency_drift.max(defects.idempotency);
        stats.max_hermiticity_drift = stats.max_hermiticity_drift.max(defects.hermiticity);
        stats.max_trace_drift = stats.max_trace_drift.max(defects.trace);
    }
    stats
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{I, ONE, ZERO};
    use num_complex::Complex64;
    use std::f64::consts::{FRAC_PI_4, PI, SQRT_2};

    fn ci(im: f64) -> Complex64 {
        Complex64::new(0.0, im)
    }

    fn reference_generator() -> ComplexMatrix {
        ComplexMatrix::from_rows(&[
            vec![ci(PI / 2.0), ZERO, ZERO],
            vec![ZERO, ci(2.0 * PI), ci(-PI)],
            vec![ZERO, ci(-PI), ci(2.0 * PI)],
        ])
        .unwrap()
    }

    fn reference_frame() -> Frame {
        Frame::new(ComplexMatrix::identity(3).column_block(0, 2)).unwrap()
    }

    /// Rotation generator in the (e₁, e₃) plane by `angle` at t = 1.
    fn plane_rotation(angle: f64) -> ComplexMatrix {
        let mut h = ComplexMatrix::zeros(3, 3);
        h[(2, 0)] = Complex64::new(angle, 0.0);
        h[(0, 2)] = Complex64::new(-angle, 0.0);
        h
    }

    #[test]
    fn config_validation() {
        assert!(FlowConfig::new(0, 1, false).is_err());
        assert!(FlowConfig::new(10, 3, false).is_err());
        assert!(FlowConfig::new(10, 0, false).is_err());
        assert_eq!(FlowConfig::new(200, 2, false).unwrap().sample_count(), 101);
    }

    #[test]
    fn exact_flow_at_zero_is_identity() {
        let p0 = reference_frame().projector();
        let p = exact_flow(&reference_generator(), &p0, 0.0).unwrap();
        assert_eq!(p, p0);
    }

    #[test]
    fn commuting_generator_is_stationary() {
        let p0 = reference_frame().projector();
        let h = ComplexMatrix::from_diag(&[ci(PI / 2.0), ci(PI), ci(PI)]);
        for t in [0.1, 0.5, 0.77, 1.0] {
            let p = exact_flow(&h, &p0, t).unwrap();
            assert!(p.distance(&p0) < 1e-12);
        }
    }

    #[test]
    fn reference_loop_closes_after_leaving() {
        let p0 = reference_frame().projector();
        let h = reference_generator();
        let half = exact_flow(&h, &p0, 0.5).unwrap();
        assert!(half.distance(&p0) > 0.5);
        let end = exact_flow(&h, &p0, 1.0).unwrap();
        assert!(end.distance(&p0) <= 1e-10);
    }

    #[test]
    fn rk4_zero_generator() {
        let p0 = reference_frame().projector();
        let traj = integrate_rk4(&ComplexMatrix::zeros(3, 3), &p0, &FlowConfig::default()).unwrap();
        let stats = trajectory_stats(&traj);
        assert_eq!(stats.max_distance, 0.0);
        assert_eq!(stats.max_idempotency_drift, 0.0);
        assert_eq!(stats.max_trace_drift, 0.0);
        assert_eq!(traj.len(), 101);
    }

    #[test]
    fn rk4_error_matches_leading_order_prediction() {
        // Only the 2π frequency between the eigenvalues iπ and 3iπ of Ω is
        // excited, with coupling amplitude 1/2 in both off-diagonal slots.
        // Global RK4 phase error on that mode is N (2π/N)^5 / 120.
        let p0 = reference_frame().projector();
        let h = reference_generator();
        let exact = sample_exact_flow(&h, &p0, 100).unwrap();
        let max_err = |steps: usize| {
            let cfg = FlowConfig::new(steps, steps / 100, false).unwrap();
            let traj = integrate_rk4(&h, &p0, &cfg).unwrap();
            traj.samples()
                .iter()
                .zip(exact.samples())
                .map(|(a, b)| a.distance(b))
                .fold(0.0, f64::max)
        };
        let predicted = |steps: usize| SQRT_2 * 0.5 * (2.0 * PI).powi(5) / (120.0 * (steps as f64).powi(4));
        for steps in [100, 200, 400] {
            let err = max_err(steps);
            assert!((err / predicted(steps) - 1.0).abs() < 0.02, "N={steps}: {err}");
        }
        let ratio = max_err(100) / max_err(200);
        assert!((12.0..=20.0).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn rk4_drift_without_retraction() {
        let p0 = reference_frame().projector();
        let cfg = FlowConfig::new(200, 2, false).unwrap();
        let traj = integrate_rk4(&reference_generator(), &p0, &cfg).unwrap();
        let stats = trajectory_stats(&traj);
        assert!(stats.max_idempotency_drift <= 1e-7);
        assert!(stats.max_trace_drift <= 1e-7);
        assert!(stats.max_hermiticity_drift <= 1e-10);
        traj.check_projectors(DRIFT_TOL).unwrap();
    }

    #[test]
    fn rk4_with_retraction_stays_on_grassmannian() {
        let p0 = reference_frame().projector();
        let cfg = FlowConfig::new(40, 4, true).unwrap();
        let traj = integrate_rk4(&reference_generator(), &p0, &cfg).unwrap();
        let stats = trajectory_stats(&traj);
        assert!(stats.max_idempotency_drift < 1e-13);
        assert!(stats.max_trace_drift < 1e-13);
    }

    #[test]
    fn retraction_snaps_perturbed_projector() {
        let mut p = ComplexMatrix::from_diag(&[ONE, ONE, ZERO]);
        p[(0, 0)] = Complex64::new(0.97, 0.0);
        p[(2, 2)] = Complex64::new(0.02, 0.0);
        let r = retract(&p).unwrap();
        assert!(r.distance(&ComplexMatrix::from_diag(&[ONE, ONE, ZERO])) < 1e-15);
    }

    #[test]
    fn closure_of_synthesizing_and_moving_generators() {
        let p0 = reference_frame().projector();
        assert!(closure_residual(&reference_generator(), &p0).unwrap() <= 1e-10);
        assert_eq!(closure_residual(&ComplexMatrix::zeros(3, 3), &p0).unwrap(), 0.0);

        let line = Frame::new(ComplexMatrix::identity(3).column_block(0, 1)).unwrap();
        let r = closure_residual(&plane_rotation(FRAC_PI_4), &line.projector()).unwrap();
        assert!((r - SQRT_2 * FRAC_PI_4.sin()).abs() < 1e-14);
    }

    #[test]
    fn monodromy_of_reference_loop() {
        let g = loop_monodromy(&reference_generator(), &reference_frame()).unwrap();
        assert!(g.distance(&ComplexMatrix::from_diag(&[I, -ONE])) < 1e-12);
        let id = loop_monodromy(&ComplexMatrix::zeros(3, 3), &reference_frame()).unwrap();
        assert_eq!(*id, ComplexMatrix::identity(2));
    }

    #[test]
    fn open_loop_has_no_monodromy() {
        let line = Frame::new(ComplexMatrix::identity(3).column_block(0, 1)).unwrap();
        assert!(matches!(
            loop_monodromy(&plane_rotation(FRAC_PI_4), &line),
            Err(Error::LoopNotClosed { .. })
        ));
    }

    #[test]
    fn stats_of_exact_reference_trajectory() {
        let p0 = reference_frame().projector();
        let traj = sample_exact_flow(&reference_generator(), &p0, 100).unwrap();
        assert_eq!(traj.len(), 101);
        let stats = trajectory_stats(&traj);
        assert!(stats.closure <= 1e-9);
        assert!(stats.max_distance > 0.5);
    }

    #[test]
    fn constant_trajectory_stats() {
        let p0 = reference_frame().projector();
        let h = ComplexMatrix::from_diag(&[ci(1.0), ci(2.0), ci(3.0)]);
        let traj = sample_exact_flow(&h, &p0, 10).unwrap();
        // e^{ia} e^{-ia} is 1 only up to roundoff.
        let stats = trajectory_stats(&traj);
        assert!(stats.max_distance < 1e-14);
        assert!(stats.closure < 1e-14);
        assert!(stats.max_idempotency_drift < 1e-14);
        assert_eq!(stats.max_hermiticity_drift, 0.0);
        assert!(stats.max_trace_drift < 1e-14);
    }

    #[test]
    fn shape_mismatch() {
        let p0 = reference_frame().projector();
        assert!(matches!(
            exact_flow(&ComplexMatrix::zeros(2, 2), &p0, 0.5),
            Err(Error::Shape(_))
        ));
    }
}
