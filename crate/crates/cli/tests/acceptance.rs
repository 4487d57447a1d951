//! Acceptance suite. Each test prints one `[PASS]`/`[FAIL]` line; run with
//! `cargo test -p holonomy-cli --test acceptance -- --nocapture --test-threads 1`
//! to see them in order.

use std::f64::consts::{PI, SQRT_2};
use std::path::{Path, PathBuf};
use std::process::Command;

use holonomy_core::flow::{closure_residual, integrate_rk4, sample_exact_flow, trajectory_stats, FlowConfig};
use holonomy_core::linalg::{expm, expm_spectral, generator_spectrum, unitary_eig, DEFAULT_GROUP_TOL};
use holonomy_core::random::{random_frame, random_skew_hermitian, random_unitary, skew_spectral_norm, unitary_with_phases};
use holonomy_core::synth::{nontriviality_certificate, synthesize, BoundaryProblem, SynthesisParams, SynthesisResult};
use holonomy_core::{commutator, Complex64, ComplexMatrix, Frame, UnitaryMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SWEEP_SEED: u64 = 0x5eed_0001;
const SWEEP_SIZE: usize = 100;

fn verdict(id: u32, name: &str, pass: bool, detail: String) {
    let tag = if pass { "PASS" } else { "FAIL" };
    println!("[{tag}] criterion {id} ({name}): {detail}");
    assert!(pass, "criterion {id} ({name}) failed: {detail}");
}

struct Instance {
    prob: BoundaryProblem,
    params: SynthesisParams,
    result: SynthesisResult,
}

fn random_instance(rng: &mut ChaCha8Rng, winding: i64) -> Instance {
    let n = rng.gen_range(3..=16);
    let m = rng.gen_range(1..n);
    let frame = random_frame(n, m, rng);
    let g0 = random_unitary(m, rng);
    let prob = BoundaryProblem::new(frame, g0).unwrap();
    let params = SynthesisParams::new(random_unitary(2, rng).into_matrix(), winding).unwrap();
    let result = synthesize(&prob, &params).unwrap();
    Instance { prob, params, result }
}

/// The shared random sweep used by the monodromy, commutator and closure
/// criteria.
fn sweep() -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(SWEEP_SEED);
    (0..SWEEP_SIZE)
        .map(|_| {
            let w = rng.gen_range(-3..=3);
            random_instance(&mut rng, w)
        })
        .collect()
}

/// `A = diag(1, …, 1, 0, …, 0)` with `m` ones.
fn block_projector(n: usize, m: usize) -> ComplexMatrix {
    let diag: Vec<Complex64> = (0..n).map(|k| Complex64::new(if k < m { 1.0 } else { 0.0 }, 0.0)).collect();
    ComplexMatrix::from_diag(&diag)
}

fn block_commutator_norm(inst: &Instance) -> f64 {
    let h = &inst.result.block_generator;
    let a = block_projector(inst.prob.ambient_dim(), inst.prob.rank());
    commutator(h, &a).unwrap().frobenius_norm()
}

fn ci(x: f64) -> Complex64 {
    Complex64::new(0.0, x)
}

fn reference_problem() -> BoundaryProblem {
    let frame = Frame::new(ComplexMatrix::identity(3).column_block(0, 2)).unwrap();
    let g0 = UnitaryMatrix::new(ComplexMatrix::from_diag(&[ci(1.0), Complex64::new(-1.0, 0.0)])).unwrap();
    BoundaryProblem::new(frame, g0).unwrap()
}

fn reference_params(winding: i64) -> SynthesisParams {
    SynthesisParams::new(UnitaryMatrix::rotation(PI / 4.0).into_matrix(), winding)
        .unwrap()
        .with_pivot(2)
}

#[test]
fn criterion_1_monodromy_identity() {
    let tol = 1e-9;
    let mut worst_proj = 0.0f64;
    let mut worst_restr = 0.0f64;
    for inst in sweep() {
        // Independent evaluation with the Taylor oracle.
        let h = inst.result.generator.as_ref();
        let fwd = expm(h).unwrap();
        let bwd = expm(&-h).unwrap();
        let p0 = inst.prob.frame().projector();
        let proj = fwd.matmul(&p0).matmul(&bwd).distance(&p0);
        let f0 = &**inst.prob.frame();
        let restr = f0.adjoint().matmul(&fwd).matmul(f0).distance(inst.prob.g0());
        worst_proj = worst_proj.max(proj);
        worst_restr = worst_restr.max(restr);
    }
    verdict(
        1,
        "monodromy identity",
        worst_proj <= tol && worst_restr <= tol,
        format!("{SWEEP_SIZE} instances, max projector residual {worst_proj:.3e}, max restriction residual {worst_restr:.3e} (tol {tol:e})"),
    );
}

#[test]
fn criterion_2_commutator_criterion() {
    let tol = 1e-10;
    let zero_tol = 1e-12;
    let mut worst = 0.0f64;
    for inst in sweep() {
        let predicted = SQRT_2 * 2.0 * PI * (inst.params.winding() as f64).abs()
            * inst.params.omega()[(0, 0)].norm()
            * inst.params.omega()[(1, 0)].norm();
        let measured = block_commutator_norm(&inst);
        assert!((nontriviality_certificate(&inst.params).commutator_norm - predicted).abs() <= 1e-12);
        worst = worst.max((measured - predicted).abs());
    }

    // Degenerate families: w = 0, diagonal ω, antidiagonal ω.
    let mut rng = ChaCha8Rng::seed_from_u64(SWEEP_SEED ^ 0xff);
    let mut worst_zero = 0.0f64;
    for k in 0..60 {
        let n = rng.gen_range(3..=16);
        let m = rng.gen_range(1..n);
        let prob = BoundaryProblem::new(random_frame(n, m, &mut rng), random_unitary(m, &mut rng)).unwrap();
        let (a, b) = (rng.gen_range(-PI..PI), rng.gen_range(-PI..PI));
        let z = Complex64::new(0.0, 0.0);
        let (omega, w) = match k % 3 {
            0 => (random_unitary(2, &mut rng).into_matrix(), 0),
            1 => (
                ComplexMatrix::from_rows(&[vec![Complex64::from_polar(1.0, a), z], vec![z, Complex64::from_polar(1.0, b)]])
                    .unwrap(),
                rng.gen_range(-3..=3),
            ),
            _ => (
                ComplexMatrix::from_rows(&[vec![z, Complex64::from_polar(1.0, a)], vec![Complex64::from_polar(1.0, b), z]])
                    .unwrap(),
                rng.gen_range(-3..=3),
            ),
        };
        let params = SynthesisParams::new(omega, w).unwrap();
        let result = synthesize(&prob, &params).unwrap();
        let inst = Instance { prob, params, result };
        worst_zero = worst_zero.max(block_commutator_norm(&inst));
    }

    verdict(
        2,
        "commutator criterion",
        worst <= tol && worst_zero <= zero_tol,
        format!("max |measured - √2·2π|w||ω11||ω21|| {worst:.3e} (tol {tol:e}); max norm over 60 trivial families {worst_zero:.3e} (tol {zero_tol:e})"),
    );
}

#[test]
fn criterion_3_reference_instance() {
    let tol = 1e-10;
    let z = Complex64::new(0.0, 0.0);
    let expected_h = ComplexMatrix::from_rows(&[
        vec![ci(PI / 2.0), z, z],
        vec![z, ci(2.0 * PI), ci(-PI)],
        vec![z, ci(-PI), ci(2.0 * PI)],
    ])
    .unwrap();
    let expected_exp = ComplexMatrix::from_diag(&[ci(1.0), Complex64::new(-1.0, 0.0), Complex64::new(-1.0, 0.0)]);

    let prob = reference_problem();
    let res = synthesize(&prob, &reference_params(1)).unwrap();
    let h = res.generator.as_ref();
    let h_err = h.distance(&expected_h);
    let exp_err = expm(h).unwrap().distance(&expected_exp);
    let comm = commutator(h, &prob.frame().projector()).unwrap().frobenius_norm();
    let comm_err = (comm - PI * SQRT_2).abs();
    verdict(
        3,
        "reference instance",
        h_err <= tol && exp_err <= tol && comm_err <= tol,
        format!("‖H - H_ref‖ {h_err:.3e}, ‖exp(H) - diag(i,-1,-1)‖ {exp_err:.3e}, |‖[H,P0]‖ - π√2| {comm_err:.3e} (tol {tol:e})"),
    );
}

#[test]
fn criterion_4_flow_consistency() {
    let tol = 1e-8;
    let prob = reference_problem();
    let h = synthesize(&prob, &reference_params(1)).unwrap().generator.into_matrix();
    let p0 = prob.frame().projector();

    // Largest error over the samples at t = j/100, shared by both step counts.
    let max_err = |steps: usize, stride: usize| {
        let traj = integrate_rk4(&h, &p0, &FlowConfig::new(steps, stride, false).unwrap()).unwrap();
        let exact = sample_exact_flow(&h, &p0, steps / stride).unwrap();
        traj.samples()
            .iter()
            .zip(exact.samples())
            .map(|(a, b)| a.distance(b))
            .fold(0.0, f64::max)
    };
    let err_200_all = max_err(200, 1);
    let ratio = max_err(100, 1) / max_err(200, 2);
    verdict(
        4,
        "flow consistency",
        err_200_all <= tol && (12.0..=20.0).contains(&ratio),
        format!("N=200 max error over all samples {err_200_all:.3e} (tol {tol:e}); N=100/N=200 error ratio {ratio:.4} (range [12, 20])"),
    );
}

#[test]
fn criterion_5_closure_and_constancy() {
    let tol = 1e-9;
    let const_tol = 1e-12;
    let mut worst_closure = 0.0f64;
    for inst in sweep() {
        let c = closure_residual(inst.result.generator.as_ref(), &inst.prob.frame().projector()).unwrap();
        worst_closure = worst_closure.max(c);
    }

    let mut worst_drift = 0.0f64;
    let prob = reference_problem();
    let h = synthesize(&prob, &reference_params(0)).unwrap().generator.into_matrix();
    let traj = sample_exact_flow(&h, &prob.frame().projector(), 100).unwrap();
    worst_drift = worst_drift.max(trajectory_stats(&traj).max_distance);
    let mut rng = ChaCha8Rng::seed_from_u64(SWEEP_SEED ^ 0x0c);
    for _ in 0..20 {
        let inst = random_instance(&mut rng, 0);
        let traj = sample_exact_flow(inst.result.generator.as_ref(), &inst.prob.frame().projector(), 100).unwrap();
        worst_drift = worst_drift.max(trajectory_stats(&traj).max_distance);
    }

    verdict(
        5,
        "closure and constancy",
        worst_closure <= tol && worst_drift <= const_tol,
        format!("max closure residual {worst_closure:.3e} over {SWEEP_SIZE} instances (tol {tol:e}); max w=0 distance from start {worst_drift:.3e} over 21 trajectories (tol {const_tol:e})"),
    );
}

#[test]
fn criterion_6_oracle_agreement() {
    let tol = 1e-9;
    let mut rng = ChaCha8Rng::seed_from_u64(SWEEP_SEED ^ 0x06);
    let mut worst = 0.0f64;
    let mut largest_norm = 0.0f64;
    for _ in 0..100 {
        let n = rng.gen_range(1..=16);
        let h = random_skew_hermitian(n, 10.0 * PI, &mut rng);
        largest_norm = largest_norm.max(skew_spectral_norm(&h));
        let taylor = expm(h.as_ref()).unwrap();
        let spectral = expm_spectral(&generator_spectrum(&h).unwrap(), 1.0);
        worst = worst.max(taylor.distance(&spectral));
    }
    verdict(
        6,
        "oracle agreement",
        worst <= tol && largest_norm <= 10.0 * PI + 1e-9,
        format!("max ‖expm - expm_spectral‖ {worst:.3e} over 100 matrices, largest ‖H‖₂ {largest_norm:.3} (tol {tol:e})"),
    );
}

fn max_eigen_residual(u: &UnitaryMatrix) -> f64 {
    let spec = unitary_eig(u, DEFAULT_GROUP_TOL).unwrap();
    let v = spec.eigenvectors();
    spec.eigenvalues()
        .iter()
        .enumerate()
        .map(|(k, &lambda)| {
            let col = v.column(k);
            let uv = u.matvec(&col);
            uv.iter().zip(&col).map(|(a, b)| (a - lambda * b).norm_sqr()).sum::<f64>().sqrt()
        })
        .fold(0.0, f64::max)
}

#[test]
fn criterion_7_eigensolver_quality() {
    let tol = 1e-9;
    let mut rng = ChaCha8Rng::seed_from_u64(SWEEP_SEED ^ 0x07);
    let mut worst_generic = 0.0f64;
    let mut worst_degenerate = 0.0f64;
    for _ in 0..50 {
        let n = rng.gen_range(1..=16);
        worst_generic = worst_generic.max(max_eigen_residual(&random_unitary(n, &mut rng)));

        // A handful of distinct phases, each repeated.
        let distinct: Vec<f64> = (0..rng.gen_range(1..=4)).map(|_| rng.gen_range(-PI..=PI)).collect();
        let phases: Vec<f64> = (0..n).map(|k| distinct[k % distinct.len()]).collect();
        worst_degenerate = worst_degenerate.max(max_eigen_residual(&unitary_with_phases(&phases, &mut rng)));
    }
    for u in [UnitaryMatrix::identity(16), UnitaryMatrix::from_phases(&[PI; 8])] {
        worst_degenerate = worst_degenerate.max(max_eigen_residual(&u));
    }
    verdict(
        7,
        "eigensolver quality",
        worst_generic <= tol && worst_degenerate <= tol,
        format!("max ‖Uv - λv‖ generic {worst_generic:.3e}, repeated phases {worst_degenerate:.3e} (tol {tol:e})"),
    );
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

#[test]
fn criterion_8_cli_contract() {
    let run = |args: &[&str]| Command::new(env!("CARGO_BIN_EXE_holonomy")).args(args).output().unwrap();
    let codes: Vec<Option<i32>> = ["reference.json", "winding_zero.json", "bad_omega.json"]
        .iter()
        .map(|f| run(&["synth", data(f).to_str().unwrap()]).status.code())
        .collect();

    let sim = run(&["simulate", data("reference.json").to_str().unwrap()]);
    let csv = String::from_utf8(sim.stdout).unwrap();
    let dists: Vec<f64> = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    let last = *dists.last().unwrap();
    let interior_max = dists[1..dists.len() - 1].iter().cloned().fold(0.0, f64::max);

    verdict(
        8,
        "cli contract",
        codes == [Some(0), Some(2), Some(1)] && sim.status.code() == Some(0) && last <= 1e-9 && interior_max > 0.5,
        format!("synth exit codes {codes:?} (want 0/2/1); simulate final dist_to_start {last:.3e}, max interior {interior_max:.4}"),
    );
}
