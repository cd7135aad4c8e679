//! Acceptance suite: one line per criterion, `[PASS]` or `[FAIL]`.
//!
//! Run with `cargo test -p fusionframe-core --test acceptance`.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use fusionframe_core::coefspace::{BlockOperator, CoefficientArray};
use fusionframe_core::duality::{canonical_dual, cp_dual_from_left_inverse, dual_coefficients, left_inverse, verify_q_dual};
use fusionframe_core::linalg::{distance, spectral_norm, Complex64, Matrix, Tolerance};
use fusionframe_core::random::{self, gaussian_matrix, gaussian_vector, seeded};
use fusionframe_core::reconstruct::{frame_algorithm, predicted_iterations, reconstruct_exact, StopRule};
use fusionframe_core::system::LocalFrame;
use fusionframe_core::tf::{fusiogram, fusiogram_norms, FilterSpec, TfConfig};
use fusionframe_core::{FusionFrame, Subspace};
use nalgebra::{dmatrix, dvector};
use rand::Rng;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn tol() -> Tolerance {
    Tolerance::default()
}

fn span(l: usize, vs: &[&[f64]]) -> Subspace<f64> {
    let vs: Vec<Vec<f64>> = vs.iter().map(|v| v.to_vec()).collect();
    Subspace::from_vectors(l, &vs, &tol()).unwrap()
}

fn coord(l: usize, idx: &[usize]) -> Subspace<f64> {
    Subspace::coordinate(l, idx).unwrap()
}

fn max_entry_gap(a: &Matrix<f64>, b: &Matrix<f64>) -> f64 {
    (a - b).amax()
}

fn r4_example() -> FusionFrame<f64> {
    FusionFrame::unweighted(vec![
        span(4, &[&[1.0, 0.0, 0.0, 0.0], &[0.0, 1.0, 0.0, 0.0], &[0.0, 0.0, -1.0, 1.0]]),
        coord(4, &[1, 2]),
        coord(4, &[2, 3]),
    ])
    .unwrap()
}

fn c01_operator_exactness() -> Outcome {
    let start = Instant::now();
    let v = r4_example();
    let s = v.frame_operator().clone();
    let s_inv = v.inverse_frame_operator().map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let want_s = dmatrix![2.0, 0.0, 0.0, 0.0; 0.0, 4.0, 0.0, 0.0; 0.0, 0.0, 5.0, -1.0; 0.0, 0.0, -1.0, 3.0] / 2.0;
    let want_inv = dmatrix![14.0, 0.0, 0.0, 0.0; 0.0, 7.0, 0.0, 0.0; 0.0, 0.0, 6.0, 2.0; 0.0, 0.0, 2.0, 10.0] / 14.0;
    let (gs, gi) = (max_entry_gap(&s, &want_s), max_entry_gap(&s_inv, &want_inv));
    ensure!(gs <= 1e-12, "S_V off by {gs:e}");
    ensure!(gi <= 1e-12, "S_V^-1 off by {gi:e}");
    ensure!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    Ok(format!("max entry error S {gs:.1e}, S^-1 {gi:.1e}, {elapsed:?}"))
}

fn c02_canonical_dual_spans() -> Outcome {
    let v = r4_example();
    let (d, _) = canonical_dual(&v, None).map_err(|e| e.to_string())?;
    let want = [
        span(4, &[&[1.0, 0.0, 0.0, 0.0], &[0.0, 1.0, 0.0, 0.0], &[0.0, 0.0, 1.0, -2.0]]),
        span(4, &[&[0.0, 1.0, 0.0, 0.0], &[0.0, 0.0, 3.0, 1.0]]),
        span(4, &[&[0.0, 0.0, 3.0, 1.0], &[0.0, 0.0, 1.0, 5.0]]),
    ];
    let mut worst: f64 = 0.0;
    for (i, w) in want.iter().enumerate() {
        let gap = d.subspace(i).projector_distance(w);
        worst = worst.max(gap);
        ensure!(gap <= 1e-10, "first dual component {i} off by {gap:e}");
    }
    let want_sd = dmatrix![10.0, 0.0, 0.0, 0.0; 0.0, 20.0, 0.0, 0.0; 0.0, 0.0, 21.0, -1.0; 0.0, 0.0, -1.0, 19.0] / 10.0;
    let gap_sd = max_entry_gap(d.frame_operator(), &want_sd);
    ensure!(gap_sd <= 1e-12, "dual frame operator off by {gap_sd:e}");

    let (dd, _) = canonical_dual(&d, None).map_err(|e| e.to_string())?;
    let dir = dvector![0.0, 0.0, -17.0, 41.0];
    ensure!(dd.subspace(0).contains(&dir, &tol()), "second dual misses (0,0,-17,41)");
    ensure!(
        dd.subspace(0).projector_distance(v.subspace(0)) > 1e-3,
        "second dual returns V_1"
    );
    let dd2 = span(4, &[&[0.0, 1.0, 0.0, 0.0], &[0.0, 0.0, 29.0, 12.0]]);
    ensure!(
        dd.subspace(1).projector_distance(&dd2) <= 1e-10,
        "second dual component 2 differs"
    );
    ensure!(
        dd.subspace(2).projector_distance(v.subspace(2)) <= 1e-10,
        "second dual component 3 differs from V_3"
    );

    let gap = max_entry_gap(d.frame_operator(), &v.inverse_frame_operator().unwrap());
    ensure!(gap >= 1e-3, "S of the dual equals S_V^-1 (gap {gap:e})");
    Ok(format!("span error {worst:.1e}, S_(S^-1 V) vs S_V^-1 gap {gap:.3}"))
}

fn c03_gavruta() -> Outcome {
    let v = FusionFrame::unweighted([0, 1, 2, 1, 0, 2].iter().map(|&i| coord(3, &[i])).collect()).unwrap();
    let w = FusionFrame::from_parts([0, 1, 2, 2, 1, 0].iter().map(|&i| coord(3, &[i])).collect(), &[2.0; 6]).unwrap();
    let sv_inv = v.inverse_frame_operator().unwrap();
    let sw_inv = w.inverse_frame_operator().unwrap();
    let fwd = verify_q_dual(&v, &w, &BlockOperator::block_diagonal(vec![sv_inv; 6]).unwrap()).unwrap();
    let bwd = verify_q_dual(&w, &v, &BlockOperator::block_diagonal(vec![sw_inv; 6]).unwrap()).unwrap();
    ensure!(fwd.residual <= 1e-12, "forward residual {:e}", fwd.residual);
    let quarter = distance(&bwd.composition, &(Matrix::identity(3, 3) * 0.25));
    ensure!(quarter <= 1e-12, "backward composition differs from I/4 by {quarter:e}");
    ensure!(!bwd.is_valid(), "V reported as an alternate dual of W");
    Ok(format!(
        "forward residual {:.1e}, backward = {}·I (error {quarter:.1e})",
        fwd.residual,
        bwd.identity_scale()
    ))
}

fn c04_self_duality() -> Outcome {
    let v = FusionFrame::unweighted(vec![coord(3, &[1, 2]), coord(3, &[0, 2])]).unwrap();
    let gap = max_entry_gap(v.frame_operator(), &Matrix::from_diagonal(&dvector![1.0, 1.0, 2.0]));
    ensure!(gap <= 1e-12, "S_V off by {gap:e}");
    let (d, _) = canonical_dual(&v, None).unwrap();
    for i in 0..2 {
        ensure!(d.subspace(i).approx_eq(v.subspace(i), &tol()), "dual component {i} differs");
    }
    ensure!(!v.is_parseval(), "reported Parseval");
    Ok("S_V = diag(1,1,2), self-dual, not Parseval".into())
}

fn c05_parseval_impossibility() -> Outcome {
    let mut rng = seeded(5);
    let v = FusionFrame::unweighted(vec![coord(3, &[0, 1]), coord(3, &[1, 2])]).unwrap();
    for k in 0..1000 {
        let w = [rng.random_range(0.01..3.0), rng.random_range(0.01..3.0)];
        let r = v.reweighted(&w).unwrap();
        ensure!(!r.is_parseval(), "R^3 pair Parseval for weights {w:?} (draw {k})");
    }
    // weights that make two of the three eigenvalues equal to 1
    for w in [[1.0, 1.0], [1.0, 0.0001], [std::f64::consts::FRAC_1_SQRT_2; 2]] {
        ensure!(
            !v.reweighted(&w).unwrap().is_parseval(),
            "R^3 pair Parseval for weights {w:?}"
        );
    }
    let c = |idx: &[usize]| Subspace::<Complex64>::coordinate(4, idx).unwrap();
    let base = FusionFrame::unweighted(vec![c(&[0, 1]), c(&[0, 2]), c(&[3])]).unwrap();
    let mut closest = f64::INFINITY;
    for k in 0..200 {
        let u = random::invertible::<Complex64, _>(&mut rng, 4, 1e3);
        let (uv, _) = base.transform(&u).map_err(|e| e.to_string())?;
        let w = random::weights(&mut rng, 3, 0.1, 3.0);
        let uvw = uv.reweighted(&w).unwrap();
        closest = closest.min(distance(uvw.frame_operator(), &Matrix::identity(4, 4)));
        ensure!(!uvw.is_parseval(), "transformed C^4 frame Parseval at draw {k}");
        // the S^{-1/2} image with unit weights is not Parseval either
        let root = uv.sqrt_inverse_transform().map_err(|e| e.to_string())?;
        ensure!(!root.is_parseval(), "S^-1/2 image Parseval at draw {k}");
    }
    Ok(format!("0/1000 and 0/200 Parseval; closest ‖S − I‖ = {closest:.3}"))
}

fn c06_exact_not_riesz() -> Outcome {
    let v = FusionFrame::unweighted(vec![coord(3, &[0, 1]), coord(3, &[1, 2])]).unwrap();
    let c = v.classify();
    ensure!(c.is_fusion_frame && c.is_exact, "{c:?}");
    ensure!(!c.is_minimal && !c.is_riesz_basis, "{c:?}");
    let b = v.bounds();
    ensure!(
        (b.lower - 1.0).abs() <= 1e-12 && (b.upper - 2.0).abs() <= 1e-12,
        "bounds {b:?}"
    );
    Ok(format!("A={} B={} exact, not minimal, not Riesz", b.lower, b.upper))
}

fn c07_richardson() -> Outcome {
    let start = Instant::now();
    let mut rng = seeded(7);
    let mut worst_ratio: f64 = 0.0;
    for k in 0..100 {
        let l = rng.random_range(2..=64);
        let n = rng.random_range(1..=8);
        let v = random::fusion_frame::<f64, _>(&mut rng, l, n);
        let f = gaussian_vector::<f64, _>(&mut rng, l);
        let b = v.bounds();
        let rate = (b.upper - b.lower) / (b.upper + b.lower);
        let predicted = predicted_iterations(rate, 1e-8);
        let stop = StopRule {
            target_eps: 1e-8,
            max_iter: predicted + 1,
            keep_iterates: false,
        };
        let trace = frame_algorithm(&v, &f, b, stop).map_err(|e| e.to_string())?;
        ensure!(trace.satisfies_bound(1e-12), "frame {k}: error exceeds rate^n ‖f‖");
        ensure!(
            trace.final_error() <= 1e-8 * f.norm(),
            "frame {k}: error {:e} after {} steps",
            trace.final_error(),
            trace.iterations()
        );
        ensure!(
            trace.iterations() <= predicted,
            "frame {k}: {} > {predicted} iterations",
            trace.iterations()
        );
        for (_, e, bound) in trace.rows().skip(1).filter(|r| r.2 > 1e-10 * trace.signal_norm) {
            worst_ratio = worst_ratio.max(e / bound);
        }
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(30), "took {elapsed:?}");
    Ok(format!(
        "100 frames, max error/bound above the rounding floor {worst_ratio:.3}, {elapsed:?}"
    ))
}

fn c08_bound_transfer() -> Outcome {
    let mut rng = seeded(8);
    let mut tightest: f64 = f64::INFINITY;
    for k in 0..100 {
        let l = rng.random_range(2..=16);
        let n = rng.random_range(1..=6);
        let v = random::fusion_frame::<f64, _>(&mut rng, l, n);
        let sys = random::system(&mut rng, v, 3);
        let local = sys.local_bounds();
        let fusion = sys.frame().bounds();
        let global = sys.global_bounds().map_err(|e| e.to_string())?;
        let (lo, hi) = (local.lower * fusion.lower, local.upper * fusion.upper);
        ensure!(global.lower >= lo - 1e-9, "system {k}: A_g {} < {lo}", global.lower);
        ensure!(global.upper <= hi + 1e-9, "system {k}: B_g {} > {hi}", global.upper);
        tightest = tightest.min(global.lower - lo).min(hi - global.upper);
    }
    Ok(format!("100 systems, smallest margin {tightest:.2e}"))
}

fn c09_riesz_delta() -> Outcome {
    let mut rng = seeded(9);
    let mut worst: f64 = 0.0;
    for k in 0..100 {
        let l = rng.random_range(1..=10);
        let n = rng.random_range(1..=l);
        let v = random::fusion_riesz_basis::<Complex64, _>(&mut rng, l, n);
        let delta = v.riesz_delta_residual().map_err(|e| e.to_string())?;
        worst = worst.max(delta);
        ensure!(v.is_riesz_basis(), "basis {k}: dimension count fails");
        ensure!(delta <= 1e-9, "basis {k}: delta residual {delta:e}");
    }
    let mut agree_neg = 0;
    for k in 0..100 {
        let l = rng.random_range(2..=8);
        let n = rng.random_range(2..=4);
        let v = random::fusion_frame::<Complex64, _>(&mut rng, l, n);
        let by_dims = v.is_riesz_basis();
        let by_delta = v.riesz_delta_residual().unwrap() <= 1e-9;
        ensure!(by_dims == by_delta, "frame {k}: dimension count {by_dims}, delta {by_delta}");
        agree_neg += usize::from(!by_dims);
    }
    Ok(format!(
        "100 Riesz bases, max residual {worst:.1e}; {agree_neg} non-Riesz frames agree"
    ))
}

fn c10_duality_symmetry() -> Outcome {
    let mut rng = seeded(10);
    let mut worst_left: f64 = 0.0;
    let mut worst_cp: f64 = 0.0;
    let mut invalid = 0;
    for k in 0..100 {
        let l = rng.random_range(2..=8);
        let n = rng.random_range(1..=5);
        let v = random::fusion_frame::<f64, _>(&mut rng, l, n);
        let free = gaussian_matrix::<f64, _>(&mut rng, l, n * l);
        let linv = left_inverse(&v, &free).map_err(|e| e.to_string())?;
        let gap = spectral_norm(&(&linv.matrix * v.analysis_matrix() - Matrix::identity(l, l)));
        worst_left = worst_left.max(gap);
        ensure!(gap <= 1e-10, "frame {k}: ‖L C_V − I‖ = {gap:e}");
        let w = random::weights(&mut rng, n, 0.5, 2.0);
        let (dual, q) = cp_dual_from_left_inverse(&v, &linv, &w).map_err(|e| format!("frame {k}: {e}"))?;
        let cert = verify_q_dual(&v, &dual, &q).unwrap();
        worst_cp = worst_cp.max(cert.residual);
        ensure!(cert.is_valid(), "frame {k}: cp dual residual {:e}", cert.residual);
        let back = verify_q_dual(&dual, &v, &q.adjoint()).unwrap();
        ensure!(
            cert.is_valid() == back.is_valid(),
            "frame {k}: symmetry broken for a valid dual"
        );
        // a random operator must fail in both directions together
        let other = random::fusion_frame::<f64, _>(&mut rng, l, n);
        let rq = BlockOperator::from_dense(&gaussian_matrix::<f64, _>(&mut rng, n * l, n * l), n, l).unwrap();
        let a = verify_q_dual(&v, &other, &rq).unwrap();
        let b = verify_q_dual(&other, &v, &rq.adjoint()).unwrap();
        ensure!(a.is_valid() == b.is_valid(), "frame {k}: symmetry broken for a random Q");
        ensure!(
            (a.residual - b.residual).abs() <= 1e-10 * a.residual.max(1.0),
            "frame {k}: residuals differ"
        );
        invalid += usize::from(!a.is_valid());
    }
    Ok(format!(
        "max ‖L C_V − I‖ {worst_left:.1e}, max cp-dual residual {worst_cp:.1e}, {invalid} random Q rejected both ways"
    ))
}

fn c11_minimal_norm() -> Outcome {
    let mut rng = seeded(11);
    let mut worst: f64 = 0.0;
    for k in 0..100 {
        let l = rng.random_range(2..=8);
        let n = rng.random_range(1..=5);
        let v = random::fusion_frame::<Complex64, _>(&mut rng, l, n);
        let f = gaussian_vector::<Complex64, _>(&mut rng, l);
        let canon = dual_coefficients(&v, &f).unwrap();
        let p = {
            let c = v.analysis_matrix();
            &c * v.inverse_frame_operator().unwrap() * c.adjoint()
        };
        let r = gaussian_vector::<Complex64, _>(&mut rng, n * l);
        let stacked = canon.to_stacked() + (Matrix::identity(n * l, n * l) - p) * r;
        let c = CoefficientArray::from_stacked(&stacked, l).unwrap();
        let back = v.synthesis(&c).unwrap();
        ensure!((&back - &f).norm() <= 1e-10 * f.norm(), "sample {k}: D_V c ≠ f");
        let lhs = c.norm().powi(2);
        let rhs = canon.norm().powi(2) + (stacked - canon.to_stacked()).norm_squared();
        let gap = (lhs - rhs).abs() / lhs;
        worst = worst.max(gap);
        ensure!(gap <= 1e-10, "sample {k}: Pythagorean gap {gap:e}");
    }
    Ok(format!("100 samples, max relative gap {worst:.1e}"))
}

struct TfReport {
    line: String,
    fragile: Outcome,
}

fn c12_tf_round_trip() -> Result<TfReport, String> {
    let out = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("acceptance-fusiogram");
    std::fs::create_dir_all(&out).map_err(|e| e.to_string())?;
    let mut lines = Vec::new();
    let mut fragile = Ok(String::new());
    for name in ["db8", "haar"] {
        let cfg = TfConfig::example(FilterSpec::Named(name.into()));
        let lat = cfg.lattice().unwrap();
        ensure!((lat.redundancy() - 3.0).abs() < 1e-15, "redundancy {}", lat.redundancy());
        let sys = cfg.build(None, tol()).map_err(|e| e.to_string())?;
        ensure!(sys.len() == 6, "{} regions", sys.len());
        let v = sys.system.frame();
        let fb = v.bounds();
        ensure!(v.is_fusion_frame() && fb.lower > 0.0, "{name}: not a fusion frame ({fb:?})");
        let f = fusionframe_core::tf::composite_signal(cfg.len, cfg.seed);
        let g = reconstruct_exact(v, &f).map_err(|e| e.to_string())?;
        let err = (&g - &f).norm();
        ensure!(err <= 1e-8, "{name}: round-trip error {err:e}");
        let local = sys.system.local_bounds();
        let global = sys.system.global_bounds().unwrap();
        ensure!(
            global.lower >= local.lower * fb.lower - 1e-9,
            "{name}: global lower bound transfer fails"
        );
        ensure!(
            global.upper <= local.upper * fb.upper + 1e-9,
            "{name}: global upper bound transfer fails"
        );

        let dir = out.join(name);
        std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
        let files = fusiogram(&sys, &f).map_err(|e| e.to_string())?.files(false);
        let norms = fusiogram_norms(&sys, &f).map_err(|e| e.to_string())?.files(false);
        let write = |file: &str, bytes: &[u8]| std::fs::write(dir.join(file), bytes).map_err(|e| e.to_string());
        write("grid.csv", files.grid_csv.as_bytes())?;
        write("mask.csv", files.mask_csv.as_bytes())?;
        write("image.pgm", &files.image_pgm)?;
        write("borders.json", files.borders_json.as_bytes())?;
        write("norms.pgm", &norms.image_pgm)?;
        for file in ["grid.csv", "mask.csv", "image.pgm", "borders.json", "norms.pgm"] {
            let size = std::fs::metadata(dir.join(file)).map_err(|e| e.to_string())?.len();
            ensure!(size > 0, "{name}: {file} is empty");
        }
        lines.push(format!(
            "{name}: err {err:.1e}, A_W {:.4} B_W {:.4}, global [{:.3e}, {:.4}]",
            fb.lower, fb.upper, global.lower, global.upper
        ));
        if name == "db8" {
            let near = |x: f64, want: f64| (x - want).abs() <= 0.05 * want;
            fragile = if near(fb.lower, 1.7321) && near(fb.upper, 5.6051) && near(global.upper, 5.0512) {
                Ok(format!(
                    "A_W {:.4}, B_W {:.4}, global B {:.4}",
                    fb.lower, fb.upper, global.upper
                ))
            } else {
                Err(format!(
                    "got A_W {:.4}, B_W {:.4}, global B {:.4}; expected 1.7321, 5.6051, 5.0512 within 5%",
                    fb.lower, fb.upper, global.upper
                ))
            };
        }
    }
    lines.push(format!("files in {}", out.display()));
    Ok(TfReport {
        line: lines.join("; "),
        fragile,
    })
}

fn c13_frame_baseline() -> Outcome {
    let d = dmatrix![1.0, 1.0; 2.0, -1.0];
    let s = &d * d.transpose();
    ensure!(max_entry_gap(&s, &dmatrix![2.0, 1.0; 1.0, 5.0]) <= 1e-12, "S_φ = {s}");
    let lf = LocalFrame::new(d.clone(), &tol()).unwrap();
    let dual = lf.canonical_dual(&tol());
    let s_inv = fusionframe_core::linalg::spd_inverse(&s, &tol()).unwrap();
    ensure!(
        max_entry_gap(&s_inv, &(dmatrix![5.0, -1.0; -1.0, 2.0] / 9.0)) <= 1e-12,
        "S_φ^-1 = {s_inv}"
    );
    let n1 = dual.synthesis.column(0).norm();
    ensure!((n1 - 2f64.sqrt() / 3.0).abs() <= 1e-12, "‖S^-1 φ_1‖ = {n1}");
    ensure!((d.column(0).norm() - 5f64.sqrt()).abs() <= 1e-12, "‖φ_1‖");
    // as a fusion frame of lines weighted by ‖φ_i‖
    let v = FusionFrame::from_parts(
        vec![span(2, &[&[1.0, 2.0]]), span(2, &[&[1.0, -1.0]])],
        &[5f64.sqrt(), 2f64.sqrt()],
    )
    .unwrap();
    ensure!(
        max_entry_gap(v.frame_operator(), &s) <= 1e-12,
        "fusion frame operator of the lines differs"
    );
    Ok(format!("‖S^-1 φ_1‖ = {n1:.15}"))
}

fn run(id: &str, name: &str, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        Err(p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panicked".into()))
    });
    let t = start.elapsed().as_secs_f64();
    match outcome {
        Ok(detail) => {
            println!("[PASS] {id} {name} ({t:.2}s): {detail}");
            true
        }
        Err(why) => {
            println!("[FAIL] {id} {name} ({t:.2}s): {why}");
            false
        }
    }
}

fn main() -> ExitCode {
    let mut failed: Vec<&str> = Vec::new();
    let check = |failed: &mut Vec<&str>, id: &'static str, name: &str, f: fn() -> Outcome| {
        if !run(id, name, f) {
            failed.push(id);
        }
    };
    check(&mut failed, "01", "fusion frame operator exactness", c01_operator_exactness);
    check(&mut failed, "02", "canonical dual spans", c02_canonical_dual_spans);
    check(&mut failed, "03", "alternate dual asymmetry", c03_gavruta);
    check(&mut failed, "04", "self-duality", c04_self_duality);
    check(&mut failed, "05", "Parseval impossibility", c05_parseval_impossibility);
    check(&mut failed, "06", "exact but not Riesz", c06_exact_not_riesz);
    check(&mut failed, "07", "Richardson guarantee", c07_richardson);
    check(&mut failed, "08", "bound transfer", c08_bound_transfer);
    check(&mut failed, "09", "Riesz delta-condition equivalence", c09_riesz_delta);
    check(&mut failed, "10", "duality symmetry and left inverses", c10_duality_symmetry);
    check(&mut failed, "11", "minimal-norm coefficients", c11_minimal_norm);

    let mut fragile = None;
    let ok12 = run("12", "TF round trip", || {
        c12_tf_round_trip().map(|r| {
            fragile = Some(r.fragile);
            r.line
        })
    });
    if !ok12 {
        failed.push("12");
    }
    match fragile {
        Some(Ok(detail)) => println!("[PASS] 12b printed TF bounds (expected-fragile): {detail}"),
        Some(Err(why)) => println!("[FAIL] 12b printed TF bounds (expected-fragile, not counted): {why}"),
        None => println!("[FAIL] 12b printed TF bounds (expected-fragile, not counted): not reached"),
    }

    check(&mut failed, "13", "frame-theory baseline", c13_frame_baseline);
    if failed.is_empty() {
        println!("acceptance: all counted criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failed:?}");
        ExitCode::FAILURE
    }
}
