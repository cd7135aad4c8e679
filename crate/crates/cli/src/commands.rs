use std::fs;
use std::path::Path;

use fusionframe_core::coefspace::{is_component_preserving, BlockOperator};
use fusionframe_core::duality::{canonical_dual, cp_dual_from_left_inverse, left_inverse, verify_q_dual, CertificateSummary};
use fusionframe_core::io::{parse_vector_csv, write_csv, write_csv_rows, FrameDescriptor, SCHEMA_VERSION};
use fusionframe_core::random::{gaussian_matrix, seeded};
use fusionframe_core::reconstruct::{frame_algorithm, reconstruct_exact, StopRule};
use fusionframe_core::tf::{composite_signal, fusiogram as tf_fusiogram, fusiogram_norms, TfConfig, TfRegion};
use fusionframe_core::{Classification, Complex64, Field, FrameBounds, FusionFrame, Matrix, Scalar, Tolerance};
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::{DualMode, Format, Global};

fn tolerance(g: &Global) -> CliResult<Tolerance> {
    let Some(text) = &g.tol else {
        return Ok(Tolerance::default());
    };
    let parse = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|e| CliError::input(format!("--tol {text:?}"), e))
    };
    let tol = match text.split_once(',') {
        Some((rel, abs)) => Tolerance::new(parse(rel)?, parse(abs)?)?,
        None => Tolerance::new(parse(text)?, Tolerance::default().abs)?,
    };
    Ok(tol)
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::input(path.display(), e))
}

fn write(g: &Global, name: &str, bytes: impl AsRef<[u8]>) -> CliResult<()> {
    fs::create_dir_all(&g.out).map_err(|e| CliError::input(g.out.display(), e))?;
    let path = g.out.join(name);
    fs::write(&path, bytes).map_err(|e| CliError::input(path.display(), e))
}

fn load_descriptor(path: &Path) -> CliResult<FrameDescriptor> {
    FrameDescriptor::from_json(&read(path)?).map_err(|e| CliError::input(path.display(), e))
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("reports serialize") + "\n"
}

/// Twelve significant digits without trailing zeros.
fn num(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x != 0.0 && x.abs() < 1e-4 {
        return format!("{x:.6e}");
    }
    let s = format!("{x:.12}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

#[derive(Serialize)]
struct BoundsReport {
    schema_version: u32,
    field: Field,
    ambient_dim: usize,
    components: usize,
    lower: f64,
    upper: f64,
    condition: f64,
    classification: Classification,
}

fn bounds_report<T: Scalar>(v: &FusionFrame<T>) -> BoundsReport {
    let b = v.bounds();
    BoundsReport {
        schema_version: SCHEMA_VERSION,
        field: T::FIELD,
        ambient_dim: v.ambient_dim(),
        components: v.len(),
        lower: b.lower,
        upper: b.upper,
        condition: b.condition(),
        classification: v.classify(),
    }
}

pub fn bounds(g: &Global, path: &Path) -> CliResult<()> {
    let desc = load_descriptor(path)?;
    let tol = tolerance(g)?;
    let r = match desc.field {
        Field::Real => bounds_report(&desc.to_frame::<f64>(tol)?),
        Field::Complex => bounds_report(&desc.to_frame::<Complex64>(tol)?),
    };
    match g.format {
        Format::Json => print!("{}", to_json(&r)),
        Format::Csv => {
            let c = &r.classification;
            println!(
                "A={} B={} cond={} fusion_frame={} tight={} parseval={} onb={} riesz={} exact={} minimal={}",
                num(r.lower),
                num(r.upper),
                num(r.condition),
                c.is_fusion_frame,
                c.is_tight,
                c.is_parseval,
                c.is_onb_fusion_basis,
                c.is_riesz_basis,
                c.is_exact,
                c.is_minimal
            );
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct DualReport {
    schema_version: u32,
    mode: &'static str,
    /// `D_W Q C_V`.
    forward: CertificateSummary,
    /// `D_V Q' C_W` with the roles of the frames swapped, when computed.
    #[serde(skip_serializing_if = "Option::is_none")]
    backward: Option<CertificateSummary>,
    component_preserving: bool,
}

fn read_weights(g: &Global, path: Option<&Path>, n: usize) -> CliResult<Option<Vec<f64>>> {
    let Some(path) = path else {
        return Ok(None);
    };
    let w = parse_vector_csv::<f64>(&read(path)?, g.header).map_err(|e| CliError::input(path.display(), e))?;
    if w.len() != n {
        return Err(CliError::Input(format!(
            "{}: {} weights for {n} components",
            path.display(),
            w.len()
        )));
    }
    Ok(Some(w.iter().copied().collect()))
}

fn inverse_blocks<T: Scalar>(v: &FusionFrame<T>) -> CliResult<BlockOperator<T>> {
    let s_inv = v.inverse_frame_operator()?;
    Ok(BlockOperator::block_diagonal(vec![s_inv; v.len()])?)
}

fn run_dual<T: Scalar>(
    g: &Global,
    desc: &FrameDescriptor,
    mode: DualMode,
    weights: Option<&Path>,
    given: Option<&FrameDescriptor>,
) -> CliResult<()> {
    let tol = tolerance(g)?;
    let v = desc.to_frame::<T>(tol)?;
    if !v.is_fusion_frame() {
        return Err(CliError::Math(
            "the input is not a fusion frame (subspaces do not span)".into(),
        ));
    }
    let weights = read_weights(g, weights, v.len())?;
    let (w, q, name, backward) = match mode {
        DualMode::Canonical => {
            let (w, q) = canonical_dual(&v, weights.as_deref())?;
            (w, q, "canonical", None)
        }
        DualMode::Alternate => {
            let w = match given {
                Some(d) => d.to_frame::<T>(tol)?,
                None => canonical_dual(&v, weights.as_deref().or(Some(&v.weights())))?.0,
            };
            let q = inverse_blocks(&v)?;
            let backward = if w.is_fusion_frame() {
                Some(verify_q_dual(&w, &v, &inverse_blocks(&w)?)?.summary())
            } else {
                None
            };
            (w, q, "alternate", backward)
        }
        DualMode::FromLeftInverse => {
            let l = v.ambient_dim();
            let free = gaussian_matrix::<T, _>(&mut seeded(g.seed), l, v.len() * l);
            let linv = left_inverse(&v, &free)?;
            let w = weights.unwrap_or_else(|| v.weights());
            let (dual, q) = cp_dual_from_left_inverse(&v, &linv, &w)?;
            (dual, q, "from-left-inverse", None)
        }
    };
    let cert = verify_q_dual(&v, &w, &q)?;
    let report = DualReport {
        schema_version: SCHEMA_VERSION,
        mode: name,
        forward: cert.summary(),
        backward,
        component_preserving: is_component_preserving(&q, &v, &w, &tol)?,
    };
    write(g, "dual.json", FrameDescriptor::from_frame(&w).to_json() + "\n")?;
    write(g, "certificate.json", to_json(&report))?;
    match g.format {
        Format::Json => print!("{}", to_json(&report)),
        Format::Csv => {
            print!(
                "mode={name} residual={} valid={}",
                num(report.forward.residual),
                report.forward.valid
            );
            if let Some(b) = &report.backward {
                print!(
                    " backward_residual={} backward_valid={} backward_scale={}",
                    num(b.residual),
                    b.valid,
                    num(b.identity_scale)
                );
            }
            println!();
        }
    }
    Ok(())
}

pub fn dual(g: &Global, frame: &Path, mode: DualMode, weights: Option<&Path>, given: Option<&Path>) -> CliResult<()> {
    let desc = load_descriptor(frame)?;
    if given.is_some() && mode != DualMode::Alternate {
        return Err(CliError::Input("--dual is only used with --mode alternate".into()));
    }
    let given = given.map(load_descriptor).transpose()?;
    if let Some(d) = &given {
        if d.field != desc.field || d.ambient_dim != desc.ambient_dim || d.components.len() != desc.components.len() {
            return Err(CliError::Input("the dual descriptor does not match the frame".into()));
        }
    }
    match desc.field {
        Field::Real => run_dual::<f64>(g, &desc, mode, weights, given.as_ref()),
        Field::Complex => run_dual::<Complex64>(g, &desc, mode, weights, given.as_ref()),
    }
}

#[derive(Serialize)]
struct TfReport {
    schema_version: u32,
    len: usize,
    regions: Vec<TfRegion>,
    dims: Vec<usize>,
    local_frame_sizes: Vec<usize>,
    fusion_bounds: FrameBounds,
    local_bounds: FrameBounds,
    global_bounds: FrameBounds,
    redundancy: f64,
    round_trip_error: f64,
    relative_round_trip_error: f64,
}

pub fn fusiogram(g: &Global, signal: &Path, config: &Path) -> CliResult<()> {
    let cfg: TfConfig = serde_json::from_str(&read(config)?).map_err(|e| CliError::input(config.display(), e))?;
    let f = parse_vector_csv::<f64>(&read(signal)?, g.header).map_err(|e| CliError::input(signal.display(), e))?;
    if f.len() != cfg.len {
        return Err(CliError::Input(format!(
            "signal has length {}, configuration expects L={}",
            f.len(),
            cfg.len
        )));
    }
    let tol = tolerance(g)?;
    let sys = cfg.build(config.parent(), tol)?;
    let v = sys.system.frame();
    let restored = reconstruct_exact(v, &f)?;
    let err = (&restored - &f).norm();
    let report = TfReport {
        schema_version: SCHEMA_VERSION,
        len: cfg.len,
        regions: sys.regions.clone(),
        dims: v.dims(),
        local_frame_sizes: sys.system.locals().iter().map(|l| l.len()).collect(),
        fusion_bounds: v.bounds(),
        local_bounds: sys.system.local_bounds(),
        global_bounds: sys.system.global_bounds()?,
        redundancy: cfg.lattice()?.redundancy(),
        round_trip_error: err,
        relative_round_trip_error: if f.norm() > 0.0 { err / f.norm() } else { 0.0 },
    };
    let files = tf_fusiogram(&sys, &f)?.files(g.header);
    let norms = fusiogram_norms(&sys, &f)?.files(g.header);
    write(g, "grid.csv", files.grid_csv)?;
    write(g, "mask.csv", files.mask_csv)?;
    write(g, "image.pgm", files.image_pgm)?;
    write(g, "borders.json", files.borders_json + "\n")?;
    write(g, "norms.csv", norms.grid_csv)?;
    write(g, "norms.pgm", norms.image_pgm)?;
    write(g, "report.json", to_json(&report))?;
    match g.format {
        Format::Json => print!("{}", to_json(&report)),
        Format::Csv => println!(
            "round_trip_error={} A_W={} B_W={} A={} B={}",
            num(err),
            num(report.fusion_bounds.lower),
            num(report.fusion_bounds.upper),
            num(report.global_bounds.lower),
            num(report.global_bounds.upper)
        ),
    }
    Ok(())
}

pub fn signal(g: &Global, len: usize) -> CliResult<()> {
    if len == 0 {
        return Err(CliError::Input("--len must be positive".into()));
    }
    let f = composite_signal(len, g.seed);
    let header = ["signal".to_string()];
    write(
        g,
        "signal.csv",
        write_csv(
            &Matrix::from_column_slice(len, 1, f.as_slice()),
            g.header.then_some(&header[..]),
        ),
    )
}

fn run_iterate<T: Scalar>(g: &Global, desc: &FrameDescriptor, signal: &Path, stop: StopRule, upper_scale: f64) -> CliResult<()> {
    let v = desc.to_frame::<T>(tolerance(g)?)?;
    let f = parse_vector_csv::<T>(&read(signal)?, g.header).map_err(|e| CliError::input(signal.display(), e))?;
    if f.len() != v.ambient_dim() {
        return Err(CliError::Input(format!(
            "signal has length {}, frame lives in dimension {}",
            f.len(),
            v.ambient_dim()
        )));
    }
    if !v.is_fusion_frame() {
        return Err(CliError::Math(
            "the input is not a fusion frame (subspaces do not span)".into(),
        ));
    }
    let b = v.bounds();
    let bounds = FrameBounds::new(b.lower, b.upper * upper_scale)?;
    let trace = frame_algorithm(&v, &f, bounds, stop)?;
    match g.format {
        Format::Csv => {
            let rows = trace
                .rows()
                .map(|(n, e, bound)| vec![n.to_string(), format!("{e:e}"), format!("{bound:e}")]);
            write(
                g,
                "trace.csv",
                write_csv_rows(rows, g.header.then_some(&["n", "error", "bound"][..])),
            )?;
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Row {
                n: usize,
                error: f64,
                bound: f64,
            }
            let rows: Vec<Row> = trace.rows().map(|(n, error, bound)| Row { n, error, bound }).collect();
            write(g, "trace.json", to_json(&rows))?;
        }
    }
    println!(
        "iterations={} final_error={} rate={} within_bound={}",
        trace.iterations(),
        num(trace.final_error()),
        num(trace.rate_bound),
        trace.satisfies_bound(1e-12)
    );
    Ok(())
}

pub fn iterate(g: &Global, frame: &Path, signal: &Path, eps: f64, max_iter: usize, upper_scale: f64) -> CliResult<()> {
    if !(eps.is_finite() && eps >= 0.0) {
        return Err(CliError::Input(format!("--eps {eps} must be non-negative")));
    }
    if !(upper_scale.is_finite() && upper_scale >= 1.0) {
        return Err(CliError::Input(format!("--upper-scale {upper_scale} must be at least 1")));
    }
    let desc = load_descriptor(frame)?;
    let stop = StopRule {
        target_eps: eps,
        max_iter,
        keep_iterates: false,
    };
    match desc.field {
        Field::Real => run_iterate::<f64>(g, &desc, signal, stop, upper_scale),
        Field::Complex => run_iterate::<Complex64>(g, &desc, signal, stop, upper_scale),
    }
}

#[cfg(test)]
mod tests {
    use super::num;

    #[test]
    fn number_formatting() {
        assert_eq!(num(1.0), "1");
        assert_eq!(num(2.0000000000000004), "2");
        assert_eq!(num(0.9999999999999998), "1");
        assert_eq!(num(-0.0), "0");
        assert_eq!(num(0.25), "0.25");
        assert_eq!(num(f64::INFINITY), "inf");
        assert_eq!(num(7.1e-5), "7.100000e-5");
    }
}
