use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use serde_json::{json, Value};
use thiserror::Error;

use twistorlab_core::legendrian::{
    generate_legendrian, project_curve, roundtrip_verify, CurveFile, ComplexPoly, LegendrianCurve,
};
use twistorlab_core::report::{CheckEntry, CheckReport};
use twistorlab_core::suites::{algebra_suite, group_suite, h4_suite, sphere_map_suite, LENGTH_TOL};
use twistorlab_core::surface::{
    catalog, differentiate, fundamental_forms, indicatrix, intrinsic_length, sample_grid, superminimality_suite,
    ChartPath, DiffConfig, Grid, ParamSurface, Rect, SuiteOptions, Target, Tolerances,
};

use crate::report::ReportDocument;
use crate::samples::{write_samples, write_slice};
use crate::{Command, Common};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] twistorlab_core::Error),
    #[error("{0}")]
    Usage(String),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(twistorlab_core::Error::Io(_)) | CliError::Io { .. } => 3,
            CliError::Core(_) | CliError::Usage(_) => 2,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.to_owned(), source }
}

/// Applies `name=value` overrides to the default tolerances.
pub fn tolerances(overrides: &[String]) -> Result<Tolerances> {
    let mut t = serde_json::to_value(Tolerances::default()).expect("tolerances serialize");
    for o in overrides {
        let (name, value) = o
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("tolerance override '{o}' is not NAME=VALUE")))?;
        let slot = t
            .get_mut(name.trim())
            .ok_or_else(|| CliError::Usage(format!("unknown tolerance '{name}'")))?;
        let v: f64 = value
            .trim()
            .parse()
            .map_err(|e| CliError::Usage(format!("tolerance '{name}': {e}")))?;
        if !(v > 0.0 && v.is_finite()) {
            return Err(CliError::Usage(format!("tolerance '{name}' must be positive, got {v}")));
        }
        *slot = json!(v);
    }
    Ok(serde_json::from_value(t).expect("tolerances deserialize"))
}

fn config(overrides: &[String]) -> Result<DiffConfig> {
    let cfg = DiffConfig { tolerances: tolerances(overrides)?, ..DiffConfig::default() };
    cfg.validate()?;
    Ok(cfg)
}

fn open(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(io_err(path))
}

fn emit_text(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(io_err(p)),
        None => {
            let mut s = io::stdout().lock();
            s.write_all(text.as_bytes()).map_err(io_err(Path::new("<stdout>")))
        }
    }
}

fn emit(doc: &ReportDocument, out: Option<&Path>) -> Result<ExitCode> {
    let text = serde_json::to_string_pretty(doc).expect("report serializes") + "\n";
    emit_text(out, &text)?;
    for r in &doc.reports {
        for f in r.failures() {
            eprintln!("{}: {f}", r.name);
        }
    }
    Ok(if doc.passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn echo(common: &Common, cfg: &DiffConfig, extra: Value) -> Value {
    let mut v = json!({ "seed": common.seed, "diff": cfg });
    if let (Value::Object(m), Value::Object(e)) = (&mut v, extra) {
        m.extend(e);
    }
    v
}

fn surface_by_name(name: &str) -> Result<ParamSurface> {
    catalog::by_name(name).ok_or_else(|| {
        CliError::Usage(format!("unknown catalog surface '{name}'; known: {}", catalog::NAMES.join(", ")))
    })
}

/// The chart of `s` pulled in by 2.5% of each side.
fn default_grid(s: &ParamSurface, n: usize) -> Result<Grid> {
    let d = s.domain();
    let (du, dv) = ((d.u1 - d.u0) * 0.025, (d.v1 - d.v0) * 0.025);
    Ok(Grid::new(Rect::new(d.u0 + du, d.u1 - du, d.v0 + dv, d.v1 - dv)?, n)?)
}

fn parse_point(s: &str) -> Result<(f64, f64)> {
    let nums: Vec<f64> = s
        .split(',')
        .map(|x| x.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| CliError::Usage(format!("point '{s}': {e}")))?;
    match nums[..] {
        [u, v] => Ok((u, v)),
        _ => Err(CliError::Usage(format!("point '{s}': expected u,v"))),
    }
}

/// `equator`, `radial:R`, `segment:u0,v0,u1,v1`, `circle:u,v,r`, with the
/// closed-form length where one is known.
fn parse_path(text: &str, target: Target) -> Result<(ChartPath, Option<f64>)> {
    let (kind, args) = text.split_once(':').unwrap_or((text, ""));
    let nums = || -> Result<Vec<f64>> {
        args.split(',')
            .map(|x| x.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| CliError::Usage(format!("path '{text}': {e}")))
    };
    let bad = || CliError::Usage(format!("path '{text}': wrong number of arguments"));
    Ok(match kind {
        "equator" if args.is_empty() => {
            let exact = (target == Target::Sphere).then_some(std::f64::consts::TAU);
            (ChartPath::Circle { center: [0.0, 0.0], radius: 1.0 }, exact)
        }
        "radial" => {
            let [r] = nums()?[..] else { return Err(bad()) };
            let exact = match target {
                Target::Ball => Some(2.0 * r.atanh()),
                Target::Flat => Some(r.abs()),
                Target::Sphere => None,
            };
            (ChartPath::Segment { from: [0.0, 0.0], to: [r, 0.0] }, exact)
        }
        "segment" => {
            let [a, b, c, d] = nums()?[..] else { return Err(bad()) };
            (ChartPath::Segment { from: [a, b], to: [c, d] }, None)
        }
        "circle" => {
            let [u, v, r] = nums()?[..] else { return Err(bad()) };
            (ChartPath::Circle { center: [u, v], radius: r }, None)
        }
        _ => return Err(CliError::Usage(format!("unknown path '{text}'"))),
    })
}

fn load_curve(path: &Path) -> Result<LegendrianCurve> {
    Ok(CurveFile::load(path)?)
}

pub fn run(cmd: Command) -> Result<ExitCode> {
    match cmd {
        Command::CheckAlgebra { common, cases } => {
            let cfg = config(&common.tolerances)?;
            let reports = vec![
                algebra_suite(common.seed, cases),
                sphere_map_suite(common.seed.wrapping_add(1), cases),
                group_suite(common.seed.wrapping_add(2), (cases / 100).max(1)),
            ];
            let doc = ReportDocument::new("check-algebra", echo(&common, &cfg, json!({ "cases": cases })), reports);
            emit(&doc, common.out.as_deref())
        }
        Command::VerifyH4 { common, cases } => {
            let cfg = config(&common.tolerances)?;
            let reports = vec![h4_suite(common.seed, cases)?];
            let doc = ReportDocument::new("verify-h4", echo(&common, &cfg, json!({ "cases": cases })), reports);
            emit(&doc, common.out.as_deref())
        }
        Command::VerifyRoundtrip { common, curve, grid } => {
            let cfg = config(&common.tolerances)?;
            let c = load_curve(&curve)?;
            let rep = roundtrip_verify(&c, &grid, &cfg)?;
            let extra = json!({ "curve": curve, "grid": grid.to_string() });
            let doc = ReportDocument::new("verify-roundtrip", echo(&common, &cfg, extra), vec![rep]);
            emit(&doc, common.out.as_deref())
        }
        Command::VerifyCatalog { common, catalog, grid, lift } => {
            let cfg = config(&common.tolerances)?;
            let s = surface_by_name(&catalog)?;
            let grid = match grid {
                Some(g) => g,
                None => default_grid(&s, 21)?,
            };
            let opts = SuiteOptions { expected_spin: None, lift_checks: lift };
            let (rep, _) = superminimality_suite(&s, &grid, &cfg, opts)?;
            let extra = json!({ "catalog": catalog, "grid": grid.to_string(), "lift": lift });
            let doc = ReportDocument::new("verify-catalog", echo(&common, &cfg, extra), vec![rep]);
            emit(&doc, common.out.as_deref())
        }
        Command::GenLegendrian { p3, p4, c0, out } => {
            let parse = |s: &str| ComplexPoly::parse(s).map_err(CliError::from);
            let c0 = parse(&c0)?;
            if c0.degree().is_some_and(|d| d > 0) {
                return Err(CliError::Usage("c0 must be a single constant".into()));
            }
            let c0 = c0.coeffs().first().cloned().unwrap_or_default();
            let curve = generate_legendrian(parse(&p3)?, parse(&p4)?, c0);
            let file = CurveFile::from_curve(&curve)?;
            match out {
                Some(p) => file.save(&p)?,
                None => emit_text(None, &(serde_json::to_string_pretty(&file).expect("serializes") + "\n"))?,
            }
            eprintln!("{}", curve.describe());
            Ok(ExitCode::SUCCESS)
        }
        Command::Project { curve, grid, out, slice, drop_axis, tolerances } => {
            let cfg = config(&tolerances)?;
            let c = load_curve(&curve)?;
            let s = project_curve(&c, grid.domain)?;
            let samples = sample_grid(&s, &grid, &cfg)?;
            write_samples(open(&out)?, &samples).map_err(|e| csv_err(&out, e))?;
            if let Some(p) = slice {
                write_slice(open(&p)?, &samples, drop_axis as usize).map_err(|e| csv_err(&p, e))?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Indicatrix { catalog, curve, at, samples, out } => {
            let cfg = DiffConfig::default();
            let (u, v) = parse_point(&at)?;
            let s = match (catalog, curve) {
                (Some(name), _) => surface_by_name(&name)?,
                (None, Some(path)) => {
                    let c = load_curve(&path)?;
                    project_curve(&c, Rect::new(u - 0.1, u + 0.1, v - 0.1, v + 0.1)?)?
                }
                (None, None) => return Err(CliError::Usage("one of --catalog, --curve is required".into())),
            };
            let forms = fundamental_forms(&differentiate(&s, u, v, &cfg)?)?;
            let ind = indicatrix(&forms, &nalgebra::Vector2::x(), samples, &cfg.tolerances)?;
            if let Some(p) = &out {
                let mut w = csv::Writer::from_writer(open(p)?);
                w.write_record(["k", "angle", "x", "y"]).map_err(|e| csv_err(p, e))?;
                for (k, q) in ind.samples.iter().enumerate() {
                    let angle = std::f64::consts::TAU * k as f64 / samples as f64;
                    w.serialize((k, angle, q[0], q[1])).map_err(|e| csv_err(p, e))?;
                }
                w.flush().map_err(io_err(p))?;
            }
            let summary = json!({
                "surface": s.id(),
                "at": [u, v],
                "center": [ind.center[0], ind.center[1]],
                "center_norm": ind.center_norm,
                "radius": ind.radius,
                "circularity_residual": ind.circularity_residual,
                "planarity_residual": ind.planarity_residual,
                "degenerate": ind.degenerate,
                "spin": ind.spin.map(|s| s.to_string()),
                "superminimal": ind.is_superminimal(&cfg.tolerances),
            });
            emit_text(None, &(serde_json::to_string_pretty(&summary).expect("serializes") + "\n"))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::SampleMetric { common, catalog, path } => {
            let cfg = config(&common.tolerances)?;
            let s = surface_by_name(&catalog)?;
            let (chart_path, exact) = parse_path(&path, s.target())?;
            let length = intrinsic_length(&s, &chart_path, &cfg)?;
            let mut rep = CheckReport::new(format!("length {catalog}"));
            match exact {
                Some(l) => rep.push(CheckEntry::new("length_vs_closed_form", (length - l).abs(), LENGTH_TOL)),
                None => rep.note("no closed form for this path; length reported only"),
            }
            rep.meta("length", length);
            if let Some(l) = exact {
                rep.meta("closed_form", l);
            }
            rep.meta("path", serde_json::to_value(chart_path).expect("serializes"));
            let extra = json!({ "catalog": catalog, "path": path });
            let doc = ReportDocument::new("sample-metric", echo(&common, &cfg, extra), vec![rep]);
            emit(&doc, common.out.as_deref())
        }
    }
}

fn csv_err(path: &Path, e: csv::Error) -> CliError {
    match e.into_kind() {
        csv::ErrorKind::Io(source) => CliError::Io { path: path.to_owned(), source },
        other => CliError::Usage(format!("{}: {other:?}", path.display())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerance_overrides() {
        let t = tolerances(&["mean_curvature=1e-5".into()]).unwrap();
        assert_eq!(t.mean_curvature, 1e-5);
        assert_eq!(t.conformality, Tolerances::default().conformality);
        assert!(tolerances(&["nonsense=1".into()]).is_err());
        assert!(tolerances(&["alpha=-1".into()]).is_err());
        assert!(tolerances(&["alpha".into()]).is_err());
    }

    #[test]
    fn paths_and_closed_forms() {
        let (_, l) = parse_path("equator", Target::Sphere).unwrap();
        assert_eq!(l, Some(std::f64::consts::TAU));
        let (p, l) = parse_path("radial:0.5", Target::Ball).unwrap();
        assert_eq!(p, ChartPath::Segment { from: [0.0, 0.0], to: [0.5, 0.0] });
        assert!((l.unwrap() - 2.0 * 0.5f64.atanh()).abs() < 1e-15);
        assert!(parse_path("segment:0,0,1", Target::Flat).is_err());
        assert!(parse_path("spiral", Target::Flat).is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Usage("x".into()).exit_code(), 2);
        assert_eq!(CliError::from(twistorlab_core::Error::Precondition("x".into())).exit_code(), 2);
        assert_eq!(CliError::from(twistorlab_core::Error::Io("x".into())).exit_code(), 3);
    }
}
