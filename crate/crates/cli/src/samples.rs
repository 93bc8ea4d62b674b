use std::io::Write;

use serde::Serialize;

use twistorlab_core::surface::PointSample;
use twistorlab_core::twistor_s4::{stereo_s4_inverse, ExtendedR4, SpherePoint};

/// One CSV row per grid point. Masked points carry empty numeric fields
/// and `spin = masked`; degenerate indicatrices have `spin = 0`.
#[derive(Debug, Serialize)]
pub struct SampleRow {
    pub u: f64,
    pub v: f64,
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
    pub x4: f64,
    pub x5: f64,
    pub conf_res: Option<f64>,
    pub mean_curv: Option<f64>,
    pub ind_center: Option<f64>,
    pub ind_radius: Option<f64>,
    pub ind_circ_res: Option<f64>,
    pub spin: String,
}

impl From<&PointSample> for SampleRow {
    fn from(p: &PointSample) -> Self {
        let ind = p.indicatrix.as_ref().filter(|_| !p.masked);
        let spin = match (p.masked, ind) {
            (true, _) | (false, None) => "masked".to_owned(),
            (false, Some(i)) => i.spin.map(|s| s.to_string()).unwrap_or_else(|| "0".to_owned()),
        };
        let live = |x: f64| (!p.masked).then_some(x);
        Self {
            u: p.u,
            v: p.v,
            x1: p.f[0],
            x2: p.f[1],
            x3: p.f[2],
            x4: p.f[3],
            x5: p.f[4],
            conf_res: live(p.conformality),
            mean_curv: live(p.mean_curvature),
            ind_center: ind.map(|i| i.center_norm),
            ind_radius: ind.map(|i| i.radius),
            ind_circ_res: ind.map(|i| if i.degenerate { 0.0 } else { i.circularity_residual }),
            spin,
        }
    }
}

pub fn write_samples<W: Write>(w: W, samples: &[PointSample]) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for p in samples {
        out.serialize(SampleRow::from(p))?;
    }
    out.flush()?;
    Ok(())
}

#[derive(Debug, Serialize)]
struct SliceRow {
    u: f64,
    v: f64,
    s1: f64,
    s2: f64,
    s3: f64,
}

/// Chart coordinates `ψ⁻¹(f)` with axis `drop` (1-based) removed. Samples
/// at the pole at infinity are skipped.
pub fn write_slice<W: Write>(w: W, samples: &[PointSample], drop: usize) -> csv::Result<usize> {
    let mut out = csv::Writer::from_writer(w);
    let mut written = 0;
    for p in samples {
        let Ok(y) = SpherePoint::normalized(p.f) else { continue };
        let ExtendedR4::Finite(x) = stereo_s4_inverse(&y) else { continue };
        let kept: Vec<f64> = (0..4).filter(|&k| k + 1 != drop).map(|k| x[k]).collect();
        out.serialize(SliceRow { u: p.u, v: p.v, s1: kept[0], s2: kept[1], s3: kept[2] })?;
        written += 1;
    }
    out.flush()?;
    Ok(written)
}
