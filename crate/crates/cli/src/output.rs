//! Output rendering: the stable record schema, full-precision JSON and CSV
//! for machine consumers, six-decimal text for humans.

use std::io;

use serde::Serialize;

use bellport::criteria::DiagnosticsReport;
use bellport::states::DensityFile;

/// One diagnosed state: the report fields plus run metadata. Field order is
/// the serialization order and is part of the output contract.
#[derive(Debug, Clone, Serialize)]
pub struct OutputRecord {
    pub tool_version: &'static str,
    pub state_kind: String,
    pub n: Option<usize>,
    pub p: Option<f64>,
    pub seed: Option<u64>,
    pub w3: f64,
    pub w4: f64,
    pub ppt_spectrum: [f64; 4],
    pub u: [f64; 3],
    pub m_value: f64,
    pub f_max: f64,
    pub entangled: bool,
    pub bell_violating: bool,
    pub teleport_useful: bool,
    pub notes: Vec<String>,
    pub density: Option<DensityFile>,
}

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

impl OutputRecord {
    pub fn new(
        state_kind: String,
        n: Option<usize>,
        p: Option<f64>,
        report: &DiagnosticsReport,
        notes: Vec<String>,
        density: Option<DensityFile>,
    ) -> Self {
        Self {
            tool_version: TOOL_VERSION,
            state_kind,
            n,
            p,
            seed: None,
            w3: report.w3,
            w4: report.w4,
            ppt_spectrum: report.ppt_spectrum,
            u: report.u,
            m_value: report.m_value,
            f_max: report.f_max,
            entangled: report.entangled,
            bell_violating: report.bell_violating,
            teleport_useful: report.teleport_useful,
            notes,
            density,
        }
    }
}

/// JSON formatter that renders every f64 with 17 significant digits so that
/// parsing the output reproduces the value bit-exactly.
struct FullPrecision;

impl serde_json::ser::Formatter for FullPrecision {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        write!(writer, "{value:.16e}")
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, FullPrecision);
    value.serialize(&mut ser).expect("in-memory serialization");
    String::from_utf8(buf).expect("JSON is UTF-8")
}

/// Full-precision decimal rendering used by the CSV writer.
pub fn full(v: f64) -> String {
    format!("{v:.16e}")
}

pub const SWEEP_CSV_HEADER: &str =
    "p,w3,w4,ppt_min,u1,u2,u3,m,f_max,entangled,bell_violating,teleport_useful";

pub fn sweep_csv_row(p: f64, r: &DiagnosticsReport) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{},{},{}",
        full(p),
        full(r.w3),
        full(r.w4),
        full(r.ppt_spectrum[0]),
        full(r.u[0]),
        full(r.u[1]),
        full(r.u[2]),
        full(r.m_value),
        full(r.f_max),
        r.entangled,
        r.bell_violating,
        r.teleport_useful
    )
}

fn verdict(value: bool, boundary: bool) -> String {
    match (value, boundary) {
        (true, _) => "yes".into(),
        (false, true) => "no (boundary)".into(),
        (false, false) => "no".into(),
    }
}

/// Human-readable report, six decimals.
pub fn render_text(record: &OutputRecord, report: &DiagnosticsReport) -> String {
    let mut out = String::new();
    let mut line = |s: String| {
        out.push_str(&s);
        out.push('\n');
    };
    let mut header = format!("state: {}", record.state_kind);
    if let Some(n) = record.n {
        header.push_str(&format!(", n = {n}"));
    }
    if let Some(p) = record.p {
        header.push_str(&format!(", p = {p:.6}"));
    }
    line(header);
    line(format!("w3: {:.6}", record.w3));
    line(format!("w4: {:.6}", record.w4));
    line(format!(
        "ppt spectrum: {:.6} {:.6} {:.6} {:.6}",
        record.ppt_spectrum[0], record.ppt_spectrum[1], record.ppt_spectrum[2], record.ppt_spectrum[3]
    ));
    line(format!(
        "u (descending): {:.6} {:.6} {:.6}",
        record.u[0], record.u[1], record.u[2]
    ));
    line(format!("m_value: {:.6}", record.m_value));
    line(format!("f_max: {:.6}", record.f_max));
    line(format!(
        "entangled: {}",
        verdict(record.entangled, report.entangled_boundary())
    ));
    line(format!(
        "bell_violating: {}",
        verdict(record.bell_violating, report.bell_boundary())
    ));
    line(format!(
        "teleport_useful: {}",
        verdict(record.teleport_useful, report.teleport_boundary())
    ));
    if let Some(density) = &record.density {
        line("density (re | im):".into());
        for i in 0..4 {
            let re: Vec<String> = density.re[i].iter().map(|v| format!("{v:+.6}")).collect();
            let im: Vec<String> = density.im[i].iter().map(|v| format!("{v:+.6}")).collect();
            line(format!("  {} | {}", re.join(" "), im.join(" ")));
        }
    }
    for note in &record.notes {
        line(format!("note: {note}"));
    }
    out
}
