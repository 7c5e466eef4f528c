//! Solution records: the on-disk JSON/CSV formats, audited reloading, and
//! reproducible writing.
//!
//! A solutions file is a JSON array of self-contained records, each holding
//! the sector, one spectral point with its residual bundle, and provenance
//! (scan configuration, tool version, timestamp). Floats are written with 17
//! significant digits so reload is bit-exact; auditing a reloaded record
//! therefore reproduces every stored residual bit for bit unless the file
//! was edited.

use std::io::{self, Write as _};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::context::PhysicalContext;
use crate::dirac;
use crate::spectra::{
    self, QesParams, ResidualBundle, ScanConfig, SpectralPoint, DEFAULT_ODE_SAMPLES,
};
use crate::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Provenance {
    pub scan: ScanConfig,
    pub tool_version: String,
    pub timestamp: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SolutionRecord {
    pub schema_version: u32,
    pub context: PhysicalContext,
    pub point: SpectralPoint,
    pub provenance: Provenance,
}

/// Wrap scan results as records sharing one provenance stamp.
pub fn make_records(
    ctx: &PhysicalContext,
    points: Vec<SpectralPoint>,
    scan: &ScanConfig,
) -> Vec<SolutionRecord> {
    let provenance = Provenance {
        scan: scan.clone(),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        timestamp: timestamp_utc(),
    };
    points
        .into_iter()
        .map(|point| SolutionRecord {
            schema_version: SCHEMA_VERSION,
            context: *ctx,
            point,
            provenance: provenance.clone(),
        })
        .collect()
}

// ---------------------------------------------------------------------------
// 17-significant-digit JSON
// ---------------------------------------------------------------------------

/// Scientific notation with 17 significant digits: round-trips every finite
/// f64 exactly.
pub fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

/// Pretty JSON formatter that writes every float via [`fmt17`].
struct SciFormatter {
    inner: serde_json::ser::PrettyFormatter<'static>,
}

impl serde_json::ser::Formatter for SciFormatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        w.write_all(fmt17(value).as_bytes())
    }
    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_array(w)
    }
    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_array(w)
    }
    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.inner.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_array_value(w)
    }
    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_object(w)
    }
    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_object(w)
    }
    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.inner.begin_object_key(w, first)
    }
    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_object_value(w)
    }
}

/// Serialize any value as pretty JSON with 17-digit floats and a trailing
/// newline.
pub fn to_json_17<T: Serialize>(value: &T) -> Result<String> {
    let mut out = Vec::new();
    let fmt = SciFormatter { inner: serde_json::ser::PrettyFormatter::new() };
    let mut ser = serde_json::Serializer::with_formatter(&mut out, fmt);
    value.serialize(&mut ser)?;
    out.push(b'\n');
    Ok(String::from_utf8(out).expect("JSON serializer emits UTF-8"))
}

pub fn records_to_json(records: &[SolutionRecord]) -> Result<String> {
    to_json_17(&records)
}

/// Parse a solutions file, validating the schema version and rebuilding the
/// derived context fields (which are not stored).
pub fn records_from_json(text: &str) -> Result<Vec<SolutionRecord>> {
    let mut records: Vec<SolutionRecord> = serde_json::from_str(text)?;
    for (i, rec) in records.iter_mut().enumerate() {
        if rec.schema_version != SCHEMA_VERSION {
            return Err(Error::InvalidArgument(format!(
                "record {i}: unsupported schema_version {} (expected {SCHEMA_VERSION})",
                rec.schema_version
            )));
        }
        rec.context = rec.context.rederive()?;
    }
    Ok(records)
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

pub fn solve_csv(records: &[SolutionRecord]) -> String {
    let mut s = String::from("x0,E,eB,t,branch,dirac_max\n");
    for rec in records {
        let p = &rec.point;
        s.push_str(&format!(
            "{},{},{},{},{},{}\n",
            fmt17(p.x0),
            fmt17(p.energy),
            fmt17(p.e_b),
            fmt17(p.t),
            p.branch,
            fmt17(p.residuals.dirac_max)
        ));
    }
    s
}

pub fn wavefunction_csv(samples: &[dirac::WavefunctionSample]) -> String {
    let mut s = String::from("r,x,F,G\n");
    for w in samples {
        s.push_str(&format!("{},{},{},{}\n", fmt17(w.r), fmt17(w.x), fmt17(w.f), fmt17(w.g)));
    }
    s
}

// ---------------------------------------------------------------------------
// Record auditing
// ---------------------------------------------------------------------------

/// Everything `check` recomputes from one stored record. All residuals are
/// derived from the stored point data, never from re-solving, so a corrupted
/// field shows up in exactly the checks it participates in.
#[derive(Clone, Debug)]
pub struct RecordAudit {
    /// parameter cross-check identities (relative)
    pub identities: [f64; 3],
    /// worst residual of the stored vector on the back-substitution rows
    pub kernel_tail: f64,
    /// disagreement between stored and freshly divided lower polynomial
    pub pcoeff_gap: f64,
    /// the stored kernel vector must be monic in its top coefficient
    pub monic_ok: bool,
    pub recomputed: ResidualBundle,
    /// residual-bundle fields whose recomputed value differs in bits from
    /// the stored one
    pub strict_mismatches: Vec<&'static str>,
    /// largest of all recomputed residuals and identity violations
    pub worst: f64,
}

impl RecordAudit {
    pub fn pass(&self, tol: f64) -> bool {
        self.monic_ok && self.worst <= tol
    }
    pub fn pass_strict(&self, tol: f64) -> bool {
        self.pass(tol) && self.strict_mismatches.is_empty()
    }
}

pub fn audit_record(rec: &SolutionRecord) -> Result<RecordAudit> {
    let ctx = rec.context.rederive()?;
    let pt = &rec.point;
    let n = ctx.n as usize;
    if pt.qcoeffs.len() != n + 1 || pt.pcoeffs.len() != n + 2 {
        return Err(Error::InvalidArgument(format!(
            "stored polynomial degrees do not match the sector: |Q| = {}, |P| = {}, n = {n}",
            pt.qcoeffs.len(),
            pt.pcoeffs.len()
        )));
    }
    let monic_ok = pt.qcoeffs[n] == 1.0;

    // Kernel system from the stored parameters (not re-derived from x0).
    let qp = QesParams { b0: pt.b0, b: pt.b, c: pt.c };
    let sys = spectra::build_kernel_system(&ctx, pt.x0, &qp)?;
    let kernel_r0 = spectra::row_residual(&sys, &pt.qcoeffs, 0).abs();
    let kernel_r1 = spectra::row_residual(&sys, &pt.qcoeffs, 1).abs();
    let mut kernel_tail = 0.0f64;
    for j in 2..=n + 1 {
        kernel_tail = kernel_tail.max(spectra::row_residual(&sys, &pt.qcoeffs, j).abs());
    }
    let sigma_min = spectra::sigma_min(&sys);

    let ep = spectra::EnergyPoint { t: pt.t, e: pt.energy, l_b: pt.l_b, e_b: pt.e_b };
    let (p_rebuilt, divis_rem) = spectra::reconstruct_p(&ctx, &ep, pt.x0, &pt.qcoeffs);
    let p_scale = p_rebuilt.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let pcoeff_gap = pt
        .pcoeffs
        .iter()
        .zip(p_rebuilt.iter())
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs() / p_scale));

    let (ode_q, ode_p) = spectra::ode_residuals(&ctx, pt, &DEFAULT_ODE_SAMPLES);
    let grid = dirac::default_radial_grid(pt.l_b);
    let dcheck = dirac::dirac_residual(&ctx, pt, &grid)?;
    let identities = spectra::compatibility_check(&ctx, pt);

    let recomputed = ResidualBundle {
        kernel_r0,
        kernel_r1,
        sigma_min,
        divis_rem,
        ode_q,
        ode_p,
        dirac_max: dcheck.max_residual,
    };
    let stored = &pt.residuals;
    let pairs: [(&'static str, f64, f64); 7] = [
        ("kernel_r0", recomputed.kernel_r0, stored.kernel_r0),
        ("kernel_r1", recomputed.kernel_r1, stored.kernel_r1),
        ("sigma_min", recomputed.sigma_min, stored.sigma_min),
        ("divis_rem", recomputed.divis_rem, stored.divis_rem),
        ("ode_q", recomputed.ode_q, stored.ode_q),
        ("ode_p", recomputed.ode_p, stored.ode_p),
        ("dirac_max", recomputed.dirac_max, stored.dirac_max),
    ];
    let strict_mismatches: Vec<&'static str> = pairs
        .iter()
        .filter(|(_, a, b)| a.to_bits() != b.to_bits())
        .map(|(name, _, _)| *name)
        .collect();

    let mut worst = kernel_tail.max(pcoeff_gap);
    for v in identities {
        worst = worst.max(v);
    }
    for (_, a, _) in pairs {
        worst = worst.max(a);
    }
    Ok(RecordAudit { identities, kernel_tail, pcoeff_gap, monic_ok, recomputed, strict_mismatches, worst })
}

// ---------------------------------------------------------------------------
// Files and timestamps
// ---------------------------------------------------------------------------

/// Write via a temp file in the destination directory plus atomic rename, so
/// readers never observe a half-written artifact.
pub fn atomic_write(path: &Path, contents: &str) -> Result<()> {
    let parent = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(parent)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

/// RFC 3339 UTC timestamp; honours SOURCE_DATE_EPOCH for reproducible
/// artifacts.
pub fn timestamp_utc() -> String {
    if let Ok(v) = std::env::var("SOURCE_DATE_EPOCH") {
        if let Ok(secs) = v.parse::<i64>() {
            if let Some(dt) = chrono::DateTime::from_timestamp(secs, 0) {
                return dt.to_rfc3339_opts(chrono::SecondsFormat::Secs, true);
            }
        }
    }
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
}
