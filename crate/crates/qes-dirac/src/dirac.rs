//! Radial wavefunction assembly and the end-to-end residual of the
//! first-order system both components must satisfy.
//!
//! F and G share the envelope x^gamma exp(-x^2/4) with x = r / lB and carry
//! the polynomial parts Q (degree n) and P (degree n+1). The coupled system
//! checked here is
//!
//!   F' - kappa(r) F + (E + m + Z*alpha/r) G = 0
//!   G' + kappa(r) G - (E - m + Z*alpha/r) F = 0
//!
//! with kappa(r) = (l + 1/2)/r + eB r / 2. Each equation is scored as
//! |sum of terms| / sum of |terms| per radius (0/0 counts as 0), and the
//! analytic derivatives are cross-checked against central differences.

use serde::{Deserialize, Serialize};

use crate::context::PhysicalContext;
use crate::spectra::{poly_deriv_eval, poly_eval, SpectralPoint};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct WavefunctionSample {
    pub r: f64,
    pub x: f64,
    pub f: f64,
    pub g: f64,
}

#[derive(Clone, Copy, Debug)]
pub struct DiracCheck {
    pub max_residual: f64,
    pub max_deriv_mismatch: f64,
}

/// 64 log-spaced radii covering [lB/10, 10 lB], the window where the
/// envelope transitions from power law to Gaussian decay.
pub fn default_radial_grid(l_b: f64) -> Vec<f64> {
    let count = 64;
    (0..count)
        .map(|i| 0.1 * l_b * 100.0f64.powf(i as f64 / (count - 1) as f64))
        .collect()
}

/// Both components at radius r > 0.
pub fn assemble_fg(ctx: &PhysicalContext, pt: &SpectralPoint, r: f64) -> Result<(f64, f64)> {
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::InvalidArgument(format!("radius must be positive, got {r}")));
    }
    let x = r / pt.l_b;
    let pref = x.powf(ctx.gamma) * (-x * x / 4.0).exp();
    Ok((pref * poly_eval(&pt.qcoeffs, x), pref * poly_eval(&pt.pcoeffs, x)))
}

/// d/dr of envelope * poly at radius r.
fn radial_derivative(ctx: &PhysicalContext, pt: &SpectralPoint, coeffs: &[f64], r: f64) -> f64 {
    let x = r / pt.l_b;
    let pref = x.powf(ctx.gamma) * (-x * x / 4.0).exp();
    pref * ((ctx.gamma / x - x / 2.0) * poly_eval(coeffs, x) + poly_deriv_eval(coeffs, x)) / pt.l_b
}

fn scored_sum(terms: &[f64]) -> f64 {
    let val: f64 = terms.iter().sum();
    let norm: f64 = terms.iter().map(|t| t.abs()).sum();
    if norm > 0.0 {
        val.abs() / norm
    } else {
        0.0
    }
}

/// Evaluate the coupled first-order system on a set of radii. Reports the
/// worst per-radius equation residual and the worst relative disagreement
/// between analytic and central-difference derivatives; the difference
/// comparison skips radii where both candidates are below 1e-3 of the
/// largest derivative magnitude on the grid (nothing to compare against
/// there but rounding noise).
pub fn dirac_residual(ctx: &PhysicalContext, pt: &SpectralPoint, rs: &[f64]) -> Result<DiracCheck> {
    if rs.is_empty() {
        return Err(Error::EmptySampleSet);
    }
    let mut dfs = Vec::with_capacity(rs.len());
    let mut dgs = Vec::with_capacity(rs.len());
    let mut max_residual = 0.0f64;
    for &r in rs {
        let (f, g) = assemble_fg(ctx, pt, r)?;
        let df = radial_derivative(ctx, pt, &pt.qcoeffs, r);
        let dg = radial_derivative(ctx, pt, &pt.pcoeffs, r);
        dfs.push(df);
        dgs.push(dg);
        let kappa = (ctx.l as f64 + 0.5) / r + pt.e_b * r / 2.0;
        let eq1 = [df, -kappa * f, (pt.energy + ctx.m + ctx.zalpha / r) * g];
        let eq2 = [dg, kappa * g, -(pt.energy - ctx.m + ctx.zalpha / r) * f];
        max_residual = max_residual.max(scored_sum(&eq1)).max(scored_sum(&eq2));
    }
    let df_scale = dfs.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let dg_scale = dgs.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut max_mismatch = 0.0f64;
    for (i, &r) in rs.iter().enumerate() {
        let h = 1e-6 * r;
        let (fp, gp) = assemble_fg(ctx, pt, r + h)?;
        let (fm, gm) = assemble_fg(ctx, pt, r - h)?;
        let fd_f = (fp - fm) / (2.0 * h);
        let fd_g = (gp - gm) / (2.0 * h);
        for (an, fd, scale) in [(dfs[i], fd_f, df_scale), (dgs[i], fd_g, dg_scale)] {
            let denom = an.abs().max(fd.abs());
            if denom >= 1e-3 * scale {
                max_mismatch = max_mismatch.max((an - fd).abs() / denom);
            }
        }
    }
    Ok(DiracCheck { max_residual, max_deriv_mismatch: max_mismatch })
}

/// Log-spaced table of both components on [r_max/1000, r_max].
pub fn sample_table(
    ctx: &PhysicalContext,
    pt: &SpectralPoint,
    r_max: f64,
    count: usize,
) -> Result<Vec<WavefunctionSample>> {
    if count < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 samples, got {count}")));
    }
    if !(r_max.is_finite() && r_max > 0.0) {
        return Err(Error::InvalidArgument(format!("r_max must be positive, got {r_max}")));
    }
    let r_min = r_max / 1000.0;
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let r = r_min * 1000.0f64.powf(i as f64 / (count - 1) as f64);
        let (f, g) = assemble_fg(ctx, pt, r)?;
        out.push(WavefunctionSample { r, x: r / pt.l_b, f, g });
    }
    Ok(out)
}
