//! Scan one sector for spectral points and print the resulting (E, B) pairs
//! with their residual bundles.
//!
//! Every accepted point is a position x0 where the banded coefficient
//! system acquires a kernel vector; energy and field strength follow in
//! closed form.

use qes_dirac::spectra::{find_spectral_points, ScanConfig};
use qes_dirac::derive_context;

fn main() {
    let ctx = derive_context(1.0, 0.3, -1, 2).expect("subcritical coupling");
    let cfg = ScanConfig::default();
    let outcome = find_spectral_points(&ctx, &cfg).expect("scan configuration is valid");

    println!(
        "sector: m = {}, Z*alpha = {}, l = {}, n = {}  (gamma = {:.6})",
        ctx.m, ctx.zalpha, ctx.l, ctx.n, ctx.gamma
    );
    println!(
        "scanned x0 in [{}, {}] over {} cells; {} point(s) accepted\n",
        cfg.x0_min, cfg.x0_max, outcome.diagnostics.cells_scanned, outcome.points.len()
    );

    for (i, p) in outcome.points.iter().enumerate() {
        println!("point {i}: x0 = {:+.15}  branch = {}", p.x0, p.branch);
        println!("  E = {:+.15}   eB = {:.15}   t = {:.6}", p.energy, p.e_b, p.t);
        println!("  Q coefficients: {:?}", p.qcoeffs);
        println!("  P coefficients: {:?}", p.pcoeffs);
        let r = &p.residuals;
        println!(
            "  residuals: r0 = {:.2e}, r1 = {:.2e}, sigma_min = {:.2e}, division = {:.2e},",
            r.kernel_r0, r.kernel_r1, r.sigma_min, r.divis_rem
        );
        println!(
            "             ode_q = {:.2e}, ode_p = {:.2e}, dirac = {:.2e}\n",
            r.ode_q, r.ode_p, r.dirac_max
        );
    }

    if !outcome.diagnostics.near_misses.is_empty() {
        println!("rejected candidates:");
        for nm in &outcome.diagnostics.near_misses {
            println!("  x0 = {:+.9}: {}", nm.x0, nm.reason);
        }
    }
}
