//! Build both radial components for the lowest sector's spectral point and
//! tabulate them, then audit the point against the first-order system it
//! must satisfy.

use qes_dirac::derive_context;
use qes_dirac::dirac::{default_radial_grid, dirac_residual, sample_table};
use qes_dirac::spectra::{find_spectral_points, ScanConfig};

fn main() {
    let ctx = derive_context(1.0, 0.3, -1, 0).expect("subcritical coupling");
    let outcome = find_spectral_points(&ctx, &ScanConfig::default()).expect("valid scan");
    let pt = outcome.points.first().expect("this sector has one spectral point");

    println!(
        "point: x0 = {:+.15}, E = {:+.15}, lB = {:.15}\n",
        pt.x0, pt.energy, pt.l_b
    );

    println!("{:>14} {:>10} {:>22} {:>22}", "r", "r/lB", "F", "G");
    for s in sample_table(&ctx, pt, 10.0 * pt.l_b, 16).expect("table parameters are valid") {
        println!("{:14.6e} {:10.4} {:22.15e} {:22.15e}", s.r, s.x, s.f, s.g);
    }

    let check = dirac_residual(&ctx, pt, &default_radial_grid(pt.l_b)).expect("nonempty grid");
    println!(
        "\nfirst-order system: max residual = {:.3e}, derivative cross-check = {:.3e}",
        check.max_residual, check.max_deriv_mismatch
    );
}
