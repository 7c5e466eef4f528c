//! Show that all eight generators preserve the graded polynomial subspace
//! (degree <= n in the first slot, degree <= n+1 in the second) for a range
//! of integer n, and demonstrate one concrete image.

use qes_dirac::osp22::{make_generators, subspace_image_check, NParam};
use qes_dirac::rational::rat;
use qes_dirac::report::VerifyDocument;
use qes_dirac::{MultiPoly, Var};

fn main() {
    let doc = VerifyDocument::new((0..=4).map(subspace_image_check).collect());
    print!("{}", doc.render_text());

    // One image spelled out: T+ acting on (x^2, 0) at n = 2 stays inside.
    let g = make_generators(NParam::Value(rat(2)));
    let basis = (MultiPoly::var_pow(Var::X, 2), MultiPoly::zero());
    let image = g.tplus.apply(&basis);
    println!("T+ (x^2, 0) at n = 2  ->  ({}, {})", image.0, image.1);

    std::process::exit(if doc.overall_pass { 0 } else { 1 });
}
