//! Verify every bracket relation of the superalgebra representation, first
//! with the degree parameter n kept symbolic, then at a couple of fixed
//! values (including a non-integer one, where the operators still close).

use qes_dirac::osp22::{make_generators, verify_osp_relations, NParam};
use qes_dirac::rational::{frac, rat};
use qes_dirac::report::VerifyDocument;

fn main() {
    let symbolic = verify_osp_relations(&make_generators(NParam::Symbolic));
    let at_two = verify_osp_relations(&make_generators(NParam::Value(rat(2))));
    let at_half = verify_osp_relations(&make_generators(NParam::Value(frac(5, 2))));

    let doc = VerifyDocument::new(vec![symbolic, at_two, at_half]);
    print!("{}", doc.render_text());
    std::process::exit(if doc.overall_pass { 0 } else { 1 });
}
