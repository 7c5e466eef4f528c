//! 2x2 matrices of differential operators acting on two-component
//! polynomial vectors. Products compose entrywise operators with the right
//! factor acting first, matching operator action on column vectors.

use std::fmt;

use crate::diffop::{BracketKind, DiffOp};
use crate::poly::MultiPoly;
use crate::rational::Rational;

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct MatOp {
    pub e: [[DiffOp; 2]; 2],
}

impl MatOp {
    pub fn zero() -> MatOp {
        MatOp::default()
    }

    pub fn new(e: [[DiffOp; 2]; 2]) -> MatOp {
        MatOp { e }
    }

    /// diag(a, d)
    pub fn diag(a: DiffOp, d: DiffOp) -> MatOp {
        MatOp::new([[a, DiffOp::zero()], [DiffOp::zero(), d]])
    }

    /// Lower-left corner entry, zero elsewhere.
    pub fn lower_left(op: DiffOp) -> MatOp {
        MatOp::new([[DiffOp::zero(), DiffOp::zero()], [op, DiffOp::zero()]])
    }

    /// Upper-right corner entry, zero elsewhere.
    pub fn upper_right(op: DiffOp) -> MatOp {
        MatOp::new([[DiffOp::zero(), op], [DiffOp::zero(), DiffOp::zero()]])
    }

    pub fn is_zero(&self) -> bool {
        self.e.iter().all(|row| row.iter().all(DiffOp::is_zero))
    }

    pub fn add(&self, rhs: &MatOp) -> MatOp {
        self.zip(rhs, DiffOp::add)
    }

    pub fn sub(&self, rhs: &MatOp) -> MatOp {
        self.zip(rhs, DiffOp::sub)
    }

    pub fn neg(&self) -> MatOp {
        self.map(DiffOp::neg)
    }

    pub fn scale_poly(&self, p: &MultiPoly) -> MatOp {
        self.map(|op| op.scale_poly(p))
    }

    pub fn scale(&self, c: &Rational) -> MatOp {
        self.map(|op| op.scale(c))
    }

    fn map(&self, f: impl Fn(&DiffOp) -> DiffOp) -> MatOp {
        let mut out = MatOp::zero();
        for i in 0..2 {
            for j in 0..2 {
                out.e[i][j] = f(&self.e[i][j]);
            }
        }
        out
    }

    fn zip(&self, rhs: &MatOp, f: impl Fn(&DiffOp, &DiffOp) -> DiffOp) -> MatOp {
        let mut out = MatOp::zero();
        for i in 0..2 {
            for j in 0..2 {
                out.e[i][j] = f(&self.e[i][j], &rhs.e[i][j]);
            }
        }
        out
    }

    /// Matrix product; `rhs` acts first on vectors.
    pub fn mul(&self, rhs: &MatOp) -> MatOp {
        let mut out = MatOp::zero();
        for i in 0..2 {
            for j in 0..2 {
                let mut acc = DiffOp::zero();
                for k in 0..2 {
                    acc = acc.add(&self.e[i][k].compose(&rhs.e[k][j]));
                }
                out.e[i][j] = acc;
            }
        }
        out
    }

    pub fn bracket(&self, rhs: &MatOp, kind: BracketKind) -> MatOp {
        let ab = self.mul(rhs);
        let ba = rhs.mul(self);
        match kind {
            BracketKind::Commutator => ab.sub(&ba),
            BracketKind::Anticommutator => ab.add(&ba),
        }
    }

    /// Apply to a two-component polynomial vector.
    pub fn apply(&self, v: &(MultiPoly, MultiPoly)) -> (MultiPoly, MultiPoly) {
        let up = &self.e[0][0].apply(&v.0) + &self.e[0][1].apply(&v.1);
        let lo = &self.e[1][0].apply(&v.0) + &self.e[1][1].apply(&v.1);
        (up, lo)
    }
}

impl fmt::Display for MatOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            self.e[0][0], self.e[0][1], self.e[1][0], self.e[1][1]
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Var;

    fn x() -> MultiPoly {
        MultiPoly::var(Var::X)
    }
    fn n() -> MultiPoly {
        MultiPoly::var(Var::N)
    }

    /// Q2 = [[0,0],[x,0]]
    fn q2() -> MatOp {
        MatOp::lower_left(DiffOp::from_poly(x()))
    }

    /// Q1 = [[0,0],[1,0]]
    fn q1() -> MatOp {
        MatOp::lower_left(DiffOp::from_poly(MultiPoly::one()))
    }

    /// T+ = diag(x^2 dx - n x, x^2 dx - (n+1) x)
    fn tplus() -> MatOp {
        let up = DiffOp::term(1, x().pow(2)).sub(&DiffOp::from_poly(&n() * &x()));
        let lo = DiffOp::term(1, x().pow(2))
            .sub(&DiffOp::from_poly(&(&n() + &MultiPoly::one()) * &x()));
        MatOp::diag(up, lo)
    }

    #[test]
    fn product_right_factor_first() {
        // Q2 * T+ = [[0,0],[x^3 dx - n x^2, 0]]
        let got = q2().mul(&tplus());
        let expect = MatOp::lower_left(
            DiffOp::term(1, x().pow(3)).sub(&DiffOp::from_poly(&n() * &x().pow(2))),
        );
        assert_eq!(got, expect);
    }

    #[test]
    fn strictly_triangular_nilpotency() {
        // Q1*Q2 + Q2*Q1 = 0
        let anti = q1().bracket(&q2(), BracketKind::Anticommutator);
        assert!(anti.is_zero());
    }

    #[test]
    fn apply_is_componentwise_action() {
        // T+ with numeric-style n applied to (x^n, 0) vanishes in the upper slot;
        // here n stays symbolic so use v = (x^2, 0) with n := 2 substituted first.
        let t = tplus();
        let n2 = t.map(|op| {
            let mut out = DiffOp::zero();
            for (k, p) in op.terms() {
                out = out.add(&DiffOp::term(*k, p.subst(&[(Var::N, crate::rational::rat(2))])));
            }
            out
        });
        let (up, lo) = n2.apply(&(x().pow(2), MultiPoly::zero()));
        assert!(up.is_zero());
        assert!(lo.is_zero());
    }

    #[test]
    fn product_compatible_with_apply() {
        let a = tplus();
        let b = q2();
        let v = (&x().pow(2) + &x(), x().pow(3));
        let lhs = a.mul(&b).apply(&v);
        let rhs = a.apply(&b.apply(&v));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn display_format() {
        assert_eq!(q2().to_string(), "[[0, 0], [x, 0]]");
    }
}
