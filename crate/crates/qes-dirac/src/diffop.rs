//! Linear differential operators in d/dx with polynomial coefficients.
//!
//! An operator is a finite sum p_k(x; params) dx^k stored as order -> coeff
//! with no zero coefficients; the empty sum is the zero operator.
//! Composition normalizes with the Leibniz rule, e.g. dx o p = p dx + p'.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;

use crate::poly::MultiPoly;
use crate::rational::Rational;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BracketKind {
    Commutator,
    Anticommutator,
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct DiffOp {
    terms: BTreeMap<u32, MultiPoly>,
}

impl DiffOp {
    pub fn zero() -> DiffOp {
        DiffOp { terms: BTreeMap::new() }
    }

    /// Multiplication by a polynomial (order-0 operator).
    pub fn from_poly(p: MultiPoly) -> DiffOp {
        DiffOp::term(0, p)
    }

    /// Single term p(x; params) dx^k.
    pub fn term(order: u32, p: MultiPoly) -> DiffOp {
        let mut op = DiffOp::zero();
        op.add_term(order, p);
        op
    }

    /// The derivative dx.
    pub fn d() -> DiffOp {
        DiffOp::term(1, MultiPoly::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_order(&self) -> Option<u32> {
        self.terms.keys().next_back().copied()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&u32, &MultiPoly)> {
        self.terms.iter()
    }

    pub fn coeff(&self, order: u32) -> MultiPoly {
        self.terms.get(&order).cloned().unwrap_or_else(MultiPoly::zero)
    }

    fn add_term(&mut self, order: u32, p: MultiPoly) {
        if p.is_zero() {
            return;
        }
        match self.terms.entry(order) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(p);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &p;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, rhs: &DiffOp) -> DiffOp {
        let mut out = self.clone();
        for (k, p) in &rhs.terms {
            out.add_term(*k, p.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &DiffOp) -> DiffOp {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> DiffOp {
        let mut out = DiffOp::zero();
        for (k, p) in &self.terms {
            out.terms.insert(*k, -p);
        }
        out
    }

    /// Left-multiply every coefficient by a polynomial.
    pub fn scale_poly(&self, p: &MultiPoly) -> DiffOp {
        let mut out = DiffOp::zero();
        for (k, q) in &self.terms {
            out.add_term(*k, p * q);
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> DiffOp {
        let mut out = DiffOp::zero();
        for (k, q) in &self.terms {
            out.add_term(*k, q.scale(c));
        }
        out
    }

    /// Operator composition `self o rhs` (rhs acts first), normalized by the
    /// general Leibniz rule: dx^k o q = sum_i C(k,i) q^(i) dx^(k-i).
    pub fn compose(&self, rhs: &DiffOp) -> DiffOp {
        let mut out = DiffOp::zero();
        for (&k, p) in &self.terms {
            for (&j, q) in &rhs.terms {
                for i in 0..=k {
                    let coeff = Rational::from_integer(binomial(k, i));
                    let piece = (p * &q.dx_k(i)).scale(&coeff);
                    out.add_term(k - i + j, piece);
                }
            }
        }
        out
    }

    pub fn bracket(&self, rhs: &DiffOp, kind: BracketKind) -> DiffOp {
        let ab = self.compose(rhs);
        let ba = rhs.compose(self);
        match kind {
            BracketKind::Commutator => ab.sub(&ba),
            BracketKind::Anticommutator => ab.add(&ba),
        }
    }

    /// Apply to a polynomial: sum p_k * v^(k).
    pub fn apply(&self, v: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (&k, p) in &self.terms {
            out = &out + &(p * &v.dx_k(k));
        }
        out
    }
}

fn binomial(k: u32, i: u32) -> BigInt {
    let mut r = BigInt::from(1);
    for j in 0..i {
        r = r * BigInt::from(k - j) / BigInt::from(j + 1);
    }
    r
}

impl fmt::Display for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&k, p) in self.terms.iter().rev() {
            let d = match k {
                0 => String::new(),
                1 => "dx".to_string(),
                _ => format!("dx^{k}"),
            };
            let piece = if k == 0 {
                format!("{p}")
            } else if p.is_one() {
                d
            } else if p.num_terms() == 1 {
                format!("{p}*{d}")
            } else {
                format!("({p})*{d}")
            };
            if first {
                write!(f, "{piece}")?;
            } else if let Some(rest) = piece.strip_prefix('-') {
                write!(f, " - {rest}")?;
            } else {
                write!(f, " + {piece}")?;
            }
            first = false;
        }
        Ok(())
    }
}
