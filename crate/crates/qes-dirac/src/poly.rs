//! Sparse multivariate polynomials over exact rationals.
//!
//! Key points:
//! - Fixed variable set {x, n, beta, x0, b, c}; `x` is the only variable the
//!   differential operators act on, the rest are symbolic parameters.
//! - Terms live in an ordered map keyed by exponent vector; zero coefficients
//!   are never stored, so structural equality is semantic equality.
//! - Term order is total degree first, then lexicographic in declaration
//!   order, which fixes a canonical rendering.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::rational::{rat, Rational};

/// Variable set, in canonical (lexicographic tie-break) order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Var {
    X,
    N,
    Beta,
    X0,
    B,
    C,
}

impl Var {
    pub const ALL: [Var; 6] = [Var::X, Var::N, Var::Beta, Var::X0, Var::B, Var::C];

    pub fn name(self) -> &'static str {
        match self {
            Var::X => "x",
            Var::N => "n",
            Var::Beta => "beta",
            Var::X0 => "x0",
            Var::B => "b",
            Var::C => "c",
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

/// Exponent vector of a single term.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Mono {
    exps: [u16; 6],
}

impl Mono {
    const UNIT: Mono = Mono { exps: [0; 6] };

    fn var(v: Var, e: u16) -> Mono {
        let mut exps = [0; 6];
        exps[v.index()] = e;
        Mono { exps }
    }

    pub fn exp(&self, v: Var) -> u16 {
        self.exps[v.index()]
    }

    pub fn total_degree(&self) -> u32 {
        self.exps.iter().map(|&e| e as u32).sum()
    }

    fn mul(&self, other: &Mono) -> Mono {
        let mut exps = [0; 6];
        for (slot, (a, b)) in exps.iter_mut().zip(self.exps.iter().zip(other.exps.iter())) {
            *slot = a.checked_add(*b).expect("exponent overflow");
        }
        Mono { exps }
    }

    fn is_unit(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.total_degree(), self.exps).cmp(&(other.total_degree(), other.exps))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for v in Var::ALL {
            let e = self.exp(v);
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{}", v.name())?;
            } else {
                write!(f, "{}^{}", v.name(), e)?;
            }
        }
        Ok(())
    }
}

/// Sparse polynomial in canonical form: no zero coefficients stored.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct MultiPoly {
    terms: BTreeMap<Mono, Rational>,
}

impl MultiPoly {
    pub fn zero() -> MultiPoly {
        MultiPoly { terms: BTreeMap::new() }
    }

    pub fn constant(c: Rational) -> MultiPoly {
        let mut p = MultiPoly::zero();
        p.add_term(Mono::UNIT, c);
        p
    }

    pub fn int(n: i64) -> MultiPoly {
        MultiPoly::constant(rat(n))
    }

    pub fn one() -> MultiPoly {
        MultiPoly::int(1)
    }

    pub fn var(v: Var) -> MultiPoly {
        MultiPoly::var_pow(v, 1)
    }

    pub fn var_pow(v: Var, e: u16) -> MultiPoly {
        let mut p = MultiPoly::zero();
        p.add_term(Mono::var(v, e), rat(1));
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&Mono::UNIT).is_some_and(|c| c.is_one())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Accumulate a term, dropping the entry when the coefficient cancels.
    fn add_term(&mut self, m: Mono, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero();
        }
        let mut out = MultiPoly::zero();
        for (m, k) in &self.terms {
            out.terms.insert(*m, k * c);
        }
        out
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut out = MultiPoly::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Partial derivative with respect to `x` (the only differentiation
    /// variable in this crate).
    pub fn dx(&self) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (m, c) in &self.terms {
            let e = m.exp(Var::X);
            if e == 0 {
                continue;
            }
            let mut exps = m.exps;
            exps[Var::X.index()] = e - 1;
            out.add_term(Mono { exps }, c * rat(e as i64));
        }
        out
    }

    /// k-fold derivative with respect to `x`.
    pub fn dx_k(&self, k: u32) -> MultiPoly {
        let mut out = self.clone();
        for _ in 0..k {
            out = out.dx();
        }
        out
    }

    /// Highest power of `v` present; `None` for the zero polynomial.
    pub fn degree_in(&self, v: Var) -> Option<u32> {
        self.terms.keys().map(|m| m.exp(v) as u32).max()
    }

    /// Coefficient of `x^k` as a polynomial in the parameters.
    pub fn coeff_of_x(&self, k: u16) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (m, c) in &self.terms {
            if m.exp(Var::X) == k {
                let mut exps = m.exps;
                exps[Var::X.index()] = 0;
                out.add_term(Mono { exps }, c.clone());
            }
        }
        out
    }

    /// Coefficients by power of `x` (index = power), empty for zero.
    pub fn x_coefficients(&self) -> Vec<MultiPoly> {
        match self.degree_in(Var::X) {
            None => Vec::new(),
            Some(d) => (0..=d as u16).map(|k| self.coeff_of_x(k)).collect(),
        }
    }

    /// Substitute exact values for a subset of the variables.
    pub fn subst(&self, vals: &[(Var, Rational)]) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut exps = m.exps;
            for (v, val) in vals {
                let e = m.exp(*v);
                if e > 0 {
                    coeff *= pow_rat(val, e);
                    exps[v.index()] = 0;
                }
            }
            out.add_term(Mono { exps }, coeff);
        }
        out
    }

    /// Exact evaluation with every variable bound.
    pub fn eval(&self, bind: &dyn Fn(Var) -> Rational) -> Rational {
        let mut acc = rat(0);
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for v in Var::ALL {
                let e = m.exp(v);
                if e > 0 {
                    t *= pow_rat(&bind(v), e);
                }
            }
            acc += t;
        }
        acc
    }

    /// Floating-point evaluation with every variable bound.
    pub fn eval_f64(&self, bind: &dyn Fn(Var) -> f64) -> f64 {
        let mut acc = 0.0;
        for (m, c) in &self.terms {
            let mut t = crate::rational::to_f64(c);
            for v in Var::ALL {
                let e = m.exp(v);
                if e > 0 {
                    t *= bind(v).powi(e as i32);
                }
            }
            acc += t;
        }
        acc
    }

    /// Exact quotient by a divisor that is monic in `x` (leading `x`
    /// coefficient a nonzero constant), treating the other variables as
    /// coefficients. `None` when the division leaves a remainder.
    pub fn div_exact_in_x(&self, divisor: &MultiPoly) -> Option<MultiPoly> {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let dd = divisor.degree_in(Var::X).unwrap_or(0);
        let lead = divisor.coeff_of_x(dd as u16);
        assert!(
            lead.degree_in(Var::X).unwrap_or(0) == 0 && lead.num_terms() == 1 && lead.terms.contains_key(&Mono::UNIT),
            "divisor must have a constant leading x coefficient"
        );
        let lead_c = lead.terms.get(&Mono::UNIT).unwrap().clone();

        let mut rem = self.clone();
        let mut quot = MultiPoly::zero();
        loop {
            let rd = match rem.degree_in(Var::X) {
                None => return Some(quot),
                Some(rd) => rd,
            };
            if rd < dd {
                return if rem.is_zero() { Some(quot) } else { None };
            }
            let rlead = rem.coeff_of_x(rd as u16);
            let shift = MultiPoly::var_pow(Var::X, (rd - dd) as u16);
            let piece = &rlead.scale(&(rat(1) / &lead_c)) * &shift;
            quot = &quot + &piece;
            rem = &rem - &(&piece * divisor);
            if rem.degree_in(Var::X).is_none_or(|d| d < rd) {
                continue;
            }
            // leading term failed to cancel: divisor not monic enough
            return None;
        }
    }
}

fn pow_rat(r: &Rational, e: u16) -> Rational {
    let mut out = rat(1);
    for _ in 0..e {
        out *= r;
    }
    out
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c.clone());
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (m, c) in &self.terms {
            out.terms.insert(*m, -c.clone());
        }
        out
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // highest term first
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = if neg { -c.clone() } else { c.clone() };
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_unit() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}
