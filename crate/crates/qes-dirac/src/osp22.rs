//! The osp(2,2) superalgebra representation on two-component polynomials
//! and the generator decomposition of the master radial operator.
//!
//! Generators act on vectors (p, q) with deg p <= n, deg q <= n+1:
//!
//! - bosonic: T+ = diag(x^2 dx - n x, x^2 dx - (n+1) x),
//!   T0 = diag(x dx - n/2, x dx - (n+1)/2), T- = diag(dx, dx),
//!   J = diag(-(n+2)/2, -(n+1)/2);
//! - fermionic: Q1 = [[0,0],[1,0]], Q2 = [[0,0],[x,0]],
//!   Qbar1 = [[0, x dx - (n+1)],[0,0]], Qbar2 = [[0, -dx],[0,0]].
//!
//! Everything here is exact: a relation passes only when the difference of
//! both sides is the canonical zero operator.

use crate::diffop::{BracketKind, DiffOp};
use crate::matop::MatOp;
use crate::poly::{MultiPoly, Var};
use crate::rational::{frac, rat, Rational};
use crate::report::{CheckLevel, RelationEntry, RelationReport};

/// The superspin parameter: left symbolic or fixed to an exact rational.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NParam {
    Symbolic,
    Value(Rational),
}

impl NParam {
    fn poly(&self) -> MultiPoly {
        match self {
            NParam::Symbolic => MultiPoly::var(Var::N),
            NParam::Value(r) => MultiPoly::constant(r.clone()),
        }
    }
}

#[derive(Clone, Debug)]
pub struct GeneratorSet {
    pub tplus: MatOp,
    pub tzero: MatOp,
    pub tminus: MatOp,
    pub jgen: MatOp,
    pub q1: MatOp,
    pub q2: MatOp,
    pub qbar1: MatOp,
    pub qbar2: MatOp,
    pub nparam: NParam,
}

pub fn make_generators(nparam: NParam) -> GeneratorSet {
    let x = MultiPoly::var(Var::X);
    let one = MultiPoly::one();
    let np = nparam.poly();
    let np1 = &np + &one;
    let np2 = &np1 + &one;

    let xdx = DiffOp::term(1, x.clone());
    let x2dx = DiffOp::term(1, x.pow(2));

    let tplus = MatOp::diag(
        x2dx.sub(&DiffOp::from_poly(&np * &x)),
        x2dx.sub(&DiffOp::from_poly(&np1 * &x)),
    );
    let tzero = MatOp::diag(
        xdx.sub(&DiffOp::from_poly(np.scale(&frac(1, 2)))),
        xdx.sub(&DiffOp::from_poly(np1.scale(&frac(1, 2)))),
    );
    let tminus = MatOp::diag(DiffOp::d(), DiffOp::d());
    let jgen = MatOp::diag(
        DiffOp::from_poly(np2.scale(&frac(-1, 2))),
        DiffOp::from_poly(np1.scale(&frac(-1, 2))),
    );
    let q1 = MatOp::lower_left(DiffOp::from_poly(one));
    let q2 = MatOp::lower_left(DiffOp::from_poly(x.clone()));
    let qbar1 = MatOp::upper_right(xdx.sub(&DiffOp::from_poly(np1)));
    let qbar2 = MatOp::upper_right(DiffOp::d().neg());

    GeneratorSet { tplus, tzero, tminus, jgen, q1, q2, qbar1, qbar2, nparam }
}

fn comm(a: &MatOp, b: &MatOp) -> MatOp {
    a.bracket(b, BracketKind::Commutator)
}

fn anti(a: &MatOp, b: &MatOp) -> MatOp {
    a.bracket(b, BracketKind::Anticommutator)
}

fn entry(name: &str, lhs: MatOp, rhs: MatOp, level: CheckLevel) -> RelationEntry {
    let diff = lhs.sub(&rhs);
    let pass = diff.is_zero();
    RelationEntry {
        name: name.to_string(),
        lhs: lhs.to_string(),
        pass,
        residual: if pass { None } else { Some(diff.to_string()) },
        level,
    }
}

/// All 26 bracket relations of the superalgebra, verified exactly, plus six
/// supplementary fermionic nilpotency checks.
pub fn verify_osp_relations(g: &GeneratorSet) -> RelationReport {
    use CheckLevel::{Required, Supplementary};
    let half = frac(1, 2);
    let GeneratorSet { tplus, tzero, tminus, jgen, q1, q2, qbar1, qbar2, .. } = g;

    let mut es = Vec::new();
    let mut req = |name: &str, lhs: MatOp, rhs: MatOp| es.push(entry(name, lhs, rhs, Required));

    req("[T0, T+] = T+", comm(tzero, tplus), tplus.clone());
    req("[T0, T-] = -T-", comm(tzero, tminus), tminus.neg());
    req("[T+, T-] = -2*T0", comm(tplus, tminus), tzero.scale(&rat(-2)));
    req("[J, T0] = 0", comm(jgen, tzero), MatOp::zero());
    req("[J, T+] = 0", comm(jgen, tplus), MatOp::zero());
    req("[J, T-] = 0", comm(jgen, tminus), MatOp::zero());

    req("{Q1, Qbar2} = -T-", anti(q1, qbar2), tminus.neg());
    req("{Q2, Qbar1} = T+", anti(q2, qbar1), tplus.clone());
    let s1 = anti(qbar1, q1);
    let s2 = anti(qbar2, q2);
    req("({Qbar1,Q1} + {Qbar2,Q2})/2 = J", s1.add(&s2).scale(&half), jgen.clone());
    req("({Qbar1,Q1} - {Qbar2,Q2})/2 = T0", s1.sub(&s2).scale(&half), tzero.clone());

    req("[Q1, T+] = Q2", comm(q1, tplus), q2.clone());
    req("[Q2, T+] = 0", comm(q2, tplus), MatOp::zero());
    req("[Q1, T-] = 0", comm(q1, tminus), MatOp::zero());
    req("[Q2, T-] = -Q1", comm(q2, tminus), q1.neg());
    req("[Qbar1, T+] = 0", comm(qbar1, tplus), MatOp::zero());
    req("[Qbar2, T+] = -Qbar1", comm(qbar2, tplus), qbar1.neg());
    req("[Qbar1, T-] = Qbar2", comm(qbar1, tminus), qbar2.clone());
    req("[Qbar2, T-] = 0", comm(qbar2, tminus), MatOp::zero());

    req("[Q1, T0] = Q1/2", comm(q1, tzero), q1.scale(&half));
    req("[Q2, T0] = -Q2/2", comm(q2, tzero), q2.scale(&half).neg());
    req("[Qbar1, T0] = -Qbar1/2", comm(qbar1, tzero), qbar1.scale(&half).neg());
    req("[Qbar2, T0] = Qbar2/2", comm(qbar2, tzero), qbar2.scale(&half));

    req("[Q1, J] = -Q1/2", comm(q1, jgen), q1.scale(&half).neg());
    req("[Q2, J] = -Q2/2", comm(q2, jgen), q2.scale(&half).neg());
    req("[Qbar1, J] = Qbar1/2", comm(qbar1, jgen), qbar1.scale(&half));
    req("[Qbar2, J] = Qbar2/2", comm(qbar2, jgen), qbar2.scale(&half));

    for (name, a, b) in [
        ("{Q1, Q1} = 0", q1, q1),
        ("{Q2, Q2} = 0", q2, q2),
        ("{Q1, Q2} = 0", q1, q2),
        ("{Qbar1, Qbar1} = 0", qbar1, qbar1),
        ("{Qbar2, Qbar2} = 0", qbar2, qbar2),
        ("{Qbar1, Qbar2} = 0", qbar1, qbar2),
    ] {
        es.push(entry(name, anti(a, b), MatOp::zero(), Supplementary));
    }

    let label = match &g.nparam {
        NParam::Symbolic => "n symbolic".to_string(),
        NParam::Value(r) => format!("n = {r}"),
    };
    RelationReport::new(format!("osp(2,2) bracket relations ({label})"), es)
}

/// Quadratic generator identities used to assemble the master operator.
/// Requires symbolic n.
pub fn verify_structure_identities(g: &GeneratorSet) -> RelationReport {
    assert!(g.nparam == NParam::Symbolic, "structure identities need symbolic n");
    let x = MultiPoly::var(Var::X);
    let n = MultiPoly::var(Var::N);
    let GeneratorSet { tplus, tzero, tminus, q1, q2, .. } = g;

    let ll = MatOp::lower_left;
    let es = vec![
        entry(
            "2*Q2*T0*T- - Q1*T+*T- = [[0,0],[x^2*dx^2,0]]",
            q2.mul(tzero).mul(tminus).scale(&rat(2)).sub(&q1.mul(tplus).mul(tminus)),
            ll(DiffOp::term(2, x.pow(2))),
            CheckLevel::Required,
        ),
        entry(
            "Q2*T-*T- = [[0,0],[x*dx^2,0]]",
            q2.mul(tminus).mul(tminus),
            ll(DiffOp::term(2, x.clone())),
            CheckLevel::Required,
        ),
        entry(
            "Q2*T+ = [[0,0],[x^3*dx - n*x^2,0]]",
            q2.mul(tplus),
            ll(DiffOp::term(1, x.pow(3)).sub(&DiffOp::from_poly(&n * &x.pow(2)))),
            CheckLevel::Required,
        ),
        entry(
            "2*Q2*T0 - Q1*T+ = [[0,0],[x^2*dx,0]]",
            q2.mul(tzero).scale(&rat(2)).sub(&q1.mul(tplus)),
            ll(DiffOp::term(1, x.pow(2))),
            CheckLevel::Required,
        ),
        entry(
            "2*(Q2*T0 - Q1*T+) = [[0,0],[n*x,0]]",
            q2.mul(tzero).sub(&q1.mul(tplus)).scale(&rat(2)),
            ll(DiffOp::from_poly(&n * &x)),
            CheckLevel::Required,
        ),
        entry(
            "Q2*T- = [[0,0],[x*dx,0]]",
            q2.mul(tminus),
            ll(DiffOp::term(1, x.clone())),
            CheckLevel::Required,
        ),
        entry(
            "Q1*T- = [[0,0],[dx,0]]",
            q1.mul(tminus),
            ll(DiffOp::d()),
            CheckLevel::Required,
        ),
    ];
    RelationReport::new("quadratic structure identities (n symbolic)", es)
}

/// Closed form of the master operator block: [[0,0],[T,0]] with
/// T = (x^2+x0*x) dx^2 + (-x^3 - x0*x^2 + 2*beta*x + 2*beta*x0) dx
///     + n*x^2 + (n*x0 + b - c)*x + b*x0.
pub fn tq_closed_form() -> MatOp {
    let [x, n, beta, x0, b, c] = param_polys();
    let two_beta = beta.scale(&rat(2));

    let p2 = &x.pow(2) + &(&x0 * &x);
    let p1 = &(&(&-(&x.pow(3)) - &(&x0 * &x.pow(2))) + &(&two_beta * &x)) + &(&two_beta * &x0);
    let p0 = &(&(&n * &x.pow(2)) + &(&(&(&(&n * &x0) + &b) - &c) * &x)) + &(&b * &x0);

    MatOp::lower_left(DiffOp::term(2, p2).add(&DiffOp::term(1, p1)).add(&DiffOp::from_poly(p0)))
}

/// The master radial equation in scaled form has rational coefficients:
/// dx^2 + (2*beta/x - x - 1/(x+x0)) dx + (n + b/x - c/(x+x0)).
/// This multiplies it through by x*(x+x0) term by term, clearing each
/// denominator by exact polynomial division.
pub fn tq_from_master_ode() -> MatOp {
    let [x, n, beta, x0, b, c] = param_polys();
    let shifted = &x + &x0;
    let multiplier = &x * &shifted;
    let one = MultiPoly::one();

    // (order, numerator, denominator)
    let terms = [
        (2, one.clone(), one.clone()),
        (1, beta.scale(&rat(2)), x.clone()),
        (1, -&x, one.clone()),
        (1, MultiPoly::int(-1), shifted.clone()),
        (0, n, one.clone()),
        (0, b, x.clone()),
        (0, -&c, shifted),
    ];

    let mut op = DiffOp::zero();
    for (order, numer, denom) in terms {
        let cofactor = multiplier
            .div_exact_in_x(&denom)
            .expect("every denominator divides the multiplier exactly");
        op = op.add(&DiffOp::term(order, &numer * &cofactor));
    }
    MatOp::lower_left(op)
}

/// Which coefficient the generator combination places on the Q2*T- term.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DecompositionMode {
    /// Coefficient 2*beta: reproduces the closed form `tq_closed_form`.
    Faithful,
    /// Coefficient 2*beta - 1: reproduces `tq_from_master_ode`.
    Corrected,
}

/// Assemble the master operator block from generator products:
/// (2*Q2*T0*T- - Q1*T+*T-) + x0*Q2*T-*T- - Q2*T+ - x0*(2*Q2*T0 - Q1*T+)
///   + w*Q2*T- + 2*beta*x0*Q1*T- + 2*x0*(Q2*T0 - Q1*T+) + (b-c)*Q2 + b*x0*Q1
///
/// with w = 2*beta (faithful) or 2*beta - 1 (corrected).
pub fn tq_from_generators(g: &GeneratorSet, mode: DecompositionMode) -> MatOp {
    assert!(g.nparam == NParam::Symbolic, "generator decomposition needs symbolic n");
    let [_, _, beta, x0, b, c] = param_polys();
    let two_beta = beta.scale(&rat(2));
    let w = match mode {
        DecompositionMode::Faithful => two_beta.clone(),
        DecompositionMode::Corrected => &two_beta - &MultiPoly::one(),
    };
    let GeneratorSet { tplus, tzero, tminus, q1, q2, .. } = g;

    let kinetic = q2.mul(tzero).mul(tminus).scale(&rat(2)).sub(&q1.mul(tplus).mul(tminus));
    let mut out = kinetic;
    out = out.add(&q2.mul(tminus).mul(tminus).scale_poly(&x0));
    out = out.sub(&q2.mul(tplus));
    out = out.sub(&q2.mul(tzero).scale(&rat(2)).sub(&q1.mul(tplus)).scale_poly(&x0));
    out = out.add(&q2.mul(tminus).scale_poly(&w));
    out = out.add(&q1.mul(tminus).scale_poly(&(&two_beta * &x0)));
    out = out.add(&q2.mul(tzero).sub(&q1.mul(tplus)).scale(&rat(2)).scale_poly(&x0));
    out = out.add(&q2.scale_poly(&(&b - &c)));
    out = out.add(&q1.scale_poly(&(&b * &x0)));
    out
}

/// Compare the three constructions of the master operator block. The two
/// builds differ by exactly [[0,0],[x*dx,0]] in the first-order coefficient;
/// that difference is part of the contract and reported as INFO.
pub fn decomposition_report(g: &GeneratorSet, mode: Option<DecompositionMode>) -> RelationReport {
    let closed = tq_closed_form();
    let cleared = tq_from_master_ode();
    let x_dx = MatOp::lower_left(DiffOp::term(1, MultiPoly::var(Var::X)));

    let mut es = Vec::new();
    if mode != Some(DecompositionMode::Corrected) {
        es.push(entry(
            "generator combination (faithful) = closed form",
            tq_from_generators(g, DecompositionMode::Faithful),
            closed.clone(),
            CheckLevel::Required,
        ));
    }
    if mode != Some(DecompositionMode::Faithful) {
        es.push(entry(
            "generator combination (corrected) = denominator-cleared operator",
            tq_from_generators(g, DecompositionMode::Corrected),
            cleared.clone(),
            CheckLevel::Required,
        ));
    }
    es.push(entry(
        "denominator-cleared operator minus closed form = [[0,0],[-x*dx,0]]",
        cleared.sub(&closed),
        x_dx.neg(),
        CheckLevel::Info,
    ));
    if mode.is_none() {
        es.push(entry(
            "faithful combination minus corrected combination = [[0,0],[x*dx,0]]",
            tq_from_generators(g, DecompositionMode::Faithful)
                .sub(&tq_from_generators(g, DecompositionMode::Corrected)),
            x_dx,
            CheckLevel::Info,
        ));
    }
    RelationReport::new("master-operator decomposition", es)
}

/// Verify that all eight generators at integer n map the basis of the
/// invariant subspace (vectors (x^k, 0), k <= n and (0, x^k), k <= n+1)
/// back into it, i.e. respect the (deg <= n, deg <= n+1) bounds.
pub fn subspace_image_check(nval: u32) -> RelationReport {
    let g = make_generators(NParam::Value(rat(nval as i64)));
    let n = nval;

    let mut basis: Vec<(MultiPoly, MultiPoly)> = Vec::new();
    for k in 0..=n {
        basis.push((MultiPoly::var_pow(Var::X, k as u16), MultiPoly::zero()));
    }
    for k in 0..=n + 1 {
        basis.push((MultiPoly::zero(), MultiPoly::var_pow(Var::X, k as u16)));
    }

    let gens: [(&str, &MatOp); 8] = [
        ("T+", &g.tplus),
        ("T0", &g.tzero),
        ("T-", &g.tminus),
        ("J", &g.jgen),
        ("Q1", &g.q1),
        ("Q2", &g.q2),
        ("Qbar1", &g.qbar1),
        ("Qbar2", &g.qbar2),
    ];

    let mut es = Vec::new();
    for (name, m) in gens {
        let mut max_up: i64 = -1;
        let mut max_lo: i64 = -1;
        for v in &basis {
            let (up, lo) = m.apply(v);
            max_up = max_up.max(up.degree_in(Var::X).map_or(-1, |d| d as i64));
            max_lo = max_lo.max(lo.degree_in(Var::X).map_or(-1, |d| d as i64));
        }
        let pass = max_up <= n as i64 && max_lo <= (n + 1) as i64;
        es.push(RelationEntry {
            name: format!("{name} preserves (deg <= {n}, deg <= {}) at n = {n}", n + 1),
            lhs: format!("max image degrees (upper, lower) = ({max_up}, {max_lo})"),
            pass,
            residual: None,
            level: CheckLevel::Required,
        });
    }
    RelationReport::new(format!("invariant subspace preservation, n = {nval}"), es)
}

fn param_polys() -> [MultiPoly; 6] {
    [
        MultiPoly::var(Var::X),
        MultiPoly::var(Var::N),
        MultiPoly::var(Var::Beta),
        MultiPoly::var(Var::X0),
        MultiPoly::var(Var::B),
        MultiPoly::var(Var::C),
    ]
}
