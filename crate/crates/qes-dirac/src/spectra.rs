//! Spectral points of the radial problem as kernel vectors of a banded
//! system.
//!
//! For a fixed sector (m, Z*alpha, l, n), every candidate root position x0
//! fixes the full parameter set (t, E, lB, eB, b0, b, c) in closed form.
//! The polynomial part Q of the upper radial component must be annihilated
//! by the denominator-cleared second-order operator; expanding that
//! condition in powers of x gives an (n+2) x (n+1) banded matrix acting on
//! the coefficient vector of Q. A spectral point is an x0 where that matrix
//! has a kernel vector.
//!
//! The matrix is built twice, by independent routes:
//!   (a) compiled from the operator produced by the symbolic engine,
//!   (b) from the closed-form band entries,
//! and the two are required to agree entrywise. Back-substitution from the
//! top band yields the kernel candidate; the two leftover rows provide the
//! residuals r0, r1 whose simultaneous vanishing signals a true point.
//!
//! All residuals are normalized by sums of magnitudes of the expanded
//! constituent terms ("atoms"), never by the possibly-cancelling totals, so
//! a row built from one atom does not trivially normalize to 1 and a row
//! built from many does not hide cancellation.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::context::PhysicalContext;
use crate::dirac;
use crate::osp22;
use crate::poly::{MultiPoly, Var};
use crate::rational::{rat, to_f64};
use crate::{Error, Result};

// ---------------------------------------------------------------------------
// Defaults and tolerances
// ---------------------------------------------------------------------------

pub const DEFAULT_X0_MIN: f64 = -5.0;
pub const DEFAULT_X0_MAX: f64 = 5.0;
pub const DEFAULT_GRID_POINTS: usize = 20_001;
pub const DEFAULT_TOL_ACCEPT: f64 = 1e-8;
pub const DEFAULT_TOL_REFINE: f64 = 1e-13;
/// Candidates closer to x0 = 0 than this are never scanned (the parameter
/// map degenerates there).
pub const X0_EXCLUSION: f64 = 1e-3;
/// Roots closer than this after refinement are considered duplicates.
pub const DUP_MERGE_TOL: f64 = 1e-8;
/// Entrywise agreement demanded between the two independent matrix builds,
/// relative to entry size with an atom-scaled absolute floor.
const DUAL_BUILD_TOL: f64 = 1e-12;
/// Default abscissas for the polynomial-identity residuals.
pub const DEFAULT_ODE_SAMPLES: [f64; 3] = [0.5, 1.0, 2.0];

// ---------------------------------------------------------------------------
// Closed-form parameter map
// ---------------------------------------------------------------------------

/// Energy data determined by x0 alone (given the sector).
#[derive(Clone, Copy, Debug)]
pub struct EnergyPoint {
    pub t: f64,
    pub e: f64,
    pub l_b: f64,
    pub e_b: f64,
}

/// Map a candidate x0 to its energy data. Fails on x0 = 0 and on the exact
/// parameter pole t = 1; a negative magnetic length is reported through
/// `l_b` and judged by the caller.
pub fn energy_from_x0(ctx: &PhysicalContext, x0: f64) -> Result<EnergyPoint> {
    if !(x0.is_finite() && x0 != 0.0) {
        return Err(Error::InvalidArgument(format!("x0 must be finite and nonzero, got {x0}")));
    }
    let t = (ctx.n as f64 + ctx.ell_plus + 1.0) * x0 * x0 / (ctx.zalpha * ctx.zalpha);
    if t == 1.0 {
        return Err(Error::EnergyPole { x0 });
    }
    let e = ctx.m * (1.0 + t) / (1.0 - t);
    let l_b = ctx.zalpha / ((e + ctx.m) * x0);
    let e_b = 1.0 / (l_b * l_b);
    Ok(EnergyPoint { t, e, l_b, e_b })
}

/// Linear-term parameters of the cleared operator at a candidate point.
#[derive(Clone, Copy, Debug)]
pub struct QesParams {
    pub b0: f64,
    pub b: f64,
    pub c: f64,
}

pub fn qes_params(ctx: &PhysicalContext, x0: f64, ep: &EnergyPoint) -> QesParams {
    let b0 = 2.0 * ep.e * ctx.zalpha * ep.l_b;
    QesParams { b0, b: b0 + ctx.ell_minus / x0, c: x0 + ctx.ell_minus / x0 }
}

/// Parameters of the companion operator annihilating the degree-(n+1)
/// polynomial part of the lower component.
#[derive(Clone, Copy, Debug)]
pub struct PrimedParams {
    pub x0p: f64,
    pub bp: f64,
    pub cp: f64,
}

pub fn primed_params(ctx: &PhysicalContext, ep: &EnergyPoint, qp: &QesParams) -> PrimedParams {
    let x0p = ctx.zalpha / ((ep.e - ctx.m) * ep.l_b);
    let cp = -ctx.ell_plus / x0p;
    PrimedParams { x0p, cp, bp: qp.b0 + cp }
}

// ---------------------------------------------------------------------------
// Compiled operator (route a)
// ---------------------------------------------------------------------------

/// Polynomial in the scan parameters (n, beta, x0, b, c) with f64
/// coefficients, compiled once from an exact engine polynomial.
struct ParamPoly {
    /// (coefficient, exponents of n, beta, x0, b, c)
    terms: Vec<(f64, [u16; 5])>,
}

impl ParamPoly {
    fn eval(&self, v: &[f64; 5]) -> f64 {
        let mut acc = 0.0;
        for (coeff, exps) in &self.terms {
            let mut t = *coeff;
            for (value, &e) in v.iter().zip(exps.iter()) {
                if e > 0 {
                    t *= value.powi(e as i32);
                }
            }
            acc += t;
        }
        acc
    }
}

/// The cleared operator with each derivative order expanded in powers of x:
/// `coeffs[order][k]` multiplies x^k * d^order.
struct CompiledOp {
    coeffs: Vec<Vec<ParamPoly>>,
}

fn compile_param_poly(p: &MultiPoly) -> ParamPoly {
    let mut terms = Vec::new();
    for (mono, coeff) in p.terms() {
        assert_eq!(mono.exp(Var::X), 0, "x power must be stripped before compiling");
        terms.push((
            to_f64(coeff),
            [
                mono.exp(Var::N),
                mono.exp(Var::Beta),
                mono.exp(Var::X0),
                mono.exp(Var::B),
                mono.exp(Var::C),
            ],
        ));
    }
    ParamPoly { terms }
}

fn compiled_op() -> &'static CompiledOp {
    static OP: OnceLock<CompiledOp> = OnceLock::new();
    OP.get_or_init(|| {
        let engine = osp22::tq_from_master_ode();
        let op = &engine.e[1][0];
        let max_order = op.max_order().expect("cleared operator is nonzero");
        let mut coeffs = Vec::with_capacity(max_order as usize + 1);
        for order in 0..=max_order {
            let per_x = op.coeff(order).x_coefficients().iter().map(compile_param_poly).collect();
            coeffs.push(per_x);
        }
        CompiledOp { coeffs }
    })
}

/// Once-per-scan exact check that the operator maps x^n into degree <= n+1:
/// the would-be x^(n+2) coefficient of the image of the top basis monomial
/// cancels identically, which is what keeps the system banded rather than
/// overdetermined in the leading column.
fn assert_leading_cancellation(n: u32) {
    let exp: u16 = n.try_into().expect("sector degree too large");
    let engine = osp22::tq_from_master_ode();
    let image = engine.e[1][0]
        .apply(&MultiPoly::var_pow(Var::X, exp))
        .subst(&[(Var::N, rat(n as i64))]);
    assert!(
        image.coeff_of_x(exp + 2).is_zero(),
        "leading coefficient of the image of x^n must cancel exactly"
    );
    assert!(image.degree_in(Var::X).unwrap_or(0) <= n + 1);
}

fn falling(k: usize, ord: usize) -> f64 {
    let mut acc = 1.0;
    for i in 0..ord {
        acc *= (k - i) as f64;
    }
    acc
}

// ---------------------------------------------------------------------------
// Kernel system (dual construction)
// ---------------------------------------------------------------------------

/// The (n+2) x (n+1) coefficient matrix of the polynomial annihilation
/// condition, plus per-entry magnitude scales built from the same expanded
/// atoms that later normalize the residuals.
pub struct KernelSystem {
    pub n: usize,
    /// rows[j][k]: coefficient of a_k in the x^j component of the image.
    pub rows: Vec<Vec<f64>>,
    atoms: Vec<Vec<f64>>,
}

struct BandParams {
    nf: f64,
    beta: f64,
    x0: f64,
    b0: f64,
    b: f64,
    c: f64,
    ell_minus: f64,
}

/// Closed-form band entry for row j, column k (route b).
fn band_entry(p: &BandParams, j: usize, k: usize) -> f64 {
    let (jf, nf) = (j as f64, p.nf);
    if k == j + 1 {
        p.x0 * (jf + 1.0) * (jf + 2.0 * p.beta)
    } else if k == j {
        jf * (jf - 2.0 + 2.0 * p.beta) + p.b * p.x0
    } else if k + 1 == j {
        (nf - jf + 1.0) * p.x0 + (p.b - p.c)
    } else if k + 2 == j {
        nf - jf + 2.0
    } else {
        0.0
    }
}

/// Magnitude scale of the same entry from its expanded atoms. The products
/// b*x0 and b - c are split through the exact identities
/// b*x0 = b0*x0 + ell_minus and b - c = b0 - x0 before taking magnitudes.
fn band_atoms(p: &BandParams, j: usize, k: usize) -> f64 {
    let (jf, nf) = (j as f64, p.nf);
    if k == j + 1 {
        (p.x0 * (jf + 1.0) * (jf + 2.0 * p.beta)).abs()
    } else if k == j {
        (jf * (jf - 2.0 + 2.0 * p.beta)).abs() + (p.b0 * p.x0).abs() + p.ell_minus.abs()
    } else if k + 1 == j {
        ((nf - jf + 1.0) * p.x0).abs() + p.b0.abs() + p.x0.abs()
    } else if k + 2 == j {
        (nf - jf + 2.0).abs()
    } else {
        0.0
    }
}

/// Route-a entry: coefficient of x^j in (cleared operator applied to x^k).
fn engine_entry(coeffs: &[Vec<f64>], j: usize, k: usize) -> f64 {
    let mut acc = 0.0;
    for (ord, per_x) in coeffs.iter().enumerate() {
        if ord > k {
            break;
        }
        // x^k -> falling(k, ord) x^(k-ord); need x-power j - (k - ord).
        let need = j + ord;
        if need < k {
            continue;
        }
        let xp = need - k;
        if xp < per_x.len() {
            acc += falling(k, ord) * per_x[xp];
        }
    }
    acc
}

/// Build the banded system at (ctx, x0) with parameters already mapped.
/// Both construction routes must agree entrywise; the would-be row n+2 must
/// vanish by both routes.
pub fn build_kernel_system(
    ctx: &PhysicalContext,
    x0: f64,
    qp: &QesParams,
) -> Result<KernelSystem> {
    let n = ctx.n as usize;
    let bp = BandParams {
        nf: ctx.n as f64,
        beta: ctx.beta,
        x0,
        b0: qp.b0,
        b: qp.b,
        c: qp.c,
        ell_minus: ctx.ell_minus,
    };
    debug_assert!(bp.beta > 0.0 && x0 != 0.0, "superdiagonal pivots must not vanish");

    let op = compiled_op();
    let vals = [bp.nf, bp.beta, bp.x0, bp.b, bp.c];
    let realized: Vec<Vec<f64>> = op
        .coeffs
        .iter()
        .map(|per_x| per_x.iter().map(|p| p.eval(&vals)).collect())
        .collect();

    let mut rows = Vec::with_capacity(n + 2);
    let mut atoms = Vec::with_capacity(n + 2);
    for j in 0..=n + 1 {
        let mut row = Vec::with_capacity(n + 1);
        let mut arow = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let a = engine_entry(&realized, j, k);
            let b = band_entry(&bp, j, k);
            let scale = band_atoms(&bp, j, k);
            if !(a.is_finite() && b.is_finite()) {
                return Err(Error::Inconsistent(format!(
                    "non-finite matrix entry at row {j}, column {k}"
                )));
            }
            if (a - b).abs() > DUAL_BUILD_TOL * (a.abs() + b.abs()).max(scale) {
                return Err(Error::Inconsistent(format!(
                    "independent matrix builds disagree at row {j}, column {k}: {a} vs {b}"
                )));
            }
            row.push(a);
            arow.push(scale);
        }
        rows.push(row);
        atoms.push(arow);
    }

    // The x^(n+2) component of the image must vanish identically.
    let ghost_a = engine_entry(&realized, n + 2, n);
    let ghost_b = band_entry(&bp, n + 2, n);
    let ghost_scale = (bp.nf.abs() + 1.0).max(band_atoms(&bp, n + 2, n));
    if ghost_a.abs() > 1e-12 * ghost_scale || ghost_b.abs() > 1e-12 * ghost_scale {
        return Err(Error::Inconsistent(format!(
            "top image coefficient fails to cancel: {ghost_a} / {ghost_b}"
        )));
    }

    Ok(KernelSystem { n, rows, atoms })
}

// ---------------------------------------------------------------------------
// Kernel candidate and residuals
// ---------------------------------------------------------------------------

/// Back-substitution result: monic-top candidate vector plus the two
/// leftover row residuals (atom-normalized; r1 kept signed for root
/// bracketing).
pub struct CoeffFit {
    pub a: Vec<f64>,
    pub r0: f64,
    pub r1: f64,
    pub r1_signed: f64,
}

/// Solve the lower (n) rows for a_0..a_{n-1} given a_n = 1, using rows
/// j = n+1 down to 2, each of which introduces exactly one new unknown
/// a_{j-2} with constant pivot n - j + 2.
pub fn solve_coefficients(sys: &KernelSystem) -> CoeffFit {
    let n = sys.n;
    let mut a = vec![0.0; n + 1];
    a[n] = 1.0;
    for j in (2..=n + 1).rev() {
        let mut acc = 0.0;
        #[allow(clippy::needless_range_loop)] // k indexes rows and a in lockstep
        for k in (j - 1)..=(j + 1).min(n) {
            acc += sys.rows[j][k] * a[k];
        }
        let pivot = sys.rows[j][j - 2];
        debug_assert!(pivot != 0.0, "constant band pivot vanished");
        a[j - 2] = -acc / pivot;
    }
    let r0 = row_residual(sys, &a, 0).abs();
    let r1_signed = row_residual(sys, &a, 1);
    CoeffFit { a, r0, r1: r1_signed.abs(), r1_signed }
}

/// Signed atom-normalized residual of an arbitrary coefficient vector
/// against row j; the operation order is fixed so that recomputing from a
/// stored vector reproduces the original value bit for bit.
pub fn row_residual(sys: &KernelSystem, a: &[f64], j: usize) -> f64 {
    let mut val = 0.0;
    let mut norm = 0.0;
    #[allow(clippy::needless_range_loop)] // k indexes rows, atoms, and a in lockstep
    for k in 0..=sys.n {
        val += sys.rows[j][k] * a[k];
        norm += sys.atoms[j][k] * a[k].abs();
    }
    if norm > 0.0 {
        val / norm
    } else {
        0.0
    }
}

/// Smallest singular value of the full (n+2) x (n+1) matrix; an independent
/// rank witness not derived from the back-substitution path.
pub fn sigma_min(sys: &KernelSystem) -> f64 {
    let m = nalgebra::DMatrix::from_fn(sys.n + 2, sys.n + 1, |i, j| sys.rows[i][j]);
    let sv = m.singular_values();
    sv.iter().fold(f64::INFINITY, |acc, &s| acc.min(s))
}

// ---------------------------------------------------------------------------
// Lower-component polynomial
// ---------------------------------------------------------------------------

/// Rebuild the degree-(n+1) polynomial part of the lower component from Q:
/// P = [(ell_minus + x^2) Q - x Q'] / ((E + m) lB (x + x0)). The division by
/// (x + x0) must be exact; the normalized synthetic-division remainder is
/// returned as a residual.
pub fn reconstruct_p(
    ctx: &PhysicalContext,
    ep: &EnergyPoint,
    x0: f64,
    q: &[f64],
) -> (Vec<f64>, f64) {
    let n = q.len() - 1;
    // Numerator coefficients: (ell_minus - k) q_k + q_{k-2}, degree n + 2.
    let mut num = vec![0.0; n + 3];
    for (k, slot) in num.iter_mut().enumerate() {
        let mut v = 0.0;
        if k <= n {
            v += (ctx.ell_minus - k as f64) * q[k];
        }
        if k >= 2 && k - 2 <= n {
            v += q[k - 2];
        }
        *slot = v;
    }
    // Synthetic division by (x + x0), i.e. root at -x0.
    let root = -x0;
    let mut quot = vec![0.0; n + 2];
    quot[n + 1] = num[n + 2];
    for k in (1..=n + 1).rev() {
        quot[k - 1] = num[k] + root * quot[k];
    }
    let remainder = num[0] + root * quot[0];
    let num_scale = num.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
    let divis_rem = if num_scale > 0.0 { remainder.abs() / num_scale } else { 0.0 };
    let denom = (ep.e + ctx.m) * ep.l_b;
    let p: Vec<f64> = quot.iter().map(|&v| v / denom).collect();
    (p, divis_rem)
}

// ---------------------------------------------------------------------------
// Polynomial evaluation helpers
// ---------------------------------------------------------------------------

pub(crate) fn poly_eval(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

pub(crate) fn poly_deriv_eval(coeffs: &[f64], x: f64) -> f64 {
    let mut acc = 0.0;
    for k in (1..coeffs.len()).rev() {
        acc = acc * x + coeffs[k] * k as f64;
    }
    acc
}

fn poly_second_deriv_eval(coeffs: &[f64], x: f64) -> f64 {
    let mut acc = 0.0;
    for k in (2..coeffs.len()).rev() {
        acc = acc * x + coeffs[k] * (k * (k - 1)) as f64;
    }
    acc
}

// ---------------------------------------------------------------------------
// Polynomial-identity residuals
// ---------------------------------------------------------------------------

struct OdeParams {
    nu: f64,
    beta: f64,
    x0v: f64,
    /// expanded atoms of the product b*x0 (signed values)
    bx0_parts: [f64; 2],
    /// expanded atoms of the difference b - c (signed values)
    bmc_parts: [f64; 2],
}

/// Atom-normalized residual of the cleared operator acting on a polynomial
/// at one abscissa. Every additive constituent enters the norm separately.
fn cleared_ode_residual(p: &OdeParams, coeffs: &[f64], x: f64) -> f64 {
    let q = poly_eval(coeffs, x);
    let q1 = poly_deriv_eval(coeffs, x);
    let q2 = poly_second_deriv_eval(coeffs, x);
    let terms = [
        x * x * q2,
        p.x0v * x * q2,
        -x * x * x * q1,
        -p.x0v * x * x * q1,
        (2.0 * p.beta - 1.0) * x * q1,
        2.0 * p.beta * p.x0v * q1,
        p.nu * x * x * q,
        p.nu * p.x0v * x * q,
        p.bmc_parts[0] * x * q,
        p.bmc_parts[1] * x * q,
        p.bx0_parts[0] * q,
        p.bx0_parts[1] * q,
    ];
    let val: f64 = terms.iter().sum();
    let norm: f64 = terms.iter().map(|t| t.abs()).sum();
    if norm > 0.0 {
        val.abs() / norm
    } else {
        0.0
    }
}

/// Residuals of the annihilation conditions for Q (upper polynomial part)
/// and P (lower), each maximized over the sample abscissas.
pub fn ode_residuals(ctx: &PhysicalContext, pt: &SpectralPoint, xs: &[f64]) -> (f64, f64) {
    let qp = OdeParams {
        nu: ctx.n as f64,
        beta: ctx.beta,
        x0v: pt.x0,
        // b*x0 = b0*x0 + ell_minus, b - c = b0 - x0
        bx0_parts: [pt.b0 * pt.x0, ctx.ell_minus],
        bmc_parts: [pt.b0, -pt.x0],
    };
    let pp = OdeParams {
        nu: ctx.n as f64 + 1.0,
        beta: ctx.beta,
        x0v: pt.x0p,
        // b'*x0' = b0*x0' - ell_plus, b' - c' = b0
        bx0_parts: [pt.b0 * pt.x0p, -ctx.ell_plus],
        bmc_parts: [pt.b0, 0.0],
    };
    let mut rq = 0.0f64;
    let mut rp = 0.0f64;
    for &x in xs {
        rq = rq.max(cleared_ode_residual(&qp, &pt.qcoeffs, x));
        rp = rp.max(cleared_ode_residual(&pp, &pt.pcoeffs, x));
    }
    (rq, rp)
}

// ---------------------------------------------------------------------------
// Spectral point
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Particle,
    Antiparticle,
}

impl std::fmt::Display for Branch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Branch::Particle => write!(f, "particle"),
            Branch::Antiparticle => write!(f, "antiparticle"),
        }
    }
}

/// Residual bundle attached to every accepted point. All entries are
/// dimensionless and atom-normalized where a normalization is involved.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ResidualBundle {
    pub kernel_r0: f64,
    pub kernel_r1: f64,
    pub sigma_min: f64,
    pub divis_rem: f64,
    pub ode_q: f64,
    pub ode_p: f64,
    pub dirac_max: f64,
}

/// One fully assembled spectral point.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpectralPoint {
    pub x0: f64,
    pub t: f64,
    pub energy: f64,
    #[serde(rename = "lb")]
    pub l_b: f64,
    #[serde(rename = "eb")]
    pub e_b: f64,
    pub b0: f64,
    pub b: f64,
    pub c: f64,
    pub x0p: f64,
    pub bp: f64,
    pub cp: f64,
    pub epsilon: u32,
    pub epsilonp: u32,
    pub qcoeffs: Vec<f64>,
    pub pcoeffs: Vec<f64>,
    pub branch: Branch,
    pub residuals: ResidualBundle,
}

/// Relative residuals of the three parameter cross-checks that tie the
/// primed operator data to the unprimed: b - c = b0 - x0,
/// c' = b' - b0, and x0 * x0' = (Z*alpha)^2 / (ell_plus + n + 1).
pub fn compatibility_check(ctx: &PhysicalContext, pt: &SpectralPoint) -> [f64; 3] {
    let rel = |lhs: f64, rhs: f64, scale: f64| -> f64 {
        let norm = lhs.abs().max(rhs.abs()).max(scale);
        if norm > 0.0 {
            (lhs - rhs).abs() / norm
        } else {
            0.0
        }
    };
    let id1 = rel(pt.b - pt.c, pt.b0 - pt.x0, pt.b0.abs() + pt.x0.abs());
    let id2 = rel(pt.cp, pt.bp - pt.b0, pt.b0.abs());
    let target = ctx.zalpha * ctx.zalpha / (ctx.ell_plus + ctx.n as f64 + 1.0);
    let id3 = rel(pt.x0 * pt.x0p, target, target.abs());
    [id1, id2, id3]
}

/// Assemble the complete record for one candidate x0. Fails if the point is
/// unphysical (lB <= 0 or |E| <= m) or sits on the parameter pole; residual
/// sizes are reported, not judged, so callers can also inspect near-misses.
pub fn build_point(ctx: &PhysicalContext, x0: f64) -> Result<SpectralPoint> {
    let ep = energy_from_x0(ctx, x0)?;
    if !(ep.e.is_finite() && ep.l_b.is_finite()) {
        return Err(Error::InvalidArgument(format!("energy map not finite at x0 = {x0}")));
    }
    if ep.l_b <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "magnetic length lB = {} <= 0 at x0 = {x0}",
            ep.l_b
        )));
    }
    if ep.e.abs() <= ctx.m {
        return Err(Error::InvalidArgument(format!(
            "|E| = {} <= m: no gap branch at x0 = {x0}",
            ep.e.abs()
        )));
    }
    let qp = qes_params(ctx, x0, &ep);
    let sys = build_kernel_system(ctx, x0, &qp)?;
    let fit = solve_coefficients(&sys);
    let smin = sigma_min(&sys);
    let (pcoeffs, divis_rem) = reconstruct_p(ctx, &ep, x0, &fit.a);
    let pp = primed_params(ctx, &ep, &qp);
    let branch = if ep.e > 0.0 { Branch::Particle } else { Branch::Antiparticle };
    let mut pt = SpectralPoint {
        x0,
        t: ep.t,
        energy: ep.e,
        l_b: ep.l_b,
        e_b: ep.e_b,
        b0: qp.b0,
        b: qp.b,
        c: qp.c,
        x0p: pp.x0p,
        bp: pp.bp,
        cp: pp.cp,
        epsilon: ctx.n,
        epsilonp: ctx.n + 1,
        qcoeffs: fit.a,
        pcoeffs,
        branch,
        residuals: ResidualBundle {
            kernel_r0: fit.r0,
            kernel_r1: fit.r1,
            sigma_min: smin,
            divis_rem,
            ode_q: 0.0,
            ode_p: 0.0,
            dirac_max: 0.0,
        },
    };
    let (ode_q, ode_p) = ode_residuals(ctx, &pt, &DEFAULT_ODE_SAMPLES);
    pt.residuals.ode_q = ode_q;
    pt.residuals.ode_p = ode_p;
    let grid = dirac::default_radial_grid(pt.l_b);
    let check = dirac::dirac_residual(ctx, &pt, &grid)?;
    pt.residuals.dirac_max = check.max_residual;
    Ok(pt)
}

// ---------------------------------------------------------------------------
// Scan driver
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ScanConfig {
    pub x0_min: f64,
    pub x0_max: f64,
    pub grid_points: usize,
    pub tol_accept: f64,
    pub tol_refine: f64,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            x0_min: DEFAULT_X0_MIN,
            x0_max: DEFAULT_X0_MAX,
            grid_points: DEFAULT_GRID_POINTS,
            tol_accept: DEFAULT_TOL_ACCEPT,
            tol_refine: DEFAULT_TOL_REFINE,
        }
    }
}

/// A refined root that failed one of the acceptance gates, kept for
/// diagnostics.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NearMiss {
    pub x0: f64,
    pub reason: String,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct ScanDiagnostics {
    pub cells_scanned: usize,
    pub nonfinite_cells: usize,
    pub near_misses: Vec<NearMiss>,
}

pub struct ScanOutcome {
    pub points: Vec<SpectralPoint>,
    pub diagnostics: ScanDiagnostics,
}

/// Push a bisection-refined root down to rounding level with a few secant
/// steps. The downstream parameter identities inherit the root error
/// linearly, so the extra digits matter for the residual gates. Keeps the
/// best iterate by |f| and never leaves a small neighbourhood of the
/// bracket.
fn secant_polish(eval: &dyn Fn(f64) -> f64, lo: f64, hi: f64, flo: f64, fhi: f64) -> f64 {
    let mid = 0.5 * (lo + hi);
    if !(flo.is_finite() && fhi.is_finite()) || flo == fhi {
        return mid;
    }
    let leash = 1e3 * (hi - lo) + 1e-12 * mid.abs().max(1.0);
    let (mut xa, mut fa) = (lo, flo);
    let (mut xb, mut fb) = (hi, fhi);
    let (mut best_x, mut best_f) = if fa.abs() < fb.abs() { (xa, fa.abs()) } else { (xb, fb.abs()) };
    for _ in 0..8 {
        let denom = fb - fa;
        if denom == 0.0 {
            break;
        }
        let xn = xb - fb * (xb - xa) / denom;
        if !xn.is_finite() || (xn - mid).abs() > leash {
            break;
        }
        let f = eval(xn);
        if !f.is_finite() {
            break;
        }
        if f.abs() < best_f {
            best_f = f.abs();
            best_x = xn;
        }
        if f == 0.0 {
            break;
        }
        (xa, fa) = (xb, fb);
        (xb, fb) = (xn, f);
    }
    best_x
}

/// Remove (lo, hi) from every interval in the list.
fn subtract_interval(segments: &mut Vec<(f64, f64)>, lo: f64, hi: f64) {
    let mut out = Vec::with_capacity(segments.len() + 1);
    for &(a, b) in segments.iter() {
        if hi <= a || lo >= b {
            out.push((a, b));
            continue;
        }
        if lo > a {
            out.push((a, lo));
        }
        if hi < b {
            out.push((hi, b));
        }
    }
    *segments = out;
}

/// Scan a range of x0 for kernel vectors: bracket sign changes of the
/// signed residual r1 on a grid, bisect each bracket, then accept a refined
/// root only if r0 and the smallest singular value also vanish to tolerance
/// and the point is physical. Results are sorted by x0 with duplicates
/// merged; every cell is treated independently, so partitioning the range
/// and merging yields the same set.
pub fn find_spectral_points(ctx: &PhysicalContext, cfg: &ScanConfig) -> Result<ScanOutcome> {
    if !(cfg.x0_min.is_finite() && cfg.x0_max.is_finite() && cfg.x0_min < cfg.x0_max) {
        return Err(Error::InvalidArgument(format!(
            "scan range [{}, {}] is not a finite nonempty interval",
            cfg.x0_min, cfg.x0_max
        )));
    }
    if cfg.grid_points < 2 {
        return Err(Error::InvalidArgument("grid must have at least 2 points".into()));
    }
    if !(cfg.tol_accept > 0.0 && cfg.tol_refine > 0.0) {
        return Err(Error::InvalidArgument("tolerances must be positive".into()));
    }
    assert_leading_cancellation(ctx.n);

    // Carve out the degenerate core and the parameter poles t = 1.
    let mut segments = vec![(cfg.x0_min, cfg.x0_max)];
    subtract_interval(&mut segments, -X0_EXCLUSION, X0_EXCLUSION);
    let pole_sq = ctx.zalpha * ctx.zalpha / (ctx.n as f64 + ctx.ell_plus + 1.0);
    if pole_sq > 0.0 {
        let pole = pole_sq.sqrt();
        let guard = 1e-9 * pole.max(1.0);
        subtract_interval(&mut segments, pole - guard, pole + guard);
        subtract_interval(&mut segments, -pole - guard, -pole + guard);
    }
    segments.retain(|&(a, b)| b > a);
    if segments.is_empty() {
        return Err(Error::EmptyScanRange);
    }

    let total_len: f64 = segments.iter().map(|&(a, b)| b - a).sum();
    let eval = |x0: f64| -> f64 {
        let ep = match energy_from_x0(ctx, x0) {
            Ok(ep) => ep,
            Err(_) => return f64::NAN,
        };
        let qp = qes_params(ctx, x0, &ep);
        match build_kernel_system(ctx, x0, &qp) {
            Ok(sys) => solve_coefficients(&sys).r1_signed,
            Err(_) => f64::NAN,
        }
    };

    let mut diagnostics = ScanDiagnostics::default();
    let mut roots: Vec<f64> = Vec::new();
    for &(a, b) in &segments {
        let frac = (b - a) / total_len;
        let count = ((cfg.grid_points as f64 * frac).round() as usize).max(2);
        let h = (b - a) / (count - 1) as f64;
        let xs: Vec<f64> = (0..count)
            .map(|i| if i + 1 == count { b } else { a + i as f64 * h })
            .collect();
        let fs: Vec<f64> = xs.iter().map(|&x| eval(x)).collect();
        for i in 0..count - 1 {
            diagnostics.cells_scanned += 1;
            let (xa, xb, fa, fb) = (xs[i], xs[i + 1], fs[i], fs[i + 1]);
            if !(fa.is_finite() && fb.is_finite()) {
                diagnostics.nonfinite_cells += 1;
                continue;
            }
            if fa == 0.0 {
                roots.push(xa);
                continue;
            }
            if i + 2 == count && fb == 0.0 {
                roots.push(xb);
            }
            if fa * fb < 0.0 {
                let (mut lo, mut hi, mut flo, mut fhi) = (xa, xb, fa, fb);
                for _ in 0..200 {
                    if hi - lo <= cfg.tol_refine {
                        break;
                    }
                    let mid = 0.5 * (lo + hi);
                    let fm = eval(mid);
                    if fm == 0.0 || !fm.is_finite() {
                        lo = mid;
                        hi = mid;
                        flo = fm;
                        fhi = fm;
                        break;
                    }
                    if (fm > 0.0) == (flo > 0.0) {
                        lo = mid;
                        flo = fm;
                    } else {
                        hi = mid;
                        fhi = fm;
                    }
                }
                roots.push(secant_polish(&eval, lo, hi, flo, fhi));
            }
        }
    }

    let mut points: Vec<SpectralPoint> = Vec::new();
    for x0 in roots {
        match build_point(ctx, x0) {
            Ok(pt) => {
                let r = &pt.residuals;
                if r.kernel_r0 < cfg.tol_accept && r.sigma_min < cfg.tol_accept {
                    points.push(pt);
                } else {
                    diagnostics.near_misses.push(NearMiss {
                        x0,
                        reason: format!(
                            "residual gate failed: r0 = {:.3e}, sigma_min = {:.3e}",
                            r.kernel_r0, r.sigma_min
                        ),
                    });
                }
            }
            Err(e) => {
                diagnostics.near_misses.push(NearMiss { x0, reason: e.to_string() });
            }
        }
    }

    points.sort_by(|p, q| p.x0.total_cmp(&q.x0));
    let mut merged: Vec<SpectralPoint> = Vec::new();
    for pt in points {
        if let Some(last) = merged.last() {
            if (pt.x0 - last.x0).abs() < DUP_MERGE_TOL {
                let score = |p: &SpectralPoint| p.residuals.kernel_r0.hypot(p.residuals.kernel_r1);
                if score(&pt) < score(last) {
                    *merged.last_mut().unwrap() = pt;
                }
                continue;
            }
        }
        merged.push(pt);
    }

    Ok(ScanOutcome { points: merged, diagnostics })
}

// ---------------------------------------------------------------------------
