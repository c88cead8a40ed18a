//! Truncated-oscillator representations of the two-generator CCR Wick algebra
//! annihilating the cubic and quartic ideals.
//!
//! The single-mode operator `a` *raises*: `a e_n = √(n+1) e_{n+1}`, so
//! `a^*a − aa^* = 1`. On the truncation `span{e_0..e_N}`, `a e_N = 0`, which
//! breaks that relation only on `e_N`. Identities are therefore checked on the
//! interior band `Π_r` (every mode index `≤ N − r`) as the 2-norm of the
//! compressed difference `Π_r(L − R)Π_r`; `r` must cover the largest number of
//! raising steps any term takes in a single mode.

use std::collections::BTreeMap;

use ndarray::Array2;
use serde::Serialize;

use crate::error::{Result, WickError};
use crate::ideals::IdealChain;
use crate::linalg;
use crate::report::{Item, Verdict};
use crate::C64;

/// Default interior band: products of two degree-≤2 operators stay exact.
pub const DEFAULT_INTERIOR: usize = 3;
/// Interior band for `B_i a_j − a_j B_i`, which raises one mode up to five times.
pub const K4_GENERATOR_INTERIOR: usize = 5;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Column-sparse square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseOp {
    dim: usize,
    cols: Vec<Vec<(usize, C64)>>,
}

impl SparseOp {
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            cols: vec![Vec::new(); dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            cols: (0..dim).map(|j| vec![(j, ONE)]).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn scale(&self, c: C64) -> Self {
        if c == ZERO {
            return Self::zero(self.dim);
        }
        Self {
            dim: self.dim,
            cols: self
                .cols
                .iter()
                .map(|col| col.iter().map(|&(i, v)| (i, v * c)).collect())
                .collect(),
        }
    }

    fn combine(&self, other: &Self, sign: f64) -> Self {
        assert_eq!(self.dim, other.dim, "operator dimensions differ");
        let cols = self
            .cols
            .iter()
            .zip(&other.cols)
            .map(|(a, b)| {
                let mut m: BTreeMap<usize, C64> = a.iter().copied().collect();
                for &(i, v) in b {
                    *m.entry(i).or_insert(ZERO) += v * sign;
                }
                m.into_iter().filter(|(_, v)| *v != ZERO).collect()
            })
            .collect();
        Self { dim: self.dim, cols }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, 1.0)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, -1.0)
    }

    /// `self · other` (`other` acts first).
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "operator dimensions differ");
        let mut acc = vec![ZERO; self.dim];
        let mut touched = Vec::new();
        let cols = other
            .cols
            .iter()
            .map(|col| {
                for &(k, b) in col {
                    for &(i, a) in &self.cols[k] {
                        if acc[i] == ZERO {
                            touched.push(i);
                        }
                        acc[i] += a * b;
                    }
                }
                touched.sort_unstable();
                touched.dedup();
                let out = touched
                    .iter()
                    .filter(|&&i| acc[i] != ZERO)
                    .map(|&i| (i, acc[i]))
                    .collect();
                for &i in &touched {
                    acc[i] = ZERO;
                }
                touched.clear();
                out
            })
            .collect();
        Self { dim: self.dim, cols }
    }

    pub fn adjoint(&self) -> Self {
        let mut cols = vec![Vec::new(); self.dim];
        for (j, col) in self.cols.iter().enumerate() {
            for &(i, v) in col {
                cols[i].push((j, v.conj()));
            }
        }
        Self { dim: self.dim, cols }
    }

    /// `[self, other] = self·other − other·self`.
    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn to_dense(&self) -> Array2<C64> {
        let mut m = Array2::zeros((self.dim, self.dim));
        for (j, col) in self.cols.iter().enumerate() {
            for &(i, v) in col {
                m[[i, j]] = v;
            }
        }
        m
    }

    /// Dense restriction to the given sorted index set.
    fn compress(&self, keep: &[usize]) -> Array2<C64> {
        let mut pos = vec![usize::MAX; self.dim];
        for (p, &i) in keep.iter().enumerate() {
            pos[i] = p;
        }
        let mut m = Array2::zeros((keep.len(), keep.len()));
        for (q, &j) in keep.iter().enumerate() {
            for &(i, v) in &self.cols[j] {
                if pos[i] != usize::MAX {
                    m[[pos[i], q]] = v;
                }
            }
        }
        m
    }
}

/// `M` oscillator modes, each truncated at level `N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ModeSpace {
    pub modes: usize,
    pub cutoff: usize,
}

impl ModeSpace {
    pub fn dim(&self) -> usize {
        (self.cutoff + 1).pow(self.modes as u32)
    }

    fn stride(&self, mode: usize) -> usize {
        (self.cutoff + 1).pow((self.modes - mode) as u32)
    }

    /// `a` on mode `k` (1-based).
    pub fn raise(&self, mode: usize) -> SparseOp {
        assert!(mode >= 1 && mode <= self.modes, "mode {mode} out of range");
        let stride = self.stride(mode);
        let n1 = self.cutoff + 1;
        let cols = (0..self.dim())
            .map(|j| {
                let n = (j / stride) % n1;
                if n < self.cutoff {
                    vec![(j + stride, real(((n + 1) as f64).sqrt()))]
                } else {
                    Vec::new()
                }
            })
            .collect();
        SparseOp {
            dim: self.dim(),
            cols,
        }
    }

    /// Basis indices with every mode index `≤ N − r`.
    pub fn interior(&self, r: usize) -> Vec<usize> {
        let top = self.cutoff.saturating_sub(r);
        let n1 = self.cutoff + 1;
        (0..self.dim())
            .filter(|&j| {
                let mut rest = j;
                (0..self.modes).all(|_| {
                    let n = rest % n1;
                    rest /= n1;
                    n <= top
                })
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RepKind {
    /// `A = x·1`.
    K3 { x: (f64, f64) },
    /// `B_i = x_i·1`, `x_1 ≠ 0`.
    K4 { x1: (f64, f64), x2: (f64, f64) },
    /// `B_1 = 0`, `B_2 = x_2·1`, `x_2 ≠ 0`.
    K4X1Zero { x2: (f64, f64) },
}

/// A representation on a truncated multi-mode oscillator space.
#[derive(Debug, Clone)]
pub struct OscillatorRep {
    pub kind: RepKind,
    pub space: ModeSpace,
    /// Canonical raising operators `D_k = a` on mode `k`.
    pub modes: Vec<SparseOp>,
    pub a1: SparseOp,
    pub a2: SparseOp,
    /// `A = a_2a_1 − a_1a_2`.
    pub a: SparseOp,
}

impl OscillatorRep {
    fn new(kind: RepKind, space: ModeSpace, modes: Vec<SparseOp>, a1: SparseOp, a2: SparseOp) -> Self {
        let a = a2.mul(&a1).sub(&a1.mul(&a2));
        Self {
            kind,
            space,
            modes,
            a1,
            a2,
            a,
        }
    }

    /// `‖Π_r (lhs − rhs) Π_r‖₂`.
    pub fn interior_residual(&self, lhs: &SparseOp, rhs: &SparseOp, r: usize) -> Result<f64> {
        let keep = self.space.interior(r);
        linalg::spectral_norm(&lhs.sub(rhs).compress(&keep))
    }

    pub fn interior_norm(&self, op: &SparseOp, r: usize) -> Result<f64> {
        linalg::spectral_norm(&op.compress(&self.space.interior(r)))
    }

    fn identity(&self) -> SparseOp {
        SparseOp::identity(self.space.dim())
    }
}

fn check_cutoff(cutoff: usize, min: usize) -> Result<()> {
    if cutoff < min {
        return Err(WickError::InvalidParameter(format!(
            "cutoff N must be at least {min}, got {cutoff}"
        )));
    }
    Ok(())
}

fn pair(z: C64) -> (f64, f64) {
    (z.re, z.im)
}

/// `a_1 = a⊗1`, `a_2 = √(1+|x|²) 1⊗a + x a^*⊗1`.
pub fn build_rep_k3(x: C64, cutoff: usize) -> Result<OscillatorRep> {
    check_cutoff(cutoff, 4)?;
    let space = ModeSpace { modes: 2, cutoff };
    let d1 = space.raise(1);
    let d2 = space.raise(2);
    let a2 = d2
        .scale(real((1.0 + x.norm_sqr()).sqrt()))
        .add(&d1.adjoint().scale(x));
    Ok(OscillatorRep::new(
        RepKind::K3 { x: pair(x) },
        space,
        vec![d1.clone(), d2],
        d1,
        a2,
    ))
}

/// `c_3`-type generator: `s·D_3 − y D_2^* + (z̄/2) D_2² + |z| D_1^*D_2 + (z/2)(D_1^*)²`.
fn quartic_generator(modes: &[SparseOp], s: f64, y: C64, z: C64) -> SparseOp {
    let (d1, d2, d3) = (&modes[0], &modes[1], &modes[2]);
    let d1s = d1.adjoint();
    d3.scale(real(s))
        .sub(&d2.adjoint().scale(y))
        .add(&d2.mul(d2).scale(z.conj() * 0.5))
        .add(&d1s.mul(d2).scale(real(z.norm())))
        .add(&d1s.mul(&d1s).scale(z * 0.5))
}

/// Three-mode representation with `B_1 = x_1`, `B_2 = x_2`, `x_1 ≠ 0`.
pub fn build_rep_k4(x1: C64, x2: C64, cutoff: usize) -> Result<OscillatorRep> {
    if x1.norm() == 0.0 {
        return Err(WickError::InvalidParameter(
            "x1 must be nonzero; use the x1 = 0 representation".into(),
        ));
    }
    check_cutoff(cutoff, 5)?;
    let space = ModeSpace { modes: 3, cutoff };
    let modes: Vec<SparseOp> = (1..=3).map(|k| space.raise(k)).collect();
    let s = (1.0 + x2.norm_sqr() / x1.norm_sqr()).sqrt();
    let a2 = quartic_generator(&modes, s, x2 / x1.norm(), x1);
    let a1 = modes[0].clone();
    Ok(OscillatorRep::new(
        RepKind::K4 {
            x1: pair(x1),
            x2: pair(x2),
        },
        space,
        modes,
        a1,
        a2,
    ))
}

/// Three-mode representation with `B_1 = 0`, `B_2 = x_2 ≠ 0`: the `x_1 ≠ 0`
/// formulas applied to `(a_2, −a_1)` with the parameters exchanged.
pub fn build_rep_k4_x1zero(x2: C64, cutoff: usize) -> Result<OscillatorRep> {
    if x2.norm() == 0.0 {
        return Err(WickError::InvalidParameter(
            "x2 must be nonzero; with x1 = x2 = 0 the cubic ideal is annihilated".into(),
        ));
    }
    check_cutoff(cutoff, 5)?;
    let space = ModeSpace { modes: 3, cutoff };
    let modes: Vec<SparseOp> = (1..=3).map(|k| space.raise(k)).collect();
    let a1 = quartic_generator(&modes, 1.0, ZERO, x2).scale(-ONE);
    let a2 = modes[0].clone();
    Ok(OscillatorRep::new(
        RepKind::K4X1Zero { x2: pair(x2) },
        space,
        modes,
        a1,
        a2,
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RepCheck {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    /// Interior band used; `None` for identities checked on the whole space.
    pub interior: Option<usize>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl RepCheck {
    fn new(name: impl Into<String>, residual: f64, tolerance: f64, interior: Option<usize>) -> Self {
        Self {
            name: name.into(),
            residual,
            tolerance,
            interior,
            pass: residual <= tolerance,
            note: None,
        }
    }

    pub fn item(&self) -> Item {
        let mut item = Item::residual(self.name.clone(), self.residual, self.tolerance);
        if let Some(r) = self.interior {
            item = item.dim("interior_r", r);
        }
        if let Some(note) = &self.note {
            item = item.note(note.clone());
        }
        item
    }
}

struct Checker<'a> {
    rep: &'a OscillatorRep,
    tol: f64,
    r: usize,
    out: Vec<RepCheck>,
}

impl Checker<'_> {
    fn eq(&mut self, name: &str, lhs: &SparseOp, rhs: &SparseOp) -> Result<()> {
        let res = self.rep.interior_residual(lhs, rhs, self.r)?;
        self.out.push(RepCheck::new(name, res, self.tol, Some(self.r)));
        Ok(())
    }

    /// `g^*g − gg^* = 1`.
    fn ccr(&mut self, name: &str, g: &SparseOp) -> Result<()> {
        let gs = g.adjoint();
        let lhs = gs.mul(g).sub(&g.mul(&gs));
        self.eq(name, &lhs, &self.rep.identity())
    }
}

/// The relations `a_i^*a_i − a_ia_i^* = 1`, `a_1^*a_2 = a_2a_1^*`,
/// `a_2a_1 − a_1a_2 = x·1` for a `K3` representation.
pub fn verify_k3(rep: &OscillatorRep, tol: f64, r: usize) -> Result<Vec<RepCheck>> {
    let RepKind::K3 { x } = rep.kind else {
        return Err(WickError::Mismatch("expected a K3 representation".into()));
    };
    let x = C64::new(x.0, x.1);
    let mut c = Checker { rep, tol, r, out: Vec::new() };
    c.ccr("ccr_a1", &rep.a1)?;
    c.ccr("ccr_a2", &rep.a2)?;
    c.eq("a1star_a2_commute", &rep.a1.adjoint().mul(&rep.a2), &rep.a2.mul(&rep.a1.adjoint()))?;
    c.eq("a_equals_x", &rep.a, &rep.identity().scale(x))?;
    Ok(c.out)
}

fn x_params(kind: RepKind) -> Result<(C64, C64)> {
    match kind {
        RepKind::K4 { x1, x2 } => Ok((C64::new(x1.0, x1.1), C64::new(x2.0, x2.1))),
        RepKind::K4X1Zero { x2 } => Ok((ZERO, C64::new(x2.0, x2.1))),
        RepKind::K3 { .. } => Err(WickError::Mismatch("expected a K4 representation".into())),
    }
}

/// The defining relations of the quotient by `K_4` with `B_i = x_i·1`.
pub fn verify_abasic(rep: &OscillatorRep, tol: f64, r: usize) -> Result<Vec<RepCheck>> {
    let (x1, x2) = x_params(rep.kind)?;
    let (a1, a2, a) = (&rep.a1, &rep.a2, &rep.a);
    let id = rep.identity();
    let mut c = Checker { rep, tol, r, out: Vec::new() };
    c.ccr("ccr_a1", a1)?;
    c.ccr("ccr_a2", a2)?;
    c.eq("a1star_a2_commute", &a1.adjoint().mul(a2), &a2.mul(&a1.adjoint()))?;
    c.eq("b1_equals_x1", &a.commutator(a1), &id.scale(x1))?;
    c.eq("b2_equals_x2", &a.commutator(a2), &id.scale(x2))?;
    c.eq("a1star_a_commute", &a1.adjoint().mul(a), &a.mul(&a1.adjoint()))?;
    c.eq("a2star_a_commute", &a2.adjoint().mul(a), &a.mul(&a2.adjoint()))?;
    Ok(c.out)
}

/// Generators `d_i` recovered from `(a_1, a_2, A)`; requires `x_1 ≠ 0`.
pub fn derived_generators(rep: &OscillatorRep) -> Result<[SparseOp; 3]> {
    let (x1, x2) = x_params(rep.kind)?;
    if x1.norm() == 0.0 {
        return Err(WickError::InvalidParameter("derived generators need x1 != 0".into()));
    }
    let m = x1.norm();
    let d1 = rep.a1.clone();
    let d2 = rep.a.sub(&d1.adjoint().scale(x1)).scale(real(1.0 / m));
    let d1s = d1.adjoint();
    let s = (1.0 + x2.norm_sqr() / x1.norm_sqr()).sqrt();
    let d3 = rep
        .a2
        .add(&d2.adjoint().scale(x2 / m))
        .sub(&d2.mul(&d2).scale(x1.conj() * 0.5))
        .sub(&d1s.mul(&d2).scale(real(m)))
        .sub(&d1s.mul(&d1s).scale(x1 * 0.5))
        .scale(real(1.0 / s));
    Ok([d1, d2, d3])
}

/// Relations between `a_1, a_2` and the derived `d_1, d_2`.
pub fn verify_adcomrel(rep: &OscillatorRep, tol: f64, r: usize) -> Result<Vec<RepCheck>> {
    let (x1, x2) = x_params(rep.kind)?;
    let [d1, d2, _] = derived_generators(rep)?;
    let m = x1.norm();
    let a2 = &rep.a2;
    let mut c = Checker { rep, tol, r, out: Vec::new() };
    c.eq("d1star_a2_commute", &d1.adjoint().mul(a2), &a2.mul(&d1.adjoint()))?;
    c.eq(
        "a2_d1_commutator",
        &a2.commutator(&d1),
        &d2.scale(real(m)).add(&d1.adjoint().scale(x1)),
    )?;
    c.eq(
        "a2star_d2",
        &a2.adjoint().mul(&d2),
        &d2.mul(&a2.adjoint())
            .add(&d2.adjoint().scale(x1))
            .add(&d1.scale(real(m))),
    )?;
    c.eq(
        "a2_d2",
        &a2.mul(&d2),
        &d2.mul(a2).sub(&rep.identity().scale(x2 / m)),
    )?;
    Ok(c.out)
}

/// Canonical commutation relations among the derived `d_i`, and agreement
/// with the canonical mode operators.
pub fn verify_cbasic(rep: &OscillatorRep, tol: f64, r: usize) -> Result<Vec<RepCheck>> {
    let d = derived_generators(rep)?;
    let mut c = Checker { rep, tol, r, out: Vec::new() };
    for (i, di) in d.iter().enumerate() {
        c.ccr(&format!("ccr_d{}", i + 1), di)?;
    }
    for i in 0..3 {
        for j in 0..3 {
            if i == j {
                continue;
            }
            let dis = d[i].adjoint();
            c.eq(
                &format!("d{}star_d{}_commute", i + 1, j + 1),
                &dis.mul(&d[j]),
                &d[j].mul(&dis),
            )?;
            if i < j {
                c.eq(&format!("d{}_d{}_commute", i + 1, j + 1), &d[i].commutator(&d[j]), &SparseOp::zero(rep.space.dim()))?;
            }
        }
    }
    for (i, (di, mode)) in d.iter().zip(&rep.modes).enumerate() {
        c.eq(&format!("d{}_is_mode_{}", i + 1, i + 1), di, mode)?;
    }
    Ok(c.out)
}

/// Forward map `d_1 = a_1`, `d_2 = (1+|x|²)^{-1/2}(a_2 − x a_1^*)` on the `K3`
/// representation, the inverse map on canonical generators, and the round trip.
pub fn verify_change_of_generators(x: C64, cutoff: usize, tol: f64, r: usize) -> Result<Vec<RepCheck>> {
    let rep = build_rep_k3(x, cutoff)?;
    let s = (1.0 + x.norm_sqr()).sqrt();
    let (a1, a2) = (&rep.a1, &rep.a2);
    let d1 = a1.clone();
    let d2 = a2.sub(&a1.adjoint().scale(x)).scale(real(1.0 / s));
    // the variant that scales only a_2 leaves [d_2, d_1] = (x/s − x)·1
    let d2_alt = a2.scale(real(1.0 / s)).sub(&a1.adjoint().scale(x));

    let mut c = Checker { rep: &rep, tol, r, out: Vec::new() };
    c.ccr("forward_ccr_d1", &d1)?;
    c.ccr("forward_ccr_d2", &d2)?;
    c.eq("forward_d1star_d2_commute", &d1.adjoint().mul(&d2), &d2.mul(&d1.adjoint()))?;
    c.eq("forward_d2_d1_commute", &d2.mul(&d1), &d1.mul(&d2))?;
    let alt = rep.interior_norm(&d2_alt.commutator(&d1), r)?;
    if let Some(last) = c.out.last_mut() {
        last.note = Some(format!(
            "d2 = s^-1 a2 - x a1* instead gives |[d2,d1]| = {alt:.3e}"
        ));
    }

    // inverse map on the canonical generators c_i = D_i
    let (c1, c2) = (&rep.modes[0], &rep.modes[1]);
    let b1 = c1.clone();
    let b2 = c2.scale(real(s)).add(&c1.adjoint().scale(x));
    c.ccr("inverse_ccr_b1", &b1)?;
    c.ccr("inverse_ccr_b2", &b2)?;
    c.eq("inverse_b1star_b2_commute", &b1.adjoint().mul(&b2), &b2.mul(&b1.adjoint()))?;
    c.eq("inverse_b2b1_minus_b1b2", &b2.mul(&b1).sub(&b1.mul(&b2)), &rep.identity().scale(x))?;

    // d -> b -> d on the whole space
    let mut out = c.out;
    let b2_of_d = d2.scale(real(s)).add(&d1.adjoint().scale(x));
    let res = linalg::spectral_norm(&b2_of_d.sub(a2).to_dense())?
        .max(linalg::spectral_norm(&d2.sub(c2).to_dense())?);
    out.push(RepCheck::new("round_trip", res, tol.min(1e-10), None));
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct K4Demonstration {
    pub generators: Vec<RepCheck>,
    /// `‖Π_r A Π_r‖₂`.
    pub a_interior_norm: f64,
    pub a_threshold: f64,
    pub dim_k4: usize,
    pub dim_ker_r4: usize,
}

impl K4Demonstration {
    pub fn pass(&self) -> bool {
        self.generators.iter().all(|g| g.pass)
            && self.a_interior_norm >= self.a_threshold
            && self.dim_k4 < self.dim_ker_r4
    }

    pub fn items(&self) -> Vec<Item> {
        let mut items: Vec<Item> = self.generators.iter().map(RepCheck::item).collect();
        items.push(
            Item::new(
                "a_nonzero",
                Verdict::from_pass(self.a_interior_norm >= self.a_threshold),
            )
            .metric("a_interior_norm", self.a_interior_norm)
            .metric("threshold", self.a_threshold),
        );
        items.push(
            Item::new("k4_strictly_smaller", Verdict::from_pass(self.dim_k4 < self.dim_ker_r4))
                .dim("dim_k4", self.dim_k4)
                .dim("dim_ker_r4", self.dim_ker_r4),
        );
        items
    }
}

/// `π(B_ia_j − a_jB_i) = 0` while `π(A) ≠ 0`; with the chain of the flip
/// model this exhibits `K_4` strictly inside `ker R_4`.
pub fn demonstrate_k4_ne_i4(rep: &OscillatorRep, chain: &IdealChain, tol: f64) -> Result<K4Demonstration> {
    let (x1, _) = x_params(rep.kind)?;
    let entry = chain
        .entry(4)
        .ok_or_else(|| WickError::InvalidParameter("chain must reach m = 4".into()))?;
    let b = [rep.a.commutator(&rep.a1), rep.a.commutator(&rep.a2)];
    let gens = [&rep.a1, &rep.a2];
    let r = K4_GENERATOR_INTERIOR;
    let zero = SparseOp::zero(rep.space.dim());
    let mut generators = Vec::new();
    for (i, bi) in b.iter().enumerate() {
        for (j, aj) in gens.iter().enumerate() {
            let res = rep.interior_residual(&bi.commutator(aj), &zero, r)?;
            generators.push(RepCheck::new(format!("b{}_a{}_commute", i + 1, j + 1), res, tol, Some(r)));
        }
    }
    Ok(K4Demonstration {
        generators,
        a_interior_norm: rep.interior_norm(&rep.a, DEFAULT_INTERIOR)?,
        a_threshold: 0.5 * x1.norm(),
        dim_k4: entry.dim_k,
        dim_ker_r4: entry.dim_ker_r,
    })
}
