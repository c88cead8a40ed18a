//! Operators on `H^{⊗n}` built from the coefficient operator `T`.
//!
//! A [`TensorOperator`] is either a dense matrix or a matrix-free linear
//! combination of words `T_{p1} T_{p2} ⋯ T_{pk}` in the lifts of `T`. Words
//! compose right to left: `T_{pk}` acts first. Matrix-free operators are
//! materialized on demand, subject to the dense cap.

use std::sync::Arc;

use ndarray::{s, Array1, Array2, Axis};
use serde::Serialize;

use crate::error::{Result, WickError};
use crate::linalg::{self, frobenius};
use crate::model::WickCoefficients;
use crate::C64;

/// Default tolerance for operator identity residuals.
pub const DEFAULT_IDENTITY_TOL: f64 = 1e-10;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Sparse form of `T` on `H⊗H`.
#[derive(Debug, PartialEq)]
struct LocalT {
    d: usize,
    /// `(row, col, value)` with rows/cols indexing `H⊗H`.
    nz: Vec<(usize, usize, C64)>,
}

impl LocalT {
    fn new(t: &WickCoefficients) -> Self {
        let m = t.induced_matrix();
        let nz = m
            .indexed_iter()
            .filter(|(_, v)| **v != ZERO)
            .map(|((r, c), v)| (r, c, *v))
            .collect();
        Self { d: t.d(), nz }
    }

    /// Applies `T` to slots `(pos, pos+1)` (1-based) of `v ∈ H^{⊗n}`.
    fn apply_at(&self, n: usize, pos: usize, v: &Array1<C64>) -> Array1<C64> {
        let d = self.d;
        let d2 = d * d;
        let right = d.pow((n - pos - 1) as u32);
        let left = d.pow((pos - 1) as u32);
        let mut out = Array1::zeros(v.len());
        for l in 0..left {
            let base = l * d2 * right;
            for &(row, col, val) in &self.nz {
                let (ro, co) = (base + row * right, base + col * right);
                for r in 0..right {
                    out[ro + r] += val * v[co + r];
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
struct Term {
    coeff: C64,
    /// Positions of the lifts, written left to right; the last one acts first.
    word: Vec<usize>,
}

#[derive(Debug, Clone)]
enum Repr {
    Dense(Arc<Array2<C64>>),
    Words {
        t: Option<Arc<LocalT>>,
        terms: Vec<Term>,
    },
}

#[derive(Debug, Clone)]
pub struct TensorOperator {
    d: usize,
    level: usize,
    repr: Repr,
}

impl TensorOperator {
    pub fn identity(d: usize, level: usize) -> Self {
        Self {
            d,
            level,
            repr: Repr::Words {
                t: None,
                terms: vec![Term {
                    coeff: ONE,
                    word: vec![],
                }],
            },
        }
    }

    pub fn zero(d: usize, level: usize) -> Self {
        Self {
            d,
            level,
            repr: Repr::Words {
                t: None,
                terms: vec![],
            },
        }
    }

    pub fn from_dense(d: usize, level: usize, m: Array2<C64>) -> Result<Self> {
        let dim = d.pow(level as u32);
        if m.dim() != (dim, dim) {
            return Err(WickError::Mismatch(format!(
                "expected a {dim}x{dim} matrix, got {:?}",
                m.dim()
            )));
        }
        Ok(Self {
            d,
            level,
            repr: Repr::Dense(Arc::new(m)),
        })
    }

    /// The word `T_{p1} ⋯ T_{pk}` on `H^{⊗n}`.
    pub fn word(t: &WickCoefficients, n: usize, positions: &[usize]) -> Result<Self> {
        for &p in positions {
            if n < 2 || p < 1 || p > n - 1 {
                return Err(WickError::InvalidParameter(format!(
                    "lift position {p} out of range 1..={} at level {n}",
                    n.saturating_sub(1)
                )));
            }
        }
        Ok(Self {
            d: t.d(),
            level: n,
            repr: Repr::Words {
                t: Some(Arc::new(LocalT::new(t))),
                terms: vec![Term {
                    coeff: ONE,
                    word: positions.to_vec(),
                }],
            },
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn level(&self) -> usize {
        self.level
    }

    /// Side length `d^n` of the matrix.
    pub fn dim(&self) -> usize {
        self.d.pow(self.level as u32)
    }

    pub fn is_matrix_free(&self) -> bool {
        matches!(self.repr, Repr::Words { .. })
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.d != other.d || self.level != other.level {
            return Err(WickError::Mismatch(format!(
                "operators on H^{{⊗{}}} (d={}) and H^{{⊗{}}} (d={})",
                self.level, self.d, other.level, other.d
            )));
        }
        Ok(())
    }

    /// Shared `T` for two word operators, if they are compatible.
    fn common_t(a: &Option<Arc<LocalT>>, b: &Option<Arc<LocalT>>) -> Option<Option<Arc<LocalT>>> {
        match (a, b) {
            (None, None) => Some(None),
            (Some(x), None) | (None, Some(x)) => Some(Some(x.clone())),
            (Some(x), Some(y)) if Arc::ptr_eq(x, y) || x == y => Some(Some(x.clone())),
            _ => None,
        }
    }

    fn linear_combination(&self, other: &Self, beta: C64) -> Result<Self> {
        self.check_compatible(other)?;
        if let (Repr::Words { t: ta, terms: a }, Repr::Words { t: tb, terms: b }) =
            (&self.repr, &other.repr)
        {
            if let Some(t) = Self::common_t(ta, tb) {
                let mut terms = a.clone();
                terms.extend(b.iter().map(|x| Term {
                    coeff: beta * x.coeff,
                    word: x.word.clone(),
                }));
                return Ok(Self {
                    d: self.d,
                    level: self.level,
                    repr: Repr::Words {
                        t,
                        terms: simplify(terms),
                    },
                });
            }
        }
        let m = self.to_dense()? + other.to_dense()?.mapv(|z| beta * z);
        Self::from_dense(self.d, self.level, m)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.linear_combination(other, ONE)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.linear_combination(other, -ONE)
    }

    pub fn scale(&self, c: C64) -> Self {
        let repr = match &self.repr {
            Repr::Dense(m) => Repr::Dense(Arc::new(m.mapv(|z| c * z))),
            Repr::Words { t, terms } => Repr::Words {
                t: t.clone(),
                terms: terms
                    .iter()
                    .map(|x| Term {
                        coeff: c * x.coeff,
                        word: x.word.clone(),
                    })
                    .collect(),
            },
        };
        Self {
            d: self.d,
            level: self.level,
            repr,
        }
    }

    /// `self · other`; `other` acts first.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        if let (Repr::Words { t: ta, terms: a }, Repr::Words { t: tb, terms: b }) =
            (&self.repr, &other.repr)
        {
            if let Some(t) = Self::common_t(ta, tb) {
                let mut terms = Vec::with_capacity(a.len() * b.len());
                for x in a {
                    for y in b {
                        let mut word = x.word.clone();
                        word.extend_from_slice(&y.word);
                        terms.push(Term {
                            coeff: x.coeff * y.coeff,
                            word,
                        });
                    }
                }
                return Ok(Self {
                    d: self.d,
                    level: self.level,
                    repr: Repr::Words {
                        t,
                        terms: simplify(terms),
                    },
                });
            }
        }
        let m = self.to_dense()?.dot(&other.to_dense()?);
        Self::from_dense(self.d, self.level, m)
    }

    /// `A ⊗ 1_H` on `H^{⊗(n+1)}`.
    pub fn embed_right(&self) -> Result<Self> {
        match &self.repr {
            Repr::Words { t, terms } => Ok(Self {
                d: self.d,
                level: self.level + 1,
                repr: Repr::Words {
                    t: t.clone(),
                    terms: terms.clone(),
                },
            }),
            Repr::Dense(m) => {
                linalg::check_cap(self.dim() * self.d)?;
                Self::from_dense(
                    self.d,
                    self.level + 1,
                    linalg::kron(m, &Array2::eye(self.d)),
                )
            }
        }
    }

    /// `1_H ⊗ A` on `H^{⊗(n+1)}`.
    pub fn embed_left(&self) -> Result<Self> {
        match &self.repr {
            Repr::Words { t, terms } => Ok(Self {
                d: self.d,
                level: self.level + 1,
                repr: Repr::Words {
                    t: t.clone(),
                    terms: terms
                        .iter()
                        .map(|x| Term {
                            coeff: x.coeff,
                            word: x.word.iter().map(|p| p + 1).collect(),
                        })
                        .collect(),
                },
            }),
            Repr::Dense(m) => {
                linalg::check_cap(self.dim() * self.d)?;
                Self::from_dense(
                    self.d,
                    self.level + 1,
                    linalg::kron(&Array2::eye(self.d), m),
                )
            }
        }
    }

    pub fn apply(&self, v: &Array1<C64>) -> Array1<C64> {
        assert_eq!(v.len(), self.dim(), "vector length does not match operator");
        match &self.repr {
            Repr::Dense(m) => m.dot(v),
            Repr::Words { t, terms } => {
                let mut out = Array1::zeros(v.len());
                for term in terms {
                    let mut w = v.clone();
                    for &p in term.word.iter().rev() {
                        let t = t.as_ref().expect("word operator without T");
                        w = t.apply_at(self.level, p, &w);
                    }
                    out.scaled_add(term.coeff, &w);
                }
                out
            }
        }
    }

    /// Applies the operator to every column of `m`.
    pub fn apply_columns(&self, m: &Array2<C64>) -> Array2<C64> {
        match &self.repr {
            Repr::Dense(a) => a.dot(m),
            Repr::Words { .. } => {
                let mut out = Array2::zeros((self.dim(), m.ncols()));
                for (j, col) in m.axis_iter(Axis(1)).enumerate() {
                    out.column_mut(j).assign(&self.apply(&col.to_owned()));
                }
                out
            }
        }
    }

    /// Dense `d^n × d^n` matrix; refuses past the dense cap.
    pub fn to_dense(&self) -> Result<Array2<C64>> {
        let dim = self.dim();
        linalg::check_cap(dim)?;
        match &self.repr {
            Repr::Dense(m) => Ok((**m).clone()),
            Repr::Words { .. } => Ok(self.apply_columns(&Array2::eye(dim))),
        }
    }

    /// Dense version of this operator.
    pub fn materialize(&self) -> Result<Self> {
        Self::from_dense(self.d, self.level, self.to_dense()?)
    }
}

/// Merges terms with identical words and drops zero coefficients.
fn simplify(terms: Vec<Term>) -> Vec<Term> {
    let mut out: Vec<Term> = Vec::with_capacity(terms.len());
    for t in terms {
        match out.iter_mut().find(|x| x.word == t.word) {
            Some(x) => x.coeff += t.coeff,
            None => out.push(t),
        }
    }
    out.retain(|t| t.coeff != ZERO);
    out
}

/// `T_i`: `T` acting on factors `(i, i+1)` of `H^{⊗n}`.
pub fn lift(t: &WickCoefficients, n: usize, i: usize) -> Result<TensorOperator> {
    if n < 2 || i < 1 || i > n - 1 {
        return Err(WickError::InvalidParameter(format!(
            "lift needs n >= 2 and 1 <= i <= n-1, got n = {n}, i = {i}"
        )));
    }
    TensorOperator::word(t, n, &[i])
}

/// `T_1 T_2 ⋯ T_k` on `H^{⊗n}`.
pub fn chain(t: &WickCoefficients, n: usize, k: usize) -> Result<TensorOperator> {
    chain_range(t, n, 1, k)
}

/// `T_a T_{a+1} ⋯ T_b` on `H^{⊗n}`; the identity when `b < a`.
pub fn chain_range(t: &WickCoefficients, n: usize, a: usize, b: usize) -> Result<TensorOperator> {
    if b < a {
        return Ok(TensorOperator::identity(t.d(), n));
    }
    if n < 2 || a < 1 || b > n - 1 {
        return Err(WickError::InvalidParameter(format!(
            "chain T_{a}..T_{b} out of range at level {n}"
        )));
    }
    let word: Vec<usize> = (a..=b).collect();
    TensorOperator::word(t, n, &word)
}

/// `R_n = 1 + T_1 + T_1T_2 + ⋯ + T_1⋯T_{n-1}`; `R_1` is the identity on `H`.
pub fn build_rn(t: &WickCoefficients, n: usize) -> Result<TensorOperator> {
    if n == 0 {
        return Err(WickError::InvalidParameter(
            "R_n is defined for n >= 1".into(),
        ));
    }
    let mut r = TensorOperator::identity(t.d(), n);
    for k in 1..n {
        r = r.add(&chain(t, n, k)?)?;
    }
    Ok(r)
}

/// Dense `R_n` from `R_1 = 1`, `R_{m+1} = 1 + T_1(1 ⊗ R_m)`.
pub fn build_rn_recursive(t: &WickCoefficients, n: usize) -> Result<Array2<C64>> {
    let d = t.d();
    linalg::check_cap(d.pow(n as u32))?;
    let mut r = Array2::<C64>::eye(d);
    for m in 1..n {
        let t1 = lift(t, m + 1, 1)?.to_dense()?;
        let inner = linalg::kron(&Array2::eye(d), &r);
        r = Array2::eye(d.pow(m as u32 + 1)) + t1.dot(&inner);
    }
    Ok(r)
}

/// Dense `R_n` from `R_{m+1} = R_m ⊗ 1 + T_1⋯T_m`.
pub fn build_rn_tail(t: &WickCoefficients, n: usize) -> Result<Array2<C64>> {
    let d = t.d();
    linalg::check_cap(d.pow(n as u32))?;
    let mut r = Array2::<C64>::eye(d);
    for m in 1..n {
        r = linalg::kron(&r, &Array2::eye(d)) + chain(t, m + 1, m)?.to_dense()?;
    }
    Ok(r)
}

/// Fock Gram operator: `P_0 = 1`, `P_1 = 1_H`, `P_n = (1 ⊗ P_{n-1}) R_n`.
pub fn build_pn(t: &WickCoefficients, n: usize) -> Result<TensorOperator> {
    let d = t.d();
    if n == 0 {
        return TensorOperator::from_dense(d, 0, Array2::eye(1));
    }
    linalg::check_cap(d.pow(n as u32))?;
    let mut p = Array2::<C64>::eye(d);
    for m in 2..=n {
        let r = build_rn(t, m)?.to_dense()?;
        p = block_left_multiply(d, &p, &r);
    }
    TensorOperator::from_dense(d, n, p)
}

/// `(1_H ⊗ P) · R` without forming the Kronecker product.
fn block_left_multiply(d: usize, p: &Array2<C64>, r: &Array2<C64>) -> Array2<C64> {
    let b = p.nrows();
    let mut out = Array2::zeros(r.dim());
    for k in 0..d {
        let rows = s![k * b..(k + 1) * b, ..];
        out.slice_mut(rows).assign(&p.dot(&r.slice(rows)));
    }
    out
}

/// Largest singular value.
pub fn op_norm(a: &TensorOperator) -> Result<f64> {
    linalg::spectral_norm(&a.to_dense()?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityReport {
    pub name: String,
    pub level: usize,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub hypothesis_met: bool,
}

/// `‖L − R‖_F / max(1, ‖L‖_F)`.
pub fn relative_residual(lhs: &Array2<C64>, rhs: &Array2<C64>) -> f64 {
    let diff = lhs - rhs;
    frobenius(diff.view()) / frobenius(lhs.view()).max(1.0)
}

fn identity_report(
    name: &str,
    lhs: &TensorOperator,
    rhs: &TensorOperator,
    tol: f64,
    hypothesis_met: bool,
) -> Result<IdentityReport> {
    let residual = relative_residual(&lhs.to_dense()?, &rhs.to_dense()?);
    Ok(IdentityReport {
        name: name.to_string(),
        level: lhs.level(),
        residual,
        tolerance: tol,
        pass: residual <= tol,
        hypothesis_met,
    })
}

/// `T_1T_2T_1 = T_2T_1T_2` on `H^{⊗3}`.
pub fn check_braid(t: &WickCoefficients, tol: f64) -> Result<IdentityReport> {
    let lhs = TensorOperator::word(t, 3, &[1, 2, 1])?;
    let rhs = TensorOperator::word(t, 3, &[2, 1, 2])?;
    identity_report("braid", &lhs, &rhs, tol, true)
}

pub fn is_braided(t: &WickCoefficients) -> Result<bool> {
    Ok(check_braid(t, DEFAULT_IDENTITY_TOL)?.pass)
}

/// `(T_1⋯T_n)(T_1⋯T_k) = (T_2⋯T_{k+1})(T_1⋯T_n)` on `H^{⊗(n+1)}`.
pub fn verify_chain_commutation(
    t: &WickCoefficients,
    n: usize,
    k: usize,
    tol: f64,
) -> Result<IdentityReport> {
    if n < 2 || k < 1 || k > n - 1 {
        return Err(WickError::InvalidParameter(format!(
            "chain commutation needs n >= 2, 1 <= k <= n-1; got n = {n}, k = {k}"
        )));
    }
    let braided = is_braided(t)?;
    let level = n + 1;
    let full = chain(t, level, n)?;
    let lhs = full.compose(&chain(t, level, k)?)?;
    let rhs = chain_range(t, level, 2, k + 1)?.compose(&full)?;
    identity_report("chain_commutation", &lhs, &rhs, tol, braided)
}

/// `R_{n+1}(1 − T_1⋯T_n) = (1 − T_1²T_2⋯T_n)(R_n ⊗ 1)` and
/// `R_{n+1}T_1⋯T_n = T_1⋯T_n + T_1²T_2⋯T_n(R_n ⊗ 1)`, both on `H^{⊗(n+1)}`.
pub fn verify_r_factorization(
    t: &WickCoefficients,
    n: usize,
    tol: f64,
) -> Result<Vec<IdentityReport>> {
    if n < 2 {
        return Err(WickError::InvalidParameter(format!(
            "R factorization needs n >= 2, got {n}"
        )));
    }
    let braided = is_braided(t)?;
    let level = n + 1;
    let one = TensorOperator::identity(t.d(), level);
    let r_next = build_rn(t, level)?;
    let r_ext = build_rn(t, n)?.embed_right()?;
    let full = chain(t, level, n)?;
    let mut squared: Vec<usize> = vec![1];
    squared.extend(1..=n);
    let sq = TensorOperator::word(t, level, &squared)?;

    let lhs = r_next.compose(&one.sub(&full)?)?;
    let rhs = one.sub(&sq)?.compose(&r_ext)?;
    let factorization = identity_report("r_factorization", &lhs, &rhs, tol, braided)?;

    let lhs = r_next.compose(&full)?;
    let rhs = full.add(&sq.compose(&r_ext)?)?;
    let companion = identity_report("r_times_chain", &lhs, &rhs, tol, braided)?;
    Ok(vec![factorization, companion])
}

/// Agreement of the summation form of `R_n` with both recursions.
pub fn verify_r_recursion(t: &WickCoefficients, n: usize, tol: f64) -> Result<Vec<IdentityReport>> {
    let sum = build_rn(t, n)?;
    let rec = TensorOperator::from_dense(t.d(), n, build_rn_recursive(t, n)?)?;
    let tail = TensorOperator::from_dense(t.d(), n, build_rn_tail(t, n)?)?;
    Ok(vec![
        identity_report("r_recursion_head", &sum, &rec, tol, true)?,
        identity_report("r_recursion_tail", &sum, &tail, tol, true)?,
    ])
}

/// `T_iT_j = T_jT_i` for `|i − j| ≥ 2` on `H^{⊗n}`; worst residual over pairs.
pub fn verify_far_commutation(t: &WickCoefficients, n: usize, tol: f64) -> Result<IdentityReport> {
    let mut worst = IdentityReport {
        name: "far_commutation".into(),
        level: n,
        residual: 0.0,
        tolerance: tol,
        pass: true,
        hypothesis_met: true,
    };
    for i in 1..n {
        for j in (i + 2)..n {
            let lhs = TensorOperator::word(t, n, &[i, j])?;
            let rhs = TensorOperator::word(t, n, &[j, i])?;
            let r = identity_report("far_commutation", &lhs, &rhs, tol, true)?;
            if r.residual > worst.residual {
                worst = r;
            }
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_ccr_flip, build_free, build_quon};
    use ndarray::Array1;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn basis(d: usize, letters: &[usize]) -> Array1<C64> {
        let n = letters.len();
        let mut idx = 0;
        for &a in letters {
            idx = idx * d + (a - 1);
        }
        let mut v = Array1::zeros(d.pow(n as u32));
        v[idx] = ONE;
        v
    }

    fn max_abs(v: &Array1<C64>) -> f64 {
        v.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn lift_quon_first_slot() {
        let lambda = c(0.0, 1.0);
        let t = build_quon(2, 0.5, lambda).unwrap();
        let t1 = lift(&t, 3, 1).unwrap();
        let out = t1.apply(&basis(2, &[1, 2, 1]));
        let expected = basis(2, &[2, 1, 1]).mapv(|z| z * lambda.conj());
        assert!(max_abs(&(out - expected)) < 1e-15);
    }

    #[test]
    fn lift_of_free_model_is_zero() {
        let t = build_free(2).unwrap();
        for n in 2..5 {
            for i in 1..n {
                let m = lift(&t, n, i).unwrap().to_dense().unwrap();
                assert!(m.iter().all(|z| *z == ZERO));
            }
        }
    }

    #[test]
    fn lift_flip_second_slot() {
        let t = build_ccr_flip(2).unwrap();
        let out = lift(&t, 3, 2).unwrap().apply(&basis(2, &[1, 1, 2]));
        assert_eq!(out, basis(2, &[1, 2, 1]));
    }

    #[test]
    fn lift_rejects_bad_positions() {
        let t = build_ccr_flip(2).unwrap();
        assert!(lift(&t, 3, 0).is_err());
        assert!(lift(&t, 3, 3).is_err());
        assert!(lift(&t, 1, 1).is_err());
        assert!(chain(&t, 3, 3).is_err());
    }

    #[test]
    fn flip_chain_moves_last_letter_to_front() {
        let t = build_ccr_flip(2).unwrap();
        let ch = chain(&t, 3, 2).unwrap();
        for a in 1..=2 {
            for b in 1..=2 {
                for i in 1..=2 {
                    assert_eq!(ch.apply(&basis(2, &[a, b, i])), basis(2, &[i, a, b]));
                }
            }
        }
    }

    #[test]
    fn chain_of_length_one_is_lift() {
        let t = build_quon(2, 0.3, c(0.6, 0.8)).unwrap();
        let a = chain(&t, 4, 1).unwrap().to_dense().unwrap();
        let b = lift(&t, 4, 1).unwrap().to_dense().unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn quon_chain_matches_matrix_product() {
        let t = build_quon(2, 0.5, c(0.6, 0.8)).unwrap();
        let t1 = lift(&t, 3, 1).unwrap().to_dense().unwrap();
        let t2 = lift(&t, 3, 2).unwrap().to_dense().unwrap();
        let product = t1.dot(&t2);
        let v = basis(2, &[1, 2, 2]);
        let mf = chain(&t, 3, 2).unwrap().apply(&v);
        assert!(max_abs(&(mf - product.dot(&v))) < 1e-15);
    }

    #[test]
    fn rn_of_free_model_is_identity() {
        let t = build_free(2).unwrap();
        for n in 1..6 {
            let r = build_rn(&t, n).unwrap().to_dense().unwrap();
            assert_eq!(r, Array2::eye(2usize.pow(n as u32)));
        }
    }

    #[test]
    fn quon_r2_kills_a() {
        let t = build_quon(2, 0.5, ONE).unwrap();
        let r2 = build_rn(&t, 2).unwrap();
        let a = basis(2, &[2, 1]) - basis(2, &[1, 2]);
        assert!(max_abs(&r2.apply(&a)) < 1e-15);
    }

    #[test]
    fn flip_r3_recursions_agree() {
        let t = build_ccr_flip(2).unwrap();
        for r in verify_r_recursion(&t, 3, 1e-11).unwrap() {
            assert!(r.pass, "{r:?}");
        }
    }

    #[test]
    fn pn_examples() {
        let free = build_free(2).unwrap();
        let p = build_pn(&free, 4).unwrap().to_dense().unwrap();
        assert_eq!(p, Array2::eye(16));
        assert_eq!(build_pn(&free, 0).unwrap().to_dense().unwrap()[[0, 0]], ONE);

        let flip = build_ccr_flip(2).unwrap();
        let p2 = build_pn(&flip, 2).unwrap().to_dense().unwrap();
        let ev = linalg::eigvalsh(&p2).unwrap();
        let expected = [0.0, 2.0, 2.0, 2.0];
        for (a, b) in ev.iter().zip(expected) {
            assert!((a - b).abs() < 1e-12);
        }
        let a12 = basis(2, &[2, 1]) - basis(2, &[1, 2]);
        assert!(max_abs(&p2.dot(&a12)) < 1e-15);
    }

    #[test]
    fn quon_p3_positive() {
        let t = build_quon(2, 0.5, c(0.0, 1.0)).unwrap();
        let p3 = build_pn(&t, 3).unwrap().to_dense().unwrap();
        assert!(relative_residual(&p3, &linalg::adjoint(&p3)) < 1e-12);
        let ev = linalg::eigvalsh(&p3).unwrap();
        assert!(ev.iter().all(|&x| x >= -1e-10));
    }

    #[test]
    fn quon_norms() {
        let t = build_quon(2, 0.5, ONE).unwrap();
        let w = TensorOperator::word(&t, 3, &[1, 2, 1]).unwrap();
        assert!((op_norm(&w).unwrap() - 0.5).abs() < 1e-10);
        let t3 = build_quon(3, 0.5, ONE).unwrap();
        let w3 = TensorOperator::word(&t3, 3, &[1, 2, 1]).unwrap();
        assert!((op_norm(&w3).unwrap() - 1.0).abs() < 1e-10);
        assert_eq!(op_norm(&TensorOperator::zero(2, 3)).unwrap(), 0.0);
    }

    #[test]
    fn braid_checks() {
        for lambda in [ONE, c(0.0, 1.0)] {
            let t = build_quon(2, 0.7, lambda).unwrap();
            assert!(check_braid(&t, 1e-12).unwrap().pass);
        }
        assert!(check_braid(&build_free(2).unwrap(), 1e-12).unwrap().pass);

        let mut diag = Array2::zeros((4, 4));
        for k in 0..4 {
            diag[[k, k]] = c((k + 1) as f64, 0.0);
        }
        let t = WickCoefficients::from_induced_matrix(2, diag).unwrap();
        let r = check_braid(&t, 1e-12).unwrap();
        assert!(!r.pass && r.residual > 0.1, "{r:?}");
    }

    #[test]
    fn chain_commutation_and_factorization() {
        let quon = build_quon(2, 0.5, c(0.6, 0.8)).unwrap();
        assert!(verify_chain_commutation(&quon, 3, 2, 1e-12).unwrap().pass);
        let flip3 = build_ccr_flip(3).unwrap();
        assert!(verify_chain_commutation(&flip3, 4, 2, 1e-12).unwrap().pass);
        let free = build_free(2).unwrap();
        assert!(verify_chain_commutation(&free, 3, 1, 1e-12).unwrap().pass);

        for r in verify_r_factorization(&quon, 3, 1e-11).unwrap() {
            assert!(r.pass, "{r:?}");
        }
        for r in verify_r_factorization(&build_ccr_flip(2).unwrap(), 4, 1e-11).unwrap() {
            assert!(r.pass, "{r:?}");
        }
        for r in verify_r_factorization(&free, 3, 1e-11).unwrap() {
            assert!(r.pass, "{r:?}");
        }
    }

    #[test]
    fn non_braided_input_is_flagged() {
        let mut diag = Array2::zeros((4, 4));
        for k in 0..4 {
            diag[[k, k]] = c((k + 1) as f64, 0.0);
        }
        let t = WickCoefficients::from_induced_matrix(2, diag).unwrap();
        let r = verify_chain_commutation(&t, 3, 1, 1e-12).unwrap();
        assert!(!r.hypothesis_met);
    }

    #[test]
    fn far_lifts_commute() {
        let t = build_quon(3, 0.4, c(0.0, 1.0)).unwrap();
        assert!(verify_far_commutation(&t, 5, 1e-12).unwrap().pass);
    }

    #[test]
    fn lift_singular_values_repeat_those_of_t() {
        let t = build_quon(2, 0.3, c(0.6, 0.8)).unwrap();
        let sv_t: Vec<f64> = linalg::singular_values(t.induced_matrix())
            .unwrap()
            .to_vec();
        for (n, i) in [(3, 1), (3, 2), (4, 2)] {
            let mult = 2usize.pow(n as u32 - 2);
            let sv: Vec<f64> = linalg::singular_values(&lift(&t, n, i).unwrap().to_dense().unwrap())
                .unwrap()
                .to_vec();
            let mut expected: Vec<f64> = sv_t
                .iter()
                .flat_map(|&x| std::iter::repeat_n(x, mult))
                .collect();
            expected.sort_by(|a, b| b.partial_cmp(a).unwrap());
            for (a, b) in sv.iter().zip(&expected) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn dense_cap_refuses_large_materialization() {
        let t = build_ccr_flip(4).unwrap();
        let r = build_rn(&t, 7).unwrap();
        assert!(matches!(r.to_dense(), Err(WickError::Capacity { .. })));
        // matrix-free application still works
        let v = Array1::from_elem(r.dim(), ONE);
        assert_eq!(r.apply(&v).len(), 4usize.pow(7));
    }
}
