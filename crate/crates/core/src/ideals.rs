//! Homogeneous Wick ideals, described by their generating subspaces.
//!
//! `K_2 = ker R_2` and `K_{m+1} = (1 − T_1⋯T_m)(K_m ⊗ H)`. For braided `T`
//! each `K_m` generates a homogeneous Wick ideal contained in the largest one,
//! `ker R_m`.

use serde::Serialize;

use crate::error::{Result, WickError};
use crate::linalg;
use crate::model::WickCoefficients;
use crate::report::Verdict;
use crate::subspace::{kernel, Subspace, DEFAULT_CONTAIN_TOL};
use crate::tensor_ops::{build_rn, chain, is_braided, TensorOperator};

/// `1 − T_1⋯T_m` on `H^{⊗(m+1)}`.
pub fn one_minus_chain(t: &WickCoefficients, m: usize) -> Result<TensorOperator> {
    let level = m + 1;
    TensorOperator::identity(t.d(), level).sub(&chain(t, level, m)?)
}

/// `1 − T_1²T_2⋯T_m` on `H^{⊗(m+1)}`.
pub fn one_minus_squared_chain(t: &WickCoefficients, m: usize) -> Result<TensorOperator> {
    let level = m + 1;
    let mut word = vec![1];
    word.extend(1..=m);
    TensorOperator::identity(t.d(), level).sub(&TensorOperator::word(t, level, &word)?)
}

/// `ker R_n`, with `ker R_0 = ker R_1 = {0}`.
pub fn largest_ideal(t: &WickCoefficients, n: usize, rel_tol: f64) -> Result<Subspace> {
    if n <= 1 {
        return Ok(Subspace::zero(t.d(), n));
    }
    kernel(&build_rn(t, n)?, rel_tol)
}

/// One step of the recursion: `(1 − T_1⋯T_n)(I ⊗ H)`.
pub fn next_ideal(t: &WickCoefficients, ideal: &Subspace, rel_tol: f64) -> Result<Subspace> {
    let n = ideal.level();
    ideal
        .tensor_full_right()?
        .apply(&one_minus_chain(t, n)?, rel_tol)
}

#[derive(Debug, Clone, Serialize)]
pub struct ChainEntry {
    pub m: usize,
    #[serde(skip)]
    pub k: Subspace,
    #[serde(skip)]
    pub ker_r: Subspace,
    pub dim_k: usize,
    pub dim_ker_r: usize,
    /// `K_m ⊂ ker R_m`.
    pub contained: bool,
    /// `K_m = ker R_m`.
    pub equal: bool,
    /// Both rank cuts have a spectral gap of at least `MIN_SPECTRAL_GAP`.
    pub conclusive: bool,
    /// `K_m ⊂ H⊗K_{m−1} + K_{m−1}⊗H`; `None` for `m = 2`.
    pub nested: Option<bool>,
    pub gap_k: f64,
    pub gap_ker_r: f64,
}

impl ChainEntry {
    pub fn equality_verdict(&self) -> Verdict {
        Verdict::gated(self.equal, self.conclusive)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct IdealChain {
    pub d: usize,
    pub rel_tol: f64,
    pub entries: Vec<ChainEntry>,
}

impl IdealChain {
    pub fn entry(&self, m: usize) -> Option<&ChainEntry> {
        self.entries.iter().find(|e| e.m == m)
    }

    pub fn dims_k(&self) -> Vec<usize> {
        self.entries.iter().map(|e| e.dim_k).collect()
    }

    pub fn dims_ker_r(&self) -> Vec<usize> {
        self.entries.iter().map(|e| e.dim_ker_r).collect()
    }
}

/// `K_2, …, K_{m_max}` next to `ker R_2, …, ker R_{m_max}`. Refuses non-braided `T`.
pub fn k_chain(t: &WickCoefficients, m_max: usize, rel_tol: f64) -> Result<IdealChain> {
    if !is_braided(t)? {
        return Err(WickError::Hypothesis(
            "the ideal chain requires a braided T".into(),
        ));
    }
    if m_max < 2 {
        return Err(WickError::InvalidParameter(format!(
            "m_max must be at least 2, got {m_max}"
        )));
    }
    linalg::check_cap(t.d().pow(m_max as u32))?;
    let mut entries: Vec<ChainEntry> = Vec::new();
    let mut k = largest_ideal(t, 2, rel_tol)?;
    for m in 2..=m_max {
        if m > 2 {
            k = next_ideal(t, &k, rel_tol)?;
        }
        let ker_r = largest_ideal(t, m, rel_tol)?;
        let nested = match entries.last() {
            Some(prev) => {
                let around = prev
                    .k
                    .tensor_full_left()?
                    .sum(&prev.k.tensor_full_right()?, rel_tol)?;
                Some(around.contains(&k, DEFAULT_CONTAIN_TOL)?)
            }
            None => None,
        };
        let contained = ker_r.contains(&k, DEFAULT_CONTAIN_TOL)?;
        entries.push(ChainEntry {
            m,
            dim_k: k.dim(),
            dim_ker_r: ker_r.dim(),
            contained,
            equal: ker_r.equal(&k, DEFAULT_CONTAIN_TOL)?,
            conclusive: k.gap_ok() && ker_r.gap_ok(),
            nested,
            gap_k: k.spectral_gap(),
            gap_ker_r: ker_r.spectral_gap(),
            k: k.clone(),
            ker_r,
        });
    }
    Ok(IdealChain {
        d: t.d(),
        rel_tol,
        entries,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionReport {
    pub level: usize,
    /// `R_n P = 0`.
    pub residual_kernel: f64,
    /// `[1 ⊗ (1 − P)] T_1⋯T_n [P ⊗ 1] = 0`.
    pub residual_invariance: f64,
    pub tolerance: f64,
    pub pass_kernel: bool,
    pub pass_invariance: bool,
    pub pass: bool,
}

fn scaled(x: f64) -> f64 {
    x / x.max(1.0)
}

/// Tests whether `S ⊂ H^{⊗n}` generates a Wick ideal.
///
/// With `Q` an orthonormal basis of `S` and `P = QQ^*`, `‖R_nP‖_F = ‖R_nQ‖_F`
/// and the second condition reduces to `(Q ⊗ 1)` columns as well.
pub fn wick_criterion(t: &WickCoefficients, s: &Subspace, tol: f64) -> Result<CriterionReport> {
    let n = s.level();
    if n < 2 {
        return Err(WickError::InvalidParameter(format!(
            "Wick criterion needs level >= 2, got {n}"
        )));
    }
    if s.d() != t.d() {
        return Err(WickError::Mismatch("subspace and model disagree on d".into()));
    }
    linalg::check_cap(t.d().pow(n as u32 + 1))?;
    let r = build_rn(t, n)?;
    let rq = r.apply_columns(s.basis());
    let residual_kernel = scaled(linalg::frobenius(rq.view()));

    let right = s.tensor_full_right()?;
    let left = s.tensor_full_left()?;
    let image = chain(t, n + 1, n)?.apply_columns(right.basis());
    let q = left.basis();
    let leftover = &image - &q.dot(&linalg::adjoint(q).dot(&image));
    let residual_invariance = scaled(linalg::frobenius(leftover.view()));

    let pass_kernel = residual_kernel <= tol;
    let pass_invariance = residual_invariance <= tol;
    Ok(CriterionReport {
        level: n,
        residual_kernel,
        residual_invariance,
        tolerance: tol,
        pass_kernel,
        pass_invariance,
        pass: pass_kernel && pass_invariance,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConjectureReport {
    pub n: usize,
    /// `dim ker R_{n+1}`.
    pub dim_lhs: usize,
    /// `dim (1 − T_1⋯T_n)(ker R_n ⊗ H)`.
    pub dim_recursive_part: usize,
    /// `dim ker R_{n−1} ⊗ ker R_2`.
    pub dim_product_part: usize,
    pub dim_rhs: usize,
    pub equal: bool,
    pub conclusive: bool,
    /// Largest residual of the right-hand side projected onto `ker R_{n+1}`.
    pub residual_rhs_in_lhs: f64,
    pub residual_lhs_in_rhs: f64,
    pub min_gap: f64,
}

impl ConjectureReport {
    pub fn verdict(&self) -> Verdict {
        Verdict::gated(self.equal, self.conclusive)
    }
}

/// Compares `ker R_{n+1}` with `(1 − T_1⋯T_n)(ker R_n ⊗ H) + ker R_{n−1} ⊗ ker R_2`.
///
/// The product term sits at level `n + 1`; `ker R_1 = {0}` makes it vanish for `n = 2`.
pub fn conjecture_check(t: &WickCoefficients, n: usize, rel_tol: f64) -> Result<ConjectureReport> {
    if n < 2 {
        return Err(WickError::InvalidParameter(format!(
            "conjecture check needs n >= 2, got {n}"
        )));
    }
    if !is_braided(t)? {
        return Err(WickError::Hypothesis(
            "the conjecture is stated for braided T".into(),
        ));
    }
    let lhs = largest_ideal(t, n + 1, rel_tol)?;
    let ker_n = largest_ideal(t, n, rel_tol)?;
    let recursive = next_ideal(t, &ker_n, rel_tol)?;
    let product = largest_ideal(t, n - 1, rel_tol)?.tensor(&largest_ideal(t, 2, rel_tol)?)?;
    let rhs = recursive.sum(&product, rel_tol)?;
    let residual_rhs_in_lhs = lhs.containment_residual(&rhs)?;
    let residual_lhs_in_rhs = rhs.containment_residual(&lhs)?;
    let min_gap = lhs.spectral_gap().min(rhs.spectral_gap());
    Ok(ConjectureReport {
        n,
        dim_lhs: lhs.dim(),
        dim_recursive_part: recursive.dim(),
        dim_product_part: product.dim(),
        dim_rhs: rhs.dim(),
        equal: lhs.dim() == rhs.dim()
            && residual_rhs_in_lhs <= DEFAULT_CONTAIN_TOL
            && residual_lhs_in_rhs <= DEFAULT_CONTAIN_TOL,
        conclusive: lhs.gap_ok() && rhs.gap_ok(),
        residual_rhs_in_lhs,
        residual_lhs_in_rhs,
        min_gap,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvertibilityReport {
    pub m: usize,
    /// Extreme singular values of `1 − T_1⋯T_m`.
    pub sigma_min_chain: f64,
    pub sigma_max_chain: f64,
    /// Extreme singular values of `1 − T_1²T_2⋯T_m`.
    pub sigma_min_squared: f64,
    pub sigma_max_squared: f64,
    pub rel_tol: f64,
    pub satisfied: bool,
}

/// Invertibility of `1 − T_1⋯T_m` and `1 − T_1²T_2⋯T_m` on `H^{⊗(m+1)}`.
pub fn invertibility_hypotheses(
    t: &WickCoefficients,
    m: usize,
    rel_tol: f64,
) -> Result<InvertibilityReport> {
    if m < 1 {
        return Err(WickError::InvalidParameter("m must be at least 1".into()));
    }
    let extremes = |op: TensorOperator| -> Result<(f64, f64)> {
        let s = linalg::singular_values(&op.to_dense()?)?;
        let max = s.iter().cloned().fold(0.0, f64::max);
        let min = s.iter().cloned().fold(f64::INFINITY, f64::min);
        Ok((min, max))
    };
    let (sigma_min_chain, sigma_max_chain) = extremes(one_minus_chain(t, m)?)?;
    let (sigma_min_squared, sigma_max_squared) = extremes(one_minus_squared_chain(t, m)?)?;
    Ok(InvertibilityReport {
        m,
        sigma_min_chain,
        sigma_max_chain,
        sigma_min_squared,
        sigma_max_squared,
        rel_tol,
        satisfied: sigma_min_chain > rel_tol * sigma_max_chain
            && sigma_min_squared > rel_tol * sigma_max_squared,
    })
}
