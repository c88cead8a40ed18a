//! Subspaces of `H^{⊗n}` stored by orthonormal bases.

use std::path::Path;

use ndarray::{concatenate, Array1, Array2, Axis};
use serde::{Deserialize, Serialize};

use crate::error::{Result, WickError};
use crate::linalg::{self, RankCut, GAP_CAP};
use crate::tensor_ops::TensorOperator;
use crate::C64;

/// Default relative rank threshold.
pub const DEFAULT_RANK_TOL: f64 = 1e-8;
/// Default projection residual used by containment tests.
pub const DEFAULT_CONTAIN_TOL: f64 = 1e-8;
/// Minimum spectral gap across a rank cut for a dimension claim to count.
pub const MIN_SPECTRAL_GAP: f64 = 1e3;

#[derive(Debug, Clone)]
pub struct Subspace {
    d: usize,
    level: usize,
    /// `d^n × dim`, orthonormal columns.
    basis: Array2<C64>,
    tol_used: f64,
    /// Smallest spectral gap over every rank cut that produced this subspace.
    gap: f64,
}

impl Subspace {
    pub fn zero(d: usize, level: usize) -> Self {
        Self {
            d,
            level,
            basis: Array2::zeros((d.pow(level as u32), 0)),
            tol_used: 0.0,
            gap: GAP_CAP,
        }
    }

    pub fn full(d: usize, level: usize) -> Self {
        Self {
            d,
            level,
            basis: Array2::eye(d.pow(level as u32)),
            tol_used: 0.0,
            gap: GAP_CAP,
        }
    }

    /// Orthonormalized span of the columns of `vectors`.
    pub fn span(d: usize, level: usize, vectors: &Array2<C64>, rel_tol: f64) -> Result<Self> {
        let n = d.pow(level as u32);
        if vectors.nrows() != n {
            return Err(WickError::Mismatch(format!(
                "vectors of length {} at level {level} (expected {n})",
                vectors.nrows()
            )));
        }
        let RankCut { basis, gap } = linalg::orthonormal_span(vectors, rel_tol)?;
        Ok(Self {
            d,
            level,
            basis,
            tol_used: rel_tol,
            gap,
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn basis(&self) -> &Array2<C64> {
        &self.basis
    }

    pub fn tol_used(&self) -> f64 {
        self.tol_used
    }

    /// Smallest ratio across the rank cuts behind this subspace.
    pub fn spectral_gap(&self) -> f64 {
        self.gap
    }

    pub fn gap_ok(&self) -> bool {
        self.gap >= MIN_SPECTRAL_GAP
    }

    fn check_same_level(&self, other: &Self) -> Result<()> {
        if self.d != other.d || self.level != other.level {
            return Err(WickError::Mismatch(format!(
                "subspaces at level {} (d={}) and level {} (d={})",
                self.level, self.d, other.level, other.d
            )));
        }
        Ok(())
    }

    fn check_same_d(&self, other: &Self) -> Result<()> {
        if self.d != other.d {
            return Err(WickError::Mismatch(format!(
                "subspaces over d={} and d={}",
                self.d, other.d
            )));
        }
        Ok(())
    }

    /// Orthogonal projector `Q Q^*`.
    pub fn projector(&self) -> Array2<C64> {
        self.basis.dot(&linalg::adjoint(&self.basis))
    }

    /// `‖v − P v‖` for the orthogonal projector `P` onto this subspace.
    pub fn residual(&self, v: &Array1<C64>) -> f64 {
        let coords = linalg::adjoint(&self.basis).dot(v);
        let proj = self.basis.dot(&coords);
        linalg::vec_norm(&(v - &proj))
    }

    pub fn contains_vector(&self, v: &Array1<C64>, tol: f64) -> bool {
        self.residual(v) <= tol
    }

    /// Largest projection residual of a basis vector of `small`.
    pub fn containment_residual(&self, small: &Self) -> Result<f64> {
        self.check_same_level(small)?;
        if small.is_zero() {
            return Ok(0.0);
        }
        let coords = linalg::adjoint(&self.basis).dot(&small.basis);
        let diff = &small.basis - &self.basis.dot(&coords);
        Ok(diff
            .axis_iter(Axis(1))
            .map(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
            .fold(0.0, f64::max))
    }

    pub fn contains(&self, small: &Self, tol: f64) -> Result<bool> {
        Ok(self.containment_residual(small)? <= tol)
    }

    pub fn equal(&self, other: &Self, tol: f64) -> Result<bool> {
        Ok(self.dim() == other.dim() && self.contains(other, tol)? && other.contains(self, tol)?)
    }

    /// `S₁ + S₂`.
    pub fn sum(&self, other: &Self, rel_tol: f64) -> Result<Self> {
        self.check_same_level(other)?;
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        let cols = concatenate(Axis(1), &[self.basis.view(), other.basis.view()])
            .expect("same row count");
        let mut s = Self::span(self.d, self.level, &cols, rel_tol)?;
        s.gap = s.gap.min(self.gap).min(other.gap);
        Ok(s)
    }

    /// `S₁ ⊗ S₂` at level `n₁ + n₂`.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        self.check_same_d(other)?;
        let level = self.level + other.level;
        let n = self.d.pow(level as u32);
        let mut basis = Array2::zeros((n, self.dim() * other.dim()));
        let mut k = 0;
        for a in self.basis.axis_iter(Axis(1)) {
            for b in other.basis.axis_iter(Axis(1)) {
                basis
                    .column_mut(k)
                    .assign(&linalg::kron_vec(&a.to_owned(), &b.to_owned()));
                k += 1;
            }
        }
        Ok(Self {
            d: self.d,
            level,
            basis,
            tol_used: self.tol_used.max(other.tol_used),
            gap: self.gap.min(other.gap),
        })
    }

    /// `S ⊗ H`.
    pub fn tensor_full_right(&self) -> Result<Self> {
        self.tensor(&Self::full(self.d, 1))
    }

    /// `H ⊗ S`.
    pub fn tensor_full_left(&self) -> Result<Self> {
        Self::full(self.d, 1).tensor(self)
    }

    /// Image `A(S)`, re-orthonormalized. Directions with `σ ≤ rel_tol·max(1, σ_max)`
    /// are dropped, so the image of a kernel is empty.
    pub fn apply(&self, a: &TensorOperator, rel_tol: f64) -> Result<Self> {
        if a.d() != self.d || a.level() != self.level {
            return Err(WickError::Mismatch(format!(
                "operator at level {} applied to subspace at level {}",
                a.level(),
                self.level
            )));
        }
        if self.is_zero() {
            return Ok(Self::zero(self.d, self.level));
        }
        let image = a.apply_columns(&self.basis);
        let RankCut { basis, gap } = linalg::orthonormal_span_scaled(&image, rel_tol, 1.0)?;
        Ok(Self {
            d: self.d,
            level: self.level,
            basis,
            tol_used: rel_tol,
            gap: gap.min(self.gap),
        })
    }

    pub fn export(&self) -> SubspaceExport {
        let vectors = self
            .basis
            .axis_iter(Axis(1))
            .map(|col| {
                col.iter()
                    .enumerate()
                    .filter(|(_, z)| z.norm() > 0.0)
                    .map(|(idx, z)| ExportEntry {
                        index: multi_index(self.d, self.level, idx),
                        re: z.re,
                        im: z.im,
                    })
                    .collect()
            })
            .collect();
        SubspaceExport {
            d: self.d,
            level: self.level,
            dim: self.dim(),
            tol_used: self.tol_used,
            spectral_gap: self.gap,
            vectors,
        }
    }

    pub fn write_export(&self, path: impl AsRef<Path>) -> Result<()> {
        let text = serde_json::to_string_pretty(&self.export())
            .map_err(|e| WickError::Parse(e.to_string()))?;
        std::fs::write(path, text)?;
        Ok(())
    }

    /// Rebuilds a subspace from exported vectors; the basis is re-orthonormalized.
    pub fn from_export(e: &SubspaceExport, rel_tol: f64) -> Result<Self> {
        let n = e.d.pow(e.level as u32);
        let mut cols = Array2::zeros((n, e.vectors.len()));
        for (k, v) in e.vectors.iter().enumerate() {
            for entry in v {
                let idx = flat_index(e.d, e.level, &entry.index)?;
                cols[[idx, k]] = C64::new(entry.re, entry.im);
            }
        }
        Self::span(e.d, e.level, &cols, rel_tol)
    }
}

/// 1-based multi-index of a flat basis index.
pub fn multi_index(d: usize, level: usize, mut idx: usize) -> Vec<usize> {
    let mut out = vec![0; level];
    for slot in out.iter_mut().rev() {
        *slot = idx % d + 1;
        idx /= d;
    }
    out
}

pub fn flat_index(d: usize, level: usize, multi: &[usize]) -> Result<usize> {
    if multi.len() != level || multi.iter().any(|&a| a < 1 || a > d) {
        return Err(WickError::Parse(format!(
            "multi-index {multi:?} invalid at level {level} with d={d}"
        )));
    }
    Ok(multi.iter().fold(0, |acc, &a| acc * d + (a - 1)))
}

/// Structured export of a subspace basis as `(multi-index, re, im)` triples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubspaceExport {
    pub d: usize,
    pub level: usize,
    pub dim: usize,
    pub tol_used: f64,
    pub spectral_gap: f64,
    pub vectors: Vec<Vec<ExportEntry>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExportEntry {
    pub index: Vec<usize>,
    pub re: f64,
    pub im: f64,
}

/// Kernel of `a`: right singular vectors with `σ ≤ rel_tol·σ_max`.
pub fn kernel(a: &TensorOperator, rel_tol: f64) -> Result<Subspace> {
    let m = a.to_dense()?;
    let RankCut { basis, gap } = linalg::null_space(&m, rel_tol)?;
    Ok(Subspace {
        d: a.d(),
        level: a.level(),
        basis,
        tol_used: rel_tol,
        gap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_ccr_flip, build_free, build_quon};
    use crate::tensor_ops::{build_rn, lift};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn e(d: usize, letters: &[usize]) -> Array1<C64> {
        let mut v = Array1::zeros(d.pow(letters.len() as u32));
        v[flat_index(d, letters.len(), letters).unwrap()] = c(1.0, 0.0);
        v
    }

    fn gram_defect(s: &Subspace) -> f64 {
        let g = linalg::adjoint(s.basis()).dot(s.basis()) - Array2::<C64>::eye(s.dim());
        g.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn quon_kernel_r2_contains_a() {
        let lambda = c(0.0, 1.0);
        let t = build_quon(2, 0.5, lambda).unwrap();
        let k = kernel(&build_rn(&t, 2).unwrap(), DEFAULT_RANK_TOL).unwrap();
        assert_eq!(k.dim(), 1);
        let a = e(2, &[2, 1]) - e(2, &[1, 2]).mapv(|z| z * lambda);
        let a = &a / C64::new(2f64.sqrt(), 0.0);
        assert!(k.contains_vector(&a, 1e-12));
        assert!(gram_defect(&k) < 1e-10);
    }

    #[test]
    fn free_kernels_are_trivial() {
        let t = build_free(2).unwrap();
        for n in 1..5 {
            assert!(kernel(&build_rn(&t, n).unwrap(), DEFAULT_RANK_TOL)
                .unwrap()
                .is_zero());
        }
    }

    #[test]
    fn flip_kernel_r3_has_dim_two() {
        let t = build_ccr_flip(2).unwrap();
        let k = kernel(&build_rn(&t, 3).unwrap(), DEFAULT_RANK_TOL).unwrap();
        assert_eq!(k.dim(), 2);
        assert!(k.gap_ok());
    }

    #[test]
    fn sums_and_tensors() {
        let t = build_quon(2, 0.5, c(1.0, 0.0)).unwrap();
        let k2 = kernel(&build_rn(&t, 2).unwrap(), DEFAULT_RANK_TOL).unwrap();
        let z = Subspace::zero(2, 2);
        assert!(k2.sum(&z, DEFAULT_RANK_TOL).unwrap().equal(&k2, 1e-10).unwrap());
        assert_eq!(k2.tensor_full_right().unwrap().dim(), 2);
        assert_eq!(k2.tensor_full_left().unwrap().dim(), 2);
        assert_eq!(k2.tensor(&k2).unwrap().dim(), 1);
        assert!(gram_defect(&k2.tensor_full_left().unwrap()) < 1e-12);

        let flip = build_ccr_flip(2).unwrap();
        let one = TensorOperator::identity(2, 3);
        let k1 = kernel(&one.add(&lift(&flip, 3, 1).unwrap()).unwrap(), 1e-8).unwrap();
        let k2 = kernel(&one.add(&lift(&flip, 3, 2).unwrap()).unwrap(), 1e-8).unwrap();
        let s = k1.sum(&k2, 1e-8).unwrap();
        assert_eq!((k1.dim(), k2.dim(), s.dim()), (2, 2, 4));
    }

    #[test]
    fn level_mismatch_is_an_error() {
        let a = Subspace::full(2, 2);
        let b = Subspace::full(2, 3);
        assert!(a.sum(&b, 1e-8).is_err());
        assert!(a.contains(&b, 1e-8).is_err());
        assert!(a.tensor(&Subspace::full(3, 1)).is_err());
    }

    #[test]
    fn apply_kills_own_kernel() {
        let t = build_quon(2, 0.3, c(0.6, 0.8)).unwrap();
        let r3 = build_rn(&t, 3).unwrap();
        let k = kernel(&r3, 1e-8).unwrap();
        assert!(k.apply(&r3, 1e-8).unwrap().is_zero());
        assert!(k.contains(&k, 1e-12).unwrap());
    }

    #[test]
    fn export_round_trip() {
        let t = build_ccr_flip(2).unwrap();
        let k = kernel(&build_rn(&t, 3).unwrap(), 1e-8).unwrap();
        let json = serde_json::to_string(&k.export()).unwrap();
        let back: SubspaceExport = serde_json::from_str(&json).unwrap();
        let k2 = Subspace::from_export(&back, 1e-8).unwrap();
        assert!(k.equal(&k2, 1e-12).unwrap());
        assert_eq!(multi_index(2, 3, 5), vec![2, 1, 2]);
    }
}
