//! Coefficient data `{T_ij^kl}` of a quadratic Wick algebra.
//!
//! Coefficients are indexed 1-based in the public API and the model file
//! format. Internally only the induced operator `T` on `H⊗H` is stored: the
//! matrix entry at row `(i,j)`, column `(k,l)` is `T_{ik}^{lj}`, so that
//! `T e_k⊗e_l = Σ T_{ik}^{lj} e_i⊗e_j`.

use std::collections::BTreeSet;
use std::fmt;
use std::path::{Path, PathBuf};

use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, WickError};
use crate::C64;

/// Hermiticity tolerance for coefficients read from a file.
pub const FILE_HERMITICITY_TOL: f64 = 1e-12;
/// Tolerance on `|λ| = 1`.
pub const UNIT_MODULUS_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct WickCoefficients {
    d: usize,
    induced: Array2<C64>,
}

impl WickCoefficients {
    fn zeros(d: usize) -> Self {
        Self {
            d,
            induced: Array2::zeros((d * d, d * d)),
        }
    }

    fn pair(&self, a: usize, b: usize) -> usize {
        a * self.d + b
    }

    /// Sets `T_ij^kl` from 0-based indices.
    fn set0(&mut self, i: usize, j: usize, k: usize, l: usize, v: C64) {
        let (r, c) = (self.pair(i, l), self.pair(j, k));
        self.induced[[r, c]] = v;
    }

    fn get0(&self, i: usize, j: usize, k: usize, l: usize) -> C64 {
        self.induced[[self.pair(i, l), self.pair(j, k)]]
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// `T_ij^kl` with 1-based indices.
    pub fn coeff(&self, i: usize, j: usize, k: usize, l: usize) -> C64 {
        assert!(
            [i, j, k, l].iter().all(|&x| x >= 1 && x <= self.d),
            "coefficient index out of range"
        );
        self.get0(i - 1, j - 1, k - 1, l - 1)
    }

    /// The induced `d²×d²` matrix of `T`.
    pub fn induced_matrix(&self) -> &Array2<C64> {
        &self.induced
    }

    /// Nonzero coefficients as 1-based `([i,j,k,l], value)` in lexicographic order.
    pub fn entries(&self) -> Vec<([usize; 4], C64)> {
        let d = self.d;
        let mut out = Vec::new();
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for l in 0..d {
                        let v = self.get0(i, j, k, l);
                        if v != C64::new(0.0, 0.0) {
                            out.push(([i + 1, j + 1, k + 1, l + 1], v));
                        }
                    }
                }
            }
        }
        out
    }

    /// Checks `T_ji^lk = conj(T_ij^kl)` entrywise within `tol`.
    pub fn check_hermiticity(&self, tol: f64) -> Result<()> {
        let d = self.d;
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for l in 0..d {
                        let v = self.get0(i, j, k, l);
                        let w = self.get0(j, i, l, k);
                        if (w - v.conj()).norm() > tol {
                            return Err(WickError::Hermiticity {
                                at: [j + 1, i + 1, l + 1, k + 1],
                                partner: [i + 1, j + 1, k + 1, l + 1],
                                expected: v.conj(),
                                found: w,
                            });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Builds coefficients directly from an induced matrix (row `(i,j)`, column `(k,l)`).
    pub fn from_induced_matrix(d: usize, m: Array2<C64>) -> Result<Self> {
        if d == 0 {
            return Err(WickError::InvalidParameter("d must be at least 1".into()));
        }
        if m.dim() != (d * d, d * d) {
            return Err(WickError::Mismatch(format!(
                "induced matrix must be {0}x{0}, got {1:?}",
                d * d,
                m.dim()
            )));
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(WickError::InvalidParameter("non-finite coefficient".into()));
        }
        Ok(Self { d, induced: m })
    }

    pub fn to_model_file(&self) -> ModelFile {
        ModelFile {
            d: self.d,
            entries: self
                .entries()
                .into_iter()
                .map(|([i, j, k, l], v)| FileEntry {
                    i,
                    j,
                    k,
                    l,
                    re: v.re,
                    im: v.im,
                })
                .collect(),
        }
    }
}

/// Quon coefficients: `T e_i⊗e_i = q e_i⊗e_i`, and for `i<j`
/// `T e_i⊗e_j = λ̄ e_j⊗e_i`, `T e_j⊗e_i = λ e_i⊗e_j`.
pub fn build_quon(d: usize, q: f64, lambda: C64) -> Result<WickCoefficients> {
    if d < 2 {
        return Err(WickError::InvalidParameter(format!(
            "quon requires d >= 2, got d = {d}"
        )));
    }
    if !(q > 0.0 && q < 1.0) {
        return Err(WickError::InvalidParameter(format!(
            "quon requires 0 < q < 1, got q = {q}"
        )));
    }
    if !lambda.re.is_finite()
        || !lambda.im.is_finite()
        || (lambda.norm() - 1.0).abs() > UNIT_MODULUS_TOL
    {
        return Err(WickError::InvalidParameter(format!(
            "quon requires |lambda| = 1, got |lambda| = {}",
            lambda.norm()
        )));
    }
    let mut t = WickCoefficients::zeros(d);
    for i in 0..d {
        t.set0(i, i, i, i, C64::new(q, 0.0));
        for j in (i + 1)..d {
            // T e_i⊗e_j = λ̄ e_j⊗e_i  <=>  T_{ji}^{ji} = λ̄
            t.set0(j, i, j, i, lambda.conj());
            // T e_j⊗e_i = λ e_i⊗e_j  <=>  T_{ij}^{ij} = λ
            t.set0(i, j, i, j, lambda);
        }
    }
    Ok(t)
}

/// The flip `T e_i⊗e_j = e_j⊗e_i` (Wick CCR).
pub fn build_ccr_flip(d: usize) -> Result<WickCoefficients> {
    if d < 1 {
        return Err(WickError::InvalidParameter("d must be at least 1".into()));
    }
    let mut t = WickCoefficients::zeros(d);
    for i in 0..d {
        for j in 0..d {
            // T e_i⊗e_j = e_j⊗e_i  <=>  T_{ji}^{ji} = 1
            t.set0(j, i, j, i, C64::new(1.0, 0.0));
        }
    }
    Ok(t)
}

/// `T = 0`: the free (Cuntz–Toeplitz) relations.
pub fn build_free(d: usize) -> Result<WickCoefficients> {
    if d < 1 {
        return Err(WickError::InvalidParameter("d must be at least 1".into()));
    }
    Ok(WickCoefficients::zeros(d))
}

/// On-disk model description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub d: usize,
    pub entries: Vec<FileEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileEntry {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub l: usize,
    pub re: f64,
    pub im: f64,
}

impl ModelFile {
    pub fn into_coefficients(self) -> Result<WickCoefficients> {
        let d = self.d;
        if d == 0 {
            return Err(WickError::InvalidParameter("d must be at least 1".into()));
        }
        let mut t = WickCoefficients::zeros(d);
        let mut seen = BTreeSet::new();
        for (n, e) in self.entries.iter().enumerate() {
            for &index in &[e.i, e.j, e.k, e.l] {
                if index < 1 || index > d {
                    return Err(WickError::IndexOutOfRange { index, d, entry: n });
                }
            }
            let key = [e.i, e.j, e.k, e.l];
            if !seen.insert(key) {
                return Err(WickError::DuplicateEntry(key));
            }
            if !e.re.is_finite() || !e.im.is_finite() {
                return Err(WickError::InvalidParameter(format!(
                    "non-finite value in entry {n}"
                )));
            }
            t.set0(e.i - 1, e.j - 1, e.k - 1, e.l - 1, Complex64::new(e.re, e.im));
        }
        t.check_hermiticity(FILE_HERMITICITY_TOL)?;
        Ok(t)
    }
}

/// Parses a model document.
pub fn parse_custom(text: &str) -> Result<WickCoefficients> {
    let file: ModelFile =
        serde_json::from_str(text).map_err(|e| WickError::Parse(e.to_string()))?;
    file.into_coefficients()
}

pub fn load_custom(path: impl AsRef<Path>) -> Result<WickCoefficients> {
    let text = std::fs::read_to_string(path)?;
    parse_custom(&text)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelKind {
    Quon { q: f64, lambda: C64 },
    CcrFlip,
    Free,
    Custom { source_path: PathBuf },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub d: usize,
    #[serde(flatten)]
    pub kind: ModelKind,
}

impl ModelSpec {
    pub fn quon(d: usize, q: f64, lambda: C64) -> Self {
        Self {
            d,
            kind: ModelKind::Quon { q, lambda },
        }
    }

    pub fn ccr_flip(d: usize) -> Self {
        Self {
            d,
            kind: ModelKind::CcrFlip,
        }
    }

    pub fn free(d: usize) -> Self {
        Self {
            d,
            kind: ModelKind::Free,
        }
    }

    pub fn custom(path: impl Into<PathBuf>) -> Self {
        Self {
            d: 0,
            kind: ModelKind::Custom {
                source_path: path.into(),
            },
        }
    }

    pub fn build(&self) -> Result<WickCoefficients> {
        match &self.kind {
            ModelKind::Quon { q, lambda } => build_quon(self.d, *q, *lambda),
            ModelKind::CcrFlip => build_ccr_flip(self.d),
            ModelKind::Free => build_free(self.d),
            ModelKind::Custom { source_path } => {
                let t = load_custom(source_path)?;
                if self.d != 0 && self.d != t.d() {
                    return Err(WickError::Mismatch(format!(
                        "requested d = {} but file declares d = {}",
                        self.d,
                        t.d()
                    )));
                }
                Ok(t)
            }
        }
    }
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ModelKind::Quon { q, lambda } => write!(
                f,
                "quon(d={}, q={}, lambda={}{:+}i)",
                self.d, q, lambda.re, lambda.im
            ),
            ModelKind::CcrFlip => write!(f, "ccr_flip(d={})", self.d),
            ModelKind::Free => write!(f, "free(d={})", self.d),
            ModelKind::Custom { source_path } => write!(f, "custom({})", source_path.display()),
        }
    }
}

/// Built-in models used for sweeps: free, quon and flip at desk scale.
pub fn zoo() -> Vec<ModelSpec> {
    use std::f64::consts::PI;
    let i = C64::new(0.0, 1.0);
    vec![
        ModelSpec::free(2),
        ModelSpec::free(3),
        ModelSpec::quon(2, 0.5, C64::new(1.0, 0.0)),
        ModelSpec::quon(2, 0.3, i),
        ModelSpec::quon(2, 0.9, C64::from_polar(1.0, PI / 3.0)),
        ModelSpec::quon(3, 0.5, C64::new(1.0, 0.0)),
        ModelSpec::ccr_flip(2),
        ModelSpec::ccr_flip(3),
    ]
}
