//! Dense helpers over ndarray / LAPACK.

use std::sync::atomic::{AtomicUsize, Ordering};

use ndarray::{s, Array1, Array2, ArrayView2, Axis};
use ndarray_linalg::{EigValsh, Eigh, JobSvd, SVDDC, UPLO};

use crate::error::{Result, WickError};
use crate::C64;

/// Default bound on the side length of dense operator matrices.
pub const DEFAULT_DENSE_CAP: usize = 4096;
/// Environment variable overriding [`DEFAULT_DENSE_CAP`].
pub const DENSE_CAP_ENV: &str = "WICK_DENSE_CAP";
/// Reported spectral gaps are clamped to this value.
pub const GAP_CAP: f64 = 1e16;

static DENSE_CAP: AtomicUsize = AtomicUsize::new(0);

pub fn dense_cap() -> usize {
    match DENSE_CAP.load(Ordering::Relaxed) {
        0 => {
            let cap = std::env::var(DENSE_CAP_ENV)
                .ok()
                .and_then(|v| v.parse().ok())
                .filter(|&v: &usize| v > 0)
                .unwrap_or(DEFAULT_DENSE_CAP);
            DENSE_CAP.store(cap, Ordering::Relaxed);
            cap
        }
        cap => cap,
    }
}

pub fn set_dense_cap(cap: usize) {
    DENSE_CAP.store(cap.max(1), Ordering::Relaxed);
}

pub fn check_cap(size: usize) -> Result<()> {
    let cap = dense_cap();
    if size > cap {
        Err(WickError::Capacity { size, cap })
    } else {
        Ok(())
    }
}

pub fn adjoint(m: &Array2<C64>) -> Array2<C64> {
    m.t().mapv(|z| z.conj())
}

pub fn frobenius(m: ArrayView2<C64>) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn vec_norm(v: &Array1<C64>) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `⟨x, y⟩`, conjugate-linear in `x`.
pub fn inner(x: &Array1<C64>, y: &Array1<C64>) -> C64 {
    x.iter().zip(y.iter()).map(|(a, b)| a.conj() * b).sum()
}

pub fn kron(a: &Array2<C64>, b: &Array2<C64>) -> Array2<C64> {
    let (ar, ac) = a.dim();
    let (br, bc) = b.dim();
    let mut out = Array2::zeros((ar * br, ac * bc));
    for i in 0..ar {
        for j in 0..ac {
            let aij = a[[i, j]];
            if aij == C64::new(0.0, 0.0) {
                continue;
            }
            out.slice_mut(s![i * br..(i + 1) * br, j * bc..(j + 1) * bc])
                .zip_mut_with(b, |o, &bv| *o = aij * bv);
        }
    }
    out
}

pub fn kron_vec(a: &Array1<C64>, b: &Array1<C64>) -> Array1<C64> {
    let mut out = Array1::zeros(a.len() * b.len());
    for (i, &ai) in a.iter().enumerate() {
        for (j, &bj) in b.iter().enumerate() {
            out[i * b.len() + j] = ai * bj;
        }
    }
    out
}

/// Singular values in descending order.
pub fn singular_values(m: &Array2<C64>) -> Result<Array1<f64>> {
    if m.is_empty() {
        return Ok(Array1::zeros(0));
    }
    let (_, s, _) = m.svddc(JobSvd::None)?;
    Ok(s)
}

pub fn spectral_norm(m: &Array2<C64>) -> Result<f64> {
    Ok(singular_values(m)?.iter().cloned().fold(0.0, f64::max))
}

/// Eigenvalues of a Hermitian matrix (lower triangle used), ascending.
pub fn eigvalsh(m: &Array2<C64>) -> Result<Array1<f64>> {
    Ok(m.eigvalsh(UPLO::Lower)?)
}

/// Moore–Penrose inverse of a Hermitian positive semidefinite matrix;
/// eigenvalues `≤ rel_tol·λ_max` are treated as zero.
pub fn pinv_psd(m: &Array2<C64>, rel_tol: f64) -> Result<Array2<C64>> {
    let n = m.nrows();
    if n == 0 {
        return Ok(Array2::zeros((0, 0)));
    }
    let (w, v) = m.eigh(UPLO::Lower)?;
    let wmax = w.iter().cloned().fold(0.0, f64::max);
    let mut scaled = v.clone();
    for (k, mut col) in scaled.axis_iter_mut(Axis(1)).enumerate() {
        let inv = if w[k] > rel_tol * wmax { 1.0 / w[k] } else { 0.0 };
        col.mapv_inplace(|z| z * inv);
    }
    Ok(scaled.dot(&adjoint(&v)))
}

/// Ratio between the smallest singular value kept and the largest one cut,
/// or between the smallest kept value and the threshold when nothing is cut.
fn gap_at(s: &[f64], kept: usize, threshold: f64, smax: f64) -> f64 {
    let floor = f64::EPSILON * smax.max(f64::MIN_POSITIVE);
    let g = if smax == 0.0 {
        GAP_CAP
    } else if kept == 0 {
        // everything below the threshold
        threshold / s[0].max(floor)
    } else if kept == s.len() {
        s[kept - 1] / threshold
    } else {
        s[kept - 1] / s[kept].max(floor)
    };
    g.min(GAP_CAP)
}

pub struct RankCut {
    pub basis: Array2<C64>,
    pub gap: f64,
}

/// Orthonormal basis of the column span of `cols`, truncated at `σ ≤ rel_tol·σ_max`.
pub fn orthonormal_span(cols: &Array2<C64>, rel_tol: f64) -> Result<RankCut> {
    orthonormal_span_scaled(cols, rel_tol, 0.0)
}

/// As [`orthonormal_span`] with the cut at `σ ≤ rel_tol·max(σ_max, scale)`.
pub fn orthonormal_span_scaled(cols: &Array2<C64>, rel_tol: f64, scale: f64) -> Result<RankCut> {
    let n = cols.nrows();
    if cols.ncols() == 0 || n == 0 {
        return Ok(RankCut {
            basis: Array2::zeros((n, 0)),
            gap: GAP_CAP,
        });
    }
    let (u, s, _) = cols.svddc(JobSvd::Some)?;
    let u = u.expect("left singular vectors requested");
    let smax = s[0].max(scale);
    let threshold = rel_tol * smax;
    let kept = if smax == 0.0 {
        0
    } else {
        s.iter().take_while(|&&x| x > threshold).count()
    };
    let gap = gap_at(s.as_slice().unwrap(), kept, threshold, smax);
    Ok(RankCut {
        basis: u.slice(s![.., ..kept]).to_owned(),
        gap,
    })
}

/// Orthonormal basis of `{v : A v = 0}` for square or rectangular `A`, with
/// singular values `σ ≤ rel_tol·σ_max` treated as zero.
pub fn null_space(a: &Array2<C64>, rel_tol: f64) -> Result<RankCut> {
    let (rows, n) = a.dim();
    if n == 0 {
        return Ok(RankCut {
            basis: Array2::zeros((0, 0)),
            gap: GAP_CAP,
        });
    }
    // Pad to square so that the full set of right singular vectors is returned.
    let padded;
    let m = if rows < n {
        let mut p = Array2::zeros((n, n));
        p.slice_mut(s![..rows, ..]).assign(a);
        padded = p;
        &padded
    } else {
        a
    };
    let (_, s, vt) = m.svddc(JobSvd::Some)?;
    let vt = vt.expect("right singular vectors requested");
    let smax = s.iter().cloned().fold(0.0, f64::max);
    let threshold = rel_tol * smax;
    let kept = if smax == 0.0 {
        0
    } else {
        s.iter().take_while(|&&x| x > threshold).count()
    };
    let gap = gap_at(s.as_slice().unwrap(), kept, threshold, smax);
    // rows kept.. of V^H span the kernel; columns of V are their conjugates
    let basis = vt
        .slice(s![kept.., ..])
        .t()
        .mapv(|z| z.conj());
    Ok(RankCut { basis, gap })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn null_space_of_rank_one() {
        let a = array![[c(1.0), c(1.0)], [c(1.0), c(1.0)]];
        let k = null_space(&a, 1e-8).unwrap();
        assert_eq!(k.basis.ncols(), 1);
        let v = k.basis.column(0);
        assert!((v[0] + v[1]).norm() < 1e-12);
        assert!(k.gap > 1e10);
    }

    #[test]
    fn null_space_of_zero_and_identity() {
        let z = Array2::<C64>::zeros((3, 3));
        assert_eq!(null_space(&z, 1e-8).unwrap().basis.ncols(), 3);
        let i = Array2::<C64>::eye(3);
        let k = null_space(&i, 1e-8).unwrap();
        assert_eq!(k.basis.ncols(), 0);
        assert!((k.gap - 1e8).abs() < 1.0);
    }

    #[test]
    fn wide_matrix_kernel_includes_padding_directions() {
        let a = array![[c(1.0), c(0.0), c(0.0)]];
        assert_eq!(null_space(&a, 1e-8).unwrap().basis.ncols(), 2);
    }

    #[test]
    fn span_truncates_dependent_columns() {
        let a = array![[c(1.0), c(2.0)], [c(0.0), c(0.0)], [c(1.0), c(2.0)]];
        let r = orthonormal_span(&a, 1e-8).unwrap();
        assert_eq!(r.basis.ncols(), 1);
    }

    #[test]
    fn kron_of_identities() {
        let i2 = Array2::<C64>::eye(2);
        let i3 = Array2::<C64>::eye(3);
        assert_eq!(kron(&i2, &i3), Array2::<C64>::eye(6));
    }
}
