//! The Fock representation on truncations of `T(H) = CΩ ⊕ ⊕_n H^{⊗n}`.
//!
//! `a_i X = e_i ⊗ X` and `a_i^* X = μ₀(e_i^*) R_n X`. The form
//! `⟨X, Y⟩_F = Σ_n ⟨X_n, P_n Y_n⟩` makes this a `*`-representation; it is
//! degenerate exactly on the homogeneous Wick ideals. Creation past the top
//! level `N` is cut to zero, so every relation check states the interior band
//! of levels it used.

use ndarray::{s, Array1, Array2, Axis};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Result, WickError};
use crate::ideals::IdealChain;
use crate::linalg::{self, vec_norm};
use crate::model::{build_quon, WickCoefficients};
use crate::report::{Item, Verdict};
use crate::subspace::{kernel, Subspace, DEFAULT_CONTAIN_TOL};
use crate::tensor_ops::{build_pn, build_rn, lift, TensorOperator};
use crate::C64;

/// Seed used by the randomized checks unless the caller supplies one.
pub const DEFAULT_SEED: u64 = 0x5eed_f0c5;
/// Random samples drawn per level.
pub const SAMPLES_PER_LEVEL: usize = 24;
pub const POSITIVITY_TOL: f64 = 1e-10;

/// An element of the truncated tensor algebra, one component per level.
#[derive(Debug, Clone, PartialEq)]
pub struct GradedVector {
    d: usize,
    components: Vec<Array1<C64>>,
}

impl GradedVector {
    pub fn zero(d: usize, max_level: usize) -> Self {
        let components = (0..=max_level)
            .map(|n| Array1::zeros(d.pow(n as u32)))
            .collect();
        Self { d, components }
    }

    pub fn vacuum(d: usize, max_level: usize) -> Self {
        let mut v = Self::zero(d, max_level);
        v.components[0][0] = C64::new(1.0, 0.0);
        v
    }

    /// A vector supported on a single level.
    pub fn homogeneous(d: usize, max_level: usize, level: usize, v: Array1<C64>) -> Result<Self> {
        let mut out = Self::zero(d, max_level);
        out.set_component(level, v)?;
        Ok(out)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn max_level(&self) -> usize {
        self.components.len() - 1
    }

    pub fn component(&self, n: usize) -> &Array1<C64> {
        &self.components[n]
    }

    pub fn set_component(&mut self, n: usize, v: Array1<C64>) -> Result<()> {
        if n > self.max_level() {
            return Err(WickError::Mismatch(format!(
                "level {n} beyond truncation {}",
                self.max_level()
            )));
        }
        if v.len() != self.d.pow(n as u32) {
            return Err(WickError::Mismatch(format!(
                "component of length {} at level {n} (expected {})",
                v.len(),
                self.d.pow(n as u32)
            )));
        }
        self.components[n] = v;
        Ok(())
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.d != other.d || self.max_level() != other.max_level() {
            return Err(WickError::Mismatch(format!(
                "graded vectors (d={}, N={}) and (d={}, N={})",
                self.d,
                self.max_level(),
                other.d,
                other.max_level()
            )));
        }
        Ok(())
    }
}

/// `μ₀(e_i^*)`: contracts the first tensor factor of a level-`n` vector with
/// `e_i` (1-based). On level 0 the result is the zero multiple of `Ω`.
pub fn mu0(d: usize, level: usize, i: usize, v: &Array1<C64>) -> Result<Array1<C64>> {
    if i < 1 || i > d {
        return Err(WickError::InvalidParameter(format!(
            "generator index {i} outside 1..={d}"
        )));
    }
    if v.len() != d.pow(level as u32) {
        return Err(WickError::Mismatch(format!(
            "vector of length {} at level {level}",
            v.len()
        )));
    }
    if level == 0 {
        return Ok(Array1::zeros(1));
    }
    let b = d.pow(level as u32 - 1);
    Ok(v.slice(s![(i - 1) * b..i * b]).to_owned())
}

/// `e_i ⊗ v`.
fn tensor_basis(d: usize, i: usize, v: &Array1<C64>) -> Array1<C64> {
    let b = v.len();
    let mut out = Array1::zeros(d * b);
    out.slice_mut(s![(i - 1) * b..i * b]).assign(v);
    out
}

/// Fock representation truncated at level `N`.
pub struct FockRep {
    t: WickCoefficients,
    max_level: usize,
    /// `R_n` for `n = 0..=N` (`R_0`, `R_1` are identities).
    r: Vec<TensorOperator>,
    /// Dense Gram operators `P_0..=P_N`.
    p: Vec<Array2<C64>>,
}

impl FockRep {
    pub fn new(t: &WickCoefficients, max_level: usize) -> Result<Self> {
        let d = t.d();
        let mut r = Vec::with_capacity(max_level + 1);
        let mut p = Vec::with_capacity(max_level + 1);
        for n in 0..=max_level {
            r.push(if n <= 1 {
                TensorOperator::identity(d, n)
            } else {
                build_rn(t, n)?.materialize()?
            });
            p.push(build_pn(t, n)?.to_dense()?);
        }
        Ok(Self {
            t: t.clone(),
            max_level,
            r,
            p,
        })
    }

    pub fn d(&self) -> usize {
        self.t.d()
    }

    pub fn max_level(&self) -> usize {
        self.max_level
    }

    pub fn model(&self) -> &WickCoefficients {
        &self.t
    }

    pub fn gram(&self, n: usize) -> &Array2<C64> {
        &self.p[n]
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i < 1 || i > self.d() {
            return Err(WickError::InvalidParameter(format!(
                "generator index {i} outside 1..={}",
                self.d()
            )));
        }
        Ok(())
    }

    /// `a_i` on a level-`n` vector; `None` when `n = N` (hard cut).
    pub fn create_level(&self, i: usize, n: usize, v: &Array1<C64>) -> Result<Option<Array1<C64>>> {
        self.check_index(i)?;
        if n >= self.max_level {
            return Ok(None);
        }
        Ok(Some(tensor_basis(self.d(), i, v)))
    }

    /// `a_i^*` on a level-`n` vector (`n ≥ 1`), landing on level `n − 1`.
    pub fn annihilate_level(&self, i: usize, n: usize, v: &Array1<C64>) -> Result<Array1<C64>> {
        self.check_index(i)?;
        if n == 0 {
            return Ok(Array1::zeros(1));
        }
        mu0(self.d(), n, i, &self.r[n].apply(v))
    }

    pub fn create(&self, i: usize, x: &GradedVector) -> Result<GradedVector> {
        self.check_graded(x)?;
        self.check_index(i)?;
        let mut out = GradedVector::zero(self.d(), self.max_level);
        for n in 0..self.max_level {
            out.components[n + 1] = tensor_basis(self.d(), i, &x.components[n]);
        }
        Ok(out)
    }

    pub fn annihilate(&self, i: usize, x: &GradedVector) -> Result<GradedVector> {
        self.check_graded(x)?;
        let mut out = GradedVector::zero(self.d(), self.max_level);
        for n in 1..=self.max_level {
            out.components[n - 1] = self.annihilate_level(i, n, &x.components[n])?;
        }
        Ok(out)
    }

    /// `⟨X, Y⟩_F`, conjugate-linear in `X`.
    pub fn inner(&self, x: &GradedVector, y: &GradedVector) -> Result<C64> {
        self.check_graded(x)?;
        x.check_compatible(y)?;
        Ok((0..=self.max_level)
            .map(|n| linalg::inner(&x.components[n], &self.p[n].dot(&y.components[n])))
            .sum())
    }

    fn level_inner(&self, n: usize, x: &Array1<C64>, y: &Array1<C64>) -> C64 {
        linalg::inner(x, &self.p[n].dot(y))
    }

    fn check_graded(&self, x: &GradedVector) -> Result<()> {
        if x.d != self.d() || x.max_level() != self.max_level {
            return Err(WickError::Mismatch(format!(
                "graded vector (d={}, N={}) for representation (d={}, N={})",
                x.d,
                x.max_level(),
                self.d(),
                self.max_level
            )));
        }
        Ok(())
    }
}

/// Residual check over randomized samples on a band of levels.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FockCheck {
    pub name: String,
    /// Inclusive band of levels the check was evaluated on.
    pub levels: (usize, usize),
    pub samples: usize,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl FockCheck {
    fn new(name: &str, levels: (usize, usize), samples: usize, residual: f64, tol: f64) -> Self {
        Self {
            name: name.to_string(),
            levels,
            samples,
            residual,
            tolerance: tol,
            pass: residual <= tol,
        }
    }

    pub fn item(&self) -> Item {
        Item::residual(self.name.clone(), self.residual, self.tolerance)
            .dim("level_lo", self.levels.0)
            .dim("level_hi", self.levels.1)
            .dim("samples", self.samples)
    }
}

fn random_vector(rng: &mut ChaCha8Rng, len: usize) -> Array1<C64> {
    Array1::from_shape_fn(len, |_| {
        C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    })
}

fn relative(diff: &Array1<C64>, scale: f64) -> f64 {
    vec_norm(diff) / scale.max(1.0)
}

/// `a_i^* a_j − δ_ij − Σ_{kl} T_ij^{kl} a_l a_k^*` on levels `0..=N−2`.
pub fn verify_star_relation(fock: &FockRep, tol: f64, seed: u64) -> Result<FockCheck> {
    let n_max = fock.max_level();
    if n_max < 2 {
        return Err(WickError::InvalidParameter(format!(
            "star relation check needs N >= 2, got {n_max}"
        )));
    }
    let d = fock.d();
    let t = fock.model();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let top = n_max - 2;
    let mut worst = 0.0f64;
    for n in 0..=top {
        for _ in 0..SAMPLES_PER_LEVEL {
            let x = random_vector(&mut rng, d.pow(n as u32));
            // a_k^* X for all k, as blocks of R_n X
            let rx = fock.r[n].apply(&x);
            let b = x.len() / d.max(1);
            for j in 1..=d {
                let ajx = tensor_basis(d, j, &x);
                let r_ajx = fock.r[n + 1].apply(&ajx);
                for i in 1..=d {
                    let mut diff = mu0(d, n + 1, i, &r_ajx)?;
                    if i == j {
                        diff -= &x;
                    }
                    if n > 0 {
                        for l in 1..=d {
                            let mut block = diff.slice_mut(s![(l - 1) * b..l * b]);
                            for k in 1..=d {
                                let c = t.coeff(i, j, k, l);
                                if c != C64::new(0.0, 0.0) {
                                    block.scaled_add(-c, &rx.slice(s![(k - 1) * b..k * b]));
                                }
                            }
                        }
                    }
                    worst = worst.max(relative(&diff, vec_norm(&x)));
                }
            }
        }
    }
    Ok(FockCheck::new(
        "star_relation",
        (0, top),
        SAMPLES_PER_LEVEL,
        worst,
        tol,
    ))
}

/// `⟨a_i X, Y⟩_F = ⟨X, a_i^* Y⟩_F` for `X` on level `n − 1`, `Y` on level `n`, `1 ≤ n ≤ N`.
pub fn verify_adjointness(fock: &FockRep, tol: f64, seed: u64) -> Result<FockCheck> {
    let n_max = fock.max_level();
    if n_max < 2 {
        return Err(WickError::InvalidParameter(format!(
            "adjointness check needs N >= 2, got {n_max}"
        )));
    }
    let d = fock.d();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for n in 1..=n_max {
        for _ in 0..SAMPLES_PER_LEVEL {
            let x = random_vector(&mut rng, d.pow(n as u32 - 1));
            let y = random_vector(&mut rng, d.pow(n as u32));
            let py = fock.p[n].dot(&y);
            for i in 1..=d {
                let lhs = linalg::inner(&tensor_basis(d, i, &x), &py);
                let rhs = fock.level_inner(n - 1, &x, &fock.annihilate_level(i, n, &y)?);
                let scale = (vec_norm(&x) * vec_norm(&py)).max(1.0);
                worst = worst.max((lhs - rhs).norm() / scale);
            }
        }
    }
    Ok(FockCheck::new(
        "adjointness",
        (1, n_max),
        SAMPLES_PER_LEVEL,
        worst,
        tol,
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PositivityReport {
    pub level: usize,
    pub min_eigenvalue: f64,
    /// `‖P_n − P_n^*‖_F / max(1, ‖P_n‖_F)`.
    pub self_adjoint_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl PositivityReport {
    pub fn item(&self) -> Item {
        Item::new(format!("positivity_p{}", self.level), Verdict::from_pass(self.pass))
            .metric("min_eigenvalue", self.min_eigenvalue)
            .metric("self_adjoint_residual", self.self_adjoint_residual)
            .metric("tolerance", self.tolerance)
    }
}

/// Smallest eigenvalue and self-adjointness of `P_n`.
pub fn positivity(fock: &FockRep, n: usize, tol: f64) -> Result<PositivityReport> {
    let p = fock.gram(n);
    let pa = linalg::adjoint(p);
    let self_adjoint_residual = crate::tensor_ops::relative_residual(p, &pa);
    let herm = (p + &pa).mapv(|z| z * 0.5);
    let min_eigenvalue = linalg::eigvalsh(&herm)?
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    Ok(PositivityReport {
        level: n,
        min_eigenvalue,
        self_adjoint_residual,
        tolerance: tol,
        pass: min_eigenvalue >= -tol && self_adjoint_residual <= tol,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GramKernelReport {
    pub level: usize,
    pub dim_ker_p: usize,
    /// `dim Σ_i ker(1 + T_i)`.
    pub dim_sum: usize,
    pub equal: bool,
    pub conclusive: bool,
}

impl GramKernelReport {
    pub fn item(&self) -> Item {
        Item::new(
            format!("ker_p{}_is_sum", self.level),
            Verdict::gated(self.equal, self.conclusive),
        )
        .dim("dim_ker_p", self.dim_ker_p)
        .dim("dim_sum", self.dim_sum)
    }
}

/// Compares `ker P_n` with `Σ_{i<n} ker(1 + T_i)`.
pub fn gram_kernel(fock: &FockRep, n: usize, rel_tol: f64) -> Result<GramKernelReport> {
    let d = fock.d();
    if n < 2 {
        return Err(WickError::InvalidParameter(format!(
            "kernel comparison needs n >= 2, got {n}"
        )));
    }
    let p = TensorOperator::from_dense(d, n, fock.gram(n).clone())?;
    let ker_p = kernel(&p, rel_tol)?;
    let mut sum = Subspace::zero(d, n);
    for i in 1..n {
        let op = TensorOperator::identity(d, n).add(&lift(fock.model(), n, i)?)?;
        sum = sum.sum(&kernel(&op, rel_tol)?, rel_tol)?;
    }
    Ok(GramKernelReport {
        level: n,
        dim_ker_p: ker_p.dim(),
        dim_sum: sum.dim(),
        equal: ker_p.equal(&sum, DEFAULT_CONTAIN_TOL)?,
        conclusive: ker_p.gap_ok() && sum.gap_ok(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnnihilationReport {
    pub m: usize,
    pub dim_k: usize,
    /// `max ‖P_m v‖` over the basis of `K_m`.
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl AnnihilationReport {
    pub fn item(&self) -> Item {
        Item::residual(format!("annihilates_k{}", self.m), self.residual, self.tolerance)
            .dim("dim_k", self.dim_k)
    }
}

/// `‖P_m v‖` for every basis vector of every `K_m` in the chain.
pub fn verify_ideal_annihilation(
    t: &WickCoefficients,
    chain: &IdealChain,
    tol: f64,
) -> Result<Vec<AnnihilationReport>> {
    if chain.d != t.d() {
        return Err(WickError::Mismatch("chain and model disagree on d".into()));
    }
    chain
        .entries
        .iter()
        .map(|e| {
            let p = build_pn(t, e.m)?;
            let image = p.apply_columns(e.k.basis());
            let residual = image
                .axis_iter(Axis(1))
                .map(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
                .fold(0.0, f64::max);
            Ok(AnnihilationReport {
                m: e.m,
                dim_k: e.k.dim(),
                residual,
                tolerance: tol,
                pass: residual <= tol,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuonAReport {
    pub q: f64,
    pub lambda: (f64, f64),
    /// `a_1^*A − λqAa_1^*`, `a_2^*A − λ̄qAa_2^*`, `A^*A − q²AA^*`.
    pub relations: Vec<FockCheck>,
    /// `⟨AΩ, AΩ⟩_F`.
    pub a_omega_fock_norm: f64,
    /// `P_n(A^*_alg − A^*_gram)Y`: the algebraic adjoint against the Gram
    /// pseudo-inverse route, compared on the non-degenerate quotient.
    pub gram_route: FockCheck,
}

impl QuonAReport {
    pub fn items(&self) -> Vec<Item> {
        let mut items: Vec<Item> = self.relations.iter().map(FockCheck::item).collect();
        items.push(
            Item::new("a_omega_null", Verdict::from_pass(self.a_omega_fock_norm <= 1e-12))
                .metric("fock_norm", self.a_omega_fock_norm),
        );
        items.push(self.gram_route.item());
        items
    }
}

/// The quon relations for `A = a_2a_1 − λa_1a_2` in the `d = 2` Fock action.
///
/// `A^*` is taken as `a_1^*a_2^* − λ̄a_2^*a_1^*`. Residuals are measured on
/// levels `0..=N−3`, where no creation reaches the cut.
pub fn verify_quon_a_relations(
    q: f64,
    lambda: C64,
    max_level: usize,
    tol: f64,
    seed: u64,
) -> Result<QuonAReport> {
    if max_level < 4 {
        return Err(WickError::InvalidParameter(format!(
            "A-relation check needs N >= 4, got {max_level}"
        )));
    }
    let t = build_quon(2, q, lambda)?;
    let fock = FockRep::new(&t, max_level)?;
    let lq = lambda * q;

    // A: level n -> n + 2; A*: level n -> n - 2 for n >= 2
    let a_op = |x: &Array1<C64>| -> Array1<C64> {
        tensor_basis(2, 2, &tensor_basis(2, 1, x)) - tensor_basis(2, 1, &tensor_basis(2, 2, x)) * lambda
    };
    let ann = |i: usize, n: usize, x: &Array1<C64>| fock.annihilate_level(i, n, x);
    let a_star = |n: usize, x: &Array1<C64>| -> Result<Array1<C64>> {
        let first = ann(1, n - 1, &ann(2, n, x)?)?;
        let second = ann(2, n - 1, &ann(1, n, x)?)?;
        Ok(first - second * lambda.conj())
    };

    let top = max_level - 3;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = [0.0f64; 3];
    let mut worst_gram = 0.0f64;
    for n in 0..=top {
        let a_mat = Array2::from_shape_fn((1 << (n + 2), 1 << n), |(r, c)| {
            let mut e = Array1::zeros(1 << n);
            e[c] = C64::new(1.0, 0.0);
            a_op(&e)[r]
        });
        let pinv = linalg::pinv_psd(fock.gram(n), 1e-12)?;
        let a_star_gram = pinv.dot(&linalg::adjoint(&a_mat)).dot(fock.gram(n + 2));
        for _ in 0..SAMPLES_PER_LEVEL {
            let x = random_vector(&mut rng, 1 << n);
            let scale = vec_norm(&x);
            let ax = a_op(&x);
            for (slot, (i, coeff)) in [(1usize, lq), (2usize, lambda.conj() * q)].into_iter().enumerate() {
                let lhs = ann(i, n + 2, &ax)?;
                let rhs = if n == 0 {
                    Array1::zeros(lhs.len())
                } else {
                    a_op(&ann(i, n, &x)?) * coeff
                };
                worst[slot] = worst[slot].max(relative(&(lhs - rhs), scale));
            }
            let lhs = a_star(n + 2, &ax)?;
            let rhs = if n < 2 {
                Array1::zeros(lhs.len())
            } else {
                a_op(&a_star(n, &x)?) * (q * q)
            };
            worst[2] = worst[2].max(relative(&(lhs - rhs), scale));

            let y = random_vector(&mut rng, 1 << (n + 2));
            let diff = a_star(n + 2, &y)? - a_star_gram.dot(&y);
            worst_gram = worst_gram.max(relative(&fock.gram(n).dot(&diff), vec_norm(&y)));
        }
    }
    let omega = Array1::from_elem(1, C64::new(1.0, 0.0));
    let a_omega = a_op(&omega);
    let a_omega_fock_norm = fock.level_inner(2, &a_omega, &a_omega).norm().sqrt();
    let names = ["a1star_a_commutation", "a2star_a_commutation", "astar_a_q2"];
    Ok(QuonAReport {
        q,
        lambda: (lambda.re, lambda.im),
        relations: names
            .iter()
            .zip(worst)
            .map(|(name, r)| FockCheck::new(name, (0, top), SAMPLES_PER_LEVEL, r, tol))
            .collect(),
        a_omega_fock_norm,
        gram_route: FockCheck::new("astar_gram_route", (0, top), SAMPLES_PER_LEVEL, worst_gram, tol),
    })
}
