//! Shared helpers for the integration tests: a brute-force oracle that is
//! independent of the library's operator and subspace machinery, and fixture
//! loading.

#![allow(dead_code)]

use std::path::PathBuf;

use num_complex::Complex64 as C64;
use serde::Deserialize;

/// The action of `T` on a pair of basis letters (0-based).
#[derive(Clone, Copy)]
pub enum OracleModel {
    Quon { q: f64, lambda: C64 },
    Flip,
}

impl OracleModel {
    /// `T(e_a ⊗ e_b)` as `(a', b', coefficient)` terms.
    fn act(&self, a: usize, b: usize) -> (usize, usize, C64) {
        match *self {
            OracleModel::Flip => (b, a, C64::new(1.0, 0.0)),
            OracleModel::Quon { q, lambda } => {
                if a == b {
                    (a, a, C64::new(q, 0.0))
                } else if a < b {
                    (b, a, lambda.conj())
                } else {
                    (b, a, lambda)
                }
            }
        }
    }
}

pub struct Oracle {
    pub model: OracleModel,
    pub d: usize,
}

impl Oracle {
    pub fn new(model: OracleModel, d: usize) -> Self {
        Self { model, d }
    }

    fn digits(&self, n: usize, mut idx: usize) -> Vec<usize> {
        let mut out = vec![0; n];
        for slot in out.iter_mut().rev() {
            *slot = idx % self.d;
            idx /= self.d;
        }
        out
    }

    fn index(&self, digits: &[usize]) -> usize {
        digits.iter().fold(0, |acc, &x| acc * self.d + x)
    }

    /// `T_p` (1-based slot pair `(p, p+1)`) applied to `v ∈ H^{⊗n}`.
    pub fn apply_t(&self, n: usize, p: usize, v: &[C64]) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); v.len()];
        for (idx, &x) in v.iter().enumerate() {
            if x == C64::new(0.0, 0.0) {
                continue;
            }
            let mut dg = self.digits(n, idx);
            let (a, b, c) = self.model.act(dg[p - 1], dg[p]);
            dg[p - 1] = a;
            dg[p] = b;
            out[self.index(&dg)] += c * x;
        }
        out
    }

    /// `T_1 T_2 ⋯ T_k v` (`T_k` first).
    pub fn apply_chain(&self, n: usize, k: usize, v: &[C64]) -> Vec<C64> {
        let mut w = v.to_vec();
        for p in (1..=k).rev() {
            w = self.apply_t(n, p, &w);
        }
        w
    }

    pub fn apply_r(&self, n: usize, v: &[C64]) -> Vec<C64> {
        let mut out = v.to_vec();
        for k in 1..n {
            for (o, w) in out.iter_mut().zip(self.apply_chain(n, k, v)) {
                *o += w;
            }
        }
        out
    }

    pub fn r_columns(&self, n: usize) -> Vec<Vec<C64>> {
        let dim = self.d.pow(n as u32);
        (0..dim)
            .map(|j| {
                let mut e = vec![C64::new(0.0, 0.0); dim];
                e[j] = C64::new(1.0, 0.0);
                self.apply_r(n, &e)
            })
            .collect()
    }

    pub fn dim_ker_r(&self, n: usize) -> usize {
        let cols = self.r_columns(n);
        cols.len() - rank(&cols)
    }

    /// Dimensions of `K_2..=K_{m_max}` by pushing an explicit spanning set
    /// through `1 − T_1⋯T_m` and keeping independent columns.
    pub fn dims_k(&self, m_max: usize) -> Vec<usize> {
        let mut basis = null_space(&self.r_columns(2));
        let mut dims = vec![basis.len()];
        for m in 2..m_max {
            let mut gens = Vec::new();
            for v in &basis {
                for k in 0..self.d {
                    let mut u = vec![C64::new(0.0, 0.0); v.len() * self.d];
                    for (i, &x) in v.iter().enumerate() {
                        u[i * self.d + k] = x;
                    }
                    let tu = self.apply_chain(m + 1, m, &u);
                    gens.push(u.iter().zip(tu).map(|(a, b)| a - b).collect::<Vec<_>>());
                }
            }
            basis = independent_columns(&gens);
            dims.push(basis.len());
        }
        dims
    }
}

const PIVOT_TOL: f64 = 1e-9;

/// Row echelon reduction of the matrix whose columns are `cols`; returns
/// the pivot column indices.
fn pivots(cols: &[Vec<C64>]) -> (Vec<usize>, Vec<Vec<C64>>) {
    if cols.is_empty() {
        return (Vec::new(), Vec::new());
    }
    let rows = cols[0].len();
    // work row-major
    let mut a: Vec<Vec<C64>> = (0..rows)
        .map(|i| cols.iter().map(|c| c[i]).collect())
        .collect();
    let scale = a
        .iter()
        .flatten()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let mut piv = Vec::new();
    let mut r = 0;
    for c in 0..cols.len() {
        if r == rows {
            break;
        }
        let (best, val) = (r..rows)
            .map(|i| (i, a[i][c].norm()))
            .fold((r, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if val <= PIVOT_TOL * scale {
            continue;
        }
        a.swap(r, best);
        let p = a[r][c];
        for x in a[r].iter_mut() {
            *x /= p;
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != r && row[c].norm() > 0.0 {
                let f = row[c];
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x -= f * y;
                }
            }
        }
        piv.push(c);
        r += 1;
    }
    (piv, a)
}

pub fn rank(cols: &[Vec<C64>]) -> usize {
    pivots(cols).0.len()
}

pub fn independent_columns(cols: &[Vec<C64>]) -> Vec<Vec<C64>> {
    pivots(cols).0.into_iter().map(|c| cols[c].clone()).collect()
}

/// Null space basis from the reduced row echelon form.
pub fn null_space(cols: &[Vec<C64>]) -> Vec<Vec<C64>> {
    let n = cols.len();
    let (piv, rref) = pivots(cols);
    let free: Vec<usize> = (0..n).filter(|c| !piv.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![C64::new(0.0, 0.0); n];
            v[f] = C64::new(1.0, 0.0);
            for (r, &p) in piv.iter().enumerate() {
                v[p] = -rref[r][f];
            }
            v
        })
        .collect()
}

#[derive(Debug, Deserialize)]
pub struct DimsFixture {
    pub description: String,
    pub model: wick_core::ModelSpec,
    /// First level of the tables (always 2).
    pub m_min: usize,
    pub dims_k: Vec<usize>,
    pub dims_ker_r: Vec<usize>,
}

impl DimsFixture {
    pub fn m_max(&self) -> usize {
        self.m_min + self.dims_k.len() - 1
    }

    pub fn oracle(&self) -> Oracle {
        let model = match &self.model.kind {
            wick_core::ModelKind::Quon { q, lambda } => OracleModel::Quon {
                q: *q,
                lambda: *lambda,
            },
            wick_core::ModelKind::CcrFlip => OracleModel::Flip,
            other => panic!("no oracle for {other:?}"),
        };
        Oracle::new(model, self.model.d)
    }
}

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join("fixtures")
        .join(name)
}

pub fn load_dims(name: &str) -> DimsFixture {
    let text = std::fs::read_to_string(fixture_path(name)).expect("fixture readable");
    serde_json::from_str(&text).expect("fixture parses")
}

pub const DIM_FIXTURES: [&str; 4] = [
    "quon_d3_q05.json",
    "quon_d4_q05.json",
    "flip_d2.json",
    "flip_d3.json",
];
