use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;
use ndarray_linalg::{EigValsh, UPLO};
use proptest::prelude::*;

use wick_core::cli::parse_complex;
use wick_core::fock::{FockRep, GradedVector};
use wick_core::model::{build_quon, ModelFile};
use wick_core::subspace::{Subspace, DEFAULT_RANK_TOL};
use wick_core::tensor_ops::{build_pn, check_braid, lift, TensorOperator};

fn quon_params() -> impl Strategy<Value = (f64, C64)> {
    (0.01f64..0.99, 0.0f64..std::f64::consts::TAU).prop_map(|(q, phi)| (q, C64::from_polar(1.0, phi)))
}

fn cvec(len: usize) -> impl Strategy<Value = Array1<C64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), len)
        .prop_map(|v| v.into_iter().map(|(a, b)| C64::new(a, b)).collect())
}

fn cmat(rows: usize, cols: usize) -> impl Strategy<Value = Array2<C64>> {
    cvec(rows * cols).prop_map(move |v| Array2::from_shape_vec((rows, cols), v.to_vec()).unwrap())
}

fn adjoint(m: &Array2<C64>) -> Array2<C64> {
    m.t().mapv(|z| z.conj())
}

fn max_abs(m: &Array2<C64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn matrix_free_word_matches_dense_product(
        (q, lambda) in quon_params(),
        word in prop::collection::vec(1usize..=3, 1..6),
    ) {
        let t = build_quon(2, q, lambda).unwrap();
        let free = TensorOperator::word(&t, 4, &word).unwrap();
        prop_assert!(free.is_matrix_free());
        let mut dense = Array2::<C64>::eye(16);
        for &i in &word {
            dense = dense.dot(&lift(&t, 4, i).unwrap().to_dense().unwrap());
        }
        let diff = &free.to_dense().unwrap() - &dense;
        prop_assert!(max_abs(&diff) < 1e-12);
    }

    #[test]
    fn quon_is_hermitian_and_braided((q, lambda) in quon_params(), d in 2usize..=3) {
        let t = build_quon(d, q, lambda).unwrap();
        prop_assert!(t.check_hermiticity(1e-12).is_ok());
        prop_assert!(check_braid(&t, 1e-12).unwrap().pass);
    }

    #[test]
    fn gram_operator_is_self_adjoint_and_positive((q, lambda) in quon_params(), n in 1usize..=4) {
        let t = build_quon(2, q, lambda).unwrap();
        let p = build_pn(&t, n).unwrap().to_dense().unwrap();
        prop_assert!(max_abs(&(&p - &adjoint(&p))) < 1e-10);
        let min = p.eigvalsh(UPLO::Lower).unwrap().iter().cloned().fold(f64::INFINITY, f64::min);
        prop_assert!(min > -1e-10);
    }

    #[test]
    fn span_has_orthonormal_basis_and_correct_rank(a in cmat(8, 3), mix in cvec(3)) {
        // fourth column is a combination of the first three
        let mut cols = Array2::<C64>::zeros((8, 4));
        cols.slice_mut(ndarray::s![.., ..3]).assign(&a);
        cols.column_mut(3).assign(&a.dot(&mix));
        let s = Subspace::span(2, 3, &cols, DEFAULT_RANK_TOL).unwrap();
        prop_assert_eq!(s.dim(), 3);
        let b = s.basis();
        let gram = adjoint(b).dot(b);
        prop_assert!(max_abs(&(&gram - &Array2::<C64>::eye(3))) < 1e-12);
        let p = s.projector();
        prop_assert!(max_abs(&(&p.dot(&p) - &p)) < 1e-12);
        for k in 0..4 {
            prop_assert!(s.contains_vector(&cols.column(k).to_owned(), 1e-10));
        }
    }

    #[test]
    fn sum_and_tensor_dimensions(a in cmat(4, 2), b in cmat(4, 1)) {
        let sa = Subspace::span(2, 2, &a, DEFAULT_RANK_TOL).unwrap();
        let sb = Subspace::span(2, 2, &b, DEFAULT_RANK_TOL).unwrap();
        let sum = sa.sum(&sb, DEFAULT_RANK_TOL).unwrap();
        prop_assert_eq!(sum.dim(), 3);
        prop_assert!(sum.contains(&sa, 1e-10).unwrap());
        prop_assert!(sum.contains(&sb, 1e-10).unwrap());
        let prod = sa.tensor(&sb).unwrap();
        prop_assert_eq!(prod.level(), 4);
        prop_assert_eq!(prod.dim(), 2);
    }

    #[test]
    fn creation_and_annihilation_are_fock_adjoint(
        (q, lambda) in quon_params(),
        i in 1usize..=2,
        parts in prop::collection::vec(cvec(8), 8),
    ) {
        let t = build_quon(2, q, lambda).unwrap();
        let fock = FockRep::new(&t, 3).unwrap();
        let graded = |offset: usize| {
            let mut x = GradedVector::zero(2, 3);
            for n in 0..=3 {
                let len = 2usize.pow(n as u32);
                x.set_component(n, parts[offset + n].slice(ndarray::s![..len]).to_owned()).unwrap();
            }
            x
        };
        let (x, y) = (graded(0), graded(4));
        let lhs = fock.inner(&fock.create(i, &x).unwrap(), &y).unwrap();
        let rhs = fock.inner(&x, &fock.annihilate(i, &y).unwrap()).unwrap();
        prop_assert!((lhs - rhs).norm() < 1e-10 * (1.0 + lhs.norm()));
    }

    #[test]
    fn complex_numbers_roundtrip_through_text(re in -1e3f64..1e3, im in -1e3f64..1e3) {
        let z = parse_complex(&format!("{re}{im:+}i")).unwrap();
        prop_assert_eq!(z, C64::new(re, im));
        prop_assert_eq!(parse_complex(&format!("{im}i")).unwrap(), C64::new(0.0, im));
    }

    #[test]
    fn model_file_roundtrip((q, lambda) in quon_params()) {
        let t = build_quon(2, q, lambda).unwrap();
        let text = serde_json::to_string(&t.to_model_file()).unwrap();
        let file: ModelFile = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(file.into_coefficients().unwrap(), t);
    }
}
