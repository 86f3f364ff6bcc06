use lostorder_core::coupled_basis::build_basis;
use lostorder_core::coupled_basis::spin::eigen_residual;
use lostorder_core::numkit::{
    hermitian_eig, partial_trace, qubit_dims, relative_entropy, von_neumann_entropy, Operator, Tensor, C64,
};
use lostorder_core::permutation::{is_permutation, permutation_operator};
use lostorder_core::quantities::ratio;
use lostorder_core::states::{brute_force_sigma, closed_form_sigma, SchmidtParam, SizeLimit};
use proptest::prelude::*;

fn complex_entries(n: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), n)
}

fn hermitian(dim: usize, entries: &[(f64, f64)]) -> Operator {
    let a = Operator::from_fn(dim, |i, k| C64::new(entries[i * dim + k].0, entries[i * dim + k].1));
    a.add(&a.adjoint()).unwrap().into_hermitian().unwrap()
}

/// `A A† / tr`, full rank with probability one.
fn density(dim: usize, entries: &[(f64, f64)]) -> Operator {
    let a = Operator::from_fn(dim, |i, k| C64::new(entries[i * dim + k].0, entries[i * dim + k].1));
    let m = a.matmul(&a.adjoint()).unwrap();
    let tr = m.trace().re;
    let m = m.add(&m.adjoint()).unwrap().scaled(0.5 / tr);
    let eye = Operator::identity(dim).scaled(1e-3 / dim as f64);
    m.add(&eye).unwrap().scaled(1.0 / 1.001).into_hermitian().unwrap()
}

fn unitary(dim: usize, entries: &[(f64, f64)]) -> Operator {
    hermitian_eig(&hermitian(dim, entries)).unwrap().eigenvectors
}

fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eig_reconstructs(e in complex_entries(64)) {
        let h = hermitian(8, &e);
        let spec = hermitian_eig(&h).unwrap();
        prop_assert!(spec.reconstruct().max_abs_diff(&h) < 1e-10);
        let v = &spec.eigenvectors;
        prop_assert!(v.adjoint().matmul(v).unwrap().max_abs_diff(&Operator::identity(8)) < 1e-10);
    }

    #[test]
    fn entropy_is_unitarily_invariant(d in complex_entries(64), u in complex_entries(64)) {
        let rho = density(8, &d);
        let u = unitary(8, &u);
        let rotated = rho.conjugate_by(&u).unwrap();
        let a = von_neumann_entropy(&rho).unwrap();
        let b = von_neumann_entropy(&rotated).unwrap();
        prop_assert!((a - b).abs() < 1e-9);
        prop_assert!((0.0..=3.0 + 1e-12).contains(&a));
    }

    #[test]
    fn partial_trace_commutes_with_bob_unitaries(d in complex_entries(256), u in complex_entries(16)) {
        let rho = density(16, &d);
        let u = unitary(4, &u);
        let global = Operator::identity(4).tensor(&u);
        let lhs = partial_trace(&rho.conjugate_by(&global).unwrap(), &[4, 4], &[1]).unwrap();
        let rhs = partial_trace(&rho, &[4, 4], &[1]).unwrap().conjugate_by(&u).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
        let alice = partial_trace(&rho.conjugate_by(&global).unwrap(), &qubit_dims(4), &[0, 1]).unwrap();
        let alice_before = partial_trace(&rho, &qubit_dims(4), &[0, 1]).unwrap();
        prop_assert!(alice.max_abs_diff(&alice_before) < 1e-12);
    }

    #[test]
    fn relative_entropy_is_non_negative(a in complex_entries(64), b in complex_entries(64)) {
        let sigma = density(8, &a);
        let rho = density(8, &b);
        prop_assert!(relative_entropy(&sigma, &rho).unwrap() >= -1e-10);
        prop_assert!(relative_entropy(&sigma, &sigma).unwrap().abs() < 1e-9);
    }

    #[test]
    fn shuffled_state_is_bob_permutation_invariant(alpha in 0.0..=1.0f64, perm in permutation(4)) {
        let sigma = brute_force_sigma(2, SchmidtParam::new(alpha).unwrap(), SizeLimit::DEFAULT).unwrap();
        let p = Operator::identity(16).tensor(&permutation_operator(4, &perm).unwrap());
        prop_assert!(sigma.conjugate_by(&p).unwrap().max_abs_diff(&sigma) < 1e-12);
    }

    #[test]
    fn block_weights_are_normalized(pairs in 1usize..=16, alpha in 0.0..=1.0f64) {
        let b = closed_form_sigma(pairs, SchmidtParam::new(alpha).unwrap()).unwrap();
        prop_assert!((b.total_probability() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ratio_is_at_most_one(pairs in 1usize..=8, alpha in 0.0..=1.0f64) {
        let r = ratio(pairs, SchmidtParam::new(alpha).unwrap()).unwrap();
        prop_assert!(r.e_d <= r.e_initial + 1e-12);
        if let Some(x) = r.ratio {
            prop_assert!(x <= 1.0 + 1e-9);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Qubit permutations act only on the multiplicity label: the matrix
    /// `⟨j,m,a|P|j',m',b⟩` vanishes off `(j,m) = (j',m')` and does not depend
    /// on `m`.
    #[test]
    fn permutations_are_block_diagonal_in_coupled_basis(
        (pairs, perm) in (1usize..=3).prop_flat_map(|p| (Just(p), permutation(2 * p)))
    ) {
        let n = 2 * pairs;
        prop_assert!(is_permutation(&perm));
        let p = permutation_operator(n, &perm).unwrap();
        let basis = build_basis(pairs).unwrap();
        let entries: Vec<_> = basis.iter().map(|(l, v)| (*l, v.clone())).collect();
        for (la, va) in &entries {
            let pv = p.apply(va).unwrap();
            for (lb, vb) in &entries {
                let amp = vb.inner(&pv);
                if la.j != lb.j || la.m != lb.m {
                    prop_assert!(amp.norm_sqr() < 1e-20);
                } else {
                    let top = la.j as i32;
                    let ra = basis.vector(la.j, top, la.alpha).unwrap();
                    let rb = basis.vector(lb.j, top, lb.alpha).unwrap();
                    let reference = rb.inner(&p.apply(ra).unwrap());
                    prop_assert!((amp - reference).norm_sqr() < 1e-20);
                }
            }
        }
    }

    #[test]
    fn basis_vectors_are_spin_eigenvectors(pairs in 1usize..=4, pick in any::<prop::sample::Index>()) {
        let basis = build_basis(pairs).unwrap();
        let labels: Vec<_> = basis.labels().collect();
        let l = labels[pick.index(labels.len())];
        let v = basis.vector(l.j, l.m, l.alpha).unwrap();
        prop_assert!(eigen_residual(v, l.j, l.m) < 1e-10);
    }
}
