use alloc::vec::Vec;

use super::{cabs, hypot, sqrt, Operator, StateVector, C64, ZERO};
use crate::error::{Error, Result};

/// Relative off-diagonal Frobenius mass at which a sweep loop stops.
const CONVERGENCE: f64 = 1e-14;
/// Accepted when the sweep budget runs out without reaching [`CONVERGENCE`].
const FALLBACK: f64 = 1e-11;
const MAX_SWEEPS: usize = 100;

/// Eigen-decomposition `H = V diag(λ) V^dag`, eigenvalues ascending.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    /// Eigenvectors stored as columns.
    pub eigenvectors: Operator,
}

impl Spectrum {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn vector(&self, k: usize) -> Result<StateVector> {
        StateVector::new(self.column(k))
    }

    /// Column `k` as raw amplitudes, usable for any dimension.
    pub fn column(&self, k: usize) -> Vec<C64> {
        (0..self.dim()).map(|i| self.eigenvectors.get(i, k)).collect()
    }

    /// `V diag(f(λ)) V^dag`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> Operator {
        let n = self.dim();
        let mut data = alloc::vec![ZERO; n * n];
        for (k, &lambda) in self.eigenvalues.iter().enumerate() {
            let w = f(lambda);
            if w == 0.0 {
                continue;
            }
            let col = self.column(k);
            for i in 0..n {
                let wi = col[i] * w;
                for j in 0..n {
                    data[i * n + j] += wi * col[j].conj();
                }
            }
        }
        Operator::from_vec(n, data).expect("square").assume_hermitian()
    }

    pub fn reconstruct(&self) -> Operator {
        self.reconstruct_with(|l| l)
    }
}

/// Cyclic Jacobi eigensolver for Hermitian operators.
///
/// Each rotation first removes the phase of the pivot `a_pq` with a diagonal
/// unitary, then applies the real symmetric Jacobi rotation. Pivots are
/// visited in row-major order every sweep, so the result is deterministic.
pub fn hermitian_eig(h: &Operator) -> Result<Spectrum> {
    if !h.is_hermitian() {
        return Err(Error::NotHermitian { deviation: h.hermitian_deviation() });
    }
    let n = h.dim();
    let mut a: Vec<C64> = h.data().to_vec();
    // Symmetrize so that rounding in the input cannot bias the result.
    for i in 0..n {
        a[i * n + i] = C64::new(a[i * n + i].re, 0.0);
        for j in i + 1..n {
            let m = (a[i * n + j] + a[j * n + i].conj()) * 0.5;
            a[i * n + j] = m;
            a[j * n + i] = m.conj();
        }
    }
    let mut v: Vec<C64> = Operator::identity(n).data().to_vec();
    let scale = sqrt(a.iter().map(|x| x.norm_sqr()).sum());

    let off = |a: &[C64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[i * n + j].norm_sqr();
                }
            }
        }
        sqrt(s)
    };

    let mut sweeps = 0;
    loop {
        let residual = off(&a);
        if residual <= CONVERGENCE * scale {
            break;
        }
        if sweeps == MAX_SWEEPS {
            if residual <= FALLBACK * scale {
                break;
            }
            return Err(Error::NoConvergence { sweeps });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, n, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a[x * n + x].re.total_cmp(&a[y * n + y].re));
    let eigenvalues = order.iter().map(|&k| a[k * n + k].re).collect();
    let mut vecs = Vec::with_capacity(n * n);
    for i in 0..n {
        for &k in &order {
            vecs.push(v[i * n + k]);
        }
    }
    Ok(Spectrum { eigenvalues, eigenvectors: Operator::from_vec(n, vecs)? })
}

fn rotate(a: &mut [C64], v: &mut [C64], n: usize, p: usize, q: usize) {
    let apq = a[p * n + q];
    let mag = cabs(apq);
    if mag == 0.0 {
        return;
    }
    // e^{-i phi} with apq = |apq| e^{i phi}
    let phase = apq.conj() / mag;
    let app = a[p * n + p].re;
    let aqq = a[q * n + q].re;
    let tau = (aqq - app) / (2.0 * mag);
    let t = if tau >= 0.0 { 1.0 / (tau + hypot(1.0, tau)) } else { -1.0 / (-tau + hypot(1.0, tau)) };
    let c = 1.0 / hypot(1.0, t);
    let s = t * c;

    // G = [[c, s], [-s e^{-i phi}, c e^{-i phi}]] on (p, q); A <- G^dag A G, V <- V G.
    let gqp = -phase * s;
    let gqq = phase * c;
    for k in 0..n {
        let akp = a[k * n + p];
        let akq = a[k * n + q];
        a[k * n + p] = akp * c + akq * gqp;
        a[k * n + q] = akp * s + akq * gqq;
        let vkp = v[k * n + p];
        let vkq = v[k * n + q];
        v[k * n + p] = vkp * c + vkq * gqp;
        v[k * n + q] = vkp * s + vkq * gqq;
    }
    for k in 0..n {
        let apk = a[p * n + k];
        let aqk = a[q * n + k];
        a[p * n + k] = apk * c + aqk * gqp.conj();
        a[q * n + k] = apk * s + aqk * gqq.conj();
    }
    a[p * n + p] = C64::new(app - t * mag, 0.0);
    a[q * n + q] = C64::new(aqq + t * mag, 0.0);
    a[p * n + q] = ZERO;
    a[q * n + p] = ZERO;
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_invariants(h: &Operator, spec: &Spectrum) {
        assert!(spec.reconstruct().max_abs_diff(h) < 1e-10);
        let v = &spec.eigenvectors;
        let gram = v.adjoint().matmul(v).unwrap();
        assert!(gram.max_abs_diff(&Operator::identity(h.dim())) < 1e-10);
        assert!(spec.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn diagonal_is_sorted() {
        let h = Operator::diagonal(&[3.0, 1.0, 2.0]);
        let spec = hermitian_eig(&h).unwrap();
        assert_eq!(spec.eigenvalues, [1.0, 2.0, 3.0]);
        check_invariants(&h, &spec);
    }

    #[test]
    fn pauli_x() {
        let x = Operator::from_real(2, &[0.0, 1.0, 1.0, 0.0]).unwrap().into_hermitian().unwrap();
        let spec = hermitian_eig(&x).unwrap();
        assert!((spec.eigenvalues[0] + 1.0).abs() < 1e-15);
        assert!((spec.eigenvalues[1] - 1.0).abs() < 1e-15);
        check_invariants(&x, &spec);
    }

    #[test]
    fn complex_pauli_y() {
        let i = C64::new(0.0, 1.0);
        let y = Operator::from_vec(2, alloc::vec![ZERO, -i, i, ZERO]).unwrap().into_hermitian().unwrap();
        let spec = hermitian_eig(&y).unwrap();
        assert!((spec.eigenvalues[0] + 1.0).abs() < 1e-15);
        check_invariants(&y, &spec);
    }

    #[test]
    fn dense_complex_matrix() {
        let n = 12;
        let h = Operator::from_fn(n, |i, j| {
            let (x, y) = (i as f64, j as f64);
            let re = libm::cos(x * 0.7 + y * 0.7) + if i == j { x } else { 0.0 };
            let im = if i == j { 0.0 } else { libm::sin(x - y) * 0.3 };
            C64::new(re, im)
        })
        .into_hermitian()
        .unwrap();
        let spec = hermitian_eig(&h).unwrap();
        check_invariants(&h, &spec);
    }

    #[test]
    fn rejects_unflagged_input() {
        let m = Operator::from_real(2, &[1.0, 0.0, 0.0, 1.0]).unwrap();
        assert!(matches!(hermitian_eig(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn degenerate_spectrum() {
        let h = Operator::identity(8).into_hermitian().unwrap();
        let spec = hermitian_eig(&h).unwrap();
        assert!(spec.eigenvalues.iter().all(|&l| (l - 1.0).abs() < 1e-15));
    }
}
