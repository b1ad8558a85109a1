//! Cyclic Jacobi eigensolver for complex Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a_pq` with a diagonal
//! unitary, then applies the classical real Jacobi rotation, so the working
//! matrix stays Hermitian throughout and converges to a real diagonal.

use num_complex::Complex64;

use super::{tol, ComplexMatrix, NumericsError, RealVector};

const MAX_SWEEPS: usize = 100;

/// Eigenvalues (ascending) and the matching eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: RealVector,
    pub vectors: ComplexMatrix,
}

/// Real eigenvalues of a Hermitian matrix in non-decreasing order.
pub fn hermitian_eigenvalues(a: &ComplexMatrix) -> Result<RealVector, NumericsError> {
    Ok(jacobi(a, false)?.values)
}

/// Full eigendecomposition of a Hermitian matrix.
pub fn hermitian_eigen(a: &ComplexMatrix) -> Result<HermitianEigen, NumericsError> {
    jacobi(a, true)
}

fn jacobi(a: &ComplexMatrix, want_vectors: bool) -> Result<HermitianEigen, NumericsError> {
    if !a.is_square() {
        return Err(NumericsError::NotSquare {
            op: "hermitian_eigenvalues",
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let residual = a.hermitian_residual();
    let scale = a.max_abs().max(1.0);
    if residual > tol::HERMITICITY * scale {
        return Err(NumericsError::NotHermitian {
            residual,
            tol: tol::HERMITICITY,
        });
    }

    let n = a.rows();
    // Symmetrise away the sub-tolerance residual so the iteration sees an exact
    // Hermitian matrix.
    let mut m = a.clone();
    for i in 0..n {
        m[(i, i)] = Complex64::new(m[(i, i)].re, 0.0);
        for j in (i + 1)..n {
            let avg = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
            m[(i, j)] = avg;
            m[(j, i)] = avg.conj();
        }
    }
    let mut v = if want_vectors {
        Some(ComplexMatrix::identity(n))
    } else {
        None
    };

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .map(|(i, j)| m[(i, j)].norm_sqr())
            .sum();
        let diag: f64 = (0..n).map(|i| m[(i, i)].re * m[(i, i)].re).sum();
        if off <= f64::EPSILON * f64::EPSILON * diag.max(f64::MIN_POSITIVE) || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut m, v.as_mut(), p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].re.total_cmp(&m[(j, j)].re));
    let values = order.iter().map(|&i| m[(i, i)].re).collect();
    let vectors = match v {
        Some(v) => {
            let mut sorted = ComplexMatrix::zeros(n, n);
            for (col, &src) in order.iter().enumerate() {
                for row in 0..n {
                    sorted[(row, col)] = v[(row, src)];
                }
            }
            sorted
        }
        None => ComplexMatrix::zeros(0, 0),
    };
    Ok(HermitianEigen { values, vectors })
}

/// Applies `m <- G^H m G` annihilating `m[p][q]`; accumulates `v <- v G`.
fn rotate(m: &mut ComplexMatrix, v: Option<&mut ComplexMatrix>, p: usize, q: usize) {
    let apq = m[(p, q)];
    let abs = apq.norm();
    if abs == 0.0 {
        return;
    }
    let phase = apq / abs;
    let app = m[(p, p)].re;
    let aqq = m[(q, q)].re;

    let theta = 0.5 * (aqq - app) / abs;
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // G = D R with D = diag(1, conj(phase)) on (p, q) and R the real rotation
    // [[c, s], [-s, c]].
    let g_pp = Complex64::new(c, 0.0);
    let g_pq = Complex64::new(s, 0.0);
    let g_qp = phase.conj() * (-s);
    let g_qq = phase.conj() * c;

    let n = m.rows();
    for k in 0..n {
        let mkp = m[(k, p)];
        let mkq = m[(k, q)];
        m[(k, p)] = mkp * g_pp + mkq * g_qp;
        m[(k, q)] = mkp * g_pq + mkq * g_qq;
    }
    for k in 0..n {
        let mpk = m[(p, k)];
        let mqk = m[(q, k)];
        m[(p, k)] = g_pp.conj() * mpk + g_qp.conj() * mqk;
        m[(q, k)] = g_pq.conj() * mpk + g_qq.conj() * mqk;
    }
    m[(p, q)] = Complex64::new(0.0, 0.0);
    m[(q, p)] = Complex64::new(0.0, 0.0);
    m[(p, p)] = Complex64::new(m[(p, p)].re, 0.0);
    m[(q, q)] = Complex64::new(m[(q, q)].re, 0.0);

    if let Some(v) = v {
        for k in 0..n {
            let vkp = v[(k, p)];
            let vkq = v[(k, q)];
            v[(k, p)] = vkp * g_pp + vkq * g_qp;
            v[(k, q)] = vkp * g_pq + vkq * g_qq;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn random_hermitian(n: usize, seed: u64) -> ComplexMatrix {
        let mut s = seed;
        let mut next = || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        let mut m = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(next(), 0.0);
            for j in (i + 1)..n {
                let z = Complex64::new(next(), next());
                m[(i, j)] = z;
                m[(j, i)] = z.conj();
            }
        }
        m
    }

    #[test]
    fn identity_spectrum() {
        let vals = hermitian_eigenvalues(&ComplexMatrix::identity(5)).unwrap();
        assert_eq!(vals, vec![1.0; 5]);
    }

    #[test]
    fn diagonal_sorted() {
        let m = ComplexMatrix::from_real_rows(&[vec![3.0, 0.0], vec![0.0, -1.0]]).unwrap();
        assert_eq!(hermitian_eigenvalues(&m).unwrap(), vec![-1.0, 3.0]);
    }

    #[test]
    fn pauli_y() {
        let mut m = ComplexMatrix::zeros(2, 2);
        m[(0, 1)] = Complex64::new(0.0, -1.0);
        m[(1, 0)] = Complex64::new(0.0, 1.0);
        let vals = hermitian_eigenvalues(&m).unwrap();
        assert!((vals[0] + 1.0).abs() < 1e-14 && (vals[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut m = ComplexMatrix::identity(3);
        m[(0, 1)] = Complex64::new(1.0, 0.0);
        assert!(matches!(
            hermitian_eigenvalues(&m),
            Err(NumericsError::NotHermitian { .. })
        ));
        assert!(hermitian_eigenvalues(&ComplexMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn random_8x8_residuals() {
        let a = random_hermitian(8, 2024);
        let eig = hermitian_eigen(&a).unwrap();
        for (k, &lambda) in eig.values.iter().enumerate() {
            let v: Vec<Complex64> = (0..8).map(|i| eig.vectors[(i, k)]).collect();
            let av = a.apply(&v).unwrap();
            let res: f64 = av
                .iter()
                .zip(&v)
                .map(|(x, y)| (x - y * lambda).norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(res < 1e-8, "residual {res} for eigenvalue {lambda}");
        }
        assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
    }

    proptest! {
        #[test]
        fn eigenvalue_sum_is_trace(seed in any::<u64>(), n in 1usize..12) {
            let a = random_hermitian(n, seed);
            let vals = hermitian_eigenvalues(&a).unwrap();
            let sum: f64 = vals.iter().sum();
            prop_assert!((sum - a.trace().re).abs() < 1e-9);
        }
    }
}
