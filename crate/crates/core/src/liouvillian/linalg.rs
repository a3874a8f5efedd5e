//! Dense symmetric eigensolvers and Hermitian matrix functions.

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Matrices larger than this go to nalgebra's tridiagonal QR solver.
const JACOBI_MAX_DIM: usize = 256;

/// Eigenvalues (ascending) and eigenvectors (columns) of a real
/// symmetric matrix by cyclic Jacobi rotations.
///
/// Sweeps stop once the off-diagonal Frobenius norm falls below
/// `1e-13 · ‖A‖_F`.
pub fn jacobi_eigen(a: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "matrix must be square");
    let mut m = a.clone();
    let mut v = DMatrix::<f64>::identity(n, n);
    let norm = m.norm();
    let tol = 1e-13 * norm;

    for _sweep in 0..100 {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += 2.0 * m[(p, q)] * m[(p, q)];
            }
        }
        if off.sqrt() <= tol || norm == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let app = m[(p, p)];
                let aqq = m[(q, q)];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = c * mkp - s * mkq;
                    m[(k, q)] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = c * mpk - s * mqk;
                    m[(q, k)] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    sort_pairs((0..n).map(|i| m[(i, i)]).collect(), v)
}

fn sort_pairs(values: Vec<f64>, vectors: DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    let sorted = order.iter().map(|&i| values[i]).collect();
    let vecs = DMatrix::from_fn(vectors.nrows(), order.len(), |r, c| vectors[(r, order[c])]);
    (sorted, vecs)
}

/// Symmetric eigendecomposition: Jacobi for small matrices, nalgebra's
/// implicit QR above [`JACOBI_MAX_DIM`].
pub fn sym_eigen(a: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    if a.nrows() <= JACOBI_MAX_DIM {
        jacobi_eigen(a)
    } else {
        let sym = 0.5 * (a + a.transpose());
        let e = sym.symmetric_eigen();
        sort_pairs(e.eigenvalues.iter().copied().collect(), e.eigenvectors)
    }
}

/// Real symmetric embedding `[[Re, -Im], [Im, Re]]` of a Hermitian matrix.
fn embed(h: &DMatrix<Complex64>) -> DMatrix<f64> {
    let d = h.nrows();
    DMatrix::from_fn(2 * d, 2 * d, |r, c| {
        let z = h[(r % d, c % d)];
        match (r < d, c < d) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    })
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(h: &DMatrix<Complex64>) -> Vec<f64> {
    // Each eigenvalue appears twice in the embedding.
    let (vals, _) = sym_eigen(&embed(h));
    vals.iter().step_by(2).copied().collect()
}

/// `f(H)` for Hermitian `H` via the spectral theorem on the real embedding.
pub fn hermitian_function(h: &DMatrix<Complex64>, f: impl Fn(f64) -> f64) -> DMatrix<Complex64> {
    let d = h.nrows();
    let (vals, vecs) = sym_eigen(&embed(h));
    let fv: Vec<f64> = vals.iter().map(|&x| f(x)).collect();
    let scaled = DMatrix::from_fn(2 * d, 2 * d, |r, c| vecs[(r, c)] * fv[c]);
    let full = scaled * vecs.transpose();
    DMatrix::from_fn(d, d, |r, c| Complex64::new(full[(r, c)], full[(r + d, c)]))
}

/// Operator norm of a Hermitian matrix.
pub fn hermitian_norm(h: &DMatrix<Complex64>) -> f64 {
    hermitian_eigenvalues(h)
        .iter()
        .fold(0.0, |acc, x| acc.max(x.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(n: usize, seed: u64) -> DMatrix<f64> {
        // Small LCG keeps the test free of extra dependencies.
        let mut s = seed;
        let mut next = move || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        let a = DMatrix::from_fn(n, n, |_, _| next());
        &a + a.transpose()
    }

    #[test]
    fn jacobi_matches_nalgebra() {
        for (n, seed) in [(1, 1), (5, 2), (17, 3), (40, 4)] {
            let a = sample(n, seed);
            let (vals, vecs) = jacobi_eigen(&a);
            let mut reference: Vec<f64> = a.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
            reference.sort_by(f64::total_cmp);
            for (x, y) in vals.iter().zip(&reference) {
                assert!((x - y).abs() < 1e-12, "{x} vs {y}");
            }
            let recon = &vecs * DMatrix::from_diagonal(&vals.clone().into()) * vecs.transpose();
            assert!((recon - &a).amax() < 1e-12);
        }
    }

    #[test]
    fn jacobi_handles_degenerate_spectra() {
        let a = DMatrix::<f64>::identity(6, 6) * 3.0;
        let (vals, _) = jacobi_eigen(&a);
        assert!(vals.iter().all(|&x| x == 3.0));
    }

    #[test]
    fn hermitian_square_root() {
        let i = Complex64::i();
        let h = DMatrix::from_row_slice(2, 2, &[Complex64::new(2.0, 0.0), i, -i, Complex64::new(2.0, 0.0)]);
        assert_eq!(
            hermitian_eigenvalues(&h)
                .iter()
                .map(|x| (x * 1e12).round() / 1e12)
                .collect::<Vec<_>>(),
            vec![1.0, 3.0]
        );
        let r = hermitian_function(&h, f64::sqrt);
        assert!((&r * &r - &h).camax() < 1e-12);
    }
}
