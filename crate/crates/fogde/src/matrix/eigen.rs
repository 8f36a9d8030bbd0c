//! Spectra via the characteristic polynomial: Faddeev-LeVerrier recurrence
//! for the coefficients, Durand-Kerner for the roots, a Krylov-style search
//! for the minimal polynomial, and inverse iteration for eigenvectors.

use super::{Complex64, ComplexMatrix, Polynomial};
use crate::error::Result;

/// Characteristic polynomial det(xI - A) by the Faddeev-LeVerrier
/// recurrence. Exact to rounding for the n <= 20 matrices used here.
pub fn characteristic_polynomial(a: &ComplexMatrix) -> Polynomial {
    assert!(a.is_square(), "characteristic polynomial of a non-square matrix");
    let n = a.rows();
    let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
    coeffs[n] = Complex64::new(1.0, 0.0);
    let mut m = ComplexMatrix::identity(n);
    for k in 1..=n {
        let am = a * &m;
        let ck = -am.trace() / Complex64::new(k as f64, 0.0);
        coeffs[n - k] = ck;
        m = am;
        for i in 0..n {
            m[(i, i)] += ck;
        }
    }
    Polynomial::new(coeffs)
}

/// Eigenvalue multiset of `A`, sorted by real then imaginary part.
pub fn eigenvalues(a: &ComplexMatrix) -> Result<Vec<Complex64>> {
    characteristic_polynomial(a).roots()
}

/// Lowest-degree monic polynomial annihilating `A`, found by testing each
/// vectorized power for linear dependence on the previous ones with modified
/// Gram-Schmidt. `tol` is the relative dependence threshold; the
/// characteristic polynomial is returned if no lower degree qualifies.
pub fn minimal_polynomial(a: &ComplexMatrix, tol: f64) -> Polynomial {
    assert!(a.is_square(), "minimal polynomial of a non-square matrix");
    let n = a.rows();
    let dot = |x: &[Complex64], y: &[Complex64]| -> Complex64 {
        x.iter().zip(y).map(|(u, v)| u.conj() * v).sum()
    };
    let nrm = |x: &[Complex64]| -> f64 { dot(x, x).re.sqrt() };

    let mut q: Vec<Vec<Complex64>> = Vec::new();
    // rcols[j] holds the Gram-Schmidt coefficients of power j against
    // q[0..j], with its own norm appended: column j of the R factor.
    let mut rcols: Vec<Vec<Complex64>> = Vec::new();
    let mut power = ComplexMatrix::identity(n);

    for d in 0..=n {
        let mut b: Vec<Complex64> = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                b.push(power[(i, j)]);
            }
        }
        let scale = nrm(&b);
        let mut coef = vec![Complex64::new(0.0, 0.0); q.len()];
        for _pass in 0..2 {
            for (j, qj) in q.iter().enumerate() {
                let c = dot(qj, &b);
                for (bi, qi) in b.iter_mut().zip(qj) {
                    *bi -= c * qi;
                }
                coef[j] += c;
            }
        }
        let resid = nrm(&b);
        if d > 0 && resid <= tol * scale {
            // Dependent: solve R x = coef by back substitution to express
            // power d in the power basis, giving the monic annihilator.
            let mut x = vec![Complex64::new(0.0, 0.0); d];
            for j in (0..d).rev() {
                let mut s = coef[j];
                for k in j + 1..d {
                    s -= rcols[k][j] * x[k];
                }
                x[j] = s / rcols[j][j];
            }
            let mut poly = vec![Complex64::new(0.0, 0.0); d + 1];
            for (k, xk) in x.iter().enumerate() {
                poly[k] = -xk;
            }
            poly[d] = Complex64::new(1.0, 0.0);
            return Polynomial::new(poly);
        }
        if d < n {
            coef.push(Complex64::new(resid, 0.0));
            for bi in b.iter_mut() {
                *bi /= Complex64::new(resid, 0.0);
            }
            q.push(b);
            rcols.push(coef);
            power = &power * a;
        }
    }
    characteristic_polynomial(a)
}

/// Eigenvector for a known eigenvalue by shifted inverse iteration, with
/// a fallback for defective eigenvalues. Returns the unit vector and its
/// residual ||Av - lambda v||.
///
/// Inverse iteration needs (A - lambda I) perturbed off singularity; for
/// a defective lambda the perturbed matrix is singular to working
/// precision no matter the nudge (smallest singular value shrinks like
/// the nudge to the Jordan-block power), so when the solves keep failing
/// the vector is taken instead from the annihilating-polynomial quotient
/// q = minpoly/(x - lambda): q(A) maps any generic vector into the exact
/// kernel of (A - lambda I).
pub fn eigenvector(a: &ComplexMatrix, lambda: Complex64) -> Result<(Vec<Complex64>, f64)> {
    assert!(a.is_square(), "eigenvector of a non-square matrix");
    let n = a.rows();
    // Deterministic start with no accidental symmetry.
    let seed: Vec<Complex64> = (0..n)
        .map(|j| Complex64::new(1.0 / (1.0 + j as f64), 0.3 / (2.0 + j as f64)))
        .collect();
    let residual_of = |v: &[Complex64]| -> f64 {
        a.mul_vec(v)
            .iter()
            .zip(v)
            .map(|(x, y)| (x - lambda * y).norm_sqr())
            .sum::<f64>()
            .sqrt()
    };
    let normalize = |v: &mut Vec<Complex64>| {
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in v.iter_mut() {
            *z /= Complex64::new(norm, 0.0);
        }
    };
    let shifted = |s: Complex64| {
        let mut m = a.clone();
        for i in 0..n {
            m[(i, i)] -= s;
        }
        m
    };

    let mut v = seed.clone();
    let mut shift = lambda;
    let mut m = shifted(shift);
    let mut solvable = false;
    for attempt in 0..2 {
        match m.solve_vec(&v) {
            Ok(w) => {
                v = w;
                solvable = true;
                break;
            }
            Err(_) if attempt == 0 => {
                // Exactly singular shift: nudge off the eigenvalue.
                shift += Complex64::new(1e-12 * (1.0 + lambda.norm()), 0.0);
                m = shifted(shift);
            }
            Err(_) => {}
        }
    }
    if solvable {
        for _ in 0..3 {
            normalize(&mut v);
            if let Ok(w) = m.solve_vec(&v) {
                v = w;
            }
        }
        normalize(&mut v);
        return Ok((v.clone(), residual_of(&v)));
    }

    // Defective (or pathologically clustered) eigenvalue: project onto
    // ker(A - lambda I) with the quotient of the minimal polynomial.
    let mp = minimal_polynomial(a, 1e-9);
    let (q, _) = mp.div_rem(&Polynomial::from_roots(&[lambda]));
    let qa = q.eval_matrix(a);
    let mut w = qa.mul_vec(&seed);
    let norm = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm <= 1e-10 * qa.max_abs().max(1.0) {
        // Seed happened to miss the eigenspace; a shifted seed cannot
        // miss it too unless lambda is not an eigenvalue at all.
        let second: Vec<Complex64> = (0..n)
            .map(|j| Complex64::new(0.1 + (j as f64).sin(), (j as f64).cos()))
            .collect();
        w = qa.mul_vec(&second);
    }
    normalize(&mut w);
    Ok((w.clone(), residual_of(&w)))
}
