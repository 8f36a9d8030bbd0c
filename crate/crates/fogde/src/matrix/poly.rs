//! Complex polynomials: evaluation on scalars and matrices, division, and
//! root finding by simultaneous (Durand-Kerner) iteration.

use super::{Complex64, ComplexMatrix};
use crate::error::{Error, Result};

/// Polynomial with coefficients in ascending degree order.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<Complex64>,
}

impl Polynomial {
    /// Build from ascending coefficients; exact trailing zeros are trimmed.
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.len() > 1 && coeffs.last() == Some(&Complex64::new(0.0, 0.0)) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Complex64::new(0.0, 0.0));
        }
        Polynomial { coeffs }
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(roots: &[Complex64]) -> Self {
        let mut p = Polynomial::new(vec![Complex64::new(1.0, 0.0)]);
        for &r in roots {
            p = p.mul(&Polynomial::new(vec![-r, Complex64::new(1.0, 0.0)]));
        }
        p
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// Drop trailing coefficients of magnitude at most `tol`.
    pub fn trim(&self, tol: f64) -> Self {
        let mut c = self.coeffs.clone();
        while c.len() > 1 && c.last().map_or(false, |z| z.norm() <= tol) {
            c.pop();
        }
        Polynomial { coeffs: c }
    }

    /// Horner evaluation at a scalar.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// Horner evaluation at a square matrix.
    pub fn eval_matrix(&self, a: &ComplexMatrix) -> ComplexMatrix {
        assert!(a.is_square(), "polynomial of a non-square matrix");
        let n = a.rows();
        let mut acc = ComplexMatrix::zeros(n, n);
        for &c in self.coeffs.iter().rev() {
            acc = &acc * a;
            for i in 0..n {
                acc[(i, i)] += c;
            }
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        if self.degree() == 0 {
            return Polynomial::new(vec![Complex64::new(0.0, 0.0)]);
        }
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &ck)| ck * Complex64::new(k as f64, 0.0))
            .collect();
        Polynomial::new(c)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut c = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Polynomial::new(c)
    }

    /// Scale so the leading coefficient is 1.
    pub fn monic(&self) -> Self {
        let lead = *self.coeffs.last().unwrap();
        Polynomial::new(self.coeffs.iter().map(|&c| c / lead).collect())
    }

    /// Polynomial long division: returns (quotient, remainder).
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree();
        let lead = *divisor.coeffs.last().unwrap();
        assert!(lead.norm() > 0.0, "division by zero polynomial");
        if self.degree() < dd {
            return (
                Polynomial::new(vec![Complex64::new(0.0, 0.0)]),
                self.clone(),
            );
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Complex64::new(0.0, 0.0); self.degree() - dd + 1];
        for k in (0..quot.len()).rev() {
            let q = rem[k + dd] / lead;
            quot[k] = q;
            for j in 0..=dd {
                let sub = q * divisor.coeffs[j];
                rem[k + j] -= sub;
            }
        }
        rem.truncate(dd.max(1));
        (Polynomial::new(quot), Polynomial::new(rem))
    }

    /// All roots with multiplicity, by Durand-Kerner iteration.
    ///
    /// The residual acceptance is |p(z)| <= 1e-11 * max(1, max|c|) *
    /// max(1, |z|)^n on the monic polynomial. A scale relative to the
    /// coefficient norm (rather than to the evaluation magnitude at z) keeps
    /// the criterion attainable at high-multiplicity roots, where iterates
    /// necessarily stall on a cluster of radius ~eps^(1/multiplicity).
    pub fn roots(&self) -> Result<Vec<Complex64>> {
        let p = self.monic();
        let n = p.degree();
        if n == 0 {
            return Ok(Vec::new());
        }
        if n == 1 {
            return Ok(vec![-p.coeffs[0]]);
        }
        let coef_scale = p.coeffs[..n]
            .iter()
            .map(|c| c.norm())
            .fold(1.0f64, f64::max);
        let radius = 1.0 + coef_scale;
        let mut z: Vec<Complex64> = (0..n)
            .map(|k| {
                let ang = 2.0 * std::f64::consts::PI * (k as f64) / (n as f64) + 0.7;
                let r = 0.5 * radius * (1.0 + 0.1 * (k as f64) / (n as f64));
                Complex64::new(r * ang.cos(), r * ang.sin())
            })
            .collect();

        let residual_ok = |z: &[Complex64]| -> (bool, f64) {
            let mut worst = 0.0f64;
            for &zk in z {
                let bound = coef_scale * zk.norm().max(1.0).powi(n as i32);
                let rel = p.eval(zk).norm() / bound;
                worst = worst.max(rel);
            }
            (worst <= 1e-11, worst)
        };

        // Multiple roots converge only linearly (the iterates form a
        // shrinking cluster around the root), so run to the step-size floor
        // or the sweep cap; 500 sweeps at n <= 20 cost microseconds.
        for _ in 0..500 {
            let mut max_step = 0.0f64;
            for k in 0..n {
                let mut den = Complex64::new(1.0, 0.0);
                for j in 0..n {
                    if j != k {
                        den *= z[k] - z[j];
                    }
                }
                if den.norm() < 1e-290 {
                    // Collided points: nudge apart and retry next sweep.
                    z[k] += Complex64::new(1e-8 * radius, 1e-8 * radius);
                    continue;
                }
                let step = p.eval(z[k]) / den;
                z[k] -= step;
                max_step = max_step.max(step.norm());
            }
            let z_scale = z.iter().map(|w| w.norm()).fold(1.0f64, f64::max);
            if max_step <= 1e-14 * z_scale {
                break;
            }
        }
        self.polish_clusters(&p, &mut z);
        let (ok, worst) = residual_ok(&z);
        if !ok {
            return Err(Error::NumericalFailure {
                context: "polynomial root iteration",
                residual: worst,
                tolerance: 1e-11,
            });
        }
        // Deterministic ordering regardless of iteration history.
        z.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        Ok(z)
    }

    /// Sharpen multiple roots. A root of multiplicity m is only resolved by
    /// the sweep above to a cluster of radius ~eps^(1/m) (about 1e-2 at
    /// m = 8), but it is a simple root of the (m-1)-th derivative, where
    /// Newton restores machine accuracy. Candidate clusters are detected at
    /// an escalating ladder of radii so that both tight pairs and wide
    /// high-multiplicity clusters are found; a merge is only kept when the
    /// polished point certifies itself with |p(w)| at rounding level, which
    /// rejects groupings of genuinely distinct roots. Distinct roots whose
    /// separation leaves |p| at rounding level across the gap are
    /// indistinguishable at double precision and may be reported as one
    /// multiple root.
    fn polish_clusters(&self, p: &Polynomial, z: &mut [Complex64]) {
        let n = p.degree();
        let coef_scale = p
            .coeffs
            .iter()
            .map(|c| c.norm())
            .fold(1.0f64, f64::max);
        let scale = 1.0 + z.iter().map(|w| w.norm()).fold(0.0f64, f64::max);
        for base in [1e-7, 1e-5, 1e-3, 3e-2] {
            let radius = base * scale;
            let clusters = cluster_roots(z, radius);
            for (mean, mult) in clusters {
                if mult < 2 {
                    continue;
                }
                let mut d = p.clone();
                for _ in 0..mult - 1 {
                    d = d.derivative();
                }
                let dd = d.derivative();
                let mut w = mean;
                let mut stuck = false;
                for _ in 0..8 {
                    let slope = dd.eval(w);
                    if slope.norm() == 0.0 || !w.re.is_finite() || !w.im.is_finite() {
                        stuck = true;
                        break;
                    }
                    let step = d.eval(w) / slope;
                    w -= step;
                    if step.norm() <= 1e-16 * (1.0 + w.norm()) {
                        break;
                    }
                }
                if stuck || !w.re.is_finite() || !w.im.is_finite() {
                    continue;
                }
                if (w - mean).norm() > 4.0 * radius {
                    continue; // polish wandered off; keep the raw cluster
                }
                let certificate = 1e-12 * coef_scale * w.norm().max(1.0).powi(n as i32);
                if p.eval(w).norm() > certificate {
                    continue; // the grouped points are not one multiple root
                }
                for zk in z.iter_mut() {
                    if (*zk - mean).norm() <= radius {
                        *zk = w;
                    }
                }
            }
        }
    }
}

/// Greedy clustering of a root multiset: roots within `tol` of a cluster
/// mean are merged into it. Returns (mean, multiplicity) pairs sorted by
/// real part then imaginary part.
pub fn cluster_roots(roots: &[Complex64], tol: f64) -> Vec<(Complex64, usize)> {
    let mut sorted = roots.to_vec();
    sorted.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let mut clusters: Vec<(Complex64, usize)> = Vec::new();
    for &z in &sorted {
        match clusters
            .iter_mut()
            .find(|(mean, _)| (z - *mean).norm() <= tol)
        {
            Some((mean, count)) => {
                let c = *count as f64;
                *mean = (*mean * c + z) / (c + 1.0);
                *count += 1;
            }
            None => clusters.push((z, 1)),
        }
    }
    clusters.sort_by(|a, b| a.0.re.total_cmp(&b.0.re).then(a.0.im.total_cmp(&b.0.im)));
    clusters
}
