//! Operator algebra of the 20-component wave equation.
//!
//! The wave function stacks a bispinor psi with a vector-bispinor psi_mu
//! into twenty components, laid out as block 0 = psi and blocks 1..4 =
//! psi_1..psi_4 (four components each). Every operator here is assembled
//! from two ingredients: a fixed Hermitian representation of the Dirac
//! matrices (Euclidean metric, x_4 = i t) and the twenty-five 5x5 matrix
//! units that address the block structure.
//!
//! The deformation parameter `a` turns the ordinary Dirac equation
//! (`a = 0`) into a two-mass-state equation; `m` sets the mass scale.

use crate::error::{Error, Result};
use crate::matrix::{c64, ComplexMatrix};

/// The six independent antisymmetric index pairs (mu, nu), mu < nu.
pub const GENERATOR_PAIRS: [(usize, usize); 6] = [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)];

/// Pauli matrix sigma_k, k in 1..=3.
pub fn pauli(k: usize) -> ComplexMatrix {
    match k {
        1 => ComplexMatrix::from_rows(&[
            vec![c64(0.0, 0.0), c64(1.0, 0.0)],
            vec![c64(1.0, 0.0), c64(0.0, 0.0)],
        ]),
        2 => ComplexMatrix::from_rows(&[
            vec![c64(0.0, 0.0), c64(0.0, -1.0)],
            vec![c64(0.0, 1.0), c64(0.0, 0.0)],
        ]),
        3 => ComplexMatrix::from_rows(&[
            vec![c64(1.0, 0.0), c64(0.0, 0.0)],
            vec![c64(0.0, 0.0), c64(-1.0, 0.0)],
        ]),
        _ => panic!("Pauli index must be 1..=3, got {k}"),
    }
}

/// The four Dirac matrices in a fixed representation where all of them are
/// Hermitian and the anticommutators are exactly 2 delta_munu I:
/// gamma_k = [[0, -i sigma_k], [i sigma_k, 0]] and gamma_4 = diag(1,1,-1,-1).
#[derive(Clone, Debug)]
pub struct GammaSet {
    g: [ComplexMatrix; 4],
}

impl GammaSet {
    pub fn build() -> Self {
        let spatial = |k: usize| {
            let s = pauli(k);
            ComplexMatrix::from_fn(4, 4, |i, j| {
                if i < 2 && j >= 2 {
                    c64(0.0, -1.0) * s[(i, j - 2)]
                } else if i >= 2 && j < 2 {
                    c64(0.0, 1.0) * s[(i - 2, j)]
                } else {
                    c64(0.0, 0.0)
                }
            })
        };
        let g4 = ComplexMatrix::diag(&[c64(1.0, 0.0), c64(1.0, 0.0), c64(-1.0, 0.0), c64(-1.0, 0.0)]);
        GammaSet {
            g: [spatial(1), spatial(2), spatial(3), g4],
        }
    }

    /// gamma_mu for mu in 1..=4.
    pub fn get(&self, mu: usize) -> &ComplexMatrix {
        assert!((1..=4).contains(&mu), "gamma index must be 1..=4, got {mu}");
        &self.g[mu - 1]
    }
}

/// 5x5 matrix unit with a single 1 at (m, n); these span the full 5x5
/// algebra and obey the product rule e(M,A) e(B,N) = delta_AB e(M,N).
pub fn matrix_unit5(m: usize, n: usize) -> ComplexMatrix {
    assert!(m < 5 && n < 5, "matrix unit index out of range: ({m}, {n})");
    let mut e = ComplexMatrix::zeros(5, 5);
    e[(m, n)] = c64(1.0, 0.0);
    e
}

/// The 4x4 block of a 20x20 operator at block row `bi`, block column `bj`
/// (block 0 is the bispinor sector, blocks 1..4 the vector-bispinor).
pub fn block4(m: &ComplexMatrix, bi: usize, bj: usize) -> ComplexMatrix {
    m.submatrix(4 * bi, 4 * bj, 4, 4)
}

/// Mass scale and deformation parameter of the equation, plus the residual
/// tolerance used by identity checks at these parameters.
#[derive(Clone, Copy, Debug)]
pub struct ModelParameters {
    m: f64,
    a: f64,
    tol: f64,
}

impl ModelParameters {
    /// Requires m > 0 and a >= -1/4; below -1/4 the two masses become
    /// complex and the model is rejected.
    pub fn new(m: f64, a: f64) -> Result<Self> {
        if !m.is_finite() || m <= 0.0 {
            return Err(Error::InvalidParameter(format!("mass must be positive, got {m}")));
        }
        if !a.is_finite() {
            return Err(Error::InvalidParameter(format!("parameter a must be finite, got {a}")));
        }
        if a < -0.25 {
            return Err(Error::ComplexMass { a });
        }
        Ok(ModelParameters { m, a, tol: crate::matrix::DEFAULT_TOL })
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        assert!(tol > 0.0, "tolerance must be positive");
        self.tol = tol;
        self
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// True at the boundary a = -1/4, where the two masses collide.
    pub fn degenerate(&self) -> bool {
        (self.a + 0.25).abs() <= 1e-12
    }

    /// True away from a = 0; at a = 0 the equation collapses to the Dirac
    /// equation with a single mass.
    pub fn two_mass(&self) -> bool {
        self.a != 0.0
    }
}

/// The four 20x20 wave matrices
/// alpha_nu = (e(nu,0) + a e(0,nu)) (x) I_4 + e(0,0) (x) gamma_nu.
pub fn build_alpha(params: &ModelParameters) -> [ComplexMatrix; 4] {
    let gamma = GammaSet::build();
    let i4 = ComplexMatrix::identity(4);
    let a = c64(params.a(), 0.0);
    let make = |nu: usize| {
        let blocks = &(&matrix_unit5(nu, 0) + &matrix_unit5(0, nu).scale(a)).kron(&i4)
            + &matrix_unit5(0, 0).kron(gamma.get(nu));
        blocks
    };
    [make(1), make(2), make(3), make(4)]
}

/// The hermitianizing matrix
/// eta = (a e(m,m) - a e(4,4) - e(0,0)) (x) gamma_4 (sum over m = 1..3).
/// It is Hermitian, anticommutes with the spatial alphas in the twisted
/// sense eta alpha_k = -alpha_k^+ eta, and satisfies eta alpha_4 =
/// alpha_4^+ eta.
pub fn build_eta(params: &ModelParameters) -> ComplexMatrix {
    let gamma = GammaSet::build();
    let a = params.a();
    let signs = [-1.0, a, a, a, -a];
    let mut weight = ComplexMatrix::zeros(5, 5);
    for (m, s) in signs.iter().enumerate() {
        weight[(m, m)] = c64(*s, 0.0);
    }
    weight.kron(gamma.get(4))
}

/// The six independent Lorentz generators
/// J_munu = (e(mu,nu) - e(nu,mu)) (x) I_4 + I_5 (x) (1/4)[gamma_mu, gamma_nu]
/// in the order of [`GENERATOR_PAIRS`].
pub fn lorentz_generators() -> [ComplexMatrix; 6] {
    let gamma = GammaSet::build();
    let i4 = ComplexMatrix::identity(4);
    let i5 = ComplexMatrix::identity(5);
    let make = |mu: usize, nu: usize| {
        let orbital = (&matrix_unit5(mu, nu) - &matrix_unit5(nu, mu)).kron(&i4);
        let spin = i5.kron(&gamma.get(mu).commutator(gamma.get(nu)).scale(c64(0.25, 0.0)));
        &orbital + &spin
    };
    let mut out: Vec<ComplexMatrix> = Vec::with_capacity(6);
    for (mu, nu) in GENERATOR_PAIRS {
        out.push(make(mu, nu));
    }
    out.try_into().unwrap_or_else(|_| unreachable!())
}

/// Projectors onto the scalar-bispinor block (P0) and the vector-bispinor
/// blocks (P1 = sum over mu of e(mu,mu) (x) I_4); P0 + P1 = I exactly.
pub fn subspace_projectors() -> (ComplexMatrix, ComplexMatrix) {
    let i4 = ComplexMatrix::identity(4);
    let p0 = matrix_unit5(0, 0).kron(&i4);
    let mut sum = ComplexMatrix::zeros(5, 5);
    for mu in 1..=4 {
        sum[(mu, mu)] = c64(1.0, 0.0);
    }
    (p0, sum.kron(&i4))
}

/// Closed-form expansion of the commutator [alpha_mu, alpha_nu] in matrix
/// units, derived from the product rule:
/// a (e(mu,nu) - e(nu,mu)) (x) I + e(mu,0) (x) g_nu - e(nu,0) (x) g_mu
/// + a (e(0,nu) (x) g_mu - e(0,mu) (x) g_nu) + e(0,0) (x) [g_mu, g_nu].
pub fn alpha_comm_expansion(params: &ModelParameters, mu: usize, nu: usize) -> ComplexMatrix {
    let gamma = GammaSet::build();
    let i4 = ComplexMatrix::identity(4);
    let a = c64(params.a(), 0.0);
    let t1 = (&matrix_unit5(mu, nu) - &matrix_unit5(nu, mu)).scale(a).kron(&i4);
    let t2 = &matrix_unit5(mu, 0).kron(gamma.get(nu)) - &matrix_unit5(nu, 0).kron(gamma.get(mu));
    let t3 = (&matrix_unit5(0, nu).kron(gamma.get(mu)) - &matrix_unit5(0, mu).kron(gamma.get(nu)))
        .scale(a);
    let t4 = matrix_unit5(0, 0).kron(&gamma.get(mu).commutator(gamma.get(nu)));
    &(&(&t1 + &t2) + &t3) + &t4
}

/// Structural report on alpha_4: the quartic
/// x^4 - (1+2a) x^2 + a^2 fails on the full space (alpha_4 has a
/// 12-dimensional kernel and the quartic has a nonzero constant term) but
/// holds on the dynamical subspace; multiplying once more by alpha_4 gives
/// a quintic valid everywhere.
#[derive(Clone, Copy, Debug)]
pub struct AlphaStructure {
    /// ||q(alpha_4)|| on the full space; equals a^2 sqrt(12) exactly.
    pub full_quartic_residual: f64,
    /// Predicted value of the full-space residual, a^2 sqrt(12).
    pub predicted_full_quartic: f64,
    /// ||alpha_4 q(alpha_4)||, small.
    pub quintic_residual: f64,
    /// ||q(M)|| for M the restriction to the dynamical subspace, small.
    pub restricted_quartic_residual: f64,
    /// dim ker alpha_4 = 20 - rank, exactly 12.
    pub kernel_dim: usize,
    /// Residuals of (A B A - A, B A B - B, [A, B]) for the group inverse B.
    pub drazin_residuals: [f64; 3],
}

/// The full operator set at fixed parameters. Everything is constructed
/// once and verified against its defining identities; construction fails
/// loudly if any identity breaks, which only happens for non-finite input.
pub struct FogdeOperators {
    params: ModelParameters,
    gamma: GammaSet,
    alpha: [ComplexMatrix; 4],
    eta: ComplexMatrix,
    generators: [ComplexMatrix; 6],
    alpha_comm: Vec<ComplexMatrix>,
    p0: ComplexMatrix,
    p1: ComplexMatrix,
    group_inverse: Option<ComplexMatrix>,
    dynamical_projector: Option<ComplexMatrix>,
}

impl FogdeOperators {
    pub fn new(params: ModelParameters) -> Result<Self> {
        let gamma = GammaSet::build();
        let alpha = build_alpha(&params);
        let eta = build_eta(&params);
        let generators = lorentz_generators();
        let (p0, p1) = subspace_projectors();

        let mut alpha_comm = Vec::with_capacity(16);
        for mu in 1..=4usize {
            for nu in 1..=4usize {
                alpha_comm.push(alpha[mu - 1].commutator(&alpha[nu - 1]));
            }
        }

        let (group_inverse, dynamical_projector) = if params.a() != 0.0 {
            let a2 = params.a() * params.a();
            let a4 = &alpha[3];
            let a4cube = &(a4 * a4) * a4;
            let b = &a4.scale(c64((2.0 * params.a() + 1.0) / a2, 0.0))
                - &a4cube.scale(c64(1.0 / a2, 0.0));
            let p_dyn = a4 * &b;
            (Some(b), Some(p_dyn))
        } else {
            (None, None)
        };

        let ops = FogdeOperators {
            params,
            gamma,
            alpha,
            eta,
            generators,
            alpha_comm,
            p0,
            p1,
            group_inverse,
            dynamical_projector,
        };
        ops.verify_construction()?;
        Ok(ops)
    }

    /// Defining identities, checked once at construction: Clifford
    /// relations, the eta twist relations, projector algebra, and (for
    /// a != 0) the group-inverse identities.
    fn verify_construction(&self) -> Result<()> {
        let fail = |context: &'static str, residual: f64| Error::ContractViolation { context, residual };
        let tol = 1e-12;
        for mu in 1..=4usize {
            for nu in 1..=4usize {
                let want = if mu == nu { 2.0 } else { 0.0 };
                let anti = self.gamma.get(mu).anticommutator(self.gamma.get(nu));
                let r = anti.distance(&ComplexMatrix::identity(4).scale(c64(want, 0.0)));
                if r > tol {
                    return Err(fail("Clifford relation", r));
                }
            }
        }
        let scale = 1.0 + self.params.a().abs();
        for k in 1..=3usize {
            let r = (&(&self.eta * self.alpha(k)) + &(&self.alpha(k).adjoint() * &self.eta))
                .frobenius_norm();
            if r > tol * scale {
                return Err(fail("eta twist relation (spatial)", r));
            }
        }
        let r4 = (&(&self.eta * self.alpha(4)) - &(&self.alpha(4).adjoint() * &self.eta))
            .frobenius_norm();
        if r4 > tol * scale {
            return Err(fail("eta twist relation (time)", r4));
        }
        let psum = (&self.p0 + &self.p1).identity_residual();
        if psum > tol {
            return Err(fail("projector completeness", psum));
        }
        if let (Some(b), Some(p)) = (&self.group_inverse, &self.dynamical_projector) {
            let a4 = self.alpha(4);
            let scale = a4.max_abs().max(1.0).powi(3);
            let checks = [
                (&(&(a4 * b) * a4) - a4).frobenius_norm(),
                (&(&(b * a4) * b) - b).frobenius_norm(),
                a4.commutator(b).frobenius_norm(),
                (&(p * p) - p).frobenius_norm(),
            ];
            for r in checks {
                if r > tol * scale {
                    return Err(fail("group inverse identity", r));
                }
            }
        }
        Ok(())
    }

    pub fn params(&self) -> &ModelParameters {
        &self.params
    }

    pub fn gamma(&self) -> &GammaSet {
        &self.gamma
    }

    /// alpha_mu for mu in 1..=4.
    pub fn alpha(&self, mu: usize) -> &ComplexMatrix {
        assert!((1..=4).contains(&mu), "alpha index must be 1..=4, got {mu}");
        &self.alpha[mu - 1]
    }

    pub fn eta(&self) -> &ComplexMatrix {
        &self.eta
    }

    /// J_munu for any mu, nu in 1..=4 (antisymmetric in the indices; zero
    /// matrix when mu = nu).
    pub fn generator(&self, mu: usize, nu: usize) -> ComplexMatrix {
        assert!((1..=4).contains(&mu) && (1..=4).contains(&nu), "generator index out of range");
        if mu == nu {
            return ComplexMatrix::zeros(20, 20);
        }
        for (k, &(pm, pn)) in GENERATOR_PAIRS.iter().enumerate() {
            if (pm, pn) == (mu, nu) {
                return self.generators[k].clone();
            }
            if (pm, pn) == (nu, mu) {
                return -&self.generators[k];
            }
        }
        unreachable!()
    }

    /// The six stored generators in [`GENERATOR_PAIRS`] order.
    pub fn generators(&self) -> &[ComplexMatrix; 6] {
        &self.generators
    }

    /// The commutator [alpha_mu, alpha_nu].
    pub fn alpha_comm(&self, mu: usize, nu: usize) -> &ComplexMatrix {
        assert!((1..=4).contains(&mu) && (1..=4).contains(&nu), "alpha_comm index out of range");
        &self.alpha_comm[4 * (mu - 1) + (nu - 1)]
    }

    /// Projector onto the scalar-bispinor block.
    pub fn scalar_projector(&self) -> &ComplexMatrix {
        &self.p0
    }

    /// Projector onto the vector-bispinor blocks.
    pub fn vector_projector(&self) -> &ComplexMatrix {
        &self.p1
    }

    /// Group (Drazin) inverse B of alpha_4: the unique B with
    /// alpha_4 B alpha_4 = alpha_4, B alpha_4 B = B, [alpha_4, B] = 0.
    /// It is not a two-sided inverse; alpha_4 B is the projector onto the
    /// 8-dimensional dynamical subspace. Undefined at a = 0.
    pub fn group_inverse(&self) -> Result<&ComplexMatrix> {
        self.group_inverse.as_ref().ok_or_else(|| {
            Error::DegenerateParameter("group inverse of alpha_4 needs a != 0".into())
        })
    }

    /// Projector alpha_4 B onto the dynamical subspace (blocks 0 and 4).
    pub fn dynamical_projector(&self) -> Result<&ComplexMatrix> {
        self.dynamical_projector.as_ref().ok_or_else(|| {
            Error::DegenerateParameter("dynamical projector needs a != 0".into())
        })
    }

    /// Quartic/quintic residuals, kernel dimension, and group-inverse
    /// residuals for alpha_4. Needs a != 0.
    pub fn alpha4_structure(&self) -> Result<AlphaStructure> {
        let a = self.params.a();
        if a == 0.0 {
            return Err(Error::DegenerateParameter(
                "alpha_4 structure report needs a != 0".into(),
            ));
        }
        let a4 = self.alpha(4);
        let b = self.group_inverse()?;
        let p_dyn = self.dynamical_projector()?;
        let quartic = crate::matrix::Polynomial::new(vec![
            c64(a * a, 0.0),
            c64(0.0, 0.0),
            c64(-(1.0 + 2.0 * a), 0.0),
            c64(0.0, 0.0),
            c64(1.0, 0.0),
        ]);
        let q_full = quartic.eval_matrix(a4);
        let quintic_residual = (&q_full * a4).frobenius_norm();
        let restricted = a4.restrict(p_dyn, self.params.tol())?;
        let restricted_quartic_residual = quartic.eval_matrix(&restricted).frobenius_norm();
        let drazin_residuals = [
            (&(&(a4 * b) * a4) - a4).frobenius_norm(),
            (&(&(b * a4) * b) - b).frobenius_norm(),
            a4.commutator(b).frobenius_norm(),
        ];
        Ok(AlphaStructure {
            full_quartic_residual: q_full.frobenius_norm(),
            predicted_full_quartic: a * a * 12f64.sqrt(),
            quintic_residual,
            restricted_quartic_residual,
            kernel_dim: a4.kernel_dimension(),
            drazin_residuals,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{cluster_roots, eigenvalues};

    fn params(m: f64, a: f64) -> ModelParameters {
        ModelParameters::new(m, a).unwrap()
    }

    #[test]
    fn clifford_relations_exact() {
        let g = GammaSet::build();
        for mu in 1..=4usize {
            for nu in 1..=4usize {
                let want = if mu == nu { 2.0 } else { 0.0 };
                let anti = g.get(mu).anticommutator(g.get(nu));
                let target = ComplexMatrix::identity(4).scale(c64(want, 0.0));
                assert!(anti.distance(&target) == 0.0, "({mu},{nu}) inexact");
            }
        }
    }

    #[test]
    fn gamma_hermitian_and_involutive() {
        let g = GammaSet::build();
        for mu in 1..=4usize {
            assert_eq!(g.get(mu).hermiticity_residual(), 0.0);
            assert!((g.get(mu).det() - c64(1.0, 0.0)).norm() < 1e-13);
        }
        assert!(g.get(4).inverse().unwrap().distance(g.get(4)) < 1e-14);
    }

    #[test]
    fn matrix_unit_product_rule_exhaustive() {
        for m in 0..5 {
            for a in 0..5 {
                for b in 0..5 {
                    for n in 0..5 {
                        let prod = &matrix_unit5(m, a) * &matrix_unit5(b, n);
                        let want = if a == b {
                            matrix_unit5(m, n)
                        } else {
                            ComplexMatrix::zeros(5, 5)
                        };
                        assert!(prod.distance(&want) == 0.0, "({m},{a})({b},{n})");
                    }
                }
            }
        }
    }

    #[test]
    fn kron_of_unit_and_gamma4() {
        let g = GammaSet::build();
        let k = matrix_unit5(0, 0).kron(g.get(4));
        assert_eq!(k.nonzero_count(1e-14), 4);
        for i in 0..4 {
            let want = if i < 2 { 1.0 } else { -1.0 };
            assert_eq!(k[(i, i)], c64(want, 0.0));
        }
    }

    #[test]
    fn alpha_nonzero_counts_match_factor_counts() {
        // Blocks from the three Kronecker summands are disjoint, so the
        // count is the sum of the factor counts.
        let p = params(1.0, 2.0);
        let alpha = build_alpha(&p);
        let g = GammaSet::build();
        for mu in 1..=4usize {
            let expect = 4 + 4 + g.get(mu).nonzero_count(1e-14);
            assert_eq!(alpha[mu - 1].nonzero_count(1e-14), expect, "alpha_{mu}");
        }
        assert_eq!(alpha[3].nonzero_count(1e-14), 12);
        assert_eq!(alpha[0].nonzero_count(1e-14), 12);
    }

    #[test]
    fn alpha_dirac_limit_block() {
        let p = params(1.0, 0.0);
        let alpha = build_alpha(&p);
        let g = GammaSet::build();
        for mu in 1..=4usize {
            assert!(block4(&alpha[mu - 1], 0, 0).distance(g.get(mu)) == 0.0);
        }
    }

    #[test]
    fn alpha_approaches_dirac_embedding_linearly() {
        let g = GammaSet::build();
        let i4 = ComplexMatrix::identity(4);
        for &a in &[0.5, 0.01, 1e-4] {
            let alpha = build_alpha(&params(1.0, a));
            for mu in 1..=4usize {
                let dirac = &matrix_unit5(mu, 0).kron(&i4) + &matrix_unit5(0, 0).kron(g.get(mu));
                // Distance is |a| times the norm of e(0,mu) (x) I_4 = 2|a|.
                let d = alpha[mu - 1].distance(&dirac);
                assert!((d - 2.0 * a).abs() < 1e-13, "mu={mu} a={a} d={d}");
            }
        }
    }

    #[test]
    fn eta_block_pattern_at_unit_a() {
        let eta = build_eta(&params(1.0, 1.0));
        let g4 = GammaSet::build().get(4).clone();
        let signs = [-1.0, 1.0, 1.0, 1.0, -1.0];
        for (b, s) in signs.iter().enumerate() {
            assert!(block4(&eta, b, b).distance(&g4.scale(c64(*s, 0.0))) == 0.0);
        }
        assert_eq!(eta.hermiticity_residual(), 0.0);
    }

    #[test]
    fn eta_twist_relations() {
        let p = params(1.0, 2.0);
        let eta = build_eta(&p);
        let alpha = build_alpha(&p);
        for k in 0..3 {
            let r = (&(&eta * &alpha[k]) + &(&alpha[k].adjoint() * &eta)).frobenius_norm();
            assert!(r == 0.0, "spatial twist k={} residual {}", k + 1, r);
        }
        let r4 = (&(&eta * &alpha[3]) - &(&alpha[3].adjoint() * &eta)).frobenius_norm();
        assert!(r4 == 0.0, "time twist residual {r4}");
    }

    #[test]
    fn generator_restriction_to_bispinor_block() {
        let ops = FogdeOperators::new(params(1.0, 2.0)).unwrap();
        let j12 = ops.generator(1, 2);
        let eig = eigenvalues(&block4(&j12, 0, 0)).unwrap();
        let clusters = cluster_roots(&eig, 1e-8);
        assert_eq!(clusters.len(), 2);
        for (mean, count) in clusters {
            assert_eq!(count, 2);
            assert!((mean.norm() - 0.5).abs() < 1e-10);
            assert!(mean.re.abs() < 1e-10, "eigenvalues should be +-i/2");
        }
    }

    #[test]
    fn form_invariance_sample() {
        let ops = FogdeOperators::new(params(1.0, 2.0)).unwrap();
        let lhs = ops.alpha(1).commutator(&ops.generator(1, 2));
        assert!(lhs.distance(ops.alpha(2)) < 1e-13);
    }

    #[test]
    fn commutator_closed_form_matches_literal() {
        for &a in &[2.0, -0.1, 0.75] {
            let p = params(1.0, a);
            let ops = FogdeOperators::new(p).unwrap();
            for mu in 1..=4usize {
                for nu in 1..=4usize {
                    let closed = alpha_comm_expansion(&p, mu, nu);
                    let d = ops.alpha_comm(mu, nu).distance(&closed);
                    assert!(d < 1e-13, "a={a} ({mu},{nu}) d={d}");
                }
            }
        }
    }

    #[test]
    fn alpha_comm_antisymmetry() {
        let ops = FogdeOperators::new(params(1.0, 2.0)).unwrap();
        for mu in 1..=4usize {
            assert_eq!(ops.alpha_comm(mu, mu).frobenius_norm(), 0.0);
            for nu in 1..=4usize {
                let d = (ops.alpha_comm(mu, nu) + ops.alpha_comm(nu, mu)).frobenius_norm();
                assert_eq!(d, 0.0);
            }
        }
    }

    #[test]
    fn projector_traces_and_orthogonality() {
        let (p0, p1) = subspace_projectors();
        assert_eq!(p0.trace(), c64(4.0, 0.0));
        assert_eq!(p1.trace(), c64(16.0, 0.0));
        assert_eq!((&p0 * &p1).frobenius_norm(), 0.0);
        assert_eq!((&p0 + &p1).identity_residual(), 0.0);
    }

    #[test]
    fn dynamical_projector_shape() {
        let ops = FogdeOperators::new(params(1.0, 2.0)).unwrap();
        let p = ops.dynamical_projector().unwrap();
        assert!((p.trace() - c64(8.0, 0.0)).norm() < 1e-12);
        // Exactly diag(I_4, 0, 0, 0, I_4).
        let mut want = ComplexMatrix::zeros(20, 20);
        for i in 0..4 {
            want[(i, i)] = c64(1.0, 0.0);
            want[(16 + i, 16 + i)] = c64(1.0, 0.0);
        }
        assert!(p.distance(&want) < 1e-12);
    }

    #[test]
    fn group_inverse_is_not_two_sided() {
        let ops = FogdeOperators::new(params(1.0, 2.0)).unwrap();
        let b = ops.group_inverse().unwrap();
        let prod = ops.alpha(4) * b;
        assert!(prod.identity_residual() > 1.0, "alpha_4 B must differ from I");
    }

    #[test]
    fn group_inverse_requires_two_mass_regime() {
        let ops = FogdeOperators::new(params(1.0, 0.0)).unwrap();
        assert!(matches!(ops.group_inverse(), Err(Error::DegenerateParameter(_))));
    }

    #[test]
    fn alpha4_structure_report() {
        let ops = FogdeOperators::new(params(1.0, 2.0)).unwrap();
        let s = ops.alpha4_structure().unwrap();
        assert_eq!(s.kernel_dim, 12);
        assert!(s.quintic_residual < 1e-12, "quintic {}", s.quintic_residual);
        assert!(
            s.restricted_quartic_residual < 1e-12,
            "restricted {}",
            s.restricted_quartic_residual
        );
        let predicted = 4.0 * 12f64.sqrt();
        assert!((s.full_quartic_residual - predicted).abs() < 1e-10 * predicted);
        for r in s.drazin_residuals {
            assert!(r < 1e-12);
        }
    }

    #[test]
    fn restricted_alpha4_spectrum() {
        let ops = FogdeOperators::new(params(1.0, 2.0)).unwrap();
        let restricted = ops
            .alpha(4)
            .restrict(ops.dynamical_projector().unwrap(), 1e-10)
            .unwrap();
        assert_eq!(restricted.rows(), 8);
        let eig = eigenvalues(&restricted).unwrap();
        let clusters = cluster_roots(&eig, 1e-6);
        let mut means: Vec<f64> = clusters.iter().map(|(m, _)| m.re).collect();
        means.sort_by(f64::total_cmp);
        let want = [-2.0, -1.0, 1.0, 2.0];
        assert_eq!(clusters.len(), 4);
        for ((mean, (_, count)), w) in means.iter().zip(&clusters).zip(want) {
            assert!((mean - w).abs() < 1e-9, "mean {mean} want {w}");
            let _ = count;
        }
        assert!(clusters.iter().all(|(_, c)| *c == 2));
    }

    #[test]
    fn parameters_reject_complex_mass_regime() {
        assert!(matches!(ModelParameters::new(1.0, -0.5), Err(Error::ComplexMass { .. })));
        assert!(ModelParameters::new(1.0, -0.25).unwrap().degenerate());
        assert!(!ModelParameters::new(1.0, 2.0).unwrap().degenerate());
    }
}
