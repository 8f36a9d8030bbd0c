//! Mass spectrum, dispersion, projection operators, plane-wave states, and
//! the reduced free Hamiltonian.
//!
//! Momentum-space conventions follow the Euclidean-metric setup of
//! [`crate::algebra`]: the fourth momentum component is p_4 = i p0, so the
//! invariant is p_mu p_mu = |p_vec|^2 - p0^2, and a plane wave carries the
//! phase e^{i(p.x - p0 t)}.

use crate::algebra::{
    lorentz_generators, FogdeOperators, GammaSet, ModelParameters, GENERATOR_PAIRS,
};
use crate::error::{Error, Result};
use crate::matrix::{c64, vec_norm, Complex64, ComplexMatrix, Polynomial};

/// Which of the two mass states an operation refers to. State one carries
/// the lighter |mass|, state two the heavier.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    One,
    Two,
}

impl Branch {
    pub fn index(self) -> usize {
        match self {
            Branch::One => 1,
            Branch::Two => 2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnergySign {
    Positive,
    Negative,
}

/// Spin projection along the momentum direction, +1/2 or -1/2.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpinProjection {
    Up,
    Down,
}

impl SpinProjection {
    pub fn value(self) -> f64 {
        match self {
            SpinProjection::Up => 0.5,
            SpinProjection::Down => -0.5,
        }
    }
}

/// Four-momentum with real spatial components and real energy p0; the
/// stored fourth component is p_4 = i p0.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FourMomentum {
    pub p_vec: [f64; 3],
    pub p0: f64,
}

impl FourMomentum {
    pub fn new(p_vec: [f64; 3], p0: f64) -> Self {
        assert!(
            p_vec.iter().all(|c| c.is_finite()) && p0.is_finite(),
            "four-momentum components must be finite"
        );
        FourMomentum { p_vec, p0 }
    }

    pub fn rest(p0: f64) -> Self {
        FourMomentum::new([0.0; 3], p0)
    }

    /// Complex component p_mu for mu in 1..=4; p_4 = i p0.
    pub fn component(&self, mu: usize) -> Complex64 {
        match mu {
            1..=3 => c64(self.p_vec[mu - 1], 0.0),
            4 => c64(0.0, self.p0),
            _ => panic!("momentum index must be 1..=4, got {mu}"),
        }
    }

    /// The invariant p_mu p_mu = |p_vec|^2 - p0^2.
    pub fn squared(&self) -> f64 {
        self.spatial_norm_sqr() - self.p0 * self.p0
    }

    pub fn spatial_norm_sqr(&self) -> f64 {
        self.p_vec.iter().map(|c| c * c).sum()
    }

    pub fn spatial_norm(&self) -> f64 {
        self.spatial_norm_sqr().sqrt()
    }

    /// All four components negated (the negative-energy replacement).
    pub fn negated(&self) -> Self {
        FourMomentum {
            p_vec: [-self.p_vec[0], -self.p_vec[1], -self.p_vec[2]],
            p0: -self.p0,
        }
    }

    /// True when p^2 = -m_branch^2 within 1e-8 (relative to the mass scale).
    pub fn on_shell(&self, branch: Branch, params: &ModelParameters) -> Result<bool> {
        let spectrum = mass_spectrum(params)?;
        let mb = spectrum.mass(branch);
        let gap = (self.squared() + mb * mb).abs();
        Ok(gap <= 1e-8 * (1.0 + self.squared().abs() + mb * mb))
    }
}

/// The two mass eigenvalues and the matching eigenvalues of the restricted
/// alpha_4. The pairs are tied by m_i = -m / lambda_i, and the masses obey
/// the sum rule m1 + m2 = -m/a.
#[derive(Clone, Copy, Debug)]
pub struct MassSpectrum {
    pub m1: f64,
    pub m2: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    pub degenerate: bool,
}

impl MassSpectrum {
    pub fn mass(&self, branch: Branch) -> f64 {
        match branch {
            Branch::One => self.m1,
            Branch::Two => self.m2,
        }
    }

    pub fn lambda(&self, branch: Branch) -> f64 {
        match branch {
            Branch::One => self.lambda1,
            Branch::Two => self.lambda2,
        }
    }

    /// The signed multiset {+-m1, +-m2} realized by m / lambda over the
    /// eigenvalues {+-lambda1, +-lambda2}.
    pub fn signed_masses(&self) -> [f64; 4] {
        [self.m1, -self.m1, self.m2, -self.m2]
    }
}

/// Translate the original three-parameter form (alpha1, alpha2, kappa) of
/// the equation into (m, a): m = kappa/alpha1, a = -m alpha2/alpha1.
/// A parameter point below a = -1/4 is reported as a complex-mass error.
pub fn params_from_barut(alpha1: f64, alpha2: f64, kappa: f64) -> Result<ModelParameters> {
    if alpha1 == 0.0 || !alpha1.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "alpha1 must be finite and nonzero, got {alpha1}"
        )));
    }
    if !alpha2.is_finite() || !kappa.is_finite() {
        return Err(Error::InvalidParameter(
            "alpha2 and kappa must be finite".into(),
        ));
    }
    let m = kappa / alpha1;
    let a = -m * alpha2 / alpha1;
    ModelParameters::new(m, a)
}

/// The two masses m_{1,2} = -m (1 -+ sqrt(4a+1)) / (2a) and the matching
/// alpha_4 eigenvalues lambda_{1,2} = (-1 -+ sqrt(4a+1)) / 2.
pub fn mass_spectrum(params: &ModelParameters) -> Result<MassSpectrum> {
    let (m, a) = (params.m(), params.a());
    if a == 0.0 {
        return Err(Error::DiracLimit { mass: m });
    }
    let disc = 4.0 * a + 1.0;
    if disc < 0.0 {
        return Err(Error::ComplexMass { a });
    }
    let s = disc.max(0.0).sqrt();
    let m1 = -m * (1.0 - s) / (2.0 * a);
    let m2 = -m * (1.0 + s) / (2.0 * a);
    let lambda1 = (-1.0 - s) / 2.0;
    let lambda2 = (-1.0 + s) / 2.0;
    Ok(MassSpectrum {
        m1,
        m2,
        lambda1,
        lambda2,
        degenerate: params.degenerate(),
    })
}

/// Invert the mass-ratio relation: find a < 0 with |m2|/|m1| = R. With
/// s = (R-1)/(R+1) the answer is a = (s^2-1)/4, always in [-1/4, 0).
pub fn solve_a_for_ratio(r: f64) -> Result<f64> {
    if !r.is_finite() || r < 1.0 {
        return Err(Error::InvalidParameter(format!(
            "mass ratio must be >= 1, got {r}"
        )));
    }
    let s = (r - 1.0) / (r + 1.0);
    Ok((s * s - 1.0) / 4.0)
}

/// |a^2 p^4 + (2a+1) m^2 p^2 + m^4| / m^4 with p^2 = |p_vec|^2 - p0^2;
/// zero exactly when p0^2 = |p_vec|^2 + m_i^2 for one of the two masses.
pub fn mass_shell_residual(p: &FourMomentum, params: &ModelParameters) -> f64 {
    let (m, a) = (params.m(), params.a());
    let p2 = p.squared();
    let m2 = m * m;
    (a * a * p2 * p2 + (2.0 * a + 1.0) * m2 * p2 + m2 * m2).abs() / (m2 * m2)
}

/// Positive energy E = sqrt(|p_vec|^2 + m_branch^2).
pub fn dispersion(p_vec: [f64; 3], branch: Branch, params: &ModelParameters) -> Result<f64> {
    let spectrum = mass_spectrum(params)?;
    let mb = spectrum.mass(branch);
    let p2: f64 = p_vec.iter().map(|c| c * c).sum();
    Ok((p2 + mb * mb).sqrt())
}

/// gamma_mu p_mu as a 4x4 matrix.
pub fn slash(gamma: &GammaSet, p: &FourMomentum) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(4, 4);
    for mu in 1..=4 {
        out = &out + &gamma.get(mu).scale(p.component(mu));
    }
    out
}

/// The 20x20 momentum-space wave operator i alpha_mu p_mu + m.
pub fn wave_operator(ops: &FogdeOperators, p: &FourMomentum) -> ComplexMatrix {
    let mut out = ComplexMatrix::identity(20).scale(c64(ops.params().m(), 0.0));
    for mu in 1..=4 {
        out = &out + &ops.alpha(mu).scale(c64(0.0, 1.0) * p.component(mu));
    }
    out
}

/// The bispinor-level second-order operator i p-slash + (a/m) p^2 + m whose
/// kernel at on-shell momentum is the range of the positive projector.
pub fn bispinor_operator(p: &FourMomentum, params: &ModelParameters) -> ComplexMatrix {
    let gamma = GammaSet::build();
    let scalar = params.a() / params.m() * p.squared() + params.m();
    &slash(&gamma, p).scale(c64(0.0, 1.0)) + &ComplexMatrix::identity(4).scale(c64(scalar, 0.0))
}

/// Energy projector Lambda_+- = (a p^2 + m^2 -+ i m p-slash) / (2(a p^2 + m^2))
/// at an on-shell momentum. Idempotent with trace 2; annihilated on the
/// left by (+-i p-slash + a p^2/m + m).
pub fn energy_projector(
    p: &FourMomentum,
    sign: EnergySign,
    params: &ModelParameters,
) -> Result<ComplexMatrix> {
    let residual = mass_shell_residual(p, params);
    if residual > 1e-8 {
        return Err(Error::OffShell { residual });
    }
    let (m, a) = (params.m(), params.a());
    let denom = a * p.squared() + m * m;
    if denom.abs() <= 1e-10 * (m * m + a.abs() * p.squared().abs()) {
        return Err(Error::SingularDenominator { value: denom.abs() });
    }
    let gamma = GammaSet::build();
    let s = match sign {
        EnergySign::Positive => -1.0,
        EnergySign::Negative => 1.0,
    };
    let numer = &ComplexMatrix::identity(4).scale(c64(denom, 0.0))
        + &slash(&gamma, p).scale(c64(0.0, s * m));
    Ok(numer.scale(c64(1.0 / (2.0 * denom), 0.0)))
}

/// Spin projection operator along p_vec:
/// sigma_p = -(i/|p|) (p1 J_23 + p2 J_31 + p3 J_12). Hermitian, commutes
/// with the wave operator at any four-momentum sharing this p_vec, and has
/// eigenvalues {+-1/2 (x8 each), +-3/2 (x2 each)}.
pub fn spin_operator(p_vec: [f64; 3]) -> Result<ComplexMatrix> {
    let norm: f64 = p_vec.iter().map(|c| c * c).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(Error::InvalidParameter(
            "spin axis undefined at zero momentum".into(),
        ));
    }
    let gens = lorentz_generators();
    let find = |mu: usize, nu: usize| {
        GENERATOR_PAIRS
            .iter()
            .position(|&pair| pair == (mu, nu))
            .expect("stored pair")
    };
    let j23 = &gens[find(2, 3)];
    let j13 = &gens[find(1, 3)];
    let j12 = &gens[find(1, 2)];
    let combo = &(&j23.scale(c64(p_vec[0], 0.0)) - &j13.scale(c64(p_vec[1], 0.0)))
        + &j12.scale(c64(p_vec[2], 0.0));
    Ok(combo.scale(c64(0.0, -1.0 / norm)))
}

/// Projectors onto the spin +-1/2 sectors:
/// P_{+-1/2} = -+ (1/2) (sigma_p +- 1/2)(sigma_p^2 - 9/4). Each has trace 8;
/// together they annihilate the spin +-3/2 sector.
pub fn spin_projectors(p_vec: [f64; 3]) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let sp = spin_operator(p_vec)?;
    let i20 = ComplexMatrix::identity(20);
    let shifted = &(&sp * &sp) - &i20.scale(c64(2.25, 0.0));
    let plus = (&(&sp + &i20.scale(c64(0.5, 0.0))) * &shifted).scale(c64(-0.5, 0.0));
    let minus = (&(&sp - &i20.scale(c64(0.5, 0.0))) * &shifted).scale(c64(0.5, 0.0));
    Ok((plus, minus))
}

/// A single plane-wave solution of the 20-component equation. The stored
/// momentum is the one the wave operator is evaluated at; for negative
/// energy it is the fully negated on-shell momentum.
#[derive(Clone, Debug)]
pub struct PlaneWaveState {
    pub momentum: FourMomentum,
    pub branch: Branch,
    pub energy_sign: EnergySign,
    pub spin: SpinProjection,
    pub amplitude: Vec<Complex64>,
}

impl PlaneWaveState {
    /// The bispinor block psi (components 0..4).
    pub fn bispinor(&self) -> &[Complex64] {
        &self.amplitude[0..4]
    }

    /// The vector-bispinor block psi_mu for mu in 1..=4.
    pub fn vector_block(&self, mu: usize) -> &[Complex64] {
        assert!((1..=4).contains(&mu), "block index must be 1..=4");
        &self.amplitude[4 * mu..4 * mu + 4]
    }

    /// Residual of the lift rule psi_mu = -(i p_mu / m) psi over all four
    /// vector blocks.
    pub fn lift_residual(&self, params: &ModelParameters) -> f64 {
        let mut sum = 0.0;
        for mu in 1..=4usize {
            let factor = c64(0.0, -1.0) * self.momentum.component(mu) / params.m();
            for i in 0..4 {
                sum += (self.amplitude[4 * mu + i] - factor * self.amplitude[i]).norm_sqr();
            }
        }
        sum.sqrt()
    }
}

const SEED_ZERO_TOL: f64 = 1e-8;

/// Build a plane-wave state: put the requested branch on shell, negate the
/// whole four-momentum for a negative-energy state, project a canonical
/// bispinor seed with the energy projector, lift to twenty components,
/// apply the spin projector along the stored momentum (z axis when the
/// momentum vanishes), and normalize the bispinor block to unit norm. The
/// overall phase is fixed by making the first non-negligible bispinor
/// component real and positive. Seeds whose projection vanishes are
/// skipped; if all four vanish the requested state does not exist.
pub fn plane_wave(
    p_vec: [f64; 3],
    branch: Branch,
    energy_sign: EnergySign,
    spin: SpinProjection,
    params: &ModelParameters,
) -> Result<PlaneWaveState> {
    let e = dispersion(p_vec, branch, params)?;
    let on_shell = FourMomentum::new(p_vec, e);
    let momentum = match energy_sign {
        EnergySign::Positive => on_shell,
        EnergySign::Negative => on_shell.negated(),
    };
    // Lambda_sign at the unflipped momentum equals Lambda_+ at the stored
    // one, which is exactly the projector whose range solves the equation
    // at the stored momentum.
    let projector = energy_projector(&momentum, EnergySign::Positive, params)?;
    let axis = if momentum.spatial_norm() == 0.0 {
        [0.0, 0.0, 1.0]
    } else {
        momentum.p_vec
    };
    let spin_proj = {
        let (plus, minus) = spin_projectors(axis)?;
        match spin {
            SpinProjection::Up => plus,
            SpinProjection::Down => minus,
        }
    };

    let m = params.m();
    for seed_index in 0..4 {
        let mut seed = vec![c64(0.0, 0.0); 4];
        seed[seed_index] = c64(1.0, 0.0);
        let psi = projector.mul_vec(&seed);
        let mut lift = vec![c64(0.0, 0.0); 20];
        lift[0..4].copy_from_slice(&psi);
        for mu in 1..=4usize {
            let factor = c64(0.0, -1.0) * momentum.component(mu) / m;
            for i in 0..4 {
                lift[4 * mu + i] = factor * psi[i];
            }
        }
        let mut amplitude = spin_proj.mul_vec(&lift);
        let bispinor_norm = vec_norm(&amplitude[0..4]);
        if bispinor_norm <= SEED_ZERO_TOL {
            continue;
        }
        let mut phase = c64(1.0, 0.0);
        for c in &amplitude[0..4] {
            if c.norm() > SEED_ZERO_TOL {
                phase = c.conj() / c.norm();
                break;
            }
        }
        let scale = phase / bispinor_norm;
        for c in amplitude.iter_mut() {
            *c *= scale;
        }
        let state = PlaneWaveState {
            momentum,
            branch,
            energy_sign,
            spin,
            amplitude,
        };
        verify_plane_wave(&state, params)?;
        return Ok(state);
    }
    Err(Error::NoSuchState(format!(
        "no plane wave for p_vec={p_vec:?}, branch {}, {energy_sign:?}, {spin:?}",
        branch.index()
    )))
}

fn verify_plane_wave(state: &PlaneWaveState, params: &ModelParameters) -> Result<()> {
    let ops = FogdeOperators::new(*params)?;
    let w = wave_operator(&ops, &state.momentum);
    let residual = vec_norm(&w.mul_vec(&state.amplitude));
    let norm = vec_norm(&state.amplitude);
    if residual > 1e-10 * norm {
        return Err(Error::NumericalFailure {
            context: "plane-wave residual",
            residual,
            tolerance: 1e-10 * norm,
        });
    }
    let lift = state.lift_residual(params);
    if lift > 1e-12 * norm.max(1.0) {
        return Err(Error::NumericalFailure {
            context: "plane-wave lift consistency",
            residual: lift,
            tolerance: 1e-12,
        });
    }
    Ok(())
}

/// Free Hamiltonian on the dynamical pair (psi, psi_4), obtained by
/// eliminating the three constrained blocks psi_m = -(i p_m/m) psi:
/// H = [[0, m I], [K/a, -(m/a) gamma_4]] with
/// K = i gamma_k p_k + (a/m)|p|^2 + m. Its spectrum is
/// {+-E_1 (x2), +-E_2 (x2)} with E_i the two dispersion energies.
pub fn reduced_free_hamiltonian(p_vec: [f64; 3], params: &ModelParameters) -> Result<ComplexMatrix> {
    let (m, a) = (params.m(), params.a());
    if a == 0.0 {
        return Err(Error::DegenerateParameter(
            "Hamiltonian reduction needs a != 0".into(),
        ));
    }
    let gamma = GammaSet::build();
    let p2: f64 = p_vec.iter().map(|c| c * c).sum();
    let mut k = ComplexMatrix::identity(4).scale(c64(a / m * p2 + m, 0.0));
    for (idx, &pk) in p_vec.iter().enumerate() {
        k = &k + &gamma.get(idx + 1).scale(c64(0.0, pk));
    }
    let mut h = ComplexMatrix::zeros(8, 8);
    for i in 0..4 {
        h[(i, 4 + i)] = c64(m, 0.0);
        for j in 0..4 {
            h[(4 + i, j)] = k[(i, j)] / a;
            h[(4 + i, 4 + j)] = gamma.get(4)[(i, j)].scale(-m / a);
        }
    }
    Ok(h)
}

/// exp(-i H t) applied to a state.
pub fn evolve(h: &ComplexMatrix, state0: &[Complex64], t: f64) -> Vec<Complex64> {
    assert!(h.is_square() && h.rows() == state0.len(), "dimension mismatch");
    crate::matrix::matrix_exp(&h.scale(c64(0.0, -t))).mul_vec(state0)
}

/// Minimal polynomial shared by every spin operator:
/// (x^2 - 1/4)(x^2 - 9/4).
pub fn spin_minimal_polynomial() -> Polynomial {
    Polynomial::new(vec![
        c64(0.5625, 0.0),
        c64(0.0, 0.0),
        c64(-2.5, 0.0),
        c64(0.0, 0.0),
        c64(1.0, 0.0),
    ])
}
