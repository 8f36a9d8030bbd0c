//! Bilinear form, Lorentz transformations, currents, the energy-momentum
//! tensor, the Lagrangian density, and finite-difference conservation
//! checks.
//!
//! Every field here is an analytic superposition of plane-wave solutions,
//! evaluated pointwise; finite differences appear only inside the
//! divergence checker, so conservation residuals measure the algebraic
//! identities and not a grid scheme.
//!
//! The adjoint convention: with x_4 = i t the fourth derivative of a
//! conjugated field picks up a sign, d_4(psi^+) = -(d_4 psi)^+, because
//! d_4 = -i d_t. All barred quantities below route through that rule.

use crate::algebra::{FogdeOperators, GammaSet};
use crate::error::{Error, Result};
use crate::matrix::{c64, vec_norm, Complex64, ComplexMatrix};
use crate::spectral::PlaneWaveState;

/// A spatial point and a time, the argument of Psi(x).
#[derive(Clone, Copy, Debug)]
pub struct SpacetimePoint {
    pub x_vec: [f64; 3],
    pub t: f64,
}

impl SpacetimePoint {
    pub fn new(x_vec: [f64; 3], t: f64) -> Self {
        assert!(
            x_vec.iter().all(|c| c.is_finite()) && t.is_finite(),
            "spacetime point must be finite"
        );
        SpacetimePoint { x_vec, t }
    }

    pub fn origin() -> Self {
        SpacetimePoint { x_vec: [0.0; 3], t: 0.0 }
    }

    /// Shift along direction mu in 1..=3 (space) or 4 (time) by `delta`.
    fn shifted(&self, mu: usize, delta: f64) -> Self {
        let mut out = *self;
        match mu {
            1..=3 => out.x_vec[mu - 1] += delta,
            4 => out.t += delta,
            _ => panic!("direction must be 1..=4"),
        }
        out
    }
}

/// A finite linear combination of plane-wave solutions. Linearity of the
/// equation makes every term-wise solution property hold for the sum.
#[derive(Clone, Debug)]
pub struct SuperpositionState {
    terms: Vec<(Complex64, PlaneWaveState)>,
}

impl SuperpositionState {
    pub fn new(terms: Vec<(Complex64, PlaneWaveState)>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvalidParameter(
                "superposition needs at least one term".into(),
            ));
        }
        Ok(SuperpositionState { terms })
    }

    pub fn single(state: PlaneWaveState) -> Self {
        SuperpositionState { terms: vec![(c64(1.0, 0.0), state)] }
    }

    pub fn terms(&self) -> &[(Complex64, PlaneWaveState)] {
        &self.terms
    }
}

/// Pointwise value of a superposition together with its exact analytic
/// derivatives: the 20-component field, its four first derivatives, and
/// the bispinor block with first and second derivatives (the jets needed
/// by the bispinor-form current and energy-momentum tensor).
#[derive(Clone, Debug)]
pub struct FieldSample {
    pub psi: Vec<Complex64>,
    pub dpsi: [Vec<Complex64>; 4],
    pub bispinor: Vec<Complex64>,
    pub dbispinor: [Vec<Complex64>; 4],
    pub ddbispinor: [[Vec<Complex64>; 4]; 4],
}

/// Evaluate a superposition at a point. Each term contributes its stored
/// amplitude times the phase e^{i(p.x - p0 t)}; a derivative d_mu brings
/// down i p_mu (with p_4 = i p0, so d_4 = -i d_t comes out right).
pub fn evaluate(state: &SuperpositionState, x: &SpacetimePoint) -> FieldSample {
    let mut psi = vec![c64(0.0, 0.0); 20];
    let mut dpsi: [Vec<Complex64>; 4] = std::array::from_fn(|_| vec![c64(0.0, 0.0); 20]);
    let mut ddbispinor: [[Vec<Complex64>; 4]; 4] =
        std::array::from_fn(|_| std::array::from_fn(|_| vec![c64(0.0, 0.0); 4]));
    for (c, term) in &state.terms {
        let p = &term.momentum;
        let theta: f64 = p.p_vec.iter().zip(&x.x_vec).map(|(pk, xk)| pk * xk).sum::<f64>()
            - p.p0 * x.t;
        let phase = c * c64(theta.cos(), theta.sin());
        for i in 0..20 {
            let base = phase * term.amplitude[i];
            psi[i] += base;
            for mu in 1..=4usize {
                dpsi[mu - 1][i] += c64(0.0, 1.0) * p.component(mu) * base;
            }
        }
        for i in 0..4 {
            let base = phase * term.amplitude[i];
            for mu in 1..=4usize {
                for nu in 1..=4usize {
                    ddbispinor[mu - 1][nu - 1][i] +=
                        -p.component(mu) * p.component(nu) * base;
                }
            }
        }
    }
    let bispinor = psi[0..4].to_vec();
    let dbispinor = std::array::from_fn(|k| dpsi[k][0..4].to_vec());
    FieldSample { psi, dpsi, bispinor, dbispinor, ddbispinor }
}

/// The invariant pairing Psi1^+ eta Psi2.
pub fn bilinear(psi1: &[Complex64], psi2: &[Complex64], eta: &ComplexMatrix) -> Complex64 {
    assert_eq!(psi1.len(), eta.rows());
    assert_eq!(psi2.len(), eta.cols());
    let mut acc = c64(0.0, 0.0);
    for i in 0..psi1.len() {
        for j in 0..psi2.len() {
            acc += psi1[i].conj() * eta[(i, j)] * psi2[j];
        }
    }
    acc
}

/// Group parameters: three rotation angles (axis ordering: rotation[k]
/// multiplies the generator in the plane perpendicular to axis k) and
/// three boost rapidities beta_k entering as the imaginary parameters
/// omega_k4 = i beta_k.
#[derive(Clone, Copy, Debug, Default)]
pub struct LorentzParameters {
    pub rotation: [f64; 3],
    pub boost: [f64; 3],
}

impl LorentzParameters {
    /// The antisymmetric 4x4 parameter matrix omega with real spatial
    /// entries and imaginary mixed entries.
    pub fn omega_matrix(&self) -> ComplexMatrix {
        let mut w = ComplexMatrix::zeros(4, 4);
        let mut set = |mu: usize, nu: usize, v: Complex64| {
            w[(mu - 1, nu - 1)] = v;
            w[(nu - 1, mu - 1)] = -v;
        };
        set(2, 3, c64(self.rotation[0], 0.0));
        set(3, 1, c64(self.rotation[1], 0.0));
        set(1, 2, c64(self.rotation[2], 0.0));
        for k in 0..3 {
            set(k + 1, 4, c64(0.0, self.boost[k]));
        }
        w
    }
}

/// exp((1/2) omega_munu J_munu) as a 20x20 matrix. The parameter matrix
/// must be antisymmetric with real spatial entries and purely imaginary
/// mixed (m,4) entries; those are exactly the parameters for which the
/// transformation preserves the eta pairing.
pub fn transformation_matrix(
    ops: &FogdeOperators,
    omega: &ComplexMatrix,
) -> Result<ComplexMatrix> {
    assert!(omega.rows() == 4 && omega.cols() == 4, "omega must be 4x4");
    let scale = omega.max_abs().max(1.0);
    let mut generator = ComplexMatrix::zeros(20, 20);
    for mu in 1..=4usize {
        for nu in (mu + 1)..=4usize {
            let w = omega[(mu - 1, nu - 1)];
            let anti = (omega[(nu - 1, mu - 1)] + w).norm();
            if anti > 1e-12 * scale {
                return Err(Error::InvalidParameter(format!(
                    "omega must be antisymmetric; ({mu},{nu}) defect {anti:.3e}"
                )));
            }
            let bad = if nu == 4 { w.re.abs() } else { w.im.abs() };
            if bad > 1e-12 * scale {
                return Err(Error::InvalidParameter(format!(
                    "omega({mu},{nu}) violates the reality pattern (spatial real, mixed imaginary)"
                )));
            }
            generator = &generator + &ops.generator(mu, nu).scale(w);
        }
    }
    Ok(crate::matrix::matrix_exp(&generator))
}

/// Apply the transformation with the given parameters to a state.
pub fn lorentz_transform(
    ops: &FogdeOperators,
    psi: &[Complex64],
    omega: &ComplexMatrix,
) -> Result<Vec<Complex64>> {
    Ok(transformation_matrix(ops, omega)?.mul_vec(psi))
}

/// Entries of the row vector v^+ M.
fn bar_row(m: &ComplexMatrix, v: &[Complex64]) -> Vec<Complex64> {
    assert_eq!(v.len(), m.rows());
    (0..m.cols())
        .map(|j| (0..m.rows()).map(|i| v[i].conj() * m[(i, j)]).sum())
        .collect()
}

/// Plain (unconjugated) pairing of a row vector with a column vector.
fn pair(row: &[Complex64], col: &[Complex64]) -> Complex64 {
    row.iter().zip(col).map(|(r, c)| r * c).sum()
}

/// Sign picked up when the derivative index passes through conjugation:
/// +1 for spatial directions, -1 for the fourth.
fn conj_sign(mu: usize) -> f64 {
    if mu == 4 {
        -1.0
    } else {
        1.0
    }
}

/// Current density j_mu = i Psibar alpha_mu Psi of the 20-component field.
/// The spatial components and the charge density rho = -i j_4 are real.
pub fn current20(ops: &FogdeOperators, psi: &[Complex64]) -> [Complex64; 4] {
    let bar = bar_row(ops.eta(), psi);
    std::array::from_fn(|k| {
        c64(0.0, 1.0) * pair(&bar, &ops.alpha(k + 1).mul_vec(psi))
    })
}

/// The same current written with the bispinor alone:
/// j_mu = -i psibar gamma_mu psi + (i a/m) psibar d_mu psi
///        - (i a/m) (d_mu psibar) psi,  psibar = psi^+ gamma_4.
/// The first term is the Dirac current; the others are the convective
/// terms brought in by the second-derivative part of the equation.
pub fn current_bispinor(
    ops: &FogdeOperators,
    psi: &[Complex64],
    dpsi: &[Vec<Complex64>; 4],
) -> [Complex64; 4] {
    let gamma = ops.gamma();
    let g4 = gamma.get(4);
    let (m, a) = (ops.params().m(), ops.params().a());
    let bar = bar_row(g4, psi);
    std::array::from_fn(|k| {
        let mu = k + 1;
        let dbar: Vec<Complex64> = bar_row(g4, &dpsi[k])
            .iter()
            .map(|z| z * conj_sign(mu))
            .collect();
        c64(0.0, -1.0) * pair(&bar, &gamma.get(mu).mul_vec(psi))
            + c64(0.0, a / m) * pair(&bar, &dpsi[k])
            - c64(0.0, a / m) * pair(&dbar, psi)
    })
}

/// Canonical energy-momentum tensor of the 20-component field:
/// T_munu = (1/2)(d_nu Psibar) alpha_mu Psi - (1/2) Psibar alpha_mu d_nu Psi.
/// The energy density is T_44 and the momentum density is i T_m4.
pub fn emt20(
    ops: &FogdeOperators,
    psi: &[Complex64],
    dpsi: &[Vec<Complex64>; 4],
) -> ComplexMatrix {
    let eta = ops.eta();
    let bar = bar_row(eta, psi);
    let dbar: Vec<Vec<Complex64>> = (1..=4)
        .map(|nu| {
            bar_row(eta, &dpsi[nu - 1])
                .iter()
                .map(|z| z * conj_sign(nu))
                .collect()
        })
        .collect();
    ComplexMatrix::from_fn(4, 4, |i, j| {
        let alpha = ops.alpha(i + 1);
        (pair(&dbar[j], &alpha.mul_vec(psi)) - pair(&bar, &alpha.mul_vec(&dpsi[j])))
            .scale(0.5)
    })
}

/// The energy-momentum tensor from the bispinor jet alone: the two Dirac
/// terms plus four convective terms weighted by a/(2m).
pub fn emt_bispinor(
    ops: &FogdeOperators,
    psi: &[Complex64],
    dpsi: &[Vec<Complex64>; 4],
    ddpsi: &[[Vec<Complex64>; 4]; 4],
) -> ComplexMatrix {
    let gamma = ops.gamma();
    let g4 = gamma.get(4);
    let (m, a) = (ops.params().m(), ops.params().a());
    let bar = bar_row(g4, psi);
    let dbar: Vec<Vec<Complex64>> = (1..=4)
        .map(|mu| {
            bar_row(g4, &dpsi[mu - 1])
                .iter()
                .map(|z| z * conj_sign(mu))
                .collect()
        })
        .collect();
    ComplexMatrix::from_fn(4, 4, |i, j| {
        let (mu, nu) = (i + 1, j + 1);
        let g = gamma.get(mu);
        let ddbar: Vec<Complex64> = bar_row(g4, &ddpsi[i][j])
            .iter()
            .map(|z| z * (conj_sign(mu) * conj_sign(nu)))
            .collect();
        let dirac = (pair(&bar, &g.mul_vec(&dpsi[j])) - pair(&dbar[j], &g.mul_vec(psi)))
            .scale(0.5);
        let convective = pair(&dbar[i], &dpsi[j]) + pair(&dbar[j], &dpsi[i])
            - pair(&ddbar, psi)
            - pair(&bar, &ddpsi[j][i]);
        dirac + convective.scale(a / (2.0 * m))
    })
}

/// Lagrangian density
/// L = -(1/2)[Psibar alpha_mu d_mu Psi - (d_mu Psibar) alpha_mu Psi
///            + 2 m Psibar Psi];
/// identically zero on solutions.
pub fn lagrangian_density(
    ops: &FogdeOperators,
    psi: &[Complex64],
    dpsi: &[Vec<Complex64>; 4],
) -> Complex64 {
    let eta = ops.eta();
    let bar = bar_row(eta, psi);
    let mut acc = c64(0.0, 0.0);
    for mu in 1..=4usize {
        let alpha = ops.alpha(mu);
        let dbar: Vec<Complex64> = bar_row(eta, &dpsi[mu - 1])
            .iter()
            .map(|z| z * conj_sign(mu))
            .collect();
        acc += pair(&bar, &alpha.mul_vec(&dpsi[mu - 1])) - pair(&dbar, &alpha.mul_vec(psi));
    }
    acc += pair(&bar, psi).scale(2.0 * ops.params().m());
    acc.scale(-0.5)
}

/// Residual of the adjoint (left) equation for a plane-wave state:
/// || Psibar(p) (i alpha_mu p_mu + m) ||. The eta relations turn the
/// conjugated equation into exactly this left-sided one, so the residual
/// vanishes on solutions.
pub fn adjoint_residual(ops: &FogdeOperators, state: &PlaneWaveState) -> f64 {
    let w = crate::spectral::wave_operator(ops, &state.momentum);
    let eta_psi = ops.eta().mul_vec(&state.amplitude);
    vec_norm(&w.adjoint().mul_vec(&eta_psi))
}

/// Which conserved density a divergence check differentiates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConservedQuantity {
    Current,
    EnergyMomentum,
}

/// Central-difference divergence of the current (or of each column of the
/// energy-momentum tensor) at a point, using steps h and h/2. Returns the
/// magnitude at h/2 and the observed order log2(|D(h)|/|D(h/2)|); on
/// solution superpositions the magnitude converges to zero at order 2.
/// When the magnitudes sit at the rounding floor (an x-independent
/// density) the order estimate is noise; the magnitude is the meaningful
/// number there.
pub fn divergence_check(
    ops: &FogdeOperators,
    state: &SuperpositionState,
    quantity: ConservedQuantity,
    x: &SpacetimePoint,
    h: f64,
) -> (f64, f64) {
    assert!(h > 0.0, "step must be positive");
    let density = |pt: &SpacetimePoint| -> Vec<Complex64> {
        let sample = evaluate(state, pt);
        match quantity {
            ConservedQuantity::Current => current20(ops, &sample.psi).to_vec(),
            ConservedQuantity::EnergyMomentum => {
                let t = emt20(ops, &sample.psi, &sample.dpsi);
                (0..16).map(|k| t[(k / 4, k % 4)]).collect()
            }
        }
    };
    let divergence = |step: f64| -> f64 {
        let mut per_direction: Vec<Vec<Complex64>> = Vec::with_capacity(4);
        for mu in 1..=4usize {
            let fwd = density(&x.shifted(mu, step));
            let bwd = density(&x.shifted(mu, -step));
            let factor = if mu == 4 {
                // d_4 = -i d_t on the time-shifted samples.
                c64(0.0, -1.0 / (2.0 * step))
            } else {
                c64(1.0 / (2.0 * step), 0.0)
            };
            per_direction.push(fwd.iter().zip(&bwd).map(|(f, b)| (f - b) * factor).collect());
        }
        match quantity {
            ConservedQuantity::Current => {
                let total: Complex64 = (0..4).map(|mu| per_direction[mu][mu]).sum();
                total.norm()
            }
            ConservedQuantity::EnergyMomentum => {
                let mut sum = 0.0;
                for nu in 0..4 {
                    let total: Complex64 =
                        (0..4).map(|mu| per_direction[mu][4 * mu + nu]).sum();
                    sum += total.norm_sqr();
                }
                sum.sqrt()
            }
        }
    };
    let coarse = divergence(h);
    let fine = divergence(h / 2.0);
    (fine, (coarse / fine).log2())
}

/// All pointwise densities of a state at one point: the energy-momentum
/// tensor, the current, and the Lagrangian density.
#[derive(Clone, Debug)]
pub struct TensorSample {
    pub t: ComplexMatrix,
    pub j: [Complex64; 4],
    pub lagrangian: Complex64,
    pub point: SpacetimePoint,
}

impl TensorSample {
    /// Energy density T_44; real for the states of this crate.
    pub fn energy_density(&self) -> Complex64 {
        self.t[(3, 3)]
    }

    /// Momentum density i T_m4 for m in 1..=3.
    pub fn momentum_density(&self, m: usize) -> Complex64 {
        assert!((1..=3).contains(&m), "momentum index must be 1..=3");
        c64(0.0, 1.0) * self.t[(m - 1, 3)]
    }

    /// Charge density rho = -i j_4; real.
    pub fn charge_density(&self) -> Complex64 {
        c64(0.0, -1.0) * self.j[3]
    }
}

/// Evaluate every density of a superposition at one point.
pub fn sample(
    ops: &FogdeOperators,
    state: &SuperpositionState,
    x: &SpacetimePoint,
) -> TensorSample {
    let field = evaluate(state, x);
    TensorSample {
        t: emt20(ops, &field.psi, &field.dpsi),
        j: current20(ops, &field.psi),
        lagrangian: lagrangian_density(ops, &field.psi, &field.dpsi),
        point: *x,
    }
}

/// The bispinor adjoint row psi^+ gamma_4; exposed for tests and reports.
pub fn bispinor_bar(gamma: &GammaSet, psi: &[Complex64]) -> Vec<Complex64> {
    bar_row(gamma.get(4), psi)
}
