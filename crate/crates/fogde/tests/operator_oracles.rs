//! End-to-end checks through the public API, pinned to independently
//! computed reference values. Every number here was worked out by hand
//! from the closed-form mass and dispersion formulas, so these tests
//! guard the library against silent convention drift (sign of the mass
//! map, Euclidean metric, block layout) that unit tests inside a module
//! could miss.

use fogde::algebra::{FogdeOperators, ModelParameters};
use fogde::conservation::{sample, SpacetimePoint, SuperpositionState};
use fogde::matrix::{c64, eigenvalues, vec_norm, Complex64};
use fogde::spectral::{
    dispersion, evolve, mass_shell_residual, mass_spectrum, plane_wave, reduced_free_hamiltonian,
    wave_operator, Branch, EnergySign, FourMomentum, SpinProjection,
};

#[test]
fn mass_spectrum_frozen_oracles() {
    // (m, a, lambda1, lambda2, m1, m2) computed from s = sqrt(4a+1),
    // lambda_i = (-1 -+ s)/2, m_i = -m/lambda_i.
    let table = [
        (1.0, 2.0, -2.0, 1.0, 0.5, -1.0),
        (1.0, 0.75, -1.5, 0.5, 2.0 / 3.0, -2.0),
        (1.0, -3.0 / 16.0, -0.75, -0.25, 4.0 / 3.0, 4.0),
        (2.0, 2.0, -2.0, 1.0, 1.0, -2.0),
    ];
    for (m, a, l1, l2, m1, m2) in table {
        let params = ModelParameters::new(m, a).unwrap();
        let sp = mass_spectrum(&params).unwrap();
        assert!((sp.lambda(Branch::One) - l1).abs() < 1e-12, "lambda1 at a={a}");
        assert!((sp.lambda(Branch::Two) - l2).abs() < 1e-12, "lambda2 at a={a}");
        assert!((sp.mass(Branch::One) - m1).abs() < 1e-12, "m1 at a={a}");
        assert!((sp.mass(Branch::Two) - m2).abs() < 1e-12, "m2 at a={a}");
        assert!(
            (sp.mass(Branch::One) + sp.mass(Branch::Two) + m / a).abs() < 1e-12,
            "sum rule at a={a}"
        );
    }
}

#[test]
fn dispersion_frozen_oracles() {
    let params = ModelParameters::new(1.0, 2.0).unwrap();
    let p = [0.0, 0.0, 0.75];
    // Branch masses 0.5 and -1: E = sqrt(0.5625 + m_i^2).
    let e2 = dispersion(p, Branch::Two, &params).unwrap();
    assert!((e2 - 1.25).abs() < 1e-12, "branch-2 energy {e2}");
    let e1 = dispersion(p, Branch::One, &params).unwrap();
    assert!((e1 - 0.8125_f64.sqrt()).abs() < 1e-12, "branch-1 energy {e1}");

    // Quartic shell polynomial at a rest-frame off-shell point:
    // |a^2 p^4 + (2a+1) m^2 p^2 + m^4| with p^2 = -0.49.
    let off = FourMomentum::rest(0.7);
    let r = mass_shell_residual(&off, &params);
    assert!((r - 0.4896).abs() < 1e-12, "shell residual {r}");

    let on = FourMomentum::new(p, e2);
    assert!(mass_shell_residual(&on, &params) < 1e-12);
    assert!(on.on_shell(Branch::Two, &params).unwrap());
    assert!(!off.on_shell(Branch::One, &params).unwrap());
}

#[test]
fn plane_waves_solve_the_full_system() {
    let params = ModelParameters::new(1.0, 2.0).unwrap();
    let ops = FogdeOperators::new(params).unwrap();
    let pv = [0.3, -0.2, 0.5];
    for branch in [Branch::One, Branch::Two] {
        for sign in [EnergySign::Positive, EnergySign::Negative] {
            for spin in [SpinProjection::Up, SpinProjection::Down] {
                let w = plane_wave(pv, branch, sign, spin, &params).unwrap();
                let op = wave_operator(&ops, &w.momentum);
                let residual = vec_norm(&op.mul_vec(&w.amplitude));
                assert!(residual < 1e-10, "{branch:?}/{sign:?}/{spin:?}: {residual}");
                assert!(w.lift_residual(&params) < 1e-12);
                let bn = vec_norm(w.bispinor());
                assert!((bn - 1.0).abs() < 1e-12, "bispinor norm {bn}");
            }
        }
    }
}

#[test]
fn dynamical_restriction_has_the_lambda_spectrum() {
    // On the 8-dim dynamical subspace alpha_4 carries +-lambda_1, +-lambda_2,
    // each twice; for a=2 that is {+-2, +-1}.
    let params = ModelParameters::new(1.0, 2.0).unwrap();
    let ops = FogdeOperators::new(params).unwrap();
    let p = ops.dynamical_projector().unwrap();
    let restricted = ops.alpha(4).restrict(p, 1e-10).unwrap();
    assert_eq!(restricted.rows(), 8);
    let mut eig: Vec<f64> = eigenvalues(&restricted)
        .unwrap()
        .iter()
        .map(|z| {
            assert!(z.im.abs() < 1e-9);
            z.re
        })
        .collect();
    eig.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let expected = [-2.0, -2.0, -1.0, -1.0, 1.0, 1.0, 2.0, 2.0];
    for (got, want) in eig.iter().zip(expected) {
        assert!((got - want).abs() < 1e-9, "eigenvalue {got} vs {want}");
    }
}

#[test]
fn evolution_applies_a_pure_phase_to_eigenstates() {
    let params = ModelParameters::new(1.0, 2.0).unwrap();
    let pv = [0.4, 0.1, -0.3];
    let h = reduced_free_hamiltonian(pv, &params).unwrap();
    let w = plane_wave(pv, Branch::Two, EnergySign::Positive, SpinProjection::Up, &params).unwrap();
    // The reduced state is the (psi, psi_4) pair of the plane wave.
    let mut v: Vec<Complex64> = w.amplitude[0..4].to_vec();
    v.extend_from_slice(&w.amplitude[16..20]);
    let n = vec_norm(&v);
    for z in v.iter_mut() {
        *z /= c64(n, 0.0);
    }
    let e = w.momentum.p0;
    let t = 0.8;
    let evolved = evolve(&h, &v, t);
    let phase = (c64(0.0, -e * t)).exp();
    let drift: f64 = evolved
        .iter()
        .zip(&v)
        .map(|(x, y)| (x - phase * y).norm_sqr())
        .sum::<f64>()
        .sqrt();
    assert!(drift < 1e-12, "phase drift {drift}");
    let norm = vec_norm(&evolved);
    assert!((norm - 1.0).abs() < 1e-12, "norm drift {norm}");
}

#[test]
fn charge_density_of_a_plane_wave_is_real() {
    let params = ModelParameters::new(1.0, 2.0).unwrap();
    let ops = FogdeOperators::new(params).unwrap();
    let w = plane_wave([0.2, 0.5, -0.1], Branch::One, EnergySign::Positive, SpinProjection::Down, &params)
        .unwrap();
    let state = SuperpositionState::single(w);
    let s = sample(&ops, &state, &SpacetimePoint::new([0.3, -0.2, 0.7], 0.45));
    let rho = s.charge_density();
    assert!(rho.im.abs() < 1e-10, "imaginary charge density {}", rho.im);
    assert!(rho.re.abs() > 1e-3, "charge density unexpectedly zero");
    let lag = s.lagrangian;
    assert!(lag.norm() < 1e-11, "Lagrangian off shell: {}", lag.norm());
}
