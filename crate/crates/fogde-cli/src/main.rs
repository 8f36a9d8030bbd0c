//! Command-line front end for the fogde library.
//!
//! Every subcommand is a thin driver: parse arguments, call one or two
//! library operations, serialize the result. Reports are JSON (reals with
//! 17 significant digits), sweeps are CSV. All randomness flows through
//! --seed, so identical invocations produce byte-identical output except
//! for the timestamp field of battery reports.
//!
//! Exit codes: 0 all checks pass, 1 at least one check failed, 2 invalid
//! input, 3 numerical failure.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use fogde::algebra::{FogdeOperators, ModelParameters};
use fogde::conservation::{
    divergence_check, ConservedQuantity, SpacetimePoint, SuperpositionState,
};
use fogde::em::{characteristic_analysis, hamiltonian, Couplings, FieldConfiguration};
use fogde::spectral::{
    dispersion, evolve, mass_shell_residual, mass_spectrum, plane_wave, wave_operator, Branch,
    EnergySign, FourMomentum, SpinProjection,
};
use fogde::matrix::{c64, vec_norm, Complex64};
use fogde::verify::{run_battery, spectrum_sweep};
use fogde::Error;

#[derive(Parser)]
#[command(
    name = "fogde",
    version,
    about = "Numerical laboratory for a 20-component first-order wave equation with two fermion mass states"
)]
struct Cli {
    /// Mass parameter m (must be positive)
    #[arg(long, global = true, default_value_t = 1.0)]
    m: f64,

    /// Deformation parameter a; real masses need a >= -1/4
    #[arg(long, global = true, default_value_t = 2.0, allow_negative_numbers = true)]
    a: f64,

    /// Base tolerance for identity checks
    #[arg(long, global = true, default_value_t = 1e-12)]
    tol: f64,

    /// Seed for every randomized battery
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Write the document to this file instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full identity battery and emit the report
    Verify {
        /// Emit the check table as CSV instead of JSON
        #[arg(long)]
        csv: bool,
    },
    /// Sweep the mass spectrum over a range of a (CSV table)
    Spectrum {
        /// Lower end of the sweep (>= -0.25)
        #[arg(long, default_value_t = -0.25, allow_negative_numbers = true)]
        a_min: f64,
        /// Upper end of the sweep
        #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
        a_max: f64,
        /// Number of grid points (>= 2)
        #[arg(long, default_value_t = 10)]
        steps: usize,
    },
    /// Branch energies and shell residuals at one spatial momentum
    Dispersion {
        /// Spatial momentum, three comma-separated components
        #[arg(long, default_value = "0,0,0.75", allow_hyphen_values = true)]
        p: String,
    },
    /// Construct a plane-wave solution and report its residuals
    Planewave {
        /// Spatial momentum, three comma-separated components
        #[arg(long, default_value = "0,0,0.75", allow_hyphen_values = true)]
        p: String,
        /// Mass branch, 1 or 2
        #[arg(long, default_value_t = 2)]
        branch: u8,
        /// Energy sign, + or -
        #[arg(long, default_value = "+", allow_hyphen_values = true)]
        sign: String,
        /// Spin projection along the momentum, + or -
        #[arg(long, default_value = "+", allow_hyphen_values = true)]
        spin: String,
    },
    /// Evolve a reduced eigenstate and check the phase
    Evolve {
        /// Spatial momentum, three comma-separated components
        #[arg(long, default_value = "0,0,0.75", allow_hyphen_values = true)]
        p: String,
        /// Mass branch, 1 or 2
        #[arg(long, default_value_t = 2)]
        branch: u8,
        /// Energy sign, + or -
        #[arg(long, default_value = "+", allow_hyphen_values = true)]
        sign: String,
        /// Spin projection along the momentum, + or -
        #[arg(long, default_value = "+", allow_hyphen_values = true)]
        spin: String,
        /// Evolution time
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        t: f64,
        /// Constant scalar potential A_0 (shifts the phase by e*A_0*t)
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        a0: f64,
        /// Electric charge e used with --a0
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        charge: f64,
    },
    /// Finite-difference conservation checks on a superposition
    Conserve {
        /// State shape: "single" or "two-branch"
        #[arg(long, default_value = "two-branch")]
        superposition: String,
        /// Coarse stencil step (the checker also samples h/2)
        #[arg(long, default_value_t = 1e-2)]
        h: f64,
    },
    /// Electromagnetic-sector identity checks only
    EmCheck {
        /// Emit the check table as CSV instead of JSON
        #[arg(long)]
        csv: bool,
    },
    /// Characteristic analysis of the first- and second-order symbols
    Causality {
        /// Number of random covectors to sample
        #[arg(long, default_value_t = 50)]
        samples: usize,
    },
}

struct Outcome {
    document: String,
    pass: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(outcome) => {
            if let Some(path) = &cli.out {
                if let Err(e) = std::fs::write(path, &outcome.document) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            } else {
                print!("{}", outcome.document);
            }
            ExitCode::from(if outcome.pass { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

/// 3 for failures of a numerical scheme on valid input, 2 for anything
/// that boils down to an invalid request.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::NumericalFailure { .. }
        | Error::SingularMatrix { .. }
        | Error::ContractViolation { .. } => 3,
        _ => 2,
    }
}

fn dispatch(cli: &Cli) -> Result<Outcome, Error> {
    match &cli.command {
        Command::Verify { csv } => cmd_verify(cli, *csv),
        Command::Spectrum { a_min, a_max, steps } => cmd_spectrum(cli, *a_min, *a_max, *steps),
        Command::Dispersion { p } => cmd_dispersion(cli, p),
        Command::Planewave { p, branch, sign, spin } => cmd_planewave(cli, p, *branch, sign, spin),
        Command::Evolve { p, branch, sign, spin, t, a0, charge } => {
            cmd_evolve(cli, p, *branch, sign, spin, *t, *a0, *charge)
        }
        Command::Conserve { superposition, h } => cmd_conserve(cli, superposition, *h),
        Command::EmCheck { csv } => cmd_emcheck(cli, *csv),
        Command::Causality { samples } => cmd_causality(cli, *samples),
    }
}

fn params_of(cli: &Cli) -> Result<ModelParameters, Error> {
    ModelParameters::new(cli.m, cli.a)
}

fn fmt(x: f64) -> String {
    format!("{:.16e}", x)
}

fn parse_vec3(s: &str) -> Result<[f64; 3], Error> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(Error::InvalidParameter(format!(
            "momentum needs three comma-separated components, got '{s}'"
        )));
    }
    let mut out: [f64; 3] = [0.0; 3];
    for (slot, part) in out.iter_mut().zip(&parts) {
        *slot = part.trim().parse().map_err(|_| {
            Error::InvalidParameter(format!("momentum component '{part}' is not a number"))
        })?;
    }
    if !out.iter().all(|c| c.is_finite()) {
        return Err(Error::InvalidParameter("momentum must be finite".into()));
    }
    Ok(out)
}

fn parse_branch(b: u8) -> Result<Branch, Error> {
    match b {
        1 => Ok(Branch::One),
        2 => Ok(Branch::Two),
        other => Err(Error::InvalidParameter(format!("branch must be 1 or 2, got {other}"))),
    }
}

fn parse_sign(s: &str) -> Result<EnergySign, Error> {
    match s {
        "+" | "pos" | "positive" => Ok(EnergySign::Positive),
        "-" | "neg" | "negative" => Ok(EnergySign::Negative),
        other => Err(Error::InvalidParameter(format!("energy sign must be + or -, got '{other}'"))),
    }
}

fn parse_spin(s: &str) -> Result<SpinProjection, Error> {
    match s {
        "+" | "up" => Ok(SpinProjection::Up),
        "-" | "down" => Ok(SpinProjection::Down),
        other => Err(Error::InvalidParameter(format!("spin must be + or -, got '{other}'"))),
    }
}

fn vec3_json(p: [f64; 3]) -> String {
    format!("[{}, {}, {}]", fmt(p[0]), fmt(p[1]), fmt(p[2]))
}

fn cmd_verify(cli: &Cli, csv: bool) -> Result<Outcome, Error> {
    let params = params_of(cli)?;
    let report = run_battery(&params, cli.tol, cli.seed)?;
    let document = if csv { report.to_csv() } else { report.to_json() };
    Ok(Outcome { document, pass: report.pass() })
}

fn cmd_spectrum(cli: &Cli, a_min: f64, a_max: f64, steps: usize) -> Result<Outcome, Error> {
    let table = spectrum_sweep(cli.m, a_min, a_max, steps)?;
    Ok(Outcome { document: table.to_csv(), pass: true })
}

fn cmd_dispersion(cli: &Cli, p: &str) -> Result<Outcome, Error> {
    let params = params_of(cli)?;
    let p_vec = parse_vec3(p)?;
    let spectrum = mass_spectrum(&params)?;
    let tol = cli.tol.max(1e-10);
    let mut doc = String::from("{\n");
    let _ = write!(doc, "  \"m\": {},\n  \"a\": {},\n", fmt(cli.m), fmt(cli.a));
    let _ = write!(doc, "  \"p_vec\": {},\n", vec3_json(p_vec));
    let _ = write!(doc, "  \"degenerate\": {},\n", params.degenerate());
    doc.push_str("  \"branches\": [\n");
    let mut pass = true;
    for (i, branch) in [Branch::One, Branch::Two].into_iter().enumerate() {
        let energy = dispersion(p_vec, branch, &params)?;
        let residual = mass_shell_residual(&FourMomentum::new(p_vec, energy), &params);
        let ok = residual <= tol;
        pass &= ok;
        doc.push_str("    {\n");
        let _ = write!(doc, "      \"branch\": {},\n", i + 1);
        let _ = write!(doc, "      \"mass\": {},\n", fmt(spectrum.mass(branch)));
        let _ = write!(doc, "      \"energy\": {},\n", fmt(energy));
        let _ = write!(doc, "      \"shell_residual\": {},\n", fmt(residual));
        let _ = write!(doc, "      \"pass\": {}\n", ok);
        doc.push_str(if i == 0 { "    },\n" } else { "    }\n" });
    }
    doc.push_str("  ],\n");
    let _ = write!(doc, "  \"tolerance\": {},\n  \"pass\": {}\n}}\n", fmt(tol), pass);
    Ok(Outcome { document: doc, pass })
}

fn cmd_planewave(cli: &Cli, p: &str, branch: u8, sign: &str, spin: &str) -> Result<Outcome, Error> {
    let params = params_of(cli)?;
    let p_vec = parse_vec3(p)?;
    let branch = parse_branch(branch)?;
    let sign_v = parse_sign(sign)?;
    let spin_v = parse_spin(spin)?;
    let ops = FogdeOperators::new(params)?;
    let wave = plane_wave(p_vec, branch, sign_v, spin_v, &params)?;
    let residual = vec_norm(&wave_operator(&ops, &wave.momentum).mul_vec(&wave.amplitude));
    let lift = wave.lift_residual(&params);
    let tol = cli.tol.max(1e-10);
    let pass = residual <= tol && lift <= tol;
    let mut doc = String::from("{\n");
    let _ = write!(doc, "  \"m\": {},\n  \"a\": {},\n", fmt(cli.m), fmt(cli.a));
    let _ = write!(doc, "  \"p_vec\": {},\n", vec3_json(p_vec));
    let _ = write!(doc, "  \"branch\": {},\n", if branch == Branch::One { 1 } else { 2 });
    let _ = write!(doc, "  \"energy_sign\": \"{sign}\",\n  \"spin\": \"{spin}\",\n");
    let _ = write!(doc, "  \"energy\": {},\n", fmt(wave.momentum.p0));
    let _ = write!(doc, "  \"wave_residual\": {},\n", fmt(residual));
    let _ = write!(doc, "  \"lift_residual\": {},\n", fmt(lift));
    let _ = write!(doc, "  \"tolerance\": {},\n  \"pass\": {}\n}}\n", fmt(tol), pass);
    Ok(Outcome { document: doc, pass })
}

#[allow(clippy::too_many_arguments)]
fn cmd_evolve(
    cli: &Cli,
    p: &str,
    branch: u8,
    sign: &str,
    spin: &str,
    t: f64,
    a0: f64,
    charge: f64,
) -> Result<Outcome, Error> {
    if !(t.is_finite() && a0.is_finite() && charge.is_finite()) {
        return Err(Error::InvalidParameter("t, a0 and charge must be finite".into()));
    }
    let params = params_of(cli)?;
    let p_vec = parse_vec3(p)?;
    let branch = parse_branch(branch)?;
    let sign_v = parse_sign(sign)?;
    let spin_v = parse_spin(spin)?;
    let ops = FogdeOperators::new(params)?;
    let wave = plane_wave(p_vec, branch, sign_v, spin_v, &params)?;

    // A constant scalar potential shifts the reduced Hamiltonian by
    // e A_0 * identity, so the plane-wave pair stays an eigenstate and
    // only the phase moves.
    let couplings = Couplings::new(charge, 0.0, 0.0);
    let field = FieldConfiguration::scalar_potential(a0);
    let (_, reduced) = hamiltonian(&ops, &couplings, &field, wave.momentum.p_vec)?;

    let mut state: Vec<Complex64> = wave.amplitude[0..4].to_vec();
    state.extend_from_slice(&wave.amplitude[16..20]);
    let norm = vec_norm(&state);
    for z in state.iter_mut() {
        *z /= c64(norm, 0.0);
    }

    let energy = wave.momentum.p0 + charge * a0;
    let evolved = evolve(&reduced, &state, t);
    let phase = (c64(0.0, -energy * t)).exp();
    let phase_residual = evolved
        .iter()
        .zip(&state)
        .map(|(x, y)| (x - phase * y).norm_sqr())
        .sum::<f64>()
        .sqrt();
    let norm_drift = (vec_norm(&evolved) - 1.0).abs();
    let tol = cli.tol.max(1e-11);
    let pass = phase_residual <= tol && norm_drift <= tol;

    let mut doc = String::from("{\n");
    let _ = write!(doc, "  \"m\": {},\n  \"a\": {},\n", fmt(cli.m), fmt(cli.a));
    let _ = write!(doc, "  \"p_vec\": {},\n", vec3_json(p_vec));
    let _ = write!(doc, "  \"branch\": {},\n", if branch == Branch::One { 1 } else { 2 });
    let _ = write!(doc, "  \"energy_sign\": \"{sign}\",\n  \"spin\": \"{spin}\",\n");
    let _ = write!(doc, "  \"t\": {},\n  \"a0\": {},\n  \"charge\": {},\n", fmt(t), fmt(a0), fmt(charge));
    let _ = write!(doc, "  \"energy\": {},\n", fmt(energy));
    let _ = write!(doc, "  \"expected_phase\": {{\"re\": {}, \"im\": {}}},\n", fmt(phase.re), fmt(phase.im));
    let _ = write!(doc, "  \"phase_residual\": {},\n", fmt(phase_residual));
    let _ = write!(doc, "  \"norm_drift\": {},\n", fmt(norm_drift));
    let _ = write!(doc, "  \"tolerance\": {},\n  \"pass\": {}\n}}\n", fmt(tol), pass);
    Ok(Outcome { document: doc, pass })
}

fn cmd_conserve(cli: &Cli, superposition: &str, h: f64) -> Result<Outcome, Error> {
    if !(h.is_finite() && h > 0.0 && h < 1.0) {
        return Err(Error::InvalidParameter(format!("stencil step must lie in (0, 1), got {h}")));
    }
    let params = params_of(cli)?;
    let ops = FogdeOperators::new(params)?;
    let mut rng = StdRng::seed_from_u64(cli.seed);
    let mut draw = |scale: f64| -> f64 { rng.gen_range(-scale..scale) };
    let p1 = [draw(1.0), draw(1.0), draw(1.0)];
    let p2 = [draw(1.0), draw(1.0), draw(1.0)];
    let point = SpacetimePoint::new([draw(0.5), draw(0.5), draw(0.5)], draw(0.5).abs());

    let state = match superposition {
        "single" => SuperpositionState::single(plane_wave(
            p1,
            Branch::Two,
            EnergySign::Positive,
            SpinProjection::Up,
            &params,
        )?),
        "two-branch" => SuperpositionState::new(vec![
            (
                c64(0.8, 0.15),
                plane_wave(p1, Branch::One, EnergySign::Positive, SpinProjection::Up, &params)?,
            ),
            (
                c64(-0.35, 0.6),
                plane_wave(p2, Branch::Two, EnergySign::Positive, SpinProjection::Down, &params)?,
            ),
        ])?,
        other => {
            return Err(Error::InvalidParameter(format!(
                "superposition must be 'single' or 'two-branch', got '{other}'"
            )))
        }
    };

    let (j_div, j_order) = divergence_check(&ops, &state, ConservedQuantity::Current, &point, h);
    let (t_div, t_order) =
        divergence_check(&ops, &state, ConservedQuantity::EnergyMomentum, &point, h);

    // A single mode has x-independent densities: the divergence sits at the
    // rounding floor and the order estimate is noise. Superpositions must
    // show the second-order collapse of the stencil error.
    let (j_pass, t_pass) = if superposition == "single" {
        (j_div <= 1e-10, t_div <= 1e-10)
    } else {
        (
            j_div <= 1e-3 && (j_order - 2.0).abs() <= 0.3,
            t_div <= 1e-3 && (t_order - 2.0).abs() <= 0.3,
        )
    };
    let pass = j_pass && t_pass;

    let mut doc = String::from("{\n");
    let _ = write!(doc, "  \"m\": {},\n  \"a\": {},\n", fmt(cli.m), fmt(cli.a));
    let _ = write!(doc, "  \"superposition\": \"{superposition}\",\n");
    let _ = write!(doc, "  \"h\": {},\n  \"seed\": {},\n", fmt(h), cli.seed);
    let _ = write!(
        doc,
        "  \"current\": {{\"divergence\": {}, \"observed_order\": {}, \"pass\": {}}},\n",
        fmt(j_div),
        fmt(j_order),
        j_pass
    );
    let _ = write!(
        doc,
        "  \"energy_momentum\": {{\"divergence\": {}, \"observed_order\": {}, \"pass\": {}}},\n",
        fmt(t_div),
        fmt(t_order),
        t_pass
    );
    let _ = write!(doc, "  \"pass\": {pass}\n}}\n");
    Ok(Outcome { document: doc, pass })
}

fn cmd_emcheck(cli: &Cli, csv: bool) -> Result<Outcome, Error> {
    let params = params_of(cli)?;
    let mut report = run_battery(&params, cli.tol, cli.seed)?;
    report.retain_prefix("em-");
    let document = if csv { report.to_csv() } else { report.to_json() };
    Ok(Outcome { document, pass: report.pass() })
}

fn cmd_causality(cli: &Cli, samples: usize) -> Result<Outcome, Error> {
    if samples == 0 {
        return Err(Error::InvalidParameter("samples must be positive".into()));
    }
    let params = params_of(cli)?;
    let report = characteristic_analysis(&params, samples, cli.seed)?;
    let expected = -cli.a / cli.m;
    let coeff_ok = (report.principal_coefficient - expected).abs() <= 1e-12 * (1.0 + expected.abs());
    let pass = report.causal
        && report.min_rank == 8
        && report.max_rank == 8
        && report.axis_rank == 8
        && report.max_det_rel <= 1e-10
        && report.axis_det_abs <= 1e-10
        && coeff_ok;
    let mut doc = String::from("{\n");
    let _ = write!(doc, "  \"m\": {},\n  \"a\": {},\n", fmt(cli.m), fmt(cli.a));
    let _ = write!(doc, "  \"samples\": {},\n  \"seed\": {},\n", report.samples, cli.seed);
    let _ = write!(doc, "  \"max_det_rel\": {},\n", fmt(report.max_det_rel));
    let _ = write!(doc, "  \"min_rank\": {},\n  \"max_rank\": {},\n", report.min_rank, report.max_rank);
    let _ = write!(doc, "  \"axis_det_abs\": {},\n  \"axis_rank\": {},\n", fmt(report.axis_det_abs), report.axis_rank);
    let _ = write!(doc, "  \"principal_coefficient\": {},\n", fmt(report.principal_coefficient));
    let _ = write!(doc, "  \"expected_principal\": {},\n", fmt(expected));
    let _ = write!(doc, "  \"characteristics\": \"n^2 = 0\",\n");
    let _ = write!(doc, "  \"causal\": {},\n  \"pass\": {}\n}}\n", report.causal, pass);
    Ok(Outcome { document: doc, pass })
}
