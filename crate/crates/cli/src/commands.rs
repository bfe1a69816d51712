use crate::args::{
    AlgebraArgs, CheckArgs, Cli, Command, ScanArgs, ShowTarget, SimulateArgs, VerifyTarget,
};
use crate::config::{Scenario, ScenarioConfig};
use crate::error::CliError;
use crate::report::VerificationReport;
use crate::trajectory_csv;
use clap::Parser;
use poincare_core::electrodynamics::{constant_b_orbit, constant_e_orbit};
use poincare_core::field::{
    classify_connection_symmetry, connection_basis_images, connection_form, ConnectionForm,
    ConnectionSymmetry,
};
use poincare_core::geodesic::{
    integrate, norm_drift, norm_rate_at_start, predicted_norm_rate, ConstantTensor,
};
use poincare_core::group::{
    lorentz_metric_residual, translation_matrix, verify_jj_commutators, verify_momentum_nilpotency,
    verify_pj_commutators, verify_pp_commutators,
};
use poincare_core::indexing::PAIR_ORDER;
use poincare_core::{
    ChargedParticle, GeneratorSet, Mat20, Metric, MomentumConstants, Omega, State, Trajectory,
    Vector4, C64,
};
use std::ffi::OsString;
use std::io::Write;

pub const COMMUTATOR_TOL: f64 = 1e-13;
pub const METRIC_TOL: f64 = 1e-12;

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match dispatch(&cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn dispatch(command: &Command, out: &mut dyn Write) -> Result<i32, CliError> {
    match command {
        Command::Verify {
            target: VerifyTarget::Algebra(a),
        } => cmd_verify(a, out),
        Command::Simulate(a) => cmd_simulate(a, out),
        Command::ScanConnection(a) => cmd_scan_connection(a, out),
        Command::CheckInvariants(a) => cmd_check_invariants(a, out),
        Command::Show { target } => cmd_show(target, out),
    }
}

fn finite_constants(c: &MomentumConstants) -> Result<(), CliError> {
    if [c.c1, c.c2, c.c3, c.c4].iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(CliError::Usage("constants must be finite".into()))
    }
}

fn metric_samples() -> Vec<(String, Omega)> {
    let mut out = Vec::new();
    for i in 0..11 {
        let theta = 0.1 + 0.3 * i as f64;
        out.push((format!("rotation_z({theta:.1})"), Omega::rotation_z(theta)));
    }
    for i in 0..9 {
        let phi = 0.25 * i as f64;
        out.push((format!("boost_z({phi:.2})"), Omega::boost_z(phi)));
    }
    for (i, upper) in [
        [0.3, -0.2, 0.5, 0.7, -0.4, 0.1],
        [-1.1, 0.4, 0.9, 0.2, 1.3, -0.6],
        [0.0, 2.0, -1.5, 0.0, 0.8, 1.2],
    ]
    .into_iter()
    .enumerate()
    {
        out.push((format!("mixed #{}", i + 1), Omega::from_upper(upper)));
    }
    out
}

/// All algebra suites for the given generators.
pub fn algebra_reports(g: &GeneratorSet) -> Vec<VerificationReport> {
    let metric_cases = metric_samples()
        .into_iter()
        .map(|(label, w)| (label, lorentz_metric_residual(&w, g)))
        .collect();
    vec![
        VerificationReport::from_commutators(&verify_jj_commutators(g), COMMUTATOR_TOL),
        VerificationReport::from_commutators(&verify_pj_commutators(g), COMMUTATOR_TOL),
        VerificationReport::from_commutators(&verify_pp_commutators(g), 0.0),
        VerificationReport::from_commutators(&verify_momentum_nilpotency(g), 0.0),
        VerificationReport::new("Λᵀ η Λ = η", METRIC_TOL, metric_cases),
    ]
}

pub fn cmd_verify(args: &AlgebraArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let c = args.constants.resolve();
    finite_constants(&c)?;
    let mut g = GeneratorSet::build(c);
    if let Some((r, s)) = args.corrupt_j {
        if r == s {
            return Err(CliError::Usage(
                "--corrupt-j needs two distinct indices".into(),
            ));
        }
        g.perturb_j(r, s, 0, 0, 1e-3)
            .map_err(|e| CliError::Usage(format!("--corrupt-j: {e}")))?;
    }
    writeln!(
        out,
        "constants: C1={} C2={} C3={} C4={}",
        c.c1, c.c2, c.c3, c.c4
    )?;
    let reports = algebra_reports(&g);
    for r in &reports {
        writeln!(out, "{r}")?;
    }
    let pass = reports.iter().all(|r| r.pass);
    writeln!(
        out,
        "{}",
        if pass {
            "all suites passed"
        } else {
            "verification FAILED"
        }
    )?;
    Ok(if pass { 0 } else { 1 })
}

fn fmt_vec(v: &Vector4<f64>) -> String {
    format!(
        "[{:.16e}, {:.16e}, {:.16e}, {:.16e}]",
        v[0], v[1], v[2], v[3]
    )
}

/// Max `|ΔX|` and `|ΔV|` (entrywise) against a closed form, when the
/// scenario is a recognisable constant magnetic or electric field.
fn closed_form_deviation(
    s: &Scenario,
    traj: &Trajectory,
) -> Result<Option<(&'static str, f64, f64)>, CliError> {
    let Some(em) = s.em else { return Ok(None) };
    let particle = ChargedParticle {
        q: s.q,
        m: s.m,
        x0: s.x0,
        v0: s.v0,
    };
    type Orbit = Box<dyn Fn(f64) -> poincare_core::Result<State>>;
    let (label, orbit): (&str, Orbit) = if em.e.iter().all(|&x| x == 0.0)
        && em.b[0] == 0.0
        && em.b[1] == 0.0
        && s.q * em.b[2] != 0.0
    {
        let b = em.b[2];
        (
            "constant B",
            Box::new(move |tau| constant_b_orbit(&particle, b, tau)),
        )
    } else if em.b.iter().all(|&x| x == 0.0)
        && em.e[0] == 0.0
        && em.e[1] == 0.0
        && s.q * em.e[2] != 0.0
        && s.v0[0] == 0.0
        && s.v0[1] == 0.0
    {
        let e = em.e[2];
        (
            "constant E",
            Box::new(move |tau| constant_e_orbit(&particle, e, tau)),
        )
    } else {
        return Ok(None);
    };
    let (mut dx, mut dv) = (0.0f64, 0.0f64);
    for sample in &traj.samples {
        let exact = orbit(sample.tau)?;
        dx = dx.max((sample.x - exact.x).amax());
        dv = dv.max((sample.v - exact.v).amax());
    }
    Ok(Some((label, dx, dv)))
}

pub fn cmd_simulate(args: &SimulateArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let path = args.config.display().to_string();
    let text = std::fs::read_to_string(&args.config).map_err(|e| CliError::Config {
        path: path.clone(),
        message: e.to_string(),
    })?;
    let scenario = ScenarioConfig::from_json(&text, &path)?.validate(&path)?;
    let s0 = State::new(scenario.x0, scenario.v0, 0.0);
    let traj = integrate(
        &s0,
        &ConstantTensor(scenario.tensor),
        scenario.k,
        scenario.step,
        scenario.n_steps,
        scenario.integrator,
    )
    .map_err(|e| match e {
        poincare_core::Error::NonFinite {
            step,
            last_good_tau,
        } => CliError::NonFinite {
            step,
            last_good_tau,
        },
        other => CliError::Core(other),
    })?;
    trajectory_csv::write_atomic(&args.out, &traj.samples)?;

    let last = traj.last().expect("integrate returns at least one sample");
    writeln!(
        out,
        "wrote {} samples to {}",
        traj.len(),
        args.out.display()
    )?;
    writeln!(
        out,
        "integrator: {} (step {:e})",
        traj.integrator, traj.step
    )?;
    writeln!(out, "final tau: {:.16e}", last.tau)?;
    writeln!(out, "final x: {}", fmt_vec(&last.x))?;
    writeln!(out, "final v: {}", fmt_vec(&last.v))?;
    writeln!(
        out,
        "eta V.V: initial {:.16e}, final {:.16e}",
        s0.norm_sq(),
        last.norm_sq()
    )?;
    writeln!(out, "norm drift: {:.3e}", norm_drift(&traj))?;

    let t = scenario.tensor;
    if (t + t.transpose()).amax() > 0.0 {
        writeln!(
            out,
            "warning: connection tensor not antisymmetric; norm will drift"
        )?;
        let predicted = predicted_norm_rate(&t, &scenario.v0, scenario.k);
        match norm_rate_at_start(&traj) {
            Some(rate) => writeln!(out, "measured drift rate d(eta V.V)/dtau at start: {rate:.6e} (predicted {predicted:.6e})")?,
            None => writeln!(out, "predicted drift rate d(eta V.V)/dtau at start: {predicted:.6e}")?,
        }
    }
    if let Some((label, dx, dv)) = closed_form_deviation(&scenario, &traj)? {
        writeln!(
            out,
            "closed form ({label}): max |dX| = {dx:.3e}, max |dV| = {dv:.3e}"
        )?;
    }
    Ok(0)
}

fn fmt_real(x: f64) -> String {
    format!("{}", x + 0.0)
}

fn fmt_complex(z: C64) -> String {
    match (z.re == 0.0, z.im == 0.0) {
        (_, true) => fmt_real(z.re),
        (true, false) => match z.im {
            1.0 => "i".into(),
            -1.0 => "-i".into(),
            im => format!("{}i", fmt_real(im)),
        },
        (false, false) => format!(
            "{}{}{}i",
            fmt_real(z.re),
            if z.im < 0.0 { "-" } else { "+" },
            fmt_real(z.im.abs())
        ),
    }
}

fn slot_label(n: usize) -> String {
    if n < 4 {
        format!("v{}", n + 1)
    } else {
        let (a, b) = PAIR_ORDER[n - 4];
        format!("T{a}{b}")
    }
}

fn write_matrix(out: &mut dyn Write, title: &str, m: &Mat20) -> Result<(), CliError> {
    writeln!(out, "{title}")?;
    let labels: Vec<String> = (0..20).map(slot_label).collect();
    let cells: Vec<Vec<String>> = (0..20)
        .map(|r| (0..20).map(|c| fmt_complex(m[(r, c)])).collect())
        .collect();
    let width = cells
        .iter()
        .flatten()
        .chain(labels.iter())
        .map(|s| s.chars().count())
        .max()
        .unwrap_or(1);
    let pad = |s: &str| format!("{s:>width$}");
    let header: Vec<String> = labels.iter().map(|l| pad(l)).collect();
    writeln!(out, "{:>4}  {}", "", header.join(" "))?;
    for (label, row) in labels.iter().zip(&cells) {
        let row: Vec<String> = row.iter().map(|c| pad(c)).collect();
        writeln!(out, "{label:>4}  {}", row.join(" "))?;
    }
    Ok(())
}

pub fn cmd_show(target: &ShowTarget, out: &mut dyn Write) -> Result<i32, CliError> {
    let usage = |e: poincare_core::Error| CliError::Usage(e.to_string());
    match target {
        ShowTarget::Generator {
            rho,
            sigma,
            constants,
        } => {
            let g = GeneratorSet::build(constants.resolve());
            write_matrix(
                out,
                &format!("J^{{{rho}{sigma}}}"),
                g.j(*rho, *sigma).map_err(usage)?,
            )?;
        }
        ShowTarget::Momentum { mu, constants } => {
            let c = constants.resolve();
            finite_constants(&c)?;
            let g = GeneratorSet::build(c);
            let title = format!("P^{mu} (C1={} C2={} C3={} C4={})", c.c1, c.c2, c.c3, c.c4);
            write_matrix(out, &title, g.p(*mu).map_err(usage)?)?;
        }
        ShowTarget::TranslationMatrix { dx, constants } => {
            let c = constants.resolve();
            finite_constants(&c)?;
            if !dx.iter().all(|x| x.is_finite()) {
                return Err(CliError::Usage("--dx must be finite".into()));
            }
            let g = GeneratorSet::build(c);
            let d = translation_matrix(&Vector4::from(*dx), &g);
            let title = format!(
                "D(1, dx) for dx = ({}, {}, {}, {})",
                dx[0], dx[1], dx[2], dx[3]
            );
            write_matrix(out, &title, d.matrix())?;
        }
    }
    Ok(0)
}

pub fn describe_form(form: ConnectionForm) -> String {
    match form {
        ConnectionForm::Zero => "zero connection".into(),
        ConnectionForm::ScaledTensor { k } => format!("Γ = kT (default constants, k = {k})"),
        ConnectionForm::TraceForm { lambda } => {
            format!("Γ^{{μν}} ∝ η^{{μν}}·trace(T) (λ = {lambda})")
        }
        ConnectionForm::General(sym) => format!("general connection ({})", describe_symmetry(sym)),
    }
}

fn describe_symmetry(sym: ConnectionSymmetry) -> &'static str {
    match sym {
        ConnectionSymmetry::Zero => "zero",
        ConnectionSymmetry::Symmetric => "symmetric",
        ConnectionSymmetry::Antisymmetric => "antisymmetric",
        ConnectionSymmetry::Neither => "neither symmetric nor antisymmetric",
    }
}

pub fn cmd_scan_connection(args: &ScanArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let c = MomentumConstants::new(args.c1, args.c2, args.c3, args.c4);
    finite_constants(&c)?;
    writeln!(
        out,
        "constants: C1={} C2={} C3={} C4={}",
        c.c1, c.c2, c.c3, c.c4
    )?;
    writeln!(out, "form: {}", describe_form(connection_form(&c)))?;
    writeln!(
        out,
        "symmetry: {}",
        describe_symmetry(classify_connection_symmetry(&c))
    )?;
    writeln!(out, "basis images Γ^{{μν}}(e_αβ), rows μ, columns ν:")?;
    for ((a, b), m) in connection_basis_images(&c) {
        let rows: Vec<String> = m
            .row_iter()
            .map(|r| {
                let xs: Vec<String> = r.iter().map(|&x| fmt_real(x)).collect();
                format!("[{}]", xs.join(", "))
            })
            .collect();
        writeln!(out, "  e_{a}{b}: [{}]", rows.join(", "))?;
    }
    Ok(0)
}

pub fn cmd_check_invariants(args: &CheckArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let path = args.traj.display().to_string();
    if args.tol.is_nan() || args.tol < 0.0 {
        return Err(CliError::Usage("--tol must be non-negative".into()));
    }
    let file = std::fs::File::open(&args.traj).map_err(|e| CliError::Csv {
        path: path.clone(),
        message: e.to_string(),
    })?;
    let samples = trajectory_csv::read_samples(std::io::BufReader::new(file), &path)?;
    let Some(first) = samples.first() else {
        return Err(CliError::Csv {
            path,
            message: "no samples".into(),
        });
    };
    let n0 = Metric::dot(&first.v, &first.v);
    // data row i sits on file line i + 2
    let drifts: Vec<(usize, f64, f64)> = samples
        .iter()
        .enumerate()
        .map(|(i, s)| (i + 2, s.tau, (Metric::dot(&s.v, &s.v) - n0).abs()))
        .collect();
    let (worst_line, worst_tau, worst) =
        drifts.iter().copied().fold((2, first.tau, 0.0), |acc, d| {
            if d.2 > acc.2 || d.2.is_nan() {
                d
            } else {
                acc
            }
        });
    let flagged: Vec<_> = drifts
        .iter()
        .filter(|d| d.2.is_nan() || d.2 > args.tol)
        .collect();

    let step = samples.get(1).map(|s| s.tau - first.tau);
    let spacing_error = step.map_or(0.0, |h| {
        samples
            .iter()
            .enumerate()
            .map(|(i, s)| (s.tau - (first.tau + i as f64 * h)).abs() / s.tau.abs().max(1.0))
            .fold(0.0, f64::max)
    });
    let uniform = step.is_none_or(|h| h > 0.0) && spacing_error <= 1e-9;

    writeln!(out, "rows: {}", samples.len())?;
    writeln!(out, "eta V.V at first row: {n0:.16e}")?;
    writeln!(
        out,
        "max drift: {worst:.3e} at line {worst_line} (tau = {worst_tau:e})"
    )?;
    for (line, tau, d) in flagged.iter().take(10) {
        writeln!(
            out,
            "  drift {d:.3e} exceeds {:e} at line {line} (tau = {tau:e})",
            args.tol
        )?;
    }
    if flagged.len() > 10 {
        writeln!(out, "  ... {} rows over tolerance in total", flagged.len())?;
    }
    match step {
        Some(h) if uniform => writeln!(out, "uniform tau spacing: yes (step {h:e})")?,
        Some(_) => writeln!(
            out,
            "uniform tau spacing: NO (max relative deviation {spacing_error:.3e})"
        )?,
        None => writeln!(out, "uniform tau spacing: yes (single row)")?,
    }
    let pass = flagged.is_empty() && uniform;
    writeln!(
        out,
        "{}",
        if pass {
            "invariants hold"
        } else {
            "invariants VIOLATED"
        }
    )?;
    Ok(if pass { 0 } else { 1 })
}
