use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::{bail, ensure, Context, Result};
use subplanck::estimation::{protocol_probability, scaling_exponent};
use subplanck::metrology::{CircularSpec, SweepTarget};
use subplanck::protocol::{dispersive_protocol_with, PerturbationModel};
use subplanck::*;

use crate::args::*;
use crate::output::{emit, graymap, real, write_atomic, Table};

/// What a command leaves behind: files already written plus text for stdout.
#[derive(Debug, Default)]
pub struct Outcome {
    pub files: Vec<PathBuf>,
    pub stdout: String,
    pub warnings: Vec<String>,
}

pub fn run(command: &Command) -> Result<Outcome> {
    match command {
        Command::Wigner(a) => wigner(a, command),
        Command::Overlap(a) => overlap(a, command),
        Command::Protocol(a) => protocol(a, command),
        Command::Estimate(a) => estimate(a, command),
        Command::Feasibility(a) => feasibility_report(a),
    }
}

fn circle(state: &StateArgs) -> Result<CircularSpec> {
    ensure!(state.m >= 1, "--m must be at least 1");
    let gammas = state.gammas();
    ensure!(
        gammas.len() == state.m,
        "--gammas lists {} phases but --m is {}",
        gammas.len(),
        state.m
    );
    let alpha = state.alpha();
    ensure!(
        alpha.re.is_finite() && alpha.im.is_finite(),
        "--alpha must be finite"
    );
    Ok(CircularSpec::with_gammas(alpha, gammas))
}

fn direction_or_orthogonal(phi: Option<f64>, alpha: C64) -> f64 {
    phi.unwrap_or(alpha.arg() + PI / 2.0)
}

fn sweep_points(from: f64, to: f64, points: usize) -> Result<Vec<f64>> {
    ensure!(points >= 2, "--points must be at least 2");
    ensure!(
        from.is_finite() && to.is_finite() && from >= 0.0 && to > from,
        "need 0 <= --from < --to"
    );
    Ok((0..points)
        .map(|i| from + (to - from) * i as f64 / (points - 1) as f64)
        .collect())
}

fn grid_for(args: &GridArgs, states: &[&CoherentSuperposition]) -> Result<PhaseSpaceGrid> {
    for range in [&args.re_range, &args.im_range].into_iter().flatten() {
        ensure!(
            range.len() == 2,
            "grid ranges take exactly two values, `min,max`"
        );
    }
    let auto = PhaseSpaceGrid::auto(states)?;
    let (re, nx) = match (&args.re_range, args.nx) {
        (Some(r), n) => ((r[0], r[1]), n.unwrap_or(auto.nx)),
        (None, Some(n)) => ((auto.re_min, auto.re_max), n),
        (None, None) => ((auto.re_min, auto.re_max), auto.nx),
    };
    let (im, ny) = match (&args.im_range, args.ny) {
        (Some(r), n) => ((r[0], r[1]), n.unwrap_or(auto.ny)),
        (None, Some(n)) => ((auto.im_min, auto.im_max), n),
        (None, None) => ((auto.im_min, auto.im_max), auto.ny),
    };
    Ok(PhaseSpaceGrid::new(re, im, nx, ny)?)
}

fn wigner(args: &WignerArgs, config: &Command) -> Result<Outcome> {
    let spec = circle(&args.state)?;
    let mut state = spec.state()?;
    if let Some(eta) = args.eta {
        state = state.displace(eta.into());
    }
    let pert = match args.pert {
        PertKind::None => PerturbationSpec::identity(),
        PertKind::Displacement => {
            PerturbationSpec::displacement(args.s, direction_or_orthogonal(args.phi, spec.alpha))
        }
        PertKind::Rotation => PerturbationSpec::rotation(args.theta),
    };
    ensure!(
        pert.magnitude.is_finite() && pert.magnitude >= 0.0,
        "perturbation magnitude must be finite and >= 0"
    );
    let perturbed = pert.apply(&state);

    let mut out = Outcome::default();
    let (grid, values, summary) = if args.product {
        let grid = grid_for(&args.grid, &[&state, &perturbed])?;
        let w1 = wigner_field(&state, &grid);
        let w2 = wigner_field(&perturbed, &grid);
        if !(w1.resolved && w2.resolved) {
            out.warnings.push(underresolved(&grid));
        }
        let q = phase_space_overlap(&w1, &w2)?;
        let exact = exact_overlap(&state, &pert);
        let values = w1.product_values(&w2)?;
        let summary = format!(
            "quadrature {} (error {}), exact {}\n",
            real(q.value),
            real(q.error),
            real(exact)
        );
        (grid, values, summary)
    } else {
        let grid = grid_for(&args.grid, &[&perturbed])?;
        let w = wigner_field(&perturbed, &grid);
        if !w.resolved {
            out.warnings.push(underresolved(&grid));
        }
        let summary = format!("mass {}, max |W| {}\n", real(w.mass()), real(w.max_abs()));
        (grid, w.values, summary)
    };

    let mut table = Table::new(config, &["re", "im", "w"])?;
    table.comment(format!("grid: {} x {}", grid.nx, grid.ny));
    for iy in 0..grid.ny {
        for ix in 0..grid.nx {
            let v = values[iy * grid.nx + ix];
            table.row([real(grid.re(ix)), real(grid.im(iy)), real(v)])?;
        }
    }
    let csv_path = args.out.with_extension("csv");
    let pgm_path = args.out.with_extension("pgm");
    write_atomic(&csv_path, &table.into_bytes()?)?;
    write_atomic(&pgm_path, &graymap(&grid, &values))?;
    out.files = vec![csv_path, pgm_path];
    out.stdout = summary;
    Ok(out)
}

fn underresolved(grid: &PhaseSpaceGrid) -> String {
    format!(
        "grid step {:.4} does not resolve the interference fringes; refine --nx/--ny",
        grid.step()
    )
}

fn overlap(args: &OverlapArgs, config: &Command) -> Result<Outcome> {
    let spec = circle(&args.state)?;
    let sweep = &args.sweep;
    let target = SweepTarget {
        circle: spec,
        kind: match sweep.kind {
            SweepKind::Displacement => PerturbationKind::Displacement,
            SweepKind::Rotation => PerturbationKind::Rotation,
        },
        direction: sweep.phi,
    };
    sweep_points(sweep.from, sweep.to, sweep.points)?;
    let result = overlap_sweep(&target, sweep.from, sweep.to, sweep.points)?;

    let mut header = vec!["magnitude", "exact", "approx"];
    if args.quadrature {
        header.push("quadrature");
    }
    let mut table = Table::new(config, &header)?;
    let probe = target.probe_state()?;
    let mut warnings = Vec::new();
    for row in &result.rows {
        let mut fields = vec![real(row.magnitude), real(row.exact), real(row.approx)];
        if args.quadrature {
            let moved = target.perturbation(row.magnitude).apply(&probe);
            let grid = PhaseSpaceGrid::auto(&[&probe, &moved])?;
            let (w1, w2) = (wigner_field(&probe, &grid), wigner_field(&moved, &grid));
            if !(w1.resolved && w2.resolved) && warnings.is_empty() {
                warnings.push(underresolved(&grid));
            }
            fields.push(real(phase_space_overlap(&w1, &w2)?.value));
        }
        table.row(fields)?;
    }
    emit(args.out.as_deref(), &table.into_bytes()?)?;
    Ok(Outcome {
        files: args.out.iter().cloned().collect(),
        stdout: String::new(),
        warnings,
    })
}

fn protocol(args: &ProtocolArgs, config: &Command) -> Result<Outcome> {
    let alpha: C64 = args.alpha.into();
    let magnitudes = sweep_points(args.from, args.to, args.points)?;
    let direction = match (args.phi, args.regime) {
        (Some(phi), _) => phi,
        (None, RegimeArg::Dispersive) => alpha.arg() + PI / 2.0,
        (None, RegimeArg::Resonant) => alpha.arg(),
    };
    let model = match args.model {
        ModelArg::Linearized => PerturbationModel::Linearized,
        ModelArg::Exact => PerturbationModel::Exact,
    };
    let column = match args.kind {
        SweepKind::Displacement => "s",
        SweepKind::Rotation => "theta",
    };
    let mut table = Table::new(config, &[column, "p_e", "p_g"])?;
    table.comment(match args.regime {
        RegimeArg::Dispersive => "regime: dispersive".to_string(),
        RegimeArg::Resonant => format!("regime: resonant, dt_fraction {}", args.dt_fraction),
    });
    for m in magnitudes {
        let pert = match args.kind {
            SweepKind::Displacement => PerturbationSpec::displacement(m, direction),
            SweepKind::Rotation => PerturbationSpec::rotation(m),
        };
        let res = match args.regime {
            RegimeArg::Dispersive => dispersive_protocol_with(alpha, &pert, model)?,
            RegimeArg::Resonant => resonant_protocol(alpha, &pert, args.dt_fraction)?,
        };
        table.row([real(m), real(res.p_e), real(res.p_g)])?;
    }
    emit(args.out.as_deref(), &table.into_bytes()?)?;
    Ok(Outcome {
        files: args.out.iter().cloned().collect(),
        ..Outcome::default()
    })
}

fn convention(arg: ConventionArg) -> FringeConvention {
    match arg {
        ConventionArg::Dispersive => FringeConvention::Dispersive,
        ConventionArg::Resonant => FringeConvention::Resonant,
    }
}

fn estimate(args: &EstimateArgs, config: &Command) -> Result<Outcome> {
    ensure!(args.reps >= 1, "--reps must be at least 1");
    ensure!(args.trials >= 1, "--trials must be at least 1");
    let conv = convention(args.convention);
    if let Some(nbars) = &args.nbar_sweep {
        return estimate_sweep(args, nbars, conv, config);
    }
    let alpha: C64 = args.alpha.into();
    let r = alpha.norm();
    ensure!(r > 0.0, "--alpha must be nonzero");
    let s = args.s.unwrap_or(PI / (8.0 * r));

    let mut table = Table::new(config, &["trial", "r", "s_tilde"])?;
    let runs = if args.trials >= 2 && args.reps >= 100 {
        let cal = estimator_calibration(s, alpha, args.reps, args.trials, args.seed, conv)?;
        cal.runs
    } else {
        // too small for a calibration: plain readouts, trial k seeded with seed + k
        let p = protocol_probability(s, alpha, conv)?;
        (0..args.trials)
            .map(|k| {
                let count = simulate_readout(p, args.reps, args.seed.wrapping_add(k))?;
                Ok(estimate_displacement(count, args.reps, r, conv)?)
            })
            .collect::<Result<Vec<_>>>()?
    };
    for (k, run) in runs.iter().enumerate() {
        table.row([
            k.to_string(),
            run.excited_count.to_string(),
            real(run.estimate),
        ])?;
    }
    let n = runs.len() as f64;
    let mean = runs.iter().map(|r| r.estimate).sum::<f64>() / n;
    let sd = if runs.len() > 1 {
        (runs
            .iter()
            .map(|r| (r.estimate - mean).powi(2))
            .sum::<f64>()
            / (n - 1.0))
            .sqrt()
    } else {
        0.0
    };
    let theory = runs[0].sigma;
    emit(args.out.as_deref(), &table.into_bytes()?)?;

    let mut summary = String::from("mean,empirical_sigma,theory_sigma\n");
    writeln!(summary, "{},{},{}", real(mean), real(sd), real(theory))?;
    Ok(Outcome {
        files: args.out.iter().cloned().collect(),
        stdout: summary,
        warnings: Vec::new(),
    })
}

fn estimate_sweep(
    args: &EstimateArgs,
    nbars: &[f64],
    conv: FringeConvention,
    config: &Command,
) -> Result<Outcome> {
    ensure!(nbars.len() >= 2, "--nbar-sweep needs at least two values");
    let mut table = Table::new(
        config,
        &[
            "nbar",
            "mean",
            "empirical_sigma",
            "theory_sigma",
            "delta_method_sigma",
        ],
    )?;
    let mut points = Vec::new();
    for &nbar in nbars {
        ensure!(nbar > 0.0 && nbar.is_finite(), "n̄ values must be positive");
        let alpha = C64::new(0.0, nbar.sqrt());
        let s = PI / (8.0 * nbar.sqrt());
        let cal = estimator_calibration(s, alpha, args.reps, args.trials, args.seed, conv)
            .with_context(|| format!("calibration at n̄ = {nbar}"))?;
        table.row([
            real(nbar),
            real(cal.mean),
            real(cal.empirical_sigma),
            real(cal.theory_sigma),
            real(cal.delta_method_sigma),
        ])?;
        points.push((nbar, cal.empirical_sigma));
    }
    let exponent = scaling_exponent(&points)?;
    table.comment(format!("fitted exponent: {}", real(exponent)));
    emit(args.out.as_deref(), &table.into_bytes()?)?;
    Ok(Outcome {
        files: args.out.iter().cloned().collect(),
        stdout: format!("exponent,{}\n", real(exponent)),
        warnings: Vec::new(),
    })
}

fn feasibility_report(args: &FeasibilityArgs) -> Result<Outcome> {
    let omega0 = match (args.omega0, args.rabi_period) {
        (Some(w), None) => w,
        (None, Some(p)) => {
            ensure!(p > 0.0, "--rabi-period must be positive");
            2.0 * PI / p
        }
        _ => bail!("give exactly one of --omega0 and --rabi-period"),
    };
    let platform = match args.platform {
        PlatformArg::Cavity => Platform::Cavity,
        PlatformArg::Ion => Platform::Ion,
    };
    let report = feasibility(omega0, args.nbar, args.budget, platform)?;
    let mut text = String::new();
    writeln!(text, "platform              {:?}", platform)?;
    writeln!(text, "omega0                {omega0:.6e} 1/s")?;
    writeln!(text, "nbar                  {}", args.nbar)?;
    writeln!(
        text,
        "interaction time T    {:.4} ms",
        report.interaction_time * 1e3
    )?;
    writeln!(
        text,
        "decoherence threshold {:.4} ms",
        report.decoherence_threshold * 1e3
    )?;
    writeln!(text, "budget                {:.4} ms", args.budget * 1e3)?;
    writeln!(text, "ratio                 {:.3}", report.ratio)?;
    writeln!(
        text,
        "verdict               {}",
        if report.verdict {
            "favorable (ratio >= 10)"
        } else {
            "unfavorable (ratio < 10)"
        }
    )?;
    Ok(Outcome {
        stdout: text,
        ..Outcome::default()
    })
}
