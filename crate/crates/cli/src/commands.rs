use std::fs;
use std::io::Write;
use std::path::Path;

use qdm_core::estimate::{simulate_estimation, EstimationConfig};
use qdm_core::linalg::{embed_local, pauli};
use qdm_core::measures::{certify, entropic_discord, lqu, mutual_information, qip};
use qdm_core::states::purity;
use qdm_core::suite::{self, SuiteConfig};
use qdm_core::sweep::{default_grid, sweep as sweep_rows};
use qdm_core::{DensityMatrix, Error, GridSpec, Objective, SpectrumSpec, Subsystem, Suite};

use crate::failure::Failure;
use crate::output::{self, EstimateReport, MeasuresReport, Minimizer, Minimizers, Source};
use crate::{CheckArgs, EstimateArgs, Format, MeasuresArgs, StateSource, SweepArgs};

/// Default number of points in a sweep.
pub const SWEEP_POINTS: usize = 101;

fn load(source: &StateSource) -> Result<(DensityMatrix, Source), Failure> {
    match (&source.preset, &source.state) {
        (Some(preset), _) => {
            let rho = preset.state(source.p)?;
            let dims = rho.dims();
            let info = Source {
                preset: Some(preset.name().to_string()),
                p: preset.uses_p().then_some(source.p),
                file: None,
                dims: [dims.0, dims.1],
            };
            Ok((rho, info))
        }
        (None, Some(path)) => {
            let text = fs::read_to_string(path).map_err(|e| Failure::io(path, e))?;
            let rho = DensityMatrix::from_json(&text)?;
            let dims = rho.dims();
            let info = Source {
                preset: None,
                p: None,
                file: Some(path.display().to_string()),
                dims: [dims.0, dims.1],
            };
            Ok((rho, info))
        }
        (None, None) => Err(Failure::Input(
            "either --preset or --state is required".into(),
        )),
    }
}

fn parse_list(text: &str) -> Option<Vec<f64>> {
    text.split(',')
        .map(|t| t.trim().parse::<f64>().ok().filter(|x| x.is_finite()))
        .collect()
}

fn parse_spectrum(text: Option<&str>, dim: usize) -> Result<SpectrumSpec, Failure> {
    match text {
        None => Ok(SpectrumSpec::default_for(dim)),
        Some(t) => {
            let values =
                parse_list(t).ok_or_else(|| Failure::Spectrum(format!("cannot parse `{t}`")))?;
            Ok(SpectrumSpec::new(values)?)
        }
    }
}

fn parse_direction(text: &str) -> Result<[f64; 3], Failure> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let n = match text {
        "x" => [1.0, 0.0, 0.0],
        "y" => [0.0, 1.0, 0.0],
        "z" => [0.0, 0.0, 1.0],
        "diag" => [s, s, 0.0],
        other => match parse_list(other).as_deref() {
            Some(&[a, b, c]) => {
                let norm = (a * a + b * b + c * c).sqrt();
                if norm < 1e-12 {
                    return Err(Failure::Input("direction must be nonzero".into()));
                }
                [a / norm, b / norm, c / norm]
            }
            _ => return Err(Failure::Input(format!("cannot parse direction `{other}`"))),
        },
    };
    Ok(n)
}

fn emit(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::io(p, e)),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .map_err(|e| Failure::io("<stdout>", e))
        }
    }
}

pub fn measures(args: &MeasuresArgs) -> Result<(), Failure> {
    let (rho, source) = load(&args.source)?;
    let side = Subsystem::from(args.side);
    let local_dim = rho.subsystem_dim(side);
    let spectrum = parse_spectrum(args.spectrum.as_deref(), local_dim)?;

    let mut lqu_report = lqu(&rho, side, &spectrum)?;
    let mut qip_report = qip(&rho, side, &spectrum)?;
    if !args.no_oracle && local_dim == 2 {
        let grid = GridSpec::default();
        certify(
            &mut lqu_report,
            &rho,
            side,
            &spectrum,
            Objective::Skew,
            &grid,
        )?;
        certify(
            &mut qip_report.raw,
            &rho,
            side,
            &spectrum,
            Objective::Qfi,
            &grid,
        )?;
    }
    let discord = match entropic_discord(&rho, side) {
        Ok(r) => Some(r),
        Err(Error::NotAQubit(_)) => None,
        Err(e) => return Err(e.into()),
    };

    let report = MeasuresReport {
        source,
        side: side.to_string(),
        spectrum: spectrum.values().to_vec(),
        lqu: lqu_report.value,
        qip_raw: qip_report.raw.value,
        qip_normalized: qip_report.normalized,
        discord_entropic: discord.as_ref().map(|d| d.value),
        mutual_information: mutual_information(&rho),
        purity: purity(&rho),
        minimizers: Minimizers {
            lqu: Minimizer::from(&lqu_report),
            qip: Minimizer::from(&qip_report.raw),
            discord_entropic: discord.as_ref().map(Minimizer::from),
        },
    };
    emit(None, &output::to_json(&report))
}

pub fn sweep(args: &SweepArgs) -> Result<(), Failure> {
    let ps = match (&args.p_grid, args.points) {
        (Some(text), _) => parse_list(text)
            .ok_or_else(|| Failure::Input(format!("cannot parse p grid `{text}`")))?,
        (None, Some(n)) => default_grid(n),
        (None, None) => default_grid(SWEEP_POINTS),
    };
    if let Some(&bad) = ps.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(Error::OutOfRange {
            name: "p",
            value: bad,
        }
        .into());
    }
    let rows = sweep_rows(args.preset, &ps)?;
    let text = match args.format {
        Format::Csv => output::sweep_csv(&rows)?,
        Format::Json => output::sweep_json(args.preset.name(), &rows),
    };
    emit(args.output.as_deref(), &text)
}

pub fn estimate(args: &EstimateArgs) -> Result<(), Failure> {
    let (rho, source) = load(&args.source)?;
    let side = Subsystem::from(args.side);
    let n = parse_direction(&args.direction)?;
    let generator = embed_local(&pauli::along(n), side, rho.dims())?;
    let mut config = EstimationConfig::new(rho, generator, args.theta, args.shots, args.seed);
    config.batches = args.batches;
    let result = simulate_estimation(&config)?;

    let report = EstimateReport {
        source,
        side: side.to_string(),
        direction: n,
        theta_true: args.theta,
        shots: args.shots,
        batches: config.batches,
        seed: args.seed,
        theta_window: [config.theta_window.0, config.theta_window.1],
        theta_hat: result.theta_hat,
        bias: result.bias(args.theta),
        standard_error: result.standard_error,
        variance_empirical: result.variance_empirical,
        crb: result.crb,
        variance_to_crb: result.variance_to_crb(),
        fisher_quantum: result.fisher_quantum,
        fisher_classical: result.fisher_classical,
        probabilities: result.probabilities,
        outcome_histogram: result.outcome_histogram,
        batch_estimates: result.batch_estimates,
    };
    emit(None, &output::to_json(&report))
}

pub fn check(args: &CheckArgs) -> Result<(), Failure> {
    let suites: Vec<Suite> = if args.suite.is_empty() {
        Suite::ALL.to_vec()
    } else {
        args.suite.clone()
    };
    let config = SuiteConfig {
        seed: args.seed,
        qfi_scale: args.qfi_scale,
        ..SuiteConfig::default()
    };
    let results = suite::run(&suites, &config)?;
    let mut out = std::io::stdout().lock();
    let mut failed = 0;
    for r in &results {
        let tag = if r.passed() { "PASS" } else { "FAIL" };
        failed += usize::from(!r.passed());
        writeln!(
            out,
            "{tag}  {:<55} cases={:<5} worst={:.3e} tol={:.0e}",
            r.name, r.cases, r.worst_residual, r.tolerance
        )
        .map_err(|e| Failure::io("<stdout>", e))?;
    }
    writeln!(out, "{} properties, {} failed", results.len(), failed)
        .map_err(|e| Failure::io("<stdout>", e))?;
    if failed > 0 {
        return Err(Failure::Check {
            failed,
            total: results.len(),
        });
    }
    Ok(())
}
