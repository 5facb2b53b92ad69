use std::fs::File;
use std::io::{self, BufWriter, Write};

use contour_duo::{
    canonical_state, classify_empirical, find_limit_cycle, predict, simulate, spectrum_grid, sweep,
    verify_instance, EmpiricalMode, ExactRatio, InitialStatePolicy, ModePrediction, ModelError,
    SystemParams, SystemState,
};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::args::{
    CycleArgs, DiagramArgs, DiagramSource, OutputArgs, OutputFormat, ParamArgs, SimulateArgs,
    StartArgs, StatesArg, SweepArgs,
};
use crate::report::{
    trajectory_rows, DiagramCell, DiagramJson, InstanceCsv, InstanceJson, SweepJson, TrajectoryJson,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_INADMISSIBLE: i32 = 2;
pub const EXIT_DISCREPANCY: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("{0}")]
    Usage(String),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Model(ModelError::Inadmissible(_)) => EXIT_INADMISSIBLE,
            _ => EXIT_INVALID,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

fn params(args: &ParamArgs) -> CliResult<SystemParams> {
    Ok(SystemParams::new(args.n, args.d, args.l1, args.l2)?)
}

fn start(params: &SystemParams, args: &StartArgs) -> CliResult<SystemState> {
    let canonical = canonical_state(params);
    Ok(params.state(
        args.x1.unwrap_or(canonical.x1),
        args.x2.unwrap_or(canonical.x2),
    )?)
}

fn no_ascii(output: &OutputArgs, what: &str) -> CliResult<()> {
    if output.format == OutputFormat::Ascii {
        return Err(CliError::Usage(format!(
            "{what} supports json and csv output only"
        )));
    }
    Ok(())
}

/// Destination chosen by `--out`, defaulting to the supplied writer.
fn with_sink<F>(output: &OutputArgs, stdout: &mut dyn Write, f: F) -> CliResult<()>
where
    F: FnOnce(&mut dyn Write) -> CliResult<()>,
{
    match &output.out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            f(&mut w)?;
            w.flush()?;
        }
        None => f(stdout)?,
    }
    Ok(())
}

fn write_json<T: Serialize>(w: &mut dyn Write, value: &T) -> CliResult<()> {
    serde_json::to_writer_pretty(&mut *w, value)?;
    writeln!(w)?;
    Ok(())
}

fn write_csv<T: Serialize>(w: &mut dyn Write, rows: impl IntoIterator<Item = T>) -> CliResult<()> {
    let mut csv = csv::Writer::from_writer(w);
    for row in rows {
        csv.serialize(row)?;
    }
    csv.flush()?;
    Ok(())
}

pub fn cmd_simulate(args: &SimulateArgs, stdout: &mut dyn Write) -> CliResult<i32> {
    no_ascii(&args.output, "simulate")?;
    let p = params(&args.params)?;
    let x0 = start(&p, &args.start)?;
    let steps = args.steps.unwrap_or(p.n() * p.n());
    let traj = simulate(&p, x0, steps)?;
    let rows = trajectory_rows(&traj);
    with_sink(&args.output, stdout, |w| match args.output.format {
        OutputFormat::Csv => write_csv(w, &rows),
        _ => write_json(
            w,
            &TrajectoryJson {
                params: (&p).into(),
                x0: x0.into(),
                steps,
                rows: rows.clone(),
            },
        ),
    })?;
    Ok(EXIT_OK)
}

pub fn cmd_cycle(args: &CycleArgs, stdout: &mut dyn Write) -> CliResult<i32> {
    no_ascii(&args.output, "cycle")?;
    let p = params(&args.params)?;
    let x0 = start(&p, &args.start)?;
    let report = verify_instance(&p, x0)?;
    with_sink(&args.output, stdout, |w| match args.output.format {
        OutputFormat::Csv => write_csv(w, [InstanceCsv::from(&report)]),
        _ => write_json(w, &InstanceJson::from(&report)),
    })?;
    Ok(EXIT_OK)
}

/// One-line summary such as `cluster-motion T=11 v=10/11`.
pub fn describe_prediction(params: &SystemParams, prediction: &ModePrediction) -> String {
    match prediction {
        ModePrediction::FreeMovement => "free v=1".to_string(),
        ModePrediction::Collapse => "collapse v=0".to_string(),
        ModePrediction::ClusterMotion { velocity, .. } => {
            format!(
                "cluster-motion T={} v={}",
                prediction.period(params),
                velocity
            )
        }
    }
}

pub fn cmd_classify(args: &ParamArgs, stdout: &mut dyn Write) -> CliResult<i32> {
    let p = params(args)?;
    writeln!(stdout, "{}", describe_prediction(&p, &predict(&p)))?;
    Ok(EXIT_OK)
}

fn cell(l1: usize, l2: usize, mode: char, v: ExactRatio) -> DiagramCell {
    DiagramCell {
        l1,
        l2,
        mode,
        v_num: v.numerator(),
        v_den: v.denominator(),
    }
}

/// Diagram cells with `l1` outer and `l2` inner, both ascending.
pub fn diagram_cells(n: usize, d: usize, source: DiagramSource) -> CliResult<Vec<DiagramCell>> {
    let grid = spectrum_grid(n, d)?;
    match source {
        DiagramSource::Theory => Ok(grid
            .iter()
            .map(|((l1, l2), m)| cell(l1, l2, m.glyph(), m.velocity()))
            .collect()),
        DiagramSource::Simulation => {
            let coords: Vec<(usize, usize)> = grid.iter().map(|(c, _)| c).collect();
            coords
                .par_iter()
                .map(|&(l1, l2)| {
                    let p = SystemParams::new(n, d, l1, l2)?;
                    let cycle = find_limit_cycle(&p, canonical_state(&p))?;
                    let glyph = match classify_empirical(&cycle) {
                        EmpiricalMode::FreeMovement => '.',
                        EmpiricalMode::Collapse => '#',
                        EmpiricalMode::Intermediate { .. } => '+',
                    };
                    Ok(cell(l1, l2, glyph, cycle.velocities[0]))
                })
                .collect()
        }
    }
}

/// `(n-1)` lines of `(n-1)` glyphs; line `i` is `l1 = i + 1`.
pub fn render_ascii(n: usize, cells: &[DiagramCell]) -> String {
    let side = n - 1;
    let mut out = String::with_capacity(side * (side + 1));
    for row in cells.chunks(side) {
        out.extend(row.iter().map(|c| c.mode));
        out.push('\n');
    }
    out
}

pub fn cmd_diagram(args: &DiagramArgs, stdout: &mut dyn Write) -> CliResult<i32> {
    let cells = diagram_cells(args.n, args.d, args.source)?;
    with_sink(&args.output, stdout, |w| match args.output.format {
        OutputFormat::Json => write_json(
            w,
            &DiagramJson {
                n: args.n,
                d: args.d,
                source: match args.source {
                    DiagramSource::Theory => "theory",
                    DiagramSource::Simulation => "simulation",
                },
                cells: cells.clone(),
            },
        ),
        OutputFormat::Csv => write_csv(w, &cells),
        OutputFormat::Ascii => {
            w.write_all(render_ascii(args.n, &cells).as_bytes())?;
            Ok(())
        }
    })?;
    Ok(EXIT_OK)
}

pub fn cmd_sweep(args: &SweepArgs, stdout: &mut dyn Write) -> CliResult<i32> {
    no_ascii(&args.output, "sweep")?;
    let policy = match args.states {
        StatesArg::All => InitialStatePolicy::AllAdmissible,
        StatesArg::Canonical => InitialStatePolicy::Canonical,
    };
    let report = sweep(args.n_min, args.n_max, policy)?;
    with_sink(&args.output, stdout, |w| match args.output.format {
        OutputFormat::Csv => write_csv(w, report.rows.iter().map(InstanceCsv::from)),
        _ => write_json(w, &SweepJson::from(&report)),
    })?;
    let discrepancies = report.totals.instances - report.totals.agreements;
    Ok(if args.strict && discrepancies > 0 {
        EXIT_DISCREPANCY
    } else {
        EXIT_OK
    })
}
