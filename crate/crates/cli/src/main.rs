mod args;
mod commands;
mod config;
mod descriptor;
mod error;
mod record;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use args::{Cli, Command, Format, DEFAULT_TOLERANCE};
use commands::Axis;
use config::FileValues;
use error::{CliError, CliResult};
use record::Record;

struct Plan {
    format: Format,
    out: Option<PathBuf>,
    records: Vec<Record>,
}

fn check_tolerance(t: f64) -> CliResult<f64> {
    if t.is_finite() && t >= 0.0 {
        Ok(t)
    } else {
        Err(CliError::usage(format!(
            "tolerance must be finite and nonnegative, got {t}"
        )))
    }
}

fn check_unit(name: &str, v: f64) -> CliResult<f64> {
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(CliError::usage(format!("{name} = {v} is outside [0, 1]")))
    }
}

type Job = Box<dyn FnOnce() -> CliResult<Vec<Record>>>;

fn execute(cli: Cli) -> CliResult<Plan> {
    let mut file = match &cli.config {
        Some(path) => FileValues::load(path)?,
        None => FileValues::default(),
    };
    let tolerance = check_tolerance(
        file.f64("tolerance", cli.tolerance)?
            .unwrap_or(DEFAULT_TOLERANCE),
    )?;
    let format = match (cli.format, file.string("format", None)?) {
        (Some(f), _) => f,
        (None, Some(name)) => Format::from_str(&name, true).map_err(|_| {
            CliError::usage(format!(
                "unknown format '{name}'; expected text, jsonl or csv"
            ))
        })?,
        (None, None) => Format::Text,
    };
    let out = cli.out.or(file.string("out", None)?.map(PathBuf::from));

    let (name, job): (&str, Job) = match cli.command {
        Command::Identities(a) => {
            let corrupt = file.bool("corrupt", a.corrupt)?;
            (
                "identities",
                Box::new(move || commands::identities(tolerance, corrupt)),
            )
        }
        Command::Run(a) => {
            let state = file
                .string("state", a.state)?
                .unwrap_or(descriptor::DEFAULT_STATE.into());
            let p = check_unit("p", file.f64("p", a.p)?.unwrap_or(0.0))?;
            let q = check_unit("p_prime", file.f64("p_prime", a.p_prime)?.unwrap_or(0.0))?;
            (
                "run",
                Box::new(move || commands::run(&state, p, q, tolerance)),
            )
        }
        Command::Sweep(a) => {
            let p = Axis {
                start: file.f64("p_start", a.p_start)?.unwrap_or(0.0),
                stop: file.f64("p_stop", a.p_stop)?.unwrap_or(1.0),
                steps: file.usize("p_steps", a.p_steps)?.unwrap_or(11),
            };
            let q = Axis {
                start: file.f64("p_prime_start", a.p_prime_start)?.unwrap_or(0.0),
                stop: file.f64("p_prime_stop", a.p_prime_stop)?.unwrap_or(1.0),
                steps: file.usize("p_prime_steps", a.p_prime_steps)?.unwrap_or(11),
            };
            (
                "sweep",
                Box::new(move || commands::sweep_grid(p, q, tolerance)),
            )
        }
        Command::Nchv(a) => {
            let target = file.int("target", a.target)?.unwrap_or(1);
            let from_file = file.string("disable", None)?;
            let disable: Vec<String> = if a.disable.is_empty() {
                from_file
                    .map(|s| s.split(',').map(str::to_string).collect())
                    .unwrap_or_default()
            } else {
                a.disable
            };
            ("nchv", Box::new(move || commands::nchv(target, &disable)))
        }
        Command::Optics(a) => {
            let s = check_unit("s", file.f64("s", a.s)?.unwrap_or(1.0))?;
            let setting = file.string("setting", a.setting)?.unwrap_or("both".into());
            let state = file
                .string("state", a.state)?
                .unwrap_or(descriptor::DEFAULT_STATE.into());
            (
                "optics",
                Box::new(move || commands::optics(s, &setting, &state, tolerance)),
            )
        }
        Command::Report => ("report", Box::new(move || commands::report(tolerance))),
    };
    file.finish(name)?;
    Ok(Plan {
        format,
        out,
        records: job()?,
    })
}

fn emit(plan: &Plan) -> CliResult<()> {
    let text = record::render(&plan.records, plan.format)?;
    match &plan.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|()| stdout.flush())
                .map_err(|e| CliError::usage(format!("cannot write to stdout: {e}")))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = execute(cli).and_then(|plan| {
        emit(&plan)?;
        let failed: Vec<String> = plan
            .records
            .iter()
            .flat_map(|r| {
                r.failed_checks()
                    .map(move |c| format!("{}/{}: {}", r.command, r.record, c.name))
            })
            .collect();
        if failed.is_empty() {
            Ok(())
        } else {
            Err(CliError::Numeric(format!(
                "{} check(s) failed: {}",
                failed.len(),
                failed.join("; ")
            )))
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ctxsim: {e}");
            e.exit_code()
        }
    }
}
