use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use hypiss::certifier::xi_sweep;
use hypiss::lyapunov::fit_decay_rate;
use hypiss::scenario::WeightsSpec;
use hypiss::{CertificateReport, Error, LyapunovTrace, Scenario, ScenarioSpec};
use rayon::prelude::*;
use serde::Serialize;

use crate::csvout::{num, opt, text_table, CsvFile};
use crate::reference;

/// Exit codes shared by all subcommands.
pub mod exit {
    pub const OK: u8 = 0;
    /// Certificate failed, or a table row could not be computed.
    pub const FAILED: u8 = 1;
    /// Unreadable scenario or bad arguments.
    pub const INPUT: u8 = 2;
    /// The simulation produced a non-finite state.
    pub const NUMERICAL: u8 = 3;
}

/// Errors caused by the user's input rather than by the computation.
#[derive(Debug)]
pub struct InputError(pub String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

pub struct Options {
    pub scenario: PathBuf,
    pub out: PathBuf,
    pub force: bool,
    pub stride: Option<usize>,
    pub cells: Vec<usize>,
    pub xi_range: Option<(f64, f64, usize)>,
}

fn load(path: &Path) -> Result<Scenario> {
    let spec = ScenarioSpec::from_path(path).map_err(|e| InputError(e.to_string()))?;
    build(&spec)
}

fn build(spec: &ScenarioSpec) -> Result<Scenario> {
    spec.build().map_err(|e| match e {
        Error::Scenario(_) | Error::Dimension(_) | Error::InvalidGrid(_) | Error::SignPattern { .. } | Error::Model(_) => {
            InputError(format!("{}: {e}", spec.name)).into()
        }
        other => anyhow::Error::from(other),
    })
}

fn prepare_out(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("cannot create output directory {}", dir.display()))
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    fs::write(path, text + "\n").with_context(|| format!("cannot write {}", path.display()))
}

#[derive(Serialize)]
struct CertificateFile<'a> {
    scenario: &'a str,
    notes: &'a [String],
    report: &'a CertificateReport,
}

fn write_certificate(out: &Path, sc: &Scenario, report: &CertificateReport) -> Result<String> {
    write_json(
        &out.join("certificate.json"),
        &CertificateFile {
            scenario: &sc.spec.name,
            notes: &sc.notes,
            report,
        },
    )?;
    let mut text = format!("scenario: {}\n", sc.spec.name);
    for n in &sc.notes {
        text.push_str(&format!("note: {n}\n"));
    }
    text.push_str(&report.to_text());
    fs::write(out.join("certificate.txt"), &text)?;
    Ok(text)
}

pub fn certify(opts: &Options) -> Result<u8> {
    let sc = load(&opts.scenario)?;
    prepare_out(&opts.out)?;
    let report = sc.certify()?;
    print!("{}", write_certificate(&opts.out, &sc, &report)?);
    Ok(if report.passed { exit::OK } else { exit::FAILED })
}

#[derive(Serialize)]
struct Summary<'a> {
    scenario: &'a str,
    certified: bool,
    forced: bool,
    cells: usize,
    steps: usize,
    dt: f64,
    eta: f64,
    nu: f64,
    initial_lyapunov: f64,
    final_lyapunov: f64,
    /// Least-squares rate of `ln L` over the second half of the run.
    measured_decay_rate: Option<f64>,
    /// `max_n (L^n - U^n)`; absent when the envelope is undefined.
    max_envelope_violation: Option<f64>,
    notes: &'a [String],
}

pub fn run(opts: &Options) -> Result<u8> {
    let sc = load(&opts.scenario)?;
    prepare_out(&opts.out)?;
    let report = sc.certify()?;
    write_certificate(&opts.out, &sc, &report)?;
    if !report.passed && !opts.force {
        let w = report.failure.as_ref().map(|w| w.to_string()).unwrap_or_default();
        eprintln!("certificate failed ({w}); pass --force to simulate anyway");
        return Ok(exit::FAILED);
    }
    let run = match sc.run(opts.stride) {
        Ok(r) => r,
        Err(e @ Error::NonFinite { .. }) => {
            eprintln!("simulation aborted: {e}");
            return Ok(exit::NUMERICAL);
        }
        Err(e) => return Err(e.into()),
    };
    let trace = LyapunovTrace::from_run(&run, report.eta, report.nu, sc.xi, &sc.grid).ok();

    let mut csv = CsvFile::create(&opts.out.join("trace.csv"), &["n", "t", "L", "U", "sup_b_sq"])?;
    for n in 0..run.times.len() {
        let sup = if n == 0 { 0.0 } else { run.sup_disturbance_sq[n - 1] };
        let u = trace.as_ref().map(|t| t.envelope[n]);
        csv.row([n.to_string(), num(run.times[n]), num(run.lyapunov[n]), opt(u), num(sup)])?;
    }
    csv.finish()?;

    if opts.stride.is_some() {
        let k = sc.coefficients.k();
        let mut header = vec!["n".to_string(), "t".into(), "j".into(), "x".into()];
        header.extend((1..=k).map(|i| format!("w{i}")));
        let header: Vec<&str> = header.iter().map(String::as_str).collect();
        let mut csv = CsvFile::create(&opts.out.join("trajectory.csv"), &header)?;
        for state in &run.history {
            for j in 0..state.cells() as isize {
                let mut row = vec![state.step().to_string(), num(state.time()), j.to_string(), num(sc.grid.center(j))];
                row.extend(state.cell(j).iter().map(|v| num(*v)));
                csv.row(row)?;
            }
        }
        csv.finish()?;
    }

    let half = 0.5 * sc.grid.final_time();
    let summary = Summary {
        scenario: &sc.spec.name,
        certified: report.passed,
        forced: !report.passed,
        cells: sc.grid.cells(),
        steps: sc.grid.steps(),
        dt: sc.grid.dt(),
        eta: report.eta,
        nu: report.nu,
        initial_lyapunov: run.lyapunov[0],
        final_lyapunov: *run.lyapunov.last().expect("at least one level"),
        measured_decay_rate: fit_decay_rate(&run.times, &run.lyapunov, half).ok(),
        max_envelope_violation: trace.as_ref().map(LyapunovTrace::max_violation),
        notes: &sc.notes,
    };
    write_json(&opts.out.join("summary.json"), &summary)?;
    println!(
        "{}: L0 = {}, L(T) = {}, max envelope violation = {}",
        sc.spec.name,
        summary.initial_lyapunov,
        summary.final_lyapunov,
        opt(summary.max_envelope_violation)
    );
    Ok(exit::OK)
}

#[derive(Debug)]
struct TableRow {
    cells: usize,
    eta: Option<f64>,
    certified: bool,
    sup: Option<f64>,
    l2: Option<f64>,
    l2_time: Option<f64>,
    reference: Option<reference::Reference>,
    error: Option<String>,
}

fn table_row(spec: &ScenarioSpec, cells: usize, force: bool) -> TableRow {
    let mut row = TableRow {
        cells,
        eta: None,
        certified: false,
        sup: None,
        l2: None,
        l2_time: None,
        reference: reference::lookup(spec, cells),
        error: None,
    };
    let result = (|| -> Result<()> {
        let sc = build(&spec.with_grid(cells, spec.grid.cfl))?;
        let report = sc.certify()?;
        row.eta = Some(report.eta);
        row.certified = report.passed;
        if !report.passed && !force {
            let w = report.failure.map(|w| w.to_string()).unwrap_or_default();
            anyhow::bail!("certificate failed: {w}");
        }
        let norms = sc.trace(&report)?.1.gap_norms();
        row.sup = Some(norms.sup);
        row.l2 = Some(norms.l2);
        row.l2_time = Some(norms.l2_time);
        Ok(())
    })();
    row.error = result.err().map(|e| format!("{e:#}"));
    row
}

fn rel_dev(got: Option<f64>, want: Option<f64>) -> Option<f64> {
    Some((got? - want?) / want?)
}

pub fn table(opts: &Options) -> Result<u8> {
    let spec = ScenarioSpec::from_path(&opts.scenario).map_err(|e| InputError(e.to_string()))?;
    if opts.cells.iter().any(|&c| c < 2) || opts.cells.windows(2).any(|w| w[1] <= w[0]) {
        return Err(InputError("--J-list entries must be at least 2 and strictly increasing".into()).into());
    }
    prepare_out(&opts.out)?;
    let mu = match &spec.weights {
        WeightsSpec::Exponential { mu, .. } => Some(*mu),
        WeightsSpec::Explicit { .. } => None,
    };
    let rows: Vec<TableRow> = opts.cells.par_iter().map(|&c| table_row(&spec, c, opts.force)).collect();

    let header = [
        "J", "sup", "l2", "l2_time", "mu", "eta", "certified", "ref_sup", "ref_l2", "ref_eta", "dev_sup", "dev_l2",
        "dev_eta", "error",
    ];
    let mut csv = CsvFile::create(&opts.out.join("table.csv"), &header)?;
    let mut text_rows = Vec::new();
    for r in &rows {
        let reference = r.reference;
        let (rs, rl, re) = (reference.map(|x| x.sup), reference.map(|x| x.l2), reference.map(|x| x.eta));
        let devs = [rel_dev(r.sup, rs), rel_dev(r.l2, rl), rel_dev(r.eta, re)];
        csv.row([
            r.cells.to_string(),
            opt(r.sup),
            opt(r.l2),
            opt(r.l2_time),
            opt(mu),
            opt(r.eta),
            r.certified.to_string(),
            opt(rs),
            opt(rl),
            opt(re),
            opt(devs[0]),
            opt(devs[1]),
            opt(devs[2]),
            r.error.clone().unwrap_or_default(),
        ])?;
        let fmt = |x: Option<f64>| x.map(|v| format!("{v:.5}")).unwrap_or_else(|| "-".into());
        let pct = |x: Option<f64>| x.map(|v| format!("{:+.2}%", 100.0 * v)).unwrap_or_else(|| "-".into());
        text_rows.push(vec![
            r.cells.to_string(),
            fmt(r.sup),
            fmt(r.l2),
            fmt(mu),
            fmt(r.eta),
            pct(devs[0]),
            pct(devs[1]),
            pct(devs[2]),
            r.error.clone().unwrap_or_default(),
        ]);
    }
    csv.finish()?;
    let text = text_table(
        &["J", "|U-L|_sup", "|U-L|_l2", "mu", "eta", "dev sup", "dev l2", "dev eta", "error"],
        &text_rows,
    );
    fs::write(opts.out.join("table.txt"), &text)?;
    print!("{text}");
    Ok(if rows.iter().any(|r| r.error.is_some()) { exit::FAILED } else { exit::OK })
}

pub fn parse_xi_range(s: &str) -> std::result::Result<(f64, f64, usize), String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [a, b, n] = parts[..] else {
        return Err(format!("expected a:b:steps, got {s:?}"));
    };
    let a: f64 = a.parse().map_err(|_| format!("bad lower bound {a:?}"))?;
    let b: f64 = b.parse().map_err(|_| format!("bad upper bound {b:?}"))?;
    let n: usize = n.parse().map_err(|_| format!("bad step count {n:?}"))?;
    if !(a > 0.0) || !(b >= a) || !b.is_finite() || n == 0 {
        return Err(format!("need 0 < a <= b and steps >= 1, got {s:?}"));
    }
    Ok((a, b, n))
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    let mut v: Vec<f64> = (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect();
    v[n - 1] = b;
    v
}

pub fn sweep(opts: &Options) -> Result<u8> {
    let sc = load(&opts.scenario)?;
    prepare_out(&opts.out)?;
    let xis = match opts.xi_range {
        Some((a, b, n)) => linspace(a, b, n),
        None => vec![sc.xi],
    };
    let rows = xis
        .par_iter()
        .map(|&xi| xi_sweep(&sc.coefficients, &sc.weights, &sc.grid, &[xi]).map(|mut r| r.remove(0)))
        .collect::<hypiss::Result<Vec<_>>>()?;

    let header = ["xi", "kappa12_max", "kappa21_max", "nu", "eta", "envelope_gain", "boundary_passed"];
    let mut csv = CsvFile::create(&opts.out.join("sweep.csv"), &header)?;
    let mut text_rows = Vec::new();
    for r in &rows {
        csv.row([
            num(r.xi),
            opt(r.kappa12_max),
            opt(r.kappa21_max),
            num(r.nu),
            num(r.eta),
            num(r.envelope_gain),
            r.boundary_passed.to_string(),
        ])?;
        let f4 = |x: Option<f64>| x.map(|v| format!("{v:.4}")).unwrap_or_else(|| "-".into());
        text_rows.push(vec![
            format!("{:.4}", r.xi),
            f4(r.kappa12_max),
            f4(r.kappa21_max),
            format!("{:.4}", r.nu),
            format!("{:.5}", r.eta),
            format!("{:.4}", r.envelope_gain),
            if r.boundary_passed { "pass" } else { "FAIL" }.into(),
        ]);
    }
    csv.finish()?;
    let text = text_table(&["xi", "kappa12<=", "kappa21<=", "nu", "eta", "(1+1/xi)nu/eta", "C3"], &text_rows);
    fs::write(opts.out.join("sweep.txt"), &text)?;
    print!("{text}");
    Ok(exit::OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn xi_range_parsing() {
        assert_eq!(parse_xi_range("0.1:2:20").unwrap(), (0.1, 2.0, 20));
        assert!(parse_xi_range("0:1:3").is_err());
        assert!(parse_xi_range("1:0.5:3").is_err());
        assert!(parse_xi_range("1:2").is_err());
        assert!(parse_xi_range("1:2:0").is_err());
    }

    #[test]
    fn linspace_ends() {
        assert_eq!(linspace(0.5, 0.5, 1), vec![0.5]);
        let v = linspace(0.1, 1.0, 10);
        assert_eq!(v.len(), 10);
        assert_eq!(v[0], 0.1);
        assert_eq!(v[9], 1.0);
    }
}
