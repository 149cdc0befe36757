//! Command-line entry point: generators, solvers, verifiers, and reports.
//!
//! Subcommands mirror the library: `gen {pat, random, dual4, halfspace}`,
//! `solve net`, `verify {lemma21, lemma31, vc, duality, lemma23}`,
//! `report {growth, falsify}`. Every randomized command takes an explicit
//! `--seed`; no ambient entropy enters anywhere, so every run is replayable.
//! Verifiers always write their machine-readable JSON report, pass or fail,
//! and the process exits 0 exactly when all requested assertions pass.

use crate::construction::{build_family, max_independent_bound, IndependenceMode};
use crate::duality::{check_random_box_halfspace_equivalence, check_random_incidences};
use crate::instance::InstanceFile;
use crate::rangespace::RangeSpace;
use crate::rational::Rational;
use crate::reports::{falsify_small_nets, growth_csv, growth_table, GrowthModes, ReportError};
use crate::solver::{greedy_hitting_set, hw_sample_net, min_epsilon_net, DEFAULT_NODE_BUDGET};
use crate::staged::{classify_and_count, survival_estimate, StagedPointSet};
use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::path::{Path, PathBuf};
use std::time::Instant;

#[derive(Parser)]
#[command(
    name = "epsnet",
    about = "Build rectangle, box, half-space, and random-planar instances with certifiably large epsilon-nets, then solve and verify them exactly",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance file
    #[command(subcommand)]
    Gen(GenCommand),
    /// Solve an instance
    #[command(subcommand)]
    Solve(SolveCommand),
    /// Check a claimed property, writing a JSON report
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Produce growth tables and falsification logs
    #[command(subcommand)]
    Report(ReportCommand),
}

#[derive(Subcommand)]
enum GenCommand {
    /// The deterministic rectangle family, optionally blown up into chains
    Pat {
        #[arg(long)]
        c: u32,
        #[arg(long)]
        d: u32,
        /// Replace each rectangle by a chain of this many near-copies
        #[arg(long)]
        blowup: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// A staged random planar point set with window parameter r
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// 4-space corner-box dualization of a rectangle instance
    Dual4 {
        #[arg(long)]
        inst: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Half-space emulation of a rectangle instance
    Halfspace {
        #[arg(long)]
        inst: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SolveMode {
    Exact,
    Greedy,
    Sample,
}

#[derive(Subcommand)]
enum SolveCommand {
    /// Minimum epsilon-net of the instance's range space
    Net {
        #[arg(long)]
        inst: PathBuf,
        /// Exact rational threshold, e.g. 1/128
        #[arg(long)]
        eps: Rational,
        #[arg(long, value_enum)]
        mode: SolveMode,
        /// Required for --mode sample
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Maximum r-independent set against the proven bound
    Lemma21 {
        #[arg(long)]
        c: u32,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        r: usize,
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Stage partition, interval counts, failure frequencies, witnesses
    Lemma31 {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        /// Size of the candidate set (the first K indices)
        #[arg(long)]
        i_size: usize,
        #[arg(long)]
        trials: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// VC-dimension of an instance's range space by brute-force shattering
    Vc {
        #[arg(long)]
        inst: PathBuf,
        /// Search cutoff
        #[arg(long, default_value_t = 4)]
        max_d: usize,
        /// Fail unless the computed dimension equals this
        #[arg(long)]
        expect: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Random rectangle/query incidence equivalence, plus the box-space
    /// isomorphism when --c/--d are given
    Duality {
        #[arg(long)]
        samples: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        c: Option<u32>,
        #[arg(long)]
        d: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Box-versus-half-space membership equivalence after rescaling
    Lemma23 {
        #[arg(long)]
        sets: usize,
        #[arg(long)]
        boxes: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        n_max: usize,
        #[arg(long, default_value_t = 4)]
        m_max: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum ReportCommand {
    /// Growth table: certified net lower bounds per r
    Growth {
        #[arg(long, default_value_t = 2)]
        r_min: usize,
        #[arg(long, default_value_t = 3)]
        r_max: usize,
        /// Comma-separated subset of greedy,exact,sample
        #[arg(long, default_value = "greedy,exact")]
        modes: String,
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
        /// Required when modes include sample
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
        /// Also write the rows (timings included) as JSON
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Random candidates below the certified minimum must all fail
    Falsify {
        #[arg(long)]
        inst: PathBuf,
        #[arg(long)]
        eps: Rational,
        #[arg(long)]
        size: usize,
        #[arg(long)]
        samples: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Parse and run from process arguments; returns the exit status.
pub fn run() -> i32 {
    run_from(std::env::args())
}

/// Testable entry point. Exit status 0 means every requested assertion
/// passed; 1 means an assertion or operational failure; 2 a usage error.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let code = err.exit_code();
            let _ = err.print();
            return if code == 0 { 0 } else { 2 };
        }
    };
    match execute(cli.command) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(err) => {
            eprintln!("error: {err:#}");
            1
        }
    }
}

fn write_json<T: Serialize>(out: Option<&Path>, value: &T) -> anyhow::Result<()> {
    let text = serde_json::to_string_pretty(value).context("serializing report")?;
    match out {
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?
        }
        None => println!("{text}"),
    }
    Ok(())
}

fn load_instance(path: &Path) -> anyhow::Result<InstanceFile> {
    InstanceFile::load(path).with_context(|| format!("loading instance {}", path.display()))
}

fn instance_space(path: &Path) -> anyhow::Result<(InstanceFile, RangeSpace)> {
    let inst = load_instance(path)?;
    let rs = inst
        .to_range_space()
        .context("building the instance's range space")?;
    Ok((inst, rs))
}

fn execute(command: Command) -> anyhow::Result<bool> {
    match command {
        Command::Gen(cmd) => run_gen(cmd),
        Command::Solve(cmd) => run_solve(cmd),
        Command::Verify(cmd) => run_verify(cmd),
        Command::Report(cmd) => run_report(cmd),
    }
}

fn run_gen(cmd: GenCommand) -> anyhow::Result<bool> {
    match cmd {
        GenCommand::Pat { c, d, blowup, out } => {
            let inst = match blowup {
                Some(t) => InstanceFile::pat_blowup(c, d, t)?,
                None => InstanceFile::pat(c, d)?,
            };
            inst.save(&out)?;
        }
        GenCommand::Random { n, r, seed, out } => {
            InstanceFile::random(n, r, seed)?.save(&out)?;
        }
        GenCommand::Dual4 { inst, out } => {
            load_instance(&inst)?.dual4_from()?.save(&out)?;
        }
        GenCommand::Halfspace { inst, out } => {
            load_instance(&inst)?.halfspace_from()?.save(&out)?;
        }
    }
    Ok(true)
}

#[derive(Serialize)]
struct SolveReport {
    version: u32,
    instance: String,
    kind: String,
    eps: Rational,
    mode: String,
    seed: Option<u64>,
    budget: Option<u64>,
    size: usize,
    solution: Vec<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lower_bound: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    optimal: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    nodes_explored: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    attempts: Option<u64>,
    wall_time_ms: u128,
}

fn run_solve(cmd: SolveCommand) -> anyhow::Result<bool> {
    let SolveCommand::Net {
        inst,
        eps,
        mode,
        seed,
        budget,
        out,
    } = cmd;
    if !eps.is_positive() || eps > Rational::one() {
        bail!("--eps must lie in (0, 1], got {eps}");
    }
    let started = Instant::now();
    let (file, rs) = instance_space(&inst)?;
    let (mode_name, size, solution, lower_bound, optimal, nodes, attempts) = match mode {
        SolveMode::Exact => {
            let res = min_epsilon_net(&rs, &eps, budget)?;
            (
                "exact",
                res.size,
                res.solution,
                Some(res.lower_bound),
                Some(res.optimal),
                Some(res.nodes_explored),
                None,
            )
        }
        SolveMode::Greedy => {
            let heavy = rs.heavy_ranges(&eps);
            let solution = if heavy.ranges().is_empty() {
                vec![]
            } else {
                greedy_hitting_set(&heavy)?
            };
            ("greedy", solution.len(), solution, None, None, None, None)
        }
        SolveMode::Sample => {
            let Some(seed) = seed else {
                bail!("--mode sample requires an explicit --seed");
            };
            let res = hw_sample_net(&rs, &eps, seed);
            (
                "sample",
                res.net.len(),
                res.net,
                None,
                None,
                None,
                Some(res.attempts),
            )
        }
    };
    let report = SolveReport {
        version: 1,
        instance: inst.display().to_string(),
        kind: file.payload.kind_name().to_string(),
        eps,
        mode: mode_name.to_string(),
        seed,
        budget: matches!(mode, SolveMode::Exact).then_some(budget),
        size,
        solution,
        lower_bound,
        optimal,
        nodes_explored: nodes,
        attempts,
        wall_time_ms: started.elapsed().as_millis(),
    };
    write_json(Some(&out), &report)?;
    Ok(true)
}

#[derive(Serialize)]
struct Lemma21Report {
    c: u32,
    d: u32,
    r: usize,
    family_size: usize,
    bound: Rational,
    max_independent: usize,
    solver_optimal: bool,
    witness_within_bound: bool,
    witness_satisfies_inequality: bool,
    pass: bool,
}

#[derive(Serialize)]
struct Lemma31Report {
    n: usize,
    r: usize,
    i_size: usize,
    trials: u64,
    seed: u64,
    stages: usize,
    survived: u64,
    survival_frequency: f64,
    analytic_stage_bound: f64,
    analytic_all_stages_bound: f64,
    three_sigma: f64,
    count_checks_all_passed: bool,
    survival_within_bound: bool,
    witness_exactness_checked: bool,
    witness_exactness_ok: bool,
    pass: bool,
}

#[derive(Serialize)]
struct VcReport {
    instance: String,
    kind: String,
    cap: usize,
    vc_dimension: usize,
    expected: Option<usize>,
    pass: bool,
}

#[derive(Serialize)]
struct DualityReport {
    samples: usize,
    seed: u64,
    incidences_ok: bool,
    isomorphism_checked: bool,
    isomorphism_ok: bool,
    pass: bool,
}

#[derive(Serialize)]
struct Lemma23Report {
    sets: usize,
    boxes_per_set: usize,
    memberships_checked: usize,
    pass: bool,
}

fn run_verify(cmd: VerifyCommand) -> anyhow::Result<bool> {
    match cmd {
        VerifyCommand::Lemma21 {
            c,
            d,
            r,
            budget,
            out,
        } => {
            let family = build_family(c, d)?;
            let bound = max_independent_bound(c, d, r)?;
            let res = crate::solver::max_r_independent(&family, r, budget)?;
            let within = Rational::from(res.size) <= bound;
            let ineq = family
                .verify_inequality_x(&res.solution, r, IndependenceMode::AtLeastR)
                .unwrap_or(false);
            let pass = within && ineq && res.optimal;
            let report = Lemma21Report {
                c,
                d,
                r,
                family_size: family.len(),
                bound,
                max_independent: res.size,
                solver_optimal: res.optimal,
                witness_within_bound: within,
                witness_satisfies_inequality: ineq,
                pass,
            };
            write_json(out.as_deref(), &report)?;
            Ok(pass)
        }
        VerifyCommand::Lemma31 {
            n,
            r,
            i_size,
            trials,
            seed,
            out,
        } => {
            if i_size > n {
                bail!("--i-size may not exceed --n");
            }
            let set: Vec<usize> = (0..i_size).collect();
            let survival = survival_estimate(n, r, &set, trials, seed)?;
            let survival_within = survival.stages == 0
                || survival.survival_frequency
                    <= survival.analytic_all_stages_bound + survival.three_sigma;
            let (checked, witness_ok) = witness_exactness_check(n, r, &set, seed)?;
            let pass = survival.count_checks_all_passed && survival_within && witness_ok;
            let report = Lemma31Report {
                n,
                r,
                i_size,
                trials,
                seed,
                stages: survival.stages,
                survived: survival.survived,
                survival_frequency: survival.survival_frequency,
                analytic_stage_bound: survival.analytic_stage_bound,
                analytic_all_stages_bound: survival.analytic_all_stages_bound,
                three_sigma: survival.three_sigma,
                count_checks_all_passed: survival.count_checks_all_passed,
                survival_within_bound: survival_within,
                witness_exactness_checked: checked,
                witness_exactness_ok: witness_ok,
                pass,
            };
            write_json(out.as_deref(), &report)?;
            Ok(pass)
        }
        VerifyCommand::Vc {
            inst,
            max_d,
            expect,
            out,
        } => {
            let (file, rs) = instance_space(&inst)?;
            let vc = rs.vc_dimension(max_d);
            let pass = expect.is_none_or(|e| e == vc);
            let report = VcReport {
                instance: inst.display().to_string(),
                kind: file.payload.kind_name().to_string(),
                cap: max_d,
                vc_dimension: vc,
                expected: expect,
                pass,
            };
            write_json(out.as_deref(), &report)?;
            Ok(pass)
        }
        VerifyCommand::Duality {
            samples,
            seed,
            c,
            d,
            out,
        } => {
            let incidences_ok = check_random_incidences(samples, seed).is_ok();
            let (isomorphism_checked, isomorphism_ok) = match (c, d) {
                (Some(c), Some(d)) => {
                    let inst = InstanceFile::pat(c, d)?;
                    let a = inst.to_range_space()?;
                    let b = inst.dual4_from()?.to_range_space()?;
                    (true, a.ranges() == b.ranges())
                }
                (None, None) => (false, true),
                _ => bail!("--c and --d must be given together"),
            };
            let pass = incidences_ok && isomorphism_ok;
            let report = DualityReport {
                samples,
                seed,
                incidences_ok,
                isomorphism_checked,
                isomorphism_ok,
                pass,
            };
            write_json(out.as_deref(), &report)?;
            Ok(pass)
        }
        VerifyCommand::Lemma23 {
            sets,
            boxes,
            seed,
            n_max,
            m_max,
            out,
        } => {
            let outcome = check_random_box_halfspace_equivalence(sets, boxes, n_max, m_max, seed);
            let (checked, pass) = match outcome {
                Ok(count) => (count, true),
                Err(_) => (0, false),
            };
            let report = Lemma23Report {
                sets,
                boxes_per_set: boxes,
                memberships_checked: checked,
                pass,
            };
            write_json(out.as_deref(), &report)?;
            Ok(pass)
        }
    }
}

/// Draw the seed's point set, force a failure on the first good interval
/// found, and confirm the witness rectangle holds exactly the members outside
/// the candidate set and nothing from it.
fn witness_exactness_check(
    n: usize,
    r: usize,
    set: &[usize],
    seed: u64,
) -> anyhow::Result<(bool, bool)> {
    let stages = crate::staged::stage_limit(n, r);
    if stages == 0 {
        return Ok((false, true));
    }
    let mut in_set = vec![false; n];
    for &i in set {
        in_set[i] = true;
    }
    let mut points = StagedPointSet::sample(n, stages, seed);
    for t in 1..=stages {
        let stage = points.carve_stage(t, &in_set, r)?;
        let counts = classify_and_count(&stage, set.len(), r, n);
        debug_assert!(counts.checks.is_none_or(|c| c.all()));
        let Some(interval) = stage.intervals.iter().find(|g| g.is_good(r)) else {
            continue;
        };
        points.force_failure(interval, &in_set, t);
        if !points.interval_fails(interval, &in_set, t) {
            return Ok((true, false));
        }
        let rect = points.witness_rectangle(interval, t);
        let inside: Vec<usize> = (0..n)
            .filter(|&i| rect.contains(&points.point(i)))
            .collect();
        let exact = inside == interval.outside && inside.iter().all(|&i| !in_set[i]);
        return Ok((true, exact));
    }
    Ok((false, true))
}

#[derive(Serialize)]
struct FalsifyOutcome {
    instance: String,
    eps: Rational,
    size: usize,
    samples: usize,
    seed: u64,
    all_failed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    passing_candidate: Option<Vec<u32>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    witnesses: Vec<crate::reports::FalsifyWitness>,
}

fn run_report(cmd: ReportCommand) -> anyhow::Result<bool> {
    match cmd {
        ReportCommand::Growth {
            r_min,
            r_max,
            modes,
            budget,
            seed,
            out,
            json,
        } => {
            let modes = parse_modes(&modes)?;
            if modes.sample && seed.is_none() {
                bail!("--modes sample requires an explicit --seed");
            }
            let rows = growth_table(r_min, r_max, modes, budget, seed.unwrap_or(0))?;
            for row in &rows {
                if let Some(g) = row.greedy_size {
                    anyhow::ensure!(
                        g >= row.lower_bound,
                        "greedy {} under certified bound {} at r = {}",
                        g,
                        row.lower_bound,
                        row.r
                    );
                }
            }
            std::fs::write(&out, growth_csv(&rows))
                .with_context(|| format!("writing {}", out.display()))?;
            if let Some(json_path) = json {
                write_json(Some(&json_path), &rows)?;
            }
            Ok(true)
        }
        ReportCommand::Falsify {
            inst,
            eps,
            size,
            samples,
            seed,
            out,
        } => {
            let (_, rs) = instance_space(&inst)?;
            let outcome = falsify_small_nets(&rs, &eps, size, samples, seed);
            let (pass, passing_candidate, witnesses) = match outcome {
                Ok(report) => (true, None, report.witnesses),
                Err(ReportError::CandidatePassed { candidate, .. }) => {
                    (false, Some(candidate), vec![])
                }
                Err(other) => return Err(other.into()),
            };
            let report = FalsifyOutcome {
                instance: inst.display().to_string(),
                eps,
                size,
                samples,
                seed,
                all_failed: pass,
                passing_candidate,
                witnesses,
            };
            write_json(out.as_deref(), &report)?;
            Ok(pass)
        }
    }
}

fn parse_modes(text: &str) -> anyhow::Result<GrowthModes> {
    let mut modes = GrowthModes {
        greedy: false,
        exact: false,
        sample: false,
    };
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match part {
            "greedy" => modes.greedy = true,
            "exact" => modes.exact = true,
            "sample" => modes.sample = true,
            other => bail!("unknown mode {other:?}; expected greedy, exact, or sample"),
        }
    }
    Ok(modes)
}
