use std::error::Error;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use omega_core::criteria::report::format_float;
use omega_core::criteria::{
    analyze, default_eps_grid, kim_series, CriterionReport, Membership, OmegaVerdict, Verdict, WindowConfig,
};
use omega_core::orbit::Orbit;
use omega_core::sequences::{
    dyadic_diagnostics, greatest_khinchin_minorant, phi_from_proof, remark_block_sums, remark_counterexample, PhiSpec,
    PsiSpec,
};
use omega_core::specfile::{parse_sequence, parse_theta, phi_to_string, psi_to_string, step_csv, theta_to_string};
use omega_core::ThetaSpec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::{AnalyzeArgs, Cli, Command, Common, ConstructArgs, DiagnosticsArgs, Format, KimArgs, SimulateArgs, WindowArgs};

pub type CliResult<T> = Result<T, Box<dyn Error>>;

pub enum Status {
    Done,
    Inconclusive,
}

pub fn run(cli: Cli) -> CliResult<Status> {
    match cli.command {
        Command::Analyze(a) => run_analyze(a),
        Command::KimSeries(a) => run_kim(a),
        Command::Simulate(a) => run_simulate(a),
        Command::ConstructPsi(a) => run_construct(a),
        Command::Diagnostics(a) => run_diagnostics(a),
    }
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()).into())
}

fn load_theta(path: &Path) -> CliResult<ThetaSpec> {
    parse_theta(&read(path)?).map_err(|e| format!("{}: {e}", path.display()).into())
}

fn load_psi(path: &Path) -> CliResult<PsiSpec> {
    Ok(parse_sequence(&read(path)?)
        .map_err(|e| format!("{}: {e}", path.display()))?
        .into_psi())
}

fn load_phi(path: &Path) -> CliResult<PhiSpec> {
    Ok(parse_sequence(&read(path)?)
        .map_err(|e| format!("{}: {e}", path.display()))?
        .into_phi())
}

fn positive(name: &str, ok: bool) -> CliResult<()> {
    if ok {
        Ok(())
    } else {
        Err(format!("--{name} must be positive").into())
    }
}

fn window(w: &WindowArgs) -> CliResult<WindowConfig> {
    Ok(WindowConfig::new(w.rho, w.gap)?)
}

/// Header fields shared by every output file of one run.
struct Header {
    command: &'static str,
    config: Value,
    seed: u64,
}

impl Header {
    fn new(command: &'static str, args: &impl Serialize, seed: u64, specs: &[(&str, String)]) -> CliResult<Self> {
        let mut config = serde_json::to_value(args)?;
        if let Value::Object(map) = &mut config {
            map.remove("seed");
            for (key, text) in specs {
                map.insert((*key).to_string(), Value::String(text.clone()));
            }
        }
        Ok(Header { command, config, seed })
    }

    fn csv_preamble(&self) -> String {
        format!(
            "# omega {}\n# command: {}\n# config: {}\n# seed: {}\n",
            env!("CARGO_PKG_VERSION"),
            self.command,
            self.config,
            self.seed
        )
    }

    fn json(&self, result: Value) -> CliResult<String> {
        let tree = json!({
            "tool": "omega",
            "version": env!("CARGO_PKG_VERSION"),
            "command": self.command,
            "config": self.config,
            "seed": self.seed,
            "result": result,
        });
        Ok(serde_json::to_string_pretty(&tree)? + "\n")
    }
}

/// Collects output files and writes them once the run has succeeded.
struct Outputs {
    dir: PathBuf,
    files: Vec<(String, Vec<u8>)>,
}

impl Outputs {
    fn new(common: &Common) -> Self {
        Outputs {
            dir: common.out.clone(),
            files: Vec::new(),
        }
    }

    fn csv(&mut self, header: &Header, name: &str, body: impl FnOnce(&mut Vec<u8>) -> CliResult<()>) -> CliResult<()> {
        let mut buf = header.csv_preamble().into_bytes();
        body(&mut buf)?;
        self.files.push((name.to_string(), buf));
        Ok(())
    }

    fn text(&mut self, name: &str, text: String) {
        self.files.push((name.to_string(), text.into_bytes()));
    }

    fn write(self) -> CliResult<()> {
        fs::create_dir_all(&self.dir).map_err(|e| format!("{}: {e}", self.dir.display()))?;
        for (name, bytes) in self.files {
            let path = self.dir.join(&name);
            fs::write(&path, bytes).map_err(|e| format!("{}: {e}", path.display()))?;
            println!("wrote {}", path.display());
        }
        Ok(())
    }
}

fn run_analyze(a: AnalyzeArgs) -> CliResult<Status> {
    positive("depth", a.depth > 0)?;
    let theta = load_theta(&a.theta)?;
    let config = window(&a.window)?;
    let grid = a.eps_grid.clone().unwrap_or_else(default_eps_grid);
    let header = Header::new("analyze", &a, a.common.seed, &[("theta_spec", theta_to_string(&theta))])?;
    let table = theta.table(a.depth)?;
    let report = analyze(&table, &grid, config)?;

    let mut out = Outputs::new(&a.common);
    match a.common.format {
        Format::Csv => out.csv(&header, "analyze.csv", |buf| Ok(report.write_csv(buf)?))?,
        Format::JsonTree => out.text("analyze.json", header.json(serde_json::to_value(&report)?)?),
    }
    out.write()?;
    for e in &report.entries {
        println!(
            "{:<24} estimate {:<12} growth {:<12} {:?}",
            CriterionReport::column_name(e),
            format_float(Some(e.estimate)),
            format_float(e.growth_exponent),
            e.verdict
        );
    }
    let mut decisive: Vec<&str> = report
        .entries
        .iter()
        .filter(|e| {
            e.verdict == Verdict::Holds
                && match report.omega {
                    OmegaVerdict::InOmega => e.implies == Membership::InOmega,
                    OmegaVerdict::NotInOmega => e.implies == Membership::NotInOmega,
                    OmegaVerdict::Inconclusive => false,
                }
        })
        .map(|e| e.name.as_str())
        .collect();
    decisive.dedup();
    println!(
        "verdict: {}{}",
        report.omega,
        if decisive.is_empty() { String::new() } else { format!(" via {}", decisive.join(", ")) }
    );
    if report.conflict {
        println!("conflict: criteria for and against membership both hold");
    }
    Ok(if report.omega == OmegaVerdict::Inconclusive { Status::Inconclusive } else { Status::Done })
}

fn run_kim(a: KimArgs) -> CliResult<Status> {
    positive("depth", a.depth > 0)?;
    let theta = load_theta(&a.theta)?;
    let phi = load_phi(&a.psi)?;
    let config = window(&a.window)?;
    let header = Header::new(
        "kim-series",
        &a,
        a.common.seed,
        &[("theta_spec", theta_to_string(&theta)), ("phi_spec", phi_to_string(&phi))],
    )?;
    let table = theta.table(a.depth + 1)?;
    let trace = kim_series(&table, &phi, a.depth, config)?;

    let mut out = Outputs::new(&a.common);
    match a.common.format {
        Format::Csv => out.csv(&header, "kim-series.csv", |buf| {
            let mut s = String::from("k,log_q,term,partial_sum\n");
            for (i, (t, p)) in trace.terms.iter().zip(&trace.partial_sums).enumerate() {
                let k = trace.start + i;
                let _ = writeln!(s, "{k},{},{},{}", format_float(Some(table.log_q(k))), format_float(Some(*t)), format_float(Some(*p)));
            }
            buf.extend_from_slice(s.as_bytes());
            Ok(())
        })?,
        Format::JsonTree => out.text("kim-series.json", header.json(serde_json::to_value(&trace)?)?),
    }
    out.write()?;
    println!("terms k = {}..={}", trace.start, trace.end);
    println!("partial sum {}", format_float(Some(trace.total())));
    println!("slope vs ln k over {:?}: {}", trace.window, format_float(trace.slope));
    println!("cauchy tail {}", format_float(Some(trace.cauchy_tail)));
    println!("divergence evidence: {}", trace.divergence_evidence);
    Ok(if trace.slope.is_none() { Status::Inconclusive } else { Status::Done })
}

/// Powers of ten strictly between `q0` and `q`, then `q`.
fn default_checkpoints(q0: u64, q: u64) -> Vec<u64> {
    let mut c = Vec::new();
    let mut x = 10u64;
    while x < q {
        if x > q0 {
            c.push(x);
        }
        x = x.saturating_mul(10);
    }
    c.push(q);
    c
}

fn run_simulate(a: SimulateArgs) -> CliResult<Status> {
    positive("q0", a.q0 > 0)?;
    positive("samples", a.samples > 0)?;
    positive("delta", a.delta > 0.0)?;
    if a.q < a.q0 {
        return Err("--q must be at least --q0".into());
    }
    let theta = load_theta(&a.theta)?;
    let psi = load_psi(&a.psi)?;
    let checkpoints = a.checkpoints.clone().unwrap_or_else(|| default_checkpoints(a.q0, a.q));
    if checkpoints.last() != Some(&a.q) {
        return Err("the last checkpoint must equal --q".into());
    }
    let header = Header::new(
        "simulate",
        &a,
        a.common.seed,
        &[("theta_spec", theta_to_string(&theta)), ("psi_spec", psi_to_string(&psi))],
    )?;
    let orbit = Orbit::new(&theta, a.q, a.delta)?;
    let profile = orbit.tail_measure_profile(&psi, a.q0, &checkpoints)?;
    let mut rng = ChaCha8Rng::seed_from_u64(a.common.seed);
    let targets: Vec<f64> = (0..a.samples).map(|_| rng.random::<f64>()).collect();
    let hits = orbit.hit_counts(&psi, &targets, a.q0, a.q)?;

    let mut out = Outputs::new(&a.common);
    match a.common.format {
        Format::Csv => {
            out.csv(&header, "simulate-profile.csv", |buf| Ok(profile.write_csv(buf)?))?;
            out.csv(&header, "simulate-hits.csv", |buf| {
                let mut s = String::from("s,count,uncertain\n");
                for h in &hits {
                    let _ = writeln!(s, "{},{},{}", format_float(Some(h.s)), h.count, h.uncertain);
                }
                buf.extend_from_slice(s.as_bytes());
                Ok(())
            })?;
            out.csv(&header, "simulate-hit-list.csv", |buf| {
                let mut s = String::from("s,q,distance,psi_q,margin,certain\n");
                for h in &hits {
                    for x in &h.hits {
                        let _ = writeln!(
                            s,
                            "{},{},{},{},{},{}",
                            format_float(Some(h.s)),
                            x.q,
                            format_float(Some(x.distance)),
                            format_float(Some(x.psi_q)),
                            format_float(Some(x.margin)),
                            x.certain
                        );
                    }
                }
                buf.extend_from_slice(s.as_bytes());
                Ok(())
            })?;
        }
        Format::JsonTree => out.text(
            "simulate.json",
            header.json(json!({ "profile": profile, "hits": hits }))?,
        ),
    }
    out.write()?;
    let last = profile.checkpoints.len() - 1;
    println!(
        "measure at Q = {}: {} (inner {}, outer {}, union bound {})",
        profile.checkpoints[last],
        format_float(Some(profile.measure[last])),
        format_float(Some(profile.inner[last])),
        format_float(Some(profile.outer[last])),
        format_float(Some(profile.union_bound[last]))
    );
    println!("monotone: {}", profile.is_monotone());
    println!("below union bound: {}", profile.measure[last] <= profile.union_bound[last]);
    let hit = hits.iter().filter(|h| h.count > 0).count();
    let uncertain: u64 = hits.iter().map(|h| h.uncertain).sum();
    println!("targets hit: {hit} of {} ({uncertain} uncertain margins)", hits.len());
    Ok(Status::Done)
}

fn run_construct(a: ConstructArgs) -> CliResult<Status> {
    let mut out = Outputs::new(&a.common);
    if let Some(n) = &a.remark_n {
        let psi = remark_counterexample(n)?;
        let PsiSpec::Step(step) = &psi else { unreachable!("remark construction is a step function") };
        let range = match a.range {
            Some(r) => r,
            None => u64::try_from(step.end()).map_err(|_| "step too long for a minorant; pass --range")? - 1,
        };
        let header = Header::new("construct-psi", &a, a.common.seed, &[])?;
        let blocks = remark_block_sums(n)?;
        let minorant = greatest_khinchin_minorant(&psi, range)?;
        let runs = minorant.runs();
        match a.common.format {
            Format::Csv => {
                out.text("construct-psi.spec", psi_to_string(&psi));
                out.csv(&header, "construct-psi-step.csv", |buf| {
                    buf.extend_from_slice(step_csv(step).as_bytes());
                    Ok(())
                })?;
                out.csv(&header, "construct-psi-blocks.csv", |buf| {
                    let mut s = String::from("k,start,end,sum,exact\n");
                    for b in &blocks {
                        let _ = writeln!(s, "{},{},{},{},{}", b.k, b.start, b.end, format_float(Some(b.sum_f64)), b.matches_closed_form());
                    }
                    buf.extend_from_slice(s.as_bytes());
                    Ok(())
                })?;
                out.csv(&header, "construct-psi-minorant.csv", |buf| {
                    let mut s = String::from("start,end,g\n");
                    for (lo, hi, g) in &runs {
                        let _ = writeln!(s, "{lo},{hi},{}", format_float(Some(*g)));
                    }
                    buf.extend_from_slice(s.as_bytes());
                    Ok(())
                })?;
            }
            Format::JsonTree => out.text(
                "construct-psi.json",
                header.json(json!({
                    "psi_spec": psi_to_string(&psi),
                    "blocks": blocks,
                    "minorant_runs": runs,
                    "minorant_sum_g_over_q": minorant.sum_g_over_q,
                }))?,
            ),
        }
        out.write()?;
        println!("blocks exact: {}", blocks.iter().all(|b| b.matches_closed_form()));
        println!("minorant Σ g(q)/q over [1, {range}]: {}", format_float(Some(minorant.sum_g_over_q)));
        return Ok(Status::Done);
    }
    let (Some(theta_path), Some(k_seq)) = (&a.theta, &a.k_seq) else {
        return Err("construct-psi needs --remark-n, or --theta with --k-seq".into());
    };
    positive("depth", a.depth > 0)?;
    let theta = load_theta(theta_path)?;
    let header = Header::new("construct-psi", &a, a.common.seed, &[("theta_spec", theta_to_string(&theta))])?;
    let table = theta.table(a.depth)?;
    let phi = phi_from_proof(&table, k_seq)?;
    let PhiSpec::Step(step) = &phi else { unreachable!("table construction is a step function") };
    match a.common.format {
        Format::Csv => {
            out.text("construct-psi.spec", phi_to_string(&phi));
            out.csv(&header, "construct-psi-step.csv", |buf| {
                buf.extend_from_slice(step_csv(step).as_bytes());
                Ok(())
            })?;
        }
        Format::JsonTree => out.text(
            "construct-psi.json",
            header.json(json!({ "phi_spec": phi_to_string(&phi) }))?,
        ),
    }
    out.write()?;
    println!("φ steps: {}", step.values().len());
    Ok(Status::Done)
}

fn run_diagnostics(a: DiagnosticsArgs) -> CliResult<Status> {
    positive("depth", a.depth > 0)?;
    let theta = load_theta(&a.theta)?;
    let phi = load_phi(&a.psi)?;
    let header = Header::new(
        "diagnostics",
        &a,
        a.common.seed,
        &[("theta_spec", theta_to_string(&theta)), ("phi_spec", phi_to_string(&phi))],
    )?;
    let table = theta.table(a.depth)?;
    let d = dyadic_diagnostics(&table, &phi, a.m_max)?;

    let mut out = Outputs::new(&a.common);
    match a.common.format {
        Format::Csv => out.csv(&header, "diagnostics.csv", |buf| {
            let mut s = String::from("m,q_m,capped,ln_q_m,s_count,t_count,t_log_sum,numerator,kappa,lambda\n");
            for r in &d.records {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{},{},{},{},{}",
                    r.m,
                    r.q_m.as_deref().unwrap_or(""),
                    r.capped,
                    format_float(r.ln_q_m),
                    r.s_count,
                    r.t_count,
                    format_float(Some(r.t_log_sum)),
                    format_float(Some(r.numerator)),
                    format_float(Some(r.kappa)),
                    format_float(r.lambda)
                );
            }
            buf.extend_from_slice(s.as_bytes());
            Ok(())
        })?,
        Format::JsonTree => out.text("diagnostics.json", header.json(serde_json::to_value(&d)?)?),
    }
    out.write()?;
    println!("S indices: {:?}", d.s_indices());
    if !d.ties.is_empty() {
        println!("ties (counted in S): {:?}", d.ties);
    }
    for r in &d.records {
        println!(
            "m = {}: Q_m = {}{}, λ_m = {}",
            r.m,
            r.q_m.as_deref().unwrap_or("-"),
            if r.capped { " (capped)" } else { "" },
            format_float(r.lambda)
        );
    }
    Ok(Status::Done)
}
