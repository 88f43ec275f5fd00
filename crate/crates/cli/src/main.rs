//! `netsynth`: check, synthesize, verify and dualize admittances of the form
//! `k(a0 s^2 + a1 s + 1) / (s(d0 s^2 + d1 s + 1))`, and run the brute-force
//! realizability experiments.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use netsynth::admittance::{AdmittanceError, CanonicalAdmittance, CoefficientRecord};
use netsynth::analysis::driving_point_admittance;
use netsynth::netlist::{fid_netlist, read_netlist_any, AnyNetlist, Netlist, NetlistError};
use netsynth::oracle::{necessity_experiment, rk_zero_property, Claim};
use netsynth::ratfunc::{parse_ratfunc, Rational, Scalar, MIN_PRECISION};
use netsynth::synthesis::{classify, synthesize, Case, Classification, SynthConfig, SynthesisError};

type Y = CanonicalAdmittance<Rational>;

#[derive(Parser)]
#[command(name = "netsynth", version, about = "Low-complexity RLC realization of a family of positive-real admittances")]
struct Cli {
    /// Decimal digits for irrational element values (at least 30).
    #[arg(long, global = true, env = "NETSYNTH_PRECISION", default_value_t = 50)]
    precision: u32,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Multistart count for fitting experiments.
    #[arg(long, global = true, default_value_t = 200)]
    starts: usize,
    /// Directory for written files.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Print the JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Positive-real verdict, R_k and realization case.
    Check(InputArgs),
    /// Build, verify and write a realizing network.
    Synth(InputArgs),
    /// Compute the admittance of a netlist file.
    Verify { file: PathBuf },
    /// Run a brute-force realizability experiment.
    Enumerate {
        /// thm2, lemma8, lemma9, lemma10 or lemma14
        claim: String,
        /// Random networks for lemma9.
        #[arg(long, default_value_t = 500)]
        trials: usize,
        /// Targets per experiment (defaults: thm2 20, lemma8 200, lemma10 50, lemma14 50).
        #[arg(long)]
        instances: Option<usize>,
    },
    /// Frequency-inverse dual of coefficients or of a netlist file.
    Dual {
        #[command(flatten)]
        input: InputArgs,
        /// Netlist file to dualize instead of coefficients.
        #[arg(long, conflicts_with_all = ["coeffs", "expr"])]
        netlist: Option<PathBuf>,
    },
}

#[derive(Args)]
struct InputArgs {
    /// Coefficients `a0,a1,d0,d1,k` as integers, `p/q` or exact decimals.
    #[arg(long, conflicts_with = "expr", allow_hyphen_values = true)]
    coeffs: Option<String>,
    /// Rational function in `s`, e.g. `(2s^2+s+1)/(s^3+s^2+s)`.
    #[arg(long)]
    expr: Option<String>,
}

/// Process exit codes.
#[derive(Debug)]
enum Failure {
    Input(String),
    NotPr(String),
    CanonicalRequired,
    Verification(String),
    Experiment(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 1,
            Failure::NotPr(_) => 2,
            Failure::CanonicalRequired => 3,
            Failure::Verification(_) => 4,
            Failure::Experiment(_) => 5,
        }
    }
}

impl From<AdmittanceError> for Failure {
    fn from(e: AdmittanceError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<NetlistError> for Failure {
    fn from(e: NetlistError) -> Self {
        Failure::Input(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // usage errors share exit code 1 with other bad input
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Input(m) => eprintln!("error: {m}"),
                Failure::NotPr(m) => eprintln!("not positive-real: {m}"),
                Failure::CanonicalRequired => eprintln!("no low-complexity realization; a canonical network is required"),
                Failure::Verification(m) => eprintln!("verification failed: {m}"),
                Failure::Experiment(m) => eprintln!("experiment failed: {m}"),
            }
            ExitCode::from(f.code())
        }
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    if cli.precision < MIN_PRECISION {
        return Err(Failure::Input(format!("precision must be at least {MIN_PRECISION}")));
    }
    if cli.starts == 0 {
        return Err(Failure::Input("starts must be at least 1".into()));
    }
    match &cli.command {
        Command::Check(input) => cmd_check(cli, &parse_input(input)?),
        Command::Synth(input) => cmd_synth(cli, &parse_input(input)?),
        Command::Verify { file } => cmd_verify(cli, file),
        Command::Enumerate { claim, trials, instances } => cmd_enumerate(cli, claim, *trials, *instances),
        Command::Dual { input, netlist } => match netlist {
            Some(path) => cmd_dual_netlist(cli, path),
            None => cmd_dual_coeffs(cli, &parse_input(input)?),
        },
    }
}

fn parse_input(input: &InputArgs) -> Result<Y, Failure> {
    match (&input.coeffs, &input.expr) {
        (Some(c), None) => Ok(Y::parse_list(c)?),
        (None, Some(e)) => {
            let f = parse_ratfunc(e).map_err(|err| Failure::Input(format!("cannot parse expression: {err}")))?;
            Ok(Y::from_ratfunc(&f)?)
        }
        _ => Err(Failure::Input("give exactly one of --coeffs or --expr".into())),
    }
}

fn emit<T: Serialize>(cli: &Cli, report: &T, text: impl FnOnce() -> String) {
    if cli.json {
        println!("{}", to_json(report));
    } else {
        print!("{}", text());
    }
}

fn to_json<T: Serialize>(report: &T) -> String {
    serde_json::to_string_pretty(report).expect("reports serialize")
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, Failure> {
    fs::create_dir_all(dir).map_err(|e| Failure::Input(format!("{}: {e}", dir.display())))?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    Ok(path)
}

#[derive(Serialize)]
struct ConditionsReport {
    r_k: String,
    cross: String,
    damping_gap: String,
    mass_gap: String,
    bridge: String,
}

#[derive(Serialize)]
struct CheckReport {
    input: CoefficientRecord,
    pr: bool,
    failed_condition: Option<String>,
    r_k: String,
    case: Case,
    conditions: ConditionsReport,
    /// Realizable with at most four elements.
    at_most_four_elements: Option<bool>,
}

impl CheckReport {
    fn new(y: &Y, c: &Classification) -> Self {
        let w = &c.witness;
        let max = c.case.max_elements();
        CheckReport {
            input: y.into(),
            pr: c.pr.is_pr,
            failed_condition: c.pr.failed_condition.map(|f| f.to_string()),
            r_k: c.rk.to_string(),
            case: c.case,
            conditions: ConditionsReport {
                r_k: w.r_k.to_string(),
                cross: w.cross.to_string(),
                damping_gap: w.damping_gap.to_string(),
                mass_gap: w.mass_gap.to_string(),
                bridge: w.bridge.to_string(),
            },
            at_most_four_elements: c.pr.is_pr.then_some(max > 0 && max <= 4),
        }
    }

    fn text(&self) -> String {
        let yes_no = |b: bool| if b { "yes" } else { "no" };
        let i = &self.input;
        let mut out = format!(
            "input: a0={} a1={} d0={} d1={} k={}\npositive-real: {}\n",
            i.a0,
            i.a1,
            i.d0,
            i.d1,
            i.k,
            yes_no(self.pr)
        );
        if let Some(f) = &self.failed_condition {
            out.push_str(&format!("failed condition: {f}\n"));
        }
        out.push_str(&format!("R_k: {}\ncase: {}\n", self.r_k, self.case));
        if let Some(b) = self.at_most_four_elements {
            out.push_str(&format!("at most four elements: {}\n", yes_no(b)));
        }
        out
    }
}

fn cmd_check(cli: &Cli, y: &Y) -> Result<(), Failure> {
    let c = classify(y);
    let report = CheckReport::new(y, &c);
    emit(cli, &report, || report.text());
    if c.pr.is_pr {
        Ok(())
    } else {
        Err(Failure::NotPr(report.failed_condition.unwrap_or_default()))
    }
}

#[derive(Serialize)]
struct ElementReport {
    label: String,
    kind: String,
    from: String,
    to: String,
    value: String,
    formula: Option<String>,
}

#[derive(Serialize)]
struct SynthReport {
    #[serde(flatten)]
    check: CheckReport,
    topology: Option<String>,
    netlist_file: Option<String>,
    element_count: Option<usize>,
    elements: Vec<ElementReport>,
    parameters: Vec<(String, String)>,
    verified: bool,
}

fn elements<T: Scalar>(n: &Netlist<T>) -> Vec<ElementReport> {
    n.branches()
        .iter()
        .map(|b| ElementReport {
            label: b.label.clone(),
            kind: b.element.kind.to_string(),
            from: n.nodes()[b.a].clone(),
            to: n.nodes()[b.b].clone(),
            value: b.element.value.to_string(),
            formula: b.element.provenance.clone(),
        })
        .collect()
}

fn cmd_synth(cli: &Cli, y: &Y) -> Result<(), Failure> {
    let config = SynthConfig::with_precision(cli.precision);
    let c = classify(y);
    let check = CheckReport::new(y, &c);
    let outcome = match synthesize(y, &config) {
        Ok(o) => o,
        Err(SynthesisError::NotPositiveReal(_)) => {
            emit(cli, &check, || check.text());
            return Err(Failure::NotPr(check.failed_condition.unwrap_or_default()));
        }
        Err(e) => return Err(Failure::Verification(e.to_string())),
    };
    let dir = cli.out.clone().unwrap_or_else(|| PathBuf::from("."));
    let Some(real) = outcome.realization else {
        let report = SynthReport {
            check,
            topology: None,
            netlist_file: None,
            element_count: None,
            elements: Vec::new(),
            parameters: Vec::new(),
            verified: false,
        };
        write_file(&dir, "synth.json", &to_json(&report))?;
        emit(cli, &report, || report.check.text());
        return Err(Failure::CanonicalRequired);
    };
    if !real.verified {
        return Err(Failure::Verification("round trip mismatch".into()));
    }
    let net_path = write_file(&dir, "synth.net", &real.netlist.write())?;
    let report = SynthReport {
        check,
        topology: real.netlist.name().map(str::to_string),
        netlist_file: Some(net_path.display().to_string()),
        element_count: Some(real.element_count),
        elements: match &real.netlist {
            AnyNetlist::Exact(n) => elements(n),
            AnyNetlist::Approx(n) => elements(n),
        },
        parameters: real.parameters.clone(),
        verified: real.verified,
    };
    write_file(&dir, "synth.json", &to_json(&report))?;
    emit(cli, &report, || {
        let mut out = report.check.text();
        out.push_str(&format!(
            "topology: {}\nelements: {}\nverified: yes\n",
            report.topology.as_deref().unwrap_or("-"),
            real.element_count
        ));
        for e in &report.elements {
            out.push_str(&format!("  {} {} {} {}", e.label, e.from, e.to, e.value));
            if let Some(f) = &e.formula {
                out.push_str(&format!("  ({f})"));
            }
            out.push('\n');
        }
        out.push_str(&format!("netlist: {}\n", net_path.display()));
        out
    });
    Ok(())
}

#[derive(Serialize)]
struct VerifyReport {
    file: String,
    topology: Option<String>,
    element_count: usize,
    admittance: String,
    canonical: Option<CoefficientRecord>,
    r_k: Option<String>,
    pr: Option<bool>,
    case: Option<Case>,
}

fn cmd_verify(cli: &Cli, file: &Path) -> Result<(), Failure> {
    let text = fs::read_to_string(file).map_err(|e| Failure::Input(format!("{}: {e}", file.display())))?;
    let net = read_netlist_any(&text)?;
    let singular = |_| Failure::Input("network admittance is undefined".into());
    let mut report = VerifyReport {
        file: file.display().to_string(),
        topology: net.name().map(str::to_string),
        element_count: net.element_count(),
        admittance: String::new(),
        canonical: None,
        r_k: None,
        pr: None,
        case: None,
    };
    match &net {
        AnyNetlist::Exact(n) => {
            let r = driving_point_admittance(n).map_err(singular)?;
            report.admittance = r.y.to_string();
            if let Some(y) = &r.canonical {
                report.canonical = Some(y.into());
                report.r_k = Some(y.r_k().to_string());
                report.pr = Some(y.is_positive_real().is_pr);
                report.case = Some(classify(y).case);
            }
        }
        AnyNetlist::Approx(n) => {
            let r = driving_point_admittance(n).map_err(singular)?;
            report.admittance = r.y.to_string();
            if let Some(y) = &r.canonical {
                report.canonical = Some(CoefficientRecord {
                    a0: y.a0.to_string(),
                    a1: y.a1.to_string(),
                    d0: y.d0.to_string(),
                    d1: y.d1.to_string(),
                    k: y.k.to_string(),
                });
                report.r_k = Some(y.r_k().to_string());
                report.pr = Some(y.is_positive_real().is_pr);
            }
        }
    }
    emit(cli, &report, || {
        let mut out = format!("admittance: {}\n", report.admittance);
        match &report.canonical {
            Some(c) => out.push_str(&format!(
                "canonical: a0={} a1={} d0={} d1={} k={}\nR_k: {}\npositive-real: {}\n",
                c.a0,
                c.a1,
                c.d0,
                c.d1,
                c.k,
                report.r_k.as_deref().unwrap_or("-"),
                if report.pr == Some(true) { "yes" } else { "no" }
            )),
            None => out.push_str("canonical: not in the admittance family\n"),
        }
        if let Some(case) = report.case {
            out.push_str(&format!("case: {case}\n"));
        }
        out
    });
    Ok(())
}

fn cmd_enumerate(cli: &Cli, claim: &str, trials: usize, instances: Option<usize>) -> Result<(), Failure> {
    if claim.eq_ignore_ascii_case("lemma9") {
        if trials == 0 {
            return Err(Failure::Input("trials must be at least 1".into()));
        }
        let report = rk_zero_property(trials, cli.seed);
        finish_experiment(cli, "lemma9", &report, || {
            format!(
                "lemma9: {} trials, R_k = 0 in every trial: {}\ncoefficient range: [{:e}, {:e}]\n",
                report.trials,
                if report.pass { "yes" } else { "no" },
                report.min_coefficient,
                report.max_coefficient
            )
        })?;
        return match &report.counterexample {
            None => Ok(()),
            Some(net) => Err(Failure::Experiment(format!("R_k != 0 for\n{net}"))),
        };
    }
    let claim: Claim = claim.parse().map_err(Failure::Input)?;
    let instances = instances.unwrap_or(match claim {
        Claim::Thm2 => 20,
        Claim::Lemma8 => 200,
        Claim::Lemma10 | Claim::Lemma14 => 50,
    });
    let report = necessity_experiment(claim, instances, cli.starts, cli.seed);
    let name = format!("{claim:?}").to_ascii_lowercase();
    finish_experiment(cli, &name, &report, || {
        let mut out = format!(
            "{name}: {} targets, {} starts per fit\nworst expected-realizable residual: {:e}\nbest expected-unrealizable residual: {:e}\n",
            report.instances, report.starts, report.worst_realizable, report.best_non_realizable
        );
        for s in &report.skeletons {
            out.push_str(&format!(
                "  {:<24} fits {:>4}  min {:.3e}  q10 {:.3e}  median {:.3e}  max {:.3e}\n",
                s.skeleton, s.fits, s.min, s.q10, s.median, s.max
            ));
        }
        out.push_str(if report.pass { "PASS\n" } else { "FAIL\n" });
        out
    })?;
    if report.pass {
        Ok(())
    } else {
        let dump: Vec<String> = report
            .counterexamples
            .iter()
            .map(|c| {
                format!(
                    "target ({}, {}, {}, {}, {}) on {}: residual {:e}, expected {}",
                    c.target.a0,
                    c.target.a1,
                    c.target.d0,
                    c.target.d1,
                    c.target.k,
                    c.skeleton,
                    c.residual,
                    if c.expected_realizable { "realizable" } else { "unrealizable" }
                )
            })
            .collect();
        Err(Failure::Experiment(dump.join("\n")))
    }
}

fn finish_experiment<T: Serialize>(
    cli: &Cli,
    name: &str,
    report: &T,
    text: impl FnOnce() -> String,
) -> Result<(), Failure> {
    if let Some(dir) = &cli.out {
        write_file(dir, &format!("enumerate-{name}.json"), &to_json(report))?;
    }
    emit(cli, report, text);
    Ok(())
}

#[derive(Serialize)]
struct DualReport {
    input: CoefficientRecord,
    dual: CoefficientRecord,
    r_k: String,
    dual_r_k: String,
}

fn cmd_dual_coeffs(cli: &Cli, y: &Y) -> Result<(), Failure> {
    let d = y.fid_coefficients()?;
    let report = DualReport {
        input: y.into(),
        dual: (&d).into(),
        r_k: y.r_k().to_string(),
        dual_r_k: d.r_k().to_string(),
    };
    emit(cli, &report, || {
        format!("dual: a0={} a1={} d0={} d1={} k={}\nR_k: {}\n", d.a0, d.a1, d.d0, d.d1, d.k, report.dual_r_k)
    });
    Ok(())
}

#[derive(Serialize)]
struct DualNetlistReport {
    file: String,
    netlist: String,
    netlist_file: Option<String>,
}

fn cmd_dual_netlist(cli: &Cli, path: &Path) -> Result<(), Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let dual = match read_netlist_any(&text)? {
        AnyNetlist::Exact(n) => AnyNetlist::Exact(fid_netlist(&n)?),
        AnyNetlist::Approx(n) => AnyNetlist::Approx(fid_netlist(&n)?),
    };
    let body = dual.write();
    let written = match &cli.out {
        Some(dir) => Some(write_file(dir, "dual.net", &body)?.display().to_string()),
        None => None,
    };
    let report = DualNetlistReport {
        file: path.display().to_string(),
        netlist: body.clone(),
        netlist_file: written,
    };
    emit(cli, &report, || body.clone());
    Ok(())
}
