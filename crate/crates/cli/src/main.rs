//! `twistlab`: batch front end over the twistlab library.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use twistlab::algebra::{rt_product, rt_star, Twist};
use twistlab::cech::{cohomology, CechCochain, Coefficients, Domain, Mode};
use twistlab::cover::{Cover, Nerve};
use twistlab::dd::{dd_class, rank_one_relations_check, DDOptions, DDReport, Verdict};
use twistlab::extension::build_extension;
use twistlab::io::{self, Problem, SCHEMA_VERSION};
use twistlab::pipeline::{pipeline_local_homeo, to_nerve, to_pointwise};
use twistlab::random::{self, DEFAULT_SEED};
use twistlab::reps::{intertwine_check, spectrum, SpectrumOptions, SpectrumTable};
use twistlab::scalar::{Cyclotomic, Scalar};
use twistlab::{selftest, Error};

#[derive(Parser)]
#[command(name = "twistlab", version, about = "Twisted groupoid algebras over finite covers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// input document (stdin when absent)
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// write the report here instead of stdout
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// reinterpret the cochain in this mode before running
    #[arg(long, global = true, value_enum)]
    mode: Option<ModeArg>,
    /// restrict to these characters (indices into the dual group)
    #[arg(long, global = true, num_args = 1..)]
    tau: Vec<usize>,
    #[arg(long, global = true, default_value_t = 1e-9)]
    tolerance: f64,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Pointwise,
    Nerve,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a cochain is a cocycle and, if normalized, its identities
    CheckCocycle,
    /// Normalize a 2-cocycle and report the gauge
    Normalize,
    /// Cohomology of a complex (or of a cover's nerve)
    Cohomology {
        #[arg(long, default_value_t = 2)]
        degree: usize,
        /// integer coefficients even when the document has a group
        #[arg(long)]
        integral: bool,
        /// print generator K as a full problem document instead
        #[arg(long)]
        generator: Option<usize>,
    },
    /// Build the central extension of a groupoid cocycle or a Čech cocycle
    BuildExtension,
    /// Verify the Fourier transform, intertwiners and relations
    VerifyAlgebra {
        /// random pairs per check
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
    /// Irreducible representations of the twisted algebra
    Spectrum,
    /// Dixmier–Douady class of a Čech 2-cocycle
    DdClass,
    /// Run the local homeomorphism pipeline
    Pipeline,
    /// Run the built-in invariant checks
    Selftest,
}

/// Finished report and whether the command found a violation.
struct Outcome {
    report: Value,
    text: String,
    violation: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let body = match cli.common.format {
                Format::Json => serde_json::to_string_pretty(&out.report).expect("serializable") + "\n",
                Format::Text => out.text,
            };
            if let Err(e) = emit(&cli.common.output, &body) {
                eprintln!("{}", error_json("io", &e.to_string()));
                return ExitCode::from(3);
            }
            ExitCode::from(u8::from(out.violation))
        }
        Err(e) => {
            let (kind, code) = match &e {
                Error::Malformed(_) => ("malformed", 2),
                Error::TooLarge(_) => ("too_large", 2),
                Error::Mismatch(_) => ("mismatch", 2),
                Error::Precondition(_) => ("precondition", 1),
                Error::Internal(_) => ("internal", 3),
            };
            eprintln!("{}", error_json(kind, &e.to_string()));
            ExitCode::from(code)
        }
    }
}

fn error_json(kind: &str, message: &str) -> String {
    json!({"schema_version": SCHEMA_VERSION, "error": {"kind": kind, "message": message}}).to_string()
}

fn emit(path: &Option<PathBuf>, body: &str) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, body),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(body.as_bytes())
        }
    }
}

fn read_input(path: &Option<PathBuf>) -> twistlab::Result<String> {
    use std::io::Read;
    let mut text = String::new();
    let res = match path {
        Some(p) => std::fs::File::open(p).and_then(|f| f.take(io::MAX_INPUT_BYTES as u64 + 1).read_to_string(&mut text)),
        None => std::io::stdin().take(io::MAX_INPUT_BYTES as u64 + 1).read_to_string(&mut text),
    };
    res.map_err(|e| Error::Malformed(format!("cannot read input: {e}")))?;
    Ok(text)
}

fn run(cli: &Cli) -> twistlab::Result<Outcome> {
    let c = &cli.common;
    if let Command::Selftest = cli.command {
        return Ok(selftest_cmd(c));
    }
    let text = read_input(&c.input)?;
    if let Command::Pipeline = cli.command {
        return pipeline_cmd(c, &text);
    }
    let problem = io::parse_problem(&text)?;
    match &cli.command {
        Command::CheckCocycle => check_cocycle(c, &problem),
        Command::Normalize => normalize(c, &problem),
        Command::Cohomology { degree, integral, generator } => cohomology_cmd(&problem, *degree, *integral, *generator),
        Command::BuildExtension => build_extension_cmd(c, &problem),
        Command::VerifyAlgebra { samples } => verify_algebra(c, &problem, *samples),
        Command::Spectrum => spectrum_cmd(c, &problem),
        Command::DdClass => dd_cmd(c, &problem),
        Command::Pipeline | Command::Selftest => unreachable!(),
    }
}

fn need<T: Clone>(v: &Option<T>, what: &str) -> twistlab::Result<T> {
    v.clone().ok_or_else(|| Error::Malformed(format!("the input has no {what}")))
}

/// The cover a pointwise reading of the problem lives on.
fn problem_cover(p: &Problem) -> twistlab::Result<Arc<Cover>> {
    if let Some(cv) = &p.cover {
        return Ok(cv.clone());
    }
    match p.complex.as_deref() {
        Some(Domain::Nerve(n)) => Ok(Arc::new(Cover::from_complex(n))),
        _ => Err(Error::Malformed("the input has neither a cover nor a complex".into())),
    }
}

/// The problem's cochain, converted to `--mode` when one is given.
fn cochain(c: &Common, p: &Problem) -> twistlab::Result<CechCochain> {
    let cochain = need(&p.cochain, "cochain")?;
    match (c.mode, cochain.mode()) {
        (Some(ModeArg::Pointwise), Mode::Nerve) => to_pointwise(&cochain, &problem_cover(p)?),
        (Some(ModeArg::Nerve), Mode::Pointwise) => {
            let cover = problem_cover(p)?;
            let nerve = match &p.complex {
                Some(d) => d.clone(),
                None => Arc::new(Domain::Nerve(Nerve::from_cover(&cover))),
            };
            to_nerve(&cochain, &cover, &nerve)?
                .ok_or_else(|| Error::Precondition("the cochain is not constant on overlaps".into()))
        }
        _ => Ok(cochain),
    }
}

fn normalized(c: &CechCochain) -> twistlab::Result<CechCochain> {
    Ok(if c.is_normalized() { c.clone() } else { c.normalize()?.0 })
}

fn twist(c: &Common, p: &Problem) -> twistlab::Result<Twist> {
    let cover = problem_cover(p)?;
    Twist::new(cover, &normalized(&cochain(c, p)?)?)
}

fn mode_name(m: Mode) -> &'static str {
    match m {
        Mode::Pointwise => "pointwise",
        Mode::Nerve => "nerve",
    }
}

fn check_cocycle(c: &Common, p: &Problem) -> twistlab::Result<Outcome> {
    if let (Some(g), Some(phi)) = (&p.groupoid, &p.groupoid_cocycle) {
        let failure = phi.cocycle_failure(g);
        let normalized = phi.is_normalized(g);
        let report = json!({
            "schema_version": SCHEMA_VERSION,
            "kind": "groupoid",
            "is_cocycle": failure.is_none(),
            "normalized": normalized,
            "failure": failure.map(|(a, b, d)| [g.arrow_label(a), g.arrow_label(b), g.arrow_label(d)]),
        });
        let text = match failure {
            None => format!("groupoid cocycle: ok (normalized: {normalized})\n"),
            Some((a, b, d)) => format!(
                "groupoid cocycle: FAIL at ({}, {}, {})\n",
                g.arrow_label(a),
                g.arrow_label(b),
                g.arrow_label(d)
            ),
        };
        return Ok(Outcome { report, text, violation: failure.is_some() });
    }
    let cochain = cochain(c, p)?;
    let is_cocycle = cochain.is_cocycle()?;
    let is_normalized = cochain.is_normalized();
    let identities = if is_cocycle && is_normalized && cochain.degree() == 2 {
        Some(cochain.check_norm_identities()?)
    } else {
        None
    };
    let violation = !is_cocycle || identities.as_ref().is_some_and(|r| !r.passed());
    let domain = cochain.domain();
    let report = json!({
        "schema_version": SCHEMA_VERSION,
        "kind": "cech",
        "mode": mode_name(cochain.mode()),
        "degree": cochain.degree(),
        "is_cocycle": is_cocycle,
        "normalized": is_normalized,
        "identities": identities.as_ref().map(|r| json!({
            "checked": r.checked,
            "violation": r.first_violation.as_ref().map(|v| json!({
                "identity": v.identity,
                "tuple": v.tuple.iter().map(|&i| domain.index_label(i)).collect::<Vec<_>>(),
                "point": v.point,
            })),
        })),
    });
    let mut text = format!(
        "{}-cochain ({} mode): cocycle {}, normalized {}\n",
        cochain.degree(),
        mode_name(cochain.mode()),
        yes(is_cocycle),
        yes(is_normalized)
    );
    if let Some(r) = &identities {
        match &r.first_violation {
            None => writeln!(text, "identities: {} checked, all hold", r.checked).unwrap(),
            Some(v) => writeln!(text, "identities: ({}) fails at {:?}", v.identity, v.tuple).unwrap(),
        }
    }
    Ok(Outcome { report, text, violation })
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn normalize(c: &Common, p: &Problem) -> twistlab::Result<Outcome> {
    let cochain = cochain(c, p)?;
    let (n, b) = cochain.normalize()?;
    let report = json!({
        "schema_version": SCHEMA_VERSION,
        "normalized": io::problem_json(&n, false)?,
        "gauge": io::cochain_doc(&b),
    });
    let text = format!(
        "normalized with a gauge of {} nonzero entries; {} nonzero values remain\n",
        b.entries().count(),
        n.entries().count()
    );
    Ok(Outcome { report, text, violation: false })
}

fn cohomology_cmd(p: &Problem, degree: usize, integral: bool, generator: Option<usize>) -> twistlab::Result<Outcome> {
    if degree > io::MAX_DEGREE {
        return Err(Error::TooLarge(format!("degree above {}", io::MAX_DEGREE)));
    }
    let domain = match (&p.complex, &p.cover) {
        (Some(d), _) => d.clone(),
        (None, Some(cv)) => Arc::new(Domain::Nerve(Nerve::from_cover(cv))),
        _ => return Err(Error::Malformed("the input has neither a complex nor a cover".into())),
    };
    let Domain::Nerve(nerve) = domain.as_ref() else { unreachable!() };
    let coefficients = match (&p.group, integral) {
        (Some(g), false) => Coefficients::Group(g.clone()),
        _ => Coefficients::Integers,
    };
    let h = cohomology(nerve, &coefficients, degree)?;
    let orders = h.cyclic_orders();
    if let Some(k) = generator {
        let Coefficients::Group(_) = coefficients else {
            return Err(Error::Precondition("generators are emitted for finite coefficients only".into()));
        };
        let gens = h.generators(&domain)?;
        let g = gens
            .get(k)
            .ok_or_else(|| Error::Precondition(format!("H^{degree} has {} generators", gens.len())))?;
        let report = io::problem_json(g, true)?;
        let text = serde_json::to_string_pretty(&report).expect("serializable") + "\n";
        return Ok(Outcome { report, text, violation: false });
    }
    let coeff_json = match &coefficients {
        Coefficients::Integers => json!("Z"),
        Coefficients::Group(g) => json!(g.cyclic_orders()),
    };
    let class = match (&p.cochain, &coefficients) {
        (Some(ch), Coefficients::Group(_)) if ch.degree() == degree && ch.mode() == Mode::Nerve => Some(h.class_of(ch)?),
        _ => None,
    };
    let report = json!({
        "schema_version": SCHEMA_VERSION,
        "degree": degree,
        "coefficients": coeff_json,
        "cyclic_orders": orders,
        "class_of_cochain": class,
    });
    let names: Vec<String> = orders.iter().map(|&o| if o == 0 { "Z".into() } else { format!("Z/{o}") }).collect();
    let mut text = format!("H^{degree} = {}\n", if names.is_empty() { "0".into() } else { names.join(" + ") });
    if let Some(cl) = &class {
        writeln!(text, "class of the cochain: {cl:?}").unwrap();
    }
    Ok(Outcome { report, text, violation: false })
}

fn build_extension_cmd(c: &Common, p: &Problem) -> twistlab::Result<Outcome> {
    let (ext, source) = if let Some(g) = &p.groupoid {
        let phi = need(&p.groupoid_cocycle, "groupoid cocycle")?;
        if let Some((a, b, d)) = phi.cocycle_failure(g) {
            return Err(Error::Precondition(format!(
                "not a cocycle at ({}, {}, {})",
                g.arrow_label(a),
                g.arrow_label(b),
                g.arrow_label(d)
            )));
        }
        (build_extension(g, &phi)?, "groupoid")
    } else {
        (twist(c, p)?.sigma, "cech")
    };
    let problems = ext.check();
    let mut report = io::extension_json(&ext);
    report["source"] = json!(source);
    report["axioms_verified"] = json!(problems.is_empty());
    report["problems"] = json!(problems);
    let text = format!(
        "extension by {:?}: {} units, {} arrows over {} base arrows; axioms {}\n",
        ext.group.cyclic_orders(),
        ext.total.unit_count(),
        ext.total.arrow_count(),
        ext.base.arrow_count(),
        if problems.is_empty() { "hold" } else { "FAIL" }
    );
    Ok(Outcome { violation: !problems.is_empty(), report, text })
}

fn verify_algebra(c: &Common, p: &Problem, samples: usize) -> twistlab::Result<Outcome> {
    let t = twist(c, p)?;
    let nu = t.nu_c();
    let dim = t.sigma_dimension();
    let order = Cyclotomic::from_int(t.group.order() as i64);
    let mut rng = random::rng(c.seed);
    let (mut mult, mut star, mut inverse) = (true, true, true);
    for _ in 0..samples {
        let f1 = random::exact_vector(&mut rng, dim, 12, 0.4);
        let f2 = random::exact_vector(&mut rng, dim, 12, 0.4);
        let (p1, p2) = (t.fourier(&f1), t.fourier(&f2));
        mult &= t.fourier(&t.convolve(&f1, &f2)) == rt_product(&t.dual_gamma, &nu, &p1, &p2);
        star &= t.fourier(&t.star(&f1)) == rt_star(&t.dual_gamma, &nu, &p1);
        let scaled: Vec<Cyclotomic> = f1.iter().map(|v| order.clone() * v.clone()).collect();
        inverse &= t.fourier_inverse_scaled(&p1) == scaled;
    }
    let mut intertwining = true;
    let mut labels = 0;
    for x in 0..t.cover.point_count() {
        for &i in t.cover.indices_at(x) {
            for tau in selected(c, t.characters.len())? {
                labels += 1;
                for _ in 0..samples {
                    let f = random::complex_vector(&mut rng, dim, 0.5);
                    intertwining &= intertwine_check(&t, &f, i, x, tau, c.tolerance)?;
                }
            }
        }
    }
    let atoms: Vec<usize> = (0..t.dual_cover.point_count()).map(|q| q / t.cover.point_count()).collect();
    let relations = rank_one_relations_check(&t.dual_gamma, &nu, &atoms)?;
    let ok = mult && star && inverse && intertwining && relations.passed();
    let report = json!({
        "schema_version": SCHEMA_VERSION,
        "algebra_dimension": dim,
        "dual_dimension": t.dual_dimension(),
        "samples": samples,
        "fourier_multiplicative": mult,
        "fourier_star": star,
        "fourier_bijective": inverse,
        "intertwining": {"anchored_labels": labels, "holds": intertwining},
        "relations": relations,
        "passed": ok,
    });
    let text = format!(
        "dimension {dim}; Φ multiplicative {}, *-preserving {}, bijective {}; intertwining {} on {labels} labels; {} relations, {} failures\n",
        yes(mult),
        yes(star),
        yes(inverse),
        yes(intertwining),
        relations.checked,
        relations.failures.len()
    );
    Ok(Outcome { report, text, violation: !ok })
}

fn selected(c: &Common, count: usize) -> twistlab::Result<Vec<usize>> {
    if c.tau.is_empty() {
        return Ok((0..count).collect());
    }
    if let Some(&t) = c.tau.iter().find(|&&t| t >= count) {
        return Err(Error::Malformed(format!("character index {t} out of range (dual group has {count})")));
    }
    Ok(c.tau.clone())
}

fn spectrum_cmd(c: &Common, p: &Problem) -> twistlab::Result<Outcome> {
    let t = twist(c, p)?;
    let opts = SpectrumOptions { tolerance: c.tolerance, seed: c.seed, ..Default::default() };
    let mut table = spectrum(&t, &opts)?;
    let consistent = table.is_consistent();
    if !c.tau.is_empty() {
        let keep = selected(c, t.characters.len())?;
        table.labels.retain(|e| keep.contains(&e.tau_index));
    }
    let text = spectrum_text(&table, consistent);
    let report = serde_json::to_value(&table).expect("serializable");
    Ok(Outcome { report, text, violation: !consistent })
}

fn spectrum_text(table: &SpectrumTable, consistent: bool) -> String {
    let mut s = String::new();
    for e in &table.labels {
        writeln!(s, "tau {:?} at {}: dimension {} (anchor {})", e.tau, e.point, e.dimension, e.anchor).unwrap();
    }
    writeln!(
        s,
        "algebra dimension {} = sum of squares {}: {}",
        table.algebra_dimension,
        table.sum_of_squares,
        if consistent { "ok" } else { "FAIL" }
    )
    .unwrap();
    s
}

fn dd_opts(c: &Common) -> DDOptions {
    DDOptions { characters: (!c.tau.is_empty()).then(|| c.tau.clone()), lift_seed: None }
}

fn dd_cmd(c: &Common, p: &Problem) -> twistlab::Result<Outcome> {
    let cochain = cochain(c, p)?;
    let report = dd_class(&cochain, &dd_opts(c))?;
    let text = dd_text(&report);
    Ok(Outcome { report: serde_json::to_value(&report).expect("serializable"), text, violation: false })
}

fn dd_text(r: &DDReport) -> String {
    let mut s = format!(
        "{} mode, H^3 orders {:?}: {}\n",
        mode_name(r.mode),
        r.h3_orders,
        match r.verdict {
            Verdict::Trivial => "trivial",
            Verdict::Nontrivial => "NONTRIVIAL",
        }
    );
    for row in &r.rows {
        writeln!(
            s,
            "  tau {:?} (order {}): class {:?}, mu-trivial {}, trivial {}",
            row.tau,
            row.order,
            row.h3_class,
            yes(row.mu_trivial),
            yes(row.trivial)
        )
        .unwrap();
    }
    if let Some(n) = &r.note {
        writeln!(s, "note: {n}").unwrap();
    }
    s
}

fn pipeline_cmd(c: &Common, text: &str) -> twistlab::Result<Outcome> {
    let input = io::parse_pipeline_input(text)?;
    let r = pipeline_local_homeo(&input, &dd_opts(c))?;
    let report = json!({
        "schema_version": SCHEMA_VERSION,
        "cocycle": io::problem_json(&r.cocycle, false)?,
        "overlap_constant": r.overlap_constant,
        "nerve_cocycle": r.nerve_cocycle.as_ref().map(|n| io::problem_json(n, false)).transpose()?,
        "report": r.report,
    });
    let mut text = format!("recovered cocycle with {} nonzero values", r.cocycle.entries().count());
    text.push_str(if r.overlap_constant { ", constant on overlaps\n" } else { "\n" });
    text.push_str(&dd_text(&r.report));
    Ok(Outcome { report, text, violation: false })
}

fn selftest_cmd(c: &Common) -> Outcome {
    let r = selftest::run(c.seed, c.tolerance);
    let mut text = String::new();
    for check in &r.checks {
        writeln!(text, "{} {}: {}", if check.passed { "PASS" } else { "FAIL" }, check.name, check.detail).unwrap();
    }
    let mut report = serde_json::to_value(&r).expect("serializable");
    for check in report["checks"].as_array_mut().expect("array") {
        check.as_object_mut().expect("object").remove("millis");
    }
    Outcome { violation: !r.passed, report, text }
}
