use std::io::{Read, Write};
use std::time::{SystemTime, UNIX_EPOCH};

use modcurves::arith::{
    gonality_cover_degree, hyperelliptic_two_torsion_census, minimal_plane_degree, plane_genus, rho, theta_counts,
};
use modcurves::certificate::CertificateFile;
use modcurves::cremona::{cremona_minimize, rigidity_feasibility, MultiplicityClass};
use modcurves::divisor::{
    canonical_class_mg, canonical_class_spin, canonical_class_spin_via_pullback, k3_pencil_numbers, sigma_class, slope,
    slope_bound, theta_null_class, ModuliDivisorClass, Parity, PullbackRule,
};
use modcurves::error::Error;
use modcurves::families::{cayley_report, enriques_report, invariant_quartic_relation, segre_primal};
use modcurves::field::PrimeField;
use modcurves::interpolation::postulation_census;
use modcurves::par::Execution;
use modcurves::prym::{
    prym_certificate, sample_nodal_bundle, verify_prym_certificate, NodalBundle, PrymCertificate, DEFAULT_RESIDUE_SAMPLES,
};
use modcurves::seed;
use modcurves::severi::{sample_nodal_curves, verify_certificate, NodalCurveCertificate};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::args::*;
use crate::Failure;

type Outcome = Result<(), Failure>;

fn usage(e: impl ToString) -> Failure {
    Failure::Usage(e.to_string())
}

fn cert_failure(e: impl ToString) -> Failure {
    Failure::Certification(e.to_string())
}

struct Ctx {
    global: Global,
    command: Command,
    field: PrimeField,
    exec: Execution,
}

impl Ctx {
    fn config(&self) -> Value {
        json!({
            "prime": self.global.prime,
            "seed": self.global.seed,
            "trials": self.global.trials,
            "command": self.command,
        })
    }

    fn certificate<P: Serialize>(&self, name: &str, payload: &P) -> Result<CertificateFile, Failure> {
        let file = CertificateFile::new(name, &self.config(), payload).map_err(usage)?;
        Ok(if self.global.no_timestamp {
            file
        } else {
            let now = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
            file.with_timestamp(now)
        })
    }

    fn emit<P: Serialize>(&self, name: &str, payload: &P) -> Outcome {
        let text = self.certificate(name, payload)?.to_json();
        match self.global.out.as_deref() {
            Some(p) if p.as_os_str() != "-" => std::fs::write(p, text).map_err(|e| usage(format!("{}: {e}", p.display()))),
            _ => std::io::stdout().write_all(text.as_bytes()).map_err(usage),
        }
    }

    /// Query commands: the answer on stdout, a certificate only with `--out`.
    fn answer<P: Serialize>(&self, name: &str, text: &str, payload: &P) -> Outcome {
        println!("{text}");
        match self.global.out.as_deref() {
            Some(p) if p.as_os_str() != "-" => {
                let file = self.certificate(name, payload)?;
                std::fs::write(p, file.to_json()).map_err(|e| usage(format!("{}: {e}", p.display())))
            }
            _ => Ok(()),
        }
    }
}

fn read_certificate(input: &str) -> Result<CertificateFile, Failure> {
    let mut text = String::new();
    if input == "-" {
        std::io::stdin().read_to_string(&mut text).map_err(usage)?;
    } else {
        text = std::fs::read_to_string(input).map_err(|e| usage(format!("{input}: {e}")))?;
    }
    CertificateFile::from_json(&text).map_err(|e| match e {
        Error::EvidenceMismatch(_) => cert_failure(e),
        _ => usage(e),
    })
}

pub fn run(cli: Cli) -> Outcome {
    let field = PrimeField::new(cli.global.prime).map_err(usage)?;
    let exec = if cli.global.sequential { Execution::Sequential } else { Execution::Parallel };
    if let Some(n) = cli.global.threads {
        set_threads(n)?;
    }
    let ctx = Ctx { global: cli.global, command: cli.command.clone(), field, exec };
    match cli.command {
        Command::Postulation(a) => postulation(&ctx, &a),
        Command::SampleCurve(a) => sample_curve(&ctx, &a),
        Command::CertifyCurve(a) => certify_curve(&ctx, &a),
        Command::CremonaReduce(a) => cremona(&ctx, &a),
        Command::SampleConicBundle(a) => sample_bundle(&ctx, &a),
        Command::PrymCertify(a) => prym(&ctx, &a),
        Command::Families(a) => families(&ctx, &a),
        Command::Arith(a) => arith(&ctx, &a.query),
        Command::Class(a) => class(&ctx, &a),
    }
}

#[cfg(feature = "parallel")]
fn set_threads(n: usize) -> Outcome {
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(usage)
}

#[cfg(not(feature = "parallel"))]
fn set_threads(_: usize) -> Outcome {
    Ok(())
}

fn postulation(ctx: &Ctx, a: &PostulationArgs) -> Outcome {
    let trials = ctx.global.trials.unwrap_or(5);
    let census =
        postulation_census(ctx.field, a.dmax, a.deltamax, a.multiplicity, trials, ctx.global.seed, ctx.exec).map_err(usage)?;
    eprintln!("{:>3} {:>5} {:>8} {:>8}", "d", "delta", "expected", "observed");
    for c in census.cells.iter().filter(|c| c.special || c.nodality_failure) {
        let flags = [(c.special, "special"), (c.nodality_failure, "square member"), (c.disagreement, "trials disagree")];
        let flags: Vec<&str> = flags.iter().filter(|f| f.0).map(|f| f.1).collect();
        eprintln!("{:>3} {:>5} {:>8} {:>8}  {}", c.d, c.delta, c.expected, c.observed, flags.join(", "));
    }
    let specials: Vec<String> = census.special_cells().iter().map(|(d, k)| format!("({d},{k})")).collect();
    eprintln!("special cells: {}", specials.join(" "));
    ctx.emit("postulation", &census)
}

#[derive(Serialize, Deserialize)]
struct TrialFailure {
    trial: usize,
    seed: u64,
    error: String,
}

#[derive(Serialize, Deserialize)]
struct CurveBatch {
    degree: u32,
    delta: usize,
    certificates: Vec<NodalCurveCertificate>,
    failures: Vec<TrialFailure>,
}

fn sample_curve(ctx: &Ctx, a: &SampleCurveArgs) -> Outcome {
    let trials = ctx.global.trials.unwrap_or(1);
    let seeds: Vec<u64> = (0..trials as u64).map(|i| seed::derive(ctx.global.seed, "sample-curve", &[i])).collect();
    let results = sample_nodal_curves(ctx.field, a.degree, a.delta, &seeds, ctx.exec);
    if let Some(Err(e @ (Error::InfeasibleRange { .. } | Error::DimensionMismatch(_)))) = results.first() {
        return Err(usage(e));
    }
    let mut batch = CurveBatch { degree: a.degree, delta: a.delta, certificates: Vec::new(), failures: Vec::new() };
    for (trial, (r, &seed)) in results.into_iter().zip(&seeds).enumerate() {
        match r {
            Ok(c) => batch.certificates.push(c),
            Err(e) => batch.failures.push(TrialFailure { trial, seed, error: e.to_string() }),
        }
    }
    eprintln!(
        "certified {}/{trials} curves of degree {} with {} nodes, genus {}",
        batch.certificates.len(),
        a.degree,
        a.delta,
        plane_genus(a.degree, a.delta)
    );
    ctx.emit("sample-curve", &batch)?;
    if batch.failures.is_empty() {
        Ok(())
    } else {
        Err(cert_failure(format!("{} trial(s) failed certification", batch.failures.len())))
    }
}

#[derive(Serialize, Deserialize)]
struct VerifiedCurve {
    index: usize,
    genus: i64,
    verified: bool,
    error: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct CurveVerification {
    source_hash: String,
    results: Vec<VerifiedCurve>,
    certificates: Vec<NodalCurveCertificate>,
}

fn certify_curve(ctx: &Ctx, a: &InputArgs) -> Outcome {
    let file = read_certificate(&a.input)?;
    let certificates: Vec<NodalCurveCertificate> = match file.subcommand.as_str() {
        "sample-curve" => file.payload_as::<CurveBatch>().map_err(usage)?.certificates,
        "certify-curve" => file.payload_as::<CurveVerification>().map_err(usage)?.certificates,
        other => return Err(usage(format!("expected a sample-curve certificate, got {other}"))),
    };
    let checks = modcurves::par::map(ctx.exec, certificates.clone(), |c| verify_certificate(&c));
    let results: Vec<VerifiedCurve> = checks
        .into_iter()
        .zip(&certificates)
        .enumerate()
        .map(|(index, (r, c))| VerifiedCurve { index, genus: c.genus, verified: r.is_ok(), error: r.err().map(|e| e.to_string()) })
        .collect();
    let failed = results.iter().filter(|r| !r.verified).count();
    eprintln!("re-verified {}/{} certificates", results.len() - failed, results.len());
    ctx.emit("certify-curve", &CurveVerification { source_hash: file.evidence_hash, results, certificates })?;
    if failed == 0 {
        Ok(())
    } else {
        Err(cert_failure(format!("{failed} certificate(s) failed re-verification")))
    }
}

fn cremona(ctx: &Ctx, a: &CremonaArgs) -> Outcome {
    if let Some(g) = a.rigidity {
        let report = rigidity_feasibility(g);
        eprintln!("genus {g}: {} feasible pair(s) {:?}", report.pairs.len(), report.pairs);
        return ctx.emit("cremona-reduce", &report);
    }
    let class: MultiplicityClass = a.class.as_deref().unwrap_or_default().parse().map_err(usage)?;
    let reduction = cremona_minimize(&class, a.depth);
    eprintln!(
        "{class} -> {} after {} reflection(s){}",
        reduction.minimal,
        reduction.word.len(),
        if reduction.terminal { "" } else { " (depth limit reached)" }
    );
    let payload = json!({
        "class": class.to_string(),
        "self_intersection": class.self_intersection(),
        "canonical_pairing": class.canonical_pairing(),
        "minimal": reduction.minimal.to_string(),
        "reduction": reduction,
    });
    ctx.emit("cremona-reduce", &payload)
}

fn sample_bundle(ctx: &Ctx, a: &BundleArgs) -> Outcome {
    let bundle = sample_nodal_bundle(ctx.field, a.delta, ctx.global.seed).map_err(|e| match e {
        Error::InfeasibleDelta(_) => usage(e),
        _ => cert_failure(e),
    })?;
    eprintln!("bundle with {} nodes from a system of dimension {}", bundle.delta, bundle.system_dim);
    ctx.emit("sample-conic-bundle", &bundle)
}

fn prym(ctx: &Ctx, a: &PrymArgs) -> Outcome {
    let file = read_certificate(&a.input)?;
    let cert = match file.subcommand.as_str() {
        "sample-conic-bundle" => {
            let bundle: NodalBundle = file.payload_as().map_err(usage)?;
            let n = a.samples.or(ctx.global.trials).unwrap_or(DEFAULT_RESIDUE_SAMPLES);
            let s = seed::derive(ctx.global.seed, "prym-certify", &[bundle.sampling.master_seed]);
            prym_certificate(&bundle, n, s).map_err(cert_failure)?
        }
        "prym-certify" => {
            let cert: PrymCertificate = file.payload_as().map_err(usage)?;
            verify_prym_certificate(&cert).map_err(cert_failure)?;
            eprintln!("re-verified certificate {}", file.evidence_hash);
            cert
        }
        other => return Err(usage(format!("expected a conic bundle or Prym certificate, got {other}"))),
    };
    eprintln!(
        "admissible bundle, {} nodes, genus {}, cover {:?} (confidence {})",
        cert.delta, cert.genus, cert.admissibility.cover.verdict, cert.admissibility.cover.confidence
    );
    ctx.emit("prym-certify", &cert)
}

fn families(ctx: &Ctx, a: &FamiliesArgs) -> Outcome {
    let want = |f: Family| a.family == f || a.family == Family::All;
    let mut rng = seed::rng(seed::derive(ctx.global.seed, "families", &[]));
    let mut payload = serde_json::Map::new();
    let mut failed = Vec::new();
    if want(Family::Enriques) {
        let r = enriques_report(ctx.field, &mut rng);
        eprintln!("enriques: double along edges {}, family dimension {}", r.double_along_edges && r.edge_partials_vanish, r.family_dim);
        if !(r.double_along_edges && r.edge_partials_vanish) {
            failed.push("enriques");
        }
        payload.insert("enriques".into(), json!(r));
    }
    if want(Family::Cayley) {
        let r = cayley_report(ctx.field, &mut rng).map_err(usage)?;
        eprintln!("cayley: family dimension {}, nodes at vertices {:?}", r.family_dim, r.nodes_at_vertices);
        if !r.nodes_at_vertices.iter().all(|&b| b) {
            failed.push("cayley");
        }
        payload.insert("cayley".into(), json!(r));
    }
    if want(Family::Segre) {
        let r = segre_primal();
        eprintln!("segre: {} singular points", r.points.len());
        payload.insert("segre".into(), json!(r));
    }
    if want(Family::Quartics) {
        let r = invariant_quartic_relation(ctx.field, &mut rng);
        eprintln!(
            "invariant quartics: {} cubic relation(s), {} quartic relation(s)",
            r.cubic.relations.len(),
            r.quartic.relations.len()
        );
        payload.insert("quartics".into(), json!(r));
    }
    ctx.emit("families", &payload)?;
    if failed.is_empty() {
        Ok(())
    } else {
        Err(cert_failure(format!("checks failed: {}", failed.join(", "))))
    }
}

fn arith(ctx: &Ctx, q: &ArithQuery) -> Outcome {
    let (text, payload) = match *q {
        ArithQuery::Rho { g, r, d } => {
            let v = rho(g, r, d);
            (v.to_string(), json!({ "rho": v }))
        }
        ArithQuery::PlaneGenus { d, delta } => {
            let v = plane_genus(d, delta);
            (v.to_string(), json!({ "genus": v }))
        }
        ArithQuery::MinDegree { g } => {
            let v = minimal_plane_degree(g);
            (v.to_string(), json!({ "degree": v }))
        }
        ArithQuery::CoverDegree { g, k } => {
            let v = gonality_cover_degree(g, k).map_err(usage)?;
            (v.to_string(), json!({ "cover_degree": v.to_string() }))
        }
        ArithQuery::Theta { g } => {
            if g == 0 {
                return Err(usage("genus at least 1"));
            }
            let (e, o) = theta_counts(g);
            (format!("even {e} odd {o}"), json!({ "even": e.to_string(), "odd": o.to_string() }))
        }
        ArithQuery::Census { g } => {
            if g < 2 {
                return Err(usage("genus at least 2"));
            }
            let c = hyperelliptic_two_torsion_census(g);
            let rows: Vec<String> = c.strata.iter().map(|s| format!("t={}: {}", s.t, s.b_t)).collect();
            (format!("{}; total {}", rows.join(", "), c.total), json!(c))
        }
    };
    ctx.answer("arith", &text, &payload)
}

fn class_record(c: &ModuliDivisorClass) -> Result<Value, Failure> {
    let s = slope(c).map_err(usage)?;
    Ok(json!({ "class": c, "display": c.to_string(), "slope": s.to_string() }))
}

fn class(ctx: &Ctx, a: &ClassArgs) -> Outcome {
    let g = a.genus;
    let parity = match a.space {
        Space::Mg => None,
        Space::SpinPlus => Some(Parity::Plus),
        Space::SpinMinus => Some(Parity::Minus),
    };
    let need = |p: Parity, what: &str| {
        if parity == Some(p) {
            Ok(())
        } else {
            Err(usage(format!("{what} lives on the {} spin space", if p == Parity::Plus { "even" } else { "odd" })))
        }
    };
    let show = |c: ModuliDivisorClass| -> Result<(String, Value), Failure> {
        let rec = class_record(&c)?;
        Ok((format!("{c}; slope {}", rec["slope"].as_str().unwrap_or_default()), rec))
    };
    let (text, payload) = if a.slope_bound {
        let s = slope_bound(g);
        (s.to_string(), json!({ "slope_bound": s.to_string() }))
    } else if a.canonical {
        show(match parity {
            None => canonical_class_mg(g),
            Some(p) => canonical_class_spin(g, p),
        }
        .map_err(usage)?)?
    } else if a.theta_null {
        need(Parity::Plus, "the theta-null divisor")?;
        show(theta_null_class(g).map_err(usage)?)?
    } else if a.sigma {
        need(Parity::Minus, "the vanishing-theta divisor")?;
        show(sigma_class(g).map_err(usage)?)?
    } else if a.pencil {
        let p = k3_pencil_numbers(g).map_err(usage)?;
        let text = format!("lambda.R = {}, delta.R = {}, ratio = {}", p.lambda_r, p.delta_r, p.ratio);
        (text, json!({ "lambda_r": p.lambda_r.to_string(), "delta_r": p.delta_r.to_string(), "ratio": p.ratio.to_string() }))
    } else if let Some(rule) = a.pullback {
        let Some(p) = parity else { return Err(usage("pullback targets a spin space")) };
        let rule = match rule {
            Rule::Standard => PullbackRule::Standard,
            Rule::Literal => PullbackRule::Literal,
        };
        let pulled = canonical_class_spin_via_pullback(g, p, rule).map_err(usage)?;
        let direct = canonical_class_spin(g, p).map_err(usage)?;
        let agrees = pulled == direct;
        let (text, mut rec) = show(pulled)?;
        rec["agrees_with_canonical"] = json!(agrees);
        (format!("{text}; agrees with the canonical class: {agrees}"), rec)
    } else {
        return Err(usage("class: choose one of --slope-bound, --canonical, --theta-null, --sigma, --pencil, --pullback"));
    };
    ctx.answer("class", &text, &payload)
}
