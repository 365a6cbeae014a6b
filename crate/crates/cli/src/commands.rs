use std::fmt::Write as _;
use std::path::PathBuf;
use std::sync::Arc;

use bogocert_core::bounds::{
    archbound, excess_discriminant, finram_certificate, garza_bound, nonbound, nonbound2, optimize_theta,
    prefall_bound, relbocrit_bound, silverman_bound, verify_certificate, ExcessEvidence, ExcessInput,
};
use bogocert_core::construct::{construct_alpha, nonbog_witnesses, tower_bound_42, tower_csv, trinomial_step, witnesses_csv};
use bogocert_core::ideal::split_prime;
use bogocert_core::kummer::{check_a1, check_acolem, Conclusion, KummerAnalysis};
use bogocert_core::poly::parse_rational;
use bogocert_core::{height, Certificate, Error, FieldElement, Interval, NumberField, PowerProduct};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};
use crate::job::{BoundKind, Command, Format, JobSpec};

/// Hensel precision used for prime splitting reports.
const SPLIT_PRECISION: u32 = 32;
const DEFAULT_KMAX: u32 = 24;
const DEFAULT_EPS: f64 = 1e-6;

/// Result of one job: what goes to stdout and what goes to a file.
#[derive(Debug, Default)]
pub struct Output {
    pub stdout: String,
    pub file: Option<(PathBuf, String)>,
    /// Set when the job produced output but must still exit nonzero.
    pub failure: Option<CliError>,
}

struct Report {
    json: Value,
    text: String,
    csv: Option<String>,
}

impl Report {
    fn new(value: impl Serialize, text: String) -> CliResult<Self> {
        let json = serde_json::to_value(value).map_err(|e| Error::internal("cli", e.to_string()))?;
        Ok(Report { json, text, csv: None })
    }

    fn render(&self, cmd: Command, format: Format) -> CliResult<String> {
        match format {
            Format::Text => Ok(self.text.clone()),
            Format::Json => Ok(pretty(&self.json)),
            Format::Csv => self
                .csv
                .clone()
                .ok_or_else(|| CliError::usage(format!("{} has no csv output", cmd.name()))),
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn field_of(spec: &JobSpec, cmd: Command) -> CliResult<Arc<NumberField>> {
    Ok(NumberField::parse(JobSpec::require(&spec.field, "field", cmd)?)?)
}

fn elem_of(field: &Arc<NumberField>, spec: &JobSpec, cmd: Command) -> CliResult<FieldElement> {
    Ok(FieldElement::parse(field, JobSpec::require(&spec.elem, "elem", cmd)?)?)
}

fn rational(text: &str) -> CliResult<BigRational> {
    Ok(parse_rational(text.trim())?)
}

fn bigint(text: &str, flag: &str) -> CliResult<BigInt> {
    text.trim().parse().map_err(|_| CliError::usage(format!("--{flag}: not an integer: {text}")))
}

fn bits_for(digits: usize) -> u32 {
    (digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 32
}

/// "m ± r" with the radius of an enclosure.
fn with_radius(x: &Interval, digits: usize) -> String {
    format!("{} ± {:.1e}", x.to_decimal(digits), x.radius_f64() + 0.5 * 10f64.powi(-(digits as i32)))
}

/// Parses "2^(1/2) * 7^(-1/4) * 3" into an exact power product.
pub fn parse_power_product(text: &str) -> CliResult<PowerProduct> {
    let mut acc = PowerProduct::one();
    for factor in text.split('*').map(str::trim).filter(|s| !s.is_empty()) {
        let (base, exp) = match factor.split_once('^') {
            Some((b, e)) => (b.trim(), e.trim().trim_start_matches('(').trim_end_matches(')')),
            None => (factor, "1"),
        };
        acc = acc.mul(&PowerProduct::power(rational(base)?, rational(exp)?)?);
    }
    Ok(acc)
}

fn conclusion_text(c: &Conclusion) -> String {
    match c {
        Conclusion::Divides { exponent } => format!("ℓ^{exponent} divides the relative discriminant"),
        Conclusion::TotallyRamifiedAll { exponent } => {
            format!("every prime over ℓ totally ramifies; ℓ^{exponent} divides the relative discriminant")
        }
        Conclusion::Inconclusive { reason } => format!("inconclusive: {reason}"),
    }
}

fn kummer_text(k: &KummerAnalysis, out: &mut String) {
    for r in &k.records {
        let _ = writeln!(out, "  prime over {}: g = {}, e = {}, f = {}, a = {}", k.ell, r.g, r.e, r.f, r.a);
    }
    let _ = writeln!(out, "conclusion: {}", conclusion_text(&k.conclusion));
}

pub fn run_job(cmd: Command, spec: &JobSpec) -> CliResult<Output> {
    let digits = spec.digits()?;
    let format = spec.format();
    if cmd == Command::Certify {
        return certify(spec, format);
    }
    let report = match cmd {
        Command::Height => height_report(spec, digits)?,
        Command::Split => split_report(spec)?,
        Command::Kummer => kummer_report(spec)?,
        Command::Construct => construct_report(spec)?,
        Command::Witnesses => witnesses_report(spec)?,
        Command::Tower => tower_report(spec, digits)?,
        Command::Bounds => bounds_report(spec, digits)?,
        Command::Verify => return verify(spec, format),
        Command::Certify | Command::Run => unreachable!("dispatched by the caller"),
    };
    let rendered = report.render(cmd, format)?;
    Ok(match &spec.out {
        Some(p) => Output { stdout: String::new(), file: Some((p.clone(), rendered)), failure: None },
        None => Output { stdout: rendered, file: None, failure: None },
    })
}

fn height_report(spec: &JobSpec, digits: usize) -> CliResult<Report> {
    let field = field_of(spec, Command::Height)?;
    let beta = elem_of(&field, spec, Command::Height)?;
    let h = height(&beta, digits)?;
    let value = if h.is_zero { "0".to_string() } else { format!("{} ± {:.1e}", h.decimal, h.error_bound + 0.5 * 10f64.powi(-(digits as i32))) };
    let text = format!(
        "field: {}\nelement: {}\nexact_zero: {}\nh = {}\n",
        field.minpoly(),
        beta,
        h.is_zero,
        value
    );
    let json = json!({
        "field": field.minpoly(),
        "element": beta.to_string(),
        "exact_zero": h.is_zero,
        "h": h.decimal,
        "error_bound": h.error_bound,
        "digits": h.digits,
    });
    let csv = format!("field,element,exact_zero,h,error_bound\n\"{}\",\"{}\",{},{},{:e}\n", field.minpoly(), beta, h.is_zero, h.decimal, h.error_bound);
    Ok(Report { json, text, csv: Some(csv) })
}

fn split_report(spec: &JobSpec) -> CliResult<Report> {
    let field = field_of(spec, Command::Split)?;
    let ell = *JobSpec::require(&spec.ell, "ell", Command::Split)?;
    let r = split_prime(&field, ell, SPLIT_PRECISION)?;
    let mut text = format!("field: {}\nell: {ell}\nunramified: {}\n", field.minpoly(), r.is_unramified());
    let mut csv = String::from("g,e,f\n");
    for p in &r.factors {
        let _ = writeln!(text, "  g = {}, e = {}, f = {}", p.g, p.e, p.f);
        let _ = writeln!(csv, "\"{}\",{},{}", p.g, p.e, p.f);
    }
    let mut rep = Report::new(&r, text)?;
    rep.csv = Some(csv);
    Ok(rep)
}

fn kummer_report(spec: &JobSpec) -> CliResult<Report> {
    let field = field_of(spec, Command::Kummer)?;
    let alpha = elem_of(&field, spec, Command::Kummer)?;
    let ell = *JobSpec::require(&spec.ell, "ell", Command::Kummer)?;
    let k = match &spec.rho {
        Some(r) => check_acolem(&field, &alpha, ell, &rational(r)?)?,
        None => check_a1(&field, &alpha, ell)?,
    };
    let mut text = format!("field: {}\nalpha: {alpha}\nell: {ell}\n", field.minpoly());
    kummer_text(&k, &mut text);
    Report::new(&k, text)
}

fn construct_report(spec: &JobSpec) -> CliResult<Report> {
    let field = field_of(spec, Command::Construct)?;
    let ell = *JobSpec::require(&spec.ell, "ell", Command::Construct)?;
    let c = construct_alpha(&field, ell)?;
    let mut text = format!("field: {}\nell: {ell}\nalpha: [{}]\n", field.minpoly(), c.alpha.join(", "));
    for ch in &c.checks {
        let _ = writeln!(text, "  g = {}: uniformizer [{}], v(α^ℓ' − α) = {}", ch.g, ch.uniformizer.join(", "), ch.valuation);
    }
    kummer_text(&c.kummer, &mut text);
    Report::new(&c, text)
}

fn witnesses_report(spec: &JobSpec) -> CliResult<Report> {
    let b = rational(spec.b.as_deref().unwrap_or("2"))?;
    let target = spec.eps.unwrap_or(DEFAULT_EPS);
    let kmax = spec.kmax.unwrap_or(DEFAULT_KMAX);
    let seq = nonbog_witnesses(&b, kmax, target)?;
    let mut text = format!("{}\n", seq.description);
    match seq.first_below_target {
        Some(k) => {
            let _ = writeln!(text, "first witness below {target:e}: k = {k}");
        }
        None => {
            let _ = writeln!(text, "no witness below {target:e} for k ≤ {kmax}");
        }
    }
    for it in &seq.items {
        let radius = 0.5 * 10f64.powi(-(fraction_len(&it.decimal) as i32));
        let _ = write!(text, "  k = {:>3}  {}  h = {} ± {radius:.1e}", it.k, it.element, it.decimal);
        if let Some(e) = it.engine_check {
            let _ = write!(text, "  (engine {})", bogocert_core::interval::sig15(e));
        }
        text.push('\n');
    }
    let mut rep = Report::new(&seq, text)?;
    rep.csv = Some(witnesses_csv(&seq));
    Ok(rep)
}

fn fraction_len(decimal: &str) -> usize {
    decimal.split_once('.').map_or(0, |(_, f)| f.len())
}

fn tower_report(spec: &JobSpec, digits: usize) -> CliResult<Report> {
    if let Some(p) = spec.p {
        let t = tower_bound_42(p)?;
        let bound = t.bound.to_interval(bits_for(digits));
        let text = format!(
            "p = {p}\nexcess: {}\nbound: {} = {}\n",
            t.excess_value,
            t.bound,
            with_radius(&bound, digits)
        );
        return Report::new(&t, text);
    }
    let degrees = JobSpec::require(&spec.b, "b", Command::Tower)?
        .split(',')
        .map(|s| s.trim().parse::<u64>().map_err(|_| CliError::usage(format!("--b: not a degree: {s}"))))
        .collect::<CliResult<Vec<_>>>()?;
    let mut steps = Vec::new();
    for b in degrees {
        let step = trinomial_step(&steps, b)?;
        steps.push(step);
    }
    let mut text = String::new();
    for s in &steps {
        let _ = writeln!(
            text,
            "step {}: x^{} + x + 1\n  disc = {} (closed form {}, literature value {} {})\n  split prime: {}\n  h = {} ± {:.1e} ≤ {}",
            s.index,
            s.b,
            s.disc,
            if s.disc_matches_closed_form { "agrees" } else { "differs" },
            s.disc_formula_value,
            if s.disc_matches_formula { "agrees" } else { "differs" },
            s.split_prime,
            s.height_decimal,
            0.5 * 10f64.powi(-(fraction_len(&s.height_decimal) as i32)),
            bogocert_core::interval::sig15(s.height_upper),
        );
    }
    let mut rep = Report::new(&steps, text)?;
    rep.csv = Some(tower_csv(&steps));
    Ok(rep)
}

fn power_report(label: &str, pp: &PowerProduct, digits: usize) -> CliResult<Report> {
    let v = pp.to_interval(bits_for(digits));
    let text = format!("{label} = {pp} = {}\n", with_radius(&v, digits));
    let json = json!({ "bound": label, "symbolic": pp, "expression": pp.to_string(), "value": v.to_decimal(digits), "radius": v.radius_f64() });
    Ok(Report { json, text, csv: None })
}

fn bounds_report(spec: &JobSpec, digits: usize) -> CliResult<Report> {
    let cmd = Command::Bounds;
    let kind = *JobSpec::require(&spec.kind, "kind", cmd)?;
    let prec = bits_for(digits);
    match kind {
        BoundKind::Silverman => {
            let s = *JobSpec::require(&spec.s, "s", cmd)?;
            let d = *JobSpec::require(&spec.d, "d", cmd)?;
            let delta = *JobSpec::require(&spec.delta, "delta", cmd)?;
            let norm = bigint(JobSpec::require(&spec.norm, "norm", cmd)?, "norm")?;
            power_report("silverman", &silverman_bound(s, d, delta, &norm)?, digits)
        }
        BoundKind::Garza => {
            let d = *JobSpec::require(&spec.d, "d", cmd)?;
            let r = *JobSpec::require(&spec.r, "r", cmd)?;
            let v: Interval = garza_bound(d as usize, r, &Interval::from_int(0, prec))?;
            let text = format!("garza(d = {d}, r = {r}) = {}\n", with_radius(&v, digits));
            let json = json!({ "bound": "garza", "d": d, "r": r, "value": v.to_decimal(digits), "radius": v.radius_f64() });
            Ok(Report { json, text, csv: None })
        }
        BoundKind::Excess => {
            let input = excess_input(spec)?;
            let e = excess_discriminant(&input)?;
            let v = e.value.to_interval(prec);
            let text = format!(
                "{}: {} = {}{}\n",
                e.label,
                e.value,
                with_radius(&v, digits),
                if e.certified_lower_bound { "" } else { " (upper bound on the infimum)" }
            );
            Report::new(&e, text)
        }
        BoundKind::Prefall => {
            let s = *JobSpec::require(&spec.s, "s", cmd)?;
            let d = *JobSpec::require(&spec.d, "d", cmd)?;
            let rho = rational(JobSpec::require(&spec.rho, "rho", cmd)?)?;
            let excess = parse_power_product(JobSpec::require(&spec.excess, "excess", cmd)?)?;
            power_report("prefall", &prefall_bound(s, d, &rho, &excess)?, digits)
        }
        BoundKind::Relbocrit => {
            let d = *JobSpec::require(&spec.d, "d", cmd)?;
            let rho = rational(JobSpec::require(&spec.rho, "rho", cmd)?)?;
            let data = JobSpec::require(&spec.data, "data", cmd)?
                .split(',')
                .map(|item| {
                    let (s, e) = item
                        .split_once(':')
                        .ok_or_else(|| CliError::usage(format!("--data: expected s:excess, got {item}")))?;
                    let s = s.trim().parse::<u64>().map_err(|_| CliError::usage(format!("--data: bad degree {s}")))?;
                    Ok((s, parse_power_product(e)?))
                })
                .collect::<CliResult<Vec<_>>>()?;
            let r = relbocrit_bound(d, &rho, &data)?;
            let v = r.bound.to_interval(prec);
            let text = format!("criterion {}\nbound: {} = {}\n", if r.pass { "holds" } else { "fails" }, r.bound, with_radius(&v, digits));
            Report::new(&r, text)
        }
        BoundKind::Nonbound => {
            let ell = *JobSpec::require(&spec.ell, "ell", cmd)?;
            let d = *JobSpec::require(&spec.d, "d", cmd)?;
            let rho = rational(JobSpec::require(&spec.rho, "rho", cmd)?)?;
            power_report("nonbound", &nonbound(ell, d, &rho), digits)
        }
        BoundKind::Theta => {
            let ell = *JobSpec::require(&spec.ell, "ell", cmd)?;
            let (theta, value) = optimize_theta(ell);
            let t = Interval::from_f64(theta, prec);
            let (a, b) = (nonbound2(ell, &t), archbound(ell, &t));
            let text = format!(
                "theta = {}\nnonbound2 = {}\narchbound = {}\nmin = {}\n",
                bogocert_core::interval::sig15(theta),
                with_radius(&a, digits),
                with_radius(&b, digits),
                bogocert_core::interval::sig15(value)
            );
            let json = json!({ "theta": theta, "nonbound2": a.to_decimal(digits), "archbound": b.to_decimal(digits), "value": value });
            Ok(Report { json, text, csv: None })
        }
    }
}

fn excess_input(spec: &JobSpec) -> CliResult<ExcessInput> {
    let cmd = Command::Bounds;
    let norm_dc = bigint(JobSpec::require(&spec.norm, "norm", cmd)?, "norm")?;
    let s = *JobSpec::require(&spec.s, "s", cmd)?;
    let evidence = match (&spec.primes, &spec.family) {
        (Some(p), None) => ExcessEvidence::Disjoint {
            primes: p
                .split(',')
                .map(|x| x.trim().parse::<u64>().map_err(|_| CliError::usage(format!("--primes: bad prime {x}"))))
                .collect::<CliResult<_>>()?,
        },
        (None, Some(f)) => ExcessEvidence::FiniteFamily {
            family: f
                .split(',')
                .map(|item| {
                    let (e, n) = item
                        .split_once(':')
                        .ok_or_else(|| CliError::usage(format!("--family: expected degree:norm, got {item}")))?;
                    let e = e.trim().parse::<u64>().map_err(|_| CliError::usage(format!("--family: bad degree {e}")))?;
                    Ok((e, bigint(n, "family")?))
                })
                .collect::<CliResult<_>>()?,
        },
        _ => return Err(CliError::usage("bounds --kind excess requires exactly one of --primes, --family")),
    };
    Ok(ExcessInput { norm_dc, s, evidence })
}

fn certify(spec: &JobSpec, format: Format) -> CliResult<Output> {
    let cmd = Command::Certify;
    let field = field_of(spec, cmd)?;
    let ell = *JobSpec::require(&spec.ell, "ell", cmd)?;
    let rho = rational(JobSpec::require(&spec.rho, "rho", cmd)?)?;
    let alpha = match &spec.elem {
        Some(_) => elem_of(&field, spec, cmd)?,
        None => construct_alpha(&field, ell)?
            .element
            .ok_or_else(|| Error::internal("constructor", "construction returned no element"))?,
    };
    let provenance = spec.provenance.as_deref().unwrap_or("declared");
    let cert = finram_certificate(&field, &alpha, ell, &rho, provenance, &spec.attest, spec.arch)?;
    let cert_json = pretty(&serde_json::to_value(&cert).map_err(|e| Error::internal("cli", e.to_string()))?);
    let stdout = match format {
        Format::Json => cert_json.clone(),
        Format::Text => certificate_text(&cert),
        Format::Csv => return Err(CliError::usage("certify has no csv output")),
    };
    let file = spec.out.clone().map(|p| (p, cert_json));
    Ok(Output { stdout, file, failure: None })
}

fn certificate_text(c: &Certificate) -> String {
    let mut text = format!(
        "field: {}\nell: {}\nalpha: [{}]\nrho: {} ({})\nbranch: {}\n",
        c.field,
        c.ell,
        c.alpha.join(", "),
        c.rho_k,
        c.rho_provenance,
        c.branch
    );
    if let Some(t) = &c.theta {
        let _ = writeln!(text, "theta: {t}");
    }
    let exact = c.epsilon_symbolic.as_ref().map_or(String::new(), |e| format!("{e} = "));
    let _ = writeln!(text, "epsilon = {exact}{} ± {:.1e}", c.epsilon, c.epsilon_f64() * 1e-14);
    for a in &c.assumptions {
        let _ = writeln!(text, "assumes: {a}");
    }
    text
}

fn verify(spec: &JobSpec, format: Format) -> CliResult<Output> {
    let path = JobSpec::require(&spec.cert, "cert", Command::Verify)?;
    let raw = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let cert: Certificate = serde_json::from_str(&raw)
        .map_err(|e| CliError::JobFile { path: path.clone(), message: e.to_string() })?;
    let report = verify_certificate(&cert)?;
    let stdout = match format {
        Format::Json => pretty(&serde_json::to_value(&report).map_err(|e| Error::internal("cli", e.to_string()))?),
        _ => {
            let mut t = format!("ok: {}\nrecomputed epsilon: {}\n", report.ok, report.recomputed_epsilon);
            for m in &report.mismatches {
                let _ = writeln!(t, "mismatch: {m}");
            }
            t
        }
    };
    let failure = (!report.ok).then(|| CliError::Mismatch(report.mismatches.join("; ")));
    Ok(Output { stdout, file: None, failure })
}
