mod output;

use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use polyspace::apolar::{
    apolar_presentation, betti_numbers, is_zero_class, normal_bundle_chern, pd_class,
    pd_class_base_independent, poincare_pairing, CohomologyClass,
};
use polyspace::chambers::{
    enumerate_chambers, signature, ChamberSignature, IndexSet, LengthVector,
};
use polyspace::ratpoly::{format_rational, MultiIndex, MultiPoly};
use polyspace::serial::{
    lengths_to_json, poly_from_json, poly_to_json, set_to_json, signature_to_json,
};
use polyspace::volume::{
    derivative_polynomial, intersection_number, volume_polynomial, volume_value, Convention,
    VOLUME_SCALE,
};
use polyspace::wallcross::{
    betti_via_path, crossing_report, validate_chamber, ChamberValidation, Submanifold,
};
use polyspace::Error;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "polyspace",
    version,
    about = "Exact invariants of polygon spaces M(r)"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Also print approximate decimals with this many digits.
    #[arg(long, value_name = "K", global = true)]
    decimal: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Apolar,
    Wallcross,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Chamber of r: maximal short sets, external, empty.
    Analyze {
        #[arg(long)]
        r: String,
    },
    /// Volume polynomial of the chamber of r and its value at r.
    Volume {
        #[arg(long)]
        r: String,
        #[arg(long, default_value = "homogeneous")]
        convention: Convention,
    },
    /// Intersection number of c^alpha, or the derivative of the volume when
    /// |alpha| < n - 3.
    Intersect {
        #[arg(long)]
        r: String,
        /// Exponents, e.g. 1,0,1,0,0.
        #[arg(long)]
        alpha: String,
        #[arg(long, default_value = "homogeneous")]
        convention: Convention,
    },
    /// Betti numbers b_0, b_2, ..., b_{2(n-3)}.
    Betti {
        #[arg(long)]
        r: String,
        #[arg(long, value_enum, default_value_t = Method::Apolar)]
        method: Method,
        #[arg(long, default_value = "homogeneous")]
        convention: Convention,
    },
    /// Betti numbers and generators of the annihilator ideal.
    Ring {
        #[arg(long)]
        r: String,
        #[arg(long, default_value = "homogeneous")]
        convention: Convention,
    },
    /// Poincaré pairing of two classes of complementary degree.
    ///
    /// A class is a monomial given by its exponents (1,0,1,0,0), the dual of
    /// a submanifold (pd:1,3 or pd:1,3@3 for base 3), or a polynomial in the
    /// JSON term layout.
    Pairing {
        #[arg(long)]
        r: String,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long, default_value = "homogeneous")]
        convention: Convention,
    },
    /// Poincaré dual of M_I and the Chern class of its normal bundle.
    PdClass {
        #[arg(long)]
        r: String,
        /// Index set, e.g. 1,3.
        #[arg(long)]
        set: String,
        /// Base element of the set (default: its smallest element).
        #[arg(long)]
        base: Option<usize>,
        #[arg(long, default_value = "homogeneous")]
        convention: Convention,
    },
    /// Walls met along the segment from one length vector to another.
    Wallcross {
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
    /// All chambers for n sides and the walls between them.
    Chambers {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 100_000)]
        max_nodes: usize,
    },
    /// Cross-checks apolar and wall-crossing Betti numbers and volume jumps,
    /// for the chamber of r or for every nonempty chamber with n sides.
    #[command(group(ArgGroup::new("target").required(true).args(["r", "n"])))]
    Validate {
        #[arg(long)]
        r: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 100_000)]
        max_nodes: usize,
    },
}

enum Failure {
    Lib(Error),
    Usage(String),
    Check(Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Outcome = Result<Value, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    ExitCode::SUCCESS
                }
                _ => ExitCode::from(4),
            };
        }
    };
    let (value, code) = match run(cli.command) {
        Ok(v) => (v, 0),
        Err(Failure::Check(v)) => (v, 1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(4);
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    let mut value = value;
    if let Some(k) = cli.decimal {
        output::add_decimals(&mut value, k);
    }
    match cli.format {
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(&value).expect("valid JSON")
        ),
        Format::Text => print!("{}", output::render_text(&value)),
    }
    ExitCode::from(code)
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::SingularLength { .. } | Error::NonGenericSegment(_) => 2,
        Error::EmptyChamber | Error::EmptyTarget => 3,
        Error::DegenerateWall { .. } => 1,
        _ => 4,
    }
}

fn run(cmd: Command) -> Outcome {
    match cmd {
        Command::Analyze { r } => analyze(&lengths(&r)?),
        Command::Volume { r, convention } => volume(&lengths(&r)?, convention),
        Command::Intersect {
            r,
            alpha,
            convention,
        } => intersect(&lengths(&r)?, &alpha, convention),
        Command::Betti {
            r,
            method,
            convention,
        } => betti(&lengths(&r)?, method, convention),
        Command::Ring { r, convention } => ring(&lengths(&r)?, convention),
        Command::Pairing {
            r,
            a,
            b,
            convention,
        } => pairing(&lengths(&r)?, &a, &b, convention),
        Command::PdClass {
            r,
            set,
            base,
            convention,
        } => pd(&lengths(&r)?, &set, base, convention),
        Command::Wallcross { from, to } => wallcross(&lengths(&from)?, &lengths(&to)?),
        Command::Chambers { n, max_nodes } => chambers(n, max_nodes),
        Command::Validate { r, n, max_nodes } => match (r, n) {
            (Some(r), _) => validate_one(&lengths(&r)?),
            (None, Some(n)) => validate_all(n, max_nodes),
            (None, None) => Err(Failure::Usage("validate needs --r or --n".into())),
        },
    }
}

fn lengths(s: &str) -> Result<LengthVector, Failure> {
    Ok(LengthVector::parse(s)?)
}

fn nonempty_signature(r: &LengthVector) -> Result<ChamberSignature, Failure> {
    let sig = signature(r)?;
    if sig.is_empty() {
        return Err(Error::EmptyChamber.into());
    }
    Ok(sig)
}

fn parse_indices(s: &str) -> Result<Vec<usize>, Failure> {
    s.trim()
        .trim_start_matches('{')
        .trim_end_matches('}')
        .split(',')
        .map(|x| {
            x.trim()
                .parse::<usize>()
                .map_err(|_| Failure::Usage(format!("bad index {x:?} in {s:?}")))
        })
        .collect()
}

fn parse_multi_index(n: usize, s: &str) -> Result<MultiIndex, Failure> {
    let exps = s
        .split(',')
        .map(|x| {
            x.trim()
                .parse::<u32>()
                .map_err(|_| Failure::Usage(format!("bad exponent {x:?} in {s:?}")))
        })
        .collect::<Result<Vec<u32>, _>>()?;
    if exps.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: exps.len(),
        }
        .into());
    }
    Ok(MultiIndex::new(exps))
}

fn parse_set(n: usize, s: &str) -> Result<IndexSet, Failure> {
    Ok(IndexSet::from_one_based(n, &parse_indices(s)?)?)
}

fn parse_base(set: &IndexSet, base: Option<usize>) -> Result<usize, Failure> {
    match base {
        None => Ok(set.elements()[0]),
        Some(0) => Err(Failure::Usage("base is 1-based".into())),
        Some(b) => Ok(b - 1),
    }
}

fn parse_class(n: usize, s: &str) -> Result<CohomologyClass, Failure> {
    let s = s.trim();
    if let Some(rest) = s.strip_prefix("pd:") {
        let (set, base) = match rest.split_once('@') {
            Some((set, b)) => {
                let b = b
                    .trim()
                    .parse::<usize>()
                    .map_err(|_| Failure::Usage(format!("bad base in {s:?}")))?;
                (set, Some(b))
            }
            None => (rest, None),
        };
        let set = parse_set(n, set)?;
        return Ok(pd_class(&set, parse_base(&set, base)?)?);
    }
    if s.starts_with('[') {
        let v: Value =
            serde_json::from_str(s).map_err(|e| Failure::Usage(format!("bad polynomial: {e}")))?;
        return Ok(CohomologyClass::new(poly_from_json(n, &v)?)?);
    }
    let alpha = parse_multi_index(n, s)?;
    let c = polyspace::ratpoly::rat(1, 1);
    Ok(CohomologyClass::new(MultiPoly::monomial(alpha, c))?)
}

fn analyze(r: &LengthVector) -> Outcome {
    let sig = signature(r)?;
    Ok(json!({
        "n": r.n(),
        "lengths": lengths_to_json(r),
        "perimeter": format_rational(&r.perimeter()),
        "maximal_shorts": signature_to_json(&sig),
        "external": sig.is_external(),
        "empty": sig.is_empty(),
    }))
}

fn volume(r: &LengthVector, conv: Convention) -> Outcome {
    conv.check(r.n())?;
    let vp = volume_polynomial(&signature(r)?);
    Ok(json!({
        "convention": conv.to_string(),
        "poly": poly_to_json(&vp.in_convention(conv)?),
        "value_at_r": format_rational(&volume_value(r)?),
        "scale": VOLUME_SCALE,
    }))
}

fn intersect(r: &LengthVector, alpha: &str, conv: Convention) -> Outcome {
    let sig = signature(r)?;
    let alpha = parse_multi_index(r.n(), alpha)?;
    let top = (r.n() - 3) as u32;
    if alpha.total() == top {
        Ok(json!({
            "convention": conv.to_string(),
            "alpha": alpha.exps(),
            "value": format_rational(&intersection_number(&sig, &alpha, conv)?),
            "scale": VOLUME_SCALE,
        }))
    } else {
        let d = derivative_polynomial(&volume_polynomial(&sig), &alpha, conv)?;
        Ok(json!({
            "convention": conv.to_string(),
            "alpha": alpha.exps(),
            "derivative": poly_to_json(&d),
            "scale": VOLUME_SCALE,
        }))
    }
}

fn betti(r: &LengthVector, method: Method, conv: Convention) -> Outcome {
    let sig = nonempty_signature(r)?;
    Ok(match method {
        Method::Apolar => json!({ "apolar": betti_numbers(&sig, conv)? }),
        Method::Wallcross => json!({ "wallcross": betti_via_path(r)? }),
        Method::Both => {
            let a = betti_numbers(&sig, conv)?;
            let w = betti_via_path(r)?;
            json!({ "apolar": a, "wallcross": w, "agree": a == w })
        }
    })
}

fn ring(r: &LengthVector, conv: Convention) -> Outcome {
    let sig = nonempty_signature(r)?;
    let pres = apolar_presentation(&sig, conv)?;
    let generators: Vec<Value> = pres
        .generators
        .iter()
        .enumerate()
        .map(|(k, gens)| {
            json!({
                "degree": k + 1,
                "polys": gens.iter().map(poly_to_json).collect::<Vec<_>>(),
            })
        })
        .collect();
    Ok(json!({
        "convention": conv.to_string(),
        "maximal_shorts": signature_to_json(&sig),
        "betti": pres.betti,
        "generators": generators,
    }))
}

fn pairing(r: &LengthVector, a: &str, b: &str, conv: Convention) -> Outcome {
    let sig = nonempty_signature(r)?;
    let a = parse_class(r.n(), a)?;
    let b = parse_class(r.n(), b)?;
    let value = poincare_pairing(&a, &b, &sig, conv)?;
    Ok(json!({
        "convention": conv.to_string(),
        "a": poly_to_json(a.poly()),
        "b": poly_to_json(b.poly()),
        "value": format_rational(&value),
    }))
}

fn pd(r: &LengthVector, set: &str, base: Option<usize>, conv: Convention) -> Outcome {
    let sig = nonempty_signature(r)?;
    let set = parse_set(r.n(), set)?;
    let base = parse_base(&set, base)?;
    let class = pd_class(&set, base)?;
    let chern = normal_bundle_chern(&set, base)?;
    Ok(json!({
        "convention": conv.to_string(),
        "set": set_to_json(&set),
        "base": base + 1,
        "degree": class.degree(),
        "class": poly_to_json(class.poly()),
        "is_zero": is_zero_class(&class, &sig, conv)?,
        "normal_chern": poly_to_json(chern.poly()),
        "base_independent": pd_class_base_independent(&set, &sig, conv)?,
    }))
}

fn submanifold(s: &Submanifold) -> Value {
    json!({ "set": set_to_json(&s.set), "dim": s.dim, "text": s.to_string() })
}

fn wallcross(from: &LengthVector, to: &LengthVector) -> Outcome {
    let sig_from = signature(from)?;
    signature(to)?;
    let (to_used, crossings) = polyspace::chambers::segment_crossings_perturbed(from, to)?;
    let mut sig = sig_from.clone();
    let mut reports = Vec::new();
    for c in &crossings {
        let next = sig.flip(&c.wall.index_set())?;
        let rep = crossing_report(&sig, &next)?;
        let decomposition: Vec<Value> = rep
            .decomposition
            .iter()
            .map(|d| {
                json!({
                    "power": d.power,
                    "class": poly_to_json(d.class.poly()),
                    "is_zero": d.is_zero,
                })
            })
            .collect();
        reports.push(json!({
            "t": format_rational(&c.t),
            "wall": set_to_json(&rep.wall.index_set()),
            "p": rep.p,
            "q": rep.q,
            "before": signature_to_json(&sig),
            "after": signature_to_json(&next),
            "dies": submanifold(&rep.dies),
            "born": submanifold(&rep.born),
            "betti_delta": rep.betti_delta,
            "pd_born": rep.pd_born.as_ref().map(|c| poly_to_json(c.poly())),
            "normal_chern": rep.normal_chern.as_ref().map(|c| poly_to_json(c.poly())),
            "decomposition": decomposition,
        }));
        sig = next;
    }
    let mut out = json!({
        "from": lengths_to_json(from),
        "to": lengths_to_json(to),
    });
    if &to_used != to {
        out["to_used"] = lengths_to_json(&to_used);
    }
    out["crossings"] = Value::Array(reports);
    Ok(out)
}

fn chambers(n: usize, max_nodes: usize) -> Outcome {
    let g = enumerate_chambers(n, max_nodes)?;
    let nodes: Vec<Value> = g
        .nodes
        .iter()
        .enumerate()
        .map(|(k, node)| {
            json!({
                "index": k,
                "maximal_shorts": signature_to_json(&node.signature),
                "representative": lengths_to_json(&node.representative),
                "empty": node.empty,
                "external": node.external,
            })
        })
        .collect();
    let edges: Vec<Value> = g
        .edges
        .iter()
        .map(|e| json!({ "from": e.from, "to": e.to, "wall": set_to_json(&e.wall.index_set()) }))
        .collect();
    Ok(json!({
        "n": n,
        "counts": {
            "chambers": g.nodes.len(),
            "nonempty": g.nonempty().count(),
            "walls": g.edges.len(),
        },
        "chambers": nodes,
        "walls": edges,
    }))
}

fn validation_json(v: &ChamberValidation) -> Value {
    json!({
        "maximal_shorts": signature_to_json(&v.chamber),
        "representative": lengths_to_json(&v.representative),
        "betti_apolar": v.betti_apolar,
        "betti_path": v.betti_path,
        "duality": v.duality,
        "jumps": v.jumps.iter().map(|(w, ok)| {
            json!({ "wall": set_to_json(&w.index_set()), "ok": ok })
        }).collect::<Vec<_>>(),
        "passed": v.passed(),
    })
}

fn validate_one(r: &LengthVector) -> Outcome {
    let sig = nonempty_signature(r)?;
    let v = validate_chamber(&sig)?;
    let out = validation_json(&v);
    if v.passed() {
        Ok(out)
    } else {
        Err(Failure::Check(out))
    }
}

fn validate_all(n: usize, max_nodes: usize) -> Outcome {
    let g = enumerate_chambers(n, max_nodes)?;
    let mut all_passed = true;
    let mut rows = Vec::new();
    for node in g.nonempty() {
        let v = validate_chamber(&node.signature)?;
        all_passed &= v.passed();
        rows.push(validation_json(&v));
    }
    let out = json!({
        "n": n,
        "chambers": rows.len(),
        "passed": all_passed,
        "results": rows,
    });
    if all_passed {
        Ok(out)
    } else {
        Err(Failure::Check(out))
    }
}
