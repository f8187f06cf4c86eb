use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use pseudorep::algebra::Nilpotency;
use pseudorep::cohomology::{ext1, fiber_stratify};
use pseudorep::gma::{adapted_points, adapted_scheme, canonical_det, gma_from_residual, torus_orbits, GmaData};
use pseudorep::json::{field_from_value, vec_from_value, vec_to_value};
use pseudorep::moduli::{factorial, orbit_partition, psi_fiber, tower_check, word_invariants};
use pseudorep::ordinary::{ordinary_ideal, point_check, OrdinaryInstance};
use pseudorep::pseudorep::{ch_quotient, induce, is_cayley_hamilton, kernel, split_search, PseudoRep};
use pseudorep::rep::{enumerate_algebra_reps, enumerate_reps, DEFAULT_ENUM_CAP};
use pseudorep::{saturate, selftest, Elem, Error, Field, FinAlgebra, FiniteGroup, Mat, Presentation, Representation, Result};

#[derive(Parser)]
#[command(name = "pseudorep", about = "Exact pseudorepresentation computations over finite fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(clap::Args, Clone)]
struct Flags {
    /// Representation dimension
    #[arg(long, global = true)]
    d: Option<usize>,
    /// Field override, `p` or `p^k`
    #[arg(long, global = true)]
    field: Option<String>,
    /// Longest word for invariant vectors
    #[arg(long, global = true)]
    maxlen: Option<usize>,
    /// Enumeration cap
    #[arg(long, global = true)]
    cap: Option<u64>,
    /// Largest extension degree in tower checks and splitting searches
    #[arg(long, global = true)]
    tower_bound: Option<u32>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    output: Output,
    /// Sub representation (ext1) or first character (stratify)
    #[arg(long, global = true)]
    v1: Option<String>,
    /// Quotient representation (ext1) or second character (stratify)
    #[arg(long, global = true)]
    v2: Option<String>,
}

#[derive(ValueEnum, Clone, Copy, PartialEq)]
enum Output {
    Json,
    Summary,
}

#[derive(Subcommand)]
enum Command {
    EnumerateReps { instance: PathBuf },
    Pseudorep { instance: PathBuf },
    CharPoly { instance: PathBuf },
    Kernel { instance: PathBuf },
    ChQuotient { instance: PathBuf },
    GmaVerify { instance: PathBuf },
    GmaDet { instance: PathBuf },
    AdaptedPoints { instance: PathBuf },
    Orbits { instance: PathBuf },
    Fiber { instance: PathBuf },
    Ext1 { instance: PathBuf },
    Stratify { instance: PathBuf },
    Ordinary { instance: PathBuf },
    Selftest,
}

/// A parsed instance file.
struct Instance {
    raw: Value,
    field: Field,
    group: Option<Arc<FiniteGroup>>,
    algebra: FinAlgebra,
}

fn schema(msg: impl Into<String>) -> Error {
    Error::Schema(msg.into())
}

fn parse_field_flag(s: &str) -> Result<Field> {
    let (p, k) = s.split_once('^').unwrap_or((s, "1"));
    let p = p.trim().parse().map_err(|_| schema(format!("bad field {s:?}")))?;
    let k = k.trim().parse().map_err(|_| schema(format!("bad field {s:?}")))?;
    Field::new(p, k)
}

fn builtin_group(name: &str) -> Result<FiniteGroup> {
    let parts: Vec<&str> = name.split(':').collect();
    let num = |i: usize| -> Result<usize> {
        parts.get(i).and_then(|x| x.parse().ok()).ok_or_else(|| schema(format!("bad group name {name:?}")))
    };
    match parts[0] {
        "cyclic" => Ok(FiniteGroup::cyclic(num(1)?)),
        "symmetric" => Ok(FiniteGroup::symmetric(num(1)?)),
        "dihedral" => Ok(FiniteGroup::dihedral(num(1)?)),
        "affine_line" => Ok(FiniteGroup::affine_line(num(1)?, num(2)?)),
        "affine_plane" => Ok(FiniteGroup::affine_plane(num(1)?, num(2)?)),
        _ => Err(schema(format!("unknown group {name:?}"))),
    }
}

impl Instance {
    fn load(path: &PathBuf, flags: &Flags) -> Result<Instance> {
        let text = std::fs::read_to_string(path).map_err(|e| schema(format!("{}: {e}", path.display())))?;
        let raw: Value = serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        let field = match &flags.field {
            Some(s) => parse_field_flag(s)?,
            None => field_from_value(raw.get("field").ok_or_else(|| schema("field missing"))?)?,
        };
        let cap = flags.cap.unwrap_or(pseudorep::presentation::DEFAULT_DIM_CAP as u64) as usize;
        let (group, algebra) = if let Some(g) = raw.get("group") {
            let mut group = match g {
                Value::String(name) => builtin_group(name)?,
                _ => FiniteGroup::from_json(g)?,
            };
            if let Some(i) = raw.get("inertia") {
                // element labels; the inertia group is the subgroup they generate
                let gens = pseudorep::json::as_array(i, "inertia")?
                    .iter()
                    .map(|x| {
                        let label = x.as_str().ok_or_else(|| schema("inertia must hold element labels"))?;
                        group.labels().iter().position(|l| l == label).ok_or_else(|| schema(format!("unknown element {label:?}")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                let sub = group.subgroup_generated(&gens);
                group.set_inertia(sub)?;
            }
            let group = Arc::new(group);
            let alg = FinAlgebra::group_algebra(&group, &field);
            (Some(group), alg)
        } else if let Some(p) = raw.get("presentation") {
            let strings = |key: &str| -> Result<Vec<String>> {
                pseudorep::json::as_array(p.get(key).ok_or_else(|| schema(format!("presentation.{key} missing")))?, key)?
                    .iter()
                    .map(|x| x.as_str().map(str::to_string).ok_or_else(|| schema(format!("presentation.{key} must hold strings"))))
                    .collect()
            };
            let gens = strings("generators")?;
            let rels = strings("relations")?;
            let pres = Presentation::parse(
                &field,
                &gens.iter().map(String::as_str).collect::<Vec<_>>(),
                &rels.iter().map(String::as_str).collect::<Vec<_>>(),
            )?;
            (None, saturate(&pres, cap)?)
        } else if let Some(Value::String(a)) = raw.get("algebra") {
            let n = a.strip_prefix("matrix:").and_then(|n| n.parse().ok()).ok_or_else(|| schema(format!("unknown algebra {a:?}")))?;
            (None, FinAlgebra::matrix_algebra(n, &field))
        } else {
            return Err(schema("instance needs group, presentation or algebra"));
        };
        Ok(Instance { raw, field, group, algebra })
    }

    fn d(&self, flags: &Flags) -> Result<usize> {
        match (flags.d, self.raw.get("d")) {
            (Some(d), _) => Ok(d),
            (None, Some(v)) => pseudorep::json::json_usize(v, "d"),
            (None, None) => Ok(1),
        }
    }

    fn maxlen(&self, flags: &Flags) -> Result<usize> {
        match (flags.maxlen, self.raw.get("maxlen")) {
            (Some(m), _) => Ok(m),
            (None, Some(v)) => pseudorep::json::json_usize(v, "maxlen"),
            (None, None) => Ok(self.group.as_ref().map_or(1, |g| g.order())),
        }
    }

    fn group(&self) -> Result<&Arc<FiniteGroup>> {
        self.group.as_ref().ok_or_else(|| schema("this command needs a group instance"))
    }

    /// A representation: an object in the `to_json` format, a list of character values
    /// (one per generator), or the name of an entry of `reps`.
    fn parse_rep(&self, v: &Value) -> Result<Representation> {
        match v {
            Value::String(name) => {
                let entry = self.raw.get("reps").and_then(|r| r.get(name)).ok_or_else(|| schema(format!("unknown representation {name:?}")))?;
                self.parse_rep(entry)
            }
            Value::Array(_) => {
                let g = self.group()?;
                let vals = vec_from_value(&self.field, v, "character")?;
                Representation::from_generators(g, &self.field, vals.into_iter().map(|x| Mat::scalar(1, x)).collect())
            }
            _ => match &self.group {
                Some(g) => Representation::from_json_group(g, v),
                None => Representation::from_json_algebra(&self.algebra, v),
            },
        }
    }

    fn named_rep(&self, key: &str, flag: &Option<String>) -> Result<Representation> {
        match flag {
            Some(name) => self.parse_rep(&Value::String(name.clone())),
            None => self.parse_rep(self.raw.get(key).ok_or_else(|| schema(format!("{key} missing")))?),
        }
    }

    fn rep(&self) -> Result<Representation> {
        let r = self.parse_rep(self.raw.get("rep").ok_or_else(|| schema("rep missing"))?)?;
        if !r.check()? {
            return Err(schema("rep is not a representation"));
        }
        Ok(r)
    }

    fn pseudorep(&self) -> Result<PseudoRep> {
        match self.raw.get("pseudorep") {
            Some(v) => PseudoRep::from_json(&self.algebra, v),
            None => Ok(induce(&self.rep()?)),
        }
    }

    /// `element`: a coordinate vector or a group element label.
    fn element(&self) -> Result<Vec<Elem>> {
        match self.raw.get("element") {
            Some(Value::String(label)) => {
                let g = self.group()?;
                let i = g.labels().iter().position(|l| l == label).ok_or_else(|| schema(format!("unknown element {label:?}")))?;
                let mut v = vec![Elem::ZERO; g.order()];
                v[i] = Elem::ONE;
                Ok(v)
            }
            Some(v) => vec_from_value(&self.field, v, "element"),
            None => Err(schema("element missing")),
        }
    }

    fn gma(&self) -> Result<GmaData> {
        match self.raw.get("gma") {
            Some(v) => GmaData::from_json(&self.algebra, v),
            None => Ok(gma_from_residual(&self.pseudorep()?)?.gma),
        }
    }
}

type Report = (Value, String);

fn run(cmd: &Command, flags: &Flags) -> Result<Report> {
    let cap = flags.cap.unwrap_or(DEFAULT_ENUM_CAP);
    let load = |p: &PathBuf| Instance::load(p, flags);
    match cmd {
        Command::Selftest => {
            let checks = selftest::run();
            let failed = checks.iter().filter(|c| !c.pass).count();
            let mut summary: Vec<String> = checks.iter().map(|c| format!("{} {}: {}", if c.pass { "ok  " } else { "FAIL" }, c.name, c.detail)).collect();
            summary.push(format!("{} of {} checks passed", checks.len() - failed, checks.len()));
            if failed > 0 {
                return Err(Error::HypothesisViolation(format!("{failed} selftest checks failed")));
            }
            Ok((selftest::to_json(&checks), summary.join("\n")))
        }
        Command::EnumerateReps { instance } => {
            let inst = load(instance)?;
            let d = inst.d(flags)?;
            let reps = match &inst.group {
                Some(g) => enumerate_reps(g, d, &inst.field, cap)?,
                None => enumerate_algebra_reps(&inst.algebra, d, &inst.field, cap, None)?,
            };
            let v = json!({"d": d.to_string(), "count": reps.len().to_string(), "reps": reps.iter().map(|r| r.to_json()).collect::<Vec<_>>()});
            Ok((v, format!("{} representations of dimension {d} over {}", reps.len(), inst.field)))
        }
        Command::Pseudorep { instance } => {
            let inst = load(instance)?;
            let d = inst.pseudorep()?;
            let v = json!({
                "pseudorep": d.to_json(),
                "multiplicative": d.is_multiplicative(),
                "homogeneous": d.is_homogeneous(),
                "cayley_hamilton": is_cayley_hamilton(&d),
            });
            Ok((v, format!("degree {} law on a {}-dimensional algebra", d.degree(), d.algebra().dim())))
        }
        Command::CharPoly { instance } => {
            let inst = load(instance)?;
            let d = inst.pseudorep()?;
            let cp = d.char_poly(&inst.element()?);
            let coeffs: Vec<Elem> = cp.coeffs.clone();
            Ok((json!({"coeffs": vec_to_value(&coeffs)}), format!("coefficients (constant first): {:?}", coeffs.iter().map(|c| c.0).collect::<Vec<_>>())))
        }
        Command::Kernel { instance } => {
            let inst = load(instance)?;
            let k = kernel(&inst.pseudorep()?)?;
            let basis: Vec<Value> = k.basis().iter().map(|b| vec_to_value(b)).collect();
            Ok((json!({"dim": k.dim().to_string(), "basis": basis}), format!("kernel of dimension {}", k.dim())))
        }
        Command::ChQuotient { instance } => {
            let inst = load(instance)?;
            let d = inst.pseudorep()?;
            let (e, law, _) = ch_quotient(&d)?;
            let ker = kernel(&law)?;
            let nil = match ker.nilpotency_index() {
                Nilpotency::Index(k) => Value::String(k.to_string()),
                Nilpotency::Unbounded => Value::Null,
            };
            let v = json!({
                "dim": e.dim().to_string(),
                "cayley_hamilton": is_cayley_hamilton(&law),
                "kernel_dim": ker.dim().to_string(),
                "nilpotency_index": nil,
                "algebra": e.to_json(),
            });
            Ok((v, format!("Cayley-Hamilton quotient of dimension {}, kernel dimension {}", e.dim(), ker.dim())))
        }
        Command::GmaVerify { instance } => {
            let inst = load(instance)?;
            let report = inst.gma()?.verify();
            let summary = match report.first_failure() {
                None => "all GMA axioms hold".to_string(),
                Some(c) => format!("axiom {} fails", c.axiom),
            };
            Ok((report.to_json(), summary))
        }
        Command::GmaDet { instance } => {
            let inst = load(instance)?;
            let g = inst.gma()?;
            let d = canonical_det(&g)?;
            Ok((json!({"pseudorep": d.to_json(), "type": g.dims().iter().map(|x| x.to_string()).collect::<Vec<_>>()}), format!("canonical determinant of degree {}", d.degree())))
        }
        Command::AdaptedPoints { instance } => {
            let inst = load(instance)?;
            let s = adapted_scheme(&inst.gma()?)?;
            let pts = adapted_points(&s, &inst.field, cap)?;
            let orbits = torus_orbits(&s, &inst.field, &pts);
            let v = json!({
                "scheme": s.to_json(),
                "points": pts.iter().map(|p| vec_to_value(&p.coords)).collect::<Vec<_>>(),
                "orbits": orbits.iter().map(|o| o.iter().map(|i| i.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "point_count": pts.len().to_string(),
                "orbit_count": orbits.len().to_string(),
            });
            Ok((v, format!("{} adapted points in {} torus orbits", pts.len(), orbits.len())))
        }
        Command::Orbits { instance } => {
            let inst = load(instance)?;
            let g = inst.group()?;
            let d = inst.d(flags)?;
            let report = orbit_partition(g, d, &inst.field, cap)?;
            let mut v = report.to_json();
            v["invariants"] = word_invariants(&report, inst.maxlen(flags)?).to_json(&report);
            let mut summary = format!(
                "{} points, {} orbits, {} pseudorep classes, {} closed orbits",
                report.total_points,
                report.orbits.len(),
                report.classes.len(),
                report.closed_orbits().len()
            );
            if let Some(bound) = flags.tower_bound {
                let levels = tower_check(g, d, &inst.field, bound, cap)?;
                for l in &levels {
                    summary.push_str(&format!("\n{}: {} classes, {} closed, bijective {}", l.field, l.classes, l.closed, l.bijective));
                }
                v["tower"] = Value::from(levels.iter().map(|l| l.to_json()).collect::<Vec<_>>());
            }
            Ok((v, summary))
        }
        Command::Fiber { instance } => {
            let inst = load(instance)?;
            let g = inst.group()?;
            let d = inst.pseudorep()?;
            let report = orbit_partition(g, d.degree(), &inst.field, cap)?;
            let fiber = psi_fiber(&report, &d)?;
            Ok((fiber.to_json(&report), format!("{} orbits in the fiber, closed orbit {}", fiber.orbits.len(), fiber.closed)))
        }
        Command::Ext1 { instance } => {
            let inst = load(instance)?;
            let v1 = inst.named_rep("v1", &flags.v1)?;
            let v2 = inst.named_rep("v2", &flags.v2)?;
            let e = ext1(&v1, &v2)?;
            Ok((e.to_json(), format!("dim Ext^1 = {}", e.dim())))
        }
        Command::Stratify { instance } => {
            let inst = load(instance)?;
            let chi = inst.named_rep("chi", &flags.v1)?;
            let psi = inst.named_rep("psi", &flags.v2)?;
            let st = fiber_stratify(&chi, &psi)?;
            let report = orbit_partition(inst.group()?, 2, &inst.field, cap)?;
            let mut v = st.to_json();
            v["matches_orbits"] = Value::Bool(st.matches_fiber(&report)?);
            let sizes: Vec<String> = st.strata.iter().map(|s| format!("{} {}", s.kind, s.proj_points)).collect();
            Ok((v, format!("{} orbits: {}", st.total(), sizes.join(", "))))
        }
        Command::Ordinary { instance } => {
            let inst = load(instance)?;
            let psi = inst.named_rep("psi", &flags.v1)?;
            let chi = inst.named_rep("chi", &flags.v2)?;
            let o = OrdinaryInstance::from_group_inertia(&psi, &chi)?;
            let ideal = ordinary_ideal(&o)?;
            let pc = point_check(&o, &ideal, cap)?;
            let v = json!({"ideal": ideal.to_json(), "points": pc.to_json()});
            Ok((v, format!("{} of {} adapted points ordinary; sound {}, complete {}", pc.ordinary, pc.points, pc.sound, pc.complete)))
        }
    }
}

fn split_check(inst: &Instance, flags: &Flags) -> Result<Value> {
    let d = inst.pseudorep()?;
    let bound = flags.tower_bound.unwrap_or(factorial(d.degree()));
    let (k, r) = split_search(&d, bound)?;
    Ok(json!({"field": k.spec(), "rep": r.to_json()}))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("PSEUDOREP_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    let result = run(&cli.command, &cli.flags).and_then(|(mut v, s)| {
        if let (Command::Pseudorep { instance }, true) = (&cli.command, cli.flags.tower_bound.is_some()) {
            v["split"] = split_check(&Instance::load(instance, &cli.flags)?, &cli.flags)?;
        }
        Ok((v, s))
    });
    match result {
        Ok((v, summary)) => {
            match cli.flags.output {
                Output::Json => println!("{}", serde_json::to_string_pretty(&v).expect("values serialize")),
                Output::Summary => println!("{summary}"),
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            let v = json!({"error": {"code": e.code(), "message": e.to_string()}});
            println!("{}", serde_json::to_string_pretty(&v).expect("values serialize"));
            ExitCode::from(2)
        }
    }
}
