//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

use std::collections::HashMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::Instant;

use pseudorep::cohomology::{ext1, fiber_stratify, projective_count};
use pseudorep::gma::{adapted_points, adapted_scheme, canonical_det, gma_from_residual, torus_orbits, GmaData};
use pseudorep::moduli::{degeneration, orbit_partition, psi_fiber, tower_check, word_invariants};
use pseudorep::ordinary::{ordinary_ideal, point_check, OrdinaryInstance};
use pseudorep::pseudorep::{ch_quotient, equals, induce, is_cayley_hamilton, kernel, split_search, PseudoRep};
use pseudorep::rep::{enumerate_reps, is_semisimple, isomorphic, DEFAULT_ENUM_CAP};
use pseudorep::{Field, FiniteGroup, MPoly, Mat, Nilpotency, Representation};

type Outcome = Result<String, String>;

fn fp(p: u32) -> Field {
    Field::new(p, 1).unwrap()
}

fn corpus_groups() -> Vec<(&'static str, Arc<FiniteGroup>)> {
    vec![
        ("C2", Arc::new(FiniteGroup::cyclic(2))),
        ("C3", Arc::new(FiniteGroup::cyclic(3))),
        ("C4", Arc::new(FiniteGroup::cyclic(4))),
        ("S3", Arc::new(FiniteGroup::symmetric(3))),
        ("D4", Arc::new(FiniteGroup::dihedral(4))),
    ]
}

const CORPUS_PRIMES: [u32; 3] = [3, 5, 7];

fn character(g: &Arc<FiniteGroup>, f: &Field, vals: &[i64]) -> Representation {
    Representation::from_generators(g, f, vals.iter().map(|&v| Mat::scalar(1, f.from_int(v))).collect()).unwrap()
}

/// Corpus representations grouped by induced law: `(law, number of reps inducing it)`.
struct Corpus {
    reps: usize,
    laws: Vec<(String, PseudoRep, usize)>,
}

fn corpus() -> Corpus {
    let mut reps = 0;
    let mut laws = Vec::new();
    for (name, g) in corpus_groups() {
        for p in CORPUS_PRIMES {
            let f = fp(p);
            for d in 1..=2 {
                let mut seen: HashMap<MPoly, usize> = HashMap::new();
                let mut local: Vec<(String, PseudoRep, usize)> = Vec::new();
                for r in enumerate_reps(&g, d, &f, DEFAULT_ENUM_CAP).unwrap() {
                    reps += 1;
                    let law = induce(&r);
                    match seen.get(law.generic()) {
                        Some(&i) => local[i].2 += 1,
                        None => {
                            seen.insert(law.generic().clone(), local.len());
                            local.push((format!("{name}/{f}/d={d}"), law, 1));
                        }
                    }
                }
                laws.extend(local);
            }
        }
    }
    Corpus { reps, laws }
}

fn law_axioms(c: &Corpus) -> Outcome {
    let bad: Vec<&str> = c
        .laws
        .iter()
        .filter(|(_, d, _)| !(d.is_multiplicative() && d.is_homogeneous()))
        .map(|(n, _, _)| n.as_str())
        .collect();
    if bad.is_empty() {
        Ok(format!("{} representations, {} distinct laws, all multiplicative and homogeneous", c.reps, c.laws.len()))
    } else {
        Err(format!("axioms fail on {bad:?}"))
    }
}

fn cayley_hamilton_det() -> Outcome {
    for d in 1..=3 {
        for p in [2, 3, 5] {
            let f = fp(p);
            if !is_cayley_hamilton(&induce(&Representation::tautological(d, &f))) {
                return Err(format!("M_{d}({f}) is not Cayley-Hamilton"));
            }
        }
    }
    Ok("(M_d(F_q), det) for d = 1..3, q in {2, 3, 5}".into())
}

fn ch_quotients(c: &Corpus) -> Outcome {
    let mut worst = 0;
    for (name, d, _) in &c.laws {
        let (_, law, _) = ch_quotient(d).map_err(|e| format!("{name}: {e}"))?;
        if !is_cayley_hamilton(&law) {
            return Err(format!("{name}: quotient law is not Cayley-Hamilton"));
        }
        let n = d.degree();
        // every corpus field has characteristic above d
        let bound = (1usize << n) - 1;
        match kernel(&law).map_err(|e| format!("{name}: {e}"))?.nilpotency_index() {
            Nilpotency::Index(k) if k <= bound => worst = worst.max(k),
            Nilpotency::Index(k) => return Err(format!("{name}: nilpotency index {k} above {bound}")),
            Nilpotency::Unbounded => return Err(format!("{name}: kernel is not nilpotent")),
        }
    }
    Ok(format!("{} laws, largest kernel nilpotency index {worst}", c.laws.len()))
}

fn closed_point_bijection() -> Outcome {
    let mut levels = 0;
    let mut c3_f7 = None;
    for (name, g) in corpus_groups() {
        for p in CORPUS_PRIMES {
            let base = fp(p);
            for level in tower_check(&g, 2, &base, 2, DEFAULT_ENUM_CAP).map_err(|e| format!("{name}/{base}: {e}"))? {
                levels += 1;
                if !level.bijective {
                    return Err(format!("{name} over {}: {} closed orbits, {} classes", level.field, level.closed, level.classes));
                }
                if name == "C3" && level.field == base && p == 7 {
                    c3_f7 = Some(level.classes);
                }
            }
            // closed iff semisimple, and each degeneration lands in the closed orbit of its fiber
            let report = orbit_partition(&g, 2, &base, DEFAULT_ENUM_CAP).map_err(|e| e.to_string())?;
            for o in &report.orbits {
                let r = &o.representative;
                if is_semisimple(r).map_err(|e| e.to_string())? != o.is_closed {
                    return Err(format!("{name}/{base}: closedness disagrees with semisimplicity"));
                }
                let closed = &report.orbits[psi_fiber(&report, &report.classes[o.pseudorep]).map_err(|e| e.to_string())?.closed];
                let dg = degeneration(r);
                if !isomorphic(&dg.limit, &closed.representative).map_err(|e| e.to_string())? {
                    return Err(format!("{name}/{base}: degeneration misses the closed orbit"));
                }
            }
        }
    }
    match c3_f7 {
        Some(6) => Ok(format!("{levels} tower levels bijective; C3 over F_7 has 6 classes")),
        other => Err(format!("C3 over F_7 gave {other:?} classes, expected 6")),
    }
}

fn gma_determinant() -> Outcome {
    let mut instances: Vec<(String, GmaData, PseudoRep)> = Vec::new();
    for p in [2, 3, 5] {
        let f = fp(p);
        for n in 2..=3 {
            instances.push((format!("M_{n}({f})"), GmaData::full_matrix(n, &f), induce(&Representation::tautological(n, &f))));
        }
        // type (1, 1) on M_2 through the diagonal idempotents
        let m2 = GmaData::full_matrix(2, &f).parent().clone();
        let g = GmaData::from_idempotents(&m2, vec![m2.basis_vec(0), m2.basis_vec(3)]).unwrap();
        instances.push((format!("M_2({f}) type (1,1)"), g, induce(&Representation::tautological(2, &f))));
    }
    let f3 = fp(3);
    let s3 = Arc::new(FiniteGroup::symmetric(3));
    let dbar = induce(&Representation::trivial(&s3, &f3, 1).direct_sum(&character(&s3, &f3, &[-1, 1])));
    let res = gma_from_residual(&dbar).map_err(|e| e.to_string())?;
    instances.push(("S3/F_3 residual type (1,1)".into(), res.gma.clone(), res.law.clone()));

    for (name, g, expected) in &instances {
        if !g.verify().passed() {
            return Err(format!("{name}: GMA axioms fail"));
        }
        let d = canonical_det(g).map_err(|e| format!("{name}: {e}"))?;
        if !equals(&d, expected) {
            return Err(format!("{name}: canonical determinant differs"));
        }
        if d.lambdas()[0] != g.trace_form() {
            return Err(format!("{name}: Lambda_1 is not the trace"));
        }
        if (1..g.degree()).any(|k| g.cycle_sum(k) != *d.generic()) {
            return Err(format!("{name}: cycle rotation changes the polynomial"));
        }
    }
    Ok(format!("{} instances", instances.len()))
}

fn adapted_points_bijection() -> Outcome {
    let f3 = fp(3);
    let f5 = fp(5);
    let s3 = Arc::new(FiniteGroup::symmetric(3));
    let d5 = Arc::new(FiniteGroup::affine_line(5, 4));
    let a52 = Arc::new(FiniteGroup::affine_plane(5, 2));
    let c2 = Arc::new(FiniteGroup::cyclic(2));
    let cases = [
        ("S3/F_3", &s3, &f3, character(&s3, &f3, &[-1, 1])),
        ("D5/F_5", &d5, &f5, character(&d5, &f5, &[1, -1])),
        ("affine plane/F_5", &a52, &f5, character(&a52, &f5, &[1, 1, 2])),
        ("C2/F_3", &c2, &f3, character(&c2, &f3, &[-1])),
    ];
    let mut counts = Vec::new();
    for (name, g, f, chi) in cases {
        let dbar = induce(&Representation::trivial(g, f, 1).direct_sum(&chi));
        let res = gma_from_residual(&dbar).map_err(|e| format!("{name}: {e}"))?;
        let s = adapted_scheme(&res.gma).map_err(|e| format!("{name}: {e}"))?;
        let pts = adapted_points(&s, f, 1 << 16).map_err(|e| format!("{name}: {e}"))?;
        let classes = torus_orbits(&s, f, &pts).len();
        let report = orbit_partition(g, 2, f, DEFAULT_ENUM_CAP).map_err(|e| e.to_string())?;
        let fiber = psi_fiber(&report, &dbar).map_err(|e| e.to_string())?.orbits.len();
        if classes != fiber {
            return Err(format!("{name}: {classes} adapted classes, {fiber} orbits"));
        }
        counts.push(format!("{name} {classes}"));
    }
    Ok(counts.join(", "))
}

fn fiber_stratification() -> Outcome {
    let f5 = fp(5);
    let g = Arc::new(FiniteGroup::affine_plane(5, 2));
    let chi = character(&g, &f5, &[1, 1, 2]);
    let psi = Representation::trivial(&g, &f5, 1);
    let m1 = ext1(&chi, &psi).map_err(|e| e.to_string())?.dim();
    let m2 = ext1(&psi, &chi).map_err(|e| e.to_string())?.dim();
    let expected = projective_count(5, m1) + 1 + projective_count(5, m2);
    let st = fiber_stratify(&chi, &psi).map_err(|e| e.to_string())?;
    let report = orbit_partition(&g, 2, &f5, DEFAULT_ENUM_CAP).map_err(|e| e.to_string())?;
    let orbits = psi_fiber(&report, &induce(&chi.direct_sum(&psi))).map_err(|e| e.to_string())?.orbits.len() as u64;
    if (m1, m2) != (2, 0) {
        return Err(format!("Ext dimensions ({m1}, {m2}), expected (2, 0)"));
    }
    if orbits != expected || st.total() != expected || !st.matches_fiber(&report).map_err(|e| e.to_string())? {
        return Err(format!("fiber has {orbits} orbits, stratification {}, formula {expected}", st.total()));
    }
    Ok(format!("m1 = {m1}, m2 = {m2}: {orbits} = 6 + 1 + 0 orbits over F_5"))
}

fn ordinary_locus() -> Outcome {
    let f5 = fp(5);
    let g = Arc::new(FiniteGroup::affine_line(5, 4));
    let psi = Representation::trivial(&g, &f5, 1);
    let chi = character(&g, &f5, &[1, -1]);
    let mut lines = Vec::new();
    // inertia <m>: chi is ramified; inertia <t>: both branches
    for (label, gen, branches) in [("I=<m>", 1, 1), ("I=<t>", 0, 2)] {
        let inertia = g.subgroup_generated(&[g.generators()[gen]]);
        let inst = OrdinaryInstance::new(&psi, &chi, &inertia).map_err(|e| e.to_string())?;
        let ideal = ordinary_ideal(&inst).map_err(|e| e.to_string())?;
        let pc = point_check(&inst, &ideal, 1 << 16).map_err(|e| e.to_string())?;
        if !(pc.sound && pc.complete) {
            return Err(format!("{label}: sound {}, complete {}", pc.sound, pc.complete));
        }
        if ideal.branches.len() != branches || (branches == 1 && ideal.basis != ideal.branches[0]) {
            return Err(format!("{label}: {} branches, expected {branches}", ideal.branches.len()));
        }
        if branches == 2 && !ideal.certified {
            return Err(format!("{label}: intersection not certified"));
        }
        lines.push(format!("{label} {}/{} ordinary", pc.ordinary, pc.points));
    }
    Ok(lines.join(", "))
}

fn splitting_bound(c: &Corpus) -> Outcome {
    for (name, d, _) in &c.laws {
        let (k, r) = split_search(d, d.degree() as u32).map_err(|e| format!("{name}: {e}"))?;
        if k.degree() as usize > d.degree() || !equals(&induce(&r), &d.base_change(&k).unwrap()) {
            return Err(format!("{name}: bad splitting over {k}"));
        }
    }
    let f5 = fp(5);
    let c3 = Arc::new(FiniteGroup::cyclic(3));
    let z = Representation::from_generators(&c3, &f5, vec![Mat::from_ints(&f5, &[&[0, -1], &[1, -1]])]).unwrap();
    let d = induce(&z);
    if split_search(&d, 1).is_ok() {
        return Err("cube roots split over F_5".into());
    }
    match split_search(&d, 2) {
        Ok((k, _)) if k.degree() == 2 => Ok(format!("{} corpus laws split within degree d; cube roots need F_25", c.laws.len())),
        Ok((k, _)) => Err(format!("cube roots split over {k}")),
        Err(e) => Err(format!("cube roots: {e}")),
    }
}

fn invariant_separation() -> Outcome {
    let mut reports = 0;
    for (name, g) in corpus_groups() {
        for p in CORPUS_PRIMES {
            let f = fp(p);
            for d in 1..=2 {
                let report = orbit_partition(&g, d, &f, DEFAULT_ENUM_CAP).map_err(|e| e.to_string())?;
                if !word_invariants(&report, g.order()).separates(&report) {
                    return Err(format!("{name}/{f}/d={d}: invariants do not separate"));
                }
                reports += 1;
            }
        }
    }
    Ok(format!("{reports} orbit reports separated"))
}

fn main() {
    let start = Instant::now();
    let corpus = corpus();
    println!("corpus built in {:.1}s", start.elapsed().as_secs_f64());
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("determinant-law axioms", Box::new(|| law_axioms(&corpus))),
        ("Cayley-Hamilton for the determinant", Box::new(cayley_hamilton_det)),
        ("CH quotient and kernel nilpotency", Box::new(|| ch_quotients(&corpus))),
        ("closed-point bijection", Box::new(closed_point_bijection)),
        ("GMA canonical determinant", Box::new(gma_determinant)),
        ("adapted-points bijection", Box::new(adapted_points_bijection)),
        ("fiber stratification", Box::new(fiber_stratification)),
        ("ordinary locus", Box::new(ordinary_locus)),
        ("splitting bound", Box::new(|| splitting_bound(&corpus))),
        ("invariant separation", Box::new(invariant_separation)),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({secs:.1}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed in {:.1}s", criteria.len() - failed, criteria.len(), start.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
