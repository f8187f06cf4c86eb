//! The map from representation points to pseudorepresentations: conjugation orbits,
//! closed orbits, fibers and trace-of-words invariants.
//!
//! Orbits are found without conjugating every point by all of `GL_d(F)`: the first generator
//! is pinned to one matrix per conjugacy class, the pinned points are classified up to
//! isomorphism, and each orbit size is `|GL_d| / |Aut|`. Point totals are recovered as
//! `sum |pinned points| * |GL_d| / |C(m)|` and must agree with the sum of orbit sizes.

use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::group::FiniteGroup;
use crate::linalg::Mat;
use crate::poly::MPoly;
use crate::pseudorep::{equals, induce, PseudoRep};
use crate::rep::{
    self, automorphism_order, centralizer_order, class_representatives, gl_order, invariant_subspace, isomorphic,
    semisimplify, JHDecomposition, Representation,
};

#[derive(Clone, Debug)]
pub struct Orbit {
    pub representative: Representation,
    pub size: u64,
    pub is_closed: bool,
    pub jh: JHDecomposition,
    /// Index into `OrbitReport::classes`.
    pub pseudorep: usize,
}

#[derive(Clone, Debug)]
pub struct OrbitReport {
    pub group: Arc<FiniteGroup>,
    pub d: usize,
    pub field: Field,
    /// Number of points of the representation variety, counted through the pinned fibers.
    pub total_points: u64,
    pub orbits: Vec<Orbit>,
    pub classes: Vec<PseudoRep>,
    /// `fibers[c]` lists the orbits inducing `classes[c]`.
    pub fibers: Vec<Vec<usize>>,
}

impl OrbitReport {
    pub fn orbit_size_sum(&self) -> u64 {
        self.orbits.iter().map(|o| o.size).sum()
    }

    pub fn closed_orbits(&self) -> Vec<usize> {
        (0..self.orbits.len()).filter(|&i| self.orbits[i].is_closed).collect()
    }

    /// Orbit sizes add up, every fiber holds exactly one closed orbit, and fibers partition the orbits.
    pub fn consistent(&self) -> bool {
        let mut seen = vec![false; self.orbits.len()];
        for fiber in &self.fibers {
            for &o in fiber {
                if seen[o] {
                    return false;
                }
                seen[o] = true;
            }
            if fiber.iter().filter(|&&o| self.orbits[o].is_closed).count() != 1 {
                return false;
            }
        }
        seen.iter().all(|&s| s) && self.orbit_size_sum() == self.total_points
    }

    pub fn to_json(&self) -> Value {
        let orbits: Vec<Value> = self
            .orbits
            .iter()
            .map(|o| {
                json!({
                    "representative": o.representative.to_json(),
                    "size": o.size.to_string(),
                    "closed": o.is_closed,
                    "jh": jh_json(&o.jh),
                    "pseudorep": o.pseudorep.to_string(),
                })
            })
            .collect();
        let fibers: Vec<Value> =
            self.fibers.iter().map(|f| Value::from(f.iter().map(|o| o.to_string()).collect::<Vec<_>>())).collect();
        json!({
            "field": self.field.spec(),
            "d": self.d.to_string(),
            "total_points": self.total_points.to_string(),
            "orbit_count": self.orbits.len().to_string(),
            "class_count": self.classes.len().to_string(),
            "orbits": orbits,
            "classes": self.classes.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
            "fibers": fibers,
        })
    }
}

pub fn jh_json(jh: &JHDecomposition) -> Value {
    Value::from(
        jh.factors
            .iter()
            .map(|(r, m)| json!({"dim": r.dim().to_string(), "multiplicity": m.to_string(), "factor": r.to_json()}))
            .collect::<Vec<_>>(),
    )
}

/// All representation points of `group` in dimension `d` over `field`, partitioned into
/// `GL_d(F)`-conjugation orbits and grouped by induced pseudorepresentation.
pub fn orbit_partition(group: &Arc<FiniteGroup>, d: usize, field: &Field, cap: u64) -> Result<OrbitReport> {
    let q = field.size() as u64;
    let gl = gl_order(d, q);
    let gens = group.generators();
    let buckets: Vec<(u64, Vec<Representation>)> = if gens.is_empty() {
        vec![(1, vec![Representation::trivial(group, field, d)])]
    } else {
        let cands = rep::identity_roots(d, field, group.element_order(gens[0]));
        let reps: Vec<Mat> = class_representatives(&cands, field)?.into_iter().map(|i| cands[i].clone()).collect();
        let pinned = rep::enumerate_reps_with_first(group, d, field, cap, &reps)?;
        let class_sizes = reps.par_iter().map(|m| centralizer_order(m, field).map(|c| gl / c)).collect::<Result<Vec<_>>>()?;
        class_sizes.into_iter().zip(pinned).collect()
    };
    let total_points = buckets.iter().map(|(c, pts)| c * pts.len() as u64).sum();

    // iso classes inside each pinned bucket are exactly the orbits meeting it
    let per_bucket: Vec<Vec<Representation>> = buckets.into_par_iter().map(|(_, pts)| iso_classes(pts)).collect::<Result<_>>()?;
    let reps: Vec<Representation> = per_bucket.into_iter().flatten().collect();

    let analysed: Vec<(u64, JHDecomposition, bool, PseudoRep)> = reps
        .par_iter()
        .map(|r| {
            let size = gl / automorphism_order(r)?;
            let jh = semisimplify(r)?;
            let closed = match jh.direct_sum() {
                None => true,
                Some(ss) => isomorphic(r, &ss)?,
            };
            Ok((size, jh, closed, induce(r)))
        })
        .collect::<Result<_>>()?;

    let mut classes: Vec<PseudoRep> = Vec::new();
    let mut index: HashMap<MPoly, usize> = HashMap::new();
    let mut fibers: Vec<Vec<usize>> = Vec::new();
    let mut orbits = Vec::with_capacity(reps.len());
    for (i, (r, (size, jh, is_closed, d_r))) in reps.into_iter().zip(analysed).enumerate() {
        let c = *index.entry(d_r.generic().clone()).or_insert_with(|| {
            classes.push(d_r);
            fibers.push(Vec::new());
            classes.len() - 1
        });
        fibers[c].push(i);
        orbits.push(Orbit { representative: r, size, is_closed, jh, pseudorep: c });
    }
    Ok(OrbitReport { group: group.clone(), d, field: field.clone(), total_points, orbits, classes, fibers })
}

fn iso_classes(points: Vec<Representation>) -> Result<Vec<Representation>> {
    let mut by_key: HashMap<Vec<Vec<Elem>>, Vec<usize>> = HashMap::new();
    let mut out: Vec<Representation> = Vec::new();
    for p in points {
        let bucket = by_key.entry(p.charpoly_key()).or_default();
        let mut found = false;
        for &j in bucket.iter() {
            if isomorphic(&out[j], &p)? {
                found = true;
                break;
            }
        }
        if !found {
            bucket.push(out.len());
            out.push(p);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct Fiber {
    pub pseudorep: usize,
    pub orbits: Vec<usize>,
    pub closed: usize,
}

impl Fiber {
    pub fn to_json(&self, report: &OrbitReport) -> Value {
        json!({
            "pseudorep": report.classes[self.pseudorep].to_json(),
            "orbit_count": self.orbits.len().to_string(),
            "closed": self.closed.to_string(),
            "orbits": self.orbits.iter().map(|&o| {
                let orb = &report.orbits[o];
                json!({"id": o.to_string(), "closed": orb.is_closed, "size": orb.size.to_string(),
                       "representative": orb.representative.to_json()})
            }).collect::<Vec<_>>(),
        })
    }
}

/// The orbits over `d`. Fails with `UnknownPseudoRep` if no point of the report induces it.
pub fn psi_fiber(report: &OrbitReport, d: &PseudoRep) -> Result<Fiber> {
    let c = report.classes.iter().position(|x| equals(x, d)).ok_or(Error::UnknownPseudoRep)?;
    let orbits = report.fibers[c].clone();
    let closed: Vec<usize> = orbits.iter().copied().filter(|&o| report.orbits[o].is_closed).collect();
    if closed.len() != 1 {
        return Err(Error::HypothesisViolation(format!("fiber has {} closed orbits", closed.len())));
    }
    Ok(Fiber { pseudorep: c, orbits, closed: closed[0] })
}

/// A one-parameter degeneration `s -> lambda(s) P^{-1} rho P lambda(s)^{-1}` along a composition
/// series, with `lambda(s) = diag(s^{r-1} I, .., s I, I)`. Block `(i, j)` scales by `s^{j-i}`,
/// so the curve extends to `s = 0` where it is the sum of the composition factors.
#[derive(Clone, Debug)]
pub struct Degeneration {
    pub conjugator: Mat,
    pub blocks: Vec<usize>,
    pub triangular: Representation,
    pub limit: Representation,
}

impl Degeneration {
    /// The curve at `s`; for `s != 0` a conjugate of the original point.
    pub fn at(&self, s: Elem) -> Representation {
        let f = self.triangular.field();
        let mut owner = Vec::new();
        for (b, &n) in self.blocks.iter().enumerate() {
            owner.extend(std::iter::repeat_n(b, n));
        }
        let images = self
            .triangular
            .images()
            .iter()
            .map(|m| {
                let mut out = m.clone();
                for i in 0..m.rows {
                    for j in 0..m.cols {
                        if owner[j] > owner[i] {
                            let e = (owner[j] - owner[i]) as u64;
                            out.set(i, j, f.mul(m.get(i, j), f.pow(s, e)));
                        }
                    }
                }
                out
            })
            .collect();
        self.triangular.with_images(images)
    }
}

/// Composition series basis `P` with `P^{-1} rho P` block upper triangular, irreducible diagonal blocks.
fn composition_flag(r: &Representation) -> (Mat, Vec<usize>) {
    let f = r.field();
    match invariant_subspace(r) {
        None => (Mat::identity(r.dim()), vec![r.dim()]),
        Some(w) => {
            let (sub, quot, p) = r.split(&w);
            let (ps, mut bs) = composition_flag(&sub);
            let (pq, bq) = composition_flag(&quot);
            let (a, b) = (sub.dim(), quot.dim());
            let inner = Mat::block(&ps, &Mat::zeros(a, b), &Mat::zeros(b, a), &pq);
            bs.extend(bq);
            (p.mul(&inner, f), bs)
        }
    }
}

pub fn degeneration(r: &Representation) -> Degeneration {
    let (p, blocks) = composition_flag(r);
    let triangular = if blocks.len() == 1 { r.clone() } else { r.conjugate(&p.inverse(r.field()).expect("flag basis is invertible")) };
    let mut dg = Degeneration { conjugator: p, blocks, triangular: triangular.clone(), limit: triangular };
    dg.limit = dg.at(Elem::ZERO);
    dg
}

/// Trace-of-words coordinates: for each group element reachable by a generator word of length
/// at most `maxlen`, all characteristic polynomial coefficients of its image.
#[derive(Clone, Debug)]
pub struct WordInvariants {
    pub elements: Vec<usize>,
    pub words: Vec<Vec<usize>>,
    /// One vector per orbit of the report.
    pub vectors: Vec<Vec<Elem>>,
}

impl WordInvariants {
    /// Two orbits share a vector iff they induce the same pseudorepresentation.
    pub fn separates(&self, report: &OrbitReport) -> bool {
        let mut first: HashMap<&[Elem], usize> = HashMap::new();
        let mut class_vec: HashMap<usize, &[Elem]> = HashMap::new();
        for (o, v) in self.vectors.iter().enumerate() {
            let c = report.orbits[o].pseudorep;
            if let Some(&prev) = first.get(v.as_slice()) {
                if prev != c {
                    return false;
                }
            } else {
                first.insert(v, c);
            }
            if let Some(&w) = class_vec.get(&c) {
                if w != v.as_slice() {
                    return false;
                }
            } else {
                class_vec.insert(c, v);
            }
        }
        true
    }

    pub fn to_json(&self, report: &OrbitReport) -> Value {
        let g = &report.group;
        json!({
            "words": self.words.iter().map(|w| w.iter().map(|&s| g.generator_names()[s].clone()).collect::<Vec<_>>().join("*")).collect::<Vec<_>>(),
            "vectors": self.vectors.iter().map(|v| crate::json::vec_to_value(v)).collect::<Vec<_>>(),
            "separates": self.separates(report),
        })
    }
}

/// Shortest generator words (indices into the generator list) for distinct group elements.
pub fn short_words(group: &FiniteGroup, maxlen: usize) -> Vec<(usize, Vec<usize>)> {
    let gens = group.generators();
    let mut seen = vec![false; group.order()];
    let mut layer = vec![(group.identity(), Vec::new())];
    seen[group.identity()] = true;
    let mut out = layer.clone();
    for _ in 0..maxlen {
        let mut next = Vec::new();
        for (x, w) in &layer {
            for (k, &s) in gens.iter().enumerate() {
                let y = group.mul(*x, s);
                if !seen[y] {
                    seen[y] = true;
                    let mut w2 = w.clone();
                    w2.push(k);
                    next.push((y, w2));
                }
            }
        }
        if next.is_empty() {
            break;
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

pub fn invariant_vector(r: &Representation, elements: &[usize]) -> Vec<Elem> {
    elements.iter().flat_map(|&g| r.image(g).charpoly(r.field())).collect()
}

pub fn word_invariants(report: &OrbitReport, maxlen: usize) -> WordInvariants {
    let (elements, words): (Vec<usize>, Vec<Vec<usize>>) = short_words(&report.group, maxlen).into_iter().unzip();
    let vectors = report.orbits.par_iter().map(|o| invariant_vector(&o.representative, &elements)).collect();
    WordInvariants { elements, words, vectors }
}

/// One level of the extension tower.
#[derive(Clone, Debug)]
pub struct TowerLevel {
    pub field: Field,
    pub orbits: usize,
    pub classes: usize,
    pub closed: usize,
    pub bijective: bool,
}

impl TowerLevel {
    pub fn to_json(&self) -> Value {
        json!({
            "field": self.field.spec(),
            "orbits": self.orbits.to_string(),
            "classes": self.classes.to_string(),
            "closed": self.closed.to_string(),
            "bijective": self.bijective,
        })
    }
}

/// Closed orbits against pseudorep classes over `F_{q^k}` for `k = 1..=bound`.
pub fn tower_check(group: &Arc<FiniteGroup>, d: usize, base: &Field, bound: u32, cap: u64) -> Result<Vec<TowerLevel>> {
    (1..=bound)
        .map(|k| {
            let field = base.extension(k)?;
            let report = orbit_partition(group, d, &field, cap)?;
            let closed = report.closed_orbits().len();
            Ok(TowerLevel {
                bijective: report.consistent() && closed == report.classes.len(),
                orbits: report.orbits.len(),
                classes: report.classes.len(),
                closed,
                field,
            })
        })
        .collect()
}

pub fn factorial(n: usize) -> u32 {
    (1..=n as u32).product()
}
