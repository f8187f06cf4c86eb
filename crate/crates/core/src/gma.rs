//! Generalized matrix algebras: data of idempotents, the canonical determinant law and
//! the coordinate ring of adapted representations.

use std::collections::HashMap;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::algebra::{FinAlgebra, Projection};
use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::groebner::{groebner, quotient_dimension, reduces_to_zero};
use crate::json::{as_array, json_usize, vec_from_value, vec_to_value};
use crate::linalg::{Mat, Subspace};
use crate::poly::{self, MPoly};
use crate::pseudorep::{ch_quotient, split_search, PseudoRep};
use crate::rep::{semisimplify, Representation};

/// Data of idempotents `({e_i}, {phi_i})` on a finite-dimensional algebra.
///
/// `phi_i` is stored through its inverse on matrix units: `units[i][a * d_i + b]` is the
/// element of `e_i R e_i` sent to the matrix unit `(a, b)` of `M_{d_i}`.
#[derive(Clone, Debug)]
pub struct GmaData {
    parent: FinAlgebra,
    dims: Vec<usize>,
    idempotents: Vec<Vec<Elem>>,
    units: Vec<Vec<Vec<Elem>>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AxiomCheck {
    pub axiom: &'static str,
    pub pass: bool,
    pub witness: Option<Value>,
}

#[derive(Clone, Debug)]
pub struct GmaReport {
    pub checks: Vec<AxiomCheck>,
}

impl GmaReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn first_failure(&self) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| !c.pass)
    }

    pub fn get(&self, axiom: &str) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| c.axiom == axiom)
    }

    pub fn to_json(&self) -> Value {
        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|c| json!({"axiom": c.axiom, "pass": c.pass, "witness": c.witness.clone().unwrap_or(Value::Null)}))
            .collect();
        json!({"pass": self.passed(), "checks": checks})
    }
}

fn pass(axiom: &'static str) -> AxiomCheck {
    AxiomCheck { axiom, pass: true, witness: None }
}

fn fail(axiom: &'static str, witness: Value) -> AxiomCheck {
    AxiomCheck { axiom, pass: false, witness: Some(witness) }
}

pub const AXIOMS: [&str; 7] = ["orthogonality", "sum", "phi_isomorphism", "trace_centrality", "UNIT", "COM", "ASSO"];

/// All permutations of `0..d` in lexicographic order.
fn permutations(d: usize) -> Vec<Vec<usize>> {
    let mut p: Vec<usize> = (0..d).collect();
    let mut out = vec![p.clone()];
    loop {
        let Some(i) = (1..d).rev().find(|&i| p[i - 1] < p[i]) else {
            return out;
        };
        let j = (i..d).rev().find(|&j| p[j] > p[i - 1]).unwrap();
        p.swap(i - 1, j);
        p[i..].reverse();
        out.push(p.clone());
    }
}

/// Cycles of a permutation, each listed from its smallest element.
fn cycles(p: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; p.len()];
    let mut out = Vec::new();
    for s in 0..p.len() {
        if seen[s] {
            continue;
        }
        let mut c = vec![s];
        seen[s] = true;
        let mut x = p[s];
        while x != s {
            seen[x] = true;
            c.push(x);
            x = p[x];
        }
        out.push(c);
    }
    out
}

fn is_odd(p: &[usize]) -> bool {
    cycles(p).iter().map(|c| c.len() - 1).sum::<usize>() % 2 == 1
}

impl GmaData {
    pub fn new(parent: &FinAlgebra, dims: Vec<usize>, idempotents: Vec<Vec<Elem>>, units: Vec<Vec<Vec<Elem>>>) -> Result<GmaData> {
        let n = parent.dim();
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::ShapeMismatch("block sizes must be positive".into()));
        }
        if idempotents.len() != dims.len() || units.len() != dims.len() {
            return Err(Error::ShapeMismatch(format!("{} blocks but {} idempotents and {} unit families", dims.len(), idempotents.len(), units.len())));
        }
        for (i, (&di, u)) in dims.iter().zip(&units).enumerate() {
            if u.len() != di * di {
                return Err(Error::ShapeMismatch(format!("block {i} needs {} matrix units, got {}", di * di, u.len())));
            }
        }
        if idempotents.iter().chain(units.iter().flatten()).any(|v| v.len() != n) {
            return Err(Error::ShapeMismatch(format!("elements must have {n} coordinates")));
        }
        Ok(GmaData { parent: parent.clone(), dims, idempotents, units })
    }

    /// Type `(1, ..., 1)`: each idempotent is its own matrix unit.
    pub fn from_idempotents(parent: &FinAlgebra, idempotents: Vec<Vec<Elem>>) -> Result<GmaData> {
        let units = idempotents.iter().map(|e| vec![e.clone()]).collect();
        GmaData::new(parent, vec![1; idempotents.len()], idempotents, units)
    }

    /// `M_n(F)` as a GMA of type `(n)` with the standard matrix units.
    pub fn full_matrix(n: usize, field: &Field) -> GmaData {
        let alg = FinAlgebra::matrix_algebra(n, field);
        let units = (0..n * n).map(|k| alg.basis_vec(k)).collect();
        GmaData::new(&alg, vec![n], vec![alg.unit().to_vec()], vec![units]).expect("shapes agree")
    }

    pub fn parent(&self) -> &FinAlgebra {
        &self.parent
    }

    pub fn field(&self) -> &Field {
        self.parent.field()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn blocks(&self) -> usize {
        self.dims.len()
    }

    /// `d = sum d_i`.
    pub fn degree(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn idempotents(&self) -> &[Vec<Elem>] {
        &self.idempotents
    }

    /// `phi_i^{-1}` of the matrix unit `(a, b)`.
    pub fn unit(&self, i: usize, a: usize, b: usize) -> &[Elem] {
        &self.units[i][a * self.dims[i] + b]
    }

    fn offset(&self, i: usize) -> usize {
        self.dims[..i].iter().sum()
    }

    /// Block and position of the flat index `l`.
    pub fn block_of(&self, l: usize) -> (usize, usize) {
        let mut l = l;
        for (i, &di) in self.dims.iter().enumerate() {
            if l < di {
                return (i, l);
            }
            l -= di;
        }
        panic!("flat index out of range")
    }

    /// The primitive idempotent `E^l`.
    pub fn primitive(&self, l: usize) -> &[Elem] {
        let (i, a) = self.block_of(l);
        self.unit(i, a, a)
    }

    fn pivot(&self, l: usize) -> Option<usize> {
        self.primitive(l).iter().position(|c| !c.is_zero())
    }

    /// `c` with `y = c E^l`, if `y` lies on that line.
    pub fn scalar(&self, l: usize, y: &[Elem]) -> Option<Elem> {
        let f = self.field();
        let e = self.primitive(l);
        let p = self.pivot(l)?;
        let c = f.div(y[p], e[p]);
        (self.parent.scale(c, e) == y).then_some(c)
    }

    fn scalar_poly(&self, l: usize, y: &[MPoly]) -> MPoly {
        let f = self.field();
        let p = self.pivot(l).expect("primitive idempotents are nonzero");
        y[p].scale(f.inv(self.primitive(l)[p]))
    }

    fn sandwich(&self, x: &[Elem], y: &[Elem], z: &[Elem]) -> Vec<Elem> {
        self.parent.mul(&self.parent.mul(x, y), z)
    }

    /// `Tr(x) = sum_i Tr phi_i(e_i x e_i)`; `None` if the data does not define it.
    pub fn trace(&self, x: &[Elem]) -> Option<Elem> {
        let f = self.field();
        let mut t = Elem::ZERO;
        for l in 0..self.degree() {
            let e = self.primitive(l);
            t = f.add(t, self.scalar(l, &self.sandwich(e, x, e))?);
        }
        Some(t)
    }

    /// The trace as a linear form on the generic element.
    pub fn trace_form(&self) -> MPoly {
        let n = self.parent.dim();
        let coeffs: Vec<Elem> = (0..n).map(|k| self.trace(&self.parent.basis_vec(k)).unwrap_or(Elem::ZERO)).collect();
        MPoly::linear(self.field(), &coeffs)
    }

    /// `A_{i,j} = E_i^1 R E_j^1`.
    pub fn corner(&self, i: usize, j: usize) -> Subspace {
        let (ei, ej) = (self.unit(i, 0, 0), self.unit(j, 0, 0));
        let vecs: Vec<Vec<Elem>> = (0..self.parent.dim()).map(|k| self.sandwich(ei, &self.parent.basis_vec(k), ej)).collect();
        Subspace::span(self.parent.dim(), &vecs, self.field())
    }

    pub fn verify(&self) -> GmaReport {
        let r = &self.parent;
        let f = self.field();
        let nb = self.blocks();
        let mut checks = Vec::new();

        let mut orth = pass("orthogonality");
        'o: for i in 0..nb {
            for j in 0..nb {
                let prod = r.mul(&self.idempotents[i], &self.idempotents[j]);
                let want = if i == j { self.idempotents[i].clone() } else { r.zero() };
                if prod != want {
                    orth = fail("orthogonality", json!({"i": i, "j": j, "product": vec_to_value(&prod)}));
                    break 'o;
                }
            }
        }
        checks.push(orth);

        let sum = self.idempotents.iter().fold(r.zero(), |acc, e| r.add(&acc, e));
        checks.push(if sum == r.unit() { pass("sum") } else { fail("sum", json!({"sum": vec_to_value(&sum)})) });

        checks.push(self.check_phi());

        if !checks.iter().all(|c| c.pass) {
            for axiom in &AXIOMS[3..] {
                checks.push(fail(axiom, json!({"not_evaluated": "idempotent data invalid"})));
            }
            return GmaReport { checks };
        }

        let n = r.dim();
        let mut centr = pass("trace_centrality");
        'c: for a in 0..n {
            for b in a + 1..n {
                let (x, y) = (r.basis_vec(a), r.basis_vec(b));
                let (t1, t2) = (self.trace(&r.mul(&x, &y)), self.trace(&r.mul(&y, &x)));
                if t1.is_none() || t1 != t2 {
                    centr = fail("trace_centrality", json!({"x": r.labels()[a], "y": r.labels()[b]}));
                    break 'c;
                }
            }
        }
        checks.push(centr);

        let corners: Vec<Vec<Subspace>> = (0..nb).map(|i| (0..nb).map(|j| self.corner(i, j)).collect()).collect();
        let lead = |i: usize| self.offset(i);

        let mut unit = pass("UNIT");
        'u: for i in 0..nb {
            if corners[i][i].dim() != 1 {
                unit = fail("UNIT", json!({"i": i, "reason": "A_ii is not one-dimensional", "dim": corners[i][i].dim()}));
                break;
            }
            for j in 0..nb {
                for x in corners[i][j].basis() {
                    if r.mul(self.unit(i, 0, 0), x) != *x || r.mul(x, self.unit(j, 0, 0)) != *x {
                        unit = fail("UNIT", json!({"i": i, "j": j, "x": vec_to_value(x)}));
                        break 'u;
                    }
                }
            }
        }
        checks.push(unit);

        let mut com = pass("COM");
        'm: for i in 0..nb {
            for j in 0..nb {
                for x in corners[i][j].basis() {
                    for y in corners[j][i].basis() {
                        let a = self.scalar(lead(i), &r.mul(x, y));
                        let b = self.scalar(lead(j), &r.mul(y, x));
                        if a.is_none() || a != b {
                            com = fail("COM", json!({"i": i, "j": j, "x": vec_to_value(x), "y": vec_to_value(y)}));
                            break 'm;
                        }
                    }
                }
            }
        }
        checks.push(com);

        let mut asso = pass("ASSO");
        'a: for i in 0..nb {
            for j in 0..nb {
                for k in 0..nb {
                    for l in 0..nb {
                        for x in corners[i][j].basis() {
                            for y in corners[j][k].basis() {
                                let xy = r.mul(x, y);
                                if !corners[i][k].contains(&xy, f) {
                                    asso = fail("ASSO", json!({"i": i, "j": j, "k": k, "x": vec_to_value(x), "y": vec_to_value(y)}));
                                    break 'a;
                                }
                                for z in corners[k][l].basis() {
                                    if r.mul(&xy, z) != r.mul(x, &r.mul(y, z)) {
                                        asso = fail("ASSO", json!({"x": vec_to_value(x), "y": vec_to_value(y), "z": vec_to_value(z)}));
                                        break 'a;
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        checks.push(asso);
        GmaReport { checks }
    }

    fn check_phi(&self) -> AxiomCheck {
        let r = &self.parent;
        let f = self.field();
        for (i, &di) in self.dims.iter().enumerate() {
            let e = &self.idempotents[i];
            for a in 0..di {
                for b in 0..di {
                    let u = self.unit(i, a, b);
                    if self.sandwich(e, u, e) != u {
                        return fail("phi_isomorphism", json!({"block": i, "unit": [a, b], "reason": "not in e_i R e_i"}));
                    }
                    for c in 0..di {
                        for d in 0..di {
                            let want = if b == c { self.unit(i, a, d).to_vec() } else { r.zero() };
                            if r.mul(u, self.unit(i, c, d)) != want {
                                return fail(
                                    "phi_isomorphism",
                                    json!({"block": i, "units": [[a, b], [c, d]], "reason": "matrix unit relation fails"}),
                                );
                            }
                        }
                    }
                }
            }
            let diag = (0..di).fold(r.zero(), |acc, a| r.add(&acc, self.unit(i, a, a)));
            if diag != *e {
                return fail("phi_isomorphism", json!({"block": i, "reason": "diagonal units do not sum to e_i"}));
            }
            let span = Subspace::span(r.dim(), &self.units[i], f);
            let corner: Vec<Vec<Elem>> = (0..r.dim()).map(|k| self.sandwich(e, &r.basis_vec(k), e)).collect();
            let full = Subspace::span(r.dim(), &corner, f);
            if span.dim() != di * di || full.dim() != di * di {
                return fail("phi_isomorphism", json!({"block": i, "reason": "e_i R e_i is not spanned by the units", "dim": full.dim()}));
            }
        }
        pass("phi_isomorphism")
    }

    /// Generic `E^l x E^m` for all `l, m`, as linear polynomial coordinates.
    fn generic_sandwiches(&self) -> Vec<Vec<Vec<MPoly>>> {
        let r = &self.parent;
        let n = r.dim();
        let d = self.degree();
        let x = r.generic_element(n, 0);
        (0..d)
            .map(|l| {
                (0..d)
                    .map(|m| {
                        let el = r.const_poly(self.primitive(l), n);
                        let em = r.const_poly(self.primitive(m), n);
                        r.mul_poly(&r.mul_poly(&el, &x), &em)
                    })
                    .collect()
            })
            .collect()
    }

    /// The cycle sum on the generic element, each cycle started `rotate` steps past its minimum.
    pub fn cycle_sum(&self, rotate: usize) -> MPoly {
        let r = &self.parent;
        let f = self.field();
        let n = r.dim();
        let s = self.generic_sandwiches();
        let terms: Vec<MPoly> = permutations(self.degree())
            .par_iter()
            .map(|p| {
                let mut term = MPoly::one(f, n);
                for c in cycles(p) {
                    let k = c[rotate % c.len()];
                    let mut acc = s[k][p[k]].clone();
                    let mut l = p[k];
                    while l != k {
                        acc = r.mul_poly(&acc, &s[l][p[l]]);
                        l = p[l];
                    }
                    term = term.mul(&self.scalar_poly(k, &acc));
                    if term.is_zero() {
                        break;
                    }
                }
                if is_odd(p) {
                    term.neg()
                } else {
                    term
                }
            })
            .collect();
        terms.iter().fold(MPoly::zero(f, n), |acc, t| acc.add(t))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "type": self.dims.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
            "idempotents": self.idempotents.iter().map(|e| vec_to_value(e)).collect::<Vec<_>>(),
            "units": self.units.iter().map(|u| u.iter().map(|x| vec_to_value(x)).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }

    /// Parses `{"type":[..],"idempotents":[..],"units":[..]}`; `units` may be omitted for type `(1,..,1)`.
    pub fn from_json(parent: &FinAlgebra, v: &Value) -> Result<GmaData> {
        let f = parent.field();
        let dims = match v.get("type") {
            Some(t) => as_array(t, "type")?.iter().map(|x| json_usize(x, "type")).collect::<Result<Vec<_>>>()?,
            None => return Err(Error::Schema("gma.type missing".into())),
        };
        let idem = v.get("idempotents").ok_or_else(|| Error::Schema("gma.idempotents missing".into()))?;
        let idempotents = as_array(idem, "idempotents")?.iter().map(|x| vec_from_value(f, x, "idempotent")).collect::<Result<Vec<_>>>()?;
        match v.get("units") {
            Some(u) => {
                let units = as_array(u, "units")?
                    .iter()
                    .map(|blk| as_array(blk, "units")?.iter().map(|x| vec_from_value(f, x, "unit")).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?;
                GmaData::new(parent, dims, idempotents, units)
            }
            None if dims.iter().all(|&d| d == 1) => GmaData::from_idempotents(parent, idempotents),
            None => Err(Error::Schema("gma.units required for blocks of size > 1".into())),
        }
    }
}

/// `D_E`: the canonical pseudorepresentation of a GMA.
pub fn canonical_det(g: &GmaData) -> Result<PseudoRep> {
    let report = g.verify();
    if let Some(c) = report.first_failure() {
        return Err(Error::GmaAxiomFailure(format!("{}: {}", c.axiom, c.witness.clone().unwrap_or(Value::Null))));
    }
    PseudoRep::from_generic(&g.parent, g.degree(), g.cycle_sum(0))
}

/// Coordinate ring `T/J` of adapted representations with the universal adapted representation.
#[derive(Clone, Debug)]
pub struct AdaptedScheme {
    gma: GmaData,
    /// `(i, j, k)`: the `k`-th basis vector of `A_{i,j}`, `i != j`.
    vars: Vec<(usize, usize, usize)>,
    names: Vec<String>,
    relations: Vec<MPoly>,
    groebner: Vec<MPoly>,
    /// Per basis element of `R`, the `d x d` image in row-major order.
    universal: Vec<Vec<MPoly>>,
}

pub fn adapted_scheme(g: &GmaData) -> Result<AdaptedScheme> {
    let report = g.verify();
    if let Some(c) = report.first_failure() {
        return Err(Error::GmaAxiomFailure(format!("{}: {}", c.axiom, c.witness.clone().unwrap_or(Value::Null))));
    }
    let r = g.parent();
    let f = g.field();
    let nb = g.blocks();
    let corners: Vec<Vec<Subspace>> = (0..nb).map(|i| (0..nb).map(|j| g.corner(i, j)).collect()).collect();
    let mut vars = Vec::new();
    let mut names = Vec::new();
    let mut index = HashMap::new();
    for i in 0..nb {
        for j in 0..nb {
            if i == j {
                continue;
            }
            for k in 0..corners[i][j].dim() {
                index.insert((i, j, k), vars.len());
                vars.push((i, j, k));
                names.push(if corners[i][j].dim() == 1 { format!("x{}{}", i + 1, j + 1) } else { format!("x{}{}_{}", i + 1, j + 1, k + 1) });
            }
        }
    }
    let m = vars.len();
    // the image in T of y in A_{i,j}
    let to_t = |i: usize, j: usize, y: &[Elem]| -> MPoly {
        if i == j {
            MPoly::constant(f, m, g.scalar(g.offset(i), y).expect("A_ii is the line through E_i^1"))
        } else {
            let c = corners[i][j].coords(y);
            c.iter().enumerate().fold(MPoly::zero(f, m), |acc, (k, &ck)| acc.add(&MPoly::var(f, m, index[&(i, j, k)]).scale(ck)))
        }
    };
    let mut relations: Vec<MPoly> = Vec::new();
    for i in 0..nb {
        for j in 0..nb {
            for k in 0..nb {
                if i == j || j == k {
                    continue;
                }
                for (bi, b) in corners[i][j].basis().iter().enumerate() {
                    for (ci, c) in corners[j][k].basis().iter().enumerate() {
                        let lhs = MPoly::var(f, m, index[&(i, j, bi)]).mul(&MPoly::var(f, m, index[&(j, k, ci)]));
                        let rel = lhs.sub(&to_t(i, k, &r.mul(b, c)));
                        if !rel.is_zero() && !relations.contains(&rel) {
                            relations.push(rel);
                        }
                    }
                }
            }
        }
    }
    let d = g.degree();
    let universal = (0..r.dim())
        .map(|k| {
            let x = r.basis_vec(k);
            let mut entries = Vec::with_capacity(d * d);
            for l in 0..d {
                let (i, a) = g.block_of(l);
                for mm in 0..d {
                    let (j, b) = g.block_of(mm);
                    let y = g.sandwich(g.unit(i, 0, a), &x, g.unit(j, b, 0));
                    entries.push(to_t(i, j, &y));
                }
            }
            entries
        })
        .collect();
    let gb = groebner(&relations);
    Ok(AdaptedScheme { gma: g.clone(), vars, names, relations, groebner: gb, universal })
}

impl AdaptedScheme {
    pub fn gma(&self) -> &GmaData {
        &self.gma
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    /// `(i, j, k)` per variable: the `k`-th basis vector of the corner `A_{i,j}`.
    pub fn var_blocks(&self) -> &[(usize, usize, usize)] {
        &self.vars
    }

    pub fn var_names(&self) -> &[String] {
        &self.names
    }

    /// Generators of `J`.
    pub fn relations(&self) -> &[MPoly] {
        &self.relations
    }

    pub fn groebner_basis(&self) -> &[MPoly] {
        &self.groebner
    }

    /// `dim_F T/J` when finite and at most `cap`.
    pub fn coordinate_ring_dimension(&self, cap: usize) -> Option<usize> {
        quotient_dimension(&self.groebner, self.nvars(), cap)
    }

    /// The universal image of a basis element of `R`, row-major over `T`.
    pub fn universal_image(&self, k: usize) -> &[MPoly] {
        &self.universal[k]
    }

    fn mat_mul(&self, a: &[MPoly], b: &[MPoly]) -> Vec<MPoly> {
        let d = self.gma.degree();
        let f = self.gma.field();
        let mut out = vec![MPoly::zero(f, self.nvars()); d * d];
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    out[i * d + j].add_assign(&a[i * d + k].mul(&b[k * d + j]));
                }
            }
        }
        out
    }

    /// The universal map is an algebra homomorphism modulo `J` (checked on basis products).
    pub fn is_homomorphism(&self) -> bool {
        let r = self.gma.parent();
        let n = r.dim();
        let d = self.gma.degree();
        let f = self.gma.field();
        let image = |x: &[Elem]| -> Vec<MPoly> {
            let mut out = vec![MPoly::zero(f, self.nvars()); d * d];
            for (k, &c) in x.iter().enumerate() {
                if !c.is_zero() {
                    for (o, u) in out.iter_mut().zip(&self.universal[k]) {
                        o.add_assign(&u.scale(c));
                    }
                }
            }
            out
        };
        let id = image(r.unit());
        let one_ok = (0..d * d).all(|e| reduces_to_zero(&id[e].sub(&MPoly::constant(f, self.nvars(), if e % (d + 1) == 0 { Elem::ONE } else { Elem::ZERO })), &self.groebner));
        one_ok
            && (0..n).all(|a| {
                (0..n).all(|b| {
                    let lhs = self.mat_mul(&self.universal[a], &self.universal[b]);
                    let rhs = image(&r.mul(&r.basis_vec(a), &r.basis_vec(b)));
                    lhs.iter().zip(&rhs).all(|(x, y)| reduces_to_zero(&x.sub(y), &self.groebner))
                })
            })
    }

    /// `det` of the universal generic image agrees with `D_E` modulo `J`.
    pub fn determinant_matches(&self, de: &PseudoRep) -> bool {
        let r = self.gma.parent();
        let f = self.gma.field();
        let (m, n, d) = (self.nvars(), r.dim(), self.gma.degree());
        let total = m + n;
        let mut generic = vec![MPoly::zero(f, total); d * d];
        for k in 0..n {
            let t = MPoly::var(f, total, m + k);
            for (g, u) in generic.iter_mut().zip(&self.universal[k]) {
                g.add_assign(&u.shift(total, 0).mul(&t));
            }
        }
        let rows: Vec<Vec<MPoly>> = (0..d).map(|i| generic[i * d..(i + 1) * d].to_vec()).collect();
        let det = poly::det(&rows, f, total);
        let target = de.generic().shift(total, m);
        let basis: Vec<MPoly> = self.groebner.iter().map(|g| g.shift(total, 0)).collect();
        reduces_to_zero(&det.sub(&target), &basis)
    }

    pub fn to_json(&self) -> Value {
        let show = |p: &MPoly| p.display_with(&self.names);
        json!({
            "type": self.gma.dims().iter().map(|d| d.to_string()).collect::<Vec<_>>(),
            "variables": self.names,
            "relations": self.relations.iter().map(show).collect::<Vec<_>>(),
            "groebner_basis": self.groebner.iter().map(show).collect::<Vec<_>>(),
        })
    }
}

/// An `F`-point of `T/J` and the adapted representation it defines.
#[derive(Clone, Debug)]
pub struct AdaptedPoint {
    pub coords: Vec<Elem>,
    pub rep: Representation,
}

/// Every `F`-point of `T/J`, in the encoding order of coordinates.
pub fn adapted_points(s: &AdaptedScheme, field: &Field, cap: u64) -> Result<Vec<AdaptedPoint>> {
    let emb = s.gma.field().embedding(field)?;
    let m = s.nvars();
    let q = field.size() as u64;
    let count = q.checked_pow(m as u32).unwrap_or(u64::MAX);
    if count > cap {
        return Err(Error::PointCapExceeded { count, cap });
    }
    let rels: Vec<MPoly> = s.relations.iter().map(|p| p.embed(&emb)).collect();
    let uni: Vec<Vec<MPoly>> = s.universal.iter().map(|u| u.iter().map(|p| p.embed(&emb)).collect()).collect();
    let d = s.gma.degree();
    let mut out = Vec::new();
    for mut idx in 0..count {
        let mut pt = vec![Elem::ZERO; m];
        for x in pt.iter_mut() {
            *x = Elem((idx % q) as u32);
            idx /= q;
        }
        if !rels.iter().all(|p| p.eval(&pt).is_zero()) {
            continue;
        }
        let images = uni.iter().map(|u| Mat { rows: d, cols: d, data: u.iter().map(|p| p.eval(&pt)).collect() }).collect();
        let rep = Representation::new(s.gma.parent(), field, images)?;
        out.push(AdaptedPoint { coords: pt, rep });
    }
    Ok(out)
}

/// Orbits of `Z(E)(F) = (F^*)^r` on adapted points: `x_{ij} -> t_i t_j^{-1} x_{ij}`.
/// Each orbit is a sorted list of indices into `points`; orbits are ordered by first index.
pub fn torus_orbits(s: &AdaptedScheme, field: &Field, points: &[AdaptedPoint]) -> Vec<Vec<usize>> {
    let at: HashMap<&[Elem], usize> = points.iter().enumerate().map(|(i, p)| (p.coords.as_slice(), i)).collect();
    let r = s.gma.blocks();
    let units: Vec<Elem> = field.nonzero_elements().collect();
    // the first factor can be fixed to 1: scalars act trivially
    let mut tori: Vec<Vec<Elem>> = vec![vec![Elem::ONE]];
    for _ in 1..r {
        tori = tori.iter().flat_map(|t| units.iter().map(move |&u| [t.clone(), vec![u]].concat())).collect();
    }
    let mut orbit_of = vec![usize::MAX; points.len()];
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    for start in 0..points.len() {
        if orbit_of[start] != usize::MAX {
            continue;
        }
        let id = orbits.len();
        let mut members = Vec::new();
        for t in &tori {
            let moved: Vec<Elem> = s
                .vars
                .iter()
                .zip(&points[start].coords)
                .map(|(&(i, j, _), &x)| field.mul(x, field.div(t[i], t[j])))
                .collect();
            let k = at[moved.as_slice()];
            if orbit_of[k] == usize::MAX {
                orbit_of[k] = id;
                members.push(k);
            }
        }
        members.sort_unstable();
        orbits.push(members);
    }
    orbits
}

/// A GMA structure built on a Cayley-Hamilton quotient.
#[derive(Clone, Debug)]
pub struct ResidualGma {
    /// `E = R/CH(D)` with the factored law.
    pub algebra: FinAlgebra,
    pub law: PseudoRep,
    pub projection: Projection,
    pub gma: GmaData,
    /// The residual factors in block order.
    pub factors: Vec<Representation>,
}

/// Lifts an idempotent of `E/N` through a nilpotent `N` by iterating `a -> 3a^2 - 2a^3`.
fn lift_idempotent(e: &FinAlgebra, a: &[Elem]) -> Result<Vec<Elem>> {
    let f = e.field();
    let mut a = a.to_vec();
    for _ in 0..64 {
        let a2 = e.mul(&a, &a);
        if a2 == a {
            return Ok(a);
        }
        let a3 = e.mul(&a2, &a);
        a = e.sub(&e.scale(f.from_int(3), &a2), &e.scale(f.from_int(2), &a3));
    }
    Err(Error::HypothesisViolation("idempotent lifting did not converge; kernel not nilpotent".into()))
}

/// Builds `({e_i}, {phi_i})` on `E = R/CH(D)` when `D` is split over its field and
/// multiplicity free, by lifting matrix units from `E/ker(D) = prod M_{d_i}(F)`.
pub fn gma_from_residual(d: &PseudoRep) -> Result<ResidualGma> {
    let f = d.field().clone();
    let (split_field, rho) = match split_search(d, 1) {
        Ok(x) => x,
        Err(Error::NotFoundWithinBound { .. }) => {
            return Err(Error::HypothesisViolation("residual pseudorepresentation is not split over its field".into()))
        }
        Err(e) => return Err(e),
    };
    debug_assert_eq!(split_field, f);
    let jh = semisimplify(&rho)?;
    if jh.factors.iter().any(|(_, m)| *m > 1) {
        return Err(Error::NotMultiplicityFree);
    }
    let factors: Vec<Representation> = jh.factors.iter().map(|(r, _)| r.clone()).collect();
    let dims: Vec<usize> = factors.iter().map(|r| r.dim()).collect();
    let (e, law, proj) = ch_quotient(d)?;
    let n = e.dim();

    // pi: E -> prod M_{d_i}(F), one column per basis element
    let rows: usize = dims.iter().map(|x| x * x).sum();
    let mut pi = Mat::zeros(rows, n);
    for k in 0..n {
        let x = proj.lift(&e.basis_vec(k));
        let mut off = 0;
        for r in &factors {
            for (t, &v) in r.image_of(&x).data.iter().enumerate() {
                pi.set(off + t, k, v);
            }
            off += r.dim() * r.dim();
        }
    }
    let block_offset = |i: usize| -> usize { dims[..i].iter().map(|x| x * x).sum() };
    let preimage = |i: usize, a: usize, b: usize| -> Result<Vec<Elem>> {
        let mut target = vec![Elem::ZERO; rows];
        target[block_offset(i) + a * dims[i] + b] = Elem::ONE;
        pi.solve(&target, &f).ok_or_else(|| Error::HypothesisViolation("residual map is not surjective".into()))
    };

    // primitive idempotents, lifted one at a time inside the complement of the previous ones
    let mut prims: Vec<Vec<Vec<Elem>>> = Vec::new();
    let mut taken = e.zero();
    for (i, &di) in dims.iter().enumerate() {
        let mut block = Vec::new();
        for a in 0..di {
            let comp = e.sub(e.unit(), &taken);
            let w = preimage(i, a, a)?;
            let p = lift_idempotent(&e, &e.mul(&e.mul(&comp, &w), &comp))?;
            taken = e.add(&taken, &p);
            block.push(p);
        }
        prims.push(block);
    }

    let mut units = Vec::new();
    let mut idempotents = Vec::new();
    for (i, &di) in dims.iter().enumerate() {
        let p = &prims[i];
        // u[a][b] for the first row and column, then products
        let mut row = vec![p[0].clone()];
        let mut col = vec![p[0].clone()];
        for a in 1..di {
            let u = e.mul(&e.mul(&p[0], &preimage(i, 0, a)?), &p[a]);
            let v = e.mul(&e.mul(&p[a], &preimage(i, a, 0)?), &p[0]);
            let uv = e.mul(&u, &v);
            // (E + nil)^{-1} in the corner with unit p[0]
            let nil = e.sub(&uv, &p[0]);
            let mut inv = p[0].clone();
            let mut pow = p[0].clone();
            for _ in 0..=n {
                pow = e.mul(&pow, &e.scale(f.neg(Elem::ONE), &nil));
                if pow == e.zero() {
                    break;
                }
                inv = e.add(&inv, &pow);
            }
            row.push(u);
            col.push(e.mul(&v, &inv));
        }
        let mut blk = Vec::with_capacity(di * di);
        for a in 0..di {
            for b in 0..di {
                blk.push(if a == b { p[a].clone() } else { e.mul(&col[a], &row[b]) });
            }
        }
        idempotents.push(p.iter().fold(e.zero(), |acc, x| e.add(&acc, x)));
        units.push(blk);
    }
    let gma = GmaData::new(&e, dims, idempotents, units)?;
    Ok(ResidualGma { algebra: e, law, projection: proj, gma, factors })
}
