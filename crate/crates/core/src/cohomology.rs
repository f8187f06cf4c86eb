//! `Ext^1` between group representations through explicit cocycles, and the stratification
//! of a two-character fiber by extension direction.
//!
//! A cocycle is a map `c: G -> Hom(V2, V1)` with `c(gh) = rho1(g) c(h) + c(g) rho2(h)`, i.e. the
//! corner of a block upper triangular representation `[[rho1, c], [0, rho2]]`. It is stored by
//! its values on the generators; the rest follows along the spanning tree of the group.

use std::sync::Arc;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::group::FiniteGroup;
use crate::linalg::{Mat, Subspace};
use crate::moduli::{psi_fiber, OrbitReport};
use crate::pseudorep::induce;
use crate::rep::{isomorphic, Representation};

/// Cap on enumerated projective points per stratum.
pub const PROJECTIVE_POINT_CAP: u64 = 1 << 12;

#[derive(Clone, Debug)]
pub struct Ext1Space {
    pub v1: Representation,
    pub v2: Representation,
    /// Cocycles as concatenated generator values (row-major `a x b` blocks).
    pub cocycles: Subspace,
    pub coboundaries: Subspace,
    /// Cocycles completing a coboundary basis to a cocycle basis.
    pub ext_basis: Vec<Vec<Elem>>,
}

/// An `a x b` matrix of linear forms in `n` unknowns.
struct LinMat {
    a: usize,
    b: usize,
    forms: Vec<Vec<Elem>>,
}

impl LinMat {
    fn zero(a: usize, b: usize, n: usize) -> LinMat {
        LinMat { a, b, forms: vec![vec![Elem::ZERO; n]; a * b] }
    }

    fn unknowns(a: usize, b: usize, n: usize, offset: usize) -> LinMat {
        let mut m = LinMat::zero(a, b, n);
        for (k, form) in m.forms.iter_mut().enumerate() {
            form[offset + k] = Elem::ONE;
        }
        m
    }

    fn axpy(dst: &mut [Elem], c: Elem, src: &[Elem], f: &Field) {
        if c.is_zero() {
            return;
        }
        for (d, &s) in dst.iter_mut().zip(src) {
            if !s.is_zero() {
                *d = f.add(*d, f.mul(c, s));
            }
        }
    }

    /// `self * m` for a constant `b x b` matrix.
    fn mul_right(&self, m: &Mat, f: &Field) -> LinMat {
        let n = self.forms.first().map_or(0, |v| v.len());
        let mut out = LinMat::zero(self.a, self.b, n);
        for i in 0..self.a {
            for j in 0..self.b {
                for k in 0..self.b {
                    let (src, dst) = (i * self.b + k, i * self.b + j);
                    let src = self.forms[src].clone();
                    LinMat::axpy(&mut out.forms[dst], m.get(k, j), &src, f);
                }
            }
        }
        out
    }

    /// `m * self` for a constant `a x a` matrix.
    fn mul_left(&self, m: &Mat, f: &Field) -> LinMat {
        let n = self.forms.first().map_or(0, |v| v.len());
        let mut out = LinMat::zero(self.a, self.b, n);
        for i in 0..self.a {
            for j in 0..self.b {
                for k in 0..self.a {
                    LinMat::axpy(&mut out.forms[i * self.b + j], m.get(i, k), &self.forms[k * self.b + j], f);
                }
            }
        }
        out
    }

    fn add(&self, other: &LinMat, f: &Field) -> LinMat {
        let forms = self
            .forms
            .iter()
            .zip(&other.forms)
            .map(|(x, y)| x.iter().zip(y).map(|(&u, &v)| f.add(u, v)).collect())
            .collect();
        LinMat { a: self.a, b: self.b, forms }
    }
}

fn group_of(r: &Representation) -> Result<&Arc<FiniteGroup>> {
    r.group().ok_or_else(|| Error::HypothesisViolation("cohomology needs group representations".into()))
}

/// `Ext^1_G(V2, V1)`: extensions with sub `V1` and quotient `V2`.
pub fn ext1(v1: &Representation, v2: &Representation) -> Result<Ext1Space> {
    let g = group_of(v1)?;
    if group_of(v2)? != g || v1.field() != v2.field() {
        return Err(Error::ShapeMismatch("representations of different groups or fields".into()));
    }
    let f = v1.field();
    let (a, b) = (v1.dim(), v2.dim());
    let gens = g.generators();
    let block = a * b;
    let n = gens.len() * block;

    // c(x) along the tree
    let mut c: Vec<Option<LinMat>> = (0..g.order()).map(|_| None).collect();
    c[g.identity()] = Some(LinMat::zero(a, b, n));
    for x in g.bfs_order() {
        if let Some((parent, k)) = g.tree()[x] {
            let cp = c[parent].as_ref().expect("parents precede children");
            let val = cp.mul_right(v2.image(gens[k]), f).add(&LinMat::unknowns(a, b, n, k * block).mul_left(v1.image(parent), f), f);
            c[x] = Some(val);
        }
    }
    let c: Vec<LinMat> = c.into_iter().map(|x| x.expect("tree spans the group")).collect();

    // the cocycle identity for every element and generator
    let mut rows: Vec<Vec<Elem>> = Vec::new();
    for x in 0..g.order() {
        for (k, &s) in gens.iter().enumerate() {
            let rhs = c[x].mul_right(v2.image(s), f).add(&LinMat::unknowns(a, b, n, k * block).mul_left(v1.image(x), f), f);
            for (l, r) in c[g.mul(x, s)].forms.iter().zip(&rhs.forms) {
                let row: Vec<Elem> = l.iter().zip(r).map(|(&u, &v)| f.sub(u, v)).collect();
                if row.iter().any(|e| !e.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    let z_basis = if rows.is_empty() {
        (0..n)
            .map(|i| {
                let mut v = vec![Elem::ZERO; n];
                v[i] = Elem::ONE;
                v
            })
            .collect()
    } else {
        Mat::from_rows(&rows).nullspace(f)
    };
    let cocycles = Subspace::span(n, &z_basis, f);

    // coboundaries M rho2(s) - rho1(s) M
    let mut b_vecs = Vec::new();
    for e in 0..block {
        let mut m = Mat::zeros(a, b);
        m.set(e / b, e % b, Elem::ONE);
        let mut v = Vec::with_capacity(n);
        for &s in gens {
            v.extend(m.mul(v2.image(s), f).sub(&v1.image(s).mul(&m, f), f).data);
        }
        b_vecs.push(v);
    }
    let coboundaries = Subspace::span(n, &b_vecs, f);

    let mut acc = coboundaries.clone();
    let ext_basis = cocycles.basis().iter().filter(|z| acc.insert(z, f)).cloned().collect();
    Ok(Ext1Space { v1: v1.clone(), v2: v2.clone(), cocycles, coboundaries, ext_basis })
}

impl Ext1Space {
    pub fn dim(&self) -> usize {
        self.cocycles.dim() - self.coboundaries.dim()
    }

    /// The block upper triangular representation with corner given by `cocycle`.
    pub fn assemble(&self, cocycle: &[Elem]) -> Result<Representation> {
        let g = group_of(&self.v1)?;
        let f = self.v1.field();
        let (a, b) = (self.v1.dim(), self.v2.dim());
        let gens: Vec<Mat> = g
            .generators()
            .iter()
            .enumerate()
            .map(|(k, &s)| {
                let corner = Mat { rows: a, cols: b, data: cocycle[k * a * b..(k + 1) * a * b].to_vec() };
                Mat::block(self.v1.image(s), &corner, &Mat::zeros(b, a), self.v2.image(s))
            })
            .collect();
        Representation::from_generators(g, f, gens)
    }

    /// Cocycles spanning the points of `P(Ext^1)`, one per line, normalised in the `ext_basis`
    /// coordinates (first nonzero coordinate 1).
    pub fn projective_points(&self) -> Result<Vec<Vec<Elem>>> {
        let f = self.v1.field();
        let m = self.dim();
        let count = projective_count(f.size() as u64, m);
        if count > PROJECTIVE_POINT_CAP {
            return Err(Error::PointCapExceeded { count, cap: PROJECTIVE_POINT_CAP });
        }
        let n = self.cocycles.basis().first().map_or(0, |v| v.len());
        let q = f.size() as u64;
        let mut out = Vec::new();
        for lead in 0..m {
            let free = (m - lead - 1) as u32;
            for mut k in 0..q.pow(free) {
                let mut coords = vec![Elem::ZERO; m];
                coords[lead] = Elem::ONE;
                for x in coords.iter_mut().skip(lead + 1) {
                    *x = Elem((k % q) as u32);
                    k /= q;
                }
                let mut v = vec![Elem::ZERO; n];
                for (c, z) in coords.iter().zip(&self.ext_basis) {
                    LinMat::axpy(&mut v, *c, z, f);
                }
                out.push(v);
            }
        }
        Ok(out)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "dim": self.dim().to_string(),
            "cocycle_dim": self.cocycles.dim().to_string(),
            "coboundary_dim": self.coboundaries.dim().to_string(),
        })
    }
}

/// `(q^m - 1) / (q - 1)`.
pub fn projective_count(q: u64, m: usize) -> u64 {
    (0..m as u32).map(|i| q.pow(i)).sum()
}

#[derive(Clone, Debug)]
pub struct Stratum {
    /// `ext_up`, `semisimple` or `ext_down`.
    pub kind: &'static str,
    pub ext_dim: usize,
    pub proj_points: u64,
    /// One assembled representation per point of the stratum.
    pub orbits: Vec<Representation>,
}

#[derive(Clone, Debug)]
pub struct FiberStratification {
    pub chi: Representation,
    pub psi: Representation,
    pub strata: Vec<Stratum>,
}

/// Stratifies the fiber over `psi(chi + psi)`: nonsplit extensions with sub `chi` (`ext_up`,
/// lines in `Ext^1(psi, chi)`), the semisimple point, and extensions with sub `psi` (`ext_down`).
pub fn fiber_stratify(chi: &Representation, psi: &Representation) -> Result<FiberStratification> {
    if chi.dim() != 1 || psi.dim() != 1 {
        return Err(Error::DimensionUnsupported(chi.dim().max(psi.dim())));
    }
    if isomorphic(chi, psi)? {
        return Err(Error::NotMultiplicityFree);
    }
    let stratum = |kind, e: Ext1Space| -> Result<Stratum> {
        let pts = e.projective_points()?;
        Ok(Stratum {
            kind,
            ext_dim: e.dim(),
            proj_points: pts.len() as u64,
            orbits: pts.iter().map(|z| e.assemble(z)).collect::<Result<_>>()?,
        })
    };
    let up = stratum("ext_up", ext1(chi, psi)?)?;
    let ss = Stratum { kind: "semisimple", ext_dim: 0, proj_points: 1, orbits: vec![chi.direct_sum(psi)] };
    let down = stratum("ext_down", ext1(psi, chi)?)?;
    Ok(FiberStratification { chi: chi.clone(), psi: psi.clone(), strata: vec![up, ss, down] })
}

impl FiberStratification {
    pub fn total(&self) -> u64 {
        self.strata.iter().map(|s| s.proj_points).sum()
    }

    /// Every stratum point is a distinct orbit of the report's fiber, and the fiber has no others.
    pub fn matches_fiber(&self, report: &OrbitReport) -> Result<bool> {
        let fiber = psi_fiber(report, &induce(&self.chi.direct_sum(&self.psi)))?;
        if fiber.orbits.len() as u64 != self.total() {
            return Ok(false);
        }
        let mut used = vec![false; fiber.orbits.len()];
        for s in &self.strata {
            for r in &s.orbits {
                let mut hit = None;
                for (i, &o) in fiber.orbits.iter().enumerate() {
                    if isomorphic(r, &report.orbits[o].representative)? {
                        hit = Some(i);
                        break;
                    }
                }
                match hit {
                    Some(i) if !used[i] => used[i] = true,
                    _ => return Ok(false),
                }
                if (s.kind == "semisimple") != report.orbits[fiber.orbits[hit.unwrap()]].is_closed {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "strata": self.strata.iter().map(|s| json!({
                "type": s.kind,
                "ext_dim": s.ext_dim.to_string(),
                "proj_points": s.proj_points.to_string(),
            })).collect::<Vec<_>>(),
            "total": self.total().to_string(),
        })
    }
}
