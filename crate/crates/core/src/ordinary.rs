//! The ordinary locus for a residually split two-character pseudorepresentation: adapted
//! representations that are reducible with a one-dimensional quotient trivial on a
//! distinguished inertia subgroup.

use std::collections::HashMap;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::gma::{adapted_points, adapted_scheme, gma_from_residual, AdaptedScheme, ResidualGma};
use crate::groebner::{groebner, reduces_to_zero};
use crate::group::FiniteGroup;
use crate::linalg::{Mat, Subspace};
use crate::poly::{MPoly, Monomial};
use crate::pseudorep::induce;
use crate::rep::{isomorphic, Representation};

/// Largest truncated monomial basis used for ideal intersection.
pub const TRUNCATION_CAP: usize = 1 << 12;

#[derive(Clone, Debug)]
pub struct OrdinaryInstance {
    pub group: Arc<FiniteGroup>,
    pub inertia: Vec<usize>,
    /// Unramified residual character.
    pub psi: Representation,
    pub chi: Representation,
    pub residual: ResidualGma,
    pub scheme: AdaptedScheme,
    psi_block: usize,
    chi_block: usize,
}

fn character_on(r: &Representation, g: usize) -> Elem {
    r.image(g).get(0, 0)
}

impl OrdinaryInstance {
    /// Checks `psi|_I = 1` and `psi != chi`, then builds the adapted scheme of the
    /// Cayley-Hamilton quotient of `F[G]` by `psi(psi + chi)`.
    pub fn new(psi: &Representation, chi: &Representation, inertia: &[usize]) -> Result<OrdinaryInstance> {
        let group = psi.group().ok_or_else(|| Error::HypothesisViolation("ordinary instances need a group".into()))?.clone();
        if psi.dim() != 1 || chi.dim() != 1 {
            return Err(Error::DimensionUnsupported(psi.dim() + chi.dim()));
        }
        if !group.is_subgroup(inertia) {
            return Err(Error::HypothesisViolation("inertia is not a subgroup".into()));
        }
        if inertia.iter().any(|&g| character_on(psi, g) != Elem::ONE) {
            return Err(Error::HypothesisViolation("psi is ramified".into()));
        }
        if isomorphic(psi, chi)? {
            return Err(Error::HypothesisViolation("psi and chi coincide on the decomposition group".into()));
        }
        let residual = gma_from_residual(&induce(&psi.direct_sum(chi)))?;
        let scheme = adapted_scheme(&residual.gma)?;
        let block_for = |c: &Representation| -> Result<usize> {
            for (i, r) in residual.factors.iter().enumerate() {
                if isomorphic(r, c)? {
                    return Ok(i);
                }
            }
            Err(Error::HypothesisViolation("residual factor not found".into()))
        };
        let psi_block = block_for(psi)?;
        let chi_block = block_for(chi)?;
        Ok(OrdinaryInstance { group, inertia: inertia.to_vec(), psi: psi.clone(), chi: chi.clone(), residual, scheme, psi_block, chi_block })
    }

    /// Instance using the group's own inertia subgroup.
    pub fn from_group_inertia(psi: &Representation, chi: &Representation) -> Result<OrdinaryInstance> {
        let inertia = psi
            .group()
            .and_then(|g| g.inertia())
            .ok_or_else(|| Error::HypothesisViolation("group has no inertia subgroup".into()))?
            .to_vec();
        OrdinaryInstance::new(psi, chi, &inertia)
    }

    pub fn chi_unramified(&self) -> bool {
        self.inertia.iter().all(|&g| character_on(&self.chi, g) == Elem::ONE)
    }

    pub fn field(&self) -> &Field {
        self.psi.field()
    }

    fn group_vec(&self, g: usize) -> Vec<Elem> {
        let mut v = vec![Elem::ZERO; self.group.order()];
        v[g] = Elem::ONE;
        v
    }

    /// Universal image of a group element, row-major over `T`.
    fn universal_of(&self, g: usize) -> Vec<MPoly> {
        let e = self.residual.projection.apply(&self.group_vec(g));
        let m = self.scheme.nvars();
        let f = self.field();
        let mut out = vec![MPoly::zero(f, m); 4];
        for (k, &c) in e.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, p) in out.iter_mut().zip(self.scheme.universal_image(k)) {
                o.add_assign(&p.scale(c));
            }
        }
        out
    }

    /// Generators of the branch where block `quotient` is an unramified quotient: the corner
    /// coordinates `A_{quotient,sub}` (so the `sub` line is stable) and `rho_qq(s) - 1` on inertia.
    fn branch(&self, quotient: usize, sub: usize) -> Vec<MPoly> {
        let f = self.field();
        let m = self.scheme.nvars();
        let mut gens: Vec<MPoly> = self
            .scheme
            .var_blocks()
            .iter()
            .enumerate()
            .filter(|(_, &(i, j, _))| i == quotient && j == sub)
            .map(|(v, _)| MPoly::var(f, m, v))
            .collect();
        for s in self.group.subgroup_generators(&self.inertia) {
            let u = self.universal_of(s);
            gens.push(u[quotient * 2 + quotient].sub(&MPoly::one(f, m)));
        }
        gens.extend(self.scheme.relations().iter().cloned());
        gens
    }
}

#[derive(Clone, Debug)]
pub struct OrdinaryIdeal {
    /// Groebner bases of the branch ideals (relations of `T/J` included).
    pub branches: Vec<Vec<MPoly>>,
    /// Groebner basis of the intersection.
    pub basis: Vec<MPoly>,
    /// `branch_1 * branch_2` lies in the computed ideal, so its zero set is exactly the union.
    pub certified: bool,
    pub nvars: usize,
    pub names: Vec<String>,
}

impl OrdinaryIdeal {
    pub fn contains_point(&self, pt: &[Elem]) -> bool {
        self.basis.iter().all(|g| g.eval(pt).is_zero())
    }

    /// The ideal is `J` itself: every adapted representation is ordinary.
    pub fn is_whole_space(&self, relations_gb: &[MPoly]) -> bool {
        self.basis.iter().all(|g| reduces_to_zero(g, relations_gb))
    }

    pub fn to_json(&self) -> Value {
        let show = |ps: &[MPoly]| ps.iter().map(|p| p.display_with(&self.names)).collect::<Vec<_>>();
        json!({
            "variables": self.names,
            "branches": self.branches.iter().map(|b| show(b)).collect::<Vec<_>>(),
            "generators": show(&self.basis),
            "certified": self.certified,
        })
    }
}

fn monomials_up_to(nvars: usize, deg: u32) -> Vec<Monomial> {
    let mut out = vec![Monomial::one(nvars)];
    let mut layer = out.clone();
    for _ in 0..deg {
        let mut next: Vec<Monomial> = Vec::new();
        for m in &layer {
            for i in 0..nvars {
                // nondecreasing last variable avoids duplicates
                if m.0[i + 1..].iter().any(|&e| e > 0) {
                    continue;
                }
                next.push(m.mul(&Monomial::var(nvars, i)));
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// The degree `<= deg` part of the ideal with graded Groebner basis `gb`, in monomial coordinates.
fn truncation(gb: &[MPoly], monos: &[Monomial], index: &HashMap<Monomial, usize>, deg: u32) -> Subspace {
    let f = gb[0].field();
    let n = monos.len();
    let mut vecs = Vec::new();
    for g in gb {
        let gd = g.total_degree().unwrap_or(0);
        for m in monos.iter().filter(|m| m.degree() + gd <= deg) {
            let p = g.mul_term(m, Elem::ONE);
            let mut v = vec![Elem::ZERO; n];
            for (t, &c) in p.terms() {
                v[index[t]] = c;
            }
            vecs.push(v);
        }
    }
    Subspace::span(n, &vecs, f)
}

/// Intersection of two ideals through their degree-truncated parts. Exact up to the truncation
/// degree because both bases are graded Groebner bases.
fn intersect(a: &[MPoly], b: &[MPoly], nvars: usize) -> Result<(Vec<MPoly>, bool)> {
    if a.is_empty() || b.is_empty() {
        return Ok((Vec::new(), true));
    }
    let f = a[0].field().clone();
    let maxdeg = |g: &[MPoly]| g.iter().filter_map(|p| p.total_degree()).max().unwrap_or(0);
    let deg = maxdeg(a) + maxdeg(b);
    let monos = monomials_up_to(nvars, deg);
    if monos.len() > TRUNCATION_CAP {
        return Err(Error::DimensionCapExceeded { cap: TRUNCATION_CAP });
    }
    let index: HashMap<Monomial, usize> = monos.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    let w = truncation(a, &monos, &index, deg).intersect(&truncation(b, &monos, &index, deg), &f);
    let gens: Vec<MPoly> = w
        .basis()
        .iter()
        .map(|v| MPoly::from_terms(&f, nvars, v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, &c)| (monos[i].clone(), c))))
        .collect();
    let basis = groebner(&gens);
    let certified = a.iter().all(|x| b.iter().all(|y| reduces_to_zero(&x.mul(y), &basis)));
    Ok((basis, certified))
}

pub fn ordinary_ideal(inst: &OrdinaryInstance) -> Result<OrdinaryIdeal> {
    let m = inst.scheme.nvars();
    let mut branches = vec![groebner(&inst.branch(inst.psi_block, inst.chi_block))];
    if inst.chi_unramified() {
        branches.push(groebner(&inst.branch(inst.chi_block, inst.psi_block)));
    }
    let (basis, certified) = if branches.len() == 1 { (branches[0].clone(), true) } else { intersect(&branches[0], &branches[1], m)? };
    Ok(OrdinaryIdeal { branches, basis, certified, nvars: m, names: inst.scheme.var_names().to_vec() })
}

/// Reducible with a stable line whose quotient character is trivial on `inertia`.
pub fn is_ordinary(rep: &Representation, inertia: &[usize]) -> Result<bool> {
    if rep.dim() != 2 {
        return Err(Error::DimensionUnsupported(rep.dim()));
    }
    let f = rep.field();
    let group = rep.group().ok_or_else(|| Error::HypothesisViolation("ordinary needs a group representation".into()))?;
    let gens: Vec<usize> = group.generators().to_vec();
    let mut lines: Vec<Vec<Elem>> = vec![vec![Elem::ZERO, Elem::ONE]];
    lines.extend(f.elements().map(|a| vec![Elem::ONE, a]));
    for v in lines {
        let line = Subspace::span(2, [&v], f);
        let stable = gens.iter().all(|&s| line.contains(&rep.image(s).mul_vec(&v, f), f));
        if !stable {
            continue;
        }
        let unramified = inertia.iter().all(|&g| {
            let m: &Mat = rep.image(g);
            let w = m.mul_vec(&v, f);
            let k = if v[0].is_zero() { 1 } else { 0 };
            let eigen = f.div(w[k], v[k]);
            f.div(m.det(f), eigen) == Elem::ONE
        });
        if unramified {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Outcome of the exhaustive comparison between the ideal and `is_ordinary` on adapted points.
#[derive(Clone, Debug)]
pub struct PointCheck {
    pub points: usize,
    pub in_locus: usize,
    pub ordinary: usize,
    pub sound: bool,
    pub complete: bool,
}

impl PointCheck {
    pub fn to_json(&self) -> Value {
        json!({
            "points": self.points.to_string(),
            "in_locus": self.in_locus.to_string(),
            "ordinary": self.ordinary.to_string(),
            "sound": self.sound,
            "complete": self.complete,
        })
    }
}

/// Every `F`-point of `T/J`, assembled into a group representation.
pub fn point_check(inst: &OrdinaryInstance, ideal: &OrdinaryIdeal, cap: u64) -> Result<PointCheck> {
    let f = inst.field();
    let pts = adapted_points(&inst.scheme, f, cap)?;
    let gens = inst.group.generators();
    let mut out = PointCheck { points: pts.len(), in_locus: 0, ordinary: 0, sound: true, complete: true };
    for p in &pts {
        let images = gens
            .iter()
            .map(|&s| p.rep.image_of(&inst.residual.projection.apply(&inst.group_vec(s))))
            .collect();
        let rho = Representation::from_generators(&inst.group, f, images)?;
        let inside = ideal.contains_point(&p.coords);
        let ord = is_ordinary(&rho, &inst.inertia)?;
        out.in_locus += inside as usize;
        out.ordinary += ord as usize;
        if inside && !ord {
            out.sound = false;
        }
        if ord && !inside {
            out.complete = false;
        }
    }
    Ok(out)
}
