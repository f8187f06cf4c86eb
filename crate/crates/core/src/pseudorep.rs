//! Pseudorepresentations as homogeneous multiplicative polynomial laws, stored by their
//! value `D(sum t_i e_i)` on the generic element.

use std::sync::{Arc, OnceLock};

use serde_json::{json, Value};

use crate::algebra::{ideal_generated, quotient, FinAlgebra, Ideal, Projection};
use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::group::FiniteGroup;
use crate::json::{as_array, json_usize};
use crate::linalg::{Mat, Subspace};
use crate::poly::{self, MPoly, Monomial, TermJson};
use crate::rep::{self, semisimplify, GenFilter, Representation, DEFAULT_ENUM_CAP};

/// Largest number of candidate points tried by the brute-force kernel fallback.
pub const KERNEL_SEARCH_CAP: u64 = 1 << 16;

#[derive(Clone, Debug)]
pub struct PseudoRep {
    algebra: FinAlgebra,
    d: usize,
    generic: MPoly,
    lambdas: Arc<OnceLock<Vec<MPoly>>>,
    // set when the source is a group algebra
    group: Option<Arc<FiniteGroup>>,
}

impl PartialEq for PseudoRep {
    fn eq(&self, other: &Self) -> bool {
        equals(self, other)
    }
}

impl Eq for PseudoRep {}

/// `chi(r, t) = t^d + sum (-1)^i Lambda_i t^{d-i}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharPoly {
    /// `Lambda_1, ..., Lambda_d`.
    pub lambdas: Vec<Elem>,
    /// Coefficients of `chi(r, t)`, low degree first, monic of degree `d`.
    pub coeffs: Vec<Elem>,
}

impl PseudoRep {
    /// Wraps a polynomial in `dim(algebra)` variables that is homogeneous of degree `d`.
    pub fn from_generic(algebra: &FinAlgebra, d: usize, generic: MPoly) -> Result<PseudoRep> {
        if generic.nvars() != algebra.dim() || generic.field() != algebra.field() {
            return Err(Error::VariableMismatch(format!(
                "generic value in {} variables over {} for an algebra of dimension {} over {}",
                generic.nvars(),
                generic.field(),
                algebra.dim(),
                algebra.field()
            )));
        }
        if !generic.is_homogeneous(d as u32) {
            return Err(Error::DimensionMismatch(format!("generic value is not homogeneous of degree {d}")));
        }
        Ok(PseudoRep { algebra: algebra.clone(), d, generic, lambdas: Arc::default(), group: None })
    }

    /// Marks the source as the group algebra of `group`.
    pub fn with_group(mut self, group: &Arc<FiniteGroup>) -> PseudoRep {
        self.group = Some(group.clone());
        self
    }

    pub fn group(&self) -> Option<&Arc<FiniteGroup>> {
        self.group.as_ref()
    }

    pub fn algebra(&self) -> &FinAlgebra {
        &self.algebra
    }

    pub fn field(&self) -> &Field {
        self.algebra.field()
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    pub fn generic(&self) -> &MPoly {
        &self.generic
    }

    /// `D(x)` for an element with constant coordinates.
    pub fn eval(&self, x: &[Elem]) -> Elem {
        self.generic.eval(x)
    }

    /// `D(x)` for an element with polynomial coordinates.
    pub fn eval_poly(&self, x: &[MPoly]) -> MPoly {
        self.generic.substitute(x).expect("coordinates share one ring")
    }

    /// Generic `Lambda_1..Lambda_d` as polynomials in the coordinates.
    pub fn lambdas(&self) -> &[MPoly] {
        self.lambdas.get_or_init(|| {
            let n = self.algebra.dim();
            let f = self.field();
            let tvar = MPoly::var(f, n + 1, n);
            let images: Vec<MPoly> = (0..n)
                .map(|i| tvar.scale(self.algebra.unit()[i]).sub(&MPoly::var(f, n + 1, i)))
                .collect();
            let chi = self.generic.substitute(&images).expect("same ring");
            (1..=self.d)
                .map(|i| {
                    let c = chi.coefficient_of_var(n, (self.d - i) as u16).truncate(n);
                    if i % 2 == 1 {
                        c.neg()
                    } else {
                        c
                    }
                })
                .collect()
        })
    }

    /// `Lambda_i` evaluated on an element with polynomial coordinates.
    pub fn lambda_poly(&self, i: usize, x: &[MPoly]) -> MPoly {
        self.lambdas()[i - 1].substitute(x).expect("coordinates share one ring")
    }

    /// The characteristic polynomial of `r`.
    pub fn char_poly(&self, r: &[Elem]) -> CharPoly {
        let f = self.field();
        let lambdas: Vec<Elem> = self.lambdas().iter().map(|l| l.eval(r)).collect();
        let mut coeffs = vec![Elem::ZERO; self.d + 1];
        coeffs[self.d] = Elem::ONE;
        for (i, &l) in lambdas.iter().enumerate() {
            let i = i + 1;
            coeffs[self.d - i] = if i % 2 == 1 { f.neg(l) } else { l };
        }
        CharPoly { lambdas, coeffs }
    }

    /// `D(x) D(y) = D(xy)` as an identity in `2n` variables.
    pub fn is_multiplicative(&self) -> bool {
        let n = self.algebra.dim();
        let x = self.algebra.generic_element(2 * n, 0);
        let y = self.algebra.generic_element(2 * n, n);
        let lhs = self.generic.shift(2 * n, 0).mul(&self.generic.shift(2 * n, n));
        let rhs = self.eval_poly(&self.algebra.mul_poly(&x, &y));
        lhs == rhs
    }

    /// Homogeneity of the stored polynomial, and `D(bx) = b^d D(x)` for every scalar `b`.
    pub fn is_homogeneous(&self) -> bool {
        let f = self.field();
        let n = self.algebra.dim();
        self.generic.is_homogeneous(self.d as u32)
            && f.elements().all(|b| {
                let scaled: Vec<MPoly> = (0..n).map(|i| MPoly::var(f, n, i).scale(b)).collect();
                self.eval_poly(&scaled) == self.generic.scale(f.pow(b, self.d as u64))
            })
    }

    pub fn unit_value_is_one(&self) -> bool {
        self.eval(self.algebra.unit()) == Elem::ONE
    }

    /// Extends scalars to `target`.
    pub fn base_change(&self, target: &Field) -> Result<PseudoRep> {
        if target == self.field() {
            return Ok(self.clone());
        }
        let e = self.field().embedding(target)?;
        let mut out = PseudoRep::from_generic(&self.algebra.base_change(target)?, self.d, self.generic.embed(&e))?;
        out.group = self.group.clone();
        Ok(out)
    }

    /// `{"field":..,"d":"2","basis":[..],"generic":[{"exps":[..],"coeff":".."},..]}`.
    pub fn to_json(&self) -> Value {
        json!({
            "field": self.field().spec(),
            "d": self.d.to_string(),
            "basis": self.algebra.labels(),
            "generic": self.generic.to_json_terms(),
        })
    }

    pub fn from_json(algebra: &FinAlgebra, v: &Value) -> Result<PseudoRep> {
        let d = json_usize(v.get("d").ok_or_else(|| Error::Schema("pseudorep.d missing".into()))?, "pseudorep.d")?;
        if let Some(b) = v.get("basis") {
            let labels: Vec<&str> = as_array(b, "pseudorep.basis")?.iter().filter_map(Value::as_str).collect();
            if labels != algebra.labels() {
                return Err(Error::Schema("pseudorep basis does not match the algebra".into()));
            }
        }
        let terms: Vec<TermJson> = serde_json::from_value(v.get("generic").cloned().unwrap_or(Value::Null))
            .map_err(|e| Error::Schema(format!("pseudorep.generic: {e}")))?;
        let generic = MPoly::from_json_terms(algebra.field(), algebra.dim(), &terms)?;
        PseudoRep::from_generic(algebra, d, generic)
    }
}

/// `psi`: the determinant of the generic image `sum t_i rho(e_i)`.
pub fn induce(rep: &Representation) -> PseudoRep {
    let f = rep.field();
    let alg = rep.algebra().base_change(f).expect("representation field extends the algebra field");
    let n = alg.dim();
    let d = rep.dim();
    let m: Vec<Vec<MPoly>> = (0..d)
        .map(|i| (0..d).map(|j| MPoly::linear(f, &rep.images().iter().map(|x| x.get(i, j)).collect::<Vec<_>>())).collect())
        .collect();
    let generic = poly::det(&m, f, n);
    PseudoRep { algebra: alg, d, generic, lambdas: Arc::default(), group: rep.group().cloned() }
}

/// Exact equality of the generic polynomials over the same algebra.
pub fn equals(a: &PseudoRep, b: &PseudoRep) -> bool {
    a.d == b.d && a.algebra == b.algebra && a.generic == b.generic
}

/// The powers `x^0..x^d` of the generic element, as polynomial coordinate vectors.
fn generic_powers(r: &FinAlgebra, d: usize) -> Vec<Vec<MPoly>> {
    let n = r.dim();
    let x = r.generic_element(n, 0);
    let mut pows = vec![r.const_poly(r.unit(), n)];
    for _ in 0..d {
        let next = r.mul_poly(pows.last().unwrap(), &x);
        pows.push(next);
    }
    pows
}

/// `chi(x, x)` at the generic element, one polynomial per basis coordinate.
pub fn cayley_hamilton_value(d: &PseudoRep) -> Vec<MPoly> {
    let r = d.algebra();
    let n = r.dim();
    let f = d.field();
    let pows = generic_powers(r, d.d);
    let mut out: Vec<MPoly> = (0..n).map(|_| MPoly::zero(f, n)).collect();
    let lambdas = d.lambdas();
    for j in 0..=d.d {
        // coefficient of t^j in chi(x, t)
        let c = if j == d.d {
            MPoly::one(f, n)
        } else {
            let i = d.d - j;
            if i % 2 == 1 {
                lambdas[i - 1].neg()
            } else {
                lambdas[i - 1].clone()
            }
        };
        for k in 0..n {
            if !pows[j][k].is_zero() {
                out[k].add_assign(&c.mul(&pows[j][k]));
            }
        }
    }
    out
}

pub fn is_cayley_hamilton(d: &PseudoRep) -> bool {
    cayley_hamilton_value(d).iter().all(MPoly::is_zero)
}

/// The ideal generated by all t-coefficients of `chi(x, x)`.
pub fn ch_ideal(d: &PseudoRep) -> Ideal {
    let r = d.algebra();
    let n = r.dim();
    let value = cayley_hamilton_value(d);
    let mut monos: std::collections::BTreeMap<Monomial, Vec<Elem>> = Default::default();
    for (k, p) in value.iter().enumerate() {
        for (m, &c) in p.terms() {
            monos.entry(m.clone()).or_insert_with(|| vec![Elem::ZERO; n])[k] = c;
        }
    }
    let gens: Vec<Vec<Elem>> = monos.into_values().collect();
    ideal_generated(r, &gens).expect("coordinate vectors have the algebra's dimension")
}

/// The law `D` transported to `R/I` along the kept basis (valid when `D` kills `I`).
pub fn factor_through(d: &PseudoRep, q: &FinAlgebra, proj: &Projection) -> Result<PseudoRep> {
    let f = d.field();
    let m = q.dim();
    let n = d.algebra().dim();
    let mut images = vec![MPoly::zero(f, m); n];
    for (a, &i) in proj.kept().iter().enumerate() {
        images[i] = MPoly::var(f, m, a);
    }
    let generic = if n == 0 { d.generic.clone() } else { d.generic.substitute(&images)? };
    PseudoRep::from_generic(q, d.d, generic)
}

/// `R/CH(D)` with the factored law.
pub fn ch_quotient(d: &PseudoRep) -> Result<(FinAlgebra, PseudoRep, Projection)> {
    let ideal = ch_ideal(d);
    let (q, proj) = quotient(d.algebra(), &ideal)?;
    let dq = factor_through(d, &q, &proj)?;
    Ok((q, dq, proj))
}

/// Whether every `Lambda_i(c r')` vanishes for the generic `r'`, where `c` has coordinates
/// that are polynomials in `extra` variables placed before the `n` variables of `r'`.
fn kills_generic(d: &PseudoRep, c: &[MPoly], extra: usize) -> bool {
    let r = d.algebra();
    let n = r.dim();
    let rp = r.generic_element(extra + n, extra);
    let prod = r.mul_poly(c, &rp);
    (1..=d.d).all(|i| d.lambda_poly(i, &prod).is_zero())
}

/// The kernel: all `r` with `chi(r r', t) = t^d` for the generic `r'`.
pub fn kernel(d: &PseudoRep) -> Result<Ideal> {
    let r = d.algebra();
    let f = d.field();
    let n = r.dim();
    if n == 0 {
        return Ok(Ideal::zero(r));
    }
    // Lambda_1 is linear, so Lambda_1(r e_j) = 0 for all j cuts out a subspace containing the kernel
    let l1 = &d.lambdas()[0];
    let mut rows = Vec::new();
    for j in 0..n {
        let ej = r.basis_vec(j);
        let row: Vec<Elem> = (0..n).map(|i| l1.eval(&r.mul(&r.basis_vec(i), &ej))).collect();
        rows.push(row);
    }
    let mut w = Subspace::span(n, &Mat::from_rows(&rows).nullspace(f), f);
    // largest two-sided ideal inside w
    loop {
        let mut rows = Vec::new();
        let basis = w.basis().to_vec();
        let mut next = Subspace::zero(n);
        let k = basis.len();
        if k == 0 {
            break;
        }
        // coefficients a with sum a_b v_b mapping into w under all e_i * and * e_i
        for i in 0..n {
            let ei = r.basis_vec(i);
            for side in 0..2 {
                let imgs: Vec<Vec<Elem>> = basis.iter().map(|v| if side == 0 { r.mul(&ei, v) } else { r.mul(v, &ei) }).collect();
                let reduced: Vec<Vec<Elem>> = imgs.iter().map(|x| w.reduce(x, f)).collect();
                for c in 0..n {
                    rows.push((0..k).map(|b| reduced[b][c]).collect::<Vec<_>>());
                }
            }
        }
        let coeffs = Mat::from_rows(&rows).nullspace(f);
        for a in &coeffs {
            next.insert(&w.combine(a, f), f);
        }
        if next.dim() == w.dim() {
            break;
        }
        w = next;
    }
    let core = w;
    let k = core.dim();
    let generic_core: Vec<MPoly> = (0..n)
        .map(|c| MPoly::linear(f, &core.basis().iter().map(|v| v[c]).collect::<Vec<_>>()).shift(k + n, 0))
        .collect();
    if k == 0 || kills_generic(d, &generic_core, k) {
        return Ideal::new(r, core.basis());
    }
    let q = f.size() as u64;
    let size = q.checked_pow(k as u32).unwrap_or(u64::MAX);
    if size > KERNEL_SEARCH_CAP {
        return Err(Error::KernelSearchCapExceeded { size });
    }
    let mut ker = Subspace::zero(n);
    for x in core.points(f) {
        if ker.contains(&x, f) {
            continue;
        }
        if kills_generic(d, &r.const_poly(&x, n), 0) {
            ker.insert(&x, f);
        }
    }
    Ideal::new(r, ker.basis())
}

/// Burnside: the images of an irreducible rep span `M_n` iff it stays irreducible
/// over every extension.
fn absolutely_irreducible(r: &Representation) -> bool {
    let n = r.dim();
    let mut span = Subspace::zero(n * n);
    for m in r.images() {
        span.insert(&m.data, r.field());
    }
    span.dim() == n * n
}

/// Semisimple with absolutely irreducible factors and inducing `dk`.
fn splits(r: &Representation, dk: &PseudoRep) -> bool {
    if !equals(&induce(r), dk) {
        return false;
    }
    let Ok(jh) = semisimplify(r) else { return false };
    if !jh.factors.iter().all(|(f, _)| absolutely_irreducible(f)) {
        return false;
    }
    match jh.direct_sum() {
        Some(ss) => rep::isomorphic(r, &ss).unwrap_or(false),
        None => false,
    }
}

/// Smallest extension (degree at most `max_degree`) over which `d` is the determinant of a
/// semisimple representation whose factors are absolutely irreducible; the representation
/// returned is the first such in enumeration order.
pub fn split_search(d: &PseudoRep, max_degree: u32) -> Result<(Field, Representation)> {
    let base = d.field();
    for k in 1..=max_degree {
        let ext = base.extension(k)?;
        let dk = d.base_change(&ext)?;
        let alg = dk.algebra().clone();
        let targets: Vec<Vec<Elem>> = (0..alg.dim()).map(|i| dk.char_poly(&alg.basis_vec(i)).coeffs).collect();
        let filter_fn = |i: usize, m: &Mat| m.charpoly(&ext) == targets[i];
        let filter: GenFilter<'_> = &filter_fn;
        let found = match d.group() {
            Some(g) => rep::find_rep(g, d.d, &ext, DEFAULT_ENUM_CAP, Some(filter), &|r| splits(r, &dk))?,
            None => rep::enumerate_algebra_reps(&alg, d.d, &ext, DEFAULT_ENUM_CAP, Some(filter))?
                .into_iter()
                .find(|r| splits(r, &dk)),
        };
        if let Some(r) = found {
            return Ok((ext, r));
        }
    }
    Err(Error::NotFoundWithinBound { bound: max_degree })
}
