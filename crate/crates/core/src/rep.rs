//! Matrix representations of finite algebras and finite groups.

use std::sync::Arc;

use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::algebra::FinAlgebra;
use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::group::{as_array, FiniteGroup};
use crate::linalg::{Mat, Subspace};
use crate::poly::{self, MPoly};

pub const DEFAULT_ENUM_CAP: u64 = 10_000_000;
/// Largest intertwiner solution space searched exhaustively.
pub const ISO_SEARCH_CAP: u64 = 1 << 20;

/// A representation `R -> M_d(F)` of an algebra, or of a group through its group algebra.
/// `images[i]` is the image of the `i`-th algebra basis element (group element).
#[derive(Clone, Debug)]
pub struct Representation {
    algebra: FinAlgebra,
    group: Option<Arc<FiniteGroup>>,
    field: Field,
    dim: usize,
    images: Vec<Mat>,
}

impl PartialEq for Representation {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.dim == other.dim && self.images == other.images && self.algebra == other.algebra
    }
}

impl Eq for Representation {}

impl Representation {
    /// A representation of an algebra given by the images of all basis elements.
    pub fn new(algebra: &FinAlgebra, field: &Field, images: Vec<Mat>) -> Result<Representation> {
        algebra.field().embedding(field)?;
        if images.len() != algebra.dim() {
            return Err(Error::ShapeMismatch(format!("{} images for an algebra of dimension {}", images.len(), algebra.dim())));
        }
        let dim = images.first().map(|m| m.rows).unwrap_or(0);
        if images.iter().any(|m| m.rows != dim || m.cols != dim) {
            return Err(Error::ShapeMismatch("images must be square of a common size".into()));
        }
        Ok(Representation { algebra: algebra.clone(), group: None, field: field.clone(), dim, images })
    }

    /// A group representation given by generator images; the remaining images are
    /// computed along the group's spanning tree. Validity is checked separately by `check`.
    pub fn from_generators(group: &Arc<FiniteGroup>, field: &Field, gens: Vec<Mat>) -> Result<Representation> {
        let alg = FinAlgebra::group_algebra(group, field);
        Representation::from_generators_in(group, &alg, field, gens)
    }

    /// As `from_generators`, reusing a group algebra built over `field`.
    pub fn from_generators_in(group: &Arc<FiniteGroup>, algebra: &FinAlgebra, field: &Field, gens: Vec<Mat>) -> Result<Representation> {
        if gens.len() != group.generators().len() {
            return Err(Error::ShapeMismatch(format!("{} generator images for {} generators", gens.len(), group.generators().len())));
        }
        let dim = gens.first().map(|m| m.rows).unwrap_or(1);
        if gens.iter().any(|m| m.rows != dim || m.cols != dim) {
            return Err(Error::ShapeMismatch("generator images must be square of a common size".into()));
        }
        let mut images = vec![Mat::identity(dim); group.order()];
        for x in group.bfs_order() {
            if let Some((parent, gi)) = group.tree()[x] {
                images[x] = images[parent].mul(&gens[gi], field);
            }
        }
        Ok(Representation { algebra: algebra.clone(), group: Some(group.clone()), field: field.clone(), dim, images })
    }

    /// Left regular representation of an algebra on itself.
    pub fn regular(algebra: &FinAlgebra) -> Representation {
        let images = (0..algebra.dim()).map(|i| algebra.left_mult_matrix(&algebra.basis_vec(i))).collect();
        Representation { algebra: algebra.clone(), group: None, field: algebra.field().clone(), dim: algebra.dim(), images }
    }

    /// The tautological representation of `M_n(F)` on column vectors.
    pub fn tautological(n: usize, field: &Field) -> Representation {
        let alg = FinAlgebra::matrix_algebra(n, field);
        let images = (0..n * n)
            .map(|a| {
                let mut m = Mat::zeros(n, n);
                m.set(a / n, a % n, Elem::ONE);
                m
            })
            .collect();
        Representation { algebra: alg, group: None, field: field.clone(), dim: n, images }
    }

    /// The trivial `d`-dimensional group representation.
    pub fn trivial(group: &Arc<FiniteGroup>, field: &Field, d: usize) -> Representation {
        let gens = vec![Mat::identity(d); group.generators().len()];
        Representation::from_generators(group, field, gens).expect("shapes agree")
    }

    pub fn algebra(&self) -> &FinAlgebra {
        &self.algebra
    }

    pub fn group(&self) -> Option<&Arc<FiniteGroup>> {
        self.group.as_ref()
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn images(&self) -> &[Mat] {
        &self.images
    }

    pub fn image(&self, i: usize) -> &Mat {
        &self.images[i]
    }

    pub fn generator_images(&self) -> Vec<&Mat> {
        match &self.group {
            Some(g) => g.generators().iter().map(|&s| &self.images[s]).collect(),
            None => self.images.iter().collect(),
        }
    }

    /// Image of an algebra element with coordinates over the algebra's field.
    pub fn image_of(&self, x: &[Elem]) -> Mat {
        let e = self.algebra.field().embedding(&self.field).expect("checked at construction");
        let f = &self.field;
        let mut m = Mat::zeros(self.dim, self.dim);
        for (i, &c) in x.iter().enumerate() {
            if !c.is_zero() {
                m = m.add(&self.images[i].scale(e.apply(c), f), f);
            }
        }
        m
    }

    /// Rebuilds with new images of the same shape and source.
    pub fn with_images(&self, images: Vec<Mat>) -> Representation {
        let dim = images.first().map(|m| m.rows).unwrap_or(self.dim);
        Representation { algebra: self.algebra.clone(), group: self.group.clone(), field: self.field.clone(), dim, images }
    }

    /// True iff the images respect the algebra (or group) structure exactly.
    pub fn check(&self) -> Result<bool> {
        let f = &self.field;
        let d = self.dim;
        if self.images.len() != self.algebra.dim() || self.images.iter().any(|m| m.rows != d || m.cols != d) {
            return Err(Error::ShapeMismatch("image count or sizes inconsistent".into()));
        }
        if let Some(g) = &self.group {
            if self.images[g.identity()] != Mat::identity(d) {
                return Ok(false);
            }
            for x in 0..g.order() {
                for &s in g.generators() {
                    if self.images[x].mul(&self.images[s], f) != self.images[g.mul(x, s)] {
                        return Ok(false);
                    }
                }
            }
            return Ok(true);
        }
        if self.image_of(self.algebra.unit()) != Mat::identity(d) {
            return Ok(false);
        }
        let e = self.algebra.field().embedding(f)?;
        let n = self.algebra.dim();
        for i in 0..n {
            for j in 0..n {
                let lhs = self.images[i].mul(&self.images[j], f);
                let mut rhs = Mat::zeros(d, d);
                for &(k, c) in self.algebra.product(i, j) {
                    rhs = rhs.add(&self.images[k].scale(e.apply(c), f), f);
                }
                if lhs != rhs {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// `g rho g^{-1}`.
    pub fn conjugate(&self, g: &Mat) -> Representation {
        let f = &self.field;
        let gi = g.inverse(f).expect("conjugating matrix must be invertible");
        self.with_images(self.images.iter().map(|m| g.mul(m, f).mul(&gi, f)).collect())
    }

    pub fn direct_sum(&self, other: &Representation) -> Representation {
        let (a, b) = (self.dim, other.dim);
        let images = self
            .images
            .iter()
            .zip(&other.images)
            .map(|(x, y)| Mat::block(x, &Mat::zeros(a, b), &Mat::zeros(b, a), y))
            .collect();
        self.with_images(images)
    }

    /// Block upper-triangular representation with the given diagonal blocks and corner.
    pub fn extension(sub: &Representation, quot: &Representation, corner: Vec<Mat>) -> Representation {
        let (a, b) = (sub.dim, quot.dim);
        let images = sub
            .images
            .iter()
            .zip(&quot.images)
            .zip(corner)
            .map(|((x, y), c)| Mat::block(x, &c, &Mat::zeros(b, a), y))
            .collect();
        sub.with_images(images)
    }

    /// Extends scalars to `target`.
    pub fn base_change(&self, target: &Field) -> Result<Representation> {
        if target == &self.field {
            return Ok(self.clone());
        }
        let e = self.field.embedding(target)?;
        let images: Vec<Mat> = self.images.iter().map(|m| m.map(|x| e.apply(x))).collect();
        match &self.group {
            Some(g) => {
                let alg = FinAlgebra::group_algebra(g, target);
                Ok(Representation { algebra: alg, group: Some(g.clone()), field: target.clone(), dim: self.dim, images })
            }
            None => Representation::new(&self.algebra, target, images),
        }
    }

    /// Splits along an invariant subspace `w`: returns (sub, quotient, basis matrix `P`)
    /// with `P^{-1} rho P` block upper triangular.
    pub fn split(&self, w: &Subspace) -> (Representation, Representation, Mat) {
        let f = &self.field;
        let k = w.dim();
        let mut cols: Vec<Vec<Elem>> = w.basis().to_vec();
        for j in w.non_pivots() {
            let mut v = vec![Elem::ZERO; self.dim];
            v[j] = Elem::ONE;
            cols.push(v);
        }
        let p = Mat::from_cols(&cols);
        let pi = p.inverse(f).expect("basis plus complement is invertible");
        let conj: Vec<Mat> = self.images.iter().map(|m| pi.mul(m, f).mul(&p, f)).collect();
        let sub = self.with_images(conj.iter().map(|m| m.submatrix(0, 0, k, k)).collect());
        let quot = self.with_images(conj.iter().map(|m| m.submatrix(k, k, self.dim - k, self.dim - k)).collect());
        (sub, quot, p)
    }

    /// Smallest subspace containing `v` and stable under all images.
    pub fn spin(&self, v: &[Elem]) -> Subspace {
        let f = &self.field;
        let gens = self.generator_images();
        let mut s = Subspace::zero(self.dim);
        let mut queue = vec![v.to_vec()];
        while let Some(x) = queue.pop() {
            if s.insert(&x, f) {
                for g in &gens {
                    queue.push(g.mul_vec(&x, f));
                }
            }
        }
        s
    }

    pub fn is_invariant(&self, w: &Subspace) -> bool {
        let f = &self.field;
        self.generator_images().iter().all(|g| w.basis().iter().all(|v| w.contains(&g.mul_vec(v, f), f)))
    }

    /// Characteristic polynomials of the generator images, a conjugation-invariant bucket key.
    pub fn charpoly_key(&self) -> Vec<Vec<Elem>> {
        self.generator_images().iter().map(|m| m.charpoly(&self.field)).collect()
    }

    fn image_label_keys(&self) -> Vec<(String, usize)> {
        match &self.group {
            Some(g) => g.generator_names().iter().cloned().zip(g.generators().iter().copied()).collect(),
            None => self.algebra.labels().iter().cloned().zip(0..self.algebra.dim()).collect(),
        }
    }

    /// `{"field":..,"dim":"d","images":{"name":[["..",..],..]}}`, keyed by generator
    /// names for group representations and basis labels otherwise.
    pub fn to_json(&self) -> Value {
        let mut imgs = Map::new();
        for (name, i) in self.image_label_keys() {
            imgs.insert(name, mat_to_json(&self.images[i]));
        }
        json!({"field": self.field.spec(), "dim": self.dim.to_string(), "images": imgs})
    }

    /// Parses the format written by `to_json` for a group.
    pub fn from_json_group(group: &Arc<FiniteGroup>, v: &Value) -> Result<Representation> {
        let field = field_from_json(v)?;
        let imgs = v.get("images").and_then(Value::as_object).ok_or_else(|| Error::Schema("representation.images missing".into()))?;
        let gens = group
            .generator_names()
            .iter()
            .map(|n| {
                let m = imgs.get(n).ok_or_else(|| Error::Schema(format!("no image for generator {n}")))?;
                mat_from_json(&field, m)
            })
            .collect::<Result<Vec<_>>>()?;
        Representation::from_generators(group, &field, gens)
    }

    /// Parses the format written by `to_json` for an algebra.
    pub fn from_json_algebra(algebra: &FinAlgebra, v: &Value) -> Result<Representation> {
        let field = field_from_json(v)?;
        let imgs = v.get("images").and_then(Value::as_object).ok_or_else(|| Error::Schema("representation.images missing".into()))?;
        let images = algebra
            .labels()
            .iter()
            .map(|n| {
                let m = imgs.get(n).ok_or_else(|| Error::Schema(format!("no image for basis element {n}")))?;
                mat_from_json(&field, m)
            })
            .collect::<Result<Vec<_>>>()?;
        Representation::new(algebra, &field, images)
    }
}

fn field_from_json(v: &Value) -> Result<Field> {
    let spec = v.get("field").ok_or_else(|| Error::Schema("representation.field missing".into()))?;
    crate::json::field_from_value(spec)
}

pub fn mat_to_json(m: &Mat) -> Value {
    Value::Array((0..m.rows).map(|i| Value::Array(m.row(i).iter().map(|x| Value::String(x.0.to_string())).collect())).collect())
}

pub fn mat_from_json(f: &Field, v: &Value) -> Result<Mat> {
    let rows = as_array(v, "matrix")?
        .iter()
        .map(|r| as_array(r, "matrix row")?.iter().map(|x| crate::json::elem_from_value(f, x)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(Error::ShapeMismatch("matrix must be square".into()));
    }
    if n == 0 {
        return Ok(Mat::zeros(0, 0));
    }
    Ok(Mat::from_rows(&rows))
}

/// Returns a proper nonzero invariant subspace, or `None` iff the representation is irreducible.
pub fn invariant_subspace(rep: &Representation) -> Option<Subspace> {
    let d = rep.dim();
    if d <= 1 {
        return None;
    }
    let f = rep.field();
    for j in 0..d {
        let mut v = vec![Elem::ZERO; d];
        v[j] = Elem::ONE;
        let s = rep.spin(&v);
        if s.dim() < d {
            return Some(s);
        }
    }
    // images spanning all of M_d force irreducibility
    let mut span = Subspace::zero(d * d);
    for m in rep.images() {
        span.insert(&m.data, f);
    }
    if span.dim() == d * d {
        return None;
    }
    // every invariant subspace contains a cyclic one: spin every projective point
    let q = f.size() as u64;
    for lead in 0..d {
        let free = (d - lead - 1) as u32;
        for mut n in 0..q.pow(free) {
            let mut v = vec![Elem::ZERO; d];
            v[lead] = Elem::ONE;
            for x in v.iter_mut().skip(lead + 1) {
                *x = Elem((n % q) as u32);
                n /= q;
            }
            let s = rep.spin(&v);
            if s.dim() < d {
                return Some(s);
            }
        }
    }
    None
}

/// Jordan–Hölder factors with multiplicities, sorted by a canonical key.
#[derive(Clone, Debug)]
pub struct JHDecomposition {
    pub factors: Vec<(Representation, usize)>,
}

impl JHDecomposition {
    pub fn total_dim(&self) -> usize {
        self.factors.iter().map(|(r, m)| r.dim() * m).sum()
    }

    /// `(dim, multiplicity)` pairs in canonical order.
    pub fn shape(&self) -> Vec<(usize, usize)> {
        self.factors.iter().map(|(r, m)| (r.dim(), *m)).collect()
    }

    /// Same factor multiset up to isomorphism.
    pub fn same_factors(&self, other: &JHDecomposition) -> Result<bool> {
        if self.factors.len() != other.factors.len() {
            return Ok(false);
        }
        let mut used = vec![false; other.factors.len()];
        for (r, m) in &self.factors {
            let mut found = false;
            for (j, (s, n)) in other.factors.iter().enumerate() {
                if !used[j] && m == n && r.dim() == s.dim() && isomorphic(r, s)? {
                    used[j] = true;
                    found = true;
                    break;
                }
            }
            if !found {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The direct sum of all factors with multiplicity.
    pub fn direct_sum(&self) -> Option<Representation> {
        let mut it = self.factors.iter().flat_map(|(r, m)| std::iter::repeat_n(r, *m));
        let first = it.next()?.clone();
        Some(it.fold(first, |acc, r| acc.direct_sum(r)))
    }
}

fn factor_key(r: &Representation) -> (usize, Vec<Vec<Elem>>, Vec<Mat>) {
    let f = r.field();
    (r.dim(), r.images().iter().map(|m| m.charpoly(f)).collect(), r.images().to_vec())
}

fn collect_factors(rep: &Representation, out: &mut Vec<Representation>) {
    match invariant_subspace(rep) {
        None => out.push(rep.clone()),
        Some(w) => {
            let (sub, quot, _) = rep.split(&w);
            collect_factors(&sub, out);
            collect_factors(&quot, out);
        }
    }
}

/// Semisimplification: irreducible factors merged up to isomorphism.
pub fn semisimplify(rep: &Representation) -> Result<JHDecomposition> {
    let mut raw = Vec::new();
    if rep.dim() > 0 {
        collect_factors(rep, &mut raw);
    }
    raw.sort_by_cached_key(factor_key);
    let mut factors: Vec<(Representation, usize)> = Vec::new();
    for r in raw {
        let mut merged = false;
        for (s, m) in factors.iter_mut() {
            if s.dim() == r.dim() && isomorphic(s, &r)? {
                *m += 1;
                merged = true;
                break;
            }
        }
        if !merged {
            factors.push((r, 1));
        }
    }
    Ok(JHDecomposition { factors })
}

/// True iff the representation is isomorphic to the sum of its Jordan–Hölder factors.
pub fn is_semisimple(rep: &Representation) -> Result<bool> {
    let jh = semisimplify(rep)?;
    match jh.direct_sum() {
        None => Ok(true),
        Some(ss) => isomorphic(rep, &ss),
    }
}

/// Basis of the intertwiner space `{T : rho1(x) T = T rho2(x)}`.
pub fn intertwiners(r1: &Representation, r2: &Representation) -> Vec<Mat> {
    intertwiner_basis(&r1.generator_images(), &r2.generator_images(), r1.dim(), r2.dim(), r1.field())
}

fn intertwiner_basis(g1: &[&Mat], g2: &[&Mat], a: usize, b: usize, f: &Field) -> Vec<Mat> {
    let mut rows = Vec::new();
    for (x, y) in g1.iter().zip(g2) {
        for i in 0..a {
            for j in 0..b {
                let mut row = vec![Elem::ZERO; a * b];
                for k in 0..a {
                    let c = x.get(i, k);
                    if !c.is_zero() {
                        row[k * b + j] = f.add(row[k * b + j], c);
                    }
                }
                for k in 0..b {
                    let c = y.get(k, j);
                    if !c.is_zero() {
                        row[i * b + k] = f.sub(row[i * b + k], c);
                    }
                }
                rows.push(row);
            }
        }
    }
    let sols = if rows.is_empty() {
        (0..a * b)
            .map(|i| {
                let mut v = vec![Elem::ZERO; a * b];
                v[i] = Elem::ONE;
                v
            })
            .collect()
    } else {
        Mat::from_rows(&rows).nullspace(f)
    };
    sols.into_iter().map(|v| Mat { rows: a, cols: b, data: v }).collect()
}

/// Decides whether an invertible intertwiner exists.
pub fn isomorphic(r1: &Representation, r2: &Representation) -> Result<bool> {
    if r1.dim() != r2.dim() || r1.field() != r2.field() || r1.images().len() != r2.images().len() {
        return Ok(false);
    }
    if r1.dim() == 0 {
        return Ok(true);
    }
    if r1.charpoly_key() != r2.charpoly_key() {
        return Ok(false);
    }
    span_has_invertible(&intertwiners(r1, r2), r1.dim(), r1.field())
}

/// Whether `a` and `b` are conjugate in `GL_d(F)`.
pub fn similar(a: &Mat, b: &Mat, f: &Field) -> Result<bool> {
    if a.charpoly(f) != b.charpoly(f) {
        return Ok(false);
    }
    span_has_invertible(&intertwiner_basis(&[a], &[b], a.rows, b.rows, f), a.rows, f)
}

fn generic_det(basis: &[Mat], d: usize, f: &Field) -> MPoly {
    let s = basis.len();
    let generic: Vec<Vec<MPoly>> = (0..d)
        .map(|i| (0..d).map(|j| MPoly::linear(f, &basis.iter().map(|b| b.get(i, j)).collect::<Vec<_>>())).collect())
        .collect();
    poly::det(&generic, f, s)
}

/// Whether the span of `basis` (square matrices of size `d`) contains an invertible matrix.
pub fn span_has_invertible(basis: &[Mat], d: usize, f: &Field) -> Result<bool> {
    let s = basis.len();
    if s == 0 {
        return Ok(false);
    }
    if basis.iter().any(|t| !t.det(f).is_zero()) {
        return Ok(true);
    }
    let q = f.size() as u64;
    let space = q.checked_pow(s as u32);
    if let Some(space) = space.filter(|&n| n <= ISO_SEARCH_CAP) {
        for mut n in 1..space {
            let mut t = Mat::zeros(d, d);
            for b in basis {
                let c = Elem((n % q) as u32);
                n /= q;
                if !c.is_zero() {
                    t = t.add(&b.scale(c, f), f);
                }
            }
            if !t.det(f).is_zero() {
                return Ok(true);
            }
        }
        return Ok(false);
    }
    // determinant of the generic element as a polynomial in s variables
    let det = generic_det(basis, d, f);
    if det.is_zero() {
        return Ok(false);
    }
    if q > d as u64 {
        // a nonzero polynomial with all partial degrees below q has a non-root
        return Ok(true);
    }
    Err(Error::SearchCapExceeded { size: space.unwrap_or(u64::MAX) })
}

/// `|GL_d(F_q)|`.
pub fn gl_order(d: usize, q: u64) -> u64 {
    let qd = q.pow(d as u32);
    (0..d as u32).map(|i| qd - q.pow(i)).product()
}

/// Number of invertible matrices in the span of `basis`.
pub fn count_invertible(basis: &[Mat], d: usize, f: &Field) -> Result<u64> {
    let q = f.size() as u64;
    if basis.len() == d * d {
        return Ok(gl_order(d, q));
    }
    let s = basis.len();
    let space = q.checked_pow(s as u32).filter(|&n| n <= ISO_SEARCH_CAP * 16).ok_or(Error::SearchCapExceeded { size: u64::MAX })?;
    let det = generic_det(basis, d, f);
    let count = (0..space)
        .into_par_iter()
        .filter(|&n| {
            let mut n = n;
            let pt: Vec<Elem> = (0..s)
                .map(|_| {
                    let c = Elem((n % q) as u32);
                    n /= q;
                    c
                })
                .collect();
            !det.eval(&pt).is_zero()
        })
        .count();
    Ok(count as u64)
}

/// Order of the centralizer of `m` in `GL_d(F)`.
pub fn centralizer_order(m: &Mat, f: &Field) -> Result<u64> {
    count_invertible(&intertwiner_basis(&[m], &[m], m.rows, m.rows, f), m.rows, f)
}

/// Order of the automorphism group of a representation.
pub fn automorphism_order(r: &Representation) -> Result<u64> {
    count_invertible(&intertwiners(r, r), r.dim(), r.field())
}

/// Indices of one matrix per conjugacy class among `mats`, in first-occurrence order.
pub fn class_representatives(mats: &[Mat], f: &Field) -> Result<Vec<usize>> {
    let mut buckets: std::collections::HashMap<Vec<Elem>, Vec<usize>> = Default::default();
    let mut reps = Vec::new();
    for (i, m) in mats.iter().enumerate() {
        let bucket = buckets.entry(m.charpoly(f)).or_default();
        let mut found = false;
        for &j in bucket.iter() {
            if similar(&mats[j], m, f)? {
                found = true;
                break;
            }
        }
        if !found {
            bucket.push(i);
            reps.push(i);
        }
    }
    Ok(reps)
}

/// All matrices `X` in `GL_d(F)` with `X^order = I`, in encoding order.
fn roots_of_identity(d: usize, f: &Field, order: usize) -> Vec<Mat> {
    let q = f.size() as u64;
    let total = q.pow((d * d) as u32);
    let id = Mat::identity(d);
    let chunk = 4096u64;
    let nchunks = total.div_ceil(chunk);
    (0..nchunks)
        .into_par_iter()
        .map(|c| {
            let mut out = Vec::new();
            for mut n in c * chunk..((c + 1) * chunk).min(total) {
                let mut m = Mat::zeros(d, d);
                for x in m.data.iter_mut() {
                    *x = Elem((n % q) as u32);
                    n /= q;
                }
                if m.pow(order as u64, f) == id {
                    out.push(m);
                }
            }
            out
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

/// Extends a partial assignment of generator images to the subgroup those generators
/// generate; `None` when the assignment is inconsistent with the group law.
fn consistent(group: &FiniteGroup, gens: &[usize], imgs: &[Mat], f: &Field) -> Option<Vec<Option<Mat>>> {
    let n = group.order();
    let d = imgs[0].rows;
    let mut table: Vec<Option<Mat>> = vec![None; n];
    table[group.identity()] = Some(Mat::identity(d));
    let mut queue = std::collections::VecDeque::from([group.identity()]);
    while let Some(x) = queue.pop_front() {
        let mx = table[x].clone().expect("queued elements have images");
        for (k, &s) in gens.iter().enumerate() {
            let y = group.mul(x, s);
            let my = mx.mul(&imgs[k], f);
            match &table[y] {
                Some(existing) => {
                    if *existing != my {
                        return None;
                    }
                }
                None => {
                    table[y] = Some(my);
                    queue.push_back(y);
                }
            }
        }
    }
    Some(table)
}

/// Optional filter on candidate images: `(group element or basis index, matrix) -> keep`.
pub type GenFilter<'a> = &'a (dyn Fn(usize, &Mat) -> bool + Sync);

/// All homomorphisms `G -> GL_d(F)`, in deterministic order.
pub fn enumerate_reps(group: &Arc<FiniteGroup>, d: usize, field: &Field, cap: u64) -> Result<Vec<Representation>> {
    enumerate_reps_filtered(group, d, field, cap, None)
}

/// As `enumerate_reps`, keeping only representations whose image of every group element
/// passes `filter` (indexed by group element). The filter prunes generator candidates
/// and their pairwise products before the full consistency check.
pub fn enumerate_reps_filtered(
    group: &Arc<FiniteGroup>,
    d: usize,
    field: &Field,
    cap: u64,
    filter: Option<GenFilter<'_>>,
) -> Result<Vec<Representation>> {
    let q = field.size() as u64;
    let count = q.checked_pow((d * d) as u32).unwrap_or(u64::MAX);
    if count > cap {
        return Err(Error::EnumerationCapExceeded { count, cap });
    }
    let alg = FinAlgebra::group_algebra(group, field);
    let gens = group.generators().to_vec();
    if gens.is_empty() {
        return Ok(vec![Representation::from_generators_in(group, &alg, field, Vec::new())?.with_images(vec![Mat::identity(d)])]);
    }
    let mut by_order: std::collections::BTreeMap<usize, Vec<Mat>> = Default::default();
    let mut cands: Vec<Vec<Mat>> = Vec::new();
    for &s in &gens {
        let o = group.element_order(s);
        let all = by_order.entry(o).or_insert_with(|| roots_of_identity(d, field, o));
        cands.push(all.iter().filter(|m| filter.is_none_or(|flt| flt(s, m))).cloned().collect());
    }
    let search = Search { group, gens: &gens, cands: &cands, field, filter };
    let found: Vec<Vec<Vec<Mat>>> = cands[0]
        .par_iter()
        .map(|m0| {
            let mut out = Vec::new();
            let mut stack = vec![m0.clone()];
            search.dfs(&mut stack, &mut out);
            out
        })
        .collect();
    found
        .into_iter()
        .flatten()
        .map(|imgs| Representation::from_generators_in(group, &alg, field, imgs))
        .collect()
}

/// Candidate images of the first generator (all `X` with `X^o = I`, `o` its order) and, for
/// each of the given `firsts`, every representation sending the first generator there.
pub fn enumerate_reps_with_first(group: &Arc<FiniteGroup>, d: usize, field: &Field, cap: u64, firsts: &[Mat]) -> Result<Vec<Vec<Representation>>> {
    let q = field.size() as u64;
    let count = q.checked_pow((d * d) as u32).unwrap_or(u64::MAX);
    if count > cap {
        return Err(Error::EnumerationCapExceeded { count, cap });
    }
    let alg = FinAlgebra::group_algebra(group, field);
    let gens = group.generators().to_vec();
    if gens.is_empty() {
        return Ok(Vec::new());
    }
    let mut by_order: std::collections::BTreeMap<usize, Vec<Mat>> = Default::default();
    let mut cands: Vec<Vec<Mat>> = Vec::new();
    for &s in &gens {
        let o = group.element_order(s);
        cands.push(by_order.entry(o).or_insert_with(|| roots_of_identity(d, field, o)).clone());
    }
    let search = Search { group, gens: &gens, cands: &cands, field, filter: None };
    firsts
        .par_iter()
        .map(|m0| {
            let mut out = Vec::new();
            search.dfs(&mut vec![m0.clone()], &mut out);
            out.into_iter().map(|imgs| Representation::from_generators_in(group, &alg, field, imgs)).collect()
        })
        .collect()
}

/// All `X` in `GL_d(F)` with `X^order = I`.
pub fn identity_roots(d: usize, field: &Field, order: usize) -> Vec<Mat> {
    roots_of_identity(d, field, order)
}

/// The first representation (in `enumerate_reps_filtered` order) satisfying `pred`.
pub fn find_rep(
    group: &Arc<FiniteGroup>,
    d: usize,
    field: &Field,
    cap: u64,
    filter: Option<GenFilter<'_>>,
    pred: &(dyn Fn(&Representation) -> bool + Sync),
) -> Result<Option<Representation>> {
    let q = field.size() as u64;
    let count = q.checked_pow((d * d) as u32).unwrap_or(u64::MAX);
    if count > cap {
        return Err(Error::EnumerationCapExceeded { count, cap });
    }
    let alg = FinAlgebra::group_algebra(group, field);
    let gens = group.generators().to_vec();
    if gens.is_empty() {
        let r = Representation::from_generators_in(group, &alg, field, Vec::new())?.with_images(vec![Mat::identity(d)]);
        return Ok(pred(&r).then_some(r));
    }
    let mut by_order: std::collections::BTreeMap<usize, Vec<Mat>> = Default::default();
    let mut cands: Vec<Vec<Mat>> = Vec::new();
    for &s in &gens {
        let o = group.element_order(s);
        let all = by_order.entry(o).or_insert_with(|| roots_of_identity(d, field, o));
        cands.push(all.iter().filter(|m| filter.is_none_or(|flt| flt(s, m))).cloned().collect());
    }
    let search = Search { group, gens: &gens, cands: &cands, field, filter };
    let accept = |imgs: &[Mat]| {
        let r = Representation::from_generators_in(group, &alg, field, imgs.to_vec()).expect("shapes agree");
        pred(&r).then_some(r)
    };
    Ok(cands[0].par_iter().find_map_first(|m0| {
        let mut stack = vec![m0.clone()];
        search.first(&mut stack, &accept)
    }))
}

struct Search<'a> {
    group: &'a FiniteGroup,
    gens: &'a [usize],
    cands: &'a [Vec<Mat>],
    field: &'a Field,
    filter: Option<GenFilter<'a>>,
}

impl Search<'_> {
    /// Prefix checks shared by both searches; returns the full table once all generators are placed.
    fn admissible(&self, stack: &[Mat]) -> Option<Vec<Option<Mat>>> {
        let k = stack.len();
        let last = &stack[k - 1];
        let g = self.gens[k - 1];
        let id = Mat::identity(last.rows);
        for (i, m) in stack[..k - 1].iter().enumerate() {
            // cheap necessary conditions on the product image before the full table
            let h = self.gens[i];
            let hg = self.group.mul(h, g);
            let prod = m.mul(last, self.field);
            if prod.pow(self.group.element_order(hg) as u64, self.field) != id {
                return None;
            }
            if let Some(flt) = self.filter {
                if !flt(hg, &prod) || !flt(self.group.mul(g, h), &last.mul(m, self.field)) {
                    return None;
                }
            }
        }
        let table = consistent(self.group, &self.gens[..k], stack, self.field)?;
        if k == self.gens.len() {
            if let Some(flt) = self.filter {
                if !table.iter().enumerate().all(|(x, m)| m.as_ref().is_none_or(|m| flt(x, m))) {
                    return None;
                }
            }
        }
        Some(table)
    }

    fn dfs(&self, stack: &mut Vec<Mat>, out: &mut Vec<Vec<Mat>>) {
        if self.admissible(stack).is_none() {
            return;
        }
        let k = stack.len();
        if k == self.gens.len() {
            out.push(stack.clone());
            return;
        }
        for m in &self.cands[k] {
            stack.push(m.clone());
            self.dfs(stack, out);
            stack.pop();
        }
    }

    fn first<T>(&self, stack: &mut Vec<Mat>, accept: &dyn Fn(&[Mat]) -> Option<T>) -> Option<T> {
        self.admissible(stack)?;
        let k = stack.len();
        if k == self.gens.len() {
            return accept(stack);
        }
        for m in &self.cands[k] {
            stack.push(m.clone());
            let found = self.first(stack, accept);
            stack.pop();
            if found.is_some() {
                return found;
            }
        }
        None
    }
}

/// A generating set of an algebra (basis indices, chosen greedily) together with,
/// for every basis element, its expansion in products of the generators:
/// `e_i = sum_w c_{i,w} w` with words `w` over the generator list.
#[derive(Clone, Debug)]
pub struct AlgebraGenerators {
    pub generators: Vec<usize>,
    pub words: Vec<Vec<usize>>,
    pub expansions: Vec<Vec<Elem>>,
}

pub fn algebra_generators(a: &FinAlgebra) -> AlgebraGenerators {
    let f = a.field();
    let n = a.dim();
    let spanning = |gens: &[usize]| -> (Subspace, Vec<Vec<usize>>, Vec<Vec<Elem>>) {
        let mut span = Subspace::zero(n);
        let mut words = Vec::new();
        let mut vecs = Vec::new();
        let mut queue = std::collections::VecDeque::from([(Vec::<usize>::new(), a.unit().to_vec())]);
        while let Some((w, v)) = queue.pop_front() {
            if span.insert(&v, f) {
                for (k, &g) in gens.iter().enumerate() {
                    let mut w2 = w.clone();
                    w2.push(k);
                    queue.push_back((w2, a.mul(&v, &a.basis_vec(g))));
                }
                words.push(w);
                vecs.push(v);
            }
        }
        (span, words, vecs)
    };
    let mut gens = Vec::new();
    let (mut span, _, _) = spanning(&gens);
    for i in 0..n {
        if !span.contains(&a.basis_vec(i), f) {
            gens.push(i);
            span = spanning(&gens).0;
        }
    }
    let (_, words, vecs) = spanning(&gens);
    // solve e_i = sum_w c_w vec_w
    let w = Mat::from_cols(&vecs);
    let inv = if n == 0 { Mat::zeros(0, 0) } else { w.inverse(f).expect("word vectors form a basis") };
    let expansions = (0..n).map(|i| inv.col(i)).collect();
    AlgebraGenerators { generators: gens, words, expansions }
}

fn algebra_images(gens: &AlgebraGenerators, imgs: &[Mat], d: usize, f: &Field) -> Vec<Mat> {
    let word_imgs: Vec<Mat> = gens
        .words
        .iter()
        .map(|w| w.iter().fold(Mat::identity(d), |acc, &k| acc.mul(&imgs[k], f)))
        .collect();
    gens.expansions
        .iter()
        .map(|c| {
            c.iter().zip(&word_imgs).fold(Mat::zeros(d, d), |acc, (&x, m)| if x.is_zero() { acc } else { acc.add(&m.scale(x, f), f) })
        })
        .collect()
}

/// All representations `A -> M_d(F)` of an algebra, found by assigning images to a
/// generating set and checking the structure constants.
pub fn enumerate_algebra_reps(
    a: &FinAlgebra,
    d: usize,
    field: &Field,
    cap: u64,
    filter: Option<GenFilter<'_>>,
) -> Result<Vec<Representation>> {
    a.field().embedding(field)?;
    let gens = algebra_generators(a);
    let q = field.size() as u64;
    let per = q.checked_pow((d * d) as u32).unwrap_or(u64::MAX);
    if per > cap {
        return Err(Error::EnumerationCapExceeded { count: per, cap });
    }
    let all: Vec<Mat> = (0..per)
        .map(|mut n| {
            let mut m = Mat::zeros(d, d);
            for x in m.data.iter_mut() {
                *x = Elem((n % q) as u32);
                n /= q;
            }
            m
        })
        .collect();
    let cands: Vec<Vec<Mat>> = gens
        .generators
        .iter()
        .map(|&g| all.iter().filter(|m| filter.is_none_or(|flt| flt(g, m))).cloned().collect())
        .collect();
    let total = cands.iter().try_fold(1u64, |acc, c| acc.checked_mul(c.len() as u64)).unwrap_or(u64::MAX);
    if total > cap {
        return Err(Error::EnumerationCapExceeded { count: total, cap });
    }
    let base = a.base_change(field)?;
    let found: Vec<Option<Representation>> = (0..total)
        .into_par_iter()
        .map(|mut n| {
            let imgs: Vec<Mat> = cands
                .iter()
                .map(|c| {
                    let m = c[(n % c.len() as u64) as usize].clone();
                    n /= c.len() as u64;
                    m
                })
                .collect();
            let r = Representation::new(&base, field, algebra_images(&gens, &imgs, d, field)).ok()?;
            r.check().ok()?.then_some(r)
        })
        .collect();
    Ok(found.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u32) -> Field {
        Field::new(p, 1).unwrap()
    }

    fn diag(f: &Field, v: &[i64]) -> Mat {
        Mat::diag(&v.iter().map(|&x| f.from_int(x)).collect::<Vec<_>>())
    }

    #[test]
    fn check_examples() {
        let c3 = Arc::new(FiniteGroup::cyclic(3));
        let f7 = f(7);
        assert!(Representation::trivial(&c3, &f7, 2).check().unwrap());
        let r = Representation::from_generators(&c3, &f7, vec![diag(&f7, &[2, 4])]).unwrap();
        assert!(r.check().unwrap());
        let f5 = f(5);
        let bad = Representation::from_generators(&c3, &f5, vec![diag(&f5, &[2, 1])]).unwrap();
        assert!(!bad.check().unwrap());
    }

    #[test]
    fn enumeration_counts() {
        let f3 = f(3);
        let one = Arc::new(FiniteGroup::cyclic(1));
        assert_eq!(enumerate_reps(&one, 1, &f3, DEFAULT_ENUM_CAP).unwrap().len(), 1);
        let c2 = Arc::new(FiniteGroup::cyclic(2));
        assert_eq!(enumerate_reps(&c2, 1, &f(5), DEFAULT_ENUM_CAP).unwrap().len(), 2);
        let c3 = Arc::new(FiniteGroup::cyclic(3));
        let reps = enumerate_reps(&c3, 1, &f(7), DEFAULT_ENUM_CAP).unwrap();
        let vals: Vec<u32> = reps.iter().map(|r| r.image(1).get(0, 0).0).collect();
        assert_eq!(vals, vec![1, 2, 4]);
        assert!(matches!(enumerate_reps(&c3, 4, &f(7), DEFAULT_ENUM_CAP), Err(Error::EnumerationCapExceeded { .. })));
    }

    #[test]
    fn enumeration_matches_brute_force_for_s3() {
        // oracle: every pair of matrices, checked against the full group law
        let f3 = f(3);
        let s3 = Arc::new(FiniteGroup::symmetric(3));
        let reps = enumerate_reps(&s3, 2, &f3, DEFAULT_ENUM_CAP).unwrap();
        let all: Vec<Mat> = (0..81u32)
            .map(|mut n| {
                let mut m = Mat::zeros(2, 2);
                for x in m.data.iter_mut() {
                    *x = Elem(n % 3);
                    n /= 3;
                }
                m
            })
            .collect();
        let mut brute = 0;
        for a in &all {
            for b in &all {
                let r = Representation::from_generators(&s3, &f3, vec![a.clone(), b.clone()]).unwrap();
                if r.check().unwrap() {
                    brute += 1;
                }
            }
        }
        assert_eq!(reps.len(), brute);
        assert!(reps.iter().all(|r| r.check().unwrap()));
    }

    #[test]
    fn invariant_subspace_examples() {
        let f7 = f(7);
        let s3 = Arc::new(FiniteGroup::symmetric(3));
        let irr = standard_s3(&s3, &f7);
        assert!(invariant_subspace(&irr).is_none());
        // oracle: no line among the 8 of F_7^2 is stable
        let pts: Vec<Vec<Elem>> = std::iter::once(vec![Elem(0), Elem(1)]).chain((0..7).map(|a| vec![Elem(1), Elem(a)])).collect();
        for v in pts {
            let w = Subspace::span(2, &[v], &f7);
            assert!(!irr.is_invariant(&w));
        }
        let f5 = f(5);
        let c5 = Arc::new(FiniteGroup::cyclic(5));
        let uni = Representation::from_generators(&c5, &f5, vec![Mat::from_ints(&f5, &[&[1, 1], &[0, 1]])]).unwrap();
        let w = invariant_subspace(&uni).unwrap();
        assert_eq!(w.basis(), &[vec![Elem(1), Elem(0)]]);
    }

    pub(crate) fn standard_s3(s3: &Arc<FiniteGroup>, f: &Field) -> Representation {
        // transposition and 3-cycle acting on the sum-zero plane
        let t = Mat::from_ints(f, &[&[0, 1], &[1, 0]]);
        let c = Mat::from_ints(f, &[&[0, -1], &[1, -1]]);
        let r = Representation::from_generators(s3, f, vec![t, c]).unwrap();
        assert!(r.check().unwrap());
        r
    }

    #[test]
    fn semisimplification_examples() {
        let f5 = f(5);
        let c5 = Arc::new(FiniteGroup::cyclic(5));
        let uni = Representation::from_generators(&c5, &f5, vec![Mat::from_ints(&f5, &[&[1, 1], &[0, 1]])]).unwrap();
        let jh = semisimplify(&uni).unwrap();
        assert_eq!(jh.shape(), vec![(1, 2)]);
        assert!(!is_semisimple(&uni).unwrap());
        let triv = Representation::trivial(&c5, &f5, 2);
        assert!(!isomorphic(&triv, &uni).unwrap());
        assert!(is_semisimple(&triv).unwrap());

        let f7 = f(7);
        let s3 = Arc::new(FiniteGroup::symmetric(3));
        let std2 = standard_s3(&s3, &f7);
        let one = Representation::trivial(&s3, &f7, 1);
        // nonsplit is not required: any block-triangular gluing has these factors
        let corner: Vec<Mat> = std2.images().iter().map(|_| Mat::zeros(1, 2)).collect();
        let ext = Representation::extension(&one, &std2, corner);
        let jh = semisimplify(&ext).unwrap();
        assert_eq!(jh.total_dim(), 3);
        assert_eq!(jh.shape(), vec![(1, 1), (2, 1)]);
    }

    #[test]
    fn isomorphism_examples() {
        let f7 = f(7);
        let c3 = Arc::new(FiniteGroup::cyclic(3));
        let a = Representation::from_generators(&c3, &f7, vec![diag(&f7, &[2, 4])]).unwrap();
        let b = Representation::from_generators(&c3, &f7, vec![diag(&f7, &[4, 2])]).unwrap();
        assert!(isomorphic(&a, &a).unwrap());
        assert!(isomorphic(&a, &b).unwrap());
        let c = Representation::from_generators(&c3, &f7, vec![diag(&f7, &[1, 2])]).unwrap();
        assert!(!isomorphic(&a, &c).unwrap());
    }

    #[test]
    fn algebra_rep_enumeration() {
        let f3 = f(3);
        let m2 = FinAlgebra::matrix_algebra(2, &f3);
        let reps = enumerate_algebra_reps(&m2, 2, &f3, DEFAULT_ENUM_CAP, None).unwrap();
        // oracle: unital reps of M_2 in dimension 2 are the conjugates of the identity, |PGL_2(F_3)| = 24
        assert_eq!(reps.len(), 24);
        let taut = Representation::tautological(2, &f3);
        assert!(reps.iter().all(|r| isomorphic(r, &taut).unwrap()));
        let dual = FinAlgebra::truncated_polynomial(2, &f(5), "x");
        assert_eq!(enumerate_algebra_reps(&dual, 1, &f(5), DEFAULT_ENUM_CAP, None).unwrap().len(), 1);
    }

    #[test]
    fn json_round_trip() {
        let f7 = f(7);
        let s3 = Arc::new(FiniteGroup::symmetric(3));
        let r = standard_s3(&s3, &f7);
        assert_eq!(Representation::from_json_group(&s3, &r.to_json()).unwrap(), r);
        let m2 = Representation::tautological(2, &f7);
        assert_eq!(Representation::from_json_algebra(m2.algebra(), &m2.to_json()).unwrap(), m2);
    }
}
