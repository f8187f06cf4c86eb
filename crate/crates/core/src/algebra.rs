//! Finite-dimensional associative unital algebras in structure-constant form.

use std::fmt;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::group::FiniteGroup;
use crate::linalg::{Mat, Subspace};
use crate::poly::MPoly;

struct AlgInner {
    field: Field,
    labels: Vec<String>,
    // products e_i e_j at index i * dim + j, sparse in the output coordinate
    table: Vec<Vec<(usize, Elem)>>,
    unit: Vec<Elem>,
}

/// An associative unital algebra with basis `e_0..e_{n-1}`. Cheap to clone.
#[derive(Clone)]
pub struct FinAlgebra(Arc<AlgInner>);

impl FinAlgebra {
    /// Builds an algebra from dense structure constants `consts[i][j][k] = c^k_{ij}`.
    pub fn from_dense(field: &Field, labels: Vec<String>, consts: &[Vec<Vec<Elem>>], unit: Vec<Elem>) -> Result<FinAlgebra> {
        let n = labels.len();
        if consts.len() != n || consts.iter().any(|r| r.len() != n || r.iter().any(|v| v.len() != n)) || unit.len() != n {
            return Err(Error::DimensionMismatch(format!("structure constants must be {n}x{n}x{n}")));
        }
        let table = consts
            .iter()
            .flat_map(|row| row.iter().map(|v| sparse(v)))
            .collect();
        FinAlgebra::from_sparse(field, labels, table, unit)
    }

    pub fn from_sparse(field: &Field, labels: Vec<String>, table: Vec<Vec<(usize, Elem)>>, unit: Vec<Elem>) -> Result<FinAlgebra> {
        let n = labels.len();
        if table.len() != n * n || unit.len() != n {
            return Err(Error::DimensionMismatch(format!("expected {} products and a unit of length {n}", n * n)));
        }
        let alg = FinAlgebra(Arc::new(AlgInner { field: field.clone(), labels, table, unit }));
        Ok(alg)
    }

    /// Full matrix algebra `M_n(F)` with basis of matrix units `E_ij` (row-major).
    pub fn matrix_algebra(n: usize, field: &Field) -> FinAlgebra {
        let dim = n * n;
        let labels = (0..n).flat_map(|i| (0..n).map(move |j| format!("E{}{}", i + 1, j + 1))).collect();
        let mut table = vec![Vec::new(); dim * dim];
        for a in 0..dim {
            for b in 0..dim {
                let (i, j) = (a / n, a % n);
                let (k, l) = (b / n, b % n);
                if j == k {
                    table[a * dim + b] = vec![(i * n + l, Elem::ONE)];
                }
            }
        }
        let mut unit = vec![Elem::ZERO; dim];
        for i in 0..n {
            unit[i * n + i] = Elem::ONE;
        }
        FinAlgebra::from_sparse(field, labels, table, unit).expect("consistent sizes")
    }

    /// `F[x]/(x^n)` with basis `1, x, ..., x^{n-1}`.
    pub fn truncated_polynomial(n: usize, field: &Field, var: &str) -> FinAlgebra {
        let labels = (0..n)
            .map(|i| match i {
                0 => "1".to_string(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            })
            .collect();
        let mut table = vec![Vec::new(); n * n];
        for i in 0..n {
            for j in 0..n {
                if i + j < n {
                    table[i * n + j] = vec![(i + j, Elem::ONE)];
                }
            }
        }
        let mut unit = vec![Elem::ZERO; n];
        unit[0] = Elem::ONE;
        FinAlgebra::from_sparse(field, labels, table, unit).expect("consistent sizes")
    }

    /// The group algebra `F[G]`, basis indexed by group elements.
    pub fn group_algebra(g: &FiniteGroup, field: &Field) -> FinAlgebra {
        let n = g.order();
        let mut table = vec![Vec::new(); n * n];
        for a in 0..n {
            for b in 0..n {
                table[a * n + b] = vec![(g.mul(a, b), Elem::ONE)];
            }
        }
        let mut unit = vec![Elem::ZERO; n];
        unit[g.identity()] = Elem::ONE;
        FinAlgebra::from_sparse(field, g.labels().to_vec(), table, unit).expect("consistent sizes")
    }

    pub fn field(&self) -> &Field {
        &self.0.field
    }

    pub fn dim(&self) -> usize {
        self.0.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.0.labels
    }

    pub fn unit(&self) -> &[Elem] {
        &self.0.unit
    }

    pub fn zero(&self) -> Vec<Elem> {
        vec![Elem::ZERO; self.dim()]
    }

    pub fn basis_vec(&self, i: usize) -> Vec<Elem> {
        let mut v = self.zero();
        v[i] = Elem::ONE;
        v
    }

    /// Sparse coordinates of `e_i e_j`.
    pub fn product(&self, i: usize, j: usize) -> &[(usize, Elem)] {
        &self.0.table[i * self.dim() + j]
    }

    pub fn mul(&self, x: &[Elem], y: &[Elem]) -> Vec<Elem> {
        let f = self.field();
        let mut out = self.zero();
        for (i, &a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in y.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let ab = f.mul(a, b);
                for &(k, c) in self.product(i, j) {
                    out[k] = f.add(out[k], f.mul(ab, c));
                }
            }
        }
        out
    }

    pub fn add(&self, x: &[Elem], y: &[Elem]) -> Vec<Elem> {
        let f = self.field();
        x.iter().zip(y).map(|(&a, &b)| f.add(a, b)).collect()
    }

    pub fn sub(&self, x: &[Elem], y: &[Elem]) -> Vec<Elem> {
        let f = self.field();
        x.iter().zip(y).map(|(&a, &b)| f.sub(a, b)).collect()
    }

    pub fn scale(&self, c: Elem, x: &[Elem]) -> Vec<Elem> {
        let f = self.field();
        x.iter().map(|&a| f.mul(c, a)).collect()
    }

    pub fn pow(&self, x: &[Elem], e: u32) -> Vec<Elem> {
        let mut r = self.unit().to_vec();
        for _ in 0..e {
            r = self.mul(&r, x);
        }
        r
    }

    /// Product of elements whose coordinates are polynomials.
    pub fn mul_poly(&self, x: &[MPoly], y: &[MPoly]) -> Vec<MPoly> {
        let f = self.field();
        let nv = x.first().map(|p| p.nvars()).unwrap_or(0);
        let mut out: Vec<MPoly> = (0..self.dim()).map(|_| MPoly::zero(f, nv)).collect();
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                if b.is_zero() || self.product(i, j).is_empty() {
                    continue;
                }
                let ab = a.mul(b);
                for &(k, c) in self.product(i, j) {
                    out[k].add_assign(&ab.scale(c));
                }
            }
        }
        out
    }

    /// Constant element viewed with polynomial coordinates in `nvars` variables.
    pub fn const_poly(&self, x: &[Elem], nvars: usize) -> Vec<MPoly> {
        x.iter().map(|&c| MPoly::constant(self.field(), nvars, c)).collect()
    }

    /// The generic element `sum t_{offset+i} e_i` in a ring of `nvars` variables.
    pub fn generic_element(&self, nvars: usize, offset: usize) -> Vec<MPoly> {
        (0..self.dim()).map(|i| MPoly::var(self.field(), nvars, offset + i)).collect()
    }

    /// Matrix of left multiplication `y -> x y` acting on column coordinate vectors.
    pub fn left_mult_matrix(&self, x: &[Elem]) -> Mat {
        let cols: Vec<Vec<Elem>> = (0..self.dim()).map(|j| self.mul(x, &self.basis_vec(j))).collect();
        Mat::from_cols(&cols)
    }

    /// First basis triple `(i,j,k)` violating associativity, if any.
    pub fn associativity_failure(&self) -> Option<(usize, usize, usize)> {
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                let ij = self.mul(&self.basis_vec(i), &self.basis_vec(j));
                for k in 0..n {
                    let left = self.mul(&ij, &self.basis_vec(k));
                    let jk = self.mul(&self.basis_vec(j), &self.basis_vec(k));
                    let right = self.mul(&self.basis_vec(i), &jk);
                    if left != right {
                        return Some((i, j, k));
                    }
                }
            }
        }
        None
    }

    pub fn is_associative(&self) -> bool {
        self.associativity_failure().is_none()
    }

    pub fn unit_is_identity(&self) -> bool {
        (0..self.dim()).all(|i| {
            let e = self.basis_vec(i);
            self.mul(self.unit(), &e) == e && self.mul(&e, self.unit()) == e
        })
    }

    pub fn is_commutative(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| self.product(i, j) == self.product(j, i)))
    }

    /// The center, as the solution space of `[x, e_i] = 0` for all `i`.
    pub fn center(&self) -> Subspace {
        let f = self.field();
        let n = self.dim();
        let mut rows = Vec::new();
        for i in 0..n {
            let ei = self.basis_vec(i);
            let mut block = Mat::zeros(n, n);
            for j in 0..n {
                let ej = self.basis_vec(j);
                let c = self.sub(&self.mul(&ej, &ei), &self.mul(&ei, &ej));
                for k in 0..n {
                    block.set(k, j, c[k]);
                }
            }
            rows.extend(block.row_vecs());
        }
        let m = Mat::from_rows(&rows);
        let ns = if rows.is_empty() { Vec::new() } else { m.nullspace(f) };
        Subspace::span(n, &ns, f)
    }

    /// Extends scalars along the canonical embedding into `target`.
    pub fn base_change(&self, target: &Field) -> Result<FinAlgebra> {
        if target == self.field() {
            return Ok(self.clone());
        }
        let e = self.field().embedding(target)?;
        let table = self.0.table.iter().map(|v| v.iter().map(|&(k, c)| (k, e.apply(c))).collect()).collect();
        let unit = self.0.unit.iter().map(|&c| e.apply(c)).collect();
        FinAlgebra::from_sparse(target, self.0.labels.clone(), table, unit)
    }

    /// Dense structure constants `c[i][j][k]`.
    pub fn dense_constants(&self) -> Vec<Vec<Vec<Elem>>> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let mut v = vec![Elem::ZERO; n];
                        for &(k, c) in self.product(i, j) {
                            v[k] = c;
                        }
                        v
                    })
                    .collect()
            })
            .collect()
    }

    pub fn fmt_element(&self, x: &[Elem]) -> String {
        let parts: Vec<String> = x
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, &c)| {
                if c == Elem::ONE {
                    self.labels()[i].clone()
                } else {
                    format!("{}*{}", self.field().fmt_elem(c), self.labels()[i])
                }
            })
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }

    pub fn to_json(&self) -> Value {
        let mut products = Vec::new();
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                for &(k, c) in self.product(i, j) {
                    products.push(json!([i.to_string(), j.to_string(), k.to_string(), c.0.to_string()]));
                }
            }
        }
        json!({
            "field": self.field().spec(),
            "dim": self.dim().to_string(),
            "basis": self.labels(),
            "products": products,
            "unit": self.unit().iter().map(|c| c.0.to_string()).collect::<Vec<_>>(),
        })
    }
}

fn sparse(v: &[Elem]) -> Vec<(usize, Elem)> {
    v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, &c)| (k, c)).collect()
}

impl PartialEq for FinAlgebra {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.field == other.0.field
                && self.0.labels == other.0.labels
                && self.0.table == other.0.table
                && self.0.unit == other.0.unit)
    }
}

impl Eq for FinAlgebra {}

impl fmt::Debug for FinAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FinAlgebra(dim {} over {})", self.dim(), self.field())
    }
}

/// A two-sided ideal, stored as an echelon-form subspace of the parent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ideal {
    parent: FinAlgebra,
    space: Subspace,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Nilpotency {
    Index(usize),
    Unbounded,
}

impl Ideal {
    pub fn zero(parent: &FinAlgebra) -> Ideal {
        Ideal { parent: parent.clone(), space: Subspace::zero(parent.dim()) }
    }

    pub fn whole(parent: &FinAlgebra) -> Ideal {
        Ideal { parent: parent.clone(), space: Subspace::full(parent.dim()) }
    }

    /// Wraps a span after checking closure under left and right multiplication.
    pub fn new(parent: &FinAlgebra, vectors: &[Vec<Elem>]) -> Result<Ideal> {
        check_lengths(parent, vectors)?;
        let space = Subspace::span(parent.dim(), vectors, parent.field());
        let ideal = Ideal { parent: parent.clone(), space };
        if !ideal.is_two_sided() {
            return Err(Error::NotAnIdeal);
        }
        Ok(ideal)
    }

    pub fn parent(&self) -> &FinAlgebra {
        &self.parent
    }

    pub fn space(&self) -> &Subspace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn is_zero(&self) -> bool {
        self.space.dim() == 0
    }

    pub fn basis(&self) -> &[Vec<Elem>] {
        self.space.basis()
    }

    pub fn contains(&self, x: &[Elem]) -> bool {
        self.space.contains(x, self.parent.field())
    }

    pub fn is_two_sided(&self) -> bool {
        let r = &self.parent;
        self.space.basis().iter().all(|v| {
            (0..r.dim()).all(|i| {
                let e = r.basis_vec(i);
                self.contains(&r.mul(&e, v)) && self.contains(&r.mul(v, &e))
            })
        })
    }

    /// Span of all products `x y` with `x` in `self`, `y` in `other`.
    pub fn product(&self, other: &Ideal) -> Ideal {
        let r = &self.parent;
        let mut s = Subspace::zero(r.dim());
        for x in self.basis() {
            for y in other.basis() {
                s.insert(&r.mul(x, y), r.field());
            }
        }
        Ideal { parent: r.clone(), space: s }
    }

    /// Smallest `k` with `I^k = 0`; `Unbounded` when the powers stabilize at a nonzero ideal.
    pub fn nilpotency_index(&self) -> Nilpotency {
        if self.is_zero() {
            return Nilpotency::Index(1);
        }
        let mut power = self.clone();
        let mut k = 1;
        loop {
            let next = power.product(self);
            k += 1;
            if next.is_zero() {
                return Nilpotency::Index(k);
            }
            if next.dim() == power.dim() {
                return Nilpotency::Unbounded;
            }
            power = next;
        }
    }
}

fn check_lengths(parent: &FinAlgebra, vectors: &[Vec<Elem>]) -> Result<()> {
    if let Some(v) = vectors.iter().find(|v| v.len() != parent.dim()) {
        return Err(Error::DimensionMismatch(format!(
            "element of length {} in algebra of dimension {}",
            v.len(),
            parent.dim()
        )));
    }
    Ok(())
}

/// The two-sided ideal generated by `elems`, by span closure under basis multiplication.
pub fn ideal_generated(r: &FinAlgebra, elems: &[Vec<Elem>]) -> Result<Ideal> {
    check_lengths(r, elems)?;
    let f = r.field();
    let mut space = Subspace::zero(r.dim());
    let mut queue: Vec<Vec<Elem>> = elems.to_vec();
    while let Some(v) = queue.pop() {
        if !space.insert(&v, f) {
            continue;
        }
        for i in 0..r.dim() {
            let e = r.basis_vec(i);
            queue.push(r.mul(&e, &v));
            queue.push(r.mul(&v, &e));
        }
    }
    Ok(Ideal { parent: r.clone(), space })
}

/// The linear projection `R -> R/I` onto the complement spanned by non-pivot basis vectors.
#[derive(Clone, Debug)]
pub struct Projection {
    ideal: Subspace,
    keep: Vec<usize>,
    field: Field,
}

impl Projection {
    pub fn apply(&self, x: &[Elem]) -> Vec<Elem> {
        let r = self.ideal.reduce(x, &self.field);
        self.keep.iter().map(|&i| r[i]).collect()
    }

    /// A linear section: quotient coordinates placed back on the kept basis vectors.
    pub fn lift(&self, y: &[Elem]) -> Vec<Elem> {
        let mut v = vec![Elem::ZERO; self.ideal.ambient];
        for (&i, &c) in self.keep.iter().zip(y) {
            v[i] = c;
        }
        v
    }

    /// Indices of parent basis elements that form the quotient basis.
    pub fn kept(&self) -> &[usize] {
        &self.keep
    }
}

/// The quotient algebra `R/I` together with its projection.
pub fn quotient(r: &FinAlgebra, ideal: &Ideal) -> Result<(FinAlgebra, Projection)> {
    if ideal.parent() != r {
        return Err(Error::DimensionMismatch("ideal belongs to a different algebra".into()));
    }
    if !ideal.is_two_sided() {
        return Err(Error::NotAnIdeal);
    }
    let keep = ideal.space().non_pivots();
    let proj = Projection { ideal: ideal.space().clone(), keep: keep.clone(), field: r.field().clone() };
    let m = keep.len();
    let labels = keep.iter().map(|&i| r.labels()[i].clone()).collect();
    let mut table = Vec::with_capacity(m * m);
    for &a in &keep {
        for &b in &keep {
            let prod = r.mul(&r.basis_vec(a), &r.basis_vec(b));
            table.push(sparse(&proj.apply(&prod)));
        }
    }
    let unit = proj.apply(r.unit());
    Ok((FinAlgebra::from_sparse(r.field(), labels, table, unit)?, proj))
}

/// Largest exhaustive search used by `radical` when the trace form is inconclusive.
pub const RADICAL_SEARCH_CAP: u64 = 1 << 18;

/// The Jacobson radical.
///
/// The radical lies inside the kernel of the trace form `(x, y) -> tr(L_{xy})`. When that
/// ideal is nilpotent it is the radical; otherwise (characteristic dividing block sizes)
/// the radical is assembled from the elements `x` of that ideal whose left ideal `Ax`
/// is nilpotent.
pub fn radical(a: &FinAlgebra) -> Result<Ideal> {
    let f = a.field();
    let n = a.dim();
    if n == 0 {
        return Ok(Ideal::zero(a));
    }
    let lm: Vec<Mat> = (0..n).map(|i| a.left_mult_matrix(&a.basis_vec(i))).collect();
    let mut form = Mat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            form.set(i, j, lm[i].mul(&lm[j], f).trace(f));
        }
    }
    let t = Ideal::new(a, &form.nullspace(f))?;
    if matches!(t.nilpotency_index(), Nilpotency::Index(_)) {
        return Ok(t);
    }
    let q = f.size() as u64;
    let size = q.checked_pow(t.dim() as u32).unwrap_or(u64::MAX);
    if size > RADICAL_SEARCH_CAP {
        return Err(Error::SearchCapExceeded { size });
    }
    let mut j = Subspace::zero(n);
    for x in t.space().points(f) {
        if j.contains(&x, f) {
            continue;
        }
        let left: Vec<Vec<Elem>> = (0..n).map(|i| a.mul(&a.basis_vec(i), &x)).collect();
        let li = Ideal { parent: a.clone(), space: Subspace::span(n, &left, f) };
        if matches!(li.nilpotency_index(), Nilpotency::Index(_)) {
            j.insert(&x, f);
        }
    }
    Ideal::new(a, j.basis())
}

pub fn is_semisimple(a: &FinAlgebra) -> Result<bool> {
    Ok(radical(a)?.is_zero())
}
