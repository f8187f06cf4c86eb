//! Dense matrices and reduced-row-echelon subspaces over a finite field.

use crate::field::{Elem, Field};

/// Row-major dense matrix. Arithmetic takes the field explicitly.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Elem>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Mat {
        Mat { rows, cols, data: vec![Elem::ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Mat {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Elem::ONE;
        }
        m
    }

    pub fn scalar(n: usize, c: Elem) -> Mat {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = c;
        }
        m
    }

    pub fn diag(entries: &[Elem]) -> Mat {
        let n = entries.len();
        let mut m = Mat::zeros(n, n);
        for (i, &c) in entries.iter().enumerate() {
            m.data[i * n + i] = c;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Elem>]) -> Mat {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged matrix");
            data.extend_from_slice(row);
        }
        Mat { rows: r, cols: c, data }
    }

    pub fn from_ints(f: &Field, rows: &[&[i64]]) -> Mat {
        Mat::from_rows(&rows.iter().map(|r| r.iter().map(|&x| f.from_int(x)).collect()).collect::<Vec<_>>())
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(cols: &[Vec<Elem>]) -> Mat {
        Mat::from_rows(cols).transpose()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Elem>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn col(&self, j: usize) -> Vec<Elem> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, other: &Mat, f: &Field) -> Mat {
        assert_eq!(self.cols, other.rows, "matrix shape mismatch");
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(l, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.data[idx] = f.add(out.data[idx], f.mul(a, b));
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Elem], f: &Field) -> Vec<Elem> {
        (0..self.rows)
            .map(|i| f.sum(self.row(i).iter().zip(v).map(|(&a, &b)| f.mul(a, b))))
            .collect()
    }

    pub fn add(&self, other: &Mat, f: &Field) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect(),
        }
    }

    pub fn sub(&self, other: &Mat, f: &Field) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f.sub(a, b)).collect(),
        }
    }

    pub fn scale(&self, c: Elem, f: &Field) -> Mat {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&a| f.mul(a, c)).collect() }
    }

    pub fn map(&self, g: impl Fn(Elem) -> Elem) -> Mat {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&a| g(a)).collect() }
    }

    pub fn pow(&self, mut e: u64, f: &Field) -> Mat {
        let mut r = Mat::identity(self.rows);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&b, f);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b, f);
            }
        }
        r
    }

    pub fn trace(&self, f: &Field) -> Elem {
        f.sum((0..self.rows.min(self.cols)).map(|i| self.get(i, i)))
    }

    /// Reduces in place to reduced row echelon form; returns the pivot columns.
    pub fn rref_in_place(&mut self, f: &Field) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            if pr != r {
                for j in 0..self.cols {
                    self.data.swap(pr * self.cols + j, r * self.cols + j);
                }
            }
            let inv = f.inv(self.get(r, c));
            for j in 0..self.cols {
                let v = f.mul(self.get(r, j), inv);
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i != r {
                    let m = self.get(i, c);
                    if !m.is_zero() {
                        for j in 0..self.cols {
                            let v = f.sub(self.get(i, j), f.mul(m, self.get(r, j)));
                            self.set(i, j, v);
                        }
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self, f: &Field) -> usize {
        self.clone().rref_in_place(f).len()
    }

    /// Basis of the right null space `{v : M v = 0}`.
    pub fn nullspace(&self, f: &Field) -> Vec<Vec<Elem>> {
        let mut m = self.clone();
        let pivots = m.rref_in_place(f);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![Elem::ZERO; self.cols];
                v[fc] = Elem::ONE;
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(m.get(r, fc));
                }
                v
            })
            .collect()
    }

    /// Some solution of `M x = b`, if one exists.
    pub fn solve(&self, b: &[Elem], f: &Field) -> Option<Vec<Elem>> {
        let mut aug = Mat::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, self.cols, b[i]);
        }
        let pivots = aug.rref_in_place(f);
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Elem::ZERO; self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = aug.get(r, self.cols);
        }
        Some(x)
    }

    pub fn det(&self, f: &Field) -> Elem {
        assert!(self.is_square());
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Elem::ONE;
        for c in 0..n {
            let Some(pr) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return Elem::ZERO;
            };
            if pr != c {
                for j in 0..n {
                    m.data.swap(pr * n + j, c * n + j);
                }
                det = f.neg(det);
            }
            let piv = m.get(c, c);
            det = f.mul(det, piv);
            let inv = f.inv(piv);
            for i in c + 1..n {
                let factor = f.mul(m.get(i, c), inv);
                if !factor.is_zero() {
                    for j in c..n {
                        let v = f.sub(m.get(i, j), f.mul(factor, m.get(c, j)));
                        m.set(i, j, v);
                    }
                }
            }
        }
        det
    }

    pub fn inverse(&self, f: &Field) -> Option<Mat> {
        assert!(self.is_square());
        let n = self.rows;
        let mut aug = Mat::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, Elem::ONE);
        }
        let piv = aug.rref_in_place(f);
        if piv.len() < n || piv[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Mat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, aug.get(i, n + j));
            }
        }
        Some(inv)
    }

    /// Characteristic polynomial `det(tI - M)`, coefficients low degree first, monic.
    pub fn charpoly(&self, f: &Field) -> Vec<Elem> {
        assert!(self.is_square());
        let n = self.rows;
        let mut h = self.clone();
        // similarity reduction to upper Hessenberg form
        for j in 0..n.saturating_sub(2) {
            let Some(pr) = (j + 1..n).find(|&i| !h.get(i, j).is_zero()) else {
                continue;
            };
            if pr != j + 1 {
                for c in 0..n {
                    h.data.swap(pr * n + c, (j + 1) * n + c);
                }
                for r in 0..n {
                    h.data.swap(r * n + pr, r * n + j + 1);
                }
            }
            let inv = f.inv(h.get(j + 1, j));
            for r in j + 2..n {
                let m = f.mul(h.get(r, j), inv);
                if m.is_zero() {
                    continue;
                }
                for c in 0..n {
                    let v = f.sub(h.get(r, c), f.mul(m, h.get(j + 1, c)));
                    h.set(r, c, v);
                }
                for rr in 0..n {
                    let v = f.add(h.get(rr, j + 1), f.mul(m, h.get(rr, r)));
                    h.set(rr, j + 1, v);
                }
            }
        }
        let mut polys: Vec<Vec<Elem>> = vec![vec![Elem::ONE]];
        for m in 1..=n {
            let prev = &polys[m - 1];
            let mut pm = upoly::mul(&[f.neg(h.get(m - 1, m - 1)), Elem::ONE], prev, f);
            let mut prod = Elem::ONE;
            for i in (1..m).rev() {
                prod = f.mul(prod, h.get(i, i - 1));
                let c = f.mul(prod, h.get(i - 1, m - 1));
                if !c.is_zero() {
                    pm = upoly::sub(&pm, &upoly::scale(&polys[i - 1], c, f), f);
                }
            }
            polys.push(pm);
        }
        let mut out = polys.pop().unwrap();
        out.resize(n + 1, Elem::ZERO);
        out
    }

    /// Block matrix `[[a, b], [c, d]]`.
    pub fn block(a: &Mat, b: &Mat, c: &Mat, d: &Mat) -> Mat {
        let (r1, c1) = (a.rows, a.cols);
        let mut m = Mat::zeros(a.rows + c.rows, a.cols + b.cols);
        for i in 0..m.rows {
            for j in 0..m.cols {
                let v = match (i < r1, j < c1) {
                    (true, true) => a.get(i, j),
                    (true, false) => b.get(i, j - c1),
                    (false, true) => c.get(i - r1, j),
                    (false, false) => d.get(i - r1, j - c1),
                };
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Mat {
        let mut m = Mat::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, self.get(r0 + i, c0 + j));
            }
        }
        m
    }
}

/// Univariate polynomials as coefficient vectors, low degree first.
pub mod upoly {
    use crate::field::{Elem, Field};

    pub fn trim(mut a: Vec<Elem>) -> Vec<Elem> {
        while a.last().is_some_and(|x| x.is_zero()) {
            a.pop();
        }
        a
    }

    pub fn mul(a: &[Elem], b: &[Elem], f: &Field) -> Vec<Elem> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![Elem::ZERO; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(x, y));
            }
        }
        trim(out)
    }

    pub fn add(a: &[Elem], b: &[Elem], f: &Field) -> Vec<Elem> {
        let n = a.len().max(b.len());
        trim(
            (0..n)
                .map(|i| f.add(*a.get(i).unwrap_or(&Elem::ZERO), *b.get(i).unwrap_or(&Elem::ZERO)))
                .collect(),
        )
    }

    pub fn sub(a: &[Elem], b: &[Elem], f: &Field) -> Vec<Elem> {
        let n = a.len().max(b.len());
        trim(
            (0..n)
                .map(|i| f.sub(*a.get(i).unwrap_or(&Elem::ZERO), *b.get(i).unwrap_or(&Elem::ZERO)))
                .collect(),
        )
    }

    pub fn scale(a: &[Elem], c: Elem, f: &Field) -> Vec<Elem> {
        trim(a.iter().map(|&x| f.mul(x, c)).collect())
    }

    pub fn eval(a: &[Elem], x: Elem, f: &Field) -> Elem {
        a.iter().rev().fold(Elem::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }
}

/// A subspace of `F^n` kept in reduced row echelon form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    pub ambient: usize,
    rows: Vec<Vec<Elem>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Subspace {
        Subspace { ambient, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(ambient: usize) -> Subspace {
        let mut s = Subspace::zero(ambient);
        for i in 0..ambient {
            let mut v = vec![Elem::ZERO; ambient];
            v[i] = Elem::ONE;
            s.rows.push(v);
            s.pivots.push(i);
        }
        s
    }

    pub fn span<'a, I: IntoIterator<Item = &'a Vec<Elem>>>(ambient: usize, vecs: I, f: &Field) -> Subspace {
        let mut s = Subspace::zero(ambient);
        for v in vecs {
            s.insert(v, f);
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vec<Elem>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Coordinates not used as pivots; the standard vectors there span a complement.
    pub fn non_pivots(&self) -> Vec<usize> {
        (0..self.ambient).filter(|c| !self.pivots.contains(c)).collect()
    }

    /// Reduces `v` modulo the subspace; the result vanishes on all pivot coordinates.
    pub fn reduce(&self, v: &[Elem], f: &Field) -> Vec<Elem> {
        let mut v = v.to_vec();
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let c = v[pc];
            if !c.is_zero() {
                for (x, &r) in v.iter_mut().zip(row) {
                    if !r.is_zero() {
                        *x = f.sub(*x, f.mul(c, r));
                    }
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Elem], f: &Field) -> bool {
        self.reduce(v, f).iter().all(|x| x.is_zero())
    }

    /// Inserts `v`; returns true when the dimension grew.
    pub fn insert(&mut self, v: &[Elem], f: &Field) -> bool {
        assert_eq!(v.len(), self.ambient, "vector length mismatch");
        let mut r = self.reduce(v, f);
        let Some(pc) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = f.inv(r[pc]);
        for x in r.iter_mut() {
            *x = f.mul(*x, inv);
        }
        for row in self.rows.iter_mut() {
            let c = row[pc];
            if !c.is_zero() {
                for (x, &y) in row.iter_mut().zip(&r) {
                    *x = f.sub(*x, f.mul(c, y));
                }
            }
        }
        let pos = self.pivots.partition_point(|&p| p < pc);
        self.rows.insert(pos, r);
        self.pivots.insert(pos, pc);
        true
    }

    /// Coefficients of `v` in the echelon basis; `v` must lie in the subspace.
    pub fn coords(&self, v: &[Elem]) -> Vec<Elem> {
        self.pivots.iter().map(|&p| v[p]).collect()
    }

    pub fn combine(&self, coeffs: &[Elem], f: &Field) -> Vec<Elem> {
        let mut out = vec![Elem::ZERO; self.ambient];
        for (row, &c) in self.rows.iter().zip(coeffs) {
            if c.is_zero() {
                continue;
            }
            for (x, &r) in out.iter_mut().zip(row) {
                *x = f.add(*x, f.mul(c, r));
            }
        }
        out
    }

    pub fn sum(&self, other: &Subspace, f: &Field) -> Subspace {
        let mut s = self.clone();
        for v in &other.rows {
            s.insert(v, f);
        }
        s
    }

    pub fn contains_subspace(&self, other: &Subspace, f: &Field) -> bool {
        other.rows.iter().all(|v| self.contains(v, f))
    }

    pub fn intersect(&self, other: &Subspace, f: &Field) -> Subspace {
        // solve sum a_i u_i = sum b_j w_j
        let (a, b) = (self.dim(), other.dim());
        if a == 0 || b == 0 {
            return Subspace::zero(self.ambient);
        }
        let mut m = Mat::zeros(self.ambient, a + b);
        for (i, u) in self.rows.iter().enumerate() {
            for r in 0..self.ambient {
                m.set(r, i, u[r]);
            }
        }
        for (j, w) in other.rows.iter().enumerate() {
            for r in 0..self.ambient {
                m.set(r, a + j, f.neg(w[r]));
            }
        }
        let ns = m.nullspace(f);
        let vecs: Vec<Vec<Elem>> = ns.iter().map(|c| self.combine(&c[..a], f)).collect();
        Subspace::span(self.ambient, &vecs, f)
    }

    /// All vectors of the subspace in a deterministic order (coefficient encoding order).
    pub fn points(&self, f: &Field) -> Vec<Vec<Elem>> {
        let q = f.size() as u64;
        let total = q.pow(self.dim() as u32);
        (0..total)
            .map(|mut n| {
                let coeffs: Vec<Elem> = (0..self.dim())
                    .map(|_| {
                        let c = Elem((n % q) as u32);
                        n /= q;
                        c
                    })
                    .collect();
                self.combine(&coeffs, f)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn charpoly_matches_determinant_expansion() {
        let f = Field::new(7, 1).unwrap();
        let m = Mat::from_ints(&f, &[&[1, 2, 3], &[0, 4, 5], &[6, 0, 2]]);
        let cp = m.charpoly(&f);
        // det(tI - M) evaluated at every t must agree with the polynomial
        for t in f.elements() {
            let tm = Mat::scalar(3, t).sub(&m, &f);
            assert_eq!(upoly::eval(&cp, t, &f), tm.det(&f));
        }
        assert_eq!(cp[3], Elem::ONE);
    }

    #[test]
    fn charpoly_over_extension_field() {
        let f = Field::new(3, 2).unwrap();
        let m = Mat::from_rows(&[
            vec![Elem(5), Elem(1), Elem(0), Elem(2)],
            vec![Elem(0), Elem(0), Elem(7), Elem(1)],
            vec![Elem(3), Elem(0), Elem(0), Elem(0)],
            vec![Elem(1), Elem(8), Elem(2), Elem(4)],
        ]);
        let cp = m.charpoly(&f);
        for t in f.elements() {
            assert_eq!(upoly::eval(&cp, t, &f), Mat::scalar(4, t).sub(&m, &f).det(&f));
        }
    }

    #[test]
    fn inverse_and_nullspace() {
        let f = Field::new(5, 1).unwrap();
        let m = Mat::from_ints(&f, &[&[1, 2], &[3, 4]]);
        let inv = m.inverse(&f).unwrap();
        assert_eq!(m.mul(&inv, &f), Mat::identity(2));
        let s = Mat::from_ints(&f, &[&[1, 2], &[2, 4]]);
        assert!(s.inverse(&f).is_none());
        let ns = s.nullspace(&f);
        assert_eq!(ns.len(), 1);
        assert!(s.mul_vec(&ns[0], &f).iter().all(|x| x.is_zero()));
    }

    #[test]
    fn subspace_intersection() {
        let f = Field::new(3, 1).unwrap();
        let e = |v: &[i64]| v.iter().map(|&x| f.from_int(x)).collect::<Vec<_>>();
        let a = Subspace::span(3, &[e(&[1, 0, 0]), e(&[0, 1, 0])], &f);
        let b = Subspace::span(3, &[e(&[0, 1, 0]), e(&[0, 0, 1])], &f);
        let i = a.intersect(&b, &f);
        assert_eq!(i.dim(), 1);
        assert!(i.contains(&e(&[0, 2, 0]), &f));
        assert_eq!(a.sum(&b, &f).dim(), 3);
    }
}
