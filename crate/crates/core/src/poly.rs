//! Sparse multivariate polynomials over a finite field, graded-lex ordered.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Elem, Embedding, Field};

/// Exponent vector. Ordered by total degree, then lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub Vec<u16>);

impl Monomial {
    pub fn one(nvars: usize) -> Monomial {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Monomial {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`; caller guarantees divisibility.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| b - a).collect())
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial in `nvars` variables. No zero coefficients are stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MPoly {
    field: Field,
    nvars: usize,
    terms: BTreeMap<Monomial, Elem>,
}

/// Serialized term `{"exps":["2","0"],"coeff":"1"}`; exponents may also be read as numbers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    #[serde(with = "decimal_exps")]
    pub exps: Vec<u16>,
    pub coeff: String,
}

mod decimal_exps {
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Exp {
        Num(u16),
        Str(String),
    }

    pub fn serialize<S: Serializer>(v: &[u16], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|x| x.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<u16>, D::Error> {
        Vec::<Exp>::deserialize(d)?
            .into_iter()
            .map(|e| match e {
                Exp::Num(n) => Ok(n),
                Exp::Str(s) => s.trim().parse().map_err(|_| D::Error::custom(format!("bad exponent {s:?}"))),
            })
            .collect()
    }
}

impl MPoly {
    pub fn zero(field: &Field, nvars: usize) -> MPoly {
        MPoly { field: field.clone(), nvars, terms: BTreeMap::new() }
    }

    pub fn constant(field: &Field, nvars: usize, c: Elem) -> MPoly {
        let mut p = MPoly::zero(field, nvars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(nvars), c);
        }
        p
    }

    pub fn one(field: &Field, nvars: usize) -> MPoly {
        MPoly::constant(field, nvars, Elem::ONE)
    }

    pub fn var(field: &Field, nvars: usize, i: usize) -> MPoly {
        let mut p = MPoly::zero(field, nvars);
        p.terms.insert(Monomial::var(nvars, i), Elem::ONE);
        p
    }

    /// Linear form `sum c_i x_i`.
    pub fn linear(field: &Field, coeffs: &[Elem]) -> MPoly {
        let n = coeffs.len();
        let mut p = MPoly::zero(field, n);
        for (i, &c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                p.terms.insert(Monomial::var(n, i), c);
            }
        }
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Elem)>>(field: &Field, nvars: usize, it: I) -> MPoly {
        let mut p = MPoly::zero(field, nvars);
        for (m, c) in it {
            assert_eq!(m.0.len(), nvars);
            p.add_term(m, c);
        }
        p
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in increasing graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Elem)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Elem {
        self.terms.get(m).copied().unwrap_or(Elem::ZERO)
    }

    /// Largest term in graded-lex order.
    pub fn leading(&self) -> Option<(&Monomial, Elem)> {
        self.terms.iter().next_back().map(|(m, c)| (m, *c))
    }

    /// Multiplies by `c * m`.
    pub fn mul_term(&self, m: &Monomial, c: Elem) -> MPoly {
        let mut out = MPoly::zero(&self.field, self.nvars);
        if c.is_zero() {
            return out;
        }
        for (t, &a) in &self.terms {
            out.terms.insert(t.mul(m), self.field.mul(a, c));
        }
        out
    }

    pub fn constant_term(&self) -> Elem {
        self.coefficient(&Monomial::one(self.nvars))
    }

    pub fn add_term(&mut self, m: Monomial, c: Elem) {
        if c.is_zero() {
            return;
        }
        let f = &self.field;
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = f.add(*o.get(), c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(|m| m.degree())
    }

    pub fn is_homogeneous(&self, d: u32) -> bool {
        self.terms.keys().all(|m| m.degree() == d)
    }

    fn check(&self, other: &MPoly) -> Result<()> {
        if self.nvars != other.nvars || self.field != other.field {
            return Err(Error::VariableMismatch(format!(
                "{} vars over {} vs {} vars over {}",
                self.nvars, self.field, other.nvars, other.field
            )));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &MPoly) -> Result<MPoly> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, &c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &MPoly) -> Result<MPoly> {
        self.check(other)?;
        let f = &self.field;
        let mut out = MPoly::zero(f, self.nvars);
        for (m1, &c1) in &self.terms {
            for (m2, &c2) in &other.terms {
                out.add_term(m1.mul(m2), f.mul(c1, c2));
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        self.checked_add(other).expect("polynomial ring mismatch")
    }

    pub fn add_assign(&mut self, other: &MPoly) {
        assert_eq!(self.nvars, other.nvars, "polynomial ring mismatch");
        for (m, &c) in &other.terms {
            self.add_term(m.clone(), c);
        }
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        self.checked_mul(other).expect("polynomial ring mismatch")
    }

    pub fn neg(&self) -> MPoly {
        let f = &self.field;
        MPoly {
            field: f.clone(),
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, &c)| (m.clone(), f.neg(c))).collect(),
        }
    }

    pub fn scale(&self, c: Elem) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(&self.field, self.nvars);
        }
        let f = &self.field;
        MPoly {
            field: f.clone(),
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, &x)| (m.clone(), f.mul(x, c))).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> MPoly {
        let mut r = MPoly::one(&self.field, self.nvars);
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    pub fn eval(&self, point: &[Elem]) -> Elem {
        assert_eq!(point.len(), self.nvars);
        let f = &self.field;
        f.sum(self.terms.iter().map(|(m, &c)| {
            m.0.iter()
                .zip(point)
                .fold(c, |acc, (&e, &x)| if e == 0 { acc } else { f.mul(acc, f.pow(x, e as u64)) })
        }))
    }

    /// Substitutes `x_i <- images[i]`; all images must live in one common ring.
    pub fn substitute(&self, images: &[MPoly]) -> Result<MPoly> {
        if images.len() != self.nvars {
            return Err(Error::VariableMismatch(format!(
                "{} substitutions for {} variables",
                images.len(),
                self.nvars
            )));
        }
        let Some(first) = images.first() else {
            return Ok(self.clone());
        };
        let target_n = first.nvars;
        for im in images {
            if im.nvars != target_n || im.field != self.field {
                return Err(Error::VariableMismatch("substitution images in different rings".into()));
            }
        }
        let mut powers: Vec<Vec<MPoly>> = images.iter().map(|im| vec![MPoly::one(&self.field, target_n), im.clone()]).collect();
        let mut out = MPoly::zero(&self.field, target_n);
        for (m, &c) in &self.terms {
            let mut t = MPoly::constant(&self.field, target_n, c);
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap().mul(&images[i]);
                    powers[i].push(next);
                }
                t = t.mul(&powers[i][e as usize]);
                if t.is_zero() {
                    break;
                }
            }
            out.add_assign(&t);
        }
        Ok(out)
    }

    /// Coefficient of `x_var^power` viewed as a polynomial in the remaining variables
    /// (the variable keeps its slot with exponent 0).
    pub fn coefficient_of_var(&self, var: usize, power: u16) -> MPoly {
        let mut out = MPoly::zero(&self.field, self.nvars);
        for (m, &c) in &self.terms {
            if m.0[var] == power {
                let mut e = m.clone();
                e.0[var] = 0;
                out.terms.insert(e, c);
            }
        }
        out
    }

    pub fn degree_in(&self, var: usize) -> u16 {
        self.terms.keys().map(|m| m.0[var]).max().unwrap_or(0)
    }

    /// Re-embeds into a ring with `nvars` variables, moving variable `i` to slot `offset + i`.
    pub fn shift(&self, nvars: usize, offset: usize) -> MPoly {
        assert!(offset + self.nvars <= nvars);
        let terms = self
            .terms
            .iter()
            .map(|(m, &c)| {
                let mut e = vec![0u16; nvars];
                e[offset..offset + self.nvars].copy_from_slice(&m.0);
                (Monomial(e), c)
            })
            .collect();
        MPoly { field: self.field.clone(), nvars, terms }
    }

    /// Drops trailing variables, which must not occur.
    pub fn truncate(&self, nvars: usize) -> MPoly {
        assert!(nvars <= self.nvars);
        let terms = self
            .terms
            .iter()
            .map(|(m, &c)| {
                assert!(m.0[nvars..].iter().all(|&e| e == 0), "truncated variable occurs");
                (Monomial(m.0[..nvars].to_vec()), c)
            })
            .collect();
        MPoly { field: self.field.clone(), nvars, terms }
    }

    /// Base change along a field embedding.
    pub fn embed(&self, e: &Embedding) -> MPoly {
        MPoly {
            field: e.target().clone(),
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, &c)| (m.clone(), e.apply(c))).collect(),
        }
    }

    /// Terms in decreasing graded-lex order, coefficients as decimal strings.
    pub fn to_json_terms(&self) -> Vec<TermJson> {
        self.terms
            .iter()
            .rev()
            .map(|(m, c)| TermJson { exps: m.0.clone(), coeff: c.0.to_string() })
            .collect()
    }

    pub fn from_json_terms(field: &Field, nvars: usize, terms: &[TermJson]) -> Result<MPoly> {
        let mut p = MPoly::zero(field, nvars);
        for t in terms {
            if t.exps.len() != nvars {
                return Err(Error::Schema(format!("term has {} exponents, expected {nvars}", t.exps.len())));
            }
            p.add_term(Monomial(t.exps.clone()), field.parse_elem(&t.coeff)?);
        }
        Ok(p)
    }

    pub fn display_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (m, c) in self.terms.iter().rev() {
            let mut s = String::new();
            let mono: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    let n = names.get(i).cloned().unwrap_or_else(|| format!("x{i}"));
                    if e == 1 {
                        n
                    } else {
                        format!("{n}^{e}")
                    }
                })
                .collect();
            if mono.is_empty() || c.0 != 1 {
                s.push_str(&c.0.to_string());
                if !mono.is_empty() {
                    s.push('*');
                }
            }
            s.push_str(&mono.join("*"));
            parts.push(s);
        }
        parts.join(" + ")
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(&[]))
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(&[]))
    }
}

/// Determinant of a square matrix of polynomials, by dynamic programming over column subsets.
pub fn det(m: &[Vec<MPoly>], field: &Field, nvars: usize) -> MPoly {
    let d = m.len();
    let mut dp: Vec<Option<MPoly>> = vec![None; 1 << d];
    dp[0] = Some(MPoly::one(field, nvars));
    for mask in 0..(1usize << d) {
        let Some(cur) = dp[mask].take() else { continue };
        if mask == (1 << d) - 1 {
            dp[mask] = Some(cur);
            break;
        }
        let r = mask.count_ones() as usize;
        for c in 0..d {
            if mask & (1 << c) != 0 || m[r][c].is_zero() {
                continue;
            }
            let above = (mask >> (c + 1)).count_ones();
            let mut t = cur.mul(&m[r][c]);
            if above % 2 == 1 {
                t = t.neg();
            }
            match &mut dp[mask | (1 << c)] {
                Some(acc) => acc.add_assign(&t),
                slot => *slot = Some(t),
            }
        }
    }
    dp[(1 << d) - 1].take().unwrap_or_else(|| MPoly::zero(field, nvars))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f(p: u32) -> Field {
        Field::new(p, 1).unwrap()
    }

    #[test]
    fn evaluation_and_coefficients() {
        let f7 = f(7);
        let t = MPoly::var(&f7, 1, 0);
        let p = t.mul(&t).sub(&MPoly::one(&f7, 1));
        assert_eq!(p.eval(&[Elem(2)]), Elem(3));
        let q = t.mul(&t).sub(&t.scale(f7.from_int(3))).add(&MPoly::constant(&f7, 1, Elem(2)));
        assert_eq!(q.coefficient(&Monomial(vec![1])), f7.from_int(-3));
    }

    #[test]
    fn substitution_expands_square() {
        let f5 = f(5);
        let t = MPoly::var(&f5, 1, 0);
        let sq = t.mul(&t);
        let u = MPoly::var(&f5, 2, 0);
        let v = MPoly::var(&f5, 2, 1);
        let out = sq.substitute(&[u.add(&v)]).unwrap();
        // hand expansion: u^2 + 2uv + v^2
        let expected = MPoly::from_terms(
            &f5,
            2,
            [(Monomial(vec![2, 0]), Elem(1)), (Monomial(vec![1, 1]), Elem(2)), (Monomial(vec![0, 2]), Elem(1))],
        );
        assert_eq!(out, expected);
    }

    #[test]
    fn mismatch_errors() {
        let f5 = f(5);
        let a = MPoly::var(&f5, 1, 0);
        let b = MPoly::var(&f5, 2, 0);
        assert!(matches!(a.checked_add(&b), Err(Error::VariableMismatch(_))));
        assert!(matches!(a.substitute(&[b.clone(), b]), Err(Error::VariableMismatch(_))));
    }

    #[test]
    fn determinant_of_generic_matrix() {
        let f5 = f(5);
        let v = |i| MPoly::var(&f5, 4, i);
        let m = vec![vec![v(0), v(1)], vec![v(2), v(3)]];
        assert_eq!(det(&m, &f5, 4), v(0).mul(&v(3)).sub(&v(1).mul(&v(2))));
        let f7 = f(7);
        let num = crate::linalg::Mat::from_ints(&f7, &[&[1, 2, 3], &[0, 4, 5], &[6, 0, 2]]);
        let pm: Vec<Vec<MPoly>> = (0..3).map(|i| (0..3).map(|j| MPoly::constant(&f7, 0, num.get(i, j))).collect()).collect();
        assert_eq!(det(&pm, &f7, 0).constant_term(), num.det(&f7));
    }

    #[test]
    fn graded_lex_order() {
        let a = Monomial(vec![0, 2]);
        let b = Monomial(vec![1, 0]);
        let c = Monomial(vec![1, 1]);
        assert!(b < a && a < c);
        assert!(Monomial(vec![2, 0]) > Monomial(vec![1, 1]));
    }

    fn arb_poly() -> impl Strategy<Value = MPoly> {
        prop::collection::vec((0u16..3, 0u16..3, 0u32..5), 0..6).prop_map(|ts| {
            let f5 = Field::new(5, 1).unwrap();
            MPoly::from_terms(&f5, 2, ts.into_iter().map(|(a, b, c)| (Monomial(vec![a, b]), Elem(c))))
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(a.add(&b), b.add(&a));
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert!(a.terms().all(|(_, c)| !c.is_zero()));
        }

        #[test]
        fn substitution_is_homomorphism(a in arb_poly(), b in arb_poly(), s in arb_poly(), t in arb_poly()) {
            let imgs = [s, t];
            prop_assert_eq!(a.mul(&b).substitute(&imgs).unwrap(), a.substitute(&imgs).unwrap().mul(&b.substitute(&imgs).unwrap()));
            prop_assert_eq!(a.add(&b).substitute(&imgs).unwrap(), a.substitute(&imgs).unwrap().add(&b.substitute(&imgs).unwrap()));
        }

        #[test]
        fn json_terms_round_trip(a in arb_poly()) {
            let f5 = Field::new(5, 1).unwrap();
            prop_assert_eq!(MPoly::from_json_terms(&f5, 2, &a.to_json_terms()).unwrap(), a);
        }
    }
}
