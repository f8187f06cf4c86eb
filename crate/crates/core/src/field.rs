//! Prime fields and their finite extensions.
//!
//! Elements are stored as a plain integer encoding `c_0 + c_1 p + ... + c_{k-1} p^{k-1}`
//! of their coordinates in the power basis of the field's modulus. All arithmetic
//! goes through a shared [`Field`] handle which carries the log/antilog tables.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, LazyLock, Mutex};

use serde::Serialize;

use crate::error::{Error, Result};

/// Default bound on the field size `p^k`.
pub const DEFAULT_SIZE_CAP: u64 = 1 << 16;

/// A field element in integer encoding. Meaningless without its [`Field`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

struct FieldInner {
    p: u32,
    k: u32,
    q: u32,
    /// Monic modulus, low degree first, length `k + 1`.
    modulus: Vec<u32>,
    /// `exp[i] = g^i`, doubled so that log sums need no reduction.
    exp: Vec<u32>,
    log: Vec<u32>,
    /// Zech logarithms `log(1 + g^n)`, `u32::MAX` where `1 + g^n = 0`. Empty for prime fields.
    zech: Vec<u32>,
    neg: Vec<u32>,
}

/// Handle to a finite field `F_{p^k}`. Cheap to clone; equal `(p, k)` give the same field.
#[derive(Clone)]
pub struct Field(Arc<FieldInner>);

/// The serialized field specification `{"p":"7","k":"1"}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FieldSpec {
    #[serde(serialize_with = "decimal")]
    pub p: u32,
    #[serde(serialize_with = "decimal")]
    pub k: u32,
}

fn decimal<S: serde::Serializer>(x: &u32, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(x)
}

static REGISTRY: LazyLock<Mutex<HashMap<(u32, u32), Field>>> = LazyLock::new(|| Mutex::new(HashMap::new()));

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

// --- dense univariate helpers over F_p with u32 coefficients (low degree first) ---

fn trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_rem_p(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = trim(a.to_vec());
    let m = trim(m.to_vec());
    let dm = m.len() - 1;
    let lead_inv = pow_mod(m[dm] as u64, p as u64 - 2, p as u64);
    while r.len() > dm && !r.is_empty() {
        let shift = r.len() - 1 - dm;
        let c = (*r.last().unwrap() as u64 * lead_inv) % p as u64;
        for (i, &mi) in m.iter().enumerate() {
            let v = (r[shift + i] as u64 + (p as u64 - c) * mi as u64) % p as u64;
            r[shift + i] = v as u32;
        }
        r = trim(r);
    }
    r
}

fn poly_mulmod_p(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    poly_rem_p(&prod.into_iter().map(|v| v as u32).collect::<Vec<_>>(), m, p)
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

fn digits(mut n: u32, p: u32, k: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(k as usize);
    for _ in 0..k {
        out.push(n % p);
        n /= p;
    }
    out
}

fn undigits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0u32, |acc, &c| acc * p + c)
}

/// Monic irreducibility over F_p by trial division against all monic polynomials of degree <= k/2.
fn is_irreducible_p(f: &[u32], p: u32) -> bool {
    let k = f.len() - 1;
    for deg in 1..=k / 2 {
        let count = (p as u64).pow(deg as u32);
        for n in 0..count {
            let mut g = digits(n as u32, p, deg as u32);
            g.push(1);
            if poly_rem_p(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// First monic irreducible of degree `k`, ordering candidates by their lower coefficients
/// with higher-degree coefficients more significant.
fn first_irreducible(p: u32, k: u32) -> Vec<u32> {
    if k == 1 {
        return vec![0, 1];
    }
    let count = (p as u64).pow(k);
    for n in 0..count {
        let mut f = digits(n as u32, p, k);
        f.push(1);
        if f[0] != 0 && is_irreducible_p(&f, p) {
            return f;
        }
    }
    unreachable!("an irreducible polynomial of every degree exists")
}

impl Field {
    /// Builds (or fetches) `F_{p^k}` with the default size cap.
    pub fn new(p: u32, k: u32) -> Result<Field> {
        Self::with_cap(p, k, DEFAULT_SIZE_CAP)
    }

    pub fn prime(p: u32) -> Result<Field> {
        Self::new(p, 1)
    }

    pub fn with_cap(p: u32, k: u32, cap: u64) -> Result<Field> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if k == 0 {
            return Err(Error::Schema("extension degree must be at least 1".into()));
        }
        let size = (p as u64).checked_pow(k).unwrap_or(u64::MAX);
        if size > cap || size > u32::MAX as u64 {
            return Err(Error::SizeCapExceeded { size, cap });
        }
        let mut reg = REGISTRY.lock().unwrap();
        if let Some(f) = reg.get(&(p, k)) {
            return Ok(f.clone());
        }
        let f = Field(Arc::new(Self::build(p, k)));
        reg.insert((p, k), f.clone());
        Ok(f)
    }

    pub fn from_spec(spec: FieldSpec) -> Result<Field> {
        Self::new(spec.p, spec.k)
    }

    fn build(p: u32, k: u32) -> FieldInner {
        let q = p.pow(k);
        let modulus = first_irreducible(p, k);
        let mul_slow = |a: u32, b: u32| -> u32 {
            let r = poly_mulmod_p(&trim(digits(a, p, k)), &trim(digits(b, p, k)), &modulus, p);
            let mut d = r;
            d.resize(k as usize, 0);
            undigits(&d, p)
        };
        let order = (q - 1) as u64;
        let factors = prime_factors(order);
        let pow_slow = |g: u32, mut e: u64| -> u32 {
            let mut r = 1u32;
            let mut b = g;
            while e > 0 {
                if e & 1 == 1 {
                    r = mul_slow(r, b);
                }
                b = mul_slow(b, b);
                e >>= 1;
            }
            r
        };
        let gen = (1..q)
            .find(|&g| factors.iter().all(|&r| pow_slow(g, order / r) != 1) || q == 2)
            .expect("multiplicative group is cyclic");
        let mut exp = vec![0u32; 2 * (q as usize - 1).max(1)];
        let mut log = vec![0u32; q as usize];
        let mut x = 1u32;
        for i in 0..(q - 1) as usize {
            exp[i] = x;
            log[x as usize] = i as u32;
            x = mul_slow(x, gen);
        }
        for i in (q - 1) as usize..exp.len() {
            exp[i] = exp[i - (q - 1) as usize];
        }
        let neg: Vec<u32> = (0..q)
            .map(|a| {
                let d: Vec<u32> = digits(a, p, k).iter().map(|&c| (p - c) % p).collect();
                undigits(&d, p)
            })
            .collect();
        let zech = if k == 1 {
            Vec::new()
        } else {
            (0..(q - 1) as usize)
                .map(|n| {
                    let mut d = digits(exp[n], p, k);
                    d[0] = (d[0] + 1) % p;
                    let s = undigits(&d, p);
                    if s == 0 {
                        u32::MAX
                    } else {
                        log[s as usize]
                    }
                })
                .collect()
        };
        FieldInner { p, k, q, modulus, exp, log, zech, neg }
    }

    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.0.p
    }
    #[inline]
    pub fn degree(&self) -> u32 {
        self.0.k
    }
    #[inline]
    pub fn size(&self) -> u32 {
        self.0.q
    }
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }
    pub fn spec(&self) -> FieldSpec {
        FieldSpec { p: self.0.p, k: self.0.k }
    }

    /// All elements in encoding order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.0.q).map(Elem)
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = Elem> {
        (1..self.0.q).map(Elem)
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> Elem {
        Elem(n.rem_euclid(self.0.p as i64) as u32)
    }

    pub fn from_coeffs(&self, c: &[u32]) -> Result<Elem> {
        if c.len() > self.0.k as usize || c.iter().any(|&x| x >= self.0.p) {
            return Err(Error::Schema(format!("bad coefficient vector {c:?}")));
        }
        Ok(Elem(undigits(c, self.0.p)))
    }

    pub fn coeffs(&self, a: Elem) -> Vec<u32> {
        digits(a.0, self.0.p, self.0.k)
    }

    /// Parses the decimal integer encoding used in serialized output.
    pub fn parse_elem(&self, s: &str) -> Result<Elem> {
        let s = s.trim();
        let v: i64 = s.parse().map_err(|_| Error::Schema(format!("bad field element {s:?}")))?;
        if self.0.k == 1 {
            return Ok(self.from_int(v));
        }
        if v < 0 || v >= self.0.q as i64 {
            return Err(Error::Schema(format!("field element {v} out of range for F_{}", self.0.q)));
        }
        Ok(Elem(v as u32))
    }

    /// The fixed generator of the multiplicative group used for the log tables.
    pub fn generator(&self) -> Elem {
        Elem(self.0.exp[if self.0.q == 2 { 0 } else { 1 }])
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let f = &*self.0;
        if f.k == 1 {
            let s = a.0 + b.0;
            return Elem(if s >= f.p { s - f.p } else { s });
        }
        if a.0 == 0 {
            return b;
        }
        if b.0 == 0 {
            return a;
        }
        let la = f.log[a.0 as usize];
        let lb = f.log[b.0 as usize];
        let n = f.q - 1;
        let d = if lb >= la { lb - la } else { lb + n - la };
        let z = f.zech[d as usize];
        if z == u32::MAX {
            Elem(0)
        } else {
            Elem(f.exp[(la + z) as usize])
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        Elem(self.0.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        let f = &*self.0;
        if a.0 == 0 || b.0 == 0 {
            return Elem(0);
        }
        if f.k == 1 {
            return Elem(((a.0 as u64 * b.0 as u64) % f.p as u64) as u32);
        }
        Elem(f.exp[(f.log[a.0 as usize] + f.log[b.0 as usize]) as usize])
    }

    /// Multiplicative inverse; panics on zero.
    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        assert!(!a.is_zero(), "inverse of zero");
        let f = &*self.0;
        let n = f.q - 1;
        let l = f.log[a.0 as usize];
        Elem(f.exp[((n - l) % n) as usize])
    }

    #[inline]
    pub fn div(&self, a: Elem, b: Elem) -> Elem {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return Elem::ONE;
        }
        if a.is_zero() {
            return Elem::ZERO;
        }
        let f = &*self.0;
        let n = (f.q - 1) as u64;
        let l = f.log[a.0 as usize] as u64;
        Elem(f.exp[((l * (e % n)) % n) as usize])
    }

    /// `x -> x^p`.
    pub fn frobenius(&self, a: Elem) -> Elem {
        self.pow(a, self.0.p as u64)
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: Elem) -> u64 {
        let n = (self.0.q - 1) as u64;
        let l = self.0.log[a.0 as usize] as u64;
        n / gcd(n, l)
    }

    pub fn is_prime_subfield(&self, a: Elem) -> bool {
        a.0 < self.0.p
    }

    pub fn sum<I: IntoIterator<Item = Elem>>(&self, it: I) -> Elem {
        it.into_iter().fold(Elem::ZERO, |acc, x| self.add(acc, x))
    }

    /// The canonical embedding into `target`, which must be `F_{p^{k'}}` with `k | k'`.
    pub fn embedding(&self, target: &Field) -> Result<Embedding> {
        static CACHE: LazyLock<Mutex<HashMap<(u32, u32, u32), Arc<Vec<Elem>>>>> =
            LazyLock::new(|| Mutex::new(HashMap::new()));
        if self.characteristic() != target.characteristic() || !target.degree().is_multiple_of(self.degree()) {
            return Err(Error::NoEmbedding {
                from: self.spec(),
                to: target.spec(),
            });
        }
        let key = (self.0.p, self.0.k, target.0.k);
        if let Some(t) = CACHE.lock().unwrap().get(&key) {
            return Ok(Embedding { target: target.clone(), table: t.clone() });
        }
        // prime field constants keep their encoding in every extension
        let table: Vec<Elem> = if self == target || self.degree() == 1 {
            self.elements().collect()
        } else {
            // smallest root of our modulus in the target
            let m: Vec<Elem> = self.0.modulus.iter().map(|&c| target.from_int(c as i64)).collect();
            let root = target
                .elements()
                .find(|&a| {
                    let v = m.iter().rev().fold(Elem::ZERO, |acc, &c| target.add(target.mul(acc, a), c));
                    v.is_zero()
                })
                .expect("an irreducible of degree k splits over every extension of degree divisible by k");
            self.elements()
                .map(|x| {
                    let c = self.coeffs(x);
                    c.iter()
                        .rev()
                        .fold(Elem::ZERO, |acc, &ci| target.add(target.mul(acc, root), target.from_int(ci as i64)))
                })
                .collect()
        };
        let table = Arc::new(table);
        CACHE.lock().unwrap().insert(key, table.clone());
        Ok(Embedding { target: target.clone(), table })
    }

    /// The extension of the same characteristic whose degree is `self.degree() * factor`.
    pub fn extension(&self, factor: u32) -> Result<Field> {
        Field::new(self.0.p, self.0.k * factor)
    }

    pub fn elem(&self, a: Elem) -> FFElem {
        FFElem { field: self.clone(), value: a }
    }

    pub fn fmt_elem(&self, a: Elem) -> String {
        a.0.to_string()
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.0.p == other.0.p && self.0.k == other.0.k
    }
}
impl Eq for Field {}

impl std::hash::Hash for Field {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        (self.0.p, self.0.k).hash(state);
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.0.q)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.k == 1 {
            write!(f, "F_{}", self.0.p)
        } else {
            write!(f, "F_{}^{}", self.0.p, self.0.k)
        }
    }
}

/// Precomputed embedding table `F_{p^k} -> F_{p^{k'}}`.
#[derive(Clone)]
pub struct Embedding {
    target: Field,
    table: Arc<Vec<Elem>>,
}

impl Embedding {
    #[inline]
    pub fn apply(&self, a: Elem) -> Elem {
        self.table[a.0 as usize]
    }
    pub fn target(&self) -> &Field {
        &self.target
    }
}

/// A field element bundled with its field, for convenience at API boundaries.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FFElem {
    pub field: Field,
    pub value: Elem,
}

impl FFElem {
    pub fn zero(field: &Field) -> Self {
        field.elem(Elem::ZERO)
    }
    pub fn one(field: &Field) -> Self {
        field.elem(Elem::ONE)
    }
    pub fn coeffs(&self) -> Vec<u32> {
        self.field.coeffs(self.value)
    }
    pub fn inv(&self) -> Option<FFElem> {
        (!self.value.is_zero()).then(|| self.field.elem(self.field.inv(self.value)))
    }
    pub fn pow(&self, e: u64) -> FFElem {
        self.field.elem(self.field.pow(self.value, e))
    }
    pub fn frobenius(&self) -> FFElem {
        self.field.elem(self.field.frobenius(self.value))
    }
    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }
}

/// Embeds `x` into `target` along the canonical embedding.
pub fn embed(x: &FFElem, target: &Field) -> Result<FFElem> {
    let e = x.field.embedding(target)?;
    Ok(target.elem(e.apply(x.value)))
}

impl fmt::Debug for FFElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}∈{:?}", self.value.0, self.field)
    }
}

impl fmt::Display for FFElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value.0)
    }
}

macro_rules! ffelem_binop {
    ($tr:ident, $m:ident) => {
        impl $tr for FFElem {
            type Output = FFElem;
            fn $m(self, rhs: FFElem) -> FFElem {
                assert_eq!(self.field, rhs.field, "mixed-field arithmetic");
                let v = self.field.$m(self.value, rhs.value);
                FFElem { field: self.field, value: v }
            }
        }
        impl<'a> $tr<&'a FFElem> for &'a FFElem {
            type Output = FFElem;
            fn $m(self, rhs: &FFElem) -> FFElem {
                assert_eq!(self.field, rhs.field, "mixed-field arithmetic");
                self.field.elem(self.field.$m(self.value, rhs.value))
            }
        }
    };
}
ffelem_binop!(Add, add);
ffelem_binop!(Sub, sub);
ffelem_binop!(Mul, mul);

impl Neg for FFElem {
    type Output = FFElem;
    fn neg(self) -> FFElem {
        let v = self.field.neg(self.value);
        FFElem { field: self.field, value: v }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_fields() -> Vec<Field> {
        let mut out = Vec::new();
        for p in [2u32, 3, 5, 7] {
            for k in 1..=6 {
                if (p as u64).pow(k) <= 64 {
                    out.push(Field::new(p, k).unwrap());
                }
            }
        }
        out
    }

    #[test]
    fn make_field_examples() {
        let f7 = Field::new(7, 1).unwrap();
        assert_eq!(f7.modulus(), &[0, 1]);
        let f4 = Field::new(2, 2).unwrap();
        assert_eq!(f4.modulus(), &[1, 1, 1]);
        assert!(matches!(Field::new(4, 1), Err(Error::NotPrime(4))));
        assert!(matches!(Field::new(2, 17), Err(Error::SizeCapExceeded { .. })));
        // idempotent / deterministic
        assert_eq!(Field::new(3, 2).unwrap().modulus(), Field::new(3, 2).unwrap().modulus());
        assert_eq!(Field::new(3, 2).unwrap().modulus(), &[1, 0, 1]);
    }

    #[test]
    fn only_irreducible_quadratic_over_f2() {
        // exhaustive factor search oracle
        let irreducible: Vec<[u32; 3]> = (0..4u32)
            .map(|n| [n & 1, n >> 1, 1])
            .filter(|f| (0..2u32).all(|x| (f[0] + f[1] * x + x * x) % 2 != 0))
            .collect();
        assert_eq!(irreducible, vec![[1, 1, 1]]);
    }

    #[test]
    fn exhaustive_field_axioms() {
        for f in small_fields() {
            let els: Vec<Elem> = f.elements().collect();
            for &a in &els {
                assert_eq!(f.add(a, f.neg(a)), Elem::ZERO);
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a)), Elem::ONE, "{f:?}");
                }
                for &b in &els {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for &c in &els {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn frobenius_is_automorphism_with_prime_fixed_field() {
        for f in small_fields() {
            let k = f.degree();
            for a in f.elements() {
                let mut x = a;
                for _ in 0..k {
                    x = f.frobenius(x);
                }
                assert_eq!(x, a);
                assert_eq!(f.frobenius(a) == a, f.is_prime_subfield(a), "{f:?} {a:?}");
                for b in f.elements() {
                    assert_eq!(f.frobenius(f.add(a, b)), f.add(f.frobenius(a), f.frobenius(b)));
                }
            }
        }
    }

    #[test]
    fn embed_examples() {
        let f7 = Field::new(7, 1).unwrap();
        assert_eq!(embed(&f7.elem(Elem(3)), &f7).unwrap().value, Elem(3));
        let f2 = Field::new(2, 1).unwrap();
        let f4 = Field::new(2, 2).unwrap();
        assert_eq!(embed(&FFElem::one(&f2), &f4).unwrap().value, Elem::ONE);
        let f3 = Field::new(3, 1).unwrap();
        let f9 = Field::new(3, 2).unwrap();
        for a in f3.elements() {
            for b in f3.elements() {
                let s = embed(&f3.elem(f3.add(a, b)), &f9).unwrap();
                let t = embed(&f3.elem(a), &f9).unwrap() + embed(&f3.elem(b), &f9).unwrap();
                assert_eq!(s, t);
            }
        }
        assert!(matches!(f9.embedding(&Field::new(3, 3).unwrap()), Err(Error::NoEmbedding { .. })));
        assert!(matches!(f9.embedding(&Field::new(5, 2).unwrap()), Err(Error::NoEmbedding { .. })));
    }

    #[test]
    fn embeddings_are_injective_homomorphisms_and_compose() {
        for p in [2u32, 3] {
            let tower: Vec<Field> = [1u32, 2, 4].iter().map(|&k| Field::new(p, k).unwrap()).collect();
            for i in 0..3 {
                for j in i..3 {
                    let e = tower[i].embedding(&tower[j]).unwrap();
                    let (s, t) = (&tower[i], &tower[j]);
                    let mut seen = std::collections::HashSet::new();
                    for a in s.elements() {
                        assert!(seen.insert(e.apply(a)));
                        for b in s.elements() {
                            assert_eq!(e.apply(s.add(a, b)), t.add(e.apply(a), e.apply(b)));
                            assert_eq!(e.apply(s.mul(a, b)), t.mul(e.apply(a), e.apply(b)));
                        }
                    }
                    for l in j..3 {
                        let e2 = tower[j].embedding(&tower[l]).unwrap();
                        let direct = tower[i].embedding(&tower[l]).unwrap();
                        for a in s.elements() {
                            assert_eq!(e2.apply(e.apply(a)), direct.apply(a));
                        }
                    }
                }
            }
        }
    }
}
