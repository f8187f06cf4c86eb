//! Finitely presented algebras and their finite-dimensional quotients.

use std::collections::{BTreeMap, HashMap};

use crate::algebra::FinAlgebra;
use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::linalg::Subspace;

pub const DEFAULT_DIM_CAP: usize = 256;

// bound on the truncated word space before giving up
const MAX_TRUNCATION_WORDS: usize = 1 << 16;

/// A word in the generators, as generator indices.
pub type Word = Vec<usize>;

/// Noncommutative polynomial: words with nonzero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct NcPoly {
    pub terms: BTreeMap<Word, Elem>,
}

impl NcPoly {
    fn constant(c: Elem) -> NcPoly {
        let mut p = NcPoly::default();
        if !c.is_zero() {
            p.terms.insert(Vec::new(), c);
        }
        p
    }

    fn word(w: Word) -> NcPoly {
        NcPoly { terms: BTreeMap::from([(w, Elem::ONE)]) }
    }

    fn add(&self, other: &NcPoly, f: &Field) -> NcPoly {
        let mut out = self.clone();
        for (w, &c) in &other.terms {
            let v = f.add(out.terms.get(w).copied().unwrap_or(Elem::ZERO), c);
            if v.is_zero() {
                out.terms.remove(w);
            } else {
                out.terms.insert(w.clone(), v);
            }
        }
        out
    }

    fn neg(&self, f: &Field) -> NcPoly {
        NcPoly { terms: self.terms.iter().map(|(w, &c)| (w.clone(), f.neg(c))).collect() }
    }

    fn mul(&self, other: &NcPoly, f: &Field) -> NcPoly {
        let mut out = NcPoly::default();
        for (u, &a) in &self.terms {
            for (v, &b) in &other.terms {
                let mut w = u.clone();
                w.extend_from_slice(v);
                out = out.add(&NcPoly { terms: BTreeMap::from([(w, f.mul(a, b))]) }, f);
            }
        }
        out
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(|w| w.len()).max().unwrap_or(0)
    }
}

/// Generators and relations of an algebra over a field.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub field: Field,
    pub generators: Vec<String>,
    pub relations: Vec<NcPoly>,
}

impl Presentation {
    /// Parses relation strings built from integers, generator names, `+ - * ^` and parentheses.
    pub fn parse(field: &Field, generators: &[&str], relations: &[&str]) -> Result<Presentation> {
        let gens: Vec<String> = generators.iter().map(|s| s.to_string()).collect();
        let mut seen = std::collections::HashSet::new();
        for g in &gens {
            if !is_ident(g) || !seen.insert(g.clone()) {
                return Err(Error::Parse(format!("bad or duplicate generator name {g:?}")));
            }
        }
        let rels = relations
            .iter()
            .map(|r| Parser::new(r, &gens, field).parse_all())
            .collect::<Result<Vec<_>>>()?;
        Ok(Presentation { field: field.clone(), generators: gens, relations: rels })
    }
}

fn is_ident(s: &str) -> bool {
    let mut c = s.chars();
    matches!(c.next(), Some(ch) if ch.is_ascii_alphabetic() || ch == '_') && c.all(|ch| ch.is_ascii_alphanumeric() || ch == '_')
}

struct Parser<'a> {
    src: Vec<char>,
    pos: usize,
    gens: &'a [String],
    field: &'a Field,
}

impl<'a> Parser<'a> {
    fn new(s: &str, gens: &'a [String], field: &'a Field) -> Self {
        Parser { src: s.chars().filter(|c| !c.is_whitespace()).collect(), pos: 0, gens, field }
    }

    fn err<T>(&self, msg: &str) -> Result<T> {
        let s: String = self.src.iter().collect();
        Err(Error::Parse(format!("{msg} at position {} in {s:?}", self.pos)))
    }

    fn peek(&self) -> Option<char> {
        self.src.get(self.pos).copied()
    }

    fn parse_all(mut self) -> Result<NcPoly> {
        if self.src.is_empty() {
            return self.err("empty relation");
        }
        let p = self.expr()?;
        if self.pos != self.src.len() {
            return self.err("unexpected character");
        }
        Ok(p)
    }

    fn expr(&mut self) -> Result<NcPoly> {
        let f = self.field;
        let mut acc = if self.peek() == Some('-') {
            self.pos += 1;
            self.term()?.neg(f)
        } else {
            if self.peek() == Some('+') {
                self.pos += 1;
            }
            self.term()?
        };
        while let Some(c) = self.peek() {
            match c {
                '+' => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?, f);
                }
                '-' => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?.neg(f), f);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<NcPoly> {
        let mut acc = self.factor()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            acc = acc.mul(&self.factor()?, self.field);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<NcPoly> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            let e = self.integer()?;
            let e: u32 = e.try_into().map_err(|_| Error::Parse("exponent too large".into()))?;
            let mut r = NcPoly::constant(Elem::ONE);
            for _ in 0..e {
                r = r.mul(&base, self.field);
            }
            return Ok(r);
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<u64> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected integer");
        }
        let s: String = self.src[start..self.pos].iter().collect();
        s.parse().map_err(|_| Error::Parse(format!("integer {s} out of range")))
    }

    fn atom(&mut self) -> Result<NcPoly> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(')') {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(NcPoly::constant(self.field.from_int((n % self.field.characteristic() as u64) as i64)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                let start = self.pos;
                while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '_') {
                    self.pos += 1;
                }
                let name: String = self.src[start..self.pos].iter().collect();
                match self.gens.iter().position(|g| *g == name) {
                    Some(i) => Ok(NcPoly::word(vec![i])),
                    None => Err(Error::Parse(format!("unknown generator {name:?}"))),
                }
            }
            _ => self.err("expected a term"),
        }
    }
}

fn words_up_to(ngens: usize, len: usize) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::new();
        for w in &layer {
            for g in 0..ngens {
                let mut v: Word = w.clone();
                v.push(g);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

fn word_label(gens: &[String], w: &[usize]) -> String {
    if w.is_empty() {
        return "1".into();
    }
    let mut parts = Vec::new();
    let mut i = 0;
    while i < w.len() {
        let mut j = i;
        while j < w.len() && w[j] == w[i] {
            j += 1;
        }
        parts.push(if j - i == 1 { gens[w[i]].clone() } else { format!("{}^{}", gens[w[i]], j - i) });
        i = j;
    }
    parts.join("*")
}

/// Computes `F<gens>/(relations)` when it has dimension at most `cap`.
///
/// At truncation level `L` the relation ideal is approximated by the span of all
/// `u r v` of degree `<= L`, with leading terms taken in length-then-lex order.
/// Once every word of length `m..=2(m-1)` is a leading term, the normal words
/// of length `< m` span the quotient; the candidate multiplication
/// is then verified (associativity and relations) before it is accepted.
pub fn saturate(p: &Presentation, cap: usize) -> Result<FinAlgebra> {
    let f = &p.field;
    let g = p.generators.len();
    let mut level = p.relations.iter().map(|r| r.degree()).max().unwrap_or(0).max(1);
    loop {
        if (g as f64).powi(level as i32) > MAX_TRUNCATION_WORDS as f64 {
            return Err(Error::DimensionCapExceeded { cap });
        }
        let words = words_up_to(g, level);
        let nw = words.len();
        // column c holds word words[nw - 1 - c], so the largest word has the smallest column
        let col: HashMap<&Word, usize> = words.iter().enumerate().map(|(i, w)| (w, nw - 1 - i)).collect();
        let mut ideal = Subspace::zero(nw);
        for r in &p.relations {
            let e = r.degree();
            if e > level {
                continue;
            }
            for u in words.iter().filter(|u| u.len() + e <= level) {
                for v in words.iter().filter(|v| u.len() + v.len() + e <= level) {
                    let mut vec = vec![Elem::ZERO; nw];
                    for (w, &c) in &r.terms {
                        let mut full = u.clone();
                        full.extend_from_slice(w);
                        full.extend_from_slice(v);
                        vec[col[&full]] = c;
                    }
                    ideal.insert(&vec, f);
                }
            }
        }
        let normal: Vec<&Word> = ideal.non_pivots().into_iter().map(|c| &words[nw - 1 - c]).collect();
        let half = normal.iter().filter(|w| 2 * w.len() <= level).count();
        if half > cap {
            return Err(Error::DimensionCapExceeded { cap });
        }
        // a gap: no normal word with length in m..=2(m-1), so products of shorter
        // normal words reduce without touching truncation artifacts near length L
        let gap = (1..=level).find(|&m| {
            let top = m.max(2 * (m - 1));
            top <= level && normal.iter().all(|w| w.len() < m || w.len() > top)
        });
        if let Some(m) = gap {
            if let Some(a) = candidate(p, &words, &col, &ideal, m)? {
                if a.dim() > cap {
                    return Err(Error::DimensionCapExceeded { cap });
                }
                return Ok(a);
            }
        }
        level += 1;
        if level > 4 * cap + 8 {
            return Err(Error::DimensionCapExceeded { cap });
        }
    }
}

fn candidate(p: &Presentation, words: &[Word], col: &HashMap<&Word, usize>, ideal: &Subspace, m: usize) -> Result<Option<FinAlgebra>> {
    let f = &p.field;
    let nw = words.len();
    let mut basis: Vec<Word> = ideal
        .non_pivots()
        .into_iter()
        .map(|c| words[nw - 1 - c].clone())
        .filter(|w| w.len() < m)
        .collect();
    basis.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    let n = basis.len();
    let pos: HashMap<usize, usize> = basis.iter().enumerate().map(|(i, w)| (col[w], i)).collect();
    let normal_form = |w: &Word| -> Vec<Elem> {
        let mut v = vec![Elem::ZERO; nw];
        v[col[w]] = Elem::ONE;
        let r = ideal.reduce(&v, f);
        let mut out = vec![Elem::ZERO; n];
        for (c, x) in r.into_iter().enumerate() {
            if !x.is_zero() {
                out[pos[&c]] = x;
            }
        }
        out
    };
    let mut table = Vec::with_capacity(n * n);
    for u in &basis {
        for v in &basis {
            let mut w = u.clone();
            w.extend_from_slice(v);
            let nf = normal_form(&w);
            table.push(nf.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, &c)| (k, c)).collect());
        }
    }
    let unit = if n == 0 { Vec::new() } else { normal_form(&Vec::new()) };
    let labels = basis.iter().map(|w| word_label(&p.generators, w)).collect();
    let a = FinAlgebra::from_sparse(f, labels, table, unit)?;
    if n == 0 {
        return Ok(Some(a));
    }
    if !a.is_associative() || !a.unit_is_identity() {
        return Ok(None);
    }
    let gen_elems: Vec<Vec<Elem>> = (0..p.generators.len()).map(|i| normal_form(&vec![i])).collect();
    for r in &p.relations {
        let mut acc = a.zero();
        for (w, &c) in &r.terms {
            let prod = w.iter().fold(a.unit().to_vec(), |x, &gi| a.mul(&x, &gen_elems[gi]));
            acc = a.add(&acc, &a.scale(c, &prod));
        }
        if acc.iter().any(|x| !x.is_zero()) {
            return Ok(None);
        }
    }
    Ok(Some(a))
}
