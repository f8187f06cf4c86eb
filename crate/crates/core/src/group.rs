//! Finite groups given by multiplication tables.

use std::collections::{HashMap, VecDeque};

use serde_json::Value;

use crate::error::{Error, Result};

/// A finite group with distinguished generators and an optional "inertia" subgroup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverses: Vec<usize>,
    generators: Vec<usize>,
    generator_names: Vec<String>,
    inertia: Option<Vec<usize>>,
    labels: Vec<String>,
    // element = parent * generator, along a breadth-first spanning tree from the identity
    tree: Vec<Option<(usize, usize)>>,
}

fn default_names(k: usize) -> Vec<String> {
    (0..k)
        .map(|i| {
            let c = (b'a' + (i % 26) as u8) as char;
            if i < 26 {
                c.to_string()
            } else {
                format!("{c}{}", i / 26)
            }
        })
        .collect()
}

fn compress_word(names: &[String], word: &[usize]) -> String {
    if word.is_empty() {
        return "1".into();
    }
    let mut parts: Vec<String> = Vec::new();
    let mut i = 0;
    while i < word.len() {
        let mut j = i;
        while j < word.len() && word[j] == word[i] {
            j += 1;
        }
        let n = &names[word[i]];
        parts.push(if j - i == 1 { n.clone() } else { format!("{n}^{}", j - i) });
        i = j;
    }
    parts.join("*")
}

impl FiniteGroup {
    /// Validates the table and builds the group. Generators must generate.
    pub fn new(table: Vec<Vec<usize>>, generators: Vec<usize>, inertia: Option<Vec<usize>>) -> Result<FiniteGroup> {
        let names = default_names(generators.len());
        FiniteGroup::with_names(table, generators, names, inertia)
    }

    pub fn with_names(
        table: Vec<Vec<usize>>,
        generators: Vec<usize>,
        generator_names: Vec<String>,
        inertia: Option<Vec<usize>>,
    ) -> Result<FiniteGroup> {
        let n = table.len();
        let bad = |m: String| Err(Error::BadGroupTable(m));
        if n == 0 {
            return bad("empty table".into());
        }
        if table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return bad("table must be square with entries in range".into());
        }
        let Some(identity) = (0..n).find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x)) else {
            return bad("no identity element".into());
        };
        let mut inverses = vec![usize::MAX; n];
        for x in 0..n {
            match (0..n).find(|&y| table[x][y] == identity && table[y][x] == identity) {
                Some(y) => inverses[x] = y,
                None => return bad(format!("element {x} has no inverse")),
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c]] {
                        return bad(format!("associativity fails at ({a},{b},{c})"));
                    }
                }
            }
        }
        if generators.iter().any(|&g| g >= n) {
            return bad("generator index out of range".into());
        }
        if generator_names.len() != generators.len() {
            return bad("one name per generator required".into());
        }
        let mut tree = vec![None; n];
        let mut seen = vec![false; n];
        seen[identity] = true;
        let mut queue = VecDeque::from([identity]);
        while let Some(x) = queue.pop_front() {
            for (gi, &s) in generators.iter().enumerate() {
                let y = table[x][s];
                if !seen[y] {
                    seen[y] = true;
                    tree[y] = Some((x, gi));
                    queue.push_back(y);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return bad("generators do not generate the group".into());
        }
        let mut g = FiniteGroup {
            table,
            identity,
            inverses,
            generators,
            generator_names,
            inertia: None,
            labels: Vec::new(),
            tree,
        };
        g.labels = (0..n).map(|x| compress_word(&g.generator_names, &g.word(x))).collect();
        if let Some(sub) = inertia {
            g.set_inertia(sub)?;
        }
        Ok(g)
    }

    pub fn set_inertia(&mut self, mut sub: Vec<usize>) -> Result<()> {
        sub.sort_unstable();
        sub.dedup();
        if sub.iter().any(|&x| x >= self.order()) || !self.is_subgroup(&sub) {
            return Err(Error::BadGroupTable("inertia is not a subgroup".into()));
        }
        self.inertia = Some(sub);
        Ok(())
    }

    /// Closure of a set of permutations under composition, `(g*h)(x) = g(h(x))`.
    /// Elements are numbered in breadth-first order from the identity.
    pub fn from_permutations(gens: &[Vec<usize>], names: &[&str]) -> Result<FiniteGroup> {
        let deg = gens.first().map(|g| g.len()).unwrap_or(0);
        let id: Vec<usize> = (0..deg).collect();
        let mut elems = vec![id.clone()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(id, 0)]);
        let mut i = 0;
        while i < elems.len() {
            for s in gens {
                let y: Vec<usize> = (0..deg).map(|x| elems[i][s[x]]).collect();
                if !index.contains_key(&y) {
                    index.insert(y.clone(), elems.len());
                    elems.push(y);
                }
            }
            i += 1;
        }
        let n = elems.len();
        let table = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| {
                        let ab: Vec<usize> = (0..deg).map(|x| elems[a][elems[b][x]]).collect();
                        index[&ab]
                    })
                    .collect()
            })
            .collect();
        let generators = gens.iter().map(|s| index[s]).collect();
        FiniteGroup::with_names(table, generators, names.iter().map(|s| s.to_string()).collect(), None)
    }

    pub fn cyclic(n: usize) -> FiniteGroup {
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        let gens = if n > 1 { vec![1] } else { vec![] };
        let names = if n > 1 { vec!["g".to_string()] } else { vec![] };
        FiniteGroup::with_names(table, gens, names, None).expect("cyclic table is a group")
    }

    /// Dihedral group of order `2n` (`n >= 3`), generated by a rotation `r` and a reflection `s`.
    pub fn dihedral(n: usize) -> FiniteGroup {
        let r: Vec<usize> = (0..n).map(|x| (x + 1) % n).collect();
        let s: Vec<usize> = (0..n).map(|x| (n - x) % n).collect();
        FiniteGroup::from_permutations(&[r, s], &["r", "s"]).expect("dihedral group")
    }

    /// Symmetric group on `n >= 2` letters, generated by a transposition and an `n`-cycle.
    pub fn symmetric(n: usize) -> FiniteGroup {
        let mut t: Vec<usize> = (0..n).collect();
        t.swap(0, 1);
        let c: Vec<usize> = (0..n).map(|x| (x + 1) % n).collect();
        FiniteGroup::from_permutations(&[t, c], &["t", "c"]).expect("symmetric group")
    }

    /// Affine maps `x -> a x + b` of `F_p` with `a` in the subgroup generated by `mult`.
    pub fn affine_line(p: usize, mult: usize) -> FiniteGroup {
        let t: Vec<usize> = (0..p).map(|x| (x + 1) % p).collect();
        let m: Vec<usize> = (0..p).map(|x| (x * mult) % p).collect();
        FiniteGroup::from_permutations(&[t, m], &["t", "m"]).expect("affine group")
    }

    /// Affine maps `v -> a v + w` of `F_p^2` with scalar `a` in the subgroup generated by `mult`.
    pub fn affine_plane(p: usize, mult: usize) -> FiniteGroup {
        let pt = |x: usize, y: usize| (x % p) * p + (y % p);
        let t1: Vec<usize> = (0..p * p).map(|v| pt(v / p + 1, v % p)).collect();
        let t2: Vec<usize> = (0..p * p).map(|v| pt(v / p, v % p + 1)).collect();
        let m: Vec<usize> = (0..p * p).map(|v| pt(v / p * mult, v % p * mult)).collect();
        FiniteGroup::from_permutations(&[t1, t2, m], &["u", "v", "m"]).expect("affine group")
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn pow(&self, a: usize, e: usize) -> usize {
        (0..e).fold(self.identity, |acc, _| self.mul(acc, a))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn generator_names(&self) -> &[String] {
        &self.generator_names
    }

    pub fn inertia(&self) -> Option<&[usize]> {
        self.inertia.as_deref()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Breadth-first spanning tree: `Some((parent, generator index))` with `x = parent * gen`.
    pub fn tree(&self) -> &[Option<(usize, usize)>] {
        &self.tree
    }

    /// Elements in breadth-first order from the identity, so parents precede children.
    pub fn bfs_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.order()).collect();
        order.sort_by_key(|&x| self.word(x).len());
        order
    }

    /// A shortest word in the generators (generator indices) equal to `x`.
    pub fn word(&self, mut x: usize) -> Vec<usize> {
        let mut w = Vec::new();
        while let Some((parent, gi)) = self.tree[x] {
            w.push(gi);
            x = parent;
        }
        w.reverse();
        w
    }

    pub fn is_subgroup(&self, sub: &[usize]) -> bool {
        if !sub.contains(&self.identity) {
            return false;
        }
        sub.iter().all(|&a| sub.iter().all(|&b| sub.contains(&self.mul(a, b))))
    }

    pub fn subgroup_generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order()];
        seen[self.identity] = true;
        let mut stack = vec![self.identity];
        while let Some(x) = stack.pop() {
            for &s in gens {
                let y = self.mul(x, s);
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        (0..self.order()).filter(|&x| seen[x]).collect()
    }

    /// A small generating set of a subgroup, chosen greedily in index order.
    pub fn subgroup_generators(&self, sub: &[usize]) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut current = vec![self.identity];
        let mut sorted = sub.to_vec();
        sorted.sort_unstable();
        for &x in &sorted {
            if !current.contains(&x) {
                gens.push(x);
                current = self.subgroup_generated(&gens);
            }
        }
        gens
    }

    /// Parses `{"order":..,"table":[[..]],"generators":[..],"inertia":[..]}`.
    /// Integers may be JSON numbers or decimal strings.
    pub fn from_json(v: &Value) -> Result<FiniteGroup> {
        let obj = v.as_object().ok_or_else(|| Error::Schema("group must be an object".into()))?;
        let table_v = obj.get("table").ok_or_else(|| Error::Schema("group.table missing".into()))?;
        let table: Vec<Vec<usize>> = as_array(table_v, "group.table")?
            .iter()
            .map(|row| as_array(row, "group.table row")?.iter().map(|x| json_usize(x, "group.table entry")).collect())
            .collect::<Result<_>>()?;
        if let Some(o) = obj.get("order") {
            let o = json_usize(o, "group.order")?;
            if o != table.len() {
                return Err(Error::BadGroupTable(format!("order {o} but table has {} rows", table.len())));
            }
        }
        let generators: Vec<usize> = match obj.get("generators") {
            Some(g) => as_array(g, "group.generators")?.iter().map(|x| json_usize(x, "generator")).collect::<Result<_>>()?,
            None => (1..table.len()).collect(),
        };
        let inertia = match obj.get("inertia") {
            Some(i) => Some(as_array(i, "group.inertia")?.iter().map(|x| json_usize(x, "inertia element")).collect::<Result<_>>()?),
            None => None,
        };
        let names = match obj.get("generator_names") {
            Some(n) => as_array(n, "group.generator_names")?
                .iter()
                .map(|x| x.as_str().map(str::to_string).ok_or_else(|| Error::Schema("generator name must be a string".into())))
                .collect::<Result<_>>()?,
            None => default_names(generators.len()),
        };
        FiniteGroup::with_names(table, generators, names, inertia)
    }

    pub fn to_json(&self) -> Value {
        let s = |x: &usize| Value::String(x.to_string());
        let mut m = serde_json::Map::new();
        m.insert("order".into(), s(&self.order()));
        m.insert("table".into(), Value::Array(self.table.iter().map(|r| Value::Array(r.iter().map(s).collect())).collect()));
        m.insert("generators".into(), Value::Array(self.generators.iter().map(s).collect()));
        m.insert("generator_names".into(), Value::Array(self.generator_names.iter().map(|n| Value::String(n.clone())).collect()));
        if let Some(i) = &self.inertia {
            m.insert("inertia".into(), Value::Array(i.iter().map(s).collect()));
        }
        Value::Object(m)
    }
}

pub fn as_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| Error::Schema(format!("{what} must be an array")))
}

pub fn json_usize(v: &Value, what: &str) -> Result<usize> {
    match v {
        Value::Number(n) => n.as_u64().map(|x| x as usize),
        Value::String(s) => s.trim().parse().ok(),
        _ => None,
    }
    .ok_or_else(|| Error::Schema(format!("{what} must be a non-negative integer")))
}
