//! Buchberger's algorithm for the small ideals met at desk scale (graded-lex order).

use crate::poly::{MPoly, Monomial};

/// Full reduction of `p` modulo `basis`.
pub fn normal_form(p: &MPoly, basis: &[MPoly]) -> MPoly {
    let f = p.field().clone();
    let mut rem = MPoly::zero(&f, p.nvars());
    let mut p = p.clone();
    'outer: while let Some((m, c)) = p.leading().map(|(m, c)| (m.clone(), c)) {
        for g in basis {
            let (gm, gc) = g.leading().expect("basis elements are nonzero");
            if gm.divides(&m) {
                let q = gm.quotient_of(&m);
                p = p.sub(&g.mul_term(&q, f.div(c, gc)));
                continue 'outer;
            }
        }
        rem.add_term(m.clone(), c);
        p = p.sub(&MPoly::from_terms(&f, p.nvars(), [(m, c)]));
    }
    rem
}

fn monic(p: &MPoly) -> MPoly {
    let (_, c) = p.leading().expect("nonzero");
    p.scale(p.field().inv(c))
}

fn s_poly(a: &MPoly, b: &MPoly) -> MPoly {
    let (am, ac) = a.leading().unwrap();
    let (bm, bc) = b.leading().unwrap();
    let l = am.lcm(bm);
    let f = a.field();
    a.mul_term(&am.quotient_of(&l), f.inv(ac)).sub(&b.mul_term(&bm.quotient_of(&l), f.inv(bc)))
}

/// Reduced Groebner basis, sorted by leading monomial. `[1]` for the unit ideal, `[]` for zero.
pub fn groebner(gens: &[MPoly]) -> Vec<MPoly> {
    let mut basis: Vec<MPoly> = Vec::new();
    for g in gens {
        let r = normal_form(g, &basis);
        if !r.is_zero() {
            basis.push(monic(&r));
        }
    }
    let mut pairs: Vec<(usize, usize)> = (0..basis.len()).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
    while let Some((i, j)) = pairs.pop() {
        let (am, _) = basis[i].leading().unwrap();
        let (bm, _) = basis[j].leading().unwrap();
        // coprime leading monomials: the S-polynomial reduces to zero
        if am.0.iter().zip(&bm.0).all(|(a, b)| *a == 0 || *b == 0) {
            continue;
        }
        let r = normal_form(&s_poly(&basis[i], &basis[j]), &basis);
        if !r.is_zero() {
            let k = basis.len();
            basis.push(monic(&r));
            pairs.extend((0..k).map(|i| (i, k)));
        }
    }
    // minimalise, then interreduce
    let mut minimal: Vec<MPoly> = Vec::new();
    for (i, g) in basis.iter().enumerate() {
        let gm = g.leading().unwrap().0;
        let redundant = basis.iter().enumerate().any(|(j, h)| {
            let hm = h.leading().unwrap().0;
            j != i && hm.divides(gm) && (hm != gm || j < i)
        });
        if !redundant {
            minimal.push(g.clone());
        }
    }
    let mut out: Vec<MPoly> = (0..minimal.len())
        .map(|i| {
            let others: Vec<MPoly> = minimal.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, g)| g.clone()).collect();
            let (m, c) = minimal[i].leading().map(|(m, c)| (m.clone(), c)).unwrap();
            let tail = minimal[i].sub(&MPoly::from_terms(minimal[i].field(), minimal[i].nvars(), [(m.clone(), c)]));
            let mut g = normal_form(&tail, &others);
            g.add_term(m, c);
            monic(&g)
        })
        .collect();
    out.sort_by(|a, b| a.leading().unwrap().0.cmp(b.leading().unwrap().0));
    out
}

/// Membership test against a Groebner basis.
pub fn reduces_to_zero(p: &MPoly, basis: &[MPoly]) -> bool {
    normal_form(p, basis).is_zero()
}

/// Number of standard monomials (the `k`-dimension of the quotient ring) if finite and at most `cap`.
pub fn quotient_dimension(basis: &[MPoly], nvars: usize, cap: usize) -> Option<usize> {
    let leads: Vec<Monomial> = basis.iter().map(|g| g.leading().unwrap().0.clone()).collect();
    let mut count = 0;
    let mut frontier = vec![Monomial::one(nvars)];
    let mut seen = std::collections::HashSet::new();
    while let Some(m) = frontier.pop() {
        if !seen.insert(m.clone()) || leads.iter().any(|l| l.divides(&m)) {
            continue;
        }
        count += 1;
        if count > cap {
            return None;
        }
        for i in 0..nvars {
            frontier.push(m.mul(&Monomial::var(nvars, i)));
        }
    }
    Some(count)
}
