use std::collections::HashMap;
use std::sync::Arc;

use proptest::prelude::*;
use pseudorep::moduli::{degeneration, invariant_vector, orbit_partition, psi_fiber, tower_check, word_invariants, OrbitReport};
use pseudorep::pseudorep::{equals, induce};
use pseudorep::rep::{enumerate_reps, isomorphic, DEFAULT_ENUM_CAP};
use pseudorep::{Elem, Error, Field, FiniteGroup, Mat, Representation};

fn fp(p: u32) -> Field {
    Field::new(p, 1).unwrap()
}

fn gl(d: usize, f: &Field) -> Vec<Mat> {
    let q = f.size() as u64;
    (0..q.pow((d * d) as u32))
        .map(|mut n| {
            let data = (0..d * d)
                .map(|_| {
                    let c = Elem((n % q) as u32);
                    n /= q;
                    c
                })
                .collect();
            Mat { rows: d, cols: d, data }
        })
        .filter(|m| !m.det(f).is_zero())
        .collect()
}

/// Orbit sizes by brute-force conjugation with every element of `GL_d(F)`.
fn brute_orbits(g: &Arc<FiniteGroup>, d: usize, f: &Field) -> (usize, Vec<u64>) {
    let pts = enumerate_reps(g, d, f, DEFAULT_ENUM_CAP).unwrap();
    let all = gl(d, f);
    let key = |r: &Representation| r.generator_images().iter().flat_map(|m| m.data.clone()).collect::<Vec<_>>();
    let index: HashMap<Vec<Elem>, usize> = pts.iter().enumerate().map(|(i, r)| (key(r), i)).collect();
    let mut orbit = vec![usize::MAX; pts.len()];
    let mut sizes = Vec::new();
    for i in 0..pts.len() {
        if orbit[i] != usize::MAX {
            continue;
        }
        let id = sizes.len();
        let mut n = 0;
        for x in &all {
            let j = index[&key(&pts[i].conjugate(x))];
            if orbit[j] == usize::MAX {
                orbit[j] = id;
                n += 1;
            }
        }
        sizes.push(n);
    }
    sizes.sort();
    (pts.len(), sizes)
}

fn check_against_brute(g: FiniteGroup, d: usize, f: &Field) -> OrbitReport {
    let g = Arc::new(g);
    let report = orbit_partition(&g, d, f, DEFAULT_ENUM_CAP).unwrap();
    let (total, sizes) = brute_orbits(&g, d, f);
    let mut got: Vec<u64> = report.orbits.iter().map(|o| o.size).collect();
    got.sort();
    assert_eq!(report.total_points, total as u64);
    assert_eq!(got, sizes);
    assert!(report.consistent());
    report
}

#[test]
fn orbit_sizes_match_full_conjugation() {
    check_against_brute(FiniteGroup::cyclic(2), 2, &fp(3));
    check_against_brute(FiniteGroup::cyclic(4), 2, &fp(3));
    check_against_brute(FiniteGroup::symmetric(3), 2, &fp(2));
    check_against_brute(FiniteGroup::symmetric(3), 2, &fp(3));
    check_against_brute(FiniteGroup::dihedral(4), 2, &fp(3));
    check_against_brute(FiniteGroup::cyclic(3), 2, &fp(5));
    check_against_brute(FiniteGroup::cyclic(2), 3, &fp(2));
}

#[test]
fn trivial_group_single_closed_orbit() {
    let r = check_against_brute(FiniteGroup::cyclic(1), 1, &fp(3));
    assert_eq!(r.orbits.len(), 1);
    assert!(r.orbits[0].is_closed);
}

#[test]
fn cyclic_three_over_f3_unipotent_collapses() {
    let r = check_against_brute(FiniteGroup::cyclic(3), 2, &fp(3));
    assert_eq!(r.orbits.len(), 2);
    assert_eq!(r.classes.len(), 1);
    let closed = r.closed_orbits();
    assert_eq!(closed.len(), 1);
    assert_eq!(r.orbits[closed[0]].size, 1);
    let fiber = psi_fiber(&r, &r.classes[0]).unwrap();
    assert_eq!(fiber.orbits.len(), 2);
}

#[test]
fn cyclic_three_over_f7_six_classes() {
    let g = Arc::new(FiniteGroup::cyclic(3));
    let r = orbit_partition(&g, 2, &fp(7), DEFAULT_ENUM_CAP).unwrap();
    assert_eq!(r.classes.len(), 6);
    assert_eq!(r.closed_orbits().len(), 6);
    // 3 cube roots in F_7: multisets of size 2 from 3 symbols
    assert_eq!(r.orbits.len(), 6);
    assert!(r.consistent());
}

#[test]
fn fibers() {
    let f5 = fp(5);
    let s3 = Arc::new(FiniteGroup::symmetric(3));
    let r = orbit_partition(&s3, 2, &f5, DEFAULT_ENUM_CAP).unwrap();
    let irreducible = r.orbits.iter().position(|o| o.jh.factors.len() == 1 && o.jh.factors[0].0.dim() == 2).unwrap();
    let fib = psi_fiber(&r, &induce(&r.orbits[irreducible].representative)).unwrap();
    assert_eq!(fib.orbits, vec![irreducible]);

    // 1 + sgn over F_3 has one nonsplit extension in each direction
    let f3 = fp(3);
    let r3 = orbit_partition(&s3, 2, &f3, DEFAULT_ENUM_CAP).unwrap();
    let triv = Representation::trivial(&s3, &f3, 1);
    let sgn = Representation::from_generators(&s3, &f3, vec![Mat::scalar(1, f3.from_int(-1)), Mat::identity(1)]).unwrap();
    let fib = psi_fiber(&r3, &induce(&triv.direct_sum(&sgn))).unwrap();
    assert_eq!(fib.orbits.len(), 3);
    for &o in &fib.orbits {
        assert!(r3.orbits[o].jh.same_factors(&r3.orbits[fib.closed].jh).unwrap());
    }

    let other = orbit_partition(&s3, 1, &f3, DEFAULT_ENUM_CAP).unwrap();
    assert!(matches!(psi_fiber(&r3, &other.classes[0]), Err(Error::UnknownPseudoRep)));
}

#[test]
fn degenerations_land_in_closed_orbit() {
    for (g, d, p) in [(FiniteGroup::cyclic(3), 2, 3), (FiniteGroup::symmetric(3), 2, 3), (FiniteGroup::cyclic(2), 3, 2)] {
        let f = fp(p);
        let r = orbit_partition(&Arc::new(g), d, &f, DEFAULT_ENUM_CAP).unwrap();
        for (i, o) in r.orbits.iter().enumerate() {
            let dg = degeneration(&o.representative);
            assert!(dg.limit.check().unwrap());
            let closed = &r.orbits[psi_fiber(&r, &r.classes[o.pseudorep]).unwrap().closed];
            assert!(isomorphic(&dg.limit, &closed.representative).unwrap(), "orbit {i}");
            assert_eq!(isomorphic(&dg.limit, &o.representative).unwrap(), o.is_closed);
            for s in f.nonzero_elements() {
                assert!(isomorphic(&dg.at(s), &o.representative).unwrap());
            }
        }
    }
}

#[test]
fn word_invariant_examples() {
    let f3 = fp(3);
    let c3 = Arc::new(FiniteGroup::cyclic(3));
    let r = orbit_partition(&c3, 2, &f3, DEFAULT_ENUM_CAP).unwrap();
    let w = word_invariants(&r, 3);
    assert_eq!(w.vectors[0], w.vectors[1]);
    assert!(w.separates(&r));

    let f7 = fp(7);
    let r7 = orbit_partition(&c3, 2, &f7, DEFAULT_ENUM_CAP).unwrap();
    let a = Representation::from_generators(&c3, &f7, vec![Mat::diag(&[f7.from_int(2), f7.from_int(4)])]).unwrap();
    let b = Representation::from_generators(&c3, &f7, vec![Mat::diag(&[f7.from_int(1), f7.from_int(2)])]).unwrap();
    let w7 = word_invariants(&r7, 3);
    assert_ne!(invariant_vector(&a, &w7.elements), invariant_vector(&b, &w7.elements));
    assert!(w7.separates(&r7));

    // d = 1: the character values
    let r1 = orbit_partition(&c3, 1, &f7, DEFAULT_ENUM_CAP).unwrap();
    let w1 = word_invariants(&r1, 2);
    for (o, v) in r1.orbits.iter().zip(&w1.vectors) {
        let vals: Vec<Elem> = w1.elements.iter().map(|&g| f7.neg(o.representative.image(g).get(0, 0))).collect();
        let consts: Vec<Elem> = v.iter().copied().step_by(2).collect();
        assert_eq!(consts, vals);
    }
}

#[test]
fn separation_across_groups() {
    for g in [FiniteGroup::cyclic(4), FiniteGroup::symmetric(3), FiniteGroup::dihedral(4)] {
        let g = Arc::new(g);
        for p in [2, 3, 5] {
            let r = orbit_partition(&g, 2, &fp(p), DEFAULT_ENUM_CAP).unwrap();
            assert!(word_invariants(&r, g.order()).separates(&r));
        }
    }
}

#[test]
fn tower_levels_are_bijective() {
    let c3 = Arc::new(FiniteGroup::cyclic(3));
    let levels = tower_check(&c3, 2, &fp(5), 2, DEFAULT_ENUM_CAP).unwrap();
    assert_eq!(levels.iter().map(|l| l.classes).collect::<Vec<_>>(), vec![2, 6]);
    assert!(levels.iter().all(|l| l.bijective));
}

#[test]
fn report_json_shape() {
    let r = orbit_partition(&Arc::new(FiniteGroup::cyclic(3)), 2, &fp(3), DEFAULT_ENUM_CAP).unwrap();
    let v = r.to_json();
    assert_eq!(v["class_count"], "1");
    assert_eq!(v["orbit_count"], "2");
    assert_eq!(v["total_points"], "9");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn psi_constant_under_conjugation(a in 0u32..5, b in 0u32..5, c in 0u32..5, e in 0u32..5, pick in 0usize..1000) {
        let f = fp(5);
        let x = Mat::from_rows(&[vec![Elem(a), Elem(b)], vec![Elem(c), Elem(e)]]);
        prop_assume!(!x.det(&f).is_zero());
        let s3 = Arc::new(FiniteGroup::symmetric(3));
        let pts = enumerate_reps(&s3, 2, &f, DEFAULT_ENUM_CAP).unwrap();
        let r = &pts[pick % pts.len()];
        let y = r.conjugate(&x);
        prop_assert!(y.check().unwrap());
        prop_assert!(equals(&induce(r), &induce(&y)));
        let words: Vec<usize> = (0..s3.order()).collect();
        prop_assert_eq!(invariant_vector(r, &words), invariant_vector(&y, &words));
    }
}
