use std::sync::Arc;

use pseudorep::cohomology::{ext1, fiber_stratify, projective_count};
use pseudorep::moduli::orbit_partition;
use pseudorep::rep::{isomorphic, DEFAULT_ENUM_CAP};
use pseudorep::{Elem, Error, Field, FiniteGroup, Mat, Representation};

fn fp(p: u32) -> Field {
    Field::new(p, 1).unwrap()
}

fn character(g: &Arc<FiniteGroup>, f: &Field, vals: &[i64]) -> Representation {
    Representation::from_generators(g, f, vals.iter().map(|&v| Mat::scalar(1, f.from_int(v))).collect()).unwrap()
}

/// All generator corner values, kept when the assembled matrices form a representation.
fn brute_cocycle_count(v1: &Representation, v2: &Representation) -> u64 {
    let g = v1.group().unwrap().clone();
    let f = v1.field();
    let (a, b) = (v1.dim(), v2.dim());
    let n = g.generators().len() * a * b;
    let q = f.size() as u64;
    let mut count = 0;
    for mut k in 0..q.pow(n as u32) {
        let vals: Vec<Elem> = (0..n)
            .map(|_| {
                let c = Elem((k % q) as u32);
                k /= q;
                c
            })
            .collect();
        let gens = g
            .generators()
            .iter()
            .enumerate()
            .map(|(i, &s)| {
                let corner = Mat { rows: a, cols: b, data: vals[i * a * b..(i + 1) * a * b].to_vec() };
                Mat::block(v1.image(s), &corner, &Mat::zeros(b, a), v2.image(s))
            })
            .collect();
        if Representation::from_generators(&g, f, gens).unwrap().check().unwrap() {
            count += 1;
        }
    }
    count
}

#[test]
fn ext_examples() {
    for p in [3u32, 5] {
        let f = fp(p);
        let c = Arc::new(FiniteGroup::cyclic(p as usize));
        let one = Representation::trivial(&c, &f, 1);
        assert_eq!(ext1(&one, &one).unwrap().dim(), 1);
    }
    let f5 = fp(5);
    let c3 = Arc::new(FiniteGroup::cyclic(3));
    let one = Representation::trivial(&c3, &f5, 1);
    assert_eq!(ext1(&one, &one).unwrap().dim(), 0);
    let f3 = fp(3);
    let c4 = Arc::new(FiniteGroup::cyclic(4));
    let one = Representation::trivial(&c4, &f3, 1);
    assert_eq!(ext1(&one, &one).unwrap().dim(), 0);
    let f7 = fp(7);
    let w = character(&c3, &f7, &[2]);
    assert_eq!(ext1(&w, &w).unwrap().dim(), 0);
}

#[test]
fn cocycle_space_matches_brute_force() {
    let f3 = fp(3);
    let s3 = Arc::new(FiniteGroup::symmetric(3));
    let one = Representation::trivial(&s3, &f3, 1);
    let sgn = character(&s3, &f3, &[-1, 1]);
    let c3 = Arc::new(FiniteGroup::cyclic(3));
    let u = Representation::from_generators(&c3, &f3, vec![Mat::from_ints(&f3, &[&[1, 1], &[0, 1]])]).unwrap();
    let t3 = Representation::trivial(&c3, &f3, 1);
    for (v1, v2) in [(&one, &sgn), (&sgn, &one), (&one, &one), (&u, &t3), (&t3, &u)] {
        let e = ext1(v1, v2).unwrap();
        assert_eq!(brute_cocycle_count(v1, v2), 3u64.pow(e.cocycles.dim() as u32));
        for z in e.cocycles.points(&f3) {
            assert!(e.assemble(&z).unwrap().check().unwrap());
        }
        for z in e.coboundaries.points(&f3) {
            assert!(isomorphic(&e.assemble(&z).unwrap(), &v1.direct_sum(v2)).unwrap());
        }
    }
}

#[test]
fn dimension_stable_under_extension() {
    let f3 = fp(3);
    let f9 = Field::new(3, 2).unwrap();
    let s3 = Arc::new(FiniteGroup::symmetric(3));
    let one = Representation::trivial(&s3, &f3, 1);
    let sgn = character(&s3, &f3, &[-1, 1]);
    let d3 = ext1(&sgn, &one).unwrap().dim();
    let d9 = ext1(&sgn.base_change(&f9).unwrap(), &one.base_change(&f9).unwrap()).unwrap().dim();
    assert_eq!(d3, 1);
    assert_eq!(d3, d9);
}

#[test]
fn projective_lines_are_distinct_orbits() {
    let f5 = fp(5);
    let g = Arc::new(FiniteGroup::affine_plane(5, 2));
    let chi = character(&g, &f5, &[1, 1, 2]);
    let psi = Representation::trivial(&g, &f5, 1);
    let e = ext1(&chi, &psi).unwrap();
    assert_eq!(e.dim(), 2);
    let pts = e.projective_points().unwrap();
    assert_eq!(pts.len(), 6);
    for i in 0..pts.len() {
        for j in 0..i {
            assert!(!isomorphic(&e.assemble(&pts[i]).unwrap(), &e.assemble(&pts[j]).unwrap()).unwrap());
        }
    }
}

#[test]
fn stratification_matches_orbit_count() {
    let f5 = fp(5);
    let g = Arc::new(FiniteGroup::affine_plane(5, 2));
    let chi = character(&g, &f5, &[1, 1, 2]);
    let psi = Representation::trivial(&g, &f5, 1);
    let st = fiber_stratify(&chi, &psi).unwrap();
    let sizes: Vec<u64> = st.strata.iter().map(|s| s.proj_points).collect();
    assert_eq!(sizes, vec![6, 1, 0]);
    assert_eq!(st.total(), projective_count(5, 2) + 1 + projective_count(5, 0));
    let report = orbit_partition(&g, 2, &f5, DEFAULT_ENUM_CAP).unwrap();
    assert!(st.matches_fiber(&report).unwrap());
    assert_eq!(st.to_json()["strata"][0]["proj_points"], "6");
}

#[test]
fn stratification_guards() {
    let f3 = fp(3);
    let c2 = Arc::new(FiniteGroup::cyclic(2));
    let one = Representation::trivial(&c2, &f3, 1);
    let sgn = character(&c2, &f3, &[-1]);
    let st = fiber_stratify(&one, &sgn).unwrap();
    assert_eq!(st.total(), 1);
    let report = orbit_partition(&c2, 2, &f3, DEFAULT_ENUM_CAP).unwrap();
    assert!(st.matches_fiber(&report).unwrap());

    let c3 = Arc::new(FiniteGroup::cyclic(3));
    let t = Representation::trivial(&c3, &f3, 1);
    assert!(matches!(fiber_stratify(&t, &t), Err(Error::NotMultiplicityFree)));
}
