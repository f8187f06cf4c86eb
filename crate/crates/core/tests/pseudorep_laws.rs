use std::sync::Arc;

use pseudorep::algebra::{ideal_generated, quotient, FinAlgebra, Nilpotency};
use pseudorep::pseudorep::{ch_ideal, ch_quotient, equals, induce, is_cayley_hamilton, kernel, split_search, PseudoRep};
use pseudorep::rep::{enumerate_reps, semisimplify, Representation};
use pseudorep::{Elem, Field, FiniteGroup, MPoly, Mat};

fn fp(p: u32) -> Field {
    Field::new(p, 1).unwrap()
}

fn group_rep(g: &Arc<FiniteGroup>, f: &Field, gens: &[&[&[i64]]]) -> Representation {
    let r = Representation::from_generators(g, f, gens.iter().map(|m| Mat::from_ints(f, m)).collect()).unwrap();
    assert!(r.check().unwrap());
    r
}

fn det_law(n: usize, f: &Field) -> PseudoRep {
    induce(&Representation::tautological(n, f))
}

fn dual_number_law(f: &Field) -> PseudoRep {
    let a = FinAlgebra::truncated_polynomial(2, f, "e");
    PseudoRep::from_generic(&a, 1, MPoly::var(f, 2, 0)).unwrap()
}

#[test]
fn induce_examples() {
    let f5 = fp(5);
    let c2 = Arc::new(FiniteGroup::cyclic(2));
    let triv = induce(&Representation::trivial(&c2, &f5, 1));
    let v = |i| MPoly::var(&f5, 2, i);
    assert_eq!(triv.generic(), &v(0).add(&v(1)));

    let f7 = fp(7);
    let c3 = Arc::new(FiniteGroup::cyclic(3));
    let d = induce(&group_rep(&c3, &f7, &[&[&[2, 0], &[0, 4]]]));
    let w = |i| MPoly::var(&f7, 3, i);
    let s = |c: i64, i| w(i).scale(f7.from_int(c));
    // (a + 2b + 4c)(a + 4b + 2c)
    let expected = w(0).add(&s(2, 1)).add(&s(4, 2)).mul(&w(0).add(&s(4, 1)).add(&s(2, 2)));
    assert_eq!(d.generic(), &expected);

    let f3 = fp(3);
    let c3b = Arc::new(FiniteGroup::cyclic(3));
    let uni = induce(&group_rep(&c3b, &f3, &[&[&[1, 1], &[0, 1]]]));
    assert!(equals(&uni, &induce(&Representation::trivial(&c3b, &f3, 2))));
}

#[test]
fn char_poly_examples() {
    let f7 = fp(7);
    let c3 = Arc::new(FiniteGroup::cyclic(3));
    let d = induce(&group_rep(&c3, &f7, &[&[&[2, 0], &[0, 4]]]));
    let a = d.algebra().clone();
    assert_eq!(d.char_poly(a.unit()).coeffs, vec![Elem(1), f7.from_int(-2), Elem(1)]);
    assert_eq!(d.char_poly(&a.zero()).coeffs, vec![Elem(0), Elem(0), Elem(1)]);
    let cp = d.char_poly(&a.basis_vec(1));
    assert_eq!(cp.lambdas, vec![Elem(6), Elem(1)]);
    assert_eq!(cp.coeffs, vec![Elem(1), f7.from_int(-6), Elem(1)]);
}

#[test]
fn char_poly_matches_matrix_char_poly() {
    let f5 = fp(5);
    let s3 = Arc::new(FiniteGroup::symmetric(3));
    let r = group_rep(&s3, &f5, &[&[&[0, 1], &[1, 0]], &[&[0, -1], &[1, -1]]]);
    let d = induce(&r);
    for i in 0..6 {
        let x = d.algebra().basis_vec(i);
        assert_eq!(d.char_poly(&x).coeffs, r.image(i).charpoly(&f5));
    }
    // and on a non-basis element
    let x: Vec<Elem> = (0..6).map(|i| f5.from_int(i as i64 * 3 + 1)).collect();
    assert_eq!(d.char_poly(&x).coeffs, r.image_of(&x).charpoly(&f5));
}

#[test]
fn equality_examples() {
    let f5 = fp(5);
    let c2 = Arc::new(FiniteGroup::cyclic(2));
    let one_one = induce(&Representation::trivial(&c2, &f5, 2));
    let one_sgn = induce(&group_rep(&c2, &f5, &[&[&[1, 0], &[0, -1]]]));
    assert!(equals(&one_one, &one_one));
    assert!(!equals(&one_one, &one_sgn));

    let f7 = fp(7);
    let s3 = Arc::new(FiniteGroup::symmetric(3));
    // nonsplit-looking gluing of sgn under trivial, and its semisimplification
    let ext = group_rep(&s3, &f7, &[&[&[1, 0], &[0, -1]], &[&[1, 0], &[0, 1]]]);
    let ss = semisimplify(&ext).unwrap().direct_sum().unwrap();
    assert!(equals(&induce(&ext), &induce(&ss)));
}

#[test]
fn kernel_examples() {
    let f3 = fp(3);
    let det = det_law(2, &f3);
    let k = kernel(&det).unwrap();
    assert!(k.is_zero());
    // oracle: brute force over all 81 elements, r is in the kernel iff
    // Lambda_i(r E_ab) = 0 for the generic r' (checked on all r' in M_2(F_3))
    let a = det.algebra().clone();
    let all: Vec<Vec<Elem>> = (0..81u32).map(|mut n| (0..4).map(|_| { let c = Elem(n % 3); n /= 3; c }).collect()).collect();
    let brute: Vec<&Vec<Elem>> = all
        .iter()
        .filter(|r| all.iter().all(|rp| det.char_poly(&a.mul(r, rp)).coeffs == vec![Elem(0), Elem(0), Elem(1)]))
        .collect();
    assert_eq!(brute.len(), 1);

    let f5 = fp(5);
    let dual = dual_number_law(&f5);
    let k = kernel(&dual).unwrap();
    assert_eq!(k.basis(), &[dual.algebra().basis_vec(1)]);

    let c3 = Arc::new(FiniteGroup::cyclic(3));
    let uni = induce(&group_rep(&c3, &f3, &[&[&[1, 1], &[0, 1]]]));
    let r = uni.algebra().clone();
    let aug = ideal_generated(&r, &[r.sub(&r.basis_vec(1), r.unit())]).unwrap();
    assert_eq!(kernel(&uni).unwrap(), aug);
}

#[test]
fn kernel_in_characteristic_two_uses_search() {
    // Lambda_1 = 2 * augmentation vanishes identically here, so the linear cut is useless
    let f2 = fp(2);
    let c2 = Arc::new(FiniteGroup::cyclic(2));
    let d = induce(&Representation::trivial(&c2, &f2, 2));
    let r = d.algebra().clone();
    let aug = ideal_generated(&r, &[r.sub(&r.basis_vec(1), r.unit())]).unwrap();
    assert_eq!(kernel(&d).unwrap(), aug);
}

#[test]
fn cayley_hamilton_examples() {
    let f3 = fp(3);
    assert!(is_cayley_hamilton(&det_law(2, &f3)));
    let f5 = fp(5);
    let c2 = Arc::new(FiniteGroup::cyclic(2));
    let one_sgn = induce(&group_rep(&c2, &f5, &[&[&[1, 0], &[0, -1]]]));
    assert!(is_cayley_hamilton(&one_sgn));
    assert!(!is_cayley_hamilton(&dual_number_law(&f5)));
}

#[test]
fn ch_ideal_examples() {
    let f3 = fp(3);
    assert!(ch_ideal(&det_law(2, &f3)).is_zero());
    let f5 = fp(5);
    let dual = dual_number_law(&f5);
    let i = ch_ideal(&dual);
    assert_eq!(i.basis(), &[dual.algebra().basis_vec(1)]);
    let (q, dq, _) = ch_quotient(&dual).unwrap();
    assert_eq!(q.dim(), 1);
    assert!(is_cayley_hamilton(&dq));
    let c2 = Arc::new(FiniteGroup::cyclic(2));
    let one_sgn = induce(&group_rep(&c2, &f5, &[&[&[1, 0], &[0, -1]]]));
    assert!(ch_ideal(&one_sgn).is_zero());
}

#[test]
fn ch_quotient_kernel_is_nilpotent_within_bound() {
    let f3 = fp(3);
    let c3 = Arc::new(FiniteGroup::cyclic(3));
    let uni = induce(&group_rep(&c3, &f3, &[&[&[1, 1], &[0, 1]]]));
    assert!(!is_cayley_hamilton(&uni));
    let (q, dq, _) = ch_quotient(&uni).unwrap();
    assert_eq!(q.dim(), 2);
    assert!(is_cayley_hamilton(&dq));
    let k = kernel(&dq).unwrap();
    match k.nilpotency_index() {
        Nilpotency::Index(n) => assert!(n <= 3 && n == 2),
        Nilpotency::Unbounded => panic!("kernel of a Cayley-Hamilton law must be nilpotent"),
    }
    let (ss, _) = quotient(&q, &k).unwrap();
    assert!(pseudorep::algebra::is_semisimple(&ss).unwrap());
}

#[test]
fn split_search_examples() {
    let f5 = fp(5);
    let c2 = Arc::new(FiniteGroup::cyclic(2));
    let one_sgn = induce(&group_rep(&c2, &f5, &[&[&[1, 0], &[0, -1]]]));
    let (field, r) = split_search(&one_sgn, 2).unwrap();
    assert_eq!(field, f5);
    assert!(equals(&induce(&r), &one_sgn));

    // norm form of the cube roots of unity: chi(g, t) = t^2 + t + 1 over F_5
    let c3 = Arc::new(FiniteGroup::cyclic(3));
    let alg = FinAlgebra::group_algebra(&c3, &f5);
    let v = |i| MPoly::var(&f5, 3, i);
    let sq = v(0).mul(&v(0)).add(&v(1).mul(&v(1))).add(&v(2).mul(&v(2)));
    let cross = v(0).mul(&v(1)).add(&v(1).mul(&v(2))).add(&v(2).mul(&v(0)));
    let d = PseudoRep::from_generic(&alg, 2, sq.sub(&cross)).unwrap().with_group(&c3);
    assert!(d.is_multiplicative());
    assert_eq!(d.char_poly(&alg.basis_vec(1)).coeffs, vec![Elem(1), Elem(1), Elem(1)]);
    let (field, r) = split_search(&d, 2).unwrap();
    assert_eq!(field.size(), 25);
    assert!(semisimplify(&r).unwrap().factors.iter().all(|(f, m)| f.dim() == 1 && *m == 1));
    assert!(matches!(split_search(&d, 1), Err(pseudorep::Error::NotFoundWithinBound { bound: 1 })));
    // every semisimple realisation over F_25 has the same factors
    let d25 = d.base_change(&field).unwrap();
    let first = semisimplify(&r).unwrap();
    let mut semisimple = 0;
    for cand in enumerate_reps(&c3, 2, &field, 1 << 20).unwrap() {
        if equals(&induce(&cand), &d25) && pseudorep::rep::is_semisimple(&cand).unwrap() {
            semisimple += 1;
            assert!(semisimplify(&cand).unwrap().same_factors(&first).unwrap());
        }
    }
    assert!(semisimple > 1);

    let f3 = fp(3);
    let det = det_law(2, &f3);
    let (field, r) = split_search(&det, 2).unwrap();
    assert_eq!(field, f3);
    assert!(pseudorep::rep::isomorphic(&r, &Representation::tautological(2, &f3)).unwrap());
}

#[test]
fn law_axioms_hold_for_induced_laws() {
    let f7 = fp(7);
    let s3 = Arc::new(FiniteGroup::symmetric(3));
    let d = induce(&group_rep(&s3, &f7, &[&[&[0, 1], &[1, 0]], &[&[0, -1], &[1, -1]]]));
    assert!(d.is_multiplicative());
    assert!(d.is_homogeneous());
    assert!(d.unit_value_is_one());
    assert_eq!(PseudoRep::from_json(d.algebra(), &d.to_json()).unwrap(), d);
    assert!(!dual_number_law(&f7).base_change(&Field::new(7, 2).unwrap()).unwrap().generic().is_zero());
}
