use std::sync::Arc;

use pseudorep::ordinary::{is_ordinary, ordinary_ideal, point_check, OrdinaryInstance};
use pseudorep::rep::{enumerate_reps, DEFAULT_ENUM_CAP};
use pseudorep::{Error, Field, FiniteGroup, Mat, Representation};

fn f5() -> Field {
    Field::new(5, 1).unwrap()
}

fn character(g: &Arc<FiniteGroup>, f: &Field, vals: &[i64]) -> Representation {
    Representation::from_generators(g, f, vals.iter().map(|&v| Mat::scalar(1, f.from_int(v))).collect()).unwrap()
}

fn generated(g: &FiniteGroup, gens: &[usize]) -> Vec<usize> {
    g.subgroup_generated(&gens.iter().map(|&i| g.generators()[i]).collect::<Vec<_>>())
}

#[test]
fn ramified_chi_uses_single_branch() {
    let f = f5();
    let d5 = Arc::new(FiniteGroup::affine_line(5, 4));
    let psi = Representation::trivial(&d5, &f, 1);
    let chi = character(&d5, &f, &[1, -1]);
    let inst = OrdinaryInstance::new(&psi, &chi, &generated(&d5, &[1])).unwrap();
    assert!(!inst.chi_unramified());
    let ideal = ordinary_ideal(&inst).unwrap();
    assert_eq!(ideal.branches.len(), 1);
    assert_eq!(ideal.basis, ideal.branches[0]);
    let pc = point_check(&inst, &ideal, 1 << 16).unwrap();
    assert!(pc.sound && pc.complete);
    assert!(pc.in_locus < pc.points);
    assert!(!ideal.is_whole_space(inst.scheme.groebner_basis()));
}

#[test]
fn unramified_pair_intersects_branches() {
    let f = f5();
    let d5 = Arc::new(FiniteGroup::affine_line(5, 4));
    let psi = Representation::trivial(&d5, &f, 1);
    let chi = character(&d5, &f, &[1, -1]);
    let inst = OrdinaryInstance::new(&psi, &chi, &generated(&d5, &[0])).unwrap();
    assert!(inst.chi_unramified());
    let ideal = ordinary_ideal(&inst).unwrap();
    assert_eq!(ideal.branches.len(), 2);
    assert!(ideal.certified);
    let pc = point_check(&inst, &ideal, 1 << 16).unwrap();
    assert!(pc.sound && pc.complete);
    assert_eq!(pc.in_locus, pc.points);
    assert!(ideal.is_whole_space(inst.scheme.groebner_basis()));
}

#[test]
fn ramified_quotient_extension_not_ordinary() {
    let f = f5();
    let g = Arc::new(FiniteGroup::affine_line(5, 2));
    let inertia = g.subgroup_generated(&[g.generators()[0], g.pow(g.generators()[1], 2)]);
    let psi = Representation::trivial(&g, &f, 1);
    let chi = character(&g, &f, &[1, 3]);
    let inst = OrdinaryInstance::new(&psi, &chi, &inertia).unwrap();
    let ideal = ordinary_ideal(&inst).unwrap();
    let pc = point_check(&inst, &ideal, 1 << 16).unwrap();
    assert!(pc.sound && pc.complete);
    assert!(pc.points > pc.ordinary);

    // the nonsplit extension with sub psi and quotient chi
    let ext = enumerate_reps(&g, 2, &f, DEFAULT_ENUM_CAP)
        .unwrap()
        .into_iter()
        .find(|r| {
            let m = r.image(g.generators()[1]);
            let t = r.image(g.generators()[0]);
            m.get(1, 0).is_zero() && t.get(1, 0).is_zero() && !t.get(0, 1).is_zero()
                && m.get(0, 0) == f.from_int(1) && m.get(1, 1) == f.from_int(3)
        })
        .unwrap();
    assert!(!is_ordinary(&ext, &inertia).unwrap());
    assert!(is_ordinary(&psi.direct_sum(&chi), &inertia).unwrap());
}

#[test]
fn split_instance_is_whole_space() {
    let f = f5();
    let g = Arc::new(FiniteGroup::affine_line(5, 2));
    let inertia = g.subgroup_generated(&[g.generators()[0], g.pow(g.generators()[1], 2)]);
    let psi = Representation::trivial(&g, &f, 1);
    let chi = character(&g, &f, &[1, 4]);
    let inst = OrdinaryInstance::new(&psi, &chi, &inertia).unwrap();
    assert_eq!(inst.scheme.nvars(), 0);
    let ideal = ordinary_ideal(&inst).unwrap();
    assert!(ideal.is_whole_space(inst.scheme.groebner_basis()));
    let pc = point_check(&inst, &ideal, 16).unwrap();
    assert_eq!((pc.points, pc.in_locus), (1, 1));
}

#[test]
fn guards() {
    let f = f5();
    let s3 = Arc::new(FiniteGroup::symmetric(3));
    let reps = enumerate_reps(&s3, 2, &f, DEFAULT_ENUM_CAP).unwrap();
    let irreducible = reps.iter().find(|r| pseudorep::invariant_subspace(r).is_none()).unwrap();
    assert!(!is_ordinary(irreducible, &[s3.identity()]).unwrap());
    let one = Representation::trivial(&s3, &f, 1);
    assert!(matches!(is_ordinary(&one, &[0]), Err(Error::DimensionUnsupported(1))));

    let sgn = character(&s3, &f, &[-1, 1]);
    let t = s3.subgroup_generated(&[s3.generators()[0]]);
    assert!(matches!(OrdinaryInstance::new(&sgn, &one, &t), Err(Error::HypothesisViolation(_))));
    assert!(matches!(OrdinaryInstance::new(&one, &one, &t), Err(Error::HypothesisViolation(_))));
}
