//! A fast embedded invariant suite, run by `pseudorep selftest`.

use std::sync::Arc;

use serde_json::{json, Value};

use crate::cohomology::{ext1, fiber_stratify};
use crate::error::Result;
use crate::field::Field;
use crate::gma::{canonical_det, GmaData};
use crate::group::FiniteGroup;
use crate::linalg::Mat;
use crate::moduli::{orbit_partition, word_invariants};
use crate::ordinary::{ordinary_ideal, point_check, OrdinaryInstance};
use crate::pseudorep::{ch_quotient, equals, induce, is_cayley_hamilton, split_search};
use crate::rep::{enumerate_reps, Representation, DEFAULT_ENUM_CAP};

pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

fn run_one(name: &'static str, body: impl FnOnce() -> Result<(bool, String)>) -> Check {
    match body() {
        Ok((pass, detail)) => Check { name, pass, detail },
        Err(e) => Check { name, pass: false, detail: format!("{}: {e}", e.code()) },
    }
}

fn character(g: &Arc<FiniteGroup>, f: &Field, vals: &[i64]) -> Result<Representation> {
    Representation::from_generators(g, f, vals.iter().map(|&v| Mat::scalar(1, f.from_int(v))).collect())
}

pub fn run() -> Vec<Check> {
    vec![
        run_one("field_axioms_f16", || {
            let f = Field::new(2, 4)?;
            let ok = f.elements().all(|a| {
                f.elements().all(|b| f.mul(a, b) == f.mul(b, a) && (b.is_zero() || f.mul(f.div(a, b), b) == a))
            }) && f.elements().all(|a| f.pow(a, 16) == a);
            Ok((ok, "commutativity, division, Frobenius".into()))
        }),
        run_one("law_axioms_s3_f3", || {
            let f = Field::new(3, 1)?;
            let g = Arc::new(FiniteGroup::symmetric(3));
            let reps = enumerate_reps(&g, 2, &f, DEFAULT_ENUM_CAP)?;
            let ok = reps.iter().all(|r| {
                let d = induce(r);
                d.is_multiplicative() && d.is_homogeneous()
            });
            Ok((ok, format!("{} representations", reps.len())))
        }),
        run_one("cayley_hamilton_m2_f3", || {
            let f = Field::new(3, 1)?;
            let d = induce(&Representation::tautological(2, &f));
            let (e, law, _) = ch_quotient(&d)?;
            Ok((is_cayley_hamilton(&d) && is_cayley_hamilton(&law), format!("quotient dimension {}", e.dim())))
        }),
        run_one("gma_det_m2", || {
            let f = Field::new(5, 1)?;
            let g = GmaData::full_matrix(2, &f);
            let de = canonical_det(&g)?;
            Ok((equals(&de, &induce(&Representation::tautological(2, &f))), "canonical det vs det".into()))
        }),
        run_one("split_cube_roots_f5", || {
            let f = Field::new(5, 1)?;
            let c3 = Arc::new(FiniteGroup::cyclic(3));
            let z = Mat::from_ints(&f, &[&[0, -1], &[1, -1]]);
            let d = induce(&Representation::from_generators(&c3, &f, vec![z])?);
            let (k, _) = split_search(&d, 2)?;
            Ok((k.degree() == 2, format!("split over {k}")))
        }),
        run_one("orbits_c3_f7", || {
            let f = Field::new(7, 1)?;
            let r = orbit_partition(&Arc::new(FiniteGroup::cyclic(3)), 2, &f, DEFAULT_ENUM_CAP)?;
            let ok = r.classes.len() == 6 && r.closed_orbits().len() == 6 && r.consistent();
            Ok((ok && word_invariants(&r, 3).separates(&r), format!("{} classes", r.classes.len())))
        }),
        run_one("ext1_c3_f3", || {
            let f = Field::new(3, 1)?;
            let g = Arc::new(FiniteGroup::cyclic(3));
            let one = Representation::trivial(&g, &f, 1);
            let e = ext1(&one, &one)?;
            Ok((e.dim() == 1, format!("dim {}", e.dim())))
        }),
        run_one("stratify_s3_f3", || {
            let f = Field::new(3, 1)?;
            let g = Arc::new(FiniteGroup::symmetric(3));
            let one = Representation::trivial(&g, &f, 1);
            let sgn = character(&g, &f, &[-1, 1])?;
            let st = fiber_stratify(&one, &sgn)?;
            let report = orbit_partition(&g, 2, &f, DEFAULT_ENUM_CAP)?;
            Ok((st.total() == 3 && st.matches_fiber(&report)?, format!("{} orbits", st.total())))
        }),
        run_one("ordinary_d5_f5", || {
            let f = Field::new(5, 1)?;
            let g = Arc::new(FiniteGroup::affine_line(5, 4));
            let psi = Representation::trivial(&g, &f, 1);
            let chi = character(&g, &f, &[1, -1])?;
            let inertia = g.subgroup_generated(&[g.generators()[1]]);
            let inst = OrdinaryInstance::new(&psi, &chi, &inertia)?;
            let ideal = ordinary_ideal(&inst)?;
            let pc = point_check(&inst, &ideal, 1 << 16)?;
            Ok((pc.sound && pc.complete, format!("{} of {} points ordinary", pc.ordinary, pc.points)))
        }),
    ]
}

pub fn to_json(checks: &[Check]) -> Value {
    json!({
        "passed": checks.iter().all(|c| c.pass),
        "checks": checks.iter().map(|c| json!({"name": c.name, "pass": c.pass, "detail": c.detail})).collect::<Vec<_>>(),
    })
}

#[cfg(test)]
mod tests {
    #[test]
    fn all_checks_pass() {
        for c in super::run() {
            assert!(c.pass, "{}: {}", c.name, c.detail);
        }
    }
}
