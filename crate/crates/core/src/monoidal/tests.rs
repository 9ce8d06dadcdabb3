use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::adjoints::{morphism, realize};
use crate::base::{Backend, MMorphism, MObject};
use crate::fixtures::*;
use crate::homotopy::is_cosegal;
use crate::linalg::{q, unit_vec};
use crate::precat::{Diagram, Precategory};
use crate::shapes::Deletion;

fn strict(c: &crate::precat::StrictCategory, n: usize) -> Arc<Precategory> {
    Arc::new(Precategory::from_strict_category(c, n).unwrap())
}

fn multiplication(f: &Arc<Precategory>, c: &crate::precat::StrictCategory) -> PrecatMorphism {
    let src = Arc::new(tensor_s(f, f).unwrap());
    let comps = src
        .chains()
        .into_iter()
        .map(|z| {
            let m = MMorphism::new_unchecked(src.value(&z), f.value(&z), c.comp[&(0, 0, 0)].mat.clone());
            (z, m)
        })
        .collect();
    morphism(&src, f, vec![0], comps)
}

#[test]
fn unit_precat_is_trivial() {
    for backend in [Backend::FinSet, Backend::VectQ, Backend::ChQ] {
        let u = Arc::new(unit_precat(backend, 3));
        assert!(u.validate().is_ok());
        assert!(u.check_unital().is_ok());
        assert!(is_cosegal(&*u));
        let r = realize(&u).unwrap();
        assert_eq!(r.category.homs[&(0, 0)], MObject::unit(backend));
    }
}

#[test]
fn tensor_dims_multiply() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..3 {
        let f = random_precategory(&mut rng, Backend::VectQ, 2, 2, 2);
        let g = random_precategory(&mut rng, Backend::VectQ, 1, 2, 2);
        let t = tensor_s(&f, &g).unwrap();
        assert!(t.validate().is_ok());
        for z in t.chains() {
            let (zx, zy) = split_pair(&z, g.n());
            assert_eq!(t.value(&z).dim(), f.value(&zx).dim() * g.value(&zy).dim());
        }
    }
}

#[test]
fn tensor_mismatch_errors() {
    let f = unit_precat(Backend::VectQ, 2);
    assert!(tensor_s(&f, &unit_precat(Backend::FinSet, 2)).is_err());
    assert!(tensor_s(&f, &unit_precat(Backend::VectQ, 3)).is_err());
}

#[test]
fn unit_associativity_symmetry_isomorphisms() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for backend in [Backend::FinSet, Backend::VectQ, Backend::ChQ] {
        let f = random_pointed(&mut rng, backend, 2, 2, 1);
        let g = random_pointed(&mut rng, backend, 1, 2, 1);
        let h = strict(&random_strict(&mut rng, backend), 2);
        let (r, l) = unit_laws(&f).unwrap();
        assert!(r.is_ok(), "{:?}", r);
        assert!(l.is_ok(), "{:?}", l);
        let a = check_isomorphism(&associator_s(&f, &g, &h).unwrap());
        assert!(a.is_ok(), "{:?}", a);
        let s = check_isomorphism(&symmetry_s(&f, &h).unwrap());
        assert!(s.is_ok(), "{:?}", s);
        let t = tensor_s(&h, &h).unwrap();
        assert!(t.check_unital().is_ok());
    }
}

#[test]
fn endomorphisms() {
    let c = truncated_polynomials(Backend::VectQ, 2);
    let f = strict(&c, 3);
    let e = endomorphism(&MarkedPrecategory::new(f.clone(), 0).unwrap()).unwrap();
    for z in e.chains() {
        assert_eq!(e.value(&z), c.homs[&(0, 0)]);
    }
    let u = Arc::new(unit_precat(Backend::VectQ, 3));
    let eu = endomorphism(&MarkedPrecategory::new(u.clone(), 0).unwrap()).unwrap();
    assert!(compare_precategories(&eu, &u).is_ok());
    let arrow = strict(&arrow_category(Backend::VectQ), 3);
    for a in [0, 1] {
        let m = MarkedPrecategory::new(arrow.clone(), a).unwrap();
        let n = MarkedPrecategory::new(f.clone(), 0).unwrap();
        let cmp = endomorphism_comparison(&m, &n).unwrap();
        assert!(check_isomorphism(&cmp).is_ok());
    }
    assert!(MarkedPrecategory::new(f, 3).is_err());
}

#[test]
fn yoneda_on_strict_and_random() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut inputs = vec![
        strict(&arrow_category(Backend::VectQ), 3),
        strict(&arrow_category(Backend::FinSet), 3),
        strict(&random_monoid(&mut rng, 3), 3),
    ];
    inputs.push(random_pointed(&mut rng, Backend::FinSet, 2, 3, 1));
    inputs.push(random_pointed(&mut rng, Backend::ChQ, 2, 3, 1));
    for f in &inputs {
        for a in 0..f.n() {
            let fa = yoneda_module(f, a).unwrap();
            let r = yoneda_report(f, &fa).unwrap();
            assert!(r.is_ok(), "{:?}", r);
            assert!(r.simplicial_pairs > 0);
            let star = f.n();
            for b in 0..f.n() {
                assert_eq!(fa.value(&[b, star]), f.value(&[b, a]));
                assert_eq!(fa.value(&[star, b]).dim(), 0);
            }
            assert_eq!(fa.check_unital().is_ok(), f.check_unital().is_ok());
            let un = unit_precat(f.backend, f.truncation);
            let d = check_distributor(&fa, f, &un, f.n()).unwrap();
            assert!(d.is_ok(), "{:?}", d);
        }
    }
    assert!(yoneda_module(&inputs[0], 5).is_err());
}

#[test]
fn yoneda_of_strict_is_cosegal() {
    let f = strict(&arrow_category(Backend::ChQ), 3);
    let fa = yoneda_module(&f, 1).unwrap();
    let r = yoneda_report(&f, &fa).unwrap();
    assert_eq!(r.cosegal, Some(true));
}

#[test]
fn distributor_cases() {
    let f = strict(&arrow_category(Backend::VectQ), 2);
    let g = strict(&truncated_polynomials(Backend::VectQ, 2), 2);
    let e = disjoint_union(&f, &g).unwrap();
    let r = check_distributor(&e, &f, &g, 2).unwrap();
    assert!(r.is_ok(), "{:?}", r);
    assert!(r.cosegal);
    // The Yoneda module read with the marker first points the wrong way.
    let fa = yoneda_module(&f, 0).unwrap();
    let names = vec![String::from(STAR), String::from("A"), String::from("B")];
    let flipped = crate::adjoints::pullback(&fa, &[2, 0, 1], &names).unwrap();
    let un = unit_precat(Backend::VectQ, 2);
    let r = check_distributor(&flipped, &un, &f, 1).unwrap();
    assert!(r.validate.is_ok());
    assert!(!r.forbidden.is_empty());
    assert!(!r.is_ok());
    assert!(check_distributor(&e, &f, &g, 1).is_err());
}

fn identity_list(f: &Arc<Precategory>, n: usize) -> Vec<PrecatMorphism> {
    (0..n).map(|_| f.identity_morphism()).collect()
}

#[test]
fn nat_object_commutative_algebra_is_everything() {
    let f = strict(&truncated_polynomials(Backend::VectQ, 2), 3);
    let o = nat_transform_object(&identity_list(&f, 2)).unwrap();
    assert_eq!(o.product.dim(), 2);
    assert_eq!(o.object.dim(), 2);
}

#[test]
fn nat_object_over_unit_is_unit() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let c = random_monoid(&mut rng, 3);
    let f = strict(&c, 3);
    let u = Arc::new(unit_precat(Backend::FinSet, 3));
    let to_unit = morphism(
        &f,
        &u,
        vec![0],
        f.chains()
            .into_iter()
            .map(|z| {
                let m = MMorphism::from_function(f.value(&z), u.value(&z), &vec![0; f.value(&z).dim()]);
                (z, m)
            })
            .collect(),
    );
    for n in 1..=3 {
        let o = nat_transform_object(&vec![to_unit.clone(); n]).unwrap();
        assert_eq!(o.object.dim(), 1);
    }
}

#[test]
fn nat_object_excludes_violations() {
    let f = strict(&arrow_category(Backend::VectQ), 3);
    let o = nat_transform_object(&identity_list(&f, 2)).unwrap();
    assert_eq!(o.product.dim(), 2);
    assert_eq!(o.object.dim(), 1);
    let bad = vec![(0, q(1))];
    assert!(!o.contains(&bad));
    assert!(!o.transform(&bad).check().unwrap().is_ok());
    let good = vec![(0, q(1)), (1, q(1))];
    assert!(o.contains(&good));
    assert!(o.transform(&good).check().unwrap().is_ok());
}

/// Every element of the product, tested against the axiom directly.
fn exhaustive_agreement(sigmas: &[PrecatMorphism]) {
    let o = nat_transform_object(sigmas).unwrap();
    let mut members = 0;
    for p in 0..o.product.dim() {
        let v = unit_vec(p);
        let natural = o.transform(&v).check().unwrap().is_ok();
        assert_eq!(natural, o.contains(&v), "element {}", p);
        members += natural as usize;
    }
    assert_eq!(members, o.object.dim());
}

#[test]
fn nat_object_finset_exhaustive() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..3 {
        let f = strict(&random_monoid(&mut rng, 3), 3);
        exhaustive_agreement(&identity_list(&f, 2));
    }
    let f = strict(&arrow_category(Backend::FinSet), 3);
    exhaustive_agreement(&identity_list(&f, 2));
    exhaustive_agreement(&identity_list(&f, 3));
    let g = random_pointed(&mut rng, Backend::FinSet, 1, 3, 1);
    exhaustive_agreement(&identity_list(&g, 2));
}

#[test]
fn compose_units_and_multiplication() {
    let c = truncated_polynomials(Backend::VectQ, 3);
    let f = strict(&c, 3);
    let o = nat_transform_object(&identity_list(&f, 2)).unwrap();
    let t1 = o.transform(&vec![(0, q(2)), (1, q(1))]);
    let t2 = o.transform(&vec![(1, q(3))]);
    let t = compose_nat_transforms(&t1, &t2).unwrap();
    assert!(t.check().unwrap().is_ok());
    let direct = c.comp[&(0, 0, 0)].after(&crate::base::tensor_mor(&t1.components[0], &t2.components[0]));
    assert!(direct.mat == t.components[0].mat);
    // Composing with the unit family agrees with the structure map.
    let unit = o.transform(&unit_vec(0));
    let tu = compose_nat_transforms(&t1, &unit).unwrap();
    let d = Deletion::new(vec![0, 0, 0], vec![1]).unwrap();
    assert!(tu.components[0].mat == f.structure_map(&d).after(&t1.components[0]).mat);
    // The degenerate list of length one is neutral on the nose.
    let o1 = nat_transform_object(&identity_list(&f, 1)).unwrap();
    let id = o1.transform(&unit_vec(0));
    let ti = compose_nat_transforms(&id, &t1).unwrap();
    assert!(ti.components[0].mat == t1.components[0].mat);
    let bad = compose_nat_transforms(&t1, &RelativeNatTransform { sigmas: vec![], components: vec![] });
    assert!(bad.is_err());
}

#[test]
fn pairing_is_associative() {
    let f = strict(&arrow_category(Backend::VectQ), 4);
    let l = identity_list(&f, 2);
    assert!(pairing_associativity(&l, &l, &l).unwrap());
    let o = nat_transform_object(&l).unwrap();
    let o12 = nat_transform_object(&concat_lists(&l, &l).unwrap()).unwrap();
    let p = pairing_map(&o, &o, &o12).unwrap();
    assert_eq!(p.src.dim(), o.object.dim() * o.object.dim());
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let g = strict(&random_monoid(&mut rng, 2), 4);
    let l = identity_list(&g, 2);
    assert!(pairing_associativity(&l, &l, &l).unwrap());
}

#[test]
fn chq_nat_object_is_subcomplex() {
    let f = strict(&truncated_polynomials(Backend::ChQ, 2), 3);
    let o = nat_transform_object(&identity_list(&f, 2)).unwrap();
    assert!(o.object.check().is_ok());
    assert!(o.inclusion.check().is_ok());
    assert_eq!(o.object.dim(), 2);
}

#[test]
fn constant_levels_of_commutative_algebra() {
    let c = truncated_polynomials(Backend::VectQ, 2);
    let f = strict(&c, 2);
    let mult = multiplication(&f, &c);
    let d = MonoidalLevels::constant(&f, &mult, 3);
    let r = check_monoidal_levels(&d);
    assert!(r.is_ok(), "{:?}", r.checks.iter().filter(|c| !c.ok).collect::<Vec<_>>());
    let mut zero = mult.clone();
    for m in zero.components.values_mut() {
        *m = MMorphism::zero(&m.src, &m.tgt);
    }
    let bad = MonoidalLevels::constant(&f, &zero, 3);
    assert!(!check_monoidal_levels(&bad).is_ok());
}
