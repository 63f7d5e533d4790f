use proptest::prelude::*;

use skeinlab::laurent::{LaurentPoly1, LaurentPoly2};
use skeinlab::skein;
use skeinlab::{
    ClassLabel, Coefficient, HomologyClass2, LinkClass, ManifoldModel, ModuleTag, Move, MoveTrace,
    SkeinElement,
};

fn model(k: usize) -> ManifoldModel {
    match k % 5 {
        0 => ManifoldModel::builtin("S2xS1", &[]),
        1 => ManifoldModel::builtin("T3", &[]),
        2 => ManifoldModel::builtin("S3", &[]),
        3 => ManifoldModel::builtin("lens", &[7, 2]),
        _ => ManifoldModel::builtin("handlebody", &[2]),
    }
    .unwrap()
}

fn class_of(m: &ManifoldModel, raw: &[i64]) -> ClassLabel {
    if m.n == 0 && !m.classes.is_empty() {
        let k = raw[0].rem_euclid(m.classes.len() as i64) as usize;
        return m.classes[k].clone();
    }
    ClassLabel::from_vector(raw[..m.n].to_vec())
}

fn components(m: &ManifoldModel, raws: &[Vec<i64>]) -> Vec<ClassLabel> {
    raws.iter().map(|r| class_of(m, r)).collect()
}

fn raw_components() -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-4i64..=4, 3), 1..=4)
}

fn slide_class(m: &ManifoldModel, c: &ClassLabel, coeffs: &[i64]) -> HomologyClass2 {
    let mut t = vec![0i64; m.m];
    for (g, k) in m.torus_subgroup(c).iter().zip(coeffs.iter().cycle()) {
        for (x, y) in t.iter_mut().zip(&g.0) {
            *x += k * y;
        }
    }
    HomologyClass2(t)
}

fn moves(m: &ManifoldModel, comps: &[ClassLabel], codes: &[(u8, usize, usize, i64)]) -> Vec<Move> {
    let n = comps.len();
    codes
        .iter()
        .map(|&(kind, i, j, s)| {
            let i = i % n;
            let s = if s >= 0 { 1 } else { -1 };
            match kind % 4 {
                0 => Move::Twist { i, s },
                1 => Move::SelfCross { i, s },
                2 if n > 1 => Move::MixedCross {
                    i,
                    j: (i + 1 + j % (n - 1)) % n,
                    s,
                },
                _ => Move::Slide {
                    i,
                    t: slide_class(m, &comps[i], &[s, 2 * s, -s]),
                },
            }
        })
        .collect()
}

fn move_codes() -> impl Strategy<Value = Vec<(u8, usize, usize, i64)>> {
    prop::collection::vec((0u8..4, 0usize..4, 0usize..4, -1i64..=0), 0..8)
}

proptest! {
    #[test]
    fn indices_ignore_component_order(k in 0usize..5, raws in raw_components(), rot in 0usize..4) {
        let m = model(k);
        let comps = components(&m, &raws);
        let mut turned = comps.clone();
        turned.rotate_left(rot % comps.len());
        turned.reverse();
        let a = LinkClass::new(comps);
        let b = LinkClass::new(turned);
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(skein::indices(&m, &a).unwrap(), skein::indices(&m, &b).unwrap());
    }

    #[test]
    fn relations_annihilate_their_summand(k in 0usize..5, raws in raw_components()) {
        let m = model(k);
        let a = LinkClass::new(components(&m, &raws));
        for tag in ModuleTag::ALL {
            let x = SkeinElement::basis(&m, a.clone(), tag);
            for r in skein::torsion_annihilator(&m, &a, tag).unwrap() {
                prop_assert!(skein::element_scale(&m, &r, &x).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn writhe_ignores_move_order(k in 0usize..5, raws in raw_components(), codes in move_codes()) {
        let m = model(k);
        let comps = components(&m, &raws);
        let mv = moves(&m, &comps, &codes);
        let mut rev = mv.clone();
        rev.reverse();
        let fwd = MoveTrace::new(comps.clone(), mv);
        let bwd = MoveTrace::new(comps, rev);
        prop_assert_eq!(skein::trace_writhe(&m, &fwd).unwrap(), skein::trace_writhe(&m, &bwd).unwrap());
    }

    #[test]
    fn inverse_moves_cancel(k in 0usize..5, raws in raw_components(), codes in move_codes()) {
        let m = model(k);
        let comps = components(&m, &raws);
        let mv = moves(&m, &comps, &codes);
        let undo: Vec<Move> = mv.iter().map(|x| match x {
            Move::Twist { i, s } => Move::Twist { i: *i, s: -s },
            Move::SelfCross { i, s } => Move::SelfCross { i: *i, s: -s },
            Move::MixedCross { i, j, s } => Move::MixedCross { i: *i, j: *j, s: -s },
            Move::Slide { i, t } => Move::Slide { i: *i, t: HomologyClass2(t.0.iter().map(|v| -v).collect()) },
        }).collect();
        let both = MoveTrace::new(comps.clone(), mv.into_iter().chain(undo).collect());
        let w = skein::trace_writhe(&m, &both).unwrap();
        prop_assert_eq!((w.w1, w.w2), (0, 0));
    }

    #[test]
    fn slides_are_invisible_after_reduction(k in 0usize..5, raws in raw_components(),
                                           codes in move_codes(), i in 0usize..4,
                                           coeffs in prop::collection::vec(-3i64..=3, 3)) {
        let m = model(k);
        let comps = components(&m, &raws);
        let mv = moves(&m, &comps, &codes);
        let i = i % comps.len();
        let base = MoveTrace::new(comps.clone(), mv.clone());
        let mut slid = mv;
        slid.push(Move::Slide { i, t: slide_class(&m, &comps[i], &coeffs) });
        let slid = MoveTrace::new(comps, slid);
        for tag in ModuleTag::ALL {
            prop_assert_eq!(
                skein::trace_evaluate_in(&m, &base, tag).unwrap(),
                skein::trace_evaluate_in(&m, &slid, tag).unwrap()
            );
        }
    }

    #[test]
    fn specialization_is_a_module_map(k in 0usize..5, raws in raw_components(),
                                      e in prop::array::uniform2(-6i64..=6), c in -3i64..=3) {
        let m = model(k);
        let a = LinkClass::new(components(&m, &raws));
        let p = Coefficient::Two(LaurentPoly2::monomial(c, e) + LaurentPoly2::one());
        let x = SkeinElement::basis(&m, a, ModuleTag::Sprime);
        let px = skein::element_scale(&m, &p, &x).unwrap();
        for tag in [ModuleTag::S, ModuleTag::L, ModuleTag::W] {
            let map = tag.specialization().unwrap();
            let q = Coefficient::One(p.as_two().unwrap().specialize(map));
            let lhs = skein::element_specialize(&m, &px, tag).unwrap();
            let rhs = skein::element_scale(&m, &q, &skein::element_specialize(&m, &x, tag).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn sum_of_opposites_vanishes() {
    let m = model(0);
    let a = LinkClass::from_vectors([vec![2], vec![-1]]);
    let x = SkeinElement::from_terms(
        &m,
        ModuleTag::S,
        [(a, Coefficient::One(LaurentPoly1::monomial(5, [3])))],
    )
    .unwrap();
    assert!(skein::element_add(&m, &x, &skein::element_neg(&x))
        .unwrap()
        .is_zero());
}
