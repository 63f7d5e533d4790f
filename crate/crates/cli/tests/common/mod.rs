#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use skeinlab::{ClassLabel, HomologyClass2, ManifoldModel, Move, MoveTrace};

pub fn builtins() -> Vec<ManifoldModel> {
    [
        ("S3", vec![]),
        ("S2xS1", vec![]),
        ("T3", vec![]),
        ("lens", vec![5, 1]),
        ("handlebody", vec![2]),
    ]
    .into_iter()
    .map(|(n, p)| ManifoldModel::builtin(n, &p).unwrap())
    .collect()
}

pub fn data_path(name: &str) -> String {
    format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

pub fn random_class(m: &ManifoldModel, rng: &mut ChaCha8Rng) -> ClassLabel {
    if !m.classes.is_empty() && (m.n == 0 || rng.gen_bool(0.5)) {
        return m.classes.choose(rng).unwrap().clone();
    }
    ClassLabel::from_vector((0..m.n).map(|_| rng.gen_range(-3..=3)).collect())
}

/// A random integer combination of the torus generators of `c`.
pub fn random_slide_class(
    m: &ManifoldModel,
    c: &ClassLabel,
    rng: &mut ChaCha8Rng,
) -> HomologyClass2 {
    let mut t = vec![0i64; m.m];
    for g in m.torus_subgroup(c) {
        let k: i64 = rng.gen_range(-2..=2);
        for (x, y) in t.iter_mut().zip(&g.0) {
            *x += k * y;
        }
    }
    HomologyClass2(t)
}

pub fn random_move(m: &ManifoldModel, comps: &[ClassLabel], rng: &mut ChaCha8Rng) -> Move {
    let n = comps.len();
    let i = rng.gen_range(0..n);
    let s = if rng.gen_bool(0.5) { 1 } else { -1 };
    match rng.gen_range(0..4) {
        0 => Move::Twist { i, s },
        1 => Move::SelfCross { i, s },
        2 if n >= 2 => {
            let mut j = rng.gen_range(0..n - 1);
            if j >= i {
                j += 1;
            }
            Move::MixedCross { i, j, s }
        }
        _ => Move::Slide {
            i,
            t: random_slide_class(m, &comps[i], rng),
        },
    }
}

pub fn random_trace(m: &ManifoldModel, rng: &mut ChaCha8Rng) -> MoveTrace {
    let size = rng.gen_range(1..=3);
    let comps: Vec<ClassLabel> = (0..size).map(|_| random_class(m, rng)).collect();
    let moves = (0..rng.gen_range(0..=8))
        .map(|_| random_move(m, &comps, rng))
        .collect();
    MoveTrace::new(comps, moves)
}
