//! Acceptance suite: one pass/fail line per criterion, non-zero exit on any
//! failure. Runs without the libtest harness so the report is always shown.

mod common;

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::process::Command;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use skeinlab::laurent::{LaurentPoly1, LaurentPoly2};
use skeinlab::skein::{self, Freeness};
use skeinlab::{
    Coefficient, ExponentLattice, IndexTriple, LinkClass, ManifoldModel, ModuleTag, Move,
    MoveTrace, SkeinElement,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn s2xs1() -> ManifoldModel {
    ManifoldModel::builtin("S2xS1", &[]).unwrap()
}

fn poly2(s: &str) -> LaurentPoly2 {
    s.parse().unwrap()
}

fn err(e: skeinlab::Error) -> String {
    e.to_string()
}

// 1. Worked example on S2 x S1.
fn worked_example() -> Outcome {
    let m = s2xs1();
    let a = LinkClass::from_vectors([vec![1], vec![2]]);
    let ep = skein::epsilon_prime(&m, &a).map_err(err)?;
    ensure!(
        ep == IndexTriple {
            e1: 2,
            e2: 1,
            e3: 3
        },
        "eps'([1,2]) = {ep}"
    );
    let rel = skein::summand(&m, &a, ModuleTag::Sprime)
        .map_err(err)?
        .relations;
    let want = vec![
        Coefficient::Two(poly2("q1^4*q2^2 - 1")),
        Coefficient::Two(poly2("q1^6 - 1")),
    ];
    ensure!(rel == want, "summand([1,2]) = {rel:?}");

    for r in 1..=6i64 {
        let a = LinkClass::from_vectors(vec![vec![1]; r as usize]);
        let ep = skein::epsilon_prime(&m, &a).map_err(err)?;
        // A single component spans {(1,0)}, a lattice on the horizontal axis,
        // which the normal form stores in the third slot.
        let want = if r == 1 {
            IndexTriple {
                e1: 0,
                e2: 0,
                e3: 1,
            }
        } else {
            IndexTriple {
                e1: 1,
                e2: r - 1,
                e3: 0,
            }
        };
        ensure!(ep == want, "eps'(r={r}) = {ep}");
        let lat = ExponentLattice::from_generators([[1, r - 1]]);
        ensure!(
            ep == lat.canon(),
            "eps'(r={r}) = {ep} is not the lattice of (1,{})",
            r - 1
        );
        let rel = skein::summand(&m, &a, ModuleTag::Sprime)
            .map_err(err)?
            .relations;
        let want = vec![Coefficient::Two(LaurentPoly2::binomial_minus_one([
            2,
            2 * (r - 1),
        ]))];
        ensure!(rel == want, "summand(r={r}) = {rel:?}");
    }

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..50 {
        let size = rng.gen_range(1..=4);
        let v: Vec<i64> = (0..size).map(|_| rng.gen_range(-5..=5)).collect();
        let a = LinkClass::from_vectors(v.iter().map(|&x| vec![x]));
        let eps = skein::epsilon(&m, &a).map_err(err)?;
        let sum: i64 = v.iter().sum();
        ensure!(
            eps == sum.abs(),
            "epsilon({v:?}) = {eps}, expected {}",
            sum.abs()
        );
    }
    Ok("(2,1,3), r=1..6 family, 50 random epsilons".into())
}

// 2. Torsion of x_[k] in S.
fn torsion() -> Outcome {
    let m = s2xs1();
    let mut checked = 0;
    for k in (-6i64..=6).filter(|&k| k != 0) {
        let x = SkeinElement::basis(&m, LinkClass::from_vectors([vec![k]]), ModuleTag::S);
        let kill = Coefficient::One(LaurentPoly1::binomial_minus_one([2 * k]));
        let prod = skein::element_scale(&m, &kill, &x).map_err(err)?;
        ensure!(prod.is_zero(), "(q^{} - 1) x_[{k}] = {prod}", 2 * k);
        for kp in (1..k.abs()).filter(|kp| k % kp != 0) {
            let p = Coefficient::One(LaurentPoly1::binomial_minus_one([2 * kp]));
            let prod = skein::element_scale(&m, &p, &x).map_err(err)?;
            ensure!(!prod.is_zero(), "(q^{} - 1) kills x_[{k}]", 2 * kp);
            checked += 1;
        }
    }
    Ok(format!("12 annihilators, {checked} non-annihilators"))
}

// 3. Specialization commutes with reduction.
fn specialization() -> Outcome {
    let models = common::builtins();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for n in 0..200 {
        let m = &models[n % models.len()];
        let tr = common::random_trace(m, &mut rng);
        let (_, top) = skein::trace_evaluate(m, &tr).map_err(err)?;
        for tag in [ModuleTag::S, ModuleTag::L, ModuleTag::W] {
            let down = skein::element_specialize(m, &top, tag).map_err(err)?;
            let direct = skein::trace_evaluate_in(m, &tr, tag).map_err(err)?;
            ensure!(
                down == direct,
                "{} {tag}: specialize-then-reduce {down} vs {direct} for {tr:?}",
                m.name
            );
        }
    }
    Ok("200 traces x {s, l, w}".into())
}

// 4. Torus self-writhe index against the sphere index.
fn sphere_index() -> Outcome {
    let m = s2xs1();
    let classes: Vec<Vec<i64>> = (-5..=5).map(|k| vec![k]).collect();
    let mut count = 0;
    let mut stack: Vec<(usize, Vec<Vec<i64>>)> = vec![(0, vec![])];
    while let Some((start, cur)) = stack.pop() {
        let a = LinkClass::from_vectors(cur.clone());
        let ix = skein::indices(&m, &a).map_err(err)?;
        ensure!(
            ix.torus_self == ix.mu,
            "alpha {a}: gcd(e1,e3)={} mu={}",
            ix.torus_self,
            ix.mu
        );
        count += 1;
        if cur.len() < 3 {
            for (i, c) in classes.iter().enumerate().skip(start) {
                let mut next = cur.clone();
                next.push(c.clone());
                stack.push((i, next));
            }
        }
    }
    Ok(format!("{count} multisets"))
}

/// Brute-force lattice membership: the span of the generators contains
/// `D * Z^2` for any nonzero 2x2 minor `D`, so membership is decided by a
/// breadth-first closure on the finite torus `(Z/D)^2`. Collinear generator
/// sets reduce to the same closure on a line.
struct Oracle {
    kind: OracleKind,
}

enum OracleKind {
    Zero,
    Line {
        dir: [i64; 2],
        modulus: i64,
        reach: HashSet<i64>,
    },
    Plane {
        modulus: i64,
        reach: HashSet<[i64; 2]>,
    },
}

impl Oracle {
    fn new(gens: &[[i64; 2]]) -> Self {
        let nonzero: Vec<[i64; 2]> = gens.iter().copied().filter(|g| *g != [0, 0]).collect();
        if nonzero.is_empty() {
            return Oracle {
                kind: OracleKind::Zero,
            };
        }
        let minor = nonzero
            .iter()
            .flat_map(|a| nonzero.iter().map(move |b| a[0] * b[1] - a[1] * b[0]))
            .find(|&d| d != 0);
        let kind = match minor {
            Some(d) => {
                let md = d.abs();
                let norm = |p: [i64; 2]| [p[0].rem_euclid(md), p[1].rem_euclid(md)];
                let reach = closure([0, 0], &nonzero, |p, g| norm([p[0] + g[0], p[1] + g[1]]));
                OracleKind::Plane { modulus: md, reach }
            }
            None => {
                let g = nonzero[0];
                let c = num_integer::gcd(g[0], g[1]);
                let dir = [g[0] / c, g[1] / c];
                let coord = |p: [i64; 2]| {
                    if dir[0] != 0 {
                        p[0] / dir[0]
                    } else {
                        p[1] / dir[1]
                    }
                };
                let steps: Vec<i64> = nonzero.iter().map(|&p| coord(p)).collect();
                let md = steps[0].abs();
                let reach = closure(0, &steps, |x, s| (x + s).rem_euclid(md));
                OracleKind::Line {
                    dir,
                    modulus: md,
                    reach,
                }
            }
        };
        Oracle { kind }
    }

    fn contains(&self, p: [i64; 2]) -> bool {
        match &self.kind {
            OracleKind::Zero => p == [0, 0],
            OracleKind::Plane { modulus, reach } => {
                reach.contains(&[p[0].rem_euclid(*modulus), p[1].rem_euclid(*modulus)])
            }
            OracleKind::Line {
                dir,
                modulus,
                reach,
            } => {
                if p[0] * dir[1] != p[1] * dir[0] {
                    return false;
                }
                let t = if dir[0] != 0 {
                    p[0] / dir[0]
                } else {
                    p[1] / dir[1]
                };
                reach.contains(&t.rem_euclid(*modulus))
            }
        }
    }
}

fn closure<T, S>(start: T, steps: &[S], step: impl Fn(T, S) -> T) -> HashSet<T>
where
    T: Copy + Eq + std::hash::Hash,
    S: Copy,
{
    let mut seen = HashSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(p) = queue.pop_front() {
        for &s in steps {
            let q = step(p, s);
            if seen.insert(q) {
                queue.push_back(q);
            }
        }
    }
    seen
}

// 5. Lattice membership and coset reduction against the oracle.
fn lattice_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let window: Vec<[i64; 2]> = (-20..=20)
        .flat_map(|x| (-20..=20).map(move |y| [x, y]))
        .collect();
    for _ in 0..500 {
        let gens: Vec<[i64; 2]> = (0..rng.gen_range(0..=4))
            .map(|_| [rng.gen_range(-5..=5), rng.gen_range(-5..=5)])
            .collect();
        let lat = ExponentLattice::from_generators(gens.clone());
        let oracle = Oracle::new(&gens);
        let IndexTriple { e2, e3, .. } = lat.canon();
        let mut reps: BTreeMap<[i64; 2], [i64; 2]> = BTreeMap::new();
        for &p in &window {
            ensure!(
                lat.contains(p) == oracle.contains(p),
                "gens {gens:?}: contains({p:?}) = {}",
                lat.contains(p)
            );
            let r = lat.reduce(p);
            ensure!(
                oracle.contains([p[0] - r[0], p[1] - r[1]]),
                "gens {gens:?}: reduce({p:?}) = {r:?} leaves the coset"
            );
            ensure!(
                (e2 == 0 || (0..e2.abs()).contains(&r[1])) && (e3 == 0 || (0..e3).contains(&r[0])),
                "gens {gens:?}: reduce({p:?}) = {r:?} outside the fundamental domain"
            );
            // Same representative exactly when the oracle puts p and the
            // earlier point with that representative in one coset.
            match reps.get(&r) {
                Some(&q) => ensure!(
                    oracle.contains([p[0] - q[0], p[1] - q[1]]),
                    "gens {gens:?}: {p:?} and {q:?} share {r:?} but differ mod the lattice"
                ),
                None => {
                    reps.insert(r, p);
                }
            }
        }
        let reps: Vec<[i64; 2]> = reps.into_values().collect();
        for (i, a) in reps.iter().enumerate() {
            for b in &reps[i + 1..] {
                ensure!(
                    !oracle.contains([a[0] - b[0], a[1] - b[1]]),
                    "gens {gens:?}: {a:?} and {b:?} are congruent but reduce differently"
                );
            }
        }
    }
    Ok("500 generator sets over [-20,20]^2".into())
}

// 6. Freeness verdicts.
fn freeness() -> Outcome {
    let mut free = vec![
        ManifoldModel::builtin("S3", &[]).unwrap(),
        ManifoldModel::builtin("lens", &[5, 1]).unwrap(),
    ];
    free.extend((0..=3).map(|g| ManifoldModel::builtin("handlebody", &[g]).unwrap()));
    for m in &free {
        for tag in ModuleTag::ALL {
            let v = skein::is_free(m, tag);
            ensure!(v.is_free(), "{} {tag}: expected free, got {v:?}", m.name);
        }
    }
    let s2 = s2xs1();
    let t3 = ManifoldModel::builtin("T3", &[]).unwrap();
    let mut expect: Vec<(&ManifoldModel, ModuleTag, bool)> =
        ModuleTag::ALL.iter().map(|&t| (&s2, t, false)).collect();
    expect.extend(ModuleTag::ALL.iter().map(|&t| (&t3, t, t == ModuleTag::W)));
    for (m, tag, want_free) in expect {
        let v = skein::is_free(m, tag);
        match (&v, want_free) {
            (Freeness::Free, true) => {}
            (
                Freeness::NotFree {
                    surface,
                    class,
                    value,
                },
                false,
            ) => {
                let pool = if tag == ModuleTag::W {
                    m.sphere_gens.clone()
                } else {
                    m.all_torus_generators()
                };
                ensure!(
                    pool.contains(surface),
                    "{} {tag}: witness {surface:?} not a relevant surface",
                    m.name
                );
                let actual = m.pairing_eval(surface, class).map_err(err)?;
                ensure!(
                    actual == *value && actual != 0,
                    "{} {tag}: witness pairing {actual}, reported {value}",
                    m.name
                );
            }
            _ => return Err(format!("{} {tag}: unexpected verdict {v:?}", m.name)),
        }
    }
    Ok("6 free models x 4 modules, S2xS1 and T3 with witnesses".into())
}

// 7. Appending a slide changes the raw writhe by an element of 2 Gamma'.
fn slide_neutrality() -> Outcome {
    let mut models = common::builtins();
    let demo = std::fs::read_to_string(common::data_path("torus_exception.json")).unwrap();
    models.push(ManifoldModel::from_json(&demo).map_err(err)?);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut nontrivial = 0;
    for n in 0..200 {
        let m = &models[n % models.len()];
        let tr = common::random_trace(m, &mut rng);
        let i = rng.gen_range(0..tr.components.len());
        let t = common::random_slide_class(m, &tr.components[i], &mut rng);
        let mut moves = tr.moves.clone();
        moves.push(Move::Slide { i, t });
        let slid = MoveTrace::new(tr.components.clone(), moves);

        let (w0, e0) = skein::trace_evaluate(m, &tr).map_err(err)?;
        let (w1, e1) = skein::trace_evaluate(m, &slid).map_err(err)?;
        ensure!(e0 == e1, "{}: slide changed {e0} into {e1}", m.name);
        let delta = [w1.w1 - w0.w1, w1.w2 - w0.w2];
        let doubled = skein::gamma_prime(m, &tr.alpha()).map_err(err)?.scaled(2);
        ensure!(
            doubled.contains(delta),
            "{}: writhe change {delta:?} outside 2G'",
            m.name
        );
        if delta != [0, 0] {
            nontrivial += 1;
        }
    }
    Ok(format!(
        "200 traces, {nontrivial} with nonzero writhe change"
    ))
}

// 8. Golden table and exit codes of the binary.
fn cli_contract() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_skeinlab");
    let run = |args: &[&str]| {
        Command::new(bin)
            .args(args)
            .output()
            .expect("spawn skeinlab")
    };
    let data = common::data_path;

    let out = run(&[
        "decompose",
        "--manifold",
        &data("s2xs1.json"),
        "--bound",
        "2",
    ]);
    ensure!(
        out.status.success(),
        "decompose failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let golden_path = format!(
        "{}/tests/golden/decompose_s2xs1_b2.txt",
        env!("CARGO_MANIFEST_DIR")
    );
    let golden = std::fs::read(&golden_path).unwrap();
    ensure!(
        out.stdout == golden,
        "decompose output differs from {golden_path}"
    );
    let text = String::from_utf8(golden).unwrap();
    for row in ["(2,1,3)", "(1,1,0)", "R'/(q1^4 q2^2 - 1, q1^6 - 1)"] {
        ensure!(text.contains(row), "golden table lacks {row}");
    }

    let cases: Vec<(Vec<String>, i32, &str)> = vec![
        (
            vec![
                "index".into(),
                "--manifold".into(),
                data("bad_json.json"),
                "--alpha".into(),
                "[1]".into(),
            ],
            2,
            "parse",
        ),
        (
            vec![
                "index".into(),
                "--manifold".into(),
                data("bad_schema.json"),
                "--alpha".into(),
                "[1]".into(),
            ],
            2,
            "schema",
        ),
        (
            vec![
                "index".into(),
                "--manifold".into(),
                "builtin:nowhere".into(),
                "--alpha".into(),
                "[1]".into(),
            ],
            2,
            "builtin",
        ),
        (
            vec![
                "index".into(),
                "--manifold".into(),
                "builtin:S2xS1".into(),
                "--alpha".into(),
                "[1,".into(),
            ],
            2,
            "parse",
        ),
        (vec!["index".into(), "--bogus".into()], 2, "usage"),
        (
            vec![
                "reduce".into(),
                "--manifold".into(),
                "builtin:S2xS1".into(),
                "--trace".into(),
                data("trace_empty.json"),
                "--module".into(),
                "x".into(),
            ],
            2,
            "parse",
        ),
        (
            vec![
                "index".into(),
                "--manifold".into(),
                data("bad_dimension.json"),
                "--alpha".into(),
                "[1]".into(),
            ],
            3,
            "dimension",
        ),
        (
            vec![
                "index".into(),
                "--manifold".into(),
                "builtin:T3".into(),
                "--alpha".into(),
                "[1,0]".into(),
            ],
            3,
            "dimension",
        ),
        (
            vec![
                "reduce".into(),
                "--manifold".into(),
                "builtin:S2xS1".into(),
                "--trace".into(),
                data("trace_bad_index.json"),
            ],
            3,
            "component",
        ),
        (
            vec![
                "reduce".into(),
                "--manifold".into(),
                "builtin:T3".into(),
                "--trace".into(),
                data("trace_slide.json"),
            ],
            3,
            "dimension",
        ),
        (
            vec![
                "index".into(),
                "--manifold".into(),
                data("missing.json"),
                "--alpha".into(),
                "[1]".into(),
            ],
            4,
            "io",
        ),
    ];
    for (args, code, category) in &cases {
        let argv: Vec<&str> = args.iter().map(String::as_str).collect();
        let out = run(&argv);
        let stderr = String::from_utf8_lossy(&out.stderr);
        ensure!(
            out.status.code() == Some(*code),
            "{argv:?}: exit {:?}, expected {code} ({stderr})",
            out.status.code()
        );
        ensure!(
            stderr.starts_with(&format!("error:{category}:")),
            "{argv:?}: stderr {stderr:?}, expected category {category}"
        );
    }
    Ok(format!(
        "golden table byte-identical, {} error paths",
        cases.len()
    ))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("S2xS1 worked example", worked_example),
        ("torsion annihilators", torsion),
        ("specialization commutes with reduction", specialization),
        ("torus and sphere indices agree", sphere_index),
        ("lattice against brute-force oracle", lattice_oracle),
        ("freeness verdicts", freeness),
        ("slide neutrality", slide_neutrality),
        ("CLI golden table and exit codes", cli_contract),
    ];
    let mut failed = 0;
    for (n, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("[PASS] {}. {name}: {detail}", n + 1),
            Err(why) => {
                failed += 1;
                println!("[FAIL] {}. {name}: {why}", n + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
