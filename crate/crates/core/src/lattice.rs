//! Subgroups of `Z²` in the canonical two-generator form.
//!
//! Every subgroup `L ⊆ Z²` is generated by `(e1, e2)` and `(e3, 0)`. The triple
//! is made unique by these rules:
//!
//! * rank 0: `(0, 0, 0)`;
//! * rank 2: `e3 > 0` generates `L ∩ (Z × {0})`, `e2 > 0` generates the
//!   projection of `L` to the second coordinate, and `0 <= e1 < e3`;
//! * rank 1 off the horizontal axis: `(a, b, 0)` for the generator with
//!   `a > 0`, or `a = 0` and `b > 0`;
//! * rank 1 on the horizontal axis: `(0, 0, e3)` with `e3 > 0`.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

/// The canonical generators `(e1, e2)` and `(e3, 0)` of a subgroup of `Z²`.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize,
)]
pub struct IndexTriple {
    pub e1: i64,
    pub e2: i64,
    pub e3: i64,
}

impl IndexTriple {
    pub const fn new(e1: i64, e2: i64, e3: i64) -> Self {
        IndexTriple { e1, e2, e3 }
    }
}

impl fmt::Display for IndexTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.e1, self.e2, self.e3)
    }
}

/// A subgroup of `Z²` given by generators, with its canonical form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentLattice {
    gens: Vec<[i64; 2]>,
    canon: IndexTriple,
}

impl ExponentLattice {
    pub fn from_generators(gens: impl IntoIterator<Item = [i64; 2]>) -> Self {
        let gens: Vec<[i64; 2]> = gens.into_iter().collect();
        let canon = canonicalize(&gens);
        ExponentLattice { gens, canon }
    }

    pub fn trivial() -> Self {
        Self::from_generators([])
    }

    pub fn generators(&self) -> &[[i64; 2]] {
        &self.gens
    }

    pub fn canon(&self) -> IndexTriple {
        self.canon
    }

    /// The nonzero canonical generators.
    pub fn basis(&self) -> Vec<[i64; 2]> {
        let IndexTriple { e1, e2, e3 } = self.canon;
        [[e1, e2], [e3, 0]]
            .into_iter()
            .filter(|g| *g != [0, 0])
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.basis().len()
    }

    /// The lattice `k·L`.
    pub fn scaled(&self, k: i64) -> Self {
        Self::from_generators(self.gens.iter().map(|[a, b]| [k * a, k * b]))
    }

    pub fn contains(&self, [x, y]: [i64; 2]) -> bool {
        let IndexTriple { e1, e2, e3 } = self.canon;
        let x_rest = if e2 == 0 {
            if y != 0 {
                return false;
            }
            x
        } else {
            if y % e2 != 0 {
                return false;
            }
            x - (y / e2) * e1
        };
        if e3 == 0 {
            x_rest == 0
        } else {
            x_rest % e3 == 0
        }
    }

    /// The canonical representative of `v + L`: second coordinate in
    /// `[0, |e2|)` when `e2 != 0`, then first coordinate in `[0, e3)` when
    /// `e3 > 0`.
    pub fn reduce(&self, [mut x, mut y]: [i64; 2]) -> [i64; 2] {
        let IndexTriple { e1, e2, e3 } = self.canon;
        if e2 != 0 {
            let k = y.div_euclid(e2);
            x -= k * e1;
            y -= k * e2;
        }
        if e3 != 0 {
            x = x.rem_euclid(e3);
        }
        [x, y]
    }

    /// Generator of the image under `(a, b) -> a + b`.
    pub fn sum_image(&self) -> i64 {
        let IndexTriple { e1, e2, e3 } = self.canon;
        (e1 + e2).abs().gcd(&e3)
    }

    /// Generator of the projection to the first coordinate.
    pub fn first_image(&self) -> i64 {
        self.canon.e1.gcd(&self.canon.e3)
    }

    /// Generator of the projection to the second coordinate.
    pub fn second_image(&self) -> i64 {
        self.canon.e2.abs()
    }
}

impl fmt::Display for ExponentLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let IndexTriple { e1, e2, e3 } = self.canon;
        write!(f, "({e1},{e2}),({e3},0)")
    }
}

/// Row reduction on two columns. A running pivot row carries the gcd of the
/// second coordinates; everything eliminated against it lands on the
/// horizontal axis, whose gcd is `e3`.
fn canonicalize(gens: &[[i64; 2]]) -> IndexTriple {
    let mut pivot: Option<[i128; 2]> = None;
    let mut horizontal: i128 = 0;
    for &[a, b] in gens {
        let row = [a as i128, b as i128];
        if row[1] == 0 {
            horizontal = horizontal.gcd(&row[0]);
            continue;
        }
        let next = match pivot {
            None => row,
            Some(p) => {
                let eg = p[1].extended_gcd(&row[1]);
                let d = eg.gcd;
                let combined = [eg.x * p[0] + eg.y * row[0], d];
                // (row[1]/d)·p − (p[1]/d)·row has zero second coordinate.
                let killed = (row[1] / d) * p[0] - (p[1] / d) * row[0];
                horizontal = horizontal.gcd(&killed);
                combined
            }
        };
        let mut next = if next[1] < 0 {
            [-next[0], -next[1]]
        } else {
            next
        };
        if horizontal != 0 {
            next[0] = next[0].rem_euclid(horizontal);
        }
        pivot = Some(next);
    }
    let e3 = horizontal.abs();
    let canon = match pivot {
        None => [0, 0, e3],
        Some([a, d]) if e3 > 0 => [a.rem_euclid(e3), d, e3],
        Some([a, d]) => {
            if a < 0 {
                [-a, -d, 0]
            } else {
                [a, d, 0]
            }
        }
    };
    let narrow = |v: i128| i64::try_from(v).expect("lattice index exceeds i64");
    IndexTriple::new(narrow(canon[0]), narrow(canon[1]), narrow(canon[2]))
}
