//! Skein modules of framed oriented links over a [`ManifoldModel`].
//!
//! The two-variable module `S'(M)` is a direct sum over link classes `α` of
//! `R'/(q1^{2e1} q2^{2e2} - 1, q1^{2e3} - 1)` where `(e1, e2, e3)` is the
//! canonical form of the exponent lattice `Γ'(α)`. Such a summand is the
//! group ring of `Z² / 2Γ'(α)`, so a coefficient has a unique normal form:
//! every exponent pair is replaced by its coset representative modulo the
//! doubled lattice.
//!
//! The one-variable modules are images under coefficient maps:
//!
//! | tag | map               | relation           |
//! |-----|-------------------|--------------------|
//! | S   | `q1, q2 -> q`     | `q^{2ε(α)} - 1`    |
//! | L   | `q1 -> 1, q2 -> q`| `q^{2|e2|} - 1`    |
//! | W   | `q1 -> q, q2 -> 1`| `q^{2μ(α)} - 1`    |
//!
//! A link is presented as a [`MoveTrace`]: a multiset of classes plus a
//! sequence of twists, crossing changes and slides starting from the standard
//! link `x_α`. Evaluating the trace gives the relative self-writhe and total
//! linking number `(w1, w2)` and the element `q1^{w1} q2^{w2} x_α`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{ExponentLattice, IndexTriple};
use crate::laurent::{LaurentPoly, LaurentPoly1, LaurentPoly2, SpecializationMap};
use crate::manifold::{render_vec, ClassLabel, HomologyClass1, HomologyClass2, ManifoldModel};

/// Which skein module an element lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ModuleTag {
    /// The two-variable module over `Z[q1^±1, q2^±1]`.
    Sprime,
    /// Writhe module, `q1, q2 -> q`.
    S,
    /// Linking number module, `q1 -> 1, q2 -> q`.
    L,
    /// Self-writhe module, `q1 -> q, q2 -> 1`.
    W,
}

impl ModuleTag {
    pub const ALL: [ModuleTag; 4] = [ModuleTag::Sprime, ModuleTag::S, ModuleTag::L, ModuleTag::W];

    pub fn specialization(self) -> Option<SpecializationMap> {
        match self {
            ModuleTag::Sprime => None,
            ModuleTag::S => Some(SpecializationMap::WRITHE),
            ModuleTag::L => Some(SpecializationMap::LINKING),
            ModuleTag::W => Some(SpecializationMap::SELF_WRITHE),
        }
    }
}

impl fmt::Display for ModuleTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModuleTag::Sprime => "sprime",
            ModuleTag::S => "s",
            ModuleTag::L => "l",
            ModuleTag::W => "w",
        })
    }
}

impl FromStr for ModuleTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sprime" | "s'" => Ok(ModuleTag::Sprime),
            "s" => Ok(ModuleTag::S),
            "l" => Ok(ModuleTag::L),
            "w" => Ok(ModuleTag::W),
            _ => Err(Error::parse(
                "module",
                format!("expected one of sprime, s, l, w; got `{s}`"),
            )),
        }
    }
}

/// A finite multiset of loop classes, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct LinkClass {
    components: Vec<ClassLabel>,
}

impl LinkClass {
    pub fn new(mut components: Vec<ClassLabel>) -> Self {
        components.sort();
        LinkClass { components }
    }

    pub fn empty() -> Self {
        LinkClass::default()
    }

    /// Components given by free coordinates only.
    pub fn from_vectors(vs: impl IntoIterator<Item = Vec<i64>>) -> Self {
        LinkClass::new(vs.into_iter().map(ClassLabel::from_vector).collect())
    }

    pub fn components(&self) -> &[ClassLabel] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Parses the inline form used on the command line: `[1,2]` for `n = 1`,
    /// `[1,0,0; 0,1,0]` for larger `n`, and `[id:beta, id:gamma]` for classes
    /// from the model's table. `[]` is the empty link.
    pub fn parse(spec: &str, model: &ManifoldModel) -> Result<Self> {
        let bad = |msg: String| Error::parse("alpha", format!("{msg} in `{spec}`"));
        let inner = spec
            .trim()
            .strip_prefix('[')
            .and_then(|s| s.strip_suffix(']'))
            .ok_or_else(|| bad("expected a bracketed list".into()))?
            .trim();
        let mut out = Vec::new();
        if inner.is_empty() {
            return Ok(LinkClass::empty());
        }
        let int = |s: &str| -> Result<i64> {
            s.parse::<i64>()
                .map_err(|_| bad(format!("`{s}` is not an integer")))
        };
        let by_id = |id: &str| -> Result<ClassLabel> {
            model
                .class(id)
                .cloned()
                .ok_or_else(|| Error::UnknownClass(id.to_string()))
        };
        for piece in inner.split(';') {
            let items: Vec<&str> = piece.split(',').map(str::trim).collect();
            if items.iter().any(|s| s.is_empty()) {
                return Err(bad("empty entry".into()));
            }
            if model.n == 1 || items.iter().all(|s| s.starts_with("id:")) {
                for item in items {
                    match item.strip_prefix("id:") {
                        Some(id) => out.push(by_id(id.trim())?),
                        None => out.push(ClassLabel::from_vector(vec![int(item)?])),
                    }
                }
            } else {
                let v = items.iter().map(|s| int(s)).collect::<Result<Vec<_>>>()?;
                if v.len() != model.n {
                    return Err(Error::dimension(
                        format!("alpha component {}", render_vec(&v)),
                        model.n,
                        v.len(),
                    ));
                }
                out.push(ClassLabel::from_vector(v));
            }
        }
        Ok(LinkClass::new(out))
    }

    fn total_except(&self, i: usize, n: usize) -> HomologyClass1 {
        let mut sum = vec![0i64; n];
        for (j, c) in self.components.iter().enumerate() {
            if j != i {
                for (s, x) in sum.iter_mut().zip(&c.h.free) {
                    *s += x;
                }
            }
        }
        HomologyClass1::new(sum)
    }
}

impl fmt::Display for LinkClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wide = false;
        let parts: Vec<String> = self
            .components
            .iter()
            .map(|c| {
                if ClassLabel::from_vector(c.h.free.clone()) == *c {
                    wide |= c.h.free.len() != 1;
                    c.id.clone()
                } else {
                    format!("id:{}", c.id)
                }
            })
            .collect();
        write!(f, "[{}]", parts.join(if wide { "; " } else { "," }))
    }
}

/// Relative self-writhe `w1` and total linking number `w2` against the
/// standard link `x_α`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize)]
pub struct WrithePair {
    pub w1: i64,
    pub w2: i64,
}

impl WrithePair {
    pub fn as_array(self) -> [i64; 2] {
        [self.w1, self.w2]
    }
}

impl fmt::Display for WrithePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.w1, self.w2)
    }
}

/// One elementary change of a link. Component indices are 0-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Move {
    /// Add a full twist of sign `s` to the framing of component `i`.
    Twist { i: usize, s: i64 },
    /// Change a self-crossing of component `i` from negative to positive (`s = 1`) or back.
    SelfCross { i: usize, s: i64 },
    /// Change a crossing between components `i` and `j`.
    MixedCross { i: usize, j: usize, s: i64 },
    /// Carry component `i` once around a loop in the free loop space that
    /// sweeps the torus class `t`.
    Slide { i: usize, t: HomologyClass2 },
}

/// A link presented as moves applied to the standard link of a multiset of
/// classes. Component indices refer to `components` in the given order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MoveTrace {
    pub components: Vec<ClassLabel>,
    pub moves: Vec<Move>,
}

impl MoveTrace {
    pub fn new(components: Vec<ClassLabel>, moves: Vec<Move>) -> Self {
        MoveTrace { components, moves }
    }

    pub fn alpha(&self) -> LinkClass {
        LinkClass::new(self.components.clone())
    }

    pub fn validate(&self, model: &ManifoldModel) -> Result<()> {
        for c in &self.components {
            model.check_h1(format!("class {}", c.id), &c.h)?;
        }
        let len = self.components.len();
        let check = |index: usize| {
            if index >= len {
                Err(Error::ComponentIndex {
                    index: index + 1,
                    len,
                })
            } else {
                Ok(())
            }
        };
        for mv in &self.moves {
            match mv {
                Move::Twist { i, .. } | Move::SelfCross { i, .. } => check(*i)?,
                Move::MixedCross { i, j, .. } => {
                    check(*i)?;
                    check(*j)?;
                    if i == j {
                        return Err(Error::SameComponent(i + 1));
                    }
                }
                Move::Slide { i, t } => {
                    check(*i)?;
                    model.check_h2("slide class", t)?;
                    if !model.torus_span_contains(&self.components[*i], t) {
                        return Err(Error::SlideNotSwept {
                            component: i + 1,
                            class: t.0.clone(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// Reads a trace document:
    ///
    /// ```json
    /// { "alpha": [{"id": "beta"}, {"id": "a", "h": [1]}],
    ///   "moves": [{"type": "twist", "i": 1, "s": 1},
    ///             {"type": "mixed_cross", "i": 1, "j": 2, "s": -1},
    ///             {"type": "slide", "i": 2, "t": [1]}] }
    /// ```
    ///
    /// Indices are 1-based; `s` defaults to `+1`. A class reference without
    /// `h` is looked up in the model's class table.
    pub fn from_json(text: &str, model: &ManifoldModel) -> Result<Self> {
        let doc: TraceDocument = serde_json::from_str(text)
            .map_err(|e| Error::parse("trace document", e.to_string()))?;
        let mut problems = Vec::new();
        let mut components = Vec::new();
        for r in doc.alpha {
            match r.h {
                Some(free) => components.push(ClassLabel::new(
                    r.id,
                    HomologyClass1 {
                        free,
                        torsion_tag: r.torsion_tag,
                    },
                )),
                None => match model.class(&r.id) {
                    Some(c) => components.push(c.clone()),
                    None => return Err(Error::UnknownClass(r.id)),
                },
            }
        }
        let mut moves = Vec::new();
        for (k, m) in doc.moves.into_iter().enumerate() {
            let s = m.s.unwrap_or(1);
            if s != 1 && s != -1 {
                problems.push(format!("moves[{k}].s must be +1 or -1, got {s}"));
            }
            let Some(i) = m.i.checked_sub(1) else {
                problems.push(format!("moves[{k}].i is 1-based, got 0"));
                continue;
            };
            let mv = match m.kind.as_str() {
                "twist" => Move::Twist { i, s },
                "self_cross" => Move::SelfCross { i, s },
                "mixed_cross" => match m.j.and_then(|j| j.checked_sub(1)) {
                    Some(j) => Move::MixedCross { i, j, s },
                    None => {
                        problems.push(format!("moves[{k}] needs a 1-based `j`"));
                        continue;
                    }
                },
                "slide" => match m.t {
                    Some(t) => Move::Slide {
                        i,
                        t: HomologyClass2(t),
                    },
                    None => {
                        problems.push(format!("moves[{k}] needs a torus class `t`"));
                        continue;
                    }
                },
                other => {
                    problems.push(format!("moves[{k}].type `{other}` is not a move"));
                    continue;
                }
            };
            moves.push(mv);
        }
        if !problems.is_empty() {
            return Err(Error::Schema(problems));
        }
        Ok(MoveTrace { components, moves })
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TraceDocument {
    alpha: Vec<ClassRef>,
    moves: Vec<MoveDocument>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ClassRef {
    id: String,
    h: Option<Vec<i64>>,
    torsion_tag: Option<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MoveDocument {
    #[serde(rename = "type")]
    kind: String,
    i: usize,
    j: Option<usize>,
    s: Option<i64>,
    t: Option<Vec<i64>>,
}

/// A coefficient in one of the four modules.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Coefficient {
    Two(LaurentPoly2),
    One(LaurentPoly1),
}

impl Coefficient {
    pub fn is_zero(&self) -> bool {
        match self {
            Coefficient::Two(p) => p.is_zero(),
            Coefficient::One(p) => p.is_zero(),
        }
    }

    pub fn one_for(tag: ModuleTag) -> Self {
        match tag {
            ModuleTag::Sprime => Coefficient::Two(LaurentPoly2::one()),
            _ => Coefficient::One(LaurentPoly1::one()),
        }
    }

    fn fits(&self, tag: ModuleTag) -> bool {
        matches!(
            (self, tag),
            (Coefficient::Two(_), ModuleTag::Sprime)
                | (
                    Coefficient::One(_),
                    ModuleTag::S | ModuleTag::L | ModuleTag::W
                )
        )
    }

    pub fn as_two(&self) -> Option<&LaurentPoly2> {
        match self {
            Coefficient::Two(p) => Some(p),
            Coefficient::One(_) => None,
        }
    }

    pub fn as_one(&self) -> Option<&LaurentPoly1> {
        match self {
            Coefficient::One(p) => Some(p),
            Coefficient::Two(_) => None,
        }
    }

    fn term_count(&self) -> usize {
        match self {
            Coefficient::Two(p) => p.len(),
            Coefficient::One(p) => p.len(),
        }
    }
}

impl From<LaurentPoly2> for Coefficient {
    fn from(p: LaurentPoly2) -> Self {
        Coefficient::Two(p)
    }
}

impl From<LaurentPoly1> for Coefficient {
    fn from(p: LaurentPoly1) -> Self {
        Coefficient::One(p)
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficient::Two(p) => write!(f, "{p:#}"),
            Coefficient::One(p) => write!(f, "{p:#}"),
        }
    }
}

impl fmt::Debug for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// The relation module of one summand, as the exponent group quotient it
/// defines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Relation {
    /// Exponent pairs modulo this (already doubled) lattice.
    Lattice(ExponentLattice),
    /// Exponents modulo this non-negative integer; 0 means no relation.
    Cyclic(i64),
}

impl Relation {
    pub fn reduce(&self, c: &Coefficient) -> Result<Coefficient> {
        match (self, c) {
            (Relation::Lattice(l), Coefficient::Two(p)) => {
                Ok(Coefficient::Two(p.map_exponents(|e| l.reduce(e))))
            }
            (Relation::Cyclic(k), Coefficient::One(p)) => {
                Ok(Coefficient::One(reduce_cyclic(p, *k)))
            }
            _ => Err(Error::ModuleMismatch(
                "coefficient ring does not match the relation".into(),
            )),
        }
    }
}

fn reduce_cyclic(p: &LaurentPoly1, modulus: i64) -> LaurentPoly1 {
    if modulus == 0 {
        p.clone()
    } else {
        p.map_exponents(|[a]| [a.rem_euclid(modulus)])
    }
}

/// The relation ideal of a cyclic summand, by generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Summand {
    pub tag: ModuleTag,
    /// Empty when the summand is free.
    pub relations: Vec<Coefficient>,
}

impl Summand {
    pub fn is_free(&self) -> bool {
        self.relations.is_empty()
    }
}

impl fmt::Display for Summand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ring = if self.tag == ModuleTag::Sprime {
            "R'"
        } else {
            "R"
        };
        if self.relations.is_empty() {
            return f.write_str(ring);
        }
        let rels: Vec<String> = self.relations.iter().map(|r| r.to_string()).collect();
        write!(f, "{ring}/({})", rels.join(", "))
    }
}

/// An element of one of the skein modules with finite support, each
/// coefficient in normal form for its class.
#[derive(Clone, PartialEq, Eq)]
pub struct SkeinElement {
    tag: ModuleTag,
    manifold: String,
    terms: BTreeMap<LinkClass, Coefficient>,
}

impl SkeinElement {
    pub fn zero(model: &ManifoldModel, tag: ModuleTag) -> Self {
        SkeinElement {
            tag,
            manifold: model.name.clone(),
            terms: BTreeMap::new(),
        }
    }

    /// The standard link `x_α` with coefficient 1.
    pub fn basis(model: &ManifoldModel, alpha: LinkClass, tag: ModuleTag) -> Self {
        Self::from_terms(model, tag, [(alpha, Coefficient::one_for(tag))])
            .expect("unit coefficient matches its own module")
    }

    /// Builds an element from raw coefficients, reducing each one.
    pub fn from_terms(
        model: &ManifoldModel,
        tag: ModuleTag,
        terms: impl IntoIterator<Item = (LinkClass, Coefficient)>,
    ) -> Result<Self> {
        let mut out = Self::zero(model, tag);
        for (alpha, c) in terms {
            if !c.fits(tag) {
                return Err(Error::ModuleMismatch(format!(
                    "coefficient {c} does not belong to module {tag}"
                )));
            }
            out.accumulate(model, alpha, &c)?;
        }
        Ok(out)
    }

    fn accumulate(
        &mut self,
        model: &ManifoldModel,
        alpha: LinkClass,
        c: &Coefficient,
    ) -> Result<()> {
        let sum = match (self.terms.remove(&alpha), c) {
            (None, c) => c.clone(),
            (Some(Coefficient::Two(a)), Coefficient::Two(b)) => Coefficient::Two(a + b.clone()),
            (Some(Coefficient::One(a)), Coefficient::One(b)) => Coefficient::One(a + b.clone()),
            _ => return Err(Error::ModuleMismatch("mixed coefficient rings".into())),
        };
        let reduced = relation(model, &alpha, self.tag)?.reduce(&sum)?;
        if !reduced.is_zero() {
            self.terms.insert(alpha, reduced);
        }
        Ok(())
    }

    pub fn tag(&self) -> ModuleTag {
        self.tag
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&LinkClass, &Coefficient)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, alpha: &LinkClass) -> Option<&Coefficient> {
        self.terms.get(alpha)
    }
}

impl fmt::Display for SkeinElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (alpha, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            if c.term_count() > 1 {
                write!(f, "({c}) [x_{alpha}]")?;
            } else {
                write!(f, "{c} [x_{alpha}]")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for SkeinElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SkeinElement<{}>({self})", self.tag)
    }
}

// Indices.

/// `Γ'(α)`: for every component `i` and torus generator `t` of its class, the
/// pair `(λ(t, h_i), λ(t, Σ_{j≠i} h_j))`.
pub fn gamma_prime(model: &ManifoldModel, alpha: &LinkClass) -> Result<ExponentLattice> {
    let mut gens = Vec::new();
    for (i, c) in alpha.components().iter().enumerate() {
        model.check_h1(format!("class {}", c.id), &c.h)?;
        let rest = alpha.total_except(i, model.n);
        for t in model.torus_subgroup(c) {
            gens.push([
                model.pairing_eval(&t, &c.h)?,
                model.pairing_eval(&t, &rest)?,
            ]);
        }
    }
    Ok(ExponentLattice::from_generators(gens))
}

pub fn epsilon_prime(model: &ManifoldModel, alpha: &LinkClass) -> Result<IndexTriple> {
    Ok(gamma_prime(model, alpha)?.canon())
}

/// Torus index: generator of the pairings of swept tori with the total class.
pub fn epsilon(model: &ManifoldModel, alpha: &LinkClass) -> Result<i64> {
    Ok(gamma_prime(model, alpha)?.sum_image())
}

/// Sphere index: gcd over components of the smallest positive intersection
/// with a sphere class, 0 when every such intersection vanishes.
pub fn mu_index(model: &ManifoldModel, alpha: &LinkClass) -> Result<i64> {
    let mut g = 0i64;
    for c in alpha.components() {
        for s in model.sphere_subgroup() {
            g = g.gcd(&model.pairing_eval(s, &c.h)?);
        }
    }
    Ok(g)
}

/// All indices of one link class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Indices {
    pub eps_prime: IndexTriple,
    pub eps: i64,
    pub mu: i64,
    /// `|e2|`, the linking number index.
    pub eps2: i64,
    /// `gcd(e1, e3)`, the self-writhe index seen through the torus lattice.
    pub torus_self: i64,
}

pub fn indices(model: &ManifoldModel, alpha: &LinkClass) -> Result<Indices> {
    let g = gamma_prime(model, alpha)?;
    Ok(Indices {
        eps_prime: g.canon(),
        eps: g.sum_image(),
        mu: mu_index(model, alpha)?,
        eps2: g.second_image(),
        torus_self: g.first_image(),
    })
}

/// The exponent quotient defining the summand of `α` in module `tag`.
pub fn relation(model: &ManifoldModel, alpha: &LinkClass, tag: ModuleTag) -> Result<Relation> {
    Ok(match tag {
        ModuleTag::Sprime => Relation::Lattice(gamma_prime(model, alpha)?.scaled(2)),
        ModuleTag::S => Relation::Cyclic(2 * epsilon(model, alpha)?),
        ModuleTag::L => Relation::Cyclic(2 * gamma_prime(model, alpha)?.second_image()),
        ModuleTag::W => Relation::Cyclic(2 * mu_index(model, alpha)?),
    })
}

pub fn summand(model: &ManifoldModel, alpha: &LinkClass, tag: ModuleTag) -> Result<Summand> {
    let relations = match tag {
        ModuleTag::Sprime => {
            let IndexTriple { e1, e2, e3 } = epsilon_prime(model, alpha)?;
            [[2 * e1, 2 * e2], [2 * e3, 0]]
                .into_iter()
                .filter(|e| *e != [0, 0])
                .map(|e| Coefficient::Two(LaurentPoly2::binomial_minus_one(e)))
                .collect()
        }
        _ => {
            let Relation::Cyclic(k) = relation(model, alpha, tag)? else {
                unreachable!("one-variable modules have cyclic relations")
            };
            if k == 0 {
                Vec::new()
            } else {
                vec![Coefficient::One(LaurentPoly1::binomial_minus_one([k]))]
            }
        }
    };
    Ok(Summand { tag, relations })
}

/// Generators of the annihilator of `x_α`; empty when the summand is free.
pub fn torsion_annihilator(
    model: &ManifoldModel,
    alpha: &LinkClass,
    tag: ModuleTag,
) -> Result<Vec<Coefficient>> {
    Ok(summand(model, alpha, tag)?.relations)
}

// Module operations.

fn check_same(a: &SkeinElement, b: &SkeinElement) -> Result<()> {
    if a.tag != b.tag {
        return Err(Error::ModuleMismatch(format!(
            "cannot combine elements of {} and {}",
            a.tag, b.tag
        )));
    }
    if a.manifold != b.manifold {
        return Err(Error::ModuleMismatch(format!(
            "elements over different manifolds `{}` and `{}`",
            a.manifold, b.manifold
        )));
    }
    Ok(())
}

pub fn element_add(
    model: &ManifoldModel,
    a: &SkeinElement,
    b: &SkeinElement,
) -> Result<SkeinElement> {
    check_same(a, b)?;
    let mut out = a.clone();
    for (alpha, c) in &b.terms {
        out.accumulate(model, alpha.clone(), c)?;
    }
    Ok(out)
}

pub fn element_neg(a: &SkeinElement) -> SkeinElement {
    let mut out = a.clone();
    for c in out.terms.values_mut() {
        *c = match c {
            Coefficient::Two(p) => Coefficient::Two(-&*p),
            Coefficient::One(p) => Coefficient::One(-&*p),
        };
    }
    out
}

pub fn element_scale(
    model: &ManifoldModel,
    p: &Coefficient,
    a: &SkeinElement,
) -> Result<SkeinElement> {
    if !p.fits(a.tag) {
        return Err(Error::ModuleMismatch(format!(
            "scalar {p} does not act on module {}",
            a.tag
        )));
    }
    let scaled = a.terms.iter().map(|(alpha, c)| {
        let prod = match (p, c) {
            (Coefficient::Two(x), Coefficient::Two(y)) => Coefficient::Two(x * y),
            (Coefficient::One(x), Coefficient::One(y)) => Coefficient::One(x * y),
            _ => unreachable!("checked by fits"),
        };
        (alpha.clone(), prod)
    });
    let mut out = SkeinElement::zero(model, a.tag);
    out.manifold = a.manifold.clone();
    for (alpha, c) in scaled.collect::<Vec<_>>() {
        out.accumulate(model, alpha, &c)?;
    }
    Ok(out)
}

/// Pushes an element of `S'` to `S`, `L` or `W` along the coefficient map and
/// reduces modulo the target relations.
pub fn element_specialize(
    model: &ManifoldModel,
    a: &SkeinElement,
    target: ModuleTag,
) -> Result<SkeinElement> {
    if a.tag != ModuleTag::Sprime {
        return Err(Error::ModuleMismatch(format!(
            "can only specialize from sprime, not {}",
            a.tag
        )));
    }
    let map = target
        .specialization()
        .ok_or_else(|| Error::ModuleMismatch("specialization target must be s, l or w".into()))?;
    let mut out = SkeinElement::zero(model, target);
    out.manifold = a.manifold.clone();
    for (alpha, c) in &a.terms {
        let p = c.as_two().expect("sprime coefficients have two variables");
        out.accumulate(model, alpha.clone(), &Coefficient::One(p.specialize(map)))?;
    }
    Ok(out)
}

// Traces.

/// The raw writhe pair of a trace: twists add `s` to `w1`, self crossings
/// `2s`, mixed crossings add `2s` to `w2`, and a slide of component `i`
/// along a torus `t` adds `2λ(t, h_i)` and `2λ(t, Σ_{j≠i} h_j)`.
pub fn trace_writhe(model: &ManifoldModel, trace: &MoveTrace) -> Result<WrithePair> {
    trace.validate(model)?;
    let mut w = WrithePair::default();
    for mv in &trace.moves {
        match mv {
            Move::Twist { s, .. } => w.w1 += s,
            Move::SelfCross { s, .. } => w.w1 += 2 * s,
            Move::MixedCross { s, .. } => w.w2 += 2 * s,
            Move::Slide { i, t } => {
                let own = &trace.components[*i].h;
                let mut rest = vec![0i64; model.n];
                for (j, c) in trace.components.iter().enumerate() {
                    if j != *i {
                        for (r, x) in rest.iter_mut().zip(&c.h.free) {
                            *r += x;
                        }
                    }
                }
                w.w1 += 2 * model.pairing_eval(t, own)?;
                w.w2 += 2 * model.pairing_eval(t, &HomologyClass1::new(rest))?;
            }
        }
    }
    Ok(w)
}

/// Evaluates a trace in `S'`: the raw writhe pair and the reduced element
/// `q1^{w1} q2^{w2} x_α`.
pub fn trace_evaluate(
    model: &ManifoldModel,
    trace: &MoveTrace,
) -> Result<(WrithePair, SkeinElement)> {
    let w = trace_writhe(model, trace)?;
    let elem = SkeinElement::from_terms(
        model,
        ModuleTag::Sprime,
        [(
            trace.alpha(),
            Coefficient::Two(LaurentPoly2::monomial(1, w.as_array())),
        )],
    )?;
    Ok((w, elem))
}

/// Evaluates a trace directly in any module, without passing through `S'`.
pub fn trace_evaluate_in(
    model: &ManifoldModel,
    trace: &MoveTrace,
    tag: ModuleTag,
) -> Result<SkeinElement> {
    let w = trace_writhe(model, trace)?;
    let coeff = match tag.specialization() {
        None => Coefficient::Two(LaurentPoly2::monomial(1, w.as_array())),
        Some(map) => Coefficient::One(LaurentPoly1::monomial(1, [map.exponent(w.as_array())])),
    };
    SkeinElement::from_terms(model, tag, [(trace.alpha(), coeff)])
}

// Freeness.

/// Outcome of a freeness check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Freeness {
    Free,
    /// A surface class pairing nontrivially with an `H1` basis class.
    NotFree {
        surface: HomologyClass2,
        class: HomologyClass1,
        value: i64,
    },
}

impl Freeness {
    pub fn is_free(&self) -> bool {
        matches!(self, Freeness::Free)
    }
}

/// A module is free iff every relevant surface (tori for `S'`, `S`, `L`;
/// spheres for `W`) pairs to zero with every `H1` basis class.
pub fn is_free(model: &ManifoldModel, tag: ModuleTag) -> Freeness {
    let surfaces = match tag {
        ModuleTag::W => model.sphere_gens.clone(),
        _ => model.all_torus_generators(),
    };
    for t in surfaces {
        if t.0.len() != model.m {
            continue;
        }
        for k in 0..model.n {
            let e = HomologyClass1::basis(model.n, k);
            let value = model.pair_unchecked(&t.0, &e.free);
            if value != 0 {
                return Freeness::NotFree {
                    surface: t,
                    class: e,
                    value,
                };
            }
        }
    }
    Freeness::Free
}

/// Compares the torus-lattice self-writhe index `gcd(e1, e3)` with the sphere
/// index `μ(α)`. They agree on genuine manifold data; a model whose tables
/// break this gets the pair `(gcd(e1,e3), μ)` back.
pub fn sphere_torus_discrepancy(
    model: &ManifoldModel,
    alpha: &LinkClass,
) -> Result<Option<(i64, i64)>> {
    let ix = indices(model, alpha)?;
    Ok((ix.torus_self != ix.mu).then_some((ix.torus_self, ix.mu)))
}

// Enumeration.

/// All link classes with components whose coordinates lie in `[-bound, bound]`
/// and at most `bound` components, ordered by size and then lexicographically.
pub fn enumerate_link_classes(model: &ManifoldModel, bound: usize) -> Vec<LinkClass> {
    let mut out = vec![LinkClass::empty()];
    if model.n == 0 {
        return out;
    }
    let b = bound as i64;
    let mut classes: Vec<ClassLabel> = Vec::new();
    let mut v = vec![-b; model.n];
    loop {
        classes.push(ClassLabel::from_vector(v.clone()));
        let mut k = model.n;
        loop {
            if k == 0 {
                classes.sort();
                return multisets(&classes, bound, &mut out);
            }
            k -= 1;
            if v[k] < b {
                v[k] += 1;
                break;
            }
            v[k] = -b;
        }
    }
}

fn multisets(classes: &[ClassLabel], max_size: usize, out: &mut Vec<LinkClass>) -> Vec<LinkClass> {
    // Non-decreasing index sequences are exactly the sorted multisets.
    let mut level: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..max_size {
        let mut next = Vec::new();
        for seq in &level {
            let start = seq.last().copied().unwrap_or(0);
            for idx in start..classes.len() {
                let mut s = seq.clone();
                s.push(idx);
                next.push(s);
            }
        }
        for seq in &next {
            out.push(LinkClass {
                components: seq.iter().map(|&i| classes[i].clone()).collect(),
            });
        }
        level = next;
    }
    std::mem::take(out)
}

// Rendered elements.

/// Parses `coef [label] + coef [label] ...` where each coefficient is a
/// monomial or a parenthesized polynomial. Labels are opaque.
pub fn parse_rendered_element<const N: usize>(text: &str) -> Result<Vec<(String, LaurentPoly<N>)>> {
    let bad = |msg: &str| Error::parse("element", format!("{msg} in `{text}`"));
    let mut out = Vec::new();
    let mut rest = text.trim();
    if rest == "0" {
        return Ok(out);
    }
    let mut first = true;
    while !rest.is_empty() {
        let mut sign = 1;
        if !first {
            if let Some(r) = rest.strip_prefix('+') {
                rest = r.trim_start();
            } else if let Some(r) = rest.strip_prefix('-') {
                sign = -1;
                rest = r.trim_start();
            } else {
                return Err(bad("expected `+` between terms"));
            }
        }
        first = false;
        let (coef_text, after) = if let Some(r) = rest.strip_prefix('(') {
            let close = r.find(')').ok_or_else(|| bad("unclosed parenthesis"))?;
            (&r[..close], &r[close + 1..])
        } else {
            let open = rest.find('[').ok_or_else(|| bad("missing `[label]`"))?;
            (&rest[..open], &rest[open..])
        };
        let after = after
            .trim_start()
            .strip_prefix('*')
            .unwrap_or(after)
            .trim_start();
        let after = after.strip_prefix('·').unwrap_or(after).trim_start();
        let after = after
            .strip_prefix('[')
            .ok_or_else(|| bad("missing `[label]`"))?;
        let close = after.find(']').ok_or_else(|| bad("unclosed label"))?;
        // Labels such as x_[1,2] contain brackets; take the outermost match.
        let mut depth = 1;
        let mut end = close;
        for (k, ch) in after.char_indices() {
            match ch {
                '[' => depth += 1,
                ']' => {
                    depth -= 1;
                    if depth == 0 {
                        end = k;
                        break;
                    }
                }
                _ => {}
            }
        }
        let label = after[..end].trim().to_string();
        let coef_text = coef_text.trim().trim_end_matches(['*', '·']).trim();
        let coef: LaurentPoly<N> = if coef_text.is_empty() {
            LaurentPoly::one()
        } else {
            coef_text.parse()?
        };
        let coef = if sign < 0 { -coef } else { coef };
        out.push((label, coef));
        rest = after[end + 1..].trim_start();
    }
    Ok(out)
}

/// Renders terms in the same grammar [`parse_rendered_element`] accepts.
pub fn render_element<const N: usize>(terms: &[(String, LaurentPoly<N>)]) -> String {
    let parts: Vec<String> = terms
        .iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(label, c)| {
            if c.len() > 1 {
                format!("({c:#}) [{label}]")
            } else {
                format!("{c:#} [{label}]")
            }
        })
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}
