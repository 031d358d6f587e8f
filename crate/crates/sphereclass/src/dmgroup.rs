//! Reflection generators of the diffeomorphism-induced automorphism group,
//! the reduction algorithm for rational classes, bounded orbit closure inside
//! the exceptional window, and the case-by-case reduction of ruled classes.

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use once_cell::sync::Lazy;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{Class, LatticeError, Manifold, RationalClass, RuledClass};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoveError {
    #[error("move {0} has an index outside 1..={1}")]
    IndexOutOfRange(String, usize),
    #[error("move {0} needs distinct indices")]
    RepeatedIndex(String),
    #[error("move {0} does not act on {1} classes")]
    WrongFamily(String, &'static str),
    #[error("unknown move kind `{0}` or wrong number of indices")]
    Unknown(String),
    #[error("reflection class must have square -1 or -2, got {0}")]
    BadRoot(BigInt),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("classes have different k ({0} vs {1}); embed them first")]
    DifferentK(usize, usize),
}

/// One generator. Indices are 1-based, matching `E_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "MoveRecord", into = "MoveRecord")]
pub enum Move {
    /// `A -> -A`; realized by complex conjugation.
    NegateAll,
    /// Reflection along `E_i` on a rational class.
    FlipE(usize),
    /// Reflection along `E_i - E_j`.
    SwapE(usize, usize),
    /// Reflection along `H - E_i - E_j - E_k`.
    Cremona(usize, usize, usize),
    /// Reflection along the exceptional class `H - E_i - E_j`.
    Line(usize, usize),
    /// Reflection along `E_i` on a ruled class.
    RuledFlip(usize),
    /// Reflection along `F - E_i - E_j`.
    RuledCremona(usize, usize),
}

#[derive(Serialize, Deserialize)]
struct MoveRecord {
    kind: String,
    indices: Vec<usize>,
}

impl From<Move> for MoveRecord {
    fn from(m: Move) -> Self {
        MoveRecord {
            kind: m.kind().to_string(),
            indices: m.indices(),
        }
    }
}

impl TryFrom<MoveRecord> for Move {
    type Error = MoveError;
    fn try_from(r: MoveRecord) -> Result<Self, MoveError> {
        let ix = &r.indices;
        Ok(match (r.kind.as_str(), ix.len()) {
            ("NegateAll", 0) => Move::NegateAll,
            ("FlipE", 1) => Move::FlipE(ix[0]),
            ("SwapE", 2) => Move::SwapE(ix[0], ix[1]),
            ("Cremona", 3) => Move::Cremona(ix[0], ix[1], ix[2]),
            ("Line", 2) => Move::Line(ix[0], ix[1]),
            ("RuledFlip", 1) => Move::RuledFlip(ix[0]),
            ("RuledCremona", 2) => Move::RuledCremona(ix[0], ix[1]),
            _ => return Err(MoveError::Unknown(r.kind)),
        })
    }
}

impl std::fmt::Display for Move {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let ix: Vec<String> = self.indices().iter().map(|i| i.to_string()).collect();
        write!(f, "{}({})", self.kind(), ix.join(","))
    }
}

impl Move {
    pub fn kind(&self) -> &'static str {
        match self {
            Move::NegateAll => "NegateAll",
            Move::FlipE(_) => "FlipE",
            Move::SwapE(..) => "SwapE",
            Move::Cremona(..) => "Cremona",
            Move::Line(..) => "Line",
            Move::RuledFlip(_) => "RuledFlip",
            Move::RuledCremona(..) => "RuledCremona",
        }
    }

    pub fn indices(&self) -> Vec<usize> {
        match *self {
            Move::NegateAll => vec![],
            Move::FlipE(i) | Move::RuledFlip(i) => vec![i],
            Move::SwapE(i, j) | Move::Line(i, j) | Move::RuledCremona(i, j) => vec![i, j],
            Move::Cremona(i, j, l) => vec![i, j, l],
        }
    }

    fn check(&self, k: usize, ruled: bool) -> Result<(), MoveError> {
        let family_ok = match self {
            Move::NegateAll | Move::FlipE(_) | Move::Cremona(..) | Move::Line(..) => !ruled,
            Move::RuledFlip(_) | Move::RuledCremona(..) => ruled,
            Move::SwapE(..) => true,
        };
        if !family_ok {
            let fam = if ruled { "ruled" } else { "rational" };
            return Err(MoveError::WrongFamily(self.to_string(), fam));
        }
        let ix = self.indices();
        if ix.iter().any(|&i| i == 0 || i > k) {
            return Err(MoveError::IndexOutOfRange(self.to_string(), k));
        }
        let distinct: HashSet<_> = ix.iter().collect();
        if distinct.len() != ix.len() {
            return Err(MoveError::RepeatedIndex(self.to_string()));
        }
        Ok(())
    }

    /// The class this move reflects along, if it is a reflection.
    pub fn root(&self, m: &Manifold) -> Option<Class> {
        let k = m.k();
        let rat = |a: i64, ix: &[usize], coef: i64| {
            let mut c = RationalClass::<BigInt>::zero(k);
            c.a = BigInt::from(a);
            for &i in ix {
                c.b[i - 1] = BigInt::from(coef);
            }
            Class::Rational(c)
        };
        let rul = |f: i64, ix: &[(usize, i64)]| {
            let mut c = RuledClass::<BigInt>::zero(k);
            c.f = BigInt::from(f);
            for &(i, v) in ix {
                c.c[i - 1] = BigInt::from(v);
            }
            Class::Ruled(c)
        };
        match (*self, m) {
            (Move::NegateAll, _) => None,
            (Move::FlipE(i), Manifold::Rational { .. }) => Some(rat(0, &[i], -1)),
            (Move::Cremona(i, j, l), Manifold::Rational { .. }) => Some(rat(1, &[i, j, l], 1)),
            (Move::Line(i, j), Manifold::Rational { .. }) => Some(rat(1, &[i, j], 1)),
            (Move::SwapE(i, j), Manifold::Rational { .. }) => {
                let mut c = RationalClass::<BigInt>::zero(k);
                c.b[i - 1] = BigInt::from(-1);
                c.b[j - 1] = BigInt::from(1);
                Some(Class::Rational(c))
            }
            (Move::SwapE(i, j), Manifold::Ruled { .. }) => Some(rul(0, &[(i, 1), (j, -1)])),
            (Move::RuledFlip(i), Manifold::Ruled { .. }) => Some(rul(0, &[(i, 1)])),
            (Move::RuledCremona(i, j), Manifold::Ruled { .. }) => Some(rul(1, &[(i, -1), (j, -1)])),
            _ => None,
        }
    }
}

/// Applies one move to a rational class.
pub fn apply_rational(a: &RationalClass, mv: &Move) -> Result<RationalClass, MoveError> {
    mv.check(a.k(), false)?;
    let mut x = a.clone();
    apply_rational_in_place(&mut x, mv);
    Ok(x)
}

fn apply_rational_in_place(x: &mut RationalClass, mv: &Move) {
    match *mv {
        Move::NegateAll => {
            x.a = -&x.a;
            for v in x.b.iter_mut() {
                *v = -&*v;
            }
        }
        Move::FlipE(i) => x.b[i - 1] = -&x.b[i - 1],
        Move::SwapE(i, j) => x.b.swap(i - 1, j - 1),
        Move::Cremona(i, j, l) => {
            let d = &x.a - &x.b[i - 1] - &x.b[j - 1] - &x.b[l - 1];
            x.a += &d;
            x.b[i - 1] += &d;
            x.b[j - 1] += &d;
            x.b[l - 1] += &d;
        }
        Move::Line(i, j) => {
            let p = (&x.a - &x.b[i - 1] - &x.b[j - 1]) * 2;
            x.a += &p;
            x.b[i - 1] += &p;
            x.b[j - 1] += &p;
        }
        Move::RuledFlip(_) | Move::RuledCremona(..) => unreachable!("checked by Move::check"),
    }
}

/// Applies one move to a ruled class.
pub fn apply_ruled(a: &RuledClass, mv: &Move) -> Result<RuledClass, MoveError> {
    mv.check(a.k(), true)?;
    let mut x = a.clone();
    match *mv {
        Move::SwapE(i, j) => x.c.swap(i - 1, j - 1),
        Move::RuledFlip(i) => x.c[i - 1] = -&x.c[i - 1],
        Move::RuledCremona(i, j) => {
            let p = &x.s + &x.c[i - 1] + &x.c[j - 1];
            x.f += &p;
            x.c[i - 1] -= &p;
            x.c[j - 1] -= &p;
        }
        _ => unreachable!("checked by Move::check"),
    }
    Ok(x)
}

pub fn apply(a: &Class, mv: &Move) -> Result<Class, MoveError> {
    Ok(match a {
        Class::Rational(x) => Class::Rational(apply_rational(x, mv)?),
        Class::Ruled(x) => Class::Ruled(apply_ruled(x, mv)?),
    })
}

/// Replays a move list from left to right.
pub fn replay(a: &Class, moves: &[Move]) -> Result<Class, MoveError> {
    let mut x = a.clone();
    for m in moves {
        x = apply(&x, m)?;
    }
    Ok(x)
}

pub fn replay_rational(a: &RationalClass, moves: &[Move]) -> Result<RationalClass, MoveError> {
    let mut x = a.clone();
    for m in moves {
        x = apply_rational(&x, m)?;
    }
    Ok(x)
}

/// `R_C(A) = A - 2 (A.C)/(C.C) C` for `C.C` in `{-1, -2}`.
pub fn reflect(a: &Class, c: &Class, m: &Manifold) -> Result<Class, MoveError> {
    a.check(m)?;
    c.check(m)?;
    let sq = c.dot(c);
    let p = a.dot(c);
    let factor = if sq == BigInt::from(-1) {
        p * 2
    } else if sq == BigInt::from(-2) {
        p
    } else {
        return Err(MoveError::BadRoot(sq));
    };
    Ok(a.add(&c.scaled(&factor)))
}

fn b_at(x: &RationalClass, i: usize) -> BigInt {
    x.b.get(i).cloned().unwrap_or_else(BigInt::zero)
}

fn top3_sum(x: &RationalClass) -> BigInt {
    b_at(x, 0) + b_at(x, 1) + b_at(x, 2)
}

fn top3_sq(x: &RationalClass) -> BigInt {
    (0..3).map(|i| b_at(x, i)).map(|v| &v * &v).sum()
}

/// `b_1 >= .. >= b_k >= 0` and `a >= b_1 + b_2 + b_3` (missing terms are zero).
pub fn is_reduced(a: &RationalClass) -> bool {
    let sorted = a.b.windows(2).all(|w| w[0] >= w[1]);
    let nonneg = a.b.last().is_none_or(|v| !v.is_negative());
    sorted && nonneg && a.a >= top3_sum(a)
}

/// True when `a >= 0` and `b` is sorted descending and non-negative.
pub fn is_normalized(a: &RationalClass) -> bool {
    !a.a.is_negative()
        && a.b.windows(2).all(|w| w[0] >= w[1])
        && a.b.last().is_none_or(|v| !v.is_negative())
}

/// `b_1^2+b_2^2+b_3^2 + A.A <= a^2 <= 3/4 (b_1^2+b_2^2+b_3^2)`.
pub fn in_window(a: &RationalClass) -> bool {
    let t = top3_sq(a);
    let a2 = &a.a * &a.a;
    let sq = a.square();
    &t + &sq <= a2 && a2 * 4 <= t * 3
}

/// Sign and order normalization: `a >= 0`, every `b_i >= 0`, `b` descending.
pub fn normalize(a: &RationalClass) -> (RationalClass, Vec<Move>) {
    let mut x = a.clone();
    let mut moves = Vec::new();
    normalize_in_place(&mut x, &mut moves);
    (x, moves)
}

fn normalize_in_place(x: &mut RationalClass, moves: &mut Vec<Move>) {
    if x.a.is_negative() {
        apply_rational_in_place(x, &Move::NegateAll);
        moves.push(Move::NegateAll);
    }
    for i in 0..x.k() {
        if x.b[i].is_negative() {
            let mv = Move::FlipE(i + 1);
            apply_rational_in_place(x, &mv);
            moves.push(mv);
        }
    }
    for i in 0..x.k() {
        let mut best = i;
        for j in i + 1..x.k() {
            if x.b[j] > x.b[best] {
                best = j;
            }
        }
        if best != i {
            let mv = Move::SwapE(i + 1, best + 1);
            apply_rational_in_place(x, &mv);
            moves.push(mv);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ReductionStatus {
    Reduced,
    ExceptionalWindow,
    SmallK,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReductionResult {
    pub result: RationalClass,
    pub moves: Vec<Move>,
    pub status: ReductionStatus,
}

/// Runs the reduction algorithm.
///
/// Each pass normalizes signs and order, stops if the class is reduced, lies
/// in the exceptional window, or `k <= 2`, and otherwise reflects along
/// `H - E_1 - E_2 - E_3`. For `k = 2` the exceptional class `H - E_1 - E_2`
/// is used instead while it strictly lowers `a`; the status is still `SmallK`.
///
/// # Panics
/// If a reflection step fails to strictly decrease `a`.
pub fn reduce(a: &RationalClass) -> ReductionResult {
    let k = a.k();
    let mut x = a.clone();
    let mut moves = Vec::new();
    let mut last_a: Option<BigInt> = None;
    loop {
        normalize_in_place(&mut x, &mut moves);
        if let Some(prev) = &last_a {
            assert!(
                x.a < *prev,
                "reduction measure did not decrease: {} -> {}",
                prev,
                x.a
            );
        }
        if is_reduced(&x) {
            return ReductionResult {
                result: x,
                moves,
                status: ReductionStatus::Reduced,
            };
        }
        if k <= 2 {
            if k == 2 {
                let s = &x.b[0] + &x.b[1];
                let twice = &x.a * 2;
                if x.a < s && s < twice {
                    last_a = Some(x.a.clone());
                    apply_rational_in_place(&mut x, &Move::Line(1, 2));
                    moves.push(Move::Line(1, 2));
                    continue;
                }
            }
            return ReductionResult {
                result: x,
                moves,
                status: ReductionStatus::SmallK,
            };
        }
        if in_window(&x) {
            return ReductionResult {
                result: x,
                moves,
                status: ReductionStatus::ExceptionalWindow,
            };
        }
        last_a = Some(x.a.clone());
        apply_rational_in_place(&mut x, &Move::Cremona(1, 2, 3));
        moves.push(Move::Cremona(1, 2, 3));
    }
}

/// Largest absolute coefficient.
pub fn max_abs(a: &RationalClass) -> BigInt {
    a.b.iter()
        .map(|v| v.abs())
        .chain(std::iter::once(a.a.abs()))
        .max()
        .unwrap_or_else(BigInt::zero)
}

#[derive(Debug)]
struct Node {
    class: RationalClass,
    parent: Option<usize>,
    via: Vec<Move>,
}

/// Bounded orbit of a normalized class, as a BFS tree rooted at that class.
///
/// Vertices are normalized classes; an edge is one reflection along
/// `H - E_i - E_j - E_l` or `H - E_i - E_j` applied to some signed version of
/// the vertex, followed by renormalization. Classes with a coefficient above
/// `bound` in absolute value are not visited.
#[derive(Debug)]
pub struct WindowOrbit {
    pub bound: BigInt,
    nodes: Vec<Node>,
    index: HashMap<RationalClass, usize>,
}

impl WindowOrbit {
    pub fn root(&self) -> &RationalClass {
        &self.nodes[0].class
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn members(&self) -> impl Iterator<Item = &RationalClass> {
        self.nodes.iter().map(|n| &n.class)
    }

    pub fn contains(&self, normalized: &RationalClass) -> bool {
        self.index.contains_key(normalized)
    }

    /// Moves taking the root to `target` (which must be normalized).
    pub fn path_to(&self, target: &RationalClass) -> Option<Vec<Move>> {
        let mut at = *self.index.get(target)?;
        let mut chunks = Vec::new();
        while let Some(p) = self.nodes[at].parent {
            chunks.push(&self.nodes[at].via);
            at = p;
        }
        Some(chunks.into_iter().rev().flatten().cloned().collect())
    }
}

fn neighbours(x: &RationalClass) -> Vec<(RationalClass, Vec<Move>)> {
    let k = x.k();
    let mut out = Vec::new();
    let mut seen_triples = HashSet::new();
    let mut seen_pairs = HashSet::new();
    let mut groups: Vec<Vec<usize>> = Vec::new();
    if k >= 3 {
        for i in 0..k {
            for j in i + 1..k {
                for l in j + 1..k {
                    let key = (x.b[i].clone(), x.b[j].clone(), x.b[l].clone());
                    if seen_triples.insert(key) {
                        groups.push(vec![i, j, l]);
                    }
                }
            }
        }
    }
    if k >= 2 {
        for i in 0..k {
            for j in i + 1..k {
                if seen_pairs.insert((x.b[i].clone(), x.b[j].clone())) {
                    groups.push(vec![i, j]);
                }
            }
        }
    }
    for g in groups {
        for negate in [false, true] {
            for mask in 0..(1u32 << g.len()) {
                let mut moves = Vec::new();
                if negate {
                    moves.push(Move::NegateAll);
                }
                for (t, &p) in g.iter().enumerate() {
                    if mask & (1 << t) != 0 {
                        moves.push(Move::FlipE(p + 1));
                    }
                }
                moves.push(match g.as_slice() {
                    [i, j, l] => Move::Cremona(i + 1, j + 1, l + 1),
                    [i, j] => Move::Line(i + 1, j + 1),
                    _ => unreachable!(),
                });
                let mut y = x.clone();
                for m in &moves {
                    apply_rational_in_place(&mut y, m);
                }
                normalize_in_place(&mut y, &mut moves);
                out.push((y, moves));
            }
        }
    }
    out
}

fn build_orbit(root: &RationalClass, bound: &BigInt) -> WindowOrbit {
    let mut orbit = WindowOrbit {
        bound: bound.clone(),
        nodes: vec![Node {
            class: root.clone(),
            parent: None,
            via: vec![],
        }],
        index: HashMap::from([(root.clone(), 0)]),
    };
    let mut queue = VecDeque::from([0usize]);
    while let Some(at) = queue.pop_front() {
        let here = orbit.nodes[at].class.clone();
        for (y, via) in neighbours(&here) {
            if max_abs(&y) > *bound || orbit.index.contains_key(&y) {
                continue;
            }
            let id = orbit.nodes.len();
            orbit.index.insert(y.clone(), id);
            orbit.nodes.push(Node {
                class: y,
                parent: Some(at),
                via,
            });
            queue.push_back(id);
        }
    }
    orbit
}

type OrbitKey = (RationalClass, BigInt);
static ORBIT_CACHE: Lazy<Mutex<HashMap<OrbitKey, Arc<WindowOrbit>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

/// Default closure bound: largest coefficient plus three.
pub fn default_orbit_bound(a: &RationalClass) -> BigInt {
    max_abs(a) + 3
}

/// Bounded orbit closure of the normalization of `a`, memoized per process.
pub fn window_orbit(a: &RationalClass, bound: Option<&BigInt>) -> Arc<WindowOrbit> {
    let (root, _) = normalize(a);
    let bound = bound.cloned().unwrap_or_else(|| default_orbit_bound(&root));
    let key = (root.clone(), bound.clone());
    if let Some(hit) = ORBIT_CACHE.lock().expect("orbit cache poisoned").get(&key) {
        return Arc::clone(hit);
    }
    let orbit = Arc::new(build_orbit(&root, &bound));
    ORBIT_CACHE
        .lock()
        .expect("orbit cache poisoned")
        .insert(key, Arc::clone(&orbit));
    orbit
}

/// Decides equivalence of two rational classes with the same `k`.
///
/// Two reduced outcomes are compared directly. Otherwise the bounded orbit of
/// the first outcome is searched for the second, with bound equal to the
/// largest coefficient of either outcome plus three.
pub fn equivalent(a: &RationalClass, b: &RationalClass) -> Result<bool, MoveError> {
    if a.k() != b.k() {
        return Err(MoveError::DifferentK(a.k(), b.k()));
    }
    if a.square() != b.square() {
        return Ok(false);
    }
    let ra = reduce(a);
    let rb = reduce(b);
    if ra.status == ReductionStatus::Reduced && rb.status == ReductionStatus::Reduced {
        return Ok(ra.result == rb.result);
    }
    let bound = max_abs(&ra.result).max(max_abs(&rb.result)) + 3;
    let orbit = window_orbit(&ra.result, Some(&bound));
    Ok(orbit.contains(&rb.result))
}

/// Standard forms reached by [`reduce_ruled`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "form")]
pub enum RuledForm {
    /// `F - E_1 - .. - E_l`.
    Fiber { l: usize },
    /// `E_1 - E_2 - .. - E_k`.
    Characteristic,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RuledReduction {
    pub result: RuledClass,
    pub moves: Vec<Move>,
    pub form: RuledForm,
}

/// Whether `a` lies in the orbit of the negative-square sphere classes:
/// `s = 0`, every `|c_i| <= 1`, at least one `c_i != 0`, and for `k = 1`
/// also `f` in `{0, 1}`.
pub fn ruled_orbit_member(a: &RuledClass) -> bool {
    let one = BigInt::one();
    if !a.s.is_zero() || a.c.iter().any(|v| v.abs() > one) || a.c.iter().all(|v| v.is_zero()) {
        return false;
    }
    a.k() >= 2 || a.f.is_zero() || a.f.is_one()
}

/// Whether `a` has the sphere shape: `s = 0`, `c_i` in `{-1, 0, 1}`, at least
/// one nonzero, and `f = 1 - #{c_i = 1}`.
pub fn ruled_shape(a: &RuledClass) -> bool {
    if !ruled_orbit_member(a) {
        return false;
    }
    let p = a.c.iter().filter(|v| v.is_one()).count() as i64;
    a.f == BigInt::from(1 - p)
}

struct RuledWalk {
    x: RuledClass,
    moves: Vec<Move>,
}

impl RuledWalk {
    fn step(&mut self, mv: Move) {
        self.x = apply_ruled(&self.x, &mv).expect("generated ruled move is valid");
        self.moves.push(mv);
    }

    fn find(&self, v: i64) -> Vec<usize> {
        let v = BigInt::from(v);
        (0..self.x.k()).filter(|&i| self.x.c[i] == v).collect()
    }

    fn force(&mut self, i: usize, v: i64) {
        if self.x.c[i] != BigInt::from(v) && !self.x.c[i].is_zero() {
            self.step(Move::RuledFlip(i + 1));
        }
    }

    /// Sorts to `(+1, .., -1, .., 0, ..)`.
    fn sort(&mut self) {
        let rank = |v: &BigInt| {
            if v.is_one() {
                0
            } else if v.is_negative() {
                1
            } else {
                2
            }
        };
        let k = self.x.k();
        for i in 0..k {
            let mut best = i;
            for j in i + 1..k {
                if rank(&self.x.c[j]) < rank(&self.x.c[best]) {
                    best = j;
                }
            }
            if best != i {
                self.step(Move::SwapE(i + 1, best + 1));
            }
        }
    }
}

/// Moves an orbit member to its standard form.
///
/// Classes off the sphere shape first have `f` moved into `[1 - l, 1]` with
/// reflections along `F - E_i - E_j`, then signs fixed with reflections along
/// `E_i`. Shape classes are then handled by the number `P` of positive
/// coefficients: pairs of positives are reflected along `F - E_i - E_j` until
/// `P <= 1`; a single positive is either moved to the front (characteristic
/// case) or cancelled against the last vanishing index; finally the `-1`
/// entries are sorted to the front.
pub fn reduce_ruled(a: &RuledClass) -> Option<RuledReduction> {
    if !ruled_orbit_member(a) {
        return None;
    }
    let k = a.k();
    let mut w = RuledWalk {
        x: a.clone(),
        moves: vec![],
    };
    let l = a.c.iter().filter(|v| !v.is_zero()).count() as i64;
    let lo = BigInt::from(1 - l);
    let hi = BigInt::one();
    while w.x.f > hi {
        let neg = w.find(-1);
        let i = match neg.first() {
            Some(&i) => i,
            None => {
                let i = w.find(1)[0];
                w.force(i, -1);
                i
            }
        };
        if let Some(&z) = w.find(0).last() {
            w.step(Move::RuledCremona(i + 1, z + 1));
        } else {
            let j = (0..k)
                .find(|&j| j != i)
                .expect("k >= 2 for orbit members with f > 1");
            w.force(j, -1);
            w.step(Move::RuledCremona(i + 1, j + 1));
        }
    }
    while w.x.f < lo {
        let pos = w.find(1);
        let i = match pos.first() {
            Some(&i) => i,
            None => {
                let i = w.find(-1)[0];
                w.force(i, 1);
                i
            }
        };
        if let Some(&z) = w.find(0).last() {
            w.step(Move::RuledCremona(i + 1, z + 1));
        } else {
            let j = (0..k).find(|&j| j != i).expect("k >= 2 for orbit members");
            w.force(j, 1);
            w.step(Move::RuledCremona(i + 1, j + 1));
        }
    }
    let want_pos = usize::try_from(BigInt::one() - &w.x.f).expect("f lies in [1 - l, 1]");
    loop {
        let pos = w.find(1);
        if pos.len() == want_pos {
            break;
        }
        if pos.len() < want_pos {
            let i = w.find(-1)[0];
            w.step(Move::RuledFlip(i + 1));
        } else {
            w.step(Move::RuledFlip(pos[0] + 1));
        }
    }
    debug_assert!(ruled_shape(&w.x));

    w.sort();
    loop {
        let pos = w.find(1);
        if pos.len() < 2 {
            break;
        }
        w.step(Move::RuledCremona(pos[0] + 1, pos[1] + 1));
    }
    let pos = w.find(1);
    let form = if let Some(&p) = pos.first() {
        if w.find(0).is_empty() {
            if p != 0 {
                w.step(Move::SwapE(1, p + 1));
            }
            w.sort();
            RuledForm::Characteristic
        } else {
            let z = *w.find(0).last().expect("checked nonempty");
            w.step(Move::RuledCremona(p + 1, z + 1));
            w.sort();
            RuledForm::Fiber {
                l: w.find(-1).len(),
            }
        }
    } else {
        w.sort();
        RuledForm::Fiber {
            l: w.find(-1).len(),
        }
    };
    Some(RuledReduction {
        result: w.x,
        moves: w.moves,
        form,
    })
}

/// The literal standard form for `form` in `k` blow-ups.
pub fn ruled_standard_form(form: RuledForm, k: usize) -> RuledClass {
    let mut c = RuledClass::<BigInt>::zero(k);
    match form {
        RuledForm::Fiber { l } => {
            c.f = BigInt::one();
            for v in c.c.iter_mut().take(l) {
                *v = BigInt::from(-1);
            }
        }
        RuledForm::Characteristic => {
            for (i, v) in c.c.iter_mut().enumerate() {
                *v = BigInt::from(if i == 0 { 1 } else { -1 });
            }
        }
    }
    c
}
